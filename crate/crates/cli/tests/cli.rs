use std::path::Path;
use std::process::{Command, Output};

fn cvgkp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvgkp")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn threshold_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "t.cfg", "# anchor\np_ft = 1e-6\n");
    let out = cvgkp(&["threshold", "--config", &cfg, "--seed", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# cvgkp "));
    assert!(lines.contains(&"# seed = 3"));
    assert!(lines.iter().any(|l| l.starts_with("# config_sha256 = ")));
    let data: Vec<&str> = lines.iter().filter(|l| !l.starts_with('#')).copied().collect();
    assert_eq!(data[0], "p_ft,sigma2_star,squeezing_db,p_err_at_star");
    assert_eq!(data.len(), 2);
    let db: f64 = data[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((db - 20.5).abs() < 0.1);
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "a.cfg",
        "experiment = analog_vs_binary\nsigma_min = 0.4\nsigma_max = 0.5\nsigma_step = 0.1\ntrials = 20000\n",
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let out = cvgkp(&["analog_vs_binary", "--config", &cfg, "--seed", seed, "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
}

#[test]
fn trials_override_reaches_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.cfg", "var_data = 0.05\nvar_ancilla = 0.02\ntrials = 10\n");
    let out = cvgkp(&["sqec_chain", "--config", &cfg, "--trials", "500"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("# trials = 500"));
}

#[test]
fn out_key_in_config_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("curve.csv");
    let cfg = write(
        dir.path(),
        "p.cfg",
        &format!("sigma_min = 0.1\nsigma_max = 0.6\nsigma_step = 0.05\nout = {}\n", target.display()),
    );
    let out = cvgkp(&["pfail_curve", "--config", &cfg]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&target).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 12);
}

#[test]
fn schema_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = write(dir.path(), "m.cfg", "alpha = 2\nr = 1\n");
    let out = cvgkp(&["breed", "--config", &missing]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rounds"));

    let unknown = write(dir.path(), "u.cfg", "p_ft = 1e-6\nbogus = 1\n");
    let out = cvgkp(&["threshold", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    let out = cvgkp(&["no_such_experiment", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));

    let out = cvgkp(&["threshold", "--config", &unknown, "--trials", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    // dx·γ·L² far above π/2 aliases the cubic phase
    let cfg = write(dir.path(), "c.cfg", "gamma = 5\nresource_db = 10\nhalf_width = 12\ndx = 0.1\ntrials = 1\n");
    let out = cvgkp(&["cubic", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_config_file_is_reported() {
    let out = cvgkp(&["threshold", "--config", "/nonexistent/cfg"]);
    assert_eq!(out.status.code(), Some(1));
}
