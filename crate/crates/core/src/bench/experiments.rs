use rand::Rng;
use rayon::prelude::*;

use super::{
    analog_vs_binary_mc, audit_against_ml, capacity_point, capacity_rate, p_err_cz, solve_threshold, trial_rng,
    Experiment, ExperimentConfig, Report,
};
use crate::cluster::{
    build_canonical_cluster, chain_nullifiers, nullifier_variances, nullifiers, timemux_1d_chain, ClusterGraph,
};
use crate::fock::{
    breeding_round, commutator_identity_check, cubic_phase_teleport, loglog_slope, quadrature_matrices,
    trotter_product_error, Grid, GridWavefunction, OutcomeChoice,
};
use crate::gaussian::Quadrature;
use crate::gkp::{hrm_sample, hrm_stats, lattice_flip_probability, p_fail, sqec_step, sqec_trajectory, GkpPeakModel};
use crate::{Error, Result};

/// Runs the configured experiment and returns its table.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    match config.experiment {
        Experiment::Threshold => threshold(config),
        Experiment::PfailCurve => pfail_curve(config),
        Experiment::Capacity => capacity(config),
        Experiment::AnalogVsBinary => analog_vs_binary(config),
        Experiment::SqecChain => sqec_chain(config),
        Experiment::HrmSweep => hrm_sweep(config),
        Experiment::ClusterVerify => cluster_verify(config),
        Experiment::DecompCheck => decomp_check(config),
        Experiment::Breed => breed(config),
        Experiment::Cubic => cubic(config),
    }
}

/// Inclusive arithmetic sweep `min, min + step, …, max`, with points
/// rounded to 12 decimals so that the CSV shows the intended grid.
fn sweep(config: &ExperimentConfig, prefix: &str) -> Result<Vec<f64>> {
    let key = |s: &str| format!("{prefix}_{s}");
    let (lo, hi, step) = (config.real(&key("min"))?, config.real(&key("max"))?, config.real(&key("step"))?);
    if !(step > 0.0) {
        return Err(Error::Schema(format!("key `{}` must be positive", key("step"))));
    }
    if hi < lo {
        return Err(Error::Schema(format!("key `{}` is below `{}`", key("max"), key("min"))));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(Error::Schema(format!("key `{}` gives {count} sweep points", key("step"))));
    }
    Ok((0..count).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect())
}

fn threshold(config: &ExperimentConfig) -> Result<Report> {
    let p_ft = config.real("p_ft")?;
    let t = solve_threshold(p_ft)?;
    let mut r = Report::new(&["p_ft", "sigma2_star", "squeezing_db", "p_err_at_star"]);
    r.push(vec![p_ft.into(), t.sigma2_star.into(), t.squeezing_db.into(), p_err_cz(t.sigma2_star)?.into()])?;
    Ok(r)
}

fn pfail_curve(config: &ExperimentConfig) -> Result<Report> {
    let mut r = Report::new(&["sigma", "variance", "p_fail", "p_lattice_flip"]);
    for sigma in sweep(config, "sigma")? {
        let var = sigma * sigma;
        r.push(vec![sigma.into(), var.into(), p_fail(var)?.into(), lattice_flip_probability(var)?.into()])?;
    }
    Ok(r)
}

fn capacity(config: &ExperimentConfig) -> Result<Report> {
    let mut r = Report::new(&["sigma", "p_e", "rate"]);
    for sigma in sweep(config, "sigma")? {
        let var = sigma * sigma;
        r.push(vec![sigma.into(), p_fail(var)?.into(), capacity_rate(var)?.into()])?;
    }
    let c = capacity_point()?;
    r.note("sigma_critical", format!("{:e}", c.sigma));
    r.note("p_e_critical", format!("{:e}", c.p_e));
    Ok(r)
}

fn analog_vs_binary(config: &ExperimentConfig) -> Result<Report> {
    let audit = config.int("audit_trials")?;
    let mut r = Report::new(&[
        "sigma",
        "trials",
        "binary_errors",
        "analog_errors",
        "p_binary",
        "p_binary_lo",
        "p_binary_hi",
        "p_analog",
        "p_analog_lo",
        "p_analog_hi",
        "improvement_z",
        "pattern_disagreements",
        "lattice_disagreements",
    ]);
    for sigma in sweep(config, "sigma")? {
        let d = analog_vs_binary_mc(sigma, config.trials, config.seed)?;
        let ((blo, bhi), (alo, ahi)) = d.intervals();
        let (pattern, lattice) = if audit > 0 {
            let a = audit_against_ml(sigma, audit, config.seed)?;
            (a.pattern_disagreements, a.lattice_disagreements)
        } else {
            (0, 0)
        };
        r.push(vec![
            sigma.into(),
            d.trials.into(),
            d.binary_errors.into(),
            d.analog_errors.into(),
            d.p_binary().into(),
            blo.into(),
            bhi.into(),
            d.p_analog().into(),
            alo.into(),
            ahi.into(),
            d.improvement_z().into(),
            pattern.into(),
            lattice.into(),
        ])?;
    }
    Ok(r)
}

/// Per-trial correction statistics, collected in trial order so that the
/// floating-point sums do not depend on thread scheduling.
#[derive(Clone, Copy)]
struct SqecTally {
    flip: bool,
    corrected2: f64,
    conjugate2: f64,
}

fn sqec_chain(config: &ExperimentConfig) -> Result<Report> {
    let (vd, va) = (config.real("var_data")?, config.real("var_ancilla")?);
    let data = GkpPeakModel::symmetric(vd)?;
    let ancilla = GkpPeakModel::symmetric(va)?;
    let mut r = Report::new(&[
        "quadrature",
        "var_corrected",
        "mc_var_corrected",
        "var_conjugate",
        "mc_var_conjugate",
        "p_flip",
        "mc_p_flip",
        "mc_p_flip_se",
    ]);
    for (label, quad) in [("q", Quadrature::Q), ("p", Quadrature::P)] {
        let (model, p) = sqec_step(&data, &ancilla, quad)?;
        let (want_corr, want_conj) = match quad {
            Quadrature::Q => (model.var_q, model.var_p),
            Quadrature::P => (model.var_p, model.var_q),
        };
        let stream = match quad {
            Quadrature::Q => 0,
            Quadrature::P => config.trials,
        };
        let samples: Vec<SqecTally> = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let s = sqec_trajectory(&data, &ancilla, quad, &mut trial_rng(config.seed, stream + t))?;
                Ok(SqecTally {
                    flip: s.flip,
                    corrected2: s.residual_corrected * s.residual_corrected,
                    conjugate2: s.residual_conjugate * s.residual_conjugate,
                })
            })
            .collect::<Result<_>>()?;
        let n = config.trials as f64;
        let flips = samples.iter().filter(|s| s.flip).count() as f64;
        let corr: f64 = samples.iter().map(|s| s.corrected2).sum::<f64>() / n;
        let conj: f64 = samples.iter().map(|s| s.conjugate2).sum::<f64>() / n;
        r.push(vec![
            label.into(),
            want_corr.into(),
            corr.into(),
            want_conj.into(),
            conj.into(),
            p.into(),
            (flips / n).into(),
            (p * (1.0 - p) / n).sqrt().into(),
        ])?;
    }
    Ok(r)
}

fn hrm_sweep(config: &ExperimentConfig) -> Result<Report> {
    let var = config.real("var")?;
    let mut r = Report::new(&["zeta", "p_accept", "p_err_given_accept", "mc_accept", "mc_err_given_accept"]);
    for (i, zeta) in sweep(config, "zeta")?.into_iter().enumerate() {
        let stats = hrm_stats(var, zeta)?;
        let offset = i as u64 * config.trials;
        let outcomes: Vec<Option<bool>> = (0..config.trials)
            .into_par_iter()
            .map(|t| hrm_sample(var, zeta, &mut trial_rng(config.seed, offset + t)))
            .collect::<Result<_>>()?;
        let accepted = outcomes.iter().filter(|o| o.is_some()).count();
        let errors = outcomes.iter().filter(|o| **o == Some(true)).count();
        let mc_err = if accepted == 0 { f64::NAN } else { errors as f64 / accepted as f64 };
        r.push(vec![
            zeta.into(),
            stats.p_accept.into(),
            stats.p_err_given_accept.into(),
            (accepted as f64 / config.trials as f64).into(),
            mc_err.into(),
        ])?;
    }
    Ok(r)
}

fn cluster_verify(config: &ExperimentConfig) -> Result<Report> {
    let r_sq = config.real("r")?;
    let max_modes = config.int("max_modes")? as usize;
    let edge_prob = config.real("edge_prob")?;
    if max_modes < 1 {
        return Err(Error::Schema("key `max_modes` must be at least 1".into()));
    }
    let target = 0.5 * (-2.0 * r_sq).exp();
    let mut r = Report::new(&["kind", "index", "n_modes", "n_edges", "target", "max_abs_deviation"]);
    let max_dev = |vars: &[f64]| vars.iter().map(|v| (v - target).abs()).fold(0.0, f64::max);
    for g in 0..config.int("graphs")? {
        let mut rng = trial_rng(config.seed, g);
        let n = rng.random_range(1..=max_modes);
        let graph = ClusterGraph::random(n, edge_prob, &mut rng)?;
        let state = build_canonical_cluster(&graph, r_sq)?;
        let vars = nullifier_variances(&state, &nullifiers(&graph))?;
        r.push(vec![
            "graph".into(),
            g.into(),
            n.into(),
            graph.edges().len().into(),
            target.into(),
            max_dev(&vars).into(),
        ])?;
    }
    let pairs = config.int("chain_pairs")? as usize;
    let state = timemux_1d_chain(pairs, r_sq)?;
    let vars = nullifier_variances(&state, &chain_nullifiers(pairs)?)?;
    r.push(vec!["chain".into(), 0u64.into(), (2 * pairs).into(), 0u64.into(), target.into(), max_dev(&vars).into()])?;
    Ok(r)
}

fn decomp_check(config: &ExperimentConfig) -> Result<Report> {
    let dim = config.int("dim")? as usize;
    let t = config.real("t")?;
    let (lo, hi) = (config.int("steps_min")?, config.int("steps_max")?);
    if lo < 1 || hi < lo {
        return Err(Error::Schema("keys `steps_min` and `steps_max` need 1 <= min <= max".into()));
    }
    let (q, p) = quadrature_matrices(dim)?;
    let (a, b) = (q.pow(2), p.pow(2));
    let mut r = Report::new(&["check", "parameter", "value"]);
    let mut steps = Vec::new();
    let mut n = lo;
    while n <= hi {
        steps.push(n);
        n *= 2;
    }
    let errors: Vec<_> = steps
        .par_iter()
        .map(|&n| trotter_product_error(&a, &b, t, n))
        .collect::<Result<_>>()?;
    for (n, e) in steps.iter().zip(&errors) {
        r.push(vec!["trotter_symmetric".into(), format!("n={n}").as_str().into(), e.symmetric.into()])?;
        r.push(vec!["trotter_commutator".into(), format!("n={n}").as_str().into(), e.commutator.into()])?;
    }
    if steps.len() >= 2 {
        let xs: Vec<f64> = steps.iter().map(|&n| n as f64).collect();
        let sym: Vec<f64> = errors.iter().map(|e| e.symmetric).collect();
        let com: Vec<f64> = errors.iter().map(|e| e.commutator).collect();
        r.push(vec!["slope_symmetric".into(), "".into(), loglog_slope(&xs, &sym)?.into()])?;
        r.push(vec!["slope_commutator".into(), "".into(), loglog_slope(&xs, &com)?.into()])?;
    }
    for (m, n) in [(1, 1), (1, 2), (1, 3), (2, 2)] {
        let res = commutator_identity_check(m, n, dim)?;
        let label = format!("m={m};n={n}");
        r.push(vec!["identity_power".into(), label.as_str().into(), res.power.into()])?;
        r.push(vec!["identity_symmetrized".into(), label.as_str().into(), res.symmetrized.into()])?;
    }
    Ok(r)
}

fn breed(config: &ExperimentConfig) -> Result<Report> {
    let grid = Grid::symmetric(config.real("half_width")?, config.real("dx")?)?;
    let res = breeding_round(
        config.real("alpha")?,
        config.real("r")?,
        config.int("rounds")? as usize,
        config.real("epsilon")?,
        grid,
    )?;
    let mut r = Report::new(&["round", "peaks", "acceptance", "fidelity"]);
    for k in 0..res.acceptance.len() {
        r.push(vec![(k + 1).into(), res.peaks[k].into(), res.acceptance[k].into(), res.fidelity[k].into()])?;
    }
    r.note("final_spacing", format!("{:e}", res.spacing));
    Ok(r)
}

fn cubic(config: &ExperimentConfig) -> Result<Report> {
    let grid = Grid::symmetric(config.real("half_width")?, config.real("dx")?)?;
    let (gamma, db) = (config.real("gamma")?, config.real("resource_db")?);
    let vacuum = GridWavefunction::from_fn(grid, |x| (-x * x / 2.0).exp().into()).normalized()?;
    let mut choices = vec![("most_likely", OutcomeChoice::MostLikely)];
    for t in 0..config.trials {
        let u: f64 = trial_rng(config.seed, t).random();
        choices.push(("sampled", OutcomeChoice::InverseCdf(u)));
    }
    let runs: Vec<_> = choices
        .par_iter()
        .map(|(_, c)| cubic_phase_teleport(&vacuum, gamma, db, *c))
        .collect::<Result<_>>()?;
    let mut r = Report::new(&["choice", "outcome", "outcome_density", "fidelity"]);
    for ((label, _), run) in choices.iter().zip(&runs) {
        r.push(vec![(*label).into(), run.outcome.into(), run.outcome_density.into(), run.fidelity.into()])?;
    }
    r.note("average_fidelity", format!("{:e}", runs[0].average_fidelity));
    Ok(r)
}

/// Numeric column as reals; text cells become NaN.
#[cfg(test)]
fn reals(r: &Report, name: &str) -> Vec<f64> {
    r.column(name).unwrap().iter().map(|v| v.as_real().unwrap_or(f64::NAN)).collect()
}
