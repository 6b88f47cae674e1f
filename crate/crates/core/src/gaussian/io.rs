//! Plain-text state format:
//!
//! ```text
//! # optional comments
//! n_modes 2
//! <2n mean entries>
//! <2n covariance rows of 2n entries>
//! ```

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use super::GaussianState;
use crate::{Error, Result};

pub fn write_state(state: &GaussianState) -> String {
    let mut out = format!("n_modes {}\n", state.n_modes());
    let row = |out: &mut String, values: &mut dyn Iterator<Item = f64>| {
        let line: Vec<String> = values.map(|v| format!("{v:e}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    };
    row(&mut out, &mut state.mean().iter().copied());
    for r in state.cov().row_iter() {
        row(&mut out, &mut r.iter().copied());
    }
    out
}

pub fn read_state(text: &str) -> Result<GaussianState> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "empty input".into(),
    })?;
    let n: usize = header
        .strip_prefix("n_modes")
        .and_then(|rest| rest.trim().parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse {
            line: ln,
            message: format!("expected `n_modes <count>`, found `{header}`"),
        })?;
    let dim = 2 * n;

    let mut parse_row = |what: &str| -> Result<Vec<f64>> {
        let (ln, line) = lines.next().ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("missing {what} row"),
        })?;
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: ln, message: e.to_string() })?;
        if vals.len() != dim {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected {dim} values, found {}", vals.len()),
            });
        }
        Ok(vals)
    };

    let mean = DVector::from_vec(parse_row("mean")?);
    let mut rows = Vec::with_capacity(dim * dim);
    for _ in 0..dim {
        rows.extend(parse_row("covariance")?);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse { line: ln, message: "trailing data".into() });
    }
    GaussianState::new(mean, DMatrix::from_row_slice(dim, dim, &rows))
}
