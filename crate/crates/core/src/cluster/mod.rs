//! CV cluster states: graphs and nullifiers, the canonical CZ construction,
//! the time-multiplexed 1D chain and one-way gates driven by homodyne
//! measurements.

mod chain;
mod graph;
mod oneway;

pub use chain::{chain_nullifiers, timemux_1d_chain};
pub use graph::{parse_graph, write_graph, ClusterGraph};
pub use oneway::{oneway_channel, oneway_gate, oneway_moment_error, oneway_target};

use crate::gaussian::{apply_gate, make_gate, GateKind, GaussianState};
use crate::{Error, Result};

/// A linear combination `cᵀx` of quadratures in interleaved ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct Nullifier {
    pub coefficients: Vec<f64>,
}

impl Nullifier {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().all(|&c| c == 0.0) {
            return Err(Error::invalid("coefficients", "nullifier is identically zero"));
        }
        Ok(Self { coefficients })
    }
}

/// One nullifier per vertex: `p_i − Σ_{j∈N(i)} q_j`.
pub fn nullifiers(graph: &ClusterGraph) -> Vec<Nullifier> {
    (0..graph.n())
        .map(|i| {
            let mut c = vec![0.0; 2 * graph.n()];
            c[2 * i + 1] = 1.0;
            for j in graph.neighbors(i) {
                c[2 * j] -= 1.0;
            }
            Nullifier { coefficients: c }
        })
        .collect()
}

/// Momentum-squeezed vacua (`var_p = ½e^{−2r}`) joined by a CZ on every edge.
pub fn build_canonical_cluster(graph: &ClusterGraph, r: f64) -> Result<GaussianState> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::invalid("r", format!("{r} is not a finite non-negative squeezing")));
    }
    let n = graph.n();
    let mut state = GaussianState::vacuum(n)?;
    for m in 0..n {
        state = state.apply(GateKind::Squeeze(-r), &[m])?;
    }
    for &(i, j) in graph.edges() {
        state = apply_gate(&state, &make_gate(GateKind::Cz, &[i, j], n)?)?;
    }
    Ok(state)
}

pub fn nullifier_variances(state: &GaussianState, nullifiers: &[Nullifier]) -> Result<Vec<f64>> {
    nullifiers
        .iter()
        .map(|n| state.variance_of(&n.coefficients))
        .collect()
}

/// Full covariance matrix of a set of nullifiers.
pub fn nullifier_covariance(state: &GaussianState, nullifiers: &[Nullifier]) -> Result<Vec<Vec<f64>>> {
    let dim = state.mean().len();
    for n in nullifiers {
        if n.coefficients.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: n.coefficients.len() });
        }
    }
    let cov = state.cov();
    Ok(nullifiers
        .iter()
        .map(|a| {
            nullifiers
                .iter()
                .map(|b| {
                    let mut s = 0.0;
                    for (i, &ca) in a.coefficients.iter().enumerate() {
                        if ca == 0.0 {
                            continue;
                        }
                        for (j, &cb) in b.coefficients.iter().enumerate() {
                            s += ca * cov[(i, j)] * cb;
                        }
                    }
                    s
                })
                .collect()
        })
        .collect())
}
