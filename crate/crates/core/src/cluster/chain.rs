use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use super::Nullifier;
use crate::gaussian::{GateKind, GaussianState};
use crate::{Error, Result};

/// Time-multiplexed 1D cluster chain. Time bin `k` carries two rails,
/// `a_k` (mode `2k`, q-squeezed) and `b_k` (mode `2k+1`, p-squeezed). Each
/// bin is entangled by a balanced beam splitter on `(a_k, b_k)`; the `b` rail
/// is delayed by one bin and a second balanced splitter mixes `(a_{k+1}, b_k)`.
pub fn timemux_1d_chain(n_pairs: usize, r: f64) -> Result<GaussianState> {
    if n_pairs < 2 {
        return Err(Error::invalid("n_pairs", format!("{n_pairs} < 2")));
    }
    if !r.is_finite() {
        return Err(Error::invalid("r", "squeezing is not finite"));
    }
    let mut state = GaussianState::squeezed_vacuum(r).tensor(&GaussianState::squeezed_vacuum(-r));
    let pair = state.clone();
    for _ in 1..n_pairs {
        state = state.tensor(&pair);
    }
    for k in 0..n_pairs {
        state = state.apply(GateKind::BeamSplitter(FRAC_PI_2), &[2 * k, 2 * k + 1])?;
    }
    for k in 0..n_pairs - 1 {
        state = state.apply(GateKind::BeamSplitter(FRAC_PI_2), &[2 * k + 2, 2 * k + 1])?;
    }
    Ok(state)
}

/// The `2·n_pairs` nullifiers of [`timemux_1d_chain`]: the squeezed input
/// quadratures `q_{a_k}` and `p_{b_k}` written in terms of output quadratures.
/// Each has variance `½e^{−2r}`.
///
/// Inverting the two splitter layers gives, with `A_k`, `B_k` the output
/// rails,
///
/// ```text
/// a_k = (A_k − B_{k−1} − A_{k+1} − B_k) / 2        0 < k < n−1
/// b_k = (A_k − B_{k−1} + A_{k+1} + B_k) / 2
/// a_0 = A_0/√2 − (A_1 + B_0)/2,     b_0 = A_0/√2 + (A_1 + B_0)/2
/// a_{n−1} = (A_{n−1} − B_{n−2})/2 − B_{n−1}/√2
/// b_{n−1} = (A_{n−1} − B_{n−2})/2 + B_{n−1}/√2
/// ```
///
/// and the nullifiers are the q part of `a_k` and the p part of `b_k`.
pub fn chain_nullifiers(n_pairs: usize) -> Result<Vec<Nullifier>> {
    if n_pairs < 2 {
        return Err(Error::invalid("n_pairs", format!("{n_pairs} < 2")));
    }
    let dim = 4 * n_pairs;
    let a = |k: usize| 2 * k;
    let b = |k: usize| 2 * k + 1;
    let last = n_pairs - 1;
    let mut out = Vec::with_capacity(2 * n_pairs);
    for k in 0..n_pairs {
        // (mode, weight) terms of a_k; b_k flips the sign of the
        // contributions that came through b'_k.
        let mut from_a_prime: Vec<(usize, f64)> = Vec::new();
        let mut from_b_prime: Vec<(usize, f64)> = Vec::new();
        if k == 0 {
            from_a_prime.push((a(0), FRAC_1_SQRT_2));
        } else {
            from_a_prime.push((a(k), 0.5));
            from_a_prime.push((b(k - 1), -0.5));
        }
        if k == last {
            from_b_prime.push((b(k), FRAC_1_SQRT_2));
        } else {
            from_b_prime.push((a(k + 1), 0.5));
            from_b_prime.push((b(k), 0.5));
        }
        for (quad, sign) in [(0usize, -1.0), (1usize, 1.0)] {
            let mut c = vec![0.0; dim];
            for &(m, w) in &from_a_prime {
                c[2 * m + quad] += w;
            }
            for &(m, w) in &from_b_prime {
                c[2 * m + quad] += sign * w;
            }
            out.push(Nullifier { coefficients: c });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::nullifier_variances;
    use crate::gaussian::{make_gate, physicality_check, symplectic_form, SymplecticGate};
    use nalgebra::DMatrix;

    /// The circuit's symplectic matrix, built independently of the state.
    fn circuit(n_pairs: usize) -> DMatrix<f64> {
        let n = 2 * n_pairs;
        let mut g = SymplecticGate::identity(n);
        for k in 0..n_pairs {
            g = make_gate(GateKind::BeamSplitter(FRAC_PI_2), &[2 * k, 2 * k + 1], n)
                .unwrap()
                .compose(&g)
                .unwrap();
        }
        for k in 0..n_pairs - 1 {
            g = make_gate(GateKind::BeamSplitter(FRAC_PI_2), &[2 * k + 2, 2 * k + 1], n)
                .unwrap()
                .compose(&g)
                .unwrap();
        }
        g.matrix().clone()
    }

    #[test]
    fn hand_derived_nullifiers_match_inverse_circuit() {
        for n_pairs in [2, 3, 5] {
            let s = circuit(n_pairs);
            let omega = symplectic_form(2 * n_pairs);
            let s_inv = -(&omega * s.transpose() * &omega);
            let nulls = chain_nullifiers(n_pairs).unwrap();
            for k in 0..n_pairs {
                // input q of a_k and input p of b_k
                let rows = [4 * k, 4 * k + 3];
                for (j, &row) in rows.iter().enumerate() {
                    let want: Vec<f64> = s_inv.row(row).iter().copied().collect();
                    let got = &nulls[2 * k + j].coefficients;
                    for (x, y) in want.iter().zip(got) {
                        assert!((x - y).abs() < 1e-14, "pairs {n_pairs} bin {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn nullifier_variances_follow_squeezing() {
        for r in [0.5, 1.0, 1.5, 2.0] {
            let s = timemux_1d_chain(4, r).unwrap();
            for v in nullifier_variances(&s, &chain_nullifiers(4).unwrap()).unwrap() {
                assert!((v / (0.5 * (-2.0 * r).exp()) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn unsqueezed_chain_is_vacuum() {
        let s = timemux_1d_chain(3, 0.0).unwrap();
        assert!((s.cov() - DMatrix::identity(12, 12) * 0.5).amax() < 1e-15);
    }

    #[test]
    fn excess_trace_is_additive_over_bins() {
        let r = 0.9f64;
        for n_pairs in [2, 4, 8] {
            let s = timemux_1d_chain(n_pairs, r).unwrap();
            let want = 2.0 * n_pairs as f64 * ((2.0 * r).cosh() - 1.0);
            assert!((s.excess_trace() - want).abs() < 1e-11 * want);
        }
    }

    #[test]
    fn chains_are_physical() {
        for n_pairs in [2, 16, 64] {
            for r in [0.0, 1.0, 3.0] {
                assert!(physicality_check(&timemux_1d_chain(n_pairs, r).unwrap()).is_physical);
            }
        }
    }

    #[test]
    fn too_short_chain_rejected() {
        assert!(timemux_1d_chain(1, 1.0).is_err());
        assert!(chain_nullifiers(1).is_err());
    }
}
