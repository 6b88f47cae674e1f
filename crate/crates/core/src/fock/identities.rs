use num_complex::Complex64;

use super::operators::{interior_norm, quadrature_matrices_hbar, FockOperator};
use crate::{Error, Result};

/// Residual norms of the two exact commutator identities
///
/// ```text
/// q^{m+1} = −(2/3m) [q^m, [q³, p²]]
/// q^m p^n + p^n q^m = −(4i/((n+1)(m+1))) [q^{m+1}, p^{n+1}]
///                     − (1/(n+1)) Σ_{k=1}^{n−1} [p^{n−k}, [q^m, p^k]]
/// ```
///
/// Both hold with the normalization `[q, p] = i/2`, which is used here.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResiduals {
    /// First identity, interior block.
    pub power: f64,
    /// Second identity, interior block.
    pub symmetrized: f64,
    /// First identity on the full truncated space (truncation artifacts).
    pub power_full: f64,
    /// Second identity on the full truncated space.
    pub symmetrized_full: f64,
}

pub fn commutator_identity_check(m: u32, n: u32, dim: usize) -> Result<IdentityResiduals> {
    if m < 1 || n < 1 {
        return Err(Error::invalid("m", "powers must be at least 1"));
    }
    let needed = 2 * (m + n) as usize + 8;
    if dim < needed {
        return Err(Error::invalid("dim", format!("{dim} leaves no interior block; need >= {needed}")));
    }
    let (q, p) = quadrature_matrices_hbar(dim, 0.5)?;
    let qm = q.pow(m.into());

    let inner = q.pow(3).commutator(&p.pow(2))?;
    let rhs = qm.commutator(&inner)?.scale(Complex64::new(-2.0 / (3.0 * f64::from(m)), 0.0));
    let r1 = q.pow(u64::from(m) + 1).sub(&rhs)?;

    let pn = p.pow(n.into());
    let lhs = qm.mul(&pn)?.add(&pn.mul(&qm)?)?;
    let coef = Complex64::new(0.0, -4.0 / f64::from((n + 1) * (m + 1)));
    let mut rhs = q
        .pow(u64::from(m) + 1)
        .commutator(&p.pow(u64::from(n) + 1))?
        .scale(coef);
    for k in 1..n {
        let nested = p
            .pow((n - k).into())
            .commutator(&qm.commutator(&p.pow(k.into()))?)?;
        rhs = rhs.sub(&nested.scale(Complex64::new(1.0 / f64::from(n + 1), 0.0)))?;
    }
    let r2 = lhs.sub(&rhs)?;

    Ok(IdentityResiduals {
        power: interior_norm(r1.matrix()),
        symmetrized: interior_norm(r2.matrix()),
        power_full: full_norm(&r1),
        symmetrized_full: full_norm(&r2),
    })
}

fn full_norm(op: &FockOperator) -> f64 {
    op.matrix().singular_values().iter().cloned().fold(0.0, f64::max)
}
