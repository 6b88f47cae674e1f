use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{symplectic_form, GaussianState, MATRIX_TOL};
use crate::{Error, Result};

/// Elementary Gaussian operations. Two-mode gates take `(first, second)`
/// targets; for [`GateKind::Cx`] the first target is the control.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    /// `q → q + v`.
    DisplaceQ(f64),
    /// `p → p + u`.
    DisplaceP(f64),
    /// `D(α)`: shifts `(q, p)` by `√2 (Re α, Im α)`.
    Displace(Complex64),
    /// `q → e^{-r} q`, `p → e^{r} p`.
    Squeeze(f64),
    /// Shear `p → p + η q`.
    Phase(f64),
    /// `q → q cosθ − p sinθ`, `p → q sinθ + p cosθ`.
    Rotate(f64),
    /// Beam splitter with `√T = cos(θ/2)`, `√R = sin(θ/2)`.
    BeamSplitter(f64),
    /// `p₁ → p₁ + q₂`, `p₂ → p₂ + q₁`.
    Cz,
    /// `q₂ → q₂ + q₁`, `p₁ → p₁ − p₂`.
    Cx,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::BeamSplitter(_) | GateKind::Cz | GateKind::Cx => 2,
            _ => 1,
        }
    }
}

/// An affine symplectic map `x → S x + d`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticGate {
    s: DMatrix<f64>,
    d: DVector<f64>,
}

impl SymplecticGate {
    pub fn new(s: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let dim = d.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::invalid("d", format!("length {dim} is not 2n with n >= 1")));
        }
        if s.nrows() != dim || s.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.nrows().max(s.ncols()),
            });
        }
        let gate = Self { s, d };
        let err = gate.symplectic_error();
        if !(err < MATRIX_TOL) {
            return Err(Error::invalid("s", format!("not symplectic (error {err:e})")));
        }
        Ok(gate)
    }

    pub fn identity(n_modes: usize) -> Self {
        let dim = 2 * n_modes;
        Self {
            s: DMatrix::identity(dim, dim),
            d: DVector::zeros(dim),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.d.len() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.d
    }

    /// `‖SᵀΩS − Ω‖∞` (max absolute entry).
    pub fn symplectic_error(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        (self.s.transpose() * &omega * &self.s - omega).amax()
    }

    /// The map `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &SymplecticGate) -> Result<SymplecticGate> {
        if self.d.len() != first.d.len() {
            return Err(Error::DimensionMismatch {
                expected: self.d.len(),
                found: first.d.len(),
            });
        }
        Ok(SymplecticGate {
            s: &self.s * &first.s,
            d: &self.s * &first.d + &self.d,
        })
    }

    pub fn inverse(&self) -> SymplecticGate {
        // S⁻¹ = −Ω Sᵀ Ω for symplectic S.
        let omega = symplectic_form(self.n_modes());
        let s_inv = -(&omega * self.s.transpose() * &omega);
        let d = -(&s_inv * &self.d);
        SymplecticGate { s: s_inv, d }
    }
}

/// Builds the gate `kind` acting on `targets` inside an `n_modes` register.
pub fn make_gate(kind: GateKind, targets: &[usize], n_modes: usize) -> Result<SymplecticGate> {
    if targets.len() != kind.arity() {
        return Err(Error::invalid(
            "targets",
            format!("{kind:?} takes {} target(s), got {}", kind.arity(), targets.len()),
        ));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_modes {
            return Err(Error::ModeOutOfRange { index: t, n_modes });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateTarget(t));
        }
    }
    let mut g = SymplecticGate::identity(n_modes);
    let (s, d) = (&mut g.s, &mut g.d);
    let q = |m: usize| 2 * m;
    let p = |m: usize| 2 * m + 1;
    let a = targets[0];
    match kind {
        GateKind::DisplaceQ(v) => d[q(a)] = v,
        GateKind::DisplaceP(u) => d[p(a)] = u,
        GateKind::Displace(alpha) => {
            d[q(a)] = std::f64::consts::SQRT_2 * alpha.re;
            d[p(a)] = std::f64::consts::SQRT_2 * alpha.im;
        }
        GateKind::Squeeze(r) => {
            s[(q(a), q(a))] = (-r).exp();
            s[(p(a), p(a))] = r.exp();
        }
        GateKind::Phase(eta) => s[(p(a), q(a))] = eta,
        GateKind::Rotate(theta) => {
            let (sin, cos) = theta.sin_cos();
            s[(q(a), q(a))] = cos;
            s[(q(a), p(a))] = -sin;
            s[(p(a), q(a))] = sin;
            s[(p(a), p(a))] = cos;
        }
        GateKind::BeamSplitter(theta) => {
            let b = targets[1];
            let (sr, st) = (0.5 * theta).sin_cos();
            for (ia, ib) in [(q(a), q(b)), (p(a), p(b))] {
                s[(ia, ia)] = st;
                s[(ia, ib)] = sr;
                s[(ib, ia)] = -sr;
                s[(ib, ib)] = st;
            }
        }
        GateKind::Cz => {
            let b = targets[1];
            s[(p(a), q(b))] = 1.0;
            s[(p(b), q(a))] = 1.0;
        }
        GateKind::Cx => {
            let b = targets[1];
            s[(q(b), q(a))] = 1.0;
            s[(p(a), p(b))] = -1.0;
        }
    }
    Ok(g)
}

pub fn apply_gate(state: &GaussianState, gate: &SymplecticGate) -> Result<GaussianState> {
    if state.mean().len() != gate.d.len() {
        return Err(Error::DimensionMismatch {
            expected: state.mean().len(),
            found: gate.d.len(),
        });
    }
    let mean = &gate.s * state.mean() + &gate.d;
    let cov = &gate.s * state.cov() * gate.s.transpose();
    Ok(GaussianState::from_parts_unchecked(mean, cov))
}

impl GaussianState {
    /// Convenience wrapper around [`make_gate`] and [`apply_gate`].
    pub fn apply(&self, kind: GateKind, targets: &[usize]) -> Result<GaussianState> {
        apply_gate(self, &make_gate(kind, targets, self.n_modes())?)
    }
}
