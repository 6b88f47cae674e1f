use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Uniform position grid `x_i = x0 + i·dx`, `i = 0..n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(x0: f64, dx: f64, n: usize) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::invalid("dx", format!("{dx} is not a positive spacing")));
        }
        if n < 4 {
            return Err(Error::invalid("n", format!("{n} points is too few")));
        }
        if !x0.is_finite() {
            return Err(Error::invalid("x0", "origin is not finite"));
        }
        Ok(Self { x0, dx, n })
    }

    /// Grid covering `[−half_width, half_width]` with a point at the origin.
    pub fn symmetric(half_width: f64, dx: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::invalid("half_width", format!("{half_width} is not positive")));
        }
        let half = (half_width / dx).round() as usize;
        Self::new(-(half as f64) * dx, dx, 2 * half + 1)
    }

    /// `dx = 0.05`, `|x| ≤ 12`.
    pub fn standard() -> Self {
        Self { x0: -12.0, dx: 0.05, n: 481 }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.x(i))
    }

    pub fn max_abs_x(&self) -> f64 {
        self.x0.abs().max(self.x(self.n - 1).abs())
    }

    /// Index of `x` if it lies on the grid (within a thousandth of a spacing).
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let f = (x - self.x0) / self.dx;
        let i = f.round();
        ((f - i).abs() < 1e-3 && i >= 0.0 && (i as usize) < self.n).then_some(i as usize)
    }
}

/// Single-mode position wavefunction sampled on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridWavefunction {
    grid: Grid,
    amps: Vec<Complex64>,
}

impl GridWavefunction {
    pub fn new(grid: Grid, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.n {
            return Err(Error::DimensionMismatch { expected: grid.n, found: amps.len() });
        }
        Ok(Self { grid, amps })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        Self { grid, amps: grid.xs().map(f).collect() }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sq();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Numerical(format!("cannot normalize a state of norm² {n:e}")));
        }
        let s = 1.0 / n.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= s);
        Ok(self)
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::invalid("grid", "wavefunctions live on different grids"));
        }
        Ok(())
    }

    /// `⟨self|other⟩` by the rectangle rule.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_grid(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum::<Complex64>()
            * self.grid.dx)
    }

    /// `|⟨self|other⟩|² / (‖self‖²‖other‖²)`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr() / (self.norm_sq() * other.norm_sq()))
    }

    /// Multiplies by `e^{i f(x)}`.
    pub fn with_phase(mut self, f: impl Fn(f64) -> f64) -> Self {
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= Complex64::from_polar(1.0, f(self.grid.x(i)));
        }
        self
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨x^k⟩` for the normalized state.
    pub fn moment_q(&self, k: i32) -> f64 {
        let w: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * self.grid.x(i).powi(k))
            .sum::<f64>()
            / w
    }

    /// `⟨p⟩ = ⟨ψ|−i d/dx|ψ⟩` with a fourth-order central difference.
    pub fn mean_p(&self) -> f64 {
        let a = &self.amps;
        let h = self.grid.dx;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 2..a.len().saturating_sub(2) {
            let d = (a[i - 2] - a[i - 1] * 8.0 + a[i + 1] * 8.0 - a[i + 2]) / (12.0 * h);
            acc += a[i].conj() * Complex64::new(0.0, -1.0) * d;
        }
        let w: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        acc.re / w
    }

    /// Four-point Lagrange interpolation; zero outside the grid.
    pub fn interpolate(&self, x: f64) -> Complex64 {
        let f = (x - self.grid.x0) / self.grid.dx;
        let n = self.amps.len() as isize;
        if !(f >= 0.0 && f <= (n - 1) as f64) {
            return Complex64::new(0.0, 0.0);
        }
        let i = (f.floor() as isize).clamp(0, n - 2);
        let t = f - i as f64;
        let at = |k: isize| {
            if (0..n).contains(&k) {
                self.amps[k as usize]
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let (pm, p0, p1, p2) = (at(i - 1), at(i), at(i + 1), at(i + 2));
        let wm = -t * (t - 1.0) * (t - 2.0) / 6.0;
        let w0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        let w1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
        let w2 = (t + 1.0) * t * (t - 1.0) / 6.0;
        pm * wm + p0 * w0 + p1 * w1 + p2 * w2
    }
}

/// Two-mode wavefunction `Ψ(x, y)` on a square grid; rows index `x`
/// (first mode), columns index `y` (second mode).
#[derive(Clone, Debug, PartialEq)]
pub struct GridWavefunction2 {
    grid: Grid,
    amps: DMatrix<Complex64>,
}

impl GridWavefunction2 {
    pub fn new(grid: Grid, amps: DMatrix<Complex64>) -> Result<Self> {
        if amps.nrows() != grid.n || amps.ncols() != grid.n {
            return Err(Error::DimensionMismatch { expected: grid.n, found: amps.nrows().max(amps.ncols()) });
        }
        Ok(Self { grid, amps })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        Self { grid, amps: DMatrix::from_fn(grid.n, grid.n, |i, j| f(grid.x(i), grid.x(j))) }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amps(&self) -> &DMatrix<Complex64> {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx * self.grid.dx
    }

    /// Position density of the second mode.
    pub fn second_mode_density(&self) -> Vec<f64> {
        let dx = self.grid.dx;
        self.amps.column_iter().map(|c| c.iter().map(|a| a.norm_sqr()).sum::<f64>() * dx).collect()
    }

    /// Unnormalized first-mode state after the second mode is found at `y_j`.
    pub fn slice_second(&self, j: usize) -> GridWavefunction {
        GridWavefunction { grid: self.grid, amps: self.amps.column(j).iter().copied().collect() }
    }

    /// Unnormalized first-mode state after the second mode is projected onto
    /// momentum eigenstate `p`.
    pub fn project_second_momentum(&self, p: f64) -> GridWavefunction {
        let dx = self.grid.dx;
        let norm = dx / (2.0 * std::f64::consts::PI).sqrt();
        let kernel: Vec<Complex64> = self
            .grid
            .xs()
            .map(|y| Complex64::from_polar(norm, -p * y))
            .collect();
        let amps = self
            .amps
            .row_iter()
            .map(|row| row.iter().zip(&kernel).map(|(a, k)| a * k).sum())
            .collect();
        GridWavefunction { grid: self.grid, amps }
    }
}

/// Text format: a header line `x0 dx n`, then `n` lines `re im`.
pub fn write_grid(wf: &GridWavefunction) -> String {
    let g = wf.grid;
    let mut out = format!("{:e} {:e} {}\n", g.x0, g.dx, g.n);
    for a in &wf.amps {
        let _ = writeln!(out, "{:e} {:e}", a.re, a.im);
    }
    out
}

pub fn read_grid(text: &str) -> Result<GridWavefunction> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let parse_err = |line: usize, message: String| Error::Parse { line: line + 1, message };
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 0, message: "empty input".into() })?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let [x0, dx, n] = h[..] else {
        return Err(parse_err(hl, "expected header `x0 dx n`".into()));
    };
    let x0: f64 = x0.parse().map_err(|_| parse_err(hl, format!("bad x0 `{x0}`")))?;
    let dx: f64 = dx.parse().map_err(|_| parse_err(hl, format!("bad dx `{dx}`")))?;
    let n: usize = n.parse().map_err(|_| parse_err(hl, format!("bad n `{n}`")))?;
    let grid = Grid::new(x0, dx, n)?;
    let mut amps = Vec::with_capacity(n);
    for (ln, line) in lines {
        let v: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(ln, format!("{e}")))?;
        let [re, im] = v[..] else {
            return Err(parse_err(ln, "expected `re im`".into()));
        };
        amps.push(Complex64::new(re, im));
    }
    GridWavefunction::new(grid, amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coherent(grid: Grid, q: f64, p: f64) -> GridWavefunction {
        GridWavefunction::from_fn(grid, |x| {
            Complex64::from_polar((-(x - q) * (x - q) / 2.0).exp(), p * x)
        })
        .normalized()
        .unwrap()
    }

    #[test]
    fn standard_grid_layout() {
        let g = Grid::standard();
        assert_eq!(g, Grid::symmetric(12.0, 0.05).unwrap());
        assert_eq!(g.index_of(0.0), Some(240));
        assert!((g.max_abs_x() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn moments_of_coherent_state() {
        let psi = coherent(Grid::standard(), 1.2, -0.7);
        assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
        assert!((psi.moment_q(1) - 1.2).abs() < 1e-10);
        assert!((psi.moment_q(2) - (1.44 + 0.5)).abs() < 1e-10);
        assert!((psi.mean_p() + 0.7).abs() < 1e-6);
    }

    #[test]
    fn phases_preserve_norm() {
        let psi = coherent(Grid::standard(), 0.5, 0.0).with_phase(|x| 0.1 * x * x * x / 3.0);
        assert!((psi.norm_sq() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn interpolation_reproduces_smooth_functions() {
        let psi = coherent(Grid::standard(), 0.3, 0.4);
        for x in [-1.234, 0.0101, 2.5] {
            let exact = Complex64::from_polar((-(x - 0.3f64).powi(2) / 2.0).exp(), 0.4 * x)
                / std::f64::consts::PI.powf(0.25);
            assert!((psi.interpolate(x) - exact).norm() < 1e-6);
        }
        assert_eq!(psi.interpolate(30.0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn momentum_projection_of_product_state() {
        let g = Grid::symmetric(8.0, 0.05).unwrap();
        let vac = coherent(g, 0.0, 0.0);
        let prod = GridWavefunction2::from_fn(g, |x, y| vac.interpolate(x) * vac.interpolate(y));
        assert!((prod.norm_sq() - 1.0).abs() < 1e-10);
        // ⟨p=0|0⟩ = π^{-1/4}
        let proj = prod.project_second_momentum(0.0);
        assert!((proj.norm_sq() - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-10);
        let dens = prod.second_mode_density();
        assert!((dens.iter().sum::<f64>() * g.dx - 1.0).abs() < 1e-10);
    }

    #[test]
    fn text_round_trip() {
        let psi = coherent(Grid::symmetric(3.0, 0.25).unwrap(), 0.1, 0.2);
        let text = write_grid(&psi);
        assert_eq!(read_grid(&text).unwrap(), psi);
        assert!(read_grid("0 0.1\n").is_err());
        assert!(read_grid("0 0.1 5\n1 0\n").is_err());
        assert!(matches!(read_grid("0 0.1 4\n1 0\n1\n"), Err(Error::Parse { line: 3, .. })));
    }
}
