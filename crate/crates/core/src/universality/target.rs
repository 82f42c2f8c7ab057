//! Nonvanishing target functions on a grid and their continued logarithms.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lfunctions::RegionGrid;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetKind {
    Constant { c: Complex64 },
    /// `Σ c_k z^k`, lowest first
    Polynomial { coeffs: Vec<Complex64> },
    /// `exp(Σ c_k z^k)`
    ExpPolynomial { coeffs: Vec<Complex64> },
    /// `1 / (z - a)`
    ReciprocalLinear { a: Complex64 },
}

/// A target `F` in the grid's own variable: `u` on u-plane grids, `s` on
/// s-plane grids.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetFunction {
    pub kind: TargetKind,
    pub label: String,
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

impl TargetFunction {
    pub fn new(kind: TargetKind, label: impl Into<String>) -> Self {
        TargetFunction {
            kind,
            label: label.into(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(TargetKind::Constant { c }, format!("constant({c})"))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            TargetKind::Constant { c } => *c,
            TargetKind::Polynomial { coeffs } => horner(coeffs, z),
            TargetKind::ExpPolynomial { coeffs } => horner(coeffs, z).exp(),
            TargetKind::ReciprocalLinear { a } => (z - a).inv(),
        }
    }

    pub fn values(&self, grid: &RegionGrid) -> Vec<Complex64> {
        grid.points.iter().map(|&z| self.eval(z)).collect()
    }

    /// `min |F|` over the grid; must be positive.
    pub fn min_modulus(&self, grid: &RegionGrid) -> f64 {
        self.values(grid)
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Grid values, after checking that none vanishes.
    pub fn checked_values(&self, grid: &RegionGrid) -> Result<Vec<Complex64>> {
        let values = self.values(grid);
        let min = values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        if !(min > 0.0) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "target {} vanishes or is not finite on the grid (min |F| = {min})",
                self.label
            )));
        }
        Ok(values)
    }

    /// A branch of `log F` along the grid path.
    pub fn log_values(&self, grid: &RegionGrid) -> Result<Vec<Complex64>> {
        if let TargetKind::ExpPolynomial { coeffs } = &self.kind {
            return Ok(grid.points.iter().map(|&z| horner(coeffs, z)).collect());
        }
        continued_log(&self.checked_values(grid)?)
    }
}

/// Principal log at the first value, then at each step the branch nearest
/// the previous value. Steps larger than π/2 mean the path is too coarse.
pub fn continued_log(values: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out: Vec<Complex64> = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        if !(v.norm() > 0.0) {
            return Err(Error::domain(format!("log of zero at grid point {i}")));
        }
        let principal = v.ln();
        let next = match out.last() {
            None => principal,
            Some(prev) => {
                let k = ((prev.im - principal.im) / TAU).round();
                let cand = Complex64::new(principal.re, principal.im + k * TAU);
                if (cand.im - prev.im).abs() > FRAC_PI_2 {
                    return Err(Error::domain(format!(
                        "log branch jumps by more than pi/2 at grid point {i}; refine the grid"
                    )));
                }
                cand
            }
        };
        out.push(next);
    }
    Ok(out)
}
