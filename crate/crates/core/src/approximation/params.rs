use serde::Serialize;

use crate::error::{Error, Result};

/// `ρ = log_q deg Q`, `K = ⌊deg Q / 2ρ⌋`, `δ = ρ² / deg Q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParamSet {
    pub q: u32,
    pub deg_q: usize,
    pub rho: f64,
    pub k: usize,
    pub delta: f64,
}

impl ParamSet {
    pub fn new(q: u32, deg_q: usize) -> Result<Self> {
        if deg_q < 2 {
            return Err(Error::pre("parameters need deg Q >= 2"));
        }
        let n = deg_q as f64;
        let rho = n.ln() / (q as f64).ln();
        let k = (n / (2.0 * rho)).floor() as usize;
        let delta = rho * rho / n;
        if k == 0 || delta > 0.5 {
            return Err(Error::pre(format!(
                "deg Q = {deg_q} gives K = {k}, delta = {delta:.4}; no admissible peak"
            )));
        }
        Ok(ParamSet {
            q,
            deg_q,
            rho,
            k,
            delta,
        })
    }

    /// Largest prime degree inside the targeting window, `⌊ρ⌋`.
    pub fn rho_degree(&self) -> usize {
        // guard against ρ landing a hair below an integer
        (self.rho + 1e-12).floor() as usize
    }
}

/// Degree `d` of a prime with norm `|P| = q^d`.
pub fn degree_of_norm(q: u32, norm: f64) -> f64 {
    norm.ln() / (q as f64).ln()
}

pub fn norm_of_degree(q: u32, d: f64) -> f64 {
    (q as f64).powf(d)
}
