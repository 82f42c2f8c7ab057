//! Good and bad characters by the size of the tail `f3` on the grid.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::approximation::{h_from_factors, PeakPolynomial, PhaseAssignment};
use crate::characters::{root_of_unity, Character, UnitGroup};
use crate::error::{Error, Result};
use crate::lfunctions::{CoprimePrimes, RegionGrid};

#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub deg_q: usize,
    pub phi: u64,
    pub rho: usize,
    pub k: usize,
    /// `min (σ - 1/2)` over the grid
    pub d: f64,
    /// `(deg Q)^{-d/2}`
    pub threshold: f64,
    pub good: usize,
    pub bad: usize,
    pub h_plus_good: f64,
    pub h_plus_bad: f64,
    /// `κ^{|𝒫|} φ(Q)`
    pub main: f64,
    pub good_ratio: f64,
    /// `Σ_𝒢 h⁺ / main`
    pub good_mass_ratio: f64,
    /// `Σ_ℬ h⁺ / Σ h⁺`
    pub bad_share: f64,
    pub max_m: f64,
}

/// Splits the nonprincipal characters at `M(χ) = max_grid |f3| ≤ (deg Q)^{-d/2}`
/// with `f3 = Σ_{ρ < deg P ≤ K} χ(P) |P|^{-s}`, and sums `h⁺` on each side.
/// `phases` should carry every targeted prime, including zero targets below μ.
pub fn good_bad_split(
    group: &UnitGroup,
    grid: &RegionGrid,
    phases: &PhaseAssignment,
    f: &PeakPolynomial,
    epsilon: f64,
    rho: usize,
    k: usize,
) -> Result<SplitReport> {
    if rho > k {
        return Err(Error::pre("split needs rho <= K"));
    }
    let d = grid.critical_distance();
    if !(d > 0.0) {
        return Err(Error::pre("grid must stay right of the critical line"));
    }
    let deg_q = group.modulus().degree();
    let threshold = (deg_q as f64).powf(-d / 2.0);
    let prepared = phases.prepare(group)?;
    let primes = CoprimePrimes::new(group, k)?;
    let u = grid.u_points();
    let tail: Vec<(u64, Vec<Complex64>)> = primes
        .window(rho, k)
        .map(|(_, deg, e)| (*e, u.iter().map(|x| x.powu(*deg as u32)).collect()))
        .collect();
    let l = group.exponent();
    let rows: Vec<(f64, f64)> = (1..group.order())
        .into_par_iter()
        .map(|i| {
            let chi = Character::from_index(group, i);
            let mut f3 = vec![Complex64::new(0.0, 0.0); u.len()];
            for (e, powers) in &tail {
                let v = root_of_unity(chi.angle_num_of_dlog(*e), l);
                for (acc, p) in f3.iter_mut().zip(powers) {
                    *acc += v * p;
                }
            }
            let m = f3.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let factors: Vec<f64> = prepared
                .offsets(&chi)
                .into_iter()
                .map(|x| f.abs(x).powi(2))
                .collect();
            (m, h_from_factors(&factors, epsilon).max(0.0))
        })
        .collect();
    let (mut good, mut bad) = (0, 0);
    let (mut h_plus_good, mut h_plus_bad) = (0.0, 0.0);
    let mut max_m = 0.0f64;
    for &(m, hp) in &rows {
        max_m = max_m.max(m);
        if m <= threshold {
            good += 1;
            h_plus_good += hp;
        } else {
            bad += 1;
            h_plus_bad += hp;
        }
    }
    let phi = group.order();
    let main = f.kappa().powi(phases.len() as i32) * phi as f64;
    let total = h_plus_good + h_plus_bad;
    Ok(SplitReport {
        deg_q,
        phi,
        rho,
        k,
        d,
        threshold,
        good,
        bad,
        h_plus_good,
        h_plus_bad,
        main,
        good_ratio: good as f64 / phi as f64,
        good_mass_ratio: h_plus_good / main,
        bad_share: if total > 0.0 { h_plus_bad / total } else { 0.0 },
        max_m,
    })
}
