//! Constructive phase fitting: choose `θ_P` so that `Σ e(θ_P) u^{deg P}`
//! matches a target on a grid in sup norm.

use num_complex::Complex64;

use super::functionals::PhaseAssignment;
use super::peak::e;
use crate::algebra::Poly;
use crate::characters::UnitGroup;
use crate::error::{Error, Result};
use crate::lfunctions::{CoprimePrimes, RegionGrid};

pub const COARSE_SCAN: usize = 64;
pub const MAX_SWEEPS: usize = 200;
pub const STALL_TOLERANCE: f64 = 1e-12;
const GOLDEN_STEPS: usize = 60;

#[derive(Clone, Debug)]
pub struct FitResult {
    pub phases: PhaseAssignment,
    pub error: f64,
    /// objective at the start, after each class is admitted and after each sweep
    pub history: Vec<f64>,
    /// positions in `history` where a degree class was admitted
    pub stage_starts: Vec<usize>,
}

fn sup(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

/// Cyclic coordinate descent on the sup norm of
/// `target_j - Σ_P e(θ_P) u_j^{deg P}`.
///
/// Degree classes enter one at a time in increasing order. The `n` primes of
/// a new class start at `θ = j/n`, which sum to zero when `n ≥ 2`, and the
/// descent then runs over every prime admitted so far. Each stage therefore
/// starts from the previous stage's error, so the result is non-increasing
/// as the window grows.
pub fn fit_phases_on(
    primes: &[(Poly, usize)],
    u_points: &[Complex64],
    target: &[Complex64],
) -> Result<FitResult> {
    if primes.is_empty() {
        return Err(Error::pre("phase window contains no primes"));
    }
    if u_points.len() != target.len() || u_points.is_empty() {
        return Err(Error::pre("target must have one value per grid point"));
    }
    let mut order: Vec<usize> = (0..primes.len()).collect();
    order.sort_by_key(|&i| primes[i].1);
    let weights: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&i| u_points.iter().map(|u| u.powu(primes[i].1 as u32)).collect())
        .collect();
    let mut theta = vec![0.0f64; primes.len()];
    let mut residual: Vec<Complex64> = target.to_vec();
    let mut current = sup(residual.iter().map(|r| r.norm()));
    let mut history = vec![current];
    let mut stage_starts = Vec::new();

    let mut admitted = 0;
    while admitted < order.len() {
        let d = primes[order[admitted]].1;
        let class_end = (admitted..order.len())
            .find(|&j| primes[order[j]].1 != d)
            .unwrap_or(order.len());
        let n = class_end - admitted;
        for (j, slot) in (admitted..class_end).enumerate() {
            theta[slot] = j as f64 / n as f64;
            for (r, wj) in residual.iter_mut().zip(&weights[slot]) {
                *r -= e(theta[slot]) * wj;
            }
        }
        admitted = class_end;
        current = sup(residual.iter().map(|r| r.norm()));
        stage_starts.push(history.len());
        history.push(current);
        descend(&weights[..admitted], &mut theta[..admitted], &mut residual, &mut current, &mut history);
    }
    let mut entries: Vec<(Poly, f64)> = vec![(Poly::zero(), 0.0); primes.len()];
    for (slot, &i) in order.iter().enumerate() {
        entries[i] = (primes[i].0.clone(), theta[slot]);
    }
    Ok(FitResult {
        phases: PhaseAssignment::new(entries)?,
        error: current,
        history,
        stage_starts,
    })
}

impl FitResult {
    /// Objective values within each descent stage.
    pub fn stages(&self) -> Vec<&[f64]> {
        let mut ends: Vec<usize> = self.stage_starts[1..].to_vec();
        ends.push(self.history.len());
        self.stage_starts
            .iter()
            .zip(ends)
            .map(|(&a, b)| &self.history[a..b])
            .collect()
    }
}

fn descend(
    weights: &[Vec<Complex64>],
    theta: &mut [f64],
    residual: &mut [Complex64],
    current: &mut f64,
    history: &mut Vec<f64>,
) {
    for _ in 0..MAX_SWEEPS {
        let before = *current;
        for (i, w) in weights.iter().enumerate() {
            let rest: Vec<Complex64> = residual
                .iter()
                .zip(w)
                .map(|(r, wj)| r + e(theta[i]) * wj)
                .collect();
            let objective =
                |t: f64| sup(rest.iter().zip(w).map(|(r, wj)| (r - e(t) * wj).norm()));
            let (mut best_t, mut best) = (0.0, f64::INFINITY);
            for k in 0..COARSE_SCAN {
                let t = k as f64 / COARSE_SCAN as f64;
                let v = objective(t);
                if v < best {
                    best = v;
                    best_t = t;
                }
            }
            let step = 1.0 / COARSE_SCAN as f64;
            let t = golden_section(&objective, best_t - step, best_t + step);
            let ft = objective(t);
            let (cand, cand_value) = if ft < best { (t, ft) } else { (best_t, best) };
            if cand_value <= *current {
                let cand = cand.rem_euclid(1.0);
                theta[i] = cand;
                for ((r, rs), wj) in residual.iter_mut().zip(&rest).zip(w) {
                    *r = rs - e(cand) * wj;
                }
                *current = sup(residual.iter().map(|r| r.norm()));
            }
        }
        history.push(*current);
        if *current == 0.0 || (before - *current) / before < STALL_TOLERANCE {
            break;
        }
    }
}

fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_STEPS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Fits the primes `mu < deg P ≤ rho` coprime to Q to target values sampled
/// at the grid points.
pub fn fit_phases(
    group: &UnitGroup,
    target: &[Complex64],
    mu: usize,
    rho: usize,
    grid: &RegionGrid,
) -> Result<FitResult> {
    if mu >= rho {
        return Err(Error::pre("phase window (mu, rho] is empty"));
    }
    let primes: Vec<(Poly, usize)> = CoprimePrimes::new(group, rho)?
        .window(mu, rho)
        .map(|(p, d, _)| (p.clone(), *d))
        .collect();
    fit_phases_on(&primes, &grid.u_points(), target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn group(modulus: &[i64]) -> UnitGroup {
        let field = Field::gf(3, 1).unwrap();
        let m = Poly::from_coeffs(modulus.iter().map(|&c| field.from_int(c)).collect());
        UnitGroup::new(&field, &m).unwrap()
    }

    #[test]
    fn zero_target() {
        let g = group(&[0, 0, 0, 0, 1]);
        let grid = RegionGrid::default_u(3).unwrap();
        let zero = vec![Complex64::new(0.0, 0.0); grid.len()];
        let r = fit_phases(&g, &zero, 0, 2, &grid).unwrap();
        // bounded by the sum of the atoms without any cancellation
        let bound: f64 = r
            .phases
            .entries()
            .iter()
            .map(|(p, _)| grid.max_abs_u().powi(p.degree() as i32))
            .sum();
        assert!(r.error <= bound);
        // every class has at least two primes, so the balanced start cancels
        assert!(r.error < 1e-12);
        for stage in r.stages() {
            for w in stage.windows(2) {
                assert!(w[1] <= w[0]);
            }
        }
        assert!(fit_phases(&g, &zero, 2, 2, &grid).is_err());
    }

    #[test]
    fn planted_single_atom() {
        // only x + 2 is a degree-1 prime coprime to x(x + 1)
        let g = group(&[0, 1, 1]);
        let grid = RegionGrid::default_u(3).unwrap();
        let theta = 0.3183;
        let target: Vec<Complex64> = grid.u_points().iter().map(|&u| e(theta) * u).collect();
        let r = fit_phases(&g, &target, 0, 1, &grid).unwrap();
        assert_eq!(r.phases.len(), 1);
        assert!((r.phases.entries()[0].1 - theta).abs() < 1e-6);
        assert!(r.error < 1e-6);
    }

    #[test]
    fn error_nonincreasing_in_rho() {
        let g = group(&[0, 0, 0, 0, 1]);
        let grid = RegionGrid::default_u(3).unwrap();
        let target: Vec<Complex64> = grid
            .u_points()
            .iter()
            .map(|&u| 0.3 * u + Complex64::new(0.0, 0.2) * u * u)
            .collect();
        let mut prev = f64::INFINITY;
        for rho in 1..=3 {
            let r = fit_phases(&g, &target, 0, rho, &grid).unwrap();
            for stage in r.stages() {
                for w in stage.windows(2) {
                    assert!(w[1] <= w[0]);
                }
            }
            assert!(r.error <= prev + 1e-12, "rho={rho}: {} > {prev}", r.error);
            prev = r.error;
        }
    }
}
