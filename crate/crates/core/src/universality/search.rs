//! Sup-norm searches over the character family.

use std::collections::HashSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::decompose::f1_principal;
use super::target::TargetFunction;
use crate::approximation::{
    dist_to_int, fit_phases, h_from_factors, ParamSet, PeakPolynomial, PhaseAssignment,
};
use crate::characters::{Character, UnitGroup};
use crate::error::{Error, Result};
use crate::lfunctions::{l_coeffs_all, CoprimePrimes, LPolynomial, RegionGrid};

/// Largest `φ(Q)` searched exhaustively.
pub const SEARCH_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug, Serialize)]
pub struct CharDistance {
    pub index: u64,
    pub exponents: Vec<u64>,
    pub even: bool,
    pub distance: f64,
    pub sieve_pass: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub q: u32,
    pub deg_q: usize,
    pub phi: u64,
    pub target: String,
    pub epsilon: f64,
    pub grid_points: usize,
    /// nonprincipal characters in index order
    pub distances: Vec<CharDistance>,
    pub best_index: u64,
    pub best_distance: f64,
    /// `#{χ ≠ χ0 : distance < ε} / φ(Q)`
    pub proportion: f64,
    pub mean_distance: f64,
}

fn horner(coeffs: &[Complex64], u: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
}

/// `max_j |L(u_j, χ) - F_j|` with `F_j` the target at grid point `j`; s-plane
/// grids are evaluated through `u = q^{-s}`.
pub fn sup_distance(lpoly: &LPolynomial<'_>, target: &[Complex64], grid: &RegionGrid) -> Result<f64> {
    if target.len() != grid.len() {
        return Err(Error::pre("target must have one value per grid point"));
    }
    Ok(grid
        .u_points()
        .iter()
        .zip(target)
        .map(|(&u, f)| (lpoly.eval(u) - f).norm())
        .fold(0.0, f64::max))
}

fn check_capacity(group: &UnitGroup) -> Result<()> {
    if group.order() > SEARCH_LIMIT {
        return Err(Error::Capacity {
            what: "phi(Q) for exhaustive search; use the sieve-guided path",
            value: group.order() as u128,
            limit: SEARCH_LIMIT as u128,
        });
    }
    Ok(())
}

/// Distances of every nonprincipal character, from the bulk coefficient
/// matrix.
pub fn family_distances(group: &UnitGroup, target: &[Complex64], grid: &RegionGrid) -> Result<Vec<f64>> {
    check_capacity(group)?;
    if target.len() != grid.len() {
        return Err(Error::pre("target must have one value per grid point"));
    }
    let matrix = l_coeffs_all(group)?;
    let u = grid.u_points();
    Ok((1..group.order())
        .into_par_iter()
        .map(|i| {
            let row = matrix.row(i);
            u.iter()
                .zip(target)
                .map(|(&x, f)| (horner(row, x) - f).norm())
                .fold(0.0, f64::max)
        })
        .collect())
}

fn build_report(
    group: &UnitGroup,
    target: &TargetFunction,
    grid: &RegionGrid,
    epsilon: f64,
    distances: Vec<f64>,
    sieve: Option<&HashSet<u64>>,
) -> SearchReport {
    let phi = group.order();
    let rows: Vec<CharDistance> = distances
        .iter()
        .enumerate()
        .map(|(i, &distance)| {
            let chi = Character::from_index(group, i as u64 + 1);
            CharDistance {
                index: chi.index(),
                exponents: chi.exponents().to_vec(),
                even: chi.is_even(),
                distance,
                sieve_pass: sieve.map(|s| s.contains(&chi.index())),
            }
        })
        .collect();
    let considered: Vec<&CharDistance> = rows
        .iter()
        .filter(|r| r.sieve_pass != Some(false))
        .collect();
    let (best_index, best_distance) = considered
        .iter()
        .fold((0, f64::INFINITY), |(bi, bd), r| {
            if r.distance < bd {
                (r.index, r.distance)
            } else {
                (bi, bd)
            }
        });
    let within = considered.iter().filter(|r| r.distance < epsilon).count();
    let mean_distance = if considered.is_empty() {
        f64::NAN
    } else {
        considered.iter().map(|r| r.distance).sum::<f64>() / considered.len() as f64
    };
    SearchReport {
        q: group.field().q(),
        deg_q: group.modulus().degree(),
        phi,
        target: target.label.clone(),
        epsilon,
        grid_points: grid.len(),
        distances: rows,
        best_index,
        best_distance,
        proportion: within as f64 / phi as f64,
        mean_distance,
    }
}

pub fn universality_search(
    group: &UnitGroup,
    target: &TargetFunction,
    grid: &RegionGrid,
    epsilon: f64,
) -> Result<SearchReport> {
    let values = target.checked_values(grid)?;
    let distances = family_distances(group, &values, grid)?;
    Ok(build_report(group, target, grid, epsilon, distances, None))
}

/// The phases extended by `θ_P = 0` for every prime `deg P ≤ μ` coprime to Q.
pub fn with_zero_targets(group: &UnitGroup, phases: &PhaseAssignment, mu: usize) -> Result<PhaseAssignment> {
    let mut entries: Vec<_> = CoprimePrimes::new(group, mu)?
        .window(0, mu)
        .map(|(p, _, _)| (p.clone(), 0.0))
        .collect();
    let below: HashSet<_> = entries.iter().map(|e| e.0.clone()).collect();
    entries.extend(
        phases
            .entries()
            .iter()
            .filter(|e| !below.contains(&e.0))
            .cloned(),
    );
    PhaseAssignment::new(entries)
}

/// Nonprincipal characters with `‖arg χ(P)/2π - θ_P‖ < δ` for every phase,
/// in index order. With `zero_below` set to `Some(μ)`, every prime
/// `deg P ≤ μ` coprime to Q is also required to satisfy `‖arg χ(P)/2π‖ < δ`.
/// For `δ ≥ 1/2` the condition is vacuous and every character passes.
pub fn character_sieve(
    group: &UnitGroup,
    phases: &PhaseAssignment,
    delta: f64,
    zero_below: Option<usize>,
) -> Result<Vec<u64>> {
    if !(delta > 0.0) {
        return Err(Error::pre("sieve width must be positive"));
    }
    let phases = match zero_below {
        Some(mu) => with_zero_targets(group, phases, mu)?,
        None => phases.clone(),
    };
    let prepared = phases.prepare(group)?;
    if delta >= 0.5 {
        return Ok((1..group.order()).collect());
    }
    Ok((1..group.order())
        .into_par_iter()
        .filter(|&i| {
            let chi = Character::from_index(group, i);
            prepared
                .offsets(&chi)
                .iter()
                .all(|&x| dist_to_int(x) < delta)
        })
        .collect())
}

/// Nonprincipal characters with `h(χ) > 0`, in index order.
pub fn h_positive_set(
    group: &UnitGroup,
    phases: &PhaseAssignment,
    f: &PeakPolynomial,
    epsilon: f64,
) -> Result<Vec<u64>> {
    let prepared = phases.prepare(group)?;
    Ok((1..group.order())
        .into_par_iter()
        .filter(|&i| {
            let chi = Character::from_index(group, i);
            let factors: Vec<f64> = prepared
                .offsets(&chi)
                .into_iter()
                .map(|x| f.abs(x).powi(2))
                .collect();
            h_from_factors(&factors, epsilon) > 0.0
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct GuidedReport {
    pub mu: usize,
    pub rho: usize,
    pub k: usize,
    pub delta: f64,
    pub fit_error: Option<f64>,
    pub phases: Vec<(String, f64)>,
    pub sieve_size: usize,
    /// distances with sieve flags; best/proportion/mean over the sieved set
    pub search: SearchReport,
    pub exhaustive_best_index: u64,
    pub exhaustive_best_distance: f64,
    pub exhaustive_mean_distance: f64,
}

/// The constructive path: fit phases to `log F - f1` on `(μ, ρ]`, sieve by
/// the angle conditions, and search the sieved characters.
pub fn guided_search(
    group: &UnitGroup,
    target: &TargetFunction,
    grid: &RegionGrid,
    mu: usize,
    rho_override: Option<usize>,
    epsilon: f64,
) -> Result<GuidedReport> {
    let q = group.field().q();
    let deg_q = group.modulus().degree();
    let params = ParamSet::new(q, deg_q)?;
    let rho = rho_override.unwrap_or_else(|| params.rho_degree());
    if mu > rho {
        return Err(Error::pre(format!("guided search needs mu <= rho, got {mu} > {rho}")));
    }
    let k = params.k.max(rho);
    let values = target.checked_values(grid)?;
    let logs = target.log_values(grid)?;
    let primes = CoprimePrimes::new(group, rho.max(mu))?;
    let u = grid.u_points();
    let residual: Vec<Complex64> = logs
        .iter()
        .zip(&u)
        .map(|(&l, &x)| l - f1_principal(&primes, x, mu, k))
        .collect();
    let has_window = primes.window(mu, rho).next().is_some();
    let (phases, fit_error) = if has_window {
        let fit = fit_phases(group, &residual, mu, rho, grid)?;
        (fit.phases, Some(fit.error))
    } else {
        (PhaseAssignment::default(), None)
    };
    let sieve: HashSet<u64> = character_sieve(group, &phases, params.delta, Some(mu))?
        .into_iter()
        .collect();
    let distances = family_distances(group, &values, grid)?;
    let full = build_report(group, target, grid, epsilon, distances.clone(), None);
    let search = build_report(group, target, grid, epsilon, distances, Some(&sieve));
    let field = group.field();
    Ok(GuidedReport {
        mu,
        rho,
        k,
        delta: params.delta,
        fit_error,
        phases: phases
            .entries()
            .iter()
            .map(|(p, t)| (field.format_poly(p), *t))
            .collect(),
        sieve_size: sieve.len(),
        search,
        exhaustive_best_index: full.best_index,
        exhaustive_best_distance: full.best_distance,
        exhaustive_mean_distance: full.mean_distance,
    })
}
