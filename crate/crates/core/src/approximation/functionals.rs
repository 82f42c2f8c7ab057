//! The functionals `g`, `h` on characters and their mean values.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::peak::PeakPolynomial;
use crate::algebra::{Field, Poly};
use crate::characters::{Character, UnitGroup};
use crate::error::{Error, Result};
use crate::lfunctions::CoprimePrimes;

/// Character-family sweeps beyond this many `(χ, P)` pairs are refused.
pub const PAIR_LIMIT: u128 = 1 << 32;

/// Target angles `θ_P ∈ [0, 1)` for distinct primes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhaseAssignment {
    entries: Vec<(Poly, f64)>,
}

impl PhaseAssignment {
    pub fn new(entries: Vec<(Poly, f64)>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (p, theta) in &entries {
            if !(0.0..1.0).contains(theta) {
                return Err(Error::pre(format!("phase {theta} outside [0, 1)")));
            }
            if !p.is_monic() || p.degree() == 0 {
                return Err(Error::pre("phase keys must be monic primes"));
            }
            if !seen.insert(p.clone()) {
                return Err(Error::pre("duplicate prime in phase assignment"));
            }
        }
        Ok(PhaseAssignment { entries })
    }

    /// All phases zero.
    pub fn zeros(primes: impl IntoIterator<Item = Poly>) -> Result<Self> {
        Self::new(primes.into_iter().map(|p| (p, 0.0)).collect())
    }

    pub fn entries(&self) -> &[(Poly, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks coprimality to Q and `mu < deg P ≤ rho` for every key.
    pub fn check_window(&self, group: &UnitGroup, mu: usize, rho: usize) -> Result<()> {
        for (p, _) in &self.entries {
            let d = p.degree();
            if d <= mu || d > rho {
                return Err(Error::pre(format!(
                    "prime of degree {d} outside the window ({mu}, {rho}]"
                )));
            }
        }
        self.prepare(group).map(|_| ())
    }

    /// Discrete logs of the keys.
    pub fn prepare(&self, group: &UnitGroup) -> Result<PreparedPhases> {
        let field = group.field();
        let mut dlogs = Vec::with_capacity(self.entries.len());
        for (p, _) in &self.entries {
            match group.dlog_index(group.residue_index(p)) {
                Some(e) => dlogs.push(e),
                None => {
                    return Err(Error::pre(format!(
                        "prime {} is not coprime to Q",
                        field.format_poly(p)
                    )))
                }
            }
        }
        Ok(PreparedPhases {
            dlogs,
            thetas: self.entries.iter().map(|e| e.1).collect(),
        })
    }

    /// One line `P-text θ` per prime, θ to 15 decimals.
    pub fn to_text(&self, field: &Field) -> String {
        let mut out = String::new();
        for (p, theta) in &self.entries {
            out.push_str(&format!("{} {:.15}\n", field.format_poly(p), theta));
        }
        out
    }

    pub fn parse(field: &Field, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (poly, theta) = line
                .rsplit_once(' ')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `P theta`", n + 1)))?;
            let theta: f64 = theta
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad angle {theta:?}", n + 1)))?;
            entries.push((field.parse_poly(poly)?, theta));
        }
        Self::new(entries)
    }
}

/// Phases with the discrete logs of their primes resolved.
#[derive(Clone, Debug)]
pub struct PreparedPhases {
    pub dlogs: Vec<u64>,
    pub thetas: Vec<f64>,
}

impl PreparedPhases {
    /// `arg χ(P)/2π - θ_P` for each prime.
    pub fn offsets(&self, chi: &Character<'_>) -> Vec<f64> {
        let l = chi.group().exponent() as f64;
        self.dlogs
            .iter()
            .zip(&self.thetas)
            .map(|(&e, &t)| chi.angle_num_of_dlog(e) as f64 / l - t)
            .collect()
    }

    pub fn g(&self, chi: &Character<'_>, f: &PeakPolynomial) -> f64 {
        self.offsets(chi)
            .into_iter()
            .map(|x| f.abs(x).powi(2))
            .product()
    }

    pub fn h(&self, chi: &Character<'_>, f: &PeakPolynomial, epsilon: f64) -> f64 {
        let factors: Vec<f64> = self
            .offsets(chi)
            .into_iter()
            .map(|x| f.abs(x).powi(2))
            .collect();
        h_from_factors(&factors, epsilon)
    }
}

/// `Π F_P - ε Σ_{P1} Π_{P≠P1} F_P` via prefix and suffix products.
pub fn h_from_factors(factors: &[f64], epsilon: f64) -> f64 {
    let n = factors.len();
    let mut suffix = vec![1.0; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] * factors[i];
    }
    let mut prefix = 1.0;
    let mut loo = 0.0;
    for i in 0..n {
        loo += prefix * suffix[i + 1];
        prefix *= factors[i];
    }
    prefix - epsilon * loo
}

/// How ε in `h` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", content = "value", rename_all = "lowercase")]
pub enum EpsilonMode {
    /// `4e^{-2πKδ}`, the square of the off-peak bound.
    BaseE,
    /// `4q^{-2πKδ}`.
    BaseQ,
    Fixed(f64),
}

impl EpsilonMode {
    pub fn value(self, q: u32, k: usize, delta: f64) -> f64 {
        let x = 2.0 * PI * k as f64 * delta;
        match self {
            EpsilonMode::BaseE => 4.0 * (-x).exp(),
            EpsilonMode::BaseQ => 4.0 * (q as f64).powf(-x),
            EpsilonMode::Fixed(e) => e,
        }
    }
}

pub fn g_func(chi: &Character<'_>, phases: &PhaseAssignment, f: &PeakPolynomial) -> Result<f64> {
    Ok(phases.prepare(chi.group())?.g(chi, f))
}

pub fn h_func(
    chi: &Character<'_>,
    phases: &PhaseAssignment,
    f: &PeakPolynomial,
    epsilon: f64,
) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::pre("epsilon must be positive"));
    }
    Ok(phases.prepare(chi.group())?.h(chi, f, epsilon))
}

fn check_pairs(group: &UnitGroup, primes: usize) -> Result<()> {
    let pairs = group.order() as u128 * primes.max(1) as u128;
    if pairs > PAIR_LIMIT {
        return Err(Error::Capacity {
            what: "characters x primes",
            value: pairs,
            limit: PAIR_LIMIT,
        });
    }
    Ok(())
}

/// Per-character values in odometer order, index 0 (principal) included.
fn family_map<T: Send>(group: &UnitGroup, op: impl Fn(&Character<'_>) -> T + Sync) -> Vec<T> {
    (0..group.order())
        .into_par_iter()
        .map(|i| op(&Character::from_index(group, i)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanValueReport {
    pub deg_q: usize,
    pub phi: u64,
    pub primes: usize,
    pub k: usize,
    pub delta: f64,
    pub kappa: f64,
    pub epsilon: f64,
    /// `φ(Q) κ^{|𝒫|}`
    pub main: f64,
    /// `Σ_{χ≠χ0} g(χ)`
    pub sum_g: f64,
    /// `|Σ g - main| / (|𝒫|^K κ^{|𝒫|})`
    pub g_discrepancy: f64,
    pub sum_h: f64,
    pub sum_h_plus: f64,
    /// `|Σ h⁺ / main - 1|`
    pub h_relative_error: f64,
    /// `h_relative_error · deg Q`
    pub h_scaled_error: f64,
    /// `|𝒫|^K ≤ |Q|^{1/2}`
    pub error_term_small: bool,
    /// characters with `h > g` (should be none)
    pub h_exceeds_g: usize,
}

/// Exhaustive `Σ_{χ≠χ0} g`, `Σ h` and `Σ h⁺`.
pub fn mean_value_experiment(
    group: &UnitGroup,
    phases: &PhaseAssignment,
    f: &PeakPolynomial,
    epsilon: EpsilonMode,
) -> Result<MeanValueReport> {
    let prepared = phases.prepare(group)?;
    check_pairs(group, phases.len())?;
    let q = group.field().q();
    let eps = epsilon.value(q, f.k, f.delta);
    if !(eps > 0.0) {
        return Err(Error::pre("epsilon must be positive"));
    }
    let values = family_map(group, |chi| {
        let factors: Vec<f64> = prepared
            .offsets(chi)
            .into_iter()
            .map(|x| f.abs(x).powi(2))
            .collect();
        (factors.iter().product::<f64>(), h_from_factors(&factors, eps))
    });
    let (mut sum_g, mut sum_h, mut sum_h_plus) = (0.0, 0.0, 0.0);
    let mut h_exceeds_g = 0;
    for &(g, h) in &values[1..] {
        sum_g += g;
        sum_h += h;
        sum_h_plus += h.max(0.0);
        if h > g {
            h_exceeds_g += 1;
        }
    }
    let n = phases.len();
    let kappa = f.kappa();
    let kp = kappa.powi(n as i32);
    let phi = group.order();
    let main = phi as f64 * kp;
    let deg_q = group.modulus().degree();
    let scale = (n as f64).powi(f.k as i32) * kp;
    let h_relative_error = (sum_h_plus / main - 1.0).abs();
    Ok(MeanValueReport {
        deg_q,
        phi,
        primes: n,
        k: f.k,
        delta: f.delta,
        kappa,
        epsilon: eps,
        main,
        sum_g,
        g_discrepancy: (sum_g - main).abs() / scale,
        sum_h,
        sum_h_plus,
        h_relative_error,
        h_scaled_error: h_relative_error * deg_q as f64,
        error_term_small: (n as f64).powi(f.k as i32)
            <= (q as f64).powf(deg_q as f64 / 2.0),
        h_exceeds_g,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TailReport {
    pub s: Complex64,
    pub rho: f64,
    pub z: usize,
    pub tail_primes: usize,
    /// `Σ_χ g(χ) |Σ b_P χ(P)|²`, principal character included
    pub lhs: f64,
    /// `φ(Q) κ^{|𝒫|} q^{ρ(1-2σ)} / ρ`
    pub bound_shape: f64,
    pub ratio: f64,
    /// `Σ |b_P|²` over the tail
    pub tail_l2: f64,
    /// `lhs / (φ κ^{|𝒫|} Σ|b_P|²)`
    pub l2_ratio: f64,
}

/// Tail of a mean value weighted by `g`, primes `ρ < deg P ≤ z` coprime to Q.
/// `b` defaults to `|P|^{-s}`; it must satisfy `|b_P| ≤ |P|^{-σ}`.
pub fn mv_tail_experiment(
    group: &UnitGroup,
    phases: &PhaseAssignment,
    f: &PeakPolynomial,
    rho: f64,
    s: Complex64,
    z: usize,
    b: Option<&(dyn Fn(&Poly, usize) -> Complex64 + Sync)>,
) -> Result<TailReport> {
    if !(rho > 0.0 && (z as f64) > rho) {
        return Err(Error::pre("tail needs 0 < rho < z"));
    }
    if !(s.re > 0.5) {
        return Err(Error::pre("tail needs sigma > 1/2"));
    }
    let prepared = phases.prepare(group)?;
    let q = group.field().q();
    let qf = q as f64;
    let primes = CoprimePrimes::new(group, z)?;
    let lo = (rho + 1e-12).floor() as usize;
    let mut tail = Vec::new();
    for (p, d, e) in primes.window(lo, z) {
        let bp = match b {
            Some(b) => b(p, *d),
            None => (-s * (*d as f64) * qf.ln()).exp(),
        };
        if bp.norm() > qf.powf(-s.re * *d as f64) * (1.0 + 1e-12) {
            return Err(Error::pre(format!(
                "|b_P| exceeds |P|^(-sigma) at {}",
                group.field().format_poly(p)
            )));
        }
        tail.push((*e, bp));
    }
    check_pairs(group, prepared.dlogs.len() + tail.len())?;
    let l = group.exponent();
    let values = family_map(group, |chi| {
        let g = prepared.g(chi, f);
        let sum: Complex64 = tail
            .iter()
            .map(|&(e, bp)| bp * crate::characters::root_of_unity(chi.angle_num_of_dlog(e), l))
            .sum();
        g * sum.norm_sqr()
    });
    let lhs: f64 = values.iter().sum();
    let kp = f.kappa().powi(phases.len() as i32);
    let phi = group.order() as f64;
    let bound_shape = phi * kp * qf.powf(rho * (1.0 - 2.0 * s.re)) / rho;
    let tail_l2: f64 = tail.iter().map(|t| t.1.norm_sqr()).sum();
    Ok(TailReport {
        s,
        rho,
        z,
        tail_primes: tail.len(),
        lhs,
        bound_shape,
        ratio: lhs / bound_shape,
        tail_l2,
        l2_ratio: if tail_l2 > 0.0 {
            lhs / (phi * kp * tail_l2)
        } else {
            0.0
        },
    })
}
