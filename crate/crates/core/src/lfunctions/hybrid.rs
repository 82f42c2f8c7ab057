//! Euler products, the truncated prime sums `𝒫_K` (u-form) and `P_K`
//! (s-form), the zero tail `𝒵_K`, and the checks built on them.

use num_complex::Complex64;
use serde::Serialize;

use super::lpoly::LPolynomial;
use super::roots::RootReport;
use crate::algebra::{factorize, factorize_with, Field, Poly, PrimeTable, ENUMERATION_LIMIT};
use crate::characters::{root_of_unity, Character, UnitGroup};
use crate::error::{Error, Result};

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `𝓛(u, χ_0) = Π_{P | Q} (1 - u^{deg P}) / (1 - qu)`.
pub fn zeta_q(field: &Field, modulus: &Poly, u: Complex64) -> Result<Complex64> {
    let q = field.q() as f64;
    let denom = Complex64::new(1.0, 0.0) - u * q;
    if denom.norm() < 1e-14 {
        return Err(Error::Pole(format!("u = 1/q = {}", 1.0 / q)));
    }
    let fac = factorize(field, modulus)?;
    let num = fac
        .factors
        .iter()
        .map(|(p, _)| Complex64::new(1.0, 0.0) - u.powu(p.degree() as u32))
        .product::<Complex64>();
    Ok(num / denom)
}

/// Primes coprime to Q up to some degree, with their discrete logs.
#[derive(Clone, Debug)]
pub struct CoprimePrimes {
    pub max_degree: usize,
    /// `(prime, degree, mixed-radix dlog)` in canonical order.
    pub entries: Vec<(Poly, usize, u64)>,
}

impl CoprimePrimes {
    pub fn new(group: &UnitGroup, max_degree: usize) -> Result<Self> {
        let table = PrimeTable::new(group.field(), max_degree)?;
        Ok(Self::from_table(group, &table, max_degree))
    }

    pub fn from_table(group: &UnitGroup, table: &PrimeTable, max_degree: usize) -> Self {
        let entries = table
            .iter()
            .filter(|(d, _)| *d <= max_degree)
            .filter_map(|(d, p)| {
                group
                    .dlog_index(group.residue_index(p))
                    .map(|e| (p.clone(), d, e))
            })
            .collect();
        CoprimePrimes {
            max_degree: max_degree.min(table.max_degree()),
            entries,
        }
    }

    /// Entries with `lo < deg P ≤ hi`.
    pub fn window(&self, lo: usize, hi: usize) -> impl Iterator<Item = &(Poly, usize, u64)> {
        self.entries
            .iter()
            .filter(move |(_, d, _)| *d > lo && *d <= hi)
    }
}

/// `Π_{deg P ≤ maxdeg} (1 - χ(P) u^{deg P})^{-1}`, valid for `|u| < 1/q`.
pub fn euler_product_truncated(
    chi: &Character<'_>,
    primes: &PrimeTable,
    u: Complex64,
    maxdeg: usize,
) -> Result<Complex64> {
    let q = chi.group().field().q() as f64;
    if u.norm() >= 1.0 / q {
        return Err(Error::domain(format!(
            "Euler product needs |u| < 1/q, got |u| = {}",
            u.norm()
        )));
    }
    if primes.max_degree() < maxdeg {
        return Err(Error::pre("prime table does not reach maxdeg"));
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for (d, p) in primes.iter().take_while(|(d, _)| *d <= maxdeg) {
        let v = chi.eval(p);
        prod /= Complex64::new(1.0, 0.0) - v * u.powu(d as u32);
    }
    Ok(prod)
}

/// For each `k ≤ K`, the monic `f` of degree `k` with `Λ(f) ≠ 0` that are
/// units mod Q, found by factoring every monic polynomial.
#[derive(Clone, Debug)]
pub struct LambdaTable {
    k_max: usize,
    /// `by_degree[k-1]` holds `(dlog, Λ(f))`
    by_degree: Vec<Vec<(u64, u32)>>,
}

impl LambdaTable {
    pub fn new(group: &UnitGroup, k_max: usize) -> Result<Self> {
        let field = group.field();
        let q = field.q() as u128;
        let total: u128 = (1..=k_max as u32).map(|k| q.pow(k)).sum();
        if total > ENUMERATION_LIMIT as u128 {
            return Err(Error::Capacity {
                what: "monic polynomials up to degree K",
                value: total,
                limit: ENUMERATION_LIMIT as u128,
            });
        }
        let primes = PrimeTable::new(field, k_max / 2)?;
        let mut by_degree = Vec::with_capacity(k_max);
        for k in 1..=k_max {
            let mut row = Vec::new();
            for f in field.monic_polys(k) {
                let Some(e) = group.dlog_index(group.residue_index(&f)) else {
                    continue;
                };
                let fac = factorize_with(field, &primes, &f)?;
                let lambda = crate::algebra::von_mangoldt_of(&fac);
                if lambda > 0 {
                    row.push((e, lambda));
                }
            }
            by_degree.push(row);
        }
        Ok(LambdaTable { k_max, by_degree })
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// `b_k(χ) = Σ_{deg f = k} Λ(f) χ(f)`, `k = 1..K`.
    pub fn sums(&self, chi: &Character<'_>) -> Vec<Complex64> {
        let l = chi.group().exponent();
        self.by_degree
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(e, lam)| root_of_unity(chi.angle_num_of_dlog(e), l) * lam as f64)
                    .sum()
            })
            .collect()
    }
}

/// `log 𝒫_K(u, χ) = Σ_{k ≤ K} b_k u^k / k` from precomputed `b_k`.
pub fn log_p_k_from_sums(sums: &[Complex64], u: Complex64, k: usize) -> Complex64 {
    let mut acc = c0();
    let mut uk = Complex64::new(1.0, 0.0);
    for (i, b) in sums.iter().take(k).enumerate() {
        uk *= u;
        acc += b * uk / (i + 1) as f64;
    }
    acc
}

/// `𝒫_K(u, χ) = exp(Σ_{k=1}^K Σ_{deg f = k} Λ(f) χ(f) u^k / k)`.
pub fn p_k(chi: &Character<'_>, table: &LambdaTable, u: Complex64, k: usize) -> Result<Complex64> {
    if k > table.k_max() {
        return Err(Error::pre("Lambda table does not reach K"));
    }
    Ok(log_p_k_from_sums(&table.sums(chi), u, k).exp())
}

/// `log P_K(s, χ) = Σ_{deg P ≤ K} Σ_{j ≤ K/deg P} χ(P^j) / (j |P|^{js})`,
/// summed over primes.
pub fn log_p_k_s(chi: &Character<'_>, primes: &CoprimePrimes, s: Complex64, k: usize) -> Result<Complex64> {
    if primes.max_degree < k {
        return Err(Error::pre("prime list does not reach K"));
    }
    let lq = (chi.group().field().q() as f64).ln();
    let l = chi.group().exponent();
    let mut acc = c0();
    for (_, d, e) in primes.window(0, k) {
        let a = chi.angle_num_of_dlog(*e);
        for j in 1..=k / d {
            let v = root_of_unity((a as u128 * j as u128 % l as u128) as u64, l);
            acc += v * (-s * (j * d) as f64 * lq).exp() / j as f64;
        }
    }
    Ok(acc)
}

pub fn p_k_s(chi: &Character<'_>, primes: &CoprimePrimes, s: Complex64, k: usize) -> Result<Complex64> {
    Ok(log_p_k_s(chi, primes, s, k)?.exp())
}

/// `𝒵_K(u, χ) = exp(-Σ_j Σ_{k>K} (α_j u)^k / k)`, with the tail in closed
/// form `Σ_{k>K} z^k/k = -log(1-z) - Σ_{k≤K} z^k/k`.
pub fn z_k(inverse_roots: &[Complex64], u: Complex64, k: usize) -> Result<Complex64> {
    let mut log_z = c0();
    for &a in inverse_roots {
        let z = a * u;
        if z.norm() >= 1.0 {
            return Err(Error::domain(format!(
                "|alpha u| = {} >= 1; the zero tail diverges",
                z.norm()
            )));
        }
        let mut partial = c0();
        let mut zk = Complex64::new(1.0, 0.0);
        for i in 1..=k {
            zk *= z;
            partial += zk / i as f64;
        }
        log_z += (Complex64::new(1.0, 0.0) - z).ln() + partial;
    }
    Ok(log_z.exp())
}

/// `max_u |𝓛(u, χ) - 𝒫_K(u, χ) 𝒵_K(u, χ)|` over the points.
pub fn hybrid_check(
    lpoly: &LPolynomial<'_>,
    roots: &RootReport,
    table: &LambdaTable,
    points: &[Complex64],
    k: usize,
) -> Result<f64> {
    if lpoly.chi().is_principal() {
        return Err(Error::Unsupported("hybrid formula needs a nonprincipal character".into()));
    }
    let bound = (lpoly.q() as f64).powf(-0.5);
    if points.iter().any(|u| u.norm() > bound) {
        return Err(Error::domain("hybrid check needs |u| <= q^(-1/2)"));
    }
    if k > table.k_max() {
        return Err(Error::pre("Lambda table does not reach K"));
    }
    let sums = table.sums(lpoly.chi());
    let mut worst = 0.0f64;
    for &u in points {
        let lhs = lpoly.eval(u);
        let rhs = log_p_k_from_sums(&sums, u, k).exp() * z_k(&roots.roots, u, k)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub k: usize,
    pub deg_q: usize,
    /// `max |L/P_K - 1|` over the points
    pub max_rel_error: f64,
    /// `max |L/P_K - 1| / ((deg Q / K) q^{(1/2 - σ) K})`
    pub max_ratio: f64,
}

pub fn lemma2_ratio_check(
    lpoly: &LPolynomial<'_>,
    primes: &CoprimePrimes,
    s_points: &[Complex64],
    k: usize,
) -> Result<RatioReport> {
    if k == 0 {
        return Err(Error::pre("K must be at least 1"));
    }
    if s_points.iter().any(|s| !(s.re > 0.5)) {
        return Err(Error::domain("ratio check needs Re s > 1/2"));
    }
    let q = lpoly.q() as f64;
    let deg_q = lpoly.chi().group().modulus().degree();
    let mut max_rel_error = 0.0f64;
    let mut max_ratio = 0.0f64;
    for &s in s_points {
        let rel = (lpoly.eval_s(s) / p_k_s(lpoly.chi(), primes, s, k)? - 1.0).norm();
        let scale = deg_q as f64 / k as f64 * q.powf((0.5 - s.re) * k as f64);
        max_rel_error = max_rel_error.max(rel);
        max_ratio = max_ratio.max(rel / scale);
    }
    Ok(RatioReport {
        k,
        deg_q,
        max_rel_error,
        max_ratio,
    })
}
