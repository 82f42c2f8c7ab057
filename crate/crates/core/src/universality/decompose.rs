//! Splitting `log P_K(s, χ)` by prime degree windows.

use num_complex::Complex64;
use serde::Serialize;

use crate::characters::{root_of_unity, Character};
use crate::error::{Error, Result};
use crate::lfunctions::{log_p_k_s, CoprimePrimes};

/// The four windows of `log P_K`:
/// `f1` all powers of primes with `deg P ≤ μ`, `f2` primes with
/// `μ < deg P ≤ ρ`, `f3` primes with `ρ < deg P ≤ K`, `f4` powers `j ≥ 2` of
/// primes with `μ < deg P ≤ K`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Decomposition {
    pub f1: Complex64,
    pub f2: Complex64,
    pub f3: Complex64,
    pub f4: Complex64,
    /// `log P_K` summed directly
    pub direct: Complex64,
    pub residual: f64,
}

impl Decomposition {
    pub fn total(&self) -> Complex64 {
        self.f1 + self.f2 + self.f3 + self.f4
    }
}

fn check_windows(mu: usize, rho: usize, k: usize) -> Result<()> {
    if !(mu <= rho && rho <= k) {
        return Err(Error::pre(format!(
            "windows need mu <= rho <= K, got mu={mu}, rho={rho}, K={k}"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy)]
enum Powers {
    /// `j = 1`
    First,
    /// `1 ≤ j ≤ K/deg P`
    All(usize),
    /// `2 ≤ j ≤ K/deg P`
    Higher(usize),
}

/// Sums `χ(P^j) / (j |P|^{js})` over the primes with `lo < deg P ≤ hi`.
fn window_sum(
    chi: &Character<'_>,
    primes: &CoprimePrimes,
    lo: usize,
    hi: usize,
    powers: Powers,
    s: Complex64,
) -> Complex64 {
    let lq = (chi.group().field().q() as f64).ln();
    let l = chi.group().exponent();
    let mut acc = Complex64::new(0.0, 0.0);
    for (_, d, e) in primes.window(lo, hi) {
        let a = chi.angle_num_of_dlog(*e) as u128;
        let (j_min, j_max) = match powers {
            Powers::First => (1, 1),
            Powers::All(k) => (1, k / d),
            Powers::Higher(k) => (2, k / d),
        };
        for j in j_min..=j_max {
            let v = root_of_unity((a * j as u128 % l as u128) as u64, l);
            acc += v * (-s * (j * d) as f64 * lq).exp() / j as f64;
        }
    }
    acc
}

pub fn decompose_log_l(
    chi: &Character<'_>,
    primes: &CoprimePrimes,
    s: Complex64,
    mu: usize,
    rho: usize,
    k: usize,
) -> Result<Decomposition> {
    check_windows(mu, rho, k)?;
    if chi.is_principal() {
        return Err(Error::pre("decomposition needs a nonprincipal character"));
    }
    if !(s.re > 0.5) {
        return Err(Error::pre("decomposition needs sigma > 1/2"));
    }
    if primes.max_degree < k {
        return Err(Error::pre("prime list does not reach K"));
    }
    let f1 = window_sum(chi, primes, 0, mu, Powers::All(k), s);
    let f2 = window_sum(chi, primes, mu, rho, Powers::First, s);
    let f3 = window_sum(chi, primes, rho, k, Powers::First, s);
    let f4 = window_sum(chi, primes, mu, k, Powers::Higher(k), s);
    let direct = log_p_k_s(chi, primes, s, k)?;
    let mut d = Decomposition {
        f1,
        f2,
        f3,
        f4,
        direct,
        residual: 0.0,
    };
    d.residual = (d.total() - direct).norm();
    Ok(d)
}

/// `f3(s, χ)` alone.
pub fn f3_value(
    chi: &Character<'_>,
    primes: &CoprimePrimes,
    s: Complex64,
    rho: usize,
    k: usize,
) -> Complex64 {
    window_sum(chi, primes, rho, k, Powers::First, s)
}

/// The character-free `f1(s) = Σ_{deg P ≤ μ, P ∤ Q} Σ_{j ≤ K/deg P} 1/(j|P|^{js})`
/// as a function of `u = q^{-s}`.
pub fn f1_principal(primes: &CoprimePrimes, u: Complex64, mu: usize, k: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (_, d, _) in primes.window(0, mu) {
        for j in 1..=k / d {
            acc += u.powu((j * d) as u32) / j as f64;
        }
    }
    acc
}

/// The two candidate shapes for the size of `f4`: `μ^{-1} q^{-2dμ}` and
/// `μ^{-1} |Q|^{-2dμ}`, with `d = σ - 1/2`.
pub fn f4_bound_shapes(q: u32, deg_q: usize, mu: usize, d: f64) -> (f64, f64) {
    let m = mu.max(1) as f64;
    let qf = q as f64;
    (
        qf.powf(-2.0 * d * m) / m,
        qf.powf(-2.0 * d * m * deg_q as f64) / m,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Poly};
    use crate::characters::UnitGroup;
    use crate::lfunctions::{log_p_k_from_sums, u_of_s, LambdaTable};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parts_reconstruct_lambda_oracle() {
        let field = Field::gf(3, 1).unwrap();
        let m = Poly::from_coeffs(vec![field.from_int(1), field.from_int(0), field.from_int(0), field.from_int(1)]);
        let group = UnitGroup::new(&field, &m).unwrap();
        let k = 6;
        let primes = CoprimePrimes::new(&group, k).unwrap();
        let lambda = LambdaTable::new(&group, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let chi = Character::from_index(&group, rng.gen_range(1..group.order()));
            let s = Complex64::new(rng.gen_range(0.55..1.5), rng.gen_range(0.0..5.0));
            for (mu, rho) in [(0, 0), (1, 2), (2, 4), (0, 6), (3, 3)] {
                let d = decompose_log_l(&chi, &primes, s, mu, rho, k).unwrap();
                let oracle = log_p_k_from_sums(&lambda.sums(&chi), u_of_s(3, s), k);
                assert!((d.total() - oracle).norm() < 1e-12);
                assert!(d.residual < 1e-12);
            }
        }
    }

    #[test]
    fn empty_and_invalid_windows() {
        let field = Field::gf(3, 1).unwrap();
        let m = Poly::from_coeffs(vec![field.from_int(0), field.from_int(0), field.from_int(1)]);
        let group = UnitGroup::new(&field, &m).unwrap();
        let primes = CoprimePrimes::new(&group, 3).unwrap();
        let chi = Character::from_index(&group, 1);
        let s = Complex64::new(0.8, 0.3);
        let d = decompose_log_l(&chi, &primes, s, 0, 0, 0).unwrap();
        assert_eq!(d.total(), Complex64::new(0.0, 0.0));
        assert!(decompose_log_l(&chi, &primes, s, 2, 1, 3).is_err());
        assert!(decompose_log_l(&chi, &primes, s, 0, 2, 1).is_err());
        assert!(decompose_log_l(&Character::principal(&group), &primes, s, 0, 1, 2).is_err());
        // f3 vanishes when K = rho
        let d = decompose_log_l(&chi, &primes, s, 0, 2, 2).unwrap();
        assert_eq!(d.f3, Complex64::new(0.0, 0.0));
    }
}
