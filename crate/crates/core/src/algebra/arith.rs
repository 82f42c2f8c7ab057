//! Arithmetic functions on F_q[x]: irreducibility, prime enumeration and
//! counting, factorization, von Mangoldt, Euler phi.

use num_bigint::BigUint;
use serde::Serialize;

use super::field::{Field, Fq};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Largest number of candidate polynomials a single prime enumeration may
/// scan.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

fn require_monic_nonconstant(f: &Poly, what: &str) -> Result<usize> {
    if !f.is_monic() || f.is_constant() {
        return Err(Error::pre(format!("{what} requires a monic polynomial of degree >= 1")));
    }
    Ok(f.degree())
}

/// `a^e mod m` for a small exponent.
fn pow_mod_u64(field: &Field, a: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut base = field.poly_rem(a, m).expect("nonzero modulus");
    let mut acc = field.poly_rem(&Poly::one(), m).expect("nonzero modulus");
    while e > 0 {
        if e & 1 == 1 {
            acc = field.poly_mul_mod(&acc, &base, m).expect("nonzero modulus");
        }
        e >>= 1;
        if e > 0 {
            base = field.poly_mul_mod(&base, &base, m).expect("nonzero modulus");
        }
    }
    acc
}

/// Ben-Or test: `f` of degree n is irreducible iff
/// `gcd(x^{q^i} - x, f) = 1` for every `1 <= i <= n/2`.
pub fn irreducible_test(field: &Field, f: &Poly) -> Result<bool> {
    let n = require_monic_nonconstant(f, "irreducible_test")?;
    let x = Poly::x();
    let q = field.q() as u64;
    let mut h = field.poly_rem(&x, f)?;
    for _ in 1..=n / 2 {
        h = pow_mod_u64(field, &h, q, f);
        let g = field.poly_gcd(&field.poly_sub(&h, &x), f);
        if !(g.is_constant()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic irreducible polynomials of degree `d` in canonical order.
pub fn primes_of_degree(field: &Field, d: usize) -> Result<Vec<Poly>> {
    if d == 0 {
        return Err(Error::pre("prime degree must be at least 1"));
    }
    let count = (field.q() as u128).pow(d as u32);
    if count > ENUMERATION_LIMIT as u128 {
        return Err(Error::Capacity {
            what: "monic polynomials to enumerate",
            value: count,
            limit: ENUMERATION_LIMIT as u128,
        });
    }
    if d == 1 {
        return Ok(field.monic_polys(1).collect());
    }
    let mut out = Vec::new();
    for f in field.monic_polys(d) {
        // cheap linear-factor screen before the full test
        if f.coeff(0).is_zero() {
            continue;
        }
        if irreducible_test(field, &f)? {
            out.push(f);
        }
    }
    Ok(out)
}

pub(crate) fn mobius(mut n: u64) -> i32 {
    let mut mu = 1;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of monic irreducibles of degree `d` over F_q, by the Möbius
/// inversion formula `(1/d) Σ_{e | d} μ(e) q^{d/e}`.
///
/// Panics if `q^d` does not fit in an i128 or `d == 0`.
pub fn prime_count(q: u32, d: usize) -> u128 {
    assert!(d >= 1, "prime degree must be at least 1");
    let d64 = d as u64;
    let total: i128 = (1..=d64)
        .filter(|e| d64 % e == 0)
        .map(|e| {
            let pow = (q as i128)
                .checked_pow((d64 / e) as u32)
                .expect("q^d exceeds i128 range");
            mobius(e) as i128 * pow
        })
        .sum();
    (total / d as i128) as u128
}

/// Primes grouped by degree, `1..=max_degree`.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    by_degree: Vec<Vec<Poly>>,
}

impl PrimeTable {
    pub fn new(field: &Field, max_degree: usize) -> Result<Self> {
        let by_degree = (1..=max_degree)
            .map(|d| primes_of_degree(field, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(PrimeTable { by_degree })
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len()
    }

    pub fn of_degree(&self, d: usize) -> &[Poly] {
        if d == 0 || d > self.by_degree.len() {
            return &[];
        }
        &self.by_degree[d - 1]
    }

    /// `(degree, prime)` pairs in increasing canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.by_degree
            .iter()
            .enumerate()
            .flat_map(|(i, ps)| ps.iter().map(move |p| (i + 1, p)))
    }
}

/// `unit · Π P_i^{e_i}` with monic, distinct, canonically ordered primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fq,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self, field: &Field) -> Poly {
        self.factors.iter().fold(Poly::constant(self.unit), |acc, (p, e)| {
            field.poly_mul(&acc, &field.poly_pow(p, *e))
        })
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }
}

/// Trial division by every prime of degree at most `deg f / 2`.
pub fn factorize(field: &Field, f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::domain("cannot factor the zero polynomial"));
    }
    let table = PrimeTable::new(field, f.degree() / 2)?;
    factorize_with(field, &table, f)
}

/// Factorization against a prebuilt table, which must cover degrees up to
/// `deg f / 2`.
pub fn factorize_with(field: &Field, table: &PrimeTable, f: &Poly) -> Result<Factorization> {
    let (unit, mut rest) = field
        .poly_monic(f)
        .ok_or_else(|| Error::domain("cannot factor the zero polynomial"))?;
    if table.max_degree() < rest.degree() / 2 {
        return Err(Error::pre("prime table does not reach deg f / 2"));
    }
    let mut factors = Vec::new();
    'outer: for d in 1..=table.max_degree() {
        for p in table.of_degree(d) {
            if rest.degree() < 2 * d {
                break 'outer;
            }
            let mut e = 0;
            loop {
                let (qt, r) = field.poly_divrem(&rest, p)?;
                if !r.is_zero() {
                    break;
                }
                rest = qt;
                e += 1;
            }
            if e > 0 {
                factors.push((p.clone(), e));
            }
        }
    }
    if !rest.is_constant() {
        match factors.iter_mut().find(|(p, _)| *p == rest) {
            Some(entry) => entry.1 += 1,
            None => factors.push((rest, 1)),
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// `Λ(f) = deg P` if `f = P^n`, otherwise 0.
pub fn von_mangoldt(field: &Field, f: &Poly) -> Result<u32> {
    require_monic_nonconstant(f, "von_mangoldt")?;
    let fac = factorize(field, f)?;
    Ok(von_mangoldt_of(&fac))
}

pub(crate) fn von_mangoldt_of(fac: &Factorization) -> u32 {
    match fac.factors.as_slice() {
        [(p, _)] => p.degree() as u32,
        _ => 0,
    }
}

/// `φ(Q) = |Q| Π_{P | Q} (1 - 1/|P|)`.
pub fn euler_phi(field: &Field, modulus: &Poly) -> Result<u128> {
    require_monic_nonconstant(modulus, "euler_phi")?;
    let fac = factorize(field, modulus)?;
    phi_of(field.q(), &fac)
}

pub(crate) fn phi_of(q: u32, fac: &Factorization) -> Result<u128> {
    let overflow = || Error::Capacity {
        what: "phi(Q)",
        value: u128::MAX,
        limit: u128::MAX,
    };
    fac.factors.iter().try_fold(1u128, |acc, (p, e)| {
        let norm = (q as u128).checked_pow(p.degree() as u32).ok_or_else(overflow)?;
        let local = norm
            .checked_pow(e - 1)
            .and_then(|x| x.checked_mul(norm - 1))
            .ok_or_else(overflow)?;
        acc.checked_mul(local).ok_or_else(overflow)
    })
}

/// Report on `φ(Q) · log_q(deg Q) / |Q|` for Q the product of every prime of
/// degree at most `n`, the case where `φ(Q)/|Q|` is smallest for its size.
#[derive(Clone, Debug, Serialize)]
pub struct PhiBoundReport {
    pub q: u32,
    pub n: usize,
    pub deg_q: usize,
    /// Exact decimal value.
    pub phi: String,
    pub norm: String,
    pub ratio: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Pass threshold for [`phi_lower_bound_check`].
pub const PHI_RATIO_THRESHOLD: f64 = 0.25;
const PHI_CHECK_MAX_DEGREE: usize = 1 << 16;

pub fn phi_lower_bound_check(field: &Field, n: usize) -> Result<PhiBoundReport> {
    if n == 0 {
        return Err(Error::pre("n must be at least 1"));
    }
    let q = field.q();
    let counts: Vec<u128> = (1..=n).map(|j| prime_count(q, j)).collect();
    let deg_q: u128 = counts
        .iter()
        .enumerate()
        .map(|(i, c)| (i as u128 + 1) * c)
        .sum();
    if deg_q > PHI_CHECK_MAX_DEGREE as u128 {
        return Err(Error::Capacity {
            what: "deg Q",
            value: deg_q,
            limit: PHI_CHECK_MAX_DEGREE as u128,
        });
    }
    let deg_q = deg_q as usize;

    // the modulus itself, to confirm the degree bookkeeping
    let table = PrimeTable::new(field, n)?;
    let product = table
        .iter()
        .fold(Poly::one(), |acc, (_, p)| field.poly_mul(&acc, p));
    debug_assert_eq!(product.degree(), deg_q);

    let qb = BigUint::from(q);
    let mut phi = BigUint::from(1u32);
    for (_, p) in table.iter() {
        let norm = qb.pow(p.degree() as u32);
        phi *= norm - 1u32;
    }
    let norm = qb.pow(product.degree() as u32);

    let log_ratio: f64 = table
        .iter()
        .map(|(d, _)| (-(q as f64).powi(-(d as i32))).ln_1p())
        .sum();
    let log_q_deg = (deg_q as f64).ln() / (q as f64).ln();
    let ratio = log_ratio.exp() * log_q_deg;
    Ok(PhiBoundReport {
        q,
        n,
        deg_q,
        phi: phi.to_string(),
        norm: norm.to_string(),
        ratio,
        threshold: PHI_RATIO_THRESHOLD,
        pass: ratio > PHI_RATIO_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> Field {
        Field::gf(3, 1).unwrap()
    }

    fn p(f: &Field, s: &str) -> Poly {
        f.parse_poly(s).unwrap()
    }

    /// Brute force: no monic divisor of degree 1..deg-1.
    fn irreducible_by_trial(f: &Field, g: &Poly) -> bool {
        let n = g.degree();
        (1..n).all(|d| {
            f.monic_polys(d)
                .all(|h| !f.poly_rem(g, &h).unwrap().is_zero())
        })
    }

    /// Count residues of degree < deg Q coprime to Q.
    fn phi_brute(f: &Field, m: &Poly) -> u128 {
        let n = (f.q() as u64).pow(m.degree() as u32);
        (1..n)
            .filter(|&i| f.poly_gcd(&f.poly_from_index(i), m) == Poly::one())
            .count() as u128
    }

    #[test]
    fn irreducibility_examples() {
        let f = f3();
        assert!(irreducible_test(&f, &p(&f, "1 1")).unwrap());
        assert!(!irreducible_test(&f, &p(&f, "0 0 1")).unwrap());
        assert!(irreducible_test(&f, &p(&f, "1 0 1")).unwrap());
        assert!(irreducible_test(&f, &p(&f, "2 1")).is_ok());
        assert!(irreducible_test(&f, &p(&f, "2 2")).is_err());
        assert!(irreducible_test(&f, &Poly::one()).is_err());
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for (pp, k, max_d) in [(3, 1, 5), (5, 1, 3), (3, 2, 2)] {
            let f = Field::gf(pp, k).unwrap();
            for d in 1..=max_d {
                for g in f.monic_polys(d) {
                    assert_eq!(irreducible_test(&f, &g).unwrap(), irreducible_by_trial(&f, &g));
                }
            }
        }
    }

    #[test]
    fn prime_lists() {
        let f = f3();
        let lin: Vec<String> = primes_of_degree(&f, 1)
            .unwrap()
            .iter()
            .map(|x| f.format_poly(x))
            .collect();
        assert_eq!(lin, ["0 1", "1 1", "2 1"]);
        assert_eq!(primes_of_degree(&f, 2).unwrap().len(), 3);
        let f5 = Field::gf(5, 1).unwrap();
        assert_eq!(primes_of_degree(&f5, 2).unwrap().len(), (25 - 5) / 2);
    }

    #[test]
    fn prime_count_matches_enumeration() {
        assert_eq!(prime_count(3, 1), 3);
        assert_eq!(prime_count(3, 2), 3);
        assert_eq!(prime_count(3, 4), 18);
        for (q, k, max_d) in [(3u32, 1u32, 7usize), (5, 1, 4), (7, 1, 3), (9, 2, 3)] {
            let f = Field::gf(if k == 1 { q } else { 3 }, k).unwrap();
            for d in 1..=max_d {
                assert_eq!(
                    prime_count(q, d),
                    primes_of_degree(&f, d).unwrap().len() as u128,
                    "q={q} d={d}"
                );
            }
        }
    }

    #[test]
    fn degree_sum_identity() {
        // Σ_{d | n} d π(d) = q^n
        for q in [3u32, 5, 7, 9] {
            for n in 1..=8usize {
                let s: u128 = (1..=n)
                    .filter(|d| n % d == 0)
                    .map(|d| d as u128 * prime_count(q, d))
                    .sum();
                assert_eq!(s, (q as u128).pow(n as u32));
            }
        }
        // product of all primes of degree <= n has degree Σ d π(d)
        let f = f3();
        let table = PrimeTable::new(&f, 3).unwrap();
        let prod = table.iter().fold(Poly::one(), |a, (_, p)| f.poly_mul(&a, p));
        let expected: u128 = (1..=3).map(|d| d as u128 * prime_count(3, d)).sum();
        assert_eq!(prod.degree() as u128, expected);
    }

    #[test]
    fn factorization_examples() {
        let f = f3();
        let fx = factorize(&f, &p(&f, "0 0 1")).unwrap();
        assert_eq!(fx.unit, Fq::ONE);
        assert_eq!(fx.factors, vec![(p(&f, "0 1"), 2)]);

        let fx = factorize(&f, &p(&f, "2 0 2")).unwrap();
        assert_eq!(fx.unit, Fq::from_index(2));
        assert_eq!(fx.factors, vec![(p(&f, "1 0 1"), 1)]);

        // x^3 + 2x = x (x^2 + 2) = x (x + 1)(x + 2)
        let fx = factorize(&f, &p(&f, "0 2 0 1")).unwrap();
        assert!(!irreducible_test(&f, &p(&f, "2 0 1")).unwrap());
        assert_eq!(
            fx.factors,
            vec![(p(&f, "0 1"), 1), (p(&f, "1 1"), 1), (p(&f, "2 1"), 1)]
        );
        assert!(matches!(factorize(&f, &Poly::zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn von_mangoldt_examples() {
        let f = f3();
        assert_eq!(von_mangoldt(&f, &p(&f, "0 0 0 1")).unwrap(), 1);
        let sq = f.poly_pow(&p(&f, "1 0 1"), 2);
        assert_eq!(von_mangoldt(&f, &sq).unwrap(), 2);
        let mixed = f.poly_mul(&p(&f, "0 1"), &p(&f, "1 1"));
        assert_eq!(von_mangoldt(&f, &mixed).unwrap(), 0);
    }

    #[test]
    fn prime_power_identity() {
        // Σ_{f monic, deg n} Λ(f) = q^n
        let f = f3();
        let table = PrimeTable::new(&f, 3).unwrap();
        for n in 1..=6usize {
            let total: u64 = f
                .monic_polys(n)
                .map(|g| von_mangoldt_of(&factorize_with(&f, &table, &g).unwrap()) as u64)
                .sum();
            assert_eq!(total, 3u64.pow(n as u32), "n={n}");
        }
    }

    #[test]
    fn euler_phi_examples() {
        let f = f3();
        assert_eq!(euler_phi(&f, &p(&f, "0 1")).unwrap(), 2);
        assert_eq!(euler_phi(&f, &p(&f, "0 0 1")).unwrap(), 6);
        assert_eq!(euler_phi(&f, &p(&f, "0 1 1")).unwrap(), 4);
        for d in 1..=4 {
            for m in f.monic_polys(d) {
                assert_eq!(euler_phi(&f, &m).unwrap(), phi_brute(&f, &m));
            }
        }
    }

    #[test]
    fn euler_phi_multiplicative() {
        let f = f3();
        let polys: Vec<Poly> = (1..=3).flat_map(|d| f.monic_polys(d)).collect();
        for a in &polys {
            for b in &polys {
                if f.poly_gcd(a, b) == Poly::one() {
                    let ab = f.poly_mul(a, b);
                    assert_eq!(
                        euler_phi(&f, &ab).unwrap(),
                        euler_phi(&f, a).unwrap() * euler_phi(&f, b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn phi_bound_small_cases() {
        let f = f3();
        let r1 = phi_lower_bound_check(&f, 1).unwrap();
        assert_eq!((r1.deg_q, r1.phi.as_str()), (3, "8"));
        let r2 = phi_lower_bound_check(&f, 2).unwrap();
        assert_eq!(r2.deg_q, 9);
        assert_eq!(r2.phi, "4096");
        let mut prev = 0.0;
        for n in 1..=4 {
            let r = phi_lower_bound_check(&f, n).unwrap();
            assert!(r.pass, "n={n} ratio={}", r.ratio);
            assert!(r.ratio > 0.0);
            prev = f64::max(prev, r.ratio);
        }
        // brute-force phi on the n = 1 modulus
        let m = p(&f, "0 2 0 1");
        assert_eq!(phi_brute(&f, &m), 8);
    }

    proptest! {
        #[test]
        fn factorize_round_trip(seed in proptest::collection::vec((0u64..27, 1u32..3), 1..4),
                                unit in 1u32..3) {
            let f = f3();
            let mut g = Poly::constant(Fq::from_index(unit));
            for (idx, e) in seed {
                let base = f.poly_from_index(idx + 3); // degree >= 1
                let (_, monic) = f.poly_monic(&base).unwrap();
                g = f.poly_mul(&g, &f.poly_pow(&monic, e));
            }
            let fac = factorize(&f, &g).unwrap();
            prop_assert_eq!(fac.reconstruct(&f), g);
            for (p, _) in &fac.factors {
                prop_assert!(p.is_monic());
                prop_assert!(irreducible_test(&f, p).unwrap());
            }
        }
    }
}
