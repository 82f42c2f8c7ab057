use std::cmp::Ordering;
use std::fmt;

use super::field::{Field, Fq};
use crate::error::{Error, Result};

/// Degree of a polynomial; the zero polynomial has its own marker rather
/// than a sentinel integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Degree {
    NegInf,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial over F_q, coefficients lowest degree first, with no
/// trailing zeros.
///
/// The ordering is the canonical one used everywhere in the crate: by
/// degree, then by coefficients from the leading one down. It coincides
/// with the order of [`Field::poly_index`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Fq>,
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![Fq::ONE],
        }
    }

    /// `x`.
    pub fn x() -> Self {
        Poly::monomial(Fq::ONE, 1)
    }

    pub fn constant(c: Fq) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Fq, d: usize) -> Self {
        let mut coeffs = vec![Fq::ZERO; d + 1];
        coeffs[d] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInf,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree of a nonzero polynomial; panics on zero.
    pub fn degree(&self) -> usize {
        self.deg().finite().expect("degree of the zero polynomial")
    }

    pub fn leading(&self) -> Option<Fq> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Fq::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
}

impl Field {
    pub fn poly_add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| self.add(a.coeff(i), b.coeff(i)))
                .collect(),
        )
    }

    pub fn poly_neg(&self, a: &Poly) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|&c| self.neg(c)).collect())
    }

    pub fn poly_sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.poly_add(a, &self.poly_neg(b))
    }

    pub fn poly_scale(&self, a: &Poly, c: Fq) -> Poly {
        Poly::from_coeffs(a.coeffs.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fq::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn poly_pow(&self, a: &Poly, mut e: u32) -> Poly {
        let mut base = a.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.poly_mul(&base, &base);
            }
        }
        acc
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn poly_divrem(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let lead = b
            .leading()
            .ok_or_else(|| Error::domain("division by the zero polynomial"))?;
        let lead_inv = self.inv(lead).expect("leading coefficient is nonzero");
        let db = b.coeffs.len() - 1;
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), a.clone()));
        }
        let mut quot = vec![Fq::ZERO; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let t = self.mul(c, lead_inv);
            quot[i - db] = t;
            for (j, &bc) in b.coeffs.iter().enumerate() {
                let idx = i - db + j;
                rem[idx] = self.sub(rem[idx], self.mul(t, bc));
            }
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn poly_rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.poly_divrem(a, b)?.1)
    }

    /// Splits off the leading coefficient: returns `(lead, monic)`.
    pub fn poly_monic(&self, a: &Poly) -> Option<(Fq, Poly)> {
        let lead = a.leading()?;
        let inv = self.inv(lead)?;
        Some((lead, self.poly_scale(a, inv)))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn poly_gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.poly_rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.poly_monic(&x).map(|(_, m)| m).unwrap_or_default()
    }

    pub fn poly_mul_mod(&self, a: &Poly, b: &Poly, m: &Poly) -> Result<Poly> {
        self.poly_rem(&self.poly_mul(a, b), m)
    }

    pub fn poly_pow_mod(&self, a: &Poly, e: &num_bigint::BigUint, m: &Poly) -> Result<Poly> {
        let mut acc = self.poly_rem(&Poly::one(), m)?;
        let base = self.poly_rem(a, m)?;
        for i in (0..e.bits()).rev() {
            acc = self.poly_mul_mod(&acc, &acc, m)?;
            if e.bit(i) {
                acc = self.poly_mul_mod(&acc, &base, m)?;
            }
        }
        Ok(acc)
    }

    /// Evaluation at a field element.
    pub fn poly_eval(&self, a: &Poly, x: Fq) -> Fq {
        a.coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// `Σ c_i q^i` over the coefficient indices. Injective on polynomials of
    /// a fixed bounded degree and monotone in the canonical ordering.
    pub fn poly_index(&self, a: &Poly) -> u64 {
        let q = self.q() as u64;
        a.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc * q + c.index() as u64)
    }

    pub fn poly_from_index(&self, mut idx: u64) -> Poly {
        let q = self.q() as u64;
        let mut coeffs = Vec::new();
        while idx > 0 {
            coeffs.push(Fq::from_index((idx % q) as u32));
            idx /= q;
        }
        Poly::from_coeffs(coeffs)
    }

    /// `|f| = q^deg f`, `|0| = 0`. `None` if it does not fit in u128.
    pub fn poly_norm(&self, a: &Poly) -> Option<u128> {
        match a.deg() {
            Degree::NegInf => Some(0),
            Degree::Finite(d) => (self.q() as u128).checked_pow(d as u32),
        }
    }

    /// Canonical text: coefficients lowest degree first, space separated.
    /// The zero polynomial is `0`.
    pub fn format_poly(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        a.coeffs
            .iter()
            .map(|&c| self.format_elem(c))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        let coeffs = s
            .split_whitespace()
            .map(|tok| self.parse_elem(tok))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty polynomial text".into()));
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// All monic polynomials of degree `d`, in canonical order.
    pub fn monic_polys(&self, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = self.q() as u64;
        let count = q.pow(d as u32);
        (0..count).map(move |low| {
            let mut p = self.poly_from_index(low).coeffs;
            p.resize(d, Fq::ZERO);
            p.push(Fq::ONE);
            Poly::from_coeffs(p)
        })
    }
}
