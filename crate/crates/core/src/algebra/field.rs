//! Finite fields GF(p^k) for odd p.
//!
//! Elements are stored as an index `Σ c_i p^i` over their F_p-coordinates
//! with respect to the basis `1, y, ..., y^{k-1}` of `F_p[y]/(m(y))`.
//! Multiplication goes through discrete log tables built from the smallest
//! primitive element; small fields additionally carry full operation tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Fields with at most this many elements get full add/mul tables.
const TABLE_LIMIT: u32 = 256;
const MAX_FIELD_SIZE: u32 = 1 << 16;

/// Irreducible moduli for the extension fields shipped with the crate,
/// coefficients lowest degree first. These are the Conway polynomials.
const MODULUS_TABLE: &[(u32, u32, &[u32])] = &[
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
];

/// `p`, `k`, `q = p^k` and the defining modulus of the extension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
}

impl FieldSpec {
    /// Looks up the shipped modulus for `GF(p^k)`. For `k = 1` any odd
    /// prime is accepted and the modulus is `y`.
    pub fn new(p: u32, k: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if k == 0 {
            return Err(Error::pre("extension degree must be at least 1"));
        }
        if k == 1 {
            return Self::build(p, 1, vec![0, 1]);
        }
        let modulus = MODULUS_TABLE
            .iter()
            .find(|(pp, kk, _)| *pp == p && *kk == k)
            .map(|(_, _, m)| m.to_vec())
            .ok_or_else(|| {
                Error::Unsupported(format!("no shipped modulus for GF({p}^{k}); supply one"))
            })?;
        Self::build(p, k, modulus)
    }

    /// Uses a caller-supplied modulus; it must be monic of degree `k` and
    /// irreducible over F_p.
    pub fn with_modulus(p: u32, k: u32, modulus: Vec<u32>) -> Result<Self> {
        check_odd_prime(p)?;
        if k == 0 || modulus.len() != k as usize + 1 || modulus[k as usize] != 1 {
            return Err(Error::pre("modulus must be monic of degree k"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::pre("modulus coefficients must lie in [0, p)"));
        }
        if k > 1 {
            let base = Field::new(FieldSpec::new(p, 1)?)?;
            let m = super::Poly::from_coeffs(
                modulus.iter().map(|&c| super::Fq::from_index(c)).collect(),
            );
            if !super::irreducible_test(&base, &m)? {
                return Err(Error::pre("modulus is reducible over F_p"));
            }
        }
        Self::build(p, k, modulus)
    }

    fn build(p: u32, k: u32, modulus: Vec<u32>) -> Result<Self> {
        let q = (p as u64).pow(k);
        if q > MAX_FIELD_SIZE as u64 {
            return Err(Error::Capacity {
                what: "field size q",
                value: q as u128,
                limit: MAX_FIELD_SIZE as u128,
            });
        }
        Ok(FieldSpec {
            p,
            k,
            q: q as u32,
            modulus,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial over F_p, lowest first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

impl fmt::Display for FieldSpec {
    /// `p^k`, followed by ` mod <modulus>` for proper extensions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.k)?;
        if self.k > 1 {
            let m: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
            write!(f, " mod {}", m.join(" "))?;
        }
        Ok(())
    }
}

fn check_odd_prime(p: u32) -> Result<()> {
    if p < 3 || p % 2 == 0 || !is_prime_u32(p) {
        return Err(Error::pre(format!("characteristic {p} is not an odd prime")));
    }
    Ok(())
}

pub(crate) fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`.
pub(crate) fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of F_q, addressed by its coordinate index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub const fn from_index(i: u32) -> Self {
        Fq(i)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    spec: FieldSpec,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    add: Option<Vec<u32>>,
    mul: Option<Vec<u32>>,
}

/// A finite field with precomputed arithmetic tables. Cloning is cheap.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.inner.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.inner.spec == other.inner.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let q = spec.q;
        let p = spec.p;
        let k = spec.k as usize;

        let slow = SlowArith {
            p,
            k,
            modulus: &spec.modulus,
        };

        let group_order = (q - 1) as u64;
        let primes = prime_divisors(group_order);
        let generator = (1..q)
            .find(|&g| {
                primes
                    .iter()
                    .all(|&l| slow.pow(g, group_order / l) != 1)
            })
            .ok_or_else(|| Error::pre("modulus does not define a field"))?;

        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = cur;
            if log[cur as usize] != u32::MAX {
                return Err(Error::pre("modulus is reducible; element orders collapse"));
            }
            log[cur as usize] = i as u32;
            cur = slow.mul(cur, generator);
        }

        let neg: Vec<u32> = (0..q).map(|a| slow.neg(a)).collect();
        let inv: Vec<u32> = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    exp[((q - 1 - log[a as usize]) % (q - 1)) as usize]
                }
            })
            .collect();

        let (add, mul) = if q <= TABLE_LIMIT {
            let mut add = vec![0u32; (q * q) as usize];
            let mut mul = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = slow.add(a, b);
                    mul[(a * q + b) as usize] = slow.mul(a, b);
                }
            }
            (Some(add), Some(mul))
        } else {
            (None, None)
        };

        Ok(Field {
            inner: Arc::new(Tables {
                spec,
                exp,
                log,
                neg,
                inv,
                add,
                mul,
            }),
        })
    }

    /// Convenience constructor for `GF(p^k)` with the shipped modulus.
    pub fn gf(p: u32, k: u32) -> Result<Self> {
        Field::new(FieldSpec::new(p, k)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    pub fn p(&self) -> u32 {
        self.inner.spec.p
    }

    pub fn q(&self) -> u32 {
        self.inner.spec.q
    }

    pub fn k(&self) -> u32 {
        self.inner.spec.k
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q()).map(Fq)
    }

    /// F_p-coordinates of `a`, lowest first, length k.
    pub fn coords(&self, a: Fq) -> Vec<u32> {
        let p = self.p();
        let mut x = a.0;
        (0..self.k())
            .map(|_| {
                let c = x % p;
                x /= p;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Fq> {
        let p = self.p();
        if coords.len() != self.k() as usize || coords.iter().any(|&c| c >= p) {
            return Err(Error::pre("coordinates must be k residues in [0, p)"));
        }
        Ok(Fq(coords.iter().rev().fold(0u32, |acc, &c| acc * p + c)))
    }

    /// The image of the integer `n` in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p() as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let t = &*self.inner;
        if let Some(add) = &t.add {
            return Fq(add[(a.0 * t.spec.q + b.0) as usize]);
        }
        if t.spec.k == 1 {
            return Fq((a.0 + b.0) % t.spec.p);
        }
        let p = t.spec.p;
        let (mut x, mut y, mut out, mut scale) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..t.spec.k {
            out += ((x % p + y % p) % p) * scale;
            x /= p;
            y /= p;
            scale *= p;
        }
        Fq(out)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let t = &*self.inner;
        if let Some(mul) = &t.mul {
            return Fq(mul[(a.0 * t.spec.q + b.0) as usize]);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let n = t.spec.q - 1;
        let e = (t.log[a.0 as usize] + t.log[b.0 as usize]) % n;
        Fq(t.exp[e as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        (a.0 != 0).then(|| Fq(self.inner.inv[a.0 as usize]))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.0 == 0 {
            return Fq::ZERO;
        }
        let n = (self.q() - 1) as u64;
        let l = self.inner.log[a.0 as usize] as u64;
        Fq(self.inner.exp[((l * (e % n)) % n) as usize])
    }

    /// The primitive element the log tables are built on.
    pub fn primitive_element(&self) -> Fq {
        Fq(self.inner.exp[1 % self.inner.exp.len()])
    }

    /// Discrete log of a nonzero element to the primitive element base.
    pub fn log(&self, a: Fq) -> Option<u32> {
        (a.0 != 0).then(|| self.inner.log[a.0 as usize])
    }

    /// Decimal text of an element: the residue itself for prime fields,
    /// the concatenated coordinate digits (lowest first) otherwise.
    pub fn format_elem(&self, a: Fq) -> String {
        if self.k() == 1 {
            a.0.to_string()
        } else {
            self.coords(a).iter().map(|c| c.to_string()).collect()
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Fq> {
        let bad = || Error::Parse(format!("bad field element {s:?} for GF({})", self.q()));
        if self.k() == 1 {
            let v: u32 = s.parse().map_err(|_| bad())?;
            if v >= self.p() {
                return Err(bad());
            }
            return Ok(Fq(v));
        }
        if s.len() != self.k() as usize {
            return Err(bad());
        }
        let coords: Vec<u32> = s
            .chars()
            .map(|c| c.to_digit(10).ok_or_else(bad))
            .collect::<Result<_>>()?;
        self.from_coords(&coords).map_err(|_| bad())
    }
}

/// Coordinate arithmetic used only while the tables are being built.
struct SlowArith<'a> {
    p: u32,
    k: usize,
    modulus: &'a [u32],
}

impl SlowArith<'_> {
    fn digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let c = a % self.p;
                a /= self.p;
                c
            })
            .collect()
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.undigits(&s)
    }

    fn neg(&self, a: u32) -> u32 {
        let s: Vec<u32> = self
            .digits(a)
            .iter()
            .map(|&u| (self.p - u) % self.p)
            .collect();
        self.undigits(&s)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.k];
        for (i, &u) in x.iter().enumerate() {
            for (j, &v) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u as u64 * v as u64) % p;
            }
        }
        for d in (self.k..2 * self.k).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..self.k].iter().enumerate() {
                let idx = d - self.k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let out: Vec<u32> = prod[..self.k].iter().map(|&c| c as u32).collect();
        self.undigits(&out)
    }

    fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms_exhaustive(field: &Field) {
        let q = field.q();
        for a in field.elements() {
            assert_eq!(field.add(a, field.neg(a)), Fq::ZERO);
            if !a.is_zero() {
                let inv = field.inv(a).unwrap();
                assert_eq!(field.mul(a, inv), Fq::ONE, "q={q} a={a:?}");
            }
            for b in field.elements() {
                assert_eq!(field.add(a, b), field.add(b, a));
                assert_eq!(field.mul(a, b), field.mul(b, a));
            }
        }
    }

    #[test]
    fn field_axioms_small_fields() {
        for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2)] {
            check_axioms_exhaustive(&Field::gf(p, k).unwrap());
        }
    }

    #[test]
    fn associativity_and_distributivity_all_triples_f3() {
        let f = Field::gf(3, 1).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn shipped_moduli_build_fields() {
        for &(p, k, _) in MODULUS_TABLE {
            let f = Field::gf(p, k).unwrap();
            assert_eq!(f.q(), p.pow(k));
            // every nonzero element invertible, including the large untabled ones
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
            }
        }
    }

    #[test]
    fn rejects_even_and_composite_characteristic() {
        assert!(FieldSpec::new(2, 1).is_err());
        assert!(FieldSpec::new(9, 1).is_err());
        assert!(FieldSpec::new(3, 0).is_err());
        assert!(matches!(FieldSpec::new(11, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // y^2 + 2 = (y + 1)(y + 2) over F_3
        assert!(FieldSpec::with_modulus(3, 2, vec![2, 0, 1]).is_err());
        assert!(FieldSpec::with_modulus(3, 2, vec![1, 0, 1]).is_ok());
    }

    #[test]
    fn element_text_round_trip() {
        let f = Field::gf(3, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_elem(&f.format_elem(a)).unwrap(), a);
        }
        assert_eq!(f.format_elem(f.from_coords(&[1, 2]).unwrap()), "12");
        assert_eq!(FieldSpec::new(3, 2).unwrap().to_string(), "3^2 mod 2 2 1");
    }

    #[test]
    fn untabled_field_matches_slow_arithmetic() {
        let spec = FieldSpec::new(7, 3).unwrap();
        let slow = SlowArith {
            p: 7,
            k: 3,
            modulus: spec.modulus(),
        };
        let f = Field::new(spec.clone()).unwrap();
        for a in (0..343).step_by(7) {
            for b in (0..343).step_by(11) {
                assert_eq!(f.mul(Fq(a), Fq(b)).0, slow.mul(a, b));
                assert_eq!(f.add(Fq(a), Fq(b)).0, slow.add(a, b));
            }
        }
    }
}
