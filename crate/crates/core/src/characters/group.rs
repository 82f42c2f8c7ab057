//! The unit group `(F_q[x]/Q)^*` with an explicit cyclic decomposition and a
//! complete discrete-log table.

use num_integer::Integer;

use crate::algebra::{factorize, phi_of, Field, Fq, Poly};
use crate::error::{Error, Result};

/// Largest residue ring `q^{deg Q}` a group may be built over.
pub const RESIDUE_LIMIT: u64 = 1 << 22;

const UNSET: u32 = u32::MAX;

/// Arithmetic on residues mod a monic `Q`, addressed by residue index
/// `Σ c_i q^i` with `deg < deg Q`.
#[derive(Clone, Debug)]
pub(crate) struct ResidueRing {
    field: Field,
    q: u64,
    deg: usize,
    /// Negated low coefficients of Q: `x^deg ≡ Σ red[i] x^i`.
    red: Vec<Fq>,
}

impl ResidueRing {
    fn new(field: &Field, modulus: &Poly) -> Self {
        let deg = modulus.degree();
        let red = modulus.coeffs()[..deg].iter().map(|&c| field.neg(c)).collect();
        ResidueRing {
            field: field.clone(),
            q: field.q() as u64,
            deg,
            red,
        }
    }

    fn digits(&self, mut idx: u64, out: &mut [Fq]) {
        for d in out.iter_mut() {
            *d = Fq::from_index((idx % self.q) as u32);
            idx /= self.q;
        }
    }

    fn index(&self, digits: &[Fq]) -> u64 {
        digits
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc * self.q + c.index() as u64)
    }

    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        let n = self.deg;
        let f = &self.field;
        let mut da = vec![Fq::ZERO; n];
        let mut db = vec![Fq::ZERO; n];
        self.digits(a, &mut da);
        self.digits(b, &mut db);
        let mut prod = vec![Fq::ZERO; 2 * n];
        for (i, &x) in da.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        for top in (n..2 * n).rev() {
            let c = prod[top];
            if c.is_zero() {
                continue;
            }
            prod[top] = Fq::ZERO;
            for (i, &r) in self.red.iter().enumerate() {
                let slot = top - n + i;
                prod[slot] = f.add(prod[slot], f.mul(c, r));
            }
        }
        self.index(&prod[..n])
    }

    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }
}

/// `(F_q[x]/Q)^* = ⟨g_1⟩ × ... × ⟨g_r⟩`.
///
/// Elements of the group are addressed by a mixed-radix index
/// `Σ d_i (n_1 ⋯ n_{i-1})`, first generator least significant.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    field: Field,
    modulus: Poly,
    generators: Vec<Poly>,
    orders: Vec<u64>,
    /// residue index -> mixed-radix index, `UNSET` off the unit group
    dlog: Vec<u32>,
    /// mixed-radix index -> residue index
    elements: Vec<u32>,
    exponent: u64,
}

impl UnitGroup {
    /// Builds the decomposition greedily: at each round the generator is the
    /// canonically smallest residue of maximal order in the quotient by the
    /// subgroup found so far, adjusted so its order equals that quotient
    /// order.
    pub fn new(field: &Field, modulus: &Poly) -> Result<Self> {
        if !modulus.is_monic() || modulus.is_constant() {
            return Err(Error::pre("modulus must be monic of degree >= 1"));
        }
        let deg = modulus.degree();
        let size = (field.q() as u128).checked_pow(deg as u32).unwrap_or(u128::MAX);
        if size > RESIDUE_LIMIT as u128 {
            return Err(Error::Capacity {
                what: "residue ring size q^deg Q",
                value: size,
                limit: RESIDUE_LIMIT as u128,
            });
        }
        let size = size as usize;
        let ring = ResidueRing::new(field, modulus);
        let phi = phi_of(field.q(), &factorize(field, modulus)?)? as usize;

        let units: Vec<u32> = (1..size as u64)
            .filter(|&i| field.poly_gcd(&field.poly_from_index(i), modulus) == Poly::one())
            .map(|i| i as u32)
            .collect();
        debug_assert_eq!(units.len(), phi);

        // Cycle pass: every unit is recorded as a power of the first unit
        // (in canonical order) whose cycle reached it.
        let mut root_of = vec![UNSET; size];
        let mut power_of = vec![0u32; size];
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        for &a in &units {
            if a == 1 || root_of[a as usize] != UNSET {
                continue;
            }
            let id = cycles.len() as u32;
            let mut cycle = vec![1u32];
            let mut cur = a as u64;
            while cur != 1 {
                cycle.push(cur as u32);
                if root_of[cur as usize] == UNSET {
                    root_of[cur as usize] = id;
                    power_of[cur as usize] = (cycle.len() - 1) as u32;
                }
                cur = ring.mul(cur, a as u64);
            }
            cycles.push(cycle);
        }

        let mut dlog = vec![UNSET; size];
        dlog[1] = 0;
        let mut elements = vec![1u32];
        let mut generators = Vec::new();
        let mut orders: Vec<u64> = Vec::new();

        while elements.len() < phi {
            // quotient order of each cycle root
            let root_q: Vec<u64> = cycles
                .iter()
                .map(|c| {
                    (1..=c.len())
                        .find(|&j| dlog[c[j % c.len()] as usize] != UNSET)
                        .unwrap() as u64
                })
                .collect();
            let (mut best, mut best_order) = (0u32, 0u64);
            for &b in &units[1..] {
                let m = root_q[root_of[b as usize] as usize];
                let j = power_of[b as usize] as u64;
                let order = m / m.gcd(&j);
                if order > best_order {
                    best = b;
                    best_order = order;
                }
            }
            let m = best_order;

            // a^m lies in H; strip its H-part so the new generator has
            // order exactly m.
            let am = ring.pow(best as u64, m);
            let mut d = mixed_digits(dlog[am as usize] as u64, &orders);
            let mut correction = 1u64;
            for (i, (&n, di)) in orders.iter().zip(d.iter_mut()).enumerate() {
                let g = m.gcd(&n);
                if *di % g != 0 {
                    return Err(Error::pre(format!(
                        "decomposition failed lifting generator {} at factor {i}",
                        generators.len()
                    )));
                }
                let (mg, ng) = (m / g, n / g);
                let e = (*di / g) % ng * mod_inverse(mg % ng, ng) % ng;
                let gi = field.poly_index(&generators[i]);
                correction = ring.mul(correction, ring.pow(gi, e));
            }
            let inv_corr = ring.pow(correction, phi as u64 - 1);
            let g = ring.mul(best as u64, inv_corr);

            let h = elements.len();
            elements.reserve(h * (m as usize - 1));
            let mut gt = 1u64;
            for t in 1..m as usize {
                gt = ring.mul(gt, g);
                for idx in 0..h {
                    let r = ring.mul(elements[idx] as u64, gt) as u32;
                    debug_assert_eq!(dlog[r as usize], UNSET);
                    dlog[r as usize] = (idx + h * t) as u32;
                    elements.push(r);
                }
            }
            generators.push(field.poly_from_index(g));
            orders.push(m);
        }
        if elements.len() != phi {
            return Err(Error::pre("decomposition does not cover the unit group"));
        }

        let exponent = orders.iter().fold(1u64, |acc, &n| acc.lcm(&n));
        Ok(UnitGroup {
            field: field.clone(),
            modulus: modulus.clone(),
            generators,
            orders,
            dlog,
            elements,
            exponent,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// `φ(Q)`.
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// `lcm(n_i)`, the common denominator of every character angle.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Number of residues, `q^{deg Q}`.
    pub fn residue_count(&self) -> u64 {
        self.dlog.len() as u64
    }

    /// Residue index of `f mod Q`.
    pub fn residue_index(&self, f: &Poly) -> u64 {
        let r = self.field.poly_rem(f, &self.modulus).expect("modulus is nonzero");
        self.field.poly_index(&r)
    }

    /// Mixed-radix discrete log of a residue index, `None` if not a unit.
    pub fn dlog_index(&self, residue: u64) -> Option<u64> {
        match self.dlog.get(residue as usize) {
            Some(&v) if v != UNSET => Some(v as u64),
            _ => None,
        }
    }

    /// Exponent vector `(d_1..d_r)` with `f ≡ Π g_i^{d_i} (mod Q)`.
    pub fn dlog(&self, f: &Poly) -> Option<Vec<u64>> {
        self.dlog_index(self.residue_index(f))
            .map(|i| mixed_digits(i, &self.orders))
    }

    /// Residue index of the element with the given mixed-radix index.
    pub fn element(&self, index: u64) -> u64 {
        self.elements[index as usize] as u64
    }

    /// Residue indices of all units in canonical order.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        self.dlog
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != UNSET)
            .map(|(i, _)| i as u64)
    }

    pub fn digits(&self, index: u64) -> Vec<u64> {
        mixed_digits(index, &self.orders)
    }

    pub fn index_of_digits(&self, digits: &[u64]) -> u64 {
        digits
            .iter()
            .zip(&self.orders)
            .rev()
            .fold(0u64, |acc, (&d, &n)| acc * n + d % n)
    }
}

pub(crate) fn mixed_digits(mut index: u64, orders: &[u64]) -> Vec<u64> {
    orders
        .iter()
        .map(|&n| {
            let d = index % n;
            index /= n;
            d
        })
        .collect()
}

fn mod_inverse(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(n as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(n as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::gf(3, 1).unwrap()
    }

    /// Orders of all elements by brute force.
    fn element_orders(g: &UnitGroup) -> Vec<u64> {
        let ring = ResidueRing::new(g.field(), g.modulus());
        g.units()
            .map(|a| {
                let mut cur = a;
                let mut n = 1;
                while cur != 1 {
                    cur = ring.mul(cur, a);
                    n += 1;
                }
                n
            })
            .collect()
    }

    fn check_group(field: &Field, m: &Poly) {
        let g = UnitGroup::new(field, m).unwrap();
        let phi = crate::algebra::euler_phi(field, m).unwrap() as u64;
        assert_eq!(g.orders().iter().product::<u64>(), phi);
        assert_eq!(g.units().count() as u64, phi);
        for a in g.units() {
            let d = g.dlog_index(a).unwrap();
            assert_eq!(g.element(d), a);
            // Π g_i^{d_i} ≡ a via independent polynomial arithmetic
            let prod = g
                .generators()
                .iter()
                .zip(g.digits(d))
                .fold(Poly::one(), |acc, (gen, e)| {
                    let pw = field.poly_pow_mod(gen, &e.into(), m).unwrap();
                    field.poly_mul_mod(&acc, &pw, m).unwrap()
                });
            assert_eq!(field.poly_index(&prod), a);
        }
        // the exponent of the group is the largest element order
        let max_order = element_orders(&g).into_iter().max().unwrap();
        assert_eq!(g.exponent(), max_order);
        assert_eq!(g.orders()[0], max_order);
    }

    #[test]
    fn examples() {
        let f = f3();
        let g = UnitGroup::new(&f, &f.parse_poly("0 1").unwrap()).unwrap();
        assert_eq!(g.orders(), &[2]);
        let g = UnitGroup::new(&f, &f.parse_poly("0 0 1").unwrap()).unwrap();
        assert_eq!(g.orders().iter().product::<u64>(), 6);
        let g = UnitGroup::new(&f, &f.parse_poly("0 1 1").unwrap()).unwrap();
        assert_eq!(g.orders(), &[2, 2]);
    }

    #[test]
    fn decompositions_valid_for_all_small_moduli() {
        for (p, k, max_d) in [(3, 1, 4), (5, 1, 3), (7, 1, 2), (3, 2, 2)] {
            let f = Field::gf(p, k).unwrap();
            for d in 1..=max_d {
                for m in f.monic_polys(d) {
                    check_group(&f, &m);
                }
            }
        }
    }

    #[test]
    fn structured_moduli() {
        let f = f3();
        for s in ["0 0 0 0 0 1", "0 0 0 0 0 0 1", "1 0 0 0 1 0 1", "0 0 1 0 0 1"] {
            check_group(&f, &f.parse_poly(s).unwrap());
        }
        let f5 = Field::gf(5, 1).unwrap();
        check_group(&f5, &f5.parse_poly("0 0 0 0 1").unwrap());
    }

    #[test]
    fn orders_are_invariant_factors() {
        // greedy choice yields n_{i+1} | n_i
        let f = f3();
        for d in 1..=5 {
            for m in f.monic_polys(d) {
                let g = UnitGroup::new(&f, &m).unwrap();
                for w in g.orders().windows(2) {
                    assert_eq!(w[0] % w[1], 0, "{:?}", g.orders());
                }
            }
        }
    }

    #[test]
    fn capacity_and_preconditions() {
        let f = f3();
        let big = Poly::monomial(Fq::ONE, 14);
        assert!(matches!(UnitGroup::new(&f, &big), Err(Error::Capacity { .. })));
        assert!(UnitGroup::new(&f, &Poly::one()).is_err());
        assert!(UnitGroup::new(&f, &f.parse_poly("0 2").unwrap()).is_err());
    }
}
