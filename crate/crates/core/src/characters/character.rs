use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use super::group::UnitGroup;
use crate::algebra::Poly;
use crate::error::{Error, Result};

/// An exact rational angle `num / den` in `[0, 1)`, standing for
/// `e(num/den) = exp(2πi num/den)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Angle {
    pub num: u64,
    pub den: u64,
}

impl Angle {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_complex(self) -> Complex64 {
        root_of_unity(self.num, self.den)
    }

    /// Reduced to lowest terms, so equal angles compare equal.
    pub fn reduced(self) -> Angle {
        let g = num_integer::gcd(self.num, self.den);
        Angle {
            num: self.num / g,
            den: self.den / g,
        }
    }
}

/// `exp(2πi k/n)`, evaluated by folding into the first octant so that
/// symmetric values come out exactly symmetric.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    // 8k/n decides the octant; use exact integer comparisons
    let (k8, n8) = (k as u128 * 8, n as u128);
    let oct = (k8 / n8) as u64;
    let base = |num: u128, den: u128| (TAU * num as f64 / den as f64).sin_cos();
    // offset from the octant start, as a fraction of the full turn
    let (s, c) = match oct {
        0 => base(k as u128, n as u128),
        1 => {
            let (s, c) = base(2 * n as u128 - 8 * k as u128, 8 * n as u128);
            (c, s)
        }
        2 => {
            let (s, c) = base(8 * k as u128 - 2 * n as u128, 8 * n as u128);
            (c, -s)
        }
        3 => {
            let (s, c) = base(4 * n as u128 - 8 * k as u128, 8 * n as u128);
            (s, -c)
        }
        4 => {
            let (s, c) = base(8 * k as u128 - 4 * n as u128, 8 * n as u128);
            (-s, -c)
        }
        5 => {
            let (s, c) = base(6 * n as u128 - 8 * k as u128, 8 * n as u128);
            (-c, -s)
        }
        6 => {
            let (s, c) = base(8 * k as u128 - 6 * n as u128, 8 * n as u128);
            (-c, s)
        }
        _ => {
            let (s, c) = base(8 * n as u128 - 8 * k as u128, 8 * n as u128);
            (-s, c)
        }
    };
    Complex64::new(c, s)
}

/// A character value: exactly zero off the unit group, a root of unity on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root(Angle),
}

impl CharValue {
    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root(a) => a.to_complex(),
        }
    }
}

/// A Dirichlet character mod Q, given by exponents `(m_1..m_r)` with
/// `χ(g_i) = e(m_i / n_i)`.
#[derive(Clone)]
pub struct Character<'g> {
    group: &'g UnitGroup,
    index: u64,
    exps: Vec<u64>,
    /// `m_i · L / n_i` with `L` the group exponent
    weights: Vec<u64>,
}

impl fmt::Debug for Character<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Character({:?})", self.exps)
    }
}

impl PartialEq for Character<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.group, other.group) && self.index == other.index
    }
}

impl Eq for Character<'_> {}

impl<'g> Character<'g> {
    pub fn from_exponents(group: &'g UnitGroup, exps: &[u64]) -> Result<Self> {
        if exps.len() != group.orders().len() || exps.iter().zip(group.orders()).any(|(m, n)| m >= n)
        {
            return Err(Error::pre(format!(
                "exponents {exps:?} do not match group orders {:?}",
                group.orders()
            )));
        }
        Ok(Self::from_index(group, group.index_of_digits(exps)))
    }

    /// Character with the given odometer index (mixed radix, first exponent
    /// least significant). Panics if `index >= φ(Q)`.
    pub fn from_index(group: &'g UnitGroup, index: u64) -> Self {
        assert!(index < group.order(), "character index out of range");
        let exps = group.digits(index);
        let l = group.exponent();
        let weights = exps
            .iter()
            .zip(group.orders())
            .map(|(&m, &n)| m * (l / n))
            .collect();
        Character {
            group,
            index,
            exps,
            weights,
        }
    }

    pub fn principal(group: &'g UnitGroup) -> Self {
        Self::from_index(group, 0)
    }

    pub fn group(&self) -> &'g UnitGroup {
        self.group
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// Numerator of `χ` at the unit with mixed-radix index `e`, over the
    /// group exponent.
    pub(crate) fn angle_num_of_dlog(&self, e: u64) -> u64 {
        let l = self.group.exponent();
        let mut rest = e;
        let mut acc = 0u128;
        for (&n, &w) in self.group.orders().iter().zip(&self.weights) {
            acc += (rest % n) as u128 * w as u128;
            rest /= n;
        }
        (acc % l as u128) as u64
    }

    /// Value at a residue index.
    pub fn value_at_residue(&self, residue: u64) -> CharValue {
        match self.group.dlog_index(residue) {
            None => CharValue::Zero,
            Some(e) => CharValue::Root(Angle {
                num: self.angle_num_of_dlog(e),
                den: self.group.exponent(),
            }),
        }
    }

    pub fn value(&self, f: &Poly) -> CharValue {
        self.value_at_residue(self.group.residue_index(f))
    }

    /// `χ(f)` as a complex number; exactly 0 when `gcd(f, Q) ≠ 1`.
    pub fn eval(&self, f: &Poly) -> Complex64 {
        self.value(f).to_complex()
    }

    /// `χ(f)` built as `Π χ(g_i)^{d_i}` by binary powering of the exact
    /// generator angles. Independent of the odometer weights.
    pub fn eval_by_powers(&self, f: &Poly) -> CharValue {
        let Some(d) = self.group.dlog(f) else {
            return CharValue::Zero;
        };
        let l = self.group.exponent() as u128;
        let mut total = 0u128;
        for ((&m, &n), &di) in self.exps.iter().zip(self.group.orders()).zip(&d) {
            // angle of χ(g_i) over L, then raised to d_i by doubling
            let base = m as u128 * (l / n as u128) % l;
            let (mut acc, mut b, mut e) = (0u128, base, di);
            while e > 0 {
                if e & 1 == 1 {
                    acc = (acc + b) % l;
                }
                b = (b + b) % l;
                e >>= 1;
            }
            total = (total + acc) % l;
        }
        CharValue::Root(Angle {
            num: total as u64,
            den: l as u64,
        })
    }

    /// Even means trivial on the constants `F_q^*`; it suffices to test a
    /// generator of `F_q^*`.
    pub fn is_even(&self) -> bool {
        let field = self.group.field();
        let g = Poly::constant(field.primitive_element());
        matches!(self.value(&g), CharValue::Root(a) if a.num == 0)
    }

    /// Pointwise product: exponents add componentwise.
    pub fn mul(&self, other: &Character<'g>) -> Character<'g> {
        let e: Vec<u64> = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(self.group.orders())
            .map(|((a, b), n)| (a + b) % n)
            .collect();
        Character::from_exponents(self.group, &e).expect("valid exponents")
    }

    pub fn conj(&self) -> Character<'g> {
        let e: Vec<u64> = self
            .exps
            .iter()
            .zip(self.group.orders())
            .map(|(a, n)| (n - a) % n)
            .collect();
        Character::from_exponents(self.group, &e).expect("valid exponents")
    }

    /// `Q-text : m_1,...,m_r`.
    pub fn to_text(&self) -> String {
        let m: Vec<String> = self.exps.iter().map(|e| e.to_string()).collect();
        format!(
            "{} : {}",
            self.group.field().format_poly(self.group.modulus()),
            m.join(",")
        )
    }

    /// Parses [`Character::to_text`] output against `group`.
    pub fn parse(group: &'g UnitGroup, s: &str) -> Result<Self> {
        let (q_text, m_text) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("character text {s:?} lacks ':'")))?;
        let q = group.field().parse_poly(q_text.trim())?;
        if &q != group.modulus() {
            return Err(Error::Parse(format!("character modulus {q_text:?} does not match")));
        }
        let exps = m_text
            .trim()
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad exponent {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_exponents(group, &exps)
    }
}

/// All `φ(Q)` characters, principal first, in odometer order.
pub fn characters(group: &UnitGroup) -> impl Iterator<Item = Character<'_>> + '_ {
    (0..group.order()).map(move |i| Character::from_index(group, i))
}

/// Both sides of `Σ_χ |Σ_N a_N χ(N)|² = φ(Q) Σ_N |a_N|²`.
///
/// The identity needs every `N` to be a unit mod Q: a non-coprime `N` has
/// `χ(N) = 0` for all χ and drops out of the left side only.
pub fn orthogonality_mean_value(
    group: &UnitGroup,
    terms: &[(Poly, Complex64)],
) -> Result<(f64, f64)> {
    let dq = group.modulus().degree();
    let mut seen = std::collections::HashSet::new();
    let mut dl = Vec::with_capacity(terms.len());
    for (n, _) in terms {
        if n.is_zero() || n.degree() >= dq {
            return Err(Error::pre("each N must be nonzero with |N| < |Q|"));
        }
        if !seen.insert(n.clone()) {
            return Err(Error::pre("terms contain a duplicate N"));
        }
        let e = group
            .dlog_index(group.field().poly_index(n))
            .ok_or_else(|| Error::pre("each N must be coprime to Q"))?;
        dl.push(e);
    }
    let lhs: f64 = characters(group)
        .map(|chi| {
            let l = group.exponent();
            terms
                .iter()
                .zip(&dl)
                .map(|((_, a), &e)| a * root_of_unity(chi.angle_num_of_dlog(e), l))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .sum();
    let rhs = group.order() as f64 * terms.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f3() -> Field {
        Field::gf(3, 1).unwrap()
    }

    fn group(f: &Field, s: &str) -> UnitGroup {
        UnitGroup::new(f, &f.parse_poly(s).unwrap()).unwrap()
    }

    #[test]
    fn roots_of_unity_accurate() {
        for n in [1u64, 2, 3, 4, 6, 8, 12, 26, 360, 1000] {
            for k in 0..n {
                let z = root_of_unity(k, n);
                let t = TAU * k as f64 / n as f64;
                assert!((z - Complex64::new(t.cos(), t.sin())).norm() < 1e-14);
            }
        }
        assert_eq!(root_of_unity(1, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(1, 4), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn character_counts() {
        let f = f3();
        assert_eq!(characters(&group(&f, "0 1")).count(), 2);
        assert_eq!(characters(&group(&f, "0 0 1")).count(), 6);
        assert!(characters(&group(&f, "0 0 1")).next().unwrap().is_principal());
    }

    #[test]
    fn principal_and_zero_values() {
        let f = f3();
        let g = group(&f, "0 0 1");
        let chi0 = Character::principal(&g);
        for r in g.units() {
            assert_eq!(chi0.eval(&f.poly_from_index(r)), Complex64::new(1.0, 0.0));
        }
        for chi in characters(&g) {
            assert_eq!(chi.value(&f.parse_poly("0 1").unwrap()), CharValue::Zero);
            assert_eq!(chi.value(&f.parse_poly("0 2 1").unwrap()), CharValue::Zero);
        }
    }

    #[test]
    fn characters_pairwise_distinct() {
        let f = f3();
        for d in 1..=3 {
            for m in f.monic_polys(d) {
                let g = UnitGroup::new(&f, &m).unwrap();
                let tables: std::collections::HashSet<Vec<Angle>> = characters(&g)
                    .map(|chi| {
                        g.units()
                            .map(|r| match chi.value_at_residue(r) {
                                CharValue::Root(a) => a.reduced(),
                                CharValue::Zero => unreachable!(),
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(tables.len() as u64, g.order());
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        let f = f3();
        for d in 1..=3 {
            for m in f.monic_polys(d) {
                let g = UnitGroup::new(&f, &m).unwrap();
                let units: Vec<u64> = g.units().collect();
                for &a in &units {
                    for &b in &units {
                        let s: Complex64 = characters(&g)
                            .map(|chi| {
                                chi.value_at_residue(a).to_complex()
                                    * chi.value_at_residue(b).to_complex().conj()
                            })
                            .sum();
                        let want = if a == b { g.order() as f64 } else { 0.0 };
                        assert!((s - want).norm() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn dlog_path_matches_powers_exactly() {
        let f = f3();
        for s in ["0 0 1", "0 0 0 1", "1 0 1 1", "0 0 0 0 1", "2 1 0 1 1"] {
            let g = group(&f, s);
            for chi in characters(&g) {
                for r in 0..g.residue_count() {
                    let p = f.poly_from_index(r);
                    assert_eq!(chi.value(&p), chi.eval_by_powers(&p));
                }
            }
        }
    }

    #[test]
    fn parity_examples_and_counts() {
        let f = f3();
        let g = group(&f, "0 1");
        let chars: Vec<_> = characters(&g).collect();
        assert!(chars[0].is_even());
        assert!(!chars[1].is_even());
        assert_eq!(chars[1].eval(&f.parse_poly("2").unwrap()), Complex64::new(-1.0, 0.0));
        for d in 1..=3 {
            for m in f.monic_polys(d) {
                let g = UnitGroup::new(&f, &m).unwrap();
                let even = characters(&g).filter(|c| c.is_even()).count() as u64;
                // constants embed injectively, so the even characters are
                // the dual of the quotient by the image of F_q^*
                assert_eq!(even * (f.q() as u64 - 1), g.order());
                // and they are exactly those trivial on every constant
                for chi in characters(&g) {
                    let trivial = f
                        .elements()
                        .filter(|c| !c.is_zero())
                        .all(|c| chi.eval(&Poly::constant(c)) == Complex64::new(1.0, 0.0));
                    assert_eq!(trivial, chi.is_even());
                }
            }
        }
    }

    #[test]
    fn dual_group_structure() {
        let f = f3();
        let g = group(&f, "1 0 1 0 1");
        let chars: Vec<_> = characters(&g).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = &chars[rng.gen_range(0..chars.len())];
            let b = &chars[rng.gen_range(0..chars.len())];
            let ab = a.mul(b);
            for r in g.units().take(40) {
                let p = f.poly_from_index(r);
                assert!((ab.eval(&p) - a.eval(&p) * b.eval(&p)).norm() < 1e-12);
                assert!((a.conj().eval(&p) - a.eval(&p).conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let f = f3();
        let g = group(&f, "0 0 0 1");
        for chi in characters(&g) {
            let t = chi.to_text();
            assert!(t.starts_with("0 0 0 1 : "));
            assert_eq!(Character::parse(&g, &t).unwrap(), chi);
        }
        assert!(Character::parse(&g, "0 0 1 : 0").is_err());
    }

    #[test]
    fn mean_value_examples() {
        let f = f3();
        let g = group(&f, "0 0 1");
        let (l, r) =
            orthogonality_mean_value(&g, &[(Poly::one(), Complex64::new(1.0, 0.0))]).unwrap();
        assert!((l - 6.0).abs() < 1e-12 && (r - 6.0).abs() < 1e-12);
        let (l, r) = orthogonality_mean_value(&g, &[]).unwrap();
        assert_eq!((l, r), (0.0, 0.0));
        let zero = Complex64::new(0.0, 0.0);
        let (l, r) = orthogonality_mean_value(
            &g,
            &[(Poly::one(), zero), (f.parse_poly("1 1").unwrap(), zero)],
        )
        .unwrap();
        assert_eq!((l, r), (0.0, 0.0));

        let one = Complex64::new(1.0, 0.0);
        let dup = [(Poly::one(), one), (Poly::one(), one)];
        assert!(orthogonality_mean_value(&g, &dup).is_err());
        let big = [(f.parse_poly("1 1 1").unwrap(), one)];
        assert!(orthogonality_mean_value(&g, &big).is_err());
        let shared = [(f.parse_poly("0 1").unwrap(), one)];
        assert!(orthogonality_mean_value(&g, &shared).is_err());
    }

    /// Direct double sum over characters, written without the dlog shortcut.
    fn double_sum(g: &UnitGroup, terms: &[(Poly, Complex64)]) -> f64 {
        let mut total = 0.0;
        for chi in characters(g) {
            for (n1, a1) in terms {
                for (n2, a2) in terms {
                    total += (a1 * a2.conj() * chi.eval(n1) * chi.eval(n2).conj()).re;
                }
            }
        }
        total
    }

    #[test]
    fn mean_value_random_coefficients() {
        let f = f3();
        let g = group(&f, "0 0 1");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ns: Vec<Poly> = (0..2)
            .flat_map(|d| f.monic_polys(d).collect::<Vec<_>>())
            .filter(|n| g.dlog(n).is_some())
            .collect();
        for _ in 0..20 {
            let terms: Vec<(Poly, Complex64)> = ns
                .iter()
                .map(|n| (n.clone(), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
                .collect();
            let (l, r) = orthogonality_mean_value(&g, &terms).unwrap();
            assert!((l - r).abs() <= 1e-9 * r);
            assert!((l - double_sum(&g, &terms)).abs() <= 1e-9 * r);
        }
    }

    proptest! {
        #[test]
        fn multiplicative(a in 1u64..243, b in 1u64..243, k in 0u64..1000) {
            let f = f3();
            let g = group(&f, "1 0 0 2 1 1");
            let chi = Character::from_index(&g, k % g.order());
            let (pa, pb) = (f.poly_from_index(a), f.poly_from_index(b));
            let lhs = chi.eval(&f.poly_mul(&pa, &pb));
            let rhs = chi.eval(&pa) * chi.eval(&pb);
            prop_assert!((lhs - rhs).norm() < 1e-12);
            prop_assert!(chi.eval(&pa).norm() == 0.0 || (chi.eval(&pa).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn reduction_mod_q(a in 0u64..10_000, k in 0u64..1000) {
            let f = f3();
            let g = group(&f, "0 1 0 1");
            let chi = Character::from_index(&g, k % g.order());
            let p = f.poly_from_index(a);
            let r = f.poly_rem(&p, g.modulus()).unwrap();
            prop_assert_eq!(chi.value(&p), chi.value(&r));
        }
    }
}
