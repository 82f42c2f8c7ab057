use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::cyclotomic::RootSummer;
use crate::characters::{Character, UnitGroup};
use crate::error::{Error, Result};

/// Magnitude below which a floating (non-exact) coefficient is treated as
/// zero when deciding the observed degree.
pub const FLOAT_ZERO_TOLERANCE: f64 = 1e-9;

/// `𝓛(u, χ) = Σ_{n < deg Q} c_n u^n` for a nonprincipal χ.
#[derive(Clone, Debug)]
pub struct LPolynomial<'g> {
    chi: Character<'g>,
    coeffs: Vec<Complex64>,
    degree: usize,
}

impl<'g> LPolynomial<'g> {
    /// Wraps coefficients `c_0..c_{deg Q - 1}`. Entries flagged as exact
    /// zeros, or below [`FLOAT_ZERO_TOLERANCE`] where no exact information
    /// exists, are set to zero.
    pub fn from_coeffs(
        chi: Character<'g>,
        mut coeffs: Vec<Complex64>,
        exact_zero: Option<&[bool]>,
    ) -> Self {
        for (n, c) in coeffs.iter_mut().enumerate() {
            let zero = match exact_zero {
                Some(z) => z[n],
                None => c.norm() < FLOAT_ZERO_TOLERANCE,
            };
            if zero {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        let degree = coeffs.iter().rposition(|c| c.norm() != 0.0).unwrap_or(0);
        LPolynomial {
            chi,
            coeffs,
            degree,
        }
    }

    pub fn chi(&self) -> &Character<'g> {
        &self.chi
    }

    /// `c_0..c_{deg Q - 1}`, including trailing zeros.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Observed degree: the index of the last nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn q(&self) -> u32 {
        self.chi.group().field().q()
    }

    pub fn eval(&self, u: Complex64) -> Complex64 {
        self.coeffs[..=self.degree]
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
    }

    /// `L(s, χ) = 𝓛(q^{-s}, χ)`.
    pub fn eval_s(&self, s: Complex64) -> Complex64 {
        self.eval(super::u_of_s(self.q(), s))
    }
}

/// `Σ_{f monic, deg f = n} χ(f)` by direct summation over all `q^n` monic
/// polynomials, reduced mod Q. Works for every `n`, including `n ≥ deg Q`.
pub fn monic_char_sum(chi: &Character<'_>, n: usize) -> Result<(Complex64, Option<bool>)> {
    let group = chi.group();
    let field = group.field();
    let q = field.q() as u64;
    let count = (q as u128).pow(n as u32);
    if count > crate::algebra::ENUMERATION_LIMIT as u128 {
        return Err(Error::Capacity {
            what: "monic polynomials of the requested degree",
            value: count,
            limit: crate::algebra::ENUMERATION_LIMIT as u128,
        });
    }
    let summer = RootSummer::new(group.exponent());
    let mut acc = summer.accumulator();
    let dq = group.modulus().degree();
    if n < dq {
        let base = q.pow(n as u32);
        for low in 0..base {
            if let Some(e) = group.dlog_index(base + low) {
                acc.add(chi.angle_num_of_dlog(e));
            }
        }
    } else {
        for f in field.monic_polys(n) {
            if let Some(e) = group.dlog_index(group.residue_index(&f)) {
                acc.add(chi.angle_num_of_dlog(e));
            }
        }
    }
    let r = acc.finish();
    Ok((r.value, r.exact_zero))
}

/// Coefficients of `𝓛(u, χ)` by direct summation, exact where the group
/// exponent allows it.
pub fn l_coeffs<'g>(chi: &Character<'g>) -> Result<LPolynomial<'g>> {
    if chi.is_principal() {
        return Err(Error::Unsupported(
            "principal character has no L-polynomial; use zeta_q".into(),
        ));
    }
    let dq = chi.group().modulus().degree();
    let mut coeffs = Vec::with_capacity(dq);
    let mut zeros = Vec::with_capacity(dq);
    let mut exact = true;
    for n in 0..dq {
        let (c, z) = monic_char_sum(chi, n)?;
        coeffs.push(c);
        exact &= z.is_some();
        zeros.push(z.unwrap_or(false));
    }
    Ok(LPolynomial::from_coeffs(
        chi.clone(),
        coeffs,
        exact.then_some(zeros.as_slice()),
    ))
}

/// `c_n(χ)` for every character (rows, odometer order) and `n < deg Q`
/// (columns).
#[derive(Clone, Debug)]
pub struct LCoeffMatrix {
    cols: usize,
    data: Vec<Complex64>,
}

impl LCoeffMatrix {
    pub fn rows(&self) -> usize {
        self.data.len() / self.cols
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, index: u64) -> &[Complex64] {
        let i = index as usize * self.cols;
        &self.data[i..i + self.cols]
    }

    pub fn lpoly<'g>(&self, chi: &Character<'g>) -> LPolynomial<'g> {
        LPolynomial::from_coeffs(chi.clone(), self.row(chi.index()).to_vec(), None)
    }
}

/// All L-coefficients at once. For each degree `n`, the indicator of monic
/// degree-`n` units on `Z_{n_1} × ... × Z_{n_r}` is transformed by the group
/// DFT `â(m) = Σ_e a(e) e(Σ m_i e_i / n_i)`, one 1-D transform per axis.
pub fn l_coeffs_all(group: &UnitGroup) -> Result<LCoeffMatrix> {
    let dq = group.modulus().degree();
    let phi = group.order() as usize;
    let cells = phi as u128 * dq as u128;
    const CELL_LIMIT: u128 = 1 << 26;
    if cells > CELL_LIMIT {
        return Err(Error::Capacity {
            what: "phi(Q) * deg Q coefficient cells",
            value: cells,
            limit: CELL_LIMIT,
        });
    }
    let q = group.field().q() as u64;
    let orders: Vec<usize> = group.orders().iter().map(|&n| n as usize).collect();

    let columns: Vec<Vec<Complex64>> = (0..dq)
        .into_par_iter()
        .map(|n| {
            let lo = q.pow(n as u32);
            let mut a = vec![Complex64::new(0.0, 0.0); phi];
            for (e, slot) in a.iter_mut().enumerate() {
                let r = group.element(e as u64);
                if (lo..2 * lo).contains(&r) {
                    *slot = Complex64::new(1.0, 0.0);
                }
            }
            group_dft(&mut a, &orders);
            a
        })
        .collect();

    let mut data = vec![Complex64::new(0.0, 0.0); phi * dq];
    for (n, col) in columns.iter().enumerate() {
        for (m, &v) in col.iter().enumerate() {
            data[m * dq + n] = v;
        }
    }
    Ok(LCoeffMatrix { cols: dq, data })
}

/// In-place unnormalized DFT with positive exponent over a mixed-radix
/// layout (first axis contiguous).
pub(crate) fn group_dft(a: &mut [Complex64], orders: &[usize]) {
    let mut planner = FftPlanner::<f64>::new();
    let mut stride = 1usize;
    for &n in orders {
        if n > 1 {
            let fft = planner.plan_fft_inverse(n);
            let block = n * stride;
            let mut line = vec![Complex64::new(0.0, 0.0); n];
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            for start in (0..a.len()).step_by(block) {
                for inner in 0..stride {
                    let base = start + inner;
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot = a[base + j * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (j, v) in line.iter().enumerate() {
                        a[base + j * stride] = *v;
                    }
                }
            }
        }
        stride *= n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::characters::characters;

    fn f3() -> Field {
        Field::gf(3, 1).unwrap()
    }

    #[test]
    fn principal_rejected_and_c0_is_one() {
        let f = f3();
        let g = UnitGroup::new(&f, &f.parse_poly("0 0 1").unwrap()).unwrap();
        let chars: Vec<_> = characters(&g).collect();
        assert!(matches!(l_coeffs(&chars[0]), Err(Error::Unsupported(_))));
        for chi in &chars[1..] {
            let l = l_coeffs(chi).unwrap();
            assert_eq!(l.coeffs()[0], Complex64::new(1.0, 0.0));
            assert!(l.degree() <= 1);
        }
    }

    /// Oracle: sum `chi.eval` over monic polynomials built from scratch.
    fn naive(chi: &Character<'_>, n: usize) -> Complex64 {
        let f = chi.group().field();
        f.monic_polys(n).map(|p| chi.eval(&p)).sum()
    }

    #[test]
    fn direct_path_matches_naive() {
        let f = f3();
        for s in ["0 0 0 1", "1 0 1 1", "0 1 1 1"] {
            let g = UnitGroup::new(&f, &f.parse_poly(s).unwrap()).unwrap();
            for chi in characters(&g).skip(1) {
                let l = l_coeffs(&chi).unwrap();
                for n in 0..3 {
                    assert!((l.coeffs()[n] - naive(&chi, n)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn truncation_validity() {
        let f = f3();
        for d in 1..=4 {
            for m in f.monic_polys(d) {
                let g = UnitGroup::new(&f, &m).unwrap();
                for chi in characters(&g).skip(1) {
                    for n in [d, d + 1] {
                        let (v, z) = monic_char_sum(&chi, n).unwrap();
                        assert!(v.norm() < 1e-9);
                        assert_ne!(z, Some(false));
                    }
                }
            }
        }
    }

    #[test]
    fn bulk_matches_direct() {
        let f = f3();
        for d in 1..=4 {
            for m in f.monic_polys(d) {
                let g = UnitGroup::new(&f, &m).unwrap();
                let all = l_coeffs_all(&g).unwrap();
                assert_eq!(all.row(0)[0], Complex64::new(1.0, 0.0));
                for chi in characters(&g).skip(1) {
                    let direct = l_coeffs(&chi).unwrap();
                    for (a, b) in all.row(chi.index()).iter().zip(direct.coeffs()) {
                        assert!((a - b).norm() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn conjugate_character_conjugates_coefficients() {
        let f = f3();
        let g = UnitGroup::new(&f, &f.parse_poly("2 0 1 0 1").unwrap()).unwrap();
        for chi in characters(&g).skip(1) {
            let a = l_coeffs(&chi).unwrap();
            let b = l_coeffs(&chi.conj()).unwrap();
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                assert!((x.conj() - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn extension_field_bulk_matches_direct() {
        let f = Field::gf(3, 2).unwrap();
        let m = f.poly_mul(&f.parse_poly("00 10").unwrap(), &f.parse_poly("11 10").unwrap());
        let g = UnitGroup::new(&f, &m).unwrap();
        let all = l_coeffs_all(&g).unwrap();
        for chi in characters(&g).skip(1) {
            let direct = l_coeffs(&chi).unwrap();
            for (a, b) in all.row(chi.index()).iter().zip(direct.coeffs()) {
                assert!((a - b).norm() < 1e-9);
            }
        }
    }
}
