//! Inverse roots of L-polynomials by Aberth iteration, and their
//! classification against the Weil circles `|α| = √q` and `|α| = 1`.

use num_complex::Complex64;
use serde::Serialize;

use super::lpoly::LPolynomial;
use crate::error::{Error, Result};

pub const SOLVER_TOLERANCE: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;
pub const CLASSIFY_TOLERANCE: f64 = 1e-6;
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-9;
/// Roots closer than this are treated as one multiple root and averaged.
const CLUSTER_RADIUS: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootClass {
    Critical,
    Trivial,
    #[serde(rename = "VIOLATION")]
    Violation,
}

impl RootClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RootClass::Critical => "critical",
            RootClass::Trivial => "trivial",
            RootClass::Violation => "VIOLATION",
        }
    }
}

pub fn classify(alpha: Complex64, q: u32) -> RootClass {
    let r = alpha.norm();
    if (r - (q as f64).sqrt()).abs() < CLASSIFY_TOLERANCE {
        RootClass::Critical
    } else if (r - 1.0).abs() < CLASSIFY_TOLERANCE {
        RootClass::Trivial
    } else {
        RootClass::Violation
    }
}

#[derive(Clone, Debug)]
pub struct RootReport {
    /// Inverse roots with multiplicity, sorted by modulus then argument.
    pub roots: Vec<Complex64>,
    pub classes: Vec<RootClass>,
    pub iterations: usize,
    pub converged: bool,
    /// Max coefficient deviation of `Π(1 - α_j u)` from the input, relative
    /// to `max(1, max |c_n|)`.
    pub residual: f64,
}

impl RootReport {
    pub fn violations(&self) -> usize {
        self.classes
            .iter()
            .filter(|&&c| c == RootClass::Violation)
            .count()
    }
}

/// Coefficients of `Π_j (1 - α_j u)`, lowest first.
pub fn poly_from_inverse_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &a in roots {
        c.push(Complex64::new(0.0, 0.0));
        for i in (1..c.len()).rev() {
            let prev = c[i - 1];
            c[i] -= a * prev;
        }
    }
    c
}

fn reconstruction_residual(coeffs: &[Complex64], roots: &[Complex64]) -> f64 {
    let rec = poly_from_inverse_roots(roots);
    let scale = coeffs.iter().fold(1.0f64, |m, c| m.max(c.norm()));
    rec.iter()
        .zip(coeffs)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Inverse roots of `Σ c_n u^n` with `c_0 = 1` and `c_D ≠ 0`: the roots of
/// the monic reversal `z^D + c_1 z^{D-1} + ... + c_D`.
pub fn inverse_roots(coeffs: &[Complex64], q: u32) -> Result<RootReport> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return Err(Error::pre("root finding needs degree >= 1"));
    }
    if (coeffs[0] - 1.0).norm() > 1e-12 || coeffs[d].norm() == 0.0 {
        return Err(Error::pre("expected c_0 = 1 and a nonzero leading coefficient"));
    }
    // p(z) = Σ_k coeffs[k] z^{d-k}
    let eval = |z: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in coeffs {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };

    let radius = (q as f64).sqrt();
    let offset = 0.4;
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| {
            Complex64::from_polar(
                radius,
                std::f64::consts::TAU * j as f64 / d as f64 + offset,
            )
        })
        .collect();

    let mut iterations = 0;
    let mut converged = d == 1;
    if d == 1 {
        z[0] = -coeffs[1];
    }
    let mut max_step = f64::INFINITY;
    while !converged && iterations < MAX_ITERATIONS {
        iterations += 1;
        max_step = 0.0f64;
        for j in 0..d {
            let (p, dp) = eval(z[j]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&k| k != j)
                .map(|k| (z[j] - z[k]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[j] -= step;
                max_step = max_step.max(step.norm() / z[j].norm().max(1.0));
            }
        }
        converged = max_step < SOLVER_TOLERANCE;
    }

    cluster_polish(&mut z, coeffs);
    let residual = reconstruction_residual(coeffs, &z);
    if !converged && residual >= RECONSTRUCTION_TOLERANCE {
        return Err(Error::NonConvergence {
            iterations,
            max_step,
            residual,
        });
    }
    z.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.arg().partial_cmp(&b.arg()).unwrap())
    });
    let classes = z.iter().map(|&a| classify(a, q)).collect();
    Ok(RootReport {
        roots: z,
        classes,
        iterations,
        converged,
        residual,
    })
}

/// Replaces each cluster of nearly equal roots by its mean, then refines the
/// mean of an m-fold cluster by Newton's method on `p^{(m-1)}`, where the
/// multiple root is simple.
fn cluster_polish(z: &mut [Complex64], coeffs: &[Complex64]) {
    let n = z.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (z[i] - z[j]).norm() < CLUSTER_RADIUS {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    // `coeffs` read highest power first is the monic reversal p(z)
    for i in 0..n {
        if find(&mut label, i) != i {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&k| find(&mut label, k) == i).collect();
        let m = members.len();
        if m == 1 {
            continue;
        }
        let mut root = members.iter().map(|&k| z[k]).sum::<Complex64>() / m as f64;
        let d1 = derivative(coeffs, m - 1);
        let d2 = derivative(&d1, 1);
        for _ in 0..50 {
            let num = horner(&d1, root);
            let den = horner(&d2, root);
            if den.norm() == 0.0 {
                break;
            }
            let step = num / den;
            if !step.is_finite() || step.norm() > CLUSTER_RADIUS {
                break;
            }
            root -= step;
            if step.norm() <= 1e-16 * root.norm().max(1.0) {
                break;
            }
        }
        for &k in &members {
            z[k] = root;
        }
    }
}

/// Coefficients, highest power first, of the `order`-th derivative.
fn derivative(coeffs: &[Complex64], order: usize) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    for _ in 0..order {
        let deg = c.len() - 1;
        c = c[..deg]
            .iter()
            .enumerate()
            .map(|(i, &a)| a * (deg - i) as f64)
            .collect();
        if c.is_empty() {
            c.push(Complex64::new(0.0, 0.0));
        }
    }
    c
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

impl LPolynomial<'_> {
    /// Inverse roots with multiplicity; an L-polynomial of degree 0 has none.
    pub fn roots(&self) -> Result<RootReport> {
        if self.degree() == 0 {
            return Ok(RootReport {
                roots: Vec::new(),
                classes: Vec::new(),
                iterations: 0,
                converged: true,
                residual: 0.0,
            });
        }
        inverse_roots(&self.coeffs()[..=self.degree()], self.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn degree_one() {
        let r = inverse_roots(&[c(1.0, 0.0), c(0.5, -1.5)], 3).unwrap();
        assert_eq!(r.roots, vec![c(-0.5, 1.5)]);
    }

    #[test]
    fn random_polynomials_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 1..=8 {
            for _ in 0..20 {
                let alphas: Vec<Complex64> = (0..d)
                    .map(|_| Complex64::from_polar(rng.gen_range(0.5..3.0), rng.gen_range(0.0..6.28)))
                    .collect();
                let coeffs = poly_from_inverse_roots(&alphas);
                let r = inverse_roots(&coeffs, 3).unwrap();
                assert!(r.residual < 1e-9, "d={d} residual {}", r.residual);
                for a in &alphas {
                    assert!(r.roots.iter().any(|b| (a - b).norm() < 1e-7));
                }
            }
        }
    }

    #[test]
    fn multiple_roots_classified() {
        // (1 - u)^2 (1 - √3 i u)^2 (1 + u)
        let s3 = 3f64.sqrt();
        let alphas = [c(1.0, 0.0), c(1.0, 0.0), c(0.0, s3), c(0.0, s3), c(-1.0, 0.0)];
        let r = inverse_roots(&poly_from_inverse_roots(&alphas), 3).unwrap();
        assert_eq!(r.violations(), 0);
        assert_eq!(
            r.classes.iter().filter(|&&k| k == RootClass::Trivial).count(),
            3
        );
        assert!(r.residual < 1e-9);
    }

    #[test]
    fn classification() {
        assert_eq!(classify(c(3f64.sqrt(), 0.0), 3), RootClass::Critical);
        assert_eq!(classify(c(0.0, -1.0), 3), RootClass::Trivial);
        assert_eq!(classify(c(1.5, 0.0), 3), RootClass::Violation);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(inverse_roots(&[c(1.0, 0.0)], 3).is_err());
        assert!(inverse_roots(&[c(2.0, 0.0), c(1.0, 0.0)], 3).is_err());
        assert!(inverse_roots(&[c(1.0, 0.0), c(0.0, 0.0)], 3).is_err());
    }
}
