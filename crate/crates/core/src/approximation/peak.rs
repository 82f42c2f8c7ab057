//! Trigonometric peak polynomials `f(θ) = Σ_{k=0}^K c_k e(kθ)` with
//! `max |f| = f(0) = 1` and `|f| ≤ 2e^{-πKδ}` on `[δ, 1-δ]`.
//!
//! The construction is a modulated Chebyshev window:
//!
//! ```text
//! f(θ) = e(Kθ/2) · T_K(cos πθ / cos πδ) / T_K(sec πδ)
//! ```
//!
//! On `[δ, 1-δ]` the Chebyshev argument lies in `[-1, 1]`, so
//! `|f| ≤ 1/T_K(sec πδ) ≤ 2e^{-K arccosh(sec πδ)} ≤ 2e^{-πKδ}`. For even
//! `K = 2m` this is `T_m(a cos 2πθ + b)` with `a = sec² πδ`, `b = a - 1`.
//! At `δ = 1/2` the limit is the binomial window `((1 + e(θ))/2)^K`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};

pub const CERTIFY_GRID: usize = 10_000;
pub const QUADRATURE_NODES: usize = 2048;

/// `e(x) = exp(2πix)`.
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// Chebyshev `T_n(x)` for any real `x`.
pub fn chebyshev_t(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    if x.abs() <= 1.0 {
        (nf * x.acos()).cos()
    } else if x > 1.0 {
        (nf * x.acosh()).cosh()
    } else {
        let v = (nf * (-x).acosh()).cosh();
        if n % 2 == 0 {
            v
        } else {
            -v
        }
    }
}

/// Results of the construction-time checks.
#[derive(Clone, Debug, Serialize)]
pub struct PeakCertificate {
    pub f0: f64,
    pub grid_points: usize,
    pub grid_max: f64,
    pub grid_argmax: f64,
    pub off_peak_max: f64,
    pub bound: f64,
    /// max over the grid of |series - closed form|
    pub series_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeakPolynomial {
    pub k: usize,
    pub delta: f64,
    pub coeffs: Vec<Complex64>,
    pub certificate: PeakCertificate,
}

impl PeakPolynomial {
    /// Closed-form value; the same trigonometric polynomial as the series,
    /// but without the absolute rounding floor of summing coefficients.
    pub fn eval(&self, theta: f64) -> Complex64 {
        closed_form(self.k, self.delta, theta)
    }

    /// `|f(θ)|`, from the closed form.
    pub fn abs(&self, theta: f64) -> f64 {
        closed_form_abs(self.k, self.delta, theta)
    }

    /// `Σ c_k e(kθ)`.
    pub fn eval_series(&self, theta: f64) -> Complex64 {
        let w = e(theta);
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    }

    /// `κ = Σ |c_k|² = ∫_0^1 |f|²`.
    pub fn kappa(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `∫_0^1 |f|²` by the rectangle rule on `n` equispaced nodes, exact for
    /// `n > K`.
    pub fn kappa_quadrature(&self, n: usize) -> f64 {
        (0..n)
            .map(|j| self.eval_series(j as f64 / n as f64).norm_sqr())
            .sum::<f64>()
            / n as f64
    }

    pub fn decay_bound(&self) -> f64 {
        2.0 * (-PI * self.k as f64 * self.delta).exp()
    }
}

/// Single coefficient `c_0 = 1`: the constant polynomial.
pub fn constant_peak() -> PeakPolynomial {
    PeakPolynomial {
        k: 0,
        delta: 0.5,
        coeffs: vec![Complex64::new(1.0, 0.0)],
        certificate: PeakCertificate {
            f0: 1.0,
            grid_points: 0,
            grid_max: 1.0,
            grid_argmax: 0.0,
            off_peak_max: 1.0,
            bound: 2.0,
            series_deviation: 0.0,
        },
    }
}

fn closed_form_abs(k: usize, delta: f64, theta: f64) -> f64 {
    let c = (PI * theta).cos();
    if delta >= 0.5 {
        return c.abs().powi(k as i32);
    }
    let cd = (PI * delta).cos();
    (chebyshev_t(k, c / cd) / chebyshev_t(k, 1.0 / cd)).abs()
}

fn closed_form(k: usize, delta: f64, theta: f64) -> Complex64 {
    let c = (PI * theta).cos();
    let real = if delta >= 0.5 {
        c.powi(k as i32)
    } else {
        let cd = (PI * delta).cos();
        chebyshev_t(k, c / cd) / chebyshev_t(k, 1.0 / cd)
    };
    e(k as f64 * theta / 2.0) * real
}

/// Builds and certifies the peak polynomial for `K ≥ 1`, `0 < δ ≤ 1/2`.
pub fn peak_poly(k: usize, delta: f64) -> Result<PeakPolynomial> {
    if k == 0 {
        return Err(Error::pre("peak polynomial needs K >= 1"));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::pre("peak polynomial needs 0 < delta <= 1/2"));
    }
    // c_k from the K+1 equispaced samples: f has frequencies 0..K only
    let n = k + 1;
    let mut buf: Vec<Complex64> = (0..n)
        .map(|j| closed_form(k, delta, j as f64 / n as f64))
        .collect();
    FftPlanner::<f64>::new()
        .plan_fft_forward(n)
        .process(&mut buf);
    let coeffs: Vec<Complex64> = buf
        .iter()
        .map(|c| Complex64::new(c.re / n as f64, c.im / n as f64))
        .collect();

    let mut f = PeakPolynomial {
        k,
        delta,
        coeffs,
        certificate: constant_peak().certificate,
    };
    let bound = f.decay_bound();
    let mut grid_max = 0.0f64;
    let mut grid_argmax = 0.0;
    let mut off_peak_max = 0.0f64;
    let mut series_deviation = 0.0f64;
    for j in 0..CERTIFY_GRID {
        let theta = j as f64 / CERTIFY_GRID as f64;
        let a = f.abs(theta);
        if a > grid_max {
            grid_max = a;
            grid_argmax = theta;
        }
        if theta >= delta && theta <= 1.0 - delta {
            off_peak_max = off_peak_max.max(a);
        }
        series_deviation = series_deviation.max((f.eval_series(theta) - f.eval(theta)).norm());
    }
    let f0 = f.eval_series(0.0).re;
    f.certificate = PeakCertificate {
        f0,
        grid_points: CERTIFY_GRID,
        grid_max,
        grid_argmax,
        off_peak_max,
        bound,
        series_deviation,
    };
    if off_peak_max > bound {
        return Err(Error::Construction {
            measured: off_peak_max,
            bound,
        });
    }
    if (f0 - 1.0).abs() > 1e-12 || grid_argmax != 0.0 || (grid_max - 1.0).abs() > 1e-9 {
        return Err(Error::Construction {
            measured: grid_max,
            bound: 1.0,
        });
    }
    if series_deviation > 1e-12 {
        return Err(Error::Construction {
            measured: series_deviation,
            bound: 1e-12,
        });
    }
    Ok(f)
}

/// `‖x‖`, the distance to the nearest integer.
pub fn dist_to_int(x: f64) -> f64 {
    let r = x - x.round();
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_matches_recurrence() {
        for &x in &[-1.7, -1.0, -0.3, 0.0, 0.5, 1.0, 1.2, 3.0] {
            let (mut t0, mut t1) = (1.0f64, x);
            for n in 2..12 {
                let t2 = 2.0 * x * t1 - t0;
                let v = chebyshev_t(n, x);
                assert!((v - t2).abs() <= 1e-9 * t2.abs().max(1.0), "n={n} x={x}");
                t0 = t1;
                t1 = t2;
            }
        }
    }

    #[test]
    fn even_k_equals_composed_window() {
        // T_{2m}(y) = T_m(2y² - 1) with y = cos πθ / cos πδ
        let (m, delta) = (5usize, 0.1);
        let a = 1.0 / (PI * delta).cos().powi(2);
        let b = a - 1.0;
        let norm = chebyshev_t(m, a + b);
        let f = peak_poly(2 * m, delta).unwrap();
        for j in 0..50 {
            let theta = j as f64 / 50.0;
            let alt = e(m as f64 * theta) * chebyshev_t(m, a * (2.0 * PI * theta).cos() + b) / norm;
            assert!((alt - f.eval(theta)).norm() < 1e-12);
        }
    }

    #[test]
    fn certified_examples() {
        let f = peak_poly(32, 0.1).unwrap();
        assert!(f.certificate.off_peak_max <= 2.0 * (-3.2 * PI).exp());
        assert!((f.eval_series(0.0) - 1.0).norm() < 1e-12);
        let kap = f.kappa();
        assert!(kap >= 1.0 / 33.0 && kap <= 1.0);
        assert!((kap - f.kappa_quadrature(QUADRATURE_NODES)).abs() < 1e-6);
    }

    #[test]
    fn odd_k_and_half_delta() {
        for k in [1usize, 3, 7, 9] {
            for delta in [0.05, 0.2, 0.5] {
                let f = peak_poly(k, delta).unwrap();
                assert!(f.certificate.off_peak_max <= f.decay_bound());
                // real symmetric coefficients
                for i in 0..=k {
                    assert!((f.coeffs[i] - f.coeffs[k - i]).norm() < 1e-12);
                    assert!(f.coeffs[i].im.abs() < 1e-12);
                }
            }
        }
        let f = peak_poly(4, 0.5).unwrap();
        let binom = [1.0, 4.0, 6.0, 4.0, 1.0];
        for (c, b) in f.coeffs.iter().zip(binom) {
            assert!((c.re - b / 16.0).abs() < 1e-15);
        }
    }

    #[test]
    fn preconditions() {
        assert!(peak_poly(0, 0.1).is_err());
        assert!(peak_poly(4, 0.0).is_err());
        assert!(peak_poly(4, 0.6).is_err());
        let c = constant_peak();
        assert_eq!(c.kappa(), 1.0);
    }

    #[test]
    fn distance_to_integer() {
        assert!((dist_to_int(0.9) - 0.1).abs() < 1e-15);
        assert!((dist_to_int(-0.3) - 0.3).abs() < 1e-15);
        assert_eq!(dist_to_int(2.0), 0.0);
    }
}
