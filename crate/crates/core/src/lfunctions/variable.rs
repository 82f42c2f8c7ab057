use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `u = q^{-s}`.
pub fn u_of_s(q: u32, s: Complex64) -> Complex64 {
    (-s * (q as f64).ln()).exp()
}

/// The `s` with `q^{-s} = u` and `Im s ∈ [0, 2π / ln q)`.
pub fn s_of_u(q: u32, u: Complex64) -> Result<Complex64> {
    if u.norm() == 0.0 {
        return Err(Error::domain("u = 0 has no preimage s"));
    }
    let lq = (q as f64).ln();
    let period = TAU / lq;
    let sigma = -u.norm().ln() / lq;
    let mut t = -u.arg() / lq;
    if t < 0.0 {
        t += period;
    }
    if t >= period {
        t -= period;
    }
    Ok(Complex64::new(sigma, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let u = u_of_s(3, Complex64::new(1.0, 0.0));
        assert!((u - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        let u = u_of_s(5, Complex64::new(0.5, 0.7));
        assert!((u.norm() - 5f64.powf(-0.5)).abs() < 1e-15);
        assert!(s_of_u(3, Complex64::new(0.0, 0.0)).is_err());
        let s = s_of_u(3, Complex64::new(1.0 / 3.0, 0.0)).unwrap();
        assert!((s - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn round_trip_on_strip(sigma in 0.0f64..2.0, frac in 0.0f64..0.999, q in prop::sample::select(vec![3u32, 5, 7, 9])) {
            let period = TAU / (q as f64).ln();
            let s = Complex64::new(sigma, frac * period);
            let back = s_of_u(q, u_of_s(q, s)).unwrap();
            prop_assert!((back - s).norm() < 1e-12);
        }
    }
}
