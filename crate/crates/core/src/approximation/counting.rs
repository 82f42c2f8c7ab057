//! The counting function of `Λ_Q = {log |P| : P ∤ Q}` as a multiset.

use serde::Serialize;

use crate::algebra::{factorize, prime_count, Field, Poly};
use crate::error::{Error, Result};

/// Largest prime degree the counting function is tabulated to.
pub const MAX_COUNT_DEGREE: usize = 60;

#[derive(Clone, Debug, Serialize)]
pub struct CountingRow {
    pub x: f64,
    pub n: u128,
    /// `N(x)·x/e^x`
    pub growth_ratio: f64,
    /// `N(x + c/x²) - N(x)`
    pub short_count: u128,
    /// `(N(x + c/x²) - N(x))·x³/e^x`
    pub short_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountingReport {
    pub q: u32,
    pub c: f64,
    pub rows: Vec<CountingRow>,
    pub growth_min: f64,
    pub growth_max: f64,
    pub short_min: f64,
}

/// `N(x)` for each prime degree: `cumulative[d] = Σ_{j≤d} (π_q(j) - #{P | Q : deg P = j})`.
#[derive(Clone, Debug)]
pub struct CountingFunction {
    q: u32,
    cumulative: Vec<u128>,
}

impl CountingFunction {
    pub fn new(field: &Field, modulus: &Poly, max_degree: usize) -> Result<Self> {
        if max_degree > MAX_COUNT_DEGREE {
            return Err(Error::Capacity {
                what: "counting degree",
                value: max_degree as u128,
                limit: MAX_COUNT_DEGREE as u128,
            });
        }
        let q = field.q();
        let mut dividing = vec![0u128; max_degree + 1];
        for (p, _) in factorize(field, modulus)?.factors {
            if p.degree() <= max_degree {
                dividing[p.degree()] += 1;
            }
        }
        let mut cumulative = vec![0u128; max_degree + 1];
        for d in 1..=max_degree {
            cumulative[d] = cumulative[d - 1] + prime_count(q, d) - dividing[d];
        }
        Ok(CountingFunction { q, cumulative })
    }

    /// Multiplicity of `d·log q` in the multiset.
    pub fn multiplicity(&self, d: usize) -> u128 {
        if d == 0 {
            0
        } else {
            self.cumulative[d] - self.cumulative[d - 1]
        }
    }

    /// `#{λ ∈ Λ_Q : λ ≤ x}`.
    pub fn count(&self, x: f64) -> Result<u128> {
        if x < 0.0 {
            return Ok(0);
        }
        // jump points d·ln q are included despite rounding
        let d = (x / (self.q as f64).ln() + 1e-9).floor() as usize;
        self.cumulative.get(d).copied().ok_or(Error::Capacity {
            what: "counting degree",
            value: d as u128,
            limit: (self.cumulative.len() - 1) as u128,
        })
    }
}

/// Tabulates `N(x)x/e^x` and the short-interval increment on an even grid of
/// `n` points in `[x_min, x_max]` together with every jump point in range.
/// The interval length is `c/x²`; `c` defaults to `x_max² log q`, which makes
/// every interval contain a jump point.
pub fn counting_checks(
    field: &Field,
    modulus: &Poly,
    x_min: f64,
    x_max: f64,
    n: usize,
    c: Option<f64>,
) -> Result<CountingReport> {
    if !(x_min > 0.0 && x_min <= x_max) || n == 0 {
        return Err(Error::pre("counting grid needs 0 < x_min <= x_max and n >= 1"));
    }
    let q = field.q();
    let lq = (q as f64).ln();
    let c = c.unwrap_or(x_max * x_max * lq);
    if !(c > 0.0) {
        return Err(Error::pre("short-interval constant must be positive"));
    }
    let top = ((x_max + c / (x_min * x_min)) / lq).floor() as usize + 1;
    let counter = CountingFunction::new(field, modulus, top)?;

    let mut xs: Vec<f64> = if n == 1 {
        vec![x_min]
    } else {
        (0..n)
            .map(|i| x_min + (x_max - x_min) * i as f64 / (n - 1) as f64)
            .collect()
    };
    let first = (x_min / lq).ceil() as usize;
    xs.extend((first..).map(|d| d as f64 * lq).take_while(|&x| x <= x_max));
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        let nx = counter.count(x)?;
        let short = counter.count(x + c / (x * x))? - nx;
        rows.push(CountingRow {
            x,
            n: nx,
            growth_ratio: nx as f64 * x / x.exp(),
            short_count: short,
            short_ratio: short as f64 * x.powi(3) / x.exp(),
        });
    }
    let growth_min = rows.iter().map(|r| r.growth_ratio).fold(f64::INFINITY, f64::min);
    let growth_max = rows.iter().map(|r| r.growth_ratio).fold(0.0, f64::max);
    let short_min = rows.iter().map(|r| r.short_ratio).fold(f64::INFINITY, f64::min);
    Ok(CountingReport {
        q,
        c,
        rows,
        growth_min,
        growth_max,
        short_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::irreducible_test;

    #[test]
    fn examples() {
        let field = Field::gf(3, 1).unwrap();
        let x = Poly::x();
        let n = CountingFunction::new(&field, &x, 5).unwrap();
        let l3 = 3f64.ln();
        assert_eq!(n.count(l3 * 0.999).unwrap(), 0);
        assert_eq!(n.count(3.0 * l3).unwrap(), 13);
        assert_eq!(n.count(l3).unwrap(), 2);
    }

    #[test]
    fn multiplicity_matches_enumeration() {
        for (p, modulus) in [(3u32, vec![0i64, 0, 1]), (3, vec![2, 0, 1, 1]), (5, vec![0, 1])] {
            let field = Field::gf(p, 1).unwrap();
            let q = Poly::from_coeffs(modulus.iter().map(|&c| field.from_int(c)).collect());
            let n = CountingFunction::new(&field, &q, 4).unwrap();
            for d in 1..=4 {
                let want = field
                    .monic_polys(d)
                    .filter(|f| irreducible_test(&field, f).unwrap())
                    .filter(|f| field.poly_rem(&q, f).unwrap().is_zero() == false)
                    .count() as u128;
                assert_eq!(n.multiplicity(d), want, "p={p} d={d}");
            }
        }
    }

    #[test]
    fn report_includes_jumps() {
        let field = Field::gf(3, 1).unwrap();
        let l3 = 3f64.ln();
        let r = counting_checks(&field, &Poly::x(), 2.0 * l3, 8.0 * l3, 5, None).unwrap();
        for d in 2..=8 {
            assert!(r.rows.iter().any(|row| (row.x - d as f64 * l3).abs() < 1e-12));
        }
        assert!(r.short_min > 0.0);
        assert!(r.growth_min > 0.0);
        assert!(counting_checks(&field, &Poly::x(), 0.0, 1.0, 5, None).is_err());
    }
}
