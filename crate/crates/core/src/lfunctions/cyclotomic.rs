//! Exact sums of roots of unity, with a compensated floating fallback for
//! large orders.

use num_complex::Complex64;

use crate::characters::root_of_unity;

/// Largest root-of-unity order summed exactly.
pub const EXACT_ORDER_LIMIT: u64 = 360;

/// Integer coefficients of the n-th cyclotomic polynomial, lowest first.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut memo: Vec<(u64, Vec<i64>)> = Vec::with_capacity(divisors.len());
    for &m in &divisors {
        // x^m - 1 divided by Φ_d for every proper divisor d of m
        let mut num = vec![0i64; m as usize + 1];
        num[0] = -1;
        num[m as usize] = 1;
        for (d, phi_d) in &memo {
            if m % d == 0 {
                num = exact_div(&num, phi_d);
            }
        }
        memo.push((m, num));
    }
    memo.pop().unwrap().1
}

fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut quot = vec![0i64; a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db] / b[db];
        quot[i] = c;
        for (j, &bj) in b.iter().enumerate() {
            rem[i + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// `Σ_k counts[k] ζ^k` reduced modulo `Φ_n(ζ)`; the result is zero iff the
/// sum is zero.
fn reduce(counts: &[i64], phi: &[i64]) -> Vec<i64> {
    let mut r = counts.to_vec();
    let dp = phi.len() - 1;
    for i in (dp..r.len()).rev() {
        let c = r[i];
        if c != 0 {
            for (j, &pj) in phi.iter().enumerate() {
                r[i - dp + j] -= c * pj;
            }
        }
    }
    r.truncate(dp);
    r
}

/// Neumaier-compensated complex summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: Complex64) {
        let re = two_sum(self.sum.re, x.re);
        let im = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(re.0, im.0);
        self.comp += Complex64::new(re.1, im.1);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = if a.abs() >= b.abs() {
        (a - s) + b
    } else {
        (b - s) + a
    };
    (s, err)
}

/// Precomputed context for summing n-th roots of unity.
#[derive(Clone, Debug)]
pub struct RootSummer {
    order: u64,
    phi: Option<Vec<i64>>,
}

impl RootSummer {
    pub fn new(order: u64) -> Self {
        let phi = (order <= EXACT_ORDER_LIMIT).then(|| cyclotomic_poly(order));
        RootSummer { order, phi }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.phi.is_some()
    }

    pub fn accumulator(&self) -> RootAccumulator<'_> {
        RootAccumulator {
            summer: self,
            counts: if self.is_exact() {
                vec![0; self.order as usize]
            } else {
                Vec::new()
            },
            float: CompensatedSum::default(),
        }
    }
}

/// Sum of roots of unity `ζ_n^k` being built up.
pub struct RootAccumulator<'a> {
    summer: &'a RootSummer,
    counts: Vec<i64>,
    float: CompensatedSum,
}

/// A finished sum: its complex value, and whether it is exactly zero (only
/// decidable on the exact path).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootSum {
    pub value: Complex64,
    pub exact_zero: Option<bool>,
}

impl RootAccumulator<'_> {
    pub fn add(&mut self, k: u64) {
        if self.summer.is_exact() {
            self.counts[(k % self.summer.order) as usize] += 1;
        } else {
            self.float.add(root_of_unity(k, self.summer.order));
        }
    }

    pub fn finish(self) -> RootSum {
        match &self.summer.phi {
            Some(phi) => {
                let r = reduce(&self.counts, phi);
                if r.iter().all(|&c| c == 0) {
                    return RootSum {
                        value: Complex64::new(0.0, 0.0),
                        exact_zero: Some(true),
                    };
                }
                let mut s = CompensatedSum::default();
                for (k, &c) in r.iter().enumerate() {
                    if c != 0 {
                        s.add(root_of_unity(k as u64, self.summer.order) * c as f64);
                    }
                }
                RootSum {
                    value: s.value(),
                    exact_zero: Some(false),
                }
            }
            None => RootSum {
                value: self.float.value(),
                exact_zero: None,
            },
        }
    }
}
