//! Whole-family sweeps: L-polynomial, roots, RH classification and hybrid
//! residual for every nonprincipal character mod Q.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::hybrid::{hybrid_check, LambdaTable};
use super::lpoly::{l_coeffs, l_coeffs_all};
use super::roots::RootClass;
use crate::characters::{Character, UnitGroup};
use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub index: u64,
    pub exponents: Vec<u64>,
    pub even: bool,
    pub degree: usize,
    pub root_moduli: Vec<f64>,
    pub classes: Vec<RootClass>,
    pub converged: bool,
    pub reconstruction_residual: f64,
    /// Max over K of the hybrid residual, when requested.
    pub hybrid_residual: Option<f64>,
}

impl SweepRow {
    pub fn violations(&self) -> usize {
        self.classes
            .iter()
            .filter(|&&c| c == RootClass::Violation)
            .count()
    }
}

#[derive(Clone, Debug, Default)]
pub struct SweepOptions {
    /// Use the group-DFT path instead of per-character summation.
    pub bulk: bool,
    /// Points and truncation levels for the hybrid residual.
    pub hybrid: Option<(Vec<Complex64>, Vec<usize>)>,
}

/// One row per nonprincipal character, in odometer order.
pub fn family_sweep(group: &UnitGroup, opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    let matrix = if opts.bulk {
        Some(l_coeffs_all(group)?)
    } else {
        None
    };
    let table = match &opts.hybrid {
        Some((_, ks)) => Some(LambdaTable::new(group, ks.iter().copied().max().unwrap_or(0))?),
        None => None,
    };
    (1..group.order())
        .into_par_iter()
        .map(|i| {
            let chi = Character::from_index(group, i);
            let l = match &matrix {
                Some(m) => m.lpoly(&chi),
                None => l_coeffs(&chi)?,
            };
            let roots = l.roots()?;
            let hybrid_residual = match (&opts.hybrid, &table) {
                (Some((points, ks)), Some(t)) => {
                    let mut worst = 0.0f64;
                    for &k in ks {
                        worst = worst.max(hybrid_check(&l, &roots, t, points, k)?);
                    }
                    Some(worst)
                }
                _ => None,
            };
            Ok(SweepRow {
                index: i,
                exponents: chi.exponents().to_vec(),
                even: chi.is_even(),
                degree: l.degree(),
                root_moduli: roots.roots.iter().map(|a| a.norm()).collect(),
                classes: roots.classes.clone(),
                converged: roots.converged,
                reconstruction_residual: roots.residual,
                hybrid_residual,
            })
        })
        .collect()
}
