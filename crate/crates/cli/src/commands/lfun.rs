use std::f64::consts::PI;

use ffuniv::algebra::{euler_phi, factorize, phi_lower_bound_check, prime_count, Poly, PrimeTable};
use ffuniv::characters::{Character, UnitGroup};
use ffuniv::lfunctions::{
    family_sweep, hybrid_check, l_coeffs, l_coeffs_all, lemma2_ratio_check, CoprimePrimes,
    LambdaTable, RootClass, SweepOptions,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use super::{Ctx, Outcome};
use crate::error::{CliError, CliResult};
use crate::output::{complex, complexes, ints, join, real, reals};
use crate::setup;

fn classes(cs: &[RootClass]) -> String {
    join(cs, |c| c.as_str().to_string())
}

pub fn primes(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let field = setup::field(ctx.cfg)?;
    let max_degree = ctx.cfg.get_or::<usize>("params", "max_degree", 4)?;
    let q = field.q();
    let table = PrimeTable::new(&field, max_degree)?;
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|(d, p)| vec![d.to_string(), field.format_poly(p)])
        .collect();
    let mut counts = Vec::new();
    let mut mismatches = 0;
    for d in 1..=max_degree {
        let enumerated = table.of_degree(d).len() as u128;
        let formula = prime_count(q, d);
        mismatches += usize::from(enumerated != formula);
        counts.push(json!({
            "degree": d,
            "enumerated": enumerated.to_string(),
            "formula": formula.to_string(),
        }));
    }
    ctx.out.csv("primes", "primes.v1", &["degree", "prime"], &rows)?;
    ctx.out.json(
        "primes",
        &json!({ "q": q, "max_degree": max_degree, "counts": counts, "mismatches": mismatches }),
    )?;
    Ok(Outcome::new(
        mismatches,
        format!("{} primes of degree <= {max_degree}", rows.len()),
    ))
}

pub fn phi(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let field = setup::field(ctx.cfg)?;
    let n = ctx.cfg.get::<usize>("params", "n")?;
    let has_modulus = ctx.cfg.get_str("modulus", "q").is_some();
    if n.is_none() && !has_modulus {
        return Err(CliError::Config("phi needs [modulus] q or [params] n".into()));
    }
    let mut report = serde_json::Map::new();
    let mut summary = Vec::new();
    if has_modulus {
        let m = setup::modulus(ctx.cfg, &field)?;
        let fac = factorize(&field, &m)?;
        let phi = euler_phi(&field, &m)?;
        let factors: Vec<_> = fac
            .factors
            .iter()
            .map(|(p, e)| json!({ "prime": field.format_poly(p), "exponent": e }))
            .collect();
        let norm = field
            .poly_norm(&m)
            .map(|x| x.to_string())
            .unwrap_or_else(|| "overflow".into());
        report.insert("modulus".into(), json!(field.format_poly(&m)));
        report.insert("factors".into(), json!(factors));
        report.insert("phi".into(), json!(phi.to_string()));
        report.insert("norm".into(), json!(norm));
        summary.push(format!("phi = {phi}"));
    }
    let mut failures = 0;
    if let Some(n) = n {
        let mut rows = Vec::new();
        for j in 1..=n {
            let r = phi_lower_bound_check(&field, j)?;
            failures += usize::from(!r.pass);
            rows.push(vec![
                j.to_string(),
                r.deg_q.to_string(),
                r.phi.clone(),
                r.norm.clone(),
                real(r.ratio),
                real(r.threshold),
                r.pass.to_string(),
            ]);
        }
        ctx.out.csv(
            "phi_bound",
            "phi_bound.v1",
            &["n", "deg_q", "phi", "norm", "ratio", "threshold", "pass"],
            &rows,
        )?;
        report.insert("bound_rows".into(), json!(n));
        report.insert("bound_failures".into(), json!(failures));
        summary.push(format!("{failures} lower-bound failures for n <= {n}"));
    }
    ctx.out.json("phi", &report)?;
    Ok(Outcome::new(failures, summary.join(", ")))
}

pub fn lpoly(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let group = setup::group(ctx.cfg)?;
    let bulk = ctx.cfg.get_or::<bool>("params", "bulk", false)?;
    let matrix = if bulk { Some(l_coeffs_all(&group)?) } else { None };
    let rows: Vec<(Vec<String>, usize)> = (1..group.order())
        .into_par_iter()
        .map(|i| {
            let chi = Character::from_index(&group, i);
            let l = match &matrix {
                Some(m) => m.lpoly(&chi),
                None => l_coeffs(&chi)?,
            };
            let roots = l.roots()?;
            let moduli: Vec<f64> = roots.roots.iter().map(|a| a.norm()).collect();
            Ok((
                vec![
                    i.to_string(),
                    ints(chi.exponents()),
                    chi.is_even().to_string(),
                    l.degree().to_string(),
                    complexes(l.coeffs()),
                    complexes(&roots.roots),
                    reals(&moduli),
                    classes(&roots.classes),
                ],
                roots.violations(),
            ))
        })
        .collect::<ffuniv::Result<_>>()?;
    let violations = rows.iter().map(|r| r.1).sum();
    let rows: Vec<Vec<String>> = rows.into_iter().map(|r| r.0).collect();
    ctx.out.csv(
        "lpoly",
        "lpoly.v1",
        &["index", "exponents", "even", "degree", "coeffs", "inverse_roots", "root_moduli", "classes"],
        &rows,
    )?;
    if let Some(index) = ctx.cfg.get::<u64>("params", "character")? {
        let chi = setup::character(&group, index)?;
        let l = l_coeffs(&chi)?;
        let roots = l.roots()?;
        let moduli: Vec<f64> = roots.roots.iter().map(|a| a.norm()).collect();
        ctx.out.json(
            "lpoly",
            &json!({
                "character": chi.to_text(),
                "index": index,
                "exponents": chi.exponents(),
                "even": chi.is_even(),
                "degree": l.degree(),
                "coeffs": l.coeffs().iter().map(|&c| complex(c)).collect::<Vec<_>>(),
                "inverse_roots": roots.roots.iter().map(|&c| complex(c)).collect::<Vec<_>>(),
                "root_moduli": moduli,
                "classes": roots.classes.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
                "converged": roots.converged,
                "iterations": roots.iterations,
                "reconstruction_residual": roots.residual,
            }),
        )?;
    }
    Ok(Outcome::new(
        violations,
        format!("{} L-polynomials, {violations} RH violations", rows.len()),
    ))
}

fn sweep_moduli(ctx: &Ctx<'_>, field: &ffuniv::algebra::Field) -> CliResult<Vec<Poly>> {
    if ctx.cfg.get_str("modulus", "q").is_some() {
        return Ok(vec![setup::modulus(ctx.cfg, field)?]);
    }
    let max = ctx.cfg.get::<usize>("modulus", "max_degree")?.ok_or_else(|| {
        CliError::Config("rhsweep needs [modulus] q or [modulus] max_degree".into())
    })?;
    Ok((1..=max).flat_map(|d| field.monic_polys(d)).collect())
}

/// RH classification for every nonprincipal character of one modulus or of
/// every monic modulus up to `max_degree`.
pub fn rhsweep(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let field = setup::field(ctx.cfg)?;
    let q = field.q();
    let moduli = sweep_moduli(ctx, &field)?;
    let mut opts = SweepOptions {
        bulk: ctx.cfg.get_or::<bool>("params", "bulk", false)?,
        hybrid: None,
    };
    if let Some(ks) = ctx.cfg.list::<usize>("params", "k_list")? {
        let grid = setup::grid(ctx.cfg, q, "disc")?;
        opts.hybrid = Some((grid.u_points(), ks));
    }
    let mut rows = Vec::new();
    let (mut violations, mut unconverged) = (0usize, 0usize);
    let (mut max_residual, mut max_hybrid) = (0.0f64, 0.0f64);
    let mut per_degree = std::collections::BTreeMap::<usize, (usize, usize, usize)>::new();
    for m in &moduli {
        let group = UnitGroup::new(&field, m)?;
        let text = field.format_poly(m);
        let sweep = family_sweep(&group, &opts)?;
        let entry = per_degree.entry(m.degree()).or_default();
        entry.0 += 1;
        entry.1 += sweep.len();
        for r in sweep {
            let v = r.violations();
            violations += v;
            entry.2 += v;
            unconverged += usize::from(!r.converged);
            max_residual = max_residual.max(r.reconstruction_residual);
            max_hybrid = max_hybrid.max(r.hybrid_residual.unwrap_or(0.0));
            rows.push(vec![
                text.clone(),
                r.index.to_string(),
                ints(&r.exponents),
                r.even.to_string(),
                r.degree.to_string(),
                reals(&r.root_moduli),
                classes(&r.classes),
                r.converged.to_string(),
                real(r.reconstruction_residual),
                r.hybrid_residual.map(real).unwrap_or_default(),
            ]);
        }
    }
    ctx.out.csv(
        "rhsweep",
        "rhsweep.v1",
        &[
            "modulus", "index", "exponents", "even", "degree", "root_moduli", "classes", "converged",
            "reconstruction_residual", "hybrid_residual",
        ],
        &rows,
    )?;
    let degrees: Vec<_> = per_degree
        .iter()
        .map(|(d, (m, c, v))| json!({ "degree": d, "moduli": m, "characters": c, "violations": v }))
        .collect();
    ctx.out.json(
        "rhsweep",
        &json!({
            "q": q,
            "moduli": moduli.len(),
            "characters": rows.len(),
            "violations": violations,
            "unconverged": unconverged,
            "max_reconstruction_residual": max_residual,
            "max_hybrid_residual": opts.hybrid.as_ref().map(|_| max_hybrid),
            "per_degree": degrees,
        }),
    )?;
    Ok(Outcome::new(
        violations + unconverged,
        format!(
            "{} moduli, {} characters, {violations} violations, {unconverged} unconverged",
            moduli.len(),
            rows.len()
        ),
    ))
}

/// Hybrid-formula residuals over a u-grid, with the optional ratio check
/// `|L/P_K - 1| / ((deg Q / K) q^{(1/2-σ)K})` on vertical lines.
pub fn hybrid(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let group = setup::group(ctx.cfg)?;
    let q = group.field().q();
    let ks = ctx
        .cfg
        .list::<usize>("params", "k_list")?
        .unwrap_or_else(|| vec![1, 2, 4, 8]);
    let kmax = ks.iter().copied().max().unwrap_or(0);
    if ks.is_empty() || ks.contains(&0) {
        return Err(CliError::Config("[params] k_list must hold positive integers".into()));
    }
    let tolerance = ctx.cfg.get_or::<f64>("params", "tolerance", 1e-9)?;
    let grid = setup::grid(ctx.cfg, q, "disc")?;
    let points = grid.u_points();
    let table = LambdaTable::new(&group, kmax)?;
    let sigmas = ctx.cfg.list::<f64>("params", "sigma_list")?;
    let t_points = ctx.cfg.get_or::<usize>("params", "t_points", 12)?;
    let primes = match sigmas {
        Some(_) => Some(CoprimePrimes::new(&group, kmax)?),
        None => None,
    };
    let period = 2.0 * PI / (q as f64).ln();

    type Rows = Vec<(Vec<String>, f64)>;
    let per_char: Vec<(Rows, Rows)> = (1..group.order())
        .into_par_iter()
        .map(|i| {
            let chi = Character::from_index(&group, i);
            let l = l_coeffs(&chi)?;
            let roots = l.roots()?;
            let exps = ints(chi.exponents());
            let mut h = Vec::new();
            for &k in &ks {
                let r = hybrid_check(&l, &roots, &table, &points, k)?;
                h.push((vec![i.to_string(), exps.clone(), k.to_string(), real(r)], r));
            }
            let mut l2 = Vec::new();
            if let (Some(sig), Some(pr)) = (&sigmas, &primes) {
                for &sigma in sig {
                    let pts: Vec<Complex64> = (0..t_points)
                        .map(|j| Complex64::new(sigma, period * (j as f64 + 0.5) / t_points as f64))
                        .collect();
                    for &k in &ks {
                        let r = lemma2_ratio_check(&l, pr, &pts, k)?;
                        l2.push((
                            vec![
                                i.to_string(),
                                exps.clone(),
                                real(sigma),
                                k.to_string(),
                                real(r.max_rel_error),
                                real(r.max_ratio),
                            ],
                            r.max_ratio,
                        ));
                    }
                }
            }
            Ok((h, l2))
        })
        .collect::<ffuniv::Result<_>>()?;
    let (mut hrows, mut lrows) = (Vec::new(), Vec::new());
    for (h, l) in per_char {
        hrows.extend(h);
        lrows.extend(l);
    }
    let max_residual = hrows.iter().map(|r| r.1).fold(0.0, f64::max);
    let violations = hrows.iter().filter(|r| !(r.1 <= tolerance)).count();
    let hrows: Vec<Vec<String>> = hrows.into_iter().map(|r| r.0).collect();
    ctx.out.csv("hybrid", "hybrid.v1", &["index", "exponents", "k", "max_residual"], &hrows)?;
    let mut report = json!({
        "modulus": group.field().format_poly(group.modulus()),
        "k_list": ks,
        "grid_points": points.len(),
        "max_abs_u": grid.max_abs_u(),
        "tolerance": tolerance,
        "max_residual": max_residual,
        "violations": violations,
    });
    if sigmas.is_some() {
        let c_obs = lrows.iter().map(|r| r.1).fold(0.0, f64::max);
        let lrows: Vec<Vec<String>> = lrows.into_iter().map(|r| r.0).collect();
        ctx.out.csv(
            "ratio",
            "ratio.v1",
            &["index", "exponents", "sigma", "k", "max_rel_error", "ratio"],
            &lrows,
        )?;
        report["ratio_max"] = json!(c_obs);
    }
    ctx.out.json("hybrid", &report)?;
    Ok(Outcome::new(
        violations,
        format!("max hybrid residual {max_residual:.3e} (tolerance {tolerance:.1e})"),
    ))
}
