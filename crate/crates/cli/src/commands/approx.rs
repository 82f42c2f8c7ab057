use ffuniv::approximation::{
    counting_checks, fit_phases, mean_value_experiment, mv_tail_experiment, ParamSet,
    QUADRATURE_NODES,
};
use ffuniv::characters::Character;
use ffuniv::lfunctions::CoprimePrimes;
use ffuniv::universality::f1_principal;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use super::{Ctx, Outcome};
use crate::error::CliResult;
use crate::output::{complex, real};
use crate::setup;

pub fn peak(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let group = match ctx.cfg.get_str("modulus", "q") {
        Some(_) => Some(setup::group(ctx.cfg)?),
        None => None,
    };
    let f = setup::peak(ctx.cfg, group.as_ref())?;
    let points = ctx.cfg.get_or::<usize>("params", "points", 1000)?.max(1);
    let coeffs: Vec<Vec<String>> = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, &c)| vec![j.to_string(), complex(c)])
        .collect();
    let profile: Vec<Vec<String>> = (0..=points)
        .map(|j| {
            let theta = j as f64 / points as f64;
            vec![real(theta), real(f.abs(theta))]
        })
        .collect();
    let kappa = f.kappa();
    let quadrature = f.kappa_quadrature(QUADRATURE_NODES);
    let kappa_in_range = kappa >= 1.0 / (f.k as f64 + 1.0) && kappa <= 1.0 + 1e-12;
    let parseval_gap = (kappa - quadrature).abs();
    let violations = usize::from(!kappa_in_range) + usize::from(!(parseval_gap < 1e-6));
    ctx.out.csv("peak_coeffs", "peak_coeffs.v1", &["j", "coeff"], &coeffs)?;
    ctx.out.csv("peak_profile", "peak_profile.v1", &["theta", "abs"], &profile)?;
    ctx.out.json(
        "peak",
        &json!({
            "k": f.k,
            "delta": f.delta,
            "certificate": f.certificate,
            "decay_bound": f.decay_bound(),
            "kappa": kappa,
            "kappa_quadrature": quadrature,
            "quadrature_nodes": QUADRATURE_NODES,
            "parseval_gap": parseval_gap,
            "kappa_in_range": kappa_in_range,
        }),
    )?;
    Ok(Outcome::new(
        violations,
        format!(
            "K = {}, delta = {}, off-peak max {:.3e} <= {:.3e}, kappa {:.6}",
            f.k, f.delta, f.certificate.off_peak_max, f.certificate.bound, kappa
        ),
    ))
}

/// `mvg` and `mvh`: exhaustive sums of `g` (and `h`, `h⁺`) over the
/// nonprincipal characters, with per-character values.
pub fn mean_value(ctx: &mut Ctx<'_>, with_h: bool) -> CliResult<Outcome> {
    let group = setup::group(ctx.cfg)?;
    let f = setup::peak(ctx.cfg, Some(&group))?;
    let phases = setup::phases(ctx.cfg, &group, ctx.base, setup::default_phase_degree(&group))?;
    let mode = setup::epsilon_mode(ctx.cfg)?;
    let report = mean_value_experiment(&group, &phases, &f, mode)?;
    let prepared = phases.prepare(&group)?;
    let eps = report.epsilon;
    let rows: Vec<Vec<String>> = (1..group.order())
        .into_par_iter()
        .map(|i| {
            let chi = Character::from_index(&group, i);
            let g = prepared.g(&chi, &f);
            let mut row = vec![i.to_string(), real(g)];
            if with_h {
                let h = prepared.h(&chi, &f, eps);
                row.push(real(h));
                row.push(real(h.max(0.0)));
            }
            row
        })
        .collect();
    let name = if with_h { "mvh" } else { "mvg" };
    if with_h {
        ctx.out.csv(name, "mvh.v1", &["index", "g", "h", "h_plus"], &rows)?;
    } else {
        ctx.out.csv(name, "mvg.v1", &["index", "g"], &rows)?;
    }
    let mut value = serde_json::to_value(&report)?;
    value["phases"] = json!(phases.len());
    value["epsilon_mode"] = serde_json::to_value(mode)?;
    ctx.out.json(name, &value)?;
    let (violations, summary) = if with_h {
        (
            report.h_exceeds_g,
            format!(
                "sum h+ / main = {:.6}, scaled error {:.4}",
                report.sum_h_plus / report.main,
                report.h_scaled_error
            ),
        )
    } else {
        (
            0,
            format!(
                "sum g = {:.6e}, main = {:.6e}, C = {:.4}",
                report.sum_g, report.main, report.g_discrepancy
            ),
        )
    };
    Ok(Outcome::new(violations, summary))
}

pub fn mvtail(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let group = setup::group(ctx.cfg)?;
    let f = setup::peak(ctx.cfg, Some(&group))?;
    let phases = setup::phases(ctx.cfg, &group, ctx.base, setup::default_phase_degree(&group))?;
    let deg_q = group.modulus().degree();
    let rho = match ctx.cfg.get::<f64>("params", "rho")? {
        Some(r) => r,
        None => ParamSet::new(group.field().q(), deg_q)?.rho,
    };
    let sigma = ctx.cfg.get_or::<f64>("params", "sigma", 0.75)?;
    let t = ctx.cfg.get_or::<f64>("params", "t", 0.0)?;
    let z = ctx.cfg.get_or::<usize>("params", "z", deg_q)?;
    let report = mv_tail_experiment(&group, &phases, &f, rho, Complex64::new(sigma, t), z, None)?;
    let mut value = serde_json::to_value(&report)?;
    value["phases"] = json!(phases.len());
    value["k"] = json!(f.k);
    value["delta"] = json!(f.delta);
    ctx.out.json("mvtail", &value)?;
    Ok(Outcome::new(
        0,
        format!(
            "{} tail primes, lhs / shape = {:.4}, lhs / l2 = {:.4}",
            report.tail_primes, report.ratio, report.l2_ratio
        ),
    ))
}

pub fn counting(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let field = setup::field(ctx.cfg)?;
    let modulus = match ctx.cfg.get_str("modulus", "q") {
        Some(_) => setup::modulus(ctx.cfg, &field)?,
        None => field.parse_poly("0 1")?,
    };
    let lq = (field.q() as f64).ln();
    let x_min = ctx.cfg.get_or::<f64>("params", "x_min", 2.0 * lq)?;
    let x_max = ctx.cfg.get_or::<f64>("params", "x_max", 8.0 * lq)?;
    let points = ctx.cfg.get_or::<usize>("params", "points", 121)?;
    let c = ctx.cfg.get::<f64>("params", "c")?;
    let report = counting_checks(&field, &modulus, x_min, x_max, points, c)?;
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                real(r.x),
                r.n.to_string(),
                real(r.growth_ratio),
                r.short_count.to_string(),
                real(r.short_ratio),
            ]
        })
        .collect();
    ctx.out.csv(
        "counting",
        "counting.v1",
        &["x", "n", "growth_ratio", "short_count", "short_ratio"],
        &rows,
    )?;
    let growth_in_band = report.growth_min > 0.5 && report.growth_max < 2.0;
    let short_positive = report.short_min > 0.0;
    ctx.out.json(
        "counting",
        &json!({
            "q": report.q,
            "modulus": field.format_poly(&modulus),
            "c": report.c,
            "x_min": x_min,
            "x_max": x_max,
            "rows": report.rows.len(),
            "growth_min": report.growth_min,
            "growth_max": report.growth_max,
            "short_min": report.short_min,
            "growth_in_band": growth_in_band,
            "short_positive": short_positive,
        }),
    )?;
    Ok(Outcome::new(
        0,
        format!(
            "growth ratio in [{:.4}, {:.4}], short ratio min {:.4}",
            report.growth_min, report.growth_max, report.short_min
        ),
    ))
}

/// Fits phases on `μ < deg P ≤ ρ` to `log F - f1` on the grid.
pub fn fit(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let group = setup::group(ctx.cfg)?;
    let field = group.field();
    let grid = setup::grid(ctx.cfg, field.q(), "default")?;
    let target = setup::target(ctx.cfg, &group)?;
    let mu = ctx.cfg.get_or::<usize>("params", "mu", 0)?;
    let rho = setup::rho_degree(ctx.cfg, &group)?;
    let k = match ctx.cfg.get::<usize>("params", "k")? {
        Some(k) => k,
        None => ParamSet::new(field.q(), group.modulus().degree())?.k,
    }
    .max(rho);
    let logs = target.log_values(&grid)?;
    let primes = CoprimePrimes::new(&group, rho.max(mu))?;
    let residual: Vec<Complex64> = logs
        .iter()
        .zip(grid.u_points())
        .map(|(&l, u)| l - f1_principal(&primes, u, mu, k))
        .collect();
    let res = fit_phases(&group, &residual, mu, rho, &grid)?;
    let mut monotone = true;
    for stage in res.stages() {
        monotone &= stage.windows(2).all(|w| w[1] <= w[0]);
    }
    let rows: Vec<Vec<String>> = res
        .history
        .iter()
        .enumerate()
        .map(|(i, &e)| vec![i.to_string(), real(e), res.stage_starts.contains(&i).to_string()])
        .collect();
    ctx.out.text("phases.txt", &res.phases.to_text(field))?;
    ctx.out.csv("fit_history", "fit_history.v1", &["step", "error", "stage_start"], &rows)?;
    ctx.out.json(
        "fit",
        &json!({
            "modulus": field.format_poly(group.modulus()),
            "target": target.label,
            "grid_points": grid.len(),
            "mu": mu,
            "rho": rho,
            "k": k,
            "primes": res.phases.len(),
            "error": res.error,
            "initial_error": res.history.first(),
            "stage_starts": res.stage_starts,
            "steps": res.history.len(),
            "monotone": monotone,
        }),
    )?;
    Ok(Outcome::new(
        usize::from(!monotone),
        format!("{} phases, sup error {:.6e}", res.phases.len(), res.error),
    ))
}
