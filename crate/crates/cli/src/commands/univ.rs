use std::collections::BTreeSet;

use ffuniv::approximation::peak_poly;
use ffuniv::characters::Character;
use ffuniv::universality::{
    character_sieve, good_bad_split, guided_search, h_positive_set, universality_search,
    with_zero_targets, CharDistance,
};
use serde_json::{json, Value};

use super::{Ctx, Outcome};
use crate::error::CliResult;
use crate::output::{ints, real};
use crate::setup;

fn distance_rows(ds: &[CharDistance]) -> Vec<Vec<String>> {
    ds.iter()
        .map(|d| {
            vec![
                d.index.to_string(),
                ints(&d.exponents),
                d.even.to_string(),
                real(d.distance),
                d.sieve_pass.map(|b| b.to_string()).unwrap_or_default(),
            ]
        })
        .collect()
}

/// Drops the per-character list, which goes to the CSV.
fn without_distances(mut v: Value) -> Value {
    if let Some(m) = v.as_object_mut() {
        m.remove("distances");
        if let Some(s) = m.get_mut("search").and_then(Value::as_object_mut) {
            s.remove("distances");
        }
    }
    v
}

/// Characters meeting the angle conditions, compared against `{h > 0}`.
/// `h > 0` forces the angle conditions, so a character with `h > 0` outside
/// the sieve is a violation; the converse may fail in a thin band.
pub fn sieve(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let group = setup::group(ctx.cfg)?;
    let phases = setup::phases(ctx.cfg, &group, ctx.base, setup::default_phase_degree(&group))?;
    let (k, delta) = setup::peak_params(ctx.cfg, Some(&group))?;
    let mu = ctx.cfg.get::<usize>("params", "mu")?;
    let sieved = character_sieve(&group, &phases, delta, mu)?;
    let full = match mu {
        Some(m) => with_zero_targets(&group, &phases, m)?,
        None => phases.clone(),
    };
    let f = peak_poly(k, delta)?;
    let eps = setup::epsilon_mode(ctx.cfg)?.value(group.field().q(), k, delta);
    let positive: BTreeSet<u64> = h_positive_set(&group, &full, &f, eps)?.into_iter().collect();
    let sieve_set: BTreeSet<u64> = sieved.iter().copied().collect();
    let h_outside = positive.difference(&sieve_set).count();
    let sieve_only = sieve_set.difference(&positive).count();
    let rows: Vec<Vec<String>> = sieved
        .iter()
        .map(|&i| {
            let chi = Character::from_index(&group, i);
            vec![
                i.to_string(),
                ints(chi.exponents()),
                chi.is_even().to_string(),
                positive.contains(&i).to_string(),
            ]
        })
        .collect();
    ctx.out.csv("sieve", "sieve.v1", &["index", "exponents", "even", "h_positive"], &rows)?;
    let phi = group.order();
    ctx.out.json(
        "sieve",
        &json!({
            "modulus": group.field().format_poly(group.modulus()),
            "phi": phi,
            "phases": full.len(),
            "k": k,
            "delta": delta,
            "epsilon": eps,
            "zero_below": mu,
            "sieve_size": sieved.len(),
            "proportion": sieved.len() as f64 / phi as f64,
            "heuristic_proportion": (2.0 * delta).min(1.0).powi(full.len() as i32),
            "h_positive_size": positive.len(),
            "h_positive_outside_sieve": h_outside,
            "sieve_with_h_nonpositive": sieve_only,
        }),
    )?;
    Ok(Outcome::new(
        h_outside,
        format!(
            "{} of {} characters sieved, {} with h > 0",
            sieved.len(),
            phi,
            positive.len()
        ),
    ))
}

pub fn search(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let group = setup::group(ctx.cfg)?;
    let grid = setup::grid(ctx.cfg, group.field().q(), "default")?;
    let target = setup::target(ctx.cfg, &group)?;
    let epsilon = ctx.cfg.get_or::<f64>("params", "epsilon", 0.5)?;
    let report = universality_search(&group, &target, &grid, epsilon)?;
    ctx.out.csv(
        "search",
        "search.v1",
        &["index", "exponents", "even", "distance", "sieve_pass"],
        &distance_rows(&report.distances),
    )?;
    ctx.out.json("search", &without_distances(serde_json::to_value(&report)?))?;
    Ok(Outcome::new(
        0,
        format!(
            "best {} at distance {:.6e}, proportion within {epsilon}: {:.6}",
            report.best_index, report.best_distance, report.proportion
        ),
    ))
}

pub fn guided(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let group = setup::group(ctx.cfg)?;
    let grid = setup::grid(ctx.cfg, group.field().q(), "default")?;
    let target = setup::target(ctx.cfg, &group)?;
    let epsilon = ctx.cfg.get_or::<f64>("params", "epsilon", 0.5)?;
    let mu = ctx.cfg.get_or::<usize>("params", "mu", 0)?;
    let rho = ctx.cfg.get::<usize>("params", "rho")?;
    let report = guided_search(&group, &target, &grid, mu, rho, epsilon)?;
    ctx.out.csv(
        "guided",
        "guided.v1",
        &["index", "exponents", "even", "distance", "sieve_pass"],
        &distance_rows(&report.search.distances),
    )?;
    ctx.out.json("guided", &without_distances(serde_json::to_value(&report)?))?;
    Ok(Outcome::new(
        0,
        format!(
            "sieve kept {} characters; best sieved {:.6e}, best overall {:.6e}",
            report.sieve_size, report.search.best_distance, report.exhaustive_best_distance
        ),
    ))
}

pub fn splitgb(ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    let group = setup::group(ctx.cfg)?;
    let grid = setup::grid(ctx.cfg, group.field().q(), "default")?;
    let f = setup::peak(ctx.cfg, Some(&group))?;
    let rho = setup::rho_degree(ctx.cfg, &group)?;
    let mu = ctx.cfg.get_or::<usize>("params", "mu", 0)?;
    let phases = setup::phases(ctx.cfg, &group, ctx.base, rho.max(1))?;
    let phases = with_zero_targets(&group, &phases, mu)?;
    let eps = setup::epsilon_mode(ctx.cfg)?.value(group.field().q(), f.k, f.delta);
    let k = f.k.max(rho);
    let report = good_bad_split(&group, &grid, &phases, &f, eps, rho, k)?;
    let mut value = serde_json::to_value(&report)?;
    value["mu"] = json!(mu);
    value["delta"] = json!(f.delta);
    value["epsilon"] = json!(eps);
    value["phases"] = json!(phases.len());
    ctx.out.json("splitgb", &value)?;
    Ok(Outcome::new(
        0,
        format!(
            "{} good, {} bad; bad share of h+ {:.4}",
            report.good, report.bad, report.bad_share
        ),
    ))
}
