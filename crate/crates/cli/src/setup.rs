//! Library objects built from config sections.

use std::f64::consts::PI;
use std::path::Path;

use ffuniv::algebra::{Field, Poly};
use ffuniv::approximation::{peak_poly, EpsilonMode, ParamSet, PeakPolynomial, PhaseAssignment};
use ffuniv::characters::{Character, UnitGroup};
use ffuniv::lfunctions::{l_coeffs, CoprimePrimes, RegionGrid};
use ffuniv::universality::{TargetFunction, TargetKind};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::output::parse_complex;

pub fn field(cfg: &Config) -> CliResult<Field> {
    let p = cfg.require::<u32>("field", "p")?;
    let k = cfg.get_or::<u32>("field", "k", 1)?;
    Ok(Field::gf(p, k)?)
}

pub fn modulus(cfg: &Config, field: &Field) -> CliResult<Poly> {
    let text: String = cfg.require("modulus", "q")?;
    Ok(field.parse_poly(&text)?)
}

pub fn group(cfg: &Config) -> CliResult<UnitGroup> {
    let f = field(cfg)?;
    let q = modulus(cfg, &f)?;
    Ok(UnitGroup::new(&f, &q)?)
}

/// `[grid] kind = default | annulus | disc | rectangle`.
pub fn grid(cfg: &Config, q: u32, default_kind: &str) -> CliResult<RegionGrid> {
    let qf = q as f64;
    let kind = cfg.get_or::<String>("grid", "kind", default_kind.into())?;
    let g = |key: &str, default: f64| cfg.get_or::<f64>("grid", key, default);
    let n = |key: &str, default: usize| cfg.get_or::<usize>("grid", key, default);
    let grid = match kind.as_str() {
        "default" => RegionGrid::default_u(q)?,
        "annulus" => RegionGrid::annulus(
            q,
            g("r_min", qf.powf(-0.85))?,
            g("r_max", qf.powf(-0.65))?,
            g("theta_min", 0.0)?,
            g("theta_max", 0.8 * PI)?,
            n("n_r", 10)?,
            n("n_theta", 20)?,
        )?,
        "disc" => RegionGrid::disc(
            q,
            g("radius", 0.999 / qf.sqrt())?,
            n("n_r", 5)?,
            n("n_theta", 20)?,
        )?,
        "rectangle" => {
            let period = 2.0 * PI / qf.ln();
            RegionGrid::rectangle(
                q,
                g("sigma_min", 0.6)?,
                g("sigma_max", 0.9)?,
                g("t_min", 0.05 * period)?,
                g("t_max", 0.95 * period)?,
                n("n_sigma", 4)?,
                n("n_t", 12)?,
            )?
        }
        other => {
            return Err(CliError::Config(format!(
                "[grid] kind {other:?}: expected default, annulus, disc or rectangle"
            )))
        }
    };
    Ok(grid)
}

fn complex_list(cfg: &Config, section: &str, key: &str) -> CliResult<Option<Vec<Complex64>>> {
    cfg.get_with(section, key, "complex numbers like 1+0.5j", |v| {
        v.split_whitespace().map(parse_complex).collect()
    })
}

fn complex_value(cfg: &Config, section: &str, key: &str) -> CliResult<Option<Complex64>> {
    cfg.get_with(section, key, "a complex number like 1+0.5j", parse_complex)
}

/// `[target] kind = constant | polynomial | exp_polynomial | reciprocal_linear | lpoly`.
/// `lpoly` plants the L-polynomial of character `character` mod Q.
pub fn target(cfg: &Config, group: &UnitGroup) -> CliResult<TargetFunction> {
    let kind_name = cfg.get_or::<String>("target", "kind", "constant".into())?;
    let coeffs = || {
        complex_list(cfg, "target", "coeffs")?
            .ok_or_else(|| CliError::Config(format!("[target] kind {kind_name} needs coeffs")))
    };
    let kind = match kind_name.as_str() {
        "constant" => TargetKind::Constant {
            c: complex_value(cfg, "target", "c")?.unwrap_or(Complex64::new(1.0, 0.0)),
        },
        "polynomial" => TargetKind::Polynomial { coeffs: coeffs()? },
        "exp_polynomial" => TargetKind::ExpPolynomial { coeffs: coeffs()? },
        "reciprocal_linear" => TargetKind::ReciprocalLinear {
            a: complex_value(cfg, "target", "a")?
                .ok_or_else(|| CliError::Config("[target] reciprocal_linear needs a".into()))?,
        },
        "lpoly" => {
            let index = cfg.require::<u64>("target", "character")?;
            let chi = character(group, index)?;
            TargetKind::Polynomial {
                coeffs: l_coeffs(&chi)?.coeffs().to_vec(),
            }
        }
        other => {
            return Err(CliError::Config(format!(
                "[target] kind {other:?}: expected constant, polynomial, exp_polynomial, reciprocal_linear or lpoly"
            )))
        }
    };
    let label = cfg.get_or::<String>("target", "label", kind_name.clone())?;
    Ok(TargetFunction::new(kind, label))
}

pub fn character(group: &UnitGroup, index: u64) -> CliResult<Character<'_>> {
    if index >= group.order() {
        return Err(CliError::Config(format!(
            "character index {index} out of range (phi(Q) = {})",
            group.order()
        )));
    }
    Ok(Character::from_index(group, index))
}

/// `K`, `δ` from `[params]`, falling back to the parameters derived from
/// `deg Q` when either is missing.
pub fn peak_params(cfg: &Config, group: Option<&UnitGroup>) -> CliResult<(usize, f64)> {
    let k = cfg.get::<usize>("params", "k")?;
    let delta = cfg.get::<f64>("params", "delta")?;
    match (k, delta, group) {
        (Some(k), Some(d), _) => Ok((k, d)),
        (k, d, Some(g)) => {
            let p = ParamSet::new(g.field().q(), g.modulus().degree())?;
            Ok((k.unwrap_or(p.k), d.unwrap_or(p.delta)))
        }
        _ => Err(CliError::Config("[params] needs k and delta".into())),
    }
}

pub fn peak(cfg: &Config, group: Option<&UnitGroup>) -> CliResult<PeakPolynomial> {
    let (k, delta) = peak_params(cfg, group)?;
    Ok(peak_poly(k, delta)?)
}

/// `[params] epsilon_mode = base_e | base_q | fixed` (fixed reads `h_epsilon`).
pub fn epsilon_mode(cfg: &Config) -> CliResult<EpsilonMode> {
    match cfg.get_or::<String>("params", "epsilon_mode", "base_e".into())?.as_str() {
        "base_e" => Ok(EpsilonMode::BaseE),
        "base_q" => Ok(EpsilonMode::BaseQ),
        "fixed" => Ok(EpsilonMode::Fixed(cfg.require("params", "h_epsilon")?)),
        other => Err(CliError::Config(format!(
            "[params] epsilon_mode {other:?}: expected base_e, base_q or fixed"
        ))),
    }
}

/// The phase assignment named by `[phases]`.
///
/// `source = zero | random` targets every prime coprime to Q with
/// `min_degree ≤ deg P ≤ max_degree`; `source = file` reads `P θ` lines
/// (relative paths resolve against the config's directory).
pub fn phases(cfg: &Config, group: &UnitGroup, base: &Path, default_max: usize) -> CliResult<PhaseAssignment> {
    let source = cfg.get_or::<String>("phases", "source", "zero".into())?;
    if source == "file" {
        let file: String = cfg.require("phases", "file")?;
        let path = base.join(file);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Config(format!("phase file {}: {e}", path.display())))?;
        return Ok(PhaseAssignment::parse(group.field(), &text)?);
    }
    let min = cfg.get_or::<usize>("phases", "min_degree", 1)?.max(1);
    let max = cfg.get_or::<usize>("phases", "max_degree", default_max)?;
    let primes: Vec<Poly> = CoprimePrimes::new(group, max)?
        .window(min - 1, max)
        .map(|(p, _, _)| p.clone())
        .collect();
    match source.as_str() {
        "zero" => Ok(PhaseAssignment::zeros(primes)?),
        "random" => {
            let seed = cfg.get_or::<u64>("phases", "seed", 0)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(PhaseAssignment::new(
                primes.into_iter().map(|p| (p, rng.gen::<f64>())).collect(),
            )?)
        }
        other => Err(CliError::Config(format!(
            "[phases] source {other:?}: expected zero, random or file"
        ))),
    }
}

/// Degree of the targeting window: `[params] rho` or `⌊log_q deg Q⌋`.
pub fn rho_degree(cfg: &Config, group: &UnitGroup) -> CliResult<usize> {
    match cfg.get::<usize>("params", "rho")? {
        Some(r) => Ok(r),
        None => Ok(ParamSet::new(group.field().q(), group.modulus().degree())?.rho_degree()),
    }
}

/// Highest phase degree when `[phases] max_degree` is absent: `⌊ρ⌋`, or 1
/// when the modulus is too small for the derived parameters.
pub fn default_phase_degree(group: &UnitGroup) -> usize {
    ParamSet::new(group.field().q(), group.modulus().degree())
        .map(|p| p.rho_degree().max(1))
        .unwrap_or(1)
}
