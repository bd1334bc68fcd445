use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use taumap_core::combinatorics::TowerTables;
use taumap_core::hirota::{
    dkp_consistency, hirota_residual, homogeneity_check, max_hirota_order, perturb, toda_field_residual, ResidualReport,
};
use taumap_core::riemann::{
    boundary_unimodularity, map_series, moments_from_curve, CurveSpec, MapSeries, MomentVector,
};
use taumap_core::taucoeffs::CoeffEngine;
use taumap_core::{FormalSeries, Rational, TMonomial};

use crate::config::{thread_pool, RunConfig};
use crate::error::{CliError, Result};
use crate::formats::{
    boundary_csv, coefficient_rows, to_json, BoundaryRow, CoeffRow, CurveJson, MapJson, MomentsJson, MutationJson,
    ReportJson, VerifyJson,
};
use crate::io::{emit, read_json, write_atomic};

pub fn run_coeffs(cfg: &RunConfig) -> Result<Vec<CoeffRow>> {
    cfg.validate()?;
    let table = CoeffEngine::new().coefficient_table(cfg.cutoff)?;
    Ok(coefficient_rows(&table))
}

pub fn cmd_coeffs(cfg: &RunConfig) -> Result<()> {
    let rows = run_coeffs(cfg)?;
    emit(cfg.out.as_deref(), &to_json(&rows))
}

#[derive(Clone, Copy, Debug)]
enum Job {
    Toda,
    Hirota(u8),
    Dkp(u32, u32),
    Homogeneity,
}

/// The perturbation applied by `--mutate`: `+1` on the `t_1 t̄_1`
/// coefficient, or with a seed a random nonzero `p/q` on a random stored
/// coefficient other than the leading term.
pub fn choose_mutation(v: &FormalSeries, seed: Option<u64>) -> Result<(TMonomial, Rational)> {
    let Some(seed) = seed else {
        return Ok((TMonomial::from_slices(&[1], &[1])?, Rational::from_integer(1.into())));
    };
    let mut rng = StdRng::seed_from_u64(seed);
    let stored: Vec<&TMonomial> = v.terms().map(|(m, _)| m).filter(|m| !m.is_one()).collect();
    if stored.is_empty() {
        return Err(CliError::Config("nothing to mutate".into()));
    }
    let m = stored[rng.random_range(0..stored.len())].clone();
    let mut num: i64 = rng.random_range(-9..=8);
    if num >= 0 {
        num += 1;
    }
    let den: i64 = rng.random_range(1..=9);
    Ok((m, Rational::new(num.into(), den.into())))
}

/// Every check on `v`, in a fixed order.
pub fn verify_series(v: &FormalSeries) -> Result<Vec<ResidualReport>> {
    let w = v.cutoff();
    let mut jobs = vec![Job::Toda, Job::Hirota(1), Job::Hirota(2), Job::Hirota(3)];
    for i in 1..w {
        for j in i..=w - i {
            jobs.push(Job::Dkp(i, j));
        }
    }
    jobs.push(Job::Homogeneity);
    let pool = thread_pool()?;
    let reports: Vec<Result<ResidualReport>> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                Ok(match *job {
                    Job::Toda => toda_field_residual(v)?,
                    Job::Hirota(eq) => hirota_residual(v, eq, max_hirota_order(eq, w))?,
                    Job::Dkp(i, j) => dkp_consistency(&mut TowerTables::new(), i, j, v)?,
                    Job::Homogeneity => homogeneity_check(v),
                })
            })
            .collect()
    });
    reports.into_iter().collect()
}

pub fn run_verify(cfg: &RunConfig) -> Result<VerifyJson> {
    cfg.validate()?;
    let mut v = CoeffEngine::new().tau_series(cfg.cutoff)?;
    let mut mutated = None;
    if cfg.mutate {
        let (m, delta) = choose_mutation(&v, cfg.seed)?;
        v = perturb(&v, &m, &delta);
        mutated = Some(MutationJson {
            unbarred: m.unbarred().to_vec(),
            barred: m.barred().to_vec(),
            delta_num: delta.numer().to_string(),
            delta_den: delta.denom().to_string(),
        });
    }
    let reports: Vec<ReportJson> = verify_series(&v)?.iter().map(ReportJson::from).collect();
    Ok(VerifyJson {
        cutoff: cfg.cutoff,
        mutated,
        passed: reports.iter().all(|r| r.passed),
        reports,
    })
}

/// Returns whether every residual vanished.
pub fn cmd_verify(cfg: &RunConfig) -> Result<bool> {
    let result = run_verify(cfg)?;
    emit(cfg.out.as_deref(), &to_json(&result))?;
    let failed: Vec<String> = result
        .reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} ({} entries)", r.equation, r.entries.len()))
        .collect();
    if failed.is_empty() {
        eprintln!(
            "verify W={}: {} checks, all residuals zero",
            cfg.cutoff,
            result.reports.len()
        );
    } else {
        eprintln!("verify W={}: nonzero residuals in {}", cfg.cutoff, failed.join(", "));
    }
    Ok(result.passed)
}

pub fn load_curve(cfg: &RunConfig) -> Result<CurveSpec> {
    let path = cfg
        .curve
        .as_deref()
        .ok_or_else(|| CliError::Config("--curve is required".into()))?;
    read_json::<CurveJson>(path)?.to_curve()
}

pub fn run_moments(cfg: &RunConfig, curve: &CurveSpec) -> Result<MomentVector> {
    cfg.validate()?;
    Ok(moments_from_curve(curve, cfg.korder, cfg.nquad)?)
}

pub fn cmd_moments(cfg: &RunConfig) -> Result<()> {
    let m = run_moments(cfg, &load_curve(cfg)?)?;
    emit(cfg.out.as_deref(), &to_json(&MomentsJson::from(&m)))
}

pub struct MapOutcome {
    pub moments: MomentVector,
    pub map: MapSeries,
    pub boundary_error: f64,
    pub boundary: Vec<BoundaryRow>,
}

pub fn boundary_rows(curve: &CurveSpec, map: &MapSeries, n: usize) -> Result<Vec<BoundaryRow>> {
    let pool = thread_pool()?;
    Ok(pool.install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / n as f64;
                let w = map.eval(curve.point(theta));
                BoundaryRow {
                    theta,
                    re_w: w.re,
                    im_w: w.im,
                    modulus_error: w.norm() - 1.0,
                }
            })
            .collect()
    }))
}

pub fn run_map(cfg: &RunConfig, curve: &CurveSpec) -> Result<MapOutcome> {
    cfg.validate()?;
    let moments = moments_from_curve(curve, cfg.korder, cfg.nquad)?;
    let v = CoeffEngine::new().tau_series(cfg.cutoff)?;
    let map = map_series(&v, &moments, cfg.jorder)?;
    let boundary_error = boundary_unimodularity(curve, &map, cfg.samples);
    let boundary = boundary_rows(curve, &map, cfg.samples)?;
    Ok(MapOutcome {
        moments,
        map,
        boundary_error,
        boundary,
    })
}

pub fn cmd_map(cfg: &RunConfig) -> Result<()> {
    let curve = load_curve(cfg)?;
    let outcome = run_map(cfg, &curve)?;
    let d = &outcome.map.diagnostics;
    if d.outside_regime() {
        eprintln!(
            "warning: moment smallness {:.3e} exceeds {:.3e}; the truncated series may not converge",
            d.smallness, d.smallness_threshold
        );
    }
    let json = MapJson::new(cfg.cutoff, cfg.korder, &outcome.map, outcome.boundary_error);
    emit(cfg.out.as_deref(), &to_json(&json))?;
    if let Some(path) = &cfg.boundary_csv {
        write_atomic(path, &boundary_csv(&outcome.boundary)?)?;
    }
    eprintln!(
        "map W={} K={} J={}: r = {:.15}, max boundary error {:.3e}",
        cfg.cutoff, cfg.korder, cfg.jorder, outcome.map.r, outcome.boundary_error
    );
    Ok(())
}
