use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use tmsort::analysis::{even_odd_split, p1_analytic, p1p2_quadrature, POVM_POINTS};
use tmsort::sorter::{run_cascade, RoutingResult, SorterSpec};
use tmsort::spdc::{
    default_grids_n, design_source_with, jta_exact_on, jta_gauss, jta_gauss_on, schmidt_analytic, schmidt_lambda,
    schmidt_numeric, SPDCParams, DEFAULT_JTA_POINTS,
};
use tmsort::validation::{run_all, Check, DEFAULT_SEED};

use crate::config::{positive, Format, Kernel, RunConfig, DEFAULT_TAU_O};
use crate::output::{csv_table, Artifact};
use crate::CliError;

/// Sweep of `τ/√(τ_oτ_p)` for the mod-4 error.
const PTOT_SWEEP: (f64, f64, usize) = (0.4, 2.0, 101);
/// Sweep of `τ_p/τ_o` for the even/odd split.
const PARITY_SWEEP: (f64, f64, usize) = (1.0, 20.0, 39);

fn linspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(CliError::Config(format!("need lo < hi and at least 2 points, got [{lo}, {hi}] x {points}")));
    }
    Ok((0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect())
}

fn require_symmetric(p: &SPDCParams) -> Result<(), CliError> {
    if p.is_symmetric() {
        Ok(())
    } else {
        Err(CliError::Config(format!("closed forms need tau_e = -tau_o, got tau_o = {}, tau_e = {}", p.tau_o, p.tau_e)))
    }
}

#[derive(Serialize)]
struct SortReport {
    m: u32,
    tau: f64,
    delta_t: f64,
    n_points: usize,
    max_leakage: f64,
    modes: Vec<RoutingResult>,
}

pub fn sort_demo(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let s = cfg.sorter();
    let m = s.m.unwrap_or(2);
    let mut spec = SorterSpec::new(m, positive("sorter.tau", s.tau.unwrap_or(1.0))?)?;
    if let Some(dt) = s.delta_t {
        spec.delta_t = positive("sorter.delta_t", dt)?;
    }
    if let Some(n) = s.n_points.or(cfg.grid_n) {
        spec.n_points = n;
    }
    let modes = (0..spec.n_slots())
        .into_par_iter()
        .map(|n| run_cascade(n, &spec))
        .collect::<tmsort::Result<Vec<_>>>()?;
    let max_leakage = modes.iter().map(|r| r.leakage).fold(0.0, f64::max);
    eprintln!("sorted {} modes into {} slots, max leakage {max_leakage:.3e}", modes.len(), spec.n_slots());
    match cfg.format_or(Format::Json) {
        Format::Json => Artifact::json(&SortReport {
            m,
            tau: spec.tau,
            delta_t: spec.delta_t,
            n_points: spec.n_points,
            max_leakage,
            modes,
        }),
        Format::Csv => {
            let rows = modes
                .iter()
                .map(|r| {
                    let ports: Vec<String> = r.ports.iter().map(|p| format!("{p:?}")).collect();
                    vec![r.n.to_string(), r.slot.to_string(), r.time_slot.to_string(), ports.join(""), fmt(r.leakage)]
                })
                .collect();
            Ok(Artifact::csv(csv_table(&["n", "slot", "time_slot", "ports", "leakage"], rows)))
        }
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn sweep_ptot(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let p = cfg.source()?;
    require_symmetric(&p)?;
    let sw = cfg.sweep();
    let ratios = linspace(
        sw.lo.unwrap_or(PTOT_SWEEP.0),
        sw.hi.unwrap_or(PTOT_SWEEP.1),
        sw.points.unwrap_or(PTOT_SWEEP.2),
    )?;
    let n = cfg.grid_n.unwrap_or(POVM_POINTS);
    let scale = (p.tau_o * p.tau_p).sqrt();
    let rows = ratios
        .par_iter()
        .map(|&r| {
            let tau = r * scale;
            let (q1, _) = p1p2_quadrature(&p, tau, n)?;
            Ok([r, 4.0 * p1_analytic(tau, p.tau_o, p.tau_p), 4.0 * q1])
        })
        .collect::<tmsort::Result<Vec<_>>>()?;
    if let Some(best) = rows.iter().min_by(|a, b| a[1].total_cmp(&b[1])) {
        eprintln!("analytic minimum p_tot = {:.5} at tau ratio {:.3}", best[1], best[0]);
    }
    table_or_json(cfg, &["tau_ratio", "p_tot_analytic", "p_tot_numeric"], &rows)
}

pub fn sweep_parity(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let p = cfg.source()?;
    require_symmetric(&p)?;
    let sw = cfg.sweep();
    let ratios = linspace(
        sw.lo.unwrap_or(PARITY_SWEEP.0),
        sw.hi.unwrap_or(PARITY_SWEEP.1),
        sw.points.unwrap_or(PARITY_SWEEP.2),
    )?;
    let rows = ratios
        .par_iter()
        .map(|&r| {
            let tp = r * p.tau_o;
            let s = even_odd_split(p.tau_o, tp)?;
            Ok([tp, s.p_even, s.p_odd])
        })
        .collect::<tmsort::Result<Vec<_>>>()?;
    table_or_json(cfg, &["tau_p", "p_even", "p_odd"], &rows)
}

fn table_or_json<const N: usize>(cfg: &RunConfig, header: &[&str; N], rows: &[[f64; N]]) -> Result<Artifact, CliError> {
    match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let body = rows.iter().map(|r| r.iter().map(|&x| fmt(x)).collect()).collect();
            Ok(Artifact::csv(csv_table(header, body)))
        }
        Format::Json => {
            let recs: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| serde_json::Value::Object(header.iter().zip(r).map(|(k, v)| (k.to_string(), json!(v))).collect()))
                .collect();
            Artifact::json(&recs)
        }
    }
}

pub fn jta_map(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let p = cfg.source()?;
    let kernel = cfg.kernel.unwrap_or_default();
    let n = cfg.grid_n.unwrap_or(DEFAULT_JTA_POINTS);
    let (g, gp) = default_grids_n(&p, false, n)?;
    let j = match kernel {
        Kernel::Exact => jta_exact_on(&p, g, gp)?,
        Kernel::Gauss => jta_gauss_on(&p, g, gp)?,
    };
    let sidecar = json!({
        "kernel": kernel,
        "source": p,
        "t_grid": { "t_start": g.t_start, "dt": g.dt, "n_points": g.n_points },
        "tprime_grid": { "t_start": gp.t_start, "dt": gp.dt, "n_points": gp.n_points },
        "support_edge_abs_t_minus_tprime": 2.0 * p.tau_o,
        "norm_sq": j.norm_sq(),
    });
    match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            j.write_csv(&mut buf)?;
            Ok(Artifact::csv(String::from_utf8(buf).expect("CSV is ASCII")).with_sidecar(sidecar))
        }
        Format::Json => {
            let values: Vec<[f64; 2]> = j.values.iter().map(|z| [z.re, z.im]).collect();
            let mut doc = sidecar;
            doc["values_row_major"] = json!(values);
            Artifact::json(&doc)
        }
    }
}

pub fn schmidt(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let p = match cfg.schmidt_k {
        Some(k) if k >= 1.0 && k.is_finite() => {
            let tau_o = cfg.source.as_ref().map(|s| s.tau_o).unwrap_or(DEFAULT_TAU_O);
            SPDCParams::symmetric_from_t(tau_o, k - (k * k - 1.0).sqrt())?
        }
        Some(k) => return Err(CliError::Config(format!("schmidt_k must be at least 1, got {k}"))),
        None => cfg.source()?,
    };
    let ana = schmidt_analytic(&p)?;
    let j = match cfg.grid_n {
        Some(n) => {
            let (g, gp) = default_grids_n(&p, false, n)?;
            jta_gauss_on(&p, g, gp)?
        }
        None => jta_gauss(&p)?,
    };
    let num = schmidt_numeric(&j)?;
    let total: f64 = num.singular_values.iter().map(|s| s * s).sum();
    let rows: Vec<[f64; 3]> = (0..ana.lambdas.len().min(num.singular_values.len()))
        .map(|n| [n as f64, schmidt_lambda(ana.k, n), num.singular_values[n].powi(2) / total])
        .collect();
    eprintln!("K = {:.6} analytic, {:.6} from singular values", ana.k, num.schmidt_number());
    match cfg.format_or(Format::Json) {
        Format::Json => Artifact::json(&json!({
            "source": p,
            "analytic": ana,
            "numeric": { "K": num.schmidt_number(), "lambdas": rows.iter().map(|r| r[2]).collect::<Vec<_>>() },
        })),
        Format::Csv => {
            let body = rows
                .iter()
                .map(|r| vec![(r[0] as usize).to_string(), fmt(r[1]), fmt(r[2])])
                .collect();
            Ok(Artifact::csv(csv_table(&["n", "lambda_analytic", "lambda_numeric"], body)))
        }
    }
}

pub fn design_source(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let d = cfg.design();
    let r = design_source_with(
        d.k_target.unwrap_or(4.0),
        d.f_rf_ghz.unwrap_or(75.0),
        d.tau_o.unwrap_or(DEFAULT_TAU_O),
        cfg.sigma_s(),
    )?;
    eprintln!("f_RF_min = {:.2} GHz, aperture ok: {}", r.f_rf_min_ghz, r.aperture_ok);
    match cfg.format_or(Format::Json) {
        Format::Json => Artifact::json(&r),
        Format::Csv => {
            let header = ["k_target", "f_rf_ghz", "tau_o", "tau_p", "tau", "tau_G", "Omega_m", "aperture_ok", "f_RF_min_ghz"];
            let row = vec![
                fmt(r.k_target),
                fmt(r.f_rf_ghz),
                fmt(r.tau_o),
                fmt(r.tau_p),
                fmt(r.tau),
                fmt(r.tau_g),
                fmt(r.omega_m),
                r.aperture_ok.to_string(),
                fmt(r.f_rf_min_ghz),
            ];
            Ok(Artifact::csv(csv_table(&header, vec![row])))
        }
    }
}

/// Runs every acceptance criterion; the artifact lists the outcomes.
pub fn validate(cfg: &RunConfig) -> Result<(Artifact, bool), CliError> {
    let checks: Vec<Check> = run_all(cfg.seed.unwrap_or(DEFAULT_SEED));
    for c in &checks {
        println!("{}", c.line());
    }
    let ok = checks.iter().all(|c| c.passed);
    let art = match cfg.format_or(Format::Json) {
        Format::Json => Artifact::json(&checks)?,
        Format::Csv => {
            let rows = checks
                .iter()
                .map(|c| vec![c.id.to_string(), c.passed.to_string(), format!("\"{}\"", c.detail.replace('"', "'"))])
                .collect();
            Artifact::csv(csv_table(&["id", "passed", "detail"], rows))
        }
    };
    Ok((art, ok))
}
