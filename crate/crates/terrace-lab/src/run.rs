//! Scenario execution: integrate once, then evaluate every analysis on the trajectory.

use crate::commands;
use crate::output::{self, num};
use crate::scenario::{field_name, Analysis, Scenario};
use crate::summary::{CriterionOutcome, RunSummary};
use crate::LabError;
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;
use terrace_core::fronts::{fit_speed, longest_plateau, wedge_check, write_tracks_csv, Field, FrontTrack};
use terrace_core::solver::{integrate, EscapeMonitor, Trajectory};

/// Result of [`simulate`] before anything is written.
pub struct Run {
    pub summary: RunSummary,
    pub trajectory: Trajectory,
}

/// Integrates the scenario and evaluates its analyses. With `out_dir`, writes
/// `summary.json`, `fronts.csv`, the requested `field_t*.csv` and one certificate per
/// certification analysis.
pub fn simulate(sc: &Scenario, out_dir: Option<&Path>) -> Result<Run, LabError> {
    sc.validate()?;
    let p = sc.params;
    let cfg = sc.solver_config()?;
    let s0 = sc.seeds.realize(&cfg.grid, &p)?;
    let prediction = sc.prediction();

    let start = Instant::now();
    let mut escape = EscapeMonitor::default();
    let traj = integrate(&s0, &p, &cfg, &mut [&mut escape])?;
    let elapsed = start.elapsed().as_secs_f64();

    let mut measured = BTreeMap::new();
    let mut criteria = Vec::with_capacity(sc.analyses.len());
    let mut certificates = Vec::new();
    for a in &sc.analyses {
        let name = a.label();
        let outcome = match a {
            Analysis::SpeedFit {
                field,
                level,
                window,
                predicted,
                tolerance,
                at_least,
                at_least_factor,
            } => {
                let track = FrontTrack::from_trajectory(&traj, *field, *level);
                let mut rep = fit_speed(&track, *window)?;
                let mut pass = true;
                let mut detail = format!("fitted {:.6}", rep.fitted_speed);
                if let (Some(t), Some(tol)) = (predicted, tolerance) {
                    let c = t.resolve(prediction.as_ref())?;
                    rep = rep.with_prediction(c);
                    let err = rep.relative_error.unwrap_or(f64::INFINITY);
                    pass &= err.abs() <= *tol;
                    detail += &format!(", predicted {c:.6}, relative error {err:+.4} (tol {tol})");
                }
                if let Some(t) = at_least {
                    let bound = at_least_factor.unwrap_or(1.0) * t.resolve(prediction.as_ref())?;
                    pass &= rep.fitted_speed >= bound;
                    detail += &format!(", lower bound {bound:.6}");
                }
                let value = rep.fitted_speed;
                measured.insert(name.clone(), rep);
                CriterionOutcome {
                    name,
                    pass,
                    value: Some(value),
                    detail,
                }
            }
            Analysis::SupBelow { field, bound } => {
                let s = traj.last();
                let data = match field {
                    Field::U => &s.u,
                    Field::V => &s.v,
                };
                let sup = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                CriterionOutcome {
                    name,
                    pass: sup < *bound,
                    value: Some(sup),
                    detail: format!("sup {} = {sup:.3e} at t = {} (bound {bound})", field_name(*field), s.t),
                }
            }
            Analysis::Wedge {
                c_lo,
                c_hi,
                eps_geom,
                eps_val,
            } => {
                let ok = wedge_check(&traj, *c_lo, *c_hi, *eps_geom, *eps_val)?;
                CriterionOutcome {
                    name,
                    pass: ok,
                    value: None,
                    detail: format!("(u, v) ≈ (0, 1) on [{}t, {}t] within {eps_val}", c_lo + eps_geom, c_hi - eps_geom),
                }
            }
            Analysis::Plateau {
                target,
                eps,
                min_length,
            } => {
                let ext = longest_plateau(traj.last(), *target, *eps);
                let len = ext.map_or(0.0, |(a, b)| b - a);
                CriterionOutcome {
                    name,
                    pass: len >= *min_length,
                    value: Some(len),
                    detail: match ext {
                        Some((a, b)) => format!("plateau [{a:.3}, {b:.3}]"),
                        None => "no plateau".into(),
                    },
                }
            }
            Analysis::InvariantRegion { tol } => {
                let ex = traj.max_range_excess();
                CriterionOutcome {
                    name,
                    pass: ex <= *tol,
                    value: Some(ex),
                    detail: format!("max excursion {ex:.3e} (tol {tol:e})"),
                }
            }
            Analysis::Certify {
                which,
                speeds,
                delta,
                lattice,
                aux,
            } => {
                let cert = commands::verify_barriers(
                    *which,
                    &p,
                    *speeds,
                    *delta,
                    &lattice.unwrap_or_default(),
                    &aux.clone().unwrap_or_default(),
                )?;
                let r = &cert.report;
                let outcome = CriterionOutcome {
                    name,
                    pass: r.certified,
                    value: Some(r.wrong_sign as f64),
                    detail: format!("{} samples, {} wrong-sign, t_cert = {}", r.samples, r.wrong_sign, r.t_cert),
                };
                certificates.push(cert);
                outcome
            }
            Analysis::Runtime { seconds } => CriterionOutcome {
                name,
                pass: elapsed < *seconds,
                value: None,
                detail: format!("integration wall clock below {seconds} s"),
            },
        };
        criteria.push(outcome);
    }

    let mut summary = RunSummary {
        scenario: sc.name.clone(),
        schema_version: sc.schema_version,
        params: p,
        prediction,
        measured,
        passed: criteria.iter().all(|c| c.pass),
        criteria,
        max_range_excess: traj.max_range_excess(),
        snapshots: traj.snapshots.len(),
        artifacts: Vec::new(),
        wall_clock_s: elapsed,
    };

    if let Some(dir) = out_dir {
        output::ensure_dir(dir)?;
        let mut artifacts = Vec::new();
        let level = |f: Field| {
            sc.analyses
                .iter()
                .find_map(|a| match a {
                    Analysis::SpeedFit { field, level, .. } if *field == f => Some(*level),
                    _ => None,
                })
                .unwrap_or(0.5)
        };
        let tu = FrontTrack::from_trajectory(&traj, Field::U, level(Field::U));
        let tv = FrontTrack::from_trajectory(&traj, Field::V, level(Field::V));
        let (path, w) = output::create(dir, "fronts.csv")?;
        write_tracks_csv(&tu, &tv, w).map_err(|e| LabError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        artifacts.push(output::file_name(&path));
        for &t in &sc.field_dumps {
            let s = traj
                .snapshots
                .iter()
                .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
                .expect("trajectory is non-empty");
            artifacts.push(output::file_name(&output::write_field_csv(dir, s)?));
        }
        for cert in &certificates {
            let name = format!("certificate_{}.json", cert.report.which.name());
            artifacts.push(output::file_name(&output::write_json(dir, &name, cert)?));
        }
        artifacts.push("summary.json".into());
        summary.artifacts = artifacts;
        output::write_json(dir, "summary.json", &summary)?;
    }
    Ok(Run {
        summary,
        trajectory: traj,
    })
}

/// One human-readable line per criterion.
pub fn report_lines(s: &RunSummary) -> Vec<String> {
    s.criteria
        .iter()
        .map(|c| {
            let v = c.value.map(num).unwrap_or_default();
            format!("{} {} {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, v, c.detail)
        })
        .collect()
}
