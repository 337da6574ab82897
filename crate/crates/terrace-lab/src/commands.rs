//! The `predict`, `wave` and `verify-barriers` commands as library functions.

use crate::output;
use crate::LabError;
use serde::{Deserialize, Serialize};
use std::path::Path;
use terrace_core::barriers::{
    self, assemble, certify_residuals, write_interfaces_csv, AuxConstants, BarrierAssembly,
    BarrierSpeeds, Lattice, ResidualReport, Which, MARGIN_CELLS,
};
use terrace_core::fronts::SpeedReport;
use terrace_core::speeds::{self, SpeedPrediction};
use terrace_core::waves::{self, WaveProfile};
use terrace_core::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CLlwSource {
    Given,
    LinearDeterminacy,
    Simulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub params: ModelParams,
    pub prediction: SpeedPrediction,
    pub c_llw_source: CLlwSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_llw_fit: Option<SpeedReport>,
}

/// Horizon and mesh of the `c_LLW` estimate used when it is neither given nor determined.
pub const LLW_ESTIMATE_T: f64 = 100.0;
pub const LLW_ESTIMATE_DX: f64 = 0.1;

/// `c_LLW` from the argument, linear determinacy, or a simulation, in that order.
pub fn resolve_c_llw(p: &ModelParams, given: Option<f64>) -> Result<(f64, CLlwSource, Option<SpeedReport>), LabError> {
    if let Some(c) = given {
        return Ok((c, CLlwSource::Given, None));
    }
    if let Some(c) = speeds::linear_determinacy(p).c_llw_if_determined {
        return Ok((c, CLlwSource::LinearDeterminacy, None));
    }
    let cfg = waves::llw_config(p, 0.0, LLW_ESTIMATE_T, LLW_ESTIMATE_DX)?;
    let rep = waves::estimate_c_llw(p, 0.0, &cfg)?;
    // The measured speed is clamped into the known bracket [2√(1-a), 2].
    let c = rep.fitted_speed.clamp(2.0 * (1.0 - p.a()).sqrt(), 2.0);
    Ok((c, CLlwSource::Simulated, Some(rep)))
}

/// Trichotomy prediction; a boundary case surfaces as `SpeedError::BoundaryCase`.
pub fn predict(p: &ModelParams, c_llw: Option<f64>) -> Result<Prediction, LabError> {
    let (c, source, fit) = resolve_c_llw(p, c_llw)?;
    Ok(Prediction {
        params: *p,
        prediction: speeds::predict_trichotomy(p, c)?,
        c_llw_source: source,
        c_llw_fit: fit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveSummary {
    pub c: f64,
    pub delta: f64,
    pub truncation: f64,
    pub nodes: usize,
    pub residual: f64,
    pub iterations: usize,
    pub phi_monotone: bool,
    pub psi_monotone: bool,
    pub decay_plus: f64,
    /// `λ_δ(c)`, the slowest admissible `φ` decay.
    pub decay_plus_predicted: f64,
    pub decay_minus: f64,
    pub decay_minus_predicted: f64,
    pub uniqueness_condition: bool,
}

pub fn wave(
    p: &ModelParams,
    c: f64,
    delta: f64,
    truncation: f64,
    nodes: usize,
) -> Result<(WaveProfile, WaveSummary), LabError> {
    let w = waves::solve_profile(c, p, delta, truncation, nodes)?;
    let s = WaveSummary {
        c,
        delta,
        truncation,
        nodes,
        residual: w.residual,
        iterations: w.iterations,
        phi_monotone: w.phi_monotone,
        psi_monotone: w.psi_monotone,
        decay_plus: w.measured_decay_plus,
        decay_plus_predicted: speeds::lambda_u(c, p.a(), delta)?,
        decay_minus: w.measured_decay_minus,
        decay_minus_predicted: speeds::lambda_minus_inf_delta(c, p, delta),
        uniqueness_condition: waves::uniqueness_condition(p),
    };
    Ok((w, s))
}

/// Contents of `certificate.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub params: ModelParams,
    pub speeds: BarrierSpeeds,
    pub delta: f64,
    pub lattice: Lattice,
    pub aux: AuxConstants,
    pub report: ResidualReport,
}

/// Assembles and certifies; `Ok` carries the report even when certification fails.
pub fn verify_barriers(
    which: Which,
    p: &ModelParams,
    sp: BarrierSpeeds,
    delta: f64,
    lattice: &Lattice,
    aux: &AuxConstants,
) -> Result<Certificate, LabError> {
    Ok(certify(which, p, sp, delta, lattice, aux)?.1)
}

fn certify(
    which: Which,
    p: &ModelParams,
    sp: BarrierSpeeds,
    delta: f64,
    lattice: &Lattice,
    aux: &AuxConstants,
) -> Result<(BarrierAssembly, Certificate), LabError> {
    let asm = assemble(which, p, sp, delta, aux)?;
    let report = certify_residuals(&asm, lattice, MARGIN_CELLS)?;
    let cert = Certificate {
        params: *p,
        speeds: sp,
        delta,
        lattice: *lattice,
        aux: aux.clone(),
        report,
    };
    Ok((asm, cert))
}

/// [`verify_barriers`] plus `certificate.json` and `interfaces.csv` in `dir`.
pub fn verify_barriers_to(
    dir: &Path,
    which: Which,
    p: &ModelParams,
    sp: BarrierSpeeds,
    delta: f64,
    lattice: &Lattice,
    aux: &AuxConstants,
) -> Result<Certificate, LabError> {
    let (asm, cert) = certify(which, p, sp, delta, lattice, aux)?;
    output::ensure_dir(dir)?;
    output::write_json(dir, "certificate.json", &cert)?;
    let (path, mut w) = output::create(dir, "interfaces.csv")?;
    let times: Vec<f64> = (0..lattice.nt)
        .map(|k| lattice.t_end * k as f64 / (lattice.nt - 1).max(1) as f64)
        .collect();
    write_interfaces_csv(&asm, &times, &mut w)
        .and_then(|_| std::io::Write::flush(&mut w).map_err(Into::into))
        .map_err(|e| LabError::Io {
            path: path.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::Other, e.to_string()),
        })?;
    Ok(cert)
}

/// Whether an error means the request itself was outside the constructions' hypotheses.
pub fn is_hypothesis_error(e: &LabError) -> bool {
    matches!(
        e,
        LabError::Barrier(barriers::BarrierError::HypothesisViolated(_))
            | LabError::Barrier(barriers::BarrierError::NotAdmissible(_))
    )
}
