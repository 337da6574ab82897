//! Scenario files: a versioned JSON description of one run and its analyses.

use crate::LabError;
use serde::{Deserialize, Serialize};
use std::path::Path;
use terrace_core::barriers::{AuxConstants, BarrierSpeeds, Lattice, Which};
use terrace_core::fronts::Field;
use terrace_core::seeds::PairSpec;
use terrace_core::solver::{cfl_limit, Boundary, SolverConfig, STABLE_FRACTION};
use terrace_core::speeds::{self, SpeedPrediction};
use terrace_core::{Grid, ModelParams};

/// The only schema this build reads.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    pub params: ModelParams,
    /// `c_LLW` used for the prediction; the linearly determined value when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_llw: Option<f64>,
    pub seeds: PairSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
    /// Snapshot times dumped as `field_t*.csv`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub field_dumps: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<SpeedPrediction>,
}

/// Numerics; every field has a desk-scale default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    pub dx: f64,
    pub t_end: f64,
    pub snapshot_every: f64,
    pub x_min: f64,
    /// Defaults to `x_min + 1.3·c·t_end + 100` with `c` the faster predicted front.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    /// Defaults to `0.75·cfl_limit` rounded to divide `snapshot_every`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub left_bc: Boundary,
    pub right_bc: Boundary,
    pub delta: f64,
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec {
            dx: 0.1,
            t_end: 150.0,
            snapshot_every: 1.0,
            x_min: -50.0,
            x_max: None,
            dt: None,
            left_bc: Boundary::NeumannZero,
            right_bc: Boundary::NeumannZero,
            delta: 0.0,
        }
    }
}

/// A prediction referenced by name or given as a number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    Value(f64),
    Named(NamedSpeed),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedSpeed {
    /// The `v` front of the trichotomy prediction.
    C1Star,
    /// The `u` front of the trichotomy prediction.
    C2Star,
    CLlw,
}

impl Target {
    pub fn resolve(&self, pred: Option<&SpeedPrediction>) -> Result<f64, LabError> {
        match (self, pred) {
            (Target::Value(c), _) => Ok(*c),
            (Target::Named(n), Some(p)) => Ok(match n {
                NamedSpeed::C1Star => p.c1_star,
                NamedSpeed::C2Star => p.c2_star,
                NamedSpeed::CLlw => p.c_llw_used,
            }),
            (Target::Named(n), None) => Err(LabError::Config {
                field: "analyses".into(),
                message: format!("{n:?} needs a trichotomy prediction, which is unavailable"),
            }),
        }
    }
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Analysis {
    /// Least-squares front speed; passes if within `tolerance` of `predicted` and at least
    /// `at_least`, whichever are given.
    SpeedFit {
        field: Field,
        #[serde(default = "half")]
        level: f64,
        #[serde(default = "half")]
        window: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        predicted: Option<Target>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        at_least: Option<Target>,
        /// Multiplies `at_least`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        at_least_factor: Option<f64>,
    },
    /// `sup_x` of a component at the final snapshot stays below `bound`.
    SupBelow { field: Field, bound: f64 },
    Wedge {
        c_lo: f64,
        c_hi: f64,
        eps_geom: f64,
        eps_val: f64,
    },
    /// Longest interval near `target` at the final snapshot is at least `min_length` long.
    Plateau {
        target: (f64, f64),
        eps: f64,
        min_length: f64,
    },
    /// Largest excursion outside the invariant region over all snapshots.
    InvariantRegion { tol: f64 },
    Certify {
        which: Which,
        speeds: BarrierSpeeds,
        delta: f64,
        #[serde(default)]
        lattice: Option<Lattice>,
        #[serde(default)]
        aux: Option<AuxConstants>,
    },
    /// Wall clock of the integration stays below `seconds`. Excluded from determinism.
    Runtime { seconds: f64 },
}

impl Analysis {
    pub fn label(&self) -> String {
        match self {
            Analysis::SpeedFit { field, level, .. } => format!("speed_fit:{}@{level}", field_name(*field)),
            Analysis::SupBelow { field, .. } => format!("sup_below:{}", field_name(*field)),
            Analysis::Wedge { c_lo, c_hi, .. } => format!("wedge:{c_lo}-{c_hi}"),
            Analysis::Plateau { target, .. } => format!("plateau:({},{})", target.0, target.1),
            Analysis::InvariantRegion { .. } => "invariant_region".into(),
            Analysis::Certify { which, .. } => format!("certify:{}", which.name()),
            Analysis::Runtime { .. } => "runtime".into(),
        }
    }
}

pub fn field_name(f: Field) -> &'static str {
    match f {
        Field::U => "u",
        Field::V => "v",
    }
}

impl Scenario {
    /// Parses JSON, naming the offending field path on failure, then validates.
    pub fn from_json(text: &str) -> Result<Scenario, LabError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let sc: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            LabError::Config {
                field: if path == "." { "<root>".into() } else { path },
                message: e.into_inner().to_string(),
            }
        })?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn load(path: &Path) -> Result<Scenario, LabError> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Scenario::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Trichotomy prediction, or `None` on a boundary case or undetermined `c_LLW`.
    pub fn prediction(&self) -> Option<SpeedPrediction> {
        let c_llw = self
            .c_llw
            .or_else(|| speeds::linear_determinacy(&self.params).c_llw_if_determined)?;
        speeds::predict_trichotomy(&self.params, c_llw).ok()
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let bad = |field: &str, message: String| {
            Err(LabError::Config {
                field: field.into(),
                message,
            })
        };
        if self.schema_version != SCHEMA_VERSION {
            return bad(
                "schema_version",
                format!("found {}, this build reads {SCHEMA_VERSION}", self.schema_version),
            );
        }
        if self.name.trim().is_empty() {
            return bad("name", "must not be empty".into());
        }
        let s = &self.solver;
        if !(s.dx > 0.0 && s.dx.is_finite()) {
            return bad("solver.dx", format!("{} must be positive", s.dx));
        }
        if !(s.t_end >= 0.0 && s.t_end.is_finite()) {
            return bad("solver.t_end", format!("{} must be non-negative", s.t_end));
        }
        if !(s.snapshot_every > 0.0) {
            return bad("solver.snapshot_every", format!("{} must be positive", s.snapshot_every));
        }
        if !(0.0..0.5).contains(&s.delta) {
            return bad("solver.delta", format!("{} outside [0, 1/2)", s.delta));
        }
        let cfg = self.solver_config()?;
        if let Some(dt) = s.dt {
            let limit = cfl_limit(&cfg.grid, &self.params);
            if dt > limit {
                return bad("solver.dt", format!("{dt} exceeds the CFL limit {limit}"));
            }
        }
        for (i, a) in self.analyses.iter().enumerate() {
            let field = format!("analyses[{i}]");
            match a {
                Analysis::SpeedFit {
                    window,
                    predicted,
                    tolerance,
                    ..
                } => {
                    if !(*window > 0.0 && *window <= 1.0) {
                        return bad(&format!("{field}.window"), format!("{window} outside (0, 1]"));
                    }
                    if predicted.is_none() != tolerance.is_none() {
                        return bad(&field, "predicted and tolerance go together".into());
                    }
                    for t in [predicted, &a.at_least_target()].into_iter().flatten() {
                        t.resolve(self.prediction().as_ref()).map_err(|e| match e {
                            LabError::Config { message, .. } => LabError::Config {
                                field: field.clone(),
                                message,
                            },
                            e => e,
                        })?;
                    }
                }
                Analysis::Certify { speeds, which, .. } => {
                    if matches!(which, Which::TerraceSub | Which::TerraceSuper) {
                        let c_llw = self.c_llw.unwrap_or_else(|| {
                            speeds::linear_determinacy(&self.params)
                                .c_llw_if_determined
                                .unwrap_or(2.0 * (1.0 - self.params.a()).sqrt())
                        });
                        match speeds::admissible(speeds.c1, speeds.c2, &self.params, c_llw) {
                            Ok(speeds::Admissibility::Interior) => {}
                            other => {
                                return bad(&format!("{field}.speeds"), format!("not admissible: {other:?}"))
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        for (i, &t) in self.field_dumps.iter().enumerate() {
            if !(0.0..=s.t_end).contains(&t) {
                return bad(&format!("field_dumps[{i}]"), format!("{t} outside [0, t_end]"));
            }
        }
        Ok(())
    }

    /// Solver configuration after defaults are applied.
    pub fn solver_config(&self) -> Result<SolverConfig, LabError> {
        let s = &self.solver;
        let c1 = self
            .prediction()
            .map_or(self.params.kpp_v_speed().max(2.0), |p| p.c1_star.max(p.c2_star));
        let x_max = s.x_max.unwrap_or(s.x_min + 1.3 * c1 * s.t_end + 100.0);
        let grid = Grid::with_spacing(s.x_min, x_max, s.dx).map_err(|e| LabError::Config {
            field: "solver".into(),
            message: e.to_string(),
        })?;
        let mut cfg = SolverConfig::auto(grid, &self.params, s.t_end, s.snapshot_every);
        if let Some(dt) = s.dt {
            cfg = cfg.with_max_dt(dt);
        }
        cfg.left_bc = s.left_bc;
        cfg.right_bc = s.right_bc;
        cfg.delta = s.delta;
        debug_assert!(s.dt.is_some() || cfg.dt <= STABLE_FRACTION * cfl_limit(&grid, &self.params) * (1.0 + 1e-12));
        Ok(cfg)
    }
}

impl Analysis {
    fn at_least_target(&self) -> Option<Target> {
        match self {
            Analysis::SpeedFit { at_least, .. } => *at_least,
            _ => None,
        }
    }
}
