//! Admissibility map over a `(c1, c2)` grid, optionally with short terrace simulations.

use crate::output::num;
use crate::LabError;
use serde::{Deserialize, Serialize};
use std::io::Write;
use terrace_core::exec;
use terrace_core::fronts::{fit_speed, Field, FrontTrack};
use terrace_core::seeds::PairSpec;
use terrace_core::solver::{integrate, SolverConfig};
use terrace_core::speeds::{self, Admissibility};
use terrace_core::{Grid, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellClass {
    Interior,
    Boundary,
    Violated,
}

impl CellClass {
    pub fn name(self) -> &'static str {
        match self {
            CellClass::Interior => "interior",
            CellClass::Boundary => "boundary",
            CellClass::Violated => "violated",
        }
    }
}

/// Inclusive uniform axis of `n ≥ 1` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        if self.n <= 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub c1: Axis,
    pub c2: Axis,
    pub c_llw: f64,
    /// Horizon of the per-cell terrace simulation on interior cells; none when absent.
    pub simulate: Option<f64>,
    pub dx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c1: f64,
    pub c2: f64,
    pub class: CellClass,
    pub measured_c1: Option<f64>,
    pub measured_c2: Option<f64>,
}

/// Speeds below `2√(rd)` or `c_LLW` cannot be realised and count as violated.
pub fn classify(c1: f64, c2: f64, p: &ModelParams, c_llw: f64) -> CellClass {
    match speeds::admissible(c1, c2, p, c_llw) {
        Ok(Admissibility::Interior) => CellClass::Interior,
        Ok(Admissibility::Boundary) => CellClass::Boundary,
        Ok(Admissibility::LowerBoundViolated) | Err(_) => CellClass::Violated,
    }
}

/// Fitted `(v, u)` front speeds from a terrace-pair seed.
pub fn measure_cell(p: &ModelParams, c1: f64, c2: f64, c_llw: f64, t_end: f64, dx: f64) -> Result<(f64, f64), LabError> {
    let grid = Grid::with_spacing(-50.0, 1.3 * c1 * t_end + 100.0, dx).map_err(terrace_core::solver::SolverError::from)?;
    let cfg = SolverConfig::auto(grid, p, t_end, 1.0);
    let s0 = PairSpec::TerracePair { c1, c2, c_llw }.realize(&grid, p)?;
    let traj = integrate(&s0, p, &cfg, &mut [])?;
    let fit = |f| fit_speed(&FrontTrack::from_trajectory(&traj, f, 0.5), 0.5).map(|r| r.fitted_speed);
    Ok((fit(Field::V)?, fit(Field::U)?))
}

/// Rows in `c2`-major, `c1`-minor order regardless of evaluation order.
pub fn sweep(p: &ModelParams, spec: &SweepSpec) -> Result<Vec<SweepRow>, LabError> {
    let c1s = spec.c1.points();
    let cells: Vec<(f64, f64)> = spec
        .c2
        .points()
        .into_iter()
        .flat_map(|c2| c1s.iter().map(move |&c1| (c1, c2)))
        .collect();
    exec::map(&cells, |&(c1, c2)| {
        let class = classify(c1, c2, p, spec.c_llw);
        let (measured_c1, measured_c2) = match (class, spec.simulate) {
            (CellClass::Interior, Some(t)) => {
                let (a, b) = measure_cell(p, c1, c2, spec.c_llw, t, spec.dx)?;
                (Some(a), Some(b))
            }
            _ => (None, None),
        };
        Ok(SweepRow {
            c1,
            c2,
            class,
            measured_c1,
            measured_c2,
        })
    })
    .into_iter()
    .collect()
}

/// `c1,c2,class,measured_c1,measured_c2`; unmeasured cells are empty.
pub fn write_region_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<(), LabError> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(["c1", "c2", "class", "measured_c1", "measured_c2"])?;
    let cell = |x: Option<f64>| x.map(num).unwrap_or_default();
    for r in rows {
        out.write_record([
            num(r.c1),
            num(r.c2),
            r.class.name().to_string(),
            cell(r.measured_c1),
            cell(r.measured_c2),
        ])?;
    }
    out.flush().map_err(|e| LabError::Io {
        path: "region.csv".into(),
        source: e,
    })?;
    Ok(())
}
