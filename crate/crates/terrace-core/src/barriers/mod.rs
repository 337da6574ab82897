//! Barrier (super-/sub-solution) assemblies and the numerical certification of their
//! differential inequalities.
//!
//! An assembly is a pair of [`Component`]s. Each component is an ordered list of pieces
//! separated by interface curves, and each piece is one block or the pointwise maximum of
//! several. [`certify_residuals`] evaluates `P(pair) - F(pair)` on a space–time lattice away
//! from every interface and kink.

mod assemble;
pub mod blocks;

pub use assemble::{assemble, delta_star, AuxConstants, BarrierSpeeds};
pub use blocks::{
    eigenpair, min_length_alpha, min_radius_omega, Block, BlockKind, Profile, Sample,
};

use crate::exec;
use crate::fronts::Field;
use crate::model::{Grid, ModelError, ModelParams, StatePair};
use crate::numerics::NumericsError;
use crate::scalar::ScalarError;
use crate::speeds::SpeedError;
use crate::waves::WaveError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum BarrierError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("speed pair not admissible: {0}")]
    NotAdmissible(String),
    #[error("interface {id}: no root in [{lo}, {hi}] at t = {t}")]
    NoBracket { id: String, t: f64, lo: f64, hi: f64 },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("certification failed on piece {piece} at (t, x) = ({t}, {x}): margin {value:e}")]
    CertificationFailed {
        piece: String,
        t: f64,
        x: f64,
        value: f64,
    },
    #[error(transparent)]
    Speed(#[from] SpeedError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Wave(#[from] WaveError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

type Result<T> = std::result::Result<T, BarrierError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    TerraceSuper,
    TerraceSub,
    CompactSuper,
    NonexistenceSub,
}

impl Which {
    pub const ALL: [Which; 4] = [
        Which::TerraceSuper,
        Which::TerraceSub,
        Which::CompactSuper,
        Which::NonexistenceSub,
    ];

    pub fn is_super(self) -> bool {
        matches!(self, Which::TerraceSuper | Which::CompactSuper)
    }

    pub fn name(self) -> &'static str {
        match self {
            Which::TerraceSuper => "terrace_super",
            Which::TerraceSub => "terrace_sub",
            Which::CompactSuper => "compact_super",
            Which::NonexistenceSub => "nonexistence_sub",
        }
    }
}

impl FromStr for Which {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Which::ALL
            .into_iter()
            .find(|w| w.name() == s.replace('-', "_"))
            .ok_or_else(|| format!("unknown assembly {s:?}"))
    }
}

/// Local rule at interfaces: a super-solution's `u` and a sub-solution's `v` are local minima.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Min,
    Max,
}

/// `x = offset + speed t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub speed: f64,
    pub offset: f64,
}

impl Line {
    pub fn new(speed: f64, offset: f64) -> Self {
        Line { speed, offset }
    }
    pub fn at(&self, t: f64) -> f64 {
        self.offset + self.speed * t
    }
}

#[derive(Debug, Clone)]
pub enum PieceBody {
    Single(Block),
    Max(Vec<Block>),
}

impl PieceBody {
    pub fn blocks(&self) -> &[Block] {
        match self {
            PieceBody::Single(b) => std::slice::from_ref(b),
            PieceBody::Max(v) => v,
        }
    }

    /// Value with derivatives of the active block, and that block.
    pub fn eval(&self, t: f64, x: f64) -> (Sample, &Block) {
        let mut best: Option<(Sample, &Block)> = None;
        for b in self.blocks() {
            let s = b.eval(t, x);
            if best.as_ref().map_or(true, |(bs, _)| s.f > bs.f) {
                best = Some((s, b));
            }
        }
        best.expect("piece without blocks")
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        self.eval(t, x).0.f
    }
}

#[derive(Debug, Clone)]
pub enum Rule {
    Moving(Line),
    /// Root of `left piece - right piece` in the bracket, with the component's orientation.
    Root { lo: Line, hi: Line },
}

#[derive(Debug, Clone)]
pub struct Interface {
    pub id: String,
    pub rule: Rule,
}

#[derive(Debug, Clone)]
pub struct Component {
    pub order: Order,
    pub pieces: Vec<PieceBody>,
    pub interfaces: Vec<Interface>,
}

/// Steps of the sign scan inside a bracket.
const ROOT_SCAN: usize = 400;

impl Component {
    pub fn single(order: Order, body: PieceBody) -> Self {
        Component {
            order,
            pieces: vec![body],
            interfaces: Vec::new(),
        }
    }

    /// Interface positions at time `t`, in piece order.
    pub fn positions(&self, t: f64) -> Result<Vec<f64>> {
        let falling = self.order == Order::Max;
        self.interfaces
            .iter()
            .enumerate()
            .map(|(i, itf)| match &itf.rule {
                Rule::Moving(l) => Ok(l.at(t)),
                Rule::Root { lo, hi } => {
                    let (a, b) = (lo.at(t), hi.at(t));
                    let (pl, pr) = (&self.pieces[i], &self.pieces[i + 1]);
                    let g = |x: f64| pl.value(t, x) - pr.value(t, x);
                    blocks::scan_root(g, a, b, ROOT_SCAN, falling).ok_or_else(|| {
                        BarrierError::NoBracket {
                            id: itf.id.clone(),
                            t,
                            lo: a,
                            hi: b,
                        }
                    })
                }
            })
            .collect()
    }

    fn piece_index(positions: &[f64], x: f64) -> usize {
        positions.iter().take_while(|&&p| x >= p).count()
    }

    pub fn eval_at(&self, positions: &[f64], t: f64, x: f64) -> (Sample, &Block) {
        self.pieces[Self::piece_index(positions, x)].eval(t, x)
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<Sample> {
        let pos = self.positions(t)?;
        Ok(self.eval_at(&pos, t, x).0)
    }

    /// Interfaces, block kinks and switch points of max-pieces inside `[lo, hi]`.
    pub fn kinks(&self, positions: &[f64], t: f64, lo: f64, hi: f64, step: f64) -> Vec<f64> {
        let mut out: Vec<f64> = positions.to_vec();
        for (i, piece) in self.pieces.iter().enumerate() {
            for b in piece.blocks() {
                out.extend(b.kinks(t));
            }
            if let PieceBody::Max(bs) = piece {
                let a = if i == 0 { lo } else { positions[i - 1].max(lo) };
                let z = if i == positions.len() { hi } else { positions[i].min(hi) };
                for (k, bk) in bs.iter().enumerate() {
                    for bl in &bs[k + 1..] {
                        let g = |x: f64| bk.value(t, x) - bl.value(t, x);
                        out.extend(all_roots(g, a, z, step));
                    }
                }
            }
        }
        out
    }
}

/// Every sign change of `g` on a uniform scan of `[lo, hi]`, refined by bisection.
fn all_roots(g: impl Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if !(hi > lo) {
        return Vec::new();
    }
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let h = (hi - lo) / n as f64;
    let mut out = Vec::new();
    let mut ga = g(lo);
    for i in 0..n {
        let xb = lo + (i + 1) as f64 * h;
        let gb = g(xb);
        if ga * gb < 0.0 {
            if let Ok(r) = crate::numerics::bisect(&g, xb - h, xb, 1e-10) {
                out.push(r);
            }
        }
        ga = gb;
    }
    out
}

/// An interface that lives inside a max-piece and may cease to exist.
#[derive(Debug, Clone)]
pub struct Probe {
    pub id: String,
    pub field: Field,
    pub piece: usize,
    pub left: usize,
    pub right: usize,
    pub lo: Line,
    pub hi: Line,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl PropertyCheck {
    pub fn new(name: &str, holds: bool, detail: String) -> Self {
        PropertyCheck {
            name: name.into(),
            holds,
            detail,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BarrierAssembly {
    pub which: Which,
    pub params: ModelParams,
    pub delta: f64,
    pub speeds: BTreeMap<String, f64>,
    pub constants: BTreeMap<String, f64>,
    pub u: Component,
    pub v: Component,
    pub probes: Vec<Probe>,
    /// Spatial window of the certification lattice, `[lo(t), hi(t)]`.
    pub window: (Line, Line),
    pub properties: Vec<PropertyCheck>,
}

impl BarrierAssembly {
    pub fn component(&self, f: Field) -> &Component {
        match f {
            Field::U => &self.u,
            Field::V => &self.v,
        }
    }

    pub fn eval(&self, t: f64, x: f64) -> Result<(Sample, Sample)> {
        Ok((self.u.eval(t, x)?, self.v.eval(t, x)?))
    }

    /// Position of a probe at time `t`, or `None` once the two blocks no longer cross.
    pub fn probe_at(&self, p: &Probe, t: f64) -> Option<f64> {
        let c = self.component(p.field);
        let bs = c.pieces[p.piece].blocks();
        let (bl, br) = (&bs[p.left], &bs[p.right]);
        let g = |x: f64| bl.value(t, x) - br.value(t, x);
        blocks::scan_root(g, p.lo.at(t), p.hi.at(t), ROOT_SCAN, c.order == Order::Max)
    }

    /// All interface positions at `t`; probes that no longer exist are `None`.
    pub fn interfaces_at(&self, t: f64) -> Result<Vec<(String, Option<f64>)>> {
        let mut out = Vec::new();
        for c in [&self.u, &self.v] {
            for (itf, x) in c.interfaces.iter().zip(c.positions(t)?) {
                out.push((itf.id.clone(), Some(x)));
            }
        }
        for p in &self.probes {
            out.push((p.id.clone(), self.probe_at(p, t)));
        }
        Ok(out)
    }

    /// Node values at time `t` (no range check; barriers may leave `[0, 1]`).
    pub fn state_at(&self, g: &Grid, t: f64) -> Result<StatePair> {
        let (pu, pv) = (self.u.positions(t)?, self.v.positions(t)?);
        let nodes = g.nodes();
        let u = nodes.iter().map(|&x| self.u.eval_at(&pu, t, x).0.f).collect();
        let v = nodes.iter().map(|&x| self.v.eval_at(&pv, t, x).0.f).collect();
        Ok(StatePair::from_fields(*g, t, u, v)?)
    }
}

/// Writes `t,x,interface_id` for every existing interface at each time.
pub fn write_interfaces_csv<W: Write>(
    asm: &BarrierAssembly,
    times: &[f64],
    mut w: W,
) -> std::result::Result<(), Box<dyn std::error::Error>> {
    writeln!(w, "t,x,interface_id")?;
    for &t in times {
        for (id, x) in asm.interfaces_at(t)? {
            if let Some(x) = x {
                writeln!(w, "{t:.16e},{x:.16e},{id}")?;
            }
        }
    }
    Ok(())
}

/// Space–time lattice `t_k = t_end k/(nt-1)`, `nx` points across the assembly window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub nt: usize,
    pub nx: usize,
    pub t_end: f64,
}

impl Default for Lattice {
    fn default() -> Self {
        Lattice {
            nt: 200,
            nx: 400,
            t_end: 40.0,
        }
    }
}

/// Slack on the sign of every sampled margin.
pub const SLACK: f64 = 1e-8;
/// Tolerance on the closed-form identities of `w̄` and `z`.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Tolerance on continuity across interfaces.
pub const CONTINUITY_TOL: f64 = 1e-8;
/// Default exclusion half-width around interfaces, in lattice spacings.
pub const MARGIN_CELLS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceMargin {
    pub piece: String,
    pub samples: usize,
    pub worst_u: f64,
    pub worst_u_at: [f64; 2],
    pub worst_v: f64,
    pub worst_v_at: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub block: String,
    pub samples: usize,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterfaceSummary {
    pub id: String,
    pub present: usize,
    pub absent: usize,
    pub last_present: Option<f64>,
    pub max_jump: f64,
    pub orientation_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub piece: String,
    pub field: Field,
    pub t: f64,
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub which: Which,
    pub certified: bool,
    pub t_cert: f64,
    pub nt: usize,
    pub nx: usize,
    pub slack: f64,
    pub interface_margin_cells: f64,
    pub samples: usize,
    pub excluded: usize,
    pub wrong_sign: usize,
    pub pieces: Vec<PieceMargin>,
    pub identities: Vec<IdentityResidual>,
    pub interfaces: Vec<InterfaceSummary>,
    pub properties: Vec<PropertyCheck>,
    pub speeds: BTreeMap<String, f64>,
    pub constants: BTreeMap<String, f64>,
    pub failures: Vec<Failure>,
}

impl ResidualReport {
    /// `Err(CertificationFailed)` for the worst wrong-sign sample, if any.
    pub fn require_certified(&self) -> Result<()> {
        if self.certified {
            return Ok(());
        }
        match self
            .failures
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
        {
            Some(f) => Err(BarrierError::CertificationFailed {
                piece: f.piece.clone(),
                t: f.t,
                x: f.x,
                value: f.value,
            }),
            None => Err(BarrierError::CertificationFailed {
                piece: "interfaces or identities".into(),
                t: f64::NAN,
                x: f64::NAN,
                value: f64::NAN,
            }),
        }
    }
}

fn label(s: &Sample, b: &Block) -> &'static str {
    match b.kind {
        BlockKind::Constant if s.f == 1.0 => "one",
        BlockKind::Constant if s.f == 0.0 => "zero",
        _ if s.f == 0.0 => "zero",
        k => k.label(),
    }
}

/// `P - F` for the cooperative-form check: first and second components.
pub fn residual(p: &ModelParams, u: &Sample, v: &Sample) -> (f64, f64) {
    let ru = u.t - u.xx - u.f * (1.0 - u.f - p.a() * v.f);
    let rv = v.t - p.d() * v.xx - p.r() * v.f * (1.0 - v.f - p.b() * u.f);
    (ru, rv)
}

/// Identity residual of `w̄` (coefficient 1) and `z` (coefficient `1-δ`), relative to the
/// largest term.
fn identity_residual(b: &Block, delta: f64, t: f64, x: f64) -> Option<f64> {
    let coef = match b.kind {
        BlockKind::Wbar => 1.0,
        BlockKind::Z => 1.0 - delta,
        _ => return None,
    };
    let s = b.eval(t, x);
    if s.f == 0.0 {
        return None;
    }
    let scale = s.f.abs().max(s.t.abs()).max(s.xx.abs());
    Some((s.t - s.xx - coef * s.f).abs() / scale)
}

#[derive(Default)]
struct Row {
    samples: usize,
    excluded: usize,
    pieces: BTreeMap<String, PieceMargin>,
    identities: BTreeMap<String, (usize, f64)>,
    interfaces: Vec<(String, Option<f64>, f64, bool)>,
    failures: Vec<Failure>,
    wrong: usize,
}

const FAILURES_KEPT: usize = 20;

fn certify_row(asm: &BarrierAssembly, t: f64, nx: usize, cells: f64) -> Result<Row> {
    let mut row = Row::default();
    let p = &asm.params;
    let (pu, pv) = (asm.u.positions(t)?, asm.v.positions(t)?);
    let (lo, hi) = (asm.window.0.at(t), asm.window.1.at(t));
    let dx = (hi - lo) / (nx - 1) as f64;
    let margin = cells * dx;
    let mut kinks = asm.u.kinks(&pu, t, lo, hi, 0.25 * dx);
    kinks.extend(asm.v.kinks(&pv, t, lo, hi, 0.25 * dx));
    kinks.sort_by(f64::total_cmp);

    let closed: Vec<&Block> = asm
        .u
        .pieces
        .iter()
        .chain(&asm.v.pieces)
        .flat_map(|pc| pc.blocks())
        .filter(|b| matches!(b.kind, BlockKind::Wbar | BlockKind::Z))
        .collect();

    for j in 0..nx {
        let x = lo + j as f64 * dx;
        let k = kinks.partition_point(|&k| k < x);
        let near = (k < kinks.len() && kinks[k] - x < margin) || (k > 0 && x - kinks[k - 1] < margin);
        if near {
            row.excluded += 1;
            continue;
        }
        row.samples += 1;
        let (su, bu) = asm.u.eval_at(&pu, t, x);
        let (sv, bv) = asm.v.eval_at(&pv, t, x);
        let (ru, rv) = residual(p, &su, &sv);
        let (mu, mv) = if asm.which.is_super() { (ru, -rv) } else { (-ru, rv) };
        let key = format!("u={},v={}", label(&su, bu), label(&sv, bv));
        let e = row.pieces.entry(key.clone()).or_insert(PieceMargin {
            piece: key.clone(),
            samples: 0,
            worst_u: f64::INFINITY,
            worst_u_at: [t, x],
            worst_v: f64::INFINITY,
            worst_v_at: [t, x],
        });
        e.samples += 1;
        if mu < e.worst_u {
            e.worst_u = mu;
            e.worst_u_at = [t, x];
        }
        if mv < e.worst_v {
            e.worst_v = mv;
            e.worst_v_at = [t, x];
        }
        for (field, m) in [(Field::U, mu), (Field::V, mv)] {
            if !(m >= -SLACK) {
                row.wrong += 1;
                if row.failures.len() < FAILURES_KEPT {
                    row.failures.push(Failure {
                        piece: key.clone(),
                        field,
                        t,
                        x,
                        value: m,
                    });
                }
            }
        }
        for b in &closed {
            if let Some(r) = identity_residual(b, asm.delta, t, x) {
                let e = row.identities.entry(b.kind.label().to_string()).or_insert((0, 0.0));
                e.0 += 1;
                e.1 = e.1.max(r);
            }
        }
    }

    for (c, pos) in [(&asm.u, &pu), (&asm.v, &pv)] {
        let ordered = pos.windows(2).all(|w| w[0] <= w[1]);
        for (i, itf) in c.interfaces.iter().enumerate() {
            let x = pos[i];
            let (pl, pr) = (&c.pieces[i], &c.pieces[i + 1]);
            let g = |y: f64| pl.value(t, y) - pr.value(t, y);
            let jump = g(x).abs();
            let eps = 1e-3;
            let (gl, gr) = (g(x - eps), g(x + eps));
            let oriented = match c.order {
                Order::Max => gl > -1e-12 && gr < 1e-12,
                Order::Min => gl < 1e-12 && gr > -1e-12,
            };
            row.interfaces.push((itf.id.clone(), Some(x), jump, oriented && ordered));
        }
    }
    for pr in &asm.probes {
        row.interfaces.push((pr.id.clone(), asm.probe_at(pr, t), 0.0, true));
    }
    Ok(row)
}

/// Certifies the sign of `P - F` on `lattice`, excluding `margin_cells` lattice spacings
/// around every interface and kink.
pub fn certify_residuals(
    asm: &BarrierAssembly,
    lattice: &Lattice,
    margin_cells: f64,
) -> Result<ResidualReport> {
    if lattice.nt < 2 || lattice.nx < 2 || !(lattice.t_end > 0.0) {
        return Err(BarrierError::Domain(format!("lattice {lattice:?}")));
    }
    let times: Vec<f64> = (0..lattice.nt)
        .map(|k| lattice.t_end * k as f64 / (lattice.nt - 1) as f64)
        .collect();
    let rows = exec::map(&times, |&t| certify_row(asm, t, lattice.nx, margin_cells));

    let mut samples = 0;
    let mut excluded = 0;
    let mut wrong = 0;
    let mut pieces: BTreeMap<String, PieceMargin> = BTreeMap::new();
    let mut identities: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    let mut itfs: Vec<InterfaceSummary> = Vec::new();
    let mut failures = Vec::new();
    for (row, &t) in rows.into_iter().zip(&times) {
        let row = row?;
        samples += row.samples;
        excluded += row.excluded;
        wrong += row.wrong;
        for (k, m) in row.pieces {
            let e = pieces.entry(k).or_insert_with(|| PieceMargin {
                samples: 0,
                worst_u: f64::INFINITY,
                worst_v: f64::INFINITY,
                ..m.clone()
            });
            e.samples += m.samples;
            if m.worst_u < e.worst_u {
                e.worst_u = m.worst_u;
                e.worst_u_at = m.worst_u_at;
            }
            if m.worst_v < e.worst_v {
                e.worst_v = m.worst_v;
                e.worst_v_at = m.worst_v_at;
            }
        }
        for (k, (n, r)) in row.identities {
            let e = identities.entry(k).or_insert((0, 0.0));
            e.0 += n;
            e.1 = e.1.max(r);
        }
        for (id, x, jump, ok) in row.interfaces {
            let idx = match itfs.iter().position(|s| s.id == id) {
                Some(i) => i,
                None => {
                    itfs.push(InterfaceSummary {
                        id: id.clone(),
                        present: 0,
                        absent: 0,
                        last_present: None,
                        max_jump: 0.0,
                        orientation_ok: true,
                    });
                    itfs.len() - 1
                }
            };
            let s = &mut itfs[idx];
            match x {
                Some(_) => {
                    s.present += 1;
                    s.last_present = Some(t);
                }
                None => s.absent += 1,
            }
            s.max_jump = s.max_jump.max(jump);
            s.orientation_ok &= ok;
        }
        let room = FAILURES_KEPT.saturating_sub(failures.len());
        failures.extend(row.failures.into_iter().take(room));
    }
    let identities: Vec<IdentityResidual> = identities
        .into_iter()
        .map(|(block, (samples, max_residual))| IdentityResidual {
            block,
            samples,
            max_residual,
        })
        .collect();
    let certified = wrong == 0
        && identities.iter().all(|i| i.max_residual < IDENTITY_TOL)
        && itfs.iter().all(|s| s.orientation_ok && s.max_jump <= CONTINUITY_TOL);
    Ok(ResidualReport {
        which: asm.which,
        certified,
        t_cert: lattice.t_end,
        nt: lattice.nt,
        nx: lattice.nx,
        slack: SLACK,
        interface_margin_cells: margin_cells,
        samples,
        excluded,
        wrong_sign: wrong,
        pieces: pieces.into_values().collect(),
        identities,
        interfaces: itfs,
        properties: asm.properties.clone(),
        speeds: asm.speeds.clone(),
        constants: asm.constants.clone(),
        failures,
    })
}
