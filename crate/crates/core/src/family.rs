//! Current graphs for every `s`: published data for `s <= 3` and a
//! constrained search for the ladder family over `Z_{12s-4}` when `s >= 4`.
//!
//! A family member is described by incoming currents. Each vertex lists the
//! current flowing into it along each incident arc, in rotation order, so an
//! arc of current `c` from `u` to `v` shows up as `n - c` at `u` and `c` at
//! `v`. Arc ids are fixed by current class: class `c` in `1..=n/2` is arc
//! `c - 1` with current `c`.
//!
//! The layout searched for:
//!
//! * vortices `x/z` (degree 2, carrying `u1` in and `1` out), `y` and `w`
//!   (degree 1, on arcs `1` and `6s-5`) and a dead end on arc `6s-2`;
//! * four anchor vertices whose rotations force the runs
//!   `6s+2 2 6s+3`, `6s-2 6 6s-3` and `6s-5 w` into the log;
//! * a ladder whose rungs carry `9, 12, ..., 6s-12` with alternating
//!   directions. The outer rungs `9` and `6s-12` belong to the fixed part and
//!   get free rotations; the `m = 2s - 8` inner rungs follow one pattern
//!   up to the rotation vector;
//! * five further cubic vertices that absorb the remaining fifteen arc-ends.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::current_graph::{check_star_pattern, ArcEnd, CgError, CgVertex, CurrentGraph, VertexKind};
use crate::data::{parse_rows, K12_ROWS, K24_ROWS, S3_LOG};
use crate::derivation::{derive_rotation_system, DerivationError, DerivationSpec};
use crate::iso::{count_isomorphism_classes, IsoError};
use crate::log::Log;
use crate::rotation::RotationSystem;
use crate::surgery::{plan_surgery, verify_final, Certificate, SurgeryConfig, SurgeryError, SurgeryPlan};

#[derive(Debug, thiserror::Error)]
pub enum FamilyError {
    #[error("no built-in data for s = {0}; built-in data covers s = 1, 2, 3")]
    NoBuiltin(u32),
    #[error("the ladder family starts at s = 4; use the built-in data for s = {0}")]
    BelowFamily(u32),
    #[error("current {0} is used twice")]
    Collision(u32),
    #[error("current {0} is zero or out of range")]
    BadCurrent(u32),
    #[error("{0}")]
    Graph(#[from] CgError),
    #[error("{0}")]
    Derivation(#[from] DerivationError),
    #[error("{0}")]
    Surgery(#[from] SurgeryError),
    #[error("{0}")]
    Iso(#[from] IsoError),
    #[error("rotation vector {bits} gives {faces} faces")]
    VariantIndex { bits: String, faces: usize },
    #[error("rotation vector {bits}: log lacks the anchor runs ({report})")]
    VariantStar { bits: String, report: String },
    #[error("surgered result failed verification:\n{0}")]
    Unverified(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("search failed: {0}")]
    SearchFailed(SearchReport),
}

/// Published starting data for the small cases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Four rows over `Z_n`; vertex `k` uses row `k mod 4` shifted by `k`.
    Index4 { n: u32, rows: [Vec<u32>; 4] },
    /// An index-1 log.
    Index1(Log),
}

pub fn builtin(s: u32) -> Result<Builtin, FamilyError> {
    match s {
        1 => Ok(Builtin::Index4 { n: 12, rows: parse_rows(&K12_ROWS) }),
        2 => Ok(Builtin::Index4 { n: 24, rows: parse_rows(&K24_ROWS) }),
        3 => Ok(Builtin::Index1(Log::parse(32, S3_LOG).expect("built-in log is valid"))),
        _ => Err(FamilyError::NoBuiltin(s)),
    }
}

/// A vertex given by its incoming currents in rotation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetVertex {
    pub kind: VertexKind,
    pub incoming: Vec<u32>,
    pub cw: bool,
}

impl GadgetVertex {
    fn cubic(incoming: [u32; 3], cw: bool) -> Self {
        GadgetVertex { kind: VertexKind::Cubic, incoming: incoming.to_vec(), cw }
    }
}

/// Everything outside the inner ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPart {
    pub n: u32,
    pub vertices: Vec<GadgetVertex>,
}

/// The inner ladder: rungs `start, start + step, ...` between a top and a
/// bottom rail, alternating in direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderShape {
    pub start: u32,
    pub step: u32,
    pub m: usize,
    /// The first rung carries its current from the top rail to the bottom.
    pub first_down: bool,
    /// Currents entering the first top and bottom vertices along the rails.
    pub top_in: u32,
    pub bottom_in: u32,
    /// Rail wiring: bottom vertices take the opposite orientation of their
    /// top partner instead of the same one.
    pub bottom_mirrored: bool,
    /// One bit per rung; a set bit reverses both of its endpoints.
    pub rotation: Vec<bool>,
}

impl LadderShape {
    pub fn rungs(&self) -> Vec<u32> {
        (0..self.m as u32).map(|j| self.start + self.step * j).collect()
    }

    /// Current flowing from the top rail to the bottom along rung `j`.
    fn flow(&self, n: u32, j: usize) -> u32 {
        let r = self.start + self.step * j as u32;
        if self.first_down ^ (j % 2 == 1) {
            r % n
        } else {
            (n - r % n) % n
        }
    }

    /// Rail currents `T_0..=T_m` and `B_0..=B_m`; `T_m`, `B_m` leave the ladder.
    pub fn rails(&self, n: u32) -> (Vec<u32>, Vec<u32>) {
        let (mut t, mut b) = (vec![self.top_in % n], vec![self.bottom_in % n]);
        for j in 0..self.m {
            let f = self.flow(n, j);
            t.push((t[j] + n - f) % n);
            b.push((b[j] + f) % n);
        }
        (t, b)
    }

    pub fn vertices(&self, n: u32) -> Vec<GadgetVertex> {
        let (t, b) = self.rails(n);
        let mut out = Vec::with_capacity(2 * self.m);
        for j in 0..self.m {
            let f = self.flow(n, j);
            let bit = self.rotation.get(j).copied().unwrap_or(false);
            out.push(GadgetVertex::cubic([t[j], neg(n, f), neg(n, t[j + 1])], !bit));
            out.push(GadgetVertex::cubic([b[j], f, neg(n, b[j + 1])], !bit ^ self.bottom_mirrored));
        }
        out
    }
}

fn neg(n: u32, g: u32) -> u32 {
    (n - g % n) % n
}

fn bits_string(bits: &[bool]) -> String {
    if bits.is_empty() {
        return "-".into();
    }
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Arc-end carrying incoming current `g`; the order-2 arc has its head at the
/// dead end.
fn end_of(n: u32, g: u32, kind: VertexKind) -> Result<ArcEnd, FamilyError> {
    if g == 0 || g >= n {
        return Err(FamilyError::BadCurrent(g));
    }
    let c = g.min(n - g);
    let head = if 2 * c == n { kind == VertexKind::DeadEnd } else { g == c };
    Ok(ArcEnd { arc: c as usize - 1, head })
}

/// Splices the ladder into the fixed part.
pub fn assemble(fixed: &FixedPart, ladder: &LadderShape) -> Result<CurrentGraph, FamilyError> {
    let n = fixed.n;
    let mut used = vec![false; n as usize];
    let mut vertices = Vec::new();
    for gv in fixed.vertices.iter().cloned().chain(ladder.vertices(n)) {
        let mut rot = Vec::with_capacity(gv.incoming.len());
        for &g in &gv.incoming {
            let e = end_of(n, g, gv.kind)?;
            let slot = 2 * e.arc + e.head as usize;
            if std::mem::replace(&mut used[slot], true) {
                return Err(FamilyError::Collision(g));
            }
            rot.push(e);
        }
        vertices.push(CgVertex { kind: gv.kind, rot, cw: gv.cw });
    }
    let currents = (1..=n / 2).collect();
    Ok(CurrentGraph::new(n, vertices, currents)?)
}

/// A family member that passed every current-graph check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCandidate {
    pub s: u32,
    pub fixed: FixedPart,
    pub ladder: LadderShape,
    pub graph: CurrentGraph,
    pub log: Log,
}

/// A candidate together with its verified surgery.
#[derive(Clone, Debug)]
pub struct FamilySolution {
    pub candidate: FamilyCandidate,
    pub plan: SurgeryPlan,
    pub certificate: Certificate,
    pub report: SearchReport,
    pub from_cache: bool,
}

#[derive(Clone, Debug)]
pub struct FamilyConfig {
    /// Inner rung count; `None` means `2(s - 4)`.
    pub rungs: Option<usize>,
    pub budget_time: Duration,
    /// Cap on fast one-face checks across all workers.
    pub budget_checks: u64,
    pub surgery: SurgeryConfig,
    pub jobs: Option<usize>,
    pub cache: Option<PathBuf>,
    /// Ignore cached results and search again.
    pub recheck: bool,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig {
            rungs: None,
            budget_time: Duration::from_secs(600),
            budget_checks: 2_000_000_000,
            surgery: SurgeryConfig::default(),
            jobs: None,
            cache: None,
            recheck: false,
        }
    }
}

impl FamilyConfig {
    /// Defaults with the cache directory taken from `GENUSFORGE_CACHE`.
    pub fn from_env() -> Self {
        FamilyConfig { cache: std::env::var_os("GENUSFORGE_CACHE").map(PathBuf::from), ..Self::default() }
    }

    fn rung_count(&self, s: u32) -> usize {
        self.rungs.unwrap_or(2 * (s as usize - 4))
    }

    /// Short hash of the settings that change which candidate is found.
    pub fn key(&self, s: u32) -> String {
        let text = format!("s={s} rungs={} surgery={:?}", self.rung_count(s), self.surgery);
        hex::encode(&Sha256::digest(text.as_bytes())[..8])
    }
}

/// Counts per filter stage, reported on success and on failure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchReport {
    pub parameter_sets: u64,
    pub consistent: u64,
    pub partitions: u64,
    pub one_face_checks: u64,
    pub one_face: u64,
    pub variants_one_face: u64,
    pub principles: u64,
    pub anchors: u64,
    pub derived: u64,
    pub surgered: u64,
    pub budget_exhausted: bool,
    pub elapsed_ms: u128,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parameter_sets={} consistent={} partitions={} one_face_checks={} one_face={} \
             variants_one_face={} principles={} anchors={} derived={} surgered={} budget_exhausted={} elapsed_ms={}",
            self.parameter_sets,
            self.consistent,
            self.partitions,
            self.one_face_checks,
            self.one_face,
            self.variants_one_face,
            self.principles,
            self.anchors,
            self.derived,
            self.surgered,
            self.budget_exhausted,
            self.elapsed_ms
        )
    }
}

#[derive(Default)]
struct Counters {
    parameter_sets: AtomicU64,
    consistent: AtomicU64,
    partitions: AtomicU64,
    one_face_checks: AtomicU64,
    one_face: AtomicU64,
    variants_one_face: AtomicU64,
    principles: AtomicU64,
    anchors: AtomicU64,
    derived: AtomicU64,
    surgered: AtomicU64,
    exhausted: AtomicBool,
}

impl Counters {
    fn bump(c: &AtomicU64) {
        c.fetch_add(1, Ordering::Relaxed);
    }

    fn report(&self, elapsed: Duration) -> SearchReport {
        let g = |c: &AtomicU64| c.load(Ordering::Relaxed);
        SearchReport {
            parameter_sets: g(&self.parameter_sets),
            consistent: g(&self.consistent),
            partitions: g(&self.partitions),
            one_face_checks: g(&self.one_face_checks),
            one_face: g(&self.one_face),
            variants_one_face: g(&self.variants_one_face),
            principles: g(&self.principles),
            anchors: g(&self.anchors),
            derived: g(&self.derived),
            surgered: g(&self.surgered),
            budget_exhausted: self.exhausted.load(Ordering::Relaxed),
            elapsed_ms: elapsed.as_millis(),
        }
    }
}

/// The parts of the fixed part that do not depend on search choices.
fn special_vertices(s: u32, u1: u32) -> Vec<GadgetVertex> {
    let n = 12 * s - 4;
    let h = n / 2;
    let v = |kind, incoming: Vec<u32>| GadgetVertex { kind, incoming, cw: true };
    vec![
        v(VertexKind::Vortex2('x', 'z'), vec![u1, n - 1]),
        v(VertexKind::Vortex1('y'), vec![1]),
        v(VertexKind::Vortex1('w'), vec![6 * s - 5]),
        v(VertexKind::DeadEnd, vec![h]),
        v(VertexKind::Cubic, vec![6 * s + 2, n - 2, n - 6 * s]),
        v(VertexKind::Cubic, vec![2, n - (6 * s + 3), 6 * s + 1]),
        v(VertexKind::Cubic, vec![h, n - 6, h + 6]),
        v(VertexKind::Cubic, vec![6, h + 1, h - 7]),
    ]
}

/// Vortex currents `u1` allowed by the vortex principles, ascending.
fn vortex_currents(n: u32) -> Vec<u32> {
    (3..n).step_by(2).filter(|&u| (u - 1).gcd(&n) == 2).collect()
}

/// One point of the search: everything but the five free vertices.
#[derive(Clone, Debug)]
struct Frame {
    s: u32,
    n: u32,
    specials: Vec<GadgetVertex>,
    /// Outer rung vertices in the order top-left, bottom-left, top-right,
    /// bottom-right; orientation is chosen later.
    outer: [[u32; 3]; 4],
    ladder: LadderShape,
    /// Incoming currents still to be placed at free vertices.
    open: Vec<u32>,
}

fn build_frame(s: u32, m: usize, u1: u32, first_down: bool, t0: u32, b0: u32) -> Option<Frame> {
    let n = 12 * s - 4;
    let specials = special_vertices(s, u1);
    // the whole rung sequence 9, 12, ..., with the outer rungs at both ends
    let full = LadderShape {
        start: 9,
        step: 3,
        m: m + 2,
        first_down,
        top_in: t0,
        bottom_in: b0,
        bottom_mirrored: false,
        rotation: vec![],
    };
    let (t, b) = full.rails(n);
    let flow_last = full.flow(n, m + 1);
    let outer = [
        [t[0], neg(n, full.flow(n, 0)), neg(n, t[1])],
        [b[0], full.flow(n, 0), neg(n, b[1])],
        [t[m + 1], neg(n, flow_last), neg(n, t[m + 2])],
        [b[m + 1], flow_last, neg(n, b[m + 2])],
    ];
    let inner = LadderShape {
        start: 12,
        step: 3,
        m,
        first_down: !first_down,
        top_in: t[1],
        bottom_in: b[1],
        bottom_mirrored: false,
        rotation: vec![false; m],
    };
    let mut placed = vec![false; n as usize];
    let mut place = |g: u32, kind: VertexKind| -> bool {
        if g == 0 {
            return false;
        }
        let Ok(e) = end_of(n, g, kind) else { return false };
        !std::mem::replace(&mut placed[2 * e.arc + e.head as usize], true)
    };
    for gv in &specials {
        for &g in &gv.incoming {
            if !place(g, gv.kind) {
                return None;
            }
        }
    }
    for tri in outer.iter().chain(inner.vertices(n).iter().map(|v| {
        let a: &[u32; 3] = v.incoming.as_slice().try_into().unwrap();
        a
    })) {
        for &g in tri {
            if !place(g, VertexKind::Cubic) {
                return None;
            }
        }
    }
    let open: Vec<u32> = (0..n as usize)
        .filter(|&slot| !placed[slot])
        .map(|slot| {
            let c = (slot / 2 + 1) as u32;
            if slot % 2 == 1 {
                c
            } else {
                n - c
            }
        })
        .collect();
    debug_assert_eq!(open.len(), 15);
    Some(Frame { s, n, specials, outer, ladder: inner, open })
}

/// Partitions of `ends` into triples summing to zero, in lexicographic order.
fn zero_sum_partitions(n: u32, ends: &[u32]) -> Vec<Vec<[u32; 3]>> {
    fn rec(n: u32, ends: &[u32], used: &mut Vec<bool>, cur: &mut Vec<[u32; 3]>, out: &mut Vec<Vec<[u32; 3]>>) {
        let Some(i) = used.iter().position(|&u| !u) else {
            out.push(cur.clone());
            return;
        };
        used[i] = true;
        for j in i + 1..ends.len() {
            if used[j] {
                continue;
            }
            for k in j + 1..ends.len() {
                if used[k] || (ends[i] as u64 + ends[j] as u64 + ends[k] as u64) % n as u64 != 0 {
                    continue;
                }
                used[j] = true;
                used[k] = true;
                cur.push([ends[i], ends[j], ends[k]]);
                rec(n, ends, used, cur, out);
                cur.pop();
                used[j] = false;
                used[k] = false;
            }
        }
        used[i] = false;
    }
    let mut out = Vec::new();
    rec(n, ends, &mut vec![false; ends.len()], &mut Vec::new(), &mut out);
    out
}

/// Face count of a vertex list given by incoming currents, without building
/// a [`CurrentGraph`].
struct FastTracer {
    n: u32,
    succ: Vec<u32>,
    seen: Vec<bool>,
}

impl FastTracer {
    fn new(n: u32) -> Self {
        let ends = 2 * (n / 2) as usize;
        FastTracer { n, succ: vec![u32::MAX; ends], seen: vec![false; ends] }
    }

    fn faces<'a>(&mut self, vertices: impl Iterator<Item = (&'a [u32], bool, VertexKind)>) -> usize {
        let n = self.n;
        for (incoming, cw, kind) in vertices {
            let d = incoming.len();
            for i in 0..d {
                let j = if cw { (i + 1) % d } else { (i + d - 1) % d };
                let a = end_of(n, incoming[i], kind).unwrap();
                let b = end_of(n, incoming[j], kind).unwrap();
                self.succ[2 * a.arc + a.head as usize] = (2 * b.arc + b.head as usize) as u32;
            }
        }
        self.seen.iter_mut().for_each(|x| *x = false);
        let mut faces = 0;
        for start in 0..self.seen.len() {
            if self.seen[start] {
                continue;
            }
            faces += 1;
            let mut e = start;
            while !self.seen[e] {
                self.seen[e] = true;
                // leave through e, arrive at its partner, leave through the next end
                e = self.succ[e ^ 1] as usize;
            }
        }
        faces
    }
}

impl Frame {
    fn fixed_part(&self, partition: &[[u32; 3]], orient: u32) -> FixedPart {
        let mut vertices = self.specials.clone();
        for (i, tri) in self.outer.iter().enumerate() {
            vertices.push(GadgetVertex::cubic(*tri, orient >> i & 1 == 0));
        }
        for (i, tri) in partition.iter().enumerate() {
            vertices.push(GadgetVertex::cubic(*tri, orient >> (4 + i) & 1 == 0));
        }
        FixedPart { n: self.n, vertices }
    }

    fn face_count(&self, tracer: &mut FastTracer, fixed: &FixedPart, ladder: &LadderShape) -> usize {
        let lv = ladder.vertices(self.n);
        tracer.faces(
            fixed
                .vertices
                .iter()
                .chain(lv.iter())
                .map(|v| (v.incoming.as_slice(), v.cw, v.kind)),
        )
    }
}

fn derive_and_check(log: &Log) -> Result<RotationSystem, FamilyError> {
    let rs = derive_rotation_system(&DerivationSpec::new(log.clone()))?;
    Ok(rs)
}

/// Outcome of verifying one fully specified candidate past the fast filter.
fn verify_candidate(
    frame: &Frame,
    fixed: FixedPart,
    ladder: LadderShape,
    cfg: &FamilyConfig,
    counters: &Counters,
) -> Option<(FamilyCandidate, SurgeryPlan, Certificate)> {
    let graph = assemble(&fixed, &ladder).ok()?;
    if !graph.validate_principles().all_pass() {
        return None;
    }
    Counters::bump(&counters.principles);
    let log = graph.extract_log().ok()?;
    if !check_star_pattern(&log, frame.s).all_present() {
        return None;
    }
    Counters::bump(&counters.anchors);
    let rs = derive_and_check(&log).ok()?;
    if !rs.satisfies_rule_r_star() {
        return None;
    }
    Counters::bump(&counters.derived);
    let (plan, _) = plan_surgery(&rs, frame.s, &cfg.surgery).ok()?;
    let (out, _) = plan.apply(&rs).ok()?;
    let certificate = verify_final(&out, frame.s);
    if !certificate.pass {
        return None;
    }
    Counters::bump(&counters.surgered);
    let candidate = FamilyCandidate { s: frame.s, fixed, ladder, graph, log };
    Some((candidate, plan, certificate))
}

/// Whether every rotation vector of the inner ladder keeps one face.
fn all_variants_one_face(frame: &Frame, tracer: &mut FastTracer, fixed: &FixedPart, ladder: &LadderShape) -> bool {
    let m = ladder.m;
    (1u64..1 << m).all(|bits| {
        let mut l = ladder.clone();
        l.rotation = (0..m).map(|j| bits >> j & 1 == 1).collect();
        frame.face_count(tracer, fixed, &l) == 1
    })
}

fn search_frame(
    frame: &Frame,
    cfg: &FamilyConfig,
    counters: &Counters,
    started: Instant,
) -> Option<(FamilyCandidate, SurgeryPlan, Certificate)> {
    let mut tracer = FastTracer::new(frame.n);
    let mirror_choices: &[bool] = if frame.ladder.m == 0 { &[false] } else { &[false, true] };
    for partition in zero_sum_partitions(frame.n, &frame.open) {
        Counters::bump(&counters.partitions);
        for &mirrored in mirror_choices {
            let mut ladder = frame.ladder.clone();
            ladder.bottom_mirrored = mirrored;
            for orient in 0u32..1 << 9 {
                if counters.exhausted.load(Ordering::Relaxed) {
                    return None;
                }
                let checks = counters.one_face_checks.fetch_add(1, Ordering::Relaxed);
                if checks >= cfg.budget_checks || (checks % 4096 == 0 && started.elapsed() > cfg.budget_time) {
                    counters.exhausted.store(true, Ordering::Relaxed);
                    return None;
                }
                let fixed = frame.fixed_part(&partition, orient);
                if frame.face_count(&mut tracer, &fixed, &ladder) != 1 {
                    continue;
                }
                Counters::bump(&counters.one_face);
                if !all_variants_one_face(frame, &mut tracer, &fixed, &ladder) {
                    continue;
                }
                Counters::bump(&counters.variants_one_face);
                if let Some(found) = verify_candidate(frame, fixed, ladder.clone(), cfg, counters) {
                    return Some(found);
                }
            }
        }
    }
    None
}

/// Searches the ladder family for `s >= 4`. Enumeration order: vortex current
/// `u1`, direction of the first rung, the two rail currents entering the
/// outer rungs, zero-sum partitions of the remaining ends, rail wiring and
/// the orientations of the nine unconstrained vertices. The least candidate
/// in this order whose derived embedding also survives surgery is returned,
/// however the work is split across threads.
pub fn search_family(s: u32, cfg: &FamilyConfig) -> Result<FamilySolution, FamilyError> {
    if s < 4 {
        return Err(FamilyError::BelowFamily(s));
    }
    if let (Some(dir), false) = (&cfg.cache, cfg.recheck) {
        if let Some(sol) = load_cached(dir, s, cfg)? {
            return Ok(sol);
        }
    }
    let started = Instant::now();
    let n = 12 * s - 4;
    let m = cfg.rung_count(s);
    let counters = Counters::default();
    let mut params = Vec::new();
    for u1 in vortex_currents(n) {
        for first_down in [true, false] {
            for t0 in 1..n {
                params.push((u1, first_down, t0));
            }
        }
    }
    let run = || {
        params.par_iter().find_map_first(|&(u1, first_down, t0)| {
            if counters.exhausted.load(Ordering::Relaxed) {
                return None;
            }
            (1..n).find_map(|b0| {
                Counters::bump(&counters.parameter_sets);
                let frame = build_frame(s, m, u1, first_down, t0, b0)?;
                Counters::bump(&counters.consistent);
                search_frame(&frame, cfg, &counters, started)
            })
        })
    };
    let found = match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| FamilyError::Cache(e.to_string()))?
            .install(run),
        None => run(),
    };
    let report = counters.report(started.elapsed());
    let Some((candidate, plan, certificate)) = found else {
        return Err(FamilyError::SearchFailed(report));
    };
    let sol = FamilySolution { candidate, plan, certificate, report, from_cache: false };
    if let Some(dir) = &cfg.cache {
        store_cached(dir, &sol, cfg)?;
    }
    Ok(sol)
}

/// Rotation-vector variants of a candidate's inner ladder.
#[derive(Clone, Debug)]
pub struct VariantSet {
    pub variants: Vec<(Vec<bool>, Log)>,
    /// Index pairs of variants with cyclically equal logs.
    pub duplicates: Vec<(usize, usize)>,
}

/// All `2^m` variants, each re-checked for one face and the anchor runs.
pub fn enumerate_variants(candidate: &FamilyCandidate) -> Result<VariantSet, FamilyError> {
    let m = candidate.ladder.m;
    let mut variants = Vec::with_capacity(1 << m);
    for bits in 0u64..1 << m {
        let mut ladder = candidate.ladder.clone();
        ladder.rotation = (0..m).map(|j| bits >> j & 1 == 1).collect();
        let graph = assemble(&candidate.fixed, &ladder)?;
        let faces = graph.trace_and_index().index();
        if faces != 1 {
            return Err(FamilyError::VariantIndex { bits: bits_string(&ladder.rotation), faces });
        }
        let log = graph.extract_log()?;
        let report = check_star_pattern(&log, candidate.s);
        if !report.all_present() {
            return Err(FamilyError::VariantStar { bits: bits_string(&ladder.rotation), report: report.to_string() });
        }
        variants.push((ladder.rotation, log));
    }
    let mut duplicates = Vec::new();
    for i in 0..variants.len() {
        for j in i + 1..variants.len() {
            if variants[i].1.cyclic_eq(&variants[j].1) {
                duplicates.push((i, j));
            }
        }
    }
    Ok(VariantSet { variants, duplicates })
}

/// Derives and surgers every variant into a verified `K_{12s}` triangulation.
/// The base plan is replayed first since neighbouring variants often accept
/// it unchanged; the planner runs only when the replay fails to verify.
pub fn surger_variants(
    s: u32,
    set: &VariantSet,
    hint: Option<&SurgeryPlan>,
    cfg: &SurgeryConfig,
) -> Result<Vec<RotationSystem>, FamilyError> {
    set.variants
        .iter()
        .map(|(_, log)| {
            let rs = derive_rotation_system(&DerivationSpec::new(log.clone()))?;
            if let Some(out) = hint
                .and_then(|p| p.apply(&rs).ok())
                .map(|(out, _)| out)
                .filter(|out| verify_final(out, s).pass)
            {
                return Ok(out);
            }
            let (plan, _) = plan_surgery(&rs, s, cfg)?;
            let (out, _) = plan.apply(&rs)?;
            let cert = verify_final(&out, s);
            if !cert.pass {
                return Err(FamilyError::Unverified(cert.to_text()));
            }
            Ok(out)
        })
        .collect()
}

/// Isomorphism classes among verified triangulations of `K_{12s}` against the
/// counting bound `2^m / (2 * 12s * (12s - 1))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub classes: usize,
    pub bound: Ratio<u64>,
    pub holds: bool,
}

pub fn count_lower_bound(s: u32, m: usize, triangulations: &[RotationSystem]) -> Result<LowerBound, FamilyError> {
    let classes = count_isomorphism_classes(triangulations)?;
    let v = 12 * s as u64;
    let bound = Ratio::new(1u64 << m, 2 * v * (v - 1));
    let holds = classes as u64 >= bound.ceil().to_integer();
    Ok(LowerBound { classes, bound, holds })
}

// ---- cache ----

fn kind_text(k: VertexKind) -> String {
    match k {
        VertexKind::Cubic => "cubic".into(),
        VertexKind::Vortex1(c) => format!("vortex1:{c}"),
        VertexKind::Vortex2(a, b) => format!("vortex2:{a},{b}"),
        VertexKind::DeadEnd => "deadend".into(),
    }
}

fn parse_kind(t: &str) -> Option<VertexKind> {
    let one = |s: &str| -> Option<char> {
        let mut it = s.chars();
        let c = it.next()?;
        it.next().is_none().then_some(c)
    };
    match t {
        "cubic" => Some(VertexKind::Cubic),
        "deadend" => Some(VertexKind::DeadEnd),
        _ => {
            if let Some(c) = t.strip_prefix("vortex1:") {
                Some(VertexKind::Vortex1(one(c)?))
            } else {
                let (a, b) = t.strip_prefix("vortex2:")?.split_once(',')?;
                Some(VertexKind::Vortex2(one(a)?, one(b)?))
            }
        }
    }
}

impl FamilyCandidate {
    /// Text form: the fixed part and ladder, from which the graph and log are
    /// rebuilt on load.
    pub fn to_text(&self) -> String {
        let l = &self.ladder;
        let mut s = String::new();
        writeln!(s, "family s={} n={}", self.s, self.fixed.n).unwrap();
        writeln!(
            s,
            "ladder start={} step={} m={} first_down={} top_in={} bottom_in={} bottom_mirrored={} rotation={}",
            l.start,
            l.step,
            l.m,
            l.first_down,
            l.top_in,
            l.bottom_in,
            l.bottom_mirrored,
            bits_string(&l.rotation)
        )
        .unwrap();
        for v in &self.fixed.vertices {
            let inc: Vec<String> = v.incoming.iter().map(ToString::to_string).collect();
            writeln!(s, "vertex {} {} {}", kind_text(v.kind), if v.cw { "cw" } else { "ccw" }, inc.join(",")).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, FamilyError> {
        let bad = |what: &str| FamilyError::Cache(format!("malformed candidate: {what}"));
        let mut s = None;
        let mut n = None;
        let mut ladder = None;
        let mut vertices = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let kv = |key: &str| -> Option<&str> { toks.iter().find_map(|t| t.strip_prefix(key)?.strip_prefix('=')) };
            match toks[0] {
                "family" => {
                    s = kv("s").and_then(|v| v.parse::<u32>().ok());
                    n = kv("n").and_then(|v| v.parse::<u32>().ok());
                }
                "ladder" => {
                    let num = |k: &str| kv(k).and_then(|v| v.parse::<u32>().ok()).ok_or_else(|| bad(k));
                    let flag = |k: &str| kv(k).and_then(|v| v.parse::<bool>().ok()).ok_or_else(|| bad(k));
                    let rot = kv("rotation").ok_or_else(|| bad("rotation"))?;
                    let rotation = if rot == "-" { vec![] } else { rot.chars().map(|c| c == '1').collect() };
                    ladder = Some(LadderShape {
                        start: num("start")?,
                        step: num("step")?,
                        m: num("m")? as usize,
                        first_down: flag("first_down")?,
                        top_in: num("top_in")?,
                        bottom_in: num("bottom_in")?,
                        bottom_mirrored: flag("bottom_mirrored")?,
                        rotation,
                    });
                }
                "vertex" if toks.len() == 4 => {
                    let kind = parse_kind(toks[1]).ok_or_else(|| bad("vertex kind"))?;
                    let cw = match toks[2] {
                        "cw" => true,
                        "ccw" => false,
                        _ => return Err(bad("orientation")),
                    };
                    let incoming = toks[3]
                        .split(',')
                        .map(|t| t.parse::<u32>().map_err(|_| bad("current")))
                        .collect::<Result<Vec<_>, _>>()?;
                    vertices.push(GadgetVertex { kind, incoming, cw });
                }
                _ => return Err(bad(line)),
            }
        }
        let (s, n, ladder) = (s.ok_or_else(|| bad("s"))?, n.ok_or_else(|| bad("n"))?, ladder.ok_or_else(|| bad("ladder"))?);
        let fixed = FixedPart { n, vertices };
        let graph = assemble(&fixed, &ladder)?;
        let log = graph.extract_log()?;
        Ok(FamilyCandidate { s, fixed, ladder, graph, log })
    }
}

fn cache_stem(dir: &Path, s: u32, cfg: &FamilyConfig) -> PathBuf {
    dir.join(format!("s{s}-{}", cfg.key(s)))
}

fn store_cached(dir: &Path, sol: &FamilySolution, cfg: &FamilyConfig) -> Result<(), FamilyError> {
    let io = |e: std::io::Error| FamilyError::Cache(e.to_string());
    std::fs::create_dir_all(dir).map_err(io)?;
    let stem = cache_stem(dir, sol.candidate.s, cfg);
    std::fs::write(stem.with_extension("family"), sol.candidate.to_text()).map_err(io)?;
    std::fs::write(stem.with_extension("cgf"), sol.candidate.graph.to_cgf()).map_err(io)?;
    std::fs::write(stem.with_extension("plan"), sol.plan.to_text()).map_err(io)?;
    // the certificate goes last: a cache entry without it is ignored
    std::fs::write(stem.with_extension("cert"), sol.certificate.to_text()).map_err(io)?;
    Ok(())
}

/// Loads a cached solution and replays it: the log is rebuilt from the stored
/// graph, derived, and the stored plan must reproduce a passing certificate
/// with the recorded hash.
fn load_cached(dir: &Path, s: u32, cfg: &FamilyConfig) -> Result<Option<FamilySolution>, FamilyError> {
    let stem = cache_stem(dir, s, cfg);
    let read = |ext: &str| std::fs::read_to_string(stem.with_extension(ext)).ok();
    let (Some(cand), Some(plan), Some(cert)) = (read("family"), read("plan"), read("cert")) else {
        return Ok(None);
    };
    let candidate = FamilyCandidate::from_text(&cand)?;
    let plan = SurgeryPlan::from_text(&plan)?;
    let rs = derive_and_check(&candidate.log)?;
    let (out, _) = plan.apply(&rs)?;
    let certificate = verify_final(&out, s);
    if !certificate.pass || certificate.to_text() != cert {
        return Err(FamilyError::Cache(format!("stored certificate for s={s} does not replay")));
    }
    Ok(Some(FamilySolution { candidate, plan, certificate, report: SearchReport::default(), from_cache: true }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_data_matches_the_tables() {
        match builtin(3).unwrap() {
            Builtin::Index1(log) => {
                assert_eq!(log.len(), 35);
                assert!(log.to_string().starts_with("3 x 1 y 31 z"));
            }
            other => panic!("{other:?}"),
        }
        let Builtin::Index4 { n, rows } = builtin(1).unwrap() else { panic!() };
        assert_eq!(n, 12);
        assert_eq!(rows[0], vec![11, 8, 9, 1, 4, 3, 6, 2, 7, 5, 10]);
        let Builtin::Index4 { rows, .. } = builtin(2).unwrap() else { panic!() };
        assert_eq!(rows[0][..6], [19, 16, 4, 1, 21, 20]);
        assert!(matches!(builtin(4), Err(FamilyError::NoBuiltin(4))));
    }

    #[test]
    fn ladder_rails_conserve_current() {
        let l = LadderShape {
            start: 12,
            step: 3,
            m: 4,
            first_down: true,
            top_in: 5,
            bottom_in: 7,
            bottom_mirrored: false,
            rotation: vec![false; 4],
        };
        let n = 68;
        assert_eq!(l.rungs(), vec![12, 15, 18, 21]);
        for v in l.vertices(n) {
            assert_eq!(v.incoming.iter().sum::<u32>() % n, 0);
        }
        let (t, b) = l.rails(n);
        // whatever leaves the top rail arrives on the bottom one
        assert_eq!((t[4] + b[4]) % n, (5 + 7) % n);
    }

    #[test]
    fn partitions_are_zero_sum_and_exhaustive() {
        let n = 10;
        let ends = [1, 2, 7, 3, 3, 4];
        let parts = zero_sum_partitions(n, &ends);
        // {1,2,7} + {3,3,4} and {1,...}: only one way
        assert_eq!(parts, vec![vec![[1, 2, 7], [3, 3, 4]]]);
    }

    #[test]
    fn fast_tracer_agrees_with_the_full_trace() {
        // K_7 current graph: two cubic vertices on arcs 1, 2, 3 over Z_7
        let verts = vec![
            GadgetVertex::cubic([1, 2, 4], true),
            GadgetVertex::cubic([6, 5, 3], true),
        ];
        let fixed = FixedPart { n: 7, vertices: verts };
        let g = CurrentGraph::new(
            7,
            fixed
                .vertices
                .iter()
                .map(|v| CgVertex {
                    kind: v.kind,
                    rot: v.incoming.iter().map(|&x| end_of(7, x, v.kind).unwrap()).collect(),
                    cw: v.cw,
                })
                .collect(),
            vec![1, 2, 3],
        )
        .unwrap();
        let mut t = FastTracer::new(7);
        let slow = g.trace_and_index().index();
        let fast = t.faces(fixed.vertices.iter().map(|v| (v.incoming.as_slice(), v.cw, v.kind)));
        assert_eq!((slow, fast), (1, 1));
    }

    #[test]
    fn vortex_currents_respect_the_gcd_condition() {
        assert_eq!(vortex_currents(44), vec![3, 7, 11, 15, 19, 27, 31, 35, 39, 43]);
    }

    #[test]
    fn family_refuses_small_s() {
        assert!(matches!(search_family(3, &FamilyConfig::default()), Err(FamilyError::BelowFamily(3))));
    }
}
