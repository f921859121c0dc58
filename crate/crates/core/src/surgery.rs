//! Adding the last adjacencies: edge flips, one handle and chords turn a
//! triangulation of `K_{12s} - K_4` into a triangulation of `K_{12s}`.
//!
//! The planner works on a [`DartMap`] so that chords may temporarily double
//! an existing edge; later flips trade every extra copy for a missing pair.
//! A plan is only returned after replaying it from scratch and verifying the
//! final rotation system.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use crate::label::VertexLabel;
use crate::map::{twin, Dart, DartMap, MapError};
use crate::rotation::{genus_lower_bound, RotationSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurgeryError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("no dart {0} -> {1} (copy {2})")]
    NoSuchDart(VertexLabel, VertexLabel, usize),
    #[error("move {index} ({mv}) changed the genus by {delta}, expected {expected}")]
    GenusLedger { index: usize, mv: String, delta: i64, expected: i64 },
    #[error("plan adds {0} edges, expected 6")]
    EdgeLedger(i64),
    #[error("plan has {0} handles, expected exactly one")]
    HandleCount(usize),
    #[error("plan line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("input is not a triangulation of K_n minus the letter pairs: {0}")]
    Precondition(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(SearchStats),
}

/// An edge copy or rotation corner named by labels: the `copy`-th dart (in
/// dart-id order) from `from` to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DartRef {
    pub from: VertexLabel,
    pub to: VertexLabel,
    pub copy: usize,
}

impl DartRef {
    fn of(map: &DartMap, d: Dart) -> Self {
        let (a, b) = (map.origin(d), map.target(d));
        let copy = map.darts_between(a, b).iter().position(|&x| x == d).unwrap();
        DartRef { from: map.label(a), to: map.label(b), copy }
    }

    fn resolve(&self, map: &DartMap) -> Result<Dart, SurgeryError> {
        let missing = SurgeryError::NoSuchDart(self.from, self.to, self.copy);
        let (Some(a), Some(b)) = (map.index_of(self.from), map.index_of(self.to)) else {
            return Err(missing);
        };
        map.darts_between(a, b).get(self.copy).copied().ok_or(missing)
    }
}

impl fmt::Display for DartRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.from, self.to)?;
        if self.copy > 0 {
            write!(f, "#{}", self.copy)?;
        }
        Ok(())
    }
}

impl FromStr for DartRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (body, copy) = match s.split_once('#') {
            Some((b, c)) => (b, c.parse::<usize>().map_err(|_| format!("bad copy index in `{s}`"))?),
            None => (s, 0),
        };
        let (a, b) = body.split_once('>').ok_or_else(|| format!("expected `u>v`, got `{s}`"))?;
        Ok(DartRef {
            from: a.parse().map_err(|e| format!("{e}"))?,
            to: b.parse().map_err(|e| format!("{e}"))?,
            copy,
        })
    }
}

/// One surgery step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// Replace an edge by the other diagonal of its quadrilateral.
    Flip(DartRef),
    /// Handle at a vertex: the three darts leave one vertex in rotation order;
    /// the faces at the corners before them merge into one.
    Handle([DartRef; 3]),
    /// New edge across one face, entering each endpoint's rotation just before
    /// the given dart.
    Chord(DartRef, DartRef),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Flip(d) => write!(f, "flip {d}"),
            Move::Handle([a, b, c]) => write!(f, "handle {a} {b} {c}"),
            Move::Chord(a, b) => write!(f, "chord {a} {b}"),
        }
    }
}

impl Move {
    fn genus_delta(&self) -> i64 {
        match self {
            Move::Handle(_) => 1,
            _ => 0,
        }
    }

    fn edge_delta(&self) -> i64 {
        match self {
            Move::Chord(..) => 1,
            _ => 0,
        }
    }

    /// Applies the move to `map`, returning the dart ids it touched.
    pub fn apply(&self, map: &mut DartMap) -> Result<(), SurgeryError> {
        match self {
            Move::Flip(d) => {
                let d = d.resolve(map)?;
                map.flip_multi(d)?;
            }
            Move::Handle([a, b, c]) => {
                let (a, b, c) = (a.resolve(map)?, b.resolve(map)?, c.resolve(map)?);
                map.handle_at_vertex(a, b, c)?;
            }
            Move::Chord(a, b) => {
                let (a, b) = (a.resolve(map)?, b.resolve(map)?);
                map.insert_chord(a, b)?;
            }
        }
        Ok(())
    }
}

/// Ordered moves with their expected genus and edge bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SurgeryPlan {
    pub moves: Vec<Move>,
}

/// Per-move Euler bookkeeping recorded while a plan is replayed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub mv: String,
    pub genus_before: i64,
    pub genus_after: i64,
    pub edges_before: usize,
    pub edges_after: usize,
}

impl SurgeryPlan {
    pub fn handle_count(&self) -> usize {
        self.moves.iter().filter(|m| matches!(m, Move::Handle(_))).count()
    }

    pub fn edge_delta(&self) -> i64 {
        self.moves.iter().map(Move::edge_delta).sum()
    }

    /// Replays the plan, checking the genus change of every move, and returns
    /// the final rotation system with the ledger.
    pub fn apply(&self, rs: &RotationSystem) -> Result<(RotationSystem, Vec<LedgerEntry>), SurgeryError> {
        if self.handle_count() != 1 {
            return Err(SurgeryError::HandleCount(self.handle_count()));
        }
        if self.edge_delta() != 6 {
            return Err(SurgeryError::EdgeLedger(self.edge_delta()));
        }
        let mut map = DartMap::from_rotation_system(rs);
        let mut ledger = Vec::new();
        let mut genus = map.genus();
        for (index, mv) in self.moves.iter().enumerate() {
            let edges_before = map.edge_count();
            mv.apply(&mut map)?;
            let after = map.genus();
            if after - genus != mv.genus_delta() {
                return Err(SurgeryError::GenusLedger {
                    index,
                    mv: mv.to_string(),
                    delta: after - genus,
                    expected: mv.genus_delta(),
                });
            }
            ledger.push(LedgerEntry {
                mv: mv.to_string(),
                genus_before: genus,
                genus_after: after,
                edges_before,
                edges_after: map.edge_count(),
            });
            genus = after;
        }
        Ok((map.to_rotation_system()?, ledger))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for m in &self.moves {
            writeln!(s, "{m}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, SurgeryError> {
        let mut moves = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| SurgeryError::Parse { line: i + 1, message };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let refs = toks[1..]
                .iter()
                .map(|t| t.parse::<DartRef>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(perr)?;
            let mv = match (toks[0], refs.as_slice()) {
                ("flip", [d]) => Move::Flip(*d),
                ("handle", [a, b, c]) => Move::Handle([*a, *b, *c]),
                ("chord", [a, b]) => Move::Chord(*a, *b),
                _ => return Err(perr(format!("cannot read move `{line}`"))),
            };
            moves.push(mv);
        }
        Ok(SurgeryPlan { moves })
    }
}

/// Flip on a simple rotation system; the new diagonal must not already be an
/// edge.
pub fn flip_edge(rs: &RotationSystem, a: VertexLabel, b: VertexLabel) -> Result<RotationSystem, SurgeryError> {
    let mut map = DartMap::from_rotation_system(rs);
    let d = DartRef { from: a, to: b, copy: 0 }.resolve(&map)?;
    map.flip(d)?;
    Ok(map.to_rotation_system()?)
}

/// Triangulates the face containing dart `start` using the chord set
/// `chords` (pairs of positions along the face, starting at `start`), and
/// returns the chord moves in insertion order.
pub fn triangulate_region(
    map: &mut DartMap,
    start: Dart,
    chords: &[(usize, usize)],
) -> Result<Vec<Move>, SurgeryError> {
    let poly = map.face(start);
    let mut moves = Vec::new();
    insert_chords(map, poly, chords.to_vec(), &mut moves)?;
    Ok(moves)
}

fn insert_chords(
    map: &mut DartMap,
    poly: Vec<Dart>,
    mut chords: Vec<(usize, usize)>,
    moves: &mut Vec<Move>,
) -> Result<(), SurgeryError> {
    let Some((i, j)) = chords.pop().map(|(a, b)| (a.min(b), a.max(b))) else {
        return Ok(());
    };
    let k = poly.len();
    moves.push(Move::Chord(DartRef::of(map, poly[i]), DartRef::of(map, poly[j])));
    let c = map.insert_chord(poly[i], poly[j])?;
    let mut a_poly: Vec<Dart> = poly[i..j].to_vec();
    a_poly.push(twin(c));
    let mut b_poly: Vec<Dart> = poly[j..].iter().chain(&poly[..i]).copied().collect();
    b_poly.push(c);
    let (mut a_chords, mut b_chords) = (Vec::new(), Vec::new());
    for (p, q) in chords {
        let (p, q) = (p.min(q), p.max(q));
        if i <= p && q <= j {
            a_chords.push((p - i, q - i));
        } else {
            let m = |x: usize| if x >= j { x - j } else { x + k - j };
            b_chords.push((m(p), m(q)));
        }
    }
    insert_chords(map, a_poly, a_chords, moves)?;
    insert_chords(map, b_poly, b_chords, moves)
}

/// All triangulations of a convex `k`-gon as sets of chords between
/// positions.
pub fn polygon_triangulations(k: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(vs: &[usize]) -> Vec<Vec<(usize, usize)>> {
        let len = vs.len();
        if len < 4 {
            return vec![vec![]];
        }
        let (first, last) = (vs[0], vs[len - 1]);
        let mut out = Vec::new();
        for t in 1..len - 1 {
            let left = rec(&vs[..=t]);
            let right = rec(&vs[t..]);
            for l in &left {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r);
                    if t > 1 {
                        c.push((first, vs[t]));
                    }
                    if t < len - 2 {
                        c.push((vs[t], last));
                    }
                    out.push(c);
                }
            }
        }
        out
    }
    let vs: Vec<usize> = (0..k).collect();
    rec(&vs)
}

/// Planner configuration; every bound is a clean failure when exceeded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryConfig {
    pub max_pre_flips: usize,
    /// Flips allowed after the handle and its chords.
    pub max_post_flips: usize,
    /// Among the post-flips, how many may trade a present edge for a second
    /// copy of another present edge. These set up later repairs.
    pub max_setup_flips: usize,
    pub budget_states: u64,
    pub budget_time: Duration,
    /// Vertices whose neighborhoods are searched for the handle and pre-flips;
    /// the letters are always included.
    pub zone: Vec<VertexLabel>,
}

impl Default for SurgeryConfig {
    fn default() -> Self {
        SurgeryConfig {
            max_pre_flips: 1,
            max_post_flips: 6,
            max_setup_flips: 1,
            budget_states: 1_000_000,
            budget_time: Duration::from_secs(60),
            zone: vec![VertexLabel::Number(0), VertexLabel::Number(1)],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub states: u64,
    pub handles_tried: u64,
    pub triangulations_tried: u64,
    pub elapsed_ms: u128,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "states={} handles={} triangulations={} elapsed_ms={}",
            self.states, self.handles_tried, self.triangulations_tried, self.elapsed_ms
        )
    }
}

struct Search<'a> {
    cfg: &'a SurgeryConfig,
    stats: SearchStats,
    started: Instant,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), SurgeryError> {
        self.stats.states += 1;
        if self.stats.states > self.cfg.budget_states || self.started.elapsed() > self.cfg.budget_time {
            self.stats.elapsed_ms = self.started.elapsed().as_millis();
            return Err(SurgeryError::BudgetExhausted(self.stats.clone()));
        }
        Ok(())
    }
}

/// Pairs of distinct vertices with no edge between them.
pub fn missing_pairs(map: &DartMap) -> Vec<(u32, u32)> {
    let n = map.vertex_count() as u32;
    let mut out = Vec::with_capacity(map.absent_pairs());
    if map.absent_pairs() == 0 {
        return out;
    }
    for a in 0..n {
        for b in a + 1..n {
            if map.multiplicity(a, b) == 0 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Number of extra edge copies beyond one per adjacent pair.
fn surplus(map: &DartMap) -> u32 {
    map.parallel_pairs().map(|(_, c)| c - 1).sum()
}

/// Change in `missing + surplus` a flip of `d` would cause, negated and
/// doubled: 2 repairs one defect, 0 moves a defect, -2 adds one.
fn flip_gain(map: &DartMap, d: Dart) -> Option<i32> {
    let (c, dv) = map.flip_quad(d)?;
    if c == dv {
        return None;
    }
    let lose = if map.multiplicity(map.origin(d), map.target(d)) > 1 { 1 } else { -1 };
    let win = if map.multiplicity(c, dv) == 0 { 1 } else { -1 };
    Some(lose + win)
}

/// Candidate post-flips in a fixed order, best gain first: every flip of an
/// extra copy, and every flip of an edge opposite a vertex of a missing pair.
/// Flips with negative gain are only listed when `setup` is set.
fn repair_flips(map: &DartMap, missing: &[(u32, u32)], setup: bool) -> Vec<(Dart, i32)> {
    let mut out = BTreeSet::new();
    for ((a, b), _) in map.parallel_pairs() {
        for d in map.darts_between(a, b) {
            if let Some(g) = flip_gain(map, d) {
                if g >= 0 {
                    out.insert((std::cmp::Reverse(g), d.min(twin(d))));
                }
            }
        }
    }
    let ends: BTreeSet<u32> = missing.iter().flat_map(|&(a, b)| [a, b]).collect();
    for &v in &ends {
        for e in map.darts_at(v) {
            if map.face_len(e) != 3 {
                continue;
            }
            let opposite = map.phi(e);
            if let Some(g) = flip_gain(map, opposite) {
                if g >= 0 || setup {
                    out.insert((std::cmp::Reverse(g), opposite.min(twin(opposite))));
                }
            }
        }
    }
    out.into_iter().map(|(g, d)| (d, g.0)).collect()
}

/// Depth-limited search for flips that leave a simple graph with no missing
/// pairs. Each flip changes the number of missing pairs by at most one, which
/// prunes any branch with more missing pairs than flips left.
fn post_flips(
    search: &mut Search,
    map: &mut DartMap,
    depth: usize,
    setup: usize,
    path: &mut Vec<Move>,
) -> Result<bool, SurgeryError> {
    search.tick()?;
    if map.absent_pairs() > depth {
        return Ok(false);
    }
    let missing = missing_pairs(map);
    if missing.is_empty() && surplus(map) == 0 {
        return Ok(true);
    }
    for (d, gain) in repair_flips(map, &missing, setup > 0) {
        let needed = match gain {
            2 => missing.len() - 1,
            0 => missing.len(),
            _ => missing.len() + 1,
        };
        if needed > depth - 1 {
            continue;
        }
        path.push(Move::Flip(DartRef::of(map, d)));
        map.flip_multi(d)?;
        let setup_left = if gain < 0 { setup - 1 } else { setup };
        if post_flips(search, map, depth - 1, setup_left, path)? {
            return Ok(true);
        }
        path.pop();
        // flipping the twin restores the edge with its original direction
        map.flip_multi(twin(d))?;
    }
    Ok(false)
}

/// Corner triples at `v` whose three faces are distinct, each with the number
/// of `pairs` that have both ends on the merged face, best first.
fn handle_candidates(map: &DartMap, v: u32, pairs: &[(u32, u32)]) -> Vec<(usize, [Dart; 3])> {
    let ring = map.darts_at(v);
    let d = ring.len();
    let face_id: Vec<Dart> = ring.iter().map(|&b| *map.face(b).iter().min().unwrap()).collect();
    // per face: which pairs have their first / second end on it
    let (mut first, mut second) = (vec![0u64; d], vec![0u64; d]);
    if pairs.len() <= 64 {
        for (i, &b) in ring.iter().enumerate() {
            for e in map.face(b) {
                let u = map.origin(e);
                for (p, &(a, c)) in pairs.iter().enumerate() {
                    first[i] |= ((a == u) as u64) << p;
                    second[i] |= ((c == u) as u64) << p;
                }
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            if face_id[i] == face_id[j] {
                continue;
            }
            for k in j + 1..d {
                if face_id[j] == face_id[k] || face_id[i] == face_id[k] {
                    continue;
                }
                let reach = if pairs.len() <= 64 {
                    ((first[i] | first[j] | first[k]) & (second[i] | second[j] | second[k])).count_ones() as usize
                } else {
                    pairs.len()
                };
                out.push((std::cmp::Reverse(reach), i, j, k));
            }
        }
    }
    out.sort_unstable();
    out.into_iter().map(|(r, i, j, k)| (r.0, [ring[i], ring[j], ring[k]])).collect()
}

/// Pre-flips: flips at the zone that add a missing pair without creating a
/// parallel edge.
fn pre_flip_candidates(map: &DartMap, zone: &[u32]) -> Vec<Dart> {
    let mut out = BTreeSet::new();
    for &v in zone {
        for d in map.darts_at(v) {
            if let Some((c, dv)) = map.flip_quad(d) {
                if c != dv && map.multiplicity(c, dv) == 0 {
                    out.insert(d.min(twin(d)));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// One scored starting point for the repair search.
struct Opening {
    still_missing: usize,
    pre: usize,
    corners: [Dart; 3],
    vertex_rank: usize,
    triangulation: usize,
}

/// Searches for a plan: up to `max_pre_flips` flips near the zone, one handle
/// at a zone vertex, a triangulation of the merged face and up to
/// `max_post_flips` repairing flips.
///
/// Every (pre-flips, handle, triangulation) opening is scored by the number of
/// pairs still missing after the chords; openings are then searched in order
/// of that score with iterative deepening. Each handle whose merged face could
/// still reach the best score, and each repair node visited, counts as one
/// planner state. The first plan whose replay passes [`verify_final`] is
/// returned with the search statistics.
pub fn plan_surgery(
    rs: &RotationSystem,
    s: u32,
    cfg: &SurgeryConfig,
) -> Result<(SurgeryPlan, SearchStats), SurgeryError> {
    check_precondition(rs)?;
    let base = DartMap::from_rotation_system(rs);
    let mut zone: Vec<u32> = cfg.zone.iter().filter_map(|&l| base.index_of(l)).collect();
    for v in 0..base.vertex_count() as u32 {
        if base.label(v).is_letter() {
            zone.push(v);
        }
    }
    let mut search = Search { cfg, stats: SearchStats::default(), started: Instant::now() };
    let triangulations = polygon_triangulations(9);

    let mut pre_seqs: Vec<(DartMap, Vec<Move>)> = vec![(base.clone(), vec![])];
    let mut frontier = pre_seqs.clone();
    for _ in 0..cfg.max_pre_flips {
        let mut next = Vec::new();
        for (m, seq) in &frontier {
            for d in pre_flip_candidates(m, &zone) {
                let mut m2 = m.clone();
                let mv = Move::Flip(DartRef::of(&m2, d));
                m2.flip_multi(d)?;
                let mut s2 = seq.clone();
                s2.push(mv);
                next.push((m2, s2));
            }
        }
        pre_seqs.extend(next.iter().cloned());
        frontier = next;
    }

    // openings scoring worse than the best seen by more than this are dropped
    const SLACK: usize = 2;
    let mut best = usize::MAX;
    let mut openings = Vec::new();
    for (pi, (m0, _)) in pre_seqs.iter().enumerate() {
        let missing_before = m0.absent_pairs();
        let pairs = missing_pairs(m0);
        for &v in &zone {
            for (reachable, corners) in handle_candidates(m0, v, &pairs) {
                // six chords add at most six pairs, all among the merged face's
                // vertices; candidates come best first, so the rest score no better
                let floor = missing_before - reachable.min(6);
                if floor > cfg.max_post_flips || floor > best.saturating_add(SLACK) {
                    break;
                }
                search.tick()?;
                search.stats.handles_tried += 1;
                let mut m1 = m0.clone();
                m1.handle_at_vertex(corners[0], corners[1], corners[2])?;
                let labels: Vec<u32> = m1.face(corners[0]).iter().map(|&d| m1.origin(d)).collect();
                for (ti, chords) in triangulations.iter().enumerate() {
                    if chords.iter().any(|&(a, b)| labels[a] == labels[b]) {
                        continue;
                    }
                    let mut added: Vec<(u32, u32)> = chords
                        .iter()
                        .map(|&(a, b)| (labels[a].min(labels[b]), labels[a].max(labels[b])))
                        .filter(|&(a, b)| m1.multiplicity(a, b) == 0)
                        .collect();
                    added.sort_unstable();
                    added.dedup();
                    let still_missing = missing_before - added.len();
                    if still_missing <= cfg.max_post_flips && still_missing <= best.saturating_add(SLACK) {
                        best = best.min(still_missing);
                        openings.push(Opening {
                            still_missing,
                            pre: pi,
                            corners,
                            vertex_rank: openings.len(),
                            triangulation: ti,
                        });
                    }
                }
            }
        }
    }
    openings.retain(|o| o.still_missing <= best.saturating_add(SLACK));
    openings.sort_by_key(|o| (o.still_missing, o.vertex_rank));

    for depth in 0..=cfg.max_post_flips {
        for o in openings.iter().filter(|o| o.still_missing <= depth) {
            search.stats.triangulations_tried += 1;
            let (m0, pre) = &pre_seqs[o.pre];
            let mut map = m0.clone();
            map.handle_at_vertex(o.corners[0], o.corners[1], o.corners[2])?;
            let handle = Move::Handle(o.corners.map(|d| DartRef::of(m0, d)));
            let chord_moves = triangulate_region(&mut map, o.corners[0], &triangulations[o.triangulation])?;
            let mut post = Vec::new();
            if post_flips(&mut search, &mut map, depth, cfg.max_setup_flips, &mut post)? {
                let mut moves = pre.clone();
                moves.push(handle);
                moves.extend(chord_moves);
                moves.extend(post);
                let plan = SurgeryPlan { moves };
                let (out, _) = plan.apply(rs)?;
                if verify_final(&out, s).pass {
                    search.stats.elapsed_ms = search.started.elapsed().as_millis();
                    return Ok((plan, search.stats));
                }
            }
        }
    }
    search.stats.elapsed_ms = search.started.elapsed().as_millis();
    Err(SurgeryError::BudgetExhausted(search.stats))
}

fn check_precondition(rs: &RotationSystem) -> Result<(), SurgeryError> {
    if !rs.satisfies_rule_r_star() {
        return Err(SurgeryError::Precondition("Rule R* fails".into()));
    }
    let letters: Vec<VertexLabel> = rs.letters().iter().map(|&c| VertexLabel::Letter(c)).collect();
    let mut missing = Vec::new();
    for (i, &a) in letters.iter().enumerate() {
        for &b in &letters[i + 1..] {
            missing.push((a, b));
        }
    }
    if !rs.check_complete_minus(rs.vertex_count(), &missing) {
        return Err(SurgeryError::Precondition("graph is not K_n minus the letter clique".into()));
    }
    Ok(())
}

/// Self-contained verification record for a final triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub pass: bool,
    pub s: u32,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: Option<u32>,
    pub expected_genus: u64,
    pub r_star_violations: usize,
    pub missing_edges: usize,
    pub hash: String,
    pub failures: Vec<String>,
}

impl Certificate {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "pass={}", self.pass).unwrap();
        writeln!(s, "s={}", self.s).unwrap();
        writeln!(s, "V={}", self.vertices).unwrap();
        writeln!(s, "E={}", self.edges).unwrap();
        writeln!(s, "F={}", self.faces).unwrap();
        match self.genus {
            Some(g) => writeln!(s, "genus={g}").unwrap(),
            None => writeln!(s, "genus=none").unwrap(),
        }
        writeln!(s, "expected_genus={}", self.expected_genus).unwrap();
        writeln!(s, "r_star_violations={}", self.r_star_violations).unwrap();
        writeln!(s, "missing_edges={}", self.missing_edges).unwrap();
        writeln!(s, "hash={}", self.hash).unwrap();
        for f in &self.failures {
            writeln!(s, "failure={f}").unwrap();
        }
        s
    }
}

/// SHA-256 of the canonical RSF serialization.
pub fn rsf_hash(rs: &RotationSystem) -> String {
    hex::encode(Sha256::digest(rs.to_rsf().as_bytes()))
}

/// Checks that `rs` triangulates `K_{12s}` with genus `(4s-1)(3s-1)`.
pub fn verify_final(rs: &RotationSystem, s: u32) -> Certificate {
    let v = rs.vertex_count();
    let e = rs.edge_count();
    let faces = rs.trace_faces();
    let f = faces.face_count();
    let genus = rs.euler_genus().ok();
    let expected_genus = (4 * s as u64 - 1) * (3 * s as u64 - 1);
    let r_star_violations = rs.check_rule_r_star().len();
    let missing_edges = rs.non_edges().len();
    let mut failures = Vec::new();
    if v != 12 * s as usize {
        failures.push(format!("vertex count {v}, expected {}", 12 * s));
    }
    if r_star_violations > 0 {
        failures.push(format!("{r_star_violations} Rule R* violations"));
    }
    if missing_edges > 0 {
        failures.push(format!("{missing_edges} missing edges"));
    }
    if genus != Some(expected_genus as u32) {
        failures.push(format!("genus {genus:?}, expected {expected_genus}"));
    }
    if !faces.is_partition_of(rs) {
        failures.push("faces do not partition the directed edges".into());
    }
    let bound = genus_lower_bound(v as u64, e as u64);
    if r_star_violations == 0 && genus.map(|g| g as i64) != Some(bound.ceil().to_integer()) {
        failures.push("triangulation does not attain the Euler bound".into());
    }
    Certificate {
        pass: failures.is_empty(),
        s,
        vertices: v,
        edges: e,
        faces: f,
        genus,
        expected_genus,
        r_star_violations,
        missing_edges,
        hash: rsf_hash(rs),
        failures,
    }
}
