//! Index-1 current graphs over `Z_n` with vortices: construction principles,
//! face tracing, log extraction and reconstruction from a log.
//!
//! A vertex traced `cw` leaves through the successor (in its rotation) of the
//! arc-end it was entered by; `ccw` uses the predecessor. Every face corner
//! is the pair (entering end, leaving end). A vortex letter sits on the corner
//! entered through its rotation slot: a `Vortex1` has one corner, a `Vortex2`
//! carries its letters on the corners entered through `rot[0]` and `rot[1]`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_integer::Integer;

use crate::label::VertexLabel;
use crate::log::{Log, LogError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    Cubic,
    Vortex1(char),
    Vortex2(char, char),
    DeadEnd,
}

/// One end of an arc: its tail (`head == false`) or its head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcEnd {
    pub arc: usize,
    pub head: bool,
}

impl fmt::Display for ArcEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.arc, if self.head { 'h' } else { 't' })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CgVertex {
    pub kind: VertexKind,
    pub rot: Vec<ArcEnd>,
    pub cw: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CgArc {
    /// (vertex, slot in that vertex's rotation)
    pub tail: (usize, usize),
    pub head: (usize, usize),
    pub current: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentGraph {
    n: u32,
    vertices: Vec<CgVertex>,
    arcs: Vec<CgArc>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CgError {
    #[error("cgf line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("a current graph needs at least one arc")]
    NoArcs,
    #[error("(C3) violated: currents {0} and {1} lie in the same class of ±γ")]
    DuplicateCurrentClass(u32, u32),
    #[error("arc {0} carries the zero current")]
    ZeroCurrent(usize),
    #[error("current {0} is outside Z_{1}")]
    CurrentOutOfRange(u32, u32),
    #[error("arc end {0} is not in any rotation")]
    DanglingEnd(ArcEnd),
    #[error("arc end {0} appears in more than one rotation slot")]
    RepeatedEnd(ArcEnd),
    #[error("rotation refers to unknown arc {0}")]
    UnknownArc(usize),
    #[error("arc {arc} line places its {end} at {claimed:?} but the rotations place it at {actual:?}")]
    IncidenceMismatch {
        arc: usize,
        end: &'static str,
        claimed: (usize, usize),
        actual: (usize, usize),
    },
    #[error("vertex {vertex} of kind {kind:?} has degree {degree}")]
    KindDegree {
        vertex: usize,
        kind: VertexKind,
        degree: usize,
    },
    #[error("expected index 1, the embedding has {0} faces")]
    IndexNotOne(usize),
    #[error(transparent)]
    Log(#[from] LogError),
    #[error("entry {0} has no partner -{0}")]
    Unpairable(u32),
    #[error("letters {0} and {1} share a corner")]
    LettersShareCorner(char, char),
    #[error("recovered vertex of degree {degree} with letters {letters:?} fits no vertex kind")]
    DegreeOutsideC1 { degree: usize, letters: Vec<Option<char>> },
}

/// One step of a traced face: an arc traversal followed by the corner at the
/// vertex it enters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub arc: usize,
    pub forward: bool,
    /// The traversal's contribution to the log: the current, negated when
    /// the arc is traversed backwards.
    pub value: u32,
    pub corner_vertex: usize,
    pub letter: Option<char>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CgTrace {
    pub faces: Vec<Vec<TraceStep>>,
}

impl CgTrace {
    pub fn index(&self) -> usize {
        self.faces.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipleResult {
    pub principle: u8,
    pub pass: bool,
    pub witnesses: Vec<String>,
}

/// Pass/fail for each of the construction principles (C1)..(C7).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipleReport {
    pub results: Vec<PrincipleResult>,
}

impl PrincipleReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn get(&self, principle: u8) -> &PrincipleResult {
        &self.results[principle as usize - 1]
    }
}

impl fmt::Display for PrincipleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            write!(f, "C{} {}", r.principle, if r.pass { "pass" } else { "FAIL" })?;
            for w in &r.witnesses {
                write!(f, "; {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn neg(n: u32, g: u32) -> u32 {
    (n - g % n) % n
}

impl CurrentGraph {
    /// Builds a current graph from vertex rotations and the current of each
    /// arc (arc ids are indices into `currents`). Endpoints are read off the
    /// rotations.
    pub fn new(n: u32, vertices: Vec<CgVertex>, currents: Vec<u32>) -> Result<Self, CgError> {
        if currents.is_empty() {
            return Err(CgError::NoArcs);
        }
        let mut class_seen: BTreeMap<u32, u32> = BTreeMap::new();
        for (id, &c) in currents.iter().enumerate() {
            if c >= n {
                return Err(CgError::CurrentOutOfRange(c, n));
            }
            if c == 0 {
                return Err(CgError::ZeroCurrent(id));
            }
            let key = c.min(neg(n, c));
            if let Some(&other) = class_seen.get(&key) {
                return Err(CgError::DuplicateCurrentClass(other, c));
            }
            class_seen.insert(key, c);
        }
        let mut tail = vec![None; currents.len()];
        let mut head = vec![None; currents.len()];
        for (v, vx) in vertices.iter().enumerate() {
            for (slot, &e) in vx.rot.iter().enumerate() {
                if e.arc >= currents.len() {
                    return Err(CgError::UnknownArc(e.arc));
                }
                let place = if e.head { &mut head[e.arc] } else { &mut tail[e.arc] };
                if place.replace((v, slot)).is_some() {
                    return Err(CgError::RepeatedEnd(e));
                }
            }
        }
        let mut arcs = Vec::with_capacity(currents.len());
        for (id, &current) in currents.iter().enumerate() {
            let t = tail[id].ok_or(CgError::DanglingEnd(ArcEnd { arc: id, head: false }))?;
            let h = head[id].ok_or(CgError::DanglingEnd(ArcEnd { arc: id, head: true }))?;
            arcs.push(CgArc { tail: t, head: h, current });
        }
        Ok(CurrentGraph { n, vertices, arcs })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertices(&self) -> &[CgVertex] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[CgArc] {
        &self.arcs
    }

    fn end_place(&self, e: ArcEnd) -> (usize, usize) {
        if e.head {
            self.arcs[e.arc].head
        } else {
            self.arcs[e.arc].tail
        }
    }

    /// Incoming minus outgoing current sum at `v`, in `[0, n)`.
    pub fn excess(&self, v: usize) -> u32 {
        let n = self.n as u64;
        let mut total = 0u64;
        for e in &self.vertices[v].rot {
            let c = self.arcs[e.arc].current as u64;
            total += if e.head { c } else { n - c };
        }
        (total % n) as u32
    }

    /// The vortex letter on the corner entered through `rot[slot]` of `v`.
    fn corner_letter(&self, v: usize, slot: usize) -> Option<char> {
        match self.vertices[v].kind {
            VertexKind::Vortex1(c) => Some(c),
            VertexKind::Vortex2(a, b) => match slot {
                0 => Some(a),
                1 => Some(b),
                _ => None,
            },
            _ => None,
        }
    }

    /// Traces every face of the current graph's embedding.
    pub fn trace_and_index(&self) -> CgTrace {
        let m = self.arcs.len();
        let mut seen = vec![[false; 2]; m];
        let mut faces = Vec::new();
        for arc in 0..m {
            for forward in [true, false] {
                if seen[arc][forward as usize] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut fwd) = (arc, forward);
                while !seen[a][fwd as usize] {
                    seen[a][fwd as usize] = true;
                    let c = self.arcs[a].current;
                    let value = if fwd { c } else { neg(self.n, c) };
                    let (v, slot) = self.end_place(ArcEnd { arc: a, head: fwd });
                    let vx = &self.vertices[v];
                    let d = vx.rot.len();
                    let next = if vx.cw { (slot + 1) % d } else { (slot + d - 1) % d };
                    face.push(TraceStep {
                        arc: a,
                        forward: fwd,
                        value,
                        corner_vertex: v,
                        letter: self.corner_letter(v, slot),
                    });
                    let leave = vx.rot[next];
                    a = leave.arc;
                    fwd = !leave.head;
                }
                faces.push(face);
            }
        }
        CgTrace { faces }
    }

    /// The log of the single face, with the order-2 element condensed.
    ///
    /// The reading starts at the entry just before the alphabetically first
    /// letter of a `Vortex2` (any letter if there is none, else the element 1).
    pub fn extract_log(&self) -> Result<Log, CgError> {
        let trace = self.trace_and_index();
        if trace.index() != 1 {
            return Err(CgError::IndexNotOne(trace.index()));
        }
        let mut steps = trace.faces.into_iter().next().unwrap();
        if self.n % 2 == 0 {
            let half = self.n / 2;
            let len = steps.len();
            if let Some(i) = (0..len).find(|&i| steps[i].value == half && steps[(i + 1) % len].value == half) {
                let j = (i + 1) % len;
                // the dead end's corner carries no letter; keep the later corner's
                let letter = steps[j].letter;
                steps[i].letter = steps[i].letter.or(letter);
                steps.remove(j);
            }
        }
        let v2_letter = self
            .vertices
            .iter()
            .filter_map(|v| match v.kind {
                VertexKind::Vortex2(a, b) => Some(a.min(b)),
                _ => None,
            })
            .min();
        let start_letter = v2_letter.or_else(|| steps.iter().filter_map(|s| s.letter).min());
        let start = match start_letter {
            Some(c) => steps.iter().position(|s| s.letter == Some(c)).unwrap(),
            None => steps.iter().position(|s| s.value == 1).unwrap_or(0),
        };
        steps.rotate_left(start);
        let mut entries = Vec::new();
        for s in &steps {
            entries.push(VertexLabel::Number(s.value));
            if let Some(c) = s.letter {
                entries.push(VertexLabel::Letter(c));
            }
        }
        Ok(Log::new(self.n, entries)?)
    }

    /// Recovers the unique current graph (up to arc reversal and renaming)
    /// whose single face has the given log; all vertices are traced `cw`.
    pub fn reconstruct_from_log(log: &Log) -> Result<Self, CgError> {
        let n = log.n();
        let mut trav: Vec<u32> = Vec::new();
        let mut letters: BTreeMap<usize, char> = BTreeMap::new();
        let mut leading: Option<char> = None;
        for &e in log.entries() {
            match e {
                VertexLabel::Number(g) => {
                    trav.push(g);
                    if n % 2 == 0 && g == n / 2 {
                        trav.push(g);
                    }
                }
                VertexLabel::Letter(c) => {
                    let slot = if trav.is_empty() {
                        leading.replace(c).map(|p| (p, c))
                    } else {
                        letters.insert(trav.len() - 1, c).map(|p| (p, c))
                    };
                    if let Some((a, b)) = slot {
                        return Err(CgError::LettersShareCorner(a, b));
                    }
                }
            }
        }
        let len = trav.len();
        if len == 0 {
            return Err(CgError::NoArcs);
        }
        if let Some(c) = leading {
            if let Some(p) = letters.insert(len - 1, c) {
                return Err(CgError::LettersShareCorner(p, c));
            }
        }
        // pair traversals into arcs keyed by the class representative
        let mut by_class: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, &g) in trav.iter().enumerate() {
            by_class.entry(g.min(neg(n, g))).or_default().push(i);
        }
        let mut arc_of = vec![(0usize, false); len];
        let mut currents = Vec::new();
        for (&key, idxs) in &by_class {
            if idxs.len() != 2 {
                return Err(CgError::Unpairable(trav[idxs[0]]));
            }
            let id = currents.len();
            currents.push(key);
            let (i, j) = (idxs[0], idxs[1]);
            // the order-2 arc is entered forwards first, then left backwards
            let i_fwd = 2 * key == n || trav[i] == key;
            arc_of[i] = (id, i_fwd);
            arc_of[j] = (id, !i_fwd);
        }
        let arrive = |i: usize| ArcEnd { arc: arc_of[i].0, head: arc_of[i].1 };
        let depart = |i: usize| ArcEnd { arc: arc_of[i].0, head: !arc_of[i].1 };
        let mut succ: BTreeMap<ArcEnd, (ArcEnd, usize)> = BTreeMap::new();
        for i in 0..len {
            succ.insert(arrive(i), (depart((i + 1) % len), i));
        }
        let mut done = std::collections::BTreeSet::new();
        let mut vertices = Vec::new();
        for &start in succ.keys() {
            if done.contains(&start) {
                continue;
            }
            let mut rot = Vec::new();
            let mut corner_letters = Vec::new();
            let mut e = start;
            while done.insert(e) {
                rot.push(e);
                let (next, step) = succ[&e];
                corner_letters.push(letters.get(&step).copied());
                e = next;
            }
            let kind = match (rot.len(), corner_letters.as_slice()) {
                (3, [None, None, None]) => VertexKind::Cubic,
                (1, [Some(c)]) => VertexKind::Vortex1(*c),
                (2, [Some(a), Some(b)]) => VertexKind::Vortex2(*a, *b),
                (1, [None]) if 2 * currents[rot[0].arc] == n => VertexKind::DeadEnd,
                _ => {
                    return Err(CgError::DegreeOutsideC1 {
                        degree: rot.len(),
                        letters: corner_letters,
                    })
                }
            };
            vertices.push(CgVertex { kind, rot, cw: true });
        }
        Ok(CurrentGraph::new(n, vertices, currents)?.canonical())
    }

    /// Canonical form: currents in `[1, n/2]`, arc ids by current, vertex ids
    /// by their sorted incident (current, end) pairs, rotations starting at the
    /// least end.
    pub fn canonical(&self) -> Self {
        let n = self.n;
        let flip: Vec<bool> = self.arcs.iter().map(|a| a.current > n / 2).collect();
        let cur = |a: usize| {
            let c = self.arcs[a].current;
            if flip[a] {
                neg(n, c)
            } else {
                c
            }
        };
        let mut order: Vec<usize> = (0..self.arcs.len()).collect();
        order.sort_by_key(|&a| cur(a));
        let mut new_id = vec![0; order.len()];
        for (i, &a) in order.iter().enumerate() {
            new_id[a] = i;
        }
        let map_end = |e: ArcEnd| ArcEnd {
            arc: new_id[e.arc],
            head: e.head != flip[e.arc],
        };
        let mut verts: Vec<CgVertex> = self
            .vertices
            .iter()
            .map(|v| {
                let mut rot: Vec<ArcEnd> = v.rot.iter().map(|&e| map_end(e)).collect();
                let start = (0..rot.len()).min_by_key(|&i| rot[i]).unwrap_or(0);
                rot.rotate_left(start);
                let kind = match v.kind {
                    VertexKind::Vortex2(a, b) if start % 2 == 1 => VertexKind::Vortex2(b, a),
                    k => k,
                };
                CgVertex { kind, rot, cw: v.cw }
            })
            .collect();
        let currents: Vec<u32> = order.iter().map(|&a| cur(a)).collect();
        verts.sort_by_key(|v| {
            let mut key: Vec<(u32, bool)> = v.rot.iter().map(|e| (currents[e.arc], e.head)).collect();
            key.sort();
            key
        });
        CurrentGraph::new(n, verts, currents).expect("canonical form of a valid graph")
    }

    /// Checks (C1)..(C7) and reports witnesses for every failure.
    pub fn validate_principles(&self) -> PrincipleReport {
        let n = self.n;
        let mut results: Vec<PrincipleResult> = (1..=7)
            .map(|p| PrincipleResult { principle: p, pass: true, witnesses: vec![] })
            .collect();
        let mut fail = |p: usize, w: String| {
            results[p - 1].pass = false;
            results[p - 1].witnesses.push(w);
        };
        for (v, vx) in self.vertices.iter().enumerate() {
            let d = vx.rot.len();
            let ok = match vx.kind {
                VertexKind::Cubic => d == 3,
                VertexKind::Vortex1(_) | VertexKind::DeadEnd => d == 1,
                VertexKind::Vortex2(..) => d == 2,
            };
            if !ok {
                fail(1, format!("vertex {v} ({:?}) has degree {d}", vx.kind));
            }
        }
        let index = self.trace_and_index().index();
        if index != 1 {
            fail(2, format!("{index} faces"));
        }
        let mut count = vec![0u32; n as usize];
        for a in &self.arcs {
            count[a.current.min(neg(n, a.current)) as usize] += 1;
        }
        for g in 1..=n / 2 {
            if 2 * g == n {
                if count[g as usize] != 1 {
                    fail(5, format!("order-2 element {g} appears on {} arcs", count[g as usize]));
                }
            } else if count[g as usize] != 1 {
                fail(3, format!("class ±{g} appears {} times", count[g as usize]));
            }
        }
        if n % 2 == 0 {
            for a in self.arcs.iter().filter(|a| 2 * a.current == n) {
                let deg1 = |(v, _): (usize, usize)| self.vertices[v].rot.len() == 1;
                if !deg1(a.tail) && !deg1(a.head) {
                    fail(5, format!("order-2 arc joins vertices {} and {} of degree > 1", a.tail.0, a.head.0));
                }
            }
        }
        for (v, vx) in self.vertices.iter().enumerate() {
            let exc = self.excess(v);
            match (vx.kind, vx.rot.len()) {
                (_, 3) if exc != 0 => fail(4, format!("vertex {v} has excess {exc}")),
                (VertexKind::Vortex1(c), 1) => {
                    if exc.gcd(&n) != 1 {
                        fail(6, format!("vortex {c} (vertex {v}) has excess {exc}"));
                    }
                }
                (VertexKind::Vortex2(a, b), 2) => {
                    for e in &vx.rot {
                        let c = self.arcs[e.arc].current;
                        if c % 2 == 0 {
                            fail(7, format!("vortex {a}{b} (vertex {v}) has even current {c}"));
                        }
                    }
                    if exc.gcd(&n) != 2 {
                        fail(7, format!("vortex {a}{b} (vertex {v}) has excess {exc}"));
                    }
                }
                _ => {}
            }
        }
        PrincipleReport { results }
    }

    /// Canonical CGF text.
    pub fn to_cgf(&self) -> String {
        let mut s = String::new();
        writeln!(s, "cgf n={}", self.n).unwrap();
        for (id, a) in self.arcs.iter().enumerate() {
            writeln!(
                s,
                "arc {id} {}:{} -> {}:{} current={}",
                a.tail.0, a.tail.1, a.head.0, a.head.1, a.current
            )
            .unwrap();
        }
        for (id, v) in self.vertices.iter().enumerate() {
            let kind = match v.kind {
                VertexKind::Cubic => "cubic".to_string(),
                VertexKind::Vortex1(c) => format!("vortex1:{c}"),
                VertexKind::Vortex2(a, b) => format!("vortex2:{a},{b}"),
                VertexKind::DeadEnd => "deadend".to_string(),
            };
            let rot: Vec<String> = v.rot.iter().map(ToString::to_string).collect();
            writeln!(
                s,
                "vertex {id} kind={kind} rot={} orient={}",
                rot.join(","),
                if v.cw { "cw" } else { "ccw" }
            )
            .unwrap();
        }
        s
    }

    /// Parses CGF text; arc lines must agree with the vertex rotations.
    pub fn from_cgf(text: &str) -> Result<Self, CgError> {
        let syn = |line: usize, message: String| CgError::Syntax { line, message };
        let mut n = None;
        let mut arcs: BTreeMap<usize, ((usize, usize), (usize, usize), u32, usize)> = BTreeMap::new();
        let mut verts: BTreeMap<usize, CgVertex> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let ln = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "cgf" => {
                    let v = toks
                        .get(1)
                        .and_then(|t| t.strip_prefix("n="))
                        .and_then(|t| t.parse::<u32>().ok())
                        .ok_or_else(|| syn(ln, "expected `cgf n=<order>`".into()))?;
                    n = Some(v);
                }
                "arc" => {
                    if toks.len() != 6 || toks[3] != "->" {
                        return Err(syn(ln, "expected `arc <id> <v>:<slot> -> <v>:<slot> current=<g>`".into()));
                    }
                    let id = toks[1].parse::<usize>().map_err(|_| syn(ln, "bad arc id".into()))?;
                    let place = |t: &str| -> Option<(usize, usize)> {
                        let (a, b) = t.split_once(':')?;
                        Some((a.parse().ok()?, b.parse().ok()?))
                    };
                    let tail = place(toks[2]).ok_or_else(|| syn(ln, format!("bad end `{}`", toks[2])))?;
                    let head = place(toks[4]).ok_or_else(|| syn(ln, format!("bad end `{}`", toks[4])))?;
                    let cur = toks[5]
                        .strip_prefix("current=")
                        .and_then(|t| t.parse::<u32>().ok())
                        .ok_or_else(|| syn(ln, "bad current".into()))?;
                    if arcs.insert(id, (tail, head, cur, ln)).is_some() {
                        return Err(syn(ln, format!("duplicate arc id {id}")));
                    }
                }
                "vertex" => {
                    let id = toks
                        .get(1)
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| syn(ln, "bad vertex id".into()))?;
                    let mut kind = None;
                    let mut rot = None;
                    let mut cw = None;
                    for t in &toks[2..] {
                        if let Some(k) = t.strip_prefix("kind=") {
                            kind = Some(parse_kind(k).ok_or_else(|| syn(ln, format!("bad kind `{k}`")))?);
                        } else if let Some(r) = t.strip_prefix("rot=") {
                            let ends = r
                                .split(',')
                                .filter(|e| !e.is_empty())
                                .map(parse_end)
                                .collect::<Option<Vec<_>>>()
                                .ok_or_else(|| syn(ln, format!("bad rotation `{r}`")))?;
                            rot = Some(ends);
                        } else if let Some(o) = t.strip_prefix("orient=") {
                            cw = Some(match o {
                                "cw" => true,
                                "ccw" => false,
                                _ => return Err(syn(ln, format!("bad orientation `{o}`"))),
                            });
                        } else {
                            return Err(syn(ln, format!("unknown field `{t}`")));
                        }
                    }
                    let v = CgVertex {
                        kind: kind.ok_or_else(|| syn(ln, "missing kind".into()))?,
                        rot: rot.ok_or_else(|| syn(ln, "missing rot".into()))?,
                        cw: cw.unwrap_or(true),
                    };
                    if verts.insert(id, v).is_some() {
                        return Err(syn(ln, format!("duplicate vertex id {id}")));
                    }
                }
                other => return Err(syn(ln, format!("unknown record `{other}`"))),
            }
        }
        let n = n.ok_or_else(|| syn(1, "missing `cgf n=` header".into()))?;
        if arcs.is_empty() {
            return Err(CgError::NoArcs);
        }
        if let Some((pos, &id)) = arcs.keys().enumerate().find(|(i, &id)| *i != id) {
            return Err(syn(arcs[&id].3, format!("arc ids must be 0..{}, found {id} at {pos}", arcs.len())));
        }
        if let Some((pos, &id)) = verts.keys().enumerate().find(|(i, &id)| *i != id) {
            return Err(syn(0, format!("vertex ids must be contiguous, found {id} at {pos}")));
        }
        let currents: Vec<u32> = arcs.values().map(|a| a.2).collect();
        let cg = CurrentGraph::new(n, verts.into_values().collect(), currents)?;
        for (&id, &(tail, head, _, _)) in &arcs {
            let a = cg.arcs[id];
            if a.tail != tail {
                return Err(CgError::IncidenceMismatch { arc: id, end: "tail", claimed: tail, actual: a.tail });
            }
            if a.head != head {
                return Err(CgError::IncidenceMismatch { arc: id, end: "head", claimed: head, actual: a.head });
            }
        }
        Ok(cg)
    }
}

fn parse_kind(k: &str) -> Option<VertexKind> {
    let letter = |t: &str| match t.parse::<VertexLabel>() {
        Ok(VertexLabel::Letter(c)) => Some(c),
        _ => None,
    };
    match k {
        "cubic" => Some(VertexKind::Cubic),
        "deadend" => Some(VertexKind::DeadEnd),
        _ => {
            if let Some(l) = k.strip_prefix("vortex1:") {
                Some(VertexKind::Vortex1(letter(l)?))
            } else if let Some(ls) = k.strip_prefix("vortex2:") {
                let (a, b) = ls.split_once(',')?;
                Some(VertexKind::Vortex2(letter(a)?, letter(b)?))
            } else {
                None
            }
        }
    }
}

fn parse_end(t: &str) -> Option<ArcEnd> {
    let (num, kind) = t.split_at(t.len().checked_sub(1)?);
    let head = match kind {
        "h" => true,
        "t" => false,
        _ => return None,
    };
    Some(ArcEnd { arc: num.parse().ok()?, head })
}

/// How one anchor of the vertex-0 pattern shows up in a log.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnchorStatus {
    Present,
    Reversed,
    Absent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorResult {
    pub pattern: Vec<VertexLabel>,
    pub status: AnchorStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarReport {
    pub anchors: Vec<AnchorResult>,
}

impl StarReport {
    pub fn all_present(&self) -> bool {
        self.anchors.iter().all(|a| a.status == AnchorStatus::Present)
    }

    pub fn all_found(&self) -> bool {
        self.anchors.iter().all(|a| a.status != AnchorStatus::Absent)
    }
}

impl fmt::Display for StarReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.anchors {
            let p: Vec<String> = a.pattern.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}] {:?}", p.join(" "), a.status)?;
        }
        Ok(())
    }
}

/// The four runs that the rotation at vertex 0 must contain for the handle
/// surgery of the main family, over `Z_{12s-4}`.
pub fn star_anchors(s: u32) -> Vec<Vec<VertexLabel>> {
    use VertexLabel::{Letter as L, Number as N};
    vec![
        vec![L('x'), N(1), L('y'), N(12 * s - 5), L('z')],
        vec![N(6 * s + 2), N(2), N(6 * s + 3)],
        vec![N(6 * s - 2), N(6), N(6 * s - 3)],
        vec![N(6 * s - 5), L('w')],
    ]
}

pub fn check_star_pattern(log: &Log, s: u32) -> StarReport {
    let anchors = star_anchors(s)
        .into_iter()
        .map(|pattern| {
            let rev: Vec<VertexLabel> = pattern.iter().rev().copied().collect();
            let status = if log.find_cyclic(&pattern).is_some() {
                AnchorStatus::Present
            } else if log.find_cyclic(&rev).is_some() {
                AnchorStatus::Reversed
            } else {
                AnchorStatus::Absent
            };
            AnchorResult { pattern, status }
        })
        .collect();
    StarReport { anchors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn end(arc: usize, head: bool) -> ArcEnd {
        ArcEnd { arc, head }
    }

    #[test]
    fn k7_log_reconstructs_to_two_vertices() {
        let log = Log::parse(7, "1 3 2 6 4 5").unwrap();
        let cg = CurrentGraph::reconstruct_from_log(&log).unwrap();
        assert_eq!(cg.arcs().len(), 3);
        assert_eq!(cg.vertices().len(), 2);
        assert!(cg.vertices().iter().all(|v| v.kind == VertexKind::Cubic));
        assert!(cg.validate_principles().all_pass());
        assert!(cg.extract_log().unwrap().cyclic_eq(&log));
    }

    #[test]
    fn loop_on_one_vertex() {
        // one vertex, one loop: two faces on the sphere
        let v = CgVertex { kind: VertexKind::Cubic, rot: vec![end(0, false), end(0, true)], cw: true };
        let cg = CurrentGraph::new(3, vec![v], vec![1]).unwrap();
        let trace = cg.trace_and_index();
        assert_eq!(trace.index(), 2);
        assert_eq!(1 - 1 + trace.index() as i64, 2);
        assert_eq!(cg.extract_log(), Err(CgError::IndexNotOne(2)));
    }

    #[test]
    fn kcl_failure_reports_excess() {
        let hub = CgVertex {
            kind: VertexKind::Cubic,
            rot: vec![end(0, true), end(1, true), end(2, true)],
            cw: true,
        };
        let leaves = (0..3).map(|a| CgVertex { kind: VertexKind::Vortex1('x'), rot: vec![end(a, false)], cw: true });
        let cg = CurrentGraph::new(32, std::iter::once(hub).chain(leaves).collect(), vec![1, 2, 4]).unwrap();
        assert_eq!(cg.excess(0), 7);
        let r = cg.validate_principles();
        assert!(!r.get(4).pass);
        assert!(r.get(4).witnesses[0].contains("excess 7"));
    }

    #[test]
    fn vortex_with_even_excess_fails_c6() {
        let v = CgVertex { kind: VertexKind::Vortex1('y'), rot: vec![end(0, true)], cw: true };
        let d = CgVertex { kind: VertexKind::DeadEnd, rot: vec![end(0, false)], cw: true };
        let cg = CurrentGraph::new(32, vec![v, d], vec![16]).unwrap();
        assert_eq!(cg.excess(0), 16);
        assert!(!cg.validate_principles().get(6).pass);
    }

    #[test]
    fn cgf_errors() {
        let dup = "cgf n=32\narc 0 0:0 -> 1:0 current=3\narc 1 0:1 -> 1:1 current=29\n\
                   vertex 0 kind=vortex2:x,z rot=0t,1t orient=cw\nvertex 1 kind=vortex2:y,w rot=0h,1h orient=cw\n";
        let err = CurrentGraph::from_cgf(dup).unwrap_err();
        assert!(err.to_string().contains("(C3) violated"));
        assert_eq!(CurrentGraph::from_cgf("cgf n=32\n"), Err(CgError::NoArcs));
        let dangling = "cgf n=7\narc 0 0:0 -> 0:1 current=1\nvertex 0 kind=cubic rot=0t orient=cw\n";
        assert_eq!(CurrentGraph::from_cgf(dangling), Err(CgError::DanglingEnd(end(0, true))));
        let mismatch = "cgf n=7\narc 0 0:1 -> 0:0 current=1\nvertex 0 kind=cubic rot=0t,0h orient=cw\n";
        assert!(matches!(CurrentGraph::from_cgf(mismatch), Err(CgError::IncidenceMismatch { .. })));
    }

    #[test]
    fn adjacent_letters_share_a_corner() {
        let log = Log::parse(7, "1 x y 3 2 6 4 5").unwrap();
        assert_eq!(CurrentGraph::reconstruct_from_log(&log), Err(CgError::LettersShareCorner('x', 'y')));
    }
}
