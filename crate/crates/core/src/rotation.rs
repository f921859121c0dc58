//! Rotation systems of simple graphs and the checks run on them: face
//! tracing, Rule R*, Euler genus and complete-graph signatures.
//!
//! Faces are traced with one fixed convention everywhere in the crate: after
//! traversing the directed edge `a -> b`, the walk continues along `b -> c`
//! where `c` is the successor of `a` in the rotation at `b`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_rational::Ratio;

use crate::label::VertexLabel;

const ABSENT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("label {0} is not a vertex of this embedding")]
    UnknownLabel(VertexLabel),
    #[error("duplicate rotation row for {0}")]
    DuplicateRow(VertexLabel),
    #[error("no rotation row for {0}")]
    MissingRow(VertexLabel),
    #[error("self-loop at {0}")]
    SelfLoop(VertexLabel),
    #[error("{neighbor} repeated in the rotation at {vertex}")]
    RepeatedNeighbor {
        vertex: VertexLabel,
        neighbor: VertexLabel,
    },
    #[error("asymmetric adjacency: {to} is in the rotation at {from} but not conversely")]
    Asymmetric { from: VertexLabel, to: VertexLabel },
    #[error("embedding is disconnected ({} components)", components.len())]
    Disconnected { components: Vec<Vec<VertexLabel>> },
    #[error("not a triangulation: {violations} Rule R* violations")]
    NotTriangulation { violations: usize },
    #[error("Euler characteristic {chi} does not give a nonnegative integer genus")]
    EulerInconsistent { chi: i64 },
    #[error("rsf line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// One Rule R* failure: the rotation at `i` reads `.. j k l ..` but the
/// rotation at `k` does not read `.. l i j ..`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RStarViolation {
    pub i: VertexLabel,
    pub k: VertexLabel,
    pub expected_before_i: VertexLabel,
    pub expected_after_i: VertexLabel,
    pub found_before_i: VertexLabel,
    pub found_after_i: VertexLabel,
}

/// Orientable embedding of a simple graph whose vertices are the numbers
/// `0..order` together with a declared set of letters.
///
/// Vertex indices follow label order, so index `v < order` is the number `v`
/// and letters come after in alphabetical order. Every rotation is stored
/// starting from its smallest neighbor.
#[derive(Clone, Debug)]
pub struct RotationSystem {
    order: u32,
    letters: Vec<char>,
    labels: Vec<VertexLabel>,
    rows: Vec<Vec<u32>>,
    pos: Vec<Vec<u32>>,
}

impl PartialEq for RotationSystem {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.letters == other.letters && self.rows == other.rows
    }
}

impl Eq for RotationSystem {}

/// The faces of an embedding as cyclic sequences of directed edges, given by
/// vertex indices of the traced rotation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceTrace {
    pub faces: Vec<Vec<(usize, usize)>>,
}

impl FaceTrace {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn all_triangles(&self) -> bool {
        self.faces.iter().all(|f| f.len() == 3)
    }

    /// Histogram of face lengths.
    pub fn length_counts(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for f in &self.faces {
            *m.entry(f.len()).or_insert(0) += 1;
        }
        m
    }

    /// True iff every directed edge of `rs` lies in exactly one face, once.
    pub fn is_partition_of(&self, rs: &RotationSystem) -> bool {
        let mut seen = BTreeSet::new();
        for face in &self.faces {
            for &d in face {
                if !seen.insert(d) {
                    return false;
                }
            }
        }
        seen.len() == 2 * rs.edge_count()
            && seen
                .iter()
                .all(|&(a, b)| rs.pos[a][b] != ABSENT)
    }
}

/// Vertex set and edge set of an embedded graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSignature {
    pub vertices: BTreeSet<VertexLabel>,
    pub edges: BTreeSet<(VertexLabel, VertexLabel)>,
}

impl GraphSignature {
    /// The complete graph on `vertices` with the pairs in `missing` removed.
    pub fn complete_minus(
        vertices: impl IntoIterator<Item = VertexLabel>,
        missing: &[(VertexLabel, VertexLabel)],
    ) -> Self {
        let vertices: BTreeSet<_> = vertices.into_iter().collect();
        let missing: BTreeSet<_> = missing.iter().map(|&(a, b)| ordered(a, b)).collect();
        let vs: Vec<_> = vertices.iter().copied().collect();
        let mut edges = BTreeSet::new();
        for (i, &a) in vs.iter().enumerate() {
            for &b in &vs[i + 1..] {
                if !missing.contains(&(a, b)) {
                    edges.insert((a, b));
                }
            }
        }
        GraphSignature { vertices, edges }
    }
}

pub(crate) fn ordered(a: VertexLabel, b: VertexLabel) -> (VertexLabel, VertexLabel) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Exact Euler lower bound `(E - 3V + 6) / 6` on the genus of a simple graph.
pub fn genus_lower_bound(vertices: u64, edges: u64) -> Ratio<i64> {
    Ratio::new(edges as i64 - 3 * vertices as i64 + 6, 6)
}

/// Ceiling of [`genus_lower_bound`], clamped at zero.
pub fn genus_lower_bound_ceil(vertices: u64, edges: u64) -> u64 {
    genus_lower_bound(vertices, edges).ceil().to_integer().max(0) as u64
}

impl RotationSystem {
    /// Builds a rotation system from labelled rows, validating the simple-graph
    /// invariants and canonicalizing each rotation's starting element.
    pub fn from_rows<I>(order: u32, letters: &[char], rows: I) -> Result<Self, EmbeddingError>
    where
        I: IntoIterator<Item = (VertexLabel, Vec<VertexLabel>)>,
    {
        let mut letters = letters.to_vec();
        letters.sort_unstable();
        letters.dedup();
        let labels = label_list(order, &letters);
        let index = |l: VertexLabel| -> Result<u32, EmbeddingError> {
            label_index(order, &letters, l).ok_or(EmbeddingError::UnknownLabel(l))
        };
        let mut slots: Vec<Option<Vec<u32>>> = vec![None; labels.len()];
        for (v, row) in rows {
            let vi = index(v)? as usize;
            if slots[vi].is_some() {
                return Err(EmbeddingError::DuplicateRow(v));
            }
            let mut r = Vec::with_capacity(row.len());
            for u in row {
                r.push(index(u)?);
            }
            slots[vi] = Some(r);
        }
        let mut out = Vec::with_capacity(labels.len());
        for (vi, slot) in slots.into_iter().enumerate() {
            out.push(slot.ok_or(EmbeddingError::MissingRow(labels[vi]))?);
        }
        Self::from_index_rows(order, letters, out)
    }

    pub(crate) fn from_index_rows(
        order: u32,
        letters: Vec<char>,
        mut rows: Vec<Vec<u32>>,
    ) -> Result<Self, EmbeddingError> {
        let labels = label_list(order, &letters);
        let n = labels.len();
        debug_assert_eq!(rows.len(), n);
        let mut pos = vec![vec![ABSENT; n]; n];
        for (v, row) in rows.iter_mut().enumerate() {
            if let Some(start) = row.iter().enumerate().min_by_key(|(_, &u)| u).map(|(i, _)| i) {
                row.rotate_left(start);
            }
            for (i, &u) in row.iter().enumerate() {
                let u = u as usize;
                if u == v {
                    return Err(EmbeddingError::SelfLoop(labels[v]));
                }
                if pos[v][u] != ABSENT {
                    return Err(EmbeddingError::RepeatedNeighbor {
                        vertex: labels[v],
                        neighbor: labels[u],
                    });
                }
                pos[v][u] = i as u32;
            }
        }
        for v in 0..n {
            for &u in &rows[v] {
                if pos[u as usize][v] == ABSENT {
                    return Err(EmbeddingError::Asymmetric {
                        from: labels[v],
                        to: labels[u as usize],
                    });
                }
            }
        }
        Ok(RotationSystem {
            order,
            letters,
            labels,
            rows,
            pos,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> VertexLabel {
        self.labels[v]
    }

    pub fn index_of(&self, l: VertexLabel) -> Option<usize> {
        label_index(self.order, &self.letters, l).map(|i| i as usize)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    /// Neighbor indices of `v` in rotation order, canonical start first.
    pub fn row(&self, v: usize) -> &[u32] {
        &self.rows[v]
    }

    /// The rotation at `v` as labels.
    pub fn rotation(&self, v: VertexLabel) -> Option<Vec<VertexLabel>> {
        let vi = self.index_of(v)?;
        Some(self.rows[vi].iter().map(|&u| self.labels[u as usize]).collect())
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.pos[a][b] != ABSENT
    }

    /// Successor of `u` in the rotation at `v`; `u` must be a neighbor.
    pub fn succ(&self, v: usize, u: usize) -> usize {
        let r = &self.rows[v];
        let p = self.pos[v][u] as usize;
        r[(p + 1) % r.len()] as usize
    }

    /// Predecessor of `u` in the rotation at `v`; `u` must be a neighbor.
    pub fn pred(&self, v: usize, u: usize) -> usize {
        let r = &self.rows[v];
        let p = self.pos[v][u] as usize;
        r[(p + r.len() - 1) % r.len()] as usize
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// All face orbits under the crate's tracing convention.
    pub fn trace_faces(&self) -> FaceTrace {
        let n = self.labels.len();
        let mut seen: Vec<Vec<bool>> = self.rows.iter().map(|r| vec![false; r.len()]).collect();
        let mut faces = Vec::new();
        for a in 0..n {
            for i in 0..self.rows[a].len() {
                if seen[a][i] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut x, mut y) = (a, self.rows[a][i] as usize);
                loop {
                    let p = self.pos[x][y] as usize;
                    if seen[x][p] {
                        break;
                    }
                    seen[x][p] = true;
                    face.push((x, y));
                    let c = self.succ(y, x);
                    x = y;
                    y = c;
                }
                faces.push(face);
            }
        }
        FaceTrace { faces }
    }

    /// Every violation of Rule R*; an empty result means the rotation system
    /// describes a triangulation.
    pub fn check_rule_r_star(&self) -> Vec<RStarViolation> {
        let mut out = Vec::new();
        for i in 0..self.labels.len() {
            let r = &self.rows[i];
            let d = r.len();
            for p in 0..d {
                let k = r[p] as usize;
                let j = r[(p + d - 1) % d] as usize;
                let l = r[(p + 1) % d] as usize;
                let before = self.pred(k, i);
                let after = self.succ(k, i);
                if before != l || after != j {
                    out.push(RStarViolation {
                        i: self.labels[i],
                        k: self.labels[k],
                        expected_before_i: self.labels[l],
                        expected_after_i: self.labels[j],
                        found_before_i: self.labels[before],
                        found_after_i: self.labels[after],
                    });
                }
            }
        }
        out
    }

    pub fn satisfies_rule_r_star(&self) -> bool {
        self.check_rule_r_star().is_empty()
    }

    /// Connected components as label lists, each sorted.
    pub fn components(&self) -> Vec<Vec<VertexLabel>> {
        let n = self.labels.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![];
            let mut q = VecDeque::from([s]);
            comp[s] = id;
            while let Some(v) = q.pop_front() {
                members.push(self.labels[v]);
                for &u in &self.rows[v] {
                    if comp[u as usize] == usize::MAX {
                        comp[u as usize] = id;
                        q.push_back(u as usize);
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.labels.len() as i64 - self.edge_count() as i64 + self.trace_faces().face_count() as i64
    }

    /// Genus of the orientable surface carrying this embedding.
    pub fn euler_genus(&self) -> Result<u32, EmbeddingError> {
        let comps = self.components();
        if comps.len() > 1 {
            return Err(EmbeddingError::Disconnected { components: comps });
        }
        let chi = self.euler_characteristic();
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(EmbeddingError::EulerInconsistent { chi });
        }
        Ok(((2 - chi) / 2) as u32)
    }

    pub fn signature(&self) -> GraphSignature {
        let mut edges = BTreeSet::new();
        for (v, r) in self.rows.iter().enumerate() {
            for &u in r {
                if (u as usize) > v {
                    edges.insert((self.labels[v], self.labels[u as usize]));
                }
            }
        }
        GraphSignature {
            vertices: self.labels.iter().copied().collect(),
            edges,
        }
    }

    /// True iff the embedded graph has exactly `vertex_count` vertices and is
    /// complete except for the pairs in `missing`.
    pub fn check_complete_minus(
        &self,
        vertex_count: usize,
        missing: &[(VertexLabel, VertexLabel)],
    ) -> bool {
        if self.labels.len() != vertex_count {
            return false;
        }
        self.signature() == GraphSignature::complete_minus(self.labels.iter().copied(), missing)
    }

    /// Unordered vertex pairs that are not edges.
    pub fn non_edges(&self) -> Vec<(VertexLabel, VertexLabel)> {
        let n = self.labels.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.pos[a][b] == ABSENT {
                    out.push((self.labels[a], self.labels[b]));
                }
            }
        }
        out
    }

    /// Serializes in the RSF text format.
    pub fn to_rsf(&self) -> String {
        let mut s = String::new();
        let letters: Vec<String> = self.letters.iter().map(char::to_string).collect();
        writeln!(s, "rsf n={} letters={}", self.order, letters.join(",")).unwrap();
        for (v, r) in self.rows.iter().enumerate() {
            write!(s, "{}.", self.labels[v]).unwrap();
            for &u in r {
                write!(s, " {}", self.labels[u as usize]).unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Parses the RSF text format. Blank lines and `#` comments are ignored.
    pub fn from_rsf(text: &str) -> Result<Self, EmbeddingError> {
        let perr = |line: usize, message: String| EmbeddingError::Parse { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty input".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("rsf") {
            return Err(perr(hl, "expected `rsf` header".into()));
        }
        let mut order = None;
        let mut letters: Option<Vec<char>> = None;
        for p in parts {
            if let Some(v) = p.strip_prefix("n=") {
                order = Some(v.parse::<u32>().map_err(|_| perr(hl, format!("bad order `{v}`")))?);
            } else if let Some(v) = p.strip_prefix("letters=") {
                let mut ls = Vec::new();
                for t in v.split(',').filter(|t| !t.is_empty()) {
                    match t.parse::<VertexLabel>() {
                        Ok(VertexLabel::Letter(c)) => ls.push(c),
                        _ => return Err(perr(hl, format!("bad letter `{t}`"))),
                    }
                }
                letters = Some(ls);
            } else {
                return Err(perr(hl, format!("unknown header field `{p}`")));
            }
        }
        let order = order.ok_or_else(|| perr(hl, "missing n=".into()))?;
        let letters = letters.unwrap_or_default();
        let mut rows = Vec::new();
        for (ln, line) in lines {
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap_or_default();
            let v = head
                .strip_suffix('.')
                .ok_or_else(|| perr(ln, format!("row label `{head}` must end with `.`")))?
                .parse::<VertexLabel>()
                .map_err(|e| perr(ln, e.to_string()))?;
            let nbrs = toks
                .map(|t| t.parse::<VertexLabel>().map_err(|e| perr(ln, e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push((v, nbrs));
        }
        Self::from_rows(order, &letters, rows)
    }

    /// Applies a vertex bijection (by index) and optionally reverses every
    /// rotation.
    pub(crate) fn relabeled(&self, map: &[usize], reverse: bool) -> Result<Self, EmbeddingError> {
        let n = self.labels.len();
        let mut rows = vec![Vec::new(); n];
        for v in 0..n {
            let mut r: Vec<u32> = self.rows[v].iter().map(|&u| map[u as usize] as u32).collect();
            if reverse {
                r.reverse();
            }
            rows[map[v]] = r;
        }
        Self::from_index_rows(self.order, self.letters.clone(), rows)
    }
}

fn label_list(order: u32, letters: &[char]) -> Vec<VertexLabel> {
    (0..order)
        .map(VertexLabel::Number)
        .chain(letters.iter().map(|&c| VertexLabel::Letter(c)))
        .collect()
}

fn label_index(order: u32, letters: &[char], l: VertexLabel) -> Option<u32> {
    match l {
        VertexLabel::Number(v) if v < order => Some(v),
        VertexLabel::Number(_) => None,
        VertexLabel::Letter(c) => letters
            .binary_search(&c)
            .ok()
            .map(|i| order + i as u32),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u32) -> VertexLabel {
        VertexLabel::Number(v)
    }

    /// K_7 on the torus from the row (1 3 2 6 4 5) shifted additively.
    pub(crate) fn k7() -> RotationSystem {
        let base = [1u32, 3, 2, 6, 4, 5];
        RotationSystem::from_rows(
            7,
            &[],
            (0..7).map(|k| (n(k), base.iter().map(|&g| n((g + k) % 7)).collect())),
        )
        .unwrap()
    }

    fn triangle() -> RotationSystem {
        RotationSystem::from_rows(
            3,
            &[],
            [(n(0), vec![n(1), n(2)]), (n(1), vec![n(2), n(0)]), (n(2), vec![n(0), n(1)])],
        )
        .unwrap()
    }

    fn k4_sphere() -> RotationSystem {
        // 3 at the centre of triangle 0 1 2
        RotationSystem::from_rows(
            4,
            &[],
            [
                (n(0), vec![n(1), n(3), n(2)]),
                (n(1), vec![n(2), n(3), n(0)]),
                (n(2), vec![n(0), n(3), n(1)]),
                (n(3), vec![n(0), n(1), n(2)]),
            ],
        )
        .unwrap()
    }

    /// Independent face count: orbits of the dart permutation computed with
    /// plain label lookups.
    fn brute_face_lengths(rs: &RotationSystem) -> Vec<usize> {
        let rows: Vec<Vec<VertexLabel>> =
            rs.labels().iter().map(|&l| rs.rotation(l).unwrap()).collect();
        let idx = |l: VertexLabel| rs.labels().iter().position(|&m| m == l).unwrap();
        let mut darts = BTreeSet::new();
        for (v, r) in rows.iter().enumerate() {
            for &u in r {
                darts.insert((v, idx(u)));
            }
        }
        let mut lens = vec![];
        while let Some(&start) = darts.iter().next() {
            let mut d = start;
            let mut len = 0;
            loop {
                darts.remove(&d);
                len += 1;
                let (a, b) = d;
                let r = &rows[b];
                let p = r.iter().position(|&l| l == rs.label(a)).unwrap();
                let c = idx(r[(p + 1) % r.len()]);
                d = (b, c);
                if d == start {
                    break;
                }
            }
            lens.push(len);
        }
        lens.sort();
        lens
    }

    #[test]
    fn triangle_on_sphere() {
        let t = triangle();
        let f = t.trace_faces();
        assert_eq!(f.face_count(), 2);
        assert!(f.all_triangles());
        assert_eq!(t.euler_genus().unwrap(), 0);
    }

    #[test]
    fn k7_torus() {
        let k = k7();
        let f = k.trace_faces();
        assert_eq!(f.face_count(), 14);
        assert!(f.all_triangles());
        assert!(f.is_partition_of(&k));
        assert_eq!(brute_face_lengths(&k), vec![3; 14]);
        assert_eq!(k.euler_genus().unwrap(), 1);
        assert!(k.satisfies_rule_r_star());
        assert!(k.check_complete_minus(7, &[]));
    }

    #[test]
    fn k4_passes_r_star() {
        let k = k4_sphere();
        assert!(k.satisfies_rule_r_star());
        assert_eq!(k.euler_genus().unwrap(), 0);
    }

    #[test]
    fn swapped_entries_break_r_star() {
        let k = k7();
        let mut rows: Vec<_> = k.labels().iter().map(|&l| (l, k.rotation(l).unwrap())).collect();
        rows[0].1.swap(1, 2);
        let bad = RotationSystem::from_rows(7, &[], rows).unwrap();
        assert!(!bad.check_rule_r_star().is_empty());
        assert!(!bad.trace_faces().all_triangles());
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(genus_lower_bound(12, 66), Ratio::from_integer(6));
        assert_eq!(genus_lower_bound(36, 630), Ratio::from_integer(88));
        assert_eq!(genus_lower_bound(4, 6), Ratio::from_integer(0));
        assert_eq!(genus_lower_bound(7, 21), Ratio::from_integer(1));
        assert_eq!(genus_lower_bound_ceil(8, 28), 2);
    }

    #[test]
    fn structural_errors() {
        let asym = RotationSystem::from_rows(
            3,
            &[],
            [(n(0), vec![n(1), n(2)]), (n(1), vec![n(0)]), (n(2), vec![n(0), n(1)])],
        );
        assert_eq!(
            asym.unwrap_err(),
            EmbeddingError::Asymmetric { from: n(2), to: n(1) }
        );
        let dup = RotationSystem::from_rows(2, &[], [(n(0), vec![n(1)]), (n(0), vec![n(1)])]);
        assert_eq!(dup.unwrap_err(), EmbeddingError::DuplicateRow(n(0)));
        let unknown = RotationSystem::from_rows(2, &[], [(n(0), vec![n(5)]), (n(1), vec![])]);
        assert_eq!(unknown.unwrap_err(), EmbeddingError::UnknownLabel(n(5)));
        let rep = RotationSystem::from_rows(
            2,
            &[],
            [(n(0), vec![n(1), n(1)]), (n(1), vec![n(0)])],
        );
        assert!(matches!(rep.unwrap_err(), EmbeddingError::RepeatedNeighbor { .. }));
    }

    #[test]
    fn disconnected_genus_is_an_error() {
        let rs = RotationSystem::from_rows(
            4,
            &[],
            [
                (n(0), vec![n(1)]),
                (n(1), vec![n(0)]),
                (n(2), vec![n(3)]),
                (n(3), vec![n(2)]),
            ],
        )
        .unwrap();
        match rs.euler_genus() {
            Err(EmbeddingError::Disconnected { components }) => assert_eq!(components.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rsf_round_trip_and_rejections() {
        let k = k7();
        let text = k.to_rsf();
        assert!(text.starts_with("rsf n=7 letters=\n0. 1 3 2 6 4 5\n"));
        assert_eq!(RotationSystem::from_rsf(&text).unwrap(), k);
        let truncated: String = text.lines().take(4).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            RotationSystem::from_rsf(&truncated),
            Err(EmbeddingError::MissingRow(_))
        ));
        assert!(RotationSystem::from_rsf("rsf n=2 letters=\n0 1\n1. 0\n").is_err());
    }

    #[test]
    fn missing_edge_detected() {
        let k = k7();
        assert!(!k.check_complete_minus(7, &[(n(0), n(1))]));
        let mut rows: Vec<_> = k.labels().iter().map(|&l| (l, k.rotation(l).unwrap())).collect();
        rows[0].1.retain(|&u| u != n(1));
        rows[1].1.retain(|&u| u != n(0));
        let cut = RotationSystem::from_rows(7, &[], rows).unwrap();
        assert!(!cut.check_complete_minus(7, &[]));
        assert!(cut.check_complete_minus(7, &[(n(1), n(0))]));
        assert_eq!(cut.non_edges(), vec![(n(0), n(1))]);
    }
}
