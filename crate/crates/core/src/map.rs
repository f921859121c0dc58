//! Dart-based combinatorial maps that tolerate parallel edges. Surgery works
//! on these so intermediate states may double an edge before a later flip
//! removes the extra copy.
//!
//! Darts come in pairs `2e, 2e + 1`; `next`/`prev` give the rotation around a
//! dart's origin and the face permutation is `phi(d) = next[twin(d)]`, which
//! matches the tracing convention of [`RotationSystem`].

use std::collections::BTreeMap;

use crate::label::VertexLabel;
use crate::rotation::{EmbeddingError, RotationSystem};

pub type Dart = u32;

const NONE: u32 = u32::MAX;

#[inline]
pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("dart {0} is not live")]
    DeadDart(Dart),
    #[error("faces on edge {0}-{1} are not both triangles")]
    NotTriangles(VertexLabel, VertexLabel),
    #[error("flipping {0}-{1} would create a loop at {2}")]
    FlipLoop(VertexLabel, VertexLabel, VertexLabel),
    #[error("flip of {a}-{b} would add {c}-{d}, which is already an edge")]
    FlipDuplicate { a: VertexLabel, b: VertexLabel, c: VertexLabel, d: VertexLabel },
    #[error("chord corners lie in different faces")]
    ChordAcrossFaces,
    #[error("chord would be a loop at {0}")]
    ChordLoop(VertexLabel),
    #[error("handle corners must be three distinct darts at one vertex")]
    BadHandleCorners,
    #[error("handle corners must lie in three distinct faces")]
    HandleFacesNotDistinct,
    #[error("handle merge needs two distinct faces")]
    SameFace,
    #[error("map has parallel edges between {0} and {1}")]
    Multigraph(VertexLabel, VertexLabel),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

#[derive(Clone, Debug)]
pub struct DartMap {
    order: u32,
    letters: Vec<char>,
    labels: Vec<VertexLabel>,
    origin: Vec<u32>,
    next: Vec<Dart>,
    prev: Vec<Dart>,
    live: Vec<bool>,
    anchor: Vec<Dart>,
    /// Edge copies per vertex pair, dense `nv * nv`.
    mult: Vec<u32>,
    /// Pairs with more than one copy.
    parallel: BTreeMap<(u32, u32), u32>,
    absent: usize,
    edges: usize,
}

fn key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

impl DartMap {
    pub fn from_rotation_system(rs: &RotationSystem) -> Self {
        let nv = rs.vertex_count();
        let mut m = DartMap {
            order: rs.order(),
            letters: rs.letters().to_vec(),
            labels: rs.labels().to_vec(),
            origin: Vec::new(),
            next: Vec::new(),
            prev: Vec::new(),
            live: Vec::new(),
            anchor: vec![NONE; nv],
            mult: vec![0; nv * nv],
            parallel: BTreeMap::new(),
            absent: nv * nv.saturating_sub(1) / 2,
            edges: 0,
        };
        // dart ids by edge in label order, lower endpoint's dart even
        let mut dart_of: BTreeMap<(u32, u32), Dart> = BTreeMap::new();
        for v in 0..nv as u32 {
            for &u in rs.row(v as usize) {
                if v < u {
                    let d = m.origin.len() as Dart;
                    m.origin.extend([v, u]);
                    dart_of.insert((v, u), d);
                    dart_of.insert((u, v), d + 1);
                    m.add_mult(v, u, 1);
                    m.edges += 1;
                }
            }
        }
        let nd = m.origin.len();
        m.next = vec![NONE; nd];
        m.prev = vec![NONE; nd];
        m.live = vec![true; nd];
        for v in 0..nv as u32 {
            let row = rs.row(v as usize);
            let len = row.len();
            for i in 0..len {
                let d = dart_of[&(v, row[i])];
                let e = dart_of[&(v, row[(i + 1) % len])];
                m.next[d as usize] = e;
                m.prev[e as usize] = d;
            }
            if len > 0 {
                m.anchor[v as usize] = dart_of[&(v, row[0])];
            }
        }
        m
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> VertexLabel {
        self.labels[v as usize]
    }

    pub fn index_of(&self, l: VertexLabel) -> Option<u32> {
        self.labels.iter().position(|&x| x == l).map(|i| i as u32)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn dart_capacity(&self) -> usize {
        self.origin.len()
    }

    pub fn is_live(&self, d: Dart) -> bool {
        (d as usize) < self.live.len() && self.live[d as usize]
    }

    pub fn origin(&self, d: Dart) -> u32 {
        self.origin[d as usize]
    }

    pub fn target(&self, d: Dart) -> u32 {
        self.origin[twin(d) as usize]
    }

    pub fn next(&self, d: Dart) -> Dart {
        self.next[d as usize]
    }

    pub fn prev(&self, d: Dart) -> Dart {
        self.prev[d as usize]
    }

    /// Face successor.
    pub fn phi(&self, d: Dart) -> Dart {
        self.next[twin(d) as usize]
    }

    /// Face predecessor.
    pub fn phi_inv(&self, d: Dart) -> Dart {
        twin(self.prev[d as usize])
    }

    pub fn multiplicity(&self, a: u32, b: u32) -> u32 {
        self.mult[a as usize * self.labels.len() + b as usize]
    }

    /// Number of vertex pairs with no edge.
    pub fn absent_pairs(&self) -> usize {
        self.absent
    }

    /// Pairs with more than one edge copy.
    pub fn parallel_pairs(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.parallel.iter().map(|(&k, &c)| (k, c))
    }

    /// Live darts out of `v` in rotation order, starting at its anchor.
    pub fn darts_at(&self, v: u32) -> Vec<Dart> {
        let start = self.anchor[v as usize];
        if start == NONE {
            return vec![];
        }
        let mut out = vec![start];
        let mut d = self.next[start as usize];
        while d != start {
            out.push(d);
            d = self.next[d as usize];
        }
        out
    }

    /// Live darts from `a` to `b`, in dart-id order.
    pub fn darts_between(&self, a: u32, b: u32) -> Vec<Dart> {
        let mut out: Vec<Dart> = self
            .darts_at(a)
            .into_iter()
            .filter(|&d| self.target(d) == b)
            .collect();
        out.sort_unstable();
        out
    }

    /// Darts of the face containing `d`, starting at `d`.
    pub fn face(&self, d: Dart) -> Vec<Dart> {
        let mut out = vec![d];
        let mut e = self.phi(d);
        while e != d {
            out.push(e);
            e = self.phi(e);
        }
        out
    }

    pub fn face_len(&self, d: Dart) -> usize {
        let mut len = 1;
        let mut e = self.phi(d);
        while e != d {
            len += 1;
            e = self.phi(e);
        }
        len
    }

    /// Every face as a dart cycle, each starting at its least dart.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = vec![false; self.origin.len()];
        let mut out = Vec::new();
        for d in 0..self.origin.len() as Dart {
            if !self.live[d as usize] || seen[d as usize] {
                continue;
            }
            let f = self.face(d);
            for &e in &f {
                seen[e as usize] = true;
            }
            out.push(f);
        }
        out
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.labels.len() as i64 - self.edges as i64 + self.face_count() as i64
    }

    /// Genus, assuming the map is connected.
    pub fn genus(&self) -> i64 {
        (2 - self.euler_characteristic()) / 2
    }

    pub fn all_triangles(&self) -> bool {
        self.faces().iter().all(|f| f.len() == 3)
    }

    fn push_pair(&mut self, a: u32, b: u32) -> Dart {
        let d = self.origin.len() as Dart;
        self.origin.extend([a, b]);
        self.next.extend([NONE, NONE]);
        self.prev.extend([NONE, NONE]);
        self.live.extend([true, true]);
        d
    }

    /// Links `d` into the rotation at its origin just before `before`.
    fn link_before(&mut self, d: Dart, before: Dart) {
        let p = self.prev[before as usize];
        self.next[p as usize] = d;
        self.prev[d as usize] = p;
        self.next[d as usize] = before;
        self.prev[before as usize] = d;
    }

    fn unlink(&mut self, d: Dart) {
        let v = self.origin[d as usize] as usize;
        let (p, n) = (self.prev[d as usize], self.next[d as usize]);
        if n == d {
            self.anchor[v] = NONE;
        } else {
            self.next[p as usize] = n;
            self.prev[n as usize] = p;
            if self.anchor[v] == d {
                self.anchor[v] = n;
            }
        }
    }

    fn add_mult(&mut self, a: u32, b: u32, delta: i32) {
        let nv = self.labels.len();
        let old = self.mult[a as usize * nv + b as usize];
        let new = (old as i32 + delta) as u32;
        self.mult[a as usize * nv + b as usize] = new;
        self.mult[b as usize * nv + a as usize] = new;
        match (old, new) {
            (0, _) => self.absent -= 1,
            (_, 0) => self.absent += 1,
            _ => {}
        }
        if new > 1 {
            self.parallel.insert(key(a, b), new);
        } else {
            self.parallel.remove(&key(a, b));
        }
    }

    /// Adds an edge between the origins of `b1` and `b2`, entering each
    /// rotation just before those darts. Returns the new dart leaving
    /// `origin(b1)`. If `b1` and `b2` lie in one face it is split in two;
    /// otherwise the two faces merge through a handle.
    pub fn insert_edge(&mut self, b1: Dart, b2: Dart) -> Dart {
        let (u, v) = (self.origin(b1), self.origin(b2));
        let c = self.push_pair(u, v);
        self.link_before(c, b1);
        self.link_before(twin(c), b2);
        self.add_mult(u, v, 1);
        self.edges += 1;
        c
    }

    /// Chord across one face; `b1`, `b2` are darts of that face leaving the
    /// chord's endpoints.
    pub fn insert_chord(&mut self, b1: Dart, b2: Dart) -> Result<Dart, MapError> {
        for d in [b1, b2] {
            if !self.is_live(d) {
                return Err(MapError::DeadDart(d));
            }
        }
        if !self.face(b1).contains(&b2) {
            return Err(MapError::ChordAcrossFaces);
        }
        if self.origin(b1) == self.origin(b2) {
            return Err(MapError::ChordLoop(self.label(self.origin(b1))));
        }
        Ok(self.insert_edge(b1, b2))
    }

    /// Adds one edge through a new handle joining the faces of `b1` and `b2`.
    pub fn merge_faces_with_handle(&mut self, b1: Dart, b2: Dart) -> Result<Dart, MapError> {
        for d in [b1, b2] {
            if !self.is_live(d) {
                return Err(MapError::DeadDart(d));
            }
        }
        if self.face(b1).contains(&b2) {
            return Err(MapError::SameFace);
        }
        Ok(self.insert_edge(b1, b2))
    }

    /// The quadrilateral around edge `d = a -> b`: returns `(c, dv)` where
    /// `a b c` and `b a dv` are the incident triangles.
    pub fn flip_quad(&self, d: Dart) -> Option<(u32, u32)> {
        if self.face_len(d) != 3 || self.face_len(twin(d)) != 3 {
            return None;
        }
        Some((self.target(self.phi(d)), self.target(self.phi(twin(d)))))
    }

    /// Replaces the edge of `d` by the other diagonal of its quadrilateral,
    /// reusing the same dart pair. Parallel copies are allowed.
    pub fn flip_multi(&mut self, d: Dart) -> Result<(), MapError> {
        if !self.is_live(d) {
            return Err(MapError::DeadDart(d));
        }
        let (a, b) = (self.origin(d), self.target(d));
        let (c, dv) = self
            .flip_quad(d)
            .ok_or(MapError::NotTriangles(self.label(a), self.label(b)))?;
        if c == dv {
            return Err(MapError::FlipLoop(self.label(a), self.label(b), self.label(c)));
        }
        let e1 = self.phi(d);
        let e2 = self.phi(e1);
        let f1 = self.phi(twin(d));
        let f2 = self.phi(f1);
        self.unlink(d);
        self.unlink(twin(d));
        self.add_mult(a, b, -1);
        self.origin[d as usize] = c;
        self.origin[twin(d) as usize] = dv;
        self.link_before(d, e2);
        self.link_before(twin(d), f2);
        self.add_mult(c, dv, 1);
        Ok(())
    }

    /// Flip that refuses to create a parallel edge.
    pub fn flip(&mut self, d: Dart) -> Result<(), MapError> {
        if let Some((c, dv)) = self.flip_quad(d) {
            if c != dv && self.multiplicity(c, dv) > 0 {
                return Err(MapError::FlipDuplicate {
                    a: self.label(self.origin(d)),
                    b: self.label(self.target(d)),
                    c: self.label(c),
                    d: self.label(dv),
                });
            }
        }
        self.flip_multi(d)
    }

    /// Handle at one vertex: with darts `b1, b2, b3` leaving `v` in rotation
    /// order, the rotation `S1 S2 S3` (segments starting at each dart) becomes
    /// `S1 S3 S2`. The three faces at the corners before the darts merge into
    /// one and the genus rises by one.
    pub fn handle_at_vertex(&mut self, b1: Dart, b2: Dart, b3: Dart) -> Result<(), MapError> {
        for d in [b1, b2, b3] {
            if !self.is_live(d) {
                return Err(MapError::DeadDart(d));
            }
        }
        let v = self.origin(b1);
        if self.origin(b2) != v || self.origin(b3) != v || b1 == b2 || b2 == b3 || b1 == b3 {
            return Err(MapError::BadHandleCorners);
        }
        let ring = self.darts_at(v);
        let pos = |d: Dart| ring.iter().position(|&x| x == d).unwrap();
        let (p1, p2, p3) = (pos(b1), pos(b2), pos(b3));
        let cyclic = (p1 < p2 && p2 < p3) || (p2 < p3 && p3 < p1) || (p3 < p1 && p1 < p2);
        if !cyclic {
            return Err(MapError::BadHandleCorners);
        }
        // the corner before b_i belongs to the face of b_i
        let f1 = self.face(b1);
        if f1.contains(&b2) || f1.contains(&b3) || self.face(b2).contains(&b3) {
            return Err(MapError::HandleFacesNotDistinct);
        }
        let (l1, l2, l3) = (self.prev(b2), self.prev(b3), self.prev(b1));
        self.next[l1 as usize] = b3;
        self.prev[b3 as usize] = l1;
        self.next[l3 as usize] = b2;
        self.prev[b2 as usize] = l3;
        self.next[l2 as usize] = b1;
        self.prev[b1 as usize] = l2;
        Ok(())
    }

    /// Back to a rotation system; fails while any pair has parallel edges.
    pub fn to_rotation_system(&self) -> Result<RotationSystem, MapError> {
        if let Some(((a, b), _)) = self.parallel_pairs().next() {
            return Err(MapError::Multigraph(self.label(a), self.label(b)));
        }
        let rows: Vec<Vec<u32>> = (0..self.labels.len() as u32)
            .map(|v| self.darts_at(v).into_iter().map(|d| self.target(d)).collect())
            .collect();
        Ok(RotationSystem::from_index_rows(self.order, self.letters.clone(), rows)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u32) -> VertexLabel {
        VertexLabel::Number(v)
    }

    fn k4() -> RotationSystem {
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

    #[test]
    fn round_trip() {
        let rs = k4();
        let m = DartMap::from_rotation_system(&rs);
        assert_eq!(m.face_count(), 4);
        assert_eq!(m.genus(), 0);
        assert_eq!(m.to_rotation_system().unwrap(), rs);
    }

    #[test]
    fn handle_between_two_triangles() {
        let mut m = DartMap::from_rotation_system(&k4());
        let faces = m.faces();
        // two faces not sharing a corner dart; the new edge joins their corners
        let (f1, f2) = (&faces[0], &faces[1]);
        let b1 = f1[0];
        let b2 = *f2.iter().find(|&&d| m.origin(d) != m.origin(b1)).unwrap();
        m.merge_faces_with_handle(b1, b2).unwrap();
        assert_eq!(m.face_count(), 3);
        assert_eq!(m.genus(), 1);
    }

    #[test]
    fn vertex_handle_merges_three_faces() {
        let mut m = DartMap::from_rotation_system(&k4());
        let ring = m.darts_at(3);
        m.handle_at_vertex(ring[0], ring[1], ring[2]).unwrap();
        assert_eq!(m.face_count(), 2);
        assert_eq!(m.genus(), 1);
        let long = m.faces().into_iter().map(|f| f.len()).max().unwrap();
        assert_eq!(long, 9);
    }
}
