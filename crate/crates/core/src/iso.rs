//! Isomorphisms between triangulations, found by propagating the image of a
//! single directed edge.

use rayon::prelude::*;

use crate::label::VertexLabel;
use crate::rotation::RotationSystem;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsoError {
    #[error("input {0} is not a triangulation")]
    NotTriangulation(usize),
    #[error("mixed vertex counts: {0} and {1}")]
    MixedVertexCounts(usize, usize),
    #[error("seed ({0}, {1}) is not a directed edge")]
    BadSeed(VertexLabel, VertexLabel),
}

/// A vertex bijection carrying one rotation system onto another, possibly
/// reversing every rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoMap {
    /// `map[v]` is the image of vertex index `v`.
    pub map: Vec<usize>,
    pub reversing: bool,
}

impl IsoMap {
    pub fn image(&self, source: &RotationSystem, target: &RotationSystem, v: VertexLabel) -> Option<VertexLabel> {
        source.index_of(v).map(|i| target.label(self.map[i]))
    }

    pub fn is_identity(&self) -> bool {
        !self.reversing && self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// Applies the map to `rs`; vertex indices of the result are those of the
    /// target rotation system, which must share `rs`'s vertex set layout.
    pub fn apply(&self, rs: &RotationSystem) -> RotationSystem {
        rs.relabeled(&self.map, self.reversing)
            .expect("a bijection preserves rotation-system validity")
    }
}

/// Extends `seed_src -> seed_dst` to a full isomorphism `t1 -> t2`, or returns
/// `None` when the propagation meets a contradiction.
pub fn try_extend_isomorphism(
    t1: &RotationSystem,
    t2: &RotationSystem,
    seed_src: (VertexLabel, VertexLabel),
    seed_dst: (VertexLabel, VertexLabel),
    reversing: bool,
) -> Result<Option<IsoMap>, IsoError> {
    if !t1.satisfies_rule_r_star() {
        return Err(IsoError::NotTriangulation(0));
    }
    if !t2.satisfies_rule_r_star() {
        return Err(IsoError::NotTriangulation(1));
    }
    let (a, b) = directed(t1, seed_src)?;
    let (c, d) = directed(t2, seed_dst)?;
    Ok(extend(t1, t2, (a, b), (c, d), reversing))
}

fn directed(t: &RotationSystem, e: (VertexLabel, VertexLabel)) -> Result<(usize, usize), IsoError> {
    match (t.index_of(e.0), t.index_of(e.1)) {
        (Some(a), Some(b)) if t.adjacent(a, b) => Ok((a, b)),
        _ => Err(IsoError::BadSeed(e.0, e.1)),
    }
}

/// Propagation over vertex rotations: once a vertex and the image of one of
/// its neighbors are fixed, its whole rotation maps rigidly.
pub(crate) fn extend(
    t1: &RotationSystem,
    t2: &RotationSystem,
    (a, b): (usize, usize),
    (c, d): (usize, usize),
    reversing: bool,
) -> Option<IsoMap> {
    let n = t1.vertex_count();
    if n != t2.vertex_count() || t1.edge_count() != t2.edge_count() {
        return None;
    }
    const UNSET: usize = usize::MAX;
    let mut map = vec![UNSET; n];
    let mut inv = vec![UNSET; n];
    let mut anchor = vec![UNSET; n];
    map[a] = c;
    inv[c] = a;
    anchor[a] = b;
    let bind = |map: &mut Vec<usize>, inv: &mut Vec<usize>, u: usize, img: usize| -> bool {
        if map[u] == UNSET && inv[img] == UNSET {
            map[u] = img;
            inv[img] = u;
            true
        } else {
            map[u] == img && inv[img] == u
        }
    };
    if !bind(&mut map, &mut inv, b, d) {
        return None;
    }
    let mut queue = std::collections::VecDeque::from([a]);
    let mut done = vec![false; n];
    while let Some(v) = queue.pop_front() {
        if done[v] {
            continue;
        }
        done[v] = true;
        let r = t1.row(v);
        let r2 = t2.row(map[v]);
        if r.len() != r2.len() {
            return None;
        }
        let u0 = anchor[v];
        let p = r.iter().position(|&u| u as usize == u0)?;
        let q = r2.iter().position(|&u| u as usize == map[u0])?;
        let len = r.len();
        for i in 0..len {
            let u = r[(p + i) % len] as usize;
            let img = if reversing {
                r2[(q + len - i) % len] as usize
            } else {
                r2[(q + i) % len] as usize
            };
            if !bind(&mut map, &mut inv, u, img) {
                return None;
            }
            if anchor[u] == UNSET {
                anchor[u] = v;
                queue.push_back(u);
            }
        }
    }
    if map.iter().any(|&m| m == UNSET) {
        return None;
    }
    Some(IsoMap { map, reversing })
}

/// Every automorphism of a triangulation, one per seed image of a fixed
/// directed edge and orientation flag.
pub fn automorphisms(t: &RotationSystem) -> Result<Vec<IsoMap>, IsoError> {
    if !t.satisfies_rule_r_star() {
        return Err(IsoError::NotTriangulation(0));
    }
    let Some(a) = (0..t.vertex_count()).find(|&v| t.degree(v) > 0) else {
        return Ok(vec![]);
    };
    let b = t.row(a)[0] as usize;
    let seeds = directed_edges(t);
    let mut out = Vec::new();
    for reversing in [false, true] {
        for &(c, d) in &seeds {
            if let Some(m) = extend(t, t, (a, b), (c, d), reversing) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

fn directed_edges(t: &RotationSystem) -> Vec<(usize, usize)> {
    (0..t.vertex_count())
        .flat_map(|v| t.row(v).iter().map(move |&u| (v, u as usize)))
        .collect()
}

/// True iff some seed and orientation flag extends to an isomorphism.
pub(crate) fn isomorphic(t1: &RotationSystem, t2: &RotationSystem) -> bool {
    if t1.vertex_count() != t2.vertex_count() || t1.edge_count() != t2.edge_count() {
        return false;
    }
    let mut d1: Vec<usize> = (0..t1.vertex_count()).map(|v| t1.degree(v)).collect();
    let mut d2: Vec<usize> = (0..t2.vertex_count()).map(|v| t2.degree(v)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    if d1 != d2 {
        return false;
    }
    let Some(a) = (0..t1.vertex_count()).find(|&v| t1.degree(v) > 0) else {
        return true;
    };
    let b = t1.row(a)[0] as usize;
    let seeds = directed_edges(t2);
    [false, true].iter().any(|&reversing| {
        seeds
            .par_iter()
            .any(|&(c, d)| extend(t1, t2, (a, b), (c, d), reversing).is_some())
    })
}

/// Number of isomorphism classes among `ts`, orientation-reversing maps
/// included.
pub fn count_isomorphism_classes(ts: &[RotationSystem]) -> Result<usize, IsoError> {
    for (i, t) in ts.iter().enumerate() {
        if t.vertex_count() != ts[0].vertex_count() {
            return Err(IsoError::MixedVertexCounts(ts[0].vertex_count(), t.vertex_count()));
        }
        if !t.satisfies_rule_r_star() {
            return Err(IsoError::NotTriangulation(i));
        }
    }
    let mut reps: Vec<&RotationSystem> = Vec::new();
    for t in ts {
        if !reps.iter().any(|r| isomorphic(t, r)) {
            reps.push(t);
        }
    }
    Ok(reps.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u32) -> VertexLabel {
        VertexLabel::Number(v)
    }

    fn k7() -> RotationSystem {
        let base = [1u32, 3, 2, 6, 4, 5];
        RotationSystem::from_rows(
            7,
            &[],
            (0..7).map(|k| (n(k), base.iter().map(|&g| n((g + k) % 7)).collect())),
        )
        .unwrap()
    }

    #[test]
    fn identity_seed_gives_identity() {
        let t = k7();
        let m = try_extend_isomorphism(&t, &t, (n(0), n(1)), (n(0), n(1)), false)
            .unwrap()
            .unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn shift_is_an_automorphism() {
        let t = k7();
        let m = try_extend_isomorphism(&t, &t, (n(0), n(1)), (n(1), n(2)), false)
            .unwrap()
            .unwrap();
        for v in 0..7 {
            assert_eq!(m.map[v], (v + 1) % 7);
        }
        assert_eq!(m.apply(&t), t);
    }

    #[test]
    fn k7_automorphism_group() {
        // the torus K_7 is a regular chiral map: orientation-preserving
        // automorphisms act regularly on its 42 darts, none reverse
        let auts = automorphisms(&k7()).unwrap();
        assert_eq!(auts.len(), 42);
        assert!(auts.iter().all(|a| !a.reversing));
        for a in &auts {
            assert_eq!(a.apply(&k7()), k7());
        }
    }

    #[test]
    fn class_counts() {
        let t = k7();
        let shifted = IsoMap { map: (0..7).map(|v| (v + 3) % 7).collect(), reversing: false }.apply(&t);
        assert_eq!(count_isomorphism_classes(&[t.clone(), t.clone()]).unwrap(), 1);
        assert_eq!(count_isomorphism_classes(&[t.clone(), shifted]).unwrap(), 1);
        let mirror = IsoMap { map: (0..7).collect(), reversing: true }.apply(&t);
        assert_eq!(count_isomorphism_classes(&[t, mirror]).unwrap(), 1);
    }

    #[test]
    fn non_triangulation_rejected() {
        let path = RotationSystem::from_rows(
            3,
            &[],
            [(n(0), vec![n(1)]), (n(1), vec![n(0), n(2)]), (n(2), vec![n(1)])],
        )
        .unwrap();
        assert_eq!(
            try_extend_isomorphism(&path, &path, (n(0), n(1)), (n(0), n(1)), false),
            Err(IsoError::NotTriangulation(0))
        );
    }
}
