//! Derived embeddings: expanding a log (or the four logs of an index-4
//! construction) into the rotation system of the derived graph.

use crate::label::VertexLabel;
use crate::log::Log;
use crate::rotation::{EmbeddingError, RotationSystem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerivationError {
    #[error("letter {letter}: the manufactured rotation closes after {cycle_len} of {n} vertices")]
    ShortCycle { letter: char, cycle_len: usize, n: u32 },
    #[error("letter {0} is missing from row {1}")]
    LetterMissing(char, u32),
    #[error("letter {letter}: vertex {vertex} would follow two different vertices")]
    NotAPermutation { letter: char, vertex: u32 },
    #[error("swap pair and fixed letters must partition the log's letters")]
    BadLetterPartition,
    #[error("group order must be even, got {0}")]
    OddOrder(u32),
    #[error("index-4 row {row} has {len} entries, expected {expected}")]
    RowLength { row: usize, len: usize, expected: usize },
    #[error("index-4 expansion needs n divisible by 4, got {0}")]
    NotDivisibleByFour(u32),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}

/// What to derive: a log plus which letters trade places on odd shifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpec {
    pub log: Log,
    pub swap_pair: Option<(char, char)>,
    pub fixed_letters: Vec<char>,
}

impl DerivationSpec {
    /// The main-family convention: `x` and `z` swap, every other letter stays.
    pub fn new(log: Log) -> Self {
        let letters = log.letters();
        let swap_pair = (letters.contains(&'x') && letters.contains(&'z')).then_some(('x', 'z'));
        let fixed_letters = letters
            .into_iter()
            .filter(|&c| swap_pair.map_or(true, |(a, b)| c != a && c != b))
            .collect();
        DerivationSpec { log, swap_pair, fixed_letters }
    }
}

/// The numbered rows `0..n` of the derived rotation system as label lists.
pub fn numbered_rows(spec: &DerivationSpec) -> Vec<Vec<VertexLabel>> {
    let n = spec.log.n();
    (0..n)
        .map(|k| {
            spec.log
                .entries()
                .iter()
                .map(|&e| match e {
                    VertexLabel::Number(g) => VertexLabel::Number((g + k) % n),
                    VertexLabel::Letter(c) => VertexLabel::Letter(match spec.swap_pair {
                        Some((a, b)) if k % 2 == 1 && c == a => b,
                        Some((a, b)) if k % 2 == 1 && c == b => a,
                        _ => c,
                    }),
                })
                .collect()
        })
        .collect()
}

/// Rotation at a lettered vertex forced by Rule R*: when row `k` reads
/// `.. a L b ..`, the rotation at `L` reads `.. b k a ..`. Starts at 0.
pub fn manufacture_letter_rotation(
    rows: &[Vec<VertexLabel>],
    letter: char,
) -> Result<Vec<u32>, DerivationError> {
    let n = rows.len() as u32;
    let target = VertexLabel::Letter(letter);
    let mut next = vec![u32::MAX; rows.len()];
    let mut has_pred = vec![false; rows.len()];
    for (k, row) in rows.iter().enumerate() {
        let p = row
            .iter()
            .position(|&e| e == target)
            .ok_or(DerivationError::LetterMissing(letter, k as u32))?;
        let before = row[(p + row.len() - 1) % row.len()];
        let Some(a) = before.number() else {
            return Err(DerivationError::NotAPermutation { letter, vertex: k as u32 });
        };
        if std::mem::replace(&mut has_pred[a as usize], true) {
            return Err(DerivationError::NotAPermutation { letter, vertex: a });
        }
        next[k] = a;
    }
    let mut cycle = vec![0u32];
    let mut v = next[0];
    while v != 0 {
        cycle.push(v);
        v = next[v as usize];
    }
    if cycle.len() != rows.len() {
        return Err(DerivationError::ShortCycle { letter, cycle_len: cycle.len(), n });
    }
    Ok(cycle)
}

/// Expands a log into the derived rotation system on `Z_n` plus the log's
/// letters.
pub fn derive_rotation_system(spec: &DerivationSpec) -> Result<RotationSystem, DerivationError> {
    let n = spec.log.n();
    if n % 2 != 0 && spec.swap_pair.is_some() {
        return Err(DerivationError::OddOrder(n));
    }
    let mut letters = spec.log.letters();
    let mut declared: Vec<char> = spec.fixed_letters.clone();
    if let Some((a, b)) = spec.swap_pair {
        declared.extend([a, b]);
    }
    declared.sort_unstable();
    letters.sort_unstable();
    if declared != letters {
        return Err(DerivationError::BadLetterPartition);
    }
    let rows = numbered_rows(spec);
    let mut all: Vec<(VertexLabel, Vec<VertexLabel>)> = Vec::new();
    for &c in &letters {
        let cyc = manufacture_letter_rotation(&rows, c)?;
        all.push((VertexLabel::Letter(c), cyc.into_iter().map(VertexLabel::Number).collect()));
    }
    for (k, row) in rows.into_iter().enumerate() {
        all.push((VertexLabel::Number(k as u32), row));
    }
    Ok(RotationSystem::from_rows(n, &letters, all)?)
}

/// Row-shift covariance of a derived system: every even row is row 0 shifted,
/// every odd row is row 1 shifted, with `swap` exchanged between parities.
pub fn check_row_shift_covariance(rs: &RotationSystem, swap: Option<(char, char)>) -> bool {
    let n = rs.order();
    let rotation = |k: u32| rs.rotation(VertexLabel::Number(k)).unwrap();
    let shifted = |row: &[VertexLabel], by: u32, flip: bool| -> Vec<VertexLabel> {
        row.iter()
            .map(|&e| match e {
                VertexLabel::Number(g) => VertexLabel::Number((g + by) % n),
                VertexLabel::Letter(c) => VertexLabel::Letter(match swap {
                    Some((a, b)) if flip && c == a => b,
                    Some((a, b)) if flip && c == b => a,
                    _ => c,
                }),
            })
            .collect()
    };
    let cyclic_eq = |a: &[VertexLabel], b: &[VertexLabel]| {
        a.len() == b.len()
            && (a.is_empty() || b.iter().position(|&x| x == a[0]).is_some_and(|p| {
                (0..a.len()).all(|i| a[i] == b[(p + i) % b.len()])
            }))
    };
    let r0 = rotation(0);
    let r1 = rotation(1 % n);
    (0..n).all(|k| {
        let row = rotation(k);
        let from_zero = cyclic_eq(&shifted(&r0, k, k % 2 == 1), &row);
        let from_parity = if k % 2 == 0 {
            from_zero
        } else {
            cyclic_eq(&shifted(&r1, k - 1, false), &row)
        };
        from_zero && from_parity
    })
}

/// Index-4 expansion: the rotation at `k` is `rows[k mod 4]` with `k` added
/// to every entry.
pub fn expand_index4(rows: &[Vec<u32>; 4], n: u32) -> Result<RotationSystem, DerivationError> {
    if n % 4 != 0 {
        return Err(DerivationError::NotDivisibleByFour(n));
    }
    let expected = n as usize - 1;
    for (i, r) in rows.iter().enumerate() {
        if r.len() != expected {
            return Err(DerivationError::RowLength { row: i, len: r.len(), expected });
        }
    }
    let all = (0..n).map(|k| {
        (
            VertexLabel::Number(k),
            rows[(k % 4) as usize]
                .iter()
                .map(|&g| VertexLabel::Number((g + k) % n))
                .collect(),
        )
    });
    Ok(RotationSystem::from_rows(n, &[], all)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k7_from_its_log() {
        let spec = DerivationSpec::new(Log::parse(7, "1 3 2 6 4 5").unwrap());
        let rs = derive_rotation_system(&spec).unwrap();
        assert!(rs.satisfies_rule_r_star());
        assert!(rs.check_complete_minus(7, &[]));
        assert_eq!(rs.euler_genus().unwrap(), 1);
    }

    #[test]
    fn manufactured_rotation_follows_rule_r_star() {
        // three rows over Z_3 with a letter spliced in: row k reads (k+1) L (k+2)
        let rows: Vec<Vec<VertexLabel>> = (0..3u32)
            .map(|k| vec![VertexLabel::Number((k + 1) % 3), VertexLabel::Letter('y'), VertexLabel::Number((k + 2) % 3)])
            .collect();
        // row k gives `.. (k+2) k (k+1) ..`, so k is followed by k+1
        assert_eq!(manufacture_letter_rotation(&rows, 'y').unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn index4_rejects_bad_lengths() {
        let rows = [vec![1, 2], vec![1, 2, 3], vec![1, 2, 3], vec![1, 2, 3]];
        assert_eq!(
            expand_index4(&rows, 4),
            Err(DerivationError::RowLength { row: 0, len: 2, expected: 3 })
        );
        assert_eq!(expand_index4(&rows, 6), Err(DerivationError::NotDivisibleByFour(6)));
    }
}
