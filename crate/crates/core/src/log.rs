//! Logs: the cyclic face record of an index-1 current graph.

use std::collections::BTreeSet;
use std::fmt;

use crate::label::VertexLabel;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LogError {
    #[error("bad log entry `{0}`")]
    BadEntry(String),
    #[error("element {0} is outside Z_{1}")]
    OutOfRange(u32, u32),
    #[error("the identity 0 cannot appear in a log")]
    Zero,
    #[error("element {0} appears more than once")]
    RepeatedElement(u32),
    #[error("letter {0} appears more than once")]
    RepeatedLetter(char),
    #[error("element {0} is missing")]
    MissingElement(u32),
}

/// Cyclic sequence of group elements of `Z_n` and vortex letters. Every
/// nonzero element occurs exactly once (the order-2 element condensed to a
/// single occurrence) and every letter at most once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Log {
    n: u32,
    entries: Vec<VertexLabel>,
}

impl Log {
    pub fn new(n: u32, entries: Vec<VertexLabel>) -> Result<Self, LogError> {
        let mut seen = vec![false; n as usize];
        let mut letters = BTreeSet::new();
        for &e in &entries {
            match e {
                VertexLabel::Number(0) => return Err(LogError::Zero),
                VertexLabel::Number(g) if g >= n => return Err(LogError::OutOfRange(g, n)),
                VertexLabel::Number(g) => {
                    if std::mem::replace(&mut seen[g as usize], true) {
                        return Err(LogError::RepeatedElement(g));
                    }
                }
                VertexLabel::Letter(c) => {
                    if !letters.insert(c) {
                        return Err(LogError::RepeatedLetter(c));
                    }
                }
            }
        }
        if let Some(g) = (1..n).find(|&g| !seen[g as usize]) {
            return Err(LogError::MissingElement(g));
        }
        Ok(Log { n, entries })
    }

    /// Parses whitespace-separated entries.
    pub fn parse(n: u32, text: &str) -> Result<Self, LogError> {
        let entries = text
            .split_whitespace()
            .map(|t| t.parse::<VertexLabel>().map_err(|_| LogError::BadEntry(t.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, entries)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &[VertexLabel] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Letters in order of appearance.
    pub fn letters(&self) -> Vec<char> {
        self.entries.iter().filter_map(|e| e.letter()).collect()
    }

    pub fn position(&self, e: VertexLabel) -> Option<usize> {
        self.entries.iter().position(|&x| x == e)
    }

    /// The same cyclic sequence read from index `start`.
    pub fn rotated(&self, start: usize) -> Log {
        let mut entries = self.entries.clone();
        if !entries.is_empty() {
            let len = entries.len();
            entries.rotate_left(start % len);
        }
        Log { n: self.n, entries }
    }

    /// Equality as cyclic sequences.
    pub fn cyclic_eq(&self, other: &Log) -> bool {
        if self.n != other.n || self.len() != other.len() {
            return false;
        }
        let Some(&first) = self.entries.first() else {
            return true;
        };
        match other.position(first) {
            Some(p) => other.rotated(p).entries == self.entries,
            None => false,
        }
    }

    /// Where `pattern` occurs as a cyclically contiguous run.
    pub fn find_cyclic(&self, pattern: &[VertexLabel]) -> Option<usize> {
        let len = self.entries.len();
        if pattern.is_empty() || pattern.len() > len {
            return None;
        }
        (0..len).find(|&i| {
            pattern
                .iter()
                .enumerate()
                .all(|(j, &p)| self.entries[(i + j) % len] == p)
        })
    }
}

impl fmt::Display for Log {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}
