//! Vertex labels shared by rotation systems, logs and current graphs.

use std::fmt;
use std::str::FromStr;

/// A vertex of a derived graph: either a group element or a vortex letter.
///
/// The derived ordering puts every number before every letter, numbers
/// ascending and letters alphabetically. Canonical rotation starts and
/// serialization rely on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexLabel {
    Number(u32),
    Letter(char),
}

impl VertexLabel {
    pub fn number(self) -> Option<u32> {
        match self {
            VertexLabel::Number(v) => Some(v),
            VertexLabel::Letter(_) => None,
        }
    }

    pub fn letter(self) -> Option<char> {
        match self {
            VertexLabel::Letter(c) => Some(c),
            VertexLabel::Number(_) => None,
        }
    }

    pub fn is_letter(self) -> bool {
        matches!(self, VertexLabel::Letter(_))
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Number(v) => write!(f, "{v}"),
            VertexLabel::Letter(c) => write!(f, "{c}"),
        }
    }
}

impl From<u32> for VertexLabel {
    fn from(v: u32) -> Self {
        VertexLabel::Number(v)
    }
}

impl From<char> for VertexLabel {
    fn from(c: char) -> Self {
        VertexLabel::Letter(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid vertex label `{0}`")]
pub struct LabelParseError(pub String);

impl FromStr for VertexLabel {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_lowercase() => Ok(VertexLabel::Letter(c)),
            _ => s
                .parse::<u32>()
                .map(VertexLabel::Number)
                .map_err(|_| LabelParseError(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_sort_before_letters() {
        let mut v = vec![
            VertexLabel::Letter('x'),
            VertexLabel::Number(31),
            VertexLabel::Letter('w'),
            VertexLabel::Number(0),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                VertexLabel::Number(0),
                VertexLabel::Number(31),
                VertexLabel::Letter('w'),
                VertexLabel::Letter('x'),
            ]
        );
    }

    #[test]
    fn parse_labels() {
        assert_eq!("17".parse::<VertexLabel>(), Ok(VertexLabel::Number(17)));
        assert_eq!("z".parse::<VertexLabel>(), Ok(VertexLabel::Letter('z')));
        assert!("xy".parse::<VertexLabel>().is_err());
        assert!("-3".parse::<VertexLabel>().is_err());
        assert!("X".parse::<VertexLabel>().is_err());
    }
}
