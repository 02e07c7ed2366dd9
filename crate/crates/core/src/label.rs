//! Cell labels: sequences of `(level, L|U|X)` components such as `2U1L2X`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

/// Which side of a cell a point leaves it through, or which side of the
/// refined cell a sibling covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Lower,
    Upper,
}

/// Kind of a label component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// The refined cell containing the parent's sample.
    X,
    L,
    U,
}

impl Branch {
    pub fn letter(self) -> char {
        match self {
            Branch::X => 'X',
            Branch::L => 'L',
            Branch::U => 'U',
        }
    }
}

impl From<Side> for Branch {
    fn from(s: Side) -> Branch {
        match s {
            Side::Lower => Branch::L,
            Side::Upper => Branch::U,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LabelPart {
    pub level: usize,
    pub branch: Branch,
}

impl Ord for LabelPart {
    /// Children in the order Split emits them: the `X` child, then siblings
    /// by level with `L` before `U`.
    fn cmp(&self, other: &Self) -> Ordering {
        let key = |p: &LabelPart| (p.branch != Branch::X, p.level, p.branch);
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for LabelPart {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A node label. The root is the empty label. The derived order lists a
/// parent before its descendants, so a sorted map of labels is a preorder
/// traversal of the tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Vec<LabelPart>);

impl Label {
    pub fn root() -> Label {
        Label(Vec::new())
    }

    pub fn parts(&self) -> &[LabelPart] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, level: usize, branch: Branch) -> Label {
        let mut parts = self.0.clone();
        parts.push(LabelPart { level, branch });
        Label(parts)
    }

    pub fn parent(&self) -> Option<Label> {
        let (_, rest) = self.0.split_last()?;
        Some(Label(rest.to_vec()))
    }

    pub fn last(&self) -> Option<LabelPart> {
        self.0.last().copied()
    }

    pub fn ends_in_x(&self) -> bool {
        self.last().is_some_and(|p| p.branch == Branch::X)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}{}", p.level, p.branch.letter())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed label `{0}`")]
pub struct LabelError(pub alloc::string::String);

impl FromStr for Label {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Label, LabelError> {
        let err = || LabelError(s.into());
        let mut parts = Vec::new();
        let mut digits = 0usize;
        let mut level = 0usize;
        for c in s.chars() {
            match c {
                '0'..='9' => {
                    level = level
                        .checked_mul(10)
                        .and_then(|l| l.checked_add(c as usize - '0' as usize))
                        .ok_or_else(err)?;
                    digits += 1;
                }
                'L' | 'U' | 'X' if digits > 0 && level > 0 => {
                    let branch = match c {
                        'L' => Branch::L,
                        'U' => Branch::U,
                        _ => Branch::X,
                    };
                    parts.push(LabelPart { level, branch });
                    digits = 0;
                    level = 0;
                }
                _ => return Err(err()),
            }
        }
        if digits > 0 {
            return Err(err());
        }
        Ok(Label(parts))
    }
}
