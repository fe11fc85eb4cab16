use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which half of an open-closed pair a space or letter belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Closed,
    Open,
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sector::Closed => write!(f, "closed"),
            Sector::Open => write!(f, "open"),
        }
    }
}

/// Sector tag of a space; plain spaces behave like open ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorTag {
    Closed,
    Open,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: i32,
}

/// Finite graded basis. Basis elements are stored sorted by `(degree, name)`,
/// so basis indices are also the canonical order used for symmetric keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    tag: SectorTag,
    basis: Vec<BasisElement>,
    degrees: Vec<i32>,
    index: BTreeMap<String, usize>,
}

impl GradedSpace {
    pub fn new<S: Into<String>>(tag: SectorTag, basis: impl IntoIterator<Item = (S, i32)>) -> Result<Self> {
        let mut elems: Vec<BasisElement> =
            basis.into_iter().map(|(n, d)| BasisElement { name: n.into(), degree: d }).collect();
        elems.sort_by(|a, b| (a.degree, &a.name).cmp(&(b.degree, &b.name)));
        let mut index = BTreeMap::new();
        for (i, e) in elems.iter().enumerate() {
            if e.name.is_empty() {
                return Err(Error::Invalid("empty basis name".into()));
            }
            if index.insert(e.name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate basis name `{}`", e.name)));
            }
        }
        let degrees = elems.iter().map(|e| e.degree).collect();
        Ok(GradedSpace { tag, basis: elems, degrees, index })
    }

    pub fn empty(tag: SectorTag) -> Self {
        GradedSpace { tag, basis: Vec::new(), degrees: Vec::new(), index: BTreeMap::new() }
    }

    pub fn tag(&self) -> SectorTag {
        self.tag
    }

    pub fn with_tag(&self, tag: SectorTag) -> Self {
        GradedSpace { tag, ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    /// Indices of basis elements of degree `d`.
    pub fn of_degree(&self, d: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    /// Distinct degrees present, ascending.
    pub fn degree_range(&self) -> Vec<i32> {
        let mut ds: Vec<i32> = self.degrees.clone();
        ds.dedup();
        ds
    }
}

/// Copy of `space` with every degree shifted by `shift` (`-1` desuspends).
pub fn suspension_shift(space: &GradedSpace, shift: i32) -> GradedSpace {
    let basis: Vec<(String, i32)> = space.basis.iter().map(|e| (e.name.clone(), e.degree + shift)).collect();
    GradedSpace::new(space.tag, basis).expect("shift preserves uniqueness")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_sorted_by_degree_then_name() {
        let s = GradedSpace::new(SectorTag::Plain, [("y", 1), ("x", 1), ("a", 0)]).unwrap();
        let names: Vec<_> = s.basis().iter().map(|b| b.name.as_str()).collect();
        assert_eq!(names, ["a", "x", "y"]);
        assert_eq!(s.lookup("y").unwrap(), 2);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(GradedSpace::new(SectorTag::Plain, [("x", 1), ("x", 2)]).is_err());
    }

    #[test]
    fn shift_examples() {
        let s = GradedSpace::new(SectorTag::Closed, [("c", 3), ("d", 0)]).unwrap();
        assert_eq!(suspension_shift(&s, 0), s);
        let down = suspension_shift(&s, -1);
        assert_eq!(down.degree(down.lookup("c").unwrap()), 2);
        let down2 = suspension_shift(&s, -2);
        assert_eq!(down2.degree(down2.lookup("d").unwrap()), -2);
    }
}
