use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::multimap::{check_symmetry, MultiMap};
use crate::graded::ring::{Ring, Scalar};
use crate::graded::space::{GradedSpace, Sector};
use crate::graded::vector::Vector;

/// Degree tables of a closed and an open space.
#[derive(Clone, Copy, Debug)]
pub struct Degrees<'a> {
    pub closed: &'a [i32],
    pub open: &'a [i32],
}

impl<'a> Degrees<'a> {
    pub fn new(closed: &'a GradedSpace, open: &'a GradedSpace) -> Self {
        Degrees { closed: closed.degrees(), open: open.degrees() }
    }

    pub fn closed_sum(&self, letters: &[usize]) -> i64 {
        letters.iter().map(|&c| self.closed[c] as i64).sum()
    }

    pub fn open_sum(&self, letters: &[usize]) -> i64 {
        letters.iter().map(|&o| self.open[o] as i64).sum()
    }
}

/// Value of a family on one input: a closed part and an open part.
#[derive(Clone, Debug, PartialEq)]
pub struct Corolla<R: Ring = Scalar> {
    pub closed: Vector<R>,
    pub open: Vector<R>,
}

impl<R: Ring> Corolla<R> {
    pub fn zero() -> Self {
        Corolla { closed: Vector::zero(), open: Vector::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.closed.is_zero() && self.open.is_zero()
    }

    pub fn add_scaled(&mut self, other: &Corolla<R>, c: &R) {
        self.closed.add_scaled(&other.closed, c);
        self.open.add_scaled(&other.open, c);
    }

    pub fn sector(&self, sector: Sector) -> &Vector<R> {
        match sector {
            Sector::Closed => &self.closed,
            Sector::Open => &self.open,
        }
    }
}

/// A family of multilinear maps of one common degree: closed-output maps
/// `f_k: Hc^{⊗k} → Hc′` keyed by `k` and open-output maps
/// `f_{p,q}: Hc^{⊗p} ⊗ Ho^{⊗q} → Ho′` keyed by `(p, q)`.
///
/// Structure maps `l_k`, `n_{p,q}` (degree 1) and morphism components
/// (degree 0) are both stored this way; an A∞ family only uses `(0, q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MapFamily<R: Ring = Scalar> {
    pub degree: i32,
    pub closed: BTreeMap<usize, MultiMap<R>>,
    pub open: BTreeMap<(usize, usize), MultiMap<R>>,
}

impl<R: Ring> MapFamily<R> {
    pub fn new(degree: i32) -> Self {
        MapFamily { degree, closed: BTreeMap::new(), open: BTreeMap::new() }
    }

    pub fn closed_map(&self, k: usize) -> Option<&MultiMap<R>> {
        self.closed.get(&k)
    }

    pub fn open_map(&self, p: usize, q: usize) -> Option<&MultiMap<R>> {
        self.open.get(&(p, q))
    }

    /// The closed map of arity `k`, created empty if absent.
    pub fn closed_mut(&mut self, k: usize) -> &mut MultiMap<R> {
        let degree = self.degree;
        self.closed.entry(k).or_insert_with(|| MultiMap::new(k, 0, Sector::Closed, degree))
    }

    pub fn open_mut(&mut self, p: usize, q: usize) -> &mut MultiMap<R> {
        let degree = self.degree;
        self.open.entry((p, q)).or_insert_with(|| MultiMap::new(p, q, Sector::Open, degree))
    }

    pub fn set_closed(&mut self, k: usize, map: MultiMap<R>) {
        self.closed.insert(k, map);
    }

    pub fn set_open(&mut self, p: usize, q: usize, map: MultiMap<R>) {
        self.open.insert((p, q), map);
    }

    /// Drops maps with empty tables.
    pub fn pruned(mut self) -> Self {
        self.closed.retain(|_, m| !m.is_zero());
        self.open.retain(|_, m| !m.is_zero());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.closed.values().all(MultiMap::is_zero) && self.open.values().all(MultiMap::is_zero)
    }

    /// Evaluates the family on basis letters (closed block canonicalized).
    pub fn corolla(&self, closed: &[usize], open: &[usize], closed_degrees: &[i32]) -> Corolla<R> {
        let mut out = Corolla::zero();
        if open.is_empty() {
            if let Some(m) = self.closed_map(closed.len()) {
                out.closed = m.on_basis(closed, &[], closed_degrees);
            }
        }
        if let Some(m) = self.open_map(closed.len(), open.len()) {
            out.open = m.on_basis(closed, open, closed_degrees);
        }
        out
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S + Copy) -> MapFamily<S> {
        MapFamily {
            degree: self.degree,
            closed: self.closed.iter().map(|(k, m)| (*k, m.map_coeffs(f))).collect(),
            open: self.open.iter().map(|(k, m)| (*k, m.map_coeffs(f))).collect(),
        }
    }

    pub fn scaled(&self, c: &R) -> Self {
        MapFamily {
            degree: self.degree,
            closed: self.closed.iter().map(|(k, m)| (*k, m.scaled(c))).collect(),
            open: self.open.iter().map(|(k, m)| (*k, m.scaled(c))).collect(),
        }
    }

    /// Componentwise sum; degrees must agree.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "family degrees differ");
        let mut out = self.clone();
        for (k, m) in &other.closed {
            let merged = match out.closed.get(k) {
                Some(mine) => mine.plus(m),
                None => m.clone(),
            };
            out.closed.insert(*k, merged);
        }
        for (k, m) in &other.open {
            let merged = match out.open.get(k) {
                Some(mine) => mine.plus(m),
                None => m.clone(),
            };
            out.open.insert(*k, merged);
        }
        out
    }

    /// Largest total arity present.
    pub fn max_arity(&self) -> usize {
        let c = self.closed.keys().copied().max().unwrap_or(0);
        let o = self.open.keys().map(|(p, q)| p + q).max().unwrap_or(0);
        c.max(o)
    }

    /// Checks table degrees against source and target spaces and graded
    /// symmetry of every closed block.
    pub fn validate(&self, source: Degrees<'_>, target: Degrees<'_>) -> Result<()> {
        for (k, m) in &self.closed {
            if m.closed_arity != *k || m.open_arity != 0 || m.output != Sector::Closed {
                return Err(Error::Arity(format!("closed map stored under arity {k} has the wrong signature")));
            }
            check_map(m, source, target.closed, &format!("closed map of arity {k}"))?;
        }
        for (&(p, q), m) in &self.open {
            if m.closed_arity != p || m.open_arity != q || m.output != Sector::Open {
                return Err(Error::Arity(format!("open map stored under ({p},{q}) has the wrong signature")));
            }
            check_map(m, source, target.open, &format!("open map ({p},{q})"))?;
        }
        Ok(())
    }
}

fn check_map<R: Ring>(m: &MultiMap<R>, source: Degrees<'_>, target: &[i32], what: &str) -> Result<()> {
    m.validate_degrees(source.closed, source.open, target)
        .map_err(|e| Error::Degree(format!("{what}: {e}")))?;
    if !check_symmetry(m, source.closed) {
        return Err(Error::Invalid(format!("{what} is not graded symmetric in its closed inputs")));
    }
    Ok(())
}
