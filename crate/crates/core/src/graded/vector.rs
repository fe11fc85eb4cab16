use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graded::ring::{Ring, Scalar};
use crate::graded::space::{GradedSpace, Sector};

/// Sparse coefficient vector over basis indices. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<R: Ring = Scalar> {
    entries: BTreeMap<usize, R>,
}

impl<R: Ring> Default for Vector<R> {
    fn default() -> Self {
        Vector { entries: BTreeMap::new() }
    }
}

impl<R: Ring> Vector<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, R::one())
    }

    pub fn term(i: usize, c: R) -> Self {
        let mut v = Self::zero();
        v.add_term(i, c);
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, R)>) -> Self {
        let mut v = Self::zero();
        for (i, c) in pairs {
            v.add_term(i, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> R {
        self.entries.get(&i).cloned().unwrap_or_else(R::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &R)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn add_term(&mut self, i: usize, c: R) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&i) {
            Some(e) => {
                *e = e.plus(&c);
                if e.is_zero() {
                    self.entries.remove(&i);
                }
            }
            None => {
                self.entries.insert(i, c);
            }
        }
    }

    /// `self += coeff · other`.
    pub fn add_scaled(&mut self, other: &Vector<R>, coeff: &R) {
        if coeff.is_zero() {
            return;
        }
        for (i, c) in other.iter() {
            self.add_term(i, c.times(coeff));
        }
    }

    pub fn add(&mut self, other: &Vector<R>) {
        for (i, c) in other.iter() {
            self.add_term(i, c.clone());
        }
    }

    pub fn scaled(&self, coeff: &R) -> Vector<R> {
        let mut out = Vector::zero();
        out.add_scaled(self, coeff);
        out
    }

    pub fn negated(&self) -> Vector<R> {
        Vector { entries: self.entries.iter().map(|(i, c)| (*i, c.negated())).collect() }
    }

    pub fn signed(&self, parity: i64) -> Vector<R> {
        if parity.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.negated()
        }
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> Vector<S> {
        Vector::from_pairs(self.iter().map(|(i, c)| (i, f(c))))
    }

    /// Common degree of the support, `None` for zero, error if mixed.
    pub fn degree_in(&self, degrees: &[i32]) -> Result<Option<i32>> {
        let mut deg = None;
        for i in self.support() {
            match deg {
                None => deg = Some(degrees[i]),
                Some(d) if d != degrees[i] => return Err(Error::Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }
}

impl<R: Ring> FromIterator<(usize, R)> for Vector<R> {
    fn from_iter<T: IntoIterator<Item = (usize, R)>>(iter: T) -> Self {
        Vector::from_pairs(iter)
    }
}

/// Homogeneous element of one sector of a graded space.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<R: Ring = Scalar> {
    pub sector: Sector,
    pub degree: i32,
    pub coeffs: Vector<R>,
}

impl<R: Ring> Element<R> {
    /// Checks homogeneity against `space`.
    pub fn new(space: &GradedSpace, sector: Sector, degree: i32, coeffs: Vector<R>) -> Result<Self> {
        for i in coeffs.support() {
            if i >= space.dim() {
                return Err(Error::Invalid(format!("basis index {i} out of range")));
            }
            if space.degree(i) != degree {
                return Err(Error::Inhomogeneous);
            }
        }
        Ok(Element { sector, degree, coeffs })
    }

    pub fn basis(space: &GradedSpace, sector: Sector, i: usize) -> Self {
        Element { sector, degree: space.degree(i), coeffs: Vector::basis(i) }
    }

    pub fn named(space: &GradedSpace, sector: Sector, pairs: &[(&str, R)]) -> Result<Self> {
        let mut coeffs = Vector::zero();
        let mut degree = None;
        for (name, c) in pairs {
            let i = space.lookup(name)?;
            match degree {
                None => degree = Some(space.degree(i)),
                Some(d) if d != space.degree(i) => return Err(Error::Inhomogeneous),
                _ => {}
            }
            coeffs.add_term(i, c.clone());
        }
        Ok(Element { sector, degree: degree.unwrap_or(0), coeffs })
    }

    pub fn zero(sector: Sector, degree: i32) -> Self {
        Element { sector, degree, coeffs: Vector::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn scaled(&self, c: &R) -> Self {
        Element { coeffs: self.coeffs.scaled(c), ..self.clone() }
    }

    /// Sum of two elements of the same sector and degree (a zero summand
    /// adopts the other's degree).
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.sector != other.sector {
            return Err(Error::Invalid("sector mismatch".into()));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if !other.is_zero() && self.degree != other.degree {
            return Err(Error::Inhomogeneous);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.add(&other.coeffs);
        Ok(Element { sector: self.sector, degree: self.degree, coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::ring::int;
    use crate::graded::space::SectorTag;

    #[test]
    fn cancellation_removes_entries() {
        let mut v: Vector = Vector::basis(3);
        v.add_term(3, int(-1));
        assert!(v.is_zero());
    }

    #[test]
    fn inhomogeneous_elements_rejected() {
        let s = GradedSpace::new(SectorTag::Plain, [("a", 0), ("b", 1)]).unwrap();
        let v: Vector = Vector::from_pairs([(0, int(1)), (1, int(1))]);
        assert_eq!(Element::new(&s, Sector::Open, 0, v).unwrap_err(), Error::Inhomogeneous);
    }
}
