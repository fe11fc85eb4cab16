//! A∞, L∞ and open-closed homotopy algebras, their morphisms, and the
//! checkers for their defining relations.

pub mod adjoint;
pub mod cohomology;
pub mod cyclic;
pub mod leibniz;
pub mod morphism;
pub mod relations;
#[cfg(test)]
pub(crate) mod testing;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coalgebra::{lift_coderivation, CoderivationView, Word};
use crate::error::{Error, Result};
use crate::graded::{Degrees, GradedSpace, MapFamily, MultiMap, Ring, Scalar, Sector, SectorTag, Vector};

pub use adjoint::{adjoint_l_infinity_map, rho_chain_defects, AdjointMap};
pub use cohomology::{cohomology, hodge_decompose_custom, Contraction, SectorContraction};
pub use cyclic::{
    check_cyclicity, cyclic_tensors, dual_round_trip, dualize_to_r, CyclicTensor, DualMaps, Pairing, SymplecticPair, TensorKind,
};
pub use leibniz::{from_leibniz_pair, BilinearTable, DgAssociative, DgLie, LeibnizPair, LinearTable};
pub use morphism::{
    check_morphism, check_morphism_coalgebra, check_quasi_isomorphism, compose, identity_morphism, OchaMorphism,
};
pub use relations::{
    check_a_infinity, check_codifferential, check_l_infinity, check_ocha, check_sh_derivation,
    check_sh_derivation_bracket, check_sh_module,
};

/// Which of the three theories a structure is meant to model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    #[serde(rename = "ainf")]
    AInfinity,
    #[serde(rename = "linf")]
    LInfinity,
    Ocha,
}

/// An OCHA `(Hc, Ho, 𝔩, 𝔫)`: closed maps `l_k` and open maps `n_{p,q}`, all
/// of degree one. An A∞-algebra is the case `Hc = 0` (with `m_k = n_{0,k}`),
/// an L∞-algebra the case `Ho = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct OchaStructure<R: Ring = Scalar> {
    pub closed: GradedSpace,
    pub open: GradedSpace,
    pub maps: MapFamily<R>,
    pub weak: bool,
    pub bound: usize,
}

impl<R: Ring> OchaStructure<R> {
    pub fn new(closed: GradedSpace, open: GradedSpace, bound: usize) -> Self {
        OchaStructure {
            closed: closed.with_tag(SectorTag::Closed),
            open: open.with_tag(SectorTag::Open),
            maps: MapFamily::new(1),
            weak: false,
            bound,
        }
    }

    pub fn a_infinity(space: GradedSpace, bound: usize) -> Self {
        Self::new(GradedSpace::empty(SectorTag::Closed), space, bound)
    }

    pub fn l_infinity(space: GradedSpace, bound: usize) -> Self {
        Self::new(space, GradedSpace::empty(SectorTag::Open), bound)
    }

    pub fn kind(&self) -> Kind {
        match (self.closed.is_empty(), self.open.is_empty()) {
            (true, false) => Kind::AInfinity,
            (false, true) => Kind::LInfinity,
            _ => Kind::Ocha,
        }
    }

    pub fn degrees(&self) -> Degrees<'_> {
        Degrees::new(&self.closed, &self.open)
    }

    pub fn l(&self, k: usize) -> Option<&MultiMap<R>> {
        self.maps.closed_map(k)
    }

    pub fn n(&self, p: usize, q: usize) -> Option<&MultiMap<R>> {
        self.maps.open_map(p, q)
    }

    pub fn l_mut(&mut self, k: usize) -> &mut MultiMap<R> {
        self.maps.closed_mut(k)
    }

    pub fn n_mut(&mut self, p: usize, q: usize) -> &mut MultiMap<R> {
        self.maps.open_mut(p, q)
    }

    /// `m_k = n_{0,k}`.
    pub fn m_mut(&mut self, k: usize) -> &mut MultiMap<R> {
        self.maps.open_mut(0, k)
    }

    /// Inserts `value` at named inputs of `l_k`.
    pub fn set_l(&mut self, inputs: &[&str], output: &[(&str, R)]) -> Result<()> {
        let closed: Vec<usize> = inputs.iter().map(|n| self.closed.lookup(n)).collect::<Result<_>>()?;
        let value = named_vector(&self.closed, output)?;
        let degrees = self.closed.degrees().to_vec();
        self.maps.closed_mut(closed.len()).insert(&closed, &[], value, &degrees);
        Ok(())
    }

    /// Inserts `value` at named inputs of `n_{p,q}`.
    pub fn set_n(&mut self, closed_inputs: &[&str], open_inputs: &[&str], output: &[(&str, R)]) -> Result<()> {
        let closed: Vec<usize> = closed_inputs.iter().map(|n| self.closed.lookup(n)).collect::<Result<_>>()?;
        let open: Vec<usize> = open_inputs.iter().map(|n| self.open.lookup(n)).collect::<Result<_>>()?;
        let value = named_vector(&self.open, output)?;
        let degrees = self.closed.degrees().to_vec();
        self.maps.open_mut(closed.len(), open.len()).insert(&closed, &open, value, &degrees);
        Ok(())
    }

    /// Degree, symmetry, arity and weak-flag constraints.
    pub fn validate(&self) -> Result<()> {
        if self.maps.degree != 1 {
            return Err(Error::Degree(format!("structure maps must have degree 1, found {}", self.maps.degree)));
        }
        let deg = self.degrees();
        self.maps.validate(deg, deg)?;
        if self.maps.max_arity() > self.bound {
            return Err(Error::Bound(format!("maps of arity {} exceed the bound {}", self.maps.max_arity(), self.bound)));
        }
        if !self.weak {
            if self.l(0).is_some_and(|m| !m.is_zero()) {
                return Err(Error::Invalid("l_0 present but the structure is not weak".into()));
            }
            if self.n(0, 0).is_some_and(|m| !m.is_zero()) {
                return Err(Error::Invalid("n_{0,0} present but the structure is not weak".into()));
            }
        }
        if self.closed.is_empty() && !self.maps.closed.values().all(MultiMap::is_zero) {
            return Err(Error::Invalid("closed maps on an empty closed space".into()));
        }
        Ok(())
    }

    pub fn coderivation(&self) -> CoderivationView<R> {
        lift_coderivation(&self.maps, self.degrees())
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S + Copy) -> OchaStructure<S> {
        OchaStructure {
            closed: self.closed.clone(),
            open: self.open.clone(),
            maps: self.maps.map_coeffs(f),
            weak: self.weak,
            bound: self.bound,
        }
    }

    /// `l_1` on the closed sector and `n_{0,1}` on the open sector.
    pub fn differential(&self, sector: Sector) -> Option<&MultiMap<R>> {
        match sector {
            Sector::Closed => self.l(1),
            Sector::Open => self.n(0, 1),
        }
    }

    pub fn space(&self, sector: Sector) -> &GradedSpace {
        match sector {
            Sector::Closed => &self.closed,
            Sector::Open => &self.open,
        }
    }
}

fn named_vector<R: Ring>(space: &GradedSpace, pairs: &[(&str, R)]) -> Result<Vector<R>> {
    let mut v = Vector::zero();
    for (name, c) in pairs {
        v.add_term(space.lookup(name)?, c.clone());
    }
    Ok(v)
}

/// One relation instance: a canonical input word and the output sector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instance {
    pub word: Word,
    pub output: Sector,
}

impl Instance {
    /// `(n, m)`: closed and open input counts.
    pub fn arity(&self) -> (usize, usize) {
        (self.word.closed.len(), self.word.open.len())
    }
}

/// Outcome of a relation checker: the nonzero residuals, keyed by instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Report<R: Ring = Scalar> {
    pub relation: String,
    pub bound: usize,
    pub checked: usize,
    pub violations: BTreeMap<Instance, Vector<R>>,
}

impl<R: Ring> Report<R> {
    pub fn new(relation: impl Into<String>, bound: usize) -> Self {
        Report { relation: relation.into(), bound, checked: 0, violations: BTreeMap::new() }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn record(&mut self, instance: Instance, residual: Vector<R>) {
        self.checked += 1;
        if !residual.is_zero() {
            self.violations.insert(instance, residual);
        }
    }

    /// Keeps only instances matching `keep`.
    pub fn filtered(&self, keep: impl Fn(&Instance) -> bool) -> Self {
        Report {
            relation: self.relation.clone(),
            bound: self.bound,
            checked: self.checked,
            violations: self.violations.iter().filter(|(i, _)| keep(i)).map(|(i, v)| (i.clone(), v.clone())).collect(),
        }
    }

    pub fn violated_instances(&self) -> Vec<Instance> {
        self.violations.keys().cloned().collect()
    }

    /// Human-readable description of an instance using basis names.
    pub fn describe(instance: &Instance, closed: &GradedSpace, open: &GradedSpace) -> String {
        let c: Vec<&str> = instance.word.closed.iter().map(|&i| closed.name(i)).collect();
        let o: Vec<&str> = instance.word.open.iter().map(|&i| open.name(i)).collect();
        let (n, m) = instance.arity();
        format!("(n={n}, m={m}) [{}; {}] -> {}", c.join(", "), o.join(", "), instance.output)
    }
}

impl<R: Ring> fmt::Display for Report<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.is_valid() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{}: {verdict} ({} instances checked up to length {}, {} violated)",
            self.relation,
            self.checked,
            self.bound,
            self.violations.len()
        )
    }
}
