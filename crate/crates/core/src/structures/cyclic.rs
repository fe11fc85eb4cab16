//! Constant symplectic pairings, the tensors `𝒱`, cyclicity, and the dual
//! maps `r_{p−1,q+1}`.

use std::collections::BTreeMap;

use super::{Instance, OchaStructure, Report};
use crate::coalgebra::{words, Word};
use crate::error::{Error, Result};
use crate::graded::{int, Degrees, GradedSpace, MultiMap, Ring, Scalar, Sector, Vector};
use crate::linalg::Matrix;

/// A bilinear form of fixed degree, stored on basis pairs.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Pairing {
    pub degree: i32,
    pub table: BTreeMap<(usize, usize), Scalar>,
}

impl Pairing {
    pub fn new(degree: i32) -> Self {
        Pairing { degree, table: BTreeMap::new() }
    }

    pub fn set(&mut self, left: usize, right: usize, value: Scalar) {
        if value.is_zero() {
            self.table.remove(&(left, right));
        } else {
            self.table.insert((left, right), value);
        }
    }

    /// Sets `ω(x, y)` and the value at `(y, x)` forced by skew-symmetry.
    pub fn set_skew(&mut self, left: usize, right: usize, value: Scalar, degrees: &[i32]) {
        let swap = (degrees[left] as i64 * degrees[right] as i64) + 1;
        self.set(right, left, value.signed(swap));
        self.set(left, right, value);
    }

    pub fn get(&self, left: usize, right: usize) -> Scalar {
        self.table.get(&(left, right)).cloned().unwrap_or_else(|| int(0))
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> Scalar {
        let mut out = int(0);
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                out += a * b * self.get(i, j);
            }
        }
        out
    }

    /// Degree, skew-symmetry `ω(y,x) = −(−1)^{xy} ω(x,y)` and nondegeneracy.
    pub fn check(&self, space: &GradedSpace) -> Result<()> {
        let deg = space.degrees();
        for (&(i, j), v) in &self.table {
            if i >= deg.len() || j >= deg.len() {
                return Err(Error::Invalid(format!("pairing entry ({i}, {j}) outside the space")));
            }
            if deg[i] + deg[j] + self.degree != 0 {
                return Err(Error::Degree(format!(
                    "pairing of {} and {} is nonzero but degrees do not add to {}",
                    space.name(i),
                    space.name(j),
                    -self.degree
                )));
            }
            let expected = v.signed(deg[i] as i64 * deg[j] as i64 + 1);
            if self.get(j, i) != expected {
                return Err(Error::Axiom {
                    axiom: "skew-symmetry".into(),
                    detail: format!("at ({}, {})", space.name(i), space.name(j)),
                });
            }
        }
        for d in space.degree_range() {
            let rows = space.of_degree(d);
            let cols = space.of_degree(-d - self.degree);
            if rows.len() != cols.len() {
                return Err(Error::Degenerate(d));
            }
            let columns: Vec<Vector> = cols
                .iter()
                .map(|&c| Vector::from_pairs(rows.iter().enumerate().map(|(r, &x)| (r, self.get(x, c)))))
                .collect();
            if Matrix::from_columns(rows.len(), &columns).rank() != rows.len() {
                return Err(Error::Degenerate(d));
            }
        }
        Ok(())
    }

    fn matrix(&self, dim: usize) -> Matrix {
        let mut m = Matrix::zeros(dim, dim);
        for (&(i, j), v) in &self.table {
            m.set(i, j, v.clone());
        }
        m
    }
}

/// `ω = ω_c ⊕ ω_o`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SymplecticPair {
    pub closed: Pairing,
    pub open: Pairing,
}

impl SymplecticPair {
    pub fn check(&self, s: &OchaStructure) -> Result<()> {
        self.closed.check(&s.closed)?;
        self.open.check(&s.open)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TensorKind {
    /// `𝒱_{k+1} = ω_c(l_k ⊗ 1)`, keyed by `k`.
    Closed(usize),
    /// `𝒱_{p,q+1} = ω_o(n_{p,q} ⊗ 1)`, keyed by `(p, q)`.
    Mixed(usize, usize),
}

/// A scalar-valued multilinear map on full basis tuples (closed letters
/// first, then open letters).
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicTensor {
    pub kind: TensorKind,
    pub degree: i32,
    pub table: BTreeMap<Vec<usize>, Scalar>,
}

impl CyclicTensor {
    pub fn get(&self, key: &[usize]) -> Scalar {
        self.table.get(key).cloned().unwrap_or_else(|| int(0))
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }
}

fn tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..dim).map(move |i| {
                    let mut next = t.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }
    out
}

/// All `𝒱_{k+1}` and `𝒱_{p,q+1}` for the maps present in `s`.
pub fn cyclic_tensors(s: &OchaStructure, w: &SymplecticPair) -> Result<Vec<CyclicTensor>> {
    w.check(s)?;
    let cdeg = s.closed.degrees();
    let mut out = Vec::new();
    for (&k, map) in &s.maps.closed {
        let mut table = BTreeMap::new();
        for key in tuples(s.closed.dim(), k + 1) {
            let value = w.closed.eval(&map.on_basis(&key[..k], &[], cdeg), &Vector::basis(key[k]));
            if !value.is_zero() {
                table.insert(key, value);
            }
        }
        out.push(CyclicTensor { kind: TensorKind::Closed(k), degree: w.closed.degree + 1, table });
    }
    for (&(p, q), map) in &s.maps.open {
        let mut table = BTreeMap::new();
        for closed in tuples(s.closed.dim(), p) {
            for open in tuples(s.open.dim(), q + 1) {
                let value = w.open.eval(&map.on_basis(&closed, &open[..q], cdeg), &Vector::basis(open[q]));
                if !value.is_zero() {
                    let mut key = closed.clone();
                    key.extend(&open);
                    table.insert(key, value);
                }
            }
        }
        out.push(CyclicTensor { kind: TensorKind::Mixed(p, q), degree: w.open.degree + 1, table });
    }
    Ok(out)
}

fn scalar_residual(value: Scalar) -> Vector {
    Vector::from_pairs([(0, value)])
}

/// Full graded symmetry of each `𝒱_{k+1}`, graded symmetry in the closed
/// block and cyclic symmetry in the open block of each `𝒱_{p,q+1}`.
/// Instances are the raw tuples; a residual is the difference of the two
/// sides, stored at index 0.
pub fn check_cyclicity(tensors: &[CyclicTensor], s: &OchaStructure) -> Report {
    let cdeg = s.closed.degrees();
    let odeg = s.open.degrees();
    let mut report = Report::new("cyclicity", s.bound);
    for t in tensors {
        match t.kind {
            TensorKind::Closed(k) => {
                for key in tuples(s.closed.dim(), k + 1) {
                    for i in 0..k {
                        let mut swapped = key.clone();
                        swapped.swap(i, i + 1);
                        let sign = cdeg[key[i]] as i64 * cdeg[key[i + 1]] as i64;
                        let diff = t.get(&key) - t.get(&swapped).signed(sign);
                        report.record(
                            Instance { word: Word { closed: key.clone(), open: vec![] }, output: Sector::Closed },
                            scalar_residual(diff),
                        );
                    }
                }
            }
            TensorKind::Mixed(p, q) => {
                for closed in tuples(s.closed.dim(), p) {
                    for open in tuples(s.open.dim(), q + 1) {
                        let mut key = closed.clone();
                        key.extend(&open);
                        let instance = Instance { word: Word { closed: closed.clone(), open: open.clone() }, output: Sector::Open };
                        let mut residual = int(0);
                        let mut rotated = closed.clone();
                        rotated.extend(&open[1..]);
                        rotated.push(open[0]);
                        let rest: i64 = open[1..].iter().map(|&o| odeg[o] as i64).sum();
                        residual += t.get(&key) - t.get(&rotated).signed(odeg[open[0]] as i64 * rest);
                        for i in 0..p.saturating_sub(1) {
                            let mut swapped = key.clone();
                            swapped.swap(i, i + 1);
                            let sign = cdeg[key[i]] as i64 * cdeg[key[i + 1]] as i64;
                            let diff = t.get(&key) - t.get(&swapped).signed(sign);
                            if !diff.is_zero() {
                                residual = diff;
                            }
                        }
                        report.record(instance, scalar_residual(residual));
                    }
                }
            }
        }
    }
    report
}

/// The maps `r_{p−1,q+1}: Hc^{⊗(p−1)} ⊗ Ho^{⊗(q+1)} → Hc`, keyed by
/// `(p−1, q+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualMaps {
    pub degree: i32,
    pub maps: BTreeMap<(usize, usize), MultiMap>,
}

/// `ω_c(r_{p−1,q+1}(c_2,…,c_p; o_1,…,o_{q+1}), c_1) =
/// (−1)^{c_1(c_2+…+c_p)} 𝒱_{p,q+1}(c_1,…,c_p; o_1,…,o_{q+1})`, solved with
/// the nondegeneracy of `ω_c` and verified by [`dual_round_trip`].
pub fn dualize_to_r(s: &OchaStructure, w: &SymplecticPair) -> Result<DualMaps> {
    w.check(s)?;
    let cdeg = s.closed.degrees();
    let dim = s.closed.dim();
    let omega = w.closed.matrix(dim);
    let degree = w.open.degree + 1 - w.closed.degree;
    let mut dual = DualMaps { degree, maps: BTreeMap::new() };
    let deg = s.degrees();
    for (&(p, q), map) in &s.maps.open {
        if p == 0 {
            continue;
        }
        let mut r = MultiMap::new(p - 1, q + 1, Sector::Closed, degree);
        for word in words(deg, p - 1, q + 1) {
            let rest: i64 = word.closed.iter().map(|&c| cdeg[c] as i64).sum();
            let rhs: Vec<Scalar> = (0..dim)
                .map(|c1| {
                    let mut closed = vec![c1];
                    closed.extend(&word.closed);
                    let v = map.on_basis(&closed, &word.open[..q], cdeg);
                    w.open.eval(&v, &Vector::basis(word.open[q])).signed(cdeg[c1] as i64 * rest)
                })
                .collect();
            if rhs.iter().all(|x| x.is_zero()) {
                continue;
            }
            // Σ_j a_j ω_c(e_j, e_i) = rhs_i
            let mut transposed = Matrix::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    transposed.set(i, j, omega.get(j, i).clone());
                }
            }
            let Some(coeffs) = transposed.solve(&rhs) else {
                return Err(Error::Degenerate(word.degree(deg) as i32 + degree));
            };
            let value = Vector::from_pairs(coeffs.into_iter().enumerate());
            let mut key = word.closed.clone();
            key.extend(&word.open);
            r.insert_raw(key, value);
        }
        dual.maps.insert((p - 1, q + 1), r);
    }
    let check = dual_round_trip(&dual, s, w);
    if !check.is_valid() {
        return Err(Error::Axiom { axiom: "omega duality".into(), detail: check.to_string() });
    }
    Ok(dual)
}

/// Checks `ω_c(r(c_2,…; o), c_1) = ± 𝒱(c_1, c_2, …; o)` on every canonical
/// input and every `c_1`.
pub fn dual_round_trip(dual: &DualMaps, s: &OchaStructure, w: &SymplecticPair) -> Report {
    let cdeg = s.closed.degrees();
    let deg: Degrees<'_> = s.degrees();
    let mut report = Report::new("omega duality", s.bound);
    for (&(p, q), map) in &s.maps.open {
        if p == 0 {
            continue;
        }
        let r = dual.maps.get(&(p - 1, q + 1));
        for word in words(deg, p - 1, q + 1) {
            let rest: i64 = word.closed.iter().map(|&c| cdeg[c] as i64).sum();
            let value = r.map(|r| r.on_basis(&word.closed, &word.open, cdeg)).unwrap_or_else(Vector::zero);
            for c1 in 0..s.closed.dim() {
                let mut closed = vec![c1];
                closed.extend(&word.closed);
                let tensor = w.open.eval(&map.on_basis(&closed, &word.open[..q], cdeg), &Vector::basis(word.open[q]));
                let diff = w.closed.eval(&value, &Vector::basis(c1)) - tensor.signed(cdeg[c1] as i64 * rest);
                report.record(Instance { word: Word { closed, open: word.open.clone() }, output: Sector::Closed }, scalar_residual(diff));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::SectorTag;

    /// `Ho = ℚ[x]/(x²)` in degree −1, `Hc = {z, z*}`, `n_{1,0}(z) = x`.
    fn fixture() -> (OchaStructure, SymplecticPair) {
        let c = GradedSpace::new(SectorTag::Closed, [("z", -2), ("zs", 0)]).unwrap();
        let o = GradedSpace::new(SectorTag::Open, [("one", -1), ("x", -1)]).unwrap();
        let mut s = OchaStructure::new(c, o, 2);
        s.set_n(&["z"], &[], &[("x", int(1))]).unwrap();
        let (z, zs) = (s.closed.lookup("z").unwrap(), s.closed.lookup("zs").unwrap());
        let (one, x) = (s.open.lookup("one").unwrap(), s.open.lookup("x").unwrap());
        let mut w = SymplecticPair { closed: Pairing::new(2), open: Pairing::new(2) };
        w.closed.set_skew(z, zs, int(1), s.closed.degrees());
        w.open.set_skew(one, x, int(1), s.open.degrees());
        (s, w)
    }

    #[test]
    fn pairing_axioms() {
        let (s, w) = fixture();
        w.check(&s).unwrap();
        assert_eq!(w.closed.get(1, 0), int(-1));
        assert_eq!(w.open.get(1, 0), int(1));
        let mut bad = w.clone();
        bad.open.set(0, 1, int(2));
        assert!(bad.check(&s).is_err());
        let mut degenerate = Pairing::new(2);
        degenerate.set_skew(0, 1, int(0), s.closed.degrees());
        assert!(matches!(degenerate.check(&s.closed), Err(Error::Degenerate(_))));
    }

    #[test]
    fn opening_map_dualizes_to_r01() {
        let (s, w) = fixture();
        let tensors = cyclic_tensors(&s, &w).unwrap();
        assert!(check_cyclicity(&tensors, &s).is_valid());
        let dual = dualize_to_r(&s, &w).unwrap();
        assert_eq!(dual.degree, 1);
        let r01 = &dual.maps[&(0, 1)];
        let one = s.open.lookup("one").unwrap();
        let zs = s.closed.lookup("zs").unwrap();
        assert_eq!(r01.on_basis(&[], &[one], &[]), Vector::from_pairs([(zs, int(-1))]));
    }

    #[test]
    fn zero_structure_is_cyclic_with_zero_r() {
        let (mut s, w) = fixture();
        s.maps = crate::graded::MapFamily::new(1);
        let tensors = cyclic_tensors(&s, &w).unwrap();
        assert!(tensors.iter().all(CyclicTensor::is_zero));
        assert!(check_cyclicity(&tensors, &s).is_valid());
        assert!(dualize_to_r(&s, &w).unwrap().maps.is_empty());
    }
}
