//! OCHA morphisms: families `f_k`, `f_{p,q}` of degree zero.

use super::cohomology::{apply_table, cohomology, unary_table};
use super::relations::{apply_refs, closed_insertions, open_insertions, run};
use super::{Instance, OchaStructure, Report};
use crate::coalgebra::{compose_morphisms, compositions, lift_morphism, morphism_defect, words};
use crate::error::{Error, Result};
use crate::graded::perm::{koszul_parity, set_partitions};
use crate::graded::{inv_factorial, MapFamily, MultiMap, Ring, Scalar, Sector, Vector};
use crate::linalg::Matrix;

/// A (possibly weak) morphism between two OCHAs. A weak morphism may carry
/// the constant components `f_0` and `f_{0,0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OchaMorphism<R: Ring = Scalar> {
    pub source: OchaStructure<R>,
    pub target: OchaStructure<R>,
    pub maps: MapFamily<R>,
    pub weak: bool,
}

impl<R: Ring> OchaMorphism<R> {
    pub fn new(source: OchaStructure<R>, target: OchaStructure<R>) -> Self {
        OchaMorphism { source, target, maps: MapFamily::new(0), weak: false }
    }

    pub fn f(&self, k: usize) -> Option<&MultiMap<R>> {
        self.maps.closed_map(k)
    }

    pub fn f_open(&self, p: usize, q: usize) -> Option<&MultiMap<R>> {
        self.maps.open_map(p, q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.maps.degree != 0 {
            return Err(Error::Degree(format!("morphism components must have degree 0, found {}", self.maps.degree)));
        }
        self.maps.validate(self.source.degrees(), self.target.degrees())?;
        if !self.weak && (self.f(0).is_some_and(|m| !m.is_zero()) || self.f_open(0, 0).is_some_and(|m| !m.is_zero())) {
            return Err(Error::Invalid("constant components present but the morphism is not weak".into()));
        }
        Ok(())
    }

    fn constant_closed(&self) -> Vector<R> {
        self.f(0).map(|m| m.on_basis(&[], &[], self.source.closed.degrees())).unwrap_or_else(Vector::zero)
    }
}

/// `f_1 = id` and `f_{0,1} = id`.
pub fn identity_morphism<R: Ring>(s: &OchaStructure<R>) -> OchaMorphism<R> {
    let mut f = OchaMorphism::new(s.clone(), s.clone());
    let cdeg = s.closed.degrees().to_vec();
    for i in 0..s.closed.dim() {
        f.maps.closed_mut(1).insert(&[i], &[], Vector::basis(i), &cdeg);
    }
    for i in 0..s.open.dim() {
        f.maps.open_mut(0, 1).insert(&[], &[i], Vector::basis(i), &cdeg);
    }
    f
}

/// Right-hand side on closed letters: `Σ ε l′(f(B_1), …, f(B_i), f_0^e)/e!`
/// over unordered partitions into blocks.
fn closed_images<R: Ring>(f: &OchaMorphism<R>, letters: &[usize], positions: &[usize]) -> Vec<(Vec<Vec<usize>>, Vec<Vector<R>>)> {
    let cdeg = f.source.closed.degrees();
    let mut out = Vec::new();
    for parts in 0..=positions.len() {
        'partition: for partition in set_partitions(positions.len(), parts) {
            let blocks: Vec<Vec<usize>> = partition.iter().map(|b| b.iter().map(|&i| positions[i]).collect()).collect();
            let mut values = Vec::with_capacity(parts);
            for block in &blocks {
                let block_letters: Vec<usize> = block.iter().map(|&p| letters[p]).collect();
                let Some(map) = f.f(block.len()) else { continue 'partition };
                let v = map.on_basis(&block_letters, &[], cdeg);
                if v.is_zero() {
                    continue 'partition;
                }
                values.push(v);
            }
            out.push((blocks, values));
        }
    }
    out
}

pub(crate) fn closed_rhs<R: Ring>(f: &OchaMorphism<R>, closed: &[usize]) -> Vector<R> {
    let cdeg = f.source.closed.degrees();
    let tdeg = f.target.closed.degrees();
    let letter_degrees: Vec<i32> = closed.iter().map(|&c| cdeg[c]).collect();
    let positions: Vec<usize> = (0..closed.len()).collect();
    let constant = f.constant_closed();
    let mut out = Vector::zero();
    for (blocks, values) in closed_images(f, closed, &positions) {
        let order: Vec<usize> = blocks.iter().flatten().copied().collect();
        let eps = koszul_parity(&order, &letter_degrees);
        for (&k, map) in &f.target.maps.closed {
            if k < values.len() {
                continue;
            }
            let extra = k - values.len();
            if extra > 0 && constant.is_zero() {
                continue;
            }
            let mut args = values.clone();
            args.extend(std::iter::repeat_n(constant.clone(), extra));
            let weight = R::from_scalar(&inv_factorial(extra)).signed(eps);
            out.add_scaled(&apply_refs(map, &args, &[], tdeg), &weight);
        }
    }
    out
}

/// Right-hand side on `(C; O)` with open output: for each target map
/// `n′_{K,J}`, the open letters are cut into `J` consecutive segments, each
/// segment takes a closed block, and the remaining closed letters are
/// partitioned into blocks for the closed components.
pub(crate) fn open_rhs<R: Ring>(f: &OchaMorphism<R>, closed: &[usize], open: &[usize]) -> Vector<R> {
    let cdeg = f.source.closed.degrees();
    let n = closed.len();
    let letter_degrees: Vec<i32> = closed.iter().map(|&c| cdeg[c]).collect();
    let constant = f.constant_closed();
    let mut out = Vector::zero();
    for (&(k, j), map) in &f.target.maps.open {
        for segments in compositions(open.len(), j) {
            let mut starts = Vec::with_capacity(j);
            let mut acc = 0;
            for &q in &segments {
                starts.push(acc);
                acc += q;
            }
            let mut labels = vec![0usize; n];
            loop {
                open_rhs_term(f, map, k, closed, open, &letter_degrees, &segments, &starts, &labels, &constant, &mut out);
                // next labelling in base j+1
                let mut pos = 0;
                while pos < n && labels[pos] == j {
                    labels[pos] = 0;
                    pos += 1;
                }
                if pos == n {
                    break;
                }
                labels[pos] += 1;
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn open_rhs_term<R: Ring>(
    f: &OchaMorphism<R>,
    map: &MultiMap<R>,
    k: usize,
    closed: &[usize],
    open: &[usize],
    letter_degrees: &[i32],
    segments: &[usize],
    starts: &[usize],
    labels: &[usize],
    constant: &Vector<R>,
    out: &mut Vector<R>,
) {
    let cdeg = f.source.closed.degrees();
    let odeg = f.source.open.degrees();
    let tdeg = f.target.closed.degrees();
    let j = segments.len();
    let mut open_values = Vec::with_capacity(j);
    let mut open_positions: Vec<usize> = Vec::new();
    let mut tau = 0i64;
    for block in 1..=j {
        let positions: Vec<usize> = (0..closed.len()).filter(|&p| labels[p] == block).collect();
        let block_letters: Vec<usize> = positions.iter().map(|&p| closed[p]).collect();
        let segment = &open[starts[block - 1]..starts[block - 1] + segments[block - 1]];
        let Some(component) = f.f_open(block_letters.len(), segment.len()) else { return };
        let v = component.on_basis(&block_letters, segment, cdeg);
        if v.is_zero() {
            return;
        }
        let block_degree: i64 = block_letters.iter().map(|&c| cdeg[c] as i64).sum();
        let before: i64 = open[..starts[block - 1]].iter().map(|&o| odeg[o] as i64).sum();
        tau += block_degree * before;
        open_values.push(v);
        open_positions.extend(positions);
    }
    let pool: Vec<usize> = (0..closed.len()).filter(|&p| labels[p] == 0).collect();
    for (blocks, values) in closed_images(f, closed, &pool) {
        if values.len() > k {
            continue;
        }
        let extra = k - values.len();
        if extra > 0 && constant.is_zero() {
            continue;
        }
        let order: Vec<usize> = blocks.iter().flatten().chain(open_positions.iter()).copied().collect();
        let eps = koszul_parity(&order, letter_degrees);
        let mut args = values;
        args.extend(std::iter::repeat_n(constant.clone(), extra));
        let weight = R::from_scalar(&inv_factorial(extra)).signed(eps + tau);
        out.add_scaled(&apply_refs(map, &args, &open_values, tdeg), &weight);
    }
}

fn morphism_instances<R: Ring>(f: &OchaMorphism<R>, n_max: usize, m_max: usize) -> Vec<Instance> {
    let deg = f.source.degrees();
    let weak = f.source.weak || f.weak;
    let mut out = Vec::new();
    for n in 0..=n_max {
        for m in 0..=m_max {
            if n + m == 0 && !weak {
                continue;
            }
            for word in words(deg, n, m) {
                if m == 0 && !f.target.closed.is_empty() {
                    out.push(Instance { word: word.clone(), output: Sector::Closed });
                }
                if !f.target.open.is_empty() {
                    out.push(Instance { word, output: Sector::Open });
                }
            }
        }
    }
    out
}

/// Residual of the morphism relation on one canonical source word.
pub(crate) fn morphism_residual<R: Ring>(f: &OchaMorphism<R>, closed: &[usize], open: &[usize], output: Sector) -> Vector<R> {
    let cdeg = f.source.closed.degrees();
    let odeg = f.source.open.degrees();
    let (mut residual, rhs) = match output {
        Sector::Closed => (closed_insertions(&f.maps, &f.source.maps, cdeg, closed), closed_rhs(f, closed)),
        Sector::Open => (open_insertions(&f.maps, &f.source.maps, cdeg, odeg, closed, open), open_rhs(f, closed, open)),
    };
    residual.add_scaled(&rhs, &R::one().negated());
    residual
}

/// Direct check of `f∘(𝔩 + 𝔫) = (𝔩′ + 𝔫′)∘f` on words with at most `n_max`
/// closed and `m_max` open letters.
pub fn check_morphism<R: Ring>(f: &OchaMorphism<R>, n_max: usize, m_max: usize) -> Report<R> {
    run("OCHA morphism", n_max + m_max, morphism_instances(f, n_max, m_max), |i| {
        morphism_residual(f, &i.word.closed, &i.word.open, i.output)
    })
}

/// The same relation through the coalgebra lifts: corollas of
/// `𝔣∘D − D′∘𝔣`. Only for strict morphisms.
pub fn check_morphism_coalgebra<R: Ring>(f: &OchaMorphism<R>, n_max: usize, m_max: usize) -> Result<Report<R>> {
    if f.weak {
        return Err(Error::Precondition("the coalgebra route needs a strict morphism".into()));
    }
    let view = lift_morphism(&f.maps, f.source.degrees(), f.target.degrees());
    let source = f.source.coderivation();
    let target = f.target.coderivation();
    Ok(run("OCHA morphism (coalgebra)", n_max + m_max, morphism_instances(f, n_max, m_max), |i| {
        morphism_defect(&view, &source, &target, &i.word).sector(i.output).clone()
    }))
}

/// `g∘f` up to total arity `bound`.
pub fn compose<R: Ring>(f: &OchaMorphism<R>, g: &OchaMorphism<R>, bound: usize) -> Result<OchaMorphism<R>> {
    if f.weak || g.weak {
        return Err(Error::Precondition("composition is implemented for strict morphisms".into()));
    }
    if f.target.closed != g.source.closed || f.target.open != g.source.open {
        return Err(Error::Precondition("target of the first morphism is not the source of the second".into()));
    }
    let maps = compose_morphisms(&f.maps, &g.maps, f.source.degrees(), f.target.degrees(), bound).pruned();
    Ok(OchaMorphism { source: f.source.clone(), target: g.target.clone(), maps, weak: false })
}

/// Whether `f_1` and `f_{0,1}` induce isomorphisms on cohomology.
pub fn check_quasi_isomorphism(f: &OchaMorphism) -> Result<bool> {
    for sector in [Sector::Closed, Sector::Open] {
        let source = f.source.space(sector);
        let target = f.target.space(sector);
        let src = cohomology(source, sector, f.source.differential(sector))?;
        let tgt = cohomology(target, sector, f.target.differential(sector))?;
        let linear = match sector {
            Sector::Closed => f.f(1),
            Sector::Open => f.f_open(0, 1),
        };
        let table = unary_table(linear, sector, source.dim());
        let induced: Vec<Vector> = src.inclusion.iter().map(|v| tgt.project(&apply_table(&table, v))).collect();
        let mut degrees = src.small.degree_range();
        degrees.extend(tgt.small.degree_range());
        degrees.sort();
        degrees.dedup();
        for d in degrees {
            let cols = src.small.of_degree(d);
            let rows = tgt.small.of_degree(d);
            if cols.len() != rows.len() {
                return Ok(false);
            }
            if cols.is_empty() {
                continue;
            }
            let columns: Vec<Vector> = cols
                .iter()
                .map(|&c| Vector::from_pairs(rows.iter().enumerate().map(|(r, &t)| (r, induced[c].get(t)))))
                .collect();
            if Matrix::from_columns(rows.len(), &columns).rank() != rows.len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{GradedSpace, SectorTag};
    use crate::structures::testing::random_family;

    fn structure(seed: u64, closed: &[(&str, i32)], open: &[(&str, i32)]) -> OchaStructure {
        let c = GradedSpace::new(SectorTag::Closed, closed.iter().cloned()).unwrap();
        let o = GradedSpace::new(SectorTag::Open, open.iter().cloned()).unwrap();
        let mut s = OchaStructure::new(c, o, 3);
        s.maps = random_family(1, s.degrees(), s.degrees(), 1, 3, seed);
        s
    }

    fn pair() -> (OchaStructure, OchaStructure) {
        let a = structure(3, &[("a0", 0), ("a1", 1), ("am", -1)], &[("p0", 0), ("p1", 1), ("pm", -1)]);
        let b = structure(4, &[("b0", 0), ("b1", 1)], &[("q0", 0), ("q1", 1), ("qm", -1)]);
        (a, b)
    }

    #[test]
    fn direct_relation_matches_coalgebra_defect() {
        let (a, b) = pair();
        for seed in [7, 8] {
            let mut f = OchaMorphism::new(a.clone(), b.clone());
            f.maps = random_family(0, a.degrees(), b.degrees(), 1, 3, seed);
            f.validate().unwrap();
            let direct = check_morphism(&f, 2, 2);
            let coalgebra = check_morphism_coalgebra(&f, 2, 2).unwrap();
            assert!(!direct.is_valid());
            assert_eq!(direct.violations, coalgebra.violations, "seed {seed}");
        }
    }

    #[test]
    fn identity_is_a_quasi_isomorphism() {
        let (a, _) = pair();
        let id = identity_morphism(&a);
        assert!(check_morphism(&id, 3, 3).is_valid());
        assert!(check_morphism_coalgebra(&id, 2, 2).unwrap().is_valid());
    }

    #[test]
    fn composition_with_identity() {
        let (a, b) = pair();
        let mut f = OchaMorphism::new(a.clone(), b.clone());
        f.maps = random_family(0, a.degrees(), b.degrees(), 1, 3, 12);
        let left = compose(&identity_morphism(&a), &f, 3).unwrap();
        let right = compose(&f, &identity_morphism(&b), 3).unwrap();
        assert_eq!(left.maps, f.maps.clone().pruned());
        assert_eq!(right.maps, f.maps.clone().pruned());
    }

    #[test]
    fn composite_defect_vanishes_for_morphisms() {
        // identity composed with itself stays a morphism
        let (a, _) = pair();
        let id = identity_morphism(&a);
        let twice = compose(&id, &id, 3).unwrap();
        assert!(check_morphism(&twice, 2, 2).is_valid());
    }

    #[test]
    fn weak_constant_terms_enter_the_relation() {
        let (a, b) = pair();
        let mut f = OchaMorphism::new(a.clone(), b.clone());
        f.weak = true;
        f.maps = random_family(0, a.degrees(), b.degrees(), 1, 2, 5);
        let b0 = b.closed.lookup("b0").unwrap();
        f.maps.closed_mut(0).insert(&[], &[], Vector::basis(b0), &[]);
        f.validate().unwrap();
        let report = check_morphism(&f, 1, 1);
        assert!(report.violations.keys().any(|i| i.word.is_empty()));
        assert!(check_morphism_coalgebra(&f, 1, 1).is_err());
    }
}
