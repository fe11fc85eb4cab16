//! Minimal models: Hodge decomposition, homotopy transfer onto cohomology,
//! the splitting into minimal and linear contractible parts, and the
//! quasi-inverse of the transferred inclusion.

use crate::coalgebra::words;
use crate::error::{Error, Result};
use crate::graded::{GradedSpace, LinForm, MultiMap, Ring, Scalar, Sector, Vector};
use crate::linalg::{EchelonSpan, LinearSystem, Matrix};
use crate::structures::cohomology::{apply_table, unary_table};
use crate::structures::morphism::{closed_rhs, morphism_residual, open_rhs};
use crate::structures::{
    check_morphism, check_ocha, check_quasi_isomorphism, cohomology, compose, Contraction, OchaMorphism, OchaStructure,
    SectorContraction,
};

/// Contraction of `(H, l_1 + n_{0,1})` onto its cohomology, sector by
/// sector, with the deterministic choice of [`cohomology`].
pub fn hodge_decompose(s: &OchaStructure) -> Result<Contraction> {
    Ok(Contraction {
        closed: cohomology(&s.closed, Sector::Closed, s.l(1))?,
        open: cohomology(&s.open, Sector::Open, s.n(0, 1))?,
    })
}

/// The minimal structure on cohomology and the quasi-isomorphism `ι̂` into
/// the original structure.
#[derive(Clone, Debug)]
pub struct TransferResult {
    pub minimal: OchaStructure,
    pub inclusion: OchaMorphism,
    pub contraction: Contraction,
    pub bound: usize,
}

impl TransferResult {
    /// Minimality, the relations of the minimal structure, the morphism
    /// relations of `ι̂` and the quasi-isomorphism property, all for inputs
    /// of total length at most the bound.
    pub fn verify(&self) -> Result<()> {
        let b = self.bound;
        if !check_minimal(&self.minimal) {
            return Err(Error::Axiom { axiom: "minimality".into(), detail: "transferred differential is nonzero".into() });
        }
        let rel = check_ocha(&self.minimal, b, b);
        if let Some(i) = rel.violations.keys().find(|i| i.word.len() <= b) {
            return Err(Error::Axiom {
                axiom: "transferred relations".into(),
                detail: crate::structures::Report::<Scalar>::describe(i, &self.minimal.closed, &self.minimal.open),
            });
        }
        let mor = check_morphism(&self.inclusion, b, b);
        if let Some(i) = mor.violations.keys().find(|i| i.word.len() <= b) {
            return Err(Error::Axiom {
                axiom: "inclusion morphism".into(),
                detail: crate::structures::Report::<Scalar>::describe(i, &self.minimal.closed, &self.minimal.open),
            });
        }
        if !check_quasi_isomorphism(&self.inclusion)? {
            return Err(Error::Axiom { axiom: "quasi-isomorphism".into(), detail: "ι̂ is not a quasi-isomorphism".into() });
        }
        Ok(())
    }
}

/// The weight-two operations of the minimal structure (`l_2`, `n_{1,0}` and
/// `n_{0,2}`) are the ones induced on cohomology: `op′ = π ∘ op ∘ ι`.
/// Returns each operation with whether the identity holds on all basis words.
pub fn induced_identities(t: &TransferResult) -> Vec<(&'static str, bool)> {
    let (s, c, m) = (&t.inclusion.target, &t.contraction, &t.minimal);
    let cdeg = s.closed.degrees();
    let ci = |i: usize| c.closed.include(&Vector::basis(i));
    let oi = |i: usize| c.open.include(&Vector::basis(i));
    let holds = |p: usize, q: usize, output: Sector| {
        words(m.degrees(), p, q).into_iter().all(|w| {
            let closed: Vec<Vector> = w.closed.iter().map(|&i| ci(i)).collect();
            let open: Vec<Vector> = w.open.iter().map(|&i| oi(i)).collect();
            let (big, small) = match output {
                Sector::Closed => (s.l(p), m.l(p)),
                Sector::Open => (s.n(p, q), m.n(p, q)),
            };
            let image = big
                .map(|f| f.apply(&closed.iter().collect::<Vec<_>>(), &open.iter().collect::<Vec<_>>(), cdeg))
                .unwrap_or_default();
            let expected = match output {
                Sector::Closed => c.closed.project(&image),
                Sector::Open => c.open.project(&image),
            };
            let got = small.map(|f| f.on_basis(&w.closed, &w.open, m.closed.degrees())).unwrap_or_default();
            got == expected
        })
    };
    vec![("l2", holds(2, 0, Sector::Closed)), ("n1,0", holds(1, 0, Sector::Open)), ("n0,2", holds(0, 2, Sector::Open))]
}

fn is_zero_map(map: Option<&MultiMap>) -> bool {
    map.is_none_or(MultiMap::is_zero)
}

/// `l_1 = 0` and `n_{0,1} = 0`.
pub fn check_minimal(s: &OchaStructure) -> bool {
    is_zero_map(s.l(1)) && is_zero_map(s.n(0, 1))
}

/// Only `l_1` and `n_{0,1}` are nonzero and both sectors are acyclic.
pub fn check_linear_contractible(s: &OchaStructure) -> bool {
    let only_linear = s.maps.closed.iter().all(|(&k, m)| k == 1 || m.is_zero())
        && s.maps.open.iter().all(|(&pq, m)| pq == (0, 1) || m.is_zero());
    only_linear && hodge_decompose(s).is_ok_and(|c| c.closed.small.is_empty() && c.open.small.is_empty())
}

fn without_differential(s: &OchaStructure) -> OchaStructure {
    let mut t = s.clone();
    t.maps.closed.remove(&1);
    t.maps.open.remove(&(0, 1));
    t
}

fn check_matches(s: &OchaStructure, c: &Contraction) -> Result<()> {
    c.check()?;
    for sector in [Sector::Closed, Sector::Open] {
        let sc = c.sector(sector);
        if sc.big != *s.space(sector) {
            return Err(Error::Precondition(format!("contraction is on a different {sector} space")));
        }
        if sc.differential != unary_table(s.differential(sector), sector, sc.big.dim()) {
            return Err(Error::Precondition(format!("contraction uses a different {sector} differential")));
        }
    }
    Ok(())
}

/// Transfers `s` onto its cohomology along `c`.
///
/// With `λ` the sum of the non-linear operations of `s` applied to blocks
/// of lower components of `ι̂`, the transferred operations are `π∘λ` and
/// the new components are `ι̂ = −h∘λ`; summing out the recursion gives
/// the tree formulas, with `h` on internal edges, `ι` on leaves and `π`
/// at the root. Closed components of each arity are computed before open
/// ones.
pub fn transfer_minimal(s: &OchaStructure, c: &Contraction, bound: usize) -> Result<TransferResult> {
    if s.weak {
        return Err(Error::Precondition("transfer needs a strict structure".into()));
    }
    check_matches(s, c)?;
    let mut minimal = OchaStructure::new(c.closed.small.clone(), c.open.small.clone(), bound);
    let mut iota = OchaMorphism::new(minimal.clone(), without_differential(s));
    for (i, v) in c.closed.inclusion.iter().enumerate() {
        iota.maps.closed_mut(1).insert_raw(vec![i], v.clone());
    }
    for (i, v) in c.open.inclusion.iter().enumerate() {
        iota.maps.open_mut(0, 1).insert_raw(vec![i], v.clone());
    }
    let degrees = (minimal.closed.degrees().to_vec(), minimal.open.degrees().to_vec());
    let small = crate::graded::Degrees { closed: &degrees.0, open: &degrees.1 };
    for total in 1..=bound {
        if total >= 2 {
            for w in words(small, total, 0) {
                let lambda = closed_rhs(&iota, &w.closed);
                store(&mut iota, &mut minimal, Sector::Closed, (total, 0), w.closed.clone(), &lambda, &c.closed);
            }
        }
        for n in 0..=total {
            let m = total - n;
            if (n, m) == (0, 1) {
                continue;
            }
            for w in words(small, n, m) {
                let lambda = open_rhs(&iota, &w.closed, &w.open);
                let mut key = w.closed.clone();
                key.extend(&w.open);
                store(&mut iota, &mut minimal, Sector::Open, (n, m), key, &lambda, &c.open);
            }
        }
    }
    minimal.maps = minimal.maps.pruned();
    iota.maps = iota.maps.pruned();
    iota.source = minimal.clone();
    iota.target = s.clone();
    let result = TransferResult { minimal, inclusion: iota, contraction: c.clone(), bound };
    result.verify()?;
    Ok(result)
}

fn store(
    iota: &mut OchaMorphism,
    minimal: &mut OchaStructure,
    sector: Sector,
    (n, m): (usize, usize),
    key: Vec<usize>,
    lambda: &Vector,
    sc: &SectorContraction,
) {
    if lambda.is_zero() {
        return;
    }
    let component = sc.homotope(lambda).negated();
    let operation = sc.project(lambda);
    let (f, op) = match sector {
        Sector::Closed => (iota.maps.closed_mut(n), minimal.l_mut(n)),
        Sector::Open => (iota.maps.open_mut(n, m), minimal.n_mut(n, m)),
    };
    f.insert_raw(key.clone(), component);
    op.insert_raw(key, operation);
}

/// A structure split as (minimal) ⊕ (linear contractible), with an
/// isomorphism from the direct sum onto the original.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub transfer: TransferResult,
    pub contractible: OchaStructure,
    pub sum: OchaStructure,
    pub isomorphism: OchaMorphism,
    /// Index in the sum of each basis element of the minimal part, per
    /// sector (closed, open).
    pub minimal_index: (Vec<usize>, Vec<usize>),
}

/// Basis of the complement `Y ⊕ dY` of a sector: independent images of `d`
/// and of `h`, lowest index first.
fn complement_basis(sc: &SectorContraction) -> Result<Vec<(String, i32, Vector)>> {
    let mut span = EchelonSpan::new();
    let mut out: Vec<(String, i32, Vector)> = Vec::new();
    for (prefix, table) in [("d", &sc.differential), ("h", &sc.homotopy)] {
        for (i, v) in table.iter().enumerate() {
            if v.is_zero() || !span.insert(v) {
                continue;
            }
            let degree = v.degree_in(sc.big.degrees())?.expect("nonzero");
            out.push((format!("{prefix}{}", sc.big.name(i)), degree, v.clone()));
        }
    }
    if out.len() + sc.small.dim() != sc.big.dim() {
        return Err(Error::Invalid("complement does not span ker π".into()));
    }
    Ok(out)
}

fn unique_name(taken: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

struct SectorSum {
    space: GradedSpace,
    small_index: Vec<usize>,
    complement_index: Vec<usize>,
    complement: Vec<Vector>,
}

fn sector_sum(sc: &SectorContraction) -> Result<SectorSum> {
    let complement = complement_basis(sc)?;
    let mut names: Vec<String> = sc.small.basis().iter().map(|b| b.name.clone()).collect();
    let mut basis: Vec<(String, i32)> = sc.small.basis().iter().map(|b| (b.name.clone(), b.degree)).collect();
    let mut complement_names = Vec::new();
    for (name, degree, _) in &complement {
        let n = unique_name(&names, name);
        names.push(n.clone());
        complement_names.push(n.clone());
        basis.push((n, *degree));
    }
    let space = GradedSpace::new(sc.small.tag(), basis)?;
    Ok(SectorSum {
        small_index: sc.small.basis().iter().map(|b| space.lookup(&b.name).expect("present")).collect(),
        complement_index: complement_names.iter().map(|n| space.lookup(n).expect("present")).collect(),
        complement: complement.into_iter().map(|(_, _, v)| v).collect(),
        space,
    })
}

/// Splits `s` along the deterministic Hodge decomposition.
pub fn decompose(s: &OchaStructure, bound: usize) -> Result<Decomposition> {
    let t = transfer_minimal(s, &hodge_decompose(s)?, bound)?;
    decompose_transfer(&t)
}

/// Splits `s = ι̂.target` using the data of an existing transfer. The
/// isomorphism restricts to `ι̂` on words in the minimal part; on words with
/// a contractible letter its components solve the morphism relation arity
/// by arity (that part of the Hom complex is acyclic).
pub fn decompose_transfer(t: &TransferResult) -> Result<Decomposition> {
    let s = &t.inclusion.target;
    let bound = t.bound;
    let closed = sector_sum(&t.contraction.closed)?;
    let open = sector_sum(&t.contraction.open)?;

    let mut sum = OchaStructure::new(closed.space.clone(), open.space.clone(), bound);
    let mut contractible = OchaStructure::new(
        GradedSpace::new(closed.space.tag(), closed.complement_index.iter().map(|&i| (closed.space.name(i), closed.space.degree(i))))?,
        GradedSpace::new(open.space.tag(), open.complement_index.iter().map(|&i| (open.space.name(i), open.space.degree(i))))?,
        bound,
    );
    let part_index = |part: &SectorSum, space: &GradedSpace| -> Vec<usize> {
        part.complement_index.iter().map(|&i| space.lookup(part.space.name(i)).expect("present")).collect()
    };
    let closed_part = part_index(&closed, &contractible.closed);
    let open_part = part_index(&open, &contractible.open);
    let sum_cdeg = sum.closed.degrees().to_vec();
    let remap = |v: &Vector, index: &[usize]| Vector::from_pairs(v.iter().map(|(i, c)| (index[i], c.clone())));
    for (&k, map) in &t.minimal.maps.closed {
        for (key, v) in map.entries() {
            let letters: Vec<usize> = key.iter().map(|&i| closed.small_index[i]).collect();
            sum.l_mut(k).insert(&letters, &[], remap(v, &closed.small_index), &sum_cdeg);
        }
    }
    for (&(p, q), map) in &t.minimal.maps.open {
        for (key, v) in map.entries() {
            let c: Vec<usize> = key[..p].iter().map(|&i| closed.small_index[i]).collect();
            let o: Vec<usize> = key[p..].iter().map(|&i| open.small_index[i]).collect();
            sum.n_mut(p, q).insert(&c, &o, remap(v, &open.small_index), &sum_cdeg);
        }
    }
    for (sector, part, sc, local) in [
        (Sector::Closed, &closed, &t.contraction.closed, &closed_part),
        (Sector::Open, &open, &t.contraction.open, &open_part),
    ] {
        let basis = Matrix::from_columns(sc.big.dim(), &part.complement);
        for (j, v) in part.complement.iter().enumerate() {
            let dv = apply_table(&sc.differential, v);
            if dv.is_zero() {
                continue;
            }
            let rhs: Vec<Scalar> = (0..sc.big.dim()).map(|i| dv.get(i)).collect();
            let coords = basis.solve(&rhs).ok_or_else(|| Error::Invalid("d leaves the complement".into()))?;
            let in_sum = Vector::from_pairs(coords.iter().enumerate().map(|(r, c)| (part.complement_index[r], c.clone())));
            let in_part = Vector::from_pairs(coords.into_iter().enumerate().map(|(r, c)| (local[r], c)));
            match sector {
                Sector::Closed => {
                    sum.l_mut(1).insert_raw(vec![part.complement_index[j]], in_sum);
                    contractible.l_mut(1).insert_raw(vec![local[j]], in_part);
                }
                Sector::Open => {
                    sum.n_mut(0, 1).insert_raw(vec![part.complement_index[j]], in_sum);
                    contractible.n_mut(0, 1).insert_raw(vec![local[j]], in_part);
                }
            }
        }
    }
    sum.maps = sum.maps.pruned();
    contractible.maps = contractible.maps.pruned();

    let mut iso = OchaMorphism::new(sum.clone(), s.clone());
    for (i, v) in t.contraction.closed.inclusion.iter().enumerate() {
        iso.maps.closed_mut(1).insert_raw(vec![closed.small_index[i]], v.clone());
    }
    for (j, v) in closed.complement.iter().enumerate() {
        iso.maps.closed_mut(1).insert_raw(vec![closed.complement_index[j]], v.clone());
    }
    for (i, v) in t.contraction.open.inclusion.iter().enumerate() {
        iso.maps.open_mut(0, 1).insert_raw(vec![open.small_index[i]], v.clone());
    }
    for (j, v) in open.complement.iter().enumerate() {
        iso.maps.open_mut(0, 1).insert_raw(vec![open.complement_index[j]], v.clone());
    }
    let small_of = |index: &[usize], letter: usize| index.iter().position(|&i| i == letter);
    let sum_degrees = (sum.closed.degrees().to_vec(), sum.open.degrees().to_vec());
    let sum_deg = crate::graded::Degrees { closed: &sum_degrees.0, open: &sum_degrees.1 };
    let small_cdeg = t.minimal.closed.degrees();
    for total in 1..=bound {
        let mut arities: Vec<(Sector, usize, usize)> = Vec::new();
        if total >= 2 {
            arities.push((Sector::Closed, total, 0));
        }
        arities.extend((0..=total).rev().map(|n| (Sector::Open, n, total - n)).filter(|&(_, n, m)| (n, m) != (0, 1)));
        for (sector, n, m) in arities {
            let mut unknowns: Vec<(Vec<usize>, usize)> = Vec::new();
            let mut mixed_words = Vec::new();
            for w in words(sum_deg, n, m) {
                let cs: Option<Vec<usize>> = w.closed.iter().map(|&l| small_of(&closed.small_index, l)).collect();
                let os: Option<Vec<usize>> = w.open.iter().map(|&l| small_of(&open.small_index, l)).collect();
                let mut key = w.closed.clone();
                key.extend(&w.open);
                if let (Some(cs), Some(os)) = (cs, os) {
                    let component = match sector {
                        Sector::Closed => t.inclusion.f(n),
                        Sector::Open => t.inclusion.f_open(n, m),
                    };
                    if let Some(map) = component {
                        let v = map.on_basis(&cs, &os, small_cdeg);
                        if !v.is_zero() {
                            component_mut(&mut iso, sector, n, m).insert_raw(key, v);
                        }
                    }
                    continue;
                }
                let degree = w.degree(sum_deg) as i32;
                for j in s.space(sector).of_degree(degree) {
                    unknowns.push((key.clone(), j));
                }
                mixed_words.push(w);
            }
            if unknowns.is_empty() && mixed_words.is_empty() {
                continue;
            }
            let mut lin: OchaMorphism<LinForm> = OchaMorphism {
                source: sum.map_coeffs(LinForm::from_scalar),
                target: s.map_coeffs(LinForm::from_scalar),
                maps: iso.maps.map_coeffs(LinForm::from_scalar),
                weak: false,
            };
            for (id, (key, j)) in unknowns.iter().enumerate() {
                let target = match sector {
                    Sector::Closed => lin.maps.closed_mut(n),
                    Sector::Open => lin.maps.open_mut(n, m),
                };
                target.insert_raw(key.clone(), Vector::term(*j, LinForm::unknown(id)));
            }
            let mut system = LinearSystem::new();
            for w in &mixed_words {
                for (_, form) in morphism_residual(&lin, &w.closed, &w.open, sector).iter() {
                    system.add(form)?;
                }
            }
            let values = system.solve();
            for (id, (key, j)) in unknowns.iter().enumerate() {
                if let Some(v) = values.get(&id) {
                    component_mut(&mut iso, sector, n, m).insert_raw(key.clone(), Vector::term(*j, v.clone()));
                }
            }
        }
    }
    iso.maps = iso.maps.pruned();
    let report = check_morphism(&iso, bound, bound);
    if let Some(i) = report.violations.keys().find(|i| i.word.len() <= bound) {
        return Err(Error::Axiom {
            axiom: "decomposition isomorphism".into(),
            detail: crate::structures::Report::<Scalar>::describe(i, &sum.closed, &sum.open),
        });
    }
    Ok(Decomposition {
        transfer: t.clone(),
        contractible,
        sum,
        isomorphism: iso,
        minimal_index: (closed.small_index, open.small_index),
    })
}

fn component_mut(f: &mut OchaMorphism, sector: Sector, n: usize, m: usize) -> &mut MultiMap {
    match sector {
        Sector::Closed => f.maps.closed_mut(n),
        Sector::Open => f.maps.open_mut(n, m),
    }
}

/// Inverse of a strict morphism with invertible linear part, computed arity
/// by arity from `(F∘G)_k = 0` for `k ≥ 2`.
pub fn invert_isomorphism(f: &OchaMorphism, bound: usize) -> Result<OchaMorphism> {
    if f.weak {
        return Err(Error::Precondition("inversion needs a strict morphism".into()));
    }
    let mut g = OchaMorphism::new(f.target.clone(), f.source.clone());
    let mut inverses = Vec::new();
    for sector in [Sector::Closed, Sector::Open] {
        let (src, tgt) = (f.source.space(sector), f.target.space(sector));
        if src.dim() != tgt.dim() {
            return Err(Error::Precondition(format!("linear part is not invertible on the {sector} sector")));
        }
        let linear = match sector {
            Sector::Closed => f.f(1),
            Sector::Open => f.f_open(0, 1),
        };
        let table = unary_table(linear, sector, src.dim());
        let inverse = Matrix::from_columns(tgt.dim(), &table)
            .inverse()
            .ok_or_else(|| Error::Precondition(format!("linear part is not invertible on the {sector} sector")))?;
        for b in 0..tgt.dim() {
            let column = inverse.column(b);
            if !column.is_zero() {
                component_mut(&mut g, sector, if sector == Sector::Closed { 1 } else { 0 }, 1).insert_raw(vec![b], column);
            }
        }
        inverses.push(inverse);
    }
    let degrees = (f.target.closed.degrees().to_vec(), f.target.open.degrees().to_vec());
    let deg = crate::graded::Degrees { closed: &degrees.0, open: &degrees.1 };
    for total in 1..=bound {
        for sector in [Sector::Closed, Sector::Open] {
            if sector == Sector::Closed && total < 2 {
                continue;
            }
            let fg = compose(&g, f, total)?;
            let arities: Vec<(usize, usize)> = match sector {
                Sector::Closed => vec![(total, 0)],
                Sector::Open => (0..=total).map(|n| (n, total - n)).filter(|&a| a != (0, 1)).collect(),
            };
            let inverse = &inverses[if sector == Sector::Closed { 0 } else { 1 }];
            for (n, m) in arities {
                let Some(rest) = (match sector {
                    Sector::Closed => fg.f(n),
                    Sector::Open => fg.f_open(n, m),
                }) else {
                    continue;
                };
                let rest = rest.clone();
                for w in words(deg, n, m) {
                    let v = rest.on_basis(&w.closed, &w.open, deg.closed);
                    if v.is_zero() {
                        continue;
                    }
                    let coords: Vec<Scalar> = (0..inverse.cols()).map(|i| v.get(i)).collect();
                    let solved = Vector::from_pairs(inverse.mul_vector(&coords).into_iter().enumerate()).negated();
                    let mut key = w.closed.clone();
                    key.extend(&w.open);
                    component_mut(&mut g, sector, n, m).insert_raw(key, solved);
                }
            }
        }
    }
    g.maps = g.maps.pruned();
    Ok(g)
}

/// `π̂` with `π̂∘ι̂ = id`: the minimal-part projection of the inverse of the
/// decomposition isomorphism.
pub fn quasi_inverse(t: &TransferResult) -> Result<OchaMorphism> {
    let d = decompose_transfer(t)?;
    let inverse = invert_isomorphism(&d.isomorphism, t.bound)?;
    let mut projection = OchaMorphism::new(d.sum.clone(), t.minimal.clone());
    for (i, &j) in d.minimal_index.0.iter().enumerate() {
        projection.maps.closed_mut(1).insert_raw(vec![j], Vector::basis(i));
    }
    for (i, &j) in d.minimal_index.1.iter().enumerate() {
        projection.maps.open_mut(0, 1).insert_raw(vec![j], Vector::basis(i));
    }
    let out = compose(&inverse, &projection, t.bound)?;
    let report = check_morphism(&out, t.bound, t.bound);
    if let Some(i) = report.violations.keys().find(|i| i.word.len() <= t.bound) {
        return Err(Error::Axiom {
            axiom: "quasi-inverse".into(),
            detail: crate::structures::Report::<Scalar>::describe(i, &out.source.closed, &out.source.open),
        });
    }
    Ok(out)
}

/// Whether the component tables of `f` and the identity agree on every
/// word of total length at most `bound`.
pub fn is_identity(f: &OchaMorphism, bound: usize) -> bool {
    let degrees = (f.source.closed.degrees().to_vec(), f.source.open.degrees().to_vec());
    let deg = crate::graded::Degrees { closed: &degrees.0, open: &degrees.1 };
    for total in 1..=bound {
        for n in 0..=total {
            let m = total - n;
            for w in words(deg, n, m) {
                let closed_value = if m == 0 { f.f(n).map(|x| x.on_basis(&w.closed, &[], deg.closed)) } else { None };
                let open_value = f.f_open(n, m).map(|x| x.on_basis(&w.closed, &w.open, deg.closed));
                let want_closed = if (n, m) == (1, 0) { Vector::basis(w.closed[0]) } else { Vector::zero() };
                let want_open = if (n, m) == (0, 1) { Vector::basis(w.open[0]) } else { Vector::zero() };
                if m == 0 && closed_value.unwrap_or_default() != want_closed {
                    return false;
                }
                if open_value.unwrap_or_default() != want_open {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::SectorTag;
    use crate::fixtures;
    use crate::structures::{from_leibniz_pair, identity_morphism, DgAssociative};

    fn massey_algebra(bound: usize) -> OchaStructure {
        fixtures::massey_algebra(bound).unwrap()
    }

    fn open_index(s: &OchaStructure, name: &str) -> usize {
        s.open.lookup(name).unwrap()
    }

    #[test]
    fn cohomology_of_massey_algebra() {
        let s = massey_algebra(4);
        let c = hodge_decompose(&s).unwrap();
        assert_eq!(c.open.small.dim(), 2);
        assert!(c.closed.small.is_empty());
        assert_eq!(c.open.betti(), vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn triple_product_survives() {
        let s = massey_algebra(5);
        let t = transfer_minimal(&s, &hodge_decompose(&s).unwrap(), 5).unwrap();
        let m = &t.minimal;
        let (a, b) = (open_index(m, "a"), open_index(m, "b"));
        let cdeg = m.closed.degrees();
        let m2 = m.n(0, 2).map(|x| x.on_basis(&[], &[a, a], cdeg)).unwrap_or_default();
        assert!(m2.is_zero());
        let m3 = m.n(0, 3).unwrap().on_basis(&[], &[a, a, a], cdeg);
        assert!(m3 == Vector::basis(b) || m3 == Vector::basis(b).negated(), "{m3:?}");
        assert!(check_minimal(m));
    }

    #[test]
    fn arity_two_is_cohomology_product() {
        let s = massey_algebra(3);
        let c = hodge_decompose(&s).unwrap();
        let t = transfer_minimal(&s, &c, 3).unwrap();
        let cdeg = s.closed.degrees();
        let small = t.minimal.open.dim();
        for x in 0..small {
            for y in 0..small {
                let big = s
                    .n(0, 2)
                    .unwrap()
                    .apply(&[], &[&c.open.include(&Vector::basis(x)), &c.open.include(&Vector::basis(y))], cdeg);
                let got = t.minimal.n(0, 2).map(|m| m.on_basis(&[], &[x, y], &[])).unwrap_or_default();
                assert_eq!(got, c.open.project(&big));
            }
        }
    }

    #[test]
    fn induced_identities_hold() {
        for s in [massey_algebra(3), pair_with_acyclic_pieces(3)] {
            let t = transfer_minimal(&s, &hodge_decompose(&s).unwrap(), 3).unwrap();
            assert!(induced_identities(&t).iter().all(|(_, ok)| *ok));
        }
    }

    #[test]
    fn trivial_inputs() {
        let space = GradedSpace::new(SectorTag::Plain, [("x", 0), ("y", 1)]).unwrap();
        let zero = DgAssociative::new(space.clone()).to_a_infinity(3).unwrap();
        let t = transfer_minimal(&zero, &hodge_decompose(&zero).unwrap(), 3).unwrap();
        assert_eq!(t.minimal.open.dim(), 2);
        assert!(t.minimal.maps.open.values().all(MultiMap::is_zero));

        let mut acyclic = DgAssociative::new(space);
        acyclic.set_differential("x", &[("y", 1)]).unwrap();
        let s = acyclic.to_a_infinity(3).unwrap();
        assert!(check_linear_contractible(&s));
        let t = transfer_minimal(&s, &hodge_decompose(&s).unwrap(), 3).unwrap();
        assert!(t.minimal.open.is_empty());
        assert!(!check_linear_contractible(&massey_algebra(3)));
    }

    #[test]
    fn decomposition_is_an_isomorphism() {
        let s = massey_algebra(4);
        let d = decompose(&s, 4).unwrap();
        assert!(check_linear_contractible(&d.contractible));
        assert_eq!(d.contractible.open.dim(), 4);
        assert_eq!(d.sum.open.dim(), 6);
        assert!(check_ocha(&d.sum, 4, 4).is_valid());
        let inverse = invert_isomorphism(&d.isomorphism, 4).unwrap();
        assert!(is_identity(&compose(&d.isomorphism, &inverse, 4).unwrap(), 4));
        assert!(is_identity(&compose(&inverse, &d.isomorphism, 4).unwrap(), 4));
    }

    #[test]
    fn quasi_inverse_is_left_inverse() {
        let s = massey_algebra(4);
        let t = transfer_minimal(&s, &hodge_decompose(&s).unwrap(), 4).unwrap();
        let pi = quasi_inverse(&t).unwrap();
        assert!(check_quasi_isomorphism(&pi).unwrap());
        assert!(is_identity(&compose(&t.inclusion, &pi, 4).unwrap(), 4));
        assert!(is_identity(&identity_morphism(&s), 4));
    }

    #[test]
    fn minimal_model_is_unique_up_to_isomorphism() {
        let s = massey_algebra(4);
        let other = fixtures::massey_alternative_contraction(&s).unwrap();
        let first = transfer_minimal(&s, &hodge_decompose(&s).unwrap(), 4).unwrap();
        let second = transfer_minimal(&s, &other, 4).unwrap();
        let pi = quasi_inverse(&first).unwrap();
        let between = compose(&second.inclusion, &pi, 4).unwrap();
        assert!(check_morphism(&between, 4, 4).is_valid());
        assert!(check_quasi_isomorphism(&between).unwrap());
        assert_eq!(between.source.open.dim(), between.target.open.dim());
    }

    #[test]
    fn mismatched_contraction_is_rejected() {
        let s = massey_algebra(3);
        let other = massey_algebra(3).map_coeffs(|c| c.clone());
        let mut c = hodge_decompose(&other).unwrap();
        c.open.differential = vec![Vector::zero(); c.open.big.dim()];
        assert!(transfer_minimal(&s, &c, 3).is_err());
    }

    fn pair_with_acyclic_pieces(bound: usize) -> OchaStructure {
        from_leibniz_pair(&fixtures::leibniz_pair_with_acyclic_pieces(), bound).unwrap()
    }

    #[test]
    fn both_sectors_transfer_and_split() {
        let s = pair_with_acyclic_pieces(3);
        let t = transfer_minimal(&s, &hodge_decompose(&s).unwrap(), 3).unwrap();
        assert_eq!((t.minimal.closed.dim(), t.minimal.open.dim()), (2, 4));
        let d = decompose_transfer(&t).unwrap();
        assert_eq!((d.contractible.closed.dim(), d.contractible.open.dim()), (2, 2));
        assert!(check_linear_contractible(&d.contractible));
        let inverse = invert_isomorphism(&d.isomorphism, 3).unwrap();
        assert!(is_identity(&compose(&d.isomorphism, &inverse, 3).unwrap(), 3));
        let pi = quasi_inverse(&t).unwrap();
        assert!(is_identity(&compose(&t.inclusion, &pi, 3).unwrap(), 3));
    }
}
