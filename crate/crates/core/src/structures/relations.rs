//! Direct evaluation of the defining relations, and the codifferential
//! route through the coalgebra.

use rayon::prelude::*;

use super::{Instance, OchaStructure, Report};
use crate::coalgebra::{gerstenhaber_bracket, words};
use crate::graded::perm::{koszul_parity, splits};
use crate::graded::{MapFamily, MultiMap, Ring, Sector, Vector};

/// Relation instances with `n ≤ n_max` closed and `m ≤ m_max` open inputs.
/// `(0, 0)` is included only for weak structures.
pub(crate) fn instances<R: Ring>(s: &OchaStructure<R>, n_max: usize, m_max: usize) -> Vec<Instance> {
    let deg = s.degrees();
    let mut out = Vec::new();
    for n in 0..=n_max {
        for m in 0..=m_max {
            if n + m == 0 && !s.weak {
                continue;
            }
            for word in words(deg, n, m) {
                if m == 0 && !s.closed.is_empty() {
                    out.push(Instance { word: word.clone(), output: Sector::Closed });
                }
                if !s.open.is_empty() {
                    out.push(Instance { word, output: Sector::Open });
                }
            }
        }
    }
    out
}

pub(crate) fn run<R: Ring>(name: &str, bound: usize, instances: Vec<Instance>, residual: impl Fn(&Instance) -> Vector<R> + Sync) -> Report<R> {
    let results: Vec<(Instance, Vector<R>)> = instances.into_par_iter().map(|i| {
        let r = residual(&i);
        (i, r)
    }).collect();
    let mut report = Report::new(name, bound);
    for (i, r) in results {
        report.record(i, r);
    }
    report
}

pub(crate) fn basis_args<R: Ring>(letters: &[usize]) -> Vec<Vector<R>> {
    letters.iter().map(|&i| Vector::basis(i)).collect()
}

pub(crate) fn apply_refs<R: Ring>(map: &MultiMap<R>, closed: &[Vector<R>], open: &[Vector<R>], closed_degrees: &[i32]) -> Vector<R> {
    let c: Vec<&Vector<R>> = closed.iter().collect();
    let o: Vec<&Vector<R>> = open.iter().collect();
    map.apply(&c, &o, closed_degrees)
}

/// `Σ_{k} Σ_{σ ∈ Sh(k,n−k)} ε(σ) outer_{n−k+1}(inner_k(c_σ(1..k)), c_σ(k+1..n))`
/// over the closed maps of both families.
pub(crate) fn closed_insertions<R: Ring>(outer: &MapFamily<R>, inner: &MapFamily<R>, cdeg: &[i32], closed: &[usize]) -> Vector<R> {
    let n = closed.len();
    let letter_degrees: Vec<i32> = closed.iter().map(|&c| cdeg[c]).collect();
    let mut out = Vector::zero();
    for (&k, inner_map) in &inner.closed {
        if k > n {
            continue;
        }
        let Some(outer_map) = outer.closed_map(n - k + 1) else { continue };
        for (inside, rest) in splits(n, k) {
            let order: Vec<usize> = inside.iter().chain(rest.iter()).copied().collect();
            let eps = koszul_parity(&order, &letter_degrees);
            let inner_letters: Vec<usize> = inside.iter().map(|&i| closed[i]).collect();
            let value = apply_refs(inner_map, &basis_args(&inner_letters), &[], cdeg);
            if value.is_zero() {
                continue;
            }
            let mut args = vec![value];
            args.extend(rest.iter().map(|&i| Vector::basis(closed[i])));
            out.add_scaled(&apply_refs(outer_map, &args, &[], cdeg), &R::one().signed(eps));
        }
    }
    out
}

/// Open-output insertion sum on `(c_1…c_n; o_1…o_m)`: closed maps of
/// `inner` feed the first closed slot of `outer` with sign `ε(σ)`; open maps
/// of `inner` take the last closed letters of an unshuffle and a consecutive
/// open segment, with sign
/// `μ = ε(σ) + |inner|·(c_σ(1)+…+c_σ(p) + o_1+…+o_i) + (o_1+…+o_i)(c_σ(p+1)+…+c_σ(n))`.
pub(crate) fn open_insertions<R: Ring>(
    outer: &MapFamily<R>,
    inner: &MapFamily<R>,
    cdeg: &[i32],
    odeg: &[i32],
    closed: &[usize],
    open: &[usize],
) -> Vector<R> {
    let n = closed.len();
    let m = open.len();
    let d = inner.degree as i64;
    let letter_degrees: Vec<i32> = closed.iter().map(|&c| cdeg[c]).collect();
    let open_args: Vec<Vector<R>> = basis_args(open);
    let mut out = Vector::zero();

    for (&k, inner_map) in &inner.closed {
        if k > n {
            continue;
        }
        let Some(outer_map) = outer.open_map(n - k + 1, m) else { continue };
        for (inside, rest) in splits(n, k) {
            let order: Vec<usize> = inside.iter().chain(rest.iter()).copied().collect();
            let eps = koszul_parity(&order, &letter_degrees);
            let inner_letters: Vec<usize> = inside.iter().map(|&i| closed[i]).collect();
            let value = apply_refs(inner_map, &basis_args(&inner_letters), &[], cdeg);
            if value.is_zero() {
                continue;
            }
            let mut args = vec![value];
            args.extend(rest.iter().map(|&i| Vector::basis(closed[i])));
            out.add_scaled(&apply_refs(outer_map, &args, &open_args, cdeg), &R::one().signed(eps));
        }
    }

    for (&(r, s_len), inner_map) in &inner.open {
        if r > n || s_len > m {
            continue;
        }
        let p = n - r;
        let Some(outer_map) = outer.open_map(p, m - s_len + 1) else { continue };
        for (kept, inside) in splits(n, p) {
            let order: Vec<usize> = kept.iter().chain(inside.iter()).copied().collect();
            let eps = koszul_parity(&order, &letter_degrees);
            let outer_letters: Vec<usize> = kept.iter().map(|&i| closed[i]).collect();
            let inner_letters: Vec<usize> = inside.iter().map(|&i| closed[i]).collect();
            let outer_degree: i64 = outer_letters.iter().map(|&c| cdeg[c] as i64).sum();
            let inner_degree: i64 = inner_letters.iter().map(|&c| cdeg[c] as i64).sum();
            for i in 0..=m - s_len {
                let before: i64 = open[..i].iter().map(|&o| odeg[o] as i64).sum();
                let mu = eps + d * (outer_degree + before) + before * inner_degree;
                let value = apply_refs(inner_map, &basis_args(&inner_letters), &open_args[i..i + s_len], cdeg);
                if value.is_zero() {
                    continue;
                }
                let mut args: Vec<Vector<R>> = open_args[..i].to_vec();
                args.push(value);
                args.extend_from_slice(&open_args[i + s_len..]);
                out.add_scaled(&apply_refs(outer_map, &basis_args(&outer_letters), &args, cdeg), &R::one().signed(mu));
            }
        }
    }
    out
}

pub(crate) fn closed_residual<R: Ring>(s: &OchaStructure<R>, closed: &[usize]) -> Vector<R> {
    closed_insertions(&s.maps, &s.maps, s.closed.degrees(), closed)
}

pub(crate) fn open_residual<R: Ring>(s: &OchaStructure<R>, closed: &[usize], open: &[usize]) -> Vector<R> {
    open_insertions(&s.maps, &s.maps, s.closed.degrees(), s.open.degrees(), closed, open)
}

/// Direct check of all OCHA relations with `n ≤ n_max`, `m ≤ m_max`; the
/// closed instances are the L∞ relations of `(Hc, 𝔩)`.
pub fn check_ocha<R: Ring>(s: &OchaStructure<R>, n_max: usize, m_max: usize) -> Report<R> {
    run("ocha relations", n_max + m_max, instances(s, n_max, m_max), |i| match i.output {
        Sector::Closed => closed_residual(s, &i.word.closed),
        Sector::Open => open_residual(s, &i.word.closed, &i.word.open),
    })
}

/// L∞ relations on the closed sector, arities up to `n_max`.
pub fn check_l_infinity<R: Ring>(s: &OchaStructure<R>, n_max: usize) -> Report<R> {
    let start = usize::from(!s.weak);
    let insts: Vec<Instance> = (start..=n_max)
        .flat_map(|n| words(s.degrees(), n, 0))
        .map(|word| Instance { word, output: Sector::Closed })
        .collect();
    run("l-infinity relations", n_max, insts, |i| closed_residual(s, &i.word.closed))
}

/// A∞ relations `Σ (−1)^{o_1+…+o_i} m_k(o_1,…,o_i, m_l(…), …) = 0` on the open
/// sector, ignoring any closed data.
pub fn check_a_infinity<R: Ring>(s: &OchaStructure<R>, n_max: usize) -> Report<R> {
    let start = usize::from(!s.weak);
    let odeg = s.open.degrees();
    let insts: Vec<Instance> = (start..=n_max)
        .flat_map(|n| words(s.degrees(), 0, n))
        .map(|word| Instance { word, output: Sector::Open })
        .collect();
    run("a-infinity relations", n_max, insts, |inst| {
        let o = &inst.word.open;
        let n = o.len();
        let args: Vec<Vector<R>> = basis_args(o);
        let mut out = Vector::zero();
        for (&(p, l), inner) in &s.maps.open {
            if p != 0 || l > n {
                continue;
            }
            let Some(outer) = s.n(0, n + 1 - l) else { continue };
            for i in 0..=n - l {
                let sign: i64 = o[..i].iter().map(|&x| odeg[x] as i64).sum();
                let value = apply_refs(inner, &[], &args[i..i + l], &[]);
                let mut outer_args = args[..i].to_vec();
                outer_args.push(value);
                outer_args.extend_from_slice(&args[i + l..]);
                out.add_scaled(&apply_refs(outer, &[], &outer_args, &[]), &R::one().signed(sign));
            }
        }
        out
    })
}

/// sh-module relations for `k_{q+1} = n_{q,1}` over `(Hc, 𝔩)`, with `n`
/// closed inputs up to `n_max` and one module input.
pub fn check_sh_module<R: Ring>(s: &OchaStructure<R>, n_max: usize) -> Report<R> {
    let cdeg = s.closed.degrees();
    let insts: Vec<Instance> = (0..=n_max)
        .flat_map(|n| words(s.degrees(), n, 1))
        .map(|word| Instance { word, output: Sector::Open })
        .collect();
    run("sh-module relations", n_max + 1, insts, |inst| {
        let xi = &inst.word.closed;
        let module = [Vector::<R>::basis(inst.word.open[0])];
        let n = xi.len();
        let letter_degrees: Vec<i32> = xi.iter().map(|&c| cdeg[c]).collect();
        let mut out = Vector::zero();
        for p in 1..=n {
            let (Some(lp), Some(k)) = (s.l(p), s.n(n - p + 1, 1)) else { continue };
            for (first, rest) in splits(n, p) {
                let order: Vec<usize> = first.iter().chain(rest.iter()).copied().collect();
                let eps = koszul_parity(&order, &letter_degrees);
                let inner: Vec<usize> = first.iter().map(|&i| xi[i]).collect();
                let mut args = vec![apply_refs(lp, &basis_args(&inner), &[], cdeg)];
                args.extend(rest.iter().map(|&i| Vector::basis(xi[i])));
                out.add_scaled(&apply_refs(k, &args, &module, cdeg), &R::one().signed(eps));
            }
        }
        for p in 0..=n {
            let (Some(outer), Some(inner)) = (s.n(p, 1), s.n(n - p, 1)) else { continue };
            for (first, rest) in splits(n, p) {
                let order: Vec<usize> = first.iter().chain(rest.iter()).copied().collect();
                let first_letters: Vec<usize> = first.iter().map(|&i| xi[i]).collect();
                let rest_letters: Vec<usize> = rest.iter().map(|&i| xi[i]).collect();
                let sign = koszul_parity(&order, &letter_degrees) + first_letters.iter().map(|&c| cdeg[c] as i64).sum::<i64>();
                let value = apply_refs(inner, &basis_args(&rest_letters), &module, cdeg);
                out.add_scaled(&apply_refs(outer, &basis_args(&first_letters), &[value], cdeg), &R::one().signed(sign));
            }
        }
        out
    })
}

/// Strong homotopy derivation relations for `θ = {θ_q = θ.open[(0,q)]}` of
/// the A∞ structure on the open sector.
pub fn check_sh_derivation<R: Ring>(theta: &MapFamily<R>, s: &OchaStructure<R>, q_max: usize) -> Report<R> {
    let odeg = s.open.degrees();
    let insts: Vec<Instance> = (1..=q_max)
        .flat_map(|q| words(s.degrees(), 0, q))
        .map(|word| Instance { word, output: Sector::Open })
        .collect();
    run("sh-derivation relations", q_max, insts, |inst| {
        let o = &inst.word.open;
        let q = o.len();
        let args: Vec<Vector<R>> = basis_args(o);
        let mut out = Vector::zero();
        let mut insert = |outer: &MultiMap<R>, inner: &MultiMap<R>, len: usize| {
            for i in 0..=q - len {
                let beta: i64 = o[..i].iter().map(|&x| odeg[x] as i64).sum();
                let mut outer_args = args[..i].to_vec();
                outer_args.push(apply_refs(inner, &[], &args[i..i + len], &[]));
                outer_args.extend_from_slice(&args[i + len..]);
                out.add_scaled(&apply_refs(outer, &[], &outer_args, &[]), &R::one().signed(beta));
            }
        };
        for s_len in 1..=q {
            let r = q + 1 - s_len;
            if let (Some(th), Some(m)) = (theta.open_map(0, r), s.n(0, s_len)) {
                insert(th, m, s_len);
            }
            if let (Some(m), Some(th)) = (s.n(0, r), theta.open_map(0, s_len)) {
                insert(m, th, s_len);
            }
        }
        out
    })
}

/// The same relations read off `[𝔪, θ]` computed by the coalgebra bracket.
pub fn check_sh_derivation_bracket<R: Ring>(theta: &MapFamily<R>, s: &OchaStructure<R>, q_max: usize) -> Report<R> {
    let mut m_only = MapFamily::new(1);
    for (&(p, q), map) in &s.maps.open {
        if p == 0 {
            m_only.set_open(0, q, map.clone());
        }
    }
    let bracket = gerstenhaber_bracket(&m_only, theta, s.degrees(), q_max);
    let insts: Vec<Instance> = (1..=q_max)
        .flat_map(|q| words(s.degrees(), 0, q))
        .map(|word| Instance { word, output: Sector::Open })
        .collect();
    run("sh-derivation bracket", q_max, insts, |inst| {
        bracket.corolla(&[], &inst.word.open, &[]).open
    })
}

/// The same instances as [`check_ocha`], evaluated as corolla components
/// of `D∘D` (its single-letter part) for the lifted coderivation `D = 𝔩 + 𝔫`.
pub fn check_codifferential<R: Ring>(s: &OchaStructure<R>, n_max: usize, m_max: usize) -> Report<R> {
    let view = s.coderivation();
    run("codifferential square", n_max + m_max, instances(s, n_max, m_max), |i| {
        let squared = view.apply_sum(&view.apply(&i.word));
        let mut out = Vector::zero();
        for (w, c) in squared.iter() {
            let letter = match i.output {
                Sector::Closed if w.closed.len() == 1 && w.open.is_empty() => w.closed[0],
                Sector::Open if w.closed.is_empty() && w.open.len() == 1 => w.open[0],
                _ => continue,
            };
            out.add_term(letter, c.clone());
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{GradedSpace, SectorTag};
    use crate::structures::testing::random_family;

    fn spaces() -> (GradedSpace, GradedSpace) {
        let c = GradedSpace::new(SectorTag::Closed, [("c0", 0), ("c1", 1), ("c2", 2), ("cm", -1)]).unwrap();
        let o = GradedSpace::new(SectorTag::Open, [("o0", 0), ("o1", 1), ("om", -1)]).unwrap();
        (c, o)
    }

    fn random_structure(seed: u64, bound: usize) -> OchaStructure {
        let (c, o) = spaces();
        let mut s = OchaStructure::new(c, o, bound);
        s.maps = random_family(1, s.degrees(), s.degrees(), 1, bound, seed);
        s
    }

    #[test]
    fn direct_relations_match_codifferential_square() {
        for seed in 1..4 {
            let s = random_structure(seed, 3);
            let direct = check_ocha(&s, 2, 2);
            let coalgebra = check_codifferential(&s, 2, 2);
            assert!(!direct.is_valid());
            assert_eq!(direct.checked, coalgebra.checked);
            assert_eq!(direct.violations, coalgebra.violations, "seed {seed}");
        }
    }

    #[test]
    fn weak_relations_match_codifferential_square() {
        let (c, o) = spaces();
        let mut s = OchaStructure::new(c, o, 3);
        s.weak = true;
        s.maps = random_family(1, s.degrees(), s.degrees(), 0, 3, 11);
        assert!(s.l(0).is_some() || s.n(0, 0).is_some());
        assert_eq!(check_ocha(&s, 2, 1).violations, check_codifferential(&s, 2, 1).violations);
    }

    #[test]
    fn a_infinity_formula_matches_open_relations() {
        let (_, o) = spaces();
        let mut s = OchaStructure::a_infinity(o, 3);
        s.maps = random_family(1, s.degrees(), s.degrees(), 1, 3, 5);
        let generic = check_ocha(&s, 0, 3);
        let specific = check_a_infinity(&s, 3);
        assert_eq!(generic.violations, specific.violations);
        assert!(!specific.is_valid());
    }

    #[test]
    fn l_infinity_formula_matches_closed_relations() {
        let (c, _) = spaces();
        let mut s = OchaStructure::l_infinity(c, 3);
        s.maps = random_family(1, s.degrees(), s.degrees(), 1, 3, 9);
        assert_eq!(check_l_infinity(&s, 3).violations, check_ocha(&s, 3, 0).violations);
    }

    #[test]
    fn sh_module_is_the_one_open_input_slice() {
        let s = random_structure(21, 3);
        let mut only = s.clone();
        only.maps.open.retain(|&(_, q), _| q == 1);
        let direct = check_sh_module(&only, 2);
        let generic = check_ocha(&only, 2, 1).filtered(|i| i.word.open.len() == 1 && i.output == Sector::Open);
        assert_eq!(direct.violations, generic.violations);
    }

    #[test]
    fn sh_derivation_matches_bracket() {
        let (_, o) = spaces();
        let mut s = OchaStructure::a_infinity(o, 3);
        s.maps = random_family(1, s.degrees(), s.degrees(), 1, 3, 2);
        let theta = random_family(1, s.degrees(), s.degrees(), 1, 3, 3);
        let direct = check_sh_derivation(&theta, &s, 3);
        assert!(!direct.is_valid());
        assert_eq!(direct.violations, check_sh_derivation_bracket(&theta, &s, 3).violations);
    }

    #[test]
    fn zero_structure_is_valid() {
        let (c, o) = spaces();
        let s: OchaStructure = OchaStructure::new(c, o, 3);
        assert!(check_ocha(&s, 3, 3).is_valid());
    }
}
