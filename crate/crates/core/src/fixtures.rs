//! Small named structures used by the test suites and the `ocha` CLI.

use crate::error::Result;
use crate::graded::{int, GradedSpace, Sector, SectorTag, Vector};
use crate::structures::{
    cohomology, from_leibniz_pair, hodge_decompose_custom, Contraction, DgAssociative, DgLie, LeibnizPair, OchaStructure, Pairing,
    SymplecticPair,
};

fn plain<const N: usize>(basis: [(&str, i32); N]) -> GradedSpace {
    GradedSpace::new(SectorTag::Plain, basis).expect("fixture basis")
}

/// Six-dimensional dg algebra (classical degrees) with `du = w`, `dp = q`,
/// `a·a = w`, `u·a = b`. Cohomology is spanned by `a` and `b` and the
/// triple Massey product of `a` is `±b`.
pub fn massey_dg_algebra() -> DgAssociative {
    let mut alg = DgAssociative::new(plain([("a", 1), ("u", 1), ("w", 2), ("b", 2), ("p", 2), ("q", 3)]));
    alg.set_differential("u", &[("w", 1)]).expect("fixture");
    alg.set_differential("p", &[("q", 1)]).expect("fixture");
    alg.set_product("a", "a", &[("w", 1)]).expect("fixture");
    alg.set_product("u", "a", &[("b", 1)]).expect("fixture");
    alg
}

pub fn massey_algebra(bound: usize) -> Result<OchaStructure> {
    massey_dg_algebra().to_a_infinity(bound)
}

/// A second Hodge decomposition of [`massey_algebra`]: representatives
/// `a`, `b + w` and complement spanned by `u + a`, `p`.
pub fn massey_alternative_contraction(s: &OchaStructure) -> Result<Contraction> {
    let basis = |n: &str| s.open.lookup(n).map(Vector::basis);
    let mut bw = basis("b")?;
    bw.add(&basis("w")?);
    let mut ua = basis("u")?;
    ua.add(&basis("a")?);
    Ok(Contraction {
        closed: cohomology(&s.closed, Sector::Closed, None)?,
        open: hodge_decompose_custom(&s.open, Sector::Open, s.n(0, 1), &[basis("a")?, bw], &[ua, basis("p")?])?,
    })
}

/// `ℚ[x]/(x²)` with unit `1`, both in degree 0.
pub fn dual_numbers(bound: usize) -> Result<OchaStructure> {
    let mut alg = DgAssociative::new(plain([("1", 0), ("x", 0)]));
    unital(&mut alg, &["1", "x"]);
    alg.to_a_infinity(bound)
}

/// [`dual_numbers`] with `m_2(1, x)` doubled, which breaks associativity
/// on `(1, 1, x)`.
pub fn corrupted_dual_numbers(bound: usize) -> Result<OchaStructure> {
    let mut s = dual_numbers(bound)?;
    let (one, x) = (s.open.lookup("1")?, s.open.lookup("x")?);
    let doubled = s.n(0, 2).expect("product").on_basis(&[], &[one, x], &[]).scaled(&int(2));
    s.n_mut(0, 2).insert_raw(vec![one, x], doubled);
    Ok(s)
}

/// Abelian graded Lie algebra on `x` (degree 1) and `y` (degree 2).
pub fn abelian_lie() -> DgLie {
    DgLie::new(plain([("x", 1), ("y", 2)]))
}

/// dg Lie algebra `x, w` (degree 1), `z` (degree 2) with `dw = z` and
/// `[x, x] = z`: the Maurer–Cartan seed `x` is unobstructed.
pub fn exact_square_lie() -> DgLie {
    let mut lie = DgLie::new(plain([("x", 1), ("w", 1), ("z", 2)]));
    lie.set_differential("w", &[("z", 1)]).expect("fixture");
    lie.set_bracket("x", "x", &[("z", 1)]).expect("fixture");
    lie
}

/// Graded Lie algebra `x, v` (degree 1), `z` (degree 2) with `[x, x] = z`
/// and zero differential: the seed `x` is obstructed at second order.
pub fn obstructed_lie() -> DgLie {
    let mut lie = DgLie::new(plain([("x", 1), ("v", 1), ("z", 2)]));
    lie.set_bracket("x", "x", &[("z", 1)]).expect("fixture");
    lie
}

/// dg Lie algebra on `e` (0), `x` (1), `w` (1), `z` (2) with
/// `de = w`, `[e, x] = x`, `[e, w] = w`, `[x, x] = z`, `[e, z] = 2z`.
pub fn small_dg_lie() -> DgLie {
    let mut lie = DgLie::new(plain([("e", 0), ("x", 1), ("w", 1), ("z", 2)]));
    lie.set_differential("e", &[("w", 1)]).expect("fixture");
    lie.set_bracket("e", "x", &[("x", 1)]).expect("fixture");
    lie.set_bracket("e", "w", &[("w", 1)]).expect("fixture");
    lie.set_bracket("x", "x", &[("z", 1)]).expect("fixture");
    lie.set_bracket("e", "z", &[("z", 2)]).expect("fixture");
    lie
}

fn unital(alg: &mut DgAssociative, elements: &[&str]) {
    for &e in elements {
        alg.set_product("1", e, &[(e, 1)]).expect("fixture");
        if e != "1" {
            alg.set_product(e, "1", &[(e, 1)]).expect("fixture");
        }
    }
}

/// `𝔤 = {X (0), Z (1)}` abelian acting on `A = ℚ[x, ε]/(x², ε²)` with
/// `ε` odd: `X` is the Euler derivation in `x` and `Z` sends `x` to `xε`.
pub fn odd_leibniz_pair() -> LeibnizPair {
    let g = plain([("X", 0), ("Z", 1)]);
    let mut alg = DgAssociative::new(plain([("1", 0), ("x", 0), ("e", 1), ("xe", 1)]));
    unital(&mut alg, &["1", "x", "e", "xe"]);
    for (p, q) in [("x", "e"), ("e", "x")] {
        alg.set_product(p, q, &[("xe", 1)]).expect("fixture");
    }
    let mut pair = LeibnizPair::new(DgLie::new(g), alg);
    pair.set_action("X", "x", &[("x", 1)]).expect("fixture");
    pair.set_action("X", "xe", &[("xe", 1)]).expect("fixture");
    pair.set_action("Z", "x", &[("xe", 1)]).expect("fixture");
    pair
}

pub fn leibniz_ocha(bound: usize) -> Result<OchaStructure> {
    from_leibniz_pair(&odd_leibniz_pair(), bound)
}

/// [`leibniz_ocha`] with a central pair `η` (classical 1), `ω` (classical 2),
/// `dη = ω`, and the extra operation `n_{1,0}(Z) = ω`.
pub fn extended_leibniz_ocha(bound: usize) -> Result<OchaStructure> {
    let base = odd_leibniz_pair();
    let mut alg = DgAssociative::new(plain([("1", 0), ("x", 0), ("e", 1), ("xe", 1), ("eta", 1), ("omega", 2)]));
    unital(&mut alg, &["1", "x", "e", "xe", "eta", "omega"]);
    for (p, q) in [("x", "e"), ("e", "x")] {
        alg.set_product(p, q, &[("xe", 1)]).expect("fixture");
    }
    alg.set_differential("eta", &[("omega", 1)])?;
    let mut pair = LeibnizPair::new(base.lie, alg);
    pair.set_action("X", "x", &[("x", 1)])?;
    pair.set_action("X", "xe", &[("xe", 1)])?;
    pair.set_action("Z", "x", &[("xe", 1)])?;
    let mut s = from_leibniz_pair(&pair, bound)?;
    let (z, eta) = (s.closed.lookup("Z")?, s.open.lookup("eta")?);
    let d_eta = s.n(0, 1).expect("differential").on_basis(&[], &[eta], &[]);
    let cdeg = s.closed.degrees().to_vec();
    s.n_mut(1, 0).insert(&[z], &[], d_eta, &cdeg);
    Ok(s)
}

/// [`odd_leibniz_pair`] enlarged by acyclic pieces `dU = V` in `𝔤` and
/// `ds = t` in `A`, with `U·x = s` and `V·x = t`.
pub fn leibniz_pair_with_acyclic_pieces() -> LeibnizPair {
    let mut lie = DgLie::new(plain([("X", 0), ("Z", 1), ("U", 0), ("V", 1)]));
    lie.set_differential("U", &[("V", 1)]).expect("fixture");
    let mut alg = DgAssociative::new(plain([("1", 0), ("x", 0), ("e", 1), ("xe", 1), ("s", 0), ("t", 1)]));
    alg.set_differential("s", &[("t", 1)]).expect("fixture");
    unital(&mut alg, &["1", "x", "e", "xe", "s", "t"]);
    for (p, q) in [("x", "e"), ("e", "x")] {
        alg.set_product(p, q, &[("xe", 1)]).expect("fixture");
    }
    let mut pair = LeibnizPair::new(lie, alg);
    for (x, a, r) in [("X", "x", "x"), ("X", "xe", "xe"), ("Z", "x", "xe"), ("X", "s", "s"), ("X", "t", "t"), ("U", "x", "s"), ("V", "x", "t")] {
        pair.set_action(x, a, &[(r, 1)]).expect("fixture");
    }
    pair
}

/// `Ho = ℚ[x]/(x²)` (suspended degree −1) with its product, `Hc = {z, z*}`,
/// `n_{1,0}(z) = x`, and the skew pairings `⟨z, z*⟩ = 1` and `⟨1, x⟩ = 1`
/// (the Frobenius form `ε(ab)` with `ε(x) = 1`).
pub fn frobenius_ocha() -> Result<(OchaStructure, SymplecticPair)> {
    let mut alg = DgAssociative::new(plain([("one", 0), ("x", 0)]));
    alg.set_product("one", "one", &[("one", 1)])?;
    alg.set_product("one", "x", &[("x", 1)])?;
    alg.set_product("x", "one", &[("x", 1)])?;
    let product = alg.to_a_infinity(2)?;
    let c = GradedSpace::new(SectorTag::Closed, [("z", -2), ("zs", 0)])?;
    let mut s = OchaStructure::new(c, product.open.clone(), 2);
    s.maps = product.maps;
    s.set_n(&["z"], &[], &[("x", int(1))])?;
    let (z, zs) = (s.closed.lookup("z")?, s.closed.lookup("zs")?);
    let (one, x) = (s.open.lookup("one")?, s.open.lookup("x")?);
    let mut w = SymplecticPair { closed: Pairing::new(2), open: Pairing::new(2) };
    w.closed.set_skew(z, zs, int(1), s.closed.degrees());
    w.open.set_skew(one, x, int(1), s.open.degrees());
    Ok((s, w))
}

/// [`frobenius_ocha`] with `⟨x, x⟩ = 1` added to the open pairing: still
/// nondegenerate, but not of the form `ε(ab)`, so not cyclic.
pub fn generic_pairing_ocha() -> Result<(OchaStructure, SymplecticPair)> {
    let (s, mut w) = frobenius_ocha()?;
    let x = s.open.lookup("x")?;
    w.open.set_skew(x, x, int(1), s.open.degrees());
    Ok((s, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::check_ocha;

    #[test]
    fn fixtures_are_valid() {
        massey_dg_algebra().check().unwrap();
        exact_square_lie().check().unwrap();
        obstructed_lie().check().unwrap();
        small_dg_lie().check().unwrap();
        odd_leibniz_pair().check().unwrap();
        leibniz_pair_with_acyclic_pieces().check().unwrap();
        for s in [massey_algebra(4).unwrap(), leibniz_ocha(4).unwrap(), extended_leibniz_ocha(4).unwrap()] {
            assert!(check_ocha(&s, 4, 4).is_valid());
        }
        assert!(check_ocha(&dual_numbers(3).unwrap(), 0, 3).is_valid());
        assert!(!check_ocha(&corrupted_dual_numbers(3).unwrap(), 0, 3).is_valid());
        abelian_lie().check().unwrap();
        let (s, w) = frobenius_ocha().unwrap();
        w.check(&s).unwrap();
        assert!(check_ocha(&s, 2, 2).is_valid());
        let (s, w) = generic_pairing_ocha().unwrap();
        w.check(&s).unwrap();
        massey_alternative_contraction(&massey_algebra(3).unwrap()).unwrap().check().unwrap();
    }
}
