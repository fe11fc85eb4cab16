//! The adjoint L∞-map `ρ: Hc → Coder(T^c Ho)` of an OCHA.

use super::relations::{apply_refs, basis_args, run};
use super::{Instance, OchaStructure, Report};
use crate::coalgebra::{gerstenhaber_bracket, words, Word};
use crate::graded::{Degrees, MapFamily, Ring, Sector, Vector};

/// `ρ_p(c_1, …, c_p) = {n_{p,q}(c_1, …, c_p; −)}_q` as families on `Ho`.
#[derive(Clone, Debug)]
pub struct AdjointMap<R: Ring> {
    pub structure: OchaStructure<R>,
}

pub fn adjoint_l_infinity_map<R: Ring>(s: &OchaStructure<R>) -> AdjointMap<R> {
    AdjointMap { structure: s.clone() }
}

impl<R: Ring> AdjointMap<R> {
    fn open_only(&self) -> Degrees<'_> {
        Degrees { closed: &[], open: self.structure.open.degrees() }
    }

    /// `ρ_p` evaluated on homogeneous closed vectors; the family degree is
    /// `1 + Σ deg(c_i)`.
    pub fn rho(&self, closed: &[Vector<R>], closed_degree: i32) -> MapFamily<R> {
        let s = &self.structure;
        let cdeg = s.closed.degrees();
        let p = closed.len();
        let mut out = MapFamily::new(1 + closed_degree);
        for (&(arity, q), map) in &s.maps.open {
            if arity != p {
                continue;
            }
            let target = out.open_mut(0, q);
            for word in words(self.open_only(), 0, q) {
                let value = apply_refs(map, closed, &basis_args(&word.open), cdeg);
                if !value.is_zero() {
                    target.insert_raw(word.open.clone(), value);
                }
            }
        }
        out.pruned()
    }

    /// `𝔪 = {n_{0,q}}` as a family on `Ho`.
    pub fn m(&self) -> MapFamily<R> {
        let mut out = MapFamily::new(1);
        for (&(p, q), map) in &self.structure.maps.open {
            if p == 0 {
                out.set_open(0, q, map.clone());
            }
        }
        out
    }
}

/// Residuals of `ρ(l_1 X) + [𝔪, ρ(X)] = 0` for each closed basis element `X`
/// and open words of length up to `bound`; this is the one-closed-input
/// slice of the OCHA relations.
pub fn rho_chain_defects<R: Ring>(s: &OchaStructure<R>, bound: usize) -> Report<R> {
    let adjoint = adjoint_l_infinity_map(s);
    let m = adjoint.m();
    let cdeg = s.closed.degrees();
    let odeg = s.open.degrees();
    let open_only = Degrees { closed: &[], open: odeg };
    let families: Vec<MapFamily<R>> = (0..s.closed.dim())
        .map(|x| {
            let rho_x = adjoint.rho(&[Vector::basis(x)], cdeg[x]);
            let mut total = gerstenhaber_bracket(&m, &rho_x, open_only, bound);
            if let Some(l1) = s.l(1) {
                let dx = l1.on_basis(&[x], &[], cdeg);
                if !dx.is_zero() {
                    total = total.plus(&adjoint.rho(&[dx], cdeg[x] + 1));
                }
            }
            total
        })
        .collect();
    let instances: Vec<Instance> = (0..s.closed.dim())
        .flat_map(|x| {
            (0..=bound).flat_map(move |q| words(open_only, 0, q)).map(move |w| Instance {
                word: Word { closed: vec![x], open: w.open },
                output: Sector::Open,
            })
        })
        .collect();
    run("rho chain map", bound, instances, |i| families[i.word.closed[0]].corolla(&[], &i.word.open, &[]).open)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{GradedSpace, SectorTag};
    use crate::structures::relations::check_ocha;
    use crate::structures::testing::random_family;

    #[test]
    fn chain_condition_is_the_one_closed_input_slice() {
        let c = GradedSpace::new(SectorTag::Closed, [("c0", 0), ("c1", 1), ("cm", -1)]).unwrap();
        let o = GradedSpace::new(SectorTag::Open, [("o0", 0), ("o1", 1), ("om", -1)]).unwrap();
        for seed in [2, 6] {
            let mut s = OchaStructure::new(c.clone(), o.clone(), 3);
            s.maps = random_family(1, s.degrees(), s.degrees(), 1, 3, seed);
            s.maps.closed.retain(|&k, _| k == 1);
            let defects = rho_chain_defects(&s, 2);
            let slice = check_ocha(&s, 1, 2).filtered(|i| i.word.closed.len() == 1 && i.output == Sector::Open);
            assert!(!defects.is_valid());
            assert_eq!(defects.violations, slice.violations, "seed {seed}");
        }
    }

    #[test]
    fn no_closed_action_gives_zero_rho() {
        let c = GradedSpace::new(SectorTag::Closed, [("c", 0)]).unwrap();
        let o = GradedSpace::new(SectorTag::Open, [("o", -1)]).unwrap();
        let s: OchaStructure = OchaStructure::new(c, o, 3);
        let rho = adjoint_l_infinity_map(&s).rho(&[Vector::basis(0)], 0);
        assert!(rho.is_zero());
        assert!(rho_chain_defects(&s, 3).is_valid());
    }
}
