//! Classical dg Lie and dg associative algebras, Leibniz pairs, and the
//! strict OCHA they define after desuspension.

use std::collections::BTreeMap;

use super::relations::check_ocha;
use super::OchaStructure;
use crate::error::{Error, Result};
use crate::graded::{suspension_shift, GradedSpace, Ring, Scalar, SectorTag, Vector};

/// A linear map on basis elements.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearTable(pub BTreeMap<usize, Vector>);

impl LinearTable {
    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, c) in v.iter() {
            if let Some(image) = self.0.get(&i) {
                out.add_scaled(image, c);
            }
        }
        out
    }

    pub fn on_basis(&self, i: usize) -> Vector {
        self.0.get(&i).cloned().unwrap_or_else(Vector::zero)
    }
}

/// A bilinear map on basis pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BilinearTable(pub BTreeMap<(usize, usize), Vector>);

impl BilinearTable {
    pub fn apply(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                if let Some(image) = self.0.get(&(i, j)) {
                    out.add_scaled(image, &(x * y));
                }
            }
        }
        out
    }

    pub fn on_basis(&self, i: usize, j: usize) -> Vector {
        self.0.get(&(i, j)).cloned().unwrap_or_else(Vector::zero)
    }
}

fn axiom(name: &str, detail: String) -> Error {
    Error::Axiom { axiom: name.into(), detail }
}

fn sign(parity: i64) -> Scalar {
    Scalar::one().signed(parity)
}

fn par(a: i32, b: i32) -> i64 {
    a as i64 * b as i64
}

/// A dg Lie algebra in classical degrees: `d` of degree +1, bracket of degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct DgLie {
    pub space: GradedSpace,
    pub differential: LinearTable,
    pub bracket: BilinearTable,
}

impl DgLie {
    pub fn new(space: GradedSpace) -> Self {
        DgLie { space, differential: LinearTable::default(), bracket: BilinearTable::default() }
    }

    /// Sets `[x, y]` and `[y, x] = −(−1)^{xy}[x, y]`.
    pub fn set_bracket(&mut self, x: &str, y: &str, value: &[(&str, i64)]) -> Result<()> {
        let (i, j) = (self.space.lookup(x)?, self.space.lookup(y)?);
        let v = named(&self.space, value)?;
        let swap = v.signed(par(self.space.degree(i), self.space.degree(j)) + 1);
        self.bracket.0.insert((j, i), swap);
        self.bracket.0.insert((i, j), v);
        Ok(())
    }

    pub fn set_differential(&mut self, x: &str, value: &[(&str, i64)]) -> Result<()> {
        let i = self.space.lookup(x)?;
        let v = named(&self.space, value)?;
        self.differential.0.insert(i, v);
        Ok(())
    }

    /// Degrees, `d² = 0`, antisymmetry, Jacobi and the Leibniz rule for `d`.
    pub fn check(&self) -> Result<()> {
        let s = &self.space;
        let deg = s.degrees();
        for (&i, v) in &self.differential.0 {
            check_degree(s, v, deg[i] + 1, "differential")?;
        }
        for (&(i, j), v) in &self.bracket.0 {
            check_degree(s, v, deg[i] + deg[j], "bracket")?;
        }
        let dim = s.dim();
        for x in 0..dim {
            if !self.differential.apply(&self.differential.on_basis(x)).is_zero() {
                return Err(axiom("d^2 = 0", format!("on {}", s.name(x))));
            }
        }
        for x in 0..dim {
            for y in 0..dim {
                let lhs = self.bracket.on_basis(y, x);
                let rhs = self.bracket.on_basis(x, y).signed(par(deg[x], deg[y]) + 1);
                if lhs != rhs {
                    return Err(axiom("antisymmetry", format!("[{}, {}]", s.name(y), s.name(x))));
                }
                // d[x,y] = [dx,y] + (−1)^x [x,dy]
                let bx = Vector::basis(x);
                let by = Vector::basis(y);
                let mut r = self.differential.apply(&self.bracket.on_basis(x, y));
                r.add_scaled(&self.bracket.apply(&self.differential.on_basis(x), &by), &sign(1));
                r.add_scaled(&self.bracket.apply(&bx, &self.differential.on_basis(y)), &sign(deg[x] as i64 + 1));
                if !r.is_zero() {
                    return Err(axiom("d is a derivation of the bracket", format!("on {}, {}", s.name(x), s.name(y))));
                }
                for z in 0..dim {
                    // [x,[y,z]] = [[x,y],z] + (−1)^{xy}[y,[x,z]]
                    let bz = Vector::basis(z);
                    let mut r = self.bracket.apply(&bx, &self.bracket.on_basis(y, z));
                    r.add_scaled(&self.bracket.apply(&self.bracket.on_basis(x, y), &bz), &sign(1));
                    r.add_scaled(&self.bracket.apply(&by, &self.bracket.on_basis(x, z)), &sign(par(deg[x], deg[y]) + 1));
                    if !r.is_zero() {
                        return Err(axiom("Jacobi", format!("on {}, {}, {}", s.name(x), s.name(y), s.name(z))));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A dg associative algebra in classical degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct DgAssociative {
    pub space: GradedSpace,
    pub differential: LinearTable,
    pub product: BilinearTable,
}

impl DgAssociative {
    pub fn new(space: GradedSpace) -> Self {
        DgAssociative { space, differential: LinearTable::default(), product: BilinearTable::default() }
    }

    pub fn set_product(&mut self, a: &str, b: &str, value: &[(&str, i64)]) -> Result<()> {
        let (i, j) = (self.space.lookup(a)?, self.space.lookup(b)?);
        let v = named(&self.space, value)?;
        self.product.0.insert((i, j), v);
        Ok(())
    }

    pub fn set_differential(&mut self, a: &str, value: &[(&str, i64)]) -> Result<()> {
        let i = self.space.lookup(a)?;
        let v = named(&self.space, value)?;
        self.differential.0.insert(i, v);
        Ok(())
    }

    /// Degrees, `d² = 0`, associativity and the Leibniz rule.
    pub fn check(&self) -> Result<()> {
        let s = &self.space;
        let deg = s.degrees();
        for (&i, v) in &self.differential.0 {
            check_degree(s, v, deg[i] + 1, "differential")?;
        }
        for (&(i, j), v) in &self.product.0 {
            check_degree(s, v, deg[i] + deg[j], "product")?;
        }
        let dim = s.dim();
        for a in 0..dim {
            if !self.differential.apply(&self.differential.on_basis(a)).is_zero() {
                return Err(axiom("d^2 = 0", format!("on {}", s.name(a))));
            }
            for b in 0..dim {
                // d(ab) = (da)b + (−1)^a a(db)
                let mut r = self.differential.apply(&self.product.on_basis(a, b));
                r.add_scaled(&self.product.apply(&self.differential.on_basis(a), &Vector::basis(b)), &sign(1));
                r.add_scaled(&self.product.apply(&Vector::basis(a), &self.differential.on_basis(b)), &sign(deg[a] as i64 + 1));
                if !r.is_zero() {
                    return Err(axiom("Leibniz rule", format!("on {}, {}", s.name(a), s.name(b))));
                }
                for c in 0..dim {
                    let left = self.product.apply(&self.product.on_basis(a, b), &Vector::basis(c));
                    let right = self.product.apply(&Vector::basis(a), &self.product.on_basis(b, c));
                    if left != right {
                        return Err(axiom("associativity", format!("on {}, {}, {}", s.name(a), s.name(b), s.name(c))));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A dg Lie algebra acting on a dg associative algebra by derivations.
#[derive(Clone, Debug, PartialEq)]
pub struct LeibnizPair {
    pub lie: DgLie,
    pub algebra: DgAssociative,
    /// `X·a`, keyed by (Lie basis, algebra basis).
    pub action: BilinearTable,
}

impl LeibnizPair {
    pub fn new(lie: DgLie, algebra: DgAssociative) -> Self {
        LeibnizPair { lie, algebra, action: BilinearTable::default() }
    }

    pub fn set_action(&mut self, x: &str, a: &str, value: &[(&str, i64)]) -> Result<()> {
        let i = self.lie.space.lookup(x)?;
        let j = self.algebra.space.lookup(a)?;
        let v = named(&self.algebra.space, value)?;
        self.action.0.insert((i, j), v);
        Ok(())
    }

    /// The component axioms, then the derivation law (Xab), the action law
    /// (XYa) and the chain-map law, each reported by name.
    pub fn check(&self) -> Result<()> {
        self.lie.check()?;
        self.algebra.check()?;
        let g = &self.lie.space;
        let a = &self.algebra.space;
        let gdeg = g.degrees();
        let adeg = a.degrees();
        for (&(x, i), v) in &self.action.0 {
            check_degree(a, v, gdeg[x] + adeg[i], "action")?;
        }
        let act = |x: &Vector, v: &Vector| self.action.apply(x, v);
        let mul = |u: &Vector, v: &Vector| self.algebra.product.apply(u, v);
        for x in 0..g.dim() {
            let bx = Vector::basis(x);
            for i in 0..a.dim() {
                let bi = Vector::basis(i);
                for j in 0..a.dim() {
                    // X(ab) = (Xa)b + (−1)^{Xa} a(Xb)
                    let bj = Vector::basis(j);
                    let mut r = act(&bx, &mul(&bi, &bj));
                    r.add_scaled(&mul(&act(&bx, &bi), &bj), &sign(1));
                    r.add_scaled(&mul(&bi, &act(&bx, &bj)), &sign(par(gdeg[x], adeg[i]) + 1));
                    if !r.is_zero() {
                        return Err(axiom("Xab", format!("{} on {}·{}", g.name(x), a.name(i), a.name(j))));
                    }
                }
                for y in 0..g.dim() {
                    // [X,Y]a = X(Ya) − (−1)^{XY} Y(Xa)
                    let by = Vector::basis(y);
                    let mut r = act(&self.lie.bracket.on_basis(x, y), &bi);
                    r.add_scaled(&act(&bx, &act(&by, &bi)), &sign(1));
                    r.add_scaled(&act(&by, &act(&bx, &bi)), &sign(par(gdeg[x], gdeg[y])));
                    if !r.is_zero() {
                        return Err(axiom("XYa", format!("[{}, {}] on {}", g.name(x), g.name(y), a.name(i))));
                    }
                }
                // d(Xa) = (dX)a + (−1)^X X(da)
                let mut r = self.algebra.differential.apply(&act(&bx, &bi));
                r.add_scaled(&act(&self.lie.differential.on_basis(x), &bi), &sign(1));
                r.add_scaled(&act(&bx, &self.algebra.differential.on_basis(i)), &sign(gdeg[x] as i64 + 1));
                if !r.is_zero() {
                    return Err(axiom("chain map", format!("{} on {}", g.name(x), a.name(i))));
                }
            }
        }
        Ok(())
    }
}

fn named(space: &GradedSpace, pairs: &[(&str, i64)]) -> Result<Vector> {
    let mut v = Vector::zero();
    for (name, c) in pairs {
        v.add_term(space.lookup(name)?, crate::graded::int(*c));
    }
    Ok(v)
}

fn check_degree(space: &GradedSpace, v: &Vector, expected: i32, what: &str) -> Result<()> {
    for (i, _) in v.iter() {
        if space.degree(i) != expected {
            return Err(Error::Degree(format!("{what} lands on {} of degree {}, expected {expected}", space.name(i), space.degree(i))));
        }
    }
    Ok(())
}

impl DgLie {
    /// The strict L∞ structure on `↓𝔤`.
    pub fn to_l_infinity(&self, bound: usize) -> Result<OchaStructure> {
        let algebra = DgAssociative::new(GradedSpace::empty(SectorTag::Plain));
        from_leibniz_pair(&LeibnizPair::new(self.clone(), algebra), bound)
    }
}

impl DgAssociative {
    /// The strict A∞ structure on `↓A`.
    pub fn to_a_infinity(&self, bound: usize) -> Result<OchaStructure> {
        let lie = DgLie::new(GradedSpace::empty(SectorTag::Plain));
        from_leibniz_pair(&LeibnizPair::new(lie, self.clone()), bound)
    }
}

/// Desuspends a bilinear table: `μ(↓x, ↓y) = (−1)^{|x|} ↓(x·y)` with classical `|x|`.
fn desuspend_binary(table: &BilinearTable, left_degrees: &[i32]) -> Vec<((usize, usize), Vector)> {
    table.0.iter().map(|(&(i, j), v)| ((i, j), v.signed(left_degrees[i] as i64))).collect()
}

/// The strict OCHA of a Leibniz pair on `↓𝔤 ⊕ ↓A`: `l_1 = ↓d`,
/// `l_2(↓X, ↓Y) = (−1)^{|X|}↓[X, Y]`, `n_{0,1} = ↓d_A`,
/// `n_{0,2}(↓a, ↓b) = (−1)^{|a|}↓(ab)`, `n_{1,1}(↓X; ↓a) = (−1)^{|X|}↓(Xa)`.
/// The result is verified with [`check_ocha`] for `n + m ≤ bound`.
pub fn from_leibniz_pair(pair: &LeibnizPair, bound: usize) -> Result<OchaStructure> {
    pair.check()?;
    let closed = suspension_shift(&pair.lie.space, -1).with_tag(SectorTag::Closed);
    let open = suspension_shift(&pair.algebra.space, -1).with_tag(SectorTag::Open);
    let mut s = OchaStructure::new(closed, open, bound.max(2));
    let cdeg = s.closed.degrees().to_vec();
    let gdeg = pair.lie.space.degrees();
    let adeg = pair.algebra.space.degrees();
    for (&i, v) in &pair.lie.differential.0 {
        s.l_mut(1).insert(&[i], &[], v.clone(), &cdeg);
    }
    for ((i, j), v) in desuspend_binary(&pair.lie.bracket, gdeg) {
        s.l_mut(2).insert(&[i, j], &[], v, &cdeg);
    }
    for (&i, v) in &pair.algebra.differential.0 {
        s.n_mut(0, 1).insert(&[], &[i], v.clone(), &cdeg);
    }
    for ((i, j), v) in desuspend_binary(&pair.algebra.product, adeg) {
        s.n_mut(0, 2).insert(&[], &[i, j], v, &cdeg);
    }
    for ((x, i), v) in desuspend_binary(&pair.action, gdeg) {
        s.n_mut(1, 1).insert(&[x], &[i], v, &cdeg);
    }
    s.maps = s.maps.pruned();
    s.validate()?;
    let report = check_ocha(&s, bound, bound);
    if let Some(first) = report.violations.keys().find(|i| i.word.len() <= bound) {
        return Err(axiom("ocha relations", super::Report::<Scalar>::describe(first, &s.closed, &s.open)));
    }
    Ok(s)
}
