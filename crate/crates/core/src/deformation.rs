//! Formal deformation theory over `ħℚ[ħ]/(ħ^N)`: Maurer–Cartan residuals and
//! order-by-order solutions, twisted structures, deformations of the open
//! sector, gauge paths and transport of solutions along morphisms.
//!
//! Maurer–Cartan elements and gauge generators carry no constant term, so a
//! sum with `k` insertions of them vanishes once `k ≥ N`; every sum below
//! stops at `N − 1` insertions.

use crate::coalgebra::words;
use crate::error::{Error, Result};
use crate::graded::{inv_factorial, GradedSpace, Ring, Scalar, Sector, TPoly, Trunc, Vector, int};
use crate::structures::{check_ocha, OchaMorphism, OchaStructure, Report, SectorContraction};

/// Degree of Maurer–Cartan elements in the suspended grading.
pub const MC_DEGREE: i32 = 0;
/// Degree of gauge generators in the suspended grading.
pub const GAUGE_DEGREE: i32 = -1;

/// `Σ coeff · ħ^power · name` modulo `ħ^order`.
pub fn formal(space: &GradedSpace, terms: &[(&str, usize, Scalar)], order: usize) -> Result<Vector<Trunc>> {
    let mut v = Vector::zero();
    for (name, power, coeff) in terms {
        v.add_term(space.lookup(name)?, Trunc::monomial(coeff.clone(), *power, order));
    }
    Ok(v)
}

/// `ħ · v` for a scalar vector.
pub fn hbar_times(v: &Vector, order: usize) -> Vector<Trunc> {
    v.map_coeffs(|c| Trunc::monomial(c.clone(), 1, order))
}

/// Coefficient of `ħ^power`.
pub fn coefficient(v: &Vector<Trunc>, power: usize) -> Vector {
    v.map_coeffs(|c| c.coeff(power))
}

pub fn truncate(v: &Vector<Trunc>, order: usize) -> Vector<Trunc> {
    v.map_coeffs(|c| c.truncated(order))
}

pub fn lift(s: &OchaStructure) -> OchaStructure<Trunc> {
    s.map_coeffs(Trunc::from_scalar)
}

/// A Maurer–Cartan candidate `(c̄, ō)` modulo `ħ^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct McPair {
    pub closed: Vector<Trunc>,
    pub open: Vector<Trunc>,
    pub order: usize,
}

impl McPair {
    pub fn zero(order: usize) -> Self {
        McPair { closed: Vector::zero(), open: Vector::zero(), order }
    }

    pub fn closed_only(closed: Vector<Trunc>, order: usize) -> Self {
        McPair { closed, open: Vector::zero(), order }
    }

    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order);
        McPair { closed: truncate(&self.closed, order), open: truncate(&self.open, order), order }
    }

    fn depth(&self) -> usize {
        self.order.saturating_sub(1)
    }

    fn validate(&self, s: &OchaStructure<impl Ring>) -> Result<()> {
        check_formal(&s.closed, &self.closed, MC_DEGREE, "closed Maurer–Cartan element")?;
        check_formal(&s.open, &self.open, MC_DEGREE, "open Maurer–Cartan element")
    }
}

fn check_formal(space: &GradedSpace, v: &Vector<Trunc>, degree: i32, what: &str) -> Result<()> {
    for (i, c) in v.iter() {
        if i >= space.dim() {
            return Err(Error::Invalid(format!("{what}: index {i} outside the space")));
        }
        if space.degree(i) != degree {
            return Err(Error::Degree(format!("{what} has component {} of degree {}, expected {degree}", space.name(i), space.degree(i))));
        }
        if !Ring::is_zero(&c.coeff(0)) {
            return Err(Error::Precondition(format!("{what} has a constant term at {}", space.name(i))));
        }
    }
    Ok(())
}

fn check_bound(s: &OchaStructure<impl Ring>, order: usize) -> Result<()> {
    if s.bound + 1 < order {
        return Err(Error::Bound(format!(
            "arity bound {} cannot represent the sums modulo ħ^{order} (need at least {})",
            s.bound,
            order - 1
        )));
    }
    Ok(())
}

/// `Σ_n 1/n! l_{n+k}(c̄^n, args)`.
fn insert_closed<R: Ring>(s: &OchaStructure<R>, c: &Vector<R>, depth: usize, args: &[&Vector<R>]) -> Vector<R> {
    let cdeg = s.closed.degrees();
    let mut out = Vector::zero();
    let max = if c.is_zero() { 0 } else { depth };
    for n in 0..=max {
        let Some(map) = s.l(n + args.len()) else { continue };
        let mut all: Vec<&Vector<R>> = vec![c; n];
        all.extend_from_slice(args);
        out.add_scaled(&map.apply(&all, &[], cdeg), &R::from_scalar(&inv_factorial(n)));
    }
    out
}

/// Weak compositions of `total` into `parts` parts.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// `Σ_n Σ_{m_0..m_q} 1/n! n_{n+p, Σm+q}(c̄^n, cs; ō^{m_0}, o_1, ō^{m_1}, …, o_q, ō^{m_q})`.
fn insert_open<R: Ring>(
    s: &OchaStructure<R>,
    c: &Vector<R>,
    o: &Vector<R>,
    depth: usize,
    closed_args: &[&Vector<R>],
    open_args: &[&Vector<R>],
) -> Vector<R> {
    let cdeg = s.closed.degrees();
    let (p, q) = (closed_args.len(), open_args.len());
    let mut out = Vector::zero();
    let max_n = if c.is_zero() { 0 } else { depth };
    for n in 0..=max_n {
        let max_m = if o.is_zero() { 0 } else { depth - n };
        let mut closed: Vec<&Vector<R>> = vec![c; n];
        closed.extend_from_slice(closed_args);
        let weight = R::from_scalar(&inv_factorial(n));
        for total in 0..=max_m {
            let Some(map) = s.n(n + p, total + q) else { continue };
            for comp in compositions(total, q + 1) {
                let mut open: Vec<&Vector<R>> = Vec::with_capacity(total + q);
                for (slot, &m) in comp.iter().enumerate() {
                    if slot > 0 {
                        open.push(open_args[slot - 1]);
                    }
                    open.extend(std::iter::repeat_n(o, m));
                }
                out.add_scaled(&map.apply(&closed, &open, cdeg), &weight);
            }
        }
    }
    out
}

/// `(𝔩_*(c̄), 𝔫_*(c̄; ō))`.
#[derive(Clone, Debug, PartialEq)]
pub struct McResidual {
    pub closed: Vector<Trunc>,
    pub open: Vector<Trunc>,
}

impl McResidual {
    pub fn is_zero(&self) -> bool {
        self.closed.is_zero() && self.open.is_zero()
    }
}

pub fn mc_residual(s: &OchaStructure, x: &McPair) -> Result<McResidual> {
    mc_residual_lifted(&lift(s), x)
}

fn mc_residual_lifted(s: &OchaStructure<Trunc>, x: &McPair) -> Result<McResidual> {
    x.validate(s)?;
    check_bound(s, x.order)?;
    let depth = x.depth();
    Ok(McResidual {
        closed: truncate(&insert_closed(s, &x.closed, depth, &[]), x.order),
        open: truncate(&insert_open(s, &x.closed, &x.open, depth, &[], &[]), x.order),
    })
}

/// Outcome of the order-by-order Maurer–Cartan solver.
#[derive(Clone, Debug, PartialEq)]
pub enum McSolve {
    Solved(Vector<Trunc>),
    /// `π(R_k) ≠ 0` at `ħ^order`; `class` lives in the cohomology of the
    /// contraction and `partial` is the solution through `ħ^{order−1}`.
    Obstructed { order: usize, class: Vector, partial: Vector<Trunc> },
}

/// Solves `𝔩_*(θ) = 0` from `θ_(1) = seed`: at `ħ^k` the equation reads
/// `l_1 θ_(k) + R_k = 0` and is solved by `θ_(k) = −h(R_k)` when `π(R_k) = 0`.
pub fn solve_mc(s: &OchaStructure, seed: &Vector, contraction: &SectorContraction, order: usize) -> Result<McSolve> {
    if contraction.sector != Sector::Closed || contraction.big != s.closed {
        return Err(Error::Precondition("contraction is not on the closed sector".into()));
    }
    if let Some(d) = s.l(1) {
        if !d.apply(&[seed], &[], s.closed.degrees()).is_zero() {
            return Err(Error::Precondition("seed is not a cocycle".into()));
        }
    }
    let lifted = lift(s);
    let mut theta = hbar_times(seed, order);
    for k in 2..order {
        let residual = mc_residual_lifted(&lifted, &McPair::closed_only(theta.clone(), order))?;
        debug_assert!((0..k).all(|j| coefficient(&residual.closed, j).is_zero()));
        let r = coefficient(&residual.closed, k);
        let class = contraction.project(&r);
        if !class.is_zero() {
            return Ok(McSolve::Obstructed { order: k, class, partial: theta });
        }
        let correction = contraction.homotope(&r).negated();
        theta.add(&correction.map_coeffs(|c| Trunc::monomial(c.clone(), k, order)));
    }
    let residual = mc_residual_lifted(&lifted, &McPair::closed_only(theta.clone(), order))?;
    if !residual.closed.is_zero() {
        return Err(Error::Axiom { axiom: "Maurer–Cartan equation".into(), detail: "solver left a nonzero residual".into() });
    }
    Ok(McSolve::Solved(theta))
}

fn relation_failure<R: Ring>(what: &str, report: &Report<R>, s: &OchaStructure<R>) -> Error {
    let detail = report
        .violations
        .keys()
        .next()
        .map(|i| Report::<R>::describe(i, &s.closed, &s.open))
        .unwrap_or_default();
    Error::Axiom { axiom: what.into(), detail }
}

/// The twisted weak structure `l′_k = Σ 1/n! l_{n+k}(c̄^n, −)` and
/// `n′_{p,q}` with `ō` inserted in every gap of the open inputs, for arities
/// up to the bound. The weak relations are re-checked for inputs of length
/// at most `bound − (N − 1)`, where the truncated sums are exact.
pub fn twist_ocha(s: &OchaStructure, x: &McPair) -> Result<OchaStructure<Trunc>> {
    let lifted = lift(s);
    x.validate(&lifted)?;
    check_bound(&lifted, x.order)?;
    let depth = x.depth();
    let mut out: OchaStructure<Trunc> = OchaStructure::new(s.closed.clone(), s.open.clone(), s.bound);
    out.weak = true;
    let cdeg = s.closed.degrees().to_vec();
    let basis: (Vec<Vector<Trunc>>, Vec<Vector<Trunc>>) =
        ((0..s.closed.dim()).map(Vector::basis).collect(), (0..s.open.dim()).map(Vector::basis).collect());
    for total in 0..=s.bound {
        for w in words(s.degrees(), total, 0) {
            let args: Vec<&Vector<Trunc>> = w.closed.iter().map(|&i| &basis.0[i]).collect();
            let v = truncate(&insert_closed(&lifted, &x.closed, depth, &args), x.order);
            if !v.is_zero() {
                out.l_mut(total).insert(&w.closed, &[], v, &cdeg);
            }
        }
        for p in 0..=total {
            for w in words(s.degrees(), p, total - p) {
                let cs: Vec<&Vector<Trunc>> = w.closed.iter().map(|&i| &basis.0[i]).collect();
                let os: Vec<&Vector<Trunc>> = w.open.iter().map(|&i| &basis.1[i]).collect();
                let v = truncate(&insert_open(&lifted, &x.closed, &x.open, depth, &cs, &os), x.order);
                if !v.is_zero() {
                    out.n_mut(p, total - p).insert(&w.closed, &w.open, v, &cdeg);
                }
            }
        }
    }
    out.maps = out.maps.pruned();
    let check = s.bound.saturating_sub(depth);
    let report = check_ocha(&out, check, check);
    if !report.is_valid() {
        return Err(relation_failure("twisted weak OCHA relations", &report, &out));
    }
    Ok(out)
}

/// `l′_0`, the curvature of a twisted structure.
pub fn closed_curvature(t: &OchaStructure<Trunc>) -> Vector<Trunc> {
    t.l(0).map(|m| m.on_basis(&[], &[], &[])).unwrap_or_default()
}

/// `n′_{0,0}`, the open curvature of a twisted structure.
pub fn open_curvature(t: &OchaStructure<Trunc>) -> Vector<Trunc> {
    t.n(0, 0).map(|m| m.on_basis(&[], &[], &[])).unwrap_or_default()
}

/// Whether the twisted structure is strict, i.e. both curvatures vanish.
pub fn is_strict(t: &OchaStructure<Trunc>) -> bool {
    closed_curvature(t).is_zero() && open_curvature(t).is_zero()
}

/// The closed part of [`twist_ocha`] with `ō = 0`.
pub fn twist_l_infinity(s: &OchaStructure, c: &Vector<Trunc>, order: usize) -> Result<OchaStructure<Trunc>> {
    let closed_only = OchaStructure { open: GradedSpace::empty(s.open.tag()), maps: l_part(&s.maps), ..s.clone() };
    twist_ocha(&closed_only, &McPair::closed_only(c.clone(), order))
}

fn l_part<R: Ring>(maps: &crate::graded::MapFamily<R>) -> crate::graded::MapFamily<R> {
    let mut out = maps.clone();
    out.open.clear();
    out
}

/// The open-sector A∞ structure `m′_q = n′_{0,q}` over `ħℚ[ħ]/(ħ^N)`.
#[derive(Clone, Debug)]
pub struct OpenDeformation {
    pub structure: OchaStructure<Trunc>,
    /// `m′_0 = n′_{0,0}`; nonzero exactly when the result is weak.
    pub curvature: Vector<Trunc>,
}

impl OpenDeformation {
    pub fn is_weak(&self) -> bool {
        !self.curvature.is_zero()
    }
}

/// Deforms `(Ho, 𝔪)` by a closed Maurer–Cartan element, or by a full pair
/// when `with_open` is set. The closed equation is required in both cases;
/// the open equation only with `with_open`, which makes the result strict.
pub fn deform_open_sector(s: &OchaStructure, x: &McPair, with_open: bool) -> Result<OpenDeformation> {
    let residual = mc_residual(s, x)?;
    if !residual.closed.is_zero() {
        return Err(Error::Precondition("closed Maurer–Cartan residual is nonzero".into()));
    }
    if with_open && !residual.open.is_zero() {
        return Err(Error::Precondition("open Maurer–Cartan residual is nonzero".into()));
    }
    let x = if with_open { x.clone() } else { McPair::closed_only(x.closed.clone(), x.order) };
    let twisted = twist_ocha(s, &x)?;
    let mut a: OchaStructure<Trunc> = OchaStructure::a_infinity(s.open.clone(), s.bound);
    for (&(p, q), map) in &twisted.maps.open {
        if p == 0 {
            a.maps.set_open(0, q, map.clone());
        }
    }
    let curvature = open_curvature(&twisted);
    a.weak = !curvature.is_zero();
    let check = s.bound.saturating_sub(x.depth());
    let report = check_ocha(&a, 0, check);
    if !report.is_valid() {
        return Err(relation_failure("deformed A∞ relations", &report, &a));
    }
    Ok(OpenDeformation { structure: a, curvature })
}

/// Gauge generators `α(t)` (closed) and `β(t)` (open), polynomial in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePath {
    pub alpha: Vector<TPoly<Trunc>>,
    pub beta: Vector<TPoly<Trunc>>,
}

impl GaugePath {
    pub fn constant(alpha: &Vector<Trunc>, beta: &Vector<Trunc>) -> Self {
        GaugePath { alpha: alpha.map_coeffs(|c| TPoly::constant(c.clone())), beta: beta.map_coeffs(|c| TPoly::constant(c.clone())) }
    }

    fn validate(&self, s: &OchaStructure) -> Result<()> {
        for (space, v, what) in [(&s.closed, &self.alpha, "gauge generator α"), (&s.open, &self.beta, "gauge generator β")] {
            for power in 0..v.iter().map(|(_, p)| p.coeffs().len()).max().unwrap_or(0) {
                check_formal(space, &v.map_coeffs(|p| p.coeff(power)), GAUGE_DEGREE, what)?;
            }
        }
        Ok(())
    }
}

/// Endpoint of a gauge path together with the solved path in `t`.
#[derive(Clone, Debug)]
pub struct GaugeResult {
    pub endpoint: McPair,
    pub closed_path: Vector<TPoly<Trunc>>,
    pub open_path: Vector<TPoly<Trunc>>,
}

/// Solves `dc̄/dt = Σ 1/k! l_{1+k}(α, c̄^k)` together with the open equation
/// `dō/dt = n′_{1,0}(α) + n′_{0,1}(β)` (twisted at `(c̄_t, ō_t)`), from
/// `start` at `t = 0`, by Picard iteration of exact integrals. Each sweep
/// fixes one more power of `ħ`.
pub fn gauge_transform(s: &OchaStructure, start: &McPair, path: &GaugePath) -> Result<GaugeResult> {
    path.validate(s)?;
    if !mc_residual(s, start)?.is_zero() {
        return Err(Error::Precondition("start is not a Maurer–Cartan solution".into()));
    }
    let order = start.order;
    let depth = start.depth();
    let truncate_t = |v: &Vector<TPoly<Trunc>>| v.map_coeffs(|p| TPoly::new(p.coeffs().iter().map(|c| c.truncated(order)).collect()));
    let alpha = truncate_t(&path.alpha);
    let beta = truncate_t(&path.beta);
    let lifted: OchaStructure<TPoly<Trunc>> = s.map_coeffs(|c| TPoly::constant(Trunc::from_scalar(c)));
    let c0 = start.closed.map_coeffs(|c| TPoly::constant(c.clone()));
    let o0 = start.open.map_coeffs(|c| TPoly::constant(c.clone()));
    let (mut c, mut o) = (c0.clone(), o0.clone());
    let mut converged = false;
    for _ in 0..=order + 1 {
        let dc = insert_closed(&lifted, &c, depth, &[&alpha]);
        let mut d_o = insert_open(&lifted, &c, &o, depth, &[&alpha], &[]);
        d_o.add(&insert_open(&lifted, &c, &o, depth, &[], &[&beta]));
        let mut next_c = c0.clone();
        next_c.add(&truncate_t(&dc).map_coeffs(TPoly::integral));
        let mut next_o = o0.clone();
        next_o.add(&truncate_t(&d_o).map_coeffs(TPoly::integral));
        if next_c == c && next_o == o {
            converged = true;
            break;
        }
        (c, o) = (next_c, next_o);
    }
    if !converged {
        return Err(Error::Invalid("gauge iteration did not stabilise".into()));
    }
    let at_one = |v: &Vector<TPoly<Trunc>>| v.map_coeffs(|p| p.eval_at(&int(1)).truncated(order));
    let endpoint = McPair { closed: at_one(&c), open: at_one(&o), order };
    if !mc_residual(s, &endpoint)?.is_zero() {
        return Err(Error::Axiom { axiom: "gauge endpoint".into(), detail: "endpoint is not a Maurer–Cartan solution".into() });
    }
    Ok(GaugeResult { endpoint, closed_path: c, open_path: o })
}

/// Pushforward `c̄′ = Σ 1/k! f_k(c̄^k)`, `ō′ = Σ 1/k! f_{k,l}(c̄^k; ō^l)`,
/// re-checked against the target equations.
pub fn transport_mc(f: &OchaMorphism, x: &McPair) -> Result<McPair> {
    if f.weak {
        return Err(Error::Precondition("transport needs a strict morphism".into()));
    }
    if !mc_residual(&f.source, x)?.is_zero() {
        return Err(Error::Precondition("input is not a Maurer–Cartan solution of the source".into()));
    }
    let maps = f.maps.map_coeffs(Trunc::from_scalar);
    let cdeg = f.source.closed.degrees();
    let depth = x.depth();
    let mut closed = Vector::zero();
    let mut open = Vector::zero();
    let max_k = if x.closed.is_zero() { 0 } else { depth };
    for k in 0..=max_k {
        let weight = Trunc::from_scalar(&inv_factorial(k));
        let cs: Vec<&Vector<Trunc>> = vec![&x.closed; k];
        if k >= 1 {
            if let Some(m) = maps.closed_map(k) {
                closed.add_scaled(&m.apply(&cs, &[], cdeg), &weight);
            }
        }
        let max_l = if x.open.is_zero() { 0 } else { depth - k };
        for l in 0..=max_l {
            if k + l == 0 {
                continue;
            }
            if let Some(m) = maps.open_map(k, l) {
                let os: Vec<&Vector<Trunc>> = vec![&x.open; l];
                open.add_scaled(&m.apply(&cs, &os, cdeg), &weight);
            }
        }
    }
    let image = McPair { closed: truncate(&closed, x.order), open: truncate(&open, x.order), order: x.order };
    if !mc_residual(&f.target, &image)?.is_zero() {
        return Err(Error::Axiom { axiom: "transported Maurer–Cartan equation".into(), detail: "image is not a solution".into() });
    }
    Ok(image)
}
