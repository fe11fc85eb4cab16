//! Coefficient rings.
//!
//! Every multilinear computation in the crate is generic over [`Ring`]. The
//! ground field is [`Scalar`] (exact rationals); deformation theory runs over
//! [`Trunc`] (polynomials in the formal parameter truncated at a fixed order),
//! gauge paths over [`TPoly`], and order-by-order linear solves over
//! [`LinForm`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always reduced with positive denominator.
pub type Scalar = BigRational;

/// Builds a scalar from a small integer.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Builds the scalar `num/den`.
pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// `1/n!` as an exact scalar.
pub fn inv_factorial(n: usize) -> Scalar {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= BigInt::from(k);
    }
    Scalar::new(BigInt::one(), f)
}

/// Parses `"p/q"` or `"p"`. Anything that looks like a float is rejected.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let t = text.trim();
    if t.is_empty() || t.contains(['.', 'e', 'E']) {
        return None;
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// A commutative ring of characteristic zero containing the rationals.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_scalar(s: &Scalar) -> Self;

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn scaled(&self, s: &Scalar) -> Self {
        self.times(&Self::from_scalar(s))
    }

    /// Multiplies by `(-1)^parity`.
    fn signed(&self, parity: i64) -> Self {
        if parity.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.negated()
        }
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
}

/// Polynomial in the formal parameter `ħ` with rational coefficients,
/// truncated modulo `ħ^order`. Constants carry `order = usize::MAX` so that
/// they embed exactly into every truncation level.
#[derive(Clone, Debug)]
pub struct Trunc {
    coeffs: Vec<Scalar>,
    order: usize,
}

impl Trunc {
    pub fn new(mut coeffs: Vec<Scalar>, order: usize) -> Self {
        coeffs.truncate(order);
        let mut t = Trunc { coeffs, order };
        t.trim();
        t
    }

    /// `coeff · ħ^power` modulo `ħ^order`.
    pub fn monomial(coeff: Scalar, power: usize, order: usize) -> Self {
        let mut coeffs = vec![int(0); power + 1];
        coeffs[power] = coeff;
        Trunc::new(coeffs, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, power: usize) -> Scalar {
        self.coeffs.get(power).cloned().unwrap_or_else(|| int(0))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !Zero::is_zero(c))
    }

    /// Reduces modulo `ħ^order` (only ever lowers the order).
    pub fn truncated(&self, order: usize) -> Self {
        Trunc::new(self.coeffs.clone(), order.min(self.order))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl PartialEq for Trunc {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Ring for Trunc {
    fn zero() -> Self {
        Trunc { coeffs: Vec::new(), order: usize::MAX }
    }
    fn one() -> Self {
        Trunc { coeffs: vec![int(1)], order: usize::MAX }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let len = self.coeffs.len().max(other.coeffs.len()).min(order);
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Trunc::new(coeffs, order)
    }
    fn times(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Trunc { coeffs: Vec::new(), order };
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(order);
        let mut coeffs = vec![int(0); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j < len {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Trunc::new(coeffs, order)
    }
    fn negated(&self) -> Self {
        Trunc { coeffs: self.coeffs.iter().map(|c| -c).collect(), order: self.order }
    }
    fn from_scalar(s: &Scalar) -> Self {
        Trunc::new(vec![s.clone()], usize::MAX)
    }
}

impl fmt::Display for Trunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = format_scalar(&c.abs());
            match p {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}·ħ")?,
                _ => write!(f, "{a}·ħ^{p}")?,
            }
        }
        Ok(())
    }
}

/// Polynomial in an auxiliary real parameter `t` with coefficients in `R`.
/// Used for gauge paths, which are solved by exact formal integration.
#[derive(Clone, Debug, PartialEq)]
pub struct TPoly<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> TPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        TPoly::new(vec![c])
    }

    pub fn coeff(&self, power: usize) -> R {
        self.coeffs.get(power).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `∫_0^t`, exact.
    pub fn integral(&self) -> Self {
        let mut coeffs = vec![R::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scaled(&ratio(1, k as i64 + 1)));
        }
        TPoly::new(coeffs)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scaled(&int(k as i64)))
            .collect();
        TPoly::new(coeffs)
    }

    /// Value at `t = s` for a rational `s`.
    pub fn eval_at(&self, s: &Scalar) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.scaled(s).plus(c);
        }
        acc
    }
}

impl<R: Ring> Ring for TPoly<R> {
    fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        TPoly { coeffs: vec![R::one()] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        TPoly::new((0..len).map(|i| self.coeff(i).plus(&other.coeff(i))).collect())
    }
    fn times(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut coeffs = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].plus(&a.times(b));
            }
        }
        TPoly::new(coeffs)
    }
    fn negated(&self) -> Self {
        TPoly { coeffs: self.coeffs.iter().map(Ring::negated).collect() }
    }
    fn from_scalar(s: &Scalar) -> Self {
        TPoly::new(vec![R::from_scalar(s)])
    }
}

/// Affine-linear form `c + Σ a_i·x_i` in finitely many unknowns.
///
/// Products are only defined when at least one factor is constant; the
/// solvers that use this ring only ever place unknowns in one slot of each
/// term, so a nonlinear product indicates a bug and panics.
#[derive(Clone, Debug, PartialEq)]
pub struct LinForm {
    pub constant: Scalar,
    pub terms: std::collections::BTreeMap<usize, Scalar>,
}

impl LinForm {
    pub fn unknown(id: usize) -> Self {
        let mut terms = std::collections::BTreeMap::new();
        terms.insert(id, int(1));
        LinForm { constant: int(0), terms }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    /// Substitutes values for the unknowns (missing ones count as zero).
    pub fn evaluate(&self, values: &std::collections::BTreeMap<usize, Scalar>) -> Scalar {
        let mut acc = self.constant.clone();
        for (id, a) in &self.terms {
            if let Some(v) = values.get(id) {
                acc += a * v;
            }
        }
        acc
    }
}

impl Ring for LinForm {
    fn zero() -> Self {
        LinForm { constant: int(0), terms: Default::default() }
    }
    fn one() -> Self {
        LinForm { constant: int(1), terms: Default::default() }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.constant) && self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (id, a) in &other.terms {
            let e = terms.entry(*id).or_insert_with(|| int(0));
            *e += a;
            if Zero::is_zero(e) {
                terms.remove(id);
            }
        }
        LinForm { constant: &self.constant + &other.constant, terms }
    }
    fn times(&self, other: &Self) -> Self {
        let (c, form) = if self.is_constant() {
            (&self.constant, other)
        } else if other.is_constant() {
            (&other.constant, self)
        } else {
            panic!("product of two non-constant linear forms");
        };
        if Zero::is_zero(c) {
            return Self::zero();
        }
        LinForm {
            constant: &form.constant * c,
            terms: form.terms.iter().map(|(id, a)| (*id, a * c)).collect(),
        }
    }
    fn negated(&self) -> Self {
        LinForm {
            constant: -&self.constant,
            terms: self.terms.iter().map(|(id, a)| (*id, -a)).collect(),
        }
    }
    fn from_scalar(s: &Scalar) -> Self {
        LinForm { constant: s.clone(), terms: Default::default() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_parsing_rejects_floats() {
        assert_eq!(parse_scalar("3/6"), Some(ratio(1, 2)));
        assert_eq!(parse_scalar("-4"), Some(int(-4)));
        assert_eq!(parse_scalar("0.5"), None);
        assert_eq!(parse_scalar("1e3"), None);
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(format_scalar(&ratio(-6, 4)), "-3/2");
    }

    #[test]
    fn truncation_kills_high_powers() {
        let h = Trunc::monomial(int(1), 1, 3);
        let h2 = h.times(&h);
        assert_eq!(h2.coeff(2), int(1));
        assert!(h2.times(&h).is_zero());
        let c = Trunc::from_scalar(&int(5));
        assert_eq!(c.times(&h).coeff(1), int(5));
        assert_eq!(c.times(&h).order(), 3);
    }

    #[test]
    fn tpoly_integral_inverts_derivative() {
        let p: TPoly<Scalar> = TPoly::new(vec![int(0), int(2), ratio(3, 2)]);
        assert_eq!(p.derivative().integral(), p);
        assert_eq!(p.eval_at(&int(1)), ratio(7, 2));
    }

    #[test]
    fn inverse_factorials() {
        assert_eq!(inv_factorial(0), int(1));
        assert_eq!(inv_factorial(4), ratio(1, 24));
    }
}
