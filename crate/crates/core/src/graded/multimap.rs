use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::perm::koszul_parity;
use crate::graded::ring::{Ring, Scalar};
use crate::graded::space::Sector;
use crate::graded::vector::{Element, Vector};

/// How a multilinear map treats permutations of its inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// No symmetry; inputs are taken in the given order.
    Ordered,
    /// Graded symmetric in all inputs (all inputs closed).
    Symmetric,
    /// Graded symmetric in the closed block, ordered in the open block.
    Mixed,
}

/// Sorts a closed block into canonical (ascending index) order.
///
/// Returns the sorted block and the Koszul parity of the sort, or `None` when
/// a letter of odd degree repeats: graded symmetry forces such values to
/// vanish.
pub fn canonicalize_block(block: &[usize], degrees: &[i32]) -> Option<(Vec<usize>, i64)> {
    if block.len() < 2 {
        return Some((block.to_vec(), 0));
    }
    let mut order: Vec<usize> = (0..block.len()).collect();
    order.sort_by_key(|&i| block[i]);
    let sorted: Vec<usize> = order.iter().map(|&i| block[i]).collect();
    for w in sorted.windows(2) {
        if w[0] == w[1] && degrees[w[0]].rem_euclid(2) == 1 {
            return None;
        }
    }
    let letter_degrees: Vec<i32> = block.iter().map(|&b| degrees[b]).collect();
    Some((sorted, koszul_parity(&order, &letter_degrees)))
}

/// Sparse structure-constant table of a graded multilinear map
/// `Hc^{⊗p} ⊗ Ho^{⊗q} → H_output`.
///
/// Keys are the closed indices followed by the open indices. For symmetric and
/// mixed flavors the closed block of every key is stored in canonical order
/// and carries no sign.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiMap<R: Ring = Scalar> {
    pub closed_arity: usize,
    pub open_arity: usize,
    pub output: Sector,
    pub degree: i32,
    pub flavor: Flavor,
    table: BTreeMap<Vec<usize>, Vector<R>>,
}

impl<R: Ring> MultiMap<R> {
    /// Flavor is inferred: closed inputs are symmetric, open inputs ordered.
    pub fn new(closed_arity: usize, open_arity: usize, output: Sector, degree: i32) -> Self {
        let flavor = match (closed_arity, open_arity) {
            (0, _) => Flavor::Ordered,
            (_, 0) => Flavor::Symmetric,
            _ => Flavor::Mixed,
        };
        MultiMap { closed_arity, open_arity, output, degree, flavor, table: BTreeMap::new() }
    }

    /// Plain ordered map of arity `k` on an open (or plain) space.
    pub fn ordered(k: usize, degree: i32) -> Self {
        Self::new(0, k, Sector::Open, degree)
    }

    pub fn with_flavor(mut self, flavor: Flavor) -> Self {
        self.flavor = flavor;
        self
    }

    pub fn arity(&self) -> usize {
        self.closed_arity + self.open_arity
    }

    pub fn is_symmetric_in_closed(&self) -> bool {
        self.flavor != Flavor::Ordered
    }

    pub fn is_zero(&self) -> bool {
        self.table.values().all(Vector::is_zero)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vector<R>)> {
        self.table.iter()
    }

    /// Adds `value` at the given inputs, moving the closed block to canonical
    /// order with its Koszul sign. Repeated odd closed letters are stored as
    /// given (a nonzero value there violates graded symmetry).
    pub fn insert(&mut self, closed: &[usize], open: &[usize], value: Vector<R>, closed_degrees: &[i32]) {
        assert_eq!(closed.len(), self.closed_arity, "closed arity");
        assert_eq!(open.len(), self.open_arity, "open arity");
        let (block, parity) = if self.is_symmetric_in_closed() {
            let mut order: Vec<usize> = (0..closed.len()).collect();
            order.sort_by_key(|&i| closed[i]);
            let degs: Vec<i32> = closed.iter().map(|&c| closed_degrees[c]).collect();
            (order.iter().map(|&i| closed[i]).collect::<Vec<_>>(), koszul_parity(&order, &degs))
        } else {
            (closed.to_vec(), 0)
        };
        let mut key = block;
        key.extend_from_slice(open);
        self.insert_raw(key, value.signed(parity));
    }

    /// Adds `value` under `key` verbatim, without canonicalization.
    pub fn insert_raw(&mut self, key: Vec<usize>, value: Vector<R>) {
        let e = self.table.entry(key.clone()).or_default();
        e.add(&value);
        if e.is_zero() {
            self.table.remove(&key);
        }
    }

    pub fn raw(&self, key: &[usize]) -> Option<&Vector<R>> {
        self.table.get(key)
    }

    /// Value on basis inputs, with the canonicalization sign applied.
    pub fn on_basis(&self, closed: &[usize], open: &[usize], closed_degrees: &[i32]) -> Vector<R> {
        match self.lookup(closed, open, closed_degrees) {
            Some((parity, v)) => v.signed(parity),
            None => Vector::zero(),
        }
    }

    /// Stored value and the Koszul parity relating it to the requested order.
    pub fn lookup(&self, closed: &[usize], open: &[usize], closed_degrees: &[i32]) -> Option<(i64, &Vector<R>)> {
        if closed.len() != self.closed_arity || open.len() != self.open_arity {
            return None;
        }
        let (mut key, parity) = if self.is_symmetric_in_closed() {
            canonicalize_block(closed, closed_degrees)?
        } else {
            (closed.to_vec(), 0)
        };
        key.extend_from_slice(open);
        self.table.get(&key).map(|v| (parity, v))
    }

    /// Multilinear extension to vector arguments.
    pub fn apply(&self, closed: &[&Vector<R>], open: &[&Vector<R>], closed_degrees: &[i32]) -> Vector<R> {
        let mut out = Vector::zero();
        if closed.len() != self.closed_arity || open.len() != self.open_arity || self.table.is_empty() {
            return out;
        }
        let args: Vec<&Vector<R>> = closed.iter().chain(open.iter()).copied().collect();
        if args.iter().any(|a| a.is_zero()) {
            return out;
        }
        let p = self.closed_arity;
        let mut idx = vec![0usize; args.len()];
        let mut coeff_stack: Vec<R> = Vec::with_capacity(args.len());
        let supports: Vec<Vec<(usize, R)>> =
            args.iter().map(|a| a.iter().map(|(i, c)| (i, c.clone())).collect()).collect();
        expand(&supports, 0, &mut idx, &mut coeff_stack, &mut |letters, coeff| {
            if let Some((parity, v)) = self.lookup(&letters[..p], &letters[p..], closed_degrees) {
                out.add_scaled(v, &coeff.signed(parity));
            }
        });
        out
    }

    /// Checks `deg(output) = Σ deg(inputs) + degree` for every entry.
    pub fn validate_degrees(&self, closed_degrees: &[i32], open_degrees: &[i32], output_degrees: &[i32]) -> Result<()> {
        for (key, value) in &self.table {
            if key.len() != self.arity() {
                return Err(Error::Arity(format!("key {key:?} has wrong length")));
            }
            let (c, o) = key.split_at(self.closed_arity);
            if c.iter().any(|&i| i >= closed_degrees.len()) || o.iter().any(|&i| i >= open_degrees.len()) {
                return Err(Error::Invalid(format!("key {key:?} out of range")));
            }
            let input: i32 = c.iter().map(|&i| closed_degrees[i]).sum::<i32>() + o.iter().map(|&i| open_degrees[i]).sum::<i32>();
            for j in value.support() {
                if j >= output_degrees.len() {
                    return Err(Error::Invalid(format!("output index {j} out of range")));
                }
                if output_degrees[j] != input + self.degree {
                    return Err(Error::Degree(format!(
                        "entry {key:?} -> {j}: output degree {} but inputs sum to {input} and map degree is {}",
                        output_degrees[j], self.degree
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> MultiMap<S> {
        MultiMap {
            closed_arity: self.closed_arity,
            open_arity: self.open_arity,
            output: self.output,
            degree: self.degree,
            flavor: self.flavor,
            table: self
                .table
                .iter()
                .map(|(k, v)| (k.clone(), v.map_coeffs(&f)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Same signature, empty table.
    pub fn empty_like(&self) -> Self {
        MultiMap { table: BTreeMap::new(), ..self.clone() }
    }

    pub fn scaled(&self, c: &R) -> Self {
        let mut out = self.empty_like();
        for (k, v) in &self.table {
            out.insert_raw(k.clone(), v.scaled(c));
        }
        out
    }

    /// Entrywise sum of two maps with the same signature.
    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.table {
            out.insert_raw(k.clone(), v.clone());
        }
        out
    }
}

/// Enumerates all basis combinations of sparse arguments, passing the chosen
/// letters and the product of their coefficients.
pub(crate) fn expand<R: Ring>(
    supports: &[Vec<(usize, R)>],
    pos: usize,
    idx: &mut Vec<usize>,
    coeffs: &mut Vec<R>,
    f: &mut dyn FnMut(&[usize], &R),
) {
    if pos == supports.len() {
        let c = coeffs.last().cloned().unwrap_or_else(R::one);
        f(idx, &c);
        return;
    }
    for (i, c) in &supports[pos] {
        idx[pos] = *i;
        let prod = match coeffs.last() {
            Some(prev) => prev.times(c),
            None => c.clone(),
        };
        coeffs.push(prod);
        expand(supports, pos + 1, idx, coeffs, f);
        coeffs.pop();
    }
}

/// Evaluates `map` on homogeneous elements given closed-first.
pub fn evaluate<R: Ring>(map: &MultiMap<R>, args: &[Element<R>], closed_degrees: &[i32]) -> Result<Element<R>> {
    if args.len() != map.arity() {
        return Err(Error::Arity(format!("expected {} arguments, got {}", map.arity(), args.len())));
    }
    for (k, a) in args.iter().enumerate() {
        let want = if k < map.closed_arity { Sector::Closed } else { Sector::Open };
        if a.sector != want {
            return Err(Error::Arity(format!("argument {} should be {want}", k + 1)));
        }
    }
    let (c, o) = args.split_at(map.closed_arity);
    let cv: Vec<&Vector<R>> = c.iter().map(|e| &e.coeffs).collect();
    let ov: Vec<&Vector<R>> = o.iter().map(|e| &e.coeffs).collect();
    let degree = args.iter().map(|a| a.degree).sum::<i32>() + map.degree;
    Ok(Element { sector: map.output, degree, coeffs: map.apply(&cv, &ov, closed_degrees) })
}

/// One tensor factor in [`tensor_apply`].
pub enum TensorFactor<'a, R: Ring> {
    Identity,
    Map(&'a MultiMap<R>),
}

/// A signed pure tensor of elements.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorTerm<R: Ring> {
    pub coeff: R,
    pub factors: Vec<Element<R>>,
}

/// Applies `f_1 ⊗ f_2 ⊗ …` to `x_1 ⊗ x_2 ⊗ …`. Each map consumes the next
/// block of consecutive arguments; moving a map of degree `|f|` past
/// arguments of total degree `d` costs `(-1)^{|f| d}`.
pub fn tensor_apply<R: Ring>(factors: &[TensorFactor<'_, R>], args: &[Element<R>], closed_degrees: &[i32]) -> Result<TensorTerm<R>> {
    let needed: usize = factors
        .iter()
        .map(|f| match f {
            TensorFactor::Identity => 1,
            TensorFactor::Map(m) => m.arity(),
        })
        .sum();
    if needed != args.len() {
        return Err(Error::Arity(format!("factors consume {needed} arguments, got {}", args.len())));
    }
    let mut parity = 0i64;
    let mut passed = 0i64;
    let mut pos = 0;
    let mut out = Vec::with_capacity(factors.len());
    for f in factors {
        match f {
            TensorFactor::Identity => {
                passed += args[pos].degree as i64;
                out.push(args[pos].clone());
                pos += 1;
            }
            TensorFactor::Map(m) => {
                let block = &args[pos..pos + m.arity()];
                parity += m.degree as i64 * passed;
                let value = evaluate(m, block, closed_degrees)?;
                passed += block.iter().map(|a| a.degree as i64).sum::<i64>();
                out.push(value);
                pos += m.arity();
            }
        }
    }
    Ok(TensorTerm { coeff: R::one().signed(parity), factors: out })
}

/// Graded symmetry of the closed block: every stored entry, spread over all
/// permutations of its closed block with Koszul signs, must give consistent
/// values (including the vanishing forced by repeated odd letters).
pub fn check_symmetry<R: Ring>(map: &MultiMap<R>, closed_degrees: &[i32]) -> bool {
    if !map.is_symmetric_in_closed() || map.closed_arity < 2 {
        return true;
    }
    let p = map.closed_arity;
    let perms = crate::graded::perm::block_assignments(&vec![1; p]);
    let mut expanded: BTreeMap<Vec<usize>, Vector<R>> = BTreeMap::new();
    for (key, value) in map.entries() {
        let (closed, open) = key.split_at(p);
        let degs: Vec<i32> = closed.iter().map(|&c| closed_degrees[c]).collect();
        let mut seen: BTreeMap<Vec<usize>, Vector<R>> = BTreeMap::new();
        for order in &perms {
            let mut k: Vec<usize> = order.iter().map(|&i| closed[i]).collect();
            k.extend_from_slice(open);
            let v = value.signed(koszul_parity(order, &degs));
            if let Some(prev) = seen.get(&k) {
                if *prev != v {
                    return false;
                }
            } else {
                seen.insert(k, v);
            }
        }
        for (k, v) in seen {
            if let Some(prev) = expanded.get(&k) {
                if *prev != v {
                    return false;
                }
            } else {
                expanded.insert(k, v);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::ring::int;
    use crate::graded::space::{GradedSpace, SectorTag};

    fn odd_pair() -> GradedSpace {
        GradedSpace::new(SectorTag::Closed, [("c1", 1), ("c2", 1), ("c3", 3)]).unwrap()
    }

    #[test]
    fn table_lookup() {
        let a = GradedSpace::new(SectorTag::Plain, [("e", -1), ("u", -1)]).unwrap();
        let (e, u) = (a.lookup("e").unwrap(), a.lookup("u").unwrap());
        let mut m2: MultiMap = MultiMap::ordered(2, 1);
        m2.insert(&[], &[e, u], Vector::basis(u), &[]);
        let out = evaluate(&m2, &[Element::basis(&a, Sector::Open, e), Element::basis(&a, Sector::Open, u)], &[]).unwrap();
        assert_eq!(out.coeffs, Vector::basis(u));
    }

    #[test]
    fn symmetric_swap_carries_koszul_sign() {
        let s = odd_pair();
        let (c1, c2, c3) = (0, 1, 2);
        let mut l2: MultiMap = MultiMap::new(2, 0, Sector::Closed, 1);
        l2.insert(&[c1, c2], &[], Vector::basis(c3), s.degrees());
        let out = evaluate(&l2, &[Element::basis(&s, Sector::Closed, c2), Element::basis(&s, Sector::Closed, c1)], s.degrees()).unwrap();
        assert_eq!(out.coeffs, Vector::term(c3, int(-1)));
        assert!(check_symmetry(&l2, s.degrees()));
    }

    #[test]
    fn zero_argument_gives_zero() {
        let s = odd_pair();
        let mut l2: MultiMap = MultiMap::new(2, 0, Sector::Closed, 1);
        l2.insert(&[0, 1], &[], Vector::basis(2), s.degrees());
        let z = Element::zero(Sector::Closed, 1);
        let out = evaluate(&l2, &[z, Element::basis(&s, Sector::Closed, 0)], s.degrees()).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn corrupted_symmetric_table_detected() {
        let s = odd_pair();
        let mut l2: MultiMap = MultiMap::new(2, 0, Sector::Closed, 1);
        l2.insert_raw(vec![0, 1], Vector::basis(2));
        l2.insert_raw(vec![1, 0], Vector::term(2, int(2)));
        assert!(!check_symmetry(&l2, s.degrees()));
        let mut bad: MultiMap = MultiMap::new(2, 0, Sector::Closed, 1);
        bad.insert_raw(vec![0, 0], Vector::basis(2));
        assert!(!check_symmetry(&bad, s.degrees()));
    }

    #[test]
    fn tensor_apply_examples() {
        let s = GradedSpace::new(SectorTag::Plain, [("x", 1), ("y", 1), ("z", 1), ("w", 2)]).unwrap();
        let (x, y, z, w) = (s.lookup("x").unwrap(), s.lookup("y").unwrap(), s.lookup("z").unwrap(), s.lookup("w").unwrap());
        let mut f: MultiMap = MultiMap::ordered(1, 1);
        for i in [x, y, z] {
            f.insert(&[], &[i], Vector::basis(w), &[]);
        }
        let el = |i| Element::basis(&s, Sector::Open, i);
        let t = tensor_apply(&[TensorFactor::Identity, TensorFactor::Map(&f)], &[el(x), el(y)], &[]).unwrap();
        assert_eq!(t.coeff, int(-1));
        assert_eq!(t.factors[1].coeffs, Vector::basis(w));
        let t = tensor_apply(&[TensorFactor::Map(&f), TensorFactor::Identity], &[el(x), el(y)], &[]).unwrap();
        assert_eq!(t.coeff, int(1));
        let t = tensor_apply(&[TensorFactor::Identity, TensorFactor::Identity, TensorFactor::Map(&f)], &[el(x), el(y), el(z)], &[])
            .unwrap();
        assert_eq!(t.coeff, int(1));
    }

    #[test]
    fn degree_validation() {
        let s = odd_pair();
        let mut l2: MultiMap = MultiMap::new(2, 0, Sector::Closed, 1);
        l2.insert(&[0, 1], &[], Vector::basis(2), s.degrees());
        assert!(l2.validate_degrees(s.degrees(), &[], s.degrees()).is_ok());
        let mut bad: MultiMap = MultiMap::new(2, 0, Sector::Closed, 1);
        bad.insert(&[0, 1], &[], Vector::basis(0), s.degrees());
        assert!(bad.validate_degrees(s.degrees(), &[], s.degrees()).is_err());
    }
}
