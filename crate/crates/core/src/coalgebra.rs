//! The mixed coalgebra `C(Hc) ⊗ T^c(Ho)`, lifts of map families to
//! coderivations and coalgebra morphisms, and their corolla projections.
//!
//! A word `(c_1…c_n; o_1…o_m)` stores its closed letters sorted; it stands for
//! the symmetrized tensor `Σ_σ ε(σ) c_σ(1)⊗…⊗c_σ(n)` followed by the open
//! letters. Plain tensor words have no closed letters, plain symmetric words
//! no open ones.

use std::collections::BTreeMap;

use crate::graded::family::{Corolla, Degrees, MapFamily};
use crate::graded::multimap::canonicalize_block;
use crate::graded::perm::{koszul_parity, set_partitions, splits};
use crate::graded::ring::{Ring, Scalar};
use crate::graded::vector::Vector;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub closed: Vec<usize>,
    pub open: Vec<usize>,
}

impl Word {
    pub fn empty() -> Self {
        Word { closed: Vec::new(), open: Vec::new() }
    }

    pub fn open(letters: &[usize]) -> Self {
        Word { closed: Vec::new(), open: letters.to_vec() }
    }

    /// Sorts the closed block; `None` if an odd closed letter repeats.
    pub fn canonical(closed: &[usize], open: &[usize], closed_degrees: &[i32]) -> Option<(Word, i64)> {
        let (sorted, parity) = canonicalize_block(closed, closed_degrees)?;
        Some((Word { closed: sorted, open: open.to_vec() }, parity))
    }

    pub fn len(&self) -> usize {
        self.closed.len() + self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree(&self, degrees: Degrees<'_>) -> i64 {
        degrees.closed_sum(&self.closed) + degrees.open_sum(&self.open)
    }
}

/// Formal linear combination of words.
#[derive(Clone, Debug, PartialEq)]
pub struct WordSum<R: Ring = Scalar> {
    terms: BTreeMap<Word, R>,
}

impl<R: Ring> Default for WordSum<R> {
    fn default() -> Self {
        WordSum { terms: BTreeMap::new() }
    }
}

impl<R: Ring> WordSum<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(word: Word) -> Self {
        let mut s = Self::zero();
        s.add_term(word, R::one());
        s
    }

    pub fn add_term(&mut self, word: Word, c: R) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(word.clone()).or_insert_with(R::zero);
        *e = e.plus(&c);
        if e.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add_scaled(&mut self, other: &WordSum<R>, c: &R) {
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x.times(c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, w: &Word) -> R {
        self.terms.get(w).cloned().unwrap_or_else(R::zero)
    }
}

/// Formal linear combination of `word ⊗ word`.
pub type PairSum<R> = BTreeMap<(Word, Word), R>;

fn add_pair<R: Ring>(sum: &mut PairSum<R>, key: (Word, Word), c: R) {
    if c.is_zero() {
        return;
    }
    let e = sum.entry(key.clone()).or_insert_with(R::zero);
    *e = e.plus(&c);
    if e.is_zero() {
        sum.remove(&key);
    }
}

/// `Δ(C; O) = Σ ε(σ) (-1)^{η} (C_σ¹; o_1…o_q) ⊗ (C_σ²; o_{q+1}…o_m)` over
/// two-block unshuffles of the closed letters and all cut points of the
/// open letters, `η = |C_σ²|·(o_1+…+o_q)`.
pub fn coproduct<R: Ring>(word: &Word, degrees: Degrees<'_>) -> PairSum<R> {
    let n = word.closed.len();
    let letter_degrees: Vec<i32> = word.closed.iter().map(|&c| degrees.closed[c]).collect();
    let mut out = PairSum::new();
    for k in 0..=n {
        for (first, second) in splits(n, k) {
            let order: Vec<usize> = first.iter().chain(second.iter()).copied().collect();
            let eps = koszul_parity(&order, &letter_degrees);
            let c1: Vec<usize> = first.iter().map(|&i| word.closed[i]).collect();
            let c2: Vec<usize> = second.iter().map(|&i| word.closed[i]).collect();
            let c2_degree = degrees.closed_sum(&c2);
            for q in 0..=word.open.len() {
                let eta = c2_degree * degrees.open_sum(&word.open[..q]);
                let left = Word { closed: c1.clone(), open: word.open[..q].to_vec() };
                let right = Word { closed: c2.clone(), open: word.open[q..].to_vec() };
                add_pair(&mut out, (left, right), R::one().signed(eps + eta));
            }
        }
    }
    out
}

/// Applies `Δ` to a sum of words.
pub fn coproduct_sum<R: Ring>(sum: &WordSum<R>, degrees: Degrees<'_>) -> PairSum<R> {
    let mut out = PairSum::new();
    for (w, c) in sum.iter() {
        for (k, x) in coproduct::<R>(w, degrees) {
            add_pair(&mut out, k, x.times(c));
        }
    }
    out
}

/// All canonical words with `n` closed and `m` open letters. Closed blocks
/// with a repeated odd letter are skipped (they vanish).
pub fn words(degrees: Degrees<'_>, n: usize, m: usize) -> Vec<Word> {
    let mut closed_blocks = Vec::new();
    multisets(degrees.closed, n, 0, &mut Vec::new(), &mut closed_blocks);
    let mut open_tuples = Vec::new();
    tuples(degrees.open.len(), m, &mut Vec::new(), &mut open_tuples);
    let mut out = Vec::with_capacity(closed_blocks.len() * open_tuples.len());
    for c in &closed_blocks {
        for o in &open_tuples {
            out.push(Word { closed: c.clone(), open: o.clone() });
        }
    }
    out
}

/// Canonical words of total length in `min_len..=max_len`.
pub fn words_up_to(degrees: Degrees<'_>, min_len: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for len in min_len..=max_len {
        for n in 0..=len {
            out.extend(words(degrees, n, len - n));
        }
    }
    out
}

fn multisets(degrees: &[i32], n: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == n {
        out.push(current.clone());
        return;
    }
    for i in start..degrees.len() {
        if current.last() == Some(&i) && degrees[i].rem_euclid(2) == 1 {
            continue;
        }
        current.push(i);
        multisets(degrees, n, i, current, out);
        current.pop();
    }
}

fn tuples(dim: usize, m: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if current.len() == m {
        out.push(current.clone());
        return;
    }
    for i in 0..dim {
        current.push(i);
        tuples(dim, m, current, out);
        current.pop();
    }
}

/// Calls `f` with one basis letter from each vector and the product of the
/// chosen coefficients.
pub(crate) fn for_each_product<R: Ring>(vectors: &[Vector<R>], f: &mut dyn FnMut(&[usize], &R)) {
    fn go<R: Ring>(vectors: &[Vector<R>], pos: usize, letters: &mut Vec<usize>, coeff: R, f: &mut dyn FnMut(&[usize], &R)) {
        if pos == vectors.len() {
            f(letters, &coeff);
            return;
        }
        for (i, c) in vectors[pos].iter() {
            letters.push(i);
            go(vectors, pos + 1, letters, coeff.times(c), f);
            letters.pop();
        }
    }
    if vectors.iter().any(Vector::is_zero) {
        return;
    }
    go(vectors, 0, &mut Vec::with_capacity(vectors.len()), R::one(), f);
}

/// The coderivation lift of a map family on one space pair.
#[derive(Clone, Debug)]
pub struct CoderivationView<R: Ring = Scalar> {
    pub family: MapFamily<R>,
    closed_degrees: Vec<i32>,
    open_degrees: Vec<i32>,
    /// Negates the given term (in generation order) of the lift of one word;
    /// used to build broken lifts for negative controls.
    flip: Option<(Word, usize)>,
}

pub fn lift_coderivation<R: Ring>(family: &MapFamily<R>, degrees: Degrees<'_>) -> CoderivationView<R> {
    CoderivationView {
        family: family.clone(),
        closed_degrees: degrees.closed.to_vec(),
        open_degrees: degrees.open.to_vec(),
        flip: None,
    }
}

impl<R: Ring> CoderivationView<R> {
    pub fn degrees(&self) -> Degrees<'_> {
        Degrees { closed: &self.closed_degrees, open: &self.open_degrees }
    }

    pub fn with_flipped_term(mut self, word: Word, index: usize) -> Self {
        self.flip = Some((word, index));
        self
    }

    pub fn apply(&self, word: &Word) -> WordSum<R> {
        let deg = self.degrees();
        let d = self.family.degree as i64;
        let n = word.closed.len();
        let m = word.open.len();
        let letter_degrees: Vec<i32> = word.closed.iter().map(|&c| deg.closed[c]).collect();
        let mut out = WordSum::zero();
        let mut counter = 0usize;
        let flip_index = match &self.flip {
            Some((w, i)) if w == word => Some(*i),
            _ => None,
        };
        let mut emit = |out: &mut WordSum<R>, w: Word, c: R| {
            let c = if flip_index == Some(counter) { c.negated() } else { c };
            counter += 1;
            out.add_term(w, c);
        };

        for (&k, map) in &self.family.closed {
            if k > n {
                continue;
            }
            for (inner, rest) in splits(n, k) {
                let order: Vec<usize> = inner.iter().chain(rest.iter()).copied().collect();
                let eps = koszul_parity(&order, &letter_degrees);
                let args: Vec<usize> = inner.iter().map(|&i| word.closed[i]).collect();
                let value = map.on_basis(&args, &[], deg.closed);
                for (out_letter, c) in value.iter() {
                    let mut block = vec![out_letter];
                    block.extend(rest.iter().map(|&i| word.closed[i]));
                    let Some((w, sort)) = Word::canonical(&block, &word.open, deg.closed) else { continue };
                    emit(&mut out, w, c.signed(eps + sort));
                }
            }
        }

        for (&(r, s), map) in &self.family.open {
            if r > n || s > m {
                continue;
            }
            for (outer, inner) in splits(n, n - r) {
                let order: Vec<usize> = outer.iter().chain(inner.iter()).copied().collect();
                let eps = koszul_parity(&order, &letter_degrees);
                let outer_letters: Vec<usize> = outer.iter().map(|&i| word.closed[i]).collect();
                let inner_letters: Vec<usize> = inner.iter().map(|&i| word.closed[i]).collect();
                let outer_degree = deg.closed_sum(&outer_letters);
                let inner_degree = deg.closed_sum(&inner_letters);
                for i in 0..=m - s {
                    let before = deg.open_sum(&word.open[..i]);
                    let parity = eps + d * (outer_degree + before) + before * inner_degree;
                    let value = map.on_basis(&inner_letters, &word.open[i..i + s], deg.closed);
                    for (out_letter, c) in value.iter() {
                        let mut open = word.open[..i].to_vec();
                        open.push(out_letter);
                        open.extend_from_slice(&word.open[i + s..]);
                        emit(&mut out, Word { closed: outer_letters.clone(), open }, c.signed(parity));
                    }
                }
            }
        }
        out
    }

    pub fn apply_sum(&self, sum: &WordSum<R>) -> WordSum<R> {
        let mut out = WordSum::zero();
        for (w, c) in sum.iter() {
            out.add_scaled(&self.apply(w), c);
        }
        out
    }

    /// Projection of `D(w)` to cogenerators.
    pub fn corolla(&self, word: &Word) -> Corolla<R> {
        self.family.corolla(&word.closed, &word.open, &self.closed_degrees)
    }

    /// Projection of a word sum under the family.
    pub fn corolla_of_sum(&self, sum: &WordSum<R>) -> Corolla<R> {
        let mut out = Corolla::zero();
        for (w, c) in sum.iter() {
            out.add_scaled(&self.corolla(w), c);
        }
        out
    }
}

/// Words where `Δ∘D ≠ (D⊗1 + 1⊗D)∘Δ`, over all canonical words of length
/// at most `bound`.
pub fn coderivation_failures<R: Ring>(view: &CoderivationView<R>, bound: usize) -> Vec<Word> {
    let deg = view.degrees();
    let d = view.family.degree as i64;
    let mut failures = Vec::new();
    for w in words_up_to(deg, 0, bound) {
        let lhs = coproduct_sum(&view.apply(&w), deg);
        let mut rhs = PairSum::new();
        for ((w1, w2), c) in coproduct::<R>(&w, deg) {
            for (x, xc) in view.apply(&w1).iter() {
                add_pair(&mut rhs, (x.clone(), w2.clone()), xc.times(&c));
            }
            let sign = d * w1.degree(deg);
            for (y, yc) in view.apply(&w2).iter() {
                add_pair(&mut rhs, (w1.clone(), y.clone()), yc.times(&c).signed(sign));
            }
        }
        if lhs != rhs {
            failures.push(w);
        }
    }
    failures
}

pub fn check_coderivation<R: Ring>(view: &CoderivationView<R>, bound: usize) -> bool {
    coderivation_failures(view, bound).is_empty()
}

/// Reads a family back from a rule assigning a corolla to each canonical
/// word of length `min_len..=max_len`.
pub fn family_from_corollas<R: Ring>(
    degree: i32,
    degrees: Degrees<'_>,
    min_len: usize,
    max_len: usize,
    mut rule: impl FnMut(&Word) -> Corolla<R>,
) -> MapFamily<R> {
    let mut family = MapFamily::new(degree);
    for w in words_up_to(degrees, min_len, max_len) {
        let value = rule(&w);
        let (p, q) = (w.closed.len(), w.open.len());
        if !value.closed.is_zero() {
            family.closed_mut(p).insert_raw(w.closed.clone(), value.closed.clone());
        }
        if !value.open.is_zero() {
            let mut key = w.closed.clone();
            key.extend_from_slice(&w.open);
            family.open_mut(p, q).insert_raw(key, value.open.clone());
        }
    }
    family.pruned()
}

/// Corolla components of `D∘D`, on words of length `1..=bound` (from 0 for
/// weak families).
pub fn square_as_corollas<R: Ring>(view: &CoderivationView<R>, bound: usize, weak: bool) -> MapFamily<R> {
    let start = if weak { 0 } else { 1 };
    family_from_corollas(2 * view.family.degree, view.degrees(), start, bound, |w| view.corolla_of_sum(&view.apply(w)))
}

/// `[f, g] = f∘̂g − (−1)^{|f||g|} g∘̂f`, read off on words up to `bound`.
pub fn gerstenhaber_bracket<R: Ring>(f: &MapFamily<R>, g: &MapFamily<R>, degrees: Degrees<'_>, bound: usize) -> MapFamily<R> {
    let lf = lift_coderivation(f, degrees);
    let lg = lift_coderivation(g, degrees);
    let sign = (f.degree as i64) * (g.degree as i64);
    family_from_corollas(f.degree + g.degree, degrees, 0, bound, |w| {
        let mut out = lf.corolla_of_sum(&lg.apply(w));
        out.add_scaled(&lg.corolla_of_sum(&lf.apply(w)), &R::one().signed(sign + 1));
        out
    })
}

/// The coalgebra-morphism lift of a degree-zero family.
#[derive(Clone, Debug)]
pub struct MorphismView<R: Ring = Scalar> {
    pub family: MapFamily<R>,
    source_closed: Vec<i32>,
    source_open: Vec<i32>,
    target_closed: Vec<i32>,
    target_open: Vec<i32>,
}

pub fn lift_morphism<R: Ring>(family: &MapFamily<R>, source: Degrees<'_>, target: Degrees<'_>) -> MorphismView<R> {
    MorphismView {
        family: family.clone(),
        source_closed: source.closed.to_vec(),
        source_open: source.open.to_vec(),
        target_closed: target.closed.to_vec(),
        target_open: target.open.to_vec(),
    }
}

impl<R: Ring> MorphismView<R> {
    pub fn source(&self) -> Degrees<'_> {
        Degrees { closed: &self.source_closed, open: &self.source_open }
    }

    pub fn target(&self) -> Degrees<'_> {
        Degrees { closed: &self.target_closed, open: &self.target_open }
    }

    /// `𝔣(C; O)`: closed letters are split into unordered blocks fed to
    /// `f_k` and an ordered list of (possibly empty) blocks fed together with
    /// consecutive open segments to `f_{k,l}`.
    pub fn apply(&self, word: &Word) -> WordSum<R> {
        let src = self.source();
        let n = word.closed.len();
        let m = word.open.len();
        let letter_degrees: Vec<i32> = word.closed.iter().map(|&c| src.closed[c]).collect();
        let mut out = WordSum::zero();
        let max_open_blocks = if m == 0 { n } else { n + m };
        let min_open_blocks = usize::from(m > 0);
        for j in min_open_blocks..=max_open_blocks {
            for segments in compositions(m, j) {
                let starts: Vec<usize> = segments.iter().scan(0, |acc, &q| {
                    let s = *acc;
                    *acc += q;
                    Some(s)
                }).collect();
                let mut labels = vec![0usize; n];
                self.assign(word, &letter_degrees, &segments, &starts, 0, &mut labels, &mut out);
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &self,
        word: &Word,
        letter_degrees: &[i32],
        segments: &[usize],
        starts: &[usize],
        pos: usize,
        labels: &mut Vec<usize>,
        out: &mut WordSum<R>,
    ) {
        let j = segments.len();
        if pos < labels.len() {
            for label in 0..=j {
                labels[pos] = label;
                self.assign(word, letter_degrees, segments, starts, pos + 1, labels, out);
            }
            return;
        }
        let blocks: Vec<Vec<usize>> =
            (1..=j).map(|k| (0..labels.len()).filter(|&p| labels[p] == k).collect()).collect();
        if blocks.iter().zip(segments).any(|(b, &q)| b.is_empty() && q == 0) {
            return;
        }
        let pool: Vec<usize> = (0..labels.len()).filter(|&p| labels[p] == 0).collect();
        let src = self.source();
        let tgt = self.target();
        let mut open_values = Vec::with_capacity(j);
        let mut tau = 0i64;
        for k in 0..j {
            let letters: Vec<usize> = blocks[k].iter().map(|&p| word.closed[p]).collect();
            let segment = &word.open[starts[k]..starts[k] + segments[k]];
            let Some(map) = self.family.open_map(letters.len(), segment.len()) else { return };
            let v = map.on_basis(&letters, segment, src.closed);
            if v.is_zero() {
                return;
            }
            open_values.push(v);
            tau += src.closed_sum(&letters) * src.open_sum(&word.open[..starts[k]]);
        }
        for parts in 0..=pool.len() {
            for partition in set_partitions(pool.len(), parts) {
                let closed_blocks: Vec<Vec<usize>> =
                    partition.iter().map(|b| b.iter().map(|&i| pool[i]).collect()).collect();
                let mut closed_values = Vec::with_capacity(parts);
                let mut missing = false;
                for b in &closed_blocks {
                    let letters: Vec<usize> = b.iter().map(|&p| word.closed[p]).collect();
                    match self.family.closed_map(letters.len()) {
                        Some(map) => {
                            let v = map.on_basis(&letters, &[], src.closed);
                            if v.is_zero() {
                                missing = true;
                                break;
                            }
                            closed_values.push(v);
                        }
                        None => {
                            missing = true;
                            break;
                        }
                    }
                }
                if missing {
                    continue;
                }
                let order: Vec<usize> =
                    closed_blocks.iter().flatten().chain(blocks.iter().flatten()).copied().collect();
                let eps = koszul_parity(&order, letter_degrees);
                let mut all = closed_values.clone();
                all.extend(open_values.iter().cloned());
                let split = closed_values.len();
                for_each_product(&all, &mut |letters, c| {
                    let Some((w, sort)) = Word::canonical(&letters[..split], &letters[split..], tgt.closed) else { return };
                    out.add_term(w, c.signed(eps + tau + sort));
                });
            }
        }
    }

    pub fn apply_sum(&self, sum: &WordSum<R>) -> WordSum<R> {
        let mut out = WordSum::zero();
        for (w, c) in sum.iter() {
            out.add_scaled(&self.apply(w), c);
        }
        out
    }

    pub fn corolla(&self, word: &Word) -> Corolla<R> {
        self.family.corolla(&word.closed, &word.open, &self.source_closed)
    }
}

/// Ordered compositions of `m` into `j` nonnegative parts.
pub(crate) fn compositions(m: usize, j: usize) -> Vec<Vec<usize>> {
    if j == 0 {
        return if m == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in compositions(m - first, j - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Words where the lift fails `(𝔣⊗𝔣)∘Δ = Δ∘𝔣`.
pub fn morphism_lift_failures<R: Ring>(view: &MorphismView<R>, bound: usize) -> Vec<Word> {
    let src = view.source();
    let tgt = view.target();
    let mut failures = Vec::new();
    for w in words_up_to(src, 0, bound) {
        let lhs = coproduct_sum(&view.apply(&w), tgt);
        let mut rhs = PairSum::new();
        for ((w1, w2), c) in coproduct::<R>(&w, src) {
            let a = view.apply(&w1);
            let b = view.apply(&w2);
            for (x, xc) in a.iter() {
                for (y, yc) in b.iter() {
                    add_pair(&mut rhs, (x.clone(), y.clone()), xc.times(yc).times(&c));
                }
            }
        }
        if lhs != rhs {
            failures.push(w);
        }
    }
    failures
}

/// `g∘f` of two morphism families, by composing lifts and extracting
/// corollas on source words of length `1..=bound`.
pub fn compose_morphisms<R: Ring>(
    f: &MapFamily<R>,
    g: &MapFamily<R>,
    source: Degrees<'_>,
    middle: Degrees<'_>,
    bound: usize,
) -> MapFamily<R> {
    let lf = lift_morphism(f, source, middle);
    family_from_corollas(0, source, 1, bound, |w| {
        let mut out = Corolla::zero();
        for (x, c) in lf.apply(w).iter() {
            out.add_scaled(&g.corolla(&x.closed, &x.open, middle.closed), c);
        }
        out
    })
}

/// Corollas of `𝔣∘D − D′∘𝔣` on one word.
pub fn morphism_defect<R: Ring>(
    f: &MorphismView<R>,
    source: &CoderivationView<R>,
    target: &CoderivationView<R>,
    word: &Word,
) -> Corolla<R> {
    let mut out = Corolla::zero();
    for (x, c) in source.apply(word).iter() {
        out.add_scaled(&f.corolla(x), c);
    }
    let minus = R::one().negated();
    for (x, c) in f.apply(word).iter() {
        out.add_scaled(&target.corolla(x), &c.times(&minus));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::ring::int;
    use crate::graded::space::{GradedSpace, SectorTag};

    fn spaces() -> (GradedSpace, GradedSpace) {
        let c = GradedSpace::new(SectorTag::Closed, [("c1", 1), ("c2", 0)]).unwrap();
        let o = GradedSpace::new(SectorTag::Open, [("o1", 1), ("o2", 2)]).unwrap();
        (c, o)
    }

    #[test]
    fn coproduct_of_open_words() {
        let (c, o) = spaces();
        let deg = Degrees::new(&c, &o);
        let d: PairSum<Scalar> = coproduct(&Word::open(&[0]), deg);
        assert_eq!(d.len(), 2);
        let d: PairSum<Scalar> = coproduct(&Word::open(&[0, 1]), deg);
        assert_eq!(d.len(), 3);
        assert!(d.values().all(|x| *x == int(1)));
    }

    #[test]
    fn mixed_coproduct_sign() {
        let (c, o) = spaces();
        let deg = Degrees::new(&c, &o);
        // closed index 1 is c1 (degree 1), open index 0 is o1 (degree 1)
        let w = Word { closed: vec![1], open: vec![0] };
        let d: PairSum<Scalar> = coproduct(&w, deg);
        assert_eq!(d[&(Word::open(&[0]), Word { closed: vec![1], open: vec![] })], int(-1));
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn coassociativity() {
        let (c, o) = spaces();
        let deg = Degrees::new(&c, &o);
        for w in words_up_to(deg, 0, 4) {
            let mut left: BTreeMap<(Word, Word, Word), Scalar> = BTreeMap::new();
            let mut right: BTreeMap<(Word, Word, Word), Scalar> = BTreeMap::new();
            for ((a, b), x) in coproduct::<Scalar>(&w, deg) {
                for ((a1, a2), y) in coproduct::<Scalar>(&a, deg) {
                    *left.entry((a1, a2, b.clone())).or_insert_with(|| int(0)) += &x * &y;
                }
                for ((b1, b2), y) in coproduct::<Scalar>(&b, deg) {
                    *right.entry((a.clone(), b1, b2)).or_insert_with(|| int(0)) += &x * &y;
                }
            }
            left.retain(|_, v| *v != int(0));
            right.retain(|_, v| *v != int(0));
            assert_eq!(left, right, "word {w:?}");
        }
    }

    #[test]
    fn differential_lift_is_leibniz() {
        let o = GradedSpace::new(SectorTag::Open, [("a", 0), ("b", 1)]).unwrap();
        let c = GradedSpace::empty(SectorTag::Closed);
        let deg = Degrees::new(&c, &o);
        let mut fam: MapFamily = MapFamily::new(1);
        fam.open_mut(0, 1).insert(&[], &[0], Vector::basis(1), &[]);
        let view = lift_coderivation(&fam, deg);
        let out = view.apply(&Word::open(&[0, 0]));
        assert_eq!(out.get(&Word::open(&[1, 0])), int(1));
        assert_eq!(out.get(&Word::open(&[0, 1])), int(1));
        assert!(check_coderivation(&view, 3));
    }

    #[test]
    fn random_mixed_lifts_are_coderivations() {
        let (c, o) = spaces();
        let deg = Degrees::new(&c, &o);
        // Degree-one maps with a few entries in each sector.
        let mut fam: MapFamily = MapFamily::new(1);
        fam.closed_mut(1).insert(&[0], &[], Vector::basis(1), deg.closed);
        fam.closed_mut(2).insert(&[0, 0], &[], Vector::term(1, int(3)), deg.closed);
        fam.open_mut(1, 1).insert(&[0], &[0], Vector::basis(1), deg.closed);
        fam.open_mut(1, 0).insert(&[1], &[], Vector::term(1, int(-2)), deg.closed);
        fam.open_mut(2, 0).insert(&[1, 0], &[], Vector::term(1, int(5)), deg.closed);
        fam.open_mut(0, 1).insert(&[], &[0], Vector::basis(1), deg.closed);
        let view = lift_coderivation(&fam, deg);
        assert!(check_coderivation(&view, 3));
        let broken = view.clone().with_flipped_term(Word { closed: vec![0], open: vec![0] }, 0);
        assert!(!check_coderivation(&broken, 3));
    }

    #[test]
    fn morphism_lift_examples() {
        let o = GradedSpace::new(SectorTag::Open, [("x", 0), ("y", 1)]).unwrap();
        let c = GradedSpace::empty(SectorTag::Closed);
        let deg = Degrees::new(&c, &o);
        let mut fam: MapFamily = MapFamily::new(0);
        fam.open_mut(0, 1).insert(&[], &[0], Vector::basis(0), &[]);
        fam.open_mut(0, 1).insert(&[], &[1], Vector::basis(1), &[]);
        fam.open_mut(0, 2).insert(&[], &[0, 1], Vector::term(1, int(7)), &[]);
        let view = lift_morphism(&fam, deg, deg);
        let out = view.apply(&Word::open(&[0, 1]));
        assert_eq!(out.get(&Word::open(&[0, 1])), int(1));
        assert_eq!(out.get(&Word::open(&[1])), int(7));
        assert!(morphism_lift_failures(&view, 3).is_empty());
    }

    #[test]
    fn mixed_morphism_lift_respects_coproduct() {
        let (c, o) = spaces();
        let deg = Degrees::new(&c, &o);
        let mut fam: MapFamily = MapFamily::new(0);
        fam.closed_mut(1).insert(&[0], &[], Vector::basis(0), deg.closed);
        fam.closed_mut(1).insert(&[1], &[], Vector::term(1, int(2)), deg.closed);
        fam.closed_mut(2).insert(&[0, 0], &[], Vector::basis(0), deg.closed);
        fam.open_mut(0, 1).insert(&[], &[0], Vector::basis(0), deg.closed);
        fam.open_mut(0, 1).insert(&[], &[1], Vector::basis(1), deg.closed);
        fam.open_mut(1, 0).insert(&[1], &[], Vector::basis(0), deg.closed);
        fam.open_mut(1, 1).insert(&[1], &[0], Vector::term(1, int(3)), deg.closed);
        fam.open_mut(1, 1).insert(&[0], &[1], Vector::basis(1), deg.closed);
        fam.open_mut(0, 2).insert(&[], &[0, 0], Vector::basis(1), deg.closed);
        let src = GradedSpace::new(SectorTag::Closed, [("c1", 1), ("c2", 0)]).unwrap();
        assert!(fam.validate(deg, Degrees::new(&src, &o)).is_ok());
        let view = lift_morphism(&fam, deg, deg);
        assert!(morphism_lift_failures(&view, 3).is_empty());
        let out = view.apply(&Word { closed: vec![1], open: vec![0] });
        assert_eq!(out.get(&Word { closed: vec![1], open: vec![0] }), int(2));
        assert_eq!(out.get(&Word::open(&[1])), int(3));
        // f_{1,0}(c1) ⊗ o1 and o1 ⊗ f_{1,0}(c1) cancel: τ = |c1||o1| is odd
        assert_eq!(out.get(&Word::open(&[0, 0])), int(0));
    }
}
