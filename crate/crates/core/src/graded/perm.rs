use std::fmt;

use crate::error::{Error, Result};
use crate::graded::ring::{int, Scalar};

/// A bijection of `{1..n}` stored as its image array, 1-indexed.
///
/// Acting on a tuple, `σ(c_1,…,c_n) = ±(c_{σ(1)},…,c_{σ(n)})`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::Invalid(format!("{image:?} is not a permutation")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (1..=n).collect() }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    /// `(σ∘τ)(i) = σ(τ(i))`.
    pub fn compose(&self, tau: &Permutation) -> Permutation {
        Permutation { image: tau.image.iter().map(|&i| self.image[i - 1]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { image: inv }
    }

    /// 0-based positions: entry `k` is the original index placed at slot `k`.
    pub fn order(&self) -> Vec<usize> {
        self.image.iter().map(|v| v - 1).collect()
    }

    /// Rearranges `items` into `(items[σ(1)], …, items[σ(n)])`.
    pub fn permute<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.image.iter().map(|&i| items[i - 1].clone()).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.image.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Parity of the Koszul sign incurred by rearranging graded letters with
/// degrees `degrees` into the order `order` (0-based original indices).
pub fn koszul_parity(order: &[usize], degrees: &[i32]) -> i64 {
    let mut parity = 0i64;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] {
                parity += (degrees[order[a]] as i64) * (degrees[order[b]] as i64);
            }
        }
    }
    parity.rem_euclid(2)
}

/// The Koszul sign `(-1)^{ε(σ)}` of `σ` acting on letters of the given degrees.
pub fn koszul_sign(sigma: &Permutation, degrees: &[i32]) -> Result<Scalar> {
    if sigma.len() != degrees.len() {
        return Err(Error::SizeMismatch { expected: sigma.len(), got: degrees.len() });
    }
    let parity = koszul_parity(&sigma.order(), degrees);
    Ok(if parity == 0 { int(1) } else { int(-1) })
}

/// All permutations preserving the order inside consecutive blocks of the
/// given lengths, in lexicographic order of their image arrays.
pub fn unshuffles(blocks: &[usize]) -> Vec<Permutation> {
    let mut out: Vec<Permutation> =
        block_assignments(blocks).into_iter().map(|order| Permutation { image: order.iter().map(|i| i + 1).collect() }).collect();
    out.sort();
    out
}

/// Block assignments as 0-based orders: the concatenation of the chosen
/// index sets of each block, each set increasing.
pub fn block_assignments(blocks: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut labels = vec![usize::MAX; n];
    assign_blocks(blocks, 0, &mut labels, &mut vec![0; blocks.len()], &mut out);
    out
}

fn assign_blocks(blocks: &[usize], pos: usize, labels: &mut Vec<usize>, filled: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if pos == labels.len() {
        let mut order = Vec::with_capacity(labels.len());
        for b in 0..blocks.len() {
            order.extend((0..labels.len()).filter(|&i| labels[i] == b));
        }
        out.push(order);
        return;
    }
    for b in 0..blocks.len() {
        if filled[b] < blocks[b] {
            filled[b] += 1;
            labels[pos] = b;
            assign_blocks(blocks, pos + 1, labels, filled, out);
            filled[b] -= 1;
        }
    }
}

/// Two-block unshuffles of `0..n` into a `k`-subset and its complement,
/// returned as `(subset, complement)` with both increasing.
pub fn splits(n: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(k);
    choose(n, k, 0, &mut chosen, &mut out);
    out
}

fn choose(n: usize, k: usize, start: usize, chosen: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
    if chosen.len() == k {
        let rest = (0..n).filter(|i| !chosen.contains(i)).collect();
        out.push((chosen.clone(), rest));
        return;
    }
    for i in start..n {
        if n - i < k - chosen.len() {
            break;
        }
        chosen.push(i);
        choose(n, k, i + 1, chosen, out);
        chosen.pop();
    }
}

/// Set partitions of `0..n` into exactly `parts` nonempty blocks, each block
/// increasing and blocks ordered by least element (each unordered partition
/// appears once).
pub fn set_partitions(n: usize, parts: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = Vec::new();
    partition_rec(0, n, parts, &mut current, &mut out);
    out
}

fn partition_rec(i: usize, n: usize, parts: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    if current.len() + (n - i) < parts {
        return;
    }
    if i == n {
        if current.len() == parts {
            out.push(current.clone());
        }
        return;
    }
    for b in 0..current.len() {
        current[b].push(i);
        partition_rec(i + 1, n, parts, current, out);
        current[b].pop();
    }
    if current.len() < parts {
        current.push(vec![i]);
        partition_rec(i + 1, n, parts, current, out);
        current.pop();
    }
}

/// Binomial coefficient as `usize`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::ring::int;

    #[test]
    fn koszul_examples() {
        let id = Permutation::identity(3);
        assert_eq!(koszul_sign(&id, &[1, 1, 1]).unwrap(), int(1));
        let swap = Permutation::new(vec![2, 1]).unwrap();
        assert_eq!(koszul_sign(&swap, &[1, 1]).unwrap(), int(-1));
        let cycle = Permutation::new(vec![2, 3, 1]).unwrap();
        assert_eq!(koszul_sign(&cycle, &[1, 1, 0]).unwrap(), int(-1));
        assert!(koszul_sign(&swap, &[1]).is_err());
    }

    #[test]
    fn unshuffle_examples() {
        assert_eq!(unshuffles(&[2, 1]).len(), 3);
        let u = unshuffles(&[1, 1]);
        assert_eq!(u, vec![Permutation::identity(2), Permutation::new(vec![2, 1]).unwrap()]);
        let u = unshuffles(&[2, 2]);
        assert_eq!(u.len(), 6);
        assert!(u.iter().all(|s| s.apply(1) < s.apply(2) && s.apply(3) < s.apply(4)));
    }

    #[test]
    fn permutation_rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
    }

    #[test]
    fn partitions_counted_by_stirling_numbers() {
        assert_eq!(set_partitions(4, 2).len(), 7);
        assert_eq!(set_partitions(5, 3).len(), 25);
        assert_eq!(set_partitions(3, 3).len(), 1);
        assert_eq!(set_partitions(0, 0).len(), 1);
    }
}
