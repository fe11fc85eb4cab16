//! Trees as multilinear maps: `φ(T)` is the composite of the corollas of an
//! OCHA along the tree.

use crate::coalgebra::Word;
use crate::error::{Error, Result};
use crate::graded::perm::koszul_parity;
use crate::graded::{Flavor, MultiMap, Ring, Sector, Vector};
use crate::structures::{Instance, OchaStructure, Report};

use super::{enumerate_up_to, tree_differential, Node, Operad, Tree, TreeSum};

fn corolla<'a, R: Ring>(s: &'a OchaStructure<R>, node: &Node) -> Result<Option<&'a MultiMap<R>>> {
    let (p, q, map) = match node {
        Node::ClosedVertex(ch) => (ch.len(), 0, s.l(ch.len())),
        Node::OpenVertex { closed, open } => (closed.len(), open.len(), s.n(closed.len(), open.len())),
        _ => return Ok(None),
    };
    if map.is_none() && p + q > s.bound {
        let name = if matches!(node, Node::ClosedVertex(_)) { format!("l_{p}") } else { format!("n_{{{p},{q}}}") };
        return Err(Error::MissingCorolla(format!("{name} exceeds the structure bound {}", s.bound)));
    }
    Ok(map)
}

fn require_corollas<R: Ring>(node: &Node, s: &OchaStructure<R>) -> Result<()> {
    corolla(s, node)?;
    node.children().into_iter().try_for_each(|c| require_corollas(c, s))
}

/// Evaluates a subtree on basis letters given in depth-first order. Each
/// child map passes the inputs to its left (closed inputs of open children
/// are first moved past the open inputs preceding them).
fn evaluate<R: Ring>(node: &Node, s: &OchaStructure<R>, closed: &[usize], open: &[usize]) -> Result<Vector<R>> {
    let cdeg = s.closed.degrees();
    let odeg = s.open.degrees();
    let csum = |letters: &[usize]| letters.iter().map(|&c| cdeg[c] as i64).sum::<i64>();
    let osum = |letters: &[usize]| letters.iter().map(|&o| odeg[o] as i64).sum::<i64>();
    match node {
        Node::ClosedLeaf(_) => return Ok(Vector::basis(closed[0])),
        Node::OpenLeaf => return Ok(Vector::basis(open[0])),
        _ => {}
    }
    let Some(map) = corolla(s, node)? else {
        return Ok(Vector::zero());
    };
    let closed_count = match node {
        Node::OpenVertex { closed, .. } => closed.len(),
        _ => node.children().len(),
    };
    let mut parity = 0i64;
    let mut passed = 0i64;
    let mut open_passed = 0i64;
    let (mut ci, mut oi) = (0, 0);
    let mut values = Vec::new();
    for (j, child) in node.children().into_iter().enumerate() {
        let nc = child.closed_labels().len();
        let no = child.open_leaves();
        let (cb, ob) = (&closed[ci..ci + nc], &open[oi..oi + no]);
        if j >= closed_count {
            parity += csum(cb) * open_passed;
        }
        parity += child.vertices() as i64 * passed;
        let value = evaluate(child, s, cb, ob)?;
        if value.is_zero() {
            return Ok(Vector::zero());
        }
        values.push(value);
        passed += csum(cb) + osum(ob);
        open_passed += osum(ob);
        ci += nc;
        oi += no;
    }
    let refs: Vec<&Vector<R>> = values.iter().collect();
    let (c, o) = refs.split_at(closed_count);
    Ok(map.apply(c, o, cdeg).signed(parity))
}

fn tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![vec![]], |acc, _| {
        acc.iter()
            .flat_map(|prefix| {
                (0..dim).map(move |i| {
                    let mut v = prefix.clone();
                    v.push(i);
                    v
                })
            })
            .collect()
    })
}

/// `φ(T)` as an ordered map of degree `v(T)`; closed inputs are taken in
/// label order.
pub fn represent<R: Ring>(tree: &Tree, s: &OchaStructure<R>) -> Result<MultiMap<R>> {
    require_corollas(&tree.root, s)?;
    let labels = tree.root.closed_labels();
    let (n, m) = (labels.len(), tree.open_leaves());
    let order: Vec<usize> = labels.iter().map(|l| l - 1).collect();
    let cdeg = s.closed.degrees();
    let mut out = MultiMap::new(n, m, tree.output(), tree.vertices() as i32).with_flavor(Flavor::Ordered);
    for c in tuples(s.closed.dim(), n) {
        let dfs: Vec<usize> = order.iter().map(|&i| c[i]).collect();
        let degs: Vec<i32> = c.iter().map(|&x| cdeg[x]).collect();
        let epsilon = koszul_parity(&order, &degs);
        for o in tuples(s.open.dim(), m) {
            let value = evaluate(&tree.root, s, &dfs, &o)?;
            if !value.is_zero() {
                let mut key = c.clone();
                key.extend_from_slice(&o);
                out.insert_raw(key, value.signed(epsilon));
            }
        }
    }
    Ok(out)
}

fn sum_represent<R: Ring>(sum: &TreeSum, s: &OchaStructure<R>, template: &MultiMap<R>) -> Result<MultiMap<R>> {
    let mut out = template.empty_like();
    for (t, c) in sum.iter() {
        let c = R::from_scalar(c);
        out = out.plus(&represent(t, s)?.scaled(&c));
    }
    Ok(out)
}

/// `[D, f] = D∘f − (−1)^{|f|} Σ f(…, D x_j, …)` with `D = l_1 + n_{0,1}`
/// acting on ordered inputs.
pub fn differential_bracket<R: Ring>(s: &OchaStructure<R>, f: &MultiMap<R>) -> MultiMap<R> {
    let (n, m) = (f.closed_arity, f.open_arity);
    let cdeg = s.closed.degrees();
    let odeg = s.open.degrees();
    let out_d = s.differential(f.output);
    let mut out = f.empty_like().with_flavor(Flavor::Ordered);
    let sign_f = f.degree as i64 + 1;
    for c in tuples(s.closed.dim(), n) {
        for o in tuples(s.open.dim(), m) {
            let mut value = Vector::zero();
            if let Some(d) = out_d {
                let inner = f.on_basis(&c, &o, cdeg);
                value = match f.output {
                    Sector::Closed => d.apply(&[&inner], &[], cdeg),
                    Sector::Open => d.apply(&[], &[&inner], cdeg),
                };
            }
            let mut passed = 0i64;
            let mut args: Vec<Vector<R>> = c.iter().chain(&o).map(|&x| Vector::basis(x)).collect();
            for j in 0..n + m {
                let (letter, sector) = if j < n { (c[j], Sector::Closed) } else { (o[j - n], Sector::Open) };
                if let Some(d) = s.differential(sector) {
                    let dx = if j < n { d.on_basis(&[letter], &[], cdeg) } else { d.on_basis(&[], &[letter], cdeg) };
                    if !dx.is_zero() {
                        let saved = std::mem::replace(&mut args[j], dx);
                        let refs: Vec<&Vector<R>> = args.iter().collect();
                        let term = f.apply(&refs[..n], &refs[n..], cdeg);
                        value.add(&term.signed(passed + sign_f));
                        args[j] = saved;
                    }
                }
                passed += if j < n { cdeg[letter] as i64 } else { odeg[letter] as i64 };
            }
            if !value.is_zero() {
                let mut key = c.clone();
                key.extend_from_slice(&o);
                out.insert_raw(key, value);
            }
        }
    }
    out
}

/// `(f ∘_i g)(c; o) = (−1)^{|g|(c_1+…+c_{i−1})} f(…, g(c_i, …), …; o)` for
/// ordered maps, `g` closed-valued.
pub fn compose_closed_slot<R: Ring>(
    s: &OchaStructure<R>,
    f: &MultiMap<R>,
    i: usize,
    g: &MultiMap<R>,
) -> MultiMap<R> {
    let cdeg = s.closed.degrees();
    let (n, k, m) = (f.closed_arity, g.closed_arity, f.open_arity);
    let mut out = MultiMap::new(n + k - 1, m, f.output, f.degree + g.degree).with_flavor(Flavor::Ordered);
    for c in tuples(s.closed.dim(), n + k - 1) {
        let inner = g.on_basis(&c[i - 1..i - 1 + k], &[], cdeg);
        if inner.is_zero() {
            continue;
        }
        let before: i64 = c[..i - 1].iter().map(|&x| cdeg[x] as i64).sum();
        for o in tuples(s.open.dim(), m) {
            let mut args: Vec<Vector<R>> = c[..i - 1].iter().map(|&x| Vector::basis(x)).collect();
            args.push(inner.clone());
            args.extend(c[i - 1 + k..].iter().map(|&x| Vector::basis(x)));
            let oargs: Vec<Vector<R>> = o.iter().map(|&x| Vector::basis(x)).collect();
            let cr: Vec<&Vector<R>> = args.iter().collect();
            let or: Vec<&Vector<R>> = oargs.iter().collect();
            let value = f.apply(&cr, &or, cdeg).signed(g.degree as i64 * before);
            if !value.is_zero() {
                let mut key = c.clone();
                key.extend_from_slice(&o);
                out.insert_raw(key, value);
            }
        }
    }
    out
}

/// `(f •_i g)(c_f, c_g; o) = ± f(c_f; o_1, …, g(c_g; o_i, …), …)`; the sign
/// moves `g` past `c_f, o_{<i}` and `c_g` past `o_{<i}`.
pub fn compose_open_slot<R: Ring>(s: &OchaStructure<R>, f: &MultiMap<R>, i: usize, g: &MultiMap<R>) -> MultiMap<R> {
    let cdeg = s.closed.degrees();
    let odeg = s.open.degrees();
    let (nf, ng, mf, mg) = (f.closed_arity, g.closed_arity, f.open_arity, g.open_arity);
    let mut out = MultiMap::new(nf + ng, mf + mg - 1, Sector::Open, f.degree + g.degree).with_flavor(Flavor::Ordered);
    for c in tuples(s.closed.dim(), nf + ng) {
        for o in tuples(s.open.dim(), mf + mg - 1) {
            let inner = g.on_basis(&c[nf..], &o[i - 1..i - 1 + mg], cdeg);
            if inner.is_zero() {
                continue;
            }
            let cf: i64 = c[..nf].iter().map(|&x| cdeg[x] as i64).sum();
            let cg: i64 = c[nf..].iter().map(|&x| cdeg[x] as i64).sum();
            let ob: i64 = o[..i - 1].iter().map(|&x| odeg[x] as i64).sum();
            let parity = g.degree as i64 * (cf + ob) + cg * ob;
            let cargs: Vec<Vector<R>> = c[..nf].iter().map(|&x| Vector::basis(x)).collect();
            let mut oargs: Vec<Vector<R>> = o[..i - 1].iter().map(|&x| Vector::basis(x)).collect();
            oargs.push(inner);
            oargs.extend(o[i - 1 + mg..].iter().map(|&x| Vector::basis(x)));
            let cr: Vec<&Vector<R>> = cargs.iter().collect();
            let or: Vec<&Vector<R>> = oargs.iter().collect();
            let value = f.apply(&cr, &or, cdeg).signed(parity);
            if !value.is_zero() {
                let mut key = c.clone();
                key.extend_from_slice(&o);
                out.insert_raw(key, value);
            }
        }
    }
    out
}

/// Outcome of [`check_chain_map`]: one report per tree with a nonzero
/// residual `[D, φ(T)] − φ(d T)`.
#[derive(Clone, Debug)]
pub struct ChainMapReport<R: Ring> {
    pub trees_checked: usize,
    pub failures: Vec<(Tree, Report<R>)>,
}

impl<R: Ring> ChainMapReport<R> {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Residual of `φ(d T) = [D, φ(T)]` on every basis input.
pub fn chain_map_residual<R: Ring>(tree: &Tree, s: &OchaStructure<R>) -> Result<Report<R>> {
    let phi = represent(tree, s)?;
    let lhs = sum_represent(&tree_differential(tree), s, &phi.empty_like())?;
    let rhs = differential_bracket(s, &phi);
    let mut report = Report::new(format!("chain map at {tree}"), tree.closed_leaves() + tree.open_leaves());
    let n = phi.closed_arity;
    let cdeg = s.closed.degrees();
    for c in tuples(s.closed.dim(), n) {
        for o in tuples(s.open.dim(), phi.open_arity) {
            let mut residual = rhs.on_basis(&c, &o, cdeg);
            residual.add(&lhs.on_basis(&c, &o, cdeg).negated());
            report.record(Instance { word: Word { closed: c.clone(), open: o }, output: phi.output }, residual);
        }
    }
    Ok(report)
}

/// Checks `φ(d T) = [l_1 + n_{0,1}, φ(T)]` for every tree with at least one
/// vertex and at most `leaf_bound` leaves, in the operad matching the
/// structure's kind.
pub fn check_chain_map<R: Ring>(s: &OchaStructure<R>, leaf_bound: usize) -> Result<ChainMapReport<R>> {
    use crate::structures::Kind;
    let operad = match s.kind() {
        Kind::AInfinity => Operad::Planar,
        Kind::LInfinity => Operad::NonPlanar,
        Kind::Ocha => Operad::OpenClosed,
    };
    let mut out = ChainMapReport { trees_checked: 0, failures: Vec::new() };
    for tree in enumerate_up_to(operad, leaf_bound) {
        if tree.vertices() == 0 {
            continue;
        }
        out.trees_checked += 1;
        let report = chain_map_residual(&tree, s)?;
        if !report.is_valid() {
            out.failures.push((tree, report));
        }
    }
    Ok(out)
}
