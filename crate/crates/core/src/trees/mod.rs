//! Rooted trees for the A∞, L∞ and open-closed operads: grafting, the
//! vertex-splitting differential, enumeration, and representation as
//! multilinear maps.

mod represent;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::graded::perm::{koszul_parity, set_partitions, splits};
use crate::graded::ring::{int, Ring, Scalar};
use crate::graded::Sector;

pub use represent::{chain_map_residual, check_chain_map, compose_closed_slot, compose_open_slot, differential_bracket, represent, ChainMapReport};

/// A node of a rooted tree. Closed leaves carry labels `1..=n`; open leaves
/// are numbered by their left-to-right position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    ClosedLeaf(usize),
    OpenLeaf,
    /// `l_k`: symmetric in its children.
    ClosedVertex(Vec<Node>),
    /// `n_{p,q}` (or `m_q` when `p = 0`): symmetric in the closed children,
    /// ordered in the open ones.
    OpenVertex { closed: Vec<Node>, open: Vec<Node> },
}

/// Which of the three operads a tree family lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operad {
    /// Planar trees, `m_k` vertices.
    Planar,
    /// Non-planar trees, `l_k` vertices.
    NonPlanar,
    /// Open-closed trees: `l_k` and `n_{p,q}` vertices.
    OpenClosed,
}

/// Sign conventions for [`tree_differential_with`]. `Flipped` drops the
/// Koszul sign from vertices preceding the split one; it exists as a
/// negative control for [`check_d_squared_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    Koszul,
    Flipped,
}

fn is_generator(p: usize, q: usize) -> bool {
    2 * p + q >= 2
}

impl Node {
    pub fn is_closed_root(&self) -> bool {
        matches!(self, Node::ClosedLeaf(_) | Node::ClosedVertex(_))
    }

    pub fn vertices(&self) -> usize {
        match self {
            Node::ClosedLeaf(_) | Node::OpenLeaf => 0,
            Node::ClosedVertex(ch) => 1 + ch.iter().map(Node::vertices).sum::<usize>(),
            Node::OpenVertex { closed, open } => 1 + closed.iter().chain(open).map(Node::vertices).sum::<usize>(),
        }
    }

    /// Children in tensor order: closed first, then open.
    pub fn children(&self) -> Vec<&Node> {
        match self {
            Node::ClosedLeaf(_) | Node::OpenLeaf => vec![],
            Node::ClosedVertex(ch) => ch.iter().collect(),
            Node::OpenVertex { closed, open } => closed.iter().chain(open).collect(),
        }
    }

    /// Closed leaf labels in depth-first order.
    pub fn closed_labels(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<usize>) {
        match self {
            Node::ClosedLeaf(l) => out.push(*l),
            Node::OpenLeaf => {}
            _ => self.children().into_iter().for_each(|c| c.collect_labels(out)),
        }
    }

    pub fn open_leaves(&self) -> usize {
        match self {
            Node::ClosedLeaf(_) => 0,
            Node::OpenLeaf => 1,
            _ => self.children().into_iter().map(Node::open_leaves).sum(),
        }
    }

    fn min_label(&self) -> usize {
        self.closed_labels().into_iter().min().unwrap_or(usize::MAX)
    }

    fn relabel(&self, f: &impl Fn(usize) -> usize) -> Node {
        match self {
            Node::ClosedLeaf(l) => Node::ClosedLeaf(f(*l)),
            Node::OpenLeaf => Node::OpenLeaf,
            Node::ClosedVertex(ch) => Node::ClosedVertex(ch.iter().map(|c| c.relabel(f)).collect()),
            Node::OpenVertex { closed, open } => Node::OpenVertex {
                closed: closed.iter().map(|c| c.relabel(f)).collect(),
                open: open.iter().map(|c| c.relabel(f)).collect(),
            },
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Node::ClosedLeaf(_) | Node::OpenLeaf => Ok(()),
            Node::ClosedVertex(ch) => {
                if ch.len() < 2 {
                    return Err(Error::Invalid(format!("l_{} is not a generator", ch.len())));
                }
                if let Some(bad) = ch.iter().find(|c| !c.is_closed_root()) {
                    return Err(Error::Invalid(format!("open-rooted child {bad} under l_{}", ch.len())));
                }
                ch.iter().try_for_each(Node::validate)
            }
            Node::OpenVertex { closed, open } => {
                if !is_generator(closed.len(), open.len()) {
                    return Err(Error::Invalid(format!("n_{{{},{}}} is not a generator", closed.len(), open.len())));
                }
                if closed.iter().any(|c| !c.is_closed_root()) || open.iter().any(Node::is_closed_root) {
                    return Err(Error::Invalid("child edge kind does not match its slot".into()));
                }
                closed.iter().chain(open).try_for_each(Node::validate)
            }
        }
    }

    /// Sorts the closed children of every vertex by least leaf label,
    /// returning the Koszul parity in the vertex counts.
    fn canonicalize(&self) -> (Node, i64) {
        fn sort(children: &[Node]) -> (Vec<Node>, i64) {
            let mut parity = 0;
            let canon: Vec<Node> = children
                .iter()
                .map(|c| {
                    let (n, p) = c.canonicalize();
                    parity += p;
                    n
                })
                .collect();
            let mut order: Vec<usize> = (0..canon.len()).collect();
            order.sort_by_key(|&i| canon[i].min_label());
            let degs: Vec<i32> = canon.iter().map(|c| c.vertices() as i32).collect();
            parity += koszul_parity(&order, &degs);
            (order.iter().map(|&i| canon[i].clone()).collect(), parity)
        }
        match self {
            Node::ClosedLeaf(_) | Node::OpenLeaf => (self.clone(), 0),
            Node::ClosedVertex(ch) => {
                let (ch, p) = sort(ch);
                (Node::ClosedVertex(ch), p)
            }
            Node::OpenVertex { closed, open } => {
                let (closed, p) = sort(closed);
                let mut parity = p;
                let open = open
                    .iter()
                    .map(|c| {
                        let (n, q) = c.canonicalize();
                        parity += q;
                        n
                    })
                    .collect();
                (Node::OpenVertex { closed, open }, parity)
            }
        }
    }

    fn with_children(&self, children: Vec<Node>) -> Node {
        match self {
            Node::ClosedVertex(_) => Node::ClosedVertex(children),
            Node::OpenVertex { closed, .. } => {
                let mut closed_part = children;
                let open = closed_part.split_off(closed.len());
                Node::OpenVertex { closed: closed_part, open }
            }
            leaf => leaf.clone(),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |nodes: &[Node]| nodes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Node::ClosedLeaf(l) => write!(f, "c{l}"),
            Node::OpenLeaf => write!(f, "o"),
            Node::ClosedVertex(ch) => write!(f, "l{}({})", ch.len(), join(ch)),
            Node::OpenVertex { closed, open } if closed.is_empty() => write!(f, "m{}({})", open.len(), join(open)),
            Node::OpenVertex { closed, open } => {
                write!(f, "n{},{}({};{})", closed.len(), open.len(), join(closed), join(open))
            }
        }
    }
}

/// A rooted tree. Any representative is allowed; [`TreeSum`] stores
/// canonical ones.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    pub root: Node,
}

impl Tree {
    /// Checks corolla arities, slot kinds and that closed labels are `1..=n`.
    pub fn new(root: Node) -> Result<Self> {
        root.validate()?;
        let mut labels = root.closed_labels();
        labels.sort_unstable();
        if labels.iter().enumerate().any(|(i, &l)| l != i + 1) {
            return Err(Error::Invalid(format!("closed labels {labels:?} are not 1..n")));
        }
        Ok(Tree { root })
    }

    pub fn closed_identity() -> Self {
        Tree { root: Node::ClosedLeaf(1) }
    }

    pub fn open_identity() -> Self {
        Tree { root: Node::OpenLeaf }
    }

    pub fn bracket_corolla(k: usize) -> Result<Self> {
        Tree::new(Node::ClosedVertex((1..=k).map(Node::ClosedLeaf).collect()))
    }

    pub fn product_corolla(k: usize) -> Result<Self> {
        Tree::mixed_corolla(0, k)
    }

    pub fn mixed_corolla(p: usize, q: usize) -> Result<Self> {
        Tree::new(Node::OpenVertex { closed: (1..=p).map(Node::ClosedLeaf).collect(), open: vec![Node::OpenLeaf; q] })
    }

    /// The grading `v(T)`.
    pub fn vertices(&self) -> usize {
        self.root.vertices()
    }

    pub fn internal_edges(&self) -> i64 {
        self.vertices() as i64 - 1
    }

    pub fn closed_leaves(&self) -> usize {
        self.root.closed_labels().len()
    }

    pub fn open_leaves(&self) -> usize {
        self.root.open_leaves()
    }

    pub fn output(&self) -> Sector {
        if self.root.is_closed_root() {
            Sector::Closed
        } else {
            Sector::Open
        }
    }

    /// Canonical representative and its sign relative to `self`.
    pub fn canonical(&self) -> (Tree, Scalar) {
        let (root, parity) = self.root.canonicalize();
        (Tree { root }, int(1).signed(parity))
    }

    /// Unsuspended grading: `int(T)+2−n` for planar trees, `int(T)+3−2k`
    /// for closed-rooted ones and `int(T)+2−2k−l` for open-rooted ones.
    pub fn classical_dimension(&self) -> i64 {
        let k = self.closed_leaves() as i64;
        let l = self.open_leaves() as i64;
        if self.root.is_closed_root() {
            self.internal_edges() + 3 - 2 * k
        } else {
            self.internal_edges() + 2 - 2 * k - l
        }
    }

    /// Grafts `other` at leaf `i`: closed label `i` when `other` has a closed
    /// root (`∘_i`), the `i`-th open leaf otherwise (`•_i`). Returns the sign
    /// and the grafted representative.
    ///
    /// Labels of `other` become `i..i+k−1` under `∘_i` and are appended after
    /// those of `self` under `•_i`. The sign is `(−1)^{v(other)·r}` where `r`
    /// counts vertices of `self` to the right of the leaf that are not its
    /// ancestors.
    pub fn graft(&self, i: usize, other: &Tree) -> Result<(Scalar, Tree)> {
        let k = other.closed_leaves();
        let (target, inserted, base) = if other.root.is_closed_root() {
            if i == 0 || i > self.closed_leaves() {
                return Err(Error::Invalid(format!("no closed leaf {i}")));
            }
            let shifted = self.root.relabel(&|l| if l > i { l + k - 1 } else { l });
            (Slot::Closed(i), other.root.relabel(&|l| l + i - 1), shifted)
        } else {
            if i == 0 || i > self.open_leaves() {
                return Err(Error::Invalid(format!("no open leaf {i}")));
            }
            let n = self.closed_leaves();
            (Slot::Open(i), other.root.relabel(&|l| l + n), self.root.clone())
        };
        let mut state = GraftState { target, seen_open: 0, right: 0, found: false, inserted: Some(inserted) };
        let root = state.walk(&base);
        let parity = (other.vertices() * state.right) as i64;
        Ok((int(1).signed(parity), Tree { root }))
    }

    /// Plain-text graph: one line per node in preorder, `id kind children`,
    /// with each child written as `closed:id` or `open:id`.
    pub fn to_graph(&self) -> String {
        let mut lines = Vec::new();
        let mut next = 0;
        graph_lines(&self.root, &mut next, &mut lines);
        lines.join("\n")
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

fn graph_lines(node: &Node, next: &mut usize, lines: &mut Vec<String>) -> usize {
    let id = *next;
    *next += 1;
    let kind = match node {
        Node::ClosedLeaf(l) => format!("leaf c{l}"),
        Node::OpenLeaf => "leaf o".to_string(),
        Node::ClosedVertex(ch) => format!("l_{}", ch.len()),
        Node::OpenVertex { closed, open } if closed.is_empty() => format!("m_{}", open.len()),
        Node::OpenVertex { closed, open } => format!("n_{{{},{}}}", closed.len(), open.len()),
    };
    let index = lines.len();
    lines.push(String::new());
    let mut parts = vec![id.to_string(), kind];
    for child in node.children() {
        let edge = if child.is_closed_root() { "closed" } else { "open" };
        let child_id = graph_lines(child, next, lines);
        parts.push(format!("{edge}:{child_id}"));
    }
    lines[index] = parts.join(" ");
    id
}

enum Slot {
    Closed(usize),
    Open(usize),
}

struct GraftState {
    target: Slot,
    seen_open: usize,
    right: usize,
    found: bool,
    inserted: Option<Node>,
}

impl GraftState {
    fn walk(&mut self, node: &Node) -> Node {
        match node {
            Node::ClosedLeaf(l) => {
                if matches!(self.target, Slot::Closed(i) if i == *l) {
                    self.found = true;
                    return self.inserted.take().expect("single insertion");
                }
                node.clone()
            }
            Node::OpenLeaf => {
                self.seen_open += 1;
                if matches!(self.target, Slot::Open(i) if i == self.seen_open) {
                    self.found = true;
                    return self.inserted.take().expect("single insertion");
                }
                node.clone()
            }
            _ => {
                let was_found = self.found;
                let children: Vec<Node> = node.children().into_iter().map(|c| self.walk(c)).collect();
                // A vertex entered after the leaf was placed lies to its right.
                if was_found {
                    self.right += 1;
                }
                node.with_children(children)
            }
        }
    }
}

/// Formal linear combination of canonical trees.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TreeSum {
    terms: BTreeMap<Tree, Scalar>,
}

impl TreeSum {
    pub fn zero() -> Self {
        TreeSum::default()
    }

    pub fn single(tree: &Tree) -> Self {
        let mut s = TreeSum::zero();
        s.add(tree, &int(1));
        s
    }

    /// Adds `coeff · tree`, canonicalizing the representative.
    pub fn add(&mut self, tree: &Tree, coeff: &Scalar) {
        let (canon, sign) = tree.canonical();
        let entry = self.terms.entry(canon.clone()).or_insert_with(|| int(0));
        *entry = entry.plus(&coeff.times(&sign));
        if entry.is_zero() {
            self.terms.remove(&canon);
        }
    }

    pub fn add_sum(&mut self, other: &TreeSum, coeff: &Scalar) {
        for (t, c) in &other.terms {
            self.add(t, &c.times(coeff));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tree, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, tree: &Tree) -> Scalar {
        let (canon, sign) = tree.canonical();
        self.terms.get(&canon).map(|c| c.times(&sign)).unwrap_or_else(|| int(0))
    }

    pub fn differential(&self) -> TreeSum {
        self.differential_with(Convention::Koszul)
    }

    pub fn differential_with(&self, convention: Convention) -> TreeSum {
        let mut out = TreeSum::zero();
        for (t, c) in &self.terms {
            out.add_sum(&tree_differential_with(t, convention), c);
        }
        out
    }

    /// Grafts `other` into every term at leaf `i`, bilinearly.
    pub fn graft(&self, i: usize, other: &TreeSum) -> Result<TreeSum> {
        let mut out = TreeSum::zero();
        for (t, c) in &self.terms {
            for (u, d) in &other.terms {
                let (sign, g) = t.graft(i, u)?;
                out.add(&g, &c.times(d).times(&sign));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TreeSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("({c}) {t}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `d(T)`: the sum over all single-vertex splittings.
pub fn tree_differential(tree: &Tree) -> TreeSum {
    tree_differential_with(tree, Convention::Koszul)
}

pub fn tree_differential_with(tree: &Tree, convention: Convention) -> TreeSum {
    let mut out = TreeSum::zero();
    for (node, parity) in differentiate(&tree.root, convention) {
        out.add(&Tree { root: node }, &int(1).signed(parity));
    }
    out
}

/// Splits of the root vertex plus, recursively, of every other vertex; the
/// vertices preceding a split one in preorder contribute `(−1)^{count}`.
fn differentiate(node: &Node, convention: Convention) -> Vec<(Node, i64)> {
    let children: Vec<Node> = node.children().into_iter().cloned().collect();
    if children.is_empty() {
        return vec![];
    }
    let mut out = split_root(node);
    let mut before = 1usize;
    for (j, child) in children.iter().enumerate() {
        for (d_child, parity) in differentiate(child, convention) {
            let mut replaced = children.clone();
            replaced[j] = d_child;
            let shift = if convention == Convention::Koszul { before as i64 } else { 0 };
            out.push((node.with_children(replaced), parity + shift));
        }
        before += child.vertices();
    }
    out
}

/// `d` of the root corolla, with the subtrees hanging below it moved into
/// place by the Koszul sign in their vertex counts.
fn split_root(node: &Node) -> Vec<(Node, i64)> {
    let mut out = Vec::new();
    match node {
        Node::ClosedVertex(ch) => {
            let n = ch.len();
            let degs: Vec<i32> = ch.iter().map(|c| c.vertices() as i32).collect();
            for p in 2..n {
                for (inner_idx, rest) in splits(n, p) {
                    let inner = Node::ClosedVertex(inner_idx.iter().map(|&i| ch[i].clone()).collect());
                    let mut outer = vec![inner];
                    outer.extend(rest.iter().map(|&i| ch[i].clone()));
                    let order: Vec<usize> = inner_idx.iter().chain(&rest).copied().collect();
                    out.push((Node::ClosedVertex(outer), 1 + koszul_parity(&order, &degs)));
                }
            }
        }
        Node::OpenVertex { closed, open } => {
            let (n, m) = (closed.len(), open.len());
            let degs: Vec<i32> = closed.iter().chain(open).map(|c| c.vertices() as i32).collect();
            for p in 2..=n {
                for (inner_idx, rest) in splits(n, p) {
                    let inner = Node::ClosedVertex(inner_idx.iter().map(|&i| closed[i].clone()).collect());
                    let mut outer = vec![inner];
                    outer.extend(rest.iter().map(|&i| closed[i].clone()));
                    let order: Vec<usize> = inner_idx.iter().chain(&rest).copied().collect();
                    out.push((Node::OpenVertex { closed: outer, open: open.clone() }, 1 + koszul_parity(&order, &degs)));
                }
            }
            for r in 0..=n {
                for (inner_idx, rest) in splits(n, r) {
                    for s in 0..=m {
                        if !is_generator(r, s) || !is_generator(n - r, m - s + 1) {
                            continue;
                        }
                        for i in 0..=m - s {
                            let inner = Node::OpenVertex {
                                closed: inner_idx.iter().map(|&c| closed[c].clone()).collect(),
                                open: open[i..i + s].to_vec(),
                            };
                            let mut outer_open = open[..i].to_vec();
                            outer_open.push(inner);
                            outer_open.extend_from_slice(&open[i + s..]);
                            let outer_closed = rest.iter().map(|&c| closed[c].clone()).collect();
                            let order: Vec<usize> = rest
                                .iter()
                                .copied()
                                .chain(n..n + i)
                                .chain(inner_idx.iter().copied())
                                .chain(n + i..n + m)
                                .collect();
                            // The new vertex passes the outer children placed before it.
                            let passed: i64 =
                                rest.iter().chain(&(n..n + i).collect::<Vec<_>>()).map(|&c| degs[c] as i64).sum();
                            out.push((
                                Node::OpenVertex { closed: outer_closed, open: outer_open },
                                1 + koszul_parity(&order, &degs) + passed,
                            ));
                        }
                    }
                }
            }
        }
        _ => {}
    }
    out
}

fn product(options: Vec<Vec<Node>>) -> Vec<Vec<Node>> {
    options.into_iter().fold(vec![vec![]], |acc, choices| {
        acc.iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect()
    })
}

/// Canonical closed-rooted trees on the given labels.
fn closed_trees(labels: &[usize]) -> Vec<Node> {
    let mut out = Vec::new();
    if labels.len() == 1 {
        out.push(Node::ClosedLeaf(labels[0]));
    }
    for k in 2..=labels.len() {
        for partition in set_partitions(labels.len(), k) {
            let options =
                partition.iter().map(|block| closed_trees(&block.iter().map(|&i| labels[i]).collect::<Vec<_>>())).collect();
            out.extend(product(options).into_iter().map(Node::ClosedVertex));
        }
    }
    out
}

/// Closed-children choices: every set partition of `labels` into blocks,
/// each block a closed tree.
fn closed_forests(labels: &[usize]) -> Vec<Vec<Node>> {
    if labels.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in 1..=labels.len() {
        for partition in set_partitions(labels.len(), p) {
            let options =
                partition.iter().map(|block| closed_trees(&block.iter().map(|&i| labels[i]).collect::<Vec<_>>())).collect();
            out.extend(product(options));
        }
    }
    out
}

/// Weak compositions of `m` into `q` parts.
fn weak_compositions(m: usize, q: usize) -> Vec<Vec<usize>> {
    if q == 0 {
        return if m == 0 { vec![vec![]] } else { vec![] };
    }
    (0..=m)
        .flat_map(|first| {
            weak_compositions(m - first, q - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Canonical open-rooted trees with the given closed labels and `m` open
/// leaves.
fn open_trees(labels: &[usize], m: usize) -> Vec<Node> {
    let mut out = Vec::new();
    if labels.is_empty() && m == 1 {
        out.push(Node::OpenLeaf);
    }
    let n = labels.len();
    for mask in 0u32..(1 << n) {
        let closed_side: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| labels[i]).collect();
        let open_side: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| labels[i]).collect();
        for forest in closed_forests(&closed_side) {
            let p = forest.len();
            for q in 0..=open_side.len() + m {
                if !is_generator(p, q) || (q == 0 && (!open_side.is_empty() || m > 0)) {
                    continue;
                }
                for composition in weak_compositions(m, q) {
                    let slots = q.pow(open_side.len() as u32);
                    for code in 0..slots {
                        let mut assigned = vec![Vec::new(); q];
                        let mut c = code;
                        for &label in &open_side {
                            assigned[c % q].push(label);
                            c /= q;
                        }
                        if (0..q).any(|j| assigned[j].is_empty() && composition[j] == 0) {
                            continue;
                        }
                        let options = (0..q).map(|j| open_trees(&assigned[j], composition[j])).collect();
                        for open in product(options) {
                            out.push(Node::OpenVertex { closed: forest.clone(), open });
                        }
                    }
                }
            }
        }
    }
    out
}

/// All canonical trees of the operad with `closed` labelled closed leaves
/// and `open` open leaves. Open-closed trees include closed-rooted ones
/// when `open = 0`.
pub fn enumerate(operad: Operad, closed: usize, open: usize) -> Vec<Tree> {
    let labels: Vec<usize> = (1..=closed).collect();
    let nodes = match operad {
        Operad::Planar if closed == 0 => open_trees(&[], open),
        Operad::NonPlanar if open == 0 => closed_trees(&labels),
        Operad::OpenClosed => {
            let mut v = if open == 0 { closed_trees(&labels) } else { vec![] };
            v.extend(open_trees(&labels, open));
            v
        }
        _ => vec![],
    };
    nodes.into_iter().map(|root| Tree { root }).collect()
}

/// Every tree of the operad with between 1 and `leaf_bound` leaves.
pub fn enumerate_up_to(operad: Operad, leaf_bound: usize) -> Vec<Tree> {
    let mut out = Vec::new();
    for total in 1..=leaf_bound {
        match operad {
            Operad::Planar => out.extend(enumerate(operad, 0, total)),
            Operad::NonPlanar => out.extend(enumerate(operad, total, 0)),
            Operad::OpenClosed => (0..=total).for_each(|k| out.extend(enumerate(operad, k, total - k))),
        }
    }
    out
}

/// `d(d(T)) = 0` for every tree of all three operads with at most
/// `leaf_bound` leaves.
pub fn check_d_squared(leaf_bound: usize) -> bool {
    check_d_squared_with(leaf_bound, Convention::Koszul)
}

pub fn check_d_squared_with(leaf_bound: usize, convention: Convention) -> bool {
    [Operad::Planar, Operad::NonPlanar, Operad::OpenClosed]
        .iter()
        .all(|&operad| d_squared_failures(operad, leaf_bound, convention).is_empty())
}

/// Trees of the operad with at most `leaf_bound` leaves on which `d²` does
/// not vanish.
pub fn d_squared_failures(operad: Operad, leaf_bound: usize, convention: Convention) -> Vec<Tree> {
    use rayon::prelude::*;
    enumerate_up_to(operad, leaf_bound).into_par_iter().filter(|t| !d_squared_vanishes(t, convention)).collect()
}

/// `d(d T) = 0`, computed with integer signs. Agrees with
/// `tree_differential_with(t).differential_with()` but avoids rational
/// arithmetic, which dominates the exhaustive checks.
pub fn d_squared_vanishes(tree: &Tree, convention: Convention) -> bool {
    let mut first: HashMap<Node, i64> = HashMap::new();
    for (node, parity) in differentiate(&tree.root, convention) {
        let (canon, sign) = node.canonicalize();
        *first.entry(canon).or_default() += if (parity + sign) % 2 == 0 { 1 } else { -1 };
    }
    let mut second: HashMap<Node, i64> = HashMap::new();
    for (node, coeff) in first {
        if coeff == 0 {
            continue;
        }
        for (inner, parity) in differentiate(&node, convention) {
            let (canon, sign) = inner.canonicalize();
            *second.entry(canon).or_default() += if (parity + sign) % 2 == 0 { coeff } else { -coeff };
        }
    }
    second.values().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaves(labels: &[usize]) -> Vec<Node> {
        labels.iter().map(|&l| Node::ClosedLeaf(l)).collect()
    }

    #[test]
    fn planar_counts_are_schroeder_numbers() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate(Operad::Planar, 0, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 11, 45, 197]);
    }

    #[test]
    fn binary_planar_counts_are_catalan() {
        fn binary(node: &Node) -> bool {
            node.children().len() == 2 && node.children().into_iter().all(|c| c.children().is_empty() || binary(c))
        }
        let counts: Vec<usize> =
            (2..=6).map(|n| enumerate(Operad::Planar, 0, n).iter().filter(|t| binary(&t.root)).count()).collect();
        assert_eq!(counts, vec![1, 2, 5, 14, 42]);
    }

    #[test]
    fn non_planar_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate(Operad::NonPlanar, n, 0).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 26, 236]);
    }

    #[test]
    fn enumerated_trees_are_valid_and_canonical() {
        for t in enumerate_up_to(Operad::OpenClosed, 4) {
            assert!(Tree::new(t.root.clone()).is_ok(), "{t}");
            let (canon, sign) = t.canonical();
            assert_eq!((canon, sign), (t.clone(), int(1)));
        }
    }

    #[test]
    fn canonicalization_is_idempotent_and_signed() {
        let b = Node::ClosedVertex(leaves(&[1, 2]));
        let a = Node::ClosedVertex(leaves(&[3, 4]));
        let t = Tree::new(Node::ClosedVertex(vec![a.clone(), b.clone()])).unwrap();
        let (canon, sign) = t.canonical();
        assert_eq!(canon.root, Node::ClosedVertex(vec![b, a]));
        assert_eq!(sign, int(-1));
        assert_eq!(canon.canonical(), (canon.clone(), int(1)));
    }

    #[test]
    fn grafting_examples() {
        let m2 = Tree::product_corolla(2).unwrap();
        let (sign, left) = m2.graft(1, &m2).unwrap();
        assert_eq!(sign, int(1));
        let m2_node = m2.root.clone();
        assert_eq!(left.root, Node::OpenVertex { closed: vec![], open: vec![m2_node, Node::OpenLeaf] });

        let n11 = Tree::mixed_corolla(1, 1).unwrap();
        let l2 = Tree::bracket_corolla(2).unwrap();
        let (_, t) = n11.graft(1, &l2).unwrap();
        assert_eq!(t.root, Node::OpenVertex { closed: vec![Node::ClosedVertex(leaves(&[1, 2]))], open: vec![Node::OpenLeaf] });

        let n02 = Tree::mixed_corolla(0, 2).unwrap();
        let (_, t) = n02.graft(2, &n11).unwrap();
        assert_eq!(
            t.root,
            Node::OpenVertex { closed: vec![], open: vec![Node::OpenLeaf, Node::OpenVertex { closed: leaves(&[1]), open: vec![Node::OpenLeaf] }] }
        );
        assert!(m2.graft(3, &m2).is_err());
        assert!(m2.graft(1, &l2).is_err());
    }

    #[test]
    fn integer_d_squared_matches_rational() {
        for operad in [Operad::Planar, Operad::NonPlanar, Operad::OpenClosed] {
            for t in enumerate_up_to(operad, 4) {
                for convention in [Convention::Koszul, Convention::Flipped] {
                    let rational = tree_differential_with(&t, convention).differential_with(convention).is_zero();
                    assert_eq!(super::d_squared_vanishes(&t, convention), rational, "{t}");
                }
            }
        }
    }

    #[test]
    fn corolla_differentials() {
        assert!(tree_differential(&Tree::product_corolla(2).unwrap()).is_zero());
        let m2 = Tree::product_corolla(2).unwrap();
        let mut expected = TreeSum::zero();
        expected.add(&m2.graft(1, &m2).unwrap().1, &int(-1));
        expected.add(&m2.graft(2, &m2).unwrap().1, &int(-1));
        assert_eq!(tree_differential(&Tree::product_corolla(3).unwrap()), expected);
        assert!(tree_differential(&Tree::mixed_corolla(1, 0).unwrap()).is_zero());
    }

    #[test]
    fn mixed_corolla_n11_differential() {
        // Splittings of n_{1,1}: n_{0,2} with n_{1,0} on either side, and
        // n_{1,2} with the open leaf moved under n_{0,1} is excluded.
        let d = tree_differential(&Tree::mixed_corolla(1, 1).unwrap());
        let n10 = Node::OpenVertex { closed: leaves(&[1]), open: vec![] };
        let left = Tree { root: Node::OpenVertex { closed: vec![], open: vec![n10.clone(), Node::OpenLeaf] } };
        let right = Tree { root: Node::OpenVertex { closed: vec![], open: vec![Node::OpenLeaf, n10] } };
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff(&left), int(-1));
        assert_eq!(d.coeff(&right), int(-1));
    }

    #[test]
    fn d_squared_vanishes() {
        assert!(check_d_squared(4));
    }

    #[test]
    fn flipped_convention_breaks_d_squared() {
        assert!(!check_d_squared_with(4, Convention::Flipped));
    }

    #[test]
    fn d_is_a_derivation_of_grafting() {
        let small = enumerate_up_to(Operad::OpenClosed, 3);
        for t in &small {
            for u in &small {
                if t.vertices() == 0 || u.vertices() == 0 {
                    continue;
                }
                let slots = if u.root.is_closed_root() { t.closed_leaves() } else { t.open_leaves() };
                for i in 1..=slots {
                    let (sign, g) = t.graft(i, u).unwrap();
                    let mut lhs = TreeSum::zero();
                    lhs.add_sum(&tree_differential(&g), &sign);
                    let mut rhs = tree_differential(t).graft(i, &TreeSum::single(u)).unwrap();
                    let second = TreeSum::single(t).graft(i, &tree_differential(u)).unwrap();
                    rhs.add_sum(&second, &int(1).signed(t.vertices() as i64));
                    assert_eq!(lhs, rhs, "{t} graft {i} {u}");
                }
            }
        }
    }

    #[test]
    fn classical_dimensions() {
        assert_eq!(Tree::product_corolla(4).unwrap().classical_dimension(), -2);
        assert_eq!(Tree::mixed_corolla(2, 1).unwrap().classical_dimension(), -3);
        assert_eq!(Tree::bracket_corolla(3).unwrap().classical_dimension(), -3);
        let m2 = Tree::product_corolla(2).unwrap();
        assert_eq!(m2.graft(1, &m2).unwrap().1.classical_dimension(), 0);
    }

    #[test]
    fn graph_export_lists_nodes_in_preorder() {
        let n11 = Tree::mixed_corolla(1, 1).unwrap();
        let (_, t) = n11.graft(1, &Tree::bracket_corolla(2).unwrap()).unwrap();
        assert_eq!(t.to_graph(), "0 n_{1,1} closed:1 open:4\n1 l_2 closed:2 closed:3\n2 leaf c1\n3 leaf c2\n4 leaf o");
    }
}
