//! Rooted labeled forests, canonically ordered trees and the super-root.
//!
//! Vertices are labeled `1..=n`. Every structure here keeps a children table of
//! length `n + 1` whose slot `0` lists the top-level vertices (the roots), so
//! traversal code can treat forests and trees uniformly through [`Rooted`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// A vertex label, `1..=n`.
pub type Vertex = usize;

/// Read access to a rooted structure on labels `1..=vertex_count()`.
pub trait Rooted {
    fn vertex_count(&self) -> usize;
    /// Top-level vertices, in the structure's left-to-right order.
    fn roots(&self) -> &[Vertex];
    /// Children of `v`, in the structure's left-to-right order.
    fn children(&self, v: Vertex) -> &[Vertex];
}

/// A rooted labeled forest on `1..=n`, stored as a parent mapping where `0`
/// marks a root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    parent: Vec<usize>,
    children: Vec<Vec<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct ForestRecord {
    n: usize,
    parent: Vec<usize>,
}

impl Serialize for Forest {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ForestRecord {
            n: self.n(),
            parent: self.parent.clone(),
        }
        .serialize(serializer)
    }
}

impl Forest {
    /// Validates a parent mapping (`parent[v - 1]` is the parent of `v`).
    pub fn new(parent: Vec<usize>) -> Result<Self, ModelError> {
        let n = parent.len();
        for (i, &p) in parent.iter().enumerate() {
            let v = i + 1;
            if p > n {
                return Err(ModelError::OutOfRange {
                    vertex: v,
                    value: p as i64,
                    n,
                });
            }
            if p == v {
                return Err(ModelError::SelfParent(v));
            }
        }
        check_acyclic(&parent)?;
        let mut children = vec![Vec::new(); n + 1];
        for (i, &p) in parent.iter().enumerate() {
            children[p].push(i + 1);
        }
        Ok(Forest { parent, children })
    }

    /// The empty forest on zero vertices.
    pub fn empty() -> Self {
        Forest {
            parent: Vec::new(),
            children: vec![Vec::new()],
        }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// The raw parent mapping, `0` for roots.
    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    /// Parent of `v`, or `None` when `v` is a root.
    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        match self.parent[v - 1] {
            0 => None,
            p => Some(p),
        }
    }

    /// Uniformly random forest on `n` vertices.
    ///
    /// Decodes a uniform Prüfer sequence of a tree on `1..=n+1` and roots it at
    /// `n + 1`; removing that vertex leaves a uniform rooted forest.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        if n == 0 {
            return Forest::empty();
        }
        let m = n + 1;
        let code: Vec<usize> = (0..m - 2).map(|_| rng.gen_range(1..=m)).collect();
        let adjacency = prufer_decode(m, &code);
        let mut parent = vec![0usize; m + 1];
        let mut stack = vec![m];
        let mut seen = vec![false; m + 1];
        seen[m] = true;
        while let Some(u) = stack.pop() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = if u == m { 0 } else { u };
                    stack.push(w);
                }
            }
        }
        Forest::new(parent[1..=n].to_vec()).expect("decoded Prüfer tree is a forest")
    }
}

impl Rooted for Forest {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn roots(&self) -> &[Vertex] {
        &self.children[0]
    }
    fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }
}

/// Validates a raw parent sequence, rejecting negative or too-large values.
pub fn validate_forest(raw: &[i64]) -> Result<Forest, ModelError> {
    let n = raw.len();
    let parent = raw
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if p < 0 || p as u64 > n as u64 {
                Err(ModelError::OutOfRange {
                    vertex: i + 1,
                    value: p,
                    n,
                })
            } else {
                Ok(p as usize)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Forest::new(parent)
}

fn check_acyclic(parent: &[usize]) -> Result<(), ModelError> {
    const NEW: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;
    let n = parent.len();
    let mut state = vec![NEW; n + 1];
    let mut path = Vec::new();
    for start in 1..=n {
        let mut v = start;
        while v != 0 && state[v] == NEW {
            state[v] = ACTIVE;
            path.push(v);
            v = parent[v - 1];
        }
        if v != 0 && state[v] == ACTIVE {
            return Err(ModelError::CycleDetected(v));
        }
        for u in path.drain(..) {
            state[u] = DONE;
        }
    }
    Ok(())
}

fn prufer_decode(m: usize, code: &[usize]) -> Vec<Vec<usize>> {
    let mut degree = vec![1usize; m + 1];
    for &c in code {
        degree[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (1..=m).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut adjacency = vec![Vec::new(); m + 1];
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for &c in code {
        let Reverse(leaf) = leaves.pop().expect("Prüfer decoding always has a leaf");
        link(leaf, c, &mut adjacency);
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().expect("two vertices remain");
    let Reverse(b) = leaves.pop().expect("two vertices remain");
    link(a, b, &mut adjacency);
    adjacency
}

/// Preorder layout of a rooted structure: every subtree is a contiguous slice.
#[derive(Debug, Clone)]
pub struct Layout {
    order: Vec<Vertex>,
    start: Vec<usize>,
    size: Vec<usize>,
}

impl Layout {
    pub fn new<G: Rooted + ?Sized>(g: &G) -> Self {
        let n = g.vertex_count();
        let mut order = Vec::with_capacity(n);
        let mut start = vec![0; n + 1];
        let mut size = vec![1; n + 1];
        let mut stack: Vec<Vertex> = g.roots().iter().rev().copied().collect();
        while let Some(v) = stack.pop() {
            start[v] = order.len();
            order.push(v);
            stack.extend(g.children(v).iter().rev());
        }
        for &v in order.iter().rev() {
            size[v] = 1 + g.children(v).iter().map(|&c| size[c]).sum::<usize>();
        }
        size[0] = n;
        Layout { order, start, size }
    }

    /// Vertices in preorder.
    pub fn preorder(&self) -> &[Vertex] {
        &self.order
    }

    /// `desc(v)`: `v` followed by all its proper descendants.
    pub fn descendants(&self, v: Vertex) -> &[Vertex] {
        let s = self.start[v];
        &self.order[s..s + self.size[v]]
    }

    /// Position of `v` in preorder.
    pub fn position(&self, v: Vertex) -> usize {
        self.start[v]
    }

    pub fn subtree_size(&self, v: Vertex) -> usize {
        self.size[v]
    }
}

/// Left-to-right post-order numbering, `post[v]` in `1..=n` (slot 0 unused).
pub fn postorder_numbers<G: Rooted + ?Sized>(g: &G) -> Vec<usize> {
    let n = g.vertex_count();
    let mut post = vec![0; n + 1];
    let mut next = 1;
    // (vertex, children already pushed)
    let mut stack: Vec<(Vertex, bool)> = g.roots().iter().rev().map(|&r| (r, false)).collect();
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            post[v] = next;
            next += 1;
        } else {
            stack.push((v, true));
            stack.extend(g.children(v).iter().rev().map(|&c| (c, false)));
        }
    }
    post
}

fn subtree_maxima<G: Rooted + ?Sized>(g: &G, layout: &Layout) -> Vec<Vertex> {
    let mut max: Vec<Vertex> = (0..=g.vertex_count()).collect();
    for &v in layout.preorder().iter().rev() {
        for &c in g.children(v) {
            max[v] = max[v].max(max[c]);
        }
    }
    max
}

fn sort_canonically<G: Rooted + ?Sized>(g: &G) -> Vec<Vec<Vertex>> {
    let layout = Layout::new(g);
    let max = subtree_maxima(g, &layout);
    let n = g.vertex_count();
    let mut table = Vec::with_capacity(n + 1);
    table.push(g.roots().to_vec());
    table.extend((1..=n).map(|v| g.children(v).to_vec()));
    for list in &mut table {
        list.sort_unstable_by_key(|&c| Reverse(max[c]));
    }
    table
}

/// A forest whose trees and sibling lists are in canonical drawing order:
/// strictly decreasing subtree maximum from left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedForest {
    parent: Vec<usize>,
    children: Vec<Vec<Vertex>>,
}

impl OrderedForest {
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }
}

impl Rooted for OrderedForest {
    fn vertex_count(&self) -> usize {
        self.n()
    }
    fn roots(&self) -> &[Vertex] {
        &self.children[0]
    }
    fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }
}

/// Orders the trees and every sibling list by decreasing subtree maximum.
pub fn canonical_order(f: &Forest) -> OrderedForest {
    OrderedForest {
        parent: f.parent.clone(),
        children: sort_canonically(f),
    }
}

/// A rooted tree on labels `1..=m` with canonical child order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedTree {
    root: Vertex,
    parent: Vec<usize>,
    children: Vec<Vec<Vertex>>,
}

impl OrderedTree {
    /// Builds a canonically ordered tree from a parent mapping on `1..=m`
    /// (`parent[v - 1]`, with `0` marking the single root).
    pub fn from_parents(parent: Vec<usize>) -> Result<Self, ModelError> {
        let forest = Forest::new(parent)?;
        let roots = forest.roots();
        if roots.len() != 1 {
            return Err(ModelError::MalformedTree(format!(
                "expected exactly one root, found {}",
                roots.len()
            )));
        }
        let root = roots[0];
        let children = sort_canonically(&forest);
        Ok(OrderedTree {
            root,
            parent: forest.parent,
            children,
        })
    }

    /// Number of labels `m`.
    pub fn size(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        match self.parent[v - 1] {
            0 => None,
            p => Some(p),
        }
    }

    /// Parent mapping with `0` at the root.
    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    /// Carries the shape over to new labels: vertex `v` becomes `relabel[v]`.
    /// `relabel` must be a permutation of `1..=m` (slot 0 ignored).
    pub fn relabeled(&self, relabel: &[Vertex]) -> Result<Self, ModelError> {
        let m = self.size();
        let mut parent = vec![0; m];
        for v in 1..=m {
            let p = self.parent[v - 1];
            parent[relabel[v] - 1] = if p == 0 { 0 } else { relabel[p] };
        }
        OrderedTree::from_parents(parent)
    }
}

impl Rooted for OrderedTree {
    fn vertex_count(&self) -> usize {
        self.size()
    }
    fn roots(&self) -> &[Vertex] {
        &self.children[0]
    }
    fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }
}

/// Joins the trees of `f` under a new root `n + 1`, keeping their order.
pub fn attach_super_root(f: &OrderedForest) -> OrderedTree {
    let n = f.n();
    let m = n + 1;
    let mut parent = f.parent.clone();
    for p in parent.iter_mut() {
        if *p == 0 {
            *p = m;
        }
    }
    parent.push(0);
    let mut children = f.children.clone();
    let roots = std::mem::replace(&mut children[0], vec![m]);
    children.push(roots);
    OrderedTree {
        root: m,
        parent,
        children,
    }
}

/// Deletes the root of `t`, which must carry the maximum label.
pub fn strip_super_root(t: &OrderedTree) -> Result<Forest, ModelError> {
    let m = t.size();
    if t.root != m {
        return Err(ModelError::RootNotMaximum {
            root: t.root,
            max: m,
        });
    }
    let parent = t.parent[..m - 1]
        .iter()
        .map(|&p| if p == m { 0 } else { p })
        .collect();
    Forest::new(parent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn forest(p: &[usize]) -> Forest {
        Forest::new(p.to_vec()).unwrap()
    }

    #[test]
    fn validate_examples() {
        let f = validate_forest(&[0]).unwrap();
        assert_eq!(f.n(), 1);
        assert_eq!(f.roots(), &[1]);

        let f = validate_forest(&[2, 0]).unwrap();
        assert_eq!(f.roots(), &[2]);
        assert_eq!(f.children(2), &[1]);

        assert_eq!(validate_forest(&[2, 1]), Err(ModelError::CycleDetected(1)));
        assert_eq!(validate_forest(&[1]), Err(ModelError::SelfParent(1)));
        assert!(matches!(
            validate_forest(&[0, 3]),
            Err(ModelError::OutOfRange { vertex: 2, value: 3, .. })
        ));
        assert!(matches!(
            validate_forest(&[-1]),
            Err(ModelError::OutOfRange { value: -1, .. })
        ));
        assert_eq!(validate_forest(&[]).unwrap(), Forest::empty());
    }

    #[test]
    fn longer_cycle_is_detected() {
        assert!(matches!(
            validate_forest(&[0, 3, 4, 2]),
            Err(ModelError::CycleDetected(_))
        ));
    }

    #[test]
    fn canonical_order_examples() {
        let o = canonical_order(&forest(&[0, 0]));
        assert_eq!(o.roots(), &[2, 1]);

        let o = canonical_order(&forest(&[2, 0]));
        assert_eq!(o.roots(), &[2]);
        assert_eq!(o.children(2), &[1]);

        // Trees with maxima 11, 13, 14; the tree holding 14 is rooted at 1.
        let mut p = vec![0; 14];
        p[14 - 1] = 1;
        p[13 - 1] = 2;
        p[11 - 1] = 3;
        for v in 4..=10 {
            p[v - 1] = 3;
        }
        p[12 - 1] = 2;
        let o = canonical_order(&forest(&p));
        assert_eq!(o.roots(), &[1, 2, 3]);
    }

    #[test]
    fn siblings_sorted_by_subtree_max_not_label() {
        // 5 -> {1, 2}, 1 -> 4: subtree max of 1 is 4 > 2.
        let o = canonical_order(&forest(&[5, 5, 0, 1, 0]));
        assert_eq!(o.children(5), &[1, 2]);
        assert_eq!(o.roots(), &[5, 3]);
    }

    #[test]
    fn attach_examples() {
        let t = attach_super_root(&canonical_order(&Forest::empty()));
        assert_eq!(t.size(), 1);
        assert_eq!(t.root(), 1);
        assert!(t.children(1).is_empty());

        let t = attach_super_root(&canonical_order(&forest(&[0, 0])));
        assert_eq!(t.root(), 3);
        assert_eq!(t.children(3), &[2, 1]);
        assert_eq!(t.parent(2), Some(3));
    }

    #[test]
    fn strip_examples() {
        let t = OrderedTree::from_parents(vec![0]).unwrap();
        assert_eq!(strip_super_root(&t).unwrap(), Forest::empty());

        let t = OrderedTree::from_parents(vec![3, 3, 0]).unwrap();
        assert_eq!(t.children(3), &[2, 1]);
        assert_eq!(strip_super_root(&t).unwrap(), forest(&[0, 0]));

        let t = OrderedTree::from_parents(vec![2, 3, 0]).unwrap();
        assert_eq!(strip_super_root(&t).unwrap(), forest(&[2, 0]));

        let t = OrderedTree::from_parents(vec![0, 1, 1]).unwrap();
        assert_eq!(
            strip_super_root(&t),
            Err(ModelError::RootNotMaximum { root: 1, max: 3 })
        );
    }

    #[test]
    fn ordered_tree_rejects_two_roots() {
        assert!(matches!(
            OrderedTree::from_parents(vec![0, 0]),
            Err(ModelError::MalformedTree(_))
        ));
    }

    #[test]
    fn layout_and_postorder() {
        let t = OrderedTree::from_parents(vec![3, 3, 0]).unwrap();
        let layout = Layout::new(&t);
        assert_eq!(layout.preorder(), &[3, 2, 1]);
        assert_eq!(layout.descendants(3), &[3, 2, 1]);
        assert_eq!(layout.descendants(2), &[2]);
        let post = postorder_numbers(&t);
        assert_eq!(&post[1..], &[2, 1, 3]);
    }

    #[test]
    fn random_forest_round_trips_through_super_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let f = Forest::random(200, &mut rng);
            let t = attach_super_root(&canonical_order(&f));
            assert_eq!(strip_super_root(&t).unwrap(), f);
        }
    }

    #[test]
    fn random_forest_small_n_is_roughly_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..3000 {
            *counts.entry(Forest::random(2, &mut rng)).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 3);
        // sd ≈ 25.8; 6 sd band
        assert!(counts.values().all(|&c| (845..=1155).contains(&c)), "{counts:?}");
    }
}
