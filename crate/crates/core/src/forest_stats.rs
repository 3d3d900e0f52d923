//! Inversion, leader and tree statistics on forests and trees.
//!
//! `inv(G:v)` counts the proper descendants of `v` with a smaller label. A
//! leader is a vertex with `inv(G:v) = 0`, i.e. the minimum of its own subtree.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::StatsError;
use crate::model::{Forest, Layout, Rooted, Vertex};

/// Number of proper descendants of `v` with a smaller label.
pub fn inv_at<G: Rooted + ?Sized>(g: &G, v: Vertex) -> Result<usize, StatsError> {
    let n = g.vertex_count();
    if v == 0 || v > n {
        return Err(StatsError::UnknownVertex { vertex: v, n });
    }
    let mut count = 0;
    let mut stack: Vec<Vertex> = g.children(v).to_vec();
    while let Some(x) = stack.pop() {
        if x < v {
            count += 1;
        }
        stack.extend_from_slice(g.children(x));
    }
    Ok(count)
}

/// `inv(G:v)` for every vertex at once, indexed by vertex (slot 0 unused).
pub fn inversion_counts<G: Rooted + ?Sized>(g: &G) -> Vec<usize> {
    let layout = Layout::new(g);
    let mut inv = vec![0; g.vertex_count() + 1];
    for &v in layout.preorder() {
        inv[v] = layout.descendants(v)[1..].iter().filter(|&&x| x < v).count();
    }
    inv
}

pub fn inv_total<G: Rooted + ?Sized>(g: &G) -> usize {
    inversion_counts(g).iter().sum()
}

/// Vertices that are the minimum of their subtree, ascending.
pub fn leaders<G: Rooted + ?Sized>(g: &G) -> Vec<Vertex> {
    let inv = inversion_counts(g);
    (1..=g.vertex_count()).filter(|&v| inv[v] == 0).collect()
}

pub fn lead<G: Rooted + ?Sized>(g: &G) -> usize {
    leaders(g).len()
}

pub fn tree_count(f: &Forest) -> usize {
    f.roots().len()
}

/// `(lead_0(F), ..., lead_n(F))`: how many vertices have each inversion count.
pub fn tinv_vector(f: &Forest) -> Vec<usize> {
    type_vector(&inversion_counts(f)[1..], f.n())
}

pub(crate) fn type_vector(values: &[usize], n: usize) -> Vec<usize> {
    let mut counts = vec![0; n + 1];
    for &x in values {
        counts[x] += 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ForestStatReport {
    pub n: usize,
    pub inv_at: BTreeMap<Vertex, usize>,
    pub inv_total: usize,
    pub leaders: Vec<Vertex>,
    pub lead: usize,
    pub tree: usize,
    pub tinv: Vec<usize>,
}

impl ForestStatReport {
    pub fn of(f: &Forest) -> Self {
        let n = f.n();
        let inv = inversion_counts(f);
        let leaders: Vec<Vertex> = (1..=n).filter(|&v| inv[v] == 0).collect();
        ForestStatReport {
            n,
            inv_at: (1..=n).map(|v| (v, inv[v])).collect(),
            inv_total: inv.iter().sum(),
            lead: leaders.len(),
            leaders,
            tree: tree_count(f),
            tinv: type_vector(&inv[1..], n),
        }
    }
}
