//! The bijection `phi` from forests on `n` vertices to parking functions of
//! length `n`, its inverse, and the label correspondence `theta`.
//!
//! Forward direction:
//!
//! 1. order the forest canonically and hang it under a super-root `n + 1`,
//!    giving a tree `T`;
//! 2. relabel `T` top-down into a decreasing tree `D` (each vertex takes the
//!    largest label of its subtree, the others keep their relative order);
//!    `theta` records old label to new label;
//! 3. annotate every vertex with `I = inv(T:v)` and its post-order index `C`;
//! 4. read `C - I` in order of the `D` labels `1..=n` (the entry for `n + 1`
//!    is always 1 and is dropped).
//!
//! Backward, the parking function is parked with an extra car preferring
//! space 1. The space-to-car word gives `D` (each car's parent is the nearest
//! larger car to its right) and `C` (the space), the jumps give `I`, and an
//! inverse relabeling recovers `T`.

use serde::Serialize;

use crate::error::BijectionError;
use crate::forest_stats::inversion_counts;
use crate::model::{
    attach_super_root, canonical_order, postorder_numbers, strip_super_root, Forest, Layout,
    OrderedTree, Vertex,
};
use crate::parking::{park, ParkingFunction, PreferenceSequence};

/// Label correspondence from `T` labels to `D` labels on `1..=n+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theta {
    forward: Vec<Vertex>,
    backward: Vec<Vertex>,
}

impl Theta {
    fn from_forward(forward: Vec<Vertex>) -> Self {
        let mut backward = vec![0; forward.len()];
        for (v, &d) in forward.iter().enumerate().skip(1) {
            backward[d] = v;
        }
        Theta { forward, backward }
    }

    /// Number of labels, `n + 1`.
    pub fn len(&self) -> usize {
        self.forward.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.forward[v]
    }

    pub fn invert(&self, d: Vertex) -> Vertex {
        self.backward[d]
    }

    /// `theta(1), ..., theta(n + 1)`.
    pub fn images(&self) -> &[Vertex] {
        &self.forward[1..]
    }
}

/// Moves `v` to rank `rank` (0-based) among the labels of its subtree and
/// hands the remaining labels to the other subtree vertices in their current
/// relative order.
fn reassign(
    layout: &Layout,
    labels: &mut [Vertex],
    v: Vertex,
    rank: usize,
) -> Result<(), BijectionError> {
    let desc = layout.descendants(v);
    if rank >= desc.len() {
        return Err(BijectionError::InvalidInversionValue {
            vertex: v,
            value: rank,
            size: desc.len(),
        });
    }
    let mut pool: Vec<Vertex> = desc.iter().map(|&x| labels[x]).collect();
    pool.sort_unstable();
    let chosen = pool.remove(rank);
    let mut others = desc[1..].to_vec();
    others.sort_unstable_by_key(|&x| labels[x]);
    labels[v] = chosen;
    for (x, l) in others.into_iter().zip(pool) {
        labels[x] = l;
    }
    Ok(())
}

/// Relabels `t` into a decreasing tree, processing vertices in preorder.
/// Returns the `D` label of every vertex (slot 0 unused) and `theta`.
pub fn relabel_decreasing(t: &OrderedTree) -> (Vec<Vertex>, Theta) {
    let layout = Layout::new(t);
    let order = layout.preorder().to_vec();
    relabel_with_layout(&layout, &order)
}

/// [`relabel_decreasing`] with an explicit processing order, which must be a
/// permutation of the vertices. The result does not depend on the order.
pub fn relabel_decreasing_in_order(
    t: &OrderedTree,
    order: &[Vertex],
) -> Result<(Vec<Vertex>, Theta), BijectionError> {
    let m = t.size();
    let mut seen = vec![false; m + 1];
    if order.len() != m {
        return Err(BijectionError::InvalidOrder);
    }
    for &v in order {
        if v == 0 || v > m || std::mem::replace(&mut seen[v], true) {
            return Err(BijectionError::InvalidOrder);
        }
    }
    Ok(relabel_with_layout(&Layout::new(t), order))
}

fn relabel_with_layout(layout: &Layout, order: &[Vertex]) -> (Vec<Vertex>, Theta) {
    let mut labels: Vec<Vertex> = (0..=order.len()).collect();
    for &v in order {
        let top = layout.subtree_size(v) - 1;
        reassign(layout, &mut labels, v, top).expect("subtree maximum is always in range");
    }
    let theta = Theta::from_forward(labels.clone());
    (labels, theta)
}

/// `I`: `inv(T:v)` for every vertex, the super-root included.
pub fn inversion_overlay(t: &OrderedTree) -> Vec<usize> {
    inversion_counts(t)
}

/// `C`: left-to-right post-order index of every vertex.
pub fn postorder_overlay(t: &OrderedTree) -> Vec<usize> {
    postorder_numbers(t)
}

/// The three labelings `D`, `I`, `C` carried by one tree shape.
///
/// All vectors are indexed by the shape's own vertex ids (slot 0 unused).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayTriple {
    pub shape: OrderedTree,
    pub d_label: Vec<Vertex>,
    pub i_value: Vec<usize>,
    pub c_index: Vec<usize>,
}

impl OverlayTriple {
    /// `C - I` per vertex.
    pub fn circled(&self) -> Vec<usize> {
        self.c_index
            .iter()
            .zip(&self.i_value)
            .map(|(&c, &i)| c.saturating_sub(i))
            .collect()
    }

    /// The post-order word: `D` labels listed by post-order index.
    pub fn word(&self) -> Vec<Vertex> {
        let m = self.shape.size();
        let mut w = vec![0; m];
        for v in 1..=m {
            w[self.c_index[v] - 1] = self.d_label[v];
        }
        w
    }

    /// Checks every structural invariant, reporting the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        let t = &self.shape;
        let m = t.size();
        let root = t.root();
        let mut seen = vec![false; m + 1];
        for v in 1..=m {
            let d = self.d_label[v];
            if d == 0 || d > m || std::mem::replace(&mut seen[d], true) {
                return Err(format!("D is not a bijection onto 1..={m}"));
            }
            if let Some(p) = t.parent(v) {
                if self.d_label[p] <= d {
                    return Err(format!("D increases from {p} to child {v}"));
                }
            }
        }
        if self.c_index != postorder_numbers(t) {
            return Err("C is not the post-order numbering".into());
        }
        let layout = Layout::new(t);
        for v in 1..=m {
            if self.i_value[v] + 1 > layout.subtree_size(v) {
                return Err(format!("I({v}) exceeds its subtree size"));
            }
            if self.c_index[v] < self.i_value[v] + 1 {
                return Err(format!("C - I < 1 at vertex {v}"));
            }
        }
        if m > 0 && self.i_value[root] != m - 1 {
            return Err("I(root) differs from n".into());
        }
        let word = self.word();
        let mut vertex_of = vec![0; m + 1];
        for v in 1..=m {
            vertex_of[self.d_label[v]] = v;
        }
        let parent_in_d = |d: Vertex| t.parent(vertex_of[d]).map(|p| self.d_label[p]);
        let nearest = nearest_larger_right(&word);
        for (s, &w) in word.iter().enumerate() {
            if nearest[s] != parent_in_d(w) {
                return Err(format!("parent of {w} is not its nearest larger entry on the right"));
            }
        }
        if m > 0 && word[m - 1] != m {
            return Err("post-order word does not end with n + 1".into());
        }
        Ok(())
    }
}

/// For each position, the nearest strictly larger entry to its right.
fn nearest_larger_right(word: &[Vertex]) -> Vec<Option<Vertex>> {
    let mut out = vec![None; word.len()];
    // Entries to the right, decreasing from bottom to top.
    let mut stack: Vec<Vertex> = Vec::new();
    for (s, &x) in word.iter().enumerate().rev() {
        while stack.last().is_some_and(|&top| top < x) {
            stack.pop();
        }
        out[s] = stack.last().copied();
        stack.push(x);
    }
    out
}

/// Everything computed on the way from a forest to its parking function.
#[derive(Debug, Clone)]
pub struct PhiRun {
    pub tree: OrderedTree,
    pub theta: Theta,
    pub overlay: OverlayTriple,
    pub parking_function: ParkingFunction,
}

impl PhiRun {
    pub fn new(f: &Forest) -> Self {
        let tree = attach_super_root(&canonical_order(f));
        let (d_label, theta) = relabel_decreasing(&tree);
        let overlay = OverlayTriple {
            shape: tree.clone(),
            d_label,
            i_value: inversion_overlay(&tree),
            c_index: postorder_overlay(&tree),
        };
        let circled = overlay.circled();
        let n = f.n();
        let p: Vec<usize> = (1..=n).map(|j| circled[theta.invert(j)]).collect();
        debug_assert_eq!(circled[theta.invert(n + 1)], 1);
        let parking_function =
            ParkingFunction::new(p).expect("C - I ordered by D is always a parking function");
        PhiRun {
            tree,
            theta,
            overlay,
            parking_function,
        }
    }

    pub fn trace(&self) -> Vec<MapStep> {
        let m = self.tree.size();
        let d_parent = (1..=m)
            .map(|d| {
                self.tree
                    .parent(self.theta.invert(d))
                    .map_or(0, |p| self.theta.apply(p))
            })
            .collect();
        let circled = self.overlay.circled();
        vec![
            MapStep::Tree {
                parent: self.tree.parents().to_vec(),
            },
            MapStep::Decreasing {
                parent: d_parent,
                theta: self.theta.images().to_vec(),
            },
            MapStep::Inversions {
                values: self.overlay.i_value[1..].to_vec(),
            },
            MapStep::Postorder {
                values: self.overlay.c_index[1..].to_vec(),
            },
            MapStep::Circled {
                values: circled[1..].to_vec(),
            },
            MapStep::Emit {
                parking_function: self.parking_function.as_slice().to_vec(),
            },
        ]
    }
}

/// One stage of the forward map. Vertex-indexed vectors list vertices `1..=n+1`
/// by their `T` label, except `Decreasing::parent`, which is keyed by `D` label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum MapStep {
    Tree { parent: Vec<usize> },
    Decreasing { parent: Vec<usize>, theta: Vec<Vertex> },
    Inversions { values: Vec<usize> },
    Postorder { values: Vec<usize> },
    Circled { values: Vec<usize> },
    Emit { parking_function: Vec<usize> },
}

/// The forward map. Also returns `theta`, which sends each vertex of `f` to
/// its car in the result.
pub fn phi(f: &Forest) -> (ParkingFunction, Theta) {
    let run = PhiRun::new(f);
    (run.parking_function, run.theta)
}

/// Cars listed by the space they occupy after parking `P` followed by an
/// extra car `n + 1` preferring space 1, with each car's jump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceWord {
    pub word: Vec<usize>,
    pub jumps: Vec<usize>,
}

pub fn build_space_word(p: &ParkingFunction) -> SpaceWord {
    let mut prefs = p.as_slice().to_vec();
    prefs.push(1);
    let q = park(&PreferenceSequence::new(prefs.clone()).expect("preferences are positive")).q;
    let m = q.len();
    let mut word = vec![0; m];
    let mut jumps = vec![0; m];
    for (i, (&s, &want)) in q.iter().zip(&prefs).enumerate() {
        word[s - 1] = i + 1;
        jumps[s - 1] = s - want;
    }
    SpaceWord { word, jumps }
}

/// Rebuilds the decreasing tree from a space word: the parent of each car is
/// the closest larger car to its right. The shape's vertex ids are the car
/// numbers, so `D` is the identity; `C` is the space and `I` the jump.
pub fn nearest_larger_right_tree(
    word: &[Vertex],
    jumps: &[usize],
) -> Result<OverlayTriple, BijectionError> {
    let m = word.len();
    if m == 0 {
        return Err(BijectionError::MalformedWord("empty word".into()));
    }
    if jumps.len() != m {
        return Err(BijectionError::MalformedWord(format!(
            "{} jumps for {m} cars",
            jumps.len()
        )));
    }
    let mut seen = vec![false; m + 1];
    for &x in word {
        if x == 0 || x > m || std::mem::replace(&mut seen[x], true) {
            return Err(BijectionError::MalformedWord(format!(
                "not a permutation of 1..={m}"
            )));
        }
    }
    if word[m - 1] != m {
        return Err(BijectionError::MalformedWord(format!(
            "last entry is {}, expected {m}",
            word[m - 1]
        )));
    }
    let mut parent = vec![0; m];
    let mut c_index = vec![0; m + 1];
    let mut i_value = vec![0; m + 1];
    for (s, (&x, near)) in word.iter().zip(nearest_larger_right(word)).enumerate() {
        parent[x - 1] = near.unwrap_or(0);
        c_index[x] = s + 1;
        i_value[x] = jumps[s];
    }
    let shape = OrderedTree::from_parents(parent)?;
    Ok(OverlayTriple {
        shape,
        d_label: (0..=m).collect(),
        i_value,
        c_index,
    })
}

/// Undoes the decreasing relabeling: top-down, each vertex takes the
/// `(I(v) + 1)`-th smallest label of its subtree.
pub fn inverse_relabel(overlay: &OverlayTriple) -> Result<OrderedTree, BijectionError> {
    let labels = inverse_labels(overlay)?;
    Ok(overlay.shape.relabeled(&labels)?)
}

fn inverse_labels(overlay: &OverlayTriple) -> Result<Vec<Vertex>, BijectionError> {
    let layout = Layout::new(&overlay.shape);
    let mut labels = overlay.d_label.clone();
    for &v in layout.preorder() {
        reassign(&layout, &mut labels, v, overlay.i_value[v])?;
    }
    Ok(labels)
}

/// Everything computed on the way from a parking function back to its forest.
#[derive(Debug, Clone)]
pub struct PhiInvRun {
    pub space_word: SpaceWord,
    pub overlay: OverlayTriple,
    /// `T` label of each car (slot 0 unused).
    pub t_labels: Vec<Vertex>,
    pub tree: OrderedTree,
    pub forest: Forest,
}

impl PhiInvRun {
    pub fn new(p: &ParkingFunction) -> Result<Self, BijectionError> {
        let space_word = build_space_word(p);
        let overlay = nearest_larger_right_tree(&space_word.word, &space_word.jumps)?;
        let t_labels = inverse_labels(&overlay)?;
        let tree = overlay.shape.relabeled(&t_labels)?;
        let forest = strip_super_root(&tree)?;
        Ok(PhiInvRun {
            space_word,
            overlay,
            t_labels,
            tree,
            forest,
        })
    }

    pub fn trace(&self) -> Vec<UnmapStep> {
        let m = self.tree.size();
        vec![
            UnmapStep::SpaceWord {
                spaces: (1..=m).collect(),
                word: self.space_word.word.clone(),
                jumps: self.space_word.jumps.clone(),
            },
            UnmapStep::Decreasing {
                parent: self.overlay.shape.parents().to_vec(),
            },
            UnmapStep::InverseRelabel {
                labels: self.t_labels[1..].to_vec(),
            },
            UnmapStep::Tree {
                parent: self.tree.parents().to_vec(),
            },
            UnmapStep::Forest {
                parent: self.forest.parents().to_vec(),
            },
        ]
    }
}

/// One stage of the inverse map. `Decreasing::parent` and
/// `InverseRelabel::labels` are keyed by car number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum UnmapStep {
    SpaceWord {
        spaces: Vec<usize>,
        word: Vec<usize>,
        jumps: Vec<usize>,
    },
    Decreasing { parent: Vec<usize> },
    InverseRelabel { labels: Vec<Vertex> },
    Tree { parent: Vec<usize> },
    Forest { parent: Vec<usize> },
}

/// The inverse map.
pub fn phi_inv(p: &ParkingFunction) -> Forest {
    PhiInvRun::new(p)
        .expect("every parking function yields a consistent overlay")
        .forest
}
