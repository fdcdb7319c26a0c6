//! Depth-by-depth construction of skeleton trees.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::ParamPoint;
use crate::orbits::{layer_orbits, ChildOrbit, OrbitFilter, StabilizerGens};
use crate::session::Session;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId {
    pub depth: u32,
    pub index: u32,
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.depth, self.index)
    }
}

#[derive(Debug, Clone)]
pub struct SkeletonNode {
    pub id: NodeId,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Layer point of the last step, at level `n + depth - 1`.
    pub digits: u32,
    pub gal: u32,
    /// Number of layer points in the parent's layer that define this class.
    pub orbit_size: u64,
    pub stab: Option<StabilizerGens>,
}

#[derive(Debug, Clone)]
pub struct SkeletonTree {
    pub p: u64,
    pub n: u32,
    pub max_depth: u32,
    /// Only classes whose Galois order is divisible by this value are kept.
    pub min_gal: u32,
    pub nodes: Vec<SkeletonNode>,
    pub levels: Vec<Range<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[default]
    Auto,
    Sequential,
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub max_depth: u32,
    pub min_gal: u32,
    pub parallelism: Parallelism,
    /// Drop stabilizers of nodes once they have been expanded.
    pub drop_stabilizers: bool,
}

impl BuildOptions {
    pub fn full(max_depth: u32) -> BuildOptions {
        BuildOptions { max_depth, min_gal: 1, parallelism: Parallelism::Auto, drop_stabilizers: false }
    }

    pub fn restricted(max_depth: u32, min_gal: u32) -> BuildOptions {
        BuildOptions { min_gal, ..BuildOptions::full(max_depth) }
    }

    pub fn sequential(mut self) -> BuildOptions {
        self.parallelism = Parallelism::Sequential;
        self
    }
}

impl SkeletonTree {
    pub fn root(&self) -> &SkeletonNode {
        &self.nodes[0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn depth_of(&self, idx: usize) -> u32 {
        self.nodes[idx].id.depth
    }

    pub fn level(&self, depth: u32) -> Range<usize> {
        self.levels.get(depth as usize).cloned().unwrap_or(0..0)
    }

    pub fn find(&self, id: NodeId) -> Option<usize> {
        let r = self.level(id.depth);
        let i = r.start + id.index as usize;
        (i < r.end).then_some(i)
    }

    /// Ancestors from the root down to `idx`, inclusive.
    pub fn path(&self, idx: usize) -> Vec<usize> {
        let mut path = vec![idx];
        let mut cur = idx;
        while let Some(p) = self.nodes[cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    /// The canonical parameter of a node, reduced modulo `Γ_{n+e}`.
    pub fn parameter(&self, session: &Session, idx: usize) -> ParamPoint {
        let f = &session.field;
        let lat = &session.lattice;
        let layer = session.layer();
        let mut x = ParamPoint::zero(session.ell());
        for &a in &self.path(idx)[1..] {
            let node = &self.nodes[a];
            let level = self.n + node.id.depth - 1;
            x = lat.add(f, &x, &lat.from_layer_digits(f, &layer.decode(node.digits), level));
        }
        x
    }

    pub fn count_at_depth(&self, depth: u32) -> usize {
        self.level(depth).len()
    }
}

/// Children of the node with parameter `x` at depth `depth`.
pub fn expand(
    session: &Session,
    stab: &StabilizerGens,
    x: &ParamPoint,
    depth: u32,
    min_gal: u32,
) -> Result<Vec<ChildOrbit>> {
    let filter = OrbitFilter { exclude_zero: depth == 0, slice: None, min_gal };
    layer_orbits(session, stab, x, session.n() + depth, filter)
}

pub(crate) fn map_nodes<I, T, F>(items: &[I], parallelism: Parallelism, f: F) -> Vec<T>
where
    I: Copy + Sync,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    match parallelism {
        #[cfg(feature = "parallel")]
        Parallelism::Auto => {
            use rayon::prelude::*;
            items.par_iter().map(|&i| f(i)).collect()
        }
        _ => items.iter().map(|&i| f(i)).collect(),
    }
}

/// Build `S_p(n)` down to `opts.max_depth`.
pub fn build_skeleton(session: &Session, opts: BuildOptions) -> Result<SkeletonTree> {
    let d = session.d();
    let root = SkeletonNode {
        id: NodeId { depth: 0, index: 0 },
        parent: None,
        children: Vec::new(),
        digits: 0,
        gal: d * d,
        orbit_size: 1,
        stab: Some(StabilizerGens::root(session)),
    };
    let mut tree = SkeletonTree {
        p: session.p(),
        n: session.n(),
        max_depth: opts.max_depth,
        min_gal: opts.min_gal.max(1),
        nodes: vec![root],
        levels: vec![0..1],
    };
    for depth in 0..opts.max_depth {
        let frontier: Vec<usize> = tree.level(depth).collect();
        let tree_ref = &tree;
        let results = map_nodes(&frontier, opts.parallelism, |idx| {
            let node = &tree_ref.nodes[idx];
            let stab = node.stab.as_ref().expect("frontier nodes keep their stabilizers");
            let x = tree_ref.parameter(session, idx);
            expand(session, stab, &x, depth, tree_ref.min_gal)
        });
        let start = tree.nodes.len();
        for (idx, res) in frontier.iter().zip(results) {
            let children = res?;
            for child in children {
                let pos = tree.nodes.len();
                tree.nodes.push(SkeletonNode {
                    id: NodeId { depth: depth + 1, index: (pos - start) as u32 },
                    parent: Some(*idx),
                    children: Vec::new(),
                    digits: child.rep,
                    gal: child.galois_order,
                    orbit_size: child.orbit_size,
                    stab: Some(child.stab),
                });
                tree.nodes[*idx].children.push(pos);
            }
            if opts.drop_stabilizers && depth > 0 {
                tree.nodes[*idx].stab = None;
            }
        }
        let end = tree.nodes.len();
        log::debug!("depth {}: {} classes", depth + 1, end - start);
        tree.levels.push(start..end);
    }
    Ok(tree)
}
