//! Compressed trees in the notation of printed skeleton figures: a vertex
//! labelled with its Galois order, where a multiplicity `m` means that the
//! vertex together with its full descendant tree appears `m` times.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::skeleton::SkeletonTree;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FigTree {
    pub gal: u32,
    /// Distinct child subtrees with multiplicities, sorted.
    pub children: Vec<(FigTree, u64)>,
}

impl FigTree {
    pub fn leaf(gal: u32) -> FigTree {
        FigTree { gal, children: Vec::new() }
    }

    /// Merge identical siblings and sort, bottom up.
    pub fn canonical(gal: u32, children: Vec<(FigTree, u64)>) -> FigTree {
        let mut merged: BTreeMap<FigTree, u64> = BTreeMap::new();
        for (c, m) in children {
            let c = FigTree::canonical(c.gal, c.children);
            *merged.entry(c).or_insert(0) += m;
        }
        FigTree { gal, children: merged.into_iter().collect() }
    }

    /// Number of vertices after expanding multiplicities.
    pub fn expanded_size(&self) -> u64 {
        1 + self.children.iter().map(|(c, m)| m * c.expanded_size()).sum::<u64>()
    }

    pub fn height(&self) -> u32 {
        self.children.iter().map(|(c, _)| 1 + c.height()).max().unwrap_or(0)
    }

    /// Expanded vertex counts per level below this vertex.
    pub fn level_counts(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for (c, m) in &self.children {
            for (i, k) in c.level_counts().into_iter().enumerate() {
                if out.len() <= i + 1 {
                    out.push(0);
                }
                out[i + 1] += m * k;
            }
        }
        out
    }

    /// Indented rendering, one vertex per line, as `h` or `h×m`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s, 0, 1);
        s
    }

    fn render_into(&self, s: &mut String, indent: usize, mult: u64) {
        let _ = write!(s, "{}{}", "  ".repeat(indent), self.gal);
        if mult > 1 {
            let _ = write!(s, "×{mult}");
        }
        s.push('\n');
        for (c, m) in &self.children {
            c.render_into(s, indent + 1, *m);
        }
    }
}

/// The subtree below `idx` restricted to descendants whose Galois order
/// lies in `orders`, compressed.
pub fn subtree_figure(tree: &SkeletonTree, idx: usize, keep: &dyn Fn(u32) -> bool) -> FigTree {
    let node = &tree.nodes[idx];
    let children = node
        .children
        .iter()
        .filter(|&&c| keep(tree.nodes[c].gal))
        .map(|&c| (subtree_figure(tree, c, keep), 1))
        .collect();
    FigTree::canonical(node.gal, children)
}

/// A transcribed figure: vertices with labels and multiplicities, and edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FigureFixture {
    pub p: u64,
    pub n: u32,
    /// Depth of the top vertex in the skeleton.
    pub root_depth: u32,
    /// Galois orders shown in the figure.
    pub orders: Vec<u32>,
    pub nodes: Vec<FixtureNode>,
    pub edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureNode {
    pub name: String,
    pub gal: u32,
    pub mult: u64,
}

impl FigureFixture {
    /// Greatest common divisor of the orders shown; a skeleton restricted
    /// to multiples of it contains the figure.
    pub fn min_gal(&self) -> u32 {
        fn gcd(a: u32, b: u32) -> u32 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.orders.iter().copied().fold(0, gcd).max(1)
    }

    pub fn from_json(s: &str) -> crate::Result<FigureFixture> {
        serde_json::from_str(s).map_err(|e| crate::Error::InvalidParameters(format!("fixture: {e}")))
    }

    /// The compressed tree below the top vertex.
    pub fn tree(&self) -> crate::Result<FigTree> {
        let bad = |m: String| crate::Error::InvalidParameters(m);
        let index: BTreeMap<&str, usize> =
            self.nodes.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        let mut has_parent = vec![false; self.nodes.len()];
        for (a, b) in &self.edges {
            let (&ia, &ib) = index
                .get(a.as_str())
                .zip(index.get(b.as_str()))
                .ok_or_else(|| bad(format!("edge {a} -> {b} names an unknown vertex")))?;
            if has_parent[ib] {
                return Err(bad(format!("vertex {b} has two parents")));
            }
            has_parent[ib] = true;
            children[ia].push(ib);
        }
        let roots: Vec<usize> = (0..self.nodes.len()).filter(|&i| !has_parent[i]).collect();
        let [root] = roots[..] else {
            return Err(bad(format!("expected one top vertex, found {}", roots.len())));
        };
        fn build(fx: &FigureFixture, children: &[Vec<usize>], i: usize) -> FigTree {
            let kids = children[i].iter().map(|&c| (build(fx, children, c), fx.nodes[c].mult)).collect();
            FigTree::canonical(fx.nodes[i].gal, kids)
        }
        Ok(build(self, &children, root))
    }
}

/// Nodes at the top depth of `fx` whose subtree, restricted to the orders
/// shown, equals the figure.
pub fn fixture_matches(tree: &SkeletonTree, fx: &FigureFixture) -> crate::Result<Vec<usize>> {
    let want = fx.tree()?;
    let keep = |g: u32| fx.orders.contains(&g);
    Ok(tree
        .level(fx.root_depth)
        .filter(|&i| fx.root_depth == 0 || keep(tree.nodes[i].gal))
        .filter(|&i| subtree_figure(tree, i, &keep) == want)
        .collect())
}
