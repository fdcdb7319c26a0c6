//! Output formats for skeleton trees: JSON, Graphviz and the indented
//! figure notation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::GaloisTree;
use crate::figure::subtree_figure;
use crate::skeleton::SkeletonTree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    /// `depth.index`
    pub id: String,
    pub depth: u32,
    pub gal: u32,
    pub parent: Option<String>,
    pub children: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisTreeDoc {
    pub order: u32,
    #[serde(rename = "type")]
    pub tree_type: Option<u32>,
    pub root: String,
    pub members: Vec<String>,
    pub ramification_levels: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonDoc {
    pub p: u64,
    pub n: u32,
    pub max_depth: u32,
    pub nodes: Vec<NodeDoc>,
    pub galois_trees: Vec<GaloisTreeDoc>,
}

impl SkeletonDoc {
    pub fn new(tree: &SkeletonTree, trees: &[GaloisTree]) -> SkeletonDoc {
        let id = |i: usize| tree.nodes[i].id.to_string();
        let nodes = tree
            .nodes
            .iter()
            .map(|node| NodeDoc {
                id: node.id.to_string(),
                depth: node.id.depth,
                gal: node.gal,
                parent: node.parent.map(id),
                children: node.children.iter().map(|&c| id(c)).collect(),
            })
            .collect();
        let galois_trees = trees
            .iter()
            .map(|gt| GaloisTreeDoc {
                order: gt.order,
                tree_type: gt.tree_type,
                root: id(gt.root),
                members: gt.members.iter().map(|&m| id(m)).collect(),
                ramification_levels: gt.ramification_levels.clone(),
            })
            .collect();
        SkeletonDoc { p: tree.p, n: tree.n, max_depth: tree.max_depth, nodes, galois_trees }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("skeleton documents serialize")
    }

    pub fn from_json(s: &str) -> crate::Result<SkeletonDoc> {
        serde_json::from_str(s).map_err(|e| crate::Error::InvalidParameters(format!("skeleton document: {e}")))
    }
}

/// Graphviz digraph; vertices are labelled with their Galois order.
pub fn to_dot(tree: &SkeletonTree) -> String {
    let mut s = String::from("digraph skeleton {\n  node [shape=circle];\n");
    for node in &tree.nodes {
        let _ = writeln!(s, "  \"{}\" [label=\"{}\"];", node.id, node.gal);
    }
    for node in &tree.nodes {
        for &c in &node.children {
            let _ = writeln!(s, "  \"{}\" -> \"{}\";", node.id, tree.nodes[c].id);
        }
    }
    s.push_str("}\n");
    s
}

/// The whole tree in figure notation.
pub fn to_figure(tree: &SkeletonTree) -> String {
    subtree_figure(tree, 0, &|_| true).render()
}
