//! Galois trees: partition, types, ramification and the leaf and branching
//! checks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed::{admissible_types, global_fixed_point, FixedPoint};
use crate::report::{Check, Status};
use crate::session::Session;
use crate::skeleton::{map_nodes, NodeId, Parallelism, SkeletonTree};

/// A maximal connected set of skeleton nodes of constant Galois order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisTree {
    pub order: u32,
    /// Eigenvalue exponent of the defining fixed points; `None` for the
    /// root of the skeleton and until [`assign_types`] has run.
    #[serde(rename = "type")]
    pub tree_type: Option<u32>,
    pub root: usize,
    pub members: Vec<usize>,
    pub ramification_levels: Vec<u32>,
}

/// Children of `idx` in the same Galois tree.
pub fn in_tree_children(tree: &SkeletonTree, idx: usize) -> impl Iterator<Item = usize> + '_ {
    let gal = tree.nodes[idx].gal;
    tree.nodes[idx].children.iter().copied().filter(move |&c| tree.nodes[c].gal == gal)
}

/// Partition of the skeleton; the root forms its own tree.
pub fn partition_trees(tree: &SkeletonTree) -> Vec<GaloisTree> {
    let mut tree_of = vec![usize::MAX; tree.len()];
    let mut out: Vec<GaloisTree> = Vec::new();
    for idx in 0..tree.len() {
        let node = &tree.nodes[idx];
        let joined = match node.parent {
            Some(par) if par != 0 && tree.nodes[par].gal == node.gal => Some(tree_of[par]),
            _ => None,
        };
        let t = joined.unwrap_or_else(|| {
            out.push(GaloisTree {
                order: node.gal,
                tree_type: None,
                root: idx,
                members: Vec::new(),
                ramification_levels: Vec::new(),
            });
            out.len() - 1
        });
        tree_of[idx] = t;
        out[t].members.push(idx);
    }
    for gt in &mut out {
        let levels: BTreeSet<u32> = gt
            .members
            .iter()
            .filter(|&&m| m != 0 && in_tree_children(tree, m).count() > 1)
            .map(|&m| tree.depth_of(m))
            .collect();
        gt.ramification_levels = levels.into_iter().collect();
    }
    out
}

/// Global fixed point of a node for `τ` of order `gal(node)`.
pub fn member_fixed_point(session: &Session, tree: &SkeletonTree, idx: usize) -> Result<FixedPoint> {
    let node = &tree.nodes[idx];
    if idx == 0 {
        return Err(Error::InvalidParameters("the skeleton root has no type".into()));
    }
    let x = tree.parameter(session, idx);
    let level = session.n() + node.id.depth;
    let gamma = match node.stab.as_ref() {
        Some(s) if node.gal > 1 => s
            .galois_generator()
            .ok_or_else(|| Error::InternalInconsistency(format!("node {} has no Galois generator", node.id)))?,
        Some(_) => crate::action::ActorElement::identity(&session.field),
        None => return Err(Error::InvalidParameters(format!("stabilizer of node {} was dropped", node.id))),
    };
    global_fixed_point(session, &x, &gamma, node.gal, level)
}

/// The type of a Galois tree: the eigenvalue exponent shared by all members.
pub fn tree_type(session: &Session, tree: &SkeletonTree, gt: &GaloisTree, parallelism: Parallelism) -> Result<u32> {
    if gt.root == 0 {
        return Err(Error::InvalidParameters("the skeleton root has no type".into()));
    }
    let types: Vec<Result<u32>> =
        map_nodes(&gt.members, parallelism, |m| member_fixed_point(session, tree, m).map(|fp| fp.t));
    let mut found = BTreeSet::new();
    for t in types {
        found.insert(t?);
    }
    let allowed = admissible_types(session, gt.order);
    match found.into_iter().collect::<Vec<_>>()[..] {
        [t] if allowed.contains(&t) => Ok(t),
        [t] => Err(Error::ModelViolation(format!("type {t} of tree at {} is not admissible", tree.nodes[gt.root].id))),
        ref ts => Err(Error::ModelViolation(format!("tree at {} has types {ts:?}", tree.nodes[gt.root].id))),
    }
}

pub fn assign_types(session: &Session, tree: &SkeletonTree, trees: &mut [GaloisTree], parallelism: Parallelism) -> Result<()> {
    for gt in trees.iter_mut().filter(|g| g.root != 0) {
        gt.tree_type = Some(tree_type(session, tree, gt, parallelism)?);
    }
    Ok(())
}

/// Residues `e mod h` allowed for ramification levels of a tree of order `h`
/// and type `t`: `{2(j - i) mod h : t ≡ k(n - 2i), j = 1..ℓ}`.
pub fn allowed_ramification_residues(session: &Session, h: u32, t: u32) -> Vec<u32> {
    let d = session.d() as i64;
    let k = (session.d() / h) as i64;
    let n = session.n() as i64;
    let ell = session.ell() as i64;
    let mut out = BTreeSet::new();
    for i in 1..=ell {
        if (k * (n - 2 * i)).rem_euclid(d) != t as i64 {
            continue;
        }
        for j in 1..=ell {
            out.insert((2 * (j - i)).rem_euclid(h as i64) as u32);
        }
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationReport {
    pub root: NodeId,
    pub order: u32,
    #[serde(rename = "type")]
    pub tree_type: u32,
    pub levels: Vec<u32>,
    pub allowed_residues: Vec<u32>,
    pub realized_residues: Vec<u32>,
    /// Levels whose residue is not allowed.
    pub violations: Vec<u32>,
}

pub fn ramification_report(session: &Session, tree: &SkeletonTree, gt: &GaloisTree) -> Result<RamificationReport> {
    let t = gt
        .tree_type
        .ok_or_else(|| Error::InvalidParameters("tree type has not been assigned".into()))?;
    let h = gt.order;
    let allowed = allowed_ramification_residues(session, h, t);
    let realized: BTreeSet<u32> = gt.ramification_levels.iter().map(|e| e % h).collect();
    let violations = gt.ramification_levels.iter().copied().filter(|e| !allowed.contains(&(e % h))).collect();
    Ok(RamificationReport {
        root: tree.nodes[gt.root].id,
        order: h,
        tree_type: t,
        levels: gt.ramification_levels.clone(),
        allowed_residues: allowed,
        realized_residues: realized.into_iter().collect(),
        violations,
    })
}

/// Every leaf of every Galois tree has depth `n - c`.
pub fn check_skelbottom(session: &Session, tree: &SkeletonTree, trees: &[GaloisTree]) -> Check {
    let name = format!("leaf depth S_{}({})", session.p(), session.n());
    let dep = session.skeleton_depth();
    if tree.max_depth != dep {
        return Check::new(name, Status::Vacuous, format!("built to depth {} < {dep}", tree.max_depth));
    }
    let mut leaves = 0usize;
    let mut bad = Vec::new();
    for gt in trees.iter().filter(|g| g.root != 0) {
        for &m in &gt.members {
            if in_tree_children(tree, m).next().is_none() {
                leaves += 1;
                if tree.depth_of(m) != dep {
                    bad.push(tree.nodes[m].id);
                }
            }
        }
    }
    let filter = if tree.min_gal > 1 { format!(", orders divisible by {}", tree.min_gal) } else { String::new() };
    let detail = match bad.first() {
        None => format!("{} trees, {leaves} leaves, all at depth {dep}{filter}", trees.len() - 1),
        Some(id) => format!("{} of {leaves} leaves above depth {dep}, first {id}{filter}", bad.len()),
    };
    Check::assert(name, bad.is_empty(), detail)
}

/// In-tree child counts by depth, as a histogram.
pub fn branching_by_depth(tree: &SkeletonTree, trees: &[GaloisTree]) -> BTreeMap<u32, BTreeMap<usize, usize>> {
    let mut out: BTreeMap<u32, BTreeMap<usize, usize>> = BTreeMap::new();
    for gt in trees.iter().filter(|g| g.root != 0) {
        for &m in &gt.members {
            let e = tree.depth_of(m);
            if e < tree.max_depth {
                *out.entry(e).or_default().entry(in_tree_children(tree, m).count()).or_default() += 1;
            }
        }
    }
    out
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// In-tree child counts are powers of `p`; asserted at the deepest
/// `asserted` depths below `n - c` when `p ≡ 5 mod 6`, reported elsewhere.
pub fn check_branching(session: &Session, tree: &SkeletonTree, trees: &[GaloisTree], asserted: u32) -> Vec<Check> {
    let p = session.p();
    let dep = session.skeleton_depth();
    let applies = p % 6 == 5 && tree.max_depth == dep;
    branching_by_depth(tree, trees)
        .into_iter()
        .map(|(e, hist)| {
            let bad: usize = hist.iter().filter(|(c, _)| !is_power_of(**c as u64, p)).map(|(_, m)| m).sum();
            let name = format!("branching S_{p}({}) depth {e}", session.n());
            let detail = format!("child counts {hist:?}");
            if applies && e + asserted >= dep {
                Check::assert(name, bad == 0, detail)
            } else {
                Check::new(name, Status::Report, format!("{detail}; {bad} not a power of {p}"))
            }
        })
        .collect()
}

/// Ramification levels against the type, for every typed tree.
pub fn check_ramification(session: &Session, tree: &SkeletonTree, trees: &[GaloisTree]) -> Result<(Check, Vec<RamificationReport>)> {
    let mut reports = Vec::new();
    for gt in trees.iter().filter(|g| g.root != 0 && g.order > 1) {
        reports.push(ramification_report(session, tree, gt)?);
    }
    let bad = reports.iter().filter(|r| !r.violations.is_empty()).count();
    let levels: usize = reports.iter().map(|r| r.levels.len()).sum();
    let check = Check::assert(
        format!("ramification residues S_{}({})", session.p(), session.n()),
        bad == 0,
        format!("{} trees, {levels} ramification levels, {bad} trees with disallowed residues", reports.len()),
    );
    Ok((check, reports))
}

/// Number of Galois trees of order `d`, and the depths of their roots.
pub fn order_d_trees(session: &Session, tree: &SkeletonTree, trees: &[GaloisTree]) -> (usize, BTreeSet<u32>) {
    let d = session.d();
    let roots: Vec<usize> = trees.iter().filter(|g| g.root != 0 && g.order == d).map(|g| g.root).collect();
    (roots.len(), roots.iter().map(|&r| tree.depth_of(r)).collect())
}
