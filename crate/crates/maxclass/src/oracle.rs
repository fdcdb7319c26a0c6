//! Exhaustive orbit computation on `Δ_n / Γ_{n+e}` by generator closure,
//! independent of the stabilizer machinery.

use serde::{Deserialize, Serialize};

use crate::action::{ActionMatrix, ActorElement};
use crate::error::{Error, Result};
use crate::lattice::ParamPoint;
use crate::session::Session;
use crate::skeleton::{NodeId, SkeletonTree};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Points of `Γ_n / Γ_{n+e}`, encoded by their layer digits, lowest level
/// first.
#[derive(Debug, Clone, Copy)]
pub struct PointSpace {
    pub level: u32,
    pub e: u32,
    pub layer_size: u32,
}

impl PointSpace {
    pub fn new(session: &Session, e: u32, budget: u64) -> Result<PointSpace> {
        let layer_size = session.layer().size() as u64;
        let size = layer_size.checked_pow(e).filter(|&s| s <= budget);
        let Some(_) = size else {
            let size = layer_size.saturating_pow(e);
            return Err(Error::EnumerationBudget { size, budget });
        };
        Ok(PointSpace { level: session.n(), e, layer_size: layer_size as u32 })
    }

    pub fn size(&self) -> usize {
        (self.layer_size as usize).pow(self.e)
    }

    /// `x ∈ Δ_n`, i.e. the lowest layer is nonzero.
    pub fn in_delta(&self, code: u32) -> bool {
        self.e > 0 && code % self.layer_size != 0
    }

    pub fn encode(&self, session: &Session, x: &ParamPoint) -> u32 {
        let f = &session.field;
        let layer = session.layer();
        let mut code = 0u32;
        for k in (0..self.e).rev() {
            code = code * self.layer_size + layer.encode(&session.lattice.layer_digits(f, x, self.level + k));
        }
        code
    }

    pub fn decode(&self, session: &Session, mut code: u32) -> ParamPoint {
        let f = &session.field;
        let lat = &session.lattice;
        let layer = session.layer();
        let mut x = ParamPoint::zero(session.ell());
        for k in 0..self.e {
            let y = layer.decode(code % self.layer_size);
            code /= self.layer_size;
            x = lat.add(f, &x, &lat.from_layer_digits(f, &y, self.level + k));
        }
        x
    }
}

fn find(parent: &mut [u32], mut a: u32) -> u32 {
    while parent[a as usize] != a {
        let up = parent[parent[a as usize] as usize];
        parent[a as usize] = up;
        a = up;
    }
    a
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi as usize] = lo;
    }
}

/// Images of every point under each generator.
fn image_tables(session: &Session, space: &PointSpace, gens: &[ActionMatrix]) -> Vec<Vec<u32>> {
    let f = &session.field;
    gens.iter()
        .map(|g| {
            (0..space.size() as u32)
                .map(|c| space.encode(session, &g.apply(f, &space.decode(session, c))))
                .collect()
        })
        .collect()
}

/// Union-find closure; the id of each point is the smallest code in its
/// orbit.
fn closure(size: usize, tables: &[&Vec<u32>]) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..size as u32).collect();
    for table in tables {
        for (c, &img) in table.iter().enumerate() {
            union(&mut parent, c as u32, img);
        }
    }
    (0..size as u32).map(|c| find(&mut parent, c)).collect()
}

/// The unit generators `ω`, `θ` and `1 + π^m`, `2 ≤ m < J`.
pub fn unit_generators(session: &Session) -> Vec<ActorElement> {
    let f = &session.field;
    let mut gens = vec![
        ActorElement::from_unit(f.from_u64(f.omega())),
        ActorElement::from_unit(f.theta()),
    ];
    for m in 2..session.units.level() {
        gens.push(ActorElement::from_unit(f.add(&f.one(), &f.pi_pow(m))));
    }
    gens
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleClass {
    /// Smallest point code in the class.
    pub rep: u32,
    pub size: u64,
    pub gal: u32,
}

#[derive(Debug, Clone)]
pub struct OraclePartition {
    pub space: PointSpace,
    /// Class index of every point of `Δ_n / Γ_{n+e}`, `u32::MAX` elsewhere.
    pub class_of: Vec<u32>,
    pub classes: Vec<OracleClass>,
}

/// Orbits of `U ⋊ G` on `Δ_n / Γ_{n+e}` and their Galois orders. The
/// Galois order of a class is the number of `r` with `(1, σ^r)x` in the
/// `U`-orbit of `x`.
pub fn brute_orbits(session: &Session, e: u32, budget: u64) -> Result<OraclePartition> {
    if e > session.max_depth() {
        return Err(Error::InvalidParameters(format!("depth {e} exceeds the session depth {}", session.max_depth())));
    }
    let space = PointSpace::new(session, e, budget)?;
    let d = session.d();
    if e == 0 {
        let classes = vec![OracleClass { rep: 0, size: 1, gal: d * d }];
        return Ok(OraclePartition { space, class_of: vec![0], classes });
    }
    let f = &session.field;
    let unit_mats: Vec<ActionMatrix> =
        unit_generators(session).iter().map(|g| session.action_matrix(g)).collect::<Result<_>>()?;
    let sigma = session.action_matrix(&ActorElement::galois(f, 1))?;
    let mut tables = image_tables(session, &space, &unit_mats);
    let sigma_table = image_tables(session, &space, std::slice::from_ref(&sigma)).remove(0);
    let unit_orbit = closure(space.size(), &tables.iter().collect::<Vec<_>>());
    tables.push(sigma_table.clone());
    let full_orbit = closure(space.size(), &tables.iter().collect::<Vec<_>>());

    let mut class_of = vec![u32::MAX; space.size()];
    let mut classes: Vec<OracleClass> = Vec::new();
    let mut index_of_root = std::collections::HashMap::new();
    for c in 0..space.size() as u32 {
        if !space.in_delta(c) {
            continue;
        }
        let root = full_orbit[c as usize];
        let idx = *index_of_root.entry(root).or_insert_with(|| {
            classes.push(OracleClass { rep: c, size: 0, gal: 0 });
            classes.len() as u32 - 1
        });
        class_of[c as usize] = idx;
        classes[idx as usize].size += 1;
    }
    for class in &mut classes {
        let x = class.rep;
        let mut y = x;
        let mut gal = 0;
        for _ in 0..d {
            if unit_orbit[y as usize] == unit_orbit[x as usize] {
                gal += 1;
            }
            y = sigma_table[y as usize];
        }
        class.gal = gal;
    }
    Ok(OraclePartition { space, class_of, classes })
}

/// First difference between the oracle and the skeleton at depth `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mismatch {
    ClassCount { skeleton: usize, oracle: usize },
    SharedClass { first: NodeId, second: NodeId, class: u32 },
    Size { node: NodeId, skeleton: u64, oracle: u64 },
    Galois { node: NodeId, skeleton: u32, oracle: u32 },
}

/// Compare the depth-`e` nodes of a full skeleton with the oracle classes:
/// the node parameters must meet every class exactly once, with equal
/// class sizes and Galois orders. Skeleton class sizes are products of
/// orbit sizes along the path from the root.
pub fn compare_with_skeleton(session: &Session, tree: &SkeletonTree, oracle: &OraclePartition) -> Result<Option<Mismatch>> {
    let e = oracle.space.e;
    if tree.min_gal != 1 || tree.max_depth < e {
        return Err(Error::InvalidParameters(format!("comparison at depth {e} needs a full skeleton of that depth")));
    }
    let nodes: Vec<usize> = tree.level(e).collect();
    if nodes.len() != oracle.classes.len() {
        return Ok(Some(Mismatch::ClassCount { skeleton: nodes.len(), oracle: oracle.classes.len() }));
    }
    let mut owner: Vec<Option<usize>> = vec![None; oracle.classes.len()];
    for &idx in &nodes {
        let node = &tree.nodes[idx];
        let code = oracle.space.encode(session, &tree.parameter(session, idx));
        let class = oracle.class_of[code as usize];
        if class == u32::MAX {
            return Err(Error::InternalInconsistency(format!("node {} lies outside Δ_n", node.id)));
        }
        if let Some(other) = owner[class as usize] {
            return Ok(Some(Mismatch::SharedClass { first: tree.nodes[other].id, second: node.id, class }));
        }
        owner[class as usize] = Some(idx);
        let size: u64 = tree.path(idx)[1..].iter().map(|&a| tree.nodes[a].orbit_size).product();
        let oc = &oracle.classes[class as usize];
        if size != oc.size {
            return Ok(Some(Mismatch::Size { node: node.id, skeleton: size, oracle: oc.size }));
        }
        if node.gal != oc.gal {
            return Ok(Some(Mismatch::Galois { node: node.id, skeleton: node.gal, oracle: oc.gal }));
        }
    }
    Ok(None)
}
