//! Descendants inside a Galois tree through the affine action on
//! eigen-slices, and their behaviour under multiplication by `p`.
//!
//! For a member `C_{n,e}(z)` of a tree of order `h` and type `t` with
//! `z ∈ Ω_{n,t}`, the in-tree children are the affine
//! `Stab_U(z + Γ_{n+e})`-orbits on the layer at level `n + e` that meet the
//! slice `Z(n,e,t)`. Multiplication by `p` maps `Z(n,e,t)` onto
//! `Z(n,e+d,t)`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::action::ActorElement;
use crate::analysis::{in_tree_children, member_fixed_point, GaloisTree};
use crate::error::{Error, Result};
use crate::fixed::{congruent, kernel_image_split, lift_to_slice, slice_mask, stabilizer_u2};
use crate::lattice::ParamPoint;
use crate::orbits::LatticeAction;
use crate::report::{Check, Status};
use crate::roots::{root_data, root_test, RootData};
use crate::session::Session;
use crate::skeleton::{map_nodes, NodeId, Parallelism, SkeletonTree};
use crate::units::U2Lattice;

/// Affine orbits of `Stab_{U_2}(z + Γ_{n+e})` on the layer at `n + e`,
/// together with the slice `Z(n,e,t)`.
pub struct SliceOrbits {
    pub level: u32,
    pub stabilizer: U2Lattice,
    pub action: LatticeAction,
    pub mask: Vec<bool>,
    pub orbit_of: Vec<u32>,
}

impl SliceOrbits {
    pub fn new(session: &Session, z: &ParamPoint, e: u32, h: u32, t: u32) -> Result<SliceOrbits> {
        let level = session.n() + e;
        let stabilizer = stabilizer_u2(session, z, level)?;
        let action = LatticeAction::new(session, &stabilizer, z, level)?;
        let mask = slice_mask(session, level, session.d() / h, h, t)?;
        let orbit_of = action.orbit_ids(session.layer());
        Ok(SliceOrbits { level, stabilizer, action, mask, orbit_of })
    }

    pub fn slice_size(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Orbit ids meeting the slice, with the slice points in each.
    pub fn slice_orbits(&self) -> BTreeMap<u32, Vec<u32>> {
        let mut out: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (i, &m) in self.mask.iter().enumerate() {
            if m {
                out.entry(self.orbit_of[i]).or_default().push(i as u32);
            }
        }
        out
    }

    pub fn count(&self) -> usize {
        self.slice_orbits().len()
    }
}

/// Outcome of the kernel-reduction test on pairs of slice points in one
/// orbit: the `ker(χ)`-part of a transporter must transport as well.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReduction {
    pub instances: usize,
    pub failures: usize,
}

impl KernelReduction {
    fn merge(&mut self, other: KernelReduction) {
        self.instances += other.instances;
        self.failures += other.failures;
    }
}

/// Test up to `limit` pairs `(y₁, y₂)` of slice points in the same orbit:
/// with `u` a transporter of `z + y₁` to `z + y₂` modulo `Γ_{n+e+1}` and
/// `u = vw`, `v ∈ ker(χ)`, `w ∈ im(χ)`, also `v` must transport.
pub fn kernel_reduction(
    session: &Session,
    z: &ParamPoint,
    orbits: &SliceOrbits,
    h: u32,
    t: u32,
    limit: usize,
) -> Result<KernelReduction> {
    let f = &session.field;
    let lat = &session.lattice;
    let units = &session.units;
    let layer = session.layer();
    let k = session.d() / h;
    let level = orbits.level;
    let mut out = KernelReduction::default();
    'outer: for points in orbits.slice_orbits().values() {
        let Some((&first, rest)) = points.split_first() else { continue };
        let y1 = layer.decode(first);
        let x1 = lat.add(f, z, &lift_to_slice(session, &y1, level, k, h, t)?);
        for &other in rest {
            if out.instances >= limit {
                break 'outer;
            }
            let y2 = layer.decode(other);
            let x2 = lat.add(f, z, &lift_to_slice(session, &y2, level, k, h, t)?);
            let u = orbits
                .action
                .transporter(session, &y1, &y2)
                .ok_or_else(|| Error::InternalInconsistency("no transporter inside one orbit".into()))?;
            let moved = session.act(&ActorElement::from_unit(units.to_unit(f, &u)), &x1)?;
            if !congruent(session, &moved, &x2, level + 1)? {
                return Err(Error::InternalInconsistency("transporter does not move the slice point".into()));
            }
            let (v, _) = kernel_image_split(session, &u, k, h)?;
            let moved = session.act(&ActorElement::from_unit(units.to_unit(f, &v)), &x1)?;
            out.instances += 1;
            if !congruent(session, &moved, &x2, level + 1)? {
                out.failures += 1;
            }
        }
    }
    Ok(out)
}

/// Slice count against the built tree for one member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceCountRecord {
    pub node: NodeId,
    pub tree_children: usize,
    pub slice_orbits: usize,
    pub kernel: KernelReduction,
}

/// For every member of every typed tree below the built depth, compare the
/// in-tree child count with the slice orbit count, and run the kernel
/// reduction test on up to `limit` pairs per member.
pub fn slice_counts(
    session: &Session,
    tree: &SkeletonTree,
    trees: &[GaloisTree],
    limit: usize,
    parallelism: Parallelism,
) -> Result<Vec<SliceCountRecord>> {
    let mut items = Vec::new();
    for gt in trees.iter().filter(|g| g.root != 0) {
        let t = gt.tree_type.ok_or_else(|| Error::InvalidParameters("tree type has not been assigned".into()))?;
        for &m in &gt.members {
            if tree.depth_of(m) < tree.max_depth {
                items.push((m, gt.order, t));
            }
        }
    }
    let results = map_nodes(&items, parallelism, |(m, h, t)| -> Result<SliceCountRecord> {
        let fp = member_fixed_point(session, tree, m)?;
        let orbits = SliceOrbits::new(session, &fp.z, tree.depth_of(m), h, t)?;
        Ok(SliceCountRecord {
            node: tree.nodes[m].id,
            tree_children: in_tree_children(tree, m).count(),
            slice_orbits: orbits.count(),
            kernel: kernel_reduction(session, &fp.z, &orbits, h, t, limit)?,
        })
    });
    results.into_iter().collect()
}

pub fn check_slice_counts(session: &Session, records: &[SliceCountRecord]) -> Vec<Check> {
    let (p, n) = (session.p(), session.n());
    let bad: Vec<&SliceCountRecord> = records.iter().filter(|r| r.tree_children != r.slice_orbits).collect();
    let detail = match bad.first() {
        None => format!("{} members, all in-tree child counts equal slice orbit counts", records.len()),
        Some(r) => format!(
            "{} of {} members differ, first {}: {} children, {} slice orbits",
            bad.len(),
            records.len(),
            r.node,
            r.tree_children,
            r.slice_orbits
        ),
    };
    let mut kernel = KernelReduction::default();
    for r in records {
        kernel.merge(r.kernel);
    }
    let name = format!("kernel reduction S_{p}({n})");
    let kernel_check = if kernel.instances == 0 {
        Check::new(name, Status::Vacuous, "no pair of slice points shares an orbit")
    } else {
        Check::assert(
            name,
            kernel.failures == 0,
            format!("{} transporters, {} whose ker(χ)-part fails", kernel.instances, kernel.failures),
        )
    };
    vec![Check::assert(format!("slice orbit counts S_{p}({n})"), bad.is_empty(), detail), kernel_check]
}

/// Comparison of a member `C_{n,e}(z)` with `C_{n,e+d}(z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodRecord {
    pub node: NodeId,
    pub e: u32,
    pub count: usize,
    pub shifted_count: usize,
    /// Multiplication by `p` maps the slice bijectively onto the shifted
    /// slice and induces a bijection of the orbits meeting them.
    pub orbit_bijection: bool,
    /// `Stab_{U_2}(z + Γ_{n+e+d}) = Stab_{U_2}(z + Γ_{n+e})^{[p]}`.
    pub stabilizer_power: bool,
    /// `log_p` of the index of the `p`-th powers in the deeper stabilizer,
    /// when they are contained in it.
    pub power_index_exp: Option<u32>,
}

/// Largest `e` for which `C_{n,e+d}` and its children are in reach: both
/// `e + d < n - c` and `e + d + 1` within the session depth.
pub fn max_period_depth(session: &Session) -> Option<u32> {
    let d = session.d();
    let bound = session.skeleton_depth().min(session.max_depth());
    (bound > d + 1).then(|| bound - d - 1)
}

fn period_record(session: &Session, tree: &SkeletonTree, m: usize, h: u32, t: u32) -> Result<PeriodRecord> {
    let f = &session.field;
    let lat = &session.lattice;
    let layer = session.layer();
    let (p, d) = (session.p(), session.d());
    let k = d / h;
    let e = tree.depth_of(m);
    let fp = member_fixed_point(session, tree, m)?;
    let z = fp.z;
    let low = SliceOrbits::new(session, &z, e, h, t)?;
    let high = SliceOrbits::new(session, &z, e + d, h, t)?;
    let mut point_map = true;
    let mut forward: HashMap<u32, u32> = HashMap::new();
    let mut backward: HashMap<u32, u32> = HashMap::new();
    for (i, &m) in low.mask.iter().enumerate() {
        if !m {
            continue;
        }
        let y = lift_to_slice(session, &layer.decode(i as u32), low.level, k, h, t)?;
        let img = layer.encode(&lat.layer_digits(f, &lat.scale(f, &y, p), high.level)) as usize;
        if !high.mask[img] {
            point_map = false;
            continue;
        }
        let (a, b) = (low.orbit_of[i], high.orbit_of[img]);
        if *forward.entry(a).or_insert(b) != b || *backward.entry(b).or_insert(a) != a {
            point_map = false;
        }
    }
    let sizes_match = low.slice_size() == high.slice_size();
    let units = &session.units;
    let powers = low.stabilizer.p_power(units);
    let power_index_exp = powers
        .is_subset_of(units, &high.stabilizer)
        .then(|| high.stabilizer.order_exp(units) - powers.order_exp(units));
    Ok(PeriodRecord {
        node: tree.nodes[m].id,
        e,
        count: low.count(),
        shifted_count: high.count(),
        orbit_bijection: point_map && sizes_match && forward.len() == high.count(),
        stabilizer_power: high.stabilizer == powers,
        power_index_exp,
    })
}

/// Period records for all members of typed trees at depths `1..=max_e`.
pub fn period_records(
    session: &Session,
    tree: &SkeletonTree,
    trees: &[GaloisTree],
    parallelism: Parallelism,
) -> Result<Vec<PeriodRecord>> {
    let Some(max_e) = max_period_depth(session) else {
        return Ok(Vec::new());
    };
    let mut items = Vec::new();
    for gt in trees.iter().filter(|g| g.root != 0) {
        let t = gt.tree_type.ok_or_else(|| Error::InvalidParameters("tree type has not been assigned".into()))?;
        for &m in &gt.members {
            if tree.depth_of(m) <= max_e {
                items.push((m, gt.order, t));
            }
        }
    }
    map_nodes(&items, parallelism, |(m, h, t)| period_record(session, tree, m, h, t))
        .into_iter()
        .collect()
}

/// A root at depth `e + 1` with witness `(x, y)` and the verdict for
/// `(x, p·y)` at depth `e + d + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootShiftRecord {
    pub node: NodeId,
    pub h: u32,
    pub e: u32,
    pub accepted: bool,
    pub verdict: String,
}

/// Root shift for every root of the built tree whose shifted depth is in
/// reach.
pub fn root_shifts(session: &Session, tree: &SkeletonTree, parallelism: Parallelism) -> Result<Vec<RootShiftRecord>> {
    let Some(max_e) = max_period_depth(session) else {
        return Ok(Vec::new());
    };
    let f = &session.field;
    let items: Vec<usize> = (1..tree.len())
        .filter(|&i| {
            let node = &tree.nodes[i];
            node.id.depth >= 2
                && node.id.depth - 1 <= max_e
                && node.parent.is_some_and(|par| tree.nodes[par].gal != node.gal)
        })
        .collect();
    let results = map_nodes(&items, parallelism, |idx| -> Result<Option<RootShiftRecord>> {
        let h = tree.nodes[idx].gal;
        let Some(data) = root_data(session, tree, idx, h)? else {
            return Ok(None);
        };
        let shifted = RootData { e: data.e + session.d(), y: session.lattice.scale(f, &data.y, session.p()), ..data.clone() };
        let verdict = root_test(session, &shifted)?;
        Ok(Some(RootShiftRecord {
            node: tree.nodes[idx].id,
            h,
            e: data.e,
            accepted: verdict.accepted(),
            verdict: format!("{verdict:?}"),
        }))
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Per-depth-pair checks; asserted at the deepest pair with data when
/// `p ≡ 5 mod 6`, reported elsewhere.
pub fn check_periodicity(session: &Session, periods: &[PeriodRecord], shifts: &[RootShiftRecord]) -> Vec<Check> {
    let (p, n, d) = (session.p(), session.n(), session.d());
    let applies = p % 6 == 5;
    let mut checks = Vec::new();
    if periods.is_empty() && shifts.is_empty() {
        let detail = match max_period_depth(session) {
            None => format!("no pair (e, e + {d}) with e ≥ 1 and e + {d} < {}", session.skeleton_depth()),
            Some(e) => format!("no members or roots at depths up to {e} were built"),
        };
        checks.push(Check::new(format!("periodicity S_{p}({n})"), Status::Vacuous, detail));
        return checks;
    }
    let mut by_depth: BTreeMap<u32, Vec<&PeriodRecord>> = BTreeMap::new();
    for r in periods {
        by_depth.entry(r.e).or_default().push(r);
    }
    let deepest = by_depth.keys().next_back().copied();
    for (&e, recs) in &by_depth {
        let unequal = recs.iter().filter(|r| r.count != r.shifted_count).count();
        let no_bijection = recs.iter().filter(|r| !r.orbit_bijection).count();
        let no_power = recs.iter().filter(|r| !r.stabilizer_power).count();
        let mut indices: BTreeMap<Option<u32>, usize> = BTreeMap::new();
        for r in recs {
            *indices.entry(r.power_index_exp).or_default() += 1;
        }
        let name = format!("child counts S_{p}({n}) depths {e}, {}", e + d);
        let detail = format!("{} members, {unequal} unequal counts, {no_bijection} without orbit bijection", recs.len());
        checks.push(if applies && Some(e) == deepest {
            Check::assert(name, unequal == 0, detail)
        } else {
            Check::new(name, Status::Report, detail)
        });
        checks.push(Check::new(
            format!("stabilizer power law S_{p}({n}) depths {e}, {}", e + d),
            Status::Report,
            format!(
                "{} members, {no_power} where Stab(z + Γ_(n+e+d)) ≠ Stab(z + Γ_(n+e))^[p]; log_p index of the p-th powers: {indices:?}",
                recs.len()
            ),
        ));
    }
    let mut shifts_by_depth: BTreeMap<u32, Vec<&RootShiftRecord>> = BTreeMap::new();
    for r in shifts {
        shifts_by_depth.entry(r.e).or_default().push(r);
    }
    let deepest = shifts_by_depth.keys().next_back().copied();
    for (&e, recs) in &shifts_by_depth {
        let rejected: Vec<&&RootShiftRecord> = recs.iter().filter(|r| !r.accepted).collect();
        let name = format!("root shift S_{p}({n}) depths {}, {}", e + 1, e + d + 1);
        let detail = match rejected.first() {
            None => format!("{} roots, all shifted witnesses accepted", recs.len()),
            Some(r) => format!("{} of {} shifted witnesses not accepted, first {}: {}", rejected.len(), recs.len(), r.node, r.verdict),
        };
        checks.push(if applies && Some(e) == deepest {
            Check::assert(name, rejected.is_empty(), detail)
        } else {
            Check::new(name, Status::Report, detail)
        });
    }
    checks
}
