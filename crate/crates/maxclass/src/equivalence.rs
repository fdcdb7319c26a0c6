//! Local-to-global checks: a class has Galois order divisible by `h`
//! exactly when it is fixed by some `(u, τ)`, exactly when it is fixed by
//! some `(v, τ)` with `v ∈ ker(χ)`, exactly when it meets some `Ω_{n,j}`
//! with `j` admissible.

use std::collections::BTreeSet;

use crate::action::ActorElement;
use crate::error::{Error, Result};
use crate::fixed::{admissible_types, class_galois_order, divisors, eigen_component, global_fixed_point, solve_u_map};
use crate::lattice::ParamPoint;
use crate::oracle::OraclePartition;
use crate::report::Check;
use crate::session::Session;
use crate::skeleton::{map_nodes, Parallelism, SkeletonTree};
use crate::units::split_unit;

/// Galois order of a node from its stabilizer, compared with the largest
/// `h | d` for which some `(u, σ^{d/h})` fixes the class.
pub fn node_galois_order(session: &Session, tree: &SkeletonTree, idx: usize) -> Result<u32> {
    let node = &tree.nodes[idx];
    if idx == 0 {
        return Err(Error::InvalidParameters("the skeleton root has Galois order d² by convention".into()));
    }
    let stab = node
        .stab
        .as_ref()
        .ok_or_else(|| Error::InvalidParameters(format!("stabilizer of node {} was dropped", node.id)))?;
    let from_stab = stab.galois_order(session.d());
    let x = tree.parameter(session, idx);
    let from_fixed = class_galois_order(session, &x, session.n() + node.id.depth, &divisors(session.d()))?;
    if from_stab != from_fixed {
        return Err(Error::InternalInconsistency(format!(
            "node {}: stabilizer gives {from_stab}, fixed-point test gives {from_fixed}",
            node.id
        )));
    }
    Ok(from_stab)
}

/// Oracle classes met by `Ω_{n,j}` modulo `Γ_{n+e}`, for `τ = σ^k`.
pub fn slice_classes(session: &Session, oracle: &OraclePartition, k: u32, h: u32, j: u32) -> Result<BTreeSet<u32>> {
    let f = &session.field;
    let lat = &session.lattice;
    let space = &oracle.space;
    let ell = session.ell();
    let mut basis = Vec::new();
    for m in space.level..space.level + space.e {
        for c in 0..ell {
            let mut y = vec![0u64; ell];
            y[c] = 1;
            basis.push(eigen_component(session, &lat.from_layer_digits(f, &y, m), k, h, j)?);
        }
    }
    let mut seen = vec![false; space.size()];
    seen[0] = true;
    let mut frontier = vec![0u32];
    let mut out = BTreeSet::new();
    while let Some(code) = frontier.pop() {
        let x = space.decode(session, code);
        for b in &basis {
            let next = space.encode(session, &lat.add(f, &x, b));
            if !seen[next as usize] {
                seen[next as usize] = true;
                frontier.push(next);
                if space.in_delta(next) {
                    out.insert(oracle.class_of[next as usize]);
                }
            }
        }
    }
    Ok(out)
}

/// The four conditions compared on every oracle class and every `h | d`.
/// Also checks that `Ω_{n,j}` is empty for inadmissible `j ∈ kZ`.
pub fn check_local_to_global(session: &Session, oracle: &OraclePartition) -> Result<Check> {
    let f = &session.field;
    let units = &session.units;
    let d = session.d();
    let e = oracle.space.e;
    let level = session.n() + e;
    let name = format!("local-to-global S_{}({}) depth {e}", session.p(), session.n());
    let mut problems = Vec::new();
    let mut compared = 0usize;
    for h in divisors(d) {
        let k = d / h;
        let divisible: BTreeSet<u32> =
            (0..oracle.classes.len() as u32).filter(|&c| oracle.classes[c as usize].gal % h == 0).collect();
        let admissible = admissible_types(session, h);
        let mut met = BTreeSet::new();
        // Eigenvalues of (1, τ) are h-th roots of unity.
        for j in (0..d).step_by(k as usize) {
            let classes = slice_classes(session, oracle, k, h, j)?;
            if admissible.contains(&j) {
                met.extend(classes);
            } else if !classes.is_empty() {
                problems.push(format!("h = {h}: Ω_(n,{j}) is not empty"));
            }
        }
        if met != divisible {
            problems.push(format!("h = {h}: {} classes divisible, {} met by admissible slices", divisible.len(), met.len()));
        }
        let t_matrix = units.galois_matrix(f, f.sigma_index(k as i64))?;
        for (c, class) in oracle.classes.iter().enumerate() {
            compared += 1;
            let x = oracle.space.decode(session, class.rep);
            let fixer = solve_u_map(session, &x, &x, k, level)?;
            if fixer.is_some() != divisible.contains(&(c as u32)) {
                problems.push(format!("h = {h}, class {c}: (u, τ) test disagrees with the Galois order {}", class.gal));
                continue;
            }
            let Some(g) = fixer else { continue };
            let fp = global_fixed_point(session, &x, &g, h, level)?;
            let x1 = session.act(&ActorElement::from_unit(units.to_unit(f, &fp.s)), &x)?;
            let v = units.dlog(f, &f.exp(&split_unit(f, &fp.stabilizer.unit)?.xi)?)?;
            let in_kernel = units.apply_matrix(&t_matrix, &v) == v;
            let same_class = |y: &ParamPoint| oracle.class_of[oracle.space.encode(session, y) as usize] == c as u32;
            if !in_kernel || !same_class(&x1) || !same_class(&fp.z) {
                problems.push(format!("h = {h}, class {c}: fixed point construction leaves the class or ker(χ)"));
            }
        }
    }
    let detail = match problems.first() {
        None => format!("{} classes, {compared} class and order pairs, all four conditions agree", oracle.classes.len()),
        Some(m) => format!("{} problems, first: {m}", problems.len()),
    };
    Ok(Check::assert(name, problems.is_empty(), detail))
}

/// Stabilizer and fixed-point Galois orders on every node, and a global
/// fixed point for every `h | gal(node)`.
pub fn check_fixed_points(session: &Session, tree: &SkeletonTree, parallelism: Parallelism) -> Result<Check> {
    let d = session.d();
    let items: Vec<usize> = (1..tree.len()).collect();
    let results = map_nodes(&items, parallelism, |idx| -> Result<usize> {
        let gal = node_galois_order(session, tree, idx)?;
        let node = &tree.nodes[idx];
        let x = tree.parameter(session, idx);
        let level = session.n() + node.id.depth;
        let mut built = 0;
        for h in divisors(gal) {
            let g = solve_u_map(session, &x, &x, d / h, level)?
                .ok_or_else(|| Error::InternalInconsistency(format!("node {}: no fixing element for h = {h}", node.id)))?;
            let fp = global_fixed_point(session, &x, &g, h, level)?;
            if !admissible_types(session, h).contains(&fp.t) {
                return Err(Error::ModelViolation(format!("node {}: type {} is not admissible", node.id, fp.t)));
            }
            built += 1;
        }
        Ok(built)
    });
    let mut built = 0;
    let mut first_error = None;
    let mut errors = 0;
    for r in results {
        match r {
            Ok(b) => built += b,
            Err(e) => {
                errors += 1;
                first_error.get_or_insert(e);
            }
        }
    }
    let name = format!("global fixed points S_{}({})", session.p(), session.n());
    let detail = match first_error {
        None => format!("{} nodes, {built} fixed points in admissible eigenspaces", items.len()),
        Some(e) => format!("{errors} nodes fail, first: {e}"),
    };
    Ok(Check::assert(name, errors == 0, detail))
}
