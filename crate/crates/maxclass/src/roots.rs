//! Roots of Galois trees.
//!
//! A node `G` at depth `e + 1` with parent of Galois order `b = ha`,
//! `a ≥ 2`, is the root of a Galois tree of order `h` exactly when
//! `G ≅ C_{n,e+1}(x + y)` with `x ∈ Ω'_{n,s}`, `y ∈ Ω_{n+e,t} ∖ Ω'_{n+e,s}`,
//! `sa ≡ t`, `gal(C_{n,e}(x)) = b`, and no `u` in
//! `Q = ker(χ) ∩ Stab_{U_2}(x + Γ_{n+e})` makes the element `(ω^s, ν)` fixing `Ω'_{n,s}` fix
//! `(u, 1)(x + y)` modulo `Γ_{n+e+1}`. This is decided by a transporter
//! search in `χ'(Q)`; for small `[Q : ker(χ') ∩ Q]` the coset
//! representatives are also tried one by one and the answers compared.

use serde::{Deserialize, Serialize};

use crate::action::ActorElement;
use crate::error::{Error, Result};
use crate::fixed::{
    chi_image, class_galois_order, coboundary, congruent, divisors, eigen_component, global_fixed_point, in_eigenspace,
    kernel_image_split, ker_chi_lattice, solve_u2_in, stabilizer_u2,
};
use crate::lattice::ParamPoint;
use crate::report::{Check, Status};
use crate::session::Session;
use crate::skeleton::{map_nodes, NodeId, Parallelism, SkeletonTree};
use crate::units::split_unit;

/// Cosets of `Q'` in `Q` are enumerated up to index `p^ENUMERATION_EXP`.
pub const ENUMERATION_EXP: u32 = 4;

/// Data of a root candidate.
#[derive(Debug, Clone)]
pub struct RootData {
    pub h: u32,
    pub a: u32,
    pub s: u32,
    pub t: u32,
    /// Depth of the parent.
    pub e: u32,
    pub x: ParamPoint,
    pub y: ParamPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootWitness {
    pub h: u32,
    pub a: u32,
    pub b: u32,
    pub s: u32,
    pub t: u32,
    pub e: u32,
    /// Number of coset representatives tried; zero when `[Q : Q']` was too
    /// large to enumerate and only the transporter search ran.
    pub representatives: usize,
    /// `log_p [Q : Q']`.
    pub index_exp: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootVerdict {
    Accepted(RootWitness),
    /// Index of the representative `u` for which the condition fails, when
    /// the cosets were enumerated.
    Rejected { representative: Option<usize> },
    InvalidWitness(String),
}

impl RootVerdict {
    pub fn accepted(&self) -> bool {
        matches!(self, RootVerdict::Accepted(_))
    }
}

/// Evaluate the root condition for `x + y` over the parent class
/// `x + Γ_{n+e}`.
pub fn root_test(session: &Session, data: &RootData) -> Result<RootVerdict> {
    let f = &session.field;
    let lat = &session.lattice;
    let d = session.d();
    let n = session.n();
    let RootData { h, a, s, t, e, ref x, ref y } = *data;
    let invalid = |m: String| Ok(RootVerdict::InvalidWitness(m));
    if h == 0 || d % h != 0 || a < 2 || (d / h) % a != 0 {
        return invalid(format!("h = {h}, a = {a} do not give b = ha dividing d"));
    }
    let k = d / h;
    let b = h * a;
    let nu = k / a;
    if (s as u64 * a as u64) % d as u64 != t as u64 % d as u64 {
        return invalid(format!("sa = {} is not t = {t} mod {d}", s * a));
    }
    if !lat.delta_member(f, x, n)? || !in_eigenspace(session, x, nu, s)? {
        return invalid("x is not in Ω'_{n,s}".into());
    }
    if !lat.delta_member(f, y, n + e)? || !in_eigenspace(session, y, k, t)? {
        return invalid("y is not in Ω_{n+e,t}".into());
    }
    let gal = if e == 0 { d } else { class_galois_order(session, x, n + e, &divisors(d))? };
    if gal != b {
        return invalid(format!("gal(C_(n,e)(x)) = {gal}, expected {b}"));
    }
    // (ω^a, 1) scales by ω^{-a} here, so the element fixing Ω'_{n,s} is (ω^s, ν).
    let g = ActorElement { unit: f.from_u64(f.omega_pow(s as i64)), gal: nu };
    if !congruent(session, &session.act(&g, x)?, x, n + e)? {
        return Err(Error::InternalInconsistency("(ω^s, ν) does not fix x".into()));
    }
    let stab = stabilizer_u2(session, x, n + e)?;
    let q = ker_chi_lattice(session, k, h)?.intersect(&session.units, &stab);
    let q_prime = ker_chi_lattice(session, nu, b)?.intersect(&session.units, &stab);
    let xy = lat.add(f, x, y);
    let gxy = session.act(&g, &xy)?;
    // Conjugating g by (u, 1) multiplies its unit by ν(u)u^{-1}, so some u in Q
    // works exactly when a transporter from g(x + y) to x + y lies in χ'(Q).
    let moved = solve_u2_in(session, &chi_image(session, &q, nu)?, &gxy, &xy, n + e + 1)?.is_some();
    let index_exp = q.order_exp(&session.units) - q_prime.order_exp(&session.units);
    let mut representatives = 0;
    if index_exp <= ENUMERATION_EXP {
        let reps = q.coset_reps(&session.units, &q_prime);
        representatives = reps.len();
        let mut found = None;
        for (i, c) in reps.iter().enumerate() {
            let u = ActorElement::from_unit(session.units.to_unit(f, c));
            let w = session.act(&u, &xy)?;
            if congruent(session, &session.act(&g, &w)?, &w, n + e + 1)? {
                found = Some(i);
                break;
            }
        }
        if found.is_some() != moved {
            return Err(Error::InternalInconsistency(format!(
                "coset enumeration ({found:?}) and transporter search ({moved}) disagree"
            )));
        }
        if let Some(representative) = found {
            return Ok(RootVerdict::Rejected { representative: Some(representative) });
        }
    } else if moved {
        return Ok(RootVerdict::Rejected { representative: None });
    }
    Ok(RootVerdict::Accepted(RootWitness { h, a, b, s, t, e, representatives, index_exp }))
}

/// Witness data for the question whether node `idx` is the root of a
/// Galois tree of order `h`.
///
/// The parent class is first moved to a global fixed point `x ∈ Ω'_{n,s}`
/// for `ν`. The child is then `x + y₁` for some `y₁ ∈ Γ_{n+e}`, fixed by
/// some `(ω^t v, τ)` with `v ∈ Stab_{U_2}(x + Γ_{n+e})`. Conjugating by the
/// coboundary of the image-of-χ part of `v` leaves a `τ`-fixed unipotent
/// part, so the `ω^t`-component of the increment defines the same class.
pub fn root_data(session: &Session, tree: &SkeletonTree, idx: usize, h: u32) -> Result<Option<RootData>> {
    let f = &session.field;
    let lat = &session.lattice;
    let units = &session.units;
    let node = &tree.nodes[idx];
    let Some(par) = node.parent.filter(|&p| p != 0) else {
        return Ok(None);
    };
    let b = tree.nodes[par].gal;
    if node.gal % h != 0 || b % h != 0 || b / h < 2 {
        return Ok(None);
    }
    let d = session.d();
    let n = session.n();
    let e = node.id.depth - 1;
    let (k, a) = (d / h, b / h);
    let generator = |i: usize| {
        let stab = tree.nodes[i].stab.as_ref();
        if tree.nodes[i].gal == 1 && stab.is_some() {
            return Ok(ActorElement::identity(f));
        }
        stab.and_then(|s| s.galois_generator())
            .ok_or_else(|| Error::InvalidParameters(format!("node {} has no Galois generator", tree.nodes[i].id)))
    };
    let x_g = tree.parameter(session, idx);
    let parent_fp = global_fixed_point(session, &x_g, &generator(par)?, b, n + e)?;
    let x = parent_fp.z;
    let s = parent_fp.t;
    let t = ((s as u64 * a as u64) % d as u64) as u32;
    let conj = ActorElement::from_unit(units.to_unit(f, &parent_fp.s));
    let x1 = session.act(&conj, &x_g)?;

    let gamma = generator(idx)?;
    let j = (0..node.gal as u64)
        .find(|&j| (j * gamma.gal as u64) % d as u64 == k as u64 % d as u64)
        .ok_or_else(|| Error::InternalInconsistency("no power of the stabilizer generator has Galois part τ".into()))?;
    let g = conj.compose(f, &gamma.pow(f, j)).compose(f, &conj.inverse(f)?);
    if !congruent(session, &session.act(&g, &x1)?, &x1, n + e + 1)? {
        return Err(Error::InternalInconsistency(format!("conjugated stabilizer does not fix {}", node.id)));
    }
    let split = split_unit(f, &g.unit)?;
    if split.a % d != t {
        return Err(Error::ModelViolation(format!("ω-exponent {} of the τ-stabilizer differs from t = {t}", split.a)));
    }
    let v = units.dlog(f, &f.exp(&split.xi)?)?;
    let (_, v_im) = kernel_image_split(session, &v, k, h)?;
    let c = coboundary(session, &v_im, k, h)?;
    let x2 = session.act(&ActorElement::from_unit(units.to_unit(f, &c)), &x1)?;
    let y = eigen_component(session, &lat.sub(f, &x2, &x), k, h, t)?;
    if !congruent(session, &lat.add(f, &x, &y), &x2, n + e + 1)? {
        return Err(Error::ModelViolation(format!("increment of {} is not definable in the ω^{t}-eigenspace", node.id)));
    }
    Ok(Some(RootData { h, a, s, t, e, x, y }))
}

/// The root criterion for node `idx` and order `h`, and the direct answer
/// from the Galois labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootComparison {
    pub node: NodeId,
    pub h: u32,
    pub direct: bool,
    pub verdict: RootVerdict,
}

/// All questions "is this node the root of a Galois tree" for every
/// `h | gal(node)` with `b / h ≥ 2`, answered by the criterion. The direct
/// answer is `gal(node) ≠ gal(parent)`.
pub fn compare_roots(session: &Session, tree: &SkeletonTree, parallelism: Parallelism) -> Result<Vec<RootComparison>> {
    let items: Vec<usize> = (1..tree.len()).collect();
    let results = map_nodes(&items, parallelism, |idx| -> Result<Vec<RootComparison>> {
        let node = &tree.nodes[idx];
        let mut out = Vec::new();
        let direct = node.parent.is_some_and(|par| tree.nodes[par].gal != node.gal);
        for h in divisors(node.gal) {
            if let Some(data) = root_data(session, tree, idx, h)? {
                let verdict = root_test(session, &data)?;
                out.push(RootComparison { node: node.id, h, direct, verdict });
            }
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for r in results {
        all.extend(r?);
    }
    Ok(all)
}

pub fn check_root_agreement(session: &Session, comparisons: &[RootComparison]) -> Check {
    let bad: Vec<&RootComparison> = comparisons.iter().filter(|c| c.direct != c.verdict.accepted()).collect();
    let roots = comparisons.iter().filter(|c| c.direct).count();
    let detail = match bad.first() {
        None => format!("{} questions, {roots} roots, all agree", comparisons.len()),
        Some(c) => format!("{} disagreements, first at {} for h = {}: {:?}", bad.len(), c.node, c.h, c.verdict),
    };
    Check::assert(format!("root criterion S_{}({})", session.p(), session.n()), bad.is_empty(), detail)
}

/// Necessary condition on root depths: `e ≡ 2(j - i) mod h` for some
/// `s ≡ (k/a)(n - 2i)` and `t ≡ k(n + e - 2j)`.
pub fn root_depth_congruence(session: &Session, h: u32, a: u32, s: u32, t: u32, e: u32) -> bool {
    let d = session.d() as i64;
    let k = (session.d() / h) as i64;
    let nu = k / a as i64;
    let n = session.n() as i64;
    let e = e as i64;
    let ell = session.ell() as i64;
    (1..=ell).any(|i| {
        (nu * (n - 2 * i)).rem_euclid(d) == s as i64
            && (1..=ell).any(|j| {
                (k * (n + e - 2 * j)).rem_euclid(d) == t as i64 && (e - 2 * (j - i)).rem_euclid(h as i64) == 0
            })
    })
}

pub fn check_root_congruence(session: &Session, comparisons: &[RootComparison]) -> Check {
    let accepted: Vec<&RootWitness> = comparisons
        .iter()
        .filter_map(|c| match &c.verdict {
            RootVerdict::Accepted(w) => Some(w),
            _ => None,
        })
        .collect();
    let bad = accepted
        .iter()
        .filter(|w| !root_depth_congruence(session, w.h, w.a, w.s, w.t, w.e))
        .count();
    let name = format!("root depth congruence S_{}({})", session.p(), session.n());
    if accepted.is_empty() {
        return Check::new(name, Status::Vacuous, "no roots with a ≥ 2");
    }
    Check::assert(name, bad == 0, format!("{} roots, {bad} violate the congruence", accepted.len()))
}
