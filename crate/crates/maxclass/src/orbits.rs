//! Stabilizers in `(U/U_J) ⋊ G` and orbit enumeration on layers.
//!
//! The stabilizer of a class `x + Γ_{n+e}` (θ dropped, since θ acts
//! trivially) is stored as `L ⋊ Q`: `L` its intersection with `U_2`, an
//! exponent lattice containing `U_J`, and generators of a complement `Q`
//! that commute modulo `L`. On a layer above `x`, `L` acts through an
//! elementary abelian p-group of unipotent affine maps, so `L`-orbits are
//! found by breadth-first search and point stabilizers in `L` are kernels of
//! linear maps over `F_p`. `Q` then permutes the `L`-orbits.

use crate::action::{unipotent_log, ActorElement, Layer, LayerMap};
use crate::error::{Error, Result};
use crate::lattice::ParamPoint;
use crate::linalg::fp_kernel;
use crate::session::Session;
use crate::units::{Exps, U2Lattice};
use crate::MAX_DEGREE;

/// Largest layer that may be enumerated.
pub const LAYER_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerGens {
    /// `Stab ∩ U_2`, containing `U_J`.
    pub lattice: U2Lattice,
    /// Generators of a complement together with their orders modulo `θ·L`.
    pub extras: Vec<(ActorElement, u32)>,
}

impl StabilizerGens {
    /// Stabilizer of the root class `0 + Γ_n`: `U_2 ⋊ (⟨ω⟩ × ⟨σ⟩)`.
    pub fn root(session: &Session) -> StabilizerGens {
        let f = &session.field;
        let d = session.d();
        let omega = ActorElement::from_unit(f.teichmuller());
        StabilizerGens {
            lattice: U2Lattice::full(&session.units),
            extras: vec![(omega, d), (ActorElement::galois(f, 1), d)],
        }
    }

    /// Order of the image of the projection to `G`.
    pub fn galois_order(&self, d: u32) -> u32 {
        let mut g = d;
        for (e, _) in &self.extras {
            g = crate::cyclotomic::gcd(g as i64, e.gal as i64) as u32;
        }
        d / g
    }

    /// The generator of the Galois projection: an element `(u, σ^r)` with
    /// `r` of maximal order, when the complement is cyclic.
    pub fn galois_generator(&self) -> Option<ActorElement> {
        match self.extras.as_slice() {
            [(g, _)] => Some(*g),
            _ => None,
        }
    }

    /// All elements of the complement, in a fixed order.
    pub fn complement_elements(&self, session: &Session) -> Vec<ActorElement> {
        let f = &session.field;
        let mut elems = vec![ActorElement::identity(f)];
        for (g, ord) in &self.extras {
            let mut next = Vec::with_capacity(elems.len() * *ord as usize);
            let mut power = ActorElement::identity(f);
            for _ in 0..*ord {
                for e in &elems {
                    next.push(e.compose(f, &power));
                }
                power = power.compose(f, g);
            }
            elems = next;
        }
        elems
    }
}

/// A child class: the orbit of a layer point under the stabilizer.
#[derive(Debug, Clone)]
pub struct ChildOrbit {
    /// Lexicographically smallest layer point of the orbit.
    pub rep: u32,
    pub orbit_size: u64,
    pub galois_order: u32,
    pub stab: StabilizerGens,
}

/// Options restricting [`layer_orbits`].
#[derive(Debug, Clone, Copy, Default)]
pub struct OrbitFilter<'a> {
    /// Drop the orbit of the zero class.
    pub exclude_zero: bool,
    /// Keep only orbits meeting this set of layer points.
    pub slice: Option<&'a [bool]>,
    /// Keep only orbits whose Galois order is divisible by this value.
    pub min_gal: u32,
}

/// The action of a lattice `L ⊆ U_2` on the layer above `x` at level `m`:
/// generators acting nontrivially with their affine maps, and the rest.
#[derive(Debug, Clone)]
pub struct LatticeAction {
    pub rows: Vec<Exps>,
    pub maps: Vec<LayerMap>,
    pub trivial_rows: Vec<Exps>,
}

impl LatticeAction {
    /// `L` must stabilize `x + Γ_m`.
    pub fn new(session: &Session, lattice: &U2Lattice, x: &ParamPoint, level: u32) -> Result<LatticeAction> {
        let f = &session.field;
        let mut out = LatticeAction { rows: Vec::new(), maps: Vec::new(), trivial_rows: Vec::new() };
        for row in lattice.rows() {
            let u = session.units.to_unit(f, row);
            let map = session.layer_map(&ActorElement::from_unit(u), x, level)?;
            if map.is_identity() {
                out.trivial_rows.push(*row);
            } else {
                out.rows.push(*row);
                out.maps.push(map);
            }
        }
        Ok(out)
    }

    fn tables(&self, layer: Layer) -> Vec<Vec<u32>> {
        self.maps
            .iter()
            .map(|map| (0..layer.size() as u32).map(|i| layer.encode(&map.apply(&layer.decode(i)))).collect())
            .collect()
    }

    /// `Stab_L(y)`: `p·L`, trivially acting generators and the kernel of
    /// `c ↦ Σ c_i (y, 1)·log M_i`.
    pub fn point_stabilizer(&self, session: &Session, lattice: &U2Lattice, y: &[u64]) -> U2Lattice {
        let p = session.p();
        let yh: Vec<u64> = y.iter().copied().chain(std::iter::once(1)).collect();
        let vectors: Vec<Vec<u64>> = self
            .maps
            .iter()
            .map(|m| {
                let lg = unipotent_log(&m.homogeneous(), p);
                (0..yh.len()).map(|k| yh.iter().zip(&lg).map(|(a, r)| a * r[k]).sum::<u64>() % p).collect()
            })
            .collect();
        let mut gens: Vec<Exps> = lattice.rows().iter().map(|r| session.units.scale(r, p)).collect();
        gens.extend(self.trivial_rows.iter().copied());
        for c in fp_kernel(&vectors, p) {
            gens.push(combine(session, &self.rows, &c));
        }
        U2Lattice::from_generators(&session.units, &gens)
    }

    /// Orbit id of every layer point, ids in order of smallest member.
    pub fn orbit_ids(&self, layer: Layer) -> Vec<u32> {
        let tables = self.tables(layer);
        let mut orbit_of = vec![u32::MAX; layer.size()];
        let mut next = 0u32;
        let mut queue = Vec::new();
        for start in 0..layer.size() {
            if orbit_of[start] != u32::MAX {
                continue;
            }
            orbit_of[start] = next;
            queue.push(start as u32);
            while let Some(z) = queue.pop() {
                for table in &tables {
                    let w = table[z as usize] as usize;
                    if orbit_of[w] == u32::MAX {
                        orbit_of[w] = next;
                        queue.push(w as u32);
                    }
                }
            }
            next += 1;
        }
        orbit_of
    }

    /// An element of `L` moving layer point `from` to `to`, if any.
    pub fn transporter(&self, session: &Session, from: &[u64], to: &[u64]) -> Option<Exps> {
        let layer = session.layer();
        let (from, to) = (layer.encode(from), layer.encode(to));
        let mut coef: std::collections::HashMap<u32, Vec<u64>> = std::collections::HashMap::new();
        coef.insert(from, vec![0; self.rows.len()]);
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(z) = queue.pop_front() {
            if z == to {
                return Some(combine(session, &self.rows, &coef[&z]));
            }
            let pt = layer.decode(z);
            for (gi, map) in self.maps.iter().enumerate() {
                let w = layer.encode(&map.apply(&pt));
                if !coef.contains_key(&w) {
                    let mut c = coef[&z].clone();
                    c[gi] = (c[gi] + 1) % session.p();
                    coef.insert(w, c);
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Orbits of the stabilizer `stab` of `x + Γ_m` on the layer
/// `(x + Γ_m) / Γ_{m+1}`, `m = n + e`, with refined stabilizers.
pub fn layer_orbits(
    session: &Session,
    stab: &StabilizerGens,
    x: &ParamPoint,
    level: u32,
    filter: OrbitFilter<'_>,
) -> Result<Vec<ChildOrbit>> {
    let f = &session.field;
    let p = session.p();
    let d = session.d();
    let layer = session.layer();
    let size = layer.size();
    if size as u64 > LAYER_BUDGET {
        return Err(Error::EnumerationBudget { size: size as u64, budget: LAYER_BUDGET });
    }
    let gens = LatticeAction::new(session, &stab.lattice, x, level)?;
    let tables = gens.tables(layer);
    let ng = gens.rows.len();

    let mut orbit_of = vec![u32::MAX; size];
    let mut coef = vec![0u8; size * ng.max(1)];
    let mut roots: Vec<u32> = Vec::new();
    let mut orbit_len: Vec<u64> = Vec::new();
    let mut queue: Vec<u32> = Vec::new();
    for start in 0..size as u32 {
        if orbit_of[start as usize] != u32::MAX {
            continue;
        }
        let id = roots.len() as u32;
        roots.push(start);
        orbit_of[start as usize] = id;
        queue.clear();
        queue.push(start);
        let mut count = 0u64;
        while let Some(z) = queue.pop() {
            count += 1;
            for (gi, table) in tables.iter().enumerate() {
                let w = table[z as usize];
                if orbit_of[w as usize] == u32::MAX {
                    orbit_of[w as usize] = id;
                    let (src, dst) = (z as usize * ng, w as usize * ng);
                    for k in 0..ng {
                        coef[dst + k] = coef[src + k];
                    }
                    coef[dst + gi] = ((coef[dst + gi] as u64 + 1) % p) as u8;
                    queue.push(w);
                }
            }
        }
        orbit_len.push(count);
    }

    let elems = stab.complement_elements(session);
    let elem_maps: Vec<LayerMap> = elems.iter().map(|g| session.layer_map(g, x, level)).collect::<Result<_>>()?;
    // Permutation of L-orbits induced by each complement element.
    let perms: Vec<Vec<u32>> = elem_maps
        .iter()
        .map(|m| roots.iter().map(|&r| orbit_of[layer.encode(&m.apply(&layer.decode(r))) as usize]).collect())
        .collect();

    let norb = roots.len();
    let meets_slice: Option<Vec<bool>> = filter.slice.map(|slice| {
        let mut m = vec![false; norb];
        for (pt, &inside) in slice.iter().enumerate() {
            if inside {
                m[orbit_of[pt] as usize] = true;
            }
        }
        m
    });
    let mut s_orbit = vec![u32::MAX; norb];
    let mut children = Vec::new();
    for o in 0..norb {
        if s_orbit[o] != u32::MAX {
            continue;
        }
        let mut members = Vec::new();
        for perm in &perms {
            let t = perm[o] as usize;
            if s_orbit[t] == u32::MAX {
                s_orbit[t] = o as u32;
                members.push(t);
            }
        }
        // o is the smallest orbit id in its S-orbit, hence holds the minimum.
        let rep = roots[o];
        if filter.exclude_zero && rep == 0 {
            continue;
        }
        if let Some(m) = &meets_slice {
            if !members.iter().any(|&o| m[o]) {
                continue;
            }
        }
        let h_elems: Vec<usize> = (0..perms.len()).filter(|&q| perms[q][o] as usize == o).collect();
        let best = *h_elems
            .iter()
            .max_by_key(|&&q| (elems[q].galois_order(d), std::cmp::Reverse(q)))
            .expect("identity stabilizes every orbit");
        let gal = elems[best].galois_order(d);
        if h_elems.len() as u32 != gal {
            return Err(Error::InternalInconsistency(format!(
                "orbit stabilizer in the complement has order {} but Galois image {gal}",
                h_elems.len()
            )));
        }
        if filter.min_gal > 1 && gal % filter.min_gal != 0 {
            continue;
        }
        let y = layer.decode(rep);
        let orbit_size: u64 = members.iter().map(|&m| orbit_len[m]).sum();

        let lattice = gens.point_stabilizer(session, &stab.lattice, &y);

        let mut extras = Vec::new();
        if gal > 1 {
            let q = elems[best];
            let target = layer.encode(&elem_maps[best].apply(&y)) as usize;
            let c: Vec<u64> = coef[target * ng..target * ng + ng].iter().map(|&a| a as u64).collect();
            let t = combine(session, &gens.rows, &c);
            let t_inv = session.units.to_unit(f, &session.units.neg(&t));
            let g = ActorElement::from_unit(t_inv).compose(f, &q);
            extras.push((g, gal));
        }
        children.push(ChildOrbit { rep, orbit_size, galois_order: gal, stab: StabilizerGens { lattice, extras } });
    }
    children.sort_by_key(|c| c.rep);
    Ok(children)
}

fn combine(session: &Session, rows: &[Exps], c: &[u64]) -> Exps {
    let mut acc = [0u64; MAX_DEGREE];
    for (row, &ci) in rows.iter().zip(c) {
        if ci != 0 {
            acc = session.units.add(&acc, &session.units.scale(row, ci));
        }
    }
    acc
}
