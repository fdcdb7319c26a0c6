//! The action of `U ⋊ G` on parameter tuples and the affine action on layers.
//!
//! `(u, φ)` sends `x` to `(ρ_2(u)^{-1} φ(x_1), …, ρ_{ℓ+1}(u)^{-1} φ(x_ℓ))`.
//! In adapted coordinates this is `τ ↦ φ(τ) A(u, φ)` with
//! `A_{jk} = c_φ^{-a_j} π^{a_k - a_j} (φ(R) D_u R^{-1})_{jk}`,
//! `c_φ = φ(π)/π` and `D_u = diag(ρ_{j+1}(u)^{-1})`.

use crate::cyclotomic::{CycElem, Field};
use crate::error::{Error, Result};
use crate::lattice::{twist_index, Lattice, ParamPoint};
use crate::modular::{inv_mod, mul_mod};
use crate::session::Session;
use crate::units::rho;

/// An element `(u, σ^gal)` of `U ⋊ G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActorElement {
    pub unit: CycElem,
    pub gal: u32,
}

impl ActorElement {
    pub fn identity(f: &Field) -> ActorElement {
        ActorElement { unit: f.one(), gal: 0 }
    }

    pub fn from_unit(unit: CycElem) -> ActorElement {
        ActorElement { unit, gal: 0 }
    }

    pub fn galois(f: &Field, r: u32) -> ActorElement {
        ActorElement { unit: f.one(), gal: r % f.d() as u32 }
    }

    /// `g·h = (u φ(u'), φ φ')`.
    pub fn compose(&self, f: &Field, h: &ActorElement) -> ActorElement {
        let twisted = f.sigma_pow(self.gal as i64, &h.unit);
        ActorElement { unit: f.mul(&self.unit, &twisted), gal: (self.gal + h.gal) % f.d() as u32 }
    }

    pub fn inverse(&self, f: &Field) -> Result<ActorElement> {
        let back = (f.d() as u32 - self.gal) % f.d() as u32;
        let u = f.sigma_pow(back as i64, &f.inv(&self.unit)?);
        Ok(ActorElement { unit: u, gal: back })
    }

    pub fn pow(&self, f: &Field, e: u64) -> ActorElement {
        let mut acc = ActorElement::identity(f);
        for _ in 0..e {
            acc = acc.compose(f, self);
        }
        acc
    }

    /// Order of the Galois part.
    pub fn galois_order(&self, d: u32) -> u32 {
        d / crate::cyclotomic::gcd(self.gal as i64, d as i64) as u32
    }
}

/// The matrix `A(u, φ)` together with φ.
#[derive(Debug, Clone)]
pub struct ActionMatrix {
    pub gal: u32,
    pub entries: Vec<Vec<CycElem>>,
}

pub fn action_matrix(f: &Field, lattice: &Lattice, g: &ActorElement) -> Result<ActionMatrix> {
    let ell = lattice.ell();
    let r = lattice.basis();
    let rinv = lattice.basis_inv();
    let a = lattice.shifts();
    let twists: Vec<CycElem> = (0..ell)
        .map(|j| f.inv(&rho(f, twist_index(j), &g.unit)?))
        .collect::<Result<_>>()?;
    let phi = |x: &CycElem| f.sigma_pow(g.gal as i64, x);
    let c_phi = f.div_pi(&phi(&f.pi()))?;
    let c_inv = f.inv(&c_phi)?;
    let mut entries = vec![vec![CycElem::ZERO; ell]; ell];
    for j in 0..ell {
        let scale = f.pow(&c_inv, a[j] as u64);
        let row: Vec<CycElem> = (0..ell).map(|l| f.mul(&phi(&r[j][l]), &twists[l])).collect();
        for k in 0..ell {
            let mut s = CycElem::ZERO;
            for l in 0..ell {
                s = f.add(&s, &f.mul(&row[l], &rinv[l][k]));
            }
            let s = if a[k] >= a[j] {
                f.mul(&s, &f.pi_pow(a[k] - a[j]))
            } else {
                f.div_pi_pow(&s, a[j] - a[k]).map_err(|_| {
                    Error::ModelViolation(format!("action does not preserve the lattice at ({j}, {k})"))
                })?
            };
            entries[j][k] = f.mul(&scale, &s);
        }
    }
    Ok(ActionMatrix { gal: g.gal, entries })
}

impl ActionMatrix {
    pub fn apply(&self, f: &Field, x: &ParamPoint) -> ParamPoint {
        let ell = x.tau.len();
        let img: Vec<CycElem> = x.tau.iter().map(|t| f.sigma_pow(self.gal as i64, t)).collect();
        let mut out = vec![CycElem::ZERO; ell];
        for (j, t) in img.iter().enumerate() {
            if t.is_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o = f.add(o, &f.mul(t, &self.entries[j][k]));
            }
        }
        ParamPoint { tau: out }
    }
}

/// Encoding of a layer `Γ_m / Γ_{m+1} ≅ F_p^ℓ`; point `y` has index
/// `Σ y_j p^{ℓ-1-j}`, so index order is lexicographic digit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layer {
    pub p: u64,
    pub ell: usize,
}

impl Layer {
    pub fn size(&self) -> usize {
        (self.p as usize).pow(self.ell as u32)
    }

    pub fn encode(&self, y: &[u64]) -> u32 {
        y.iter().fold(0u64, |acc, &a| acc * self.p + a % self.p) as u32
    }

    pub fn decode(&self, mut idx: u32) -> Vec<u64> {
        let mut y = vec![0u64; self.ell];
        for j in (0..self.ell).rev() {
            y[j] = idx as u64 % self.p;
            idx /= self.p as u32;
        }
        y
    }
}

/// Affine map `y ↦ y·lin + trans` of `F_p^ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerMap {
    pub p: u64,
    pub lin: Vec<Vec<u64>>,
    pub trans: Vec<u64>,
}

impl LayerMap {
    pub fn identity(p: u64, ell: usize) -> LayerMap {
        let lin = (0..ell).map(|j| (0..ell).map(|k| u64::from(j == k)).collect()).collect();
        LayerMap { p, lin, trans: vec![0; ell] }
    }

    pub fn apply(&self, y: &[u64]) -> Vec<u64> {
        let mut out = self.trans.clone();
        for (j, &a) in y.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o = (*o + a * self.lin[j][k]) % self.p;
            }
        }
        out
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn after(&self, other: &LayerMap) -> LayerMap {
        let ell = self.trans.len();
        let trans = self.apply(&other.trans);
        let lin = (0..ell)
            .map(|j| {
                (0..ell)
                    .map(|k| (0..ell).map(|l| other.lin[j][l] * self.lin[l][k]).sum::<u64>() % self.p)
                    .collect()
            })
            .collect();
        LayerMap { p: self.p, lin, trans }
    }

    pub fn is_identity(&self) -> bool {
        *self == LayerMap::identity(self.p, self.trans.len())
    }

    /// `(ℓ+1) × (ℓ+1)` matrix acting on row vectors `(y, 1)`.
    pub fn homogeneous(&self) -> Vec<Vec<u64>> {
        let ell = self.trans.len();
        let mut m: Vec<Vec<u64>> = self.lin.iter().map(|r| {
            let mut r = r.clone();
            r.push(0);
            r
        }).collect();
        let mut last = self.trans.clone();
        last.push(1);
        m.push(last);
        debug_assert_eq!(m.len(), ell + 1);
        m
    }
}

/// `log M` of a unipotent matrix over `F_p` of size at most p.
pub fn unipotent_log(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let x: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| (m[i][j] + p - u64::from(i == j)) % p).collect())
        .collect();
    let mut out = vec![vec![0u64; n]; n];
    let mut power = x.clone();
    for k in 1..n as u64 {
        let c = inv_mod(k, p);
        let c = if k % 2 == 0 { (p - c) % p } else { c };
        for i in 0..n {
            for j in 0..n {
                out[i][j] = (out[i][j] + mul_mod(c, power[i][j], p)) % p;
            }
        }
        power = matmul(&power, &x, p);
    }
    out
}

pub fn matmul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|l| a[i][l] * b[l][j] % p).sum::<u64>() % p).collect())
        .collect()
}

impl Session {
    pub fn action_matrix(&self, g: &ActorElement) -> Result<ActionMatrix> {
        action_matrix(&self.field, &self.lattice, g)
    }

    pub fn act(&self, g: &ActorElement, x: &ParamPoint) -> Result<ParamPoint> {
        Ok(self.action_matrix(g)?.apply(&self.field, x))
    }

    pub fn layer(&self) -> Layer {
        Layer { p: self.p(), ell: self.ell() }
    }

    /// Affine map induced by `g` on `x + Γ_m / Γ_{m+1}`, where `g` fixes
    /// `x + Γ_m`: `y ↦ g(x) - x + g(y)`.
    pub fn layer_map(&self, g: &ActorElement, x: &ParamPoint, m: u32) -> Result<LayerMap> {
        let am = self.action_matrix(g)?;
        self.layer_map_with(&am, x, m)
    }

    pub fn layer_map_with(&self, am: &ActionMatrix, x: &ParamPoint, m: u32) -> Result<LayerMap> {
        let f = &self.field;
        let lat = &self.lattice;
        let diff = lat.sub(f, &am.apply(f, x), x);
        if !lat.gamma_member(f, &diff, m)? {
            return Err(Error::NotInStabilizer);
        }
        let trans = lat.layer_digits(f, &diff, m);
        let ell = lat.ell();
        let lin = (0..ell)
            .map(|j| {
                let mut y = vec![0u64; ell];
                y[j] = 1;
                let e = lat.from_layer_digits(f, &y, m);
                lat.layer_digits(f, &am.apply(f, &e), m)
            })
            .collect();
        Ok(LayerMap { p: self.p(), lin, trans })
    }

    /// The class of `u·(x + y)` in the layer `Γ_{n+e}/Γ_{n+e+1}` above `x`,
    /// for `u` stabilizing `x + Γ_{n+e}`.
    pub fn affine_act(&self, u: &CycElem, x: &ParamPoint, y: &[u64], n: u32, e: u32) -> Result<Vec<u64>> {
        let map = self.layer_map(&ActorElement::from_unit(*u), x, n + e)?;
        Ok(map.apply(y))
    }
}
