//! The parameter lattices `Γ_n` and points of `Γ_1`.
//!
//! A tuple `x ∈ K^ℓ` is stored through its coordinates `τ` in an adapted
//! basis `b_j = π^{-a_j} R_j` of `Γ_1`, with `R ∈ GL_ℓ(O)`. Then
//! `x ∈ Γ_n ⇔ τ_j ∈ 𝔭^{n-1}` for all `j`, so reduction modulo `Γ_{n+e}` is a
//! coordinatewise box reduction and layers `Γ_m/Γ_{m+1}` are read off digits.
//!
//! Two models of `Γ_n` are provided:
//!
//! * [`LatticeModel::Wedge`]: `x` parametrises `f = Σ x_j ϑ_{j+1}` with
//!   `ϑ_i(a∧b) = σ_i(a)σ_{1-i}(b) - σ_i(b)σ_{1-i}(a)`, and `Γ_n` is the set of
//!   `x` whose image ideal lies in `𝔭^{n-1}`. The image is generated by
//!   `f(1∧θ^m) = Σ_j x_j (θ^{m(1-i)} - θ^{mi})`, `i = j+1`, `m = 1..p-1`.
//! * [`LatticeModel::Diagonal`]: `Γ_n = ⊕_j 𝔭^{n-2j} e_j`.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycElem, Field};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeModel {
    #[default]
    Wedge,
    Diagonal,
}

impl std::str::FromStr for LatticeModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wedge" => Ok(LatticeModel::Wedge),
            "diagonal" => Ok(LatticeModel::Diagonal),
            _ => Err(Error::InvalidParameters(format!("unknown lattice model {s}"))),
        }
    }
}

/// A point of `Γ_1` in adapted coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamPoint {
    pub tau: Vec<CycElem>,
}

impl ParamPoint {
    pub fn zero(ell: usize) -> ParamPoint {
        ParamPoint { tau: vec![CycElem::ZERO; ell] }
    }
}

#[derive(Debug, Clone)]
pub struct Lattice {
    model: LatticeModel,
    ell: usize,
    shifts: Vec<u32>,
    basis: Vec<Vec<CycElem>>,
    basis_inv: Vec<Vec<CycElem>>,
    wedge: Vec<Vec<CycElem>>,
}

/// Index `i = j + 2` of the twist acting on coordinate `j` (0-based).
pub fn twist_index(j: usize) -> u64 {
    j as u64 + 2
}

impl Lattice {
    pub fn new(f: &Field, model: LatticeModel) -> Result<Lattice> {
        let ell = f.ell();
        let p = f.p();
        let wedge: Vec<Vec<CycElem>> = (0..ell)
            .map(|j| {
                let i = twist_index(j) as i64;
                (1..p as i64)
                    .map(|m| f.sub(&f.theta_pow(m * (1 - i)), &f.theta_pow(m * i)))
                    .collect()
            })
            .collect();
        let identity: Vec<Vec<CycElem>> = (0..ell)
            .map(|j| (0..ell).map(|k| if j == k { f.one() } else { CycElem::ZERO }).collect())
            .collect();
        let (basis, shifts) = match model {
            LatticeModel::Diagonal => (identity, (1..=ell as u32).map(|j| 2 * j - 1).collect()),
            LatticeModel::Wedge => smith_rows(f, &wedge)?,
        };
        let basis_inv = invert(f, &basis)?;
        Ok(Lattice { model, ell, shifts, basis, basis_inv, wedge })
    }

    pub fn model(&self) -> LatticeModel {
        self.model
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// The exponents `a_j` of the adapted basis `b_j = π^{-a_j} R_j`.
    pub fn shifts(&self) -> &[u32] {
        &self.shifts
    }

    pub fn max_shift(&self) -> u32 {
        self.shifts.iter().copied().max().unwrap_or(0)
    }

    pub fn basis(&self) -> &[Vec<CycElem>] {
        &self.basis
    }

    pub fn basis_inv(&self) -> &[Vec<CycElem>] {
        &self.basis_inv
    }

    fn check_level(&self, f: &Field, level: u32) -> Result<()> {
        if level > f.precision() {
            return Err(Error::PrecisionExhausted { needed: level, available: f.precision() });
        }
        Ok(())
    }

    /// `x ∈ Γ_n`.
    pub fn gamma_member(&self, f: &Field, x: &ParamPoint, n: u32) -> Result<bool> {
        self.check_level(f, n)?;
        Ok(x.tau.iter().all(|t| f.in_ideal(t, n.saturating_sub(1))))
    }

    /// `x ∈ Δ_n = Γ_n ∖ Γ_{n+1}`.
    pub fn delta_member(&self, f: &Field, x: &ParamPoint, n: u32) -> Result<bool> {
        Ok(self.gamma_member(f, x, n)? && !self.gamma_member(f, x, n + 1)?)
    }

    /// Largest `n` with `x ∈ Γ_n`, or `None` if `x` is zero at working precision.
    pub fn level_of(&self, f: &Field, x: &ParamPoint) -> Option<u32> {
        x.tau.iter().filter_map(|t| f.valuation(t).finite()).min().map(|v| v + 1)
    }

    /// Canonical representative of `x + Γ_{n+e}`.
    pub fn reduce_mod(&self, f: &Field, x: &ParamPoint, n: u32, e: u32) -> Result<ParamPoint> {
        let top = n + e - 1;
        self.check_level(f, top)?;
        Ok(ParamPoint { tau: x.tau.iter().map(|t| f.reduce(t, top)).collect() })
    }

    /// Layer digits of `x ∈ Γ_{m}` in `Γ_m / Γ_{m+1}`.
    pub fn layer_digits(&self, f: &Field, x: &ParamPoint, m: u32) -> Vec<u64> {
        x.tau.iter().map(|t| f.digit(t, m - 1)).collect()
    }

    /// The point `Σ y_j E e_j` whose class in `Γ_m / Γ_{m+1}` has digits `y`.
    pub fn from_layer_digits(&self, f: &Field, y: &[u64], m: u32) -> ParamPoint {
        let e = f.digit_elem(m - 1);
        ParamPoint { tau: y.iter().map(|&c| f.scale(&e, c)).collect() }
    }

    pub fn add(&self, f: &Field, x: &ParamPoint, y: &ParamPoint) -> ParamPoint {
        ParamPoint { tau: x.tau.iter().zip(&y.tau).map(|(a, b)| f.add(a, b)).collect() }
    }

    pub fn sub(&self, f: &Field, x: &ParamPoint, y: &ParamPoint) -> ParamPoint {
        ParamPoint { tau: x.tau.iter().zip(&y.tau).map(|(a, b)| f.sub(a, b)).collect() }
    }

    pub fn scale(&self, f: &Field, x: &ParamPoint, c: u64) -> ParamPoint {
        ParamPoint { tau: x.tau.iter().map(|a| f.scale(a, c)).collect() }
    }

    /// The tuple `π^s x ∈ O^ℓ`, `s` = [`Lattice::max_shift`].
    pub fn to_scaled_tuple(&self, f: &Field, x: &ParamPoint) -> Vec<CycElem> {
        let s = self.max_shift();
        let mut out = vec![CycElem::ZERO; self.ell];
        for j in 0..self.ell {
            if x.tau[j].is_zero() {
                continue;
            }
            let t = f.mul(&x.tau[j], &f.pi_pow(s - self.shifts[j]));
            for (k, o) in out.iter_mut().enumerate() {
                *o = f.add(o, &f.mul(&t, &self.basis[j][k]));
            }
        }
        out
    }

    /// Key of the class `x + Γ_{n+e}` computed from the scaled tuple alone:
    /// the image generators `f(1∧θ^m)` modulo `𝔭^{n+e-1}` for the wedge
    /// model, the coordinates modulo `𝔭^{n+e-2j}` for the diagonal model.
    pub fn class_key(&self, f: &Field, scaled: &[CycElem], top: u32) -> Vec<CycElem> {
        let s = self.max_shift();
        match self.model {
            LatticeModel::Wedge => {
                let cols = self.wedge[0].len();
                (0..cols)
                    .map(|m| {
                        let mut w = CycElem::ZERO;
                        for j in 0..self.ell {
                            w = f.add(&w, &f.mul(&scaled[j], &self.wedge[j][m]));
                        }
                        f.reduce(&w, top + s)
                    })
                    .collect()
            }
            LatticeModel::Diagonal => (0..self.ell)
                .map(|j| f.reduce(&scaled[j], top + s - self.shifts[j]))
                .collect(),
        }
    }
}

/// Row-reduce the ℓ × (p-1) wedge matrix `C` to `U C V = [diag(π^{s_j}) | 0]`
/// and return `(U, s)`; then `Γ_1` has basis `π^{-s_j} U_j`.
fn smith_rows(f: &Field, c: &[Vec<CycElem>]) -> Result<(Vec<Vec<CycElem>>, Vec<u32>)> {
    let rows = c.len();
    let cols = c[0].len();
    let mut m: Vec<Vec<CycElem>> = c.to_vec();
    let mut u: Vec<Vec<CycElem>> = (0..rows)
        .map(|j| (0..rows).map(|k| if j == k { f.one() } else { CycElem::ZERO }).collect())
        .collect();
    let mut shifts = Vec::with_capacity(rows);
    for t in 0..rows {
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in m.iter().enumerate().skip(t) {
            for (cidx, e) in row.iter().enumerate().skip(t) {
                if let Some(v) = f.valuation(e).finite() {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, r, cidx));
                    }
                }
            }
        }
        let (s, r, cidx) =
            best.ok_or_else(|| Error::InternalInconsistency("wedge matrix is rank deficient".into()))?;
        m.swap(t, r);
        u.swap(t, r);
        for row in m.iter_mut() {
            row.swap(t, cidx);
        }
        let unit = f.div_pi_pow(&m[t][t], s)?;
        let unit_inv = f.inv(&unit)?;
        for e in m[t].iter_mut() {
            *e = f.mul(e, &unit_inv);
        }
        for e in u[t].iter_mut() {
            *e = f.mul(e, &unit_inv);
        }
        for r in 0..rows {
            if r == t {
                continue;
            }
            let factor = f.div_pi_pow(&m[r][t], s)?;
            for k in 0..cols {
                let delta = f.mul(&factor, &m[t][k]);
                m[r][k] = f.sub(&m[r][k], &delta);
            }
            for k in 0..rows {
                let delta = f.mul(&factor, &u[t][k]);
                u[r][k] = f.sub(&u[r][k], &delta);
            }
        }
        for k in 0..cols {
            if k == t {
                continue;
            }
            let factor = f.div_pi_pow(&m[t][k], s)?;
            for row in m.iter_mut() {
                let delta = f.mul(&factor, &row[t]);
                row[k] = f.sub(&row[k], &delta);
            }
        }
        shifts.push(s);
    }
    Ok((u, shifts))
}

/// Inverse of a matrix in `GL_ℓ(O)`.
fn invert(f: &Field, a: &[Vec<CycElem>]) -> Result<Vec<Vec<CycElem>>> {
    let n = a.len();
    let mut m: Vec<Vec<CycElem>> = a.to_vec();
    let mut inv: Vec<Vec<CycElem>> = (0..n)
        .map(|j| (0..n).map(|k| if j == k { f.one() } else { CycElem::ZERO }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| f.is_unit(&m[r][col]))
            .ok_or_else(|| Error::InternalInconsistency("basis matrix is not invertible over O".into()))?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let pinv = f.inv(&m[col][col])?;
        for k in 0..n {
            m[col][k] = f.mul(&m[col][k], &pinv);
            inv[col][k] = f.mul(&inv[col][k], &pinv);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col];
            for k in 0..n {
                let d1 = f.mul(&factor, &m[col][k]);
                m[r][k] = f.sub(&m[r][k], &d1);
                let d2 = f.mul(&factor, &inv[col][k]);
                inv[r][k] = f.sub(&inv[r][k], &d2);
            }
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_shifts() {
        for p in [7, 11, 13] {
            let f = Field::new(p, 60).unwrap();
            let lat = Lattice::new(&f, LatticeModel::Wedge).unwrap();
            assert_eq!(lat.shifts().len(), f.ell());
            assert!(lat.shifts().iter().all(|&s| s >= 1), "{:?}", lat.shifts());
        }
    }

    #[test]
    fn basis_times_inverse_is_identity() {
        let f = Field::new(7, 60).unwrap();
        let lat = Lattice::new(&f, LatticeModel::Wedge).unwrap();
        let r = lat.basis();
        let ri = lat.basis_inv();
        for j in 0..2 {
            for k in 0..2 {
                let mut s = CycElem::ZERO;
                for l in 0..2 {
                    s = f.add(&s, &f.mul(&r[j][l], &ri[l][k]));
                }
                let expect = if j == k { f.one() } else { CycElem::ZERO };
                assert!(f.eq_mod(&s, &expect, 60));
            }
        }
    }
}
