//! The unit group `U = ⟨ω⟩ × ⟨θ⟩ × U_2` of `Z_p[θ]`, the twists ρ_i, the map
//! χ, and exponent coordinates on the finite quotient `U_2 / U_J`.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycElem, Field, MAX_DEGREE};
use crate::error::{Error, Result};
use crate::linalg::hermite_form;
use crate::modular::{discrete_log, inv_mod, mul_mod, vp};

/// A unit `ω^a θ^b exp(ξ)` with `ξ ∈ 𝔭²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitCoord {
    pub a: u32,
    pub b: u32,
    pub xi: CycElem,
}

impl UnitCoord {
    pub fn materialize(&self, f: &Field) -> Result<CycElem> {
        let w = f.from_u64(f.omega_pow(self.a as i64));
        let t = f.theta_pow(self.b as i64);
        Ok(f.mul(&f.mul(&w, &t), &f.exp(&self.xi)?))
    }
}

/// Split a unit into its ω-, θ- and U_2-components.
pub fn split_unit(f: &Field, u: &CycElem) -> Result<UnitCoord> {
    let r = f.residue(u);
    if r == 0 {
        return Err(Error::NotAUnit);
    }
    let a = discrete_log(r, f.generator(), f.p()).expect("residue is a unit") as u32;
    let v = f.scale(u, f.omega_pow(-(a as i64)));
    let b = f.digit(&f.sub(&v, &f.one()), 1) as u32;
    let w = f.mul(&v, &f.theta_pow(-(b as i64)));
    Ok(UnitCoord { a, b, xi: f.log(&w)? })
}

/// `ρ_i(u) = u^{-1} σ_i(u) σ_{1-i}(u)`.
pub fn rho(f: &Field, i: u64, u: &CycElem) -> Result<CycElem> {
    let p = f.p();
    let j = (p + 1 - i % p) % p;
    let inv = f.inv(u)?;
    Ok(f.mul(&f.mul(&inv, &f.sigma_i(i, u)), &f.sigma_i(j, u)))
}

/// Data of a divisor `k` of `d`: `τ = σ^k` of order `h = d/k`, and optionally
/// `ν = σ^{k/a}` with `ν^a = τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauContext {
    pub k: u32,
    pub h: u32,
    pub a: u32,
}

impl TauContext {
    pub fn new(d: u32, h: u32) -> Result<TauContext> {
        if h == 0 || d % h != 0 {
            return Err(Error::InvalidParameters(format!("{h} does not divide {d}")));
        }
        Ok(TauContext { k: d / h, h, a: 1 })
    }

    pub fn with_root(d: u32, h: u32, a: u32) -> Result<TauContext> {
        let mut ctx = TauContext::new(d, h)?;
        if a == 0 || ctx.k % a != 0 {
            return Err(Error::InvalidParameters(format!("{a} does not divide k = {}", ctx.k)));
        }
        ctx.a = a;
        Ok(ctx)
    }

    /// Exponent of τ as a power of σ.
    pub fn tau_exp(&self) -> i64 {
        self.k as i64
    }

    /// Exponent of ν as a power of σ.
    pub fn nu_exp(&self) -> i64 {
        (self.k / self.a) as i64
    }
}

/// `χ(u) = u τ(u)^{-1}`.
pub fn chi(f: &Field, u: &CycElem, ctx: &TauContext) -> Result<CycElem> {
    Ok(f.mul(u, &f.inv(&f.sigma_pow(ctx.tau_exp(), u))?))
}

/// `χ'(u) = u ν(u)^{-1}`.
pub fn chi_prime(f: &Field, u: &CycElem, ctx: &TauContext) -> Result<CycElem> {
    Ok(f.mul(u, &f.inv(&f.sigma_pow(ctx.nu_exp(), u))?))
}

/// ω together with a Z_p-basis of `F = {a ∈ 𝔭² : τ(a) = a}`, in log form.
pub fn ker_chi_basis(f: &Field, ctx: &TauContext) -> Result<Vec<UnitCoord>> {
    let mut basis = vec![UnitCoord { a: 1, b: 0, xi: CycElem::ZERO }];
    for level in 2..=f.d() as u32 + 1 {
        if level % ctx.h != 0 {
            continue;
        }
        let a = f.eigenproject(&f.pi_pow(level), ctx.tau_exp(), 0);
        let a = if f.raw_valuation(&a) == Some(level) {
            a
        } else {
            let e = f.sigma_eigenvector(level)?;
            if f.sigma_pow(ctx.tau_exp(), &e) != e {
                return Err(Error::InternalInconsistency("eigenvector is not τ-fixed".into()));
            }
            e
        };
        basis.push(UnitCoord { a: 0, b: 0, xi: a });
    }
    if basis.len() != ctx.k as usize + 1 {
        return Err(Error::InternalInconsistency(format!(
            "kernel of χ has rank {} instead of {}",
            basis.len() - 1,
            ctx.k
        )));
    }
    Ok(basis)
}

/// Exponent vector with respect to `ε_i = 1 + π^{i+2}`, `i = 0..d`.
pub type Exps = [u64; MAX_DEGREE];

/// Exponent coordinates on `U_2 / U_J`.
///
/// `U_2` is a free Z_p-module on `ε_i = 1 + π^{i+2}`, and `ε_i^{p^q}` has
/// level exactly `i + 2 + qd`, so `U_J` is the box of exponent vectors with
/// `c_i ≡ 0 mod p^{q_i}`, `q_i = ⌈(J - i - 2)/d⌉`.
#[derive(Debug, Clone)]
pub struct U2Coords {
    p: u64,
    d: usize,
    level: u32,
    box_exp: Vec<u32>,
    work_exp: u32,
    work_mod: u64,
    /// `pow_table[i][j][δ] = ε_i^{δ p^j}`.
    pow_table: Vec<Vec<Vec<CycElem>>>,
    inv_table: Vec<Vec<Vec<CycElem>>>,
    /// Leading π-adic digit of `ε_i^{p^q} - 1` at its level.
    lead: Vec<u64>,
}

impl U2Coords {
    pub fn new(f: &Field, level: u32) -> Result<U2Coords> {
        let p = f.p();
        let d = f.d();
        if level < 2 || level + 2 > f.precision() {
            return Err(Error::PrecisionExhausted { needed: level + 2, available: f.precision() });
        }
        let box_exp: Vec<u32> = (0..d)
            .map(|i| {
                let m = i as i64 + 2;
                if level as i64 <= m {
                    0
                } else {
                    ((level as i64 - m) as u32).div_ceil(d as u32)
                }
            })
            .collect();
        let work_exp = box_exp.iter().copied().max().unwrap_or(0) + 1;
        let work_mod = p.pow(work_exp);
        let mut pow_table = Vec::with_capacity(d);
        let mut inv_table = Vec::with_capacity(d);
        for (i, &q) in box_exp.iter().enumerate() {
            let mut base = f.add(&f.one(), &f.pi_pow(i as u32 + 2));
            let mut rows = Vec::new();
            let mut inv_rows = Vec::new();
            for _ in 0..q {
                let inv_base = f.inv(&base)?;
                let mut row = vec![f.one()];
                let mut inv_row = vec![f.one()];
                for _ in 1..p {
                    row.push(f.mul(row.last().unwrap(), &base));
                    inv_row.push(f.mul(inv_row.last().unwrap(), &inv_base));
                }
                base = f.pow(&base, p);
                rows.push(row);
                inv_rows.push(inv_row);
            }
            pow_table.push(rows);
            inv_table.push(inv_rows);
        }
        let mut lead = vec![0; level as usize];
        for l in 2..level {
            let (i, q) = (((l - 2) as usize) % d, (l - 2) / d as u32);
            let g = pow_table[i][q as usize][1];
            let digit = f.digit(&f.sub(&g, &f.one()), l);
            if digit == 0 || !f.in_ideal(&f.sub(&g, &f.one()), l) {
                return Err(Error::InternalInconsistency(format!("generator at level {l} is degenerate")));
            }
            lead[l as usize] = digit;
        }
        Ok(U2Coords { p, d, level, box_exp, work_exp, work_mod, pow_table, inv_table, lead })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn box_exp(&self, i: usize) -> u32 {
        self.box_exp[i]
    }

    /// Exponent `k` of the working modulus `p^k` used for echelon forms.
    pub fn work_exp(&self) -> u32 {
        self.work_exp
    }

    pub fn work_mod(&self) -> u64 {
        self.work_mod
    }

    /// Reduce each coordinate modulo its box exponent.
    pub fn reduce(&self, c: &Exps) -> Exps {
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..self.d {
            out[i] = c[i] % self.p.pow(self.box_exp[i]);
        }
        out
    }

    pub fn add(&self, a: &Exps, b: &Exps) -> Exps {
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..self.d {
            out[i] = (a[i] + b[i]) % self.work_mod;
        }
        self.reduce(&out)
    }

    pub fn neg(&self, a: &Exps) -> Exps {
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..self.d {
            out[i] = (self.work_mod - a[i] % self.work_mod) % self.work_mod;
        }
        self.reduce(&out)
    }

    pub fn scale(&self, a: &Exps, s: u64) -> Exps {
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..self.d {
            out[i] = mul_mod(a[i], s % self.work_mod, self.work_mod);
        }
        self.reduce(&out)
    }

    /// The unit `Π ε_i^{c_i}` (a representative of its class mod `U_J`).
    pub fn to_unit(&self, f: &Field, c: &Exps) -> CycElem {
        let mut u = f.one();
        for i in 0..self.d {
            let mut e = c[i];
            for j in 0..self.box_exp[i] as usize {
                let delta = (e % self.p) as usize;
                e /= self.p;
                if delta != 0 {
                    u = f.mul(&u, &self.pow_table[i][j][delta]);
                }
            }
        }
        u
    }

    /// Exponent coordinates of `u ∈ U_2` modulo `U_J`.
    pub fn dlog(&self, f: &Field, u: &CycElem) -> Result<Exps> {
        let one = f.one();
        if !f.in_ideal(&f.sub(u, &one), 2) {
            return Err(Error::DomainError("exponent coordinates"));
        }
        let mut c = [0u64; MAX_DEGREE];
        let mut w = *u;
        for l in 2..self.level {
            let (i, q) = (((l - 2) as usize) % self.d, ((l - 2) / self.d as u32) as usize);
            let digit = f.digit(&f.sub(&w, &one), l);
            if digit == 0 {
                continue;
            }
            let delta = mul_mod(digit, inv_mod(self.lead[l as usize], self.p), self.p);
            c[i] += delta * self.p.pow(q as u32);
            w = f.mul(&w, &self.inv_table[i][q][delta as usize]);
        }
        debug_assert!(f.in_ideal(&f.sub(&w, &one), self.level));
        Ok(c)
    }

    /// Matrix of a field automorphism `σ_j` on exponent coordinates: row `i`
    /// holds the coordinates of `σ_j(ε_i)`.
    pub fn galois_matrix(&self, f: &Field, j: u64) -> Result<Vec<Exps>> {
        (0..self.d)
            .map(|i| {
                let e = f.add(&f.one(), &f.pi_pow(i as u32 + 2));
                self.dlog(f, &f.sigma_i(j, &e))
            })
            .collect()
    }

    /// `c ↦ c·M` for a matrix from [`U2Coords::galois_matrix`].
    pub fn apply_matrix(&self, m: &[Exps], c: &Exps) -> Exps {
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..self.d {
            if c[i] == 0 {
                continue;
            }
            for j in 0..self.d {
                out[j] = (out[j] + mul_mod(c[i], m[i][j], self.work_mod)) % self.work_mod;
            }
        }
        self.reduce(&out)
    }

    /// Rows `p^{q_i} e_i` spanning `U_J`.
    fn box_rows(&self) -> Vec<Vec<u64>> {
        (0..self.d)
            .map(|i| {
                let mut r = vec![0u64; self.d];
                r[i] = self.p.pow(self.box_exp[i]);
                r
            })
            .collect()
    }
}

/// A subgroup of `U_2` containing `U_J`, as an echelonized exponent lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct U2Lattice {
    rows: Vec<Exps>,
}

impl U2Lattice {
    pub fn full(coords: &U2Coords) -> U2Lattice {
        let gens: Vec<Exps> = (0..coords.d)
            .map(|i| {
                let mut e = [0u64; MAX_DEGREE];
                e[i] = 1;
                e
            })
            .collect();
        U2Lattice::from_generators(coords, &gens)
    }

    pub fn trivial(coords: &U2Coords) -> U2Lattice {
        U2Lattice::from_generators(coords, &[])
    }

    /// The subgroup generated by `gens` and `U_J`.
    pub fn from_generators(coords: &U2Coords, gens: &[Exps]) -> U2Lattice {
        let d = coords.d;
        let mut rows: Vec<Vec<u64>> = gens.iter().map(|g| g[..d].to_vec()).collect();
        rows.extend(coords.box_rows());
        let h = hermite_form(&rows, d, coords.p, coords.work_exp);
        let rows = h
            .into_iter()
            .map(|r| {
                let mut e = [0u64; MAX_DEGREE];
                e[..d].copy_from_slice(&r);
                e
            })
            .collect();
        U2Lattice { rows }
    }

    pub fn rows(&self) -> &[Exps] {
        &self.rows
    }

    /// `log_p` of the index `[U_2 : L]`.
    pub fn index_exp(&self, coords: &U2Coords) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| vp(r[i], coords.p))
            .sum()
    }

    /// `log_p |L / U_J|`.
    pub fn order_exp(&self, coords: &U2Coords) -> u32 {
        let total: u32 = coords.box_exp.iter().sum();
        total - self.index_exp(coords)
    }

    pub fn contains(&self, coords: &U2Coords, c: &Exps) -> bool {
        let m = coords.work_mod;
        let mut v: Vec<u64> = c[..coords.d].iter().map(|a| a % m).collect();
        for (i, row) in self.rows.iter().enumerate() {
            let piv = row[i];
            if v[i] % piv != 0 {
                return false;
            }
            let f = v[i] / piv;
            for j in 0..coords.d {
                v[j] = (v[j] + m - mul_mod(f, row[j], m)) % m;
            }
        }
        v.iter().all(|&a| a == 0)
    }

    /// `L^{[p]} = {u^p : u ∈ L} · U_J`.
    pub fn p_power(&self, coords: &U2Coords) -> U2Lattice {
        let gens: Vec<Exps> = self.rows.iter().map(|r| coords.scale(r, coords.p)).collect();
        U2Lattice::from_generators(coords, &gens)
    }

    /// Intersection with another lattice (both contain `U_J`).
    pub fn intersect(&self, coords: &U2Coords, other: &U2Lattice) -> U2Lattice {
        let d = coords.d;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for r in &self.rows {
            let mut v = r[..d].to_vec();
            v.extend_from_slice(&r[..d]);
            rows.push(v);
        }
        for r in &other.rows {
            let mut v = r[..d].to_vec();
            v.extend(std::iter::repeat_n(0, d));
            rows.push(v);
        }
        let h = hermite_form(&rows, 2 * d, coords.p, coords.work_exp);
        let gens: Vec<Exps> = h
            .into_iter()
            .filter(|r| r[..d].iter().all(|&a| a == 0))
            .map(|r| {
                let mut e = [0u64; MAX_DEGREE];
                e[..d].copy_from_slice(&r[d..]);
                e
            })
            .collect();
        U2Lattice::from_generators(coords, &gens)
    }

    pub fn is_subset_of(&self, coords: &U2Coords, other: &U2Lattice) -> bool {
        self.rows.iter().all(|r| other.contains(coords, r))
    }

    /// Canonical representative of `c` modulo this lattice.
    pub fn normal_form(&self, coords: &U2Coords, c: &Exps) -> Exps {
        let m = coords.work_mod;
        let mut v = [0u64; MAX_DEGREE];
        for i in 0..coords.d {
            v[i] = c[i] % m;
        }
        for (i, row) in self.rows.iter().enumerate() {
            let f = v[i] / row[i];
            if f != 0 {
                for j in 0..coords.d {
                    v[j] = (v[j] + m - mul_mod(f, row[j], m)) % m;
                }
            }
        }
        v
    }

    /// Representatives of `self / sub`, where `sub ⊆ self`.
    pub fn coset_reps(&self, coords: &U2Coords, sub: &U2Lattice) -> Vec<Exps> {
        let mut seen = std::collections::BTreeSet::new();
        let zero = [0u64; MAX_DEGREE];
        seen.insert(zero);
        let mut queue = vec![zero];
        while let Some(c) = queue.pop() {
            for row in &self.rows {
                let next = sub.normal_form(coords, &coords.add(&c, row));
                if seen.insert(next) {
                    queue.push(next);
                }
            }
        }
        seen.into_iter().collect()
    }
}
