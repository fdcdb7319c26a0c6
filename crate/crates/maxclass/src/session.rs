//! Per-run context: field, lattice model, quotient level of the unit group.

use crate::action::ActorElement;
use crate::cyclotomic::Field;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeModel};
use crate::units::U2Coords;

/// Parameters of a skeleton computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SessionConfig {
    pub p: u64,
    pub n: u32,
    pub max_depth: u32,
    pub model: LatticeModel,
    /// Generator of `(Z/p)^*` fixing σ and ω; `None` selects the smallest.
    pub generator: Option<u64>,
}

impl SessionConfig {
    pub fn new(p: u64, n: u32, max_depth: u32) -> SessionConfig {
        SessionConfig { p, n, max_depth, model: LatticeModel::default(), generator: None }
    }

    pub fn with_model(mut self, model: LatticeModel) -> SessionConfig {
        self.model = model;
        self
    }

    pub fn with_generator(mut self, g: u64) -> SessionConfig {
        self.generator = Some(g);
        self
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    pub config: SessionConfig,
    pub field: Field,
    pub lattice: Lattice,
    pub units: U2Coords,
}

fn field_for(p: u64, precision: u32, generator: Option<u64>) -> Result<Field> {
    match generator {
        Some(g) => Field::with_generator(p, precision, g),
        None => Field::new(p, precision),
    }
}

impl Session {
    pub fn new(config: SessionConfig) -> Result<Session> {
        let SessionConfig { p, n, max_depth, model, generator } = config;
        let probe = field_for(p, 8, generator)?;
        let c = probe.c();
        let d = probe.d() as u32;
        if n < c.max(8) || n < p as u32 {
            return Err(Error::InvalidParameters(format!("n = {n} must be at least max(c, 8, p)")));
        }
        if max_depth > n - c {
            return Err(Error::InvalidParameters(format!(
                "max depth {max_depth} exceeds the skeleton depth n - c = {}",
                n - c
            )));
        }
        let probe = field_for(p, d * 4, generator)?;
        let smax = Lattice::new(&probe, model)?.max_shift();
        let precision = (2 * n - c).max(n + max_depth) + d + 4 + smax + 2;
        let field = field_for(p, precision, generator)?;
        let lattice = Lattice::new(&field, model)?;
        let level = quotient_level(&field, &lattice, max_depth)?;
        let units = U2Coords::new(&field, level)?;
        Ok(Session { config, field, lattice, units })
    }

    pub fn p(&self) -> u64 {
        self.config.p
    }

    pub fn n(&self) -> u32 {
        self.config.n
    }

    pub fn max_depth(&self) -> u32 {
        self.config.max_depth
    }

    pub fn d(&self) -> u32 {
        self.field.d() as u32
    }

    pub fn ell(&self) -> usize {
        self.field.ell()
    }

    /// Depth `n - c` of the full skeleton.
    pub fn skeleton_depth(&self) -> u32 {
        self.config.n - self.field.c()
    }
}

/// Smallest `J ≥ 2` such that `U_J = 1 + 𝔭^J` acts trivially on
/// `Γ_m / Γ_{m+depth}` for every `m`.
///
/// The action of `(u, 1)` in adapted coordinates is `τ ↦ τ A(u)`, so this
/// holds exactly when `A(u) - I` has entries in `𝔭^{depth}`; it is tested on
/// `1 + π^m` for all `m` that could still violate it.
pub fn quotient_level(f: &Field, lattice: &Lattice, depth: u32) -> Result<u32> {
    let d = f.d() as u32;
    let span = depth + lattice.max_shift() + d;
    let mut level = 2;
    loop {
        if level + span + 2 > f.precision() {
            return Err(Error::PrecisionExhausted { needed: level + span + 2, available: f.precision() });
        }
        let trivial = (level..level + span).all(|m| {
            let u = f.add(&f.one(), &f.pi_pow(m));
            acts_trivially(f, lattice, &u, depth)
        });
        if trivial {
            return Ok(level);
        }
        level += 1;
    }
}

fn acts_trivially(f: &Field, lattice: &Lattice, u: &crate::CycElem, depth: u32) -> bool {
    let Ok(m) = crate::action::action_matrix(f, lattice, &ActorElement::from_unit(*u)) else {
        return false;
    };
    let ell = lattice.ell();
    (0..ell).all(|j| {
        (0..ell).all(|k| {
            let e = if j == k { f.sub(&m.entries[j][k], &f.one()) } else { m.entries[j][k] };
            f.in_ideal(&e, depth)
        })
    })
}
