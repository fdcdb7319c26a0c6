//! Arithmetic in the ring of integers `O = Z_p[θ]` of `Q_p(θ)`, θ a primitive
//! p-th root of unity.
//!
//! Elements are stored in the basis `1, π, …, π^{d-1}` with `π = θ - 1` and
//! coefficients modulo `p^N`. In this basis the ideal `𝔭^m` is a box: the
//! coefficient of `π^i` must be divisible by `p^⌈(m-i)/d⌉`. Valuations,
//! reductions and π-adic digits are then read off coefficient by coefficient.

use std::fmt;

use crate::error::{Error, Result};
use crate::modular::{inv_mod, mul_mod, pow_mod, primitive_root, smallest_primitive_root, vp};

pub const MAX_DEGREE: usize = 16;

/// Largest modulus used for coefficients; keeps products inside `u128`.
const MODULUS_BOUND: u64 = 1 << 60;

/// An element of `O` known modulo `𝔭^M`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycElem {
    c: [u64; MAX_DEGREE],
}

impl CycElem {
    pub const ZERO: CycElem = CycElem { c: [0; MAX_DEGREE] };

    pub fn coeff(&self, i: usize) -> u64 {
        self.c[i]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&a| a == 0)
    }
}

impl Default for CycElem {
    fn default() -> Self {
        CycElem::ZERO
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, a)| format!("{a}·π^{i}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Valuation of an element at finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u32),
    /// The element lies in `𝔭^M` and cannot be told apart from zero.
    AtLeast(u32),
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// True when the element is known to lie in `𝔭^m`.
    pub fn is_at_least(self, m: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= m,
            Valuation::AtLeast(b) => b >= m,
        }
    }
}

type GaloisMatrix = [[u64; MAX_DEGREE]; MAX_DEGREE];

/// Session-wide field data: prime, precision, reduction rule, Galois matrices
/// and the Teichmüller lift.
#[derive(Clone)]
pub struct Field {
    p: u64,
    d: usize,
    digits: u32,
    modulus: u64,
    pow_p: Vec<u64>,
    precision: u32,
    /// `π^d = Σ red[j] π^j`.
    red: [u64; MAX_DEGREE],
    /// `gal[i]` row k holds the coefficients of `σ_i(π^k)`.
    gal: Vec<GaloisMatrix>,
    generator: u64,
    omega: u64,
    p_over_pi: CycElem,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("precision", &self.precision)
            .field("digits", &self.digits)
            .field("generator", &self.generator)
            .finish()
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|q| q * q <= p).all(|q| p % q != 0)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl Field {
    /// Field for prime `p` with working 𝔭-adic precision `precision`, using
    /// the smallest primitive root mod p as generator of the Galois group.
    pub fn new(p: u64, precision: u32) -> Result<Field> {
        if !is_prime(p) || p < 7 || (p - 1) as usize > MAX_DEGREE {
            return Err(Error::InvalidParameters(format!(
                "p must be a prime with 7 <= p <= {}, got {p}",
                MAX_DEGREE + 1
            )));
        }
        Field::with_generator(p, precision, smallest_primitive_root(p))
    }

    /// As [`Field::new`] but with an explicit primitive root `g`, which fixes
    /// both σ = σ_g and the Teichmüller lift ω ≡ g mod p.
    pub fn with_generator(p: u64, precision: u32, g: u64) -> Result<Field> {
        if !is_prime(p) || p < 7 || (p - 1) as usize > MAX_DEGREE {
            return Err(Error::InvalidParameters(format!("unsupported prime {p}")));
        }
        if !primitive_root(g, p) {
            return Err(Error::InvalidParameters(format!("{g} is not a primitive root mod {p}")));
        }
        let d = (p - 1) as usize;
        let mut digits = 0u32;
        let mut modulus = 1u64;
        while modulus < MODULUS_BOUND / p {
            modulus *= p;
            digits += 1;
        }
        let available = d as u32 * digits;
        if precision + 2 * d as u32 > available {
            return Err(Error::PrecisionExhausted { needed: precision + 2 * d as u32, available });
        }
        let pow_p: Vec<u64> = (0..=digits).map(|k| p.pow(k)).collect();
        let mut red = [0u64; MAX_DEGREE];
        for (j, r) in red.iter_mut().enumerate().take(d) {
            *r = (modulus - binomial(p, j as u64 + 1) % modulus) % modulus;
        }
        let mut field = Field {
            p,
            d,
            digits,
            modulus,
            pow_p,
            precision,
            red,
            gal: Vec::new(),
            generator: g,
            omega: 0,
            p_over_pi: CycElem::ZERO,
        };
        field.gal = (0..p).map(|i| field.galois_matrix(i)).collect();
        field.omega = field.compute_teichmuller(g);
        let mut q = CycElem::ZERO;
        for i in 0..d {
            q.c[i] = (modulus - binomial(p, i as u64 + 2) % modulus) % modulus;
        }
        field.p_over_pi = q;
        Ok(field)
    }

    fn galois_matrix(&self, i: u64) -> GaloisMatrix {
        let mut m = [[0u64; MAX_DEGREE]; MAX_DEGREE];
        if i == 0 {
            return m;
        }
        // σ_i(π) = (1+π)^i - 1
        let mut s = CycElem::ZERO;
        for k in 1..=i {
            s = self.add(&s, &self.mul(&self.from_u64(binomial(i, k)), &self.pi_pow(k as u32)));
        }
        let mut power = self.one();
        for row in m.iter_mut().take(self.d) {
            row[..self.d].copy_from_slice(&power.c[..self.d]);
            power = self.mul(&power, &s);
        }
        m
    }

    fn compute_teichmuller(&self, g: u64) -> u64 {
        let mut u = g % self.modulus;
        for _ in 0..=self.digits {
            u = pow_mod(u, self.p, self.modulus);
        }
        u
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ell(&self) -> usize {
        (self.p as usize - 3) / 2
    }

    /// `c = 2p - 8`, so that a skeleton `S_p(n)` has depth `n - c`.
    pub fn c(&self) -> u32 {
        2 * self.p as u32 - 8
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Exponent `N` of the coefficient modulus `p^N`.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pow_p(&self, k: u32) -> u64 {
        self.pow_p[k as usize]
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn zero(&self) -> CycElem {
        CycElem::ZERO
    }

    pub fn one(&self) -> CycElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, a: u64) -> CycElem {
        let mut x = CycElem::ZERO;
        x.c[0] = a % self.modulus;
        x
    }

    pub fn from_int(&self, a: i64) -> CycElem {
        self.from_u64(self.int_mod(a))
    }

    /// Reduce a signed integer modulo `p^N`.
    pub fn int_mod(&self, a: i64) -> u64 {
        a.rem_euclid(self.modulus as i64) as u64
    }

    pub fn pi(&self) -> CycElem {
        let mut x = CycElem::ZERO;
        x.c[1] = 1;
        x
    }

    pub fn pi_pow(&self, k: u32) -> CycElem {
        if (k as usize) < self.d {
            let mut x = CycElem::ZERO;
            x.c[k as usize] = 1;
            x
        } else {
            self.pow(&self.pi(), k as u64)
        }
    }

    pub fn theta(&self) -> CycElem {
        let mut x = self.one();
        x.c[1] = 1;
        x
    }

    pub fn theta_pow(&self, i: i64) -> CycElem {
        self.pow(&self.theta(), i.rem_euclid(self.p as i64) as u64)
    }

    /// The element `p^q π^r` with `L = q d + r`; its class spans `𝔭^L / 𝔭^{L+1}`
    /// and [`Field::digit`] at level `L` reads off its coefficient.
    pub fn digit_elem(&self, level: u32) -> CycElem {
        let q = level / self.d as u32;
        let r = level as usize % self.d;
        let mut x = CycElem::ZERO;
        if q < self.digits {
            x.c[r] = self.pow_p[q as usize];
        }
        x
    }

    /// Build an element from coefficients in the θ-power basis `1, θ, …, θ^{d-1}`.
    pub fn from_theta_coeffs(&self, coeffs: &[i64]) -> CycElem {
        let theta = self.theta();
        let mut power = self.one();
        let mut x = CycElem::ZERO;
        for &a in coeffs {
            x = self.add(&x, &self.scale(&power, self.int_mod(a)));
            power = self.mul(&power, &theta);
        }
        x
    }

    /// Coefficients in the θ-power basis.
    pub fn theta_coeffs(&self, x: &CycElem) -> Vec<u64> {
        // π^i = Σ_k C(i,k) (-1)^{i-k} θ^k
        let mut out = vec![0u64; self.d];
        for i in 0..self.d {
            if x.c[i] == 0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate().take(i + 1) {
                let b = binomial(i as u64, k as u64) % self.modulus;
                let b = if (i - k) % 2 == 1 { (self.modulus - b) % self.modulus } else { b };
                *o = (*o + mul_mod(x.c[i], b, self.modulus)) % self.modulus;
            }
        }
        out
    }

    pub fn add(&self, x: &CycElem, y: &CycElem) -> CycElem {
        let mut z = CycElem::ZERO;
        for i in 0..self.d {
            let s = x.c[i] + y.c[i];
            z.c[i] = if s >= self.modulus { s - self.modulus } else { s };
        }
        z
    }

    pub fn sub(&self, x: &CycElem, y: &CycElem) -> CycElem {
        let mut z = CycElem::ZERO;
        for i in 0..self.d {
            z.c[i] = if x.c[i] >= y.c[i] { x.c[i] - y.c[i] } else { x.c[i] + self.modulus - y.c[i] };
        }
        z
    }

    pub fn neg(&self, x: &CycElem) -> CycElem {
        self.sub(&CycElem::ZERO, x)
    }

    /// Multiply by an integer already reduced mod `p^N`.
    pub fn scale(&self, x: &CycElem, a: u64) -> CycElem {
        let mut z = CycElem::ZERO;
        for i in 0..self.d {
            z.c[i] = mul_mod(x.c[i], a, self.modulus);
        }
        z
    }

    pub fn mul(&self, x: &CycElem, y: &CycElem) -> CycElem {
        let d = self.d;
        let m = self.modulus as u128;
        let mut acc = [0u128; 2 * MAX_DEGREE];
        for i in 0..d {
            let a = x.c[i] as u128;
            if a == 0 {
                continue;
            }
            for j in 0..d {
                acc[i + j] += a * y.c[j] as u128;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let t = acc[k] % m;
            if t == 0 {
                continue;
            }
            for j in 0..d {
                acc[k - d + j] += t * self.red[j] as u128;
            }
        }
        let mut z = CycElem::ZERO;
        for i in 0..d {
            z.c[i] = (acc[i] % m) as u64;
        }
        z
    }

    pub fn pow(&self, x: &CycElem, mut e: u64) -> CycElem {
        let mut base = *x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Image in the residue field `O/𝔭 = F_p`.
    pub fn residue(&self, x: &CycElem) -> u64 {
        x.c[0] % self.p
    }

    pub fn is_unit(&self, x: &CycElem) -> bool {
        self.residue(x) != 0
    }

    pub fn inv(&self, x: &CycElem) -> Result<CycElem> {
        let r = self.residue(x);
        if r == 0 {
            return Err(Error::NotAUnit);
        }
        let two = self.from_u64(2);
        let mut y = self.from_u64(inv_mod(x.c[0], self.modulus));
        for _ in 0..64 {
            let next = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
            if next == y {
                return Ok(y);
            }
            y = next;
        }
        Err(Error::InternalInconsistency("Newton inversion did not converge".into()))
    }

    pub fn valuation(&self, x: &CycElem) -> Valuation {
        let mut v = u32::MAX;
        for i in 0..self.d {
            if x.c[i] != 0 {
                let w = self.d as u32 * vp(x.c[i], self.p) + i as u32;
                v = v.min(w);
            }
        }
        if v >= self.precision {
            Valuation::AtLeast(self.precision)
        } else {
            Valuation::Finite(v)
        }
    }

    /// Exact valuation as stored, ignoring the working precision; `None` for zero.
    pub fn raw_valuation(&self, x: &CycElem) -> Option<u32> {
        (0..self.d)
            .filter(|&i| x.c[i] != 0)
            .map(|i| self.d as u32 * vp(x.c[i], self.p) + i as u32)
            .min()
    }

    fn box_exponent(&self, m: u32, i: usize) -> u32 {
        let m = m as i64 - i as i64;
        if m <= 0 {
            0
        } else {
            (m as u32).div_ceil(self.d as u32)
        }
    }

    /// Whether `x ∈ 𝔭^m`.
    pub fn in_ideal(&self, x: &CycElem, m: u32) -> bool {
        (0..self.d).all(|i| {
            let q = self.box_exponent(m, i);
            q >= self.digits || x.c[i] % self.pow_p[q as usize] == 0
        })
    }

    /// Canonical representative of `x + 𝔭^m`.
    pub fn reduce(&self, x: &CycElem, m: u32) -> CycElem {
        let mut z = *x;
        for i in 0..self.d {
            let q = self.box_exponent(m, i);
            if q < self.digits {
                z.c[i] %= self.pow_p[q as usize];
            }
        }
        z
    }

    pub fn eq_mod(&self, x: &CycElem, y: &CycElem, m: u32) -> bool {
        self.in_ideal(&self.sub(x, y), m)
    }

    /// The π-adic digit of `x` at level `L`, i.e. the coefficient of
    /// [`Field::digit_elem`]`(L)`, assuming `x ∈ 𝔭^L`.
    pub fn digit(&self, x: &CycElem, level: u32) -> u64 {
        let q = level / self.d as u32;
        let r = level as usize % self.d;
        if q >= self.digits {
            return 0;
        }
        (x.c[r] / self.pow_p[q as usize]) % self.p
    }

    /// `σ_i(x)` for `i` coprime to p, `i` taken mod p.
    pub fn sigma_i(&self, i: u64, x: &CycElem) -> CycElem {
        let i = (i % self.p) as usize;
        debug_assert!(i != 0);
        let mat = &self.gal[i];
        let m = self.modulus as u128;
        let mut acc = [0u128; MAX_DEGREE];
        for (k, row) in mat.iter().enumerate().take(self.d) {
            let a = x.c[k] as u128;
            if a == 0 {
                continue;
            }
            for r in 0..self.d {
                acc[r] += a * row[r] as u128;
            }
        }
        let mut z = CycElem::ZERO;
        for r in 0..self.d {
            z.c[r] = (acc[r] % m) as u64;
        }
        z
    }

    /// `σ_i` with validation of the index.
    pub fn galois_apply(&self, i: i64, x: &CycElem) -> Result<CycElem> {
        let r = i.rem_euclid(self.p as i64);
        if r == 0 {
            return Err(Error::InvalidIndex(i));
        }
        Ok(self.sigma_i(r as u64, x))
    }

    /// Index `g^r mod p` of the automorphism `σ^r = σ_{g^r}`.
    pub fn sigma_index(&self, r: i64) -> u64 {
        pow_mod(self.generator, r.rem_euclid(self.d as i64) as u64, self.p)
    }

    /// `σ^r(x)` for the fixed generator σ = σ_g.
    pub fn sigma_pow(&self, r: i64, x: &CycElem) -> CycElem {
        self.sigma_i(self.sigma_index(r), x)
    }

    /// The Teichmüller lift ω of the generator, as an integer mod `p^N`.
    pub fn omega(&self) -> u64 {
        self.omega
    }

    pub fn teichmuller(&self) -> CycElem {
        self.from_u64(self.omega)
    }

    /// `ω^a` as an integer mod `p^N`, for any integer `a`.
    pub fn omega_pow(&self, a: i64) -> u64 {
        pow_mod(self.omega, a.rem_euclid(self.d as i64) as u64, self.modulus)
    }

    /// Exact division by π; fails unless `x ∈ 𝔭`. One p-digit of the top
    /// coefficient becomes unknown.
    pub fn div_pi(&self, x: &CycElem) -> Result<CycElem> {
        if x.c[0] % self.p != 0 {
            return Err(Error::DomainError("division by π"));
        }
        let t = x.c[0] / self.p;
        let mut z = self.scale(&self.p_over_pi, t);
        for i in 1..self.d {
            let s = z.c[i - 1] + x.c[i];
            z.c[i - 1] = if s >= self.modulus { s - self.modulus } else { s };
        }
        Ok(z)
    }

    pub fn div_pi_pow(&self, x: &CycElem, k: u32) -> Result<CycElem> {
        let mut z = *x;
        for _ in 0..k {
            z = self.div_pi(&z)?;
        }
        Ok(z)
    }

    /// Exact division by p; fails unless `x ∈ pO`.
    pub fn div_p(&self, x: &CycElem) -> Result<CycElem> {
        let mut z = CycElem::ZERO;
        for i in 0..self.d {
            if x.c[i] % self.p != 0 {
                return Err(Error::DomainError("division by p"));
            }
            z.c[i] = x.c[i] / self.p;
        }
        Ok(z)
    }

    fn check_digits(&self, lost: u32) -> Result<()> {
        let available = self.d as u32 * (self.digits - lost.min(self.digits));
        if available < self.precision {
            return Err(Error::PrecisionExhausted { needed: self.precision, available });
        }
        Ok(())
    }

    /// Divide by the integer `k = p^v · k'`, assuming `x ∈ p^v O`.
    fn div_int(&self, x: &CycElem, k: u64) -> Result<CycElem> {
        let v = vp(k, self.p);
        let unit = k / self.pow_p[v as usize];
        let mut z = self.scale(x, inv_mod(unit % self.modulus, self.modulus));
        for _ in 0..v {
            z = self.div_p(&z)?;
        }
        Ok(z)
    }

    fn series_length(&self) -> u64 {
        let mut log_m = 0;
        let mut t = 1u64;
        while t <= self.precision as u64 {
            t *= self.p;
            log_m += 1;
        }
        self.precision as u64 + self.d as u64 * log_m + 1
    }

    /// The p-adic logarithm on `U_2 = 1 + 𝔭²`.
    pub fn log(&self, u: &CycElem) -> Result<CycElem> {
        let z = self.sub(u, &self.one());
        if !self.in_ideal(&z, 2) {
            return Err(Error::DomainError("log"));
        }
        let kmax = self.series_length();
        self.check_digits(vp_floor_log(kmax, self.p))?;
        let mut power = self.one();
        let mut acc = CycElem::ZERO;
        for k in 1..=kmax {
            power = self.mul(&power, &z);
            if self.in_ideal(&power, self.precision + self.d as u32 * vp_floor_log(kmax, self.p)) {
                break;
            }
            let term = self.div_int(&power, k)?;
            acc = if k % 2 == 1 { self.add(&acc, &term) } else { self.sub(&acc, &term) };
        }
        Ok(self.reduce(&acc, self.precision))
    }

    /// The p-adic exponential on `𝔭²`.
    pub fn exp(&self, xi: &CycElem) -> Result<CycElem> {
        if !self.in_ideal(xi, 2) {
            return Err(Error::DomainError("exp"));
        }
        let kmax = self.precision as u64;
        let lost: u32 = (1..=kmax).map(|k| vp(k, self.p)).sum();
        self.check_digits(lost)?;
        let mut power = self.one();
        let mut acc = self.one();
        let mut factorial_unit = 1u64;
        let mut factorial_v = 0u32;
        for k in 1..=kmax {
            power = self.mul(&power, xi);
            let v = vp(k, self.p);
            factorial_v += v;
            factorial_unit = mul_mod(factorial_unit, (k / self.pow_p[v as usize]) % self.modulus, self.modulus);
            let mut term = self.scale(&power, inv_mod(factorial_unit, self.modulus));
            for _ in 0..factorial_v {
                term = self.div_p(&term)?;
            }
            acc = self.add(&acc, &term);
        }
        Ok(self.reduce(&acc, self.precision))
    }

    /// Projection of `x` onto the `ω^i`-eigenspace of `φ = σ^s`; zero when `ω^i`
    /// is not an eigenvalue of φ.
    pub fn eigenproject(&self, x: &CycElem, s: i64, i: i64) -> CycElem {
        let d = self.d as i64;
        let s = s.rem_euclid(d);
        let m = d / gcd(s, d);
        if (i * m).rem_euclid(d) != 0 {
            return CycElem::ZERO;
        }
        let mut acc = CycElem::ZERO;
        let mut img = *x;
        for r in 0..m {
            acc = self.add(&acc, &self.scale(&img, self.omega_pow(-i * r)));
            img = self.sigma_pow(s, &img);
        }
        self.scale(&acc, inv_mod(m as u64 % self.modulus, self.modulus))
    }

    /// An element `a` with `σ(a) = ω^m a` and valuation exactly `m`.
    pub fn sigma_eigenvector(&self, m: u32) -> Result<CycElem> {
        let base = self.pi_pow(m);
        let mut candidate = base;
        for s in 0..self.p as i64 {
            if s > 0 {
                candidate = self.mul(&base, &self.theta_pow(s));
            }
            let a = self.eigenproject(&candidate, 1, m as i64);
            if self.raw_valuation(&a) == Some(m) {
                return Ok(a);
            }
        }
        Err(Error::EigenvectorNotFound(m))
    }
}

/// `⌊log_p k⌋`, the largest possible `v_p` of an integer up to `k`.
fn vp_floor_log(k: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut t = p;
    while t <= k {
        t *= p;
        v += 1;
    }
    v
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> Field {
        Field::new(7, 60).unwrap()
    }

    #[test]
    fn theta_has_order_p() {
        let f = field();
        assert_eq!(f.pow(&f.theta(), 7), f.one());
        let mut s = CycElem::ZERO;
        for i in 0..7 {
            s = f.add(&s, &f.theta_pow(i));
        }
        assert!(s.is_zero());
    }

    #[test]
    fn valuation_examples() {
        let f = field();
        assert_eq!(f.valuation(&f.pi()), Valuation::Finite(1));
        assert_eq!(f.valuation(&f.from_u64(7)), Valuation::Finite(6));
        let t2 = f.sub(&f.theta_pow(2), &f.one());
        assert_eq!(f.valuation(&t2), Valuation::Finite(1));
        assert_eq!(f.valuation(&CycElem::ZERO), Valuation::AtLeast(60));
    }

    #[test]
    fn teichmuller_small_modulus() {
        // 3^7 mod 49 is already the fixed point of Frobenius.
        assert_eq!(pow_mod(3, 7, 49), 31);
        assert_eq!(pow_mod(31, 7, 49), 31);
        let f = field();
        assert_eq!(f.omega() % 49, 31);
        assert_eq!(f.omega_pow(6), 1);
        assert_ne!(f.omega_pow(2), 1);
        assert_ne!(f.omega_pow(3), 1);
    }

    #[test]
    fn div_pi_inverts_mul_pi() {
        let f = field();
        let x = f.from_theta_coeffs(&[3, -1, 4, 1, -5, 9]);
        let y = f.div_pi(&f.mul(&x, &f.pi())).unwrap();
        assert!(f.eq_mod(&x, &y, f.precision()));
    }

    #[test]
    fn theta_basis_round_trip() {
        let f = field();
        let x = f.from_theta_coeffs(&[3, 1, 4, 1, 5, 9]);
        let back = f.theta_coeffs(&x);
        assert_eq!(back, vec![3, 1, 4, 1, 5, 9]);
    }

    #[test]
    fn eigenvector_valuations() {
        let f = field();
        for m in 0..=12 {
            let a = f.sigma_eigenvector(m).unwrap();
            assert_eq!(f.valuation(&a), Valuation::Finite(m));
            let lhs = f.sigma_pow(1, &a);
            let rhs = f.scale(&a, f.omega_pow(m as i64));
            assert_eq!(lhs, rhs);
        }
    }
}
