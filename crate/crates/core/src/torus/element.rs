use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_rational::BigRational;
use rand::Rng;

use super::TorusError;
use crate::algebra::BasisAlgebra;
use crate::scalars::{FieldElement, HbarLaurent, DEFAULT_LEVEL};

/// A Fourier mode `(m_x^1,…,m_x^d, m_ξ^1,…,m_ξ^d)`.
pub type Mode = Vec<i64>;

/// `⟨m,n⟩ = Σ_i m_ξ^i n_x^i − m_x^i n_ξ^i`.
pub fn symplectic_pairing(m: &[i64], n: &[i64]) -> i64 {
    let d = m.len() / 2;
    (0..d).map(|i| m[d + i] * n[i] - m[i] * n[d + i]).sum()
}

/// The plane-wave constant `c = −2π²i`, so that `e_m⋆e_n = exp(cħ⟨m,n⟩)e_{m+n}`.
pub fn plane_wave_constant() -> FieldElement {
    FieldElement::pi_pow(2) * FieldElement::i() * FieldElement::from_int(-2)
}

/// `exp(c·k·ħ)` modulo `ħ^{trunc+1}`, cached.
pub fn phase(k: i64, trunc: i32) -> HbarLaurent {
    if k == 0 {
        return HbarLaurent::one(trunc);
    }
    static CACHE: OnceLock<Mutex<HashMap<(i64, i32), HbarLaurent>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("phase cache").get(&(k, trunc)) {
        return v.clone();
    }
    let v = HbarLaurent::exp_series(&(plane_wave_constant() * FieldElement::from_int(k)), trunc);
    cache.lock().expect("phase cache").insert((k, trunc), v.clone());
    v
}

/// A trigonometric polynomial `Σ a_m e_m` with `e_m = exp(2πi m·(x,ξ))` and
/// `ħ`-series coefficients known modulo `ħ^{trunc+1}`.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusElement {
    dim: usize,
    level: u32,
    trunc: i32,
    modes: BTreeMap<Mode, HbarLaurent>,
}

impl TorusElement {
    pub fn zero(dim: usize, trunc: i32) -> Self {
        Self::zero_at(dim, DEFAULT_LEVEL, trunc)
    }

    pub fn zero_at(dim: usize, level: u32, trunc: i32) -> Self {
        TorusElement { dim, level, trunc, modes: BTreeMap::new() }
    }

    pub fn one(dim: usize, trunc: i32) -> Self {
        Self::plane_wave(vec![0; 2 * dim], trunc)
    }

    /// `e_m`.
    pub fn plane_wave(m: Mode, trunc: i32) -> Self {
        let dim = m.len() / 2;
        let mut out = Self::zero(dim, trunc);
        out.add_mode(m, &HbarLaurent::one(trunc));
        out
    }

    pub fn from_modes(dim: usize, trunc: i32, modes: impl IntoIterator<Item = (Mode, HbarLaurent)>) -> Self {
        let mut out = Self::zero(dim, trunc);
        for (m, c) in modes {
            out.add_mode(m, &c);
        }
        out
    }

    pub fn with_level(mut self, level: u32) -> Self {
        self.level = level;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Mode, &HbarLaurent)> {
        self.modes.iter()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn coeff(&self, m: &[i64]) -> HbarLaurent {
        self.modes.get(m).cloned().unwrap_or_else(|| HbarLaurent::zero(self.trunc))
    }

    pub fn add_mode(&mut self, m: Mode, c: &HbarLaurent) {
        debug_assert_eq!(m.len(), 2 * self.dim);
        let c = c.with_trunc(self.trunc);
        if c.is_zero() {
            return;
        }
        let remove = match self.modes.get_mut(&m) {
            Some(x) => {
                *x += &c;
                x.is_zero()
            }
            None => {
                self.modes.insert(m, c);
                return;
            }
        };
        if remove {
            self.modes.remove(&m);
        }
    }

    fn check(&self, other: &Self) -> Result<(), TorusError> {
        if self.dim != other.dim {
            return Err(TorusError::DimensionMismatch(self.dim, other.dim));
        }
        if self.level != other.level {
            return Err(TorusError::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero_at(self.dim, self.level, self.trunc.min(other.trunc));
        for (m, c) in self.modes.iter().chain(&other.modes) {
            out.add_mode(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TorusElement { modes: self.modes.iter().map(|(m, c)| (m.clone(), -c)).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = Self::zero_at(self.dim, self.level, self.trunc);
        for (m, v) in &self.modes {
            out.add_mode(m.clone(), &v.scale(c));
        }
        out
    }

    pub fn scale_hbar(&self, c: &HbarLaurent) -> Self {
        let mut out = Self::zero_at(self.dim, self.level, self.trunc.min(c.trunc()));
        for (m, v) in &self.modes {
            out.add_mode(m.clone(), &v.mul(c));
        }
        out
    }

    /// The Moyal product on plane waves.
    pub fn star(&self, other: &Self) -> Result<Self, TorusError> {
        self.check(other)?;
        let t = self.trunc.min(other.trunc);
        let mut out = Self::zero_at(self.dim, self.level, t);
        for (m, a) in &self.modes {
            for (n, b) in &other.modes {
                let k = symplectic_pairing(m, n);
                let mn: Mode = m.iter().zip(n).map(|(x, y)| x + y).collect();
                let c = a.mul(b);
                let c = if k == 0 { c } else { c.mul(&phase(k, t)) };
                out.add_mode(mn, &c);
            }
        }
        Ok(out)
    }

    /// Commutative product of functions (Fourier convolution).
    pub fn pointwise_mul(&self, other: &Self) -> Self {
        let mut out = Self::zero_at(self.dim, self.level, self.trunc.min(other.trunc));
        for (m, a) in &self.modes {
            for (n, b) in &other.modes {
                out.add_mode(m.iter().zip(n).map(|(x, y)| x + y).collect(), &a.mul(b));
            }
        }
        out
    }

    /// `ħ^0` part.
    pub fn symbol(&self) -> Self {
        let mut out = Self::zero_at(self.dim, self.level, 0);
        for (m, c) in &self.modes {
            out.add_mode(m.clone(), &c.truncate(0));
        }
        out
    }

    /// `∂/∂(slot)`: `e_m ↦ 2πi m_slot e_m`.
    pub fn derivative(&self, slot: usize) -> Self {
        let f = FieldElement::pi_pow(1) * FieldElement::i() * FieldElement::from_int(2);
        let mut out = Self::zero_at(self.dim, self.level, self.trunc);
        for (m, c) in &self.modes {
            if m[slot] != 0 {
                out.add_mode(m.clone(), &c.scale(&(&f * &FieldElement::from_int(m[slot]))));
            }
        }
        out
    }

    /// Zero Fourier mode, i.e. the integral over the unit torus.
    pub fn mean(&self) -> HbarLaurent {
        self.coeff(&vec![0; 2 * self.dim])
    }

    /// `Tr(a) = (iħ)^{-d}·∫a`.
    pub fn trace(&self) -> HbarLaurent {
        trace(self)
    }

    pub fn truncate(&self, n: i32) -> Self {
        let t = n.min(self.trunc);
        let mut out = Self::zero_at(self.dim, self.level, t);
        for (m, c) in &self.modes {
            out.add_mode(m.clone(), &c.truncate(t));
        }
        out
    }

    /// Random element with modes in `[-max_mode, max_mode]^{2d}` and small
    /// rational `ħ`-polynomial coefficients.
    pub fn random<R: Rng>(rng: &mut R, dim: usize, max_mode: i64, nterms: usize, trunc: i32) -> Self {
        let mut out = Self::zero(dim, trunc);
        for _ in 0..nterms {
            let m: Mode = (0..2 * dim).map(|_| rng.gen_range(-max_mode..=max_mode)).collect();
            let mut c = HbarLaurent::zero(trunc);
            for k in 0..=rng.gen_range(0..=trunc.clamp(0, 2)) {
                let q = FieldElement::from_frac(rng.gen_range(-4..=4), rng.gen_range(1..=3));
                let q = if rng.gen_bool(0.3) { q * FieldElement::i() } else { q };
                c.add_at(k, &q);
            }
            out.add_mode(m, &c);
        }
        out
    }

    /// Sorted `mode: coefficient` lines.
    pub fn serialize(&self) -> String {
        if self.modes.is_empty() {
            return "0".into();
        }
        self.modes.iter().map(|(m, c)| format!("e{:?}: {}", m, c.serialize())).collect::<Vec<_>>().join("\n")
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize().replace('\n', " + "))
    }
}

pub fn star(a: &TorusElement, b: &TorusElement) -> Result<TorusElement, TorusError> {
    a.star(b)
}

pub fn trace(a: &TorusElement) -> HbarLaurent {
    let d = a.dim as i32;
    let inv_i = FieldElement::i().pow(3 * a.dim as u32);
    a.mean().shift(-d).scale(&inv_i)
}

/// `Tr` of a single basis mode at truncation `trunc`.
pub fn trace_of_mode(m: &[i64], trunc: i32) -> HbarLaurent {
    if m.iter().all(|&x| x == 0) {
        let d = m.len() / 2;
        HbarLaurent::one(trunc).shift(-(d as i32)).scale(&FieldElement::i().pow(3 * d as u32))
    } else {
        HbarLaurent::zero(trunc - m.len() as i32 / 2)
    }
}

/// The quantum torus as a basis algebra on plane waves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAlgebra {
    pub dim: usize,
    pub trunc: i32,
}

impl BasisAlgebra for TorusAlgebra {
    type Basis = Mode;

    fn unit(&self) -> Mode {
        vec![0; 2 * self.dim]
    }

    fn mul_basis(&self, a: &Mode, b: &Mode) -> Vec<(HbarLaurent, Mode)> {
        let k = symplectic_pairing(a, b);
        vec![(phase(k, self.trunc), a.iter().zip(b).map(|(x, y)| x + y).collect())]
    }

    fn hbar_trunc(&self) -> i32 {
        self.trunc
    }
}

/// Rational point `p` to the root of unity `e_m(p) = exp(2πi m·p)` at level `level`.
pub fn plane_wave_at(m: &[i64], p: &[BigRational], level: u32) -> Result<FieldElement, TorusError> {
    let mut s = BigRational::from_integer(0.into());
    for (a, b) in m.iter().zip(p) {
        s += b * BigRational::from_integer((*a).into());
    }
    let scaled = s * BigRational::from_integer(level.into());
    if !scaled.is_integer() {
        return Err(TorusError::BadDenominator { level });
    }
    let k: i64 = scaled.to_integer().try_into().map_err(|_| TorusError::BadDenominator { level })?;
    FieldElement::zeta(level, k).map_err(TorusError::Scalar)
}
