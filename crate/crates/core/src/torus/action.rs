use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::element::{phase, symplectic_pairing, Mode, TorusAlgebra, TorusElement};
use super::TorusError;
use crate::algebra::{BasisAlgebra, Lin};
use crate::cyclic::{GroupAction, Matrix};
use crate::group::{GroupElt, GroupSpec};
use crate::scalars::{FieldElement, HbarLaurent};

/// `Γ` acting on the torus by rational translations `x ↦ x + t_γ`, each
/// generator optionally followed by conjugation `w ↦ e_k^{-1}⋆w⋆e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationAction {
    pub group: GroupSpec,
    pub level: u32,
    /// Shift vector per generator, entries in `(1/level)ℤ`.
    pub shifts: Vec<Vec<BigRational>>,
    /// Twisting plane wave `e_k` per generator; the zero mode means untwisted.
    pub twists: Vec<Mode>,
}

impl TranslationAction {
    pub fn new(group: GroupSpec, level: u32, shifts: Vec<Vec<BigRational>>) -> Result<Self, TorusError> {
        if shifts.len() != group.rank() {
            return Err(TorusError::GeneratorCount { expected: group.rank(), got: shifts.len() });
        }
        let lv = BigRational::from_integer(level.into());
        for s in &shifts {
            if s.iter().any(|t| !(t * &lv).is_integer()) {
                return Err(TorusError::BadDenominator { level });
            }
            if let GroupSpec::Cyclic { order } = group {
                let q = BigRational::from_integer(order.into());
                if s.iter().any(|t| !(t * &q).is_integer()) {
                    return Err(TorusError::NotOfFiniteOrder(order));
                }
            }
        }
        let dim2 = shifts.first().map_or(0, |s| s.len());
        let twists = vec![vec![0; dim2]; shifts.len()];
        Ok(TranslationAction { group, level, shifts, twists })
    }

    /// Integer shift coordinates `level·t`.
    pub fn shifts_int(group: GroupSpec, level: u32, shifts: &[Vec<i64>]) -> Result<Self, TorusError> {
        let lv = BigRational::from_integer(level.into());
        let s = shifts.iter().map(|v| v.iter().map(|&a| BigRational::from_integer(a.into()) / &lv).collect()).collect();
        Self::new(group, level, s)
    }

    pub fn with_twists(mut self, twists: Vec<Mode>) -> Result<Self, TorusError> {
        if twists.len() != self.group.rank() {
            return Err(TorusError::GeneratorCount { expected: self.group.rank(), got: twists.len() });
        }
        let nontrivial = twists.iter().any(|k| k.iter().any(|&x| x != 0));
        if nontrivial && !self.group.is_free() {
            return Err(TorusError::TwistNeedsFreeGroup);
        }
        self.twists = twists;
        Ok(self)
    }

    pub fn is_twisted(&self) -> bool {
        self.twists.iter().any(|k| k.iter().any(|&x| x != 0))
    }

    /// Total shift `t_γ = Σ_j γ_j t_j`.
    pub fn shift_of(&self, g: &GroupElt) -> Vec<BigRational> {
        let n = self.shifts.first().map_or(0, |s| s.len());
        let mut t = vec![BigRational::zero(); n];
        for (gj, s) in g.0.iter().zip(&self.shifts) {
            for (ti, si) in t.iter_mut().zip(s) {
                *ti += si * BigRational::from_integer((*gj).into());
            }
        }
        t
    }

    fn twist_of(&self, g: &GroupElt) -> Mode {
        let n = self.twists.first().map_or(0, |s| s.len());
        let mut k = vec![0; n];
        for (gj, t) in g.0.iter().zip(&self.twists) {
            for (ki, ti) in k.iter_mut().zip(t) {
                *ki += gj * ti;
            }
        }
        k
    }

    /// `γ(e_m) = ζ_L^{L m·t_γ}·exp(2cħ⟨m,K_γ⟩)·e_m`.
    pub fn mode_phase(&self, g: &GroupElt, m: &[i64], trunc: i32) -> HbarLaurent {
        let t = self.shift_of(g);
        let mut s = BigRational::zero();
        for (a, b) in m.iter().zip(&t) {
            s += b * BigRational::from_integer((*a).into());
        }
        let k = (s * BigRational::from_integer(self.level.into())).to_integer().to_i64().expect("phase exponent fits");
        let root = FieldElement::zeta(self.level, k).expect("level validated on construction");
        let tw = self.twist_of(g);
        let p = 2 * symplectic_pairing(m, &tw);
        phase(p, trunc).scale(&root)
    }

    pub fn act(&self, g: &GroupElt, a: &TorusElement) -> TorusElement {
        let mut out = TorusElement::zero_at(a.dim(), a.level(), a.trunc());
        for (m, c) in a.modes() {
            out.add_mode(m.clone(), &c.mul(&self.mode_phase(g, m, a.trunc())));
        }
        out
    }
}

pub fn act(g: &GroupElt, a: &TorusElement, action: &TranslationAction) -> TorusElement {
    action.act(g, a)
}

/// The torus together with a translation action, as input to the crossed
/// product machinery.
#[derive(Clone, Debug)]
pub struct EquivariantTorus {
    pub torus: TorusAlgebra,
    pub action: TranslationAction,
}

impl BasisAlgebra for EquivariantTorus {
    type Basis = Mode;

    fn unit(&self) -> Mode {
        self.torus.unit()
    }

    fn mul_basis(&self, a: &Mode, b: &Mode) -> Vec<(HbarLaurent, Mode)> {
        self.torus.mul_basis(a, b)
    }

    fn hbar_trunc(&self) -> i32 {
        self.torus.trunc
    }
}

impl GroupAction for EquivariantTorus {
    fn group(&self) -> &GroupSpec {
        &self.action.group
    }

    fn act_basis(&self, g: &GroupElt, b: &Mode) -> Vec<(HbarLaurent, Mode)> {
        vec![(self.action.mode_phase(g, b, self.torus.trunc), b.clone())]
    }
}

/// `Σ_γ A_γ·γ` with `A_γ` square matrices over the torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedElement {
    pub size: usize,
    pub terms: BTreeMap<GroupElt, Vec<Vec<TorusElement>>>,
}

impl CrossedElement {
    pub fn zero(size: usize) -> Self {
        CrossedElement { size, terms: BTreeMap::new() }
    }

    /// `A·γ` for one matrix.
    pub fn single(g: GroupElt, a: Vec<Vec<TorusElement>>) -> Self {
        let size = a.len();
        let mut terms = BTreeMap::new();
        terms.insert(g, a);
        CrossedElement { size, terms }
    }

    /// `a·γ` for a scalar (1×1) entry.
    pub fn scalar(g: GroupElt, a: TorusElement) -> Self {
        Self::single(g, vec![vec![a]])
    }

    pub fn add(&self, other: &Self) -> Result<Self, TorusError> {
        if self.size != other.size {
            return Err(TorusError::SizeMismatch(self.size, other.size));
        }
        let mut out = self.clone();
        for (g, m) in &other.terms {
            match out.terms.get_mut(g) {
                Some(x) => {
                    for (r1, r2) in x.iter_mut().zip(m) {
                        for (a, b) in r1.iter_mut().zip(r2) {
                            *a = a.add(b);
                        }
                    }
                }
                None => {
                    out.terms.insert(g.clone(), m.clone());
                }
            }
        }
        out.prune();
        Ok(out)
    }

    fn prune(&mut self) {
        self.terms.retain(|_, m| m.iter().flatten().any(|a| !a.is_zero()));
    }

    /// Entries as linear combinations over the crossed-product basis `(mode, γ)`.
    pub fn to_matrix(&self) -> Matrix<(Mode, GroupElt)> {
        let mut out: Matrix<(Mode, GroupElt)> = vec![vec![Lin::new(); self.size]; self.size];
        for (g, m) in &self.terms {
            for (i, row) in m.iter().enumerate() {
                for (j, a) in row.iter().enumerate() {
                    for (mode, c) in a.modes() {
                        out[i][j].insert((mode.clone(), g.clone()), c.clone());
                    }
                }
            }
        }
        out
    }
}

/// `(Aγ)(Bη) = A⋆γ(B)·γη`, summed.
pub fn crossed_mul(a: &CrossedElement, b: &CrossedElement, action: &TranslationAction) -> Result<CrossedElement, TorusError> {
    if a.size != b.size {
        return Err(TorusError::SizeMismatch(a.size, b.size));
    }
    let n = a.size;
    let gr = &action.group;
    let mut out = CrossedElement::zero(n);
    for (g, ma) in &a.terms {
        for (h, mb) in &b.terms {
            let mb2: Vec<Vec<TorusElement>> = mb.iter().map(|r| r.iter().map(|x| action.act(g, x)).collect()).collect();
            let proto = &ma[0][0];
            let mut prod = vec![vec![TorusElement::zero_at(proto.dim(), proto.level(), proto.trunc()); n]; n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        prod[i][j] = prod[i][j].add(&ma[i][k].star(&mb2[k][j])?);
                    }
                }
            }
            out = out.add(&CrossedElement::single(gr.mul(g, h), prod))?;
        }
    }
    Ok(out)
}
