//! Configuration-driven verification suites and the JSON report they produce.
//!
//! Every suite is a pure function of the configuration; randomness comes from a
//! `ChaCha8Rng` seeded with `config.seed`, so reports are reproducible byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::PolyAlgebra;
use crate::cyclic::*;
use crate::formal_forms::{hkr, j_shift, mu_normalization_chain, FormalForm};
use crate::group::{GroupElt, GroupSpec};
use crate::group_coh::{equivariant_theta, phi_pair, symbol_chain, tr_xi, GroupCochain};
use crate::lie_gf::{a_hat_series, gelfand_fuks, i_xi, index_class, InvariantConnection, LieCochain, TraceCochain};
use crate::scalars::{FieldElement, HbarLaurent, ULaurent};
use crate::torus::*;
use crate::weyl::{sp_basis, Derivation, WeylElement, WeylMonomial};

/// Version of the report layout documented in the README.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown suite `{name}`; available: {}", available.join(", "))]
    UnknownSuite { name: String, available: Vec<String> },
    #[error("invalid config:\n{}", .0.iter().map(|e| format!("  {}: {}", e.field, e.message)).collect::<Vec<_>>().join("\n"))]
    InvalidConfig(Vec<ConfigError>),
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Compute(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum XiSpec {
    /// The constant cochain `1`.
    One,
    /// `ξ(n) = Σ_j c_j n_j` on `Z^r`.
    Linear { coeffs: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum IdempotentSpec {
    /// The `1×1` unit.
    Unit,
    /// `diag(1,…,1,0,…,0)`.
    Diag { size: usize, rank: usize },
    /// `V·diag(1,0)·V^{-1}` with `V = diag(1, e_l)·R`.
    Rotation { l: Vec<i64> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub dimension: usize,
    pub hbar_trunc: i32,
    pub u_trunc: i32,
    pub weyl_trunc: u32,
    pub level: u32,
    /// `"Z"`, `"Z^r"` or `"Z/n"`.
    pub group: String,
    /// Shift of each generator in units of `1/level`.
    pub shifts: Vec<Vec<i64>>,
    /// Twisting mode per generator; empty means untwisted.
    pub twists: Vec<Vec<i64>>,
    pub xi: XiSpec,
    pub idempotent: IdempotentSpec,
    /// Suites run by `verify` without an explicit name.
    pub suites: Vec<String>,
    /// Overrides the per-suite number of random instances.
    pub samples: Option<usize>,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            dimension: 1,
            hbar_trunc: 6,
            u_trunc: 3,
            weyl_trunc: 6,
            level: 4,
            group: "Z".into(),
            shifts: vec![vec![1, 2]],
            twists: Vec::new(),
            xi: XiSpec::One,
            idempotent: IdempotentSpec::Rotation { l: vec![0, 1] },
            suites: Vec::new(),
            samples: None,
            seed: 0,
        }
    }
}

pub fn parse_group(s: &str) -> Option<GroupSpec> {
    let s = s.trim();
    if s == "Z" {
        return Some(GroupSpec::Free { rank: 1 });
    }
    if let Some(r) = s.strip_prefix("Z^") {
        return r.parse().ok().filter(|&r| r > 0).map(|rank| GroupSpec::Free { rank });
    }
    if let Some(n) = s.strip_prefix("Z/") {
        return n.parse().ok().filter(|&n| n > 0).map(|order| GroupSpec::Cyclic { order });
    }
    None
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut errs = Vec::new();
        let mut err = |field: &str, message: String| errs.push(ConfigError { field: field.into(), message });
        let d2 = 2 * self.dimension;
        if !(1..=2).contains(&self.dimension) {
            err("dimension", format!("must be 1 or 2, got {}", self.dimension));
        }
        if self.hbar_trunc < 0 {
            err("hbar_trunc", format!("must be ≥ 0, got {}", self.hbar_trunc));
        }
        if self.u_trunc < 0 {
            err("u_trunc", format!("must be ≥ 0, got {}", self.u_trunc));
        }
        if self.weyl_trunc == 0 {
            err("weyl_trunc", "must be positive".into());
        }
        if self.level == 0 || self.level % 4 != 0 {
            err("level", format!("must be a positive multiple of 4, got {}", self.level));
        }
        match parse_group(&self.group) {
            None => err("group", format!("expected Z, Z^r or Z/n, got `{}`", self.group)),
            Some(g) => {
                let r = g.rank();
                if self.shifts.len() != r {
                    err("shifts", format!("need one shift per generator ({r}), got {}", self.shifts.len()));
                }
                for (j, s) in self.shifts.iter().enumerate() {
                    if s.len() != d2 {
                        err(&format!("shifts[{j}]"), format!("need {d2} entries, got {}", s.len()));
                    }
                }
                if !self.twists.is_empty() {
                    if self.twists.len() != r {
                        err("twists", format!("need one mode per generator ({r}), got {}", self.twists.len()));
                    }
                    if !g.is_free() && self.twists.iter().flatten().any(|&k| k != 0) {
                        err("twists", "twisted actions need a free abelian group".into());
                    }
                    for (j, k) in self.twists.iter().enumerate() {
                        if k.len() != d2 {
                            err(&format!("twists[{j}]"), format!("need {d2} entries, got {}", k.len()));
                        }
                    }
                }
                if let XiSpec::Linear { coeffs } = &self.xi {
                    if !g.is_free() {
                        err("xi", "a linear cochain needs a free abelian group".into());
                    } else if coeffs.len() != r {
                        err("xi.coeffs", format!("need {r} entries, got {}", coeffs.len()));
                    }
                }
            }
        }
        match &self.idempotent {
            IdempotentSpec::Unit => {}
            IdempotentSpec::Diag { size, rank } => {
                if *size == 0 || rank > size {
                    err("idempotent", format!("need 0 < size and rank ≤ size, got size {size}, rank {rank}"));
                }
            }
            IdempotentSpec::Rotation { l } => {
                if l.len() != d2 {
                    err("idempotent.l", format!("need {d2} entries, got {}", l.len()));
                }
            }
        }
        let names = suite_names();
        for s in &self.suites {
            if !names.contains(&s.as_str()) {
                err("suites", format!("unknown suite `{s}`"));
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(ScenarioError::InvalidConfig(errs))
        }
    }

    fn samples_or(&self, n: usize) -> usize {
        self.samples.unwrap_or(n)
    }

    fn group_spec(&self) -> GroupSpec {
        parse_group(&self.group).expect("validated")
    }

    pub fn action(&self) -> Result<TranslationAction, ScenarioError> {
        let act = TranslationAction::shifts_int(self.group_spec(), self.level, &self.shifts).map_err(compute)?;
        if self.twists.is_empty() {
            Ok(act)
        } else {
            act.with_twists(self.twists.clone()).map_err(compute)
        }
    }

    fn xi_cochain(&self) -> Result<GroupCochain, ScenarioError> {
        match &self.xi {
            XiSpec::One => Ok(GroupCochain::one(self.group_spec())),
            XiSpec::Linear { coeffs } => GroupCochain::linear(self.group_spec(), coeffs).map_err(compute),
        }
    }

    fn idempotent_matrix(&self, trunc: i32) -> Vec<Vec<TorusElement>> {
        let d = self.dimension;
        match &self.idempotent {
            IdempotentSpec::Unit => constant_projection(1, 1, d, trunc),
            IdempotentSpec::Diag { size, rank } => constant_projection(*size, *rank, d, trunc),
            IdempotentSpec::Rotation { l } => rotation_projection(d, l, trunc),
        }
    }

    fn idempotent_rank(&self) -> usize {
        match &self.idempotent {
            IdempotentSpec::Diag { rank, .. } => *rank,
            _ => 1,
        }
    }

    fn digest(&self, name: &str) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_string(self).expect("config serializes").as_bytes());
        h.update(b"\0");
        h.update(name.as_bytes());
        h.finalize().iter().take(8).fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

fn compute(e: impl std::fmt::Display) -> ScenarioError {
    ScenarioError::Compute(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub inputs_digest: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    /// Wall-clock time; kept out of the serialized report.
    #[serde(skip)]
    pub runtime_ms: u128,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Compact JSON with fields in declaration order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

pub fn emit_report(r: &Report, path: &Path) -> Result<(), ScenarioError> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, r.to_json() + "\n")?;
    Ok(())
}

struct Ctx<'a> {
    cfg: &'a ScenarioConfig,
    anchor: &'static str,
    out: Vec<CheckRecord>,
    started: Instant,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a ScenarioConfig, anchor: &'static str) -> Self {
        Ctx { cfg, anchor, out: Vec::new(), started: Instant::now() }
    }

    fn record(&mut self, name: &str, expected: String, actual: String, pass: bool) {
        let runtime_ms = self.started.elapsed().as_millis();
        self.out.push(CheckRecord {
            name: name.into(),
            anchor: self.anchor.into(),
            inputs_digest: self.cfg.digest(name),
            expected,
            actual,
            pass,
            runtime_ms,
        });
        self.started = Instant::now();
    }

    /// `holds` out of `total` instances satisfy the identity.
    fn count(&mut self, name: &str, total: usize, failures: usize) {
        self.record(name, format!("{total}/{total} hold"), format!("{}/{total} hold", total - failures), failures == 0 && total > 0);
    }

    fn equal(&mut self, name: &str, expected: &ULaurent, actual: &ULaurent) {
        let pass = (expected - actual).is_zero();
        self.record(name, expected.serialize(), actual.serialize(), pass);
    }
}

type SuiteFn = fn(&mut Ctx, &mut ChaCha8Rng) -> Result<(), ScenarioError>;

struct Suite {
    name: &'static str,
    anchor: &'static str,
    run: SuiteFn,
}

const SUITES: &[Suite] = &[
    Suite { name: "moyal-associativity", anchor: "Moyal–Weyl product: associativity", run: suite_moyal },
    Suite { name: "weyl-relation", anchor: "Weyl algebra: canonical commutation relation", run: suite_weyl_relation },
    Suite { name: "trace-axioms", anchor: "canonical trace: normalization and trace property", run: suite_trace },
    Suite { name: "cyclic-relations", anchor: "cyclic modules: simplicial relations and the mixed complex", run: suite_cyclic },
    Suite { name: "appendix-isomorphisms", anchor: "crossed products: cyclic isomorphisms and group homology maps", run: suite_isomorphisms },
    Suite { name: "chern-connes-cycle", anchor: "Chern–Connes character is a periodic cycle", run: suite_chern },
    Suite { name: "tr-xi-cocycle", anchor: "group-cocycle twisted trace is a cyclic cocycle", run: suite_tr_xi },
    Suite { name: "index-nonequivariant", anchor: "algebraic index theorem", run: suite_index },
    Suite { name: "index-equivariant", anchor: "equivariant algebraic index theorem", run: suite_index_equivariant },
    Suite { name: "lie-gf", anchor: "Lie cochains: extension cocycle, Chern–Weil, Â and Gelfand–Fuks", run: suite_lie_gf },
    Suite { name: "hkr-j", anchor: "HKR map, J shift and the normalization chain", run: suite_hkr },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

pub fn suite_anchor(name: &str) -> Option<&'static str> {
    SUITES.iter().find(|s| s.name == name).map(|s| s.anchor)
}

pub fn run_suite(name: &str, cfg: &ScenarioConfig) -> Result<Report, ScenarioError> {
    let suite = SUITES.iter().find(|s| s.name == name).ok_or_else(|| ScenarioError::UnknownSuite {
        name: name.into(),
        available: suite_names().into_iter().map(String::from).collect(),
    })?;
    cfg.validate()?;
    let mut ctx = Ctx::new(cfg, suite.anchor);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (suite.run)(&mut ctx, &mut rng)?;
    Ok(Report { checks: ctx.out })
}

fn random_coeff<R: Rng>(r: &mut R, u_trunc: i32, ht: i32) -> ULaurent {
    let v = FieldElement::from_frac(r.gen_range(-3..=3), r.gen_range(1..=2));
    let v = if r.gen_bool(0.3) { v * FieldElement::i() } else { v };
    ULaurent::monomial(HbarLaurent::constant(v, ht), r.gen_range(0..=u_trunc.min(1)), u_trunc)
}

fn random_mode<R: Rng>(r: &mut R, dim: usize) -> Mode {
    (0..2 * dim).map(|_| r.gen_range(-1..=1)).collect()
}

fn random_chain<R: Rng, E: Clone + Ord + std::fmt::Debug>(
    r: &mut R,
    degs: std::ops::RangeInclusive<usize>,
    nterms: usize,
    u_trunc: i32,
    ht: i32,
    mut elem: impl FnMut(&mut R) -> E,
) -> Chain<E> {
    let mut out = Chain::zero(u_trunc, ht);
    for _ in 0..nterms {
        let n = r.gen_range(degs.clone());
        let x: Vec<E> = (0..=n).map(|_| elem(r)).collect();
        let c = random_coeff(r, u_trunc, ht);
        out.add_term(x, &c);
    }
    out
}

/// Crossed tensors of one degree; with `homogeneous` the legs multiply to `e`.
fn random_crossed<R: Rng>(r: &mut R, alg: &EquivariantTorus, deg: usize, nterms: usize, u_trunc: i32, homogeneous: bool) -> Chain<(Mode, GroupElt)> {
    let gr = alg.action.group;
    let ht = alg.torus.trunc;
    let mut c = Chain::zero(u_trunc, ht);
    for _ in 0..nterms {
        let mut legs: Vec<GroupElt> = (0..=deg).map(|_| gr.random(r)).collect();
        if homogeneous || r.gen_bool(0.5) {
            legs[deg] = gr.inv(&gr.product(legs[..deg].iter()));
        }
        let t: Vec<(Mode, GroupElt)> = legs.into_iter().map(|g| (random_mode(r, alg.torus.dim), g)).collect();
        let cf = random_coeff(r, u_trunc, ht);
        c.add_term(t, &cf);
    }
    c
}

/// `Z` and `Z/4` acting by translations on `T^{2d}`.
fn reference_tori(cfg: &ScenarioConfig, ht: i32) -> Result<Vec<EquivariantTorus>, ScenarioError> {
    let d = cfg.dimension;
    let pad = |v: &[i64]| {
        let mut s = v.to_vec();
        s.resize(2 * d, 0);
        s
    };
    let groups = [(GroupSpec::Free { rank: 1 }, pad(&[1, 2])), (GroupSpec::Cyclic { order: 4 }, pad(&[1, 3]))];
    groups
        .into_iter()
        .map(|(g, s)| {
            Ok(EquivariantTorus {
                torus: TorusAlgebra { dim: d, trunc: ht },
                action: TranslationAction::shifts_int(g, 4, &[s]).map_err(compute)?,
            })
        })
        .collect()
}

fn suite_moyal(ctx: &mut Ctx, r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let (d, n) = (cfg.dimension, cfg.samples_or(200));
    let mut bad = 0;
    for _ in 0..n {
        let [a, b, c] = [(); 3].map(|_| TorusElement::random(r, d, 3, 3, cfg.hbar_trunc));
        let lhs = a.star(&b).and_then(|ab| ab.star(&c)).map_err(compute)?;
        let rhs = b.star(&c).and_then(|bc| a.star(&bc)).map_err(compute)?;
        bad += usize::from(lhs != rhs);
    }
    ctx.count("torus (a⋆b)⋆c = a⋆(b⋆c)", n, bad);
    if cfg.hbar_trunc == 0 {
        let mut bad = 0;
        for _ in 0..n {
            let (a, b) = (TorusElement::random(r, d, 3, 3, 0), TorusElement::random(r, d, 3, 3, 0));
            bad += usize::from(a.star(&b).map_err(compute)? != a.pointwise_mul(&b));
        }
        ctx.count("classical limit: ⋆ is the pointwise product", n, bad);
    }
    let mut bad = 0;
    for _ in 0..n {
        let [a, b, c] = [(); 3].map(|_| WeylElement::random(r, d, cfg.weyl_trunc, 4));
        bad += usize::from(a.star(&b).star(&c) != a.star(&b.star(&c)));
    }
    ctx.count("Weyl (a⋆b)⋆c = a⋆(b⋆c)", n, bad);
    Ok(())
}

fn suite_weyl_relation(ctx: &mut Ctx, _r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let (d, n) = (cfg.dimension, cfg.weyl_trunc.max(2));
    let ih = WeylElement::hbar(d, n).scale(&FieldElement::i());
    for i in 1..=d {
        for j in 1..=d {
            let (x, xi) = (WeylElement::x(i, d, n), WeylElement::xi(j, d, n));
            let comm = xi.star(&x).sub(&x.star(&xi));
            let expected = if i == j { ih.clone() } else { WeylElement::zero(d, n) };
            ctx.record(&format!("ξ̂{j}⋆x̂{i} − x̂{i}⋆ξ̂{j}"), expected.serialize(), comm.serialize(), comm == expected);
            let (xj, xij) = (WeylElement::x(j, d, n), WeylElement::xi(i, d, n));
            let cx = x.star(&xj).sub(&xj.star(&x));
            let cxi = xi.star(&xij).sub(&xij.star(&xi));
            ctx.record(&format!("[x̂{i}, x̂{j}] and [ξ̂{j}, ξ̂{i}]"), "0 and 0".into(), format!("{} and {}", cx.serialize(), cxi.serialize()), cx.is_zero() && cxi.is_zero());
        }
    }
    Ok(())
}

/// `(iħ)^{-d}` to order `trunc`.
fn inverse_ih_power(d: usize, trunc: i32) -> HbarLaurent {
    let c = (0..d).fold(FieldElement::one(), |acc, _| acc * -FieldElement::i());
    HbarLaurent::monomial(c, -(d as i32), trunc)
}

fn suite_trace(ctx: &mut Ctx, r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let (d, nt) = (cfg.dimension, cfg.hbar_trunc);
    let tr1 = TorusElement::one(d, nt).trace();
    let expected = inverse_ih_power(d, nt - d as i32);
    ctx.record("Tr(1) = (iħ)^{-d}", expected.serialize(), tr1.serialize(), (&tr1 - &expected).is_zero());
    let n = cfg.samples_or(100);
    let mut bad = 0;
    for _ in 0..n {
        let a = TorusElement::random(r, d, 2, 4, nt);
        let b = TorusElement::random(r, d, 2, 4, nt);
        let c = a.star(&b).map_err(compute)?.sub(&b.star(&a).map_err(compute)?);
        bad += usize::from(!c.trace().is_zero());
    }
    ctx.count("Tr(a⋆b − b⋆a) = 0", n, bad);
    Ok(())
}

fn mixed_defects<M: CyclicModule>(m: &M, c: &Chain<M::Elem>) -> usize {
    let bb = b(m, &b(m, c));
    let bigbb = big_b(m, &big_b(m, c));
    let anti = b(m, &big_b(m, c)).add(&big_b(m, &b(m, c)));
    usize::from(!bb.is_zero()) + usize::from(!bigbb.is_zero()) + usize::from(!anti.is_zero())
}

fn suite_cyclic(ctx: &mut Ctx, r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let n = cfg.samples_or(100);
    let (ut, ht, d) = (1, cfg.hbar_trunc.min(2), cfg.dimension);
    for alg in reference_tori(cfg, ht)? {
        let gr = alg.action.group;
        let am = AlgebraModule::new(alg.torus.clone());
        let gm = GroupModule { group: gr };
        let dm = DiagonalModule { alg: alg.clone(), group: gr };
        let cm = AlgebraModule::crossed(CrossedAlgebra { base: alg.clone() });
        let g = gr.describe();
        let mut rel = [0usize; 4];
        let mut mix = [0usize; 4];
        for _ in 0..n {
            let k = r.gen_range(0..=4);
            let a: Vec<Mode> = (0..=k).map(|_| random_mode(r, d)).collect();
            let gs: Vec<GroupElt> = (0..=k).map(|_| gr.random(r)).collect();
            let ds: Vec<(Mode, GroupElt)> = (0..=k).map(|_| (random_mode(r, d), gr.random(r))).collect();
            rel[0] += usize::from(!relation_violations(&am, &a).is_empty());
            rel[1] += usize::from(!relation_violations(&gm, &gs).is_empty());
            rel[2] += usize::from(!relation_violations(&dm, &ds).is_empty());
            rel[3] += usize::from(!relation_violations(&cm, &ds).is_empty());
            let ca = random_chain(r, 0..=4, 2, ut, ht, |r| random_mode(r, d));
            let cg = random_chain(r, 0..=4, 2, ut, ht, |r| gr.random(r));
            let cd = random_chain(r, 0..=4, 2, ut, ht, |r| (random_mode(r, d), gr.random(r)));
            mix[0] += usize::from(mixed_defects(&am, &ca) > 0);
            mix[1] += usize::from(mixed_defects(&gm, &cg) > 0);
            mix[2] += usize::from(mixed_defects(&dm, &cd) > 0);
            mix[3] += usize::from(mixed_defects(&cm, &cd) > 0);
        }
        for (i, kind) in ["algebra", "group", "diagonal", "crossed"].iter().enumerate() {
            ctx.count(&format!("{kind} module over {g}: simplicial and cyclic relations"), n, rel[i]);
            ctx.count(&format!("{kind} module over {g}: b² = B² = bB + Bb = 0"), n, mix[i]);
        }
    }
    Ok(())
}

fn random_group_chain<R: Rng>(r: &mut R, alg: &EquivariantTorus, p: usize, ut: i32) -> GroupChain<Mode> {
    let gr = alg.action.group;
    let ht = alg.torus.trunc;
    let mut c = LinComb::zero(ut, ht);
    for _ in 0..3 {
        let n = r.gen_range(0..=2);
        let mut x: Vec<(Mode, GroupElt)> = (0..=n).map(|_| (random_mode(r, alg.torus.dim), gr.random(r))).collect();
        x[0].1 = gr.identity();
        let k: Vec<GroupElt> = (0..=p).map(|_| gr.random(r)).collect();
        let cf = random_coeff(r, ut, ht);
        c.add_term((x, k), &cf);
    }
    c
}

fn suite_isomorphisms(ctx: &mut Ctx, r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let n = cfg.samples_or(50);
    let (ht, d) = (cfg.hbar_trunc.min(2), cfg.dimension);
    for alg in reference_tori(cfg, ht)? {
        let gr = alg.action.group;
        let g = gr.describe();
        let dm = DiagonalModule { alg: alg.clone(), group: gr };
        let cm = AlgebraModule::crossed(CrossedAlgebra { base: alg.clone() });
        let mut bad = BTreeMap::<&str, usize>::new();
        let mut fail = |k: &'static str, f: bool| *bad.entry(k).or_default() += usize::from(f);
        for i in 0..n {
            let deg = i % 4;
            let c = random_crossed(r, &alg, deg, 3, 0, true);
            let fw = homogeneous_to_coinvariants(&alg, &c).map_err(compute)?;
            fail("roundtrip", coinvariants_to_homogeneous(&alg, &fw) != c);
            let lhs = homogeneous_to_coinvariants(&alg, &cyclic(&cm, deg, &c)).map_err(compute)?;
            fail("cyclic", lhs != canonical_coinvariant(&alg, &cyclic(&dm, deg, &fw)));
            let lhs = homogeneous_to_coinvariants(&alg, &b(&cm, &c)).map_err(compute)?;
            fail("boundary", lhs != canonical_coinvariant(&alg, &b(&dm, &fw)));

            let mut u = LinComb::zero(0, ht);
            for _ in 0..3 {
                let k = r.gen_range(0..=2);
                let m: Vec<(Mode, GroupElt)> = (0..=k).map(|_| (random_mode(r, d), gr.random(r))).collect();
                let cf = random_coeff(r, 0, ht);
                u.add_term((m, gr.random(r)), &cf);
            }
            fail("untwist", untwist_inverse(&alg, &untwist(&alg, &u)) != u || untwist(&alg, &untwist_inverse(&alg, &u)) != u);

            let p = 1 + i % 3;
            let gc = random_group_chain(r, &alg, p, 1);
            fail("homotopy", !homotopy_defect(&gr, &gc).is_zero());

            let fdeg = 1 + i % 2;
            let f = random_chain(r, fdeg..=fdeg, 2, 1, ht, |r| (random_mode(r, d), gr.random(r)));
            let q = q_map(&alg, &f);
            fail("q", total_differential(&alg, &q) != q_map(&alg, &b_plus_ub(&dm, &f)) || q != q_map_expanded(&alg, &f));

            let a = random_chain(r, 2..=2, 3, 0, ht, |r| (random_mode(r, d), gr.random(r)));
            fail("aw", alexander_whitney(&alg, &b(&dm, &a)) != tensor_differential(&alg, &alexander_whitney(&alg, &a)));

            let h = random_crossed(r, &alg, fdeg, 2, 1, true);
            fail("d", d_map(&alg, &b_plus_ub(&cm, &h)) != nonhomogeneous_differential(&alg, &d_map(&alg, &h)));
        }
        let labels = [
            ("roundtrip", "homogeneous summand ≅ coinvariants: roundtrip"),
            ("cyclic", "homogeneous summand ≅ coinvariants: compatible with t"),
            ("boundary", "homogeneous summand ≅ coinvariants: compatible with b"),
            ("untwist", "untwisting isomorphism: roundtrip"),
            ("homotopy", "δH + Hδ = Id in positive degree"),
            ("q", "Q_F is a chain map; closed and recursive forms agree"),
            ("aw", "Alexander–Whitney is a chain map"),
            ("d", "D is a chain map"),
        ];
        for (k, label) in labels {
            ctx.count(&format!("{label} ({g})"), n, bad.get(k).copied().unwrap_or(0));
        }
    }
    Ok(())
}

fn suite_chern(ctx: &mut Ctx, _r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let (d, ht) = (cfg.dimension, cfg.hbar_trunc);
    let alg = TorusAlgebra { dim: d, trunc: ht };
    let am = AlgebraModule::new(alg.clone());
    let mut l = vec![0; 2 * d];
    l[1] = 1;
    let mut cases = vec![
        ("1".to_string(), constant_projection(1, 1, d, ht)),
        ("diag(1,0)".to_string(), constant_projection(2, 1, d, ht)),
        (format!("V·diag(1,0)·V⁻¹, l = {l:?}"), rotation_projection(d, &l, ht)),
    ];
    if let IdempotentSpec::Rotation { l: cl } = &cfg.idempotent {
        if *cl != l {
            cases.push((format!("V·diag(1,0)·V⁻¹, l = {cl:?}"), rotation_projection(d, cl, ht)));
        }
    }
    for (name, e) in cases {
        let ch = chern_character(&alg, &to_lin_matrix(&e), cfg.u_trunc).map_err(compute)?;
        let bc = normalize(&am, &b_plus_ub(&am, &ch));
        ctx.record(&format!("(b+uB)·ch(e) = 0 for e = {name}"), "0".into(), format!("{} terms", bc.len()), bc.is_zero());
    }
    Ok(())
}

fn suite_tr_xi(ctx: &mut Ctx, r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let n = cfg.samples_or(100);
    let ht = cfg.hbar_trunc.min(2);
    let alg = reference_tori(cfg, ht)?.remove(0);
    let am = AlgebraModule::crossed(CrossedAlgebra { base: alg.clone() });
    let xi = GroupCochain::linear(alg.action.group, &[1]).map_err(compute)?;
    let t = tr_xi(&alg, xi).map_err(compute)?;
    let mut bad = 0;
    for i in 0..n {
        let c = random_crossed(r, &alg, i % 4, 3, 2, false);
        bad += usize::from(!t.eval(&normalize(&am, &b_plus_ub(&am, &c))).is_zero());
    }
    ctx.count("Z, ξ(n) = n: Tr_ξ∘(b+uB) = 0", n, bad);
    Ok(())
}

/// `⟨Tr, ch e⟩`: only the degree-0 part pairs with a degree-0 cocycle.
fn trace_pairing(ch: &Chain<Mode>, trunc: i32) -> ULaurent {
    let mut out = ULaurent::zero(ch.u_trunc(), trunc);
    for (k, v) in ch.component(0).terms() {
        out = &out + &ULaurent::monomial(v.coeff(0).mul(&trace_of_mode(&k[0], trunc)), 0, ch.u_trunc());
    }
    out
}

fn identity_legs(c: &Chain<Mode>, e: &GroupElt) -> Chain<(Mode, GroupElt)> {
    c.map(|t| vec![(HbarLaurent::one(c.hbar_trunc()), t.iter().map(|m| (m.clone(), e.clone())).collect::<Vec<_>>())])
}

fn suite_index(ctx: &mut Ctx, _r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let (d, ht, ut) = (cfg.dimension, cfg.hbar_trunc, cfg.u_trunc);
    let alg = TorusAlgebra { dim: d, trunc: ht };
    let e = cfg.idempotent_matrix(ht);
    let ch = match chern_character(&alg, &to_lin_matrix(&e), ut) {
        Ok(c) => c,
        Err(err) => {
            ctx.record("e is idempotent", "e⋆e = e".into(), err.to_string(), false);
            return Ok(());
        }
    };
    let expected = ULaurent::monomial(inverse_ih_power(d, ht - d as i32).scale(&FieldElement::from_int(cfg.idempotent_rank() as i64)), 0, ut);
    let lhs = trace_pairing(&ch, ht - d as i32);
    ctx.equal("LHS ⟨Tr, ch e⟩", &expected, &lhs);
    // The non-equivariant class lives on the identity component; a trivial
    // Z-action carries it.
    let trivial = TranslationAction::shifts_int(GroupSpec::Free { rank: 1 }, cfg.level, &[vec![0; 2 * d]]).map_err(compute)?;
    let sym = EquivariantTorus { torus: TorusAlgebra { dim: d, trunc: ht }, action: trivial.clone() };
    let class = index_class(&trivial, ht).map_err(compute)?;
    let one = GroupCochain::one(trivial.group);
    let rhs = phi_pair(&class, &one, &sym, &symbol_chain(&identity_legs(&ch, &trivial.group.identity()))).map_err(compute)?;
    ctx.equal("RHS u^{-d}∫ HKR(σ ch e)·Â e^θ", &expected, &rhs.value);
    ctx.equal("LHS = RHS", &lhs, &rhs.value);
    Ok(())
}

fn crossed_chern(alg: &EquivariantTorus, e: Vec<Vec<TorusElement>>, ut: i32) -> Result<Chain<(Mode, GroupElt)>, ScenarioError> {
    let ce = CrossedElement::single(alg.action.group.identity(), e);
    chern_character(&CrossedAlgebra { base: alg.clone() }, &ce.to_matrix(), ut).map_err(compute)
}

/// `I_ξ(τ̂_a)` and `I_ξ(τ̂_t)` twisted by `Â_Γ e^{θ_Γ}` on `ch(e)`.
fn both_sides(alg: &EquivariantTorus, xi: &GroupCochain, ch: &Chain<(Mode, GroupElt)>) -> Result<(ULaurent, ULaurent), ScenarioError> {
    let lhs = i_xi(&TraceCochain::TauA, xi, alg, ch).map_err(compute)?;
    let class = index_class(&alg.action, alg.torus.trunc).map_err(compute)?;
    let rhs = i_xi(&TraceCochain::TauT(class), xi, alg, ch).map_err(compute)?;
    Ok((lhs, rhs))
}

/// `u^{-1}⋆∇_F u` for `u = exp(2πi k·ŷ)` in the Weyl algebra, with `∇_F`
/// acting through the standard invariant connection; returns the constant
/// term per slot and whether all lower-order non-constant terms vanish.
fn twist_form_direct(k: &[i64], trunc: u32) -> (Vec<FieldElement>, bool) {
    let dim = k.len() / 2;
    let two_pi_i = FieldElement::pi_pow(1) * FieldElement::i() * FieldElement::from_int(2);
    let lin = |sign: i64| {
        (0..2 * dim).fold(WeylElement::zero(dim, trunc), |acc, s| {
            acc.add(&WeylElement::generator(s, dim, trunc).scale(&(two_pi_i.clone() * FieldElement::from_int(sign * k[s]))))
        })
    };
    let exp = |l: &WeylElement| {
        let mut term = WeylElement::one(dim, trunc);
        let mut sum = term.clone();
        for j in 1..=trunc {
            term = term.pointwise_mul(l).scale(&FieldElement::from_frac(1, j as i64));
            sum = sum.add(&term);
        }
        sum
    };
    let (u, uinv) = (exp(&lin(1)), exp(&lin(-1)));
    let conn = InvariantConnection::standard(dim, trunc);
    let mut consts = Vec::new();
    let mut clean = true;
    for s in 0..2 * dim {
        let v = uinv.star(&conn.coeffs[s].apply(&u));
        consts.push(v.coeff(&WeylMonomial::one(dim)));
        for deg in 1..trunc.saturating_sub(1) {
            clean &= v.homogeneous(deg).is_zero();
        }
    }
    (consts, clean)
}

fn suite_index_equivariant(ctx: &mut Ctx, _r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let (d, ht, ut) = (cfg.dimension, cfg.hbar_trunc, cfg.u_trunc);
    let z = reference_tori(cfg, ht)?.remove(0);
    let zero = ULaurent::zero(ut, ht);

    let lin = GroupCochain::linear(z.action.group, &[1]).map_err(compute)?;
    let ch_const = crossed_chern(&z, constant_projection(2, 1, d, ht), ut)?;
    let (lhs, rhs) = both_sides(&z, &lin, &ch_const)?;
    ctx.equal("(a) Z, ξ(n) = n, e = diag(1,0): LHS", &zero, &lhs);
    ctx.equal("(a) Z, ξ(n) = n, e = diag(1,0): RHS", &zero, &rhs);

    let e = cfg.idempotent_matrix(ht);
    let ch = crossed_chern(&z, e, ut)?;
    let one = GroupCochain::one(z.action.group);
    let (lhs, rhs) = both_sides(&z, &one, &ch)?;
    let expected = ULaurent::monomial(inverse_ih_power(d, ht - d as i32).scale(&FieldElement::from_int(cfg.idempotent_rank() as i64)), 0, ut);
    ctx.equal("(b) ξ = 1 through I_ξ: LHS I_ξ(τ̂_a)", &expected, &lhs);
    ctx.equal("(b) ξ = 1 through I_ξ: RHS I_ξ(τ̂_t)", &expected, &rhs);

    let mut twist = vec![0; 2 * d];
    twist[0] = 1;
    let twists = if cfg.twists.len() == 1 && cfg.group_spec() == (GroupSpec::Free { rank: 1 }) { cfg.twists.clone() } else { vec![twist] };
    let act = z.action.clone().with_twists(twists.clone()).map_err(compute)?;
    let th = equivariant_theta(&act, ht).map_err(compute)?;
    let sample: Vec<GroupElt> = (-2..=2).map(|n| GroupElt(vec![n])).collect();
    let defects = th.total_defects(&sample, 2 * d).map_err(compute)?;
    ctx.record("(c) twisted θ_Γ is a total cocycle", "0 defects".into(), format!("{} defects", defects.len()), defects.is_empty());
    let (consts, clean) = twist_form_direct(&twists[0], cfg.weyl_trunc.max(3));
    let mut direct = TorusForm::zero(d, 1, ht);
    for (s, c) in consts.iter().enumerate() {
        if !c.is_zero() {
            direct.add_component(&[s], &TorusElement::one(d, ht).scale(c));
        }
    }
    let comp = th.eval(1, 1, &[GroupElt(vec![1])]);
    let pass = clean && comp == direct;
    ctx.record("(c) (1,1) component = u⁻¹∇_F u", format!("{direct:?}"), format!("{comp:?}"), pass);
    Ok(())
}

/// Coefficients of `(x/2)/sinh(x/2)` by inverting the series of `sinh(x/2)/(x/2)`.
fn ahat_by_inversion(max: usize) -> Vec<BigRational> {
    let mut s = vec![BigRational::zero(); max + 1];
    let mut fact = BigInt::one();
    for k in 0..=max {
        fact *= BigInt::from(k as i64 + 1);
        if k % 2 == 0 {
            s[k] = BigRational::new(BigInt::one(), &fact * BigInt::from(2).pow(k as u32));
        }
    }
    let mut inv = vec![BigRational::zero(); max + 1];
    inv[0] = BigRational::one();
    for k in 1..=max {
        let acc = (1..=k).fold(BigRational::zero(), |a, j| a + &s[j] * &inv[k - j]);
        inv[k] = -acc;
    }
    inv
}

fn random_derivation<R: Rng>(r: &mut R, dim: usize, trunc: u32) -> Derivation {
    crate::weyl::ad_derivation(&Derivation::random(r, dim, 4, 3).rep().with_trunc(trunc))
}

fn random_functional<R: Rng>(r: &mut R, dim: usize) -> BTreeMap<WeylMonomial, FieldElement> {
    (0..4)
        .map(|_| {
            let exps: Vec<u32> = (0..2 * dim).map(|_| r.gen_range(0..=2)).collect();
            (WeylMonomial { hbar: r.gen_range(0..=1), exps }, FieldElement::from_frac(r.gen_range(-3..=3), r.gen_range(1..=2)))
        })
        .collect()
}

fn suite_lie_gf(ctx: &mut Ctx, r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let d = cfg.dimension;
    let t = 12;
    let n = cfg.samples_or(20);
    let mut bad = 0;
    for _ in 0..n {
        let l1 = LieCochain::linear(random_functional(r, d), 4);
        let (f, g) = (LieCochain::linear(random_functional(r, d), 4), LieCochain::linear(random_functional(r, d), 4));
        let l2 = LieCochain::from_fn(2, move |a| &(&f.eval(&a[..1]) * &g.eval(&a[1..])) - &(&f.eval(&a[1..]) * &g.eval(&a[..1])));
        let args: Vec<Derivation> = (0..4).map(|_| random_derivation(r, d, t)).collect();
        let z1 = l1.differential().differential().eval(&args[..3]).is_zero();
        let z2 = l2.differential().differential().eval(&args).is_zero();
        bad += usize::from(!(z1 && z2));
    }
    ctx.count("∂² = 0 on random 1- and 2-cochains", n, bad);

    let th = LieCochain::theta();
    let mut bad = 0;
    for _ in 0..n {
        let args: Vec<Derivation> = (0..3).map(|_| random_derivation(r, d, t)).collect();
        bad += usize::from(!th.differential().eval(&args).is_zero());
    }
    ctx.count("∂θ̂ = 0", n, bad);
    let sp = sp_basis(d, t);
    let mut nonzero = 0;
    for a in &sp {
        for b in &sp {
            nonzero += usize::from(!th.eval(&[a.clone(), b.clone()]).is_zero());
        }
    }
    ctx.record("θ̂ vanishes on sp(2d) pairs", "0 non-zero pairs".into(), format!("{nonzero} non-zero pairs"), nonzero == 0);

    let conn = InvariantConnection::standard(d, t);
    let gf = gelfand_fuks(&th, &conn, 4).map_err(compute)?;
    let expected = TorusForm::omega(d, 4).scale_hbar(&HbarLaurent::monomial(-FieldElement::i(), -1, 4));
    ctx.record("GF(θ̂) = ω/(iħ)", format!("{expected:?}"), format!("{gf:?}"), gf == expected);

    let m = cfg.samples_or(50);
    let mut bad = 0;
    for _ in 0..m {
        let l = LieCochain::linear(random_functional(r, d), 4);
        let lhs = gelfand_fuks(&l.differential(), &conn, 4).map_err(compute)?;
        let rhs = gelfand_fuks(&l, &conn, 4).map_err(compute)?.d();
        bad += usize::from(lhs != rhs);
    }
    ctx.count("GF(∂λ) = d GF(λ)", m, bad);

    let series = a_hat_series(2);
    let coeff = series.get(&vec![1]).cloned().unwrap_or_default();
    let oracle = ahat_by_inversion(2)[2].clone();
    ctx.record("Â degree-2 coefficient", oracle.to_string(), coeff.to_string(), coeff == oracle);
    Ok(())
}

fn random_form<R: Rng>(r: &mut R, dim: usize, trunc: u32, ut: i32, ht: i32) -> FormalForm {
    let mut out = FormalForm::zero(dim, trunc, ut, ht);
    for _ in 0..r.gen_range(1..5) {
        let exps: Vec<u32> = (0..2 * dim).map(|_| r.gen_range(0..3)).collect();
        let idx: Vec<usize> = (0..2 * dim).filter(|_| r.gen_bool(0.4)).collect();
        let mut coeff = ULaurent::zero(ut, ht);
        coeff.add_at(r.gen_range(-1..=1), &HbarLaurent::constant(FieldElement::from_frac(r.gen_range(-3..=3), r.gen_range(1..=2)), ht));
        out.add_term(exps, idx, &coeff);
    }
    out
}

fn suite_hkr(ctx: &mut Ctx, r: &mut ChaCha8Rng) -> Result<(), ScenarioError> {
    let cfg = ctx.cfg;
    let (ut, ht) = (cfg.u_trunc, cfg.hbar_trunc);
    let n = cfg.samples_or(30);
    let mut bad = 0;
    for i in 0..n {
        let dim = 1 + i % 2;
        let am = AlgebraModule::new(PolyAlgebra { dim, trunc: 12 });
        let ch = random_chain(r, 0..=3, 4, ut, ht, |r| (0..2 * dim).map(|_| r.gen_range(0..2)).collect::<Vec<u32>>());
        let closed = hkr(&b(&am, &ch), dim, 12).is_zero();
        let inter = hkr(&b_plus_ub(&am, &ch), dim, 12) == hkr(&ch, dim, 12).d_hat().shift_u(1);
        bad += usize::from(!(closed && inter));
    }
    ctx.count("HKR∘b = 0 and HKR∘(b+uB) = u·d̂∘HKR", n, bad);
    let mut bad = 0;
    for i in 0..n {
        let dim = 1 + i % 2;
        let a = random_form(r, dim, 9, ut, ht);
        let lhs = j_shift(&a.d_hat().shift_u(1)).map_err(compute)?;
        let rhs = j_shift(&a).map_err(compute)?.d_hat();
        bad += usize::from(lhs != rhs);
    }
    ctx.count("J∘(u d̂) = d̂∘J", n, bad);
    let (l1, l2) = (mu_normalization_chain(1, ut, ht).len(), mu_normalization_chain(2, ut, ht).len());
    ctx.record("normalization chain size, d = 1 and d = 2", "2 and 24".into(), format!("{l1} and {l2}"), l1 == 2 && l2 == 24);
    Ok(())
}

/// LHS and RHS of the index identity for the configured action, `ξ` and idempotent.
pub fn index_check(cfg: &ScenarioConfig) -> Result<Report, ScenarioError> {
    cfg.validate()?;
    let mut ctx = Ctx::new(cfg, "equivariant algebraic index theorem");
    let (d, ht, ut) = (cfg.dimension, cfg.hbar_trunc, cfg.u_trunc);
    let alg = EquivariantTorus { torus: TorusAlgebra { dim: d, trunc: ht }, action: cfg.action()? };
    let xi = cfg.xi_cochain()?;
    let e = cfg.idempotent_matrix(ht);
    let ce = CrossedElement::single(alg.action.group.identity(), e);
    let m = ce.to_matrix();
    let cross = CrossedAlgebra { base: alg.clone() };
    let ch = match chern_character(&cross, &m, ut) {
        Ok(c) => c,
        Err(err) => {
            ctx.record("e is idempotent", "e⋆e = e".into(), err.to_string(), false);
            return Ok(Report { checks: ctx.out });
        }
    };
    ctx.record("e is idempotent", "e⋆e = e".into(), "e⋆e = e".into(), true);
    let (lhs, rhs) = both_sides(&alg, &xi, &ch)?;
    let pass = (&lhs - &rhs).is_zero();
    let actual = if pass { lhs.serialize() } else { format!("LHS {} ≠ RHS {}; difference {}", lhs.serialize(), rhs.serialize(), (&lhs - &rhs).serialize()) };
    ctx.record("I_ξ(τ̂_a)(ch e) = I_ξ(τ̂_t)(ch e)", rhs.serialize(), actual, pass);
    Ok(Report { checks: ctx.out })
}

/// One golden report per suite, at the default configuration.
pub fn emit_fixtures(dir: &Path, cfg: &ScenarioConfig) -> Result<Vec<std::path::PathBuf>, ScenarioError> {
    let mut written = Vec::new();
    for name in suite_names() {
        let path = dir.join(format!("{name}.json"));
        emit_report(&run_suite(name, cfg)?, &path)?;
        written.push(path);
    }
    let path = dir.join("index-check.json");
    emit_report(&index_check(cfg)?, &path)?;
    written.push(path);
    Ok(written)
}
