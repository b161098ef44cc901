//! Named verification suites: each runs one family of identities over
//! exhaustive small inputs and seeded random ones, and reports per-check
//! pass/fail with counterexamples.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dual_module::{quotient_structure, Ambient, Submodule, SubmoduleJson};
use crate::enumerate;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::hecke::{curve_lagrangian, hecke_curve, hecke_orthogonal, hecke_type, w2_parity, CurveSample, SplitOrthogonalBundle};
use crate::low_rank::{grid, verify_low_rank, LowRankCase};
use crate::matrix::ExactMatrix;
use crate::quad_space::{ExtendedForm, QuadraticSpace};
use crate::sample;
use crate::strata::{
    all_lagrangians, brute_force_flag_counts, brute_force_lagrangian_counts, census, flag_census,
    orth_iota, orth_project, plain_iota, plain_project, skew_from_lagrangian,
    stratum_data, submodule_from_flag, OrthModelPoint, PlainModelPoint, SkewDatum,
};
use crate::tangent::{duality_check, expected_skew_dim, expected_tangent_dim, skew_tangent_dim, tangent_dim};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    TorsionSymmetry,
    FlagStrata,
    TorsionDegree,
    PlainModel,
    PlainTangent,
    SkewBijection,
    LagrangianCensus,
    OrthogonalModel,
    SkewTangent,
    Certificate,
    StiefelWhitney,
    Reciprocity,
    HeckeCurve,
    RankCases,
    Duality,
}

/// Command-line names, in run order for `all`.
const NAMES: [(&str, Suite); 16] = [
    ("all", Suite::All),
    ("lemma2_1", Suite::TorsionSymmetry),
    ("prop2_2", Suite::FlagStrata),
    ("prop2_5", Suite::TorsionDegree),
    ("prop2_6", Suite::PlainModel),
    ("prop2_7", Suite::PlainTangent),
    ("prop3_3", Suite::SkewBijection),
    ("prop3_4", Suite::LagrangianCensus),
    ("prop3_5", Suite::OrthogonalModel),
    ("prop3_6", Suite::SkewTangent),
    ("thm1_1", Suite::Certificate),
    ("prop4_2", Suite::StiefelWhitney),
    ("reciprocity", Suite::Reciprocity),
    ("hecke_curve", Suite::HeckeCurve),
    ("rank_cases", Suite::RankCases),
    ("duality", Suite::Duality),
];

impl Suite {
    pub fn name(&self) -> &'static str {
        NAMES.iter().find(|(_, s)| s == self).expect("every suite is named").0
    }

    pub fn names() -> impl Iterator<Item = &'static str> {
        NAMES.iter().map(|(n, _)| *n)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, suite)| *suite)
            .ok_or_else(|| {
                let known: Vec<&str> = Suite::names().collect();
                Error::Parse(format!("unknown suite {s:?}; expected one of {}", known.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Number of seeded random instances per randomized check.
    pub trials: usize,
    pub seed: u64,
    /// Field of the exhaustive parts.
    pub field: FieldSpec,
    /// Rank cap for random instances.
    pub max_rank: usize,
    /// Degree cap for random bundles.
    pub max_degree: i64,
}

impl SuiteConfig {
    pub fn new(suite: Suite, trials: usize, seed: u64) -> Self {
        Self {
            suite,
            trials,
            seed,
            field: FieldSpec::prime(3).expect("3 is prime"),
            max_rank: 6,
            max_degree: 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::OutOfRange("trials must be at least 1".into()));
        }
        if self.field.order().is_none() {
            return Err(Error::InvalidField("exhaustive checks need a prime field".into()));
        }
        if self.max_rank == 0 || self.max_rank > 8 {
            return Err(Error::OutOfRange(format!("max rank {} outside 1..=8", self.max_rank)));
        }
        if self.max_degree < 0 {
            return Err(Error::OutOfRange("max degree must be nonnegative".into()));
        }
        Ok(())
    }

    /// Exhaustive rank for plain submodules.
    fn plain_rank(&self) -> usize {
        self.max_rank.min(3)
    }

    /// Exhaustive rank for Lagrangians.
    fn lagrangian_rank(&self) -> usize {
        self.max_rank.min(4)
    }

    /// Degree cap of the exhaustive bundle grid.
    fn grid_degree(&self) -> i64 {
        self.max_degree.min(2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub instance: Value,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub instances: usize,
    pub failed: usize,
    /// The first few failures, each enough to rebuild the instance.
    pub counterexamples: Vec<Counterexample>,
}

const KEPT_COUNTEREXAMPLES: usize = 3;

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.instances > 0
    }

    fn from_outcomes(name: &str, outcomes: Vec<Option<Counterexample>>) -> Self {
        let instances = outcomes.len();
        let failures: Vec<Counterexample> = outcomes.into_iter().flatten().collect();
        Self {
            name: name.into(),
            instances,
            failed: failures.len(),
            counterexamples: failures.into_iter().take(KEPT_COUNTEREXAMPLES).collect(),
        }
    }

    fn single(name: &str, ok: bool, instance: Value, detail: String) -> Self {
        Self::from_outcomes(name, vec![(!ok).then_some(Counterexample { instance, detail })])
    }
}

/// Runs `check` on every item in parallel, keeping item order.
fn check_all<T: Sync>(name: &str, items: &[T], check: impl Fn(&T) -> std::result::Result<(), Counterexample> + Sync) -> CheckResult {
    let outcomes = items.par_iter().map(|x| check(x).err()).collect();
    CheckResult::from_outcomes(name, outcomes)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckResult>,
    pub total_instances: usize,
    pub failed_checks: usize,
    pub passed: bool,
}

fn submodule_json(l: &Submodule) -> Value {
    serde_json::to_value(SubmoduleJson::from_submodule(l)).expect("serializable")
}

fn fail(instance: Value, detail: impl Into<String>) -> Counterexample {
    Counterexample { instance, detail: detail.into() }
}

fn ensure(ok: bool, instance: impl FnOnce() -> Value, detail: impl FnOnce() -> String) -> std::result::Result<(), Counterexample> {
    if ok {
        Ok(())
    } else {
        Err(fail(instance(), detail()))
    }
}

// ---- instance generators ----

/// All `ε`-stable submodules of `W` for `r ≤ max_r` over a prime field.
pub fn exhaustive_submodules(field: FieldSpec, max_r: usize) -> Result<Vec<Submodule>> {
    let mut out = Vec::new();
    for r in 1..=max_r {
        let amb = Ambient::new(r, field);
        for n in 0..=2 * r {
            enumerate::for_each_subspace(field, 2 * r, n, |b| {
                if crate::dual_module::is_eps_stable(&amb, b) {
                    out.push(Submodule::new(amb, b).expect("stable"));
                }
            })?;
        }
    }
    Ok(out)
}

/// Seeded random submodules over `Q` and `F₅`, alternating between flag
/// sampling and spans of random generators.
pub fn random_submodules(cfg: &SuiteConfig, stream_base: u64, max_r: usize) -> Vec<Submodule> {
    let fields = [FieldSpec::rationals(), FieldSpec::prime(5).expect("prime")];
    (0..cfg.trials)
        .map(|t| {
            let mut rng = sample::rng(cfg.seed, stream_base + t as u64);
            let field = fields[t % 2];
            let r = 1 + t % max_r;
            let amb = Ambient::new(r, field);
            if t % 4 < 2 {
                let n = rand::Rng::gen_range(&mut rng, 0..=2 * r);
                sample::flag_submodule(&mut rng, amb, n).1
            } else {
                sample::spanned_submodule(&mut rng, amb)
            }
        })
        .collect()
}

/// A Lagrangian together with its ambient form.
#[derive(Debug, Clone)]
pub struct LagrangianInstance {
    pub form: ExtendedForm,
    pub lagrangian: Submodule,
    pub skew: SkewDatum,
}

/// All Lagrangians of the split form for `r ≤ max_r` over a prime field.
pub fn exhaustive_lagrangians(field: FieldSpec, max_r: usize) -> Result<Vec<LagrangianInstance>> {
    let mut out = Vec::new();
    for r in 1..=max_r {
        let ef = QuadraticSpace::hyperbolic(r, field).extend();
        for (skew, lagrangian) in all_lagrangians(&ef)? {
            out.push(LagrangianInstance { form: ef.clone(), lagrangian, skew });
        }
    }
    Ok(out)
}

/// A bundle with a Lagrangian in its fiber.
#[derive(Debug, Clone)]
pub struct HeckeInstance {
    pub bundle: SplitOrthogonalBundle,
    pub lagrangian: Submodule,
}

impl HeckeInstance {
    pub fn to_json(&self) -> Value {
        json!({
            "field": self.bundle.field().to_string(),
            "degrees": self.bundle.degrees(),
            "lagrangian": submodule_json(&self.lagrangian),
        })
    }
}

/// `(d, [0], −d reversed)` for every `d ∈ [−bound, bound]^{⌊r/2⌋}`.
pub fn symmetric_degree_grid(r: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut halves: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..r / 2 {
        halves = halves
            .into_iter()
            .flat_map(|h| {
                (-bound..=bound).map(move |d| {
                    let mut h = h.clone();
                    h.push(d);
                    h
                })
            })
            .collect();
    }
    halves
        .into_iter()
        .map(|h| {
            let mut out = h.clone();
            if r % 2 == 1 {
                out.push(0);
            }
            out.extend(h.iter().rev().map(|d| -d));
            out
        })
        .collect()
}

/// Every Lagrangian of `F_p` for `r ≤ max_r` paired with every hyperbolic
/// degree vector bounded by `bound`.
pub fn exhaustive_hecke(field: FieldSpec, max_r: usize, bound: i64) -> Result<Vec<HeckeInstance>> {
    let mut out = Vec::new();
    for r in 1..=max_r {
        let ef = QuadraticSpace::hyperbolic(r, field).extend();
        let ls = all_lagrangians(&ef)?;
        for degrees in symmetric_degree_grid(r, bound) {
            let bundle = SplitOrthogonalBundle::hyperbolic(degrees, field)?;
            for (_, l) in &ls {
                out.push(HeckeInstance { bundle: bundle.clone(), lagrangian: l.clone() });
            }
        }
    }
    Ok(out)
}

/// Seeded random instances over `Q` with `r ≤ max_r` and `|degrees| ≤ max_degree`.
pub fn random_hecke(trials: usize, seed: u64, stream_base: u64, max_r: usize, max_degree: i64) -> Vec<HeckeInstance> {
    let q = FieldSpec::rationals();
    (0..trials)
        .map(|t| {
            let mut rng = sample::rng(seed, stream_base + t as u64);
            let r = 1 + t % max_r;
            let degrees = sample::symmetric_degrees(&mut rng, r, max_degree);
            let bundle = SplitOrthogonalBundle::hyperbolic(degrees, q).expect("paired degrees");
            let (_, ef) = bundle.fiber_module();
            let i = rand::Rng::gen_range(&mut rng, 0..=r / 2);
            let (_, lagrangian) = sample::lagrangian(&mut rng, &ef, i);
            HeckeInstance { bundle, lagrangian }
        })
        .collect()
}

// stream offsets keep the random families of different suites independent
const STREAM_SUBMODULES: u64 = 0;
const STREAM_HECKE: u64 = 1 << 20;
const STREAM_CURVE: u64 = 2 << 20;
const STREAM_MODELS: u64 = 3 << 20;
const STREAM_RANK_CASES: u64 = 4 << 20;

fn config_error(e: Error) -> CheckResult {
    CheckResult::single("setup", false, Value::Null, e.to_string())
}

/// Wraps the checks of a suite so that setup errors become failed checks.
fn run_checks(build: impl FnOnce() -> Result<Vec<CheckResult>>) -> Vec<CheckResult> {
    build().unwrap_or_else(|e| vec![config_error(e)])
}

// ---- plain submodules ----

fn plain_instances(cfg: &SuiteConfig) -> Result<Vec<Submodule>> {
    let mut all = exhaustive_submodules(cfg.field, cfg.plain_rank())?;
    all.extend(random_submodules(cfg, STREAM_SUBMODULES, cfg.max_rank.min(5)));
    Ok(all)
}

fn torsion_symmetry(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let ls = plain_instances(cfg)?;
        Ok(vec![check_all("torsion of L equals torsion of W/L", &ls, |l| {
            let a = l.structure().torsion_degree;
            let b = quotient_structure(l).torsion_degree;
            ensure(a == b, || submodule_json(l), || format!("{a} != {b}"))
        })])
    })
}

fn flag_strata(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let ls = plain_instances(cfg)?;
        let mut checks = vec![check_all("flag data rebuild the submodule", &ls, |l| {
            let rep = stratum_data(l, None);
            let rebuilt = submodule_from_flag(*l.ambient(), &rep.flag).map_err(|e| fail(submodule_json(l), e.to_string()))?;
            ensure(rebuilt == *l && rep.flag.f.cols() == rep.i, || submodule_json(l), || "flag roundtrip differs".into())
        })];
        let p = cfg.field.order().expect("validated");
        for (r, n) in [(3usize, 3usize), (4, 4)] {
            if r > cfg.lagrangian_rank() {
                continue;
            }
            let amb = Ambient::new(r, cfg.field);
            let counts = flag_census(amb, n)?;
            let ok = counts.iter().all(|c| c.count == c.predicted);
            checks.push(CheckResult::single(
                &format!("stratum counts r={r} n={n}"),
                ok,
                json!({"r": r, "n": n, "p": p}),
                format!("{counts:?}"),
            ));
        }
        if cfg.plain_rank() >= 3 {
            let amb = Ambient::new(3, cfg.field);
            let brute = brute_force_flag_counts(amb, 3)?;
            let constructive = flag_census(amb, 3)?;
            let ok = constructive.iter().all(|c| brute.get(&c.i).copied().unwrap_or(0) == c.count)
                && brute.values().sum::<u128>() == constructive.iter().map(|c| c.count).sum::<u128>();
            checks.push(CheckResult::single(
                "brute-force stratum counts r=3 n=3",
                ok,
                json!({"r": 3, "n": 3, "p": p}),
                format!("{brute:?}"),
            ));
        }
        Ok(checks)
    })
}

fn torsion_degree(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let ls = plain_instances(cfg)?;
        Ok(vec![check_all("torsion degree is n - 2i", &ls, |l| {
            let rep = stratum_data(l, None);
            ensure(
                rep.torsion_degree + 2 * rep.i == rep.n,
                || submodule_json(l),
                || format!("torsion {} with n = {}, i = {}", rep.torsion_degree, rep.n, rep.i),
            )
        })])
    })
}

fn plain_model(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let ls = plain_instances(cfg)?;
        let roundtrip = check_all("p after iota is the identity", &ls, |l| {
            let rep = stratum_data(l, None);
            let back = plain_iota(&rep.flag).and_then(|pt| plain_project(*l.ambient(), &pt));
            ensure(back.as_ref() == Ok(l), || submodule_json(l), || format!("{back:?}"))
        });
        // every model point: G and an l-dimensional subspace of G ⊕ ε(V/G)
        let mut points = Vec::new();
        for r in 1..=cfg.plain_rank() {
            let amb = Ambient::new(r, cfg.field);
            for k in 0..=r {
                for g in enumerate::subspaces(cfg.field, r, k)? {
                    for l in 0..=r {
                        for tilde in enumerate::subspaces(cfg.field, r, l)? {
                            points.push((amb, PlainModelPoint { g: g.clone(), tilde }));
                        }
                    }
                }
            }
        }
        let image = check_all("image of p lies in the closed stratum", &points, |(amb, pt)| {
            let instance = || json!({"r": amb.r(), "g": pt.g.rows_as_strings(), "tilde": pt.tilde.rows_as_strings()});
            let l = plain_project(*amb, pt).map_err(|e| fail(instance(), e.to_string()))?;
            let k = pt.g.cols();
            let dim = pt.tilde.cols();
            let i = l.projection().cols();
            ensure(l.dim() == k + dim && i <= dim, instance, || format!("dim {} with i = {i}", l.dim()))
        });
        Ok(vec![roundtrip, image])
    })
}

fn plain_tangent(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let ls = plain_instances(cfg)?;
        Ok(vec![check_all("dim Hom0(L, W/L) matches the stratum dimension", &ls, |l| {
            let rep = tangent_dim(l);
            let i = l.projection().cols();
            let expected = expected_tangent_dim(l.r(), l.dim(), i);
            ensure(rep.dim_hom0 == expected, || submodule_json(l), || format!("{} != {expected}", rep.dim_hom0))
        })])
    })
}

// ---- Lagrangians ----

fn lagrangian_json(x: &LagrangianInstance) -> Value {
    json!({"r": x.form.r(), "field": x.form.field().to_string(), "lagrangian": submodule_json(&x.lagrangian)})
}

fn skew_bijection(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let xs = exhaustive_lagrangians(cfg.field, cfg.lagrangian_rank())?;
        let forward = check_all("skew data recovered from the Lagrangian", &xs, |x| {
            let back = skew_from_lagrangian(&x.form, &x.lagrangian);
            ensure(back.as_ref() == Ok(&x.skew), || lagrangian_json(x), || format!("{back:?}"))
        });
        let mut checks = vec![forward];
        for r in 1..=cfg.lagrangian_rank() {
            let ef = QuadraticSpace::hyperbolic(r, cfg.field).extend();
            let built: Vec<&LagrangianInstance> = xs.iter().filter(|x| x.form.r() == r).collect();
            let distinct: std::collections::HashSet<&ExactMatrix> = built.iter().map(|x| x.lagrangian.basis()).collect();
            checks.push(CheckResult::single(
                &format!("distinct skew data give distinct Lagrangians r={r}"),
                distinct.len() == built.len(),
                json!({"r": r}),
                format!("{} data, {} Lagrangians", built.len(), distinct.len()),
            ));
            if r <= 3 {
                // every Lagrangian found by brute force is hit by its skew data
                let brute = brute_force_lagrangian_counts(&ef)?;
                checks.push(CheckResult::single(
                    &format!("brute-force Lagrangian total r={r}"),
                    brute.iter().sum::<u128>() == built.len() as u128,
                    json!({"r": r}),
                    format!("brute force {brute:?}, constructed {}", built.len()),
                ));
            }
        }
        Ok(checks)
    })
}

fn lagrangian_census(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let p = cfg.field.order().expect("validated");
        let mut checks = Vec::new();
        for r in 1..=cfg.lagrangian_rank() {
            let ef = QuadraticSpace::hyperbolic(r, cfg.field).extend();
            let c = census(&ef, r <= 3)?;
            let counts_ok = c.strata.iter().all(|s| s.count == s.predicted);
            let brute_ok = c
                .brute_force_strata
                .as_ref()
                .is_none_or(|b| b.iter().zip(&c.strata).all(|(x, s)| *x == s.count));
            checks.push(CheckResult::single(
                &format!("Lagrangian census r={r}"),
                counts_ok && brute_ok,
                json!({"r": r, "p": p}),
                serde_json::to_string(&c).expect("serializable"),
            ));
        }
        if cfg.lagrangian_rank() >= 4 {
            let space = QuadraticSpace::hyperbolic(4, cfg.field);
            let mut planes = 0u128;
            enumerate::for_each_subspace(cfg.field, 4, 2, |b| {
                if space.is_isotropic(b).expect("dimensions") {
                    planes += 1;
                }
            })?;
            let expected = space.isotropic_count(2)?;
            checks.push(CheckResult::single(
                "brute-force isotropic planes r=4",
                planes == expected,
                json!({"r": 4, "p": p}),
                format!("{planes} != {expected}"),
            ));
        }
        let xs = exhaustive_lagrangians(cfg.field, cfg.lagrangian_rank())?;
        checks.push(check_all("component index is the stratum parity", &xs, |x| {
            let i = x.lagrangian.projection().cols();
            let m = x.form.component_index(&x.lagrangian);
            ensure(m == Ok((i % 2) as u8), || lagrangian_json(x), || format!("{m:?} at i = {i}"))
        }));
        Ok(checks)
    })
}

fn orthogonal_model(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let xs = exhaustive_lagrangians(cfg.field, cfg.lagrangian_rank())?;
        let roundtrip = check_all("p after iota is the identity", &xs, |x| {
            let back = orth_iota(&x.form, &x.skew).and_then(|pt| orth_project(&x.form, &pt));
            ensure(back.as_ref() == Ok(&x.lagrangian), || lagrangian_json(x), || format!("{back:?}"))
        });
        let mut points = Vec::new();
        for r in 1..=cfg.lagrangian_rank() {
            let ef = QuadraticSpace::hyperbolic(r, cfg.field).extend();
            for l in 0..=r / 2 {
                let tildes: Vec<ExactMatrix> = enumerate::subspaces(cfg.field, 2 * l, l)?;
                for f in ef.space().enumerate_isotropic(l)? {
                    for tilde in &tildes {
                        let pt = OrthModelPoint { f: f.clone(), tilde: tilde.clone() };
                        if pt.is_isotropic() {
                            points.push((ef.clone(), pt));
                        }
                    }
                }
            }
        }
        // random points over Q: graphs of skew forms moved to the other family
        // by swapping one coordinate with its dual
        for t in 0..cfg.trials {
            let mut rng = sample::rng(cfg.seed, STREAM_MODELS + t as u64);
            let r = 2 + t % (cfg.max_rank.max(2) - 1);
            let ef = QuadraticSpace::hyperbolic(r, FieldSpec::rationals()).extend();
            let l = 1 + rand::Rng::gen_range(&mut rng, 0..r / 2);
            let f = sample::isotropic(&mut rng, ef.space(), l);
            let omega = sample::skew(&mut rng, ef.field(), l);
            let mut pt = orth_iota(&ef, &SkewDatum { f, omega })?;
            if t % 2 == 1 {
                let mut swap = ExactMatrix::identity(ef.field(), 2 * l);
                let one = ef.field().one();
                let zero = ef.field().zero();
                swap.set(0, 0, zero.clone());
                swap.set(l, l, zero);
                swap.set(0, l, one.clone());
                swap.set(l, 0, one);
                pt.tilde = swap.mul(&pt.tilde)?.column_span();
            }
            points.push((ef, pt));
        }
        let image = check_all("image of p lies in the parity-correct closed stratum", &points, |(ef, pt)| {
            let instance = || json!({"r": ef.r(), "field": ef.field().to_string(), "f": pt.f.rows_as_strings(), "tilde": pt.tilde.rows_as_strings()});
            let l = orth_project(ef, pt).map_err(|e| fail(instance(), e.to_string()))?;
            let dim = pt.f.cols();
            let i = l.projection().cols();
            let ok = ef.is_lagrangian(&l) && i <= dim && (dim - i) % 2 == pt.family();
            ensure(ok, instance, || format!("i = {i}, l = {dim}, family {}", pt.family()))
        });
        Ok(vec![roundtrip, image])
    })
}

fn is_largest(l: &Submodule) -> bool {
    l.projection().cols() + 1 >= l.r() / 2
}

/// Lagrangians in the largest strata: exhaustive ones plus random ones over `Q`.
fn largest_stratum_lagrangians(cfg: &SuiteConfig) -> Result<Vec<LagrangianInstance>> {
    let mut xs: Vec<LagrangianInstance> = exhaustive_lagrangians(cfg.field, cfg.lagrangian_rank())?
        .into_iter()
        .filter(|x| is_largest(&x.lagrangian))
        .collect();
    for h in random_hecke(cfg.trials, cfg.seed, STREAM_HECKE, cfg.max_rank, cfg.max_degree) {
        if is_largest(&h.lagrangian) {
            let (_, form) = h.bundle.fiber_module();
            let skew = skew_from_lagrangian(&form, &h.lagrangian)?;
            xs.push(LagrangianInstance { form, lagrangian: h.lagrangian, skew });
        }
    }
    Ok(xs)
}

fn skew_tangent(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let xs = largest_stratum_lagrangians(cfg)?;
        let dims = check_all("skew tangent dimension is i(r-i-1)", &xs, |x| {
            let rep = skew_tangent_dim(&x.form, &x.lagrangian).map_err(|e| fail(lagrangian_json(x), e.to_string()))?;
            ensure(rep.skew_dim == Some(rep.expected_dim), || lagrangian_json(x), || format!("{rep:?}"))
        });
        // closed forms for the top strata: k(k-1) for r = 2k; k², k²-1 for r = 2k+1
        let table_ok = (4..=6usize).all(|r| {
            let k = r / 2;
            if r % 2 == 0 {
                expected_skew_dim(r, k) == k * (k - 1)
            } else {
                expected_skew_dim(r, k) == k * k && expected_skew_dim(r, k - 1) == k * k - 1
            }
        });
        let table = CheckResult::single("closed-form top stratum dimensions r=4..6", table_ok, Value::Null, String::new());
        Ok(vec![dims, table])
    })
}

fn duality(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let xs = largest_stratum_lagrangians(cfg)?;
        Ok(vec![check_all("skew dimensions of L and W/L agree under a perfect pairing", &xs, |x| {
            let rep = duality_check(&x.form, &x.lagrangian).map_err(|e| fail(lagrangian_json(x), e.to_string()))?;
            let ok = rep.skew_dim == rep.dual_skew_dim && rep.pairing_rank == rep.skew_dim;
            ensure(ok, || lagrangian_json(x), || format!("{rep:?}"))
        })])
    })
}

// ---- Hecke transforms ----

fn hecke_instances(cfg: &SuiteConfig) -> Result<Vec<HeckeInstance>> {
    let mut xs = exhaustive_hecke(cfg.field, cfg.lagrangian_rank(), cfg.grid_degree())?;
    xs.extend(random_hecke(cfg.trials, cfg.seed, STREAM_HECKE, cfg.max_rank, cfg.max_degree));
    Ok(xs)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum HeckeCheck {
    Certificate,
    TwoStep,
    Reciprocity,
    StiefelWhitney,
}

fn hecke_suite(cfg: &SuiteConfig, which: &[HeckeCheck]) -> Vec<CheckResult> {
    run_checks(|| {
        let xs = hecke_instances(cfg)?;
        let reports: Vec<_> = xs.par_iter().map(|x| hecke_orthogonal(&x.bundle, &x.lagrangian)).collect();
        let pairs: Vec<_> = xs.iter().zip(&reports).collect();
        let mut checks = Vec::new();
        for w in which {
            let (name, test): (&str, fn(&HeckeInstance, &crate::hecke::HeckeReport) -> Option<String>) = match w {
                HeckeCheck::Certificate => ("transformed form is regular and nondegenerate with degree sum 0", |_, rep| {
                    let sum: i64 = rep.output_type.iter().sum();
                    (rep.gram_det_at_x.is_zero() || sum != 0).then(|| format!("det {} sum {sum}", rep.gram_det_at_x))
                }),
                HeckeCheck::TwoStep => ("two elementary steps give the same type", |_, rep| {
                    (rep.two_step_type != rep.output_type).then(|| format!("{:?} vs {:?}", rep.two_step_type, rep.output_type))
                }),
                HeckeCheck::Reciprocity => ("transforming back recovers the bundle", |_, rep| {
                    (!rep.reciprocity_ok).then(|| "reciprocity failed".to_string())
                }),
                HeckeCheck::StiefelWhitney => ("w2 changes by the stratum parity", |x, rep| {
                    let expected = (w2_parity(x.bundle.degrees()) as usize + rep.stratum_i) % 2;
                    (rep.w2_out as usize != expected).then(|| format!("w2 {} -> {}", rep.w2_in, rep.w2_out))
                }),
            };
            let outcomes = pairs
                .iter()
                .map(|(x, rep)| match rep {
                    Err(e) => Some(fail(x.to_json(), e.to_string())),
                    Ok(rep) => test(x, rep).map(|d| fail(x.to_json(), d)),
                })
                .collect();
            checks.push(CheckResult::from_outcomes(name, outcomes));
        }
        Ok(checks)
    })
}

fn curve_suite(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let q = FieldSpec::rationals();
        let finite: Vec<CurveSample> = (0..=3).map(|c| CurveSample::Finite(q.int(c))).collect();
        let mut samples = vec![CurveSample::Infinity];
        samples.extend(finite);
        let instances: Vec<(SplitOrthogonalBundle, ExactMatrix)> = (0..cfg.trials)
            .map(|t| {
                let mut rng = sample::rng(cfg.seed, STREAM_CURVE + t as u64);
                let degrees = sample::symmetric_degrees(&mut rng, 4, cfg.max_degree);
                let e = SplitOrthogonalBundle::hyperbolic(degrees, q).expect("paired degrees");
                let f = sample::isotropic(&mut rng, &QuadraticSpace::hyperbolic(4, q), 2);
                (e, f)
            })
            .collect();
        let check = check_all("curve: infinity gives the bundle, finite samples certified", &instances, |(e, f)| {
            let instance = || json!({"degrees": e.degrees(), "plane": f.rows_as_strings()});
            let types = hecke_curve(e, f, &samples).map_err(|err| fail(instance(), err.to_string()))?;
            let (_, ef) = e.fiber_module();
            let at_zero = curve_lagrangian(&ef, f, &samples[1])
                .and_then(|l| hecke_type(e, &l))
                .map_err(|err| fail(instance(), err.to_string()))?;
            let ok = types[0] == e.splitting_type() && types[1] == at_zero && types.len() > 3;
            ensure(ok, instance, || format!("{types:?}"))
        });
        Ok(vec![check])
    })
}

fn rank_cases(cfg: &SuiteConfig) -> Vec<CheckResult> {
    run_checks(|| {
        let bound = cfg.grid_degree();
        let mut checks = Vec::new();
        for case in LowRankCase::ALL {
            let params = grid(case, cfg.field, bound, cfg.trials.clamp(1, 10), cfg.seed ^ STREAM_RANK_CASES)?;
            checks.push(check_all(&format!("generic and structured types agree: {}", case.name()), &params, |p| {
                let instance = || json!({"field": cfg.field.to_string(), "case": p.describe()});
                let rep = verify_low_rank(cfg.field, p).map_err(|e| fail(instance(), e.to_string()))?;
                ensure(rep.agrees(), instance, || format!("{:?} vs {:?}", rep.generic_type, rep.structured_type))
            }));
        }
        Ok(checks)
    })
}

fn suite_checks(cfg: &SuiteConfig, suite: Suite) -> Vec<CheckResult> {
    match suite {
        Suite::All => NAMES[1..].iter().flat_map(|(_, s)| suite_checks(cfg, *s)).collect(),
        Suite::TorsionSymmetry => torsion_symmetry(cfg),
        Suite::FlagStrata => flag_strata(cfg),
        Suite::TorsionDegree => torsion_degree(cfg),
        Suite::PlainModel => plain_model(cfg),
        Suite::PlainTangent => plain_tangent(cfg),
        Suite::SkewBijection => skew_bijection(cfg),
        Suite::LagrangianCensus => lagrangian_census(cfg),
        Suite::OrthogonalModel => orthogonal_model(cfg),
        Suite::SkewTangent => skew_tangent(cfg),
        Suite::Certificate => hecke_suite(cfg, &[HeckeCheck::Certificate, HeckeCheck::TwoStep]),
        Suite::StiefelWhitney => hecke_suite(cfg, &[HeckeCheck::StiefelWhitney]),
        Suite::Reciprocity => hecke_suite(cfg, &[HeckeCheck::Reciprocity]),
        Suite::HeckeCurve => curve_suite(cfg),
        Suite::RankCases => rank_cases(cfg),
        Suite::Duality => duality(cfg),
    }
}

/// Runs a suite. Identical configurations give identical reports.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let checks = suite_checks(cfg, cfg.suite);
    let failed_checks = checks.iter().filter(|c| !c.passed()).count();
    Ok(SuiteReport {
        suite: cfg.suite.name().into(),
        seed: cfg.seed,
        trials: cfg.trials,
        total_instances: checks.iter().map(|c| c.instances).sum(),
        failed_checks,
        passed: failed_checks == 0,
        checks,
    })
}
