//! Bundles of rank 2, 3, 4 and 6 built from smaller split bundles (line
//! bundles, `End₀`, `Hom`, `Λ²`), whose orthogonal Hecke transforms can be
//! predicted from plain transforms of the building blocks.

use serde::Serialize;

use crate::dual_module::{Ambient, Submodule};
use crate::enumerate::vectors;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::hecke::{hecke_orthogonal, hecke_plain, sorted, SplitOrthogonalBundle};
use crate::matrix::{ExactMatrix, Quotient};
use crate::quad_space::ExtendedForm;
use crate::sample;
use crate::strata::{lagrangian_from_skew, submodule_from_flag, FlagDatum, SkewDatum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowRankCase {
    Rank2,
    Rank3,
    Rank4I1,
    Rank4I2,
    Rank6I1,
    Rank6I2,
    Rank6I3_0,
    Rank6I3_1,
}

impl LowRankCase {
    pub const ALL: [LowRankCase; 8] = [
        LowRankCase::Rank2,
        LowRankCase::Rank3,
        LowRankCase::Rank4I1,
        LowRankCase::Rank4I2,
        LowRankCase::Rank6I1,
        LowRankCase::Rank6I2,
        LowRankCase::Rank6I3_0,
        LowRankCase::Rank6I3_1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LowRankCase::Rank2 => "rank2",
            LowRankCase::Rank3 => "rank3",
            LowRankCase::Rank4I1 => "rank4_i1",
            LowRankCase::Rank4I2 => "rank4_i2",
            LowRankCase::Rank6I1 => "rank6_i1",
            LowRankCase::Rank6I2 => "rank6_i2",
            LowRankCase::Rank6I3_0 => "rank6_i3_0",
            LowRankCase::Rank6I3_1 => "rank6_i3_1",
        }
    }
}

/// Which kind of isotropic plane of `Hom(F_x, G_x)` a rank-4 case uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneFamily {
    /// Maps with image in a line of `G_x`.
    Image,
    /// Maps vanishing on a line of `F_x`.
    Kernel,
}

/// Data for `Λ²F` with `F` of rank 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WedgeData {
    /// A plane `K ⊂ F_x`.
    Plane { k: ExactMatrix },
    /// A vector `w` inside a hyperplane `W`, and `v₀` (taken modulo `W`).
    Flag { w: ExactMatrix, hyperplane: ExactMatrix, v0: ExactMatrix },
    /// A hyperplane `W` and `ψ: W → F_x/W` as a `1 × 3` matrix.
    Hyperplane { hyperplane: ExactMatrix, psi: ExactMatrix },
    /// A vector `w` and `v₀` (taken modulo `w`).
    Line { w: ExactMatrix, v0: ExactMatrix },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseParams {
    /// `O(d) ⊕ O(−d)`; `first` selects the Lagrangian `K[ε]e₁` over `K[ε]e₂`.
    Rank2 { d: i64, first: bool },
    /// `End₀(F)` with a nilpotent `φ ∈ End₀(F_x)`.
    Rank3 { f: [i64; 2], phi: ExactMatrix },
    /// `Hom(F, G)` with a rank-one `φ`.
    Rank4Line { f: [i64; 2], g: [i64; 2], phi: ExactMatrix },
    /// `Hom(F, G)` with a plane family, a line `D` and the flag parameter `c`.
    Rank4Plane { f: [i64; 2], g: [i64; 2], family: PlaneFamily, line: ExactMatrix, c: Scalar },
    /// `Λ²F` (or `(Λ²F)(x)` when `deg F = −2`).
    Rank6 { f: [i64; 4], data: WedgeData },
}

impl CaseParams {
    pub fn case(&self) -> LowRankCase {
        match self {
            CaseParams::Rank2 { .. } => LowRankCase::Rank2,
            CaseParams::Rank3 { .. } => LowRankCase::Rank3,
            CaseParams::Rank4Line { .. } => LowRankCase::Rank4I1,
            CaseParams::Rank4Plane { .. } => LowRankCase::Rank4I2,
            CaseParams::Rank6 { data, .. } => match data {
                WedgeData::Plane { .. } => LowRankCase::Rank6I1,
                WedgeData::Flag { .. } => LowRankCase::Rank6I2,
                WedgeData::Hyperplane { .. } => LowRankCase::Rank6I3_0,
                WedgeData::Line { .. } => LowRankCase::Rank6I3_1,
            },
        }
    }

    /// One-line description sufficient to rebuild the instance.
    pub fn describe(&self) -> String {
        match self {
            CaseParams::Rank2 { d, first } => format!("rank2 d={d} first={first}"),
            CaseParams::Rank3 { f, phi } => format!("rank3 f={f:?} phi={:?}", phi.rows_as_strings()),
            CaseParams::Rank4Line { f, g, phi } => {
                format!("rank4_i1 f={f:?} g={g:?} phi={:?}", phi.rows_as_strings())
            }
            CaseParams::Rank4Plane { f, g, family, line, c } => format!(
                "rank4_i2 f={f:?} g={g:?} family={family:?} line={:?} c={c}",
                line.rows_as_strings()
            ),
            CaseParams::Rank6 { f, data } => {
                let parts: Vec<(&str, &ExactMatrix)> = match data {
                    WedgeData::Plane { k } => vec![("k", k)],
                    WedgeData::Flag { w, hyperplane, v0 } => vec![("w", w), ("W", hyperplane), ("v0", v0)],
                    WedgeData::Hyperplane { hyperplane, psi } => vec![("W", hyperplane), ("psi", psi)],
                    WedgeData::Line { w, v0 } => vec![("w", w), ("v0", v0)],
                };
                let body: Vec<String> = parts
                    .iter()
                    .map(|(name, m)| format!("{name}={:?}", m.rows_as_strings()))
                    .collect();
                format!("{} f={f:?} {}", self.case().name(), body.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowRankReport {
    pub case: LowRankCase,
    pub input_type: Vec<i64>,
    pub generic_type: Vec<i64>,
    pub structured_type: Vec<i64>,
    pub stratum_i: usize,
}

impl LowRankReport {
    pub fn agrees(&self) -> bool {
        self.generic_type == self.structured_type
    }
}

/// A structured bundle, a Lagrangian in its fiber, and the predicted type.
struct Construction {
    bundle: SplitOrthogonalBundle,
    lagrangian: Submodule,
    predicted: Vec<i64>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

fn require_shape(m: &ExactMatrix, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.rows() != rows || m.cols() != cols {
        return Err(malformed(format!("{what} must be {rows} x {cols}")));
    }
    Ok(())
}

fn require_rank(m: &ExactMatrix, rank: usize, what: &str) -> Result<()> {
    if m.rank() != rank {
        return Err(malformed(format!("{what} must have rank {rank}")));
    }
    Ok(())
}

/// `P = D ⊕ εK^n`: the elementary modification along a subspace `D`.
fn first_order(field: FieldSpec, d: &ExactMatrix) -> Result<Submodule> {
    let amb = Ambient::new(d.rows(), field);
    let zero = ExactMatrix::zeros(field, d.rows(), d.cols());
    let cols = amb.join(d, &zero)?.hcat(&amb.eps_embed(&ExactMatrix::identity(field, d.rows())))?;
    Submodule::new(amb, &cols)
}

fn single_lagrangian(ef: &ExtendedForm, v: ExactMatrix) -> Result<Submodule> {
    let field = ef.field();
    let s = SkewDatum::new(v, ExactMatrix::zeros(field, 1, 1))?;
    lagrangian_from_skew(ef, &s)
}

fn rank2(field: FieldSpec, d: i64, first: bool) -> Result<Construction> {
    let bundle = SplitOrthogonalBundle::hyperbolic(vec![d, -d], field)?;
    let (_, ef) = bundle.fiber_module();
    let k = if first { 0 } else { 1 };
    let mut e = ExactMatrix::zeros(field, 2, 1);
    e.set(k, 0, field.one());
    let lagrangian = single_lagrangian(&ef, e)?;
    // the line bundle spanned by e_k is kept, the other loses two orders
    let line = Ambient::new(1, field);
    let kept = hecke_plain(&[[d, -d][k]], &line.full())?;
    let cut = hecke_plain(&[[d, -d][1 - k]], &Submodule::new(line, &ExactMatrix::zeros(field, 2, 0))?)?;
    let predicted = sorted(&[kept[0] + 1, cut[0] + 1]);
    Ok(Construction { bundle, lagrangian, predicted })
}

/// Trace form on `End₀` in the basis `(e₁₂, h, e₂₁)`.
fn trace_gram(field: FieldSpec) -> ExactMatrix {
    ExactMatrix::from_ints(field, &[[0, 0, 1], [0, 2, 0], [1, 0, 0]])
}

fn rank3(field: FieldSpec, f: [i64; 2], phi: &ExactMatrix) -> Result<Construction> {
    let deg = f[0] + f[1];
    if deg != 0 && deg != 1 {
        return Err(malformed(format!("deg F = {deg}, expected 0 or 1")));
    }
    require_shape(phi, 2, 2, "phi")?;
    let a = phi.get(0, 0);
    if !(a + phi.get(1, 1)).is_zero() || phi.is_zero() || !phi.det()?.is_zero() {
        return Err(malformed("phi must be nonzero, traceless and nilpotent"));
    }
    let gap = f[0] - f[1];
    let bundle = SplitOrthogonalBundle::new(vec![gap, 0, -gap], trace_gram(field))?;
    let (_, ef) = bundle.fiber_module();
    let v = ExactMatrix::from_rows(field, vec![vec![phi.get(0, 1).clone()], vec![a.clone()], vec![phi.get(1, 0).clone()]])?;
    let lagrangian = single_lagrangian(&ef, v)?;
    let image = phi.column_span();
    let fp = hecke_plain(&f, &first_order(field, &image)?)?;
    let predicted = sorted(&[fp[0] - fp[1], 0, fp[1] - fp[0]]);
    Ok(Construction { bundle, lagrangian, predicted })
}

/// Determinant form on `Hom(F, G)`; coordinate `2j + i` is the entry sending
/// `e_i` to `e_j`.
fn det_gram(field: FieldSpec) -> ExactMatrix {
    ExactMatrix::from_ints(field, &[[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]])
}

fn hom_degrees(f: &[i64], g: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(f.len() * g.len());
    for gj in g {
        for fi in f {
            out.push(gj - fi);
        }
    }
    out
}

fn hom_bundle(field: FieldSpec, f: [i64; 2], g: [i64; 2]) -> Result<SplitOrthogonalBundle> {
    if f[0] + f[1] != g[0] + g[1] {
        return Err(malformed("det F and det G differ"));
    }
    SplitOrthogonalBundle::new(hom_degrees(&f, &g), det_gram(field))
}

fn rank4_line(field: FieldSpec, f: [i64; 2], g: [i64; 2], phi: &ExactMatrix) -> Result<Construction> {
    require_shape(phi, 2, 2, "phi")?;
    require_rank(phi, 1, "phi")?;
    let bundle = hom_bundle(field, f, g)?;
    let (_, ef) = bundle.fiber_module();
    let v = ExactMatrix::from_rows(field, phi.entries().iter().map(|x| vec![x.clone()]).collect())?;
    let lagrangian = single_lagrangian(&ef, v)?;
    let fp = hecke_plain(&f, &first_order(field, &phi.kernel_basis())?)?;
    let gp = hecke_plain(&g, &first_order(field, &phi.column_span())?)?;
    Ok(Construction { bundle, lagrangian, predicted: sorted(&hom_degrees(&fp, &gp)) })
}

/// `2 × 8` matrix sending the unknowns `(X₀, X₁)` to `X v`, where `X` is the
/// block starting at `offset`.
fn apply(field: FieldSpec, v: &ExactMatrix, offset: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(field, 2, 8);
    for j in 0..2 {
        for i in 0..2 {
            m.set(j, offset + 2 * j + i, v.get(i, 0).clone());
        }
    }
    m
}

fn rank4_plane(
    field: FieldSpec,
    f: [i64; 2],
    g: [i64; 2],
    family: PlaneFamily,
    line: &ExactMatrix,
    c: &Scalar,
) -> Result<Construction> {
    require_shape(line, 2, 1, "line")?;
    require_rank(line, 1, "line")?;
    let bundle = hom_bundle(field, f, g)?;
    let amb2 = Ambient::new(2, field);
    let d = line.column_span();
    let phi = ExactMatrix::from_rows(field, vec![vec![c.clone()]])?;
    let m = submodule_from_flag(amb2, &FlagDatum { f: d.clone(), g: d, phi })?;
    let zero = ExactMatrix::zeros(field, 2, 8);
    let mut blocks = Vec::new();
    match family {
        PlaneFamily::Image => {
            // (X₀e_i, X₁e_i) and (0, X₀e_i) lie in M
            let proj = Quotient::new(m.basis()).projection();
            for i in 0..2 {
                let mut e = ExactMatrix::zeros(field, 2, 1);
                e.set(i, 0, field.one());
                let jet = apply(field, &e, 0).vcat(&apply(field, &e, 4))?;
                let eps = zero.vcat(&apply(field, &e, 0))?;
                blocks.push(proj.mul(&jet)?);
                blocks.push(proj.mul(&eps)?);
            }
        }
        PlaneFamily::Kernel => {
            // X₀m₀ = 0 and X₀m₁ + X₁m₀ = 0 for every (m₀, m₁) in M
            for c in 0..m.dim() {
                let col = m.basis().select_columns(&[c]);
                let m0 = amb2.top(&col);
                let m1 = amb2.bottom(&col);
                blocks.push(apply(field, &m0, 0));
                blocks.push(apply(field, &m1, 0).add(&apply(field, &m0, 4))?);
            }
        }
    }
    let system = blocks
        .into_iter()
        .try_fold(ExactMatrix::zeros(field, 0, 8), |acc, b| acc.vcat(&b))?;
    let lagrangian = Submodule::new(Ambient::new(4, field), &system.kernel_basis())?;
    let predicted = match family {
        PlaneFamily::Image => {
            let gp: Vec<i64> = hecke_plain(&g, &m)?.iter().map(|x| x + 1).collect();
            hom_degrees(&f, &gp)
        }
        PlaneFamily::Kernel => {
            let fp: Vec<i64> = hecke_plain(&f, &m)?.iter().map(|x| x + 1).collect();
            hom_degrees(&fp, &g)
        }
    };
    Ok(Construction { bundle, lagrangian, predicted: sorted(&predicted) })
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Wedge pairing `Λ²K⁴ × Λ²K⁴ → Λ⁴K⁴` in the basis `e_i ∧ e_j`, `i < j`.
fn wedge_gram(field: FieldSpec) -> ExactMatrix {
    ExactMatrix::from_ints(
        field,
        &[
            [0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, -1, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 1, 0, 0, 0],
            [0, -1, 0, 0, 0, 0],
            [1, 0, 0, 0, 0, 0],
        ],
    )
}

fn wedge(field: FieldSpec, x: &ExactMatrix, y: &ExactMatrix) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(field, 6, 1);
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        let v = &(x.get(i, 0) * y.get(j, 0)) - &(x.get(j, 0) * y.get(i, 0));
        out.set(k, 0, v);
    }
    out
}

/// `π(P ∧ Q) ⊂ (Λ²F)_{2x}` for submodules `P, Q ⊂ F_{2x}`.
fn wedge_submodule(field: FieldSpec, p: &Submodule, q: &Submodule) -> Result<Submodule> {
    let amb4 = Ambient::new(4, field);
    let amb6 = Ambient::new(6, field);
    let mut cols = ExactMatrix::zeros(field, 12, 0);
    for s in 0..p.dim() {
        let x = p.basis().select_columns(&[s]);
        for t in 0..q.dim() {
            let y = q.basis().select_columns(&[t]);
            let (xa, xb, ya, yb) = (amb4.top(&x), amb4.bottom(&x), amb4.top(&y), amb4.bottom(&y));
            let top = wedge(field, &xa, &ya);
            let bottom = wedge(field, &xa, &yb).add(&wedge(field, &xb, &ya))?;
            cols = cols.hcat(&top.vcat(&bottom)?)?;
        }
    }
    Submodule::new(amb6, &cols)
}

fn rank6(field: FieldSpec, f: [i64; 4], data: &WedgeData) -> Result<Construction> {
    let deg: i64 = f.iter().sum();
    let twist = match deg {
        0 => 0,
        -2 => 1,
        _ => return Err(malformed(format!("deg F = {deg}, expected 0 or -2"))),
    };
    let amb4 = Ambient::new(4, field);
    let sub = |cols: ExactMatrix| Submodule::new(amb4, &cols);
    let (p, q, shift) = match data {
        WedgeData::Plane { k } => {
            require_shape(k, 4, 2, "k")?;
            require_rank(k, 2, "k")?;
            let p = first_order(field, k)?;
            (p.clone(), p, 1)
        }
        WedgeData::Flag { w, hyperplane, v0 } => {
            require_shape(w, 4, 1, "w")?;
            require_shape(hyperplane, 4, 3, "W")?;
            require_shape(v0, 4, 1, "v0")?;
            require_rank(hyperplane, 3, "W")?;
            require_rank(w, 1, "w")?;
            if !hyperplane.spans(w)? {
                return Err(malformed("w must lie in W"));
            }
            let p = sub(amb4.join(w, v0)?.hcat(&amb4.eps_embed(hyperplane))?)?;
            let q = first_order(field, hyperplane)?;
            (p, q, 2)
        }
        WedgeData::Hyperplane { hyperplane, psi } => {
            require_shape(hyperplane, 4, 3, "W")?;
            require_shape(psi, 1, 3, "psi")?;
            require_rank(hyperplane, 3, "W")?;
            let lift = Quotient::new(hyperplane).lift().mul(psi)?;
            let p = sub(amb4.join(hyperplane, &lift)?.hcat(&amb4.eps_embed(hyperplane))?)?;
            (p.clone(), p, 1)
        }
        WedgeData::Line { w, v0 } => {
            require_shape(w, 4, 1, "w")?;
            require_shape(v0, 4, 1, "v0")?;
            require_rank(w, 1, "w")?;
            let p = sub(amb4.join(w, v0)?.hcat(&amb4.eps_embed(w))?)?;
            (p, amb4.full(), 3)
        }
    };
    let gram = wedge_gram(field);
    let degrees: Vec<i64> = PAIRS.iter().map(|&(i, j)| f[i] + f[j] + twist).collect();
    let bundle = SplitOrthogonalBundle::new(degrees, gram)?;
    let lagrangian = wedge_submodule(field, &p, &q)?;
    let fp = hecke_plain(&f, &p)?;
    let predicted: Vec<i64> = PAIRS.iter().map(|&(i, j)| fp[i] + fp[j] + shift + twist).collect();
    Ok(Construction { bundle, lagrangian, predicted: sorted(&predicted) })
}

fn construct(field: FieldSpec, params: &CaseParams) -> Result<Construction> {
    match params {
        CaseParams::Rank2 { d, first } => rank2(field, *d, *first),
        CaseParams::Rank3 { f, phi } => rank3(field, *f, phi),
        CaseParams::Rank4Line { f, g, phi } => rank4_line(field, *f, *g, phi),
        CaseParams::Rank4Plane { f, g, family, line, c } => rank4_plane(field, *f, *g, *family, line, c),
        CaseParams::Rank6 { f, data } => rank6(field, *f, data),
    }
}

/// Runs the generic transform on the structured instance and the predicted
/// type from plain transforms of the building blocks.
pub fn verify_low_rank(field: FieldSpec, params: &CaseParams) -> Result<LowRankReport> {
    let c = construct(field, params)?;
    let (_, ef) = c.bundle.fiber_module();
    ef.require_lagrangian(&c.lagrangian)?;
    let report = hecke_orthogonal(&c.bundle, &c.lagrangian)?;
    Ok(LowRankReport {
        case: params.case(),
        input_type: report.input_type,
        generic_type: report.output_type,
        structured_type: c.predicted,
        stratum_i: report.stratum_i,
    })
}

/// Nonzero vectors of `F_p^n` whose first nonzero entry is 1.
fn projective_points(field: FieldSpec, n: usize) -> Result<Vec<ExactMatrix>> {
    Ok(vectors(field, n)?
        .into_iter()
        .filter(|v| (0..n).map(|i| v.get(i, 0)).find(|x| !x.is_zero()).is_some_and(|x| x.is_one()))
        .collect())
}

/// Descending tuples of length `n` in `[−bound, bound]` with sum in `sums`.
fn degree_tuples(n: usize, bound: i64, sums: &[i64]) -> Vec<Vec<i64>> {
    fn rec(n: usize, hi: i64, bound: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for d in (-bound..=hi).rev() {
            prefix.push(d);
            rec(n, d, bound, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, bound, bound, &mut Vec::new(), &mut out);
    out.retain(|t| sums.contains(&t.iter().sum()));
    out
}

fn pairs_with_equal_sum(bound: i64) -> Vec<([i64; 2], [i64; 2])> {
    let all = degree_tuples(2, bound, &(-2 * bound..=2 * bound).collect::<Vec<_>>());
    let mut out = Vec::new();
    for f in &all {
        for g in &all {
            if f[0] + f[1] == g[0] + g[1] {
                out.push(([f[0], f[1]], [g[0], g[1]]));
            }
        }
    }
    out
}

/// Samples case data for `Λ²F` at stratum `case` from `rng`.
fn wedge_data<R: rand::Rng>(rng: &mut R, field: FieldSpec, case: LowRankCase) -> WedgeData {
    match case {
        LowRankCase::Rank6I1 => WedgeData::Plane { k: sample::subspace(rng, field, 4, 2) },
        LowRankCase::Rank6I2 => {
            let hyperplane = sample::subspace(rng, field, 4, 3);
            let w = hyperplane.mul(&sample::subspace(rng, field, 3, 1)).expect("dimensions");
            WedgeData::Flag { w, hyperplane, v0: sample::matrix(rng, field, 4, 1) }
        }
        LowRankCase::Rank6I3_0 => WedgeData::Hyperplane {
            hyperplane: sample::subspace(rng, field, 4, 3),
            psi: sample::matrix(rng, field, 1, 3),
        },
        _ => WedgeData::Line { w: sample::subspace(rng, field, 4, 1), v0: sample::matrix(rng, field, 4, 1) },
    }
}

/// Parameter grid for one case over `F_p`, with degrees in `[−bound, bound]`.
///
/// Degrees are exhaustive. Case data are exhaustive up to scaling for ranks
/// 3 and 4; for rank 6 `samples` data sets per degree vector are drawn from
/// a generator seeded with `seed`.
pub fn grid(case: LowRankCase, field: FieldSpec, bound: i64, samples: usize, seed: u64) -> Result<Vec<CaseParams>> {
    let mut out = Vec::new();
    match case {
        LowRankCase::Rank2 => {
            for d in -bound..=bound {
                for first in [true, false] {
                    out.push(CaseParams::Rank2 { d, first });
                }
            }
        }
        LowRankCase::Rank3 => {
            let nilpotent: Vec<ExactMatrix> = projective_points(field, 3)?
                .into_iter()
                .filter_map(|v| {
                    let (a, b, c) = (v.get(0, 0), v.get(1, 0), v.get(2, 0));
                    let phi = ExactMatrix::from_rows(field, vec![vec![a.clone(), b.clone()], vec![c.clone(), -a]]).ok()?;
                    phi.det().ok()?.is_zero().then_some(phi)
                })
                .collect();
            for f0 in -bound..=bound {
                for f1 in -bound..=bound {
                    if f0 + f1 == 0 || f0 + f1 == 1 {
                        for phi in &nilpotent {
                            out.push(CaseParams::Rank3 { f: [f0, f1], phi: phi.clone() });
                        }
                    }
                }
            }
        }
        LowRankCase::Rank4I1 => {
            let points = projective_points(field, 2)?;
            for (f, g) in pairs_with_equal_sum(bound) {
                for u in &points {
                    for v in &points {
                        let phi = u.mul(&v.transpose())?;
                        out.push(CaseParams::Rank4Line { f, g, phi });
                    }
                }
            }
        }
        LowRankCase::Rank4I2 => {
            let points = projective_points(field, 2)?;
            let scalars = field.elements().ok_or_else(|| Error::InvalidField("grid needs a prime field".into()))?;
            for (f, g) in pairs_with_equal_sum(bound) {
                for family in [PlaneFamily::Image, PlaneFamily::Kernel] {
                    for line in &points {
                        for c in &scalars {
                            out.push(CaseParams::Rank4Plane { f, g, family, line: line.clone(), c: c.clone() });
                        }
                    }
                }
            }
        }
        _ => {
            let index = LowRankCase::ALL.iter().position(|c| *c == case).expect("listed") as u64;
            for (k, t) in degree_tuples(4, bound, &[0, -2]).into_iter().enumerate() {
                let mut rng = sample::rng(seed, (index << 32) | k as u64);
                for _ in 0..samples {
                    let data = wedge_data(&mut rng, field, case);
                    out.push(CaseParams::Rank6 { f: [t[0], t[1], t[2], t[3]], data });
                }
            }
        }
    }
    Ok(out)
}
