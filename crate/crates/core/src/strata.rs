//! Stratifications of `ε`-stable and Lagrangian submodules by `i = dim π(L)`.
//!
//! A submodule `L` of dimension `n` is recorded by its flag `F ⊂ G ⊆ V` with
//! `F = π(L)`, `εG = L ∩ εV`, and the map `φ: F → V/G` read off the
//! `εV`-parts of lifts. A Lagrangian is recorded by `F` together with a skew
//! matrix `ω`: for the canonical basis `f_k` of `F` and lifts `(f_k, v_k)`,
//! `ω[k][j] = b₁(v_k, f_j)`.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dual_module::{is_eps_stable, Ambient, Submodule};
use crate::enumerate::{self, flag_count, pow};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{ExactMatrix, Quotient};
use crate::quad_space::{ExtendedForm, QuadraticSpace};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlagDatum {
    pub f: ExactMatrix,
    pub g: ExactMatrix,
    /// `F → V/G` in the complement coordinates of `V/G`.
    pub phi: ExactMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewDatum {
    pub f: ExactMatrix,
    pub omega: ExactMatrix,
}

impl SkewDatum {
    pub fn new(f: ExactMatrix, omega: ExactMatrix) -> Result<Self> {
        if omega.rows() != f.cols() || omega.cols() != f.cols() {
            return Err(Error::DimensionMismatch("omega must be dim F square".into()));
        }
        if !omega.add(&omega.transpose())?.is_zero() {
            return Err(Error::Malformed("omega is not skew".into()));
        }
        Ok(Self { f, omega })
    }

    pub fn i(&self) -> usize {
        self.f.cols()
    }

    /// Same Lagrangian in the basis `F·A` of `F`: `ω ↦ Aᵀ ω A`.
    pub fn change_basis(&self, a: &ExactMatrix) -> Result<Self> {
        if a.inverse().is_none() {
            return Err(Error::DimensionMismatch("base change must be invertible".into()));
        }
        Ok(Self {
            f: self.f.mul(a)?,
            omega: a.transpose().mul(&self.omega)?.mul(a)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub i: usize,
    pub n: usize,
    pub torsion_degree: usize,
    pub component: Option<u8>,
    pub flag: FlagDatum,
    pub skew: Option<SkewDatum>,
}

/// `εV`-parts of lifts into `L` of the columns of `f ⊆ π(L)`.
fn lift_parts(l: &Submodule, f: &ExactMatrix) -> ExactMatrix {
    let amb = l.ambient();
    let top = amb.top(l.basis());
    let coeffs = top
        .solve(f)
        .expect("same field")
        .expect("columns lie in the projection");
    amb.bottom(&l.basis().mul(&coeffs).expect("dimensions"))
}

/// Flag data of `L`, plus skew data and component when a form is supplied
/// and `L` is Lagrangian for it.
pub fn stratum_data(l: &Submodule, form: Option<&ExtendedForm>) -> StratumReport {
    let f = l.projection();
    let g = l.eps_part();
    let v = lift_parts(l, &f);
    let phi = Quotient::new(&g).reduce(&v).expect("dimensions");
    let i = f.cols();
    let n = l.dim();
    let (component, skew) = match form {
        Some(ef) if ef.is_lagrangian(l) => (
            ef.component_index(l).ok(),
            skew_from_lagrangian(ef, l).ok(),
        ),
        _ => (None, None),
    };
    StratumReport {
        i,
        n,
        torsion_degree: l.structure().torsion_degree,
        component,
        flag: FlagDatum { f, g, phi },
        skew,
    }
}

/// `L = {(f, v) : v mod G = φ(f)} + εG`.
pub fn submodule_from_flag(ambient: Ambient, d: &FlagDatum) -> Result<Submodule> {
    let r = ambient.r();
    if d.f.rows() != r || d.g.rows() != r {
        return Err(Error::DimensionMismatch("flag not in V".into()));
    }
    if !d.g.spans(&d.f)? {
        return Err(Error::FlagViolation);
    }
    let quotient = Quotient::new(&d.g);
    if d.phi.rows() != quotient.dim() || d.phi.cols() != d.f.cols() {
        return Err(Error::DimensionMismatch("phi has the wrong shape".into()));
    }
    let lifts = ambient.join(&d.f, &quotient.lift().mul(&d.phi)?)?;
    let columns = lifts.hcat(&ambient.eps_embed(&d.g))?;
    Submodule::new(ambient, &columns)
}

/// The Lagrangian `span{(f_k, v_k)} + εF^⊥` with `b₁(v_k, f_j) = ω[k][j]`.
pub fn lagrangian_from_skew(ef: &ExtendedForm, s: &SkewDatum) -> Result<Submodule> {
    let space = ef.space();
    if !space.is_isotropic(&s.f)? {
        return Err(Error::NotIsotropic);
    }
    if !s.omega.add(&s.omega.transpose())?.is_zero() {
        return Err(Error::Malformed("omega is not skew".into()));
    }
    let amb = ef.ambient();
    let lifts = skew_lifts(space, &s.f, &s.omega)?;
    let perp = space.orthogonal_complement(&s.f)?;
    let columns = amb.join(&s.f, &lifts)?.hcat(&amb.eps_embed(&perp))?;
    Submodule::new(amb, &columns)
}

/// Vectors `v_k` with `b₁(v_k, f_j) = ω[k][j]`.
fn skew_lifts(space: &QuadraticSpace, f: &ExactMatrix, omega: &ExactMatrix) -> Result<ExactMatrix> {
    if f.cols() == 0 {
        return Ok(ExactMatrix::zeros(space.field(), space.r(), 0));
    }
    let pairing = f.transpose().mul(space.gram())?;
    pairing
        .solve(&omega.transpose())?
        .ok_or_else(|| Error::DimensionMismatch("F is not independent".into()))
}

pub fn skew_from_lagrangian(ef: &ExtendedForm, l: &Submodule) -> Result<SkewDatum> {
    ef.require_lagrangian(l)?;
    let f = l.projection();
    let v = lift_parts(l, &f);
    let omega = ef.space().pair(&v, &f)?;
    Ok(SkewDatum { f, omega })
}

/// A point of the plain model `Gr(l, G ⊕ ε(V/G))`: `tilde` has `r` rows,
/// the first `dim G` in the canonical basis of `G`, the rest in complement
/// coordinates of `V/G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlainModelPoint {
    pub g: ExactMatrix,
    pub tilde: ExactMatrix,
}

/// `ι(F, G, φ) = im(j ⊕ εφ)`.
pub fn plain_iota(d: &FlagDatum) -> Result<PlainModelPoint> {
    if !d.g.spans(&d.f)? {
        return Err(Error::FlagViolation);
    }
    let j = d
        .g
        .solve(&d.f)?
        .ok_or(Error::FlagViolation)?;
    Ok(PlainModelPoint {
        g: d.g.clone(),
        tilde: j.vcat(&d.phi)?,
    })
}

/// `p(F̃) = q⁻¹(F̃) ⊆ G ⊕ εV`.
pub fn plain_project(ambient: Ambient, pt: &PlainModelPoint) -> Result<Submodule> {
    let r = ambient.r();
    let k = pt.g.cols();
    if pt.tilde.rows() != r || pt.g.rows() != r {
        return Err(Error::DimensionMismatch("model point has the wrong shape".into()));
    }
    let quotient = Quotient::new(&pt.g);
    let a = pt.g.mul(&pt.tilde.block(0, k, 0, pt.tilde.cols()))?;
    let b = quotient.lift().mul(&pt.tilde.block(k, r, 0, pt.tilde.cols()))?;
    let columns = ambient.join(&a, &b)?.hcat(&ambient.eps_embed(&pt.g))?;
    Submodule::new(ambient, &columns)
}

/// A point of the orthogonal model `F ⊕ εF*` (`2l` rows; `F*` coordinates
/// are the pairings `b₁(·, f_j)`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthModelPoint {
    pub f: ExactMatrix,
    pub tilde: ExactMatrix,
}

impl OrthModelPoint {
    /// Isotropy for the hyperbolic pairing of `F` with `F*`.
    pub fn is_isotropic(&self) -> bool {
        let l = self.f.cols();
        let x = self.tilde.block(0, l, 0, self.tilde.cols());
        let y = self.tilde.block(l, 2 * l, 0, self.tilde.cols());
        let p = y.transpose().mul(&x).expect("dimensions");
        p.add(&p.transpose()).expect("dimensions").is_zero()
    }

    /// `0` when `F̃` lies in the family of `F`, `1` otherwise.
    pub fn family(&self) -> usize {
        let l = self.f.cols();
        let field = self.f.field();
        let mut reference = ExactMatrix::zeros(field, 2 * l, l);
        for k in 0..l {
            reference.set(k, k, field.one());
        }
        let meet = ExactMatrix::intersect_spans(&self.tilde, &reference).expect("same ambient");
        (l - meet.cols()) % 2
    }
}

/// `ι(F, ω) = im(id ⊕ εφ)` with `φ(f_k) = ω[k][·]`.
pub fn orth_iota(ef: &ExtendedForm, s: &SkewDatum) -> Result<OrthModelPoint> {
    if !ef.space().is_isotropic(&s.f)? {
        return Err(Error::NotIsotropic);
    }
    let l = s.f.cols();
    Ok(OrthModelPoint {
        f: s.f.clone(),
        tilde: ExactMatrix::identity(ef.field(), l).vcat(&s.omega.transpose())?,
    })
}

/// `p(F̃) = q⁻¹(F̃) ⊆ F ⊕ εV`, with `q: εV → ε(V/F^⊥) ≅ εF*`.
pub fn orth_project(ef: &ExtendedForm, pt: &OrthModelPoint) -> Result<Submodule> {
    let space = ef.space();
    let l = pt.f.cols();
    if pt.tilde.rows() != 2 * l || pt.f.rows() != space.r() {
        return Err(Error::DimensionMismatch("model point has the wrong shape".into()));
    }
    if !space.is_isotropic(&pt.f)? {
        return Err(Error::NotIsotropic);
    }
    let amb = ef.ambient();
    let x = pt.tilde.block(0, l, 0, pt.tilde.cols());
    let y = pt.tilde.block(l, 2 * l, 0, pt.tilde.cols());
    let a = pt.f.mul(&x)?;
    let b = if l == 0 {
        ExactMatrix::zeros(ef.field(), space.r(), pt.tilde.cols())
    } else {
        pt.f
            .transpose()
            .mul(space.gram())?
            .solve(&y)?
            .ok_or_else(|| Error::DimensionMismatch("F is not independent".into()))?
    };
    let perp = space.orthogonal_complement(&pt.f)?;
    let columns = amb.join(&a, &b)?.hcat(&amb.eps_embed(&perp))?;
    Submodule::new(amb, &columns)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Orthogonal,
}

/// Dimension formulas for the plain strata of `n`-dimensional submodules,
/// or for the Lagrangian strata.
pub fn dim_formulas(r: usize, n: usize, l: usize, variant: Variant) -> Result<BTreeMap<String, i64>> {
    let (r, n, l) = (r as i64, n as i64, l as i64);
    let mut out = BTreeMap::new();
    match variant {
        Variant::Plain => {
            let a = (n - r).max(0);
            if n > 2 * r || l < a || l > n / 2 {
                return Err(Error::OutOfRange(format!("l = {l} outside [{a}, {}]", n / 2)));
            }
            let closure = |l: i64| n * (r - n + l) + l * (n - 2 * l);
            out.insert("closure_dim".into(), closure(l));
            out.insert("total_dim".into(), closure(n / 2));
        }
        Variant::Orthogonal => {
            if l > r / 2 {
                return Err(Error::OutOfRange(format!("l = {l} exceeds {}", r / 2)));
            }
            let stratum = |l: i64| l * (r - l - 1);
            out.insert("stratum_dim".into(), stratum(l));
            for m in 0..2 {
                let top = (0..=r / 2).rev().find(|i| i % 2 == m).unwrap_or(0);
                out.insert(format!("component_dim_{m}"), stratum(top));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusStratum {
    pub i: usize,
    pub count: u128,
    pub predicted: u128,
    pub component: u8,
    /// Sizes of the two families when `i = r/2` and `r > 2` is even.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub families: Option<[u128; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub r: usize,
    pub p: u64,
    pub strata: Vec<CensusStratum>,
    pub brute_force_total: Option<u128>,
    /// Per-stratum brute-force counts, indexed by `i`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force_strata: Option<Vec<u128>>,
}

/// Every Lagrangian of stratum `i`, built from `(F, ω)` pairs.
pub fn lagrangians_in_stratum(ef: &ExtendedForm, i: usize) -> Result<Vec<(SkewDatum, Submodule)>> {
    let fs = ef.space().enumerate_isotropic(i)?;
    let skews = enumerate::skew_matrices(ef.field(), i)?;
    let out: Result<Vec<Vec<_>>> = fs
        .par_iter()
        .map(|f| {
            skews
                .iter()
                .map(|w| {
                    let s = SkewDatum {
                        f: f.clone(),
                        omega: w.clone(),
                    };
                    let l = lagrangian_from_skew(ef, &s)?;
                    Ok((s, l))
                })
                .collect()
        })
        .collect();
    Ok(out?.into_iter().flatten().collect())
}

/// Every Lagrangian submodule over `F_p`, stratum by stratum.
pub fn all_lagrangians(ef: &ExtendedForm) -> Result<Vec<(SkewDatum, Submodule)>> {
    let mut out = Vec::new();
    for i in 0..=ef.r() / 2 {
        out.extend(lagrangians_in_stratum(ef, i)?);
    }
    Ok(out)
}

/// Lagrangians found by scanning every `r`-dimensional subspace of `W`,
/// counted per stratum.
pub fn brute_force_lagrangian_counts(ef: &ExtendedForm) -> Result<Vec<u128>> {
    let amb = ef.ambient();
    let r = ef.r();
    let mut counts = vec![0u128; r / 2 + 1];
    enumerate::for_each_subspace(ef.field(), 2 * r, r, |b| {
        if !is_eps_stable(&amb, b) {
            return;
        }
        let (p0, pe) = ef.pair(b, b).expect("dimensions");
        if p0.is_zero() && pe.is_zero() {
            let i = amb.top(b).rank();
            counts[i] += 1;
        }
    })?;
    Ok(counts)
}

/// Family label of a maximal isotropic `F` relative to the reference
/// `span{e₁, …, e_k}` (or the first maximal isotropic subspace found if that
/// reference is not isotropic).
pub fn maximal_family(f: &ExactMatrix, reference: &ExactMatrix) -> usize {
    let meet = ExactMatrix::intersect_spans(f, reference).expect("same ambient");
    (f.cols() - meet.cols()) % 2
}

fn family_reference(space: &QuadraticSpace, fs: &[ExactMatrix]) -> Option<ExactMatrix> {
    let k = space.r() / 2;
    let field = space.field();
    let mut e = ExactMatrix::zeros(field, space.r(), k);
    for j in 0..k {
        e.set(j, j, field.one());
    }
    if space.is_isotropic(&e).ok()? {
        Some(e)
    } else {
        fs.first().cloned()
    }
}

/// Per-stratum Lagrangian counts over `F_p` against the closed form
/// `|OGr(i)| · p^{i(i−1)/2}`; brute force over all subspaces on request.
pub fn census(ef: &ExtendedForm, brute_force: bool) -> Result<Census> {
    let p = ef
        .field()
        .order()
        .ok_or_else(|| Error::InvalidField("census needs a prime field".into()))?;
    let space = ef.space();
    let r = ef.r();
    let mut strata = Vec::new();
    for i in 0..=r / 2 {
        let built = lagrangians_in_stratum(ef, i)?;
        let distinct: HashSet<&ExactMatrix> = built.iter().map(|(_, l)| l.basis()).collect();
        for (_, l) in &built {
            if l.projection().cols() != i || !ef.is_lagrangian(l) {
                return Err(Error::NotLagrangian(format!("constructed stratum {i} element")));
            }
        }
        let predicted = space.isotropic_count(i)? * pow(p, (i * i.saturating_sub(1) / 2) as u64);
        let families = if r > 2 && r.is_multiple_of(2) && i == r / 2 {
            let fs = space.enumerate_isotropic(i)?;
            family_reference(space, &fs).map(|reference| {
                let mut sizes = [0u128; 2];
                for f in &fs {
                    sizes[maximal_family(f, &reference)] += 1;
                }
                sizes
            })
        } else {
            None
        };
        strata.push(CensusStratum {
            i,
            count: distinct.len() as u128,
            predicted,
            component: (i % 2) as u8,
            families,
        });
    }
    let (brute_force_total, brute_force_strata) = if brute_force {
        let counts = brute_force_lagrangian_counts(ef)?;
        (Some(counts.iter().sum()), Some(counts))
    } else {
        (None, None)
    };
    Ok(Census {
        r,
        p,
        strata,
        brute_force_total,
        brute_force_strata,
    })
}

/// Constructive count of `n`-dimensional submodules per plain stratum, with
/// the prediction `|Flag(i, n−i)| · q^{i(r−n+i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagStratumCount {
    pub i: usize,
    pub count: u128,
    pub predicted: u128,
}

pub fn plain_strata_range(r: usize, n: usize) -> std::ops::RangeInclusive<usize> {
    n.saturating_sub(r)..=n / 2
}

pub fn flag_census(ambient: Ambient, n: usize) -> Result<Vec<FlagStratumCount>> {
    let field = ambient.field();
    let p = field
        .order()
        .ok_or_else(|| Error::InvalidField("census needs a prime field".into()))?;
    let r = ambient.r();
    let mut out = Vec::new();
    for i in plain_strata_range(r, n) {
        let gdim = n - i;
        let gs = enumerate::subspaces(field, r, gdim)?;
        let inner = enumerate::subspaces(field, gdim, i)?;
        let phis = enumerate::vectors(field, (r - gdim) * i)?;
        let found: Result<Vec<HashSet<ExactMatrix>>> = gs
            .par_iter()
            .map(|g| {
                let mut seen = HashSet::new();
                for c in &inner {
                    let f = g.mul(c)?.column_span();
                    for v in &phis {
                        let phi = reshape(field, v, r - gdim, i);
                        let d = FlagDatum {
                            f: f.clone(),
                            g: g.clone(),
                            phi,
                        };
                        let l = submodule_from_flag(ambient, &d)?;
                        if l.dim() != n || l.projection().cols() != i {
                            return Err(Error::FlagViolation);
                        }
                        seen.insert(l.basis().clone());
                    }
                }
                Ok(seen)
            })
            .collect();
        let mut all = HashSet::new();
        for s in found? {
            all.extend(s);
        }
        out.push(FlagStratumCount {
            i,
            count: all.len() as u128,
            predicted: flag_count(r as u64, i as u64, gdim as u64, p) * pow(p, ((r - gdim) * i) as u64),
        });
    }
    Ok(out)
}

/// Brute-force plain stratum counts over every `n`-dimensional subspace.
pub fn brute_force_flag_counts(ambient: Ambient, n: usize) -> Result<BTreeMap<usize, u128>> {
    let mut counts = BTreeMap::new();
    enumerate::for_each_subspace(ambient.field(), ambient.dim(), n, |b| {
        if is_eps_stable(&ambient, b) {
            *counts.entry(ambient.top(b).rank()).or_insert(0) += 1;
        }
    })?;
    Ok(counts)
}

fn reshape(field: FieldSpec, v: &ExactMatrix, rows: usize, cols: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(field, rows, cols);
    for a in 0..rows {
        for b in 0..cols {
            m.set(a, b, v.get(a * cols + b, 0).clone());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_module::make_submodule;

    fn f3() -> FieldSpec {
        FieldSpec::prime(3).unwrap()
    }

    #[test]
    fn stratum_examples() {
        let q = FieldSpec::rationals();
        let amb = Ambient::new(2, q);
        let l = make_submodule(amb, &ExactMatrix::from_ints(q, &[[1, 0], [0, 0], [0, 1], [0, 0]])).unwrap();
        let rep = stratum_data(&l, None);
        assert_eq!(rep.i, 1);
        assert_eq!(rep.flag.f, rep.flag.g);
        assert!(rep.flag.phi.is_zero());
        let rep = stratum_data(&Ambient::new(3, q).eps_space(), None);
        assert_eq!((rep.i, rep.torsion_degree), (0, 3));
    }

    #[test]
    fn flag_construction_examples() {
        let q = FieldSpec::rationals();
        let amb = Ambient::new(2, q);
        let e1 = ExactMatrix::from_ints(q, &[[1], [0]]);
        let d = FlagDatum {
            f: e1.clone(),
            g: e1.clone(),
            phi: ExactMatrix::from_ints(q, &[[1]]),
        };
        let l = submodule_from_flag(amb, &d).unwrap();
        let expected = ExactMatrix::from_ints(q, &[[1, 0], [0, 0], [0, 1], [1, 0]]);
        assert!(l.basis().same_span(&expected).unwrap());
        assert_eq!(stratum_data(&l, None).flag, d);
        let e2 = ExactMatrix::from_ints(q, &[[0], [1]]);
        let bad = FlagDatum {
            f: e2,
            g: e1,
            phi: ExactMatrix::zeros(q, 1, 1),
        };
        assert_eq!(submodule_from_flag(amb, &bad), Err(Error::FlagViolation));
    }

    #[test]
    fn skew_examples() {
        let q = FieldSpec::rationals();
        let ef = QuadraticSpace::hyperbolic(4, q).extend();
        let plane = ExactMatrix::from_ints(q, &[[1, 0], [0, 1], [0, 0], [0, 0]]);
        let omega = ExactMatrix::from_ints(q, &[[0, 1], [-1, 0]]);
        let s = SkewDatum::new(plane.clone(), omega).unwrap();
        let l = lagrangian_from_skew(&ef, &s).unwrap();
        assert!(ef.is_lagrangian(&l));
        assert_eq!(skew_from_lagrangian(&ef, &l).unwrap(), s);
        let zero = SkewDatum::new(plane, ExactMatrix::zeros(q, 2, 2)).unwrap();
        let l0 = lagrangian_from_skew(&ef, &zero).unwrap();
        assert!(skew_from_lagrangian(&ef, &l0).unwrap().omega.is_zero());
        let e = skew_from_lagrangian(&ef, &ef.ambient().eps_space()).unwrap();
        assert_eq!(e.i(), 0);
        let not_iso = ExactMatrix::from_ints(q, &[[1], [0], [0], [1]]);
        let bad = SkewDatum::new(not_iso, ExactMatrix::zeros(q, 1, 1)).unwrap();
        assert_eq!(lagrangian_from_skew(&ef, &bad), Err(Error::NotIsotropic));
    }

    #[test]
    fn base_change_is_covariant() {
        let q = FieldSpec::rationals();
        let ef = QuadraticSpace::hyperbolic(4, q).extend();
        let plane = ExactMatrix::from_ints(q, &[[1, 0], [0, 1], [0, 0], [0, 0]]);
        let s = SkewDatum::new(plane, ExactMatrix::from_ints(q, &[[0, 3], [-3, 0]])).unwrap();
        let a = ExactMatrix::from_ints(q, &[[1, 2], [1, 3]]);
        let moved = s.change_basis(&a).unwrap();
        assert_eq!(
            lagrangian_from_skew(&ef, &s).unwrap(),
            lagrangian_from_skew(&ef, &moved).unwrap()
        );
    }

    #[test]
    fn desingularization_examples() {
        let q = FieldSpec::rationals();
        let ef = QuadraticSpace::hyperbolic(4, q).extend();
        let plane = ExactMatrix::from_ints(q, &[[1, 0], [0, 1], [0, 0], [0, 0]]);
        let zero = SkewDatum::new(plane.clone(), ExactMatrix::zeros(q, 2, 2)).unwrap();
        let pt = orth_iota(&ef, &zero).unwrap();
        assert!(pt.is_isotropic());
        assert_eq!(orth_project(&ef, &pt).unwrap(), lagrangian_from_skew(&ef, &zero).unwrap());
        let lower = OrthModelPoint {
            f: plane,
            tilde: ExactMatrix::from_ints(q, &[[0, 0], [0, 0], [1, 0], [0, 1]]),
        };
        let l = orth_project(&ef, &lower).unwrap();
        assert_eq!(l, ef.ambient().eps_space());
        assert_eq!(lower.family(), 0);
    }

    #[test]
    fn dimension_examples() {
        let d = dim_formulas(4, 4, 2, Variant::Plain).unwrap();
        assert_eq!((d["closure_dim"], d["total_dim"]), (8, 8));
        let d = dim_formulas(4, 0, 2, Variant::Orthogonal).unwrap();
        assert_eq!(d["stratum_dim"], 2);
        let d = dim_formulas(5, 0, 2, Variant::Orthogonal).unwrap();
        assert_eq!((d["component_dim_0"], d["component_dim_1"]), (4, 3));
        assert!(dim_formulas(4, 4, 3, Variant::Plain).is_err());
        assert!(dim_formulas(4, 0, 3, Variant::Orthogonal).is_err());
    }

    #[test]
    fn small_census() {
        let ef = QuadraticSpace::hyperbolic(2, f3()).extend();
        let c = census(&ef, true).unwrap();
        let counts: Vec<u128> = c.strata.iter().map(|s| s.count).collect();
        assert_eq!(counts, vec![1, 2]);
        assert_eq!(c.brute_force_total, Some(3));
        for s in &c.strata {
            assert_eq!(s.count, s.predicted);
        }
    }
}
