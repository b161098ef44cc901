//! Hecke transformations of split orthogonal bundles `E = ⊕ O(a_i)` over the
//! projective line at the point `t = 0`.
//!
//! The fiber `E_{2x}` is identified with `V ⊕ εV` through the jet map
//! `s ↦ s(0) + ε·s'(0)`; modifications are computed on lattices (see
//! [`crate::lattice`]) and splitting types are read off `h⁰` dimensions.

use serde::{Deserialize, Serialize};

use crate::dual_module::{Ambient, Submodule};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::lattice::{half, laurent_gram, Laurent, Lattice};
use crate::matrix::ExactMatrix;
use crate::quad_space::{ExtendedForm, QuadraticSpace};
use crate::strata::{lagrangian_from_skew, orth_project, OrthModelPoint, SkewDatum};

/// `⊕ O(a_i)` with a constant Gram matrix pairing only opposite degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitOrthogonalBundle {
    degrees: Vec<i64>,
    gram: ExactMatrix,
}

impl SplitOrthogonalBundle {
    pub fn new(degrees: Vec<i64>, gram: ExactMatrix) -> Result<Self> {
        let r = degrees.len();
        if gram.rows() != r || gram.cols() != r {
            return Err(Error::InvalidBundle(format!("gram must be {r} x {r}")));
        }
        let sum: i64 = degrees.iter().sum();
        if sum != 0 {
            return Err(Error::InvalidBundle(format!("degrees sum to {sum}, not 0")));
        }
        if !gram.is_symmetric() {
            return Err(Error::InvalidBundle("gram is not symmetric".into()));
        }
        if gram.det()?.is_zero() {
            return Err(Error::InvalidBundle("gram is degenerate".into()));
        }
        for i in 0..r {
            for j in 0..r {
                if !gram.get(i, j).is_zero() && degrees[i] + degrees[j] != 0 {
                    return Err(Error::InvalidBundle(format!(
                        "gram pairs summands {i} and {j} of degrees {} and {}",
                        degrees[i], degrees[j]
                    )));
                }
            }
        }
        Ok(Self { degrees, gram })
    }

    /// Degrees paired by the split form `b(e_i, e_{r+1−i}) = 1`.
    pub fn hyperbolic(degrees: Vec<i64>, field: FieldSpec) -> Result<Self> {
        let gram = QuadraticSpace::hyperbolic(degrees.len(), field).gram().clone();
        Self::new(degrees, gram)
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn r(&self) -> usize {
        self.degrees.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.gram.field()
    }

    /// Sorted splitting type.
    pub fn splitting_type(&self) -> Vec<i64> {
        sorted(&self.degrees)
    }

    /// Fiber module `E_{2x} = V ⊕ εV` with the extended form.
    pub fn fiber_module(&self) -> (Ambient, ExtendedForm) {
        let space = QuadraticSpace::new(self.gram.clone()).expect("validated at construction");
        (space.ambient(), space.extend())
    }
}

pub fn sorted(degrees: &[i64]) -> Vec<i64> {
    let mut d = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// `w₂ ≡ Σ max(0, a_i) mod 2` over the projective line.
pub fn w2_parity(degrees: &[i64]) -> u8 {
    (degrees.iter().map(|&a| a.max(0)).sum::<i64>().rem_euclid(2)) as u8
}

/// Splitting type of `ker(E → E_{2x}/P)`.
pub fn hecke_plain(degrees: &[i64], p: &Submodule) -> Result<Vec<i64>> {
    let r = degrees.len();
    if p.r() != r {
        return Err(Error::DimensionMismatch("submodule rank differs from the bundle".into()));
    }
    let lat = Lattice::standard(r, p.field());
    let out = lat.modify(&lat.local_basis(), p.basis()).splitting_type(degrees)?;
    let expected = degrees.iter().sum::<i64>() - (2 * r - p.dim()) as i64;
    let found = out.iter().sum();
    if expected != found {
        return Err(Error::DegreeSumMismatch { expected, found });
    }
    Ok(out)
}

/// Outcome of one orthogonal transform on lattices.
#[derive(Debug, Clone)]
pub struct Transform {
    /// Lattice of `E'(x)`, i.e. `t⁻¹·M'`.
    pub lattice: Lattice,
    /// Local basis of the output lattice, normalized so that its Gram is
    /// constant modulo `t²`.
    pub basis: Laurent,
    /// Gram of the output at the point.
    pub gram_at_x: ExactMatrix,
    pub output_type: Vec<i64>,
}

/// Local basis `b' = b + t·b·X` whose Gram is `C₀ + O(t²)`.
pub fn normalized_basis(gram: &ExactMatrix, basis: &Laurent) -> Result<(Laurent, ExactMatrix)> {
    let field = gram.field();
    let r = basis.cols();
    let c = laurent_gram(gram, basis);
    if !c.is_regular() {
        return Err(Error::CertificateFailed("gram has a pole at the point".into()));
    }
    let c0 = c.constant_term(r, field);
    let c1 = c.coeff(1).cloned().unwrap_or_else(|| ExactMatrix::zeros(field, r, r));
    let inv = c0
        .inverse()
        .ok_or_else(|| Error::CertificateFailed("gram is degenerate at the point".into()))?;
    let x = inv.mul(&c1)?.scale(&-half(field));
    let adjusted = basis.add(&basis.mul_const(&x).shift(1));
    Ok((adjusted, c0))
}

/// `t⁻¹·{s ∈ M : jet(s) ∈ L}` for a Lagrangian `L` given in the fiber
/// coordinates of `basis`, with the orthogonality certificate.
pub fn transform(degrees: &[i64], gram: &ExactMatrix, lat: &Lattice, basis: &Laurent, l: &ExactMatrix) -> Result<Transform> {
    let modified = lat.modify(basis, l).shift(-1);
    let out_basis = modified.local_basis();
    let (normalized, c0) = normalized_basis(gram, &out_basis)?;
    let output_type = modified.splitting_type(degrees)?;
    let found: i64 = output_type.iter().sum();
    let expected: i64 = degrees.iter().sum();
    if found != expected {
        return Err(Error::DegreeSumMismatch { expected, found });
    }
    Ok(Transform {
        lattice: modified,
        basis: normalized,
        gram_at_x: c0,
        output_type,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeReport {
    pub input_type: Vec<i64>,
    pub output_type: Vec<i64>,
    #[serde(with = "scalar_string")]
    pub gram_det_at_x: Scalar,
    pub w2_in: u8,
    pub w2_out: u8,
    pub stratum_i: usize,
    pub reciprocity_ok: bool,
    pub two_step_type: Vec<i64>,
}

mod scalar_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::field::{FieldSpec, Scalar};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        FieldSpec::rationals()
            .parse_scalar(&s)
            .map_err(serde::de::Error::custom)
    }
}

fn check_input(e: &SplitOrthogonalBundle, l: &Submodule) -> Result<ExtendedForm> {
    let (_, ef) = e.fiber_module();
    if l.field() != e.field() {
        return Err(Error::FieldMismatch);
    }
    ef.require_lagrangian(l)?;
    Ok(ef)
}

/// Orthogonal transform of `E` at `L` (the lattice computation only).
pub fn hecke_transform(e: &SplitOrthogonalBundle, l: &Submodule) -> Result<Transform> {
    check_input(e, l)?;
    let lat = Lattice::standard(e.r(), e.field());
    let t = transform(&e.degrees, &e.gram, &lat, &lat.local_basis(), l.basis())?;
    let det = t.gram_at_x.det()?;
    if det.is_zero() {
        return Err(Error::CertificateFailed("zero determinant at the point".into()));
    }
    Ok(t)
}

/// Splitting type of `H(E, L)`, certified orthogonal.
pub fn hecke_type(e: &SplitOrthogonalBundle, l: &Submodule) -> Result<Vec<i64>> {
    Ok(hecke_transform(e, l)?.output_type)
}

/// The submodule `L* ⊂ H(E,L)_{2x}`: the image of `t·K[t]^r`, in the
/// normalized fiber coordinates of the transformed lattice.
pub fn dual_lagrangian(e: &SplitOrthogonalBundle, t: &Transform) -> Result<ExactMatrix> {
    let r = e.r();
    let field = e.field();
    let id = ExactMatrix::identity(field, r);
    let gens = Laurent::constant(&id).shift(1).hcat(&Laurent::constant(&id).shift(2));
    let coords = t.lattice.fiber_coords(&t.basis, &gens)?;
    Ok(coords.column_span())
}

/// Reciprocity `H(H(E, L), L*) = E`: compares splitting types, `w₂`, and the
/// lattices themselves.
pub fn verify_reciprocity(e: &SplitOrthogonalBundle, l: &Submodule) -> Result<bool> {
    let t = hecke_transform(e, l)?;
    reciprocity_of(e, &t)
}

fn reciprocity_of(e: &SplitOrthogonalBundle, t: &Transform) -> Result<bool> {
    let dual = dual_lagrangian(e, t)?;
    let space = QuadraticSpace::new(t.gram_at_x.clone())?;
    let ef = space.extend();
    let dual_module = Submodule::new(space.ambient(), &dual)?;
    if !ef.is_lagrangian(&dual_module) {
        return Ok(false);
    }
    let back = transform(&e.degrees, &e.gram, &t.lattice, &t.basis, dual_module.basis())?;
    let standard = Lattice::standard(e.r(), e.field());
    Ok(back.output_type == e.splitting_type()
        && w2_parity(&back.output_type) == w2_parity(&e.degrees)
        && back.lattice.same_as(&standard))
}

/// `H(E, L)` through two elementary transformations: first at `F = π(L)`,
/// then at the image of `L` in the fiber of the intermediate bundle.
pub fn hecke_two_step(e: &SplitOrthogonalBundle, l: &Submodule) -> Result<Vec<i64>> {
    check_input(e, l)?;
    let r = e.r();
    let field = e.field();
    let amb = l.ambient();
    let f = l.projection();
    let lat = Lattice::standard(r, field);
    let first = lat.modify_first_order(&lat.local_basis(), &f);
    let basis = first.local_basis();
    // a + t·b for every basis vector (a, b) of L
    let jets = Laurent::constant(&amb.top(l.basis())).add(&Laurent::constant(&amb.bottom(l.basis())).shift(1));
    let g = first.first_order_coords(&basis, &jets)?.column_span();
    if g.cols() != r - f.cols() {
        return Err(Error::DimensionMismatch(format!(
            "second step subspace has dimension {}, expected {}",
            g.cols(),
            r - f.cols()
        )));
    }
    let second = first.modify_first_order(&basis, &g).shift(-1);
    second.splitting_type(&e.degrees)
}

/// Full report for `H(E, L)`.
pub fn hecke_orthogonal(e: &SplitOrthogonalBundle, l: &Submodule) -> Result<HeckeReport> {
    let t = hecke_transform(e, l)?;
    let plain = hecke_plain(&e.degrees, l)?;
    let shifted: Vec<i64> = plain.iter().map(|d| d + 1).collect();
    if shifted != t.output_type {
        return Err(Error::CertificateFailed("twisted plain type differs from the orthogonal one".into()));
    }
    let stratum_i = l.projection().cols();
    Ok(HeckeReport {
        input_type: e.splitting_type(),
        output_type: t.output_type.clone(),
        gram_det_at_x: t.gram_at_x.det()?,
        w2_in: w2_parity(&e.degrees),
        w2_out: w2_parity(&t.output_type),
        stratum_i,
        reciprocity_ok: reciprocity_of(e, &t)?,
        two_step_type: hecke_two_step(e, l)?,
    })
}

/// A point of the projective line of skew forms on a plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveSample {
    Finite(Scalar),
    Infinity,
}

/// Lagrangian attached to the sample `c` over the isotropic plane `F`.
pub fn curve_lagrangian(ef: &ExtendedForm, f: &ExactMatrix, c: &CurveSample) -> Result<Submodule> {
    let field = ef.field();
    let omega0 = ExactMatrix::from_ints(field, &[[0, 1], [-1, 0]]);
    match c {
        CurveSample::Finite(c) => lagrangian_from_skew(ef, &SkewDatum::new(f.clone(), omega0.scale(c))?),
        CurveSample::Infinity => {
            let tilde = ExactMatrix::zeros(field, 2, 2).vcat(&omega0.transpose())?;
            orth_project(ef, &OrthModelPoint { f: f.clone(), tilde })
        }
    }
}

/// Splitting types along the Hecke curve of an isotropic plane.
pub fn hecke_curve(e: &SplitOrthogonalBundle, f: &ExactMatrix, samples: &[CurveSample]) -> Result<Vec<Vec<i64>>> {
    let (_, ef) = e.fiber_module();
    if f.rows() != e.r() || f.rank() != 2 || f.cols() != 2 || !ef.space().is_isotropic(f)? {
        return Err(Error::NotIsotropicPlane);
    }
    let f = f.column_span();
    samples
        .iter()
        .map(|c| hecke_type(e, &curve_lagrangian(&ef, &f, c)?))
        .collect()
}

/// JSON shape of a bundle: `{"degrees": [...], "gram": "hyperbolic" | rows}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleJson {
    pub degrees: Vec<i64>,
    #[serde(default = "hyperbolic_value")]
    pub gram: serde_json::Value,
}

fn hyperbolic_value() -> serde_json::Value {
    serde_json::Value::String("hyperbolic".into())
}

impl BundleJson {
    pub fn to_bundle(&self, field: FieldSpec) -> Result<SplitOrthogonalBundle> {
        let gram = crate::quad_space::gram_from_json(&self.gram, self.degrees.len(), field)?;
        SplitOrthogonalBundle::new(self.degrees.clone(), gram)
    }
}
