//! Tangent spaces `Hom⁰(L, W/L)` to the strata, their skew parts for
//! Lagrangians, and the fiberwise duality between `L` and `W/L`.

use serde::{Deserialize, Serialize};

use crate::dual_module::{hom_epsilon, EpsModule, Submodule};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::ExactMatrix;
use crate::quad_space::ExtendedForm;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentReport {
    pub dim_hom0: usize,
    pub expected_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skew_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_skew_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing_rank: Option<usize>,
}

/// `n(r−n+i) + i(n−2i)`.
pub fn expected_tangent_dim(r: usize, n: usize, i: usize) -> usize {
    n * (r + i - n) + i * (n - 2 * i)
}

/// `i(r−i−1)`.
pub fn expected_skew_dim(r: usize, i: usize) -> usize {
    if i == 0 {
        0
    } else {
        i * (r - i - 1)
    }
}

/// Basis of `Hom⁰(L, W/L)` (maps from `L`-coordinates to quotient coordinates).
pub fn hom0_basis(l: &Submodule) -> Vec<ExactMatrix> {
    hom_epsilon(&l.as_module(), &l.quotient().module)
        .expect("same field")
        .restricted_basis
}

pub fn tangent_dim(l: &Submodule) -> TangentReport {
    let i = l.projection().cols();
    TangentReport {
        dim_hom0: hom0_basis(l).len(),
        expected_dim: expected_tangent_dim(l.r(), l.dim(), i),
        skew_dim: None,
        dual_skew_dim: None,
        pairing_rank: None,
    }
}

/// Subspace of `span(maps)` on which every `defect` vanishes.
fn solve_within(field: FieldSpec, maps: &[ExactMatrix], defect: impl Fn(&ExactMatrix) -> Vec<ExactMatrix>) -> Vec<ExactMatrix> {
    if maps.is_empty() {
        return Vec::new();
    }
    let columns: Vec<Vec<_>> = maps
        .iter()
        .map(|m| {
            defect(m)
                .iter()
                .flat_map(|d| d.entries().to_vec())
                .collect()
        })
        .collect();
    let rows = columns[0].len();
    let system = ExactMatrix::from_columns(field, rows, &columns).expect("uniform shapes");
    let kernel = system.kernel_basis();
    (0..kernel.cols())
        .map(|c| {
            maps.iter().enumerate().fold(
                ExactMatrix::zeros(field, maps[0].rows(), maps[0].cols()),
                |acc, (s, m)| acc.add(&m.scale(kernel.get(s, c))).expect("same shape"),
            )
        })
        .collect()
}

fn symmetrized(p: ExactMatrix) -> ExactMatrix {
    p.add(&p.transpose()).expect("square")
}

/// Both components of `(u, v) ↦ b₂(Φu, v)` on `L`, for `Φ: L → W/L`.
pub fn induced_forms(ef: &ExtendedForm, l: &Submodule, phi: &ExactMatrix) -> (ExactMatrix, ExactMatrix) {
    let lifted = l.quotient().quotient.lift().mul(phi).expect("dimensions");
    ef.pair(&lifted, l.basis()).expect("dimensions")
}

/// Basis of the skew maps inside `Hom⁰(L, W/L)`.
pub fn skew_hom0_basis(ef: &ExtendedForm, l: &Submodule) -> Vec<ExactMatrix> {
    let maps = hom0_basis(l);
    solve_within(ef.field(), &maps, |phi| {
        let (p0, pe) = induced_forms(ef, l, phi);
        vec![symmetrized(p0), symmetrized(pe)]
    })
}

/// Basis of the skew maps inside `Hom⁰(W/L, L)`, using `L ≅ (W/L)*`.
pub fn dual_skew_hom0_basis(ef: &ExtendedForm, l: &Submodule) -> Vec<ExactMatrix> {
    let quotient = l.quotient();
    let maps = hom_epsilon(&quotient.module, &l.as_module())
        .expect("same field")
        .restricted_basis;
    let lift = quotient.quotient.lift();
    solve_within(ef.field(), &maps, |psi| {
        let image = l.basis().mul(psi).expect("dimensions");
        let (q0, qe) = ef.pair(&image, &lift).expect("dimensions");
        vec![symmetrized(q0), symmetrized(qe)]
    })
}

fn require_largest_stratum(l: &Submodule) -> Result<usize> {
    let i = l.projection().cols();
    let k = l.r() / 2;
    if i + 1 < k {
        return Err(Error::NotLargestStratum { i, k });
    }
    Ok(i)
}

pub fn skew_tangent_dim(ef: &ExtendedForm, l: &Submodule) -> Result<TangentReport> {
    ef.require_lagrangian(l)?;
    let i = require_largest_stratum(l)?;
    let mut report = tangent_dim(l);
    report.skew_dim = Some(skew_hom0_basis(ef, l).len());
    report.expected_dim = expected_skew_dim(l.r(), i);
    Ok(report)
}

/// `ε`-coefficient of the `K[ε]`-trace of an endomorphism of `L`, read in an
/// adapted basis `[x | εx | y]`.
pub fn eps_trace(module: &EpsModule, t: &ExactMatrix) -> crate::field::Scalar {
    let field = module.field();
    let image = module.eps.column_span();
    let f = image.cols();
    let x = module
        .eps
        .solve(&image)
        .expect("same field")
        .expect("image vectors have preimages");
    let kernel = module.eps.kernel_basis();
    let pivots = image.hcat(&kernel).expect("same field").reduced_form().pivots;
    let extra: Vec<usize> = pivots.iter().filter(|&&p| p >= f).map(|&p| p - f).collect();
    let y = kernel.select_columns(&extra);
    let basis = x.hcat(&image).and_then(|b| b.hcat(&y)).expect("same field");
    let inv = basis.inverse().expect("adapted basis");
    let local = inv.mul(t).and_then(|m| m.mul(&basis)).expect("dimensions");
    (0..f).fold(field.zero(), |acc, k| &acc + local.get(f + k, k))
}

/// Skew tangent dimensions of `L` and of `W/L`, with the rank of the trace
/// pairing between the two skew spaces.
pub fn duality_check(ef: &ExtendedForm, l: &Submodule) -> Result<TangentReport> {
    let mut report = skew_tangent_dim(ef, l)?;
    let phis = skew_hom0_basis(ef, l);
    let psis = dual_skew_hom0_basis(ef, l);
    report.dual_skew_dim = Some(psis.len());
    let module = l.as_module();
    let field = ef.field();
    let mut pairing = ExactMatrix::zeros(field, phis.len(), psis.len());
    for (s, phi) in phis.iter().enumerate() {
        for (t, psi) in psis.iter().enumerate() {
            let comp = psi.mul(phi).expect("dimensions");
            pairing.set(s, t, eps_trace(&module, &comp));
        }
    }
    report.pairing_rank = Some(pairing.rank());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_module::Ambient;
    use crate::quad_space::QuadraticSpace;
    use crate::strata::{lagrangian_from_skew, SkewDatum};

    #[test]
    fn trivial_stratum_has_no_tangent() {
        let q = FieldSpec::rationals();
        let rep = tangent_dim(&Ambient::new(4, q).eps_space());
        assert_eq!((rep.dim_hom0, rep.expected_dim), (0, 0));
    }

    #[test]
    fn skew_dims_in_rank_four() {
        let q = FieldSpec::rationals();
        let ef = QuadraticSpace::hyperbolic(4, q).extend();
        let plane = ExactMatrix::from_ints(q, &[[1, 0], [0, 1], [0, 0], [0, 0]]);
        let s = SkewDatum::new(plane, ExactMatrix::from_ints(q, &[[0, 1], [-1, 0]])).unwrap();
        let l = lagrangian_from_skew(&ef, &s).unwrap();
        let rep = duality_check(&ef, &l).unwrap();
        assert_eq!(rep.dim_hom0, 8);
        assert_eq!(rep.skew_dim, Some(2));
        assert_eq!(rep.dual_skew_dim, Some(2));
    }

    #[test]
    fn lower_strata_are_rejected() {
        let q = FieldSpec::rationals();
        let ef = QuadraticSpace::hyperbolic(6, q).extend();
        let e = ef.ambient().eps_space();
        assert_eq!(
            skew_tangent_dim(&ef, &e),
            Err(Error::NotLargestStratum { i: 0, k: 3 })
        );
    }

    #[test]
    fn eps_trace_of_identity_on_free_module() {
        let q = FieldSpec::rationals();
        let m = EpsModule::standard(q, 2, 1);
        // multiplication by ε has ε-trace equal to the free rank
        assert_eq!(eps_trace(&m, &m.eps), q.int(2));
        assert_eq!(eps_trace(&m, &ExactMatrix::identity(q, 5)), q.zero());
    }
}
