//! Symmetric bilinear forms on `V` and their `K[ε]`-extension to `W`.
//!
//! For `b₁` on `V` the extension `b₂ = b₀ + ε·b_ε` on `W = V ⊕ εV` has the two
//! `K`-bilinear components
//! `b₀((a,b),(a',b')) = b₁(a,a')` and `b_ε((a,b),(a',b')) = b₁(a,b') + b₁(b,a')`.

use serde::{Deserialize, Serialize};

use crate::dual_module::{Ambient, Submodule};
use crate::enumerate::{self, check_guard, pow};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::ExactMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSpace {
    r: usize,
    field: FieldSpec,
    gram: ExactMatrix,
}

impl QuadraticSpace {
    /// Validates symmetry and nondegeneracy of the Gram matrix.
    pub fn new(gram: ExactMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::DegenerateForm("gram matrix is not symmetric".into()));
        }
        if gram.det()?.is_zero() {
            return Err(Error::DegenerateForm("gram matrix is singular".into()));
        }
        Ok(Self {
            r: gram.rows(),
            field: gram.field(),
            gram,
        })
    }

    /// Split form: `b(e_i, e_{r+1−i}) = 1`, plus a central `1` for odd `r`.
    pub fn hyperbolic(r: usize, field: FieldSpec) -> Self {
        let mut gram = ExactMatrix::zeros(field, r, r);
        for i in 0..r {
            gram.set(i, r - 1 - i, field.one());
        }
        Self { r, field, gram }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn ambient(&self) -> Ambient {
        Ambient::new(self.r, self.field)
    }

    /// `b₁(x, y)` for column vectors.
    pub fn pair(&self, x: &ExactMatrix, y: &ExactMatrix) -> Result<ExactMatrix> {
        x.transpose().mul(&self.gram)?.mul(y)
    }

    pub fn orthogonal_complement(&self, f: &ExactMatrix) -> Result<ExactMatrix> {
        if f.rows() != self.r {
            return Err(Error::DimensionMismatch("subspace not in V".into()));
        }
        Ok(f.transpose().mul(&self.gram)?.kernel_basis().column_span())
    }

    pub fn is_isotropic(&self, f: &ExactMatrix) -> Result<bool> {
        Ok(self.pair(f, f)?.is_zero())
    }

    pub fn extend(&self) -> ExtendedForm {
        let zero = ExactMatrix::zeros(self.field, self.r, self.r);
        let top = self.gram.hcat(&zero).expect("same field");
        let b0 = top.vcat(&zero.hcat(&zero).expect("same field")).expect("same field");
        let beps = zero
            .hcat(&self.gram)
            .and_then(|t| t.vcat(&self.gram.hcat(&zero)?))
            .expect("same field");
        ExtendedForm {
            space: self.clone(),
            b0,
            beps,
        }
    }

    /// Witt index and the defect `e ∈ {0, 1, 2}` (plus, parabolic, minus type).
    pub fn witt_type(&self) -> Result<(u64, u64)> {
        if self.field.is_rational() {
            return Err(Error::InvalidField("witt type is only computed over F_p".into()));
        }
        let r = self.r as u64;
        if r % 2 == 1 {
            return Ok(((r - 1) / 2, 1));
        }
        let sign = if (r / 2).is_multiple_of(2) { 1 } else { -1 };
        let disc = &self.field.int(sign) * &self.gram.det()?;
        Ok(if disc.is_square() { (r / 2, 0) } else { (r / 2 - 1, 2) })
    }

    /// Closed-form number of `i`-dimensional isotropic subspaces over `F_p`.
    pub fn isotropic_count(&self, i: usize) -> Result<u128> {
        let q = self.field.order().expect("checked by witt_type");
        let (w, e) = self.witt_type()?;
        let i = i as u64;
        if i > w {
            return Ok(0);
        }
        let mut n = enumerate::gaussian_binomial(w, i, q);
        for j in 1..=i {
            n *= pow(q, w - j + e) + 1;
        }
        Ok(n)
    }

    /// Every `i`-dimensional isotropic subspace, canonical and sorted.
    pub fn enumerate_isotropic(&self, i: usize) -> Result<Vec<ExactMatrix>> {
        let p = self
            .field
            .order()
            .ok_or_else(|| Error::InvalidField("enumeration needs a prime field".into()))?;
        if i > self.r / 2 {
            return Err(Error::OutOfRange(format!("isotropic dimension {i} exceeds r/2")));
        }
        check_guard(pow(p, (i * self.r) as u64))?;
        let mut out = Vec::new();
        enumerate::for_each_subspace(self.field, self.r, i, |f| {
            if self.pair(f, f).expect("dimensions").is_zero() {
                out.push(f.clone());
            }
        })?;
        out.sort_by(|a, b| a.entries().iter().map(Scalar::residue).cmp(b.entries().iter().map(Scalar::residue)));
        Ok(out)
    }
}

/// The two `K`-bilinear components of `b₂` on `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedForm {
    space: QuadraticSpace,
    b0: ExactMatrix,
    beps: ExactMatrix,
}

/// Outcome of a Lagrangian test; `failures` names every violated condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianCheck {
    pub failures: Vec<String>,
}

impl LagrangianCheck {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl ExtendedForm {
    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn b0(&self) -> &ExactMatrix {
        &self.b0
    }

    pub fn beps(&self) -> &ExactMatrix {
        &self.beps
    }

    pub fn r(&self) -> usize {
        self.space.r
    }

    pub fn field(&self) -> FieldSpec {
        self.space.field
    }

    pub fn ambient(&self) -> Ambient {
        self.space.ambient()
    }

    /// `q₂(w) = b₂(w, w)` as its pair of components `(q₀, q_ε)`.
    pub fn q2(&self, w: &ExactMatrix) -> Result<(Scalar, Scalar)> {
        let wt = w.transpose();
        let q0 = wt.mul(&self.b0)?.mul(w)?;
        let qe = wt.mul(&self.beps)?.mul(w)?;
        Ok((q0.get(0, 0).clone(), qe.get(0, 0).clone()))
    }

    /// Both components of `b₂` between two column families.
    pub fn pair(&self, x: &ExactMatrix, y: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix)> {
        let xt = x.transpose();
        Ok((xt.mul(&self.b0)?.mul(y)?, xt.mul(&self.beps)?.mul(y)?))
    }

    pub fn check_lagrangian(&self, l: &Submodule) -> LagrangianCheck {
        let mut failures = Vec::new();
        if l.field() != self.field() || l.r() != self.r() {
            failures.push("different ambient".to_string());
            return LagrangianCheck { failures };
        }
        if l.dim() != self.r() {
            failures.push(format!("dimension {} differs from r = {}", l.dim(), self.r()));
        }
        let (p0, pe) = self.pair(l.basis(), l.basis()).expect("dimensions");
        if !p0.is_zero() {
            failures.push("constant component of the form does not vanish".to_string());
        }
        if !pe.is_zero() {
            failures.push("ε component of the form does not vanish".to_string());
        }
        LagrangianCheck { failures }
    }

    pub fn is_lagrangian(&self, l: &Submodule) -> bool {
        self.check_lagrangian(l).ok()
    }

    pub fn require_lagrangian(&self, l: &Submodule) -> Result<()> {
        let check = self.check_lagrangian(l);
        if check.ok() {
            Ok(())
        } else {
            Err(Error::NotLagrangian(check.failures.join("; ")))
        }
    }

    /// Component index `m ∈ {0, 1}` with `m(εV) = 0`.
    pub fn component_index(&self, l: &Submodule) -> Result<u8> {
        self.require_lagrangian(l)?;
        let by_projection = l.projection().cols() % 2;
        let by_kernel = (self.r() - l.eps_part().cols()) % 2;
        assert_eq!(by_projection, by_kernel, "component index computations disagree");
        Ok(by_projection as u8)
    }
}

/// Parses `"hyperbolic"` or a rows-format Gram matrix.
pub fn gram_from_json(value: &serde_json::Value, r: usize, field: FieldSpec) -> Result<ExactMatrix> {
    match value {
        serde_json::Value::String(s) if s == "hyperbolic" => {
            Ok(QuadraticSpace::hyperbolic(r, field).gram().clone())
        }
        serde_json::Value::Array(_) => {
            let rows: Vec<Vec<String>> = serde_json::from_value(value.clone())
                .map_err(|e| Error::Parse(format!("gram rows: {e}")))?;
            let rows: Vec<Vec<String>> = rows;
            ExactMatrix::parse_rows(field, &rows)
        }
        serde_json::Value::Object(_) => ExactMatrix::from_json_value(value),
        _ => Err(Error::Parse("gram must be \"hyperbolic\" or a rows array".into())),
    }
}

/// JSON shape `{"r", "field", "gram": rows | "hyperbolic"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadraticSpaceJson {
    pub r: usize,
    pub field: String,
    pub gram: serde_json::Value,
}

impl QuadraticSpaceJson {
    pub fn to_space(&self) -> Result<QuadraticSpace> {
        let field: FieldSpec = self.field.parse()?;
        let gram = gram_from_json(&self.gram, self.r, field)?;
        if gram.rows() != self.r {
            return Err(Error::DimensionMismatch("gram size differs from r".into()));
        }
        QuadraticSpace::new(gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual_module::make_submodule;

    fn f3() -> FieldSpec {
        FieldSpec::prime(3).unwrap()
    }

    #[test]
    fn hyperbolic_examples() {
        let q = FieldSpec::rationals();
        let h2 = QuadraticSpace::hyperbolic(2, q);
        assert_eq!(h2.gram(), &ExactMatrix::from_ints(q, &[[0, 1], [1, 0]]));
        let h3 = QuadraticSpace::hyperbolic(3, q);
        assert_eq!(h3.gram().det().unwrap(), q.int(-1));
        let h4 = QuadraticSpace::hyperbolic(4, f3());
        assert_eq!(h4.enumerate_isotropic(1).unwrap().len(), 16);
        assert_eq!(h4.isotropic_count(1).unwrap(), 16);
        assert_eq!(h4.isotropic_count(2).unwrap(), 8);
    }

    #[test]
    fn extension_components() {
        let q = FieldSpec::rationals();
        let s = QuadraticSpace::new(ExactMatrix::from_ints(q, &[[1]])).unwrap();
        let ef = s.extend();
        assert_eq!(ef.b0(), &ExactMatrix::from_ints(q, &[[1, 0], [0, 0]]));
        assert_eq!(ef.beps(), &ExactMatrix::from_ints(q, &[[0, 1], [1, 0]]));
        let ef2 = QuadraticSpace::hyperbolic(2, q).extend();
        let b = QuadraticSpace::hyperbolic(2, q).gram().clone();
        let z = ExactMatrix::zeros(q, 2, 2);
        let expected = z.hcat(&b).unwrap().vcat(&b.hcat(&z).unwrap()).unwrap();
        assert_eq!(ef2.beps(), &expected);
        assert!(ef2.beps().det().unwrap() != q.zero());
    }

    #[test]
    fn complements() {
        let q = FieldSpec::rationals();
        let h2 = QuadraticSpace::hyperbolic(2, q);
        assert_eq!(h2.orthogonal_complement(&ExactMatrix::zeros(q, 2, 0)).unwrap().cols(), 2);
        let e1 = ExactMatrix::from_ints(q, &[[1], [0]]);
        assert_eq!(h2.orthogonal_complement(&e1).unwrap(), e1);
        let h4 = QuadraticSpace::hyperbolic(4, q);
        let plane = ExactMatrix::from_ints(q, &[[1, 0], [0, 1], [0, 0], [0, 0]]);
        assert_eq!(h4.orthogonal_complement(&plane).unwrap(), plane);
    }

    #[test]
    fn lagrangian_examples() {
        let q = FieldSpec::rationals();
        let ef = QuadraticSpace::hyperbolic(2, q).extend();
        let amb = ef.ambient();
        assert!(ef.is_lagrangian(&amb.eps_space()));
        assert_eq!(ef.component_index(&amb.eps_space()).unwrap(), 0);
        let free = make_submodule(amb, &ExactMatrix::from_ints(q, &[[1, 0], [0, 0], [0, 1], [0, 0]])).unwrap();
        assert!(ef.is_lagrangian(&free));
        assert_eq!(ef.component_index(&free).unwrap(), 1);
        let not_iso = ExactMatrix::from_ints(q, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
        let full = make_submodule(amb, &not_iso).unwrap();
        let check = ef.check_lagrangian(&full);
        assert!(!check.ok());
        assert!(matches!(ef.component_index(&full), Err(Error::NotLagrangian(_))));
    }

    #[test]
    fn isotropic_enumeration_examples() {
        let h3 = QuadraticSpace::hyperbolic(3, f3());
        assert_eq!(h3.enumerate_isotropic(1).unwrap().len(), 4);
        for p in [3, 5, 7] {
            let h2 = QuadraticSpace::hyperbolic(2, FieldSpec::prime(p).unwrap());
            assert_eq!(h2.enumerate_isotropic(1).unwrap().len(), 2);
        }
        let zero = h3.enumerate_isotropic(0).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].cols(), 0);
    }
}
