//! Modules over the dual numbers `K[ε]`.
//!
//! The ambient module is `W = V ⊕ εV` with `dim V = r`. Coordinates `0..r`
//! hold the `V`-part `a`, coordinates `r..2r` the `εV`-part `b`, and `ε` acts
//! by `(a, b) ↦ (0, a)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::{ExactMatrix, Quotient};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    r: usize,
    field: FieldSpec,
}

impl Ambient {
    pub fn new(r: usize, field: FieldSpec) -> Self {
        Self { r, field }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        2 * self.r
    }

    /// Matrix of `ε` on `W`.
    pub fn eps(&self) -> ExactMatrix {
        let mut e = ExactMatrix::zeros(self.field, self.dim(), self.dim());
        for i in 0..self.r {
            e.set(self.r + i, i, self.field.one());
        }
        e
    }

    /// Stacks `V`-parts over `εV`-parts: columns `(a_k, b_k)`.
    pub fn join(&self, a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
        a.vcat(b)
    }

    /// `εX` for columns `X` of `V`, i.e. `(0, x)`.
    pub fn eps_embed(&self, x: &ExactMatrix) -> ExactMatrix {
        ExactMatrix::zeros(self.field, self.r, x.cols())
            .vcat(x)
            .expect("same field")
    }

    /// `(x, 0)` for columns of `V`.
    pub fn plain_embed(&self, x: &ExactMatrix) -> ExactMatrix {
        x.vcat(&ExactMatrix::zeros(self.field, self.r, x.cols()))
            .expect("same field")
    }

    /// `V`-parts of columns of `W`.
    pub fn top(&self, w: &ExactMatrix) -> ExactMatrix {
        w.block(0, self.r, 0, w.cols())
    }

    /// `εV`-parts of columns of `W`.
    pub fn bottom(&self, w: &ExactMatrix) -> ExactMatrix {
        w.block(self.r, 2 * self.r, 0, w.cols())
    }

    /// The submodule `εV`.
    pub fn eps_space(&self) -> Submodule {
        let id = ExactMatrix::identity(self.field, self.r);
        Submodule {
            ambient: *self,
            basis: self.eps_embed(&id).column_span(),
        }
    }

    /// The whole of `W`.
    pub fn full(&self) -> Submodule {
        Submodule {
            ambient: *self,
            basis: ExactMatrix::identity(self.field, self.dim()),
        }
    }
}

/// Whether `span` (columns in `W`) is stable under `ε`.
pub fn is_eps_stable(ambient: &Ambient, columns: &ExactMatrix) -> bool {
    let image = ambient.eps().mul(columns).expect("ambient dimensions");
    columns.spans(&image).expect("same field")
}

/// An `ε`-stable subspace of `W`, stored by its canonical basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Submodule {
    ambient: Ambient,
    basis: ExactMatrix,
}

/// Builds a submodule from spanning columns; rank deficiency is tolerated.
pub fn make_submodule(ambient: Ambient, columns: &ExactMatrix) -> Result<Submodule> {
    Submodule::new(ambient, columns)
}

impl Submodule {
    pub fn new(ambient: Ambient, columns: &ExactMatrix) -> Result<Self> {
        if columns.field() != ambient.field() {
            return Err(Error::FieldMismatch);
        }
        if columns.rows() != ambient.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} rows, found {}",
                ambient.dim(),
                columns.rows()
            )));
        }
        let basis = columns.column_span();
        if !is_eps_stable(&ambient, &basis) {
            return Err(Error::NotEpsilonStable);
        }
        Ok(Self { ambient, basis })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn r(&self) -> usize {
        self.ambient.r
    }

    pub fn field(&self) -> FieldSpec {
        self.ambient.field
    }

    /// `π(L) ⊆ V`, canonical.
    pub fn projection(&self) -> ExactMatrix {
        self.ambient.top(&self.basis).column_span()
    }

    /// The subspace `G ⊆ V` with `L ∩ εV = εG`, canonical.
    pub fn eps_part(&self) -> ExactMatrix {
        let eps_v = self.ambient.eps_space();
        let meet = ExactMatrix::intersect_spans(&self.basis, &eps_v.basis).expect("same ambient");
        self.ambient.bottom(&meet).column_span()
    }

    pub fn contains(&self, vectors: &ExactMatrix) -> bool {
        self.basis.spans(vectors).expect("same field")
    }

    /// `L` as an abstract module, in coordinates of its canonical basis.
    pub fn as_module(&self) -> EpsModule {
        let image = self.ambient.eps().mul(&self.basis).expect("dimensions");
        let eps = self
            .basis
            .solve(&image)
            .expect("same field")
            .expect("submodule is eps-stable");
        EpsModule { eps }
    }

    /// `W/L`, in the complement coordinates of [`Quotient`].
    pub fn quotient(&self) -> QuotientModule {
        let quotient = Quotient::new(&self.basis);
        let eps = quotient
            .projection()
            .mul(&self.ambient.eps())
            .and_then(|m| m.mul(&quotient.lift()))
            .expect("dimensions");
        QuotientModule {
            quotient,
            module: EpsModule { eps },
        }
    }

    /// Module structure with bases of `L⁽¹⁾`, `L⁽²⁾` in ambient coordinates.
    pub fn structure(&self) -> ModuleStructure {
        let s = self.as_module().structure();
        ModuleStructure {
            l1_basis: self.basis.mul(&s.l1_basis).expect("dimensions").column_span(),
            l2_basis: self.basis.mul(&s.l2_basis).expect("dimensions").column_span(),
            ..s
        }
    }
}

/// `W/L` together with its induced `ε`-action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientModule {
    pub quotient: Quotient,
    pub module: EpsModule,
}

/// A finite-dimensional `K[ε]`-module given by the matrix of `ε`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsModule {
    pub eps: ExactMatrix,
}

/// Decomposition data `L ≅ K[ε]^f ⊕ K^g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleStructure {
    pub f: usize,
    pub g: usize,
    /// Basis of `L⁽¹⁾ = εL`.
    pub l1_basis: ExactMatrix,
    /// Basis of `L⁽²⁾ = ker ε`.
    pub l2_basis: ExactMatrix,
    pub torsion_degree: usize,
}

impl EpsModule {
    pub fn new(eps: ExactMatrix) -> Result<Self> {
        if !eps.is_square() {
            return Err(Error::DimensionMismatch("ε must be square".into()));
        }
        if !eps.mul(&eps)?.is_zero() {
            return Err(Error::DimensionMismatch("ε must square to zero".into()));
        }
        Ok(Self { eps })
    }

    /// `K[ε]^f ⊕ K^g` in the basis `(x₁, εx₁, …, x_f, εx_f, y₁, …, y_g)`.
    pub fn standard(field: FieldSpec, f: usize, g: usize) -> Self {
        let n = 2 * f + g;
        let mut eps = ExactMatrix::zeros(field, n, n);
        for k in 0..f {
            eps.set(2 * k + 1, 2 * k, field.one());
        }
        Self { eps }
    }

    pub fn dim(&self) -> usize {
        self.eps.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.eps.field()
    }

    pub fn structure(&self) -> ModuleStructure {
        let l1 = self.eps.column_span();
        let l2 = self.eps.kernel_basis().column_span();
        let f = l1.cols();
        let g = l2.cols() - f;
        ModuleStructure {
            f,
            g,
            l1_basis: l1,
            l2_basis: l2,
            torsion_degree: g,
        }
    }
}

/// Structure of `W/L` (the quotient computed through its complement basis).
pub fn quotient_structure(l: &Submodule) -> ModuleStructure {
    l.quotient().module.structure()
}

pub fn module_structure(l: &Submodule) -> ModuleStructure {
    l.structure()
}

/// `K[ε]`-linear maps `A → B`, as `dim B × dim A` matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpace {
    /// Basis of `Hom`; the first `restricted_basis.len()` entries span `Hom⁰`.
    pub basis: Vec<ExactMatrix>,
    /// Basis of `Hom⁰`: maps sending `ker ε` into `im ε`.
    pub restricted_basis: Vec<ExactMatrix>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn restricted_dim(&self) -> usize {
        self.restricted_basis.len()
    }
}

/// Solves `X ε_A = ε_B X`, and additionally `X(ker ε_A) ⊆ im ε_B` for `Hom⁰`.
pub fn hom_epsilon(a: &EpsModule, b: &EpsModule) -> Result<HomSpace> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let field = a.field();
    let (n, m) = (a.dim(), b.dim());
    let unknowns = m * n;
    let var = |i: usize, j: usize| i * n + j;

    let mut commute = ExactMatrix::zeros(field, unknowns, unknowns);
    for i in 0..m {
        for j in 0..n {
            let eq = var(i, j);
            // (X ε_A)_{ij} − (ε_B X)_{ij}
            for k in 0..n {
                let c = a.eps.get(k, j);
                if !c.is_zero() {
                    let v = var(i, k);
                    let cur = commute.get(eq, v).clone();
                    commute.set(eq, v, &cur + c);
                }
            }
            for k in 0..m {
                let c = b.eps.get(i, k);
                if !c.is_zero() {
                    let v = var(k, j);
                    let cur = commute.get(eq, v).clone();
                    commute.set(eq, v, &cur - c);
                }
            }
        }
    }

    let ker_a = a.eps.kernel_basis();
    let im_b = Quotient::new(&b.eps.column_span()).projection();
    let extra_rows = im_b.rows() * ker_a.cols();
    let mut restrict = ExactMatrix::zeros(field, extra_rows, unknowns);
    for s in 0..im_b.rows() {
        for c in 0..ker_a.cols() {
            let eq = s * ker_a.cols() + c;
            for i in 0..m {
                let pi = im_b.get(s, i);
                if pi.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let kj = ker_a.get(j, c);
                    if !kj.is_zero() {
                        restrict.set(eq, var(i, j), pi * kj);
                    }
                }
            }
        }
    }

    let hom = commute.kernel_basis();
    let hom0 = commute.vcat(&restrict)?.kernel_basis();
    // extend the Hom⁰ basis to a Hom basis by picking independent columns
    let combined = hom0.hcat(&hom)?;
    let pivots = combined.reduced_form().pivots;
    let to_map = |col: Vec<crate::field::Scalar>| {
        let rows: Vec<Vec<_>> = (0..m).map(|i| col[i * n..(i + 1) * n].to_vec()).collect();
        if n == 0 {
            ExactMatrix::zeros(field, m, 0)
        } else {
            ExactMatrix::from_rows(field, rows).expect("well formed")
        }
    };
    let restricted_basis: Vec<_> = (0..hom0.cols()).map(|j| to_map(hom0.column(j))).collect();
    let basis: Vec<_> = pivots.iter().map(|&j| to_map(combined.column(j))).collect();
    debug_assert_eq!(&basis[..restricted_basis.len()], &restricted_basis[..]);
    Ok(HomSpace {
        basis,
        restricted_basis,
    })
}

/// JSON shape of a submodule: `{"r", "field", "basis"}` with a `2r`-row basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubmoduleJson {
    pub r: usize,
    pub field: String,
    pub basis: Vec<Vec<String>>,
}

impl SubmoduleJson {
    pub fn from_submodule(l: &Submodule) -> Self {
        Self {
            r: l.r(),
            field: l.field().to_string(),
            basis: l.basis().rows_as_strings(),
        }
    }

    pub fn to_submodule(&self) -> Result<Submodule> {
        let field: FieldSpec = self.field.parse()?;
        let ambient = Ambient::new(self.r, field);
        let basis = if self.basis.is_empty() {
            ExactMatrix::zeros(field, 2 * self.r, 0)
        } else {
            ExactMatrix::parse_rows(field, &self.basis)?
        };
        Submodule::new(ambient, &basis)
    }
}
