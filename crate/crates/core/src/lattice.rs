//! `K[t]`-lattices in `K(t)^r` that agree with `K[t]^r` away from `t = 0`.
//!
//! A lattice `M` with `t^hi·K[t]^r ⊆ M ⊆ t^lo·K[t]^r` is stored as the
//! subspace `M / t^hi·K[t]^r` of the coefficient window spanned by
//! `t^k·e_i`, `lo ≤ k < hi`; the coordinate of `t^k·e_i` is `(k − lo)·r + i`.
//! On a split bundle `⊕ O(a_i)` over the projective line, such a lattice
//! describes a modification at `t = 0`, and its splitting type is recovered
//! from the dimensions `h⁰(E'(m))`.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::ExactMatrix;

/// Columns of Laurent polynomial vectors with exponents in `[lo, lo + len)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent {
    pub r: usize,
    pub lo: i64,
    pub data: ExactMatrix,
}

impl Laurent {
    pub fn len(&self) -> i64 {
        (self.data.rows() / self.r.max(1)) as i64
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.len()
    }

    pub fn cols(&self) -> usize {
        self.data.cols()
    }

    pub fn field(&self) -> FieldSpec {
        self.data.field()
    }

    /// Constant vectors (exponent 0).
    pub fn constant(v: &ExactMatrix) -> Self {
        Self {
            r: v.rows(),
            lo: 0,
            data: v.clone(),
        }
    }

    /// `r × cols` coefficient block of `t^k`.
    pub fn coeff(&self, k: i64) -> ExactMatrix {
        let field = self.field();
        if k < self.lo || k >= self.hi() {
            return ExactMatrix::zeros(field, self.r, self.cols());
        }
        let start = ((k - self.lo) as usize) * self.r;
        self.data.block(start, start + self.r, 0, self.cols())
    }

    /// Re-expresses the columns in the window `[lo, hi)`. Coefficients at
    /// `t^k` with `k ≥ hi` are dropped; those below `lo` must vanish.
    pub fn to_window(&self, lo: i64, hi: i64) -> Self {
        let field = self.field();
        let r = self.r;
        let mut data = ExactMatrix::zeros(field, ((hi - lo).max(0) as usize) * r, self.cols());
        for k in self.lo..self.hi() {
            let block = self.coeff(k);
            if k < lo {
                assert!(block.is_zero(), "dropping a nonzero coefficient below the window");
                continue;
            }
            if k >= hi {
                continue;
            }
            let base = ((k - lo) as usize) * r;
            for i in 0..r {
                for j in 0..self.cols() {
                    data.set(base + i, j, block.get(i, j).clone());
                }
            }
        }
        Self { r, lo, data }
    }

    /// Multiplication by `t^d`.
    pub fn shift(&self, d: i64) -> Self {
        Self {
            lo: self.lo + d,
            ..self.clone()
        }
    }

    /// Right multiplication by a constant matrix (recombining columns).
    pub fn mul_const(&self, m: &ExactMatrix) -> Self {
        Self {
            r: self.r,
            lo: self.lo,
            data: self.data.mul(m).expect("dimensions"),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let a = self.to_window(lo, hi);
        let b = other.to_window(lo, hi);
        Self {
            r: self.r,
            lo,
            data: a.data.add(&b.data).expect("same shape"),
        }
    }

    pub fn hcat(&self, other: &Self) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let a = self.to_window(lo, hi);
        let b = other.to_window(lo, hi);
        Self {
            r: self.r,
            lo,
            data: a.data.hcat(&b.data).expect("same field"),
        }
    }

    /// Lowest exponent carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (self.lo..self.hi()).find(|&k| !self.coeff(k).is_zero())
    }
}

/// A Laurent polynomial matrix `Σ_m C_m t^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    pub lo: i64,
    pub coeffs: Vec<ExactMatrix>,
}

impl LaurentMatrix {
    pub fn coeff(&self, m: i64) -> Option<&ExactMatrix> {
        if m < self.lo {
            return None;
        }
        self.coeffs.get((m - self.lo) as usize)
    }

    /// Whether every coefficient of a negative power vanishes.
    pub fn is_regular(&self) -> bool {
        (self.lo..0).all(|m| self.coeff(m).is_none_or(ExactMatrix::is_zero))
    }

    pub fn constant_term(&self, rows: usize, field: FieldSpec) -> ExactMatrix {
        self.coeff(0)
            .cloned()
            .unwrap_or_else(|| ExactMatrix::zeros(field, rows, rows))
    }
}

/// Gram matrix `b(s_a, s_b)` of Laurent vectors under a constant form `G`.
pub fn laurent_gram(gram: &ExactMatrix, s: &Laurent) -> LaurentMatrix {
    let field = gram.field();
    let n = s.cols();
    let lo = 2 * s.lo;
    let len = (2 * s.len() - 1).max(0) as usize;
    let mut coeffs = vec![ExactMatrix::zeros(field, n, n); len];
    let blocks: Vec<ExactMatrix> = (s.lo..s.hi()).map(|k| s.coeff(k)).collect();
    let left: Vec<ExactMatrix> = blocks
        .iter()
        .map(|b| b.transpose().mul(gram).expect("dimensions"))
        .collect();
    for (x, lb) in left.iter().enumerate() {
        if blocks[x].is_zero() {
            continue;
        }
        for (y, rb) in blocks.iter().enumerate() {
            if rb.is_zero() {
                continue;
            }
            let term = lb.mul(rb).expect("dimensions");
            coeffs[x + y] = coeffs[x + y].add(&term).expect("same shape");
        }
    }
    LaurentMatrix { lo, coeffs }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    r: usize,
    field: FieldSpec,
    lo: i64,
    hi: i64,
    span: ExactMatrix,
}

impl Lattice {
    /// `K[t]^r`.
    pub fn standard(r: usize, field: FieldSpec) -> Self {
        Self {
            r,
            field,
            lo: 0,
            hi: 0,
            span: ExactMatrix::zeros(field, 0, 0),
        }
    }

    /// Lattice generated by `gens` over `K[t]` together with `t^hi·K[t]^r`.
    pub fn generated(r: usize, field: FieldSpec, gens: &Laurent, hi: i64) -> Self {
        let lo = gens.lo.min(hi);
        let window = gens.to_window(lo, hi);
        let mut lat = Self {
            r,
            field,
            lo,
            hi,
            span: window.data.column_span(),
        };
        lat.saturate();
        lat
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    fn window_dim(&self) -> usize {
        ((self.hi - self.lo) as usize) * self.r
    }

    /// Spanning vectors of `M / t^hi` as Laurent columns.
    pub fn truncated(&self) -> Laurent {
        Laurent {
            r: self.r,
            lo: self.lo,
            data: if self.span.rows() == self.window_dim() {
                self.span.clone()
            } else {
                ExactMatrix::zeros(self.field, self.window_dim(), 0)
            },
        }
    }

    /// Closes the stored span under multiplication by `t`.
    fn saturate(&mut self) {
        loop {
            let shifted = self.truncated().shift(1).to_window(self.lo, self.hi);
            if self.span.spans(&shifted.data).expect("same field") {
                return;
            }
            self.span = self.span.hcat(&shifted.data).expect("same field").column_span();
        }
    }

    /// Same lattice stored in the wider window `[lo, hi)`.
    pub fn with_window(&self, lo: i64, hi: i64) -> Self {
        assert!(lo <= self.lo && hi >= self.hi, "windows only grow");
        let r = self.r;
        let old = self.truncated().to_window(lo, hi);
        let mut extra = ExactMatrix::zeros(self.field, ((hi - lo) as usize) * r, ((hi - self.hi) as usize) * r);
        for k in self.hi..hi {
            for i in 0..r {
                let col = ((k - self.hi) as usize) * r + i;
                extra.set(((k - lo) as usize) * r + i, col, self.field.one());
            }
        }
        Self {
            r,
            field: self.field,
            lo,
            hi,
            span: old.data.hcat(&extra).expect("same field").column_span(),
        }
    }

    /// `t^d·M`.
    pub fn shift(&self, d: i64) -> Self {
        Self {
            lo: self.lo + d,
            hi: self.hi + d,
            ..self.clone()
        }
    }

    /// Whether every column of `s` lies in `M`.
    pub fn contains(&self, s: &Laurent) -> bool {
        if s.cols() == 0 {
            return true;
        }
        let lo = self.lo.min(s.lo);
        let wide = self.with_window(lo, self.hi.max(s.hi()));
        let v = s.to_window(wide.lo, wide.hi);
        wide.span.spans(&v.data).expect("same field")
    }

    pub fn same_as(&self, other: &Self) -> bool {
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        self.with_window(lo, hi).span == other.with_window(lo, hi).span
    }

    /// `r` elements of `M` whose images form a basis of `M/tM`.
    pub fn local_basis(&self) -> Laurent {
        let ext = self.with_window(self.lo, self.hi + 1);
        let t_m = self.truncated().shift(1).to_window(ext.lo, ext.hi);
        let pivots = t_m
            .data
            .hcat(&ext.span)
            .expect("same field")
            .reduced_form()
            .pivots;
        let base = t_m.data.cols();
        let picks: Vec<usize> = pivots.iter().filter(|&&p| p >= base).map(|&p| p - base).collect();
        assert_eq!(picks.len(), self.r, "M/tM must have dimension r");
        Laurent {
            r: self.r,
            lo: ext.lo,
            data: ext.span.select_columns(&picks),
        }
    }

    /// Coordinates `(c₀; c₁)` of elements `s = Σ (c₀ + t·c₁)_j b_j mod t²M`.
    pub fn fiber_coords(&self, basis: &Laurent, s: &Laurent) -> Result<ExactMatrix> {
        let (lo, hi) = (self.lo.min(basis.lo).min(s.lo), self.hi + 2);
        let system = basis
            .hcat(&basis.shift(1))
            .hcat(&self.truncated().shift(2))
            .to_window(lo, hi);
        let rhs = s.to_window(lo, hi);
        let sol = system
            .data
            .solve(&rhs.data)?
            .ok_or_else(|| Error::DimensionMismatch("element is not in the lattice".into()))?;
        Ok(sol.block(0, 2 * self.r, 0, s.cols()))
    }

    /// Coordinates of elements modulo `tM` in the given local basis.
    pub fn first_order_coords(&self, basis: &Laurent, s: &Laurent) -> Result<ExactMatrix> {
        let (lo, hi) = (self.lo.min(basis.lo).min(s.lo), self.hi + 1);
        let system = basis.hcat(&self.truncated().shift(1)).to_window(lo, hi);
        let rhs = s.to_window(lo, hi);
        let sol = system
            .data
            .solve(&rhs.data)?
            .ok_or_else(|| Error::DimensionMismatch("element is not in the lattice".into()))?;
        Ok(sol.block(0, self.r, 0, s.cols()))
    }

    /// `{Σ c_j(t) b_j : (c(0), c'(0)) ∈ P} = lifts(P) + t²M`, for `P ⊆ K^{2r}`.
    pub fn modify(&self, basis: &Laurent, p: &ExactMatrix) -> Self {
        let r = self.r;
        let pa = p.block(0, r, 0, p.cols());
        let pb = p.block(r, 2 * r, 0, p.cols());
        let lifts = basis.mul_const(&pa).add(&basis.mul_const(&pb).shift(1));
        let gens = lifts.hcat(&self.truncated().shift(2));
        Self::generated(r, self.field, &gens, self.hi + 2).trimmed(self.lo)
    }

    /// `lifts(Q) + tM`, for `Q ⊆ K^r` in the given local basis.
    pub fn modify_first_order(&self, basis: &Laurent, q: &ExactMatrix) -> Self {
        let lifts = basis.mul_const(q);
        let gens = lifts.hcat(&self.truncated().shift(1));
        Self::generated(self.r, self.field, &gens, self.hi + 1).trimmed(self.lo)
    }

    fn trimmed(self, lo: i64) -> Self {
        if self.lo >= lo {
            return self;
        }
        let span = Laurent {
            r: self.r,
            lo: self.lo,
            data: self.span.clone(),
        }
        .to_window(lo, self.hi)
        .data
        .column_span();
        Self { lo, span, ..self }
    }

    /// `h⁰(E'(m))` for the modification of `⊕ O(a_i)` described by `M`,
    /// evaluated on every `m` in `ms`.
    pub fn h0_values(&self, degrees: &[i64], ms: &[i64]) -> Vec<usize> {
        let r = self.r;
        assert_eq!(degrees.len(), r);
        // order the window coordinates by κ = k − a_i, descending
        let mut coords: Vec<(i64, usize)> = (self.lo..self.hi)
            .flat_map(|k| (0..r).map(move |i| (k, i)))
            .map(|(k, i)| (k - degrees[i], ((k - self.lo) as usize) * r + i))
            .collect();
        coords.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let order: Vec<usize> = coords.iter().map(|c| c.1).collect();
        let rows = self.span.transpose();
        let permuted = if rows.rows() == 0 {
            ExactMatrix::zeros(self.field, 0, order.len())
        } else {
            rows.select_columns(&order)
        };
        let pivots = permuted.reduced_form().pivots;
        let dim = self.span.cols();
        ms.iter()
            .map(|&m| {
                let above = coords.iter().filter(|c| c.0 > m).count();
                let lost = pivots.iter().filter(|&&p| p < above).count();
                let tail: i64 = degrees.iter().map(|&a| (a + m - self.hi + 1).max(0)).sum();
                tail as usize + dim - lost
            })
            .collect()
    }

    /// Splitting type (sorted descending) of the modification of `⊕ O(a_i)`.
    pub fn splitting_type(&self, degrees: &[i64]) -> Result<Vec<i64>> {
        let r = self.r as i64;
        let max_a = degrees.iter().copied().max().unwrap_or(0);
        let min_a = degrees.iter().copied().min().unwrap_or(0);
        let max_abs = degrees.iter().map(|a| a.abs()).max().unwrap_or(0);
        let m_lo = (-max_a - 3).min(self.lo - max_a - 1);
        let m_hi = (max_abs + 3).max(self.hi - min_a);
        let ms: Vec<i64> = (m_lo - 2..=m_hi).collect();
        let h = self.h0_values(degrees, &ms);
        let delta = |m: i64| {
            let idx = (m - (m_lo - 2)) as usize;
            h[idx] as i64 - h[idx - 1] as i64
        };
        if delta(m_lo - 1) != 0 || delta(m_hi) != r {
            return Err(Error::OutOfRange("scan window does not cover the splitting type".into()));
        }
        let mut out = Vec::new();
        for m in m_lo..=m_hi {
            let mult = delta(m) - delta(m - 1);
            if mult < 0 {
                return Err(Error::OutOfRange("negative multiplicity in h0 scan".into()));
            }
            for _ in 0..mult {
                out.push(-m);
            }
        }
        if out.len() as i64 != r {
            return Err(Error::OutOfRange(format!("recovered {} degrees, expected {r}", out.len())));
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(out)
    }
}

/// `½`, which exists because the characteristic is odd or zero.
pub fn half(field: FieldSpec) -> Scalar {
    field.fraction(1, 2).expect("characteristic is not 2")
}
