//! Seeded random generation of valid inputs: flags, isotropic subspaces,
//! Lagrangians and bundles. Each instance draws from its own stream so that
//! results do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dual_module::{Ambient, Submodule};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::ExactMatrix;
use crate::quad_space::{ExtendedForm, QuadraticSpace};
use crate::strata::{lagrangian_from_skew, plain_strata_range, submodule_from_flag, FlagDatum, SkewDatum};

/// Generator for instance `stream` of a run seeded with `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform over `F_p`; small integers and halves over `Q`.
pub fn scalar<R: Rng>(rng: &mut R, field: FieldSpec) -> Scalar {
    match field.order() {
        Some(p) => field.int(rng.gen_range(0..p as i64)),
        None => {
            let num = rng.gen_range(-3..=3);
            let den = *[1, 1, 1, 2].choose(rng).expect("nonempty");
            field.fraction(num, den).expect("nonzero denominator")
        }
    }
}

pub fn matrix<R: Rng>(rng: &mut R, field: FieldSpec, rows: usize, cols: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, scalar(rng, field));
        }
    }
    m
}

/// Random `k`-dimensional subspace of `K^n`, canonical.
pub fn subspace<R: Rng>(rng: &mut R, field: FieldSpec, n: usize, k: usize) -> ExactMatrix {
    loop {
        let m = matrix(rng, field, n, k);
        if m.rank() == k {
            return m.column_span();
        }
    }
}

pub fn skew<R: Rng>(rng: &mut R, field: FieldSpec, k: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(field, k, k);
    for i in 0..k {
        for j in i + 1..k {
            let x = scalar(rng, field);
            m.set(j, i, -&x);
            m.set(i, j, x);
        }
    }
    m
}

/// Random `n`-dimensional submodule of `W`, drawn through its flag data.
pub fn flag_submodule<R: Rng>(rng: &mut R, ambient: Ambient, n: usize) -> (FlagDatum, Submodule) {
    let field = ambient.field();
    let r = ambient.r();
    let range: Vec<usize> = plain_strata_range(r, n).collect();
    let i = *range.choose(rng).expect("n ≤ 2r");
    let g = subspace(rng, field, r, n - i);
    let inner = subspace(rng, field, n - i, i);
    let f = g.mul(&inner).expect("dimensions").column_span();
    let phi = matrix(rng, field, r - (n - i), i);
    let d = FlagDatum { f, g, phi };
    let l = submodule_from_flag(ambient, &d).expect("valid flag");
    (d, l)
}

/// Random submodule spanned by up to `r` random vectors and their images
/// under `ε`; unlike [`flag_submodule`] this does not go through flag data.
pub fn spanned_submodule<R: Rng>(rng: &mut R, ambient: Ambient) -> Submodule {
    let field = ambient.field();
    let k = rng.gen_range(0..=ambient.r());
    let gens = matrix(rng, field, ambient.dim(), k);
    let eps = ambient.eps().mul(&gens).expect("dimensions");
    Submodule::new(ambient, &gens.hcat(&eps).expect("same field")).expect("closed under ε")
}

/// Reflection of `x` in the anisotropic vector `v`.
fn reflect(space: &QuadraticSpace, v: &ExactMatrix, x: &ExactMatrix) -> ExactMatrix {
    let vv = space.pair(v, v).expect("dimensions").get(0, 0).clone();
    let xv = space.pair(x, v).expect("dimensions");
    let inv = vv.inv().expect("anisotropic");
    let two = space.field().int(2);
    let coeff = xv.scale(&(&two * &inv));
    x.sub(&v.mul(&coeff.transpose()).expect("dimensions")).expect("same shape")
}

/// Random isotropic `i`-subspace of a split space: `span{e₁..e_i}` moved by
/// a few random reflections.
pub fn isotropic<R: Rng>(rng: &mut R, space: &QuadraticSpace, i: usize) -> ExactMatrix {
    let field = space.field();
    let r = space.r();
    let mut f = ExactMatrix::zeros(field, r, i);
    for k in 0..i {
        f.set(k, k, field.one());
    }
    assert!(space.is_isotropic(&f).expect("dimensions"), "reference subspace must be isotropic");
    let count = rng.gen_range(2..=3);
    let mut done = 0;
    while done < count {
        let v = matrix(rng, field, r, 1);
        if space.pair(&v, &v).expect("dimensions").get(0, 0).is_zero() {
            continue;
        }
        f = reflect(space, &v, &f);
        done += 1;
    }
    f.column_span()
}

/// Random Lagrangian of stratum `i` of a split space.
pub fn lagrangian<R: Rng>(rng: &mut R, ef: &ExtendedForm, i: usize) -> (SkewDatum, Submodule) {
    let f = isotropic(rng, ef.space(), i);
    let omega = skew(rng, ef.field(), i);
    let s = SkewDatum { f, omega };
    let l = lagrangian_from_skew(ef, &s).expect("isotropic by construction");
    (s, l)
}

/// `(d₁, …, d_k, [0], −d_k, …, −d₁)` with each `d_j` in `[−max, max]`, so
/// that the split form pairs opposite degrees.
pub fn symmetric_degrees<R: Rng>(rng: &mut R, r: usize, max: i64) -> Vec<i64> {
    let half: Vec<i64> = (0..r / 2).map(|_| rng.gen_range(-max..=max)).collect();
    let mut out = half.clone();
    if r % 2 == 1 {
        out.push(0);
    }
    out.extend(half.iter().rev().map(|d| -d));
    out
}
