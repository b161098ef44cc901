//! Exhaustive enumeration of subspaces of `F_p^n` by reduced echelon form,
//! plus the point-count formulas used to cross-check it.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::ExactMatrix;

/// Default cap on the number of candidates an enumeration may visit.
pub const DEFAULT_GUARD: u128 = 2_000_000;

/// Name of the environment variable that overrides [`DEFAULT_GUARD`].
pub const GUARD_ENV: &str = "ORTHO_HECKE_GUARD";

/// Active enumeration guard.
pub fn guard() -> u128 {
    std::env::var(GUARD_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_GUARD)
}

pub fn check_guard(estimate: u128) -> Result<()> {
    let guard = guard();
    if estimate > guard {
        return Err(Error::EnumerationTooLarge { estimate, guard });
    }
    Ok(())
}

/// `q^e`, saturating.
pub fn pow(q: u64, e: u64) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(q as u128))
}

/// Gaussian binomial `[n choose k]_q`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for j in 0..k {
        num *= pow(q, n - j) - 1;
        den *= pow(q, j + 1) - 1;
    }
    num / den
}

/// Number of flags `F ⊂ G ⊆ K^r` with `dim F = i`, `dim G = j` over `F_q`.
pub fn flag_count(r: u64, i: u64, j: u64, q: u64) -> u128 {
    if i > j {
        return 0;
    }
    gaussian_binomial(r, j, q) * gaussian_binomial(j, i, q)
}

/// Calls `visit` with the canonical column basis (`n × k`) of every
/// `k`-dimensional subspace of `F_p^n`, in a fixed order.
pub fn for_each_subspace<V>(field: FieldSpec, n: usize, k: usize, mut visit: V) -> Result<()>
where
    V: FnMut(&ExactMatrix),
{
    let p = field
        .order()
        .ok_or_else(|| Error::InvalidField("enumeration needs a prime field".into()))?;
    if k > n {
        return Ok(());
    }
    check_guard(gaussian_binomial(n as u64, k as u64, p))?;
    let elements = field.elements().expect("prime field");
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free slots: (row, col) right of the row's pivot and not a pivot column
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|row| {
                let pv = &pivots;
                (pv[row] + 1..n)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (row, c))
            })
            .collect();
        let mut digits = vec![0usize; free.len()];
        loop {
            let mut basis = ExactMatrix::zeros(field, n, k);
            for (row, &pc) in pivots.iter().enumerate() {
                basis.set(pc, row, field.one());
            }
            for (&(row, c), &d) in free.iter().zip(&digits) {
                basis.set(c, row, elements[d].clone());
            }
            visit(&basis);
            if !advance(&mut digits, p as usize) {
                break;
            }
        }
        if !next_combination(&mut pivots, n) {
            break;
        }
    }
    Ok(())
}

/// All `k`-dimensional subspaces of `F_p^n` as canonical column bases.
pub fn subspaces(field: FieldSpec, n: usize, k: usize) -> Result<Vec<ExactMatrix>> {
    let mut out = Vec::new();
    for_each_subspace(field, n, k, |b| out.push(b.clone()))?;
    Ok(out)
}

/// All vectors of `F_p^n` (as `n × 1` columns); includes zero.
pub fn vectors(field: FieldSpec, n: usize) -> Result<Vec<ExactMatrix>> {
    let p = field
        .order()
        .ok_or_else(|| Error::InvalidField("enumeration needs a prime field".into()))?;
    check_guard(pow(p, n as u64))?;
    let elements = field.elements().expect("prime field");
    let mut digits = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        let col: Vec<_> = digits.iter().map(|&d| elements[d].clone()).collect();
        out.push(ExactMatrix::column_vector(field, &col));
        if !advance(&mut digits, p as usize) {
            break;
        }
    }
    Ok(out)
}

/// All skew-symmetric `k × k` matrices over `F_p`.
pub fn skew_matrices(field: FieldSpec, k: usize) -> Result<Vec<ExactMatrix>> {
    let slots: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let vs = vectors(field, slots.len())?;
    Ok(vs
        .into_iter()
        .map(|v| {
            let mut m = ExactMatrix::zeros(field, k, k);
            for (s, &(i, j)) in slots.iter().enumerate() {
                m.set(i, j, v.get(s, 0).clone());
                m.set(j, i, -v.get(s, 0));
            }
            m
        })
        .collect())
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
