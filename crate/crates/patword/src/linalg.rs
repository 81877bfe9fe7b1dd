//! Exact rational nullspaces for the guessing ansatz systems.
//!
//! The reference path is exact Gaussian elimination: rows are scaled to
//! integers and brought to echelon form fraction-free (each step divides out
//! the previous pivot, which is exact by the Sylvester minor identity), with
//! the pivot inside a column chosen by smallest bit size to bound entry
//! growth. Nullspace basis vectors come out of back-substitution, one per
//! free column, normalized to primitive integer vectors with positive
//! leading entry — so any two representatives of the same one-dimensional
//! nullspace normalize identically.
//!
//! A cheap screen over the word-size prime 2^61 - 1 is used to skip the
//! empty-nullspace cells of a degree sweep: full column rank mod p implies
//! full column rank over the rationals. Returned results always come from
//! the exact elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Modulus for the pre-screen: the Mersenne prime 2^61 - 1.
pub const SCREEN_PRIME: u64 = (1 << 61) - 1;

pub fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % SCREEN_PRIME as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= SCREEN_PRIME;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(SCREEN_PRIME));
    pow_mod(a, SCREEN_PRIME - 2)
}

/// Residue of a big integer mod the screen prime.
pub fn bigint_residue(x: &BigInt) -> u64 {
    let m = x.mod_floor(&BigInt::from(SCREEN_PRIME));
    let (_, digits) = m.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Residue of a rational mod the screen prime; `None` when the denominator
/// vanishes mod p (callers then skip the screen and solve exactly).
pub fn rational_residue(x: &BigRational) -> Option<u64> {
    let den = bigint_residue(x.denom());
    if den == 0 {
        return None;
    }
    Some(mul_mod(bigint_residue(x.numer()), inv_mod(den)))
}

/// Dimension of the nullspace of the matrix mod p.
// Row elimination reads the pivot row while writing another; index loops are
// the readable form here.
#[allow(clippy::needless_range_loop)]
pub fn nullity_mod_p(rows: &[Vec<u64>], ncols: usize) -> usize {
    let mut rows: Vec<Vec<u64>> = rows.to_vec();
    let nr = rows.len();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(sel) = (rank..nr).find(|&r| !rows[r][col].is_multiple_of(SCREEN_PRIME)) else {
            continue;
        };
        rows.swap(rank, sel);
        let inv = inv_mod(rows[rank][col]);
        for c in col..ncols {
            rows[rank][c] = mul_mod(rows[rank][c], inv);
        }
        for r in 0..nr {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in col..ncols {
                    let sub = mul_mod(factor, rows[rank][c]);
                    rows[r][c] = (rows[r][c] + SCREEN_PRIME - sub) % SCREEN_PRIME;
                }
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    ncols - rank
}

/// Exact nullspace basis of a rational matrix, one primitive integer vector
/// per free column, in free-column order, each with its first nonzero entry
/// positive.
pub fn rational_nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigInt>> {
    let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|row| scale_row(row)).collect();
    integer_nullspace(int_rows, ncols)
}

// Clear denominators of one row; row scaling does not change the nullspace.
fn scale_row(row: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for entry in row {
        lcm = lcm.lcm(entry.denom());
    }
    row.iter()
        .map(|entry| entry.numer() * (&lcm / entry.denom()))
        .collect()
}

/// Exact nullspace basis of an integer matrix; see [`rational_nullspace`].
pub fn integer_nullspace(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    for row in &rows {
        assert_eq!(row.len(), ncols, "ragged matrix");
    }
    let nr = rows.len();
    let mut prev_pivot = BigInt::one();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;

    for col in 0..ncols {
        // Pivot by smallest bit size among the nonzero candidates.
        let best = rows
            .iter()
            .enumerate()
            .skip(rank)
            .filter(|(_, row)| !row[col].is_zero())
            .min_by_key(|(_, row)| row[col].bits());
        let Some((sel, _)) = best else {
            continue;
        };
        rows.swap(rank, sel);

        let (pivot_row, lower) = {
            let (head, tail) = rows.split_at_mut(rank + 1);
            (&head[rank], tail)
        };
        let pivot = pivot_row[col].clone();
        for row in lower.iter_mut() {
            if row[col].is_zero() {
                // Still rescale so the row stays a minor of the original
                // matrix; division by the previous pivot remains exact.
                for entry in row.iter_mut().skip(col + 1) {
                    if !entry.is_zero() {
                        *entry = &(&pivot * &*entry) / &prev_pivot;
                    }
                }
            } else {
                let factor = row[col].clone();
                for c in (col + 1)..ncols {
                    let num = &pivot * &row[c] - &factor * &pivot_row[c];
                    row[c] = &num / &prev_pivot;
                }
                row[col] = BigInt::zero();
            }
        }
        prev_pivot = pivot;
        pivot_cols.push(col);
        rank += 1;
        if rank == nr {
            break;
        }
    }

    let free_cols: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &free in &free_cols {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        // Back-substitute through the pivot rows, bottom up.
        for k in (0..rank).rev() {
            let pc = pivot_cols[k];
            if pc > free {
                continue;
            }
            let mut acc = BigRational::zero();
            for c in (pc + 1)..=free {
                if !rows[k][c].is_zero() && !v[c].is_zero() {
                    acc += BigRational::from(rows[k][c].clone()) * &v[c];
                }
            }
            v[pc] = -acc / BigRational::from(rows[k][pc].clone());
        }
        basis.push(normalize_primitive(&v));
    }
    basis
}

/// Scale a rational vector to a primitive integer vector (content 1) whose
/// first nonzero entry is positive. Normalizing twice is a no-op.
pub fn normalize_primitive(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for entry in v {
        lcm = lcm.lcm(entry.denom());
    }
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|entry| entry.numer() * (&lcm / entry.denom()))
        .collect();
    let mut content = BigInt::zero();
    for entry in &ints {
        content = content.gcd(entry);
    }
    if !content.is_zero() && !content.is_one() {
        for entry in &mut ints {
            *entry = &*entry / &content;
        }
    }
    if let Some(first) = ints.iter().find(|e| !e.is_zero()) {
        if first.is_negative() {
            for entry in &mut ints {
                *entry = -&*entry;
            }
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|row| row.iter().map(|&x| rat(x)).collect())
            .collect()
    }

    #[test]
    fn simple_rank_one_matrix() {
        let rows = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let basis = rational_nullspace(&rows, 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for row in &rows {
                let dot: BigRational = row
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * BigRational::from(b.clone()))
                    .sum();
                assert!(dot.is_zero());
            }
        }
        // Primitive, deterministic, positive leading entry.
        assert_eq!(
            basis[0],
            vec![BigInt::from(2), BigInt::from(-1), BigInt::from(0)]
        );
        assert_eq!(
            basis[1],
            vec![BigInt::from(3), BigInt::from(0), BigInt::from(-1)]
        );
    }

    #[test]
    fn full_rank_has_empty_nullspace() {
        let rows = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(rational_nullspace(&rows, 2).is_empty());
    }

    #[test]
    fn rational_entries_are_handled() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let rows = vec![vec![half.clone(), rat(1)]];
        let basis = rational_nullspace(&rows, 2);
        assert_eq!(basis, vec![vec![BigInt::from(2), BigInt::from(-1)]]);
    }

    #[test]
    fn screen_nullity_matches_exact_on_small_cases() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![1, 2, 3], vec![2, 4, 6]],
            vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]],
            vec![vec![3, 1], vec![1, 2]],
        ];
        for case in cases {
            let ncols = case[0].len();
            let rat_rows: Vec<Vec<BigRational>> = case
                .iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect();
            let mod_rows: Vec<Vec<u64>> = case
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| bigint_residue(&BigInt::from(x)))
                        .collect()
                })
                .collect();
            assert_eq!(
                nullity_mod_p(&mod_rows, ncols),
                rational_nullspace(&rat_rows, ncols).len()
            );
        }
    }

    #[test]
    fn normalize_is_idempotent_and_sign_fixed() {
        let v = vec![rat(-4), rat(6), rat(-2)];
        let n1 = normalize_primitive(&v);
        assert_eq!(n1, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(1)]);
        let again = normalize_primitive(
            &n1.iter()
                .cloned()
                .map(BigRational::from)
                .collect::<Vec<_>>(),
        );
        assert_eq!(n1, again);
    }

    proptest! {
        #[test]
        fn nullspace_vectors_annihilate(entries in proptest::collection::vec(-6i64..6, 12)) {
            // 3 x 4 matrix: wide, so the nullspace is never empty.
            let rows: Vec<Vec<BigRational>> = entries
                .chunks(4)
                .map(|chunk| chunk.iter().map(|&x| rat(x)).collect())
                .collect();
            let basis = rational_nullspace(&rows, 4);
            prop_assert!(!basis.is_empty());
            for v in &basis {
                prop_assert!(v.iter().any(|e| !e.is_zero()));
                for row in &rows {
                    let dot: BigRational = row
                        .iter()
                        .zip(v)
                        .map(|(a, b)| a * BigRational::from(b.clone()))
                        .sum();
                    prop_assert!(dot.is_zero());
                }
            }
            // Mod-p nullity never undershoots the exact nullity.
            let mod_rows: Vec<Vec<u64>> = rows
                .iter()
                .map(|r| r.iter().map(|x| rational_residue(x).unwrap()).collect())
                .collect();
            prop_assert!(nullity_mod_p(&mod_rows, 4) >= basis.len());
        }
    }
}
