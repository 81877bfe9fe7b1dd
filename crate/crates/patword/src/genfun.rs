//! Weight enumerators for 123-avoiding words with r copies of each letter,
//! and the generating functions for words with exactly one 123.
//!
//! The table g_r^{(i,j)} (0 <= i <= j <= r-1) of avoider weight enumerators
//! satisfies the quadratic system
//!
//! ```text
//! g^(i,j) = d_{i,0} d_{j,0}
//!         + x * sum_{t=0}^{r-1} g^(i,t) * g^((r-t) mod r, (j-1) mod r)
//!         + sum_{m=0}^{i-1} x^(m+1) * g^(i-m, j-1)
//! ```
//!
//! with the convention g^(s,k) = g^(k,s) for s > k. Every right-hand term
//! carries a factor of x, so the system is an x-adic contraction: coefficient
//! m of each entry is determined by coefficients below m. The solver exploits
//! exactly that, fixing one coefficient order per sweep step, and then runs
//! one full substitution pass over the finished table; if that pass changes
//! anything the system was transcribed wrong and solving fails.
//!
//! From the table, the weight enumerator h_r for exactly-one-123 words is
//!
//! ```text
//! h_r = (1/x) * sum_{i=1}^{r} (g^(0, i mod r)     - x g^(0, i-1) - d_{i mod r, 0})
//!                           * (g^(0, (r+1-i) mod r) - x g^(0, r-i) - d_{(r+1-i) mod r, 0})
//! ```
//!
//! and the ordinary generating function f_r keeps every r-th coefficient of
//! h_r, so that coefficient n of f_r counts the words of length r*n.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::series::{SeriesError, TruncatedSeries};

/// Solved table of avoider weight enumerators for a fixed r.
#[derive(Debug, Clone)]
pub struct GTable {
    r: u32,
    order: usize,
    entries: Vec<TruncatedSeries>,
}

impl GTable {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Entry g^(i,j); indices beyond the stored triangle resolve through the
    /// symmetry g^(s,k) = g^(k,s).
    pub fn get(&self, i: u32, j: u32) -> &TruncatedSeries {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        assert!(j < self.r, "index ({i},{j}) outside table for r={}", self.r);
        &self.entries[triangle_index(self.r, i, j)]
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }
}

fn triangle_index(r: u32, i: u32, j: u32) -> usize {
    // Row-major over 0 <= i <= j <= r-1; row i starts after r + (r-1) + ...
    // + (r-i+1) earlier entries.
    let (r, i, j) = (r as usize, i as usize, j as usize);
    i * (2 * r - i + 1) / 2 + (j - i)
}

/// Solve the g-system for the given r, exactly, to the given truncation
/// order.
pub fn solve_g_system(r: u32, order: usize) -> Result<GTable, SeriesError> {
    assert!(r >= 1, "r must be positive");
    let rs = r as usize;
    let n_entries = rs * (rs + 1) / 2;
    let mut table: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); order + 1]; n_entries];

    // Frontier sweep: coefficient m of every entry depends only on
    // coefficients below m, so one pass in increasing m reaches the fixed
    // point. Each step plays the role of one substitution pass that fixes
    // the next coefficient order.
    for m in 0..=order {
        let mut new_coeffs = Vec::with_capacity(n_entries);
        for i in 0..r {
            for j in i..r {
                new_coeffs.push(rhs_coefficient(&table, r, i, j, m));
            }
        }
        let mut slot = 0;
        for i in 0..r {
            for j in i..r {
                table[triangle_index(r, i, j)][m] = new_coeffs[slot].clone();
                slot += 1;
            }
        }
    }

    // Verification pass: one more full substitution must change nothing.
    for i in 0..r {
        for j in i..r {
            for m in 0..=order {
                if rhs_coefficient(&table, r, i, j, m) != table[triangle_index(r, i, j)][m] {
                    return Err(SeriesError::NoConvergence(order + 2));
                }
            }
        }
    }

    Ok(GTable {
        r,
        order,
        entries: table.into_iter().map(TruncatedSeries::new).collect(),
    })
}

// Coefficient m of the right-hand side of the (i,j) equation, evaluated on
// the raw coefficient table.
fn rhs_coefficient(table: &[Vec<BigRational>], r: u32, i: u32, j: u32, m: usize) -> BigRational {
    let look = |a: u32, b: u32| -> &Vec<BigRational> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        &table[triangle_index(r, a, b)]
    };
    let mut total = BigRational::zero();
    if m == 0 && i == 0 && j == 0 {
        total += BigRational::one();
    }
    if m >= 1 {
        let jm1 = (j + r - 1) % r;
        for t in 0..r {
            let left = look(i, t);
            let right = look((r - t) % r, jm1);
            for u in 0..m {
                if !left[u].is_zero() && !right[m - 1 - u].is_zero() {
                    total += &left[u] * &right[m - 1 - u];
                }
            }
        }
    }
    // sum_{s=0}^{i-1} x^(s+1) g^(i-s, j-1); reachable only when i >= 1, and
    // then j >= i >= 1 so j-1 needs no modular wrap.
    for s in 0..i {
        let shift = (s + 1) as usize;
        if m >= shift {
            total += &look(i - s, j - 1)[m - shift];
        }
    }
    total
}

/// Right-hand side of the (i,j) equation built from public series operations.
/// This is an independent route from the solver's internal coefficient loop,
/// so comparing it against the table entry is a genuine residual check.
pub fn equation_rhs(table: &GTable, i: u32, j: u32) -> TruncatedSeries {
    let r = table.r();
    let order = table.order();
    let mut rhs = TruncatedSeries::zero(order);
    if i == 0 && j == 0 {
        rhs = TruncatedSeries::one(order);
    }
    let jm1 = (j + r - 1) % r;
    for t in 0..r {
        let prod = table.get(i, t).mul(table.get((r - t) % r, jm1));
        rhs = rhs.add(&prod.shift_up(1));
    }
    for s in 0..i {
        rhs = rhs.add(&table.get(i - s, j - 1).shift_up(s as usize + 1));
    }
    rhs.truncated(order)
}

/// Residual of the (i,j) equation: RHS minus the table entry. All-zero for a
/// correct solve.
pub fn equation_residual(table: &GTable, i: u32, j: u32) -> TruncatedSeries {
    equation_rhs(table, i, j).sub(table.get(i, j))
}

/// Weight enumerator h_r for words with r copies of each letter and exactly
/// one 123 occurrence, to the given truncation order.
pub fn compute_h(r: u32, order: usize) -> Result<TruncatedSeries, SeriesError> {
    let table = solve_g_system(r, order + 1)?;
    compute_h_from(&table)
}

/// Same as [`compute_h`] but reusing an already-solved table. The result is
/// claimed one order below the table (the leading 1/x costs one).
pub fn compute_h_from(table: &GTable) -> Result<TruncatedSeries, SeriesError> {
    let r = table.r();
    let order = table.order();
    let one = TruncatedSeries::one(order);
    let mut acc = TruncatedSeries::zero(order);
    for i in 1..=r {
        let mut left = table.get(0, i % r).sub(&table.get(0, i - 1).shift_up(1));
        if i.is_multiple_of(r) {
            left = left.sub(&one);
        }
        let mut right = table
            .get(0, (r + 1 - i) % r)
            .sub(&table.get(0, r - i).shift_up(1));
        if (r + 1 - i).is_multiple_of(r) {
            right = right.sub(&one);
        }
        acc = acc.add(&left.mul(&right));
    }
    acc.div_x()
}

/// Keep every `r`-th coefficient: result coefficient n is input coefficient
/// r*n. Errors if a nonzero coefficient sits off the grid, which means a
/// parity invariant was broken upstream.
pub fn decimate(a: &TruncatedSeries, r: u32) -> Result<TruncatedSeries, SeriesError> {
    assert!(r >= 1, "decimation step must be positive");
    let r = r as usize;
    if r == 1 {
        return Ok(a.clone());
    }
    for (k, c) in a.coeffs().iter().enumerate() {
        if k % r != 0 && !c.is_zero() {
            return Err(SeriesError::StrayCoefficient(k));
        }
    }
    let coeffs = a.coeffs().iter().step_by(r).cloned().collect();
    Ok(TruncatedSeries::new(coeffs))
}

/// Ordinary generating function f_r with coefficients 0 ..= n_max;
/// coefficient n counts the words of length r*n over n letters, each
/// appearing r times, with exactly one 123 occurrence.
pub fn compute_f(r: u32, n_max: usize) -> Result<TruncatedSeries, SeriesError> {
    let h = compute_h(r, r as usize * n_max + r as usize)?;
    Ok(decimate(&h, r)?.truncated(n_max))
}
