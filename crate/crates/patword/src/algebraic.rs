//! Bivariate annihilating polynomials: P(x, y) with integer coefficients
//! such that P(x, F(x)) = 0 for a given power series F.
//!
//! Equations are *guessed* from truncated series data: a linear ansatz over
//! the coefficients of P is fitted on a window of series coefficients and
//! every candidate is then re-verified against all available coefficients.
//! A candidate that only annihilates the fitted window is discarded — that
//! happens in practice, e.g. y^k fits any window shorter than k times the
//! valuation of F.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::series::TruncatedSeries;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraicError {
    #[error("series provides {available} coefficient orders, need {needed}")]
    InsufficientTerms { needed: usize, available: usize },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("malformed polynomial file: {0}")]
    Malformed(String),
}

/// P(x, y) = sum c[a][b] x^a y^b with integer coefficients, stored trimmed
/// (no all-zero top row or column) and normalized: the coefficients have
/// content 1 and the leading coefficient — highest y-degree, then highest
/// x-degree — is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariatePolynomial {
    // coeffs[a][b]; every row has deg_y() + 1 entries.
    coeffs: Vec<Vec<BigInt>>,
}

impl BivariatePolynomial {
    pub fn new(grid: Vec<Vec<BigInt>>) -> Result<Self, AlgebraicError> {
        let mut grid = grid;
        // Rectangularize, then trim zero fringes.
        let width = grid.iter().map(|row| row.len()).max().unwrap_or(0);
        for row in &mut grid {
            row.resize(width, BigInt::zero());
        }
        while grid
            .last()
            .is_some_and(|row| row.iter().all(|c| c.is_zero()))
        {
            grid.pop();
        }
        if grid.is_empty() {
            return Err(AlgebraicError::ZeroPolynomial);
        }
        let mut width = grid[0].len();
        while width > 1 && grid.iter().all(|row| row[width - 1].is_zero()) {
            width -= 1;
        }
        for row in &mut grid {
            row.truncate(width);
        }

        // Content normalization and sign fix.
        let mut content = BigInt::zero();
        for row in &grid {
            for c in row {
                content = content.gcd(c);
            }
        }
        if content.is_zero() {
            return Err(AlgebraicError::ZeroPolynomial);
        }
        if !content.is_one() {
            for row in &mut grid {
                for c in row.iter_mut() {
                    *c = &*c / &content;
                }
            }
        }
        let leading_negative = 'lead: {
            for b in (0..width).rev() {
                for a in (0..grid.len()).rev() {
                    if !grid[a][b].is_zero() {
                        break 'lead grid[a][b].is_negative();
                    }
                }
            }
            unreachable!("nonzero polynomial has a leading coefficient");
        };
        if leading_negative {
            for row in &mut grid {
                for c in row.iter_mut() {
                    *c = -&*c;
                }
            }
        }
        Ok(BivariatePolynomial { coeffs: grid })
    }

    pub fn from_terms(terms: &[(usize, usize, i64)]) -> Result<Self, AlgebraicError> {
        let deg_x = terms.iter().map(|&(a, _, _)| a).max().unwrap_or(0);
        let deg_y = terms.iter().map(|&(_, b, _)| b).max().unwrap_or(0);
        let mut grid = vec![vec![BigInt::zero(); deg_y + 1]; deg_x + 1];
        for &(a, b, c) in terms {
            grid[a][b] += BigInt::from(c);
        }
        BivariatePolynomial::new(grid)
    }

    pub fn deg_x(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn deg_y(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn coeff(&self, a: usize, b: usize) -> BigInt {
        self.coeffs
            .get(a)
            .and_then(|row| row.get(b))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Evaluate P(x, F(x)) truncated to F's order, by Horner in y.
    pub fn eval_at_series(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let order = f.order();
        let mut acc = self.x_row_series(self.deg_y(), order);
        for b in (0..self.deg_y()).rev() {
            acc = acc.mul(f).add(&self.x_row_series(b, order));
        }
        acc
    }

    // The x-polynomial multiplying y^b, as an order-`order` series.
    fn x_row_series(&self, b: usize, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (a, row) in self.coeffs.iter().enumerate() {
            if a <= order && !row[b].is_zero() {
                coeffs[a] = BigRational::from(row[b].clone());
            }
        }
        TruncatedSeries::new(coeffs)
    }
}

/// Actual degrees of the polynomial after trimming zero rows and columns.
pub fn degree_profile(p: &BivariatePolynomial) -> (usize, usize) {
    (p.deg_x(), p.deg_y())
}

/// Search for the smallest annihilating polynomial of `f` within the degree
/// bounds: y-degree from 1 upward, x-degree from 0 upward within each
/// y-degree. A fitted candidate is accepted only if it annihilates every
/// available coefficient of `f`, not just the fitted window; `guard` sets
/// how many coefficients beyond the ansatz unknowns the fit window must
/// cover before the full check.
pub fn guess_algebraic(
    f: &TruncatedSeries,
    max_deg_x: usize,
    max_deg_y: usize,
    guard: usize,
) -> Result<Option<BivariatePolynomial>, AlgebraicError> {
    let needed = (max_deg_x + 1) * (max_deg_y + 1) + guard;
    if f.order() < needed {
        return Err(AlgebraicError::InsufficientTerms {
            needed,
            available: f.order(),
        });
    }
    let window = f.order() + 1;

    // Powers of F, exact and mod p, computed once at full order.
    let mut powers: Vec<TruncatedSeries> = vec![TruncatedSeries::one(f.order())];
    for _ in 0..max_deg_y {
        powers.push(powers.last().expect("nonempty").mul(f));
    }
    let mod_powers: Option<Vec<Vec<u64>>> = powers
        .iter()
        .map(|p| {
            p.coeffs()
                .iter()
                .map(linalg::rational_residue)
                .collect::<Option<Vec<u64>>>()
        })
        .collect();

    for dy in 1..=max_deg_y {
        for dx in 0..=max_deg_x {
            let ncols = (dx + 1) * (dy + 1);
            // Cheap full-window screen: full column rank mod p means no
            // rational annihilator at these bounds.
            if let Some(mp) = &mod_powers {
                let rows: Vec<Vec<u64>> = (0..window)
                    .map(|m| {
                        let mut row = Vec::with_capacity(ncols);
                        for a in 0..=dx {
                            for power in mp.iter().take(dy + 1) {
                                row.push(if m >= a { power[m - a] } else { 0 });
                            }
                        }
                        row
                    })
                    .collect();
                if linalg::nullity_mod_p(&rows, ncols) == 0 {
                    continue;
                }
            }

            let fit_rows = (ncols + guard).min(window);
            let rows: Vec<Vec<BigRational>> = (0..fit_rows)
                .map(|m| {
                    let mut row = Vec::with_capacity(ncols);
                    for a in 0..=dx {
                        for power in powers.iter().take(dy + 1) {
                            row.push(if m >= a {
                                power.coeff(m - a).clone()
                            } else {
                                BigRational::zero()
                            });
                        }
                    }
                    row
                })
                .collect();
            let mut basis = linalg::rational_nullspace(&rows, ncols);
            // Minimal support first; index order breaks ties so the choice
            // is deterministic.
            basis.sort_by_key(|v| v.iter().filter(|c| !c.is_zero()).count());
            for vector in basis {
                let mut grid = vec![vec![BigInt::zero(); dy + 1]; dx + 1];
                for (idx, value) in vector.into_iter().enumerate() {
                    grid[idx / (dy + 1)][idx % (dy + 1)] = value;
                }
                let Ok(candidate) = BivariatePolynomial::new(grid) else {
                    continue;
                };
                if candidate.eval_at_series(f).is_zero() {
                    return Ok(Some(candidate));
                }
            }
        }
    }
    Ok(None)
}

/// On-disk form: sparse map from "a,b" to a decimal coefficient string.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BivariateFile {
    pub deg_x: usize,
    pub deg_y: usize,
    pub coeffs: BTreeMap<String, String>,
}

impl BivariateFile {
    pub fn from_polynomial(p: &BivariatePolynomial) -> Self {
        let mut coeffs = BTreeMap::new();
        for a in 0..=p.deg_x() {
            for b in 0..=p.deg_y() {
                let c = p.coeff(a, b);
                if !c.is_zero() {
                    coeffs.insert(format!("{a},{b}"), c.to_string());
                }
            }
        }
        BivariateFile {
            deg_x: p.deg_x(),
            deg_y: p.deg_y(),
            coeffs,
        }
    }

    pub fn to_polynomial(&self) -> Result<BivariatePolynomial, AlgebraicError> {
        let mut grid = vec![vec![BigInt::zero(); self.deg_y + 1]; self.deg_x + 1];
        for (key, value) in &self.coeffs {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| AlgebraicError::Malformed(format!("bad key {key:?}")))?;
            let a: usize = a
                .parse()
                .map_err(|_| AlgebraicError::Malformed(format!("bad key {key:?}")))?;
            let b: usize = b
                .parse()
                .map_err(|_| AlgebraicError::Malformed(format!("bad key {key:?}")))?;
            if a > self.deg_x || b > self.deg_y {
                return Err(AlgebraicError::Malformed(format!(
                    "key {key:?} outside declared degrees"
                )));
            }
            grid[a][b] = BigInt::from_str(value)
                .map_err(|_| AlgebraicError::Malformed(format!("bad coefficient {value:?}")))?;
        }
        BivariatePolynomial::new(grid)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraicError> {
        serde_json::from_str(text).map_err(|e| AlgebraicError::Malformed(e.to_string()))
    }
}
