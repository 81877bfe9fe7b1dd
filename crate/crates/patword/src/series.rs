//! Truncated power series with exact rational coefficients.
//!
//! A series knows its coefficients for x^0 through x^N and nothing beyond;
//! N is the truncation order. Arithmetic is conservative about orders: a
//! product is only claimed to the smaller operand order, and dividing by x
//! costs one order. Under-claiming an order is harmless, over-claiming is a
//! bug, so every operation here errs downward.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    /// Division by x of a series whose constant term is not zero. Signals a
    /// violated combinatorial identity upstream, not a numeric problem.
    #[error("series has nonzero constant term {0}, cannot divide by x")]
    NonzeroConstantTerm(String),
    /// Decimation found a nonzero coefficient off the expected grid.
    #[error("nonzero coefficient at index {0}, which is not a multiple of the decimation step")]
    StrayCoefficient(usize),
    /// The fixed-point iteration failed to stabilize. Signals a transcription
    /// error in an equation system.
    #[error("fixed-point iteration still changing after {0} passes")]
    NoConvergence(usize),
    #[error("malformed series file: {0}")]
    Malformed(String),
}

/// Power series coefficients for x^0 ..= x^order, exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Series with the given coefficients; the truncation order is
    /// `coeffs.len() - 1`. At least one coefficient slot is required.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the x^0 slot");
        TruncatedSeries { coeffs }
    }

    pub fn from_bigints(coeffs: Vec<BigInt>) -> Self {
        TruncatedSeries::new(coeffs.into_iter().map(BigRational::from).collect())
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        TruncatedSeries::from_bigints(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries::new(vec![BigRational::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The truncation order N: coefficients are known for x^0 ..= x^N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        assert!(
            k < self.coeffs.len(),
            "coefficient x^{k} beyond truncation order {}",
            self.order()
        );
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// All coefficients integral? The weight-enumerator pipeline only ever
    /// produces integers; a fractional coefficient means something upstream
    /// broke.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        TruncatedSeries::new((0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        TruncatedSeries::new((0..n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect())
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, factor: &BigRational) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Cauchy product truncated to the smaller operand order.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries::new(out)
    }

    /// Multiply by x^m. The known window genuinely shifts up: the result is
    /// valid to order + m.
    pub fn shift_up(&self, m: usize) -> TruncatedSeries {
        let mut out = vec![BigRational::zero(); m];
        out.extend(self.coeffs.iter().cloned());
        TruncatedSeries::new(out)
    }

    /// Divide by x. Requires a vanishing constant term and at least order 1;
    /// the truncation order drops by one.
    pub fn div_x(&self) -> Result<TruncatedSeries, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonzeroConstantTerm(self.coeffs[0].to_string()));
        }
        assert!(
            self.coeffs.len() > 1,
            "cannot divide an order-0 series by x"
        );
        Ok(TruncatedSeries::new(self.coeffs[1..].to_vec()))
    }

    /// Drop coefficients above `new_order`.
    pub fn truncated(&self, new_order: usize) -> TruncatedSeries {
        let n = (new_order + 1).min(self.coeffs.len());
        TruncatedSeries::new(self.coeffs[..n].to_vec())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if c.is_one() && k > 0 {
                    parts.push(format!("x^{k}"));
                } else if k == 0 {
                    parts.push(c.to_string());
                } else {
                    parts.push(format!("{c}*x^{k}"));
                }
            }
            if parts.len() > 8 {
                parts.push("...".into());
                break;
            }
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(x^{})", parts.join(" + "), self.order() + 1)
    }
}

/// On-disk form of a series: coefficients as decimal strings so arbitrary
/// precision survives transport. `order` is the number of coefficients.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesFile {
    pub r: u32,
    pub kind: String,
    pub order: usize,
    pub coeffs: Vec<String>,
}

impl SeriesFile {
    pub fn from_series(r: u32, kind: &str, series: &TruncatedSeries) -> Self {
        SeriesFile {
            r,
            kind: kind.to_string(),
            order: series.coeffs().len(),
            coeffs: series.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn to_series(&self) -> Result<TruncatedSeries, SeriesError> {
        if self.order != self.coeffs.len() {
            return Err(SeriesError::Malformed(format!(
                "order {} disagrees with {} coefficients",
                self.order,
                self.coeffs.len()
            )));
        }
        if self.coeffs.is_empty() {
            return Err(SeriesError::Malformed("no coefficients".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| {
                BigRational::from_str(s)
                    .map_err(|_| SeriesError::Malformed(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TruncatedSeries::new(coeffs))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SeriesError> {
        serde_json::from_str(text).map_err(|e| SeriesError::Malformed(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(coeffs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_i64s(coeffs)
    }

    #[test]
    fn product_of_binomials() {
        // (1+x)(1-x) = 1 - x^2
        let p = s(&[1, 1, 0]).mul(&s(&[1, -1, 0]));
        assert_eq!(p, s(&[1, 0, -1]));
    }

    #[test]
    fn mul_truncates_to_min_order() {
        let p = s(&[1, 1, 1, 1, 1]).mul(&s(&[1, 1]));
        assert_eq!(p.order(), 1);
        assert_eq!(p, s(&[1, 2]));
    }

    #[test]
    fn catalan_square_coefficient() {
        // (1 + x + 2x^2)^2 has x^2 coefficient 1*2 + 1*1 + 2*1 = 5.
        let g = s(&[1, 1, 2]);
        assert_eq!(g.mul(&g).coeff(2), &BigRational::from(BigInt::from(5)));
    }

    #[test]
    fn mul_by_zero() {
        let z = TruncatedSeries::zero(4);
        assert!(s(&[1, 2, 3, 4, 5]).mul(&z).is_zero());
    }

    #[test]
    fn div_x_shifts_down() {
        let a = s(&[0, 1, 0, 3]);
        assert_eq!(a.div_x().unwrap(), s(&[1, 0, 3]));
        assert_eq!(
            s(&[1, 1]).div_x(),
            Err(SeriesError::NonzeroConstantTerm("1".into()))
        );
    }

    #[test]
    fn shift_up_then_div_x_is_identity() {
        let a = s(&[5, -2, 7]);
        assert_eq!(a.shift_up(1).div_x().unwrap(), a);
    }

    #[test]
    fn series_file_round_trip() {
        let f = s(&[0, 0, 0, 12, 174]);
        let file = SeriesFile::from_series(2, "f", &f);
        let json = file.to_json();
        let back = SeriesFile::from_json(&json).unwrap();
        assert_eq!(back.to_series().unwrap(), f);

        assert!(SeriesFile::from_json("{\"r\":2}").is_err());
        let bad = SeriesFile {
            r: 2,
            kind: "f".into(),
            order: 3,
            coeffs: vec!["1".into()],
        };
        assert!(bad.to_series().is_err());
    }

    fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec(-20i64..20, 1..8).prop_map(|v| TruncatedSeries::from_i64s(&v))
    }

    proptest! {
        #[test]
        fn mul_commutes(a in arb_series(), b in arb_series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn mul_distributes_over_add(a in arb_series(), b in arb_series(), c in arb_series()) {
            let lhs = a.mul(&b.add(&c));
            let rhs = a.mul(&b).add(&a.mul(&c));
            // Both sides are claimed to the same (minimal) order.
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn add_sub_round_trips(a in arb_series(), b in arb_series()) {
            prop_assert_eq!(a.add(&b).sub(&b), a.truncated(b.order()));
        }
    }
}
