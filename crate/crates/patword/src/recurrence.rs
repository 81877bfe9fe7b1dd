//! P-recursive sequence operators: application, guessing, and exact
//! extension.
//!
//! An operator `sum_k p_k(n) N^k` with integer-polynomial coefficients acts
//! on a sequence by `(op a)(n) = sum_k p_k(n) a(n+k)`; it annihilates the
//! sequence when every such residual vanishes. Operators are stored
//! content-normalized with the leading coefficient of the top polynomial
//! positive. Guessing fits the same kind of linear ansatz as the algebraic
//! guesser and re-verifies candidates against the whole sequence; comparing
//! two operators found along different routes is done behaviorally, by
//! cross-annihilation on long extensions, never structurally.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecurrenceError {
    #[error("sequence provides {available} terms, need {needed}")]
    InsufficientTerms { needed: usize, available: usize },
    #[error("operator is identically zero")]
    ZeroOperator,
    #[error("seed of {seed} terms is shorter than the operator order {order}")]
    SeedTooShort { seed: usize, order: usize },
    #[error("leading coefficient vanishes at n = {0}")]
    LeadingCoefficientZero(usize),
    #[error("extension step at n = {0} is not an integer")]
    NonIntegerStep(usize),
    #[error("malformed operator file: {0}")]
    Malformed(String),
}

/// Dense integer polynomial in n, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, n: usize) -> BigInt {
        let x = BigInt::from(n);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        acc
    }
}

/// A sequence of exact integers indexed from 0, tagged with its origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSequence {
    pub values: Vec<BigInt>,
    pub label: String,
}

impl IntegerSequence {
    pub fn new(values: Vec<BigInt>, label: impl Into<String>) -> Self {
        IntegerSequence {
            values,
            label: label.into(),
        }
    }

    pub fn from_i64s(values: &[i64], label: impl Into<String>) -> Self {
        IntegerSequence::new(values.iter().map(|&v| BigInt::from(v)).collect(), label)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `sum_k p_k(n) N^k`, stored normalized: the top polynomial is nonzero, the
/// coefficient content over all polynomials is 1, and the leading
/// coefficient of the top polynomial is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceOperator {
    polys: Vec<Poly>,
}

impl RecurrenceOperator {
    pub fn new(mut polys: Vec<Poly>) -> Result<Self, RecurrenceError> {
        while polys.last().is_some_and(|p| p.is_zero()) {
            polys.pop();
        }
        if polys.is_empty() {
            return Err(RecurrenceError::ZeroOperator);
        }
        let mut content = BigInt::zero();
        for p in &polys {
            for c in p.coeffs() {
                content = content.gcd(c);
            }
        }
        if !content.is_one() {
            polys = polys
                .into_iter()
                .map(|p| Poly::new(p.coeffs.iter().map(|c| c / &content).collect()))
                .collect();
        }
        if polys
            .last()
            .and_then(|p| p.leading())
            .is_some_and(|c| c.is_negative())
        {
            polys = polys
                .into_iter()
                .map(|p| Poly::new(p.coeffs.iter().map(|c| -c).collect()))
                .collect();
        }
        Ok(RecurrenceOperator { polys })
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// Largest polynomial degree over the coefficients.
    pub fn degree(&self) -> usize {
        self.polys
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }

    /// Residual sequence r(n) = sum_k p_k(n) seq(n+k) for every n where the
    /// window fits. The operator annihilates `seq` iff this is all zeros.
    pub fn apply(&self, seq: &IntegerSequence) -> IntegerSequence {
        let ord = self.order();
        let n_out = seq.len().saturating_sub(ord);
        let values = (0..n_out)
            .map(|n| {
                self.polys
                    .iter()
                    .enumerate()
                    .map(|(k, p)| p.eval(n) * &seq.values[n + k])
                    .sum()
            })
            .collect();
        IntegerSequence::new(values, format!("residual({})", seq.label))
    }

    pub fn annihilates(&self, seq: &IntegerSequence) -> bool {
        seq.len() > self.order() && self.apply(seq).values.iter().all(|v| v.is_zero())
    }

    /// Extend `seed` through index `upto` using the recurrence. Every new
    /// term must come out an exact integer and the leading coefficient must
    /// not vanish at any step; either failure names the offending n.
    pub fn extend(
        &self,
        seed: &IntegerSequence,
        upto: usize,
    ) -> Result<IntegerSequence, RecurrenceError> {
        let ord = self.order();
        if seed.len() < ord.max(1) {
            return Err(RecurrenceError::SeedTooShort {
                seed: seed.len(),
                order: ord,
            });
        }
        let mut values = seed.values.clone();
        while values.len() <= upto {
            let n = values.len() - ord;
            let lead = self.polys[ord].eval(n);
            if lead.is_zero() {
                return Err(RecurrenceError::LeadingCoefficientZero(n));
            }
            let acc: BigInt = self
                .polys
                .iter()
                .take(ord)
                .enumerate()
                .map(|(k, p)| p.eval(n) * &values[n + k])
                .sum();
            let (q, r) = (-acc).div_rem(&lead);
            if !r.is_zero() {
                return Err(RecurrenceError::NonIntegerStep(n));
            }
            values.push(q);
        }
        Ok(IntegerSequence::new(values, seed.label.clone()))
    }
}

/// Fit the smallest recurrence for `seq` within the bounds: operator order
/// from 1 upward, then polynomial degree from 0 upward. A fitted candidate
/// is returned only if it annihilates the entire available sequence.
pub fn guess_recurrence(
    seq: &IntegerSequence,
    max_order: usize,
    max_degree: usize,
    guard: usize,
) -> Result<Option<RecurrenceOperator>, RecurrenceError> {
    assert!(max_order >= 1, "order bound must be positive");
    let needed = (max_order + 1) * (max_degree + 1) + guard + max_order;
    if seq.len() < needed {
        return Err(RecurrenceError::InsufficientTerms {
            needed,
            available: seq.len(),
        });
    }

    let residues: Vec<u64> = seq.values.iter().map(linalg::bigint_residue).collect();
    for order in 1..=max_order {
        let full_rows = seq.len() - order;
        for degree in 0..=max_degree {
            let ncols = (order + 1) * (degree + 1);
            // Screen mod p over every row the sequence supports.
            let rows: Vec<Vec<u64>> = (0..full_rows)
                .map(|n| {
                    let mut row = Vec::with_capacity(ncols);
                    let mut npow = vec![1u64; degree + 1];
                    for d in 1..=degree {
                        npow[d] = linalg::mul_mod(npow[d - 1], n as u64 % linalg::SCREEN_PRIME);
                    }
                    for k in 0..=order {
                        for p in npow.iter().take(degree + 1) {
                            row.push(linalg::mul_mod(*p, residues[n + k]));
                        }
                    }
                    row
                })
                .collect();
            if linalg::nullity_mod_p(&rows, ncols) == 0 {
                continue;
            }

            let fit_rows = (ncols + guard).min(full_rows);
            let rows: Vec<Vec<BigRational>> = (0..fit_rows)
                .map(|n| {
                    let mut row = Vec::with_capacity(ncols);
                    let mut npow = vec![BigInt::one(); degree + 1];
                    for d in 1..=degree {
                        npow[d] = &npow[d - 1] * BigInt::from(n);
                    }
                    for k in 0..=order {
                        for p in npow.iter().take(degree + 1) {
                            row.push(BigRational::from(p * &seq.values[n + k]));
                        }
                    }
                    row
                })
                .collect();
            let mut basis = linalg::rational_nullspace(&rows, ncols);
            basis.sort_by_key(|v| v.iter().filter(|c| !c.is_zero()).count());
            for vector in basis {
                let polys: Vec<Poly> = vector
                    .chunks(degree + 1)
                    .map(|chunk| Poly::new(chunk.to_vec()))
                    .collect();
                let Ok(candidate) = RecurrenceOperator::new(polys) else {
                    continue;
                };
                if candidate.order() == order && candidate.annihilates(seq) {
                    return Ok(Some(candidate));
                }
            }
        }
    }
    Ok(None)
}

/// Behavioral equivalence: each operator annihilates a long extension
/// produced by the other. Extensions run out to `horizon` terms.
pub fn cross_annihilate(
    a: &RecurrenceOperator,
    b: &RecurrenceOperator,
    seed: &IntegerSequence,
    horizon: usize,
) -> Result<bool, RecurrenceError> {
    let ext_a = a.extend(seed, horizon)?;
    let ext_b = b.extend(seed, horizon)?;
    Ok(b.annihilates(&ext_a) && a.annihilates(&ext_b))
}

/// On-disk form: coefficient polynomials ascending in n, coefficients as
/// decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorFile {
    pub order: usize,
    pub polys: Vec<Vec<String>>,
}

impl OperatorFile {
    pub fn from_operator(op: &RecurrenceOperator) -> Self {
        OperatorFile {
            order: op.order(),
            polys: op
                .polys()
                .iter()
                .map(|p| p.coeffs().iter().map(|c| c.to_string()).collect())
                .collect(),
        }
    }

    pub fn to_operator(&self) -> Result<RecurrenceOperator, RecurrenceError> {
        if self.polys.len() != self.order + 1 {
            return Err(RecurrenceError::Malformed(format!(
                "order {} disagrees with {} polynomials",
                self.order,
                self.polys.len()
            )));
        }
        let polys = self
            .polys
            .iter()
            .map(|coeffs| {
                coeffs
                    .iter()
                    .map(|s| {
                        BigInt::from_str(s).map_err(|_| {
                            RecurrenceError::Malformed(format!("bad coefficient {s:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(Poly::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        RecurrenceOperator::new(polys)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("operator file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, RecurrenceError> {
        serde_json::from_str(text).map_err(|e| RecurrenceError::Malformed(e.to_string()))
    }
}

/// Catalan numbers C(2n,n)/(n+1), the classical control sequence for the
/// guessing and asymptotics machinery.
pub fn catalan_sequence(terms: usize) -> IntegerSequence {
    let values = (0..terms)
        .map(|n| {
            let binom = num_integer::binomial(BigInt::from(2 * n), BigInt::from(n));
            binom / BigInt::from(n + 1)
        })
        .collect();
    IntegerSequence::new(values, "catalan")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::noonan_count;
    use proptest::prelude::*;

    fn noonan_sequence(terms: usize) -> IntegerSequence {
        IntegerSequence::new((0..terms).map(noonan_count).collect(), "a_1")
    }

    // 2n(2n+1) - (n+4)(n-2) N, as printed; normalization flips the sign.
    fn r1_operator() -> RecurrenceOperator {
        RecurrenceOperator::new(vec![
            Poly::from_i64s(&[0, 2, 4]),
            Poly::from_i64s(&[8, -2, -1]),
        ])
        .unwrap()
    }

    #[test]
    fn r1_operator_annihilates_noonan() {
        let seq = noonan_sequence(32);
        assert!(r1_operator().annihilates(&seq));
        let residual = r1_operator().apply(&seq);
        assert!(residual.values.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn zero_sequence_gives_zero_residual() {
        let zero = IntegerSequence::from_i64s(&[0; 10], "zero");
        assert!(r1_operator().annihilates(&zero));
    }

    #[test]
    fn extension_matches_closed_form() {
        let op = r1_operator();
        let seed = noonan_sequence(6);
        let ext = op.extend(&seed, 100).unwrap();
        for n in 0..=100 {
            assert_eq!(ext.values[n], noonan_count(n), "a_1({n})");
        }
        // Re-applying the operator to the extension stays zero.
        assert!(op.annihilates(&ext));
    }

    #[test]
    fn extension_reports_vanishing_leading_coefficient() {
        // p_1(n) = n - 10 vanishes at n = 10; the extension gets that far
        // because p_0 = 0 keeps every step at zero.
        let op = RecurrenceOperator::new(vec![Poly::from_i64s(&[]), Poly::from_i64s(&[-10, 1])])
            .unwrap();
        let seed = IntegerSequence::from_i64s(&[1], "seed");
        assert_eq!(
            op.extend(&seed, 50),
            Err(RecurrenceError::LeadingCoefficientZero(10))
        );
    }

    #[test]
    fn extension_reports_non_integer_steps() {
        // 1 - 2N forces halving from the very first step.
        let op =
            RecurrenceOperator::new(vec![Poly::from_i64s(&[1]), Poly::from_i64s(&[-2])]).unwrap();
        let seed = IntegerSequence::from_i64s(&[3], "odd");
        assert_eq!(op.extend(&seed, 4), Err(RecurrenceError::NonIntegerStep(0)));
    }

    #[test]
    fn guesses_catalan_recurrence() {
        let cat = catalan_sequence(40);
        let op = guess_recurrence(&cat, 3, 3, 10)
            .unwrap()
            .expect("finds recurrence");
        // (n+2) a(n+1) - (4n+2) a(n) = 0.
        let expected =
            RecurrenceOperator::new(vec![Poly::from_i64s(&[-2, -4]), Poly::from_i64s(&[2, 1])])
                .unwrap();
        assert_eq!(op, expected);
    }

    #[test]
    fn guesses_r1_recurrence_and_matches_fixture() {
        let seq = noonan_sequence(40);
        let op = guess_recurrence(&seq, 3, 4, 10)
            .unwrap()
            .expect("finds recurrence");
        assert_eq!(op, r1_operator());
        // Mutual annihilation on long extensions, the behavioral comparison.
        let seed = noonan_sequence(6);
        assert!(cross_annihilate(&op, &r1_operator(), &seed, 120).unwrap());
    }

    #[test]
    fn guess_needs_enough_terms() {
        let seq = noonan_sequence(10);
        assert_eq!(
            guess_recurrence(&seq, 2, 2, 10),
            Err(RecurrenceError::InsufficientTerms {
                needed: 21,
                available: 10
            })
        );
    }

    #[test]
    fn file_round_trip() {
        let op = r1_operator();
        let file = OperatorFile::from_operator(&op);
        assert_eq!(file.to_operator().unwrap(), op);
        assert!(OperatorFile::from_json("{\"order\":2}").is_err());
        let bad = OperatorFile {
            order: 2,
            polys: vec![vec!["1".into()]],
        };
        assert!(bad.to_operator().is_err());
    }

    #[test]
    fn normalization_strips_content_and_fixes_sign() {
        let op = RecurrenceOperator::new(vec![
            Poly::from_i64s(&[0, -4, -8]),
            Poly::from_i64s(&[-16, 4, 2]),
        ])
        .unwrap();
        assert_eq!(op, r1_operator());
    }

    proptest! {
        #[test]
        fn guessed_extension_round_trips(seed_len in 6usize..10) {
            // The Catalan recurrence extends its own seed consistently.
            let cat = catalan_sequence(40);
            let op = guess_recurrence(&cat, 2, 2, 8).unwrap().unwrap();
            let seed = IntegerSequence::new(cat.values[..seed_len].to_vec(), "catalan");
            let ext = op.extend(&seed, 39).unwrap();
            prop_assert_eq!(ext.values, cat.values);
        }
    }
}
