//! Bundled reference data: the r=2 algebraic equation and the r=1, r=2
//! recurrence operators, shipped as JSON files in the crate.
//!
//! Each fixture is transcribed data, so each carries a checksum-style test:
//! the equation must annihilate the series it is claimed to annihilate, and
//! the operators must produce all-zero residuals on series-derived
//! sequences. A failed transcription cannot survive those checks.

use crate::algebraic::{BivariateFile, BivariatePolynomial};
use crate::recurrence::{OperatorFile, RecurrenceOperator};

const ALGEBRAIC_R2: &str = include_str!("../fixtures/algebraic_r2.json");
const RECURRENCE_R1: &str = include_str!("../fixtures/recurrence_r1.json");
const RECURRENCE_R2: &str = include_str!("../fixtures/recurrence_r2.json");

/// The quartic equation satisfied by the r=2 generating function:
/// x^4 (x+4)^2 F^4 + 2 x^3 (x+4)(11x+23) F^3
/// - 4x (3x^4 - 10x^3 - 97x^2 - 146x + 1) F^2
/// + (-168x^4 - 840x^3 - 744x^2 + 336x - 24) F + 144 x^3 (x+2) = 0.
pub fn algebraic_r2() -> BivariatePolynomial {
    BivariateFile::from_json(ALGEBRAIC_R2)
        .expect("bundled algebraic_r2.json parses")
        .to_polynomial()
        .expect("bundled algebraic_r2.json is a valid polynomial")
}

/// The order-1 operator annihilating the permutation counts:
/// 2n(2n+1) - (n+4)(n-2) N.
pub fn recurrence_r1() -> RecurrenceOperator {
    OperatorFile::from_json(RECURRENCE_R1)
        .expect("bundled recurrence_r1.json parses")
        .to_operator()
        .expect("bundled recurrence_r1.json is a valid operator")
}

/// The minimal order-4 operator annihilating the r=2 sequence, expanded to
/// dense degree-8 coefficient polynomials.
pub fn recurrence_r2() -> RecurrenceOperator {
    OperatorFile::from_json(RECURRENCE_R2)
        .expect("bundled recurrence_r2.json parses")
        .to_operator()
        .expect("bundled recurrence_r2.json is a valid operator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::degree_profile;
    use crate::genfun::compute_f;
    use crate::recurrence::IntegerSequence;
    use num_bigint::BigInt;

    #[test]
    fn quartic_spot_coefficients() {
        let p = algebraic_r2();
        assert_eq!(degree_profile(&p), (6, 4));
        assert_eq!(p.coeff(0, 1), BigInt::from(-24));
        assert_eq!(p.coeff(4, 0), BigInt::from(144));
        assert_eq!(p.coeff(6, 4), BigInt::from(1));
        assert_eq!(p.coeff(0, 0), BigInt::from(0));
    }

    #[test]
    fn quartic_annihilates_f2_transcription_checksum() {
        let f2 = compute_f(2, 30).unwrap();
        assert!(algebraic_r2().eval_at_series(&f2).is_zero());
    }

    #[test]
    fn r1_operator_transcription_checksum() {
        let op = recurrence_r1();
        assert_eq!(op.order(), 1);
        let a1 = IntegerSequence::new((0..=30).map(crate::counting::noonan_count).collect(), "a_1");
        assert!(op.annihilates(&a1));
    }

    #[test]
    fn r2_operator_transcription_checksum() {
        let op = recurrence_r2();
        assert_eq!(op.order(), 4);
        assert_eq!(op.degree(), 8);
        let f2 = compute_f(2, 24).unwrap();
        let a2 = IntegerSequence::new(f2.coeffs().iter().map(|c| c.to_integer()).collect(), "a_2");
        assert!(op.annihilates(&a2));
    }

    #[test]
    fn r2_extension_agrees_with_series_overlap() {
        // Extending from a short seed reproduces every series coefficient
        // the two computations share.
        let op = recurrence_r2();
        let f2 = compute_f(2, 24).unwrap();
        let seed = IntegerSequence::new(
            f2.coeffs()[..6].iter().map(|c| c.to_integer()).collect(),
            "a_2",
        );
        let ext = op.extend(&seed, 60).unwrap();
        for (n, c) in f2.coeffs().iter().enumerate() {
            assert_eq!(ext.values[n], c.to_integer(), "a_2({n})");
        }
    }
}
