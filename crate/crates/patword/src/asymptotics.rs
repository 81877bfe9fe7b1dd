//! Growth estimation for P-recursive integer sequences.
//!
//! For a sequence behaving like C * mu^n * n^alpha * (1 + O(1/n)) the
//! consecutive ratios a(n+1)/a(n) expand as a power series in 1/n, so
//! polynomial extrapolation of the ratios at 1/n -> 0 converges to mu at
//! rate n^-(depth+1). The tableau runs on exact rationals — the ratios are
//! exact, the extrapolation is exact, and floating point only appears when
//! the final value is read out. The constant C needs mu^n at n in the
//! hundreds, far beyond f64 range, so that part runs on [`BigFloat`]s.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::bigfloat::{pi, BigFloat, DEFAULT_PRECISION};
use crate::recurrence::IntegerSequence;

/// Relative tolerance on the growth rate mu when judging against a target.
pub const MU_REL_TOL: f64 = 1e-3;
/// Absolute tolerance on the polynomial exponent alpha.
pub const ALPHA_ABS_TOL: f64 = 0.05;
/// Relative tolerance on the leading constant C.
pub const C_REL_TOL: f64 = 0.02;
/// Extrapolation depth: levels of the Neville tableau on the ratio data.
pub const RICHARDSON_DEPTH: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AsymptoticsError {
    #[error("sequence has {0} terms, need at least 30")]
    TooShort(usize),
    #[error("sequence tail is not positive at index {0}")]
    NonPositiveTail(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticEstimate {
    /// Exponential growth rate.
    pub mu: f64,
    /// Polynomial exponent.
    pub alpha: f64,
    /// Leading constant.
    pub c: f64,
    /// Largest sequence index that entered the estimate.
    pub n_used: usize,
}

/// Exact polynomial extrapolation to x = 0 through the points
/// (1/n_i, v_i): the Neville tableau over rationals.
pub fn neville_to_zero(nodes: &[usize], values: &[BigRational]) -> BigRational {
    assert_eq!(nodes.len(), values.len());
    assert!(!nodes.is_empty());
    let xs: Vec<BigRational> = nodes
        .iter()
        .map(|&n| BigRational::new(BigInt::one(), BigInt::from(n)))
        .collect();
    let mut p = values.to_vec();
    for level in 1..p.len() {
        for i in 0..p.len() - level {
            let num = &xs[i + level] * &p[i] - &xs[i] * &p[i + 1];
            p[i] = num / (&xs[i + level] - &xs[i]);
        }
    }
    p.swap_remove(0)
}

fn neville_to_zero_float(nodes: &[usize], values: &[BigFloat]) -> BigFloat {
    let prec = values[0].precision();
    let one = BigInt::one();
    let xs: Vec<BigFloat> = nodes
        .iter()
        .map(|&n| BigFloat::from_ratio(&one, &BigInt::from(n), prec))
        .collect();
    let mut p = values.to_vec();
    for level in 1..p.len() {
        for i in 0..p.len() - level {
            let num = xs[i + level].mul(&p[i]).sub(&xs[i].mul(&p[i + 1]));
            p[i] = num.div(&xs[i + level].sub(&xs[i]));
        }
    }
    p.swap_remove(0)
}

fn rational_to_f64(x: &BigRational) -> f64 {
    BigFloat::from_ratio(x.numer(), x.denom(), 96).to_f64()
}

/// Estimate (mu, alpha, C) from the tail of `seq`.
///
/// The window is the last `RICHARDSON_DEPTH + 1` consecutive ratios. All of
/// the sequence values they touch must be positive.
pub fn estimate_asymptotics(seq: &IntegerSequence) -> Result<AsymptoticEstimate, AsymptoticsError> {
    let len = seq.len();
    if len < 30 {
        return Err(AsymptoticsError::TooShort(len));
    }
    let depth = RICHARDSON_DEPTH;
    let top = len - 2; // last index with a ratio
    let lo = top - depth;
    for n in lo..=top + 1 {
        if !seq.values[n].is_positive() {
            return Err(AsymptoticsError::NonPositiveTail(n));
        }
    }
    let nodes: Vec<usize> = (lo..=top).collect();

    // mu from extrapolated ratios.
    let ratios: Vec<BigRational> = nodes
        .iter()
        .map(|&n| BigRational::new(seq.values[n + 1].clone(), seq.values[n].clone()))
        .collect();
    let mu_exact = neville_to_zero(&nodes, &ratios);

    // alpha from n (r_n / mu - 1), which tends to alpha at rate 1/n.
    let alpha_terms: Vec<BigRational> = nodes
        .iter()
        .zip(&ratios)
        .map(|(&n, r)| BigRational::from(BigInt::from(n)) * (r / &mu_exact - BigRational::one()))
        .collect();
    let alpha_exact = neville_to_zero(&nodes, &alpha_terms);

    // C from a(n) / (mu^n n^alpha), extrapolated on big floats: mu^n
    // overflows f64 long before n = 300.
    let prec = DEFAULT_PRECISION;
    let mu_float = BigFloat::from_ratio(mu_exact.numer(), mu_exact.denom(), prec);
    let alpha_float = BigFloat::from_ratio(alpha_exact.numer(), alpha_exact.denom(), prec);
    let c_terms: Vec<BigFloat> = nodes
        .iter()
        .map(|&n| {
            let value = BigFloat::from_bigint(&seq.values[n], prec);
            let growth = mu_float.powi(n as i64);
            let n_float = BigFloat::from_i64(n as i64, prec);
            let poly = alpha_float.mul(&n_float.ln()).exp();
            value.div(&growth.mul(&poly))
        })
        .collect();
    let c_float = neville_to_zero_float(&nodes, &c_terms);

    Ok(AsymptoticEstimate {
        mu: rational_to_f64(&mu_exact),
        alpha: rational_to_f64(&alpha_exact),
        c: c_float.to_f64(),
        n_used: top + 1,
    })
}

/// The conjectured growth rate (r+1) 2^r for the exactly-one-123 sequences.
pub fn conjectured_mu(r: u32) -> f64 {
    ((r as f64) + 1.0) * 2f64.powi(r as i32)
}

/// Closed-form leading constants, evaluated at high precision:
/// 3/sqrt(pi), 3(13-sqrt(21))/(49 sqrt(pi)), (-7+6 sqrt(7))/(56 sqrt(pi))
/// for r = 1, 2, 3.
pub fn closed_form_c(r: u32) -> Option<f64> {
    let prec = DEFAULT_PRECISION;
    let sqrt_pi = pi(prec).sqrt();
    let value = match r {
        1 => BigFloat::from_i64(3, prec).div(&sqrt_pi),
        2 => {
            let sqrt21 = BigFloat::from_i64(21, prec).sqrt();
            BigFloat::from_i64(13, prec)
                .sub(&sqrt21)
                .mul(&BigFloat::from_i64(3, prec))
                .div(&BigFloat::from_i64(49, prec).mul(&sqrt_pi))
        }
        3 => {
            let sqrt7 = BigFloat::from_i64(7, prec).sqrt();
            BigFloat::from_i64(6, prec)
                .mul(&sqrt7)
                .sub(&BigFloat::from_i64(7, prec))
                .div(&BigFloat::from_i64(56, prec).mul(&sqrt_pi))
        }
        _ => return None,
    };
    Some(value.to_f64())
}

/// Pass/fail verdict of an estimate against the conjectured growth targets.
#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub r: u32,
    pub target_mu: f64,
    pub mu: f64,
    pub mu_rel_err: f64,
    pub alpha: f64,
    pub alpha_abs_err: f64,
    pub mu_pass: bool,
    pub alpha_pass: bool,
}

impl ConjectureReport {
    pub fn pass(&self) -> bool {
        self.mu_pass && self.alpha_pass
    }
}

impl std::fmt::Display for ConjectureReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "r={}: mu={:.9} vs {} (rel err {:.2e}, {}), alpha={:.6} vs -1.5 (abs err {:.2e}, {})",
            self.r,
            self.mu,
            self.target_mu,
            self.mu_rel_err,
            if self.mu_pass { "pass" } else { "FAIL" },
            self.alpha,
            self.alpha_abs_err,
            if self.alpha_pass { "pass" } else { "FAIL" },
        )
    }
}

/// Compare an estimate against mu = (r+1) 2^r and alpha = -3/2.
pub fn conjecture_check(r: u32, est: &AsymptoticEstimate) -> ConjectureReport {
    let target_mu = conjectured_mu(r);
    let mu_rel_err = (est.mu - target_mu).abs() / target_mu;
    let alpha_abs_err = (est.alpha + 1.5).abs();
    ConjectureReport {
        r,
        target_mu,
        mu: est.mu,
        mu_rel_err,
        alpha: est.alpha,
        alpha_abs_err,
        mu_pass: mu_rel_err < MU_REL_TOL,
        alpha_pass: alpha_abs_err < ALPHA_ABS_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::catalan_sequence;

    #[test]
    fn catalan_control_estimates() {
        // C_n ~ 4^n n^{-3/2} / sqrt(pi): the calibration for the tolerances.
        let cat = catalan_sequence(301);
        let est = estimate_asymptotics(&cat).unwrap();
        assert!((est.mu - 4.0).abs() < 1e-6, "mu = {}", est.mu);
        assert!((est.alpha + 1.5).abs() < 1e-5, "alpha = {}", est.alpha);
        let c_target = 1.0 / std::f64::consts::PI.sqrt();
        assert!(
            (est.c - c_target).abs() / c_target < 1e-3,
            "c = {} vs {}",
            est.c,
            c_target
        );
        assert_eq!(est.n_used, 300);

        let report = conjecture_check(1, &est);
        assert!(report.pass());
        assert_eq!(report.target_mu, 4.0);
    }

    #[test]
    fn short_sequences_are_rejected() {
        let short = catalan_sequence(20);
        assert_eq!(
            estimate_asymptotics(&short),
            Err(AsymptoticsError::TooShort(20))
        );
    }

    #[test]
    fn non_positive_tails_are_rejected() {
        let mut cat = catalan_sequence(60);
        let last = cat.values.len() - 1;
        cat.values[last] = -cat.values[last].clone();
        assert_eq!(
            estimate_asymptotics(&cat),
            Err(AsymptoticsError::NonPositiveTail(last))
        );
    }

    #[test]
    fn closed_form_constants_match_f64_evaluation() {
        // Same formulas in plain f64, as an independent spot check.
        let c1 = 3.0 / std::f64::consts::PI.sqrt();
        let c2 = 3.0 * (13.0 - 21f64.sqrt()) / (49.0 * std::f64::consts::PI.sqrt());
        let c3 = (-7.0 + 6.0 * 7f64.sqrt()) / (56.0 * std::f64::consts::PI.sqrt());
        assert!((closed_form_c(1).unwrap() - c1).abs() < 1e-12);
        assert!((closed_form_c(2).unwrap() - c2).abs() < 1e-12);
        assert!((closed_form_c(3).unwrap() - c3).abs() < 1e-12);
        assert!(closed_form_c(4).is_none());
        // The five-digit values used in discussion round correctly.
        assert!((closed_form_c(2).unwrap() - 0.29076).abs() < 5e-6);
        assert!((closed_form_c(3).unwrap() - 0.08941).abs() < 5e-6);
    }

    #[test]
    fn conjectured_growth_rates() {
        assert_eq!(conjectured_mu(1), 4.0);
        assert_eq!(conjectured_mu(2), 12.0);
        assert_eq!(conjectured_mu(3), 32.0);
    }

    #[test]
    fn neville_recovers_polynomial_limits() {
        // v_n = 5 + 3/n + 1/n^2 extrapolates to exactly 5 at depth >= 2.
        let nodes: Vec<usize> = (40..=44).collect();
        let values: Vec<BigRational> = nodes
            .iter()
            .map(|&n| {
                let n = BigInt::from(n);
                BigRational::from(BigInt::from(5))
                    + BigRational::new(BigInt::from(3), n.clone())
                    + BigRational::new(BigInt::one(), &n * &n)
            })
            .collect();
        let lim = neville_to_zero(&nodes, &values);
        assert_eq!(lim, BigRational::from(BigInt::from(5)));
    }
}
