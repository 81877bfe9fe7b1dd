//! The end-to-end verification ladder.
//!
//! Thirteen criteria exercise the whole pipeline against fixtures, oracles
//! and closed forms: series fixtures, the counting formula against brute
//! force, the symmetry corollaries, the bijection round trip, the equation
//! system residuals, the generating functions, the bundled algebraic
//! equation and recurrences, and the asymptotic growth targets. Criteria 1
//! through 12 gate the build; criterion 13 is an experiment whose outcome is
//! reported either way.
//!
//! The `acceptance` integration test runs every criterion as its own test;
//! the CLI exposes the same ladder as `patword selftest`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebraic::{degree_profile, guess_algebraic};
use crate::asymptotics::{
    closed_form_c, conjecture_check, estimate_asymptotics, AsymptoticEstimate, ALPHA_ABS_TOL,
    C_REL_TOL, MU_REL_TOL,
};
use crate::bijection::{decompose, recompose};
use crate::counting::{bona_132_count, count_exactly_k_bruteforce, noonan_count, AvoiderCounter};
use crate::fixtures;
use crate::genfun::{compute_f, compute_h, decimate, equation_residual, solve_g_system};
use crate::recurrence::{cross_annihilate, guess_recurrence, IntegerSequence, RecurrenceOperator};
use crate::series::TruncatedSeries;
use crate::words::{count_pattern_occurrences, enumerate_words, MultiplicityList, Pattern};

/// Terms of f_3 computed for the r=3 experiments. Large enough for the
/// recurrence guess (needs 126) and the algebraic sweep (needs 166).
pub const F3_TERMS: usize = 170;
/// Extension horizon for the asymptotic estimates.
pub const ASYMPTOTICS_HORIZON: usize = 300;

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    /// Non-gating outcomes are reported but do not fail the suite.
    pub gating: bool,
    pub passed: bool,
    pub details: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} [{}]{} {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            if self.gating { "" } else { " (informational)" },
            self.name,
            self.details
        )
    }
}

/// Every multiplicity list with positive entries, 1 <= n <= max_n letters
/// and total at most max_total, ordered by total then lexicographically.
pub fn positive_lists(max_total: usize, max_n: usize) -> Vec<MultiplicityList> {
    fn compositions(
        left: usize,
        max_n: usize,
        partial: &mut Vec<usize>,
        out: &mut Vec<MultiplicityList>,
    ) {
        if left == 0 {
            out.push(MultiplicityList::new(partial.clone()));
            return;
        }
        if partial.len() == max_n {
            return;
        }
        for next in 1..=left {
            partial.push(next);
            compositions(left - next, max_n, partial, out);
            partial.pop();
        }
    }
    let mut out = Vec::new();
    for total in 1..=max_total {
        compositions(total, max_n, &mut Vec::new(), &mut out);
    }
    out
}

fn series_ints(series: &TruncatedSeries) -> Vec<BigInt> {
    series
        .coeffs()
        .iter()
        .map(|c| {
            assert!(c.is_integer(), "non-integer series coefficient {c}");
            c.to_integer()
        })
        .collect()
}

fn f2_series() -> &'static TruncatedSeries {
    static S: OnceLock<TruncatedSeries> = OnceLock::new();
    S.get_or_init(|| compute_f(2, 60).expect("f_2 computes"))
}

fn f3_series() -> &'static TruncatedSeries {
    static S: OnceLock<TruncatedSeries> = OnceLock::new();
    S.get_or_init(|| compute_f(3, F3_TERMS).expect("f_3 computes"))
}

fn a2_sequence() -> IntegerSequence {
    IntegerSequence::new(series_ints(f2_series()), "a_2")
}

fn a3_sequence() -> IntegerSequence {
    IntegerSequence::new(series_ints(f3_series()), "a_3")
}

/// The recurrence guessed for a_3 from the series data, shared by the
/// asymptotics criteria.
pub fn a3_recurrence() -> &'static Option<RecurrenceOperator> {
    static S: OnceLock<Option<RecurrenceOperator>> = OnceLock::new();
    S.get_or_init(|| {
        guess_recurrence(&a3_sequence(), 8, 11, 10).expect("enough terms for the a_3 sweep")
    })
}

fn a1_estimate() -> &'static AsymptoticEstimate {
    static S: OnceLock<AsymptoticEstimate> = OnceLock::new();
    S.get_or_init(|| {
        let seed = IntegerSequence::new((0..=6).map(noonan_count).collect(), "a_1");
        let ext = fixtures::recurrence_r1()
            .extend(&seed, ASYMPTOTICS_HORIZON)
            .expect("a_1 extends");
        estimate_asymptotics(&ext).expect("a_1 estimate")
    })
}

fn a2_estimate() -> &'static AsymptoticEstimate {
    static S: OnceLock<AsymptoticEstimate> = OnceLock::new();
    S.get_or_init(|| {
        let f2 = compute_f(2, 10).expect("f_2 computes");
        let seed = IntegerSequence::new(series_ints(&f2), "a_2");
        let ext = fixtures::recurrence_r2()
            .extend(&seed, ASYMPTOTICS_HORIZON)
            .expect("a_2 extends");
        estimate_asymptotics(&ext).expect("a_2 estimate")
    })
}

fn a3_estimate() -> &'static Option<AsymptoticEstimate> {
    static S: OnceLock<Option<AsymptoticEstimate>> = OnceLock::new();
    S.get_or_init(|| {
        let op = a3_recurrence().as_ref()?;
        let ext = op
            .extend(&a3_sequence(), ASYMPTOTICS_HORIZON)
            .expect("a_3 extends");
        Some(estimate_asymptotics(&ext).expect("a_3 estimate"))
    })
}

fn outcome(
    id: usize,
    name: &'static str,
    gating: bool,
    passed: bool,
    details: String,
) -> CriterionOutcome {
    CriterionOutcome {
        id,
        name,
        gating,
        passed,
        details,
    }
}

/// Criterion 1: the avoider counter reproduces the printed weight-enumerator
/// coefficients exactly.
pub fn criterion_01_avoider_fixtures() -> CriterionOutcome {
    let counter = AvoiderCounter::new();
    let mut failures = Vec::new();

    let g1 = [1i64, 1, 2, 5, 14, 42];
    for (n, expected) in g1.iter().enumerate() {
        let got = counter.count_avoiders(&MultiplicityList::uniform(1, n));
        if got != BigInt::from(*expected) {
            failures.push(format!("g1[{n}] = {got}, want {expected}"));
        }
    }
    let g2_00 = [1i64, 1, 6, 43, 352, 3114];
    for (n, expected) in g2_00.iter().enumerate() {
        let got = counter.count_avoiders(&MultiplicityList::uniform(2, n));
        if got != BigInt::from(*expected) {
            failures.push(format!("g2_00[{n}] = {got}, want {expected}"));
        }
    }
    let g2_01 = [1i64, 3, 19, 145];
    for (n, expected) in g2_01.iter().enumerate() {
        let mut counts = vec![2usize; n];
        counts.push(1);
        let got = counter.count_avoiders(&MultiplicityList::new(counts));
        if got != BigInt::from(*expected) {
            failures.push(format!("g2_01[{n}] = {got}, want {expected}"));
        }
    }
    outcome(
        1,
        "avoider series fixtures",
        true,
        failures.is_empty(),
        if failures.is_empty() {
            "16 printed coefficients reproduced exactly".into()
        } else {
            failures.join("; ")
        },
    )
}

/// Criterion 2: the double-sum count equals the brute-force count on every
/// positive list with total <= 9 and at most 5 letters.
pub fn criterion_02_formula_vs_oracle() -> CriterionOutcome {
    let counter = AvoiderCounter::new();
    let lists = positive_lists(9, 5);
    let mut checked = 0usize;
    for list in &lists {
        let formula = counter.count_exactly_one_123(list);
        let brute = count_exactly_k_bruteforce(list, Pattern::P123, 1);
        if formula != brute {
            return outcome(
                2,
                "double sum vs brute force",
                true,
                false,
                format!("mismatch at [{list}]: formula {formula}, brute force {brute}"),
            );
        }
        checked += 1;
    }
    outcome(
        2,
        "double sum vs brute force",
        true,
        true,
        format!("{checked} lists agree exactly"),
    )
}

/// Criterion 3: reversal invariance and the exactly-one-321 equality on the
/// same corpus.
pub fn criterion_03_corollaries() -> CriterionOutcome {
    let counter = AvoiderCounter::new();
    let lists = positive_lists(9, 5);
    let mut checked = 0usize;
    for list in &lists {
        let count = counter.count_exactly_one_123(list);
        let reversed = counter.count_exactly_one_123(&list.reversed());
        if count != reversed {
            return outcome(
                3,
                "reversal and 321 corollaries",
                true,
                false,
                format!("reversal mismatch at [{list}]: {count} vs {reversed}"),
            );
        }
        let brute_321 = count_exactly_k_bruteforce(list, Pattern::P321, 1);
        if count != brute_321 {
            return outcome(
                3,
                "reversal and 321 corollaries",
                true,
                false,
                format!("321 mismatch at [{list}]: {count} vs {brute_321}"),
            );
        }
        checked += 1;
    }
    outcome(
        3,
        "reversal and 321 corollaries",
        true,
        true,
        format!("{checked} lists agree exactly on both corollaries"),
    )
}

/// Criterion 4: exactly-one-132 counts match C(2n-3, n-3) for n <= 7 and
/// part ways with the exactly-one-123 count at n = 5 (21 vs 27).
pub fn criterion_04_remark_separation() -> CriterionOutcome {
    for n in 1..=7usize {
        let brute = count_exactly_k_bruteforce(&MultiplicityList::uniform(1, n), Pattern::P132, 1);
        if brute != bona_132_count(n) {
            return outcome(
                4,
                "132 closed form and separation",
                true,
                false,
                format!("exactly-one-132 at n={n}: {brute} vs {}", bona_132_count(n)),
            );
        }
    }
    let ok = noonan_count(5) == BigInt::from(27)
        && bona_132_count(5) == BigInt::from(21)
        && noonan_count(5) != bona_132_count(5);
    outcome(
        4,
        "132 closed form and separation",
        true,
        ok,
        "n <= 7 match C(2n-3, n-3); at n = 5 the 123 and 132 counts differ (27 vs 21)".into(),
    )
}

/// Criterion 5: decompose/recompose is the identity on every word with
/// exactly one 123 and total at most 8, in both directions.
pub fn criterion_05_bijection_round_trip() -> CriterionOutcome {
    let mut words_checked = 0usize;
    for list in positive_lists(8, 8) {
        for word in enumerate_words(&list) {
            if count_pattern_occurrences(&word, Pattern::P123) != 1 {
                continue;
            }
            let pair = match decompose(&word) {
                Ok(pair) => pair,
                Err(e) => {
                    return outcome(
                        5,
                        "bijection round trip",
                        true,
                        false,
                        format!("decompose failed on {word}: {e}"),
                    )
                }
            };
            if let Err(e) = pair.validate() {
                return outcome(
                    5,
                    "bijection round trip",
                    true,
                    false,
                    format!("invalid pair from {word}: {e}"),
                );
            }
            match recompose(&pair) {
                Ok(back) if back == word => {}
                Ok(back) => {
                    return outcome(
                        5,
                        "bijection round trip",
                        true,
                        false,
                        format!("{word} decomposed and recomposed to {back}"),
                    )
                }
                Err(e) => {
                    return outcome(
                        5,
                        "bijection round trip",
                        true,
                        false,
                        format!("recompose failed for {word}: {e}"),
                    )
                }
            }
            // Inverse direction on the pair the word produced.
            match recompose(&pair).and_then(|w| decompose(&w)) {
                Ok(again) if again == pair => {}
                other => {
                    return outcome(
                        5,
                        "bijection round trip",
                        true,
                        false,
                        format!("pair round trip failed for {word}: {other:?}"),
                    )
                }
            }
            words_checked += 1;
        }
    }
    outcome(
        5,
        "bijection round trip",
        true,
        true,
        format!("{words_checked} exactly-one-123 words round-trip exactly"),
    )
}

/// Criterion 6: substituting the solved tables back into the equation system
/// leaves zero residual to order 40 for r = 1, 2, 3.
pub fn criterion_06_system_residuals() -> CriterionOutcome {
    for r in 1..=3u32 {
        let table = match solve_g_system(r, 40) {
            Ok(t) => t,
            Err(e) => {
                return outcome(
                    6,
                    "equation system residuals",
                    true,
                    false,
                    format!("solve failed for r={r}: {e}"),
                )
            }
        };
        for i in 0..r {
            for j in i..r {
                if !equation_residual(&table, i, j).is_zero() {
                    return outcome(
                        6,
                        "equation system residuals",
                        true,
                        false,
                        format!("nonzero residual for r={r}, entry ({i},{j})"),
                    );
                }
            }
        }
    }
    outcome(
        6,
        "equation system residuals",
        true,
        true,
        "zero residuals to order 40 for r = 1, 2, 3".into(),
    )
}

/// Criterion 7: the general weight-enumerator formula specializes to the
/// closed forms for r = 1, 2 and keeps its support on multiples of r.
pub fn criterion_07_general_formula_consistency() -> CriterionOutcome {
    let order = 40;

    let table = solve_g_system(1, order + 1).expect("r=1 solves");
    let h1 = compute_h(1, order).expect("h_1 computes");
    let g = table.get(0, 0);
    let one = TruncatedSeries::one(order + 1);
    let u = g.sub(&g.shift_up(1)).sub(&one);
    let closed1 = u.mul(&u).div_x().expect("h_1 closed form");
    if h1 != closed1.truncated(h1.order()) {
        return outcome(
            7,
            "general formula vs warm-ups",
            true,
            false,
            "h_1 disagrees with its closed form".into(),
        );
    }

    let table = solve_g_system(2, order + 1).expect("r=2 solves");
    let h2 = compute_h(2, order).expect("h_2 computes");
    let g00 = table.get(0, 0);
    let g01 = table.get(0, 1);
    let one = TruncatedSeries::one(order + 1);
    let left = g00.sub(&g01.shift_up(1)).sub(&one);
    let right = g01.sub(&g00.shift_up(1));
    let closed2 = left
        .mul(&right)
        .scale(&num_rational::BigRational::from(BigInt::from(2)))
        .div_x()
        .expect("h_2 closed form");
    if h2 != closed2.truncated(h2.order()) {
        return outcome(
            7,
            "general formula vs warm-ups",
            true,
            false,
            "h_2 disagrees with its closed form".into(),
        );
    }

    for r in 1..=3u32 {
        let h = compute_h(r, order).expect("h computes");
        for (m, c) in h.coeffs().iter().enumerate() {
            if !c.is_zero() && m % r as usize != 0 {
                return outcome(
                    7,
                    "general formula vs warm-ups",
                    true,
                    false,
                    format!("h_{r} has a stray coefficient at x^{m}"),
                );
            }
        }
        // Decimation must accept the support.
        if decimate(&h, r).is_err() {
            return outcome(
                7,
                "general formula vs warm-ups",
                true,
                false,
                format!("h_{r} support rejected by decimation"),
            );
        }
    }
    outcome(
        7,
        "general formula vs warm-ups",
        true,
        true,
        "closed forms match to order 40; support on multiples of r for r = 1, 2, 3".into(),
    )
}

/// Criterion 8: f_1 coefficients equal (3/n) C(2n, n+3) for 3 <= n <= 40.
pub fn criterion_08_f1_closed_form() -> CriterionOutcome {
    let f1 = compute_f(1, 40).expect("f_1 computes");
    for n in 3..=40usize {
        let got = f1.coeff(n);
        let want = noonan_count(n);
        if !got.is_integer() || got.to_integer() != want {
            return outcome(
                8,
                "f_1 against the closed form",
                true,
                false,
                format!("coefficient {n}: {got} vs {want}"),
            );
        }
    }
    outcome(
        8,
        "f_1 against the closed form",
        true,
        true,
        "coefficients 3..=40 match the closed form exactly".into(),
    )
}

/// Criterion 9: the bundled quartic annihilates f_2 to order 60 and the
/// guesser recovers the identical normalized polynomial.
pub fn criterion_09_algebraic_equation() -> CriterionOutcome {
    let f2 = f2_series();
    let fixture = fixtures::algebraic_r2();
    if !fixture.eval_at_series(f2).is_zero() {
        return outcome(
            9,
            "r=2 algebraic equation",
            true,
            false,
            "fixture quartic does not annihilate f_2".into(),
        );
    }
    match guess_algebraic(f2, 6, 4, 10) {
        Ok(Some(guessed)) if guessed == fixture => outcome(
            9,
            "r=2 algebraic equation",
            true,
            true,
            "fixture annihilates f_2 to order 60; guesser recovers it exactly".into(),
        ),
        Ok(Some(guessed)) => outcome(
            9,
            "r=2 algebraic equation",
            true,
            false,
            format!(
                "guesser found degrees {:?}, fixture has {:?}",
                degree_profile(&guessed),
                degree_profile(&fixture)
            ),
        ),
        Ok(None) => outcome(
            9,
            "r=2 algebraic equation",
            true,
            false,
            "guesser found nothing within bounds (6, 4)".into(),
        ),
        Err(e) => outcome(9, "r=2 algebraic equation", true, false, e.to_string()),
    }
}

/// Criterion 10: the bundled operators annihilate their sequences and the
/// guesser recovers a behaviorally equivalent order-4 operator for a_2.
pub fn criterion_10_recurrences() -> CriterionOutcome {
    let r1 = fixtures::recurrence_r1();
    let a1 = IntegerSequence::new((0..=30).map(noonan_count).collect(), "a_1");
    if !r1.annihilates(&a1) {
        return outcome(
            10,
            "recurrence fixtures and guess",
            true,
            false,
            "r=1 operator does not annihilate a_1(0..=30)".into(),
        );
    }

    let r2 = fixtures::recurrence_r2();
    let f2_40 = compute_f(2, 40).expect("f_2 computes");
    let a2_40 = IntegerSequence::new(series_ints(&f2_40), "a_2");
    if !r2.annihilates(&a2_40) {
        return outcome(
            10,
            "recurrence fixtures and guess",
            true,
            false,
            "r=2 operator does not annihilate f_2 coefficients 0..=40".into(),
        );
    }

    let a2 = a2_sequence();
    let guessed = match guess_recurrence(&a2, 4, 8, 10) {
        Ok(Some(op)) => op,
        Ok(None) => {
            return outcome(
                10,
                "recurrence fixtures and guess",
                true,
                false,
                "no recurrence found for a_2 within bounds (4, 8)".into(),
            )
        }
        Err(e) => {
            return outcome(
                10,
                "recurrence fixtures and guess",
                true,
                false,
                e.to_string(),
            )
        }
    };
    if guessed.order() != 4 {
        return outcome(
            10,
            "recurrence fixtures and guess",
            true,
            false,
            format!("guessed operator has order {}", guessed.order()),
        );
    }
    let seed = IntegerSequence::new(a2.values[..10].to_vec(), "a_2");
    match cross_annihilate(&guessed, &r2, &seed, 100) {
        Ok(true) => outcome(
            10,
            "recurrence fixtures and guess",
            true,
            true,
            "fixtures annihilate their sequences; guessed order-4 operator cross-annihilates on 100 terms"
                .into(),
        ),
        Ok(false) => outcome(
            10,
            "recurrence fixtures and guess",
            true,
            false,
            "guessed and fixture operators disagree on extensions".into(),
        ),
        Err(e) => outcome(10, "recurrence fixtures and guess", true, false, e.to_string()),
    }
}

fn judge_estimate(
    r: u32,
    est: &AsymptoticEstimate,
    target_mu: f64,
    target_c: f64,
) -> Result<String, String> {
    let mu_rel = (est.mu - target_mu).abs() / target_mu;
    let alpha_abs = (est.alpha + 1.5).abs();
    let c_rel = (est.c - target_c).abs() / target_c;
    let summary = format!(
        "r={r}: mu rel err {mu_rel:.2e}, alpha abs err {alpha_abs:.2e}, C rel err {c_rel:.2e}"
    );
    if mu_rel < MU_REL_TOL && alpha_abs < ALPHA_ABS_TOL && c_rel < C_REL_TOL {
        Ok(summary)
    } else {
        Err(format!(
            "{summary} (tolerances {MU_REL_TOL:.0e}, {ALPHA_ABS_TOL}, {C_REL_TOL})"
        ))
    }
}

/// Criterion 11: sequences extended to n = 300 reproduce the expected
/// asymptotics — growth 12 and 32, exponent -3/2, and the closed-form
/// constants within 2 percent.
pub fn criterion_11_asymptotics() -> CriterionOutcome {
    let est2 = a2_estimate();
    let c2 = closed_form_c(2).expect("closed form for r=2");
    let part2 = match judge_estimate(2, est2, 12.0, c2) {
        Ok(s) => s,
        Err(s) => return outcome(11, "asymptotics at n = 300", true, false, s),
    };

    let Some(est3) = a3_estimate().as_ref() else {
        return outcome(
            11,
            "asymptotics at n = 300",
            true,
            false,
            "no recurrence found for a_3, cannot extend".into(),
        );
    };
    let c3 = closed_form_c(3).expect("closed form for r=3");
    let part3 = match judge_estimate(3, est3, 32.0, c3) {
        Ok(s) => s,
        Err(s) => return outcome(11, "asymptotics at n = 300", true, false, s),
    };
    outcome(
        11,
        "asymptotics at n = 300",
        true,
        true,
        format!("{part2}; {part3}"),
    )
}

/// Criterion 12: the conjectured growth rates (r+1) 2^r hold for r = 1, 2, 3.
pub fn criterion_12_conjecture_probe() -> CriterionOutcome {
    let mut parts = Vec::new();
    let reports = [
        conjecture_check(1, a1_estimate()),
        conjecture_check(2, a2_estimate()),
        match a3_estimate() {
            Some(est) => conjecture_check(3, est),
            None => {
                return outcome(
                    12,
                    "growth-rate conjecture",
                    true,
                    false,
                    "no a_3 estimate available".into(),
                )
            }
        },
    ];
    let mut all_pass = true;
    for report in &reports {
        all_pass &= report.pass();
        parts.push(format!(
            "r={}: mu {:.6} vs {} ({})",
            report.r,
            report.mu,
            report.target_mu,
            if report.pass() { "pass" } else { "fail" }
        ));
    }
    outcome(
        12,
        "growth-rate conjecture",
        true,
        all_pass,
        parts.join("; "),
    )
}

/// Criterion 13 (informational): search f_3 for an algebraic equation.
/// Earlier computations put the minimal y-degree at 12; the sweep reports
/// what it actually finds and verifies.
pub fn criterion_13_f3_equation() -> CriterionOutcome {
    let f3 = f3_series();
    match guess_algebraic(f3, 11, 12, 10) {
        Ok(Some(p)) => {
            let (dx, dy) = degree_profile(&p);
            let verified = p.eval_at_series(f3).is_zero();
            let agrees = dy == 12;
            outcome(
                13,
                "f_3 algebraic equation (stretch)",
                false,
                agrees && verified,
                format!(
                    "found equation with degrees (x={dx}, y={dy}), verified on {} coefficients{}",
                    f3.order() + 1,
                    if agrees {
                        String::new()
                    } else {
                        format!("; y-degree {dy} beats the expected minimal degree 12")
                    }
                ),
            )
        }
        Ok(None) => outcome(
            13,
            "f_3 algebraic equation (stretch)",
            false,
            false,
            "no equation within bounds (11, 12) on the available terms".into(),
        ),
        Err(e) => outcome(
            13,
            "f_3 algebraic equation (stretch)",
            false,
            false,
            e.to_string(),
        ),
    }
}

/// Run the whole ladder in order, invoking `progress` after each criterion.
pub fn run_all(mut progress: impl FnMut(&CriterionOutcome)) -> Vec<CriterionOutcome> {
    let criteria: Vec<fn() -> CriterionOutcome> = vec![
        criterion_01_avoider_fixtures,
        criterion_02_formula_vs_oracle,
        criterion_03_corollaries,
        criterion_04_remark_separation,
        criterion_05_bijection_round_trip,
        criterion_06_system_residuals,
        criterion_07_general_formula_consistency,
        criterion_08_f1_closed_form,
        criterion_09_algebraic_equation,
        criterion_10_recurrences,
        criterion_11_asymptotics,
        criterion_12_conjecture_probe,
        criterion_13_f3_equation,
    ];
    let mut outcomes = Vec::with_capacity(criteria.len());
    for criterion in criteria {
        let out = criterion();
        progress(&out);
        outcomes.push(out);
    }
    outcomes
}
