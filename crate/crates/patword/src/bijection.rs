//! The bijection between words containing exactly one 123 occurrence and
//! "good pairs" of 123-avoiding words.
//!
//! Writing such a word as `pi1 a pi2 b pi3 c pi4`, where `abc` (with
//! `a < b < c`) is the unique occurrence, the word maps to the pair
//! `(a pi3 b pi4, pi1 b pi2 c)`. The first component lives over `{1,...,b}`
//! and does not start with `b`; the second lives over `{b,...,n}` (original
//! letter values, no re-normalization) and does not end with `b`. The inverse
//! re-reads `a` as the first letter and the leftmost `b` of the first
//! component, and `c` as the last letter and the rightmost `b` of the second.

use thiserror::Error;

use crate::words::{avoids, count_pattern_occurrences, Pattern, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BijectionError {
    /// The word does not contain the pattern 123 exactly once. `found` is the
    /// number of occurrences seen before giving up (0, or 2 meaning "two or
    /// more").
    #[error("word has {found} occurrences of 123 where exactly one is required")]
    NotExactlyOne { found: usize },
    #[error("invalid good pair: {0}")]
    InvalidGoodPair(String),
}

/// The unique 123 occurrence of a word: positions are 1-based and strictly
/// increasing, values are the letters at those positions, also strictly
/// increasing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OccurrenceTriple {
    pub positions: (usize, usize, usize),
    pub values: (u32, u32, u32),
}

/// A pair of 123-avoiding words in bijection with an exactly-one-123 word.
///
/// `pivot` is the middle letter `b` of the unique occurrence. `split` is the
/// number of pivot copies `sigma1` carries beyond the mandatory one, so
/// `sigma1` has `split + 1` copies of the pivot and `sigma2` has the rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodPair {
    pub sigma1: Word,
    pub sigma2: Word,
    pub pivot: u32,
    pub split: usize,
}

impl GoodPair {
    /// Check every defining condition, reporting the first violation.
    pub fn validate(&self) -> Result<(), BijectionError> {
        let b = self.pivot;
        let fail = |msg: String| Err(BijectionError::InvalidGoodPair(msg));
        if b < 2 {
            return fail(format!("pivot {b} must be at least 2"));
        }
        if self.sigma1.alphabet_size() != b {
            return fail(format!(
                "sigma1 alphabet is {}, expected {b}",
                self.sigma1.alphabet_size()
            ));
        }
        match self.sigma1.letters().first() {
            None => return fail("sigma1 is empty".into()),
            Some(&first) if first == b => return fail(format!("sigma1 starts with the pivot {b}")),
            _ => {}
        }
        match self.sigma2.letters().last() {
            None => return fail("sigma2 is empty".into()),
            Some(&last) if last == b => return fail(format!("sigma2 ends with the pivot {b}")),
            _ => {}
        }
        if self.sigma2.letters().iter().any(|&l| l < b) {
            return fail(format!("sigma2 contains a letter below the pivot {b}"));
        }
        if self.sigma2.alphabet_size() < b + 1 {
            return fail(format!(
                "sigma2 alphabet {} leaves no room above the pivot {b}",
                self.sigma2.alphabet_size()
            ));
        }
        let in_sigma1 = self.sigma1.letters().iter().filter(|&&l| l == b).count();
        if in_sigma1 != self.split + 1 {
            return fail(format!(
                "sigma1 has {in_sigma1} pivot copies, expected split+1 = {}",
                self.split + 1
            ));
        }
        if !self.sigma2.letters().contains(&b) {
            return fail("sigma2 has no pivot copy".into());
        }
        if !avoids(&self.sigma1, Pattern::P123) {
            return fail("sigma1 contains a 123".into());
        }
        if !avoids(&self.sigma2, Pattern::P123) {
            return fail("sigma2 contains a 123".into());
        }
        Ok(())
    }
}

/// Locate the single 123 occurrence of `w`. Scans all triples but bails out
/// as soon as a second occurrence is seen.
pub fn find_unique_123(w: &Word) -> Result<OccurrenceTriple, BijectionError> {
    let v = w.letters();
    let k = v.len();
    let mut found: Option<OccurrenceTriple> = None;
    for i in 0..k {
        for j in (i + 1)..k {
            if v[i] >= v[j] {
                continue;
            }
            for t in (j + 1)..k {
                if v[j] < v[t] {
                    if found.is_some() {
                        return Err(BijectionError::NotExactlyOne { found: 2 });
                    }
                    found = Some(OccurrenceTriple {
                        positions: (i + 1, j + 1, t + 1),
                        values: (v[i], v[j], v[t]),
                    });
                }
            }
        }
    }
    found.ok_or(BijectionError::NotExactlyOne { found: 0 })
}

/// Map an exactly-one-123 word to its good pair.
pub fn decompose(w: &Word) -> Result<GoodPair, BijectionError> {
    let occ = find_unique_123(w)?;
    let (pa, pb, pc) = occ.positions;
    let (_, b, _) = occ.values;
    let v = w.letters();

    // sigma1 = a pi3 b pi4 over {1,...,b}
    let mut sigma1 = Vec::with_capacity(v.len());
    sigma1.push(v[pa - 1]);
    sigma1.extend_from_slice(&v[pb..pc - 1]); // pi3
    sigma1.push(b);
    sigma1.extend_from_slice(&v[pc..]); // pi4

    // sigma2 = pi1 b pi2 c over {b,...,n}
    let mut sigma2 = Vec::with_capacity(v.len());
    sigma2.extend_from_slice(&v[..pa - 1]); // pi1
    sigma2.push(b);
    sigma2.extend_from_slice(&v[pa..pb - 1]); // pi2
    sigma2.push(v[pc - 1]);

    let split = sigma1.iter().filter(|&&l| l == b).count() - 1;
    let pair = GoodPair {
        sigma1: Word::new(sigma1, b).map_err(|e| {
            BijectionError::InvalidGoodPair(format!("sigma1 letters escape {{1..{b}}}: {e}"))
        })?,
        sigma2: Word::new(sigma2, w.alphabet_size()).expect("letters come from w"),
        pivot: b,
        split,
    };
    debug_assert_eq!(pair.validate(), Ok(()));
    Ok(pair)
}

/// Inverse of [`decompose`]: rebuild `pi1 a pi2 b pi3 c pi4` from a good pair.
pub fn recompose(pair: &GoodPair) -> Result<Word, BijectionError> {
    pair.validate()?;
    let b = pair.pivot;
    let s1 = pair.sigma1.letters();
    let s2 = pair.sigma2.letters();

    // a = first letter of sigma1, pivot = leftmost b (pi3 carries no b).
    let a = s1[0];
    let left_b = s1.iter().position(|&l| l == b).expect("validated");
    let pi3 = &s1[1..left_b];
    let pi4 = &s1[left_b + 1..];

    // c = last letter of sigma2, pivot = rightmost b (pi2 carries no b).
    let c = *s2.last().expect("validated");
    let right_b = s2.iter().rposition(|&l| l == b).expect("validated");
    let pi1 = &s2[..right_b];
    let pi2 = &s2[right_b + 1..s2.len() - 1];

    let mut letters = Vec::with_capacity(s1.len() + s2.len() - 1);
    letters.extend_from_slice(pi1);
    letters.push(a);
    letters.extend_from_slice(pi2);
    letters.push(b);
    letters.extend_from_slice(pi3);
    letters.push(c);
    letters.extend_from_slice(pi4);

    let word = Word::new(letters, pair.sigma2.alphabet_size()).expect("letters come from the pair");
    debug_assert_eq!(count_pattern_occurrences(&word, Pattern::P123), 1);
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{enumerate_words, MultiplicityList};

    fn w(digits: &str, n: u32) -> Word {
        Word::from_digits(digits, n).unwrap()
    }

    #[test]
    fn unique_occurrence_fixtures() {
        let occ = find_unique_123(&w("121322", 3)).unwrap();
        assert_eq!(occ.positions, (1, 2, 4));
        assert_eq!(occ.values, (1, 2, 3));

        let occ = find_unique_123(&w("123", 3)).unwrap();
        assert_eq!(occ.positions, (1, 2, 3));

        assert_eq!(
            find_unique_123(&w("321", 3)),
            Err(BijectionError::NotExactlyOne { found: 0 })
        );
        assert_eq!(
            find_unique_123(&w("1223", 3)),
            Err(BijectionError::NotExactlyOne { found: 2 })
        );
    }

    #[test]
    fn decompose_identity_word() {
        let pair = decompose(&w("123", 3)).unwrap();
        assert_eq!(pair.sigma1, w("12", 2));
        assert_eq!(pair.sigma2, w("23", 3));
        assert_eq!(pair.pivot, 2);
        assert_eq!(pair.split, 0);
        assert_eq!(recompose(&pair).unwrap(), w("123", 3));
    }

    #[test]
    fn decompose_example_word() {
        let word = w("121322", 3);
        let pair = decompose(&word).unwrap();
        pair.validate().unwrap();
        assert_eq!(pair.pivot, 2);
        assert_eq!(recompose(&pair).unwrap(), word);
    }

    #[test]
    fn decompose_rejects_non_single() {
        assert!(matches!(
            decompose(&w("321", 3)),
            Err(BijectionError::NotExactlyOne { .. })
        ));
    }

    #[test]
    fn recompose_rejects_bad_pairs() {
        // sigma1 starting with the pivot.
        let bad = GoodPair {
            sigma1: w("22", 2),
            sigma2: w("23", 3),
            pivot: 2,
            split: 1,
        };
        assert!(matches!(
            recompose(&bad),
            Err(BijectionError::InvalidGoodPair(_))
        ));

        // sigma2 ending with the pivot.
        let bad = GoodPair {
            sigma1: w("12", 2),
            sigma2: w("32", 3),
            pivot: 2,
            split: 0,
        };
        assert!(matches!(
            recompose(&bad),
            Err(BijectionError::InvalidGoodPair(_))
        ));

        // sigma1 containing its own 123.
        let bad = GoodPair {
            sigma1: w("1233", 3),
            sigma2: w("34", 4),
            pivot: 3,
            split: 0,
        };
        assert!(matches!(
            recompose(&bad),
            Err(BijectionError::InvalidGoodPair(_))
        ));
    }

    #[test]
    fn round_trip_over_2_2_2() {
        let list = MultiplicityList::new(vec![2, 2, 2]);
        let mut seen = 0;
        for word in enumerate_words(&list) {
            if count_pattern_occurrences(&word, Pattern::P123) == 1 {
                let pair = decompose(&word).unwrap();
                pair.validate().unwrap();
                assert_eq!(recompose(&pair).unwrap(), word);
                seen += 1;
            }
        }
        assert_eq!(seen, 12);
    }
}
