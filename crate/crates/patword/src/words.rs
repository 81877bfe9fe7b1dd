//! Words over `{1, ..., n}`, their multiplicity profiles, and length-3
//! pattern occurrence counting.
//!
//! A word is a finite sequence of letters drawn from a declared alphabet
//! `{1, ..., n}`. Its multiplicity profile `[l_1, ..., l_n]` records how many
//! copies of each letter it contains. Pattern occurrences are index-increasing
//! subsequences order-isomorphic to a permutation of `{1, 2, 3}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("letter {letter} out of range 1..={alphabet_size}")]
    LetterOutOfRange { letter: u32, alphabet_size: u32 },
    #[error("pattern {0:?} is not a permutation of {{1,2,3}}")]
    NotAPattern([u8; 3]),
}

/// A word over the alphabet `{1, ..., alphabet_size}`.
///
/// Equality is plain sequence equality; two words with different declared
/// alphabet sizes are never equal even if their letters coincide.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u32>,
    alphabet_size: u32,
}

impl Word {
    pub fn new(letters: Vec<u32>, alphabet_size: u32) -> Result<Self, WordError> {
        for &l in &letters {
            if l == 0 || l > alphabet_size {
                return Err(WordError::LetterOutOfRange {
                    letter: l,
                    alphabet_size,
                });
            }
        }
        Ok(Word {
            letters,
            alphabet_size,
        })
    }

    /// Parse a word from a digit string, e.g. `"121322"`. Only usable for
    /// alphabets up to 9 letters, which covers every fixture in the tests.
    pub fn from_digits(digits: &str, alphabet_size: u32) -> Result<Self, WordError> {
        let letters = digits
            .chars()
            .map(|c| c.to_digit(10).unwrap_or(0))
            .collect();
        Word::new(letters, alphabet_size)
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The multiplicity profile `[l_1, ..., l_n]` of this word.
    pub fn multiplicities(&self) -> MultiplicityList {
        let mut counts = vec![0usize; self.alphabet_size as usize];
        for &l in &self.letters {
            counts[(l - 1) as usize] += 1;
        }
        MultiplicityList::new(counts)
    }

    /// Replace every letter `i` by `n + 1 - i`. An involution.
    pub fn complement(&self) -> Word {
        let n = self.alphabet_size;
        Word {
            letters: self.letters.iter().map(|&l| n + 1 - l).collect(),
            alphabet_size: n,
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self}, n={})", self.alphabet_size)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet_size <= 9 {
            for &l in &self.letters {
                write!(f, "{l}")?;
            }
        } else {
            let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join(","))?;
        }
        Ok(())
    }
}

/// A list `[l_1, ..., l_n]` of letter multiplicities. Entries may be zero;
/// a zero entry contributes no letters but keeps alphabet positions aligned.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiplicityList {
    counts: Vec<usize>,
}

impl MultiplicityList {
    pub fn new(counts: Vec<usize>) -> Self {
        MultiplicityList { counts }
    }

    /// The all-`r` list of length `n`.
    pub fn uniform(r: usize, n: usize) -> Self {
        MultiplicityList::new(vec![r; n])
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn reversed(&self) -> Self {
        let mut counts = self.counts.clone();
        counts.reverse();
        MultiplicityList::new(counts)
    }

    /// Entries with zeros removed, preserving order.
    pub fn stripped(&self) -> Self {
        MultiplicityList::new(self.counts.iter().copied().filter(|&c| c > 0).collect())
    }

    /// Canonical cache key: sorted ascending with zero entries removed.
    pub fn canonical_key(&self) -> Vec<usize> {
        let mut key: Vec<usize> = self.counts.iter().copied().filter(|&c| c > 0).collect();
        key.sort_unstable();
        key
    }

    /// `total! / (l_1! * ... * l_n!)`, the number of associated words.
    pub fn multinomial(&self) -> BigInt {
        let mut acc = BigInt::one();
        let mut placed = 0usize;
        for &c in &self.counts {
            for i in 1..=c {
                placed += 1;
                acc = acc * BigInt::from(placed) / BigInt::from(i);
            }
        }
        acc
    }
}

impl fmt::Debug for MultiplicityList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.counts)
    }
}

impl fmt::Display for MultiplicityList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for MultiplicityList {
    type Err = String;

    /// Parse a comma-separated list with no spaces, e.g. `"2,2,2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(MultiplicityList::new(Vec::new()));
        }
        let counts = s
            .split(',')
            .map(|part| {
                part.parse::<usize>()
                    .map_err(|_| format!("invalid multiplicity entry {part:?}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MultiplicityList::new(counts))
    }
}

/// A length-3 permutation pattern such as 123, 132 or 321.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pattern([u8; 3]);

impl Pattern {
    pub const P123: Pattern = Pattern([1, 2, 3]);
    pub const P132: Pattern = Pattern([1, 3, 2]);
    pub const P213: Pattern = Pattern([2, 1, 3]);
    pub const P231: Pattern = Pattern([2, 3, 1]);
    pub const P312: Pattern = Pattern([3, 1, 2]);
    pub const P321: Pattern = Pattern([3, 2, 1]);

    pub fn new(digits: [u8; 3]) -> Result<Self, WordError> {
        let mut sorted = digits;
        sorted.sort_unstable();
        if sorted != [1, 2, 3] {
            return Err(WordError::NotAPattern(digits));
        }
        Ok(Pattern(digits))
    }

    pub fn digits(&self) -> [u8; 3] {
        self.0
    }

    /// Does the value triple realize this pattern? Order-isomorphism with a
    /// permutation pattern forces the three values to be pairwise distinct.
    pub fn matches(&self, values: (u32, u32, u32)) -> bool {
        let v = [values.0, values.1, values.2];
        let p = self.0;
        for a in 0..3 {
            for b in (a + 1)..3 {
                if v[a].cmp(&v[b]) != p[a].cmp(&p[b]) {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.0[0], self.0[1], self.0[2])
    }
}

/// Count index triples `i < j < k` whose values are order-isomorphic to `p`.
///
/// Reference implementation: a plain cubic scan over all triples. Words of
/// length below 3 trivially contain no occurrence.
pub fn count_pattern_occurrences(w: &Word, p: Pattern) -> u64 {
    let v = w.letters();
    let k = v.len();
    let mut count = 0u64;
    for i in 0..k {
        for j in (i + 1)..k {
            // Cheap pairwise reject before the inner loop.
            if v[i].cmp(&v[j]) != p.digits()[0].cmp(&p.digits()[1]) {
                continue;
            }
            for t in (j + 1)..k {
                if p.matches((v[i], v[j], v[t])) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Does `w` avoid `p` entirely?
pub fn avoids(w: &Word, p: Pattern) -> bool {
    count_pattern_occurrences(w, p) == 0
}

/// Lexicographic enumeration of every distinct word associated with a
/// multiplicity list. Yields exactly `total!/prod(l_i!)` words.
pub fn enumerate_words(list: &MultiplicityList) -> WordIter {
    WordIter::new(list)
}

/// Enumeration restricted to words starting with `first_letter`, still in
/// lexicographic order. Concatenating the streams for each possible first
/// letter in increasing order reproduces `enumerate_words` exactly, which is
/// what makes prefix-partitioned sweeps deterministic.
pub fn enumerate_words_with_first(list: &MultiplicityList, first_letter: u32) -> WordIter {
    WordIter::with_first(list, first_letter)
}

pub struct WordIter {
    // Current word content; `fixed` leading positions never move.
    state: Vec<u32>,
    fixed: usize,
    alphabet_size: u32,
    done: bool,
}

impl WordIter {
    fn new(list: &MultiplicityList) -> Self {
        let mut state = Vec::with_capacity(list.total());
        for (idx, &c) in list.counts().iter().enumerate() {
            state.extend(std::iter::repeat_n(idx as u32 + 1, c));
        }
        WordIter {
            state,
            fixed: 0,
            alphabet_size: list.alphabet_size() as u32,
            done: false,
        }
    }

    fn with_first(list: &MultiplicityList, first_letter: u32) -> Self {
        let idx = first_letter as usize - 1;
        if idx >= list.alphabet_size() || list.counts()[idx] == 0 {
            return WordIter {
                state: Vec::new(),
                fixed: 0,
                alphabet_size: list.alphabet_size() as u32,
                done: true,
            };
        }
        let mut rest = list.counts().to_vec();
        rest[idx] -= 1;
        let mut state = vec![first_letter];
        for (i, &c) in rest.iter().enumerate() {
            state.extend(std::iter::repeat_n(i as u32 + 1, c));
        }
        WordIter {
            state,
            fixed: 1,
            alphabet_size: list.alphabet_size() as u32,
            done: false,
        }
    }

    // Standard next-permutation on the suffix after `fixed`; with repeated
    // letters it visits each distinct arrangement exactly once.
    fn advance(&mut self) -> bool {
        let s = &mut self.state[self.fixed..];
        if s.len() < 2 {
            return false;
        }
        let mut i = s.len() - 1;
        while i > 0 && s[i - 1] >= s[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = s.len() - 1;
        while s[j] <= s[i - 1] {
            j -= 1;
        }
        s.swap(i - 1, j);
        s[i..].reverse();
        true
    }
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let word = Word {
            letters: self.state.clone(),
            alphabet_size: self.alphabet_size,
        };
        if !self.advance() {
            self.done = true;
        }
        Some(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(digits: &str, n: u32) -> Word {
        Word::from_digits(digits, n).unwrap()
    }

    #[test]
    fn occurrence_counts_match_fixtures() {
        assert_eq!(count_pattern_occurrences(&w("123", 3), Pattern::P123), 1);
        assert_eq!(count_pattern_occurrences(&w("121322", 3), Pattern::P123), 1);
        assert_eq!(count_pattern_occurrences(&w("323122", 3), Pattern::P321), 1);
        assert_eq!(count_pattern_occurrences(&w("11", 3), Pattern::P123), 0);
        assert_eq!(count_pattern_occurrences(&w("", 3), Pattern::P123), 0);
    }

    #[test]
    fn occurrences_need_strict_increases() {
        // Repeated letters never form a 123.
        assert_eq!(count_pattern_occurrences(&w("112233", 3), Pattern::P123), 8);
        assert_eq!(count_pattern_occurrences(&w("111", 3), Pattern::P123), 0);
        assert_eq!(count_pattern_occurrences(&w("122", 3), Pattern::P123), 0);
    }

    #[test]
    fn complement_fixture() {
        assert_eq!(w("121322", 3).complement(), w("323122", 3));
        assert_eq!(w("", 3).complement(), w("", 3));
        assert_eq!(w("22", 3).complement(), w("22", 3));
    }

    #[test]
    fn enumerate_small_lists() {
        let words: Vec<String> = enumerate_words(&MultiplicityList::new(vec![1, 1]))
            .map(|word| word.to_string())
            .collect();
        assert_eq!(words, vec!["12", "21"]);

        let words: Vec<String> = enumerate_words(&MultiplicityList::new(vec![2, 1]))
            .map(|word| word.to_string())
            .collect();
        assert_eq!(words, vec!["112", "121", "211"]);

        assert_eq!(
            enumerate_words(&MultiplicityList::new(vec![2, 2, 2])).count(),
            90
        );
    }

    #[test]
    fn enumerate_empty_list_yields_empty_word() {
        let words: Vec<Word> = enumerate_words(&MultiplicityList::new(vec![])).collect();
        assert_eq!(words.len(), 1);
        assert!(words[0].is_empty());
    }

    #[test]
    fn enumerate_handles_zero_entries() {
        let words: Vec<String> = enumerate_words(&MultiplicityList::new(vec![1, 0, 2]))
            .map(|word| word.to_string())
            .collect();
        assert_eq!(words, vec!["133", "313", "331"]);
    }

    #[test]
    fn partitioned_enumeration_matches_full() {
        let list = MultiplicityList::new(vec![2, 1, 2]);
        let full: Vec<Word> = enumerate_words(&list).collect();
        let mut stitched = Vec::new();
        for letter in 1..=3 {
            stitched.extend(enumerate_words_with_first(&list, letter));
        }
        assert_eq!(full, stitched);
    }

    #[test]
    fn word_validates_letters() {
        assert!(Word::new(vec![1, 4], 3).is_err());
        assert!(Word::new(vec![0], 3).is_err());
        assert!(Pattern::new([1, 1, 2]).is_err());
    }

    #[test]
    fn multinomial_counts() {
        assert_eq!(
            MultiplicityList::new(vec![2, 2, 2]).multinomial(),
            BigInt::from(90)
        );
        assert_eq!(MultiplicityList::new(vec![]).multinomial(), BigInt::one());
        assert_eq!(
            MultiplicityList::new(vec![3, 3]).multinomial(),
            BigInt::from(20)
        );
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        (1u32..=5, proptest::collection::vec(0u32..5, 0..10)).prop_map(|(n, raw)| {
            let letters = raw.into_iter().map(|x| x % n + 1).collect();
            Word::new(letters, n).unwrap()
        })
    }

    proptest! {
        #[test]
        fn complement_is_involution(word in arb_word()) {
            prop_assert_eq!(word.complement().complement(), word);
        }

        #[test]
        fn complement_maps_123_to_321(word in arb_word()) {
            prop_assert_eq!(
                count_pattern_occurrences(&word, Pattern::P123),
                count_pattern_occurrences(&word.complement(), Pattern::P321)
            );
        }

        #[test]
        fn short_words_contain_nothing(word in arb_word()) {
            if word.len() < 3 {
                for p in [Pattern::P123, Pattern::P132, Pattern::P213,
                          Pattern::P231, Pattern::P312, Pattern::P321] {
                    prop_assert_eq!(count_pattern_occurrences(&word, p), 0);
                }
            }
        }

        #[test]
        fn enumeration_count_is_multinomial(counts in proptest::collection::vec(0usize..4, 0..4)) {
            let list = MultiplicityList::new(counts);
            let expected = list.multinomial();
            let n = enumerate_words(&list).count();
            prop_assert_eq!(BigInt::from(n), expected);
        }
    }
}
