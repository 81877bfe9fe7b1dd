//! Exact counting of pattern-constrained words.
//!
//! `AvoiderCounter` memoizes A(l), the number of 123-avoiding words
//! associated with a multiplicity list l. A is symmetric in its arguments,
//! so cache keys are sorted with zeros stripped. On top of it sits the
//! double-sum counting the words containing 123 exactly once:
//!
//! ```text
//! sum_{b=2}^{n-1} sum_{j=0}^{l_b-1}
//!     (A(l_1,...,l_{b-1}, j+1)       - A(l_1,...,l_{b-1}, j))
//!   * (A(l_b - j, l_{b+1},...,l_n)   - A(l_b - j - 1, l_{b+1},...,l_n))
//! ```
//!
//! Everything here is arbitrary-precision integer arithmetic; the brute-force
//! enumerator doubles as the independent oracle for the formula.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::Zero;
use thiserror::Error;

use crate::words::{count_pattern_occurrences, enumerate_words, MultiplicityList, Pattern};

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// Memoized counter for 123-avoiding words.
///
/// Concurrent use is supported: the cache is a grow-only map behind an
/// `RwLock` with read-or-compute semantics. Two threads may compute the same
/// entry redundantly, but readers never observe an inconsistent value.
#[derive(Debug, Default)]
pub struct AvoiderCounter {
    cache: RwLock<HashMap<Vec<usize>, BigInt>>,
}

impl AvoiderCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cached_entries(&self) -> usize {
        self.cache.read().expect("cache lock poisoned").len()
    }

    /// A(l): the number of 123-avoiding words associated with `list`.
    /// Invariant under permutations of the entries; zeros are ignored;
    /// the empty list counts the empty word, giving 1.
    pub fn count_avoiders(&self, list: &MultiplicityList) -> BigInt {
        let key = list.canonical_key();
        if let Some(hit) = self.cache.read().expect("cache lock poisoned").get(&key) {
            return hit.clone();
        }
        let value = count_avoiders_uncached(&key);
        self.cache
            .write()
            .expect("cache lock poisoned")
            .entry(key)
            .or_insert_with(|| value.clone());
        value
    }

    /// The number of words associated with `list` containing the pattern 123
    /// exactly once, by the good-pair double sum. Zero entries are stripped
    /// before the sum is applied; fewer than three distinct letters make the
    /// sum empty and the count 0.
    pub fn count_exactly_one_123(&self, list: &MultiplicityList) -> BigInt {
        let l = list.stripped();
        let counts = l.counts();
        let n = counts.len();
        let mut total = BigInt::zero();
        if n < 3 {
            return total;
        }
        for b in 2..n {
            // b is 1-based; counts[b-1] = l_b
            let lb = counts[b - 1];
            for j in 0..lb {
                let mut prefix: Vec<usize> = counts[..b - 1].to_vec();
                prefix.push(j + 1);
                let hi = self.count_avoiders(&MultiplicityList::new(prefix.clone()));
                *prefix.last_mut().expect("nonempty") = j;
                let lo = self.count_avoiders(&MultiplicityList::new(prefix));
                let left = hi - lo;
                if left.is_zero() {
                    continue;
                }

                let mut suffix: Vec<usize> = Vec::with_capacity(n - b + 1);
                suffix.push(lb - j);
                suffix.extend_from_slice(&counts[b..]);
                let hi = self.count_avoiders(&MultiplicityList::new(suffix.clone()));
                suffix[0] = lb - j - 1;
                let lo = self.count_avoiders(&MultiplicityList::new(suffix));
                total += left * (hi - lo);
            }
        }
        total
    }

    /// Persist the cache as JSON lines, one record per entry, sorted by key
    /// for reproducible output: `{"list":[1,2,2],"count":19}`.
    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let cache = self.cache.read().expect("cache lock poisoned");
        let mut entries: Vec<(&Vec<usize>, &BigInt)> = cache.iter().collect();
        entries.sort();
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        for (key, count) in entries {
            let list: Vec<String> = key.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{{\"list\":[{}],\"count\":{}}}", list.join(","), count)?;
        }
        Ok(())
    }

    /// Load a cache written by [`AvoiderCounter::save`]. Each line must be a
    /// well-formed record whose key is sorted ascending with no zero entries;
    /// anything else is rejected with its line number.
    pub fn load(path: &Path) -> Result<Self, CacheError> {
        let file = std::fs::File::open(path)?;
        let mut map = HashMap::new();
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let (key, count) =
                parse_cache_record(&line).map_err(|reason| CacheError::Malformed {
                    line: lineno,
                    reason,
                })?;
            map.insert(key, count);
        }
        Ok(AvoiderCounter {
            cache: RwLock::new(map),
        })
    }
}

fn parse_cache_record(line: &str) -> Result<(Vec<usize>, BigInt), String> {
    let value: serde_json::Value =
        serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = value.as_object().ok_or("record is not an object")?;
    let list = obj
        .get("list")
        .and_then(|v| v.as_array())
        .ok_or("missing \"list\" array")?;
    let mut key = Vec::with_capacity(list.len());
    for item in list {
        let entry = item
            .as_u64()
            .ok_or_else(|| format!("list entry {item} is not a nonnegative integer"))?;
        key.push(entry as usize);
    }
    if key.contains(&0) {
        return Err("key contains a zero entry".into());
    }
    if key.windows(2).any(|w| w[0] > w[1]) {
        return Err("key is not sorted ascending".into());
    }
    let number = match obj.get("count") {
        Some(serde_json::Value::Number(n)) => n.to_string(),
        Some(other) => return Err(format!("count {other} is not an integer")),
        None => return Err("missing \"count\"".into()),
    };
    let count =
        BigInt::from_str(&number).map_err(|_| format!("count {number} is not an integer"))?;
    if count.sign() == num_bigint::Sign::Minus {
        return Err("count is negative".into());
    }
    Ok((key, count))
}

// Depth-first enumeration of avoiders with early abort: a prefix is extended
// letter by letter and abandoned the moment a 123 would complete. The state
// carried down is (min letter seen, min top of an ascending pair): appending
// x completes a 123 exactly when some ascending pair tops out below x.
fn count_avoiders_uncached(key: &[usize]) -> BigInt {
    let mut remaining: Vec<usize> = key.to_vec();
    let total: usize = remaining.iter().sum();
    let mut count = BigInt::zero();
    dfs(&mut remaining, u32::MAX, u32::MAX, total, &mut count);
    count
}

fn dfs(
    remaining: &mut Vec<usize>,
    min_seen: u32,
    min_pair_top: u32,
    left: usize,
    acc: &mut BigInt,
) {
    if left == 0 {
        *acc += 1;
        return;
    }
    for idx in 0..remaining.len() {
        if remaining[idx] == 0 {
            continue;
        }
        let x = idx as u32 + 1;
        if min_pair_top < x {
            continue; // appending x would complete a 123
        }
        let new_top = if min_seen < x {
            min_pair_top.min(x)
        } else {
            min_pair_top
        };
        remaining[idx] -= 1;
        dfs(remaining, min_seen.min(x), new_top, left - 1, acc);
        remaining[idx] += 1;
    }
}

/// Count words associated with `list` containing exactly `k` occurrences of
/// `p`, by full enumeration. This is the independent oracle; callers keep the
/// total small (<= 12 or so).
pub fn count_exactly_k_bruteforce(list: &MultiplicityList, p: Pattern, k: u64) -> BigInt {
    let mut count = BigInt::zero();
    for word in enumerate_words(list) {
        if count_pattern_occurrences(&word, p) == k {
            count += 1;
        }
    }
    count
}

/// `(3/n) * C(2n, n+3)`: the number of n-permutations containing 123 (or,
/// symmetrically, 321) exactly once. Always an exact integer; 0 for n < 3.
pub fn noonan_count(n: usize) -> BigInt {
    if n < 3 {
        return BigInt::zero();
    }
    let binom = binomial(BigInt::from(2 * n), BigInt::from(n + 3));
    let (q, r) = num_integer::Integer::div_rem(&(binom * 3), &BigInt::from(n));
    debug_assert!(r.is_zero());
    q
}

/// `C(2n-3, n-3)`: the number of n-permutations containing 132 exactly once.
/// 0 for n < 3.
pub fn bona_132_count(n: usize) -> BigInt {
    if n < 3 {
        return BigInt::zero();
    }
    binomial(BigInt::from(2 * n - 3), BigInt::from(n - 3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use std::sync::Arc;

    fn list(counts: &[usize]) -> MultiplicityList {
        MultiplicityList::new(counts.to_vec())
    }

    #[test]
    fn avoider_fixtures() {
        let counter = AvoiderCounter::new();
        assert_eq!(counter.count_avoiders(&list(&[1, 1, 1])), BigInt::from(5));
        assert_eq!(counter.count_avoiders(&list(&[2, 2, 2])), BigInt::from(43));
        assert_eq!(counter.count_avoiders(&list(&[2, 2, 1])), BigInt::from(19));
        assert_eq!(counter.count_avoiders(&list(&[5])), BigInt::one());
        assert_eq!(counter.count_avoiders(&list(&[3, 3])), BigInt::from(20));
        assert_eq!(counter.count_avoiders(&list(&[])), BigInt::one());
    }

    #[test]
    fn avoiders_match_brute_force_on_small_lists() {
        let counter = AvoiderCounter::new();
        for counts in [
            vec![1, 1, 1],
            vec![2, 1, 2],
            vec![3, 1],
            vec![2, 2, 2],
            vec![1, 2, 1, 1],
            vec![2, 0, 2],
        ] {
            let l = list(&counts);
            assert_eq!(
                counter.count_avoiders(&l),
                count_exactly_k_bruteforce(&l, Pattern::P123, 0),
                "list {counts:?}"
            );
        }
    }

    #[test]
    fn symmetry_via_brute_force() {
        // The counter canonicalizes its key, so the non-trivial claim is that
        // brute-force counts of permuted lists agree with it.
        let counter = AvoiderCounter::new();
        let base = list(&[1, 2, 3]);
        let expected = counter.count_avoiders(&base);
        for perm in [&[1, 3, 2][..], &[2, 1, 3], &[3, 2, 1], &[3, 1, 2]] {
            assert_eq!(
                count_exactly_k_bruteforce(&list(perm), Pattern::P123, 0),
                expected
            );
        }
    }

    #[test]
    fn boundary_coherence_zero_equals_dropped() {
        let counter = AvoiderCounter::new();
        assert_eq!(
            counter.count_avoiders(&list(&[2, 0, 2])),
            counter.count_avoiders(&list(&[2, 2]))
        );
        assert_eq!(
            counter.count_avoiders(&list(&[0, 1, 2])),
            counter.count_avoiders(&list(&[1, 2]))
        );
    }

    #[test]
    fn exactly_one_fixtures() {
        let counter = AvoiderCounter::new();
        assert_eq!(
            counter.count_exactly_one_123(&list(&[1, 1, 1])),
            BigInt::one()
        );
        assert_eq!(
            counter.count_exactly_one_123(&list(&[2, 2, 2])),
            BigInt::from(12)
        );
        assert_eq!(
            counter.count_exactly_one_123(&list(&[1, 1])),
            BigInt::zero()
        );
        assert_eq!(
            counter.count_exactly_one_123(&list(&[1, 1, 1, 1])),
            BigInt::from(6)
        );
    }

    #[test]
    fn exactly_one_agrees_with_oracle_on_sample() {
        let counter = AvoiderCounter::new();
        for counts in [
            vec![2, 2, 2],
            vec![1, 2, 3],
            vec![3, 1, 2],
            vec![1, 1, 1, 2],
            vec![2, 1, 0, 2],
        ] {
            let l = list(&counts);
            assert_eq!(
                counter.count_exactly_one_123(&l),
                count_exactly_k_bruteforce(&l, Pattern::P123, 1),
                "list {counts:?}"
            );
        }
    }

    #[test]
    fn brute_force_fixtures() {
        assert_eq!(
            count_exactly_k_bruteforce(&list(&[2, 2, 2]), Pattern::P123, 0),
            BigInt::from(43)
        );
        assert_eq!(
            count_exactly_k_bruteforce(&list(&[1, 1, 1]), Pattern::P321, 1),
            BigInt::one()
        );
    }

    #[test]
    fn noonan_fixtures() {
        assert_eq!(noonan_count(2), BigInt::zero());
        assert_eq!(noonan_count(3), BigInt::one());
        assert_eq!(noonan_count(4), BigInt::from(6));
        assert_eq!(noonan_count(5), BigInt::from(27));
        // Matches the brute force over permutations.
        for n in 3..=5 {
            assert_eq!(
                noonan_count(n),
                count_exactly_k_bruteforce(&MultiplicityList::uniform(1, n), Pattern::P123, 1)
            );
        }
    }

    #[test]
    fn bona_fixtures() {
        assert_eq!(bona_132_count(3), BigInt::one());
        assert_eq!(bona_132_count(4), BigInt::from(5));
        assert_eq!(bona_132_count(5), BigInt::from(21));
        for n in 3..=5 {
            assert_eq!(
                bona_132_count(n),
                count_exactly_k_bruteforce(&MultiplicityList::uniform(1, n), Pattern::P132, 1)
            );
        }
    }

    #[test]
    fn cache_round_trip_and_validation() {
        let dir = std::env::temp_dir().join(format!("patword-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.jsonl");

        let counter = AvoiderCounter::new();
        counter.count_avoiders(&list(&[2, 2, 1]));
        counter.count_avoiders(&list(&[1, 1, 1]));
        counter.save(&path).unwrap();

        let reloaded = AvoiderCounter::load(&path).unwrap();
        assert_eq!(reloaded.count_avoiders(&list(&[1, 2, 2])), BigInt::from(19));

        // Malformed records are rejected with their line number.
        std::fs::write(&path, "{\"list\":[2,1],\"count\":3}\n").unwrap();
        match AvoiderCounter::load(&path) {
            Err(CacheError::Malformed { line: 1, .. }) => {}
            other => panic!("expected malformed-record error, got {other:?}"),
        }
        std::fs::write(&path, "{\"list\":[1,2],\"count\":3}\nnot json\n").unwrap();
        match AvoiderCounter::load(&path) {
            Err(CacheError::Malformed { line: 2, .. }) => {}
            other => panic!("expected malformed-record error, got {other:?}"),
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn concurrent_counting_is_consistent() {
        let counter = Arc::new(AvoiderCounter::new());
        let expected = AvoiderCounter::new().count_avoiders(&list(&[2, 2, 2, 1]));
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let counter = Arc::clone(&counter);
                let expected = expected.clone();
                std::thread::spawn(move || {
                    for _ in 0..10 {
                        assert_eq!(counter.count_avoiders(&list(&[2, 2, 2, 1])), expected);
                    }
                })
            })
            .collect();
        for h in handles {
            h.join().unwrap();
        }
    }
}
