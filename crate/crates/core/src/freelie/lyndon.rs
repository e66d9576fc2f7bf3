//! Lyndon-word bases for the multigraded pieces of the free Lie algebra on
//! two letters: generation, Witt-formula dimension counts, standard-
//! factorization bracketings, and the triangular change of basis between
//! Lie elements and their noncommutative expansions.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::freelie::ncpoly::NcPoly;
use crate::freelie::word::{MultiDegree, Word, MAX_WORD_LEN};
use crate::scalar::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeLieError {
    #[error("polynomial is not a Lie element (obstruction at word {0:?})")]
    NotLie(String),
    #[error("parse error at offset {0}: {1}")]
    Parse(usize, String),
    #[error("expected a homogeneous element of multidegree ({0}, {1})")]
    NotHomogeneous(usize, usize),
    #[error("degree {0} exceeds the supported maximum {MAX_WORD_LEN}")]
    DegreeTooLarge(usize),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("span vectors must be homogeneous of one common multidegree")]
    MixedSpan,
}

/// Cap (entry count) for the global basis caches, read once from
/// `LIEDER_CACHE_CAP`. When a cache would exceed the cap it is cleared and
/// rebuilt on demand; correctness is unaffected.
pub fn cache_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("LIEDER_CACHE_CAP")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(usize::MAX)
    })
}

fn lyndon_cache() -> &'static Mutex<HashMap<MultiDegree, Arc<Vec<Word>>>> {
    static CACHE: OnceLock<Mutex<HashMap<MultiDegree, Arc<Vec<Word>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn expand_cache() -> &'static Mutex<HashMap<Word, Arc<NcPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<Word, Arc<NcPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn moebius(n: u64) -> i64 {
    debug_assert!(n >= 1);
    let mut n = n;
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn binom_i128(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Dimension of the free Lie algebra piece of multidegree `mu` over a
/// two-letter alphabet (the multigraded Witt formula).
pub fn witt_dim(mu: MultiDegree) -> u64 {
    let n = mu.total() as u64;
    if n == 0 {
        return 0;
    }
    if n == 1 {
        return 1;
    }
    let g = gcd(mu.0 as u64, mu.1 as u64).max(1);
    let mut acc: i128 = 0;
    let mut d = 1;
    while d <= g {
        if g % d == 0 {
            acc += moebius(d) as i128 * binom_i128(n / d, mu.0 as u64 / d);
        }
        d += 1;
    }
    debug_assert!(acc >= 0 && acc % n as i128 == 0);
    (acc / n as i128) as u64
}

/// Total dimension in degree `n`, summed over all multidegrees:
/// `(1/n) sum_{d|n} mu(d) 2^{n/d}`.
pub fn witt_dim_total(n: usize) -> u64 {
    if n == 0 {
        return 0;
    }
    let n = n as u64;
    let mut acc: i128 = 0;
    for d in 1..=n {
        if n % d == 0 {
            acc += moebius(d) as i128 * (1i128 << (n / d));
        }
    }
    (acc / n as i128) as u64
}

fn words_of_multidegree(mu: MultiDegree) -> Vec<Word> {
    // Enumerate positions of letter 1 as combinations, in lex order.
    let n = mu.total();
    let k = mu.1;
    let mut out = Vec::new();
    if n > MAX_WORD_LEN {
        panic!("degree {n} exceeds the supported maximum {MAX_WORD_LEN}");
    }
    let mut positions: Vec<usize> = (0..k).collect();
    loop {
        let mut w = Word::empty();
        let mut next = 0usize;
        for i in 0..n {
            if next < k && positions[next] == i {
                w = w.push(1);
                next += 1;
            } else {
                w = w.push(0);
            }
        }
        out.push(w);
        if k == 0 {
            break;
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if positions[i] != i + n - k {
                break;
            }
        }
        if positions[i] == i + n - k {
            return out;
        }
        positions[i] += 1;
        for j in i + 1..k {
            positions[j] = positions[j - 1] + 1;
        }
    }
    out
}

/// Sorted Lyndon words of multidegree `mu`; cached.
pub fn lyndon_words(mu: MultiDegree) -> Arc<Vec<Word>> {
    if let Some(hit) = lyndon_cache().lock().unwrap().get(&mu) {
        return Arc::clone(hit);
    }
    let mut words: Vec<Word> = words_of_multidegree(mu)
        .into_iter()
        .filter(Word::is_lyndon)
        .collect();
    words.sort();
    debug_assert_eq!(words.len() as u64, witt_dim(mu));
    let arc = Arc::new(words);
    let mut cache = lyndon_cache().lock().unwrap();
    if cache.len() >= cache_cap() {
        cache.clear();
    }
    cache.insert(mu, Arc::clone(&arc));
    arc
}

/// Standard (right) factorization of a Lyndon word of length >= 2: the right
/// factor is the lexicographically least proper suffix; both factors are
/// Lyndon.
pub fn standard_factorization(w: &Word) -> (Word, Word) {
    debug_assert!(w.len() >= 2 && w.is_lyndon());
    let mut best = w.suffix_from(w.len() - 1);
    let mut best_at = w.len() - 1;
    for i in (1..w.len() - 1).rev() {
        let s = w.suffix_from(i);
        if s.lex_cmp(&best) == Ordering::Less {
            best = s;
            best_at = i;
        }
    }
    let u = w.prefix(best_at);
    debug_assert!(u.is_lyndon() && best.is_lyndon());
    (u, best)
}

/// Noncommutative expansion of the standard bracketing of a Lyndon word.
/// The result is triangular: the smallest word is `w` itself, coefficient 1.
pub fn expand_bracketing(w: &Word) -> Arc<NcPoly> {
    if let Some(hit) = expand_cache().lock().unwrap().get(w) {
        return Arc::clone(hit);
    }
    let poly = if w.len() == 1 {
        NcPoly::word(*w)
    } else {
        let (u, v) = standard_factorization(w);
        let pu = expand_bracketing(&u);
        let pv = expand_bracketing(&v);
        pu.commutator(&pv)
    };
    let (min, c) = poly.min_word().expect("bracketing expansion is nonzero");
    assert!(
        min == w && c.is_one(),
        "triangularity violated for {w:?}: leading term {min:?}"
    );
    let arc = Arc::new(poly);
    let mut cache = expand_cache().lock().unwrap();
    if cache.len() >= cache_cap() {
        cache.clear();
    }
    cache.insert(*w, Arc::clone(&arc));
    arc
}

/// Coordinates of a homogeneous Lie element over the sorted Lyndon basis of
/// `mu`, via triangular elimination of leading words. Fails exactly when the
/// polynomial is not a Lie element.
pub fn lie_coords(mu: MultiDegree, p: &NcPoly) -> Result<Vec<Rat>, FreeLieError> {
    if !p.is_zero() && p.homogeneous_multidegree() != Some(mu) {
        return Err(FreeLieError::NotHomogeneous(mu.0, mu.1));
    }
    let basis = lyndon_words(mu);
    let mut coords = vec![Rat::zero(); basis.len()];
    let mut rest = p.clone();
    while let Some((w, c)) = rest.min_word() {
        let (w, c) = (*w, c.clone());
        let Ok(idx) = basis.binary_search(&w) else {
            return Err(FreeLieError::NotLie(format!("{w:?}")));
        };
        coords[idx] = c.clone();
        rest.add_scaled(&expand_bracketing(&w), &-c);
    }
    Ok(coords)
}

/// Noncommutative expansion of a coordinate vector over the Lyndon basis.
pub fn nc_from_coords(mu: MultiDegree, coords: &[Rat]) -> NcPoly {
    let basis = lyndon_words(mu);
    assert_eq!(coords.len(), basis.len(), "coordinate length mismatch");
    let mut out = NcPoly::zero();
    for (w, c) in basis.iter().zip(coords) {
        if !c.is_zero() {
            out.add_scaled(&expand_bracketing(w), c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelie::word::Alphabet;

    fn w(s: &str) -> Word {
        Word::parse(s, Alphabet::AT).unwrap()
    }

    #[test]
    fn witt_dimensions_match_necklace_counts() {
        assert_eq!(witt_dim(MultiDegree(1, 0)), 1);
        assert_eq!(witt_dim(MultiDegree(1, 1)), 1);
        assert_eq!(witt_dim(MultiDegree(2, 1)), 1);
        assert_eq!(witt_dim(MultiDegree(2, 2)), 1);
        assert_eq!(witt_dim(MultiDegree(3, 2)), 2);
        assert_eq!(witt_dim(MultiDegree(2, 0)), 0);
        assert_eq!(witt_dim(MultiDegree(0, 5)), 0);
        // Degree totals: 10 -> 99, 12 -> 335.
        assert_eq!(witt_dim_total(10), 99);
        assert_eq!(witt_dim_total(12), 335);
        for n in 1..=14 {
            let by_mu: u64 = (0..=n).map(|a| witt_dim(MultiDegree(a, n - a))).sum();
            assert_eq!(by_mu, witt_dim_total(n), "degree {n}");
        }
    }

    #[test]
    fn lyndon_generation_matches_witt() {
        for n in 1..=12usize {
            for a in 0..=n {
                let mu = MultiDegree(a, n - a);
                assert_eq!(lyndon_words(mu).len() as u64, witt_dim(mu), "{mu:?}");
            }
        }
    }

    #[test]
    fn standard_factorization_examples() {
        assert_eq!(standard_factorization(&w("AT")), (w("A"), w("T")));
        assert_eq!(standard_factorization(&w("AAT")), (w("A"), w("AT")));
        assert_eq!(standard_factorization(&w("ATT")), (w("AT"), w("T")));
        assert_eq!(standard_factorization(&w("AATAT")), (w("AAT"), w("AT")));
    }

    #[test]
    fn expansion_is_triangular_with_unit_leading_term() {
        for n in 2..=10usize {
            for a in 0..=n {
                for word in lyndon_words(MultiDegree(a, n - a)).iter() {
                    let p = expand_bracketing(word);
                    let (min, c) = p.min_word().unwrap();
                    assert_eq!((min, c.is_one()), (word, true));
                }
            }
        }
    }

    #[test]
    fn coords_roundtrip() {
        let mu = MultiDegree(3, 4);
        let basis = lyndon_words(mu);
        let coords: Vec<Rat> = (0..basis.len())
            .map(|i| Rat::frac(i as i64 + 1, 3))
            .collect();
        let nc = nc_from_coords(mu, &coords);
        assert_eq!(lie_coords(mu, &nc).unwrap(), coords);
    }

    #[test]
    fn non_lie_detected() {
        // TA alone is not a Lie element.
        let p = NcPoly::word(w("TA"));
        assert!(matches!(
            lie_coords(MultiDegree(1, 1), &p),
            Err(FreeLieError::NotLie(_))
        ));
        // AT + TA is symmetric, also not Lie.
        let mut q = NcPoly::word(w("AT"));
        q.add_term(w("TA"), Rat::one());
        assert!(lie_coords(MultiDegree(1, 1), &q).is_err());
    }
}
