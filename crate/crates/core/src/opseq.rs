//! Dyer-Lashof operation words: admissibility, excess, the two indexing
//! conventions, and rewriting to admissible normal form by the Adem
//! relations.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::binom_mod2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Indexing {
    Upper,
    Lower,
}

/// A word in Dyer-Lashof operations, read left to right with the last
/// entry applied first.
///
/// Upper indices are absolute (`Q^s` raises degree by `s`). Lower indices
/// are relative to the degree of the class acted on: `Q_a x = Q^{a + |x|} x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpSequence {
    entries: Vec<u32>,
    indexing: Indexing,
}

/// Excess of an upper sequence. The empty sequence has infinite excess.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Excess {
    Finite(i64),
    Infinite,
}

impl Excess {
    pub fn exceeds(self, bound: i64) -> bool {
        match self {
            Excess::Finite(e) => e > bound,
            Excess::Infinite => true,
        }
    }

    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Excess::Finite(e) => e >= bound,
            Excess::Infinite => true,
        }
    }
}

impl fmt::Display for Excess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Excess::Finite(e) => write!(f, "{e}"),
            Excess::Infinite => f.write_str("inf"),
        }
    }
}

impl OpSequence {
    pub fn new(entries: Vec<u32>, indexing: Indexing) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&e| e == 0) {
            return Err(Error::Usage(format!(
                "operation entries must be positive, got {bad}"
            )));
        }
        Ok(OpSequence { entries, indexing })
    }

    pub fn upper(entries: Vec<u32>) -> Result<Self> {
        Self::new(entries, Indexing::Upper)
    }

    pub fn lower(entries: Vec<u32>) -> Result<Self> {
        Self::new(entries, Indexing::Lower)
    }

    pub fn empty(indexing: Indexing) -> Self {
        OpSequence { entries: Vec::new(), indexing }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn indexing(&self) -> Indexing {
        self.indexing
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn require_upper(&self) -> Result<&[u32]> {
        match self.indexing {
            Indexing::Upper => Ok(&self.entries),
            Indexing::Lower => Err(Error::Usage(
                "operation requires upper indexing; convert first".into(),
            )),
        }
    }

    pub fn is_admissible(&self) -> Result<bool> {
        self.require_upper().map(is_admissible)
    }

    pub fn excess(&self) -> Result<Excess> {
        self.require_upper().map(excess)
    }

    /// Converts between upper and lower indexing. `base_degree` is the
    /// degree of the class the innermost operation is applied to.
    pub fn convert_indexing(&self, base_degree: u32, to: Indexing) -> Result<OpSequence> {
        if self.indexing == to {
            return Ok(self.clone());
        }
        let mut degree = base_degree as i64;
        let mut out = vec![0u32; self.entries.len()];
        for (slot, &e) in out.iter_mut().zip(&self.entries).rev() {
            let upper = match to {
                Indexing::Upper => e as i64 + degree,
                Indexing::Lower => e as i64,
            };
            let converted = match to {
                Indexing::Upper => upper,
                Indexing::Lower => upper - degree,
            };
            if converted <= 0 {
                return Err(Error::Domain(converted));
            }
            *slot = converted as u32;
            degree += upper;
        }
        Ok(OpSequence { entries: out, indexing: to })
    }

    /// Degree added when applied to a class of degree `base_degree`.
    pub fn degree_shift(&self, base_degree: u32) -> u64 {
        match self.indexing {
            Indexing::Upper => self.entries.iter().map(|&e| e as u64).sum(),
            Indexing::Lower => {
                let mut degree = base_degree as u64;
                for &a in self.entries.iter().rev() {
                    degree = a as u64 + 2 * degree;
                }
                degree - base_degree as u64
            }
        }
    }
}

impl fmt::Display for OpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.indexing {
            Indexing::Upper => "",
            Indexing::Lower => "_",
        };
        write!(f, "{tag}{}", format_word(&self.entries))
    }
}

/// `(a,b,c)`; the empty word is `()`.
pub fn format_word(word: &[u32]) -> String {
    let inner: Vec<String> = word.iter().map(|e| e.to_string()).collect();
    format!("({})", inner.join(","))
}

pub fn is_admissible(word: &[u32]) -> bool {
    word.windows(2).all(|w| w[0] <= 2 * w[1])
}

pub fn excess(word: &[u32]) -> Excess {
    match word.split_first() {
        None => Excess::Infinite,
        Some((&first, rest)) => {
            Excess::Finite(first as i64 - rest.iter().map(|&e| e as i64).sum::<i64>())
        }
    }
}

/// An F_2-linear combination of upper-indexed words.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormalOpSum(BTreeSet<Vec<u32>>);

impl FormalOpSum {
    pub fn zero() -> Self {
        FormalOpSum(BTreeSet::new())
    }

    pub fn single(word: Vec<u32>) -> Self {
        FormalOpSum(BTreeSet::from([word]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.0.iter()
    }

    pub fn contains(&self, word: &[u32]) -> bool {
        self.0.contains(word)
    }

    /// Adds one word with coefficient 1.
    pub fn toggle(&mut self, word: Vec<u32>) {
        if !self.0.remove(&word) {
            self.0.insert(word);
        }
    }

    pub fn add_assign(&mut self, other: &FormalOpSum) {
        for w in &other.0 {
            self.toggle(w.clone());
        }
    }
}

impl FromIterator<Vec<u32>> for FormalOpSum {
    fn from_iter<I: IntoIterator<Item = Vec<u32>>>(iter: I) -> Self {
        let mut sum = FormalOpSum::zero();
        for w in iter {
            sum.toggle(w);
        }
        sum
    }
}

impl fmt::Display for FormalOpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|w| {
                if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|e| format!("Q^{e}")).collect::<Vec<_>>().join(" ")
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// One Adem relation: for `r > 2s`,
/// `Q^r Q^s = sum_i binom(i - s - 1, 2i - r) Q^{r+s-i} Q^i`.
pub fn adem_step(r: u32, s: u32) -> Result<FormalOpSum> {
    if r <= 2 * s {
        return Err(Error::Usage(format!(
            "adem_step requires a non-admissible pair, got ({r},{s})"
        )));
    }
    Ok(adem_terms(r, s).collect())
}

fn adem_terms(r: u32, s: u32) -> impl Iterator<Item = Vec<u32>> {
    let (r, s) = (r as i64, s as i64);
    // 0 <= 2i - r and 2i - r <= i - s - 1
    let lo = (r + 1) / 2;
    let hi = r - s - 1;
    (lo..=hi)
        .filter(move |&i| binom_mod2((i - s - 1) as u64, (2 * i - r) as u64))
        .filter(move |&i| r + s - i > 0 && i > 0)
        .map(move |i| vec![(r + s - i) as u32, i as u32])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// Rewrite the leftmost (outermost) non-admissible pair first.
    Leftmost,
    /// Rewrite the rightmost (innermost) non-admissible pair first.
    Rightmost,
}

impl RewriteStrategy {
    fn locate(self, word: &[u32]) -> Option<usize> {
        let bad = |j: &usize| word[*j] > 2 * word[*j + 1];
        let n = word.len().saturating_sub(1);
        match self {
            RewriteStrategy::Leftmost => (0..n).find(bad),
            RewriteStrategy::Rightmost => (0..n).rev().find(bad),
        }
    }
}

fn rewrite(
    word: &[u32],
    strategy: RewriteStrategy,
    memo: &mut HashMap<Vec<u32>, FormalOpSum>,
) -> FormalOpSum {
    if word.contains(&0) {
        return FormalOpSum::zero();
    }
    if let Some(hit) = memo.get(word) {
        return hit.clone();
    }
    let result = match strategy.locate(word) {
        None => FormalOpSum::single(word.to_vec()),
        Some(j) => {
            let mut acc = FormalOpSum::zero();
            for pair in adem_terms(word[j], word[j + 1]) {
                let mut next = Vec::with_capacity(word.len());
                next.extend_from_slice(&word[..j]);
                next.extend_from_slice(&pair);
                next.extend_from_slice(&word[j + 2..]);
                acc.add_assign(&rewrite(&next, strategy, memo));
            }
            acc
        }
    };
    memo.insert(word.to_vec(), result.clone());
    result
}

/// Normal form with an explicit strategy and a private memo table.
pub fn normalize_with(word: &[u32], strategy: RewriteStrategy) -> FormalOpSum {
    rewrite(word, strategy, &mut HashMap::new())
}

fn cache() -> &'static RwLock<HashMap<Vec<u32>, FormalOpSum>> {
    static CACHE: OnceLock<RwLock<HashMap<Vec<u32>, FormalOpSum>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Admissible normal form of an upper-indexed word (leftmost strategy),
/// memoized process-wide.
pub fn normalize(word: &[u32]) -> FormalOpSum {
    if is_admissible(word) && !word.contains(&0) {
        return FormalOpSum::single(word.to_vec());
    }
    if let Some(hit) = cache().read().expect("normal form cache poisoned").get(word) {
        return hit.clone();
    }
    let mut memo = HashMap::new();
    let result = rewrite(word, RewriteStrategy::Leftmost, &mut memo);
    let mut shared = cache().write().expect("normal form cache poisoned");
    for (k, v) in memo {
        shared.entry(k).or_insert(v);
    }
    result
}

/// Loads a normalization cache file into the process-wide table. Each
/// line has the form `w1,w2,... -> t1;t2;...` where each term is a
/// comma-separated word, `1` is the empty word and `0` the zero sum.
pub fn load_cache(path: &Path) -> Result<usize> {
    let file = std::fs::File::open(path).map_err(|e| Error::Io(e.to_string()))?;
    let mut loaded = Vec::new();
    for (n, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::Io(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |what: &str| Error::Parse(format!("cache line {}: {what}", n + 1));
        let (lhs, rhs) = line.split_once("->").ok_or_else(|| parse_err("missing '->'"))?;
        let word = parse_cache_word(lhs.trim()).ok_or_else(|| parse_err("bad word"))?;
        let rhs = rhs.trim();
        let sum = if rhs == "0" {
            FormalOpSum::zero()
        } else {
            let mut sum = FormalOpSum::zero();
            for t in rhs.split(';') {
                let t = parse_cache_word(t.trim()).ok_or_else(|| parse_err("bad term"))?;
                if !is_admissible(&t) {
                    return Err(parse_err("term is not admissible"));
                }
                if t.iter().sum::<u32>() != word.iter().sum::<u32>() {
                    return Err(parse_err("term degree differs from the word"));
                }
                sum.toggle(t);
            }
            sum
        };
        loaded.push((word, sum));
    }
    let count = loaded.len();
    let mut shared = cache().write().expect("normal form cache poisoned");
    for (k, v) in loaded {
        shared.entry(k).or_insert(v);
    }
    Ok(count)
}

/// Writes the process-wide table in sorted order.
pub fn save_cache(path: &Path) -> Result<usize> {
    let shared = cache().read().expect("normal form cache poisoned");
    let mut entries: Vec<_> = shared.iter().collect();
    entries.sort();
    let mut out = std::io::BufWriter::new(
        std::fs::File::create(path).map_err(|e| Error::Io(e.to_string()))?,
    );
    for (word, sum) in &entries {
        let rhs = if sum.is_zero() {
            "0".to_string()
        } else {
            sum.terms().map(|t| cache_word(t)).collect::<Vec<_>>().join(";")
        };
        writeln!(out, "{} -> {}", cache_word(word), rhs).map_err(|e| Error::Io(e.to_string()))?;
    }
    Ok(entries.len())
}

fn cache_word(word: &[u32]) -> String {
    if word.is_empty() {
        "1".into()
    } else {
        word.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn parse_cache_word(s: &str) -> Option<Vec<u32>> {
    if s == "1" {
        return Some(Vec::new());
    }
    s.split(',').map(|e| e.trim().parse::<u32>().ok().filter(|&e| e > 0)).collect()
}
