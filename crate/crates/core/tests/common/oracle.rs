//! Slow reference implementations, written without reusing library code
//! paths: Adem rewriting straight from the formula, Dyer-Lashof action by
//! the Cartan formula over ordered compositions (every factor copy kept
//! separate, cancellation left to the F_2 sum), and brute-force basis
//! enumeration.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use hurewicz::{Decorated, Element, Generator, Model, Monomial};

/// Monomial over one base generator: decoration word -> exponent.
pub type Mono = BTreeMap<Vec<u32>, u32>;

/// Element of the free model on one generator of dimension `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub dim: u32,
    pub terms: BTreeSet<Mono>,
}

fn binom_odd(n: i64, k: i64) -> bool {
    if k < 0 || n < k {
        return false;
    }
    // parity of n!/(k!(n-k)!) from 2-adic valuations
    let v = |m: i64| -> i64 {
        let mut total = 0;
        let mut p = 2;
        while p <= m {
            total += m / p;
            p *= 2;
        }
        total
    };
    v(n) == v(k) + v(n - k)
}

fn admissible(w: &[u32]) -> bool {
    w.windows(2).all(|p| p[0] <= 2 * p[1])
}

fn excess(w: &[u32]) -> i64 {
    match w.split_first() {
        None => i64::MAX,
        Some((a, rest)) => *a as i64 - rest.iter().map(|&x| x as i64).sum::<i64>(),
    }
}

/// Normal form of a word, as a set of admissible words.
pub fn adem(word: &[u32], memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>) -> BTreeSet<Vec<u32>> {
    if let Some(hit) = memo.get(word) {
        return hit.clone();
    }
    let out = match (0..word.len().saturating_sub(1)).find(|&j| word[j] > 2 * word[j + 1]) {
        None => BTreeSet::from([word.to_vec()]),
        Some(j) => {
            let (r, s) = (word[j] as i64, word[j + 1] as i64);
            let mut acc = BTreeSet::new();
            for i in 0..=r + s {
                if 2 * i < r || !binom_odd(i - s - 1, 2 * i - r) {
                    continue;
                }
                let mut w = word[..j].to_vec();
                w.push((r + s - i) as u32);
                w.push(i as u32);
                w.extend_from_slice(&word[j + 2..]);
                if w.contains(&0) {
                    continue;
                }
                for t in adem(&w, memo) {
                    if !acc.remove(&t) {
                        acc.insert(t);
                    }
                }
            }
            acc
        }
    };
    memo.insert(word.to_vec(), out.clone());
    out
}

impl Poly {
    pub fn zero(dim: u32) -> Self {
        Poly { dim, terms: BTreeSet::new() }
    }

    pub fn gen(dim: u32) -> Self {
        Poly { dim, terms: BTreeSet::from([Mono::from([(Vec::new(), 1)])]) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn toggle(&mut self, m: Mono) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for m in &other.terms {
            out.toggle(m.clone());
        }
        out
    }

    fn mono_mul(a: &Mono, b: &Mono) -> Mono {
        let mut out = a.clone();
        for (w, e) in b {
            *out.entry(w.clone()).or_insert(0) += e;
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.dim);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(Self::mono_mul(a, b));
            }
        }
        out
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    fn word_degree(&self, w: &[u32]) -> u32 {
        self.dim + w.iter().sum::<u32>()
    }

    /// `Q^s` on the single class `Q^w g`, with `w` admissible and
    /// `Q^w g` a polynomial generator.
    fn q_on_class(&self, s: u32, w: &[u32], memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>) -> Poly {
        let d = self.word_degree(w);
        if s < d {
            return Poly::zero(self.dim);
        }
        if s == d {
            return Poly { dim: self.dim, terms: BTreeSet::from([Mono::from([(w.to_vec(), 2)])]) };
        }
        let mut full = vec![s];
        full.extend_from_slice(w);
        let mut out = Poly::zero(self.dim);
        for t in adem(&full, memo) {
            out = out.add(&self.eval_admissible(&t, memo));
        }
        out
    }

    /// Closed form for an admissible word on the bare generator.
    fn eval_admissible(&self, w: &[u32], memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>) -> Poly {
        let e = excess(w);
        if e > self.dim as i64 {
            return Poly { dim: self.dim, terms: BTreeSet::from([Mono::from([(w.to_vec(), 1)])]) };
        }
        if e < self.dim as i64 {
            return Poly::zero(self.dim);
        }
        let inner = self.eval_admissible(&w[1..], memo);
        inner.square()
    }

    /// `Q^s` by the Cartan formula over every factor copy separately.
    pub fn q(&self, s: u32, memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>) -> Poly {
        let mut out = Poly::zero(self.dim);
        for m in &self.terms {
            let factors: Vec<Vec<u32>> =
                m.iter().flat_map(|(w, &e)| std::iter::repeat_n(w.clone(), e as usize)).collect();
            let mins: Vec<u32> = factors.iter().map(|w| self.word_degree(w)).collect();
            let floor: u32 = mins.iter().sum();
            if s < floor {
                continue;
            }
            if factors.is_empty() {
                if s == 0 {
                    out.toggle(Mono::new());
                }
                continue;
            }
            let mut split = vec![0u32; factors.len()];
            self.compositions(&factors, &mins, 0, s - floor, &mut split, &mut out, memo);
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn compositions(
        &self,
        factors: &[Vec<u32>],
        mins: &[u32],
        idx: usize,
        slack: u32,
        split: &mut Vec<u32>,
        out: &mut Poly,
        memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>,
    ) {
        if idx + 1 == factors.len() {
            split[idx] = mins[idx] + slack;
            let mut prod = Poly { dim: self.dim, terms: BTreeSet::from([Mono::new()]) };
            for (f, &si) in factors.iter().zip(split.iter()) {
                prod = prod.mul(&self.q_on_class(si, f, memo));
                if prod.is_zero() {
                    return;
                }
            }
            *out = out.add(&prod);
            return;
        }
        for extra in 0..=slack {
            split[idx] = mins[idx] + extra;
            self.compositions(factors, mins, idx + 1, slack - extra, split, out, memo);
        }
    }

    /// Applies an upper word, last entry first.
    pub fn eval(&self, word: &[u32], memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>) -> Poly {
        let mut x = self.clone();
        for &s in word.iter().rev() {
            if x.is_zero() {
                break;
            }
            x = x.q(s, memo);
        }
        x
    }

    /// The same element in the library's representation.
    pub fn to_element(&self, model: Model) -> Element {
        let gen = match self.dim {
            0 => Generator::Unit,
            n => Generator::Sphere(n),
        };
        let monos = self.terms.iter().map(|m| {
            m.iter().fold(Monomial::one(), |acc, (w, &e)| {
                acc.mul(&Monomial::power(Decorated { gen, ops: w.clone() }, e))
            })
        });
        Element::from_monomials(model, monos)
    }
}

/// Admissible words with entry sum at most `max_sum` and excess above
/// `excess_gt`, built first entry first: excess only depends on `i_1` and
/// the sum of the tail, which bounds the tail directly.
pub fn admissible_words(max_sum: u32, excess_gt: i64) -> Vec<Vec<u32>> {
    fn tail(word: &mut Vec<u32>, left: u32, out: &mut Vec<Vec<u32>>) {
        out.push(word.clone());
        let prev = *word.last().unwrap();
        for a in prev.div_ceil(2).max(1)..=left {
            word.push(a);
            tail(word, left - a, out);
            word.pop();
        }
    }
    let mut words = vec![Vec::new()];
    for first in 1..=max_sum {
        let room = first as i64 - excess_gt - 1;
        if room < 0 {
            continue;
        }
        let budget = (max_sum - first).min(room.min(u32::MAX as i64) as u32);
        tail(&mut vec![first], budget, &mut words);
    }
    words.retain(|w| admissible(w) && excess(w) > excess_gt);
    words.sort();
    words
}

/// Dimension of each degree `0..=max_degree` of the free model on one
/// generator of dimension `dim >= 1`, by listing monomials.
pub fn basis_counts(dim: u32, max_degree: u32) -> Vec<u64> {
    let gens: Vec<u32> = admissible_words(max_degree.saturating_sub(dim), dim as i64)
        .iter()
        .map(|w| dim + w.iter().sum::<u32>())
        .collect();
    let mut counts = vec![0u64; max_degree as usize + 1];
    fn walk(gens: &[u32], idx: usize, deg: u32, max: u32, counts: &mut [u64]) {
        counts[deg as usize] += 1;
        for j in idx..gens.len() {
            if deg + gens[j] <= max {
                walk(gens, j, deg + gens[j], max, counts);
            }
        }
    }
    walk(&gens, 0, 0, max_degree, &mut counts);
    counts
}

/// Hurewicz image of `[η_i]_{6-k}` for `k <= 2`.
pub fn nu_hat(k: u8, memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>) -> Poly {
    match k {
        0 => Poly::gen(3).square(),
        1 => Poly::gen(2).eval(&[3], memo),
        2 => {
            let g = Poly::gen(1);
            g.eval(&[3], memo).add(&g.eval(&[2, 1], memo))
        }
        _ => panic!("no image element for k = {k}"),
    }
}

/// `Q^I Q^tail` on the target generator of level `k` is nonzero.
pub fn composite_nonzero(k: u8, word: &[u32], tail: &[u32], memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>) -> bool {
    let mut full = word.to_vec();
    full.extend_from_slice(tail);
    !Poly::gen(3 - k as u32).eval(&full, memo).is_zero()
}

/// Membership of an upper word in the generator set at level `k`.
pub fn in_script_i(k: u8, word: &[u32], memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>) -> bool {
    if !admissible(word) {
        return false;
    }
    match k {
        0 => word.iter().all(|s| s % 2 == 0),
        1 => composite_nonzero(1, word, &[3], memo),
        2 => composite_nonzero(2, word, &[3], memo) || word.iter().all(|s| s % 4 == 0),
        _ => composite_nonzero(3, word, &[3], memo) || composite_nonzero(3, word, &[2, 1], memo),
    }
}

/// Image verdict at level `k`: nonzero image, or membership for `k = 3`.
pub fn image_nonzero(k: u8, word: &[u32], memo: &mut HashMap<Vec<u32>, BTreeSet<Vec<u32>>>) -> bool {
    if k == 3 {
        return composite_nonzero(3, word, &[3], memo) || composite_nonzero(3, word, &[2, 1], memo);
    }
    !nu_hat(k, memo).eval(word, memo).is_zero()
}

pub fn is_admissible(w: &[u32]) -> bool {
    admissible(w)
}

pub fn excess_of(w: &[u32]) -> i64 {
    excess(w)
}
