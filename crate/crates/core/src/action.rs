//! Evaluation of Dyer-Lashof operations on elements of free models.
//!
//! On a monomial of degree `d`: `Q^s` vanishes for `s < d` and squares for
//! `s = d`. Otherwise the Cartan formula splits a product, with
//! `Q^s(x^{2^t}) = (Q^{s/2^t} x)^{2^t}` (zero unless `2^t | s`), and on a
//! polynomial generator `Q^I x` the word `(s, I)` is brought to admissible
//! form before instability is applied.

use std::collections::{BTreeSet, HashMap};
use std::sync::{OnceLock, RwLock};

use crate::element::{Decorated, Element, Monomial};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::opseq::{is_admissible, normalize, FormalOpSum, Indexing, OpSequence};

/// `Q^s x` (upper index), with the model's operation range enforced.
pub fn apply(s: u32, x: &Element) -> Result<Element> {
    let model = *x.model();
    if let Some(max) = model.max_lower() {
        for m in x.terms() {
            let lower = s as i64 - m.degree() as i64;
            if lower > max {
                return Err(Error::Range { lower, max, model: model.to_string() });
            }
        }
    }
    Ok(apply_unchecked(s, x))
}

/// `Q_a x` (lower index), applied to each homogeneous component.
pub fn apply_lower(a: u32, x: &Element) -> Result<Element> {
    let mut out = Element::zero(*x.model());
    for (d, part) in x.components() {
        out.add_assign_unchecked(&apply(a + d, &part)?);
    }
    Ok(out)
}

/// Applies an upper-indexed word, last entry first.
pub fn evaluate_word(word: &[u32], x: &Element) -> Result<Element> {
    let mut y = x.clone();
    for &s in word.iter().rev() {
        if y.is_zero() {
            break;
        }
        y = apply(s, &y)?;
    }
    Ok(y)
}

pub fn evaluate(ops: &OpSequence, x: &Element) -> Result<Element> {
    match ops.indexing() {
        Indexing::Upper => evaluate_word(ops.entries(), x),
        Indexing::Lower => {
            let mut y = x.clone();
            for &a in ops.entries().iter().rev() {
                y = apply_lower(a, &y)?;
            }
            Ok(y)
        }
    }
}

pub fn evaluate_sum(ops: &FormalOpSum, x: &Element) -> Result<Element> {
    let mut out = Element::zero(*x.model());
    for w in ops.terms() {
        out.add_assign_unchecked(&evaluate_word(w, x)?);
    }
    Ok(out)
}

pub(crate) fn apply_unchecked(s: u32, x: &Element) -> Element {
    let model = *x.model();
    let mut out = Element::zero(model);
    for m in x.terms() {
        out.add_assign_unchecked(&apply_monomial(s, m, model));
    }
    out
}

/// Splits a monomial into blocks `x^{2^t}` along the binary expansion of
/// each exponent.
pub(crate) fn frobenius_blocks(m: &Monomial) -> Vec<(&Decorated, u32)> {
    let mut blocks = Vec::new();
    for (d, e) in m.factors() {
        for t in 0..32 {
            if e >> t & 1 == 1 {
                blocks.push((d, t));
            }
        }
    }
    blocks
}

fn apply_monomial(s: u32, m: &Monomial, model: Model) -> Element {
    let d = m.degree();
    if s < d {
        return Element::zero(model);
    }
    if s == d {
        return Element::from_monomial(model, m.pow(2));
    }
    if m.is_one() {
        return Element::zero(model);
    }
    let blocks = frobenius_blocks(m);
    let floors: Vec<u32> = blocks.iter().map(|(x, t)| x.degree() << t).collect();
    let mut tail_floor = vec![0u32; blocks.len() + 1];
    for i in (0..blocks.len()).rev() {
        tail_floor[i] = tail_floor[i + 1] + floors[i];
    }

    fn cartan(
        blocks: &[(&Decorated, u32)],
        tail_floor: &[u32],
        idx: usize,
        remaining: u32,
        model: Model,
    ) -> Element {
        let (x, t) = blocks[idx];
        let step = 1u32 << t;
        if idx + 1 == blocks.len() {
            if remaining % step != 0 {
                return Element::zero(model);
            }
            return apply_decorated(remaining / step, x, model).frobenius(t);
        }
        let mut out = Element::zero(model);
        let hi = remaining - tail_floor[idx + 1];
        let mut part = x.degree() << t;
        while part <= hi {
            let head = apply_decorated(part >> t, x, model).frobenius(t);
            if !head.is_zero() {
                let rest = cartan(blocks, tail_floor, idx + 1, remaining - part, model);
                if !rest.is_zero() {
                    out.add_assign_unchecked(&head.mul_unchecked(&rest));
                }
            }
            part += step;
        }
        out
    }

    cartan(&blocks, &tail_floor, 0, s, model)
}

type DecoratedCache = RwLock<HashMap<(Decorated, u32), BTreeSet<Monomial>>>;

fn decorated_cache() -> &'static DecoratedCache {
    static CACHE: OnceLock<DecoratedCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Q^s` on a single polynomial generator.
pub(crate) fn apply_decorated(s: u32, x: &Decorated, model: Model) -> Element {
    let deg = x.degree();
    if s < deg {
        return Element::zero(model);
    }
    if s == deg {
        return Element::from_monomial(model, Monomial::power(x.clone(), 2));
    }
    let mut word = Vec::with_capacity(x.ops.len() + 1);
    word.push(s);
    word.extend_from_slice(&x.ops);
    if is_admissible(&word) {
        return Element::from_monomial(model, Monomial::power(Decorated { gen: x.gen, ops: word }, 1));
    }
    let key = (x.clone(), s);
    if let Some(hit) = decorated_cache().read().expect("operation cache poisoned").get(&key) {
        return Element::from_terms(model, hit.clone());
    }
    let base = Element::from_monomial(model, Monomial::power(Decorated::bare(x.gen), 1));
    let mut out = Element::zero(model);
    for term in normalize(&word).terms() {
        let mut y = base.clone();
        for &e in term.iter().rev() {
            y = apply_unchecked(e, &y);
        }
        out.add_assign_unchecked(&y);
    }
    decorated_cache()
        .write()
        .expect("operation cache poisoned")
        .insert(key, out.terms().clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Generator;
    use crate::model::LoopBound;

    fn g(n: u32) -> Element {
        Element::generator(Model::sphere(n).unwrap(), Generator::Sphere(n)).unwrap()
    }

    fn word(w: &[u32], x: &Element) -> Element {
        evaluate_word(w, x).unwrap()
    }

    #[test]
    fn instability_and_kudo_araki() {
        let g3 = g(3);
        assert!(apply(2, &g3).unwrap().is_zero());
        assert_eq!(apply(3, &g3).unwrap(), g3.square());
        assert_eq!(apply(4, &g3).unwrap().to_string(), "Q^4 g_3");
    }

    #[test]
    fn examples_on_squares() {
        let sq = g(3).square();
        assert_eq!(apply(8, &sq).unwrap().to_string(), "(Q^4 g_3)^2");
        assert!(apply(7, &sq).unwrap().is_zero());
        assert_eq!(word(&[2, 1], &g(1)).to_string(), "g_1^4");
        // Q^4(x^2) = (Q^2 x)^2 = Q^3 Q^2 x on a 1-dimensional class
        assert_eq!(word(&[4, 1], &g(1)), word(&[3, 2], &g(1)));
    }

    #[test]
    fn non_admissible_words_are_rewritten() {
        // Q^8 Q^3 = Q^7 Q^4
        assert_eq!(word(&[8, 3], &g(1)), word(&[7, 4], &g(1)));
        assert_eq!(word(&[8, 3], &g(1)).to_string(), "Q^7 Q^4 g_1");
        assert!(word(&[9, 4], &g(2)).is_zero());
    }

    #[test]
    fn cartan_on_products() {
        let x = g(1);
        let q2 = apply(2, &x).unwrap();
        let prod = x.mul(&q2).unwrap(); // degree 4
        // Q^5(x * Q^2 x) = Q^1 x * Q^4 Q^2 x + Q^2 x * Q^3 Q^2 x
        let expected = apply(1, &x)
            .unwrap()
            .mul(&word(&[4, 2], &x))
            .unwrap()
            .add(&q2.mul(&word(&[3, 2], &x)).unwrap())
            .unwrap();
        assert_eq!(apply(5, &prod).unwrap(), expected);
    }

    #[test]
    fn lower_indexing() {
        let sq = g(3).square();
        let lower = OpSequence::lower(vec![2]).unwrap();
        assert_eq!(evaluate(&lower, &sq).unwrap(), apply(8, &sq).unwrap());
        let lower = OpSequence::lower(vec![1, 2]).unwrap();
        let upper = lower.convert_indexing(3, Indexing::Upper).unwrap();
        assert_eq!(evaluate(&lower, &g(3)).unwrap(), evaluate(&upper, &g(3)).unwrap());
    }

    #[test]
    fn range_errors_in_finite_models() {
        let m = Model::sphere(3).unwrap().with_loop_bound(LoopBound::Finite(3)).unwrap();
        let x = Element::generator(m, Generator::Sphere(3)).unwrap();
        assert!(apply(5, &x).is_ok());
        assert!(matches!(apply(6, &x), Err(Error::Range { lower: 3, max: 2, .. })));
        assert!(apply(2, &x).unwrap().is_zero());
    }

    #[test]
    fn unit_and_degree_zero() {
        let one = Element::one(Model::sphere(2).unwrap());
        assert_eq!(apply(0, &one).unwrap(), one);
        assert!(apply(3, &one).unwrap().is_zero());
        let z = Element::generator(Model::sphere_zero(), Generator::Unit).unwrap();
        assert_eq!(apply(0, &z).unwrap().to_string(), "[1]^2");
        assert_eq!(word(&[2, 1], &z).to_string(), "Q^2 Q^1 [1]");
    }
}
