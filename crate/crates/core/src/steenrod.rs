//! Lower Steenrod operations `Sq^r_*` on free models.
//!
//! Products use the homology Cartan formula, with
//! `Sq^{2r}_*(y^2) = (Sq^r_* y)^2` on Frobenius blocks. A decorated
//! generator `Q^s y` is handled by the Nishida relation
//! `Sq^r_* Q^s = sum_i C(s-r, r-2i) Q^{s-r+i} Sq^i_*`, and bare generators
//! by the model's rule.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::action::{apply_unchecked, frobenius_blocks};
use crate::element::{Decorated, Element, Generator, Monomial};
use crate::error::{Error, Result};
use crate::f2::{binom_mod2, binom_mod2_signed};
use crate::model::{enumerate_basis, Model, ModelKind};
use crate::report::VerificationReport;

/// A composite of lower squares; the first index is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SteenrodWord {
    indices: Vec<u32>,
}

impl SteenrodWord {
    pub fn new(indices: Vec<u32>) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::Usage("Steenrod word indices must be positive".into()));
        }
        Ok(SteenrodWord { indices })
    }

    pub fn identity() -> Self {
        SteenrodWord::default()
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn is_identity(&self) -> bool {
        self.indices.is_empty()
    }
}

impl fmt::Display for SteenrodWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.indices.iter().rev().map(|r| format!("Sq^{r}_*")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// How `C(n, k)` is read when the top `n = s - r` is negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegativeTop {
    /// `C(n, k) = C(k - n - 1, k)` up to sign.
    Signed,
    /// `C(n, k) = 0` for `n < 0`.
    Zero,
}

/// Convention used by [`sq_act`].
pub const NISHIDA_CONVENTION: NegativeTop = NegativeTop::Signed;

/// Terms `(u, i)` standing for `Q^u Sq^i_*`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NishidaExpansion {
    pub r: u32,
    pub s: u32,
    pub terms: Vec<(u32, u32)>,
}

impl NishidaExpansion {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for NishidaExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|&(u, i)| if i == 0 { format!("Q^{u}") } else { format!("Q^{u} Sq^{i}_*") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

pub fn nishida_expand(r: u32, s: u32) -> NishidaExpansion {
    nishida_expand_with(r, s, NISHIDA_CONVENTION)
}

pub fn nishida_expand_with(r: u32, s: u32, convention: NegativeTop) -> NishidaExpansion {
    let top = s as i64 - r as i64;
    let mut terms = Vec::new();
    for i in 0..=r / 2 {
        let upper = top + i as i64;
        if upper < 0 {
            continue;
        }
        let bottom = (r - 2 * i) as i64;
        let odd = if top >= 0 {
            binom_mod2(top as u64, bottom as u64)
        } else {
            match convention {
                NegativeTop::Signed => binom_mod2_signed(top, bottom),
                NegativeTop::Zero => false,
            }
        };
        if odd {
            terms.push((upper as u32, i));
        }
    }
    NishidaExpansion { r, s, terms }
}

/// `Sq^r_* x`.
pub fn sq_act(r: u32, x: &Element) -> Element {
    sq_act_with(r, x, NISHIDA_CONVENTION)
}

pub fn sq_act_with(r: u32, x: &Element, convention: NegativeTop) -> Element {
    if r == 0 {
        return x.clone();
    }
    let model = *x.model();
    let mut out = Element::zero(model);
    for m in x.terms() {
        out.add_assign_unchecked(&sq_monomial(r, m, model, convention));
    }
    out
}

/// Applies the word's squares in order.
pub fn apply_word(word: &SteenrodWord, x: &Element) -> Element {
    let mut y = x.clone();
    for &r in word.indices() {
        if y.is_zero() {
            break;
        }
        y = sq_act(r, &y);
    }
    y
}

fn sq_monomial(r: u32, m: &Monomial, model: Model, conv: NegativeTop) -> Element {
    if r > m.degree() {
        return Element::zero(model);
    }
    if m.is_one() {
        return Element::zero(model);
    }
    let blocks = frobenius_blocks(m);

    fn cartan(
        blocks: &[(&Decorated, u32)],
        idx: usize,
        remaining: u32,
        model: Model,
        conv: NegativeTop,
    ) -> Element {
        let (x, t) = blocks[idx];
        let step = 1u32 << t;
        let block_act = |j: u32| sq_decorated(j >> t, x, model, conv).frobenius(t);
        if idx + 1 == blocks.len() {
            if remaining % step != 0 {
                return Element::zero(model);
            }
            return block_act(remaining);
        }
        let mut out = Element::zero(model);
        let mut part = 0;
        while part <= remaining.min(x.degree() << t) {
            let head = block_act(part);
            if !head.is_zero() {
                let rest = cartan(blocks, idx + 1, remaining - part, model, conv);
                if !rest.is_zero() {
                    out.add_assign_unchecked(&head.mul_unchecked(&rest));
                }
            }
            part += step;
        }
        out
    }

    cartan(&blocks, 0, r, model, conv)
}

type SqCache = RwLock<HashMap<(Decorated, u32, u32, bool), BTreeSet<Monomial>>>;

fn sq_cache() -> &'static SqCache {
    static CACHE: OnceLock<SqCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn sq_decorated(r: u32, x: &Decorated, model: Model, conv: NegativeTop) -> Element {
    let single = |d: Decorated| Element::from_monomial(model, Monomial::power(d, 1));
    if r == 0 {
        return single(x.clone());
    }
    if r > x.degree() {
        return Element::zero(model);
    }
    let Some((&s, tail)) = x.ops.split_first() else {
        return match x.gen {
            Generator::Sphere(_) | Generator::Unit => Element::zero(model),
            Generator::Projective { k, shift } => {
                let bottom = match model.kind() {
                    ModelKind::Stunted { bottom, .. } => bottom,
                    _ => 1,
                };
                if k >= bottom + r && binom_mod2((k - r) as u64, r as u64) {
                    single(Decorated::bare(Generator::Projective { k: k - r, shift }))
                } else {
                    Element::zero(model)
                }
            }
        };
    };
    let bottom = match model.kind() {
        ModelKind::Stunted { bottom, .. } => bottom,
        _ => 0,
    };
    let key = (x.clone(), r, bottom, conv == NegativeTop::Signed);
    if let Some(hit) = sq_cache().read().expect("square cache poisoned").get(&key) {
        return Element::from_terms(model, hit.clone());
    }
    let y = Decorated { gen: x.gen, ops: tail.to_vec() };
    let mut out = Element::zero(model);
    for (u, i) in nishida_expand_with(r, s, conv).terms {
        let inner = sq_decorated(i, &y, model, conv);
        if !inner.is_zero() {
            out.add_assign_unchecked(&apply_unchecked(u, &inner));
        }
    }
    sq_cache()
        .write()
        .expect("square cache poisoned")
        .insert(key, out.terms().clone());
    out
}

/// Whether `Sq^r_* x = 0` for `1 <= r <= r_max`.
pub fn is_a_annihilated(x: &Element, r_max: u32) -> bool {
    (1..=r_max).all(|r| sq_act(r, x).is_zero())
}

/// Checks `Sq^b_* Sq^a_* x = sum_c C(b-c-1, a-2c) Sq^c_* Sq^{a+b-c}_* x` on
/// every basis monomial up to `degree_bound`.
pub fn verify_dual_adem(a: u32, b: u32, model: &Model, degree_bound: u32) -> Result<VerificationReport> {
    verify_dual_adem_with(a, b, model, degree_bound, NISHIDA_CONVENTION)
}

pub fn verify_dual_adem_with(
    a: u32,
    b: u32,
    model: &Model,
    degree_bound: u32,
    conv: NegativeTop,
) -> Result<VerificationReport> {
    if a == 0 || b == 0 || a >= 2 * b {
        return Err(Error::Usage(format!("no Adem relation for Sq^{a} Sq^{b}: need 0 < a < 2b")));
    }
    let mut report = VerificationReport::new("dual-adem")
        .param("a", a)
        .param("b", b)
        .param("model", model)
        .param("degree_bound", degree_bound);
    let rhs_terms: Vec<u32> = (0..=a / 2)
        .filter(|&c| binom_mod2((b - c - 1) as u64, (a - 2 * c) as u64))
        .collect();
    let mut checked = 0usize;
    for degree in model.bottom_dim()..=degree_bound {
        for m in enumerate_basis(model, degree)? {
            let x = Element::from_monomial(*model, m);
            let lhs = sq_act_with(b, &sq_act_with(a, &x, conv), conv);
            let mut rhs = Element::zero(*model);
            for &c in &rhs_terms {
                rhs.add_assign_unchecked(&sq_act_with(c, &sq_act_with(a + b - c, &x, conv), conv));
            }
            checked += 1;
            if lhs != rhs {
                report.violations.push(format!("{x}: left {lhs}, right {rhs}"));
            }
        }
    }
    report.annotations.push(format!("checked {checked} basis monomials"));
    Ok(report)
}

/// An element of the tensor square, as a set of pure tensors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    model: Model,
    terms: BTreeSet<(Monomial, Monomial)>,
}

impl Tensor {
    pub fn zero(model: Model) -> Self {
        Tensor { model, terms: BTreeSet::new() }
    }

    pub fn terms(&self) -> &BTreeSet<(Monomial, Monomial)> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn toggle(&mut self, left: Monomial, right: Monomial) {
        let pair = (left, right);
        if !self.terms.remove(&pair) {
            self.terms.insert(pair);
        }
    }

    pub fn add_assign(&mut self, other: &Tensor) {
        for (l, r) in &other.terms {
            self.toggle(l.clone(), r.clone());
        }
    }

    /// `x ⊗ y` for elements.
    pub fn pure(x: &Element, y: &Element) -> Tensor {
        let mut t = Tensor::zero(*x.model());
        for l in x.terms() {
            for r in y.terms() {
                t.toggle(l.clone(), r.clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Tensor) -> Tensor {
        let mut t = Tensor::zero(self.model);
        for (l1, r1) in &self.terms {
            for (l2, r2) in &other.terms {
                t.toggle(l1.mul(l2), r1.mul(r2));
            }
        }
        t
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(l, r)| format!("{l} ⊗ {r}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The coproduct, extended multiplicatively from decorated generators.
pub fn coproduct(x: &Element) -> Tensor {
    let model = *x.model();
    let mut out = Tensor::zero(model);
    for m in x.terms() {
        let mut acc = Tensor::pure(&Element::one(model), &Element::one(model));
        for (d, e) in m.factors() {
            let psi = coproduct_decorated(d, model);
            for _ in 0..e {
                acc = acc.mul(&psi);
            }
        }
        out.add_assign(&acc);
    }
    out
}

fn coproduct_decorated(d: &Decorated, model: Model) -> Tensor {
    let one = Element::one(model);
    let bare = Element::from_monomial(model, Monomial::power(Decorated::bare(d.gen), 1));
    // [1] is group-like, positive-dimensional generators are primitive
    let mut psi = if d.gen == Generator::Unit {
        Tensor::pure(&bare, &bare)
    } else {
        let mut t = Tensor::pure(&bare, &one);
        t.add_assign(&Tensor::pure(&one, &bare));
        t
    };
    for &s in d.ops.iter().rev() {
        let mut next = Tensor::zero(model);
        for (l, r) in psi.terms() {
            let l = Element::from_monomial(model, l.clone());
            let r = Element::from_monomial(model, r.clone());
            for a in 0..=s {
                let left = apply_unchecked(a, &l);
                if left.is_zero() {
                    continue;
                }
                let right = apply_unchecked(s - a, &r);
                if !right.is_zero() {
                    next.add_assign(&Tensor::pure(&left, &right));
                }
            }
        }
        psi = next;
    }
    psi
}

pub fn is_primitive(x: &Element) -> bool {
    let one = Element::one(*x.model());
    let mut expected = Tensor::pure(x, &one);
    expected.add_assign(&Tensor::pure(&one, x));
    coproduct(x) == expected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{apply, evaluate_word};

    fn g(n: u32) -> Element {
        Element::generator(Model::sphere(n).unwrap(), Generator::Sphere(n)).unwrap()
    }

    fn q(word: &[u32], x: &Element) -> Element {
        evaluate_word(word, x).unwrap()
    }

    #[test]
    fn nishida_examples() {
        assert_eq!(nishida_expand(1, 4).terms, vec![(3, 0)]);
        assert!(nishida_expand(1, 5).is_zero());
        assert_eq!(nishida_expand(2, 4).terms, vec![(2, 0), (3, 1)]);
        assert_eq!(nishida_expand(2, 4).to_string(), "Q^2 + Q^3 Sq^1_*");
    }

    #[test]
    fn sq_examples() {
        assert_eq!(sq_act(2, &q(&[4], &g(2))), g(2).square());
        let m = Model::stunted(13, -10).unwrap();
        let a13 = Element::generator(m, Generator::Projective { k: 13, shift: -10 }).unwrap();
        assert!(sq_act(2, &a13).is_zero());
        let m = Model::stunted(13, 0).unwrap();
        let a17 = Element::generator(m, Generator::Projective { k: 17, shift: 0 }).unwrap();
        assert_eq!(sq_act(4, &a17).to_string(), "a_13[0]");
    }

    #[test]
    fn annihilation_examples() {
        assert!(is_a_annihilated(&g(3), 8));
        assert!(is_a_annihilated(&g(3).square(), 8));
        assert!(!is_a_annihilated(&q(&[4], &g(2)), 8));
    }

    #[test]
    fn dual_adem_examples() {
        for (a, b, n) in [(1, 1, 3), (2, 2, 2), (3, 2, 1)] {
            let rep = verify_dual_adem(a, b, &Model::sphere(n).unwrap(), 20).unwrap();
            assert!(rep.passed(), "{:?}", rep.violations);
        }
        assert!(verify_dual_adem(4, 2, &Model::sphere(1).unwrap(), 5).is_err());
    }

    #[test]
    fn sq1_on_q() {
        let x = g(2);
        assert_eq!(sq_act(1, &q(&[6], &x)), q(&[5], &x));
        assert!(sq_act(1, &q(&[5], &x)).is_zero());
    }

    #[test]
    fn primitivity_examples() {
        assert!(is_primitive(&q(&[5], &g(3))));
        assert!(is_primitive(&g(3).square()));
        let mixed = g(3).mul(&apply(4, &g(3)).unwrap()).unwrap();
        assert!(!is_primitive(&mixed));
        let psi = coproduct(&mixed);
        assert!(psi.terms().len() == 4, "{psi}");
    }

    #[test]
    fn word_order() {
        let x = q(&[6, 3], &g(2));
        let w = SteenrodWord::new(vec![1, 2]).unwrap();
        assert_eq!(apply_word(&w, &x), sq_act(2, &sq_act(1, &x)));
        assert_eq!(w.to_string(), "Sq^2_* Sq^1_*");
        assert!(SteenrodWord::new(vec![0]).is_err());
    }
}
