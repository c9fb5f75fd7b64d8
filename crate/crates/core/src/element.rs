//! Elements of free graded-commutative F_2 algebras on decorated
//! generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::f2;
use crate::model::Model;
use crate::opseq::{excess, is_admissible};

/// A base generator of a free model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// `g_n`, the bottom class of `QS^n`.
    Sphere(u32),
    /// `[1]`, the degree-zero class of the sphere-zero model.
    Unit,
    /// `Σ^shift a_k`, a cell of a stunted projective spectrum.
    Projective { k: u32, shift: i32 },
}

impl Generator {
    pub fn dim(&self) -> u32 {
        match *self {
            Generator::Sphere(n) => n,
            Generator::Unit => 0,
            Generator::Projective { k, shift } => (k as i64 + shift as i64).max(0) as u32,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Sphere(n) => write!(f, "g_{n}"),
            Generator::Unit => f.write_str("[1]"),
            Generator::Projective { k, shift } => write!(f, "a_{k}[{shift}]"),
        }
    }
}

/// A polynomial generator `Q^I x`: `I` admissible (upper indexed) with
/// excess strictly greater than `dim x`, or empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decorated {
    pub gen: Generator,
    pub ops: Vec<u32>,
}

impl Decorated {
    pub fn bare(gen: Generator) -> Self {
        Decorated { gen, ops: Vec::new() }
    }

    /// Fails unless `ops` is admissible with excess above the generator dimension.
    pub fn new(gen: Generator, ops: Vec<u32>) -> Result<Self> {
        if !is_admissible(&ops) || !excess(&ops).exceeds(gen.dim() as i64) || ops.contains(&0) {
            return Err(Error::Usage(format!(
                "Q^{ops:?} {gen} is not a polynomial generator"
            )));
        }
        Ok(Decorated { gen, ops })
    }

    pub fn degree(&self) -> u32 {
        self.gen.dim() + self.ops.iter().sum::<u32>()
    }
}

impl fmt::Display for Decorated {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.ops {
            write!(f, "Q^{s} ")?;
        }
        write!(f, "{}", self.gen)
    }
}

/// A monomial: decorated generators with positive exponents. The empty
/// monomial is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(BTreeMap<Decorated, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn power(x: Decorated, e: u32) -> Self {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(x, e);
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Decorated, u32)> {
        self.0.iter().map(|(d, &e)| (d, e))
    }

    pub fn num_factors(&self) -> usize {
        self.0.len()
    }

    /// Sum of exponents.
    pub fn weight(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(d, &e)| d.degree() * e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (d, &e) in &other.0 {
            *out.entry(d.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(d, &x)| (d.clone(), x * e)).collect())
    }

    /// The single factor, when the monomial is one decorated generator.
    pub fn as_single(&self) -> Option<&Decorated> {
        match self.0.iter().next() {
            Some((d, 1)) if self.0.len() == 1 => Some(d),
            _ => None,
        }
    }

    pub(crate) fn from_map(map: BTreeMap<Decorated, u32>) -> Self {
        Monomial(map)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (d, &e) in &self.0 {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            match (e, d.ops.is_empty()) {
                (1, _) => write!(f, "{d}")?,
                (_, true) => write!(f, "{d}^{e}")?,
                (_, false) => write!(f, "({d})^{e}")?,
            }
        }
        Ok(())
    }
}

/// An element of a free model: a set of monomials (F_2 coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    model: Model,
    terms: BTreeSet<Monomial>,
}

impl Element {
    pub fn zero(model: Model) -> Self {
        Element { model, terms: BTreeSet::new() }
    }

    pub fn one(model: Model) -> Self {
        Element { model, terms: BTreeSet::from([Monomial::one()]) }
    }

    pub fn from_monomial(model: Model, m: Monomial) -> Self {
        Element { model, terms: BTreeSet::from([m]) }
    }

    /// Sums the monomials with F_2 cancellation.
    pub fn from_monomials(model: Model, ms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut x = Element::zero(model);
        for m in ms {
            x.toggle(m);
        }
        x
    }

    pub(crate) fn from_terms(model: Model, terms: BTreeSet<Monomial>) -> Self {
        Element { model, terms }
    }

    /// The base generator of `model` as an element.
    pub fn generator(model: Model, gen: Generator) -> Result<Self> {
        model.check_generator(&gen)?;
        Ok(Element::from_monomial(model, Monomial::power(Decorated::bare(gen), 1)))
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn terms(&self) -> &BTreeSet<Monomial> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeSet<Monomial> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// The degree when homogeneous; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<u32> {
        let mut degrees = self.terms.iter().map(Monomial::degree);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_some()
    }

    /// Homogeneous components by degree.
    pub fn components(&self) -> BTreeMap<u32, Element> {
        let mut out: BTreeMap<u32, Element> = BTreeMap::new();
        for m in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Element::zero(self.model))
                .terms
                .insert(m.clone());
        }
        out
    }

    pub fn project(&self, degree: u32) -> Element {
        Element {
            model: self.model,
            terms: self.terms.iter().filter(|m| m.degree() == degree).cloned().collect(),
        }
    }

    fn same_model(&self, other: &Element) -> Result<()> {
        if self.model != other.model {
            return Err(Error::ModelMismatch {
                left: self.model.to_string(),
                right: other.model.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_model(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.same_model(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Element) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub(crate) fn mul_unchecked(&self, other: &Element) -> Element {
        let mut out = Element::zero(self.model);
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    /// Frobenius: squaring is additive in characteristic 2.
    pub fn square(&self) -> Element {
        self.frobenius(1)
    }

    /// Raises to the power `2^t`.
    pub fn frobenius(&self, t: u32) -> Element {
        Element {
            model: self.model,
            terms: self.terms.iter().map(|m| m.pow(1 << t)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Element {
        let mut acc = Element::one(self.model);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Rank of the span of the degree-`degree` parts of `elements`.
pub fn graded_rank(elements: &[Element], degree: u32) -> usize {
    let vectors: Vec<BTreeSet<Monomial>> =
        elements.iter().map(|x| x.project(degree).terms).collect();
    f2::rank(&vectors)
}
