//! Free homology models: `H_*QS^n` and its finite-loop restrictions, the
//! sphere-zero model, and stunted projective models. Basis enumeration,
//! Poincaré series, homology suspension and the bottom-cell inclusion.

use std::collections::BTreeSet;
use std::fmt;

use crate::action;
use crate::element::{Decorated, Element, Generator, Monomial};
use crate::error::{Error, Result};
use crate::opseq::{excess, OpSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Sphere(u32),
    SphereZero,
    Stunted { bottom: u32, shift: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LoopBound {
    /// An `L`-fold loop space: admits `Q_a` for `0 <= a <= L - 1`.
    Finite(u32),
    Stable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Model {
    kind: ModelKind,
    loop_bound: LoopBound,
}

impl Model {
    pub fn sphere(n: u32) -> Result<Model> {
        if n == 0 {
            return Err(Error::InvalidModel("sphere dimension must be positive; use sphere-zero".into()));
        }
        Ok(Model { kind: ModelKind::Sphere(n), loop_bound: LoopBound::Stable })
    }

    pub fn sphere_zero() -> Model {
        Model { kind: ModelKind::SphereZero, loop_bound: LoopBound::Stable }
    }

    pub fn stunted(bottom: u32, shift: i32) -> Result<Model> {
        if bottom == 0 || bottom as i64 + shift as i64 <= 0 {
            return Err(Error::InvalidModel(format!(
                "stunted({bottom},{shift}) needs a bottom cell of positive dimension"
            )));
        }
        Ok(Model { kind: ModelKind::Stunted { bottom, shift }, loop_bound: LoopBound::Stable })
    }

    pub fn with_loop_bound(self, bound: LoopBound) -> Result<Model> {
        if bound == LoopBound::Finite(0) {
            return Err(Error::InvalidModel("loop bound must be positive".into()));
        }
        Ok(Model { loop_bound: bound, ..self })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn loop_bound(&self) -> LoopBound {
        self.loop_bound
    }

    pub fn is_sphere_kind(&self) -> bool {
        matches!(self.kind, ModelKind::Sphere(_) | ModelKind::SphereZero)
    }

    /// Largest admitted lower index, `None` when stable.
    pub fn max_lower(&self) -> Option<i64> {
        match self.loop_bound {
            LoopBound::Finite(l) => Some(l as i64 - 1),
            LoopBound::Stable => None,
        }
    }

    /// Dimension of the bottom generator.
    pub fn bottom_dim(&self) -> u32 {
        self.bottom_generator().dim()
    }

    pub fn bottom_generator(&self) -> Generator {
        match self.kind {
            ModelKind::Sphere(n) => Generator::Sphere(n),
            ModelKind::SphereZero => Generator::Unit,
            ModelKind::Stunted { bottom, shift } => Generator::Projective { k: bottom, shift },
        }
    }

    /// Base generators of dimension at most `max_degree`.
    pub fn base_generators(&self, max_degree: u32) -> Vec<Generator> {
        match self.kind {
            ModelKind::Stunted { bottom, shift } => (bottom..)
                .map(|k| Generator::Projective { k, shift })
                .take_while(|g| g.dim() <= max_degree)
                .collect(),
            _ => {
                let g = self.bottom_generator();
                if g.dim() <= max_degree { vec![g] } else { vec![] }
            }
        }
    }

    pub fn check_generator(&self, gen: &Generator) -> Result<()> {
        let ok = match (self.kind, *gen) {
            (ModelKind::Sphere(n), Generator::Sphere(m)) => n == m,
            (ModelKind::SphereZero, Generator::Unit) => true,
            (ModelKind::Stunted { bottom, shift }, Generator::Projective { k, shift: s }) => {
                s == shift && k >= bottom
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Usage(format!("{gen} is not a generator of {self}")))
        }
    }

    /// Whether a polynomial generator lies in the admitted operation range.
    pub fn admits(&self, d: &Decorated) -> bool {
        match (self.max_lower(), d.ops.last()) {
            (Some(max), Some(&last)) => last as i64 - d.gen.dim() as i64 <= max,
            _ => true,
        }
    }

    /// The model one suspension up: generator dimensions increase by one
    /// and a finite loop bound decreases by one.
    pub fn suspension(&self) -> Result<Model> {
        let kind = match self.kind {
            ModelKind::Sphere(n) => ModelKind::Sphere(n + 1),
            ModelKind::Stunted { bottom, shift } => ModelKind::Stunted { bottom, shift: shift + 1 },
            ModelKind::SphereZero => {
                return Err(Error::Usage("suspension of the sphere-zero model is not modelled".into()))
            }
        };
        let loop_bound = match self.loop_bound {
            LoopBound::Finite(1) => {
                return Err(Error::Usage(format!("{self} cannot be suspended further")))
            }
            LoopBound::Finite(l) => LoopBound::Finite(l - 1),
            LoopBound::Stable => LoopBound::Stable,
        };
        Ok(Model { kind, loop_bound })
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModelKind::Sphere(n) => write!(f, "sphere({n})")?,
            ModelKind::SphereZero => f.write_str("sphere-zero")?,
            ModelKind::Stunted { bottom, shift } => write!(f, "stunted({bottom},{shift})")?,
        }
        if let LoopBound::Finite(l) = self.loop_bound {
            write!(f, " loops={l}")?;
        }
        Ok(())
    }
}

/// Restriction on individual entries of an operation sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryFilter {
    Any,
    DivisibleBy(u32),
}

impl EntryFilter {
    pub fn even() -> Self {
        EntryFilter::DivisibleBy(2)
    }

    pub fn accepts(&self, entry: u32) -> bool {
        match *self {
            EntryFilter::Any => true,
            EntryFilter::DivisibleBy(m) => entry % m == 0,
        }
    }

    pub fn accepts_all(&self, word: &[u32]) -> bool {
        word.iter().all(|&e| self.accepts(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorFilter {
    pub excess_gt: i64,
    /// Strict upper bound on the last (innermost) entry.
    pub cap_lt: Option<u32>,
    pub entries: EntryFilter,
    pub max_length: Option<usize>,
}

impl GeneratorFilter {
    pub fn excess_gt(excess_gt: i64) -> Self {
        GeneratorFilter { excess_gt, cap_lt: None, entries: EntryFilter::Any, max_length: None }
    }
}

/// All admissible upper sequences with entry sum at most `max_sum`
/// passing `filter`, in lexicographic order. Includes the empty
/// sequence, whose excess is infinite.
pub fn admissible_sequences(max_sum: u32, filter: &GeneratorFilter) -> Vec<Vec<u32>> {
    fn grow(
        current: &mut Vec<u32>,
        sum: u32,
        max_sum: u32,
        filter: &GeneratorFilter,
        out: &mut Vec<Vec<u32>>,
    ) {
        // Prepending never increases excess, so prune once it fails.
        if !excess(current).exceeds(filter.excess_gt) {
            return;
        }
        out.push(current.clone());
        if filter.max_length.is_some_and(|m| current.len() >= m) {
            return;
        }
        let first = current[0];
        for a in 1..=(2 * first).min(max_sum - sum) {
            if !filter.entries.accepts(a) {
                continue;
            }
            current.insert(0, a);
            grow(current, sum + a, max_sum, filter, out);
            current.remove(0);
        }
    }

    let mut out = vec![Vec::new()];
    if filter.max_length != Some(0) {
        let top = filter.cap_lt.map_or(max_sum, |c| max_sum.min(c.saturating_sub(1)));
        for last in 1..=top {
            if filter.entries.accepts(last) {
                grow(&mut vec![last], last, max_sum, filter, &mut out);
            }
        }
    }
    out.sort();
    out
}

/// Generators `Q^I g` of a sphere-kind model: admissible `I` passing the
/// filter with `deg(Q^I g) <= max_degree`.
pub fn enumerate_generators(
    model: &Model,
    max_degree: u32,
    filter: &GeneratorFilter,
) -> Result<Vec<OpSequence>> {
    if !model.is_sphere_kind() {
        return Err(Error::Usage(format!("enumerate_generators needs a sphere model, got {model}")));
    }
    let gen = model.bottom_generator();
    let Some(max_sum) = max_degree.checked_sub(gen.dim()) else {
        return Ok(Vec::new());
    };
    admissible_sequences(max_sum, filter)
        .into_iter()
        .filter(|ops| model.admits(&Decorated { gen, ops: ops.clone() }))
        .map(OpSequence::upper)
        .collect()
}

/// Polynomial generators of the model of degree at most `max_degree`.
pub fn polynomial_generators(model: &Model, max_degree: u32) -> Vec<Decorated> {
    let mut out = Vec::new();
    for gen in model.base_generators(max_degree) {
        let filter = GeneratorFilter::excess_gt(gen.dim() as i64);
        for ops in admissible_sequences(max_degree - gen.dim(), &filter) {
            let d = Decorated { gen, ops };
            if model.admits(&d) {
                out.push(d);
            }
        }
    }
    out
}

fn require_finite_type(model: &Model) -> Result<()> {
    if model.kind == ModelKind::SphereZero {
        return Err(Error::Usage(
            "the sphere-zero model has infinitely many monomials in degree 0".into(),
        ));
    }
    Ok(())
}

/// Every monomial of exactly the given degree, in monomial order.
pub fn enumerate_basis(model: &Model, degree: u32) -> Result<Vec<Monomial>> {
    require_finite_type(model)?;
    let mut gens = polynomial_generators(model, degree);
    gens.sort_by_key(|d| std::cmp::Reverse(d.degree()));

    fn choose(
        gens: &[Decorated],
        idx: usize,
        remaining: u32,
        current: &mut Vec<(Decorated, u32)>,
        out: &mut BTreeSet<Monomial>,
    ) {
        if remaining == 0 {
            out.insert(Monomial::from_map(current.iter().cloned().collect()));
            return;
        }
        if idx == gens.len() {
            return;
        }
        let d = gens[idx].degree();
        for e in (0..=remaining / d).rev() {
            if e > 0 {
                current.push((gens[idx].clone(), e));
            }
            choose(gens, idx + 1, remaining - e * d, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }

    let mut out = BTreeSet::new();
    choose(&gens, 0, degree, &mut Vec::new(), &mut out);
    Ok(out.into_iter().collect())
}

/// Number of admissible sequences with excess above `excess_gt` and last
/// entry at most `last_max`, indexed by entry sum `0..=max_sum`.
/// Counted by dynamic programming on (first entry, sum).
fn count_admissible_by_sum(max_sum: u32, excess_gt: i64, last_max: Option<u32>) -> Vec<u64> {
    let n = max_sum as usize;
    // ways[a][s]: admissible sequences with first entry a and entry sum s
    let mut ways = vec![vec![0u64; n + 1]; n + 1];
    for s in 1..=n {
        for a in 1..=s {
            let mut w = u64::from(a == s && last_max.is_none_or(|m| a as u32 <= m));
            let rest = s - a;
            for b in a.div_ceil(2)..=rest {
                w += ways[b][rest];
            }
            ways[a][s] = w;
        }
    }
    let mut counts = vec![0u64; n + 1];
    counts[0] = 1;
    for (s, slot) in counts.iter_mut().enumerate().skip(1) {
        *slot = (1..=s)
            .filter(|&a| 2 * a as i64 - s as i64 > excess_gt)
            .map(|a| ways[a][s])
            .sum();
    }
    counts
}

/// Graded dimensions in degrees `0..=max_degree`, from the generator
/// counts via the product formula `prod_d (1 - t^d)^(-c_d)`.
pub fn poincare_series(model: &Model, max_degree: u32) -> Result<Vec<u64>> {
    require_finite_type(model)?;
    let n = max_degree as usize;
    let mut gen_counts = vec![0u64; n + 1];
    for gen in model.base_generators(max_degree) {
        let dim = gen.dim();
        let last_max = model.max_lower().map(|m| (m + dim as i64).max(0) as u32);
        let counts = count_admissible_by_sum(max_degree - dim, dim as i64, last_max);
        for (s, c) in counts.into_iter().enumerate() {
            gen_counts[dim as usize + s] += c;
        }
    }
    let mut series = vec![0u64; n + 1];
    series[0] = 1;
    for (d, &c) in gen_counts.iter().enumerate().skip(1) {
        for _ in 0..c {
            // multiply by 1 / (1 - t^d)
            for k in d..=n {
                series[k] += series[k - d];
            }
        }
    }
    Ok(series)
}

/// Homology suspension: kills products of positive-degree classes and
/// sends `Q^I x` to `Q^I σx`, re-evaluated in the target model.
pub fn suspend(x: &Element) -> Result<Element> {
    let target = x.model().suspension()?;
    let mut out = Element::zero(target);
    for m in x.terms() {
        let Some(d) = m.as_single() else { continue };
        let gen = match d.gen {
            Generator::Sphere(n) => Generator::Sphere(n + 1),
            Generator::Projective { k, shift } => Generator::Projective { k, shift: shift + 1 },
            Generator::Unit => unreachable!("sphere-zero has no suspension"),
        };
        let base = Element::generator(target, gen)?;
        out.add_assign_unchecked(&action::evaluate_word(&d.ops, &base)?);
    }
    Ok(out)
}

pub fn suspend_times(x: &Element, times: u32) -> Result<Element> {
    let mut x = x.clone();
    for _ in 0..times {
        x = suspend(&x)?;
    }
    Ok(x)
}

/// Ring map induced by the bottom cell `S^n -> Σ^m P_{k0}`, `n = k0 + m`:
/// `g_n ↦ Σ^m a_{k0}`, commuting with the operations.
pub fn include_bottom_cell(x: &Element, to: &Model) -> Result<Element> {
    let ModelKind::Sphere(n) = x.model().kind() else {
        return Err(Error::Usage(format!("bottom-cell inclusion starts from a sphere model, got {}", x.model())));
    };
    let ModelKind::Stunted { .. } = to.kind() else {
        return Err(Error::Usage(format!("bottom-cell inclusion targets a stunted model, got {to}")));
    };
    let bottom = to.bottom_generator();
    if bottom.dim() != n {
        return Err(Error::Usage(format!(
            "dimension mismatch: g_{n} cannot map to {bottom} of dimension {}",
            bottom.dim()
        )));
    }
    let terms = x.terms().iter().map(|m| {
        let map = m
            .factors()
            .map(|(d, e)| (Decorated { gen: bottom, ops: d.ops.clone() }, e))
            .collect();
        Monomial::from_map(map)
    });
    Ok(Element::from_monomials(*to, terms))
}
