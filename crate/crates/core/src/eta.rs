//! Generator-set and kernel sweeps for the Hurewicz images of the `η_i`
//! family, the suspension chain, the stable image, and the `ν`/`σ`
//! analogues.
//!
//! `k` selects the adjoint level `6 - k`. The image of `[η_i]_{6-k}` lives
//! in the sphere model of dimension `3 - k`; for `k = 3` only membership
//! verdicts are computed, on the unit class of the sphere-zero model.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::action::evaluate_word;
use crate::element::{graded_rank, Element, Generator};
use crate::error::{Error, Result};
use crate::model::{
    admissible_sequences, include_bottom_cell, suspend, suspend_times, EntryFilter, GeneratorFilter,
    Model,
};
use crate::opseq::{excess, is_admissible, normalize, Indexing, OpSequence};
use crate::report::{Record, VerificationReport};
use crate::steenrod::{is_a_annihilated, is_primitive};

/// Where a predicate of the form `Q^I Q^J != 0` is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// The normal form of the composite word is nonzero.
    InR,
    /// The composite is nonzero on the target generator.
    #[default]
    OnGenerator,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in_R" | "in_r" | "in-r" => Ok(Mode::InR),
            "on_generator" | "on-generator" => Ok(Mode::OnGenerator),
            other => Err(Error::Usage(format!("unknown mode '{other}'"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::InR => "in_R",
            Mode::OnGenerator => "on_generator",
        })
    }
}

/// Generator set `𝓘_{6-k}` with its sweep filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorSetSpec {
    pub k: u8,
    /// Mahowald index.
    pub i: u32,
    pub mode: Mode,
    pub excess_gt: i64,
    /// Strict bound on the last upper entry.
    pub cap_lt: u32,
    /// Extra restriction on swept entries.
    pub entries: EntryFilter,
}

impl GeneratorSetSpec {
    pub fn new(k: u8, i: u32, mode: Mode) -> Result<Self> {
        if k > 3 {
            return Err(Error::Usage(format!("k must be in 0..=3, got {k}")));
        }
        if !(3..=20).contains(&i) {
            return Err(Error::Usage(format!("Mahowald index must be in 3..=20, got {i}")));
        }
        Ok(GeneratorSetSpec {
            k,
            i,
            mode,
            excess_gt: 6 - k as i64,
            cap_lt: (1 << (i + 1)) - 3,
            entries: EntryFilter::Any,
        })
    }

    pub fn with_cap(self, cap_lt: u32) -> Self {
        GeneratorSetSpec { cap_lt, ..self }
    }

    pub fn with_entries(self, entries: EntryFilter) -> Self {
        GeneratorSetSpec { entries, ..self }
    }

    /// Degree of `[η_i]_{6-k}`.
    pub fn base_degree(&self) -> u32 {
        6 - self.k as u32
    }

    /// Largest admitted lower index on the source.
    pub fn max_lower(&self) -> i64 {
        (1i64 << (self.i + 1)) - 9 + self.k as i64 - 1
    }

    fn filter(&self, max_length: Option<usize>) -> GeneratorFilter {
        GeneratorFilter {
            excess_gt: self.excess_gt,
            cap_lt: Some(self.cap_lt),
            entries: self.entries,
            max_length,
        }
    }
}

/// `[η_i]_j`, tracked symbolically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaClass {
    pub i: u32,
    pub j: u32,
}

impl EtaClass {
    pub fn new(i: u32, j: u32) -> Result<Self> {
        if i < 3 || j > 6 {
            return Err(Error::Usage(format!("no class [η_{i}]_{j}")));
        }
        Ok(EtaClass { i, j })
    }

    pub fn degree(&self) -> u32 {
        self.j
    }

    /// Loop bound of the space the class lives in.
    pub fn loop_bound(&self) -> u32 {
        (1 << (self.i + 1)) - 8 + (6 - self.j)
    }

    /// Dimension of the looped sphere.
    pub fn sphere_dim(&self) -> u32 {
        (1 << self.i) - 2
    }

    pub fn suspension(&self) -> Option<EtaClass> {
        (self.j < 6).then_some(EtaClass { i: self.i, j: self.j + 1 })
    }
}

impl fmt::Display for EtaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[η_{}]_{}", self.i, self.j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NuHat {
    Class(Element),
    /// Only membership questions are answered at this level.
    Membership,
    OutOfScope(&'static str),
}

/// Hurewicz image of the adjoint `ν̃_j`, in the sphere model of
/// dimension `j - 3`.
pub fn nu_hat(j: u32) -> Result<NuHat> {
    let g = |n: u32| Element::generator(Model::sphere(n)?, Generator::Sphere(n));
    Ok(match j {
        6 => NuHat::Class(evaluate_word(&[3], &g(3)?)?),
        5 => NuHat::Class(evaluate_word(&[3], &g(2)?)?),
        4 => {
            let g1 = g(1)?;
            NuHat::Class(evaluate_word(&[3], &g1)?.add(&evaluate_word(&[2, 1], &g1)?)?)
        }
        3 => NuHat::Membership,
        1 | 2 => NuHat::OutOfScope("the image involves component classes outside the models"),
        _ => return Err(Error::Usage(format!("adjoint level must be in 1..=6, got {j}"))),
    })
}

fn nu_hat_class(k: u8) -> Result<Element> {
    match nu_hat(6 - k as u32)? {
        NuHat::Class(x) => Ok(x),
        _ => Err(Error::Usage(format!("no image element at k = {k}"))),
    }
}

fn unit() -> Element {
    Element::generator(Model::sphere_zero(), Generator::Unit).expect("unit generator")
}

/// Target generator `g_{3-k}`, or the unit class for `k = 3`.
pub fn target_generator(k: u8) -> Result<Element> {
    if k == 3 {
        return Ok(unit());
    }
    let n = 3 - k as u32;
    Element::generator(Model::sphere(n)?, Generator::Sphere(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Image {
    Class(Element),
    Membership(bool),
}

impl Image {
    pub fn is_nonzero(&self) -> bool {
        match self {
            Image::Class(x) => !x.is_zero(),
            Image::Membership(b) => *b,
        }
    }
}

impl fmt::Display for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Image::Class(x) => write!(f, "{x}"),
            Image::Membership(b) => write!(f, "{}", if *b { "member" } else { "not a member" }),
        }
    }
}

fn upper_word(k: u8, seq: &OpSequence) -> Result<Vec<u32>> {
    match seq.indexing() {
        Indexing::Upper => Ok(seq.entries().to_vec()),
        Indexing::Lower => Ok(seq.convert_indexing(6 - k as u32, Indexing::Upper)?.entries().to_vec()),
    }
}

/// Rejects words using a lower index outside the source's range.
fn check_range(spec: &GeneratorSetSpec, word: &[u32]) -> Result<()> {
    let max = spec.max_lower();
    let mut deg = spec.base_degree() as i64;
    for &s in word.iter().rev() {
        let lower = s as i64 - deg;
        if lower < 0 {
            break;
        }
        if lower > max {
            return Err(Error::Range {
                lower,
                max,
                model: format!("[η_{}]_{}", spec.i, spec.base_degree()),
            });
        }
        deg += s as i64;
    }
    Ok(())
}

/// `Q^I` applied to the image of `[η_i]_{6-k}`. For `k = 3`, whether
/// `Q^I Q^3` or `Q^I Q^2 Q^1` survives on the unit class.
pub fn jhopf_image(k: u8, seq: &OpSequence, i: u32) -> Result<Image> {
    let spec = GeneratorSetSpec::new(k, i, Mode::OnGenerator)?;
    let word = upper_word(k, seq)?;
    check_range(&spec, &word)?;
    image_of_word(&spec, &word)
}

fn image_of_word(spec: &GeneratorSetSpec, word: &[u32]) -> Result<Image> {
    if spec.k == 3 {
        return Ok(Image::Membership(
            composite_nonzero(word, &[3], 3, Mode::OnGenerator)?
                || composite_nonzero(word, &[2, 1], 3, Mode::OnGenerator)?,
        ));
    }
    Ok(Image::Class(evaluate_word(word, &nu_hat_class(spec.k)?)?))
}

/// Whether `Q^I Q^J` is nonzero in the given mode, on the target
/// generator for `k`.
fn composite_nonzero(word: &[u32], tail: &[u32], k: u8, mode: Mode) -> Result<bool> {
    let mut full = word.to_vec();
    full.extend_from_slice(tail);
    Ok(match mode {
        Mode::InR => !normalize(&full).is_zero(),
        Mode::OnGenerator => !evaluate_word(&full, &target_generator(k)?)?.is_zero(),
    })
}

/// Membership in `𝓘_{6-k}`.
pub fn in_script_i(spec: &GeneratorSetSpec, seq: &OpSequence) -> Result<bool> {
    let word = upper_word(spec.k, seq)?;
    in_script_i_word(spec, &word)
}

fn in_script_i_word(spec: &GeneratorSetSpec, word: &[u32]) -> Result<bool> {
    if !is_admissible(word) {
        return Ok(false);
    }
    let (k, mode) = (spec.k, spec.mode);
    Ok(match k {
        0 => word.iter().all(|s| s % 2 == 0),
        1 => composite_nonzero(word, &[3], k, mode)?,
        2 => composite_nonzero(word, &[3], k, mode)? || word.iter().all(|s| s % 4 == 0),
        _ => composite_nonzero(word, &[3], k, mode)? || composite_nonzero(word, &[2, 1], k, mode)?,
    })
}

fn word_degree(spec: &GeneratorSetSpec, word: &[u32]) -> u32 {
    spec.base_degree() + word.iter().sum::<u32>()
}

/// Groups words by class degree and evaluates the groups in parallel.
fn sweep<F>(spec: &GeneratorSetSpec, words: Vec<Vec<u32>>, eval: F) -> Vec<Result<Record>>
where
    F: Fn(&[u32], u32) -> Result<Record> + Sync,
{
    let mut by_degree: BTreeMap<u32, Vec<Vec<u32>>> = BTreeMap::new();
    for w in words {
        by_degree.entry(word_degree(spec, &w)).or_default().push(w);
    }
    let groups: Vec<(u32, Vec<Vec<u32>>)> = by_degree.into_iter().collect();
    groups
        .par_iter()
        .map(|(d, ws)| ws.iter().map(|w| eval(w, *d)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn base_report(name: &str, spec: &GeneratorSetSpec, max_degree: u32) -> VerificationReport {
    VerificationReport::new(name)
        .param("k", spec.k)
        .param("i", spec.i)
        .param("mode", spec.mode)
        .param("excess_gt", spec.excess_gt)
        .param("cap_lt", spec.cap_lt)
        .param("max_degree", max_degree)
}

/// Compares `𝓘` membership with nonvanishing of the image over all
/// admissible `I` passing the spec's filters.
pub fn verify_generators(
    spec: &GeneratorSetSpec,
    max_degree: u32,
    max_length: Option<usize>,
) -> Result<VerificationReport> {
    let mut report = base_report("generators", spec, max_degree);
    if let Some(l) = max_length {
        report = report.param("max_length", l);
    }
    let Some(max_sum) = max_degree.checked_sub(spec.base_degree()) else {
        return Ok(report);
    };
    let words = admissible_sequences(max_sum, &spec.filter(max_length));
    let results = sweep(spec, words, |w, d| {
        check_range(spec, w)?;
        let predicted = in_script_i_word(spec, w)?;
        let image = image_of_word(spec, w)?;
        let record = Record::new(w.to_vec(), spec.k, spec.i, d, predicted, image.is_nonzero());
        Ok(if predicted != image.is_nonzero() { record.with_detail(image.to_string()) } else { record })
    });
    for r in results {
        match r {
            Ok(rec) => report.records.push(rec),
            Err(e) => report.violations.push(e.to_string()),
        }
    }
    report.sort();
    Ok(report)
}

/// Images of the `𝓘` generators up to `max_degree`, keyed by sequence.
pub fn generator_images(spec: &GeneratorSetSpec, max_degree: u32) -> Result<Vec<(Vec<u32>, Element)>> {
    if spec.k > 2 {
        return Err(Error::Usage("image elements are only available for k <= 2".into()));
    }
    let Some(max_sum) = max_degree.checked_sub(spec.base_degree()) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for w in admissible_sequences(max_sum, &spec.filter(None)) {
        if in_script_i_word(spec, &w)? {
            let Image::Class(x) = image_of_word(spec, &w)? else { unreachable!() };
            out.push((w, x));
        }
    }
    Ok(out)
}

/// Certifies algebraic independence of the `𝓘` generator images degree by
/// degree: the rank of all products of images equals the number of
/// abstract monomials. Records carry `predicted = true` and
/// `computed_nonzero = (rank == count)`, with an empty sequence.
pub fn verify_independence(spec: &GeneratorSetSpec, max_degree: u32) -> Result<VerificationReport> {
    let mut report = base_report("independence", spec, max_degree);
    let gens = generator_images(spec, max_degree)?;
    let model = *nu_hat_class(spec.k)?.model();
    let degrees: Vec<u32> = gens.iter().map(|(w, _)| word_degree(spec, w)).collect();

    // products[d] collects the image of every abstract monomial of degree d
    let mut products: Vec<Vec<Element>> = vec![Vec::new(); max_degree as usize + 1];
    fn walk(
        idx: usize,
        deg: u32,
        current: &Element,
        gens: &[(Vec<u32>, Element)],
        degrees: &[u32],
        max_degree: u32,
        products: &mut Vec<Vec<Element>>,
    ) {
        for j in idx..gens.len() {
            let d = deg + degrees[j];
            if d > max_degree {
                continue;
            }
            let next = current.mul_unchecked(&gens[j].1);
            walk(j, d, &next, gens, degrees, max_degree, products);
            products[d as usize].push(next);
        }
    }
    walk(0, 0, &Element::one(model), &gens, &degrees, max_degree, &mut products);

    let checks: Vec<(u32, usize, usize)> = products
        .par_iter()
        .enumerate()
        .skip(1)
        .filter(|(_, ps)| !ps.is_empty())
        .map(|(d, ps)| (d as u32, ps.len(), graded_rank(ps, d as u32)))
        .collect();
    for (d, count, rank) in checks {
        report.records.push(
            Record::new(Vec::new(), spec.k, spec.i, d, true, rank == count)
                .with_detail(format!("rank={rank} monomials={count}")),
        );
    }
    report.annotations.push(format!("{} generators", gens.len()));
    Ok(report)
}

/// All words with last entry below the cap, entry sum at most `max_sum`
/// and length at most `max_length`, admissible or not.
pub fn all_words(max_sum: u32, cap_lt: u32, max_length: usize) -> Vec<Vec<u32>> {
    fn grow(current: &mut Vec<u32>, sum: u32, max_sum: u32, max_length: usize, out: &mut Vec<Vec<u32>>) {
        out.push(current.clone());
        if current.len() >= max_length {
            return;
        }
        for a in 1..=max_sum - sum {
            current.insert(0, a);
            grow(current, sum + a, max_sum, max_length, out);
            current.remove(0);
        }
    }
    let mut out = vec![Vec::new()];
    if max_length > 0 {
        for last in 1..=max_sum.min(cap_lt.saturating_sub(1)) {
            grow(&mut vec![last], last, max_sum, max_length, &mut out);
        }
    }
    out.sort();
    out
}

/// Checks that every word whose normal-form terms all have excess above
/// `6 - k` and lie outside `𝓘_{6-k}` has zero image. Records have
/// `predicted = false`; a nonzero image is a mismatch.
pub fn kernel_ideal_check(
    spec: &GeneratorSetSpec,
    max_degree: u32,
    max_length: usize,
) -> Result<VerificationReport> {
    let mut report = base_report("kernel", spec, max_degree).param("max_length", max_length);
    let Some(max_sum) = max_degree.checked_sub(spec.base_degree()) else {
        return Ok(report);
    };
    let mut words = Vec::new();
    for w in all_words(max_sum, spec.cap_lt, max_length) {
        if !spec.entries.accepts_all(&w) {
            continue;
        }
        let mut in_domain = true;
        for t in normalize(&w).terms() {
            if !excess(t).exceeds(spec.excess_gt) || in_script_i_word(spec, t)? {
                in_domain = false;
                break;
            }
        }
        if in_domain {
            words.push(w);
        }
    }
    let results = sweep(spec, words, |w, d| {
        check_range(spec, w)?;
        let image = image_of_word(spec, w)?;
        let record = Record::new(w.to_vec(), spec.k, spec.i, d, false, image.is_nonzero());
        Ok(if image.is_nonzero() { record.with_detail(image.to_string()) } else { record })
    });
    let mut skipped = 0usize;
    for r in results {
        match r {
            Ok(rec) => report.records.push(rec),
            Err(Error::Range { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if skipped > 0 {
        report.annotations.push(format!("{skipped} words outside the operation range skipped"));
    }
    report.sort();
    Ok(report)
}

/// Stunted model receiving the stable image at Mahowald index `i`.
pub fn stable_model(i: u32) -> Result<Model> {
    if !(3..=20).contains(&i) {
        return Err(Error::Usage(format!("Mahowald index must be in 3..=20, got {i}")));
    }
    Model::stunted((1 << i) - 3, 6 - (1i32 << i))
}

/// Image of `g_3^2` under the bottom-cell inclusion into the stable model.
pub fn stable_image(i: u32) -> Result<Element> {
    let model = stable_model(i)?;
    let g3 = Element::generator(Model::sphere(3)?, Generator::Sphere(3))?;
    include_bottom_cell(&g3.square(), &model)
}

fn check(report: &mut VerificationReport, ok: bool, what: impl Into<String>) {
    let what = what.into();
    if ok {
        report.annotations.push(format!("ok: {what}"));
    } else {
        report.violations.push(what);
    }
}

/// Checks the stable image, its bottom class, and the degree bookkeeping
/// of the iterated suspension of that class.
pub fn verify_stable(i: u32) -> Result<VerificationReport> {
    let model = stable_model(i)?;
    let mut report = VerificationReport::new("stable").param("i", i).param("model", model);
    let image = stable_image(i)?;
    let bottom = Element::generator(model, model.bottom_generator())?;
    check(&mut report, !image.is_zero(), format!("image {image} is nonzero"));
    check(&mut report, image == bottom.square(), format!("image is the square of {bottom}"));
    check(&mut report, is_a_annihilated(&bottom, 8), format!("{bottom} is A-annihilated for r <= 8"));
    check(&mut report, is_primitive(&bottom), format!("{bottom} is primitive"));

    let once = suspend(&bottom)?;
    let up = Element::generator(model.suspension()?, Generator::Projective { k: (1 << i) - 3, shift: 7 - (1i32 << i) })?;
    check(&mut report, once == up, format!("suspension of {bottom} is {up}"));
    let times = (1u32 << (i + 1)) - 10;
    let top = suspend_times(&up, times)?;
    let expected_shift = (1i32 << i) - 3;
    let expected = Generator::Projective { k: (1 << i) - 3, shift: expected_shift };
    check(
        &mut report,
        top.degree() == Some((1 << (i + 1)) - 6) && top.to_string() == expected.to_string(),
        format!("{times}-fold suspension of {up} is {expected}"),
    );
    Ok(report)
}

/// For the stable model at index `i`: `Q^I` of the bottom class is nonzero
/// when `excess(I) >= 2^i - 3`, and `2^i - 6` suspensions carry it to
/// `Q^I a_{2^i-3}` in the unshifted model.
pub fn excess_criterion_check(i: u32, words: &[Vec<u32>]) -> Result<VerificationReport> {
    let model = stable_model(i)?;
    let k0 = (1u32 << i) - 3;
    let mut report = VerificationReport::new("excess-criterion").param("i", i).param("model", model);
    let bottom = Element::generator(model, model.bottom_generator())?;
    let unshifted = Model::stunted(k0, 0)?;
    let a = Element::generator(unshifted, Generator::Projective { k: k0, shift: 0 })?;
    for w in words {
        if !is_admissible(w) || !excess(w).at_least(k0 as i64) {
            return Err(Error::Usage(format!("{w:?} is not admissible with excess >= {k0}")));
        }
        let x = evaluate_word(w, &bottom)?;
        let up = suspend_times(&x, (1 << i) - 6)?;
        let direct = evaluate_word(w, &a)?;
        let degree = x.degree().unwrap_or(0);
        let ok = up == direct && !direct.is_zero();
        let mut rec = Record::new(w.clone(), 0, i, degree, true, !x.is_zero() && ok);
        if !ok {
            rec = rec.with_detail(format!("suspended {up}, direct {direct}"));
        }
        report.records.push(rec);
    }
    report.sort();
    Ok(report)
}

/// Admissible words with excess at least `2^i - 3`, in (degree, word)
/// order, for use with [`excess_criterion_check`].
pub fn excess_criterion_words(i: u32, max_sum: u32) -> Vec<Vec<u32>> {
    let k0 = (1i64 << i) - 3;
    let mut words: Vec<Vec<u32>> = admissible_sequences(max_sum, &GeneratorFilter::excess_gt(k0 - 1))
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();
    words.sort_by_key(|w| (w.iter().sum::<u32>(), w.clone()));
    words
}

/// `ν` or `σ` in the Hopf-invariant-one analogues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfCase {
    Nu,
    Sigma,
}

impl HopfCase {
    pub fn cap_lt(&self) -> u32 {
        match self {
            HopfCase::Nu => 6,
            HopfCase::Sigma => 14,
        }
    }

    pub fn max_level(&self) -> u32 {
        match self {
            HopfCase::Nu => 3,
            HopfCase::Sigma => 7,
        }
    }
}

impl FromStr for HopfCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nu" => Ok(HopfCase::Nu),
            "sigma" => Ok(HopfCase::Sigma),
            other => Err(Error::Usage(format!("unknown Hopf case '{other}'"))),
        }
    }
}

impl fmt::Display for HopfCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HopfCase::Nu => "nu",
            HopfCase::Sigma => "sigma",
        })
    }
}

/// Dimension of the sphere the `σ` classes pull back to. Only reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SigmaSource {
    #[default]
    S8,
    S4,
}

impl FromStr for SigmaSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "8" | "s8" | "S8" => Ok(SigmaSource::S8),
            "4" | "s4" | "S4" => Ok(SigmaSource::S4),
            other => Err(Error::Usage(format!("unknown source sphere '{other}'"))),
        }
    }
}

/// Generator of the target sphere model at adjoint level `level`.
pub fn hopf_target(level: u32) -> Result<Element> {
    if level == 0 {
        return Ok(unit());
    }
    Element::generator(Model::sphere(level)?, Generator::Sphere(level))
}

/// Sweeps `Q^I g_level` over admissible `I` with excess above 0 and last
/// entry under the case's cap. Every record is predicted nonzero; the
/// computed value vanishes exactly when `excess(I) < level`.
pub fn verify_hopf_case(
    case: HopfCase,
    level: u32,
    max_degree: u32,
    source: SigmaSource,
) -> Result<VerificationReport> {
    if level > case.max_level() {
        return Err(Error::Usage(format!("{case} levels are 0..={}, got {level}", case.max_level())));
    }
    let mut report = VerificationReport::new("hopf")
        .param("case", case)
        .param("i", level)
        .param("cap_lt", case.cap_lt())
        .param("max_degree", max_degree);
    if case == HopfCase::Sigma {
        let s = match source {
            SigmaSource::S8 => 8,
            SigmaSource::S4 => 4,
        };
        report = report.param("source_sphere", s);
    }
    let Some(max_sum) = max_degree.checked_sub(level) else {
        return Ok(report);
    };
    let base = hopf_target(level)?;
    let filter = GeneratorFilter {
        excess_gt: 0,
        cap_lt: Some(case.cap_lt()),
        entries: EntryFilter::Any,
        max_length: None,
    };
    let words = admissible_sequences(max_sum, &filter);
    let results: Vec<Result<(Record, bool)>> = words
        .par_iter()
        .map(|w| {
            let x = evaluate_word(w, &base)?;
            let degree = level + w.iter().sum::<u32>();
            let square = x.terms().iter().any(|m| m.weight() > 1);
            let mut rec = Record::new(w.clone(), 0, level, degree, true, !x.is_zero());
            if x.is_zero() {
                rec = rec.with_detail(format!("excess {}", excess_value(w)));
            }
            Ok((rec, square))
        })
        .collect();
    let mut squares = 0;
    for r in results {
        let (rec, square) = r?;
        squares += usize::from(square);
        report.records.push(rec);
    }
    let vanishing = report.mismatches().count();
    report.annotations.push(format!(
        "{vanishing} of {} sequences pass the excess filter but have zero image; {squares} images are squares",
        report.records.len()
    ));
    report.sort();
    Ok(report)
}

fn excess_value(w: &[u32]) -> String {
    match excess(w) {
        crate::opseq::Excess::Finite(e) => e.to_string(),
        crate::opseq::Excess::Infinite => "inf".into(),
    }
}

/// Checks the suspension chain `ν̃_4 -> ν̃_5 -> ν̃_6 -> 0`.
pub fn suspension_chain_check() -> Result<VerificationReport> {
    let mut report = VerificationReport::new("chain");
    let (n4, n5, n6) = (nu_hat_class(2)?, nu_hat_class(1)?, nu_hat_class(0)?);
    let steps = [(2u8, &n4, &n5), (1u8, &n5, &n6)];
    for (k, from, to) in steps {
        let up = suspend(from)?;
        report.records.push(Record::new(Vec::new(), k, 0, 7 - k as u32, true, !up.is_zero()));
        check(&mut report, &up == to, format!("suspension of {from} is {to} (got {up})"));
    }
    let last = suspend(&n6)?;
    report.records.push(Record::new(Vec::new(), 0, 0, 7, false, !last.is_zero()));
    check(&mut report, last.is_zero(), format!("suspension of {n6} is 0"));
    report.annotations.push(
        "the vanishing of the suspension of [η_3]_6 rests on an external computation and is not checked here"
            .into(),
    );
    Ok(report)
}
