//! Parsing of models, sequences and elements from their text forms.
//!
//! Elements use the rendering grammar: sums joined by ` + `, products by
//! `*`, powers by `^`, decorated classes as `Q^a Q^b g_n`, `a_k[m]` or
//! `[1]`, parenthesised when raised to a power. Input is evaluated, so a
//! non-canonical string is accepted and brought to canonical form.

use crate::action::evaluate_word;
use crate::element::{Element, Generator};
use crate::error::{Error, Result};
use crate::model::{LoopBound, Model};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn number<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim().parse().map_err(|_| parse_err(format!("malformed {what} '{s}'")))
}

/// `sphere:N`, `stunted:K0,M` or `sphere-zero`, optionally followed by
/// `;loops=L`.
pub fn parse_model(text: &str) -> Result<Model> {
    let (base, loops) = match text.split_once(';') {
        Some((b, l)) => {
            let l = l.trim().strip_prefix("loops=").ok_or_else(|| parse_err(format!("malformed model '{text}'")))?;
            (b, Some(number::<u32>(l, "loop bound")?))
        }
        None => (text, None),
    };
    let model = match base.trim() {
        "sphere-zero" | "sphere:0" => Model::sphere_zero(),
        s => {
            if let Some(n) = s.strip_prefix("sphere:") {
                Model::sphere(number(n, "sphere dimension")?)?
            } else if let Some(rest) = s.strip_prefix("stunted:") {
                let (k, m) = rest.split_once(',').ok_or_else(|| parse_err(format!("malformed model '{text}'")))?;
                Model::stunted(number(k, "bottom index")?, number(m, "shift")?)?
            } else {
                return Err(parse_err(format!("unknown model '{text}'")));
            }
        }
    };
    match loops {
        Some(l) => model.with_loop_bound(LoopBound::Finite(l)),
        None => Ok(model),
    }
}

/// Comma-separated positive integers; the empty string is the empty word.
pub fn parse_seq(text: &str) -> Result<Vec<u32>> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|p| {
            let v: u32 = number(p, "sequence entry")?;
            if v == 0 {
                return Err(parse_err(format!("sequence entries must be positive in '{text}'")));
            }
            Ok(v)
        })
        .collect()
}

fn parse_generator(tok: &str) -> Result<Generator> {
    if tok == "[1]" {
        return Ok(Generator::Unit);
    }
    if let Some(n) = tok.strip_prefix("g_") {
        return Ok(Generator::Sphere(number(n, "sphere generator")?));
    }
    if let Some(rest) = tok.strip_prefix("a_") {
        let (k, m) = rest
            .strip_suffix(']')
            .and_then(|r| r.split_once('['))
            .ok_or_else(|| parse_err(format!("malformed generator '{tok}'")))?;
        return Ok(Generator::Projective { k: number(k, "cell index")?, shift: number(m, "shift")? });
    }
    Err(parse_err(format!("unknown generator '{tok}'")))
}

fn parse_decorated(text: &str, model: &Model) -> Result<Element> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    let (gen_tok, ops) = toks.split_last().ok_or_else(|| parse_err("empty factor"))?;
    let word = ops
        .iter()
        .map(|t| {
            t.strip_prefix("Q^")
                .ok_or_else(|| parse_err(format!("expected an operation, found '{t}'")))
                .and_then(|n| number::<u32>(n, "operation index"))
        })
        .collect::<Result<Vec<u32>>>()?;
    let gen = parse_generator(gen_tok)?;
    model.check_generator(&gen)?;
    evaluate_word(&word, &Element::generator(*model, gen)?)
}

fn parse_factor(text: &str, model: &Model) -> Result<Element> {
    let t = text.trim();
    if t == "1" {
        return Ok(Element::one(*model));
    }
    if let Some(rest) = t.strip_prefix('(') {
        let (inner, tail) = rest.split_once(')').ok_or_else(|| parse_err(format!("unbalanced '{t}'")))?;
        let base = parse_decorated(inner, model)?;
        return match tail.trim() {
            "" => Ok(base),
            e => Ok(base.pow(number(e.strip_prefix('^').unwrap_or("x"), "exponent")?)),
        };
    }
    if let Some((base, e)) = t.rsplit_once('^') {
        if !e.is_empty() && e.bytes().all(|b| b.is_ascii_digit()) {
            if base.contains(' ') {
                return Err(parse_err(format!("parenthesise '{t}' before raising to a power")));
            }
            return Ok(parse_decorated(base, model)?.pow(number(e, "exponent")?));
        }
    }
    parse_decorated(t, model)
}

/// Parses an element of `model` in the rendering grammar.
pub fn parse_element(text: &str, model: &Model) -> Result<Element> {
    let mut out = Element::zero(*model);
    let t = text.trim();
    if t == "0" {
        return Ok(out);
    }
    for term in t.split(" + ") {
        let mut prod = Element::one(*model);
        for factor in term.split('*') {
            prod = prod.mul(&parse_factor(factor, model)?)?;
        }
        out = out.add(&prod)?;
    }
    Ok(out)
}
