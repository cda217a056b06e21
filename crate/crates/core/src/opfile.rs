//! Plain-text operation tables.
//!
//! ```text
//! universe 2
//! op and arity 2
//! 0 0 : 0
//! 0 1 : 0
//! 1 0 : 0
//! 1 1 : 1
//! ```
//!
//! Rows list every tuple in ascending index order (first coordinate most
//! significant). Values are an ascending comma-separated element list, or `-`
//! for the empty set. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use serde::Serializer;
use thiserror::Error;

use crate::algebra::{MultiOp, SubsetMask, Universe, MAX_ARITY};
use crate::compose::GeneratorSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

fn err<T>(line: usize, reason: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        reason: reason.into(),
    })
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_element(tok: &str, universe: Universe, line: usize) -> Result<u8, ParseError> {
    let v: usize = tok.parse().map_err(|_| ParseError {
        line,
        reason: format!("`{tok}` is not an element"),
    })?;
    universe.check_element(v).map_err(|e| ParseError {
        line,
        reason: e.to_string(),
    })
}

struct Block {
    name: String,
    arity: usize,
    header_line: usize,
    table: Vec<SubsetMask>,
}

/// Parses an operation file, keeping declaration order.
pub fn parse_opfile(text: &str) -> Result<GeneratorSet, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let Some((hl, header)) = lines.next() else {
        return err(1, "missing `universe <k>` header");
    };
    let universe = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["universe", k] => {
            let k: usize = k.parse().map_err(|_| ParseError {
                line: hl,
                reason: format!("bad universe size `{k}`"),
            })?;
            Universe::new(k).map_err(|e| ParseError {
                line: hl,
                reason: e.to_string(),
            })?
        }
        _ => return err(hl, "expected `universe <k>`"),
    };

    let mut gens = GeneratorSet::new(universe);
    let mut block: Option<Block> = None;
    let finish = |b: Block, gens: &mut GeneratorSet, line: usize| -> Result<(), ParseError> {
        let expected = universe.table_len(b.arity);
        if b.table.len() != expected {
            return err(
                line,
                format!("op `{}` has {} rows, expected {expected}", b.name, b.table.len()),
            );
        }
        let op = MultiOp::from_table(universe, b.arity, b.table).expect("rows validated");
        gens.push(b.name, op).map_err(|e| ParseError {
            line: b.header_line,
            reason: e.to_string(),
        })
    };

    let mut tuple = Vec::new();
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("op ") {
            if let Some(b) = block.take() {
                finish(b, &mut gens, ln)?;
            }
            let (name, arity) = match rest.split_whitespace().collect::<Vec<_>>().as_slice() {
                [name, "arity", n] => (name.to_string(), *n),
                _ => return err(ln, "expected `op <name> arity <n>`"),
            };
            if !valid_name(&name) {
                return err(ln, format!("invalid name `{name}`"));
            }
            if gens.named().iter().any(|g| g.name == name) {
                return err(ln, format!("duplicate name `{name}`"));
            }
            let arity: usize = match arity.parse() {
                Ok(n) if (1..=MAX_ARITY).contains(&n) => n,
                _ => return err(ln, format!("arity `{arity}` outside 1..={MAX_ARITY}")),
            };
            block = Some(Block {
                name,
                arity,
                header_line: ln,
                table: Vec::with_capacity(universe.table_len(arity)),
            });
            continue;
        }
        let Some(b) = block.as_mut() else {
            return err(ln, "row outside an `op` block");
        };
        let Some((lhs, rhs)) = line.split_once(':') else {
            return err(ln, "expected `<tuple> : <values>`");
        };
        tuple.clear();
        for tok in lhs.split_whitespace() {
            tuple.push(parse_element(tok, universe, ln)?);
        }
        if tuple.len() != b.arity {
            return err(ln, format!("tuple has {} entries, expected {}", tuple.len(), b.arity));
        }
        let index = universe.index_of(&tuple);
        if index != b.table.len() {
            if index < b.table.len() || b.table.len() == universe.table_len(b.arity) {
                return err(ln, format!("row out of order or repeated in op `{}`", b.name));
            }
            return err(ln, format!("row out of order in op `{}`: a row is missing before it", b.name));
        }
        let rhs = rhs.trim();
        let mask = if rhs == "-" {
            SubsetMask::EMPTY
        } else {
            let mut prev: Option<u8> = None;
            let mut m = SubsetMask::EMPTY;
            for tok in rhs.split(',') {
                let v = parse_element(tok.trim(), universe, ln)?;
                if prev.is_some_and(|p| p >= v) {
                    return err(ln, "values must be strictly ascending");
                }
                prev = Some(v);
                m = m.union(SubsetMask::singleton(v));
            }
            m
        };
        b.table.push(mask);
    }
    if let Some(b) = block.take() {
        let last = text.lines().count().max(1);
        finish(b, &mut gens, last)?;
    }
    Ok(gens)
}

fn write_block(out: &mut String, name: &str, op: &MultiOp) {
    let u = op.universe();
    writeln!(out, "op {name} arity {}", op.arity()).unwrap();
    for (t, m) in u.tuples(op.arity()).zip(op.table()) {
        for (i, a) in t.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{a}").unwrap();
        }
        writeln!(out, " : {m}").unwrap();
    }
}

/// Canonical text; `parse_opfile(&emit_opfile(g)) == g`.
pub fn emit_opfile(gens: &GeneratorSet) -> String {
    let mut out = format!("universe {}\n", gens.universe().size());
    for g in gens.named() {
        write_block(&mut out, &g.name, &g.op);
    }
    out
}

/// A single operation as a self-contained file.
pub fn emit_single(name: &str, op: &MultiOp) -> String {
    let mut out = format!("universe {}\n", op.universe().size());
    write_block(&mut out, name, op);
    out
}

/// Serde hook writing a witness as an embedded operation file.
pub fn serialize_embedded<S: Serializer>(op: &MultiOp, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&emit_single("op", op))
}

pub fn serialize_embedded_opt<S: Serializer>(op: &Option<MultiOp>, s: S) -> Result<S::Ok, S::Error> {
    match op {
        Some(op) => serialize_embedded(op, s),
        None => s.serialize_none(),
    }
}

/// Reads either an operation file or a JSON report. From a report, every
/// embedded operation file is collected, object keys in sorted order;
/// clashing names get a numeric suffix.
pub fn parse_source(text: &str) -> Result<GeneratorSet, ParseError> {
    if !text.trim_start().starts_with('{') {
        return parse_opfile(text);
    }
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        reason: format!("invalid report: {e}"),
    })?;
    let mut blocks = Vec::new();
    collect_blocks(&value, &mut blocks);
    let mut merged: Option<GeneratorSet> = None;
    for block in blocks {
        let part = parse_opfile(block)?;
        let target = merged.get_or_insert_with(|| GeneratorSet::new(part.universe()));
        if target.universe() != part.universe() {
            return err(0, "report embeds operations on different universes");
        }
        for g in part.named() {
            let mut name = g.name.clone();
            let mut n = 2;
            while target.named().iter().any(|h| h.name == name) {
                name = format!("{}_{n}", g.name);
                n += 1;
            }
            target.push(name, g.op.clone()).expect("fresh name, same universe");
        }
    }
    merged.ok_or_else(|| ParseError {
        line: 0,
        reason: "report embeds no operations".into(),
    })
}

fn collect_blocks<'a>(v: &'a serde_json::Value, out: &mut Vec<&'a str>) {
    match v {
        serde_json::Value::String(s) if s.starts_with("universe ") => out.push(s),
        serde_json::Value::Array(items) => items.iter().for_each(|i| collect_blocks(i, out)),
        serde_json::Value::Object(map) => map.values().for_each(|i| collect_blocks(i, out)),
        _ => {}
    }
}
