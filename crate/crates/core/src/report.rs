//! JSON reports for the command-line entry points.
//!
//! Every operation inside a report is an embedded operation file, so a
//! report can be fed back as input. Field order is fixed by the structs
//! below and output is byte-for-byte deterministic.

use serde::Serialize;

use crate::algebra::MultiOp;
use crate::classify::{
    chi_triple, is_idempotent, is_maltsev, is_majority, is_minority, is_pixley, is_projection, is_semiprojection,
    is_totally_symmetric, ChiTriple,
};
use crate::compose::{close_fixed_arity, GeneratorSet};
use crate::error::{Error, Falsifier, Result};
use crate::five_type::{classify_five_type, ClassifyOptions, Step, TypeTag};
use crate::group::BooleanGroup;
use crate::opfile::{emit_opfile, serialize_embedded, serialize_embedded_opt};
use crate::projection::{projection_property_equivalence, ProjectionPropertyReport, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_FALSIFIER: i32 = 3;

/// Rendered output and the process exit status it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub status: i32,
    /// One-line summary for stderr.
    pub note: Option<String>,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct FalsifierReport<'a> {
    claim: &'a str,
    detail: &'a str,
    tuple: Option<&'a [u8]>,
}

impl<'a> From<&'a Falsifier> for FalsifierReport<'a> {
    fn from(f: &'a Falsifier) -> Self {
        FalsifierReport {
            claim: f.claim,
            detail: &f.detail,
            tuple: f.tuple.as_deref(),
        }
    }
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    command: &'static str,
    universe: usize,
    cap: usize,
    limit: usize,
    zero: u8,
    #[serde(rename = "type")]
    tag: Option<TypeTag>,
    #[serde(serialize_with = "serialize_embedded_opt")]
    witness: Option<MultiOp>,
    group: Option<BooleanGroup>,
    provenance: &'a [Step],
    falsifier: Option<FalsifierReport<'a>>,
}

pub fn classify_report(gens: &GeneratorSet, opts: ClassifyOptions) -> Result<Outcome> {
    let mut report = ClassifyReport {
        command: "classify",
        universe: gens.universe().size(),
        cap: opts.cap,
        limit: opts.limit,
        zero: opts.zero,
        tag: None,
        witness: None,
        group: None,
        provenance: &[],
        falsifier: None,
    };
    match classify_five_type(gens, opts) {
        Ok(w) => {
            report.tag = Some(w.tag);
            report.witness = w.witness;
            report.group = w.group;
            report.provenance = &w.provenance;
            let status = if w.tag == TypeTag::Inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            };
            Ok(Outcome {
                text: to_json(&report),
                status,
                note: None,
            })
        }
        Err(Error::Falsifier(f)) => {
            report.falsifier = Some((&f).into());
            Ok(Outcome {
                text: to_json(&report),
                status: EXIT_FALSIFIER,
                note: Some(format!("falsifier: {f}")),
            })
        }
        Err(e) => Err(e),
    }
}

/// The fragment as an operation file, preceded by a status comment.
pub fn close_report(gens: &GeneratorSet, arity: usize, limit: usize) -> Result<Outcome> {
    let frag = close_fixed_arity(gens, arity, limit)?;
    let mut out = GeneratorSet::new(gens.universe());
    for (i, m) in frag.members().iter().enumerate() {
        out.push(format!("f{i}"), m.clone())?;
    }
    let status_line = format!(
        "arity {arity} members {} saturated {}",
        frag.len(),
        frag.saturated()
    );
    let mut text = format!("# {status_line}\n");
    text.push_str(&emit_opfile(&out));
    Ok(Outcome {
        text,
        status: if frag.saturated() { EXIT_OK } else { EXIT_INCONCLUSIVE },
        note: Some(status_line),
    })
}

#[derive(Serialize)]
struct OpProps {
    name: String,
    #[serde(serialize_with = "serialize_embedded")]
    op: MultiOp,
    arity: usize,
    kind: &'static str,
    projection: Option<usize>,
    idempotent: bool,
    totally_symmetric: bool,
    majority: Option<bool>,
    minority: Option<bool>,
    maltsev: Option<bool>,
    pixley: Option<bool>,
    semiprojection: Option<usize>,
    chi: Option<ChiTriple>,
}

#[derive(Serialize)]
struct PropsReport {
    command: &'static str,
    universe: usize,
    operations: Vec<OpProps>,
}

pub fn props_report(gens: &GeneratorSet) -> Result<Outcome> {
    let mut operations = Vec::new();
    for g in gens.named() {
        let f = &g.op;
        let ternary = f.arity() == 3;
        let tern = |p: fn(&MultiOp) -> Result<bool>| if ternary { p(f).ok() } else { None };
        operations.push(OpProps {
            name: g.name.clone(),
            op: f.clone(),
            arity: f.arity(),
            kind: f.kind().as_str(),
            projection: is_projection(f),
            idempotent: is_idempotent(f),
            totally_symmetric: is_totally_symmetric(f),
            majority: tern(is_majority),
            minority: tern(is_minority),
            maltsev: tern(is_maltsev),
            pixley: tern(is_pixley),
            semiprojection: if f.arity() >= 3 { is_semiprojection(f)? } else { None },
            chi: if ternary { chi_triple(f)? } else { None },
        });
    }
    let report = PropsReport {
        command: "props",
        universe: gens.universe().size(),
        operations,
    };
    Ok(Outcome {
        text: to_json(&report),
        status: EXIT_OK,
        note: None,
    })
}

#[derive(Serialize)]
struct EquivalenceReport<'a> {
    command: &'static str,
    universe: usize,
    limit: usize,
    #[serde(flatten)]
    result: &'a ProjectionPropertyReport,
}

pub fn equivalence_report(gens: &GeneratorSet, cap: usize, limit: usize) -> Result<Outcome> {
    let result = projection_property_equivalence(gens, cap, limit)?;
    let status = match result.verdict {
        Verdict::IAndIi | Verdict::Neither => EXIT_OK,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        Verdict::Falsifier => EXIT_FALSIFIER,
    };
    let report = EquivalenceReport {
        command: "theorem2",
        universe: gens.universe().size(),
        limit,
        result: &result,
    };
    Ok(Outcome {
        text: to_json(&report),
        status,
        note: None,
    })
}
