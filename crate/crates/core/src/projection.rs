//! The projection property for clones of operations: a clone holding every
//! constant, whose binary idempotent members are projections, contains an
//! idempotent non-projection exactly when it is `F_G` for a Boolean group `G`.

use serde::Serialize;

use crate::algebra::MultiOp;
use crate::classify::is_idempotent;
use crate::compose::{CloneFragment, ClosureSession, GeneratorSet};
use crate::error::{Error, Result};
use crate::group::{enumerate_boolean_groups, BooleanGroup};
use crate::opfile::serialize_embedded;

/// Fragments of a clone of operations that has been checked to contain all
/// constants and no binary idempotent non-projection.
#[derive(Clone, Debug)]
pub struct PairedCoordinateContext {
    fragments: Vec<CloneFragment>,
}

impl PairedCoordinateContext {
    /// `fragments[i]` must be the saturated arity-`i + 1` fragment.
    pub fn certify(fragments: Vec<CloneFragment>) -> Result<Self> {
        if fragments.len() < 2 {
            return Err(Error::Precondition("fragments of arity 1 and 2 are required".into()));
        }
        for (i, f) in fragments.iter().enumerate() {
            if f.arity() != i + 1 {
                return Err(Error::Precondition(format!("fragment {i} has arity {}", f.arity())));
            }
            if !f.saturated() {
                return Err(Error::Unsaturated(f.arity()));
            }
            if let Some(m) = f.members().iter().find(|m| !m.is_operation()) {
                return Err(Error::NotAnOperation(m.kind().as_str()));
            }
        }
        let u = fragments[0].universe();
        for a in u.elements() {
            if !fragments[0].contains(&MultiOp::constant(u, 1, a as usize)?) {
                return Err(Error::Precondition(format!("constant {a} is missing")));
            }
        }
        if fragments[1].non_projections().any(is_idempotent) {
            return Err(Error::Precondition("a binary idempotent member is not a projection".into()));
        }
        Ok(PairedCoordinateContext { fragments })
    }

    pub fn fragments(&self) -> &[CloneFragment] {
        &self.fragments
    }
}

/// Whether some isomer `f` of `g` satisfies `f(y, y, x3, .., xn) = {y}`,
/// i.e. whether some pair of coordinates forces the value when equal.
pub fn paired_coordinate_test(ctx: &PairedCoordinateContext, g: &MultiOp) -> Result<bool> {
    let n = g.arity();
    if n < 2 {
        return Err(Error::InvalidArity(n));
    }
    match ctx.fragments.get(n - 1) {
        Some(frag) if frag.contains(g) => {}
        _ => return Err(Error::Precondition("operation is not a member of the certified clone".into())),
    }
    let u = g.universe();
    for i in 0..n {
        for j in i + 1..n {
            let holds = u.tuples(n).filter(|t| t[i] == t[j]).all(|t| g.at(&t).as_singleton() == Some(t[i]));
            if holds {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Whether condition (i) holds, fails, or just lacks a witness below the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionI {
    Holds,
    False,
    NotWitnessedUpToCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    IAndIi,
    Neither,
    Falsifier,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentWitness {
    pub arity: usize,
    #[serde(serialize_with = "serialize_embedded")]
    pub op: MultiOp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionPropertyReport {
    pub cap: usize,
    pub has_all_constants: bool,
    pub binary_idempotents_are_projections: bool,
    pub idempotent_nonprojection: Option<IdempotentWitness>,
    pub condition_i: Option<ConditionI>,
    pub matched_group: Option<BooleanGroup>,
    pub verdict: Verdict,
    /// Arity whose fragment hit the member limit, if any.
    pub limit_hit: Option<usize>,
    pub fragment_sizes: Vec<usize>,
}

impl ProjectionPropertyReport {
    fn new(cap: usize) -> Self {
        ProjectionPropertyReport {
            cap,
            has_all_constants: false,
            binary_idempotents_are_projections: false,
            idempotent_nonprojection: None,
            condition_i: None,
            matched_group: None,
            verdict: Verdict::Inconclusive,
            limit_hit: None,
            fragment_sizes: Vec::new(),
        }
    }
}

fn fragments_up_to(session: &mut ClosureSession<'_>, cap: usize) -> Result<Vec<CloneFragment>, usize> {
    let mut out = Vec::with_capacity(cap);
    for n in 1..=cap {
        let f = session.fragment(n).map_err(|_| n)?.clone();
        if !f.saturated() {
            return Err(n);
        }
        out.push(f);
    }
    Ok(out)
}

fn condition_i_from(frags: &[CloneFragment], report: &mut ProjectionPropertyReport) {
    let u = frags[0].universe();
    report.has_all_constants = u
        .elements()
        .all(|a| frags[0].contains(&MultiOp::constant(u, 1, a as usize).unwrap()));
    report.binary_idempotents_are_projections = !frags[1].non_projections().any(is_idempotent);
    report.idempotent_nonprojection = frags[2..].iter().find_map(|f| {
        f.non_projections().find(|m| is_idempotent(m)).map(|m| IdempotentWitness {
            arity: f.arity(),
            op: m.clone(),
        })
    });
    report.condition_i = Some(if !report.has_all_constants || !report.binary_idempotents_are_projections {
        ConditionI::False
    } else if report.idempotent_nonprojection.is_some() {
        ConditionI::Holds
    } else {
        ConditionI::NotWitnessedUpToCap
    });
}

fn matching_group(frags: &[CloneFragment]) -> Result<Option<BooleanGroup>> {
    let u = frags[0].universe();
    let k = u.size();
    if frags.iter().any(|f| f.len() != k << f.arity()) {
        return Ok(None);
    }
    for g in enumerate_boolean_groups(u) {
        let mut all = true;
        for f in frags {
            if g.fg_slice(f.arity())?.as_slice() != f.members() {
                all = false;
                break;
            }
        }
        if all {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Fills the condition (i) fields from fragments `1..=cap`. On a limit hit
/// the verdict is inconclusive and `limit_hit` names the arity.
pub fn check_condition_i(gens: &GeneratorSet, cap: usize, limit: usize) -> Result<ProjectionPropertyReport> {
    if cap < 3 {
        return Err(Error::Precondition(format!("condition (i) needs cap >= 3, got {cap}")));
    }
    let mut session = ClosureSession::new(gens, cap, limit)?;
    let mut report = ProjectionPropertyReport::new(cap);
    match fragments_up_to(&mut session, cap) {
        Ok(frags) => {
            report.fragment_sizes = frags.iter().map(CloneFragment::len).collect();
            condition_i_from(&frags, &mut report);
        }
        Err(n) => report.limit_hit = Some(n),
    }
    Ok(report)
}

/// The first enumerated Boolean group `G` with `[gens]^(n) = F_G^(n)` for
/// every `n <= cap`.
pub fn check_condition_ii(gens: &GeneratorSet, cap: usize, limit: usize) -> Result<Option<BooleanGroup>> {
    if cap < 2 {
        return Err(Error::Precondition(format!("condition (ii) needs cap >= 2, got {cap}")));
    }
    let mut session = ClosureSession::new(gens, cap, limit)?;
    let frags = fragments_up_to(&mut session, cap).map_err(Error::Unsaturated)?;
    matching_group(&frags)
}

/// Runs both conditions over the same fragments and compares them.
pub fn projection_property_equivalence(gens: &GeneratorSet, cap: usize, limit: usize) -> Result<ProjectionPropertyReport> {
    if let Some(g) = gens.ops().find(|g| !g.is_operation()) {
        return Err(Error::NotAnOperation(g.kind().as_str()));
    }
    if cap < 3 {
        return Err(Error::Precondition(format!("equivalence check needs cap >= 3, got {cap}")));
    }
    let mut session = ClosureSession::new(gens, cap, limit)?;
    let mut report = ProjectionPropertyReport::new(cap);
    let frags = match fragments_up_to(&mut session, cap) {
        Ok(f) => f,
        Err(n) => {
            report.limit_hit = Some(n);
            return Ok(report);
        }
    };
    report.fragment_sizes = frags.iter().map(CloneFragment::len).collect();
    condition_i_from(&frags, &mut report);
    report.matched_group = matching_group(&frags)?;
    let i = report.condition_i == Some(ConditionI::Holds);
    let ii = report.matched_group.is_some();
    report.verdict = match (i, ii) {
        (true, true) => Verdict::IAndIi,
        (false, false) => Verdict::Neither,
        _ => Verdict::Falsifier,
    };
    Ok(report)
}
