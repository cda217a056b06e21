//! Five-type classification of a non-trivial multiclone.
//!
//! The decision procedure follows the minimal-arity argument: find the least
//! arity `n` whose fragment holds a non-projection, then
//!
//! * `n = 1`: the unary member is the witness;
//! * `n = 2`: the binary member is idempotent, because its diagonal lies in
//!   the projection-only unary fragment;
//! * `n = 3`: look for a semiprojection or a majority, turn the `χ` cases
//!   `121`, `222` and `211` into a majority, and otherwise analyse the unique
//!   totally symmetric minority, which either yields an arity-4
//!   semiprojection or the term `x + y + z` of a Boolean group;
//! * `n >= 4`: an operation whose minors are all projections is a
//!   semiprojection.
//!
//! Every assertion the argument relies on is re-checked on the tables. A
//! failure is returned as [`Error::Falsifier`] and never downgraded.

use serde::Serialize;

use crate::algebra::{MultiOp, SubsetMask, DEFAULT_ARITY_CAP};
use crate::classify::{
    chi_triple, classify_chi, is_idempotent, is_majority, is_minority, is_projection, is_semiprojection,
    is_totally_symmetric, swierczkowski_check, ChiTriple, SwierczkowskiOutcome, TernaryCase,
};
use crate::compose::{compose, CloneFragment, ClosureSession, GeneratorSet, DEFAULT_LIMIT};
use crate::error::{Error, Result};
use crate::group::BooleanGroup;
use crate::opfile::serialize_embedded;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TypeTag {
    #[serde(rename = "T1_unary")]
    T1Unary,
    #[serde(rename = "T2_binary_idempotent")]
    T2BinaryIdempotent,
    #[serde(rename = "T3_majority")]
    T3Majority,
    #[serde(rename = "T4_semiprojection")]
    T4Semiprojection,
    #[serde(rename = "T5_boolean_group")]
    T5BooleanGroup,
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

/// One step of the construction that produced a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    Fragment {
        arity: usize,
        members: usize,
        saturated: bool,
        horizon: Option<usize>,
    },
    LimitHit {
        arity: usize,
    },
    MinimalArity {
        arity: usize,
    },
    DiagonalIsIdentity,
    Chi {
        #[serde(serialize_with = "serialize_embedded")]
        op: MultiOp,
        chi: ChiTriple,
        case: TernaryCase,
    },
    /// An isomer with `χ = 211`.
    PixleyIsomer {
        from: ChiTriple,
        perm: [usize; 3],
        #[serde(serialize_with = "serialize_embedded")]
        h: MultiOp,
        h_chi: ChiTriple,
    },
    /// `m(x1,x2,x3) = h(x1, h(x1,x2,x3), x3)`.
    MajorityFromPixley {
        h_chi: ChiTriple,
        #[serde(serialize_with = "serialize_embedded")]
        m: MultiOp,
        member_of_fragment: bool,
    },
    UniqueMinority {
        totally_symmetric: bool,
        operation: bool,
    },
    InverseIdentities,
    MinorityFixesFirstIffLastEqual,
    Involutions,
    ArityFourSemiprojection {
        coordinate: usize,
    },
    BooleanGroupExtracted {
        zero: u8,
    },
    QuaternaryIdentity,
    Semiprojection {
        coordinate: usize,
    },
}

/// The outcome of classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeWitness {
    pub tag: TypeTag,
    pub witness: Option<MultiOp>,
    pub group: Option<BooleanGroup>,
    pub provenance: Vec<Step>,
}

impl TypeWitness {
    /// Re-checks the invariant attached to the tag.
    pub fn verify(&self) -> Result<()> {
        let fail = |d: &str| Err(Error::falsifier("witness invariant", d.to_string(), None));
        let w = self.witness.as_ref();
        match self.tag {
            TypeTag::T1Unary => match w {
                Some(w) if w.arity() == 1 && is_projection(w).is_none() => Ok(()),
                _ => fail("T1 witness must be a unary non-projection"),
            },
            TypeTag::T2BinaryIdempotent => match w {
                Some(w) if w.arity() == 2 && is_idempotent(w) && is_projection(w).is_none() => Ok(()),
                _ => fail("T2 witness must be a binary idempotent non-projection"),
            },
            TypeTag::T3Majority => match w {
                Some(w) if w.arity() == 3 && is_majority(w)? => Ok(()),
                _ => fail("T3 witness must be a majority"),
            },
            TypeTag::T4Semiprojection => match w {
                Some(w) if w.arity() >= 3 && is_semiprojection(w)?.is_some() && is_projection(w).is_none() => Ok(()),
                _ => fail("T4 witness must be a non-projection semiprojection"),
            },
            TypeTag::T5BooleanGroup => match (w, &self.group) {
                (Some(w), Some(g)) if w.arity() == 3 && *w == g.sum3_op() => Ok(()),
                _ => fail("T5 witness must be x+y+z of the reported group"),
            },
            TypeTag::Trivial | TypeTag::Inconclusive => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    pub cap: usize,
    pub limit: usize,
    /// Neutral element used when reading off a Boolean group.
    pub zero: u8,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            cap: DEFAULT_ARITY_CAP,
            limit: DEFAULT_LIMIT,
            zero: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub enum MinimalViolation {
    /// The least arity with a non-projection, its first such member in
    /// canonical order, and the fragments `1..=arity`.
    Found {
        arity: usize,
        witness: MultiOp,
        fragments: Vec<CloneFragment>,
    },
    /// Every fragment up to the cap is projection-only.
    None { fragments: Vec<CloneFragment> },
    /// The fragment at `arity` hit the member limit first.
    Inconclusive {
        arity: usize,
        fragments: Vec<CloneFragment>,
    },
}

pub fn minimal_violation(gens: &GeneratorSet, cap: usize, limit: usize) -> Result<MinimalViolation> {
    let mut session = ClosureSession::new(gens, cap, limit)?;
    scan_minimal(&mut session)
}

fn scan_minimal(session: &mut ClosureSession<'_>) -> Result<MinimalViolation> {
    let mut fragments = Vec::new();
    for n in 1..=session.cap() {
        let frag = session.fragment(n)?.clone();
        if !frag.saturated() {
            fragments.push(frag);
            return Ok(MinimalViolation::Inconclusive { arity: n, fragments });
        }
        let first = frag.non_projections().next().cloned();
        fragments.push(frag);
        if let Some(witness) = first {
            return Ok(MinimalViolation::Found {
                arity: n,
                witness,
                fragments,
            });
        }
    }
    Ok(MinimalViolation::None { fragments })
}

fn require_chi(f: &MultiOp, wanted: &[&str]) -> Result<ChiTriple> {
    match chi_triple(f)? {
        Some(t) if wanted.contains(&t.to_string().as_str()) => Ok(t),
        other => Err(Error::Precondition(format!(
            "expected chi in {wanted:?}, got {}",
            other.map_or("none".to_string(), |t| t.to_string())
        ))),
    }
}

/// The isomer variable order for `χ = 121` and `χ = 222`.
fn pixley_isomer_perm(t: ChiTriple) -> [usize; 3] {
    if t.to_string() == "121" {
        [1, 3, 2]
    } else {
        [2, 1, 3]
    }
}

/// For `χ_f ∈ {121, 222}` returns the isomer `f(x1,x3,x2)` resp.
/// `f(x2,x1,x3)`, whose `χ` is `211`.
pub fn pixley_isomer(f: &MultiOp) -> Result<MultiOp> {
    let t = require_chi(f, &["121", "222"])?;
    let h = f.isomer(&pixley_isomer_perm(t))?;
    match chi_triple(&h)? {
        Some(ht) if ht.to_string() == "211" => Ok(h),
        other => Err(Error::falsifier(
            "pixley isomer",
            format!("isomer of chi {t} has chi {other:?}, not 211"),
            None,
        )),
    }
}

/// For `χ_h = 211` builds `m(x1,x2,x3) = h(x1, h(x1,x2,x3), x3)`, a majority.
pub fn majority_from_pixley(h: &MultiOp) -> Result<MultiOp> {
    require_chi(h, &["211"])?;
    let u = h.universe();
    let e1 = MultiOp::projection(u, 3, 1)?;
    let e3 = MultiOp::projection(u, 3, 3)?;
    let m = compose(h, &[e1, h.clone(), e3])?;
    if !is_majority(&m)? {
        return Err(Error::falsifier(
            "majority from pixley",
            "h(x1, h(x1,x2,x3), x3) is not a majority",
            first_majority_failure(&m),
        ));
    }
    Ok(m)
}

fn first_majority_failure(m: &MultiOp) -> Option<Vec<u8>> {
    let u = m.universe();
    for x in u.elements() {
        for y in u.elements() {
            for t in [[x, x, y], [x, y, x], [y, x, x]] {
                if m.at(&t) != SubsetMask::singleton(x) {
                    return Some(t.to_vec());
                }
            }
        }
    }
    None
}

fn require_minority(f: &MultiOp) -> Result<()> {
    if f.arity() == 3 && is_minority(f)? {
        Ok(())
    } else {
        Err(Error::Precondition("a ternary minority is required".into()))
    }
}

/// `f1(f2(x),x2,x3) ≈ x1`, `f1(x1,f2(x),x3) ≈ x2` and `f1(x1,x2,f2(x)) ≈ x3`.
pub fn verify_inverse_identities(f1: &MultiOp, f2: &MultiOp) -> Result<bool> {
    require_minority(f1)?;
    require_minority(f2)?;
    if f1.universe() != f2.universe() {
        return Err(Error::UniverseMismatch(f1.universe().size(), f2.universe().size()));
    }
    let projs = MultiOp::projections(f1.universe(), 3)?;
    for slot in 0..3 {
        let mut args = projs.clone();
        args[slot] = f2.clone();
        if compose(f1, &args)? != projs[slot] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f(a,b,c) = {a}` iff `b = c`, for a minority `f`.
pub fn verify_fixes_first_iff_last_equal(f: &MultiOp) -> Result<bool> {
    require_minority(f)?;
    Ok(f.universe()
        .tuples(3)
        .all(|t| (f.at(&t) == SubsetMask::singleton(t[0])) == (t[1] == t[2])))
}

/// `φ(x) = g(x, a, b)` is a singleton-valued involution.
pub fn phi_is_involution(g: &MultiOp, a: u8, b: u8) -> Result<bool> {
    let u = g.universe();
    let phi = MultiOp::from_fn(u, 1, |x| g.at(&[x[0], a, b]))?;
    let twice = compose(&phi, std::slice::from_ref(&phi))?;
    Ok(phi.is_operation() && twice == MultiOp::projection(u, 1, 1)?)
}

/// Everything established about the unique minority at arity 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorityAnalysis {
    pub minority: MultiOp,
    /// A non-projection semiprojection of arity 4, if the fragment has one.
    pub semiprojection4: Option<MultiOp>,
}

/// Checks the minority-only situation at arity 3: exactly one
/// non-projection, totally symmetric, singleton-valued, satisfying the
/// inverse identities and the `b = c` criterion. Reports whether the arity-4
/// fragment contains a non-projection semiprojection.
pub fn analyze_minority_clone(frag3: &CloneFragment, frag4: &CloneFragment) -> Result<MinorityAnalysis> {
    if frag3.arity() != 3 || frag4.arity() != 4 {
        return Err(Error::Precondition("fragments of arity 3 and 4 are required".into()));
    }
    if !frag3.saturated() {
        return Err(Error::Unsaturated(3));
    }
    if !frag4.saturated() {
        return Err(Error::Unsaturated(4));
    }
    let others: Vec<&MultiOp> = frag3.non_projections().collect();
    for f in &others {
        if !is_minority(f)? {
            return Err(Error::Precondition("arity-3 fragment holds a non-minority".into()));
        }
    }
    let [m] = others.as_slice() else {
        return Err(Error::falsifier(
            "unique minority",
            format!("expected exactly one minority, found {}", others.len()),
            None,
        ));
    };
    let m = (*m).clone();
    if !is_totally_symmetric(&m) {
        return Err(Error::falsifier("unique minority", "the unique minority is not totally symmetric", None));
    }
    if !verify_inverse_identities(&m, &m)? {
        return Err(Error::falsifier("inverse identities", "inverse identities fail for the minority", None));
    }
    if !verify_fixes_first_iff_last_equal(&m)? {
        let t = m
            .universe()
            .tuples(3)
            .find(|t| (m.at(t) == SubsetMask::singleton(t[0])) != (t[1] == t[2]));
        return Err(Error::falsifier("first argument fixed iff last two equal", "f(a,b,c) = {a} iff b = c fails", t));
    }
    if !m.is_operation() {
        return Err(Error::falsifier("minority is an involutive operation", "the unique minority is not an operation", None));
    }
    let mut semiprojection4 = None;
    for f in frag4.non_projections() {
        if is_semiprojection(f)?.is_some() {
            semiprojection4 = Some(f.clone());
            break;
        }
    }
    Ok(MinorityAnalysis {
        minority: m,
        semiprojection4,
    })
}

/// Reads off `x + y = g(x, y, zero)` and checks the group axioms,
/// `g = x + y + z`, the identity `((xyz)(x(yzt)t)t) ≈ t` and that the
/// quaternary term `((x1x2x3)(x1(x2x3x4)x4)x4)` is the last projection.
pub fn extract_boolean_group(g: &MultiOp, zero: u8) -> Result<BooleanGroup> {
    require_minority(g)?;
    let u = g.universe();
    u.check_element(zero as usize)?;
    if !g.is_operation() || !is_totally_symmetric(g) {
        return Err(Error::Precondition("a totally symmetric minority operation is required".into()));
    }
    let val = |t: [u8; 3]| g.at(&t).as_singleton().unwrap();
    for a in u.elements() {
        for b in u.elements() {
            if !phi_is_involution(g, a, b)? {
                return Err(Error::falsifier("minority is an involutive operation", "x -> g(x,a,b) is not an involution", Some(vec![a, b])));
            }
        }
    }
    let add = u.elements().flat_map(|a| u.elements().map(move |b| (a, b))).map(|(a, b)| val([a, b, zero])).collect();
    let group = BooleanGroup::new(u, zero, add)
        .map_err(|v| Error::falsifier("group from minority", format!("{} fails", v.axiom), Some(v.elements)))?;
    for t in u.tuples(3) {
        if val([t[0], t[1], t[2]]) != group.sum(t.iter().copied()) {
            return Err(Error::falsifier("group from minority", "g(x,y,z) differs from x+y+z", Some(t)));
        }
    }
    for t in u.tuples(4) {
        let (x, y, z, w) = (t[0], t[1], t[2], t[3]);
        let lhs = val([val([x, y, z]), val([x, val([y, z, w]), w]), w]);
        if lhs != w {
            return Err(Error::falsifier("identity ((xyz)(x(yzt)t)t) = t", "fails", Some(t)));
        }
    }
    let h = quaternary_term(g)?;
    if h != MultiOp::projection(u, 4, 4)? {
        return Err(Error::falsifier("quaternary term", "((123)(1(234)4)4) is not e^4_4", None));
    }
    Ok(group)
}

/// `h(x1,x2,x3,x4) = g(g(x1,x2,x3), g(x1, g(x2,x3,x4), x4), x4)` built by
/// composition.
pub fn quaternary_term(g: &MultiOp) -> Result<MultiOp> {
    let e = MultiOp::projections(g.universe(), 4)?;
    let g123 = compose(g, &[e[0].clone(), e[1].clone(), e[2].clone()])?;
    let g234 = compose(g, &[e[1].clone(), e[2].clone(), e[3].clone()])?;
    let inner = compose(g, &[e[0].clone(), g234, e[3].clone()])?;
    compose(g, &[g123, inner, e[3].clone()])
}

fn fragment_step(f: &CloneFragment) -> Step {
    Step::Fragment {
        arity: f.arity(),
        members: f.len(),
        saturated: f.saturated(),
        horizon: f.horizon(),
    }
}

/// Classifies `[gens]` into one of the five types, with a verified witness.
pub fn classify_five_type(gens: &GeneratorSet, opts: ClassifyOptions) -> Result<TypeWitness> {
    if opts.cap < 4 {
        return Err(Error::Precondition(format!("classification needs cap >= 4, got {}", opts.cap)));
    }
    gens.universe().check_element(opts.zero as usize)?;
    let mut session = ClosureSession::new(gens, opts.cap, opts.limit)?;
    let mut provenance = Vec::new();

    let found = scan_minimal(&mut session)?;
    let (n, witness) = match found {
        MinimalViolation::None { fragments } => {
            provenance.extend(fragments.iter().map(fragment_step));
            return Ok(TypeWitness {
                tag: TypeTag::Trivial,
                witness: None,
                group: None,
                provenance,
            });
        }
        MinimalViolation::Inconclusive { arity, fragments } => {
            provenance.extend(fragments.iter().map(fragment_step));
            provenance.push(Step::LimitHit { arity });
            return Ok(inconclusive(provenance));
        }
        MinimalViolation::Found {
            arity,
            witness,
            fragments,
        } => {
            provenance.extend(fragments.iter().map(fragment_step));
            provenance.push(Step::MinimalArity { arity });
            (arity, witness)
        }
    };

    let result = match n {
        1 => TypeWitness {
            tag: TypeTag::T1Unary,
            witness: Some(witness),
            group: None,
            provenance,
        },
        2 => {
            let diagonal = witness.identify(1, 2)?;
            if diagonal != MultiOp::projection(gens.universe(), 1, 1)? {
                return Err(Error::falsifier(
                    "minimal arity",
                    "binary witness has a non-identity diagonal although the unary fragment is trivial",
                    None,
                ));
            }
            provenance.push(Step::DiagonalIsIdentity);
            TypeWitness {
                tag: TypeTag::T2BinaryIdempotent,
                witness: Some(witness),
                group: None,
                provenance,
            }
        }
        3 => classify_ternary(&mut session, opts, provenance)?,
        _ => match swierczkowski_check(&witness) {
            Ok(SwierczkowskiOutcome::Semiprojection(coordinate)) => {
                provenance.push(Step::Semiprojection { coordinate });
                TypeWitness {
                    tag: TypeTag::T4Semiprojection,
                    witness: Some(witness),
                    group: None,
                    provenance,
                }
            }
            Ok(SwierczkowskiOutcome::Counterexample(t)) => {
                return Err(Error::falsifier(
                    "semiprojection from minors",
                    "minors are projections but the table is not a semiprojection",
                    Some(t),
                ))
            }
            Err(Error::Precondition(msg)) => {
                return Err(Error::falsifier("minimal arity", msg, None));
            }
            Err(e) => return Err(e),
        },
    };
    result.verify()?;
    Ok(result)
}

fn inconclusive(provenance: Vec<Step>) -> TypeWitness {
    TypeWitness {
        tag: TypeTag::Inconclusive,
        witness: None,
        group: None,
        provenance,
    }
}

fn classify_ternary(session: &mut ClosureSession<'_>, opts: ClassifyOptions, mut provenance: Vec<Step>) -> Result<TypeWitness> {
    let frag3 = session.fragment(3)?.clone();
    let others: Vec<MultiOp> = frag3.non_projections().cloned().collect();
    let done = |tag, witness: MultiOp, provenance| TypeWitness {
        tag,
        witness: Some(witness),
        group: None,
        provenance,
    };

    for f in &others {
        if let Some(coordinate) = is_semiprojection(f)? {
            provenance.push(Step::Semiprojection { coordinate });
            return Ok(done(TypeTag::T4Semiprojection, f.clone(), provenance));
        }
    }
    for f in &others {
        if is_majority(f)? {
            return Ok(done(TypeTag::T3Majority, f.clone(), provenance));
        }
    }

    for f in &others {
        let Some(chi) = chi_triple(f)? else {
            return Err(Error::falsifier(
                "minimal arity",
                "ternary member has a non-projection minor although the binary fragment is trivial",
                None,
            ));
        };
        let case = classify_chi(chi);
        provenance.push(Step::Chi {
            op: f.clone(),
            chi,
            case,
        });
        let pixley = match case {
            TernaryCase::Minority => continue,
            TernaryCase::Semiprojection | TernaryCase::Majority => {
                return Err(Error::falsifier(
                    "ternary scan",
                    format!("chi {chi} member escaped the semiprojection and majority scans"),
                    None,
                ))
            }
            TernaryCase::Pixley => f.clone(),
            TernaryCase::Case121 | TernaryCase::Case222 => {
                let h = pixley_isomer(f)?;
                provenance.push(Step::PixleyIsomer {
                    from: chi,
                    perm: pixley_isomer_perm(chi),
                    h: h.clone(),
                    h_chi: chi_triple(&h)?.expect("isomer chi was checked"),
                });
                h
            }
        };
        let m = majority_from_pixley(&pixley)?;
        let member = frag3.contains(&m);
        provenance.push(Step::MajorityFromPixley {
            h_chi: chi_triple(&pixley)?.expect("pixley has chi"),
            m: m.clone(),
            member_of_fragment: member,
        });
        if !member {
            return Err(Error::falsifier(
                "majority from pixley",
                "constructed majority is missing from the saturated arity-3 fragment",
                None,
            ));
        }
        return Ok(done(TypeTag::T3Majority, m, provenance));
    }

    // only minorities remain
    let frag4 = session.fragment(4)?.clone();
    provenance.push(fragment_step(&frag4));
    if !frag4.saturated() {
        provenance.push(Step::LimitHit { arity: 4 });
        return Ok(inconclusive(provenance));
    }
    let analysis = analyze_minority_clone(&frag3, &frag4)?;
    provenance.push(Step::UniqueMinority {
        totally_symmetric: true,
        operation: true,
    });
    provenance.push(Step::InverseIdentities);
    provenance.push(Step::MinorityFixesFirstIffLastEqual);
    if let Some(s) = analysis.semiprojection4 {
        let coordinate = is_semiprojection(&s)?.expect("scan found a semiprojection");
        provenance.push(Step::ArityFourSemiprojection { coordinate });
        return Ok(done(TypeTag::T4Semiprojection, s, provenance));
    }
    let group = extract_boolean_group(&analysis.minority, opts.zero)?;
    provenance.push(Step::Involutions);
    provenance.push(Step::BooleanGroupExtracted { zero: opts.zero });
    provenance.push(Step::QuaternaryIdentity);
    Ok(TypeWitness {
        tag: TypeTag::T5BooleanGroup,
        witness: Some(analysis.minority),
        group: Some(group),
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Universe;

    fn u(k: usize) -> Universe {
        Universe::new(k).unwrap()
    }

    fn gens(ops: impl IntoIterator<Item = MultiOp>) -> GeneratorSet {
        let ops: Vec<_> = ops.into_iter().collect();
        GeneratorSet::from_ops(ops[0].universe(), ops).unwrap()
    }

    fn xor3() -> MultiOp {
        MultiOp::from_operation(u(2), 3, |t| t[0] ^ t[1] ^ t[2]).unwrap()
    }

    fn klein3() -> MultiOp {
        MultiOp::from_operation(u(4), 3, |t| t[0] ^ t[1] ^ t[2]).unwrap()
    }

    fn median() -> MultiOp {
        MultiOp::from_operation(u(2), 3, |t| (t[0] & t[1]) | (t[0] & t[2]) | (t[1] & t[2])).unwrap()
    }

    #[test]
    fn minimal_violation_examples() {
        let c0 = MultiOp::constant(u(2), 1, 0).unwrap();
        match minimal_violation(&gens([c0.clone()]), 4, DEFAULT_LIMIT).unwrap() {
            MinimalViolation::Found { arity, witness, .. } => {
                assert_eq!(arity, 1);
                assert_eq!(witness, c0);
            }
            other => panic!("{other:?}"),
        }
        match minimal_violation(&gens([xor3()]), 4, DEFAULT_LIMIT).unwrap() {
            MinimalViolation::Found { arity, fragments, .. } => {
                assert_eq!(arity, 3);
                assert_eq!(fragments[0].len(), 1);
                assert_eq!(fragments[1].len(), 2);
            }
            other => panic!("{other:?}"),
        }
        let none = minimal_violation(&GeneratorSet::new(u(2)), 4, DEFAULT_LIMIT).unwrap();
        assert!(matches!(none, MinimalViolation::None { .. }));
    }

    #[test]
    fn pixley_isomers_of_discriminator() {
        // the discriminator t(x,y,z) = z if x = y else x has chi 211
        let t = MultiOp::from_operation(u(3), 3, |a| if a[0] == a[1] { a[2] } else { a[0] }).unwrap();
        assert_eq!(chi_triple(&t).unwrap().unwrap().to_string(), "211");
        // f(x1,x2,x3) = t(x1,x3,x2) has chi 121 and the isomer undoes the swap
        let f = t.isomer(&[1, 3, 2]).unwrap();
        assert_eq!(chi_triple(&f).unwrap().unwrap().to_string(), "121");
        assert_eq!(pixley_isomer(&f).unwrap(), t);
        let g = t.isomer(&[2, 1, 3]).unwrap();
        assert_eq!(chi_triple(&g).unwrap().unwrap().to_string(), "222");
        assert_eq!(pixley_isomer(&g).unwrap(), t);
        assert!(pixley_isomer(&t).is_err());
    }

    #[test]
    fn majority_from_discriminator() {
        let t = MultiOp::from_operation(u(3), 3, |a| if a[0] == a[1] { a[2] } else { a[0] }).unwrap();
        let m = majority_from_pixley(&t).unwrap();
        assert!(is_majority(&m).unwrap());
        assert!(is_idempotent(&m));
        assert!(majority_from_pixley(&xor3()).is_err());
    }

    #[test]
    fn inverse_identities_and_fixed_first() {
        assert!(verify_inverse_identities(&xor3(), &xor3()).unwrap());
        assert!(verify_inverse_identities(&klein3(), &klein3()).unwrap());
        assert!(verify_inverse_identities(&xor3(), &median()).is_err());
        assert!(verify_fixes_first_iff_last_equal(&xor3()).unwrap());
        assert!(verify_fixes_first_iff_last_equal(&klein3()).unwrap());
        assert!(verify_fixes_first_iff_last_equal(&median()).is_err());
    }

    #[test]
    fn fixed_first_can_fail_for_other_minorities() {
        // a minority on three elements that fixes its first argument on
        // (0, 1, 2): the b = c direction holds, the converse does not
        let f = MultiOp::from_operation(u(3), 3, |t| {
            if t[1] == t[2] {
                t[0]
            } else if t[0] == t[1] {
                t[2]
            } else if t[0] == t[2] {
                t[1]
            } else {
                t[0]
            }
        })
        .unwrap();
        assert!(is_minority(&f).unwrap());
        assert!(!verify_fixes_first_iff_last_equal(&f).unwrap());
    }

    #[test]
    fn minority_analysis() {
        for g in [xor3(), klein3()] {
            let gs = gens([g.clone()]);
            let f3 = crate::compose::close_fixed_arity(&gs, 3, DEFAULT_LIMIT).unwrap();
            let f4 = crate::compose::close_fixed_arity(&gs, 4, DEFAULT_LIMIT).unwrap();
            let a = analyze_minority_clone(&f3, &f4).unwrap();
            assert_eq!(a.minority, g);
            assert_eq!(a.semiprojection4, None);
        }
        let gs = gens([median()]);
        let f3 = crate::compose::close_fixed_arity(&gs, 3, DEFAULT_LIMIT).unwrap();
        let f4 = crate::compose::close_fixed_arity(&gs, 4, DEFAULT_LIMIT).unwrap();
        assert!(matches!(analyze_minority_clone(&f3, &f4), Err(Error::Precondition(_))));
    }

    #[test]
    fn group_extraction() {
        let z2 = extract_boolean_group(&xor3(), 0).unwrap();
        assert_eq!(z2.table(), &[0, 1, 1, 0]);
        let shifted = extract_boolean_group(&xor3(), 1).unwrap();
        assert_eq!(shifted.zero(), 1);
        assert_eq!(shifted.table(), &[1, 0, 0, 1]);
        let klein = extract_boolean_group(&klein3(), 0).unwrap();
        assert_eq!(klein, BooleanGroup::from_xor(u(4)).unwrap());
        for zero in 0..4 {
            let g = extract_boolean_group(&klein3(), zero).unwrap();
            assert_eq!(g.sum3_op(), klein3());
        }
        assert!(extract_boolean_group(&median(), 0).is_err());
        assert_eq!(quaternary_term(&xor3()).unwrap(), MultiOp::projection(u(2), 4, 4).unwrap());
    }

    #[test]
    fn classify_examples() {
        let opts = ClassifyOptions::default();
        let neg = MultiOp::from_operation(u(2), 1, |t| 1 - t[0]).unwrap();
        assert_eq!(classify_five_type(&gens([neg]), opts).unwrap().tag, TypeTag::T1Unary);
        let and = MultiOp::from_operation(u(2), 2, |t| t[0] & t[1]).unwrap();
        let w = classify_five_type(&gens([and.clone()]), opts).unwrap();
        assert_eq!(w.tag, TypeTag::T2BinaryIdempotent);
        assert_eq!(w.witness, Some(and));
        let w = classify_five_type(&gens([xor3()]), opts).unwrap();
        assert_eq!(w.tag, TypeTag::T5BooleanGroup);
        assert_eq!(w.group, Some(BooleanGroup::z2()));
        let w = classify_five_type(&gens([median()]), opts).unwrap();
        assert_eq!(w.tag, TypeTag::T3Majority);
        let empty = MultiOp::empty(u(2), 1).unwrap();
        assert_eq!(classify_five_type(&gens([empty]), opts).unwrap().tag, TypeTag::T1Unary);
        let w = classify_five_type(&GeneratorSet::new(u(3)), opts).unwrap();
        assert_eq!(w.tag, TypeTag::Trivial);
        assert!(classify_five_type(&gens([xor3()]), ClassifyOptions { cap: 3, ..opts }).is_err());
    }

    #[test]
    fn klein_minority_is_type_five() {
        let w = classify_five_type(&gens([klein3()]), ClassifyOptions::default()).unwrap();
        assert_eq!(w.tag, TypeTag::T5BooleanGroup);
        assert_eq!(w.group.unwrap(), BooleanGroup::from_xor(u(4)).unwrap());
    }

    #[test]
    fn semiprojection_generators() {
        // non-projection semiprojection of arity 3 on three elements
        let f = MultiOp::from_operation(u(3), 3, |t| if t == [0, 1, 2] { 1 } else { t[0] }).unwrap();
        let w = classify_five_type(&gens([f]), ClassifyOptions::default()).unwrap();
        assert_eq!(w.tag, TypeTag::T4Semiprojection);
        // arity-4 semiprojection on five elements: minimal arity 4
        let f = MultiOp::from_operation(u(5), 4, |t| {
            if crate::classify::has_repeat(t) {
                t[0]
            } else {
                t[1]
            }
        })
        .unwrap();
        let w = classify_five_type(&gens([f.clone()]), ClassifyOptions::default()).unwrap();
        assert_eq!(w.tag, TypeTag::T4Semiprojection);
        assert!(w.provenance.contains(&Step::MinimalArity { arity: 4 }));
    }

    #[test]
    fn limit_gives_inconclusive() {
        // the minority analysis needs the 8-member arity-4 fragment
        let w = classify_five_type(&gens([xor3()]), ClassifyOptions { limit: 5, ..Default::default() }).unwrap();
        assert_eq!(w.tag, TypeTag::Inconclusive);
        assert!(w.provenance.contains(&Step::LimitHit { arity: 4 }));
    }
}
