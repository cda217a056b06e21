//! Decision predicates for the named operation classes.
//!
//! All identity checks demand singleton values on the checked patterns:
//! `f(x, .., x) ≈ {x}` is equality with the singleton, not containment.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{MultiOp, SubsetMask};
use crate::error::{Error, Result};

/// The projection `f` equals, as a 1-based coordinate.
pub fn is_projection(f: &MultiOp) -> Option<usize> {
    let u = f.universe();
    let n = f.arity();
    let mut tuple = vec![0u8; n];
    (0..n).find(|&i| {
        (0..f.table().len()).all(|idx| {
            u.decode_index(idx, &mut tuple);
            f.at_index(idx) == SubsetMask::singleton(tuple[i])
        })
    })
    .map(|i| i + 1)
}

pub fn is_idempotent(f: &MultiOp) -> bool {
    let n = f.arity();
    f.universe()
        .elements()
        .all(|a| f.at(&vec![a; n]) == SubsetMask::singleton(a))
}

fn require_ternary(f: &MultiOp) -> Result<()> {
    if f.arity() == 3 {
        Ok(())
    } else {
        Err(Error::ArityMismatch {
            expected: 3,
            got: f.arity(),
        })
    }
}

/// Expected element for `(x, y)`, or `None` when the pattern is unconstrained.
type Pattern = Option<fn(u8, u8) -> u8>;

/// Checks `f(x,x,y)`, `f(x,y,x)`, `f(y,x,x)` against the singletons picked by
/// `want`, which maps `(x, y)` to the expected element for each pattern.
fn ternary_patterns(f: &MultiOp, want: [Pattern; 3]) -> Result<bool> {
    require_ternary(f)?;
    let u = f.universe();
    for x in u.elements() {
        for y in u.elements() {
            let patterns = [[x, x, y], [x, y, x], [y, x, x]];
            for (pat, w) in patterns.iter().zip(want) {
                if let Some(w) = w {
                    if f.at(pat) != SubsetMask::singleton(w(x, y)) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

const REPEATED: fn(u8, u8) -> u8 = |x, _| x;
const ODD: fn(u8, u8) -> u8 = |_, y| y;

/// `f(x,x,y) ≈ f(x,y,x) ≈ f(y,x,x) ≈ {x}`.
pub fn is_majority(f: &MultiOp) -> Result<bool> {
    ternary_patterns(f, [Some(REPEATED), Some(REPEATED), Some(REPEATED)])
}

/// `f(x,x,y) ≈ f(x,y,x) ≈ f(y,x,x) ≈ {y}`.
pub fn is_minority(f: &MultiOp) -> Result<bool> {
    ternary_patterns(f, [Some(ODD), Some(ODD), Some(ODD)])
}

/// `f(x,x,y) ≈ {y} ≈ f(y,x,x)`.
pub fn is_maltsev(f: &MultiOp) -> Result<bool> {
    ternary_patterns(f, [Some(ODD), None, Some(ODD)])
}

/// Mal'tsev with additionally `f(x,y,x) ≈ {x}`.
pub fn is_pixley(f: &MultiOp) -> Result<bool> {
    ternary_patterns(f, [Some(ODD), Some(REPEATED), Some(ODD)])
}

/// Coordinates `i` such that every tuple with a repeated entry maps to `{a_i}`.
fn semiprojection_coordinates(f: &MultiOp) -> Vec<usize> {
    let u = f.universe();
    let n = f.arity();
    let mut tuple = vec![0u8; n];
    let mut candidates: Vec<bool> = vec![true; n];
    for idx in 0..f.table().len() {
        u.decode_index(idx, &mut tuple);
        if !has_repeat(&tuple) {
            continue;
        }
        let v = f.at_index(idx);
        for (i, ok) in candidates.iter_mut().enumerate() {
            *ok = *ok && v == SubsetMask::singleton(tuple[i]);
        }
        if !candidates.contains(&true) {
            break;
        }
    }
    candidates
        .iter()
        .enumerate()
        .filter(|(_, &ok)| ok)
        .map(|(i, _)| i + 1)
        .collect()
}

pub(crate) fn has_repeat(tuple: &[u8]) -> bool {
    let mut seen = 0u8;
    for &a in tuple {
        if seen & (1 << a) != 0 {
            return true;
        }
        seen |= 1 << a;
    }
    false
}

/// The coordinate on which `f` is a semiprojection, if any (arity >= 3).
/// Projections count as degenerate semiprojections.
pub fn is_semiprojection(f: &MultiOp) -> Result<Option<usize>> {
    if f.arity() < 3 {
        return Err(Error::Precondition(format!(
            "semiprojections have arity >= 3, got {}",
            f.arity()
        )));
    }
    let coords = semiprojection_coordinates(f);
    // (a, a, b, ..) with a != b separates every pair of coordinates
    assert!(coords.len() <= 1, "semiprojection coordinate tie: {coords:?}");
    Ok(coords.first().copied())
}

/// Which projections the three ternary identification minors equal:
/// `f(x1,x1,x2) ≈ x_a`, `f(x1,x2,x1) ≈ x_b`, `f(x1,x2,x2) ≈ x_c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChiTriple {
    pub a: u8,
    pub b: u8,
    pub c: u8,
}

impl ChiTriple {
    pub fn new(a: u8, b: u8, c: u8) -> Result<Self> {
        if [a, b, c].iter().all(|v| (1..=2).contains(v)) {
            Ok(ChiTriple { a, b, c })
        } else {
            Err(Error::Precondition(format!("chi digits must be 1 or 2, got {a}{b}{c}")))
        }
    }

    /// All eight triples in lexicographic order.
    pub fn all() -> impl Iterator<Item = ChiTriple> {
        (0..8u8).map(|bits| ChiTriple {
            a: 1 + (bits >> 2 & 1),
            b: 1 + (bits >> 1 & 1),
            c: 1 + (bits & 1),
        })
    }
}

impl fmt::Display for ChiTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.a, self.b, self.c)
    }
}

impl Serialize for ChiTriple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TernaryCase {
    Semiprojection,
    Majority,
    Minority,
    Pixley,
    Case121,
    Case222,
}

pub fn chi_triple(f: &MultiOp) -> Result<Option<ChiTriple>> {
    require_ternary(f)?;
    let digit = |i, j| -> Result<Option<u8>> { Ok(is_projection(&f.identify(i, j)?).map(|p| p as u8)) };
    let (Some(a), Some(b), Some(c)) = (digit(1, 2)?, digit(1, 3)?, digit(2, 3)?) else {
        return Ok(None);
    };
    Ok(Some(ChiTriple { a, b, c }))
}

pub fn classify_chi(t: ChiTriple) -> TernaryCase {
    match (t.a, t.b, t.c) {
        (1, 1, 1) | (1, 2, 2) | (2, 1, 2) => TernaryCase::Semiprojection,
        (1, 1, 2) => TernaryCase::Majority,
        (2, 2, 1) => TernaryCase::Minority,
        (2, 1, 1) => TernaryCase::Pixley,
        (1, 2, 1) => TernaryCase::Case121,
        (2, 2, 2) => TernaryCase::Case222,
        _ => unreachable!("chi digits are 1 or 2"),
    }
}

/// Outcome of the minors-to-semiprojection check on one table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SwierczkowskiOutcome {
    /// `f` is a semiprojection on this 1-based coordinate.
    Semiprojection(usize),
    /// A repeated-entry tuple where `f` disagrees with the coordinate the
    /// minors point at; finding one refutes the implication.
    Counterexample(Vec<u8>),
}

/// For `n >= 4` with all identification minors projections, finds the
/// semiprojection coordinate, or the tuple that refutes it.
pub fn swierczkowski_check(f: &MultiOp) -> Result<SwierczkowskiOutcome> {
    let n = f.arity();
    if n < 4 {
        return Err(Error::Precondition(format!("the check needs arity >= 4, got {n}")));
    }
    let mut minor_proj = Vec::new();
    for ((i, j), m) in f.minors()? {
        match is_projection(&m) {
            Some(p) => minor_proj.push(((i, j), p)),
            None => {
                let u = f.universe();
                let offending = u
                    .tuples(n - 1)
                    .find(|t| (1..=n - 1).all(|p| m.at(t) != SubsetMask::singleton(t[p - 1])))
                    .map(|t| {
                        let mut full = t[..j - 1].to_vec();
                        full.push(t[i - 1]);
                        full.extend_from_slice(&t[j - 1..]);
                        full
                    });
                return Err(Error::Precondition(format!(
                    "minor identifying x{i} and x{j} is not a projection (first non-projection value at {offending:?})"
                )));
            }
        }
    }
    // the (1,2) minor points at p; p >= 2 is original coordinate p + 1, and
    // p = 1 means x1 or x2, which the (3,4) minor resolves
    let lookup = |key| minor_proj.iter().find(|(k, _)| *k == key).map(|&(_, p)| p).unwrap();
    let coord = match lookup((1, 2)) {
        1 => lookup((3, 4)),
        p => p + 1,
    };
    let u = f.universe();
    let mut tuple = vec![0u8; n];
    for idx in 0..f.table().len() {
        u.decode_index(idx, &mut tuple);
        if has_repeat(&tuple) && f.at_index(idx) != SubsetMask::singleton(tuple[coord - 1]) {
            return Ok(SwierczkowskiOutcome::Counterexample(tuple));
        }
    }
    Ok(SwierczkowskiOutcome::Semiprojection(coord))
}

/// Invariance under every permutation of the variables. Adjacent
/// transpositions generate the symmetric group, so those suffice.
pub fn is_totally_symmetric(f: &MultiOp) -> bool {
    let n = f.arity();
    (1..n).all(|t| {
        let mut perm: Vec<usize> = (1..=n).collect();
        perm.swap(t - 1, t);
        f.isomer(&perm).expect("adjacent transposition is a permutation") == *f
    })
}
