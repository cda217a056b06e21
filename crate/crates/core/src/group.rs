//! Boolean groups on the universe and the clone `F_G` of all operations
//! `a + x_{i_1} + .. + x_{i_r}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::{MultiOp, SubsetMask, Universe};
use crate::compose::GeneratorSet;
use crate::error::{Error, Result};

/// A group `<A; +, zero>` with `a + a = zero` for every `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BooleanGroup {
    universe: Universe,
    zero: u8,
    /// Row-major `k x k` addition table.
    add: Vec<u8>,
}

/// The first axiom a candidate table breaks, with its witnessing elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub elements: Vec<u8>,
}

impl BooleanGroup {
    /// Validates every axiom; the violation names the first failure.
    pub fn new(universe: Universe, zero: u8, add: Vec<u8>) -> Result<Self, AxiomViolation> {
        let k = universe.size();
        if add.len() != k * k || zero as usize >= k || add.iter().any(|&v| v as usize >= k) {
            return Err(AxiomViolation {
                axiom: "table shape",
                elements: vec![],
            });
        }
        let g = BooleanGroup { universe, zero, add };
        g.first_violation().map_or(Ok(g), Err)
    }

    fn first_violation(&self) -> Option<AxiomViolation> {
        let u = self.universe;
        let bad = |axiom, elements: Vec<u8>| Some(AxiomViolation { axiom, elements });
        for a in u.elements() {
            if self.add(a, self.zero) != a {
                return bad("neutral element", vec![a]);
            }
            if self.add(a, a) != self.zero {
                return bad("a + a = 0", vec![a]);
            }
            for b in u.elements() {
                if self.add(a, b) != self.add(b, a) {
                    return bad("commutativity", vec![a, b]);
                }
                for c in u.elements() {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return bad("associativity", vec![a, b, c]);
                    }
                }
            }
        }
        None
    }

    /// `Z/2Z` on `{0, 1}` with neutral element 0.
    pub fn z2() -> Self {
        BooleanGroup::from_xor(Universe::new(2).unwrap()).unwrap()
    }

    /// Bitwise xor on `{0, .., k-1}`; a group only when `k` is a power of two.
    pub fn from_xor(universe: Universe) -> Result<Self> {
        let k = universe.size();
        let add = (0..k).flat_map(|a| (0..k).map(move |b| (a ^ b) as u8)).collect();
        BooleanGroup::new(universe, 0, add)
            .map_err(|v| Error::Precondition(format!("xor on {k} elements breaks {}", v.axiom)))
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn zero(&self) -> u8 {
        self.zero
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.universe.size() + b as usize]
    }

    pub fn table(&self) -> &[u8] {
        &self.add
    }

    /// `a + x_{i} + ..` summed over a tuple.
    pub fn sum<I: IntoIterator<Item = u8>>(&self, terms: I) -> u8 {
        terms.into_iter().fold(self.zero, |acc, x| self.add(acc, x))
    }

    /// The binary operation `x + y` as a table.
    pub fn add_op(&self) -> MultiOp {
        MultiOp::from_operation(self.universe, 2, |t| self.add(t[0], t[1])).unwrap()
    }

    /// The ternary term operation `x + y + z`.
    pub fn sum3_op(&self) -> MultiOp {
        MultiOp::from_operation(self.universe, 3, |t| self.sum(t.iter().copied())).unwrap()
    }

    /// The operation `a + sum_{i in coords} x_i` of the given arity
    /// (coordinates 1-based).
    pub fn affine_op(&self, arity: usize, a: u8, coords: &BTreeSet<usize>) -> Result<MultiOp> {
        self.universe.check_element(a as usize)?;
        if let Some(&c) = coords.iter().find(|&&c| c == 0 || c > arity) {
            return Err(Error::CoordinateOutOfRange { coord: c, arity });
        }
        MultiOp::from_operation(self.universe, arity, |t| {
            coords.iter().fold(a, |acc, &i| self.add(acc, t[i - 1]))
        })
    }

    /// All `k * 2^n` members of `F_G` at arity `n`, in canonical order.
    pub fn fg_slice(&self, arity: usize) -> Result<Vec<MultiOp>> {
        let mut out = Vec::with_capacity(self.universe.size() << arity);
        for a in self.universe.elements() {
            for subset in 0u32..1 << arity {
                let coords = (1..=arity).filter(|&i| subset & (1 << (i - 1)) != 0).collect();
                out.push(self.affine_op(arity, a, &coords)?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Generators of `F_G`: the binary `+` followed by every unary constant.
pub fn fg_generators(group: &BooleanGroup) -> GeneratorSet {
    let u = group.universe();
    let mut gens = GeneratorSet::new(u);
    gens.push("add", group.add_op()).unwrap();
    for a in u.elements() {
        gens.push(format!("c{a}"), MultiOp::constant(u, 1, a as usize).unwrap()).unwrap();
    }
    gens
}

/// The unique `(a, I)` with `f(x) = a + sum_{i in I} x_i`, or `None` if `f`
/// is not of that form. `I` holds 1-based coordinates.
pub fn fg_membership(group: &BooleanGroup, f: &MultiOp) -> Result<Option<(u8, BTreeSet<usize>)>> {
    if f.universe() != group.universe() {
        return Err(Error::UniverseMismatch(group.universe().size(), f.universe().size()));
    }
    if !f.is_operation() {
        return Err(Error::NotAnOperation(f.kind().as_str()));
    }
    let n = f.arity();
    let u = group.universe();
    let single = |m: SubsetMask| m.as_singleton().unwrap();
    let mut probe = vec![group.zero(); n];
    let a = single(f.at(&probe));
    let mut coords = BTreeSet::new();
    for i in 0..n {
        // any nonzero probe pins whether coordinate i occurs
        let x = u.elements().find(|&x| x != group.zero()).unwrap();
        probe[i] = x;
        if single(f.at(&probe)) != a {
            coords.insert(i + 1);
        }
        probe[i] = group.zero();
    }
    let matches = u
        .tuples(n)
        .all(|t| single(f.at(&t)) == coords.iter().fold(a, |acc, &i| group.add(acc, t[i - 1])));
    Ok(matches.then_some((a, coords)))
}

/// Every Boolean group table on `{0, .., k-1}`, deduplicated and sorted.
///
/// Empty unless `k` is a power of two. Otherwise each bijection onto the
/// bit vectors of length `log2 k` transports xor; tables are kept once.
pub fn enumerate_boolean_groups(universe: Universe) -> Vec<BooleanGroup> {
    let k = universe.size();
    if !k.is_power_of_two() {
        return Vec::new();
    }
    let mut found = BTreeSet::new();
    let mut labels: Vec<u8> = (0..k as u8).collect();
    let mut inverse = vec![0u8; k];
    permutations(&mut labels, 0, &mut |code| {
        // element a is encoded as code[a]
        for (a, &c) in code.iter().enumerate() {
            inverse[c as usize] = a as u8;
        }
        let add = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .map(|(a, b)| inverse[(code[a] ^ code[b]) as usize])
            .collect();
        let zero = inverse[0];
        found.insert(BooleanGroup::new(universe, zero, add).expect("transported xor is a Boolean group"));
    });
    found.into_iter().collect()
}

fn permutations(items: &mut [u8], start: usize, visit: &mut impl FnMut(&[u8])) {
    if start == items.len() {
        visit(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, visit);
        items.swap(start, i);
    }
}
