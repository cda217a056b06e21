//! Union-semantics composition and the fixed-arity closure engine.

use std::collections::HashSet;

use crate::algebra::{MultiOp, SubsetMask, Universe, MAX_ARITY};
use crate::error::{Error, Result};

/// Default cap on the number of members a closure may collect.
pub const DEFAULT_LIMIT: usize = 1_000_000;

/// `f(g_1, .., g_i)`: the value at `a` is the union of `f(u_1, .., u_i)` over
/// all choices `u_t` in `g_t(a)`. An empty `g_t(a)` makes the value empty.
pub fn compose(f: &MultiOp, gs: &[MultiOp]) -> Result<MultiOp> {
    let refs: Vec<&MultiOp> = gs.iter().collect();
    compose_refs(f, &refs)
}

pub fn compose_refs(f: &MultiOp, gs: &[&MultiOp]) -> Result<MultiOp> {
    if gs.len() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            got: gs.len(),
        });
    }
    let inner = gs[0].arity();
    for g in gs {
        if g.universe() != f.universe() {
            return Err(Error::UniverseMismatch(f.universe().size(), g.universe().size()));
        }
        if g.arity() != inner {
            return Err(Error::ArityMismatch {
                expected: inner,
                got: g.arity(),
            });
        }
    }
    Ok(compose_unchecked(f, gs))
}

/// Composition without shape checks; callers guarantee `gs.len() == f.arity()`
/// and that all `gs` share universe and arity.
pub(crate) fn compose_unchecked(f: &MultiOp, gs: &[&MultiOp]) -> MultiOp {
    let u = f.universe();
    let k = u.size();
    let inner = gs[0].arity();
    let len = u.table_len(inner);
    let outer = f.table();
    let mut table = Vec::with_capacity(len);
    let mut choices: Vec<SubsetMask> = vec![SubsetMask::EMPTY; gs.len()];
    let mut digits: Vec<u8> = vec![0; gs.len()];

    for idx in 0..len {
        let mut index = 0usize;
        let mut all_single = true;
        let mut any_empty = false;
        for (slot, g) in choices.iter_mut().zip(gs) {
            let m = g.at_index(idx);
            *slot = m;
            match m.as_singleton() {
                Some(a) => index = index * k + a as usize,
                None => {
                    all_single = false;
                    any_empty |= m.is_empty();
                }
            }
        }
        if any_empty {
            table.push(SubsetMask::EMPTY);
            continue;
        }
        if all_single {
            table.push(outer[index]);
            continue;
        }
        table.push(union_over_choices(outer, k, &choices, &mut digits));
    }
    MultiOp::from_table(u, inner, table).expect("composition of valid tables is valid")
}

/// Union of `outer[u]` over every `u` in the product of `choices`.
fn union_over_choices(outer: &[SubsetMask], k: usize, choices: &[SubsetMask], digits: &mut [u8]) -> SubsetMask {
    for (d, m) in digits.iter_mut().zip(choices) {
        *d = m.bits().trailing_zeros() as u8;
    }
    let mut acc = SubsetMask::EMPTY;
    loop {
        let index = digits.iter().fold(0usize, |i, &d| i * k + d as usize);
        acc = acc.union(outer[index]);
        // advance the odometer, least significant coordinate last
        let mut t = digits.len();
        loop {
            if t == 0 {
                return acc;
            }
            t -= 1;
            let bits = choices[t].bits();
            let next = bits & !((2u16 << digits[t]) - 1) as u8;
            if next != 0 {
                digits[t] = next.trailing_zeros() as u8;
                break;
            }
            digits[t] = bits.trailing_zeros() as u8;
        }
    }
}

/// A named multioperation, as declared in an operation file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedOp {
    pub name: String,
    pub op: MultiOp,
}

/// The generating set `Z` of a multiclone `[Z]`, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    universe: Universe,
    gens: Vec<NamedOp>,
}

impl GeneratorSet {
    pub fn new(universe: Universe) -> Self {
        GeneratorSet {
            universe,
            gens: Vec::new(),
        }
    }

    /// Builds a set from anonymous operations, naming them `g0, g1, ..`.
    pub fn from_ops(universe: Universe, ops: impl IntoIterator<Item = MultiOp>) -> Result<Self> {
        let mut set = GeneratorSet::new(universe);
        for op in ops {
            let name = format!("g{}", set.len());
            set.push(name, op)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, name: impl Into<String>, op: MultiOp) -> Result<()> {
        if op.universe() != self.universe {
            return Err(Error::UniverseMismatch(self.universe.size(), op.universe().size()));
        }
        let name = name.into();
        if self.gens.iter().any(|g| g.name == name) {
            return Err(Error::Precondition(format!("duplicate generator name `{name}`")));
        }
        self.gens.push(NamedOp { name, op });
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, op: MultiOp) -> Result<Self> {
        self.push(name, op)?;
        Ok(self)
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn named(&self) -> &[NamedOp] {
        &self.gens
    }

    pub fn ops(&self) -> impl Iterator<Item = &MultiOp> + '_ {
        self.gens.iter().map(|g| &g.op)
    }
}

/// The arity-`n` slice of a generated multiclone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CloneFragment {
    universe: Universe,
    arity: usize,
    members: Vec<MultiOp>,
    saturated: bool,
    horizon: Option<usize>,
}

impl CloneFragment {
    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Members in canonical order.
    pub fn members(&self) -> &[MultiOp] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    /// `None` when the fragment is the exact slice `[Z]^(n)`. For generator
    /// sets with set-valued entries it is `Some(h)`: the slice of the least
    /// family closed under composition among arities `1..=h`.
    pub fn horizon(&self) -> Option<usize> {
        self.horizon
    }

    pub fn contains(&self, op: &MultiOp) -> bool {
        self.members.binary_search(op).is_ok()
    }

    /// Members that are not projections, in canonical order.
    pub fn non_projections(&self) -> impl Iterator<Item = &MultiOp> + '_ {
        let projs = MultiOp::projections(self.universe, self.arity).expect("fragment arity is valid");
        self.members.iter().filter(move |m| !projs.contains(m))
    }

    /// Whether the fragment is exactly `Q^(n)`. Unsaturated fragments cannot
    /// decide this.
    pub fn equals_projections(&self) -> Result<bool> {
        if !self.saturated {
            return Err(Error::Unsaturated(self.arity));
        }
        Ok(self.members.len() == self.arity)
    }
}

/// Free-function form of [`CloneFragment::equals_projections`].
pub fn fragment_equals_projections(frag: &CloneFragment) -> Result<bool> {
    frag.equals_projections()
}

/// True when no generator has an entry with two or more elements. For such
/// sets composition is associative, so every term flattens to a generator
/// applied to members of the target arity.
pub fn is_choice_free(gens: &GeneratorSet) -> bool {
    gens.ops().all(|g| g.table().iter().all(|m| m.len() <= 1))
}

/// Computes the arity-`n` slice of the multiclone generated by `gens`.
///
/// For choice-free generator sets (operations and partial operations) this
/// is a semi-naive worklist fixpoint at the single arity `n`: starting from
/// the projections, every generator of arity `m` is applied to every
/// `m`-tuple of current members. When a generator has an empty entry, the
/// restriction `e^2_1(a, b)` (the value of `a` where `b` is nonempty, empty
/// elsewhere) joins the generators. Each round only visits tuples containing
/// a member found in the previous round.
///
/// When some generator has a set-valued entry, composition stops being
/// associative and generator-outer terms miss members. Those sets are closed
/// with [`close_lockstep`] up to the horizon `max(n, 2, largest generator
/// arity)`. Arity 2 is the least horizon that contains the restriction.
///
/// If a new member would push the count past `limit`, the partial fragment
/// is returned with `saturated = false`.
pub fn close_fixed_arity(gens: &GeneratorSet, arity: usize, limit: usize) -> Result<CloneFragment> {
    check_closure_args(gens, arity, limit)?;
    if is_choice_free(gens) {
        close_generator_outer(gens, arity, limit)
    } else {
        Ok(close_lockstep(gens, lockstep_horizon(gens, arity), limit)?.swap_remove(arity - 1))
    }
}

fn lockstep_horizon(gens: &GeneratorSet, arity: usize) -> usize {
    gens.ops().map(MultiOp::arity).fold(arity.max(2), usize::max)
}

/// The fixed-arity reduction on its own: only generators (and the
/// restriction, when needed) appear as outer functions. Exact for
/// choice-free sets; for set-valued generators it can miss members.
pub fn close_generator_outer(gens: &GeneratorSet, arity: usize, limit: usize) -> Result<CloneFragment> {
    check_closure_args(gens, arity, limit)?;
    let u = gens.universe();
    // Projections as outer functions are not identities when an argument is
    // empty somewhere: e^i_t(G) is G_t cut down to where every G_s is
    // nonempty. Iterated e^2_1 covers all of those.
    let restriction = gens
        .ops()
        .any(|g| g.table().iter().any(|m| m.is_empty()))
        .then(|| MultiOp::projection(u, 2, 1))
        .transpose()?;
    let outer: Vec<&MultiOp> = gens.ops().chain(restriction.as_ref()).collect();

    let mut members = MultiOp::projections(u, arity)?;
    members.sort();
    let mut index: HashSet<MultiOp> = members.iter().cloned().collect();
    let mut delta_start = 0;
    let mut saturated = true;

    'rounds: while delta_start < members.len() {
        let end = members.len();
        members[delta_start..end].sort();
        for &g in &outer {
            let m = g.arity();
            let mut picks = vec![0usize; m];
            for first_new in 0..m {
                let ranges = delta_ranges(m, first_new, delta_start, end);
                if !reset(&mut picks, &ranges) {
                    continue;
                }
                loop {
                    let args: Vec<&MultiOp> = picks.iter().map(|&p| &members[p]).collect();
                    let candidate = compose_unchecked(g, &args);
                    if !index.contains(&candidate) {
                        if members.len() >= limit {
                            saturated = false;
                            break 'rounds;
                        }
                        index.insert(candidate.clone());
                        members.push(candidate);
                    }
                    if !advance(&mut picks, &ranges) {
                        break;
                    }
                }
            }
        }
        delta_start = end;
    }

    members.sort();
    Ok(CloneFragment {
        universe: u,
        arity,
        members,
        saturated,
        horizon: None,
    })
}

fn check_closure_args(gens: &GeneratorSet, arity: usize, limit: usize) -> Result<()> {
    if !(1..=MAX_ARITY).contains(&arity) {
        return Err(Error::InvalidArity(arity));
    }
    if limit < arity {
        return Err(Error::Precondition(format!("limit {limit} is below arity {arity}")));
    }
    let u = gens.universe();
    for g in gens.ops() {
        if g.universe() != u {
            return Err(Error::UniverseMismatch(u.size(), g.universe().size()));
        }
    }
    Ok(())
}

/// Per-coordinate ranges for tuples whose first delta member sits at
/// `first_new`: earlier coordinates take old members, later ones anything.
fn delta_ranges(m: usize, first_new: usize, delta_start: usize, end: usize) -> Vec<(usize, usize)> {
    (0..m)
        .map(|t| match t.cmp(&first_new) {
            std::cmp::Ordering::Less => (0, delta_start),
            std::cmp::Ordering::Equal => (delta_start, end),
            std::cmp::Ordering::Greater => (0, end),
        })
        .collect()
}

/// Puts the odometer at its first position; `false` if some range is empty.
fn reset(picks: &mut [usize], ranges: &[(usize, usize)]) -> bool {
    if ranges.iter().any(|&(lo, hi)| lo >= hi) {
        return false;
    }
    for (p, &(lo, _)) in picks.iter_mut().zip(ranges) {
        *p = lo;
    }
    true
}

/// Closes `Z ∪ Q` under every composition `f(g_1, .., g_i)` where `f` is any
/// member of arity `i <= horizon` and the `g_t` are members of a common
/// arity `j <= horizon`. Returns the slices for arities `1..=horizon`.
///
/// Semi-naive: a pass only visits combinations where the outer member or
/// some argument was found in the previous pass. When any slice would grow
/// past `limit`, every returned slice is marked unsaturated.
pub fn close_lockstep(gens: &GeneratorSet, horizon: usize, limit: usize) -> Result<Vec<CloneFragment>> {
    check_closure_args(gens, horizon, limit)?;
    let u = gens.universe();
    if let Some(g) = gens.ops().find(|g| g.arity() > horizon) {
        return Err(Error::Precondition(format!(
            "generator of arity {} exceeds horizon {horizon}",
            g.arity()
        )));
    }
    let mut all: Vec<Vec<MultiOp>> = vec![Vec::new()];
    let mut index: Vec<HashSet<MultiOp>> = vec![HashSet::new()];
    for n in 1..=horizon {
        let mut projs = MultiOp::projections(u, n)?;
        projs.sort();
        index.push(projs.iter().cloned().collect());
        all.push(projs);
    }
    for g in gens.ops() {
        if index[g.arity()].insert(g.clone()) {
            all[g.arity()].push(g.clone());
        }
    }

    let mut old = vec![0usize; horizon + 1];
    let mut saturated = true;
    'passes: loop {
        let ends: Vec<usize> = all.iter().map(Vec::len).collect();
        if (1..=horizon).all(|n| old[n] == ends[n]) {
            break;
        }
        for n in 1..=horizon {
            all[n][old[n]..ends[n]].sort();
        }
        for i in 1..=horizon {
            for fi in 0..ends[i] {
                let f_is_new = fi >= old[i];
                for j in 1..=horizon {
                    let mut picks = vec![0usize; i];
                    // a new outer member meets every tuple; an old one only
                    // tuples holding a new argument
                    let splits: Vec<Vec<(usize, usize)>> = if f_is_new {
                        vec![vec![(0, ends[j]); i]]
                    } else {
                        (0..i).map(|p| delta_ranges(i, p, old[j], ends[j])).collect()
                    };
                    for ranges in &splits {
                        if !reset(&mut picks, ranges) {
                            continue;
                        }
                        loop {
                            let candidate = {
                                let args: Vec<&MultiOp> = picks.iter().map(|&p| &all[j][p]).collect();
                                compose_unchecked(&all[i][fi], &args)
                            };
                            if !index[j].contains(&candidate) {
                                if all[j].len() >= limit {
                                    saturated = false;
                                    break 'passes;
                                }
                                index[j].insert(candidate.clone());
                                all[j].push(candidate);
                            }
                            if !advance(&mut picks, ranges) {
                                break;
                            }
                        }
                    }
                }
            }
        }
        old = ends;
    }

    Ok(all
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(n, mut members)| {
            members.sort();
            CloneFragment {
                universe: u,
                arity: n,
                members,
                saturated,
                horizon: Some(horizon),
            }
        })
        .collect())
}

/// Odometer step over per-coordinate half-open ranges; `false` when exhausted.
fn advance(picks: &mut [usize], ranges: &[(usize, usize)]) -> bool {
    for t in (0..picks.len()).rev() {
        picks[t] += 1;
        if picks[t] < ranges[t].1 {
            return true;
        }
        picks[t] = ranges[t].0;
    }
    false
}

/// Fragments `[Z]^(1) .. [Z]^(cap)`. Set-valued generator sets are closed
/// once, in lockstep up to `max(cap, largest generator arity)`, so that all
/// returned slices come from one family.
pub fn close_up_to(gens: &GeneratorSet, cap: usize, limit: usize) -> Result<Vec<CloneFragment>> {
    let mut session = ClosureSession::new(gens, cap, limit)?;
    (1..=cap).map(|n| session.fragment(n).cloned()).collect()
}

/// Lazily computed fragments of one generator set, arities `1..=cap`.
pub struct ClosureSession<'a> {
    gens: &'a GeneratorSet,
    cap: usize,
    limit: usize,
    cache: Vec<Option<CloneFragment>>,
}

impl<'a> ClosureSession<'a> {
    pub fn new(gens: &'a GeneratorSet, cap: usize, limit: usize) -> Result<Self> {
        check_closure_args(gens, cap, limit)?;
        Ok(ClosureSession {
            gens,
            cap,
            limit,
            cache: vec![None; cap + 1],
        })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn fragment(&mut self, arity: usize) -> Result<&CloneFragment> {
        if arity == 0 || arity > self.cap {
            return Err(Error::InvalidArity(arity));
        }
        if self.cache[arity].is_none() {
            if is_choice_free(self.gens) {
                self.cache[arity] = Some(close_fixed_arity(self.gens, arity, self.limit)?);
            } else {
                for frag in close_lockstep(self.gens, lockstep_horizon(self.gens, self.cap), self.limit)? {
                    if frag.arity() <= self.cap {
                        let n = frag.arity();
                        self.cache[n] = Some(frag);
                    }
                }
            }
        }
        Ok(self.cache[arity].as_ref().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: usize) -> Universe {
        Universe::new(k).unwrap()
    }

    fn xor3() -> MultiOp {
        MultiOp::from_operation(u(2), 3, |t| t[0] ^ t[1] ^ t[2]).unwrap()
    }

    #[test]
    fn compose_with_projections_is_identity() {
        let f = MultiOp::from_operation(u(3), 2, |t| (t[0] * 2 + t[1]) % 3).unwrap();
        let projs = MultiOp::projections(u(3), 2).unwrap();
        assert_eq!(compose(&f, &projs).unwrap(), f);
    }

    #[test]
    fn outer_projection_selects() {
        let gs = vec![
            MultiOp::from_operation(u(2), 2, |t| t[0] & t[1]).unwrap(),
            MultiOp::empty(u(2), 2).unwrap(),
            MultiOp::from_table(u(2), 2, vec![u(2).full(); 4]).unwrap(),
        ];
        let nonempty = [gs[0].clone(), gs[2].clone(), gs[0].clone()];
        for t in 1..=3 {
            let e = MultiOp::projection(u(2), 3, t).unwrap();
            assert_eq!(compose(&e, &nonempty).unwrap(), nonempty[t - 1]);
            // an empty argument leaves no choice vector, even if ignored
            assert_eq!(compose(&e, &gs).unwrap(), MultiOp::empty(u(2), 2).unwrap());
        }
    }

    #[test]
    fn empty_argument_empties_value() {
        let args = vec![
            MultiOp::projection(u(2), 3, 1).unwrap(),
            MultiOp::projection(u(2), 3, 2).unwrap(),
            MultiOp::empty(u(2), 3).unwrap(),
        ];
        assert_eq!(compose(&xor3(), &args).unwrap(), MultiOp::empty(u(2), 3).unwrap());
    }

    #[test]
    fn union_over_all_choices() {
        // f(x, y) = {x + y mod 3}, both arguments always {0, 1}
        let f = MultiOp::from_operation(u(3), 2, |t| (t[0] + t[1]) % 3).unwrap();
        let g = MultiOp::from_table(u(3), 1, vec![SubsetMask::from_elements([0, 1]); 3]).unwrap();
        let h = compose(&f, &[g.clone(), g]).unwrap();
        assert!(h.table().iter().all(|&m| m == SubsetMask::from_elements([0, 1, 2])));
    }

    #[test]
    fn compose_shape_errors() {
        let f = xor3();
        let two = MultiOp::projections(u(2), 2).unwrap();
        assert!(compose(&f, &two).is_err());
        let mixed = vec![two[0].clone(), two[1].clone(), MultiOp::projection(u(2), 1, 1).unwrap()];
        assert!(compose(&f, &mixed).is_err());
        let other = vec![MultiOp::projection(u(3), 1, 1).unwrap(); 3];
        assert!(compose(&f, &other).is_err());
    }

    #[test]
    fn empty_generators_give_projections() {
        let gens = GeneratorSet::new(u(3));
        for n in 1..=4 {
            let frag = close_fixed_arity(&gens, n, DEFAULT_LIMIT).unwrap();
            assert!(frag.saturated());
            assert_eq!(frag.len(), n);
            assert!(frag.equals_projections().unwrap());
        }
    }

    #[test]
    fn all_empty_unary_generates_minimal_multiclone() {
        let gens = GeneratorSet::from_ops(u(2), [MultiOp::empty(u(2), 1).unwrap()]).unwrap();
        let frag = close_fixed_arity(&gens, 2, DEFAULT_LIMIT).unwrap();
        assert_eq!(frag.len(), 3);
        assert!(frag.contains(&MultiOp::empty(u(2), 2).unwrap()));
    }

    #[test]
    fn xor_minority_fragments() {
        let gens = GeneratorSet::from_ops(u(2), [xor3()]).unwrap();
        let f2 = close_fixed_arity(&gens, 2, DEFAULT_LIMIT).unwrap();
        assert!(fragment_equals_projections(&f2).unwrap());
        let f3 = close_fixed_arity(&gens, 3, DEFAULT_LIMIT).unwrap();
        assert!(!fragment_equals_projections(&f3).unwrap());
        assert!(f3.contains(&xor3()));
        assert_eq!(f3.non_projections().count(), 1);
    }

    #[test]
    fn limit_is_reported_not_raised() {
        let xor = MultiOp::from_operation(u(2), 2, |t| t[0] ^ t[1]).unwrap();
        let gens = GeneratorSet::from_ops(u(2), [xor]).unwrap();
        let frag = close_fixed_arity(&gens, 2, 2).unwrap();
        assert!(!frag.saturated());
        assert_eq!(frag.len(), 2);
        assert!(frag.equals_projections().is_err());
        assert!(close_fixed_arity(&gens, 3, 2).is_err());
    }

    #[test]
    fn generator_set_rejects_foreign_universe() {
        let mut gens = GeneratorSet::new(u(2));
        assert!(gens.push("a", MultiOp::projection(u(3), 1, 1).unwrap()).is_err());
        gens.push("a", MultiOp::projection(u(2), 1, 1).unwrap()).unwrap();
        assert!(gens.push("a", MultiOp::projection(u(2), 1, 1).unwrap()).is_err());
    }

    #[test]
    fn generators_are_members_of_their_arity() {
        let and = MultiOp::from_operation(u(3), 2, |t| t[0].min(t[1])).unwrap();
        let neg = MultiOp::from_operation(u(3), 1, |t| 2 - t[0]).unwrap();
        let gens = GeneratorSet::from_ops(u(3), [and.clone(), neg.clone()]).unwrap();
        assert!(close_fixed_arity(&gens, 2, DEFAULT_LIMIT).unwrap().contains(&and));
        assert!(close_fixed_arity(&gens, 1, DEFAULT_LIMIT).unwrap().contains(&neg));
    }

    #[test]
    fn reclosing_a_saturated_fragment_is_stable() {
        let maj = MultiOp::from_operation(u(3), 3, |t| {
            if t[0] == t[1] || t[0] == t[2] {
                t[0]
            } else if t[1] == t[2] {
                t[1]
            } else {
                t[0]
            }
        })
        .unwrap();
        let gens = GeneratorSet::from_ops(u(3), [maj]).unwrap();
        let frag = close_fixed_arity(&gens, 3, DEFAULT_LIMIT).unwrap();
        assert!(frag.saturated());
        let again = GeneratorSet::from_ops(u(3), frag.members().iter().cloned()).unwrap();
        assert_eq!(close_fixed_arity(&again, 3, DEFAULT_LIMIT).unwrap(), frag);
    }
}
