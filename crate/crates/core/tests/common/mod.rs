#![allow(dead_code)]

use std::collections::BTreeSet;

use multiclone::algebra::{MultiOp, SubsetMask, Universe};
use multiclone::compose::{compose_refs, GeneratorSet};

pub fn u(k: usize) -> Universe {
    Universe::new(k).unwrap()
}

/// Closure of `Z ∪ Q` under every `π_ij` with `1 <= i, j <= cap`,
/// computed arity-by-arity in lockstep. Returns slices for arities 1..=cap.
/// Independent of the fixed-arity engine: any member, not only a generator,
/// may appear as the outer function.
pub fn naive_closure(gens: &GeneratorSet, cap: usize) -> Vec<BTreeSet<MultiOp>> {
    let k = gens.universe();
    let mut all: Vec<Vec<MultiOp>> = vec![Vec::new(); cap + 1];
    let mut seen: Vec<BTreeSet<MultiOp>> = vec![BTreeSet::new(); cap + 1];
    for n in 1..=cap {
        for p in MultiOp::projections(k, n).unwrap() {
            if seen[n].insert(p.clone()) {
                all[n].push(p);
            }
        }
    }
    for g in gens.ops() {
        if g.arity() <= cap && seen[g.arity()].insert(g.clone()) {
            all[g.arity()].push(g.clone());
        }
    }
    // members with index >= old[n] were added in the previous pass
    let mut old = vec![0usize; cap + 1];
    loop {
        let ends: Vec<usize> = all.iter().map(|v| v.len()).collect();
        if (1..=cap).all(|n| old[n] == ends[n]) {
            break;
        }
        let mut fresh: Vec<Vec<MultiOp>> = vec![Vec::new(); cap + 1];
        for i in 1..=cap {
            for fi in 0..ends[i] {
                let f = &all[i][fi];
                let f_new = fi >= old[i];
                for j in 1..=cap {
                    let mut picks = vec![0usize; i];
                    loop {
                        let args_new = picks.iter().any(|&p| p >= old[j]);
                        if f_new || args_new {
                            let args: Vec<&MultiOp> = picks.iter().map(|&p| &all[j][p]).collect();
                            let c = compose_refs(f, &args).unwrap();
                            if !seen[j].contains(&c) {
                                seen[j].insert(c.clone());
                                fresh[j].push(c);
                            }
                        }
                        let mut t = i;
                        let mut done = true;
                        while t > 0 {
                            t -= 1;
                            picks[t] += 1;
                            if picks[t] < ends[j] {
                                done = false;
                                break;
                            }
                            picks[t] = 0;
                        }
                        if done {
                            break;
                        }
                    }
                }
            }
        }
        old = ends;
        for n in 1..=cap {
            all[n].append(&mut fresh[n]);
        }
    }
    seen
}

/// Decodes `code` as a table of 2-bit masks on `{0, 1}`.
pub fn k2_table(arity: usize, code: u64) -> MultiOp {
    let len = 1 << arity;
    let table = (0..len).map(|i| SubsetMask::from_bits(((code >> (2 * i)) & 3) as u8)).collect();
    MultiOp::from_table(u(2), arity, table).unwrap()
}

/// Decodes `code` as an operation table on `{0, 1}`.
pub fn k2_operation(arity: usize, code: u64) -> MultiOp {
    MultiOp::from_operation(u(2), arity, |t| {
        let idx = u(2).index_of(t);
        ((code >> idx) & 1) as u8
    })
    .unwrap()
}

/// Composition straight from the definition: for every tuple `x`, the union
/// of `f(v)` over all `v` with `v_s ∈ g_s(x)`.
pub fn naive_compose(f: &MultiOp, gs: &[&MultiOp]) -> MultiOp {
    let k = f.universe();
    let n = gs[0].arity();
    MultiOp::from_fn(k, n, |x| {
        let choices: Vec<Vec<u8>> = gs.iter().map(|g| g.at(x).iter().collect()).collect();
        let mut out = SubsetMask::EMPTY;
        let mut v = vec![0u8; f.arity()];
        fn walk(f: &MultiOp, choices: &[Vec<u8>], v: &mut Vec<u8>, s: usize, out: &mut SubsetMask) {
            if s == choices.len() {
                *out = out.union(f.at(v));
                return;
            }
            for &c in &choices[s] {
                v[s] = c;
                walk(f, choices, v, s + 1, out);
            }
        }
        walk(f, &choices, &mut v, 0, &mut out);
        out
    })
    .unwrap()
}

/// Every table of the given arity on `{0, 1}` with arbitrary subset values.
pub fn all_k2_tables(arity: usize) -> impl Iterator<Item = MultiOp> {
    (0u64..1 << (2 << arity)).map(move |c| k2_table(arity, c))
}
