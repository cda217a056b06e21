//! Value types for multioperations on a finite universe `{0, .., k-1}`.
//!
//! A [`MultiOp`] of arity `n` is a dense table of `k^n` [`SubsetMask`]s,
//! indexed row-major with the first coordinate most significant. Operations,
//! partial operations and hyperoperations are not separate types: they are
//! read off the table by [`MultiOp::kind`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_UNIVERSE: usize = 8;
/// Hard upper bound on arity; tables stay below `8^6` entries.
pub const MAX_ARITY: usize = 6;
/// Arity cap used by the engines unless told otherwise.
pub const DEFAULT_ARITY_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Universe(u8);

impl Universe {
    pub fn new(size: usize) -> Result<Self> {
        if (2..=MAX_UNIVERSE).contains(&size) {
            Ok(Universe(size as u8))
        } else {
            Err(Error::InvalidUniverse(size))
        }
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn elements(self) -> impl Iterator<Item = u8> + Clone {
        0..self.0
    }

    /// The mask of the whole universe.
    pub fn full(self) -> SubsetMask {
        SubsetMask(((1u16 << self.0) - 1) as u8)
    }

    /// Number of table entries for the given arity, `k^n`.
    #[inline]
    pub fn table_len(self, arity: usize) -> usize {
        self.size().pow(arity as u32)
    }

    pub fn check_element(self, a: usize) -> Result<u8> {
        if a < self.size() {
            Ok(a as u8)
        } else {
            Err(Error::ElementOutOfRange {
                element: a,
                size: self.size(),
            })
        }
    }

    pub fn check_mask(self, m: SubsetMask) -> Result<SubsetMask> {
        if m.0 & !self.full().0 == 0 {
            Ok(m)
        } else {
            Err(Error::MaskOutOfRange {
                mask: m.0,
                size: self.size(),
            })
        }
    }

    /// Row-major index of a tuple, first coordinate most significant.
    #[inline]
    pub fn index_of(self, tuple: &[u8]) -> usize {
        let k = self.size();
        tuple.iter().fold(0, |acc, &a| acc * k + a as usize)
    }

    /// Inverse of [`Universe::index_of`]; fills `out` (whose length is the arity).
    #[inline]
    pub fn decode_index(self, mut index: usize, out: &mut [u8]) {
        let k = self.size();
        for slot in out.iter_mut().rev() {
            *slot = (index % k) as u8;
            index /= k;
        }
    }

    /// All `n`-tuples in index order.
    pub fn tuples(self, arity: usize) -> impl Iterator<Item = Vec<u8>> {
        (0..self.table_len(arity)).map(move |idx| {
            let mut t = vec![0; arity];
            self.decode_index(idx, &mut t);
            t
        })
    }
}

impl TryFrom<usize> for Universe {
    type Error = Error;
    fn try_from(size: usize) -> Result<Self> {
        Universe::new(size)
    }
}

impl From<Universe> for usize {
    fn from(u: Universe) -> usize {
        u.size()
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of the universe as a bit set: bit `a` is set iff `a` is a member.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct SubsetMask(u8);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    #[inline]
    pub const fn from_bits(bits: u8) -> Self {
        SubsetMask(bits)
    }

    #[inline]
    pub const fn singleton(a: u8) -> Self {
        SubsetMask(1 << a)
    }

    pub fn from_elements<I: IntoIterator<Item = u8>>(elements: I) -> Self {
        SubsetMask(elements.into_iter().fold(0, |m, a| m | (1 << a)))
    }

    #[inline]
    pub const fn bits(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub const fn contains(self, a: u8) -> bool {
        a < 8 && self.0 & (1 << a) != 0
    }

    /// The element of a singleton, `None` for any other size.
    #[inline]
    pub const fn as_singleton(self) -> Option<u8> {
        if self.0 != 0 && self.0 & (self.0 - 1) == 0 {
            Some(self.0.trailing_zeros() as u8)
        } else {
            None
        }
    }

    #[inline]
    pub const fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = u8> + Clone {
        let bits = self.0;
        (0..8u8).filter(move |&a| bits & (1 << a) != 0)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// The most specific label for a table: operations are both partial and
/// hyper, so they get their own tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Operation,
    Partial,
    Hyper,
    Multi,
}

impl OpKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OpKind::Operation => "operation",
            OpKind::Partial => "partial",
            OpKind::Hyper => "hyper",
            OpKind::Multi => "multi",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An `n`-ary multioperation `A^n -> P(A)`.
///
/// Equality, ordering and hashing are structural. Within one universe and
/// arity the derived ordering is the lexicographic order of table bytes,
/// which is the canonical order used by clone fragments.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiOp {
    universe: Universe,
    arity: u8,
    table: Box<[SubsetMask]>,
}

fn check_arity(arity: usize) -> Result<()> {
    if (1..=MAX_ARITY).contains(&arity) {
        Ok(())
    } else {
        Err(Error::InvalidArity(arity))
    }
}

impl MultiOp {
    pub fn from_table(universe: Universe, arity: usize, table: Vec<SubsetMask>) -> Result<Self> {
        check_arity(arity)?;
        let expected = universe.table_len(arity);
        if table.len() != expected {
            return Err(Error::TableLength {
                got: table.len(),
                expected,
            });
        }
        for &m in &table {
            universe.check_mask(m)?;
        }
        Ok(MultiOp {
            universe,
            arity: arity as u8,
            table: table.into_boxed_slice(),
        })
    }

    /// Builds a table by evaluating `f` on every tuple in index order.
    pub fn from_fn(universe: Universe, arity: usize, mut f: impl FnMut(&[u8]) -> SubsetMask) -> Result<Self> {
        check_arity(arity)?;
        let len = universe.table_len(arity);
        let mut tuple = vec![0u8; arity];
        let mut table = Vec::with_capacity(len);
        for idx in 0..len {
            universe.decode_index(idx, &mut tuple);
            table.push(universe.check_mask(f(&tuple))?);
        }
        Ok(MultiOp {
            universe,
            arity: arity as u8,
            table: table.into_boxed_slice(),
        })
    }

    /// Builds a singleton-valued table from an ordinary operation.
    pub fn from_operation(universe: Universe, arity: usize, mut f: impl FnMut(&[u8]) -> u8) -> Result<Self> {
        let k = universe.size();
        let mut bad = None;
        let op = MultiOp::from_fn(universe, arity, |t| {
            let v = f(t);
            if (v as usize) < k {
                SubsetMask::singleton(v)
            } else {
                bad.get_or_insert(v);
                SubsetMask::EMPTY
            }
        })?;
        match bad {
            Some(v) => Err(Error::ElementOutOfRange {
                element: v as usize,
                size: k,
            }),
            None => Ok(op),
        }
    }

    /// The projection `e^n_i` (coordinate `i` is 1-based).
    pub fn projection(universe: Universe, arity: usize, i: usize) -> Result<Self> {
        check_arity(arity)?;
        if i == 0 || i > arity {
            return Err(Error::CoordinateOutOfRange { coord: i, arity });
        }
        MultiOp::from_fn(universe, arity, |t| SubsetMask::singleton(t[i - 1]))
    }

    /// All `n` projections of arity `n`, in coordinate order.
    pub fn projections(universe: Universe, arity: usize) -> Result<Vec<Self>> {
        (1..=arity).map(|i| MultiOp::projection(universe, arity, i)).collect()
    }

    pub fn constant(universe: Universe, arity: usize, a: usize) -> Result<Self> {
        let a = universe.check_element(a)?;
        MultiOp::from_fn(universe, arity, |_| SubsetMask::singleton(a))
    }

    /// The multioperation whose every value is the empty set.
    pub fn empty(universe: Universe, arity: usize) -> Result<Self> {
        MultiOp::from_fn(universe, arity, |_| SubsetMask::EMPTY)
    }

    #[inline]
    pub fn universe(&self) -> Universe {
        self.universe
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    #[inline]
    pub fn table(&self) -> &[SubsetMask] {
        &self.table
    }

    /// Value at a tuple given by its row-major index.
    #[inline]
    pub fn at_index(&self, index: usize) -> SubsetMask {
        self.table[index]
    }

    /// Value at a tuple; the tuple is assumed valid.
    #[inline]
    pub fn at(&self, tuple: &[u8]) -> SubsetMask {
        self.table[self.universe.index_of(tuple)]
    }

    pub fn eval(&self, tuple: &[u8]) -> Result<SubsetMask> {
        if tuple.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: tuple.len(),
            });
        }
        for &a in tuple {
            self.universe.check_element(a as usize)?;
        }
        Ok(self.at(tuple))
    }

    pub fn kind(&self) -> OpKind {
        let some_empty = self.table.iter().any(|m| m.is_empty());
        let some_large = self.table.iter().any(|m| m.len() >= 2);
        match (some_empty, some_large) {
            (false, false) => OpKind::Operation,
            (true, false) => OpKind::Partial,
            (false, true) => OpKind::Hyper,
            (true, true) => OpKind::Multi,
        }
    }

    pub fn is_operation(&self) -> bool {
        self.table.iter().all(|m| m.len() == 1)
    }

    /// The variable permutation `g(x_1..x_n) = f(x_perm(1), .., x_perm(n))`
    /// with `perm` given 1-based.
    pub fn isomer(&self, perm: &[usize]) -> Result<Self> {
        let n = self.arity();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::BadPermutation(n));
        }
        for &p in perm {
            if p == 0 || p > n || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::BadPermutation(n));
            }
        }
        let mut inner = vec![0u8; n];
        MultiOp::from_fn(self.universe, n, |t| {
            for (slot, &p) in inner.iter_mut().zip(perm) {
                *slot = t[p - 1];
            }
            self.at(&inner)
        })
    }

    /// The minor `g(x_1..x_{n-1}) = f(x_1, .., x_{j-1}, x_i, x_j, .., x_{n-1})`
    /// for 1-based `i < j`: variable `j` is replaced by variable `i` and the
    /// later variables shift down.
    pub fn identify(&self, i: usize, j: usize) -> Result<Self> {
        let n = self.arity();
        if n < 2 {
            return Err(Error::Precondition(format!("identify needs arity >= 2, got {n}")));
        }
        if i == 0 || i >= j {
            return Err(Error::CoordinateOutOfRange { coord: i, arity: n });
        }
        if j > n {
            return Err(Error::CoordinateOutOfRange { coord: j, arity: n });
        }
        let mut inner = vec![0u8; n];
        MultiOp::from_fn(self.universe, n - 1, |t| {
            inner[..j - 1].copy_from_slice(&t[..j - 1]);
            inner[j - 1] = t[i - 1];
            inner[j..].copy_from_slice(&t[j - 1..]);
            self.at(&inner)
        })
    }

    /// All identification minors, keyed by the 1-based pair `(i, j)`.
    pub fn minors(&self) -> Result<Vec<((usize, usize), MultiOp)>> {
        let n = self.arity();
        let mut out = Vec::new();
        for j in 2..=n {
            for i in 1..j {
                out.push(((i, j), self.identify(i, j)?));
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for MultiOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiOp(k={}, n={}, [", self.universe, self.arity)?;
        for (i, m) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("])")
    }
}
