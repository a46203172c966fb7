//! Sieves: down-closed sets of objects below a fixed base object.
//!
//! Everything here is written against [`FiniteOrder`] so the same code serves
//! the divisor lattice and any extensionally ordered family that is claimed
//! to be isomorphic to it.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A finite partial order whose objects are labelled by integers.
pub trait FiniteOrder {
    /// All objects, in a fixed canonical order.
    fn objects(&self) -> &[u64];

    /// `a ≤ b`. Both arguments are assumed to be objects.
    fn le(&self, a: u64, b: u64) -> bool;

    fn is_object(&self, n: u64) -> bool {
        self.objects().contains(&n)
    }

    /// Objects below `n`, in canonical order.
    fn below(&self, n: u64) -> Vec<u64> {
        self.objects()
            .iter()
            .copied()
            .filter(|&x| self.le(x, n))
            .collect()
    }
}

/// A down-closed set of objects below `base`, members kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Sieve {
    base: u64,
    members: Vec<u64>,
}

impl Sieve {
    /// Validates `members` as a sieve on `base` in `order`.
    pub fn new<P: FiniteOrder + ?Sized>(order: &P, base: u64, members: &[u64]) -> Result<Sieve> {
        if !order.is_object(base) {
            return Err(Error::NotBelow { value: base, base });
        }
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            if !order.is_object(m) || !order.le(m, base) {
                return Err(Error::NotBelow { value: m, base });
            }
        }
        for &m in &members {
            for t in order.below(m) {
                if members.binary_search(&t).is_err() {
                    return Err(Error::NotDownClosed {
                        base,
                        member: m,
                        missing: t,
                    });
                }
            }
        }
        Ok(Sieve { base, members })
    }

    /// The maximal sieve `↓n`.
    pub fn maximal<P: FiniteOrder + ?Sized>(order: &P, n: u64) -> Sieve {
        let mut members = order.below(n);
        members.sort_unstable();
        Sieve { base: n, members }
    }

    pub fn empty(base: u64) -> Sieve {
        Sieve {
            base,
            members: Vec::new(),
        }
    }

    /// Caller guarantees `members` is sorted, deduplicated and down-closed.
    pub(crate) fn from_sorted_unchecked(base: u64, members: Vec<u64>) -> Sieve {
        Sieve { base, members }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, k: u64) -> bool {
        self.members.binary_search(&k).is_ok()
    }

    /// A sieve is maximal exactly when it contains its own base.
    pub fn is_maximal(&self) -> bool {
        self.contains(self.base)
    }

    /// `S ∩ ↓k` as a sieve on `k`.
    pub fn pullback<P: FiniteOrder + ?Sized>(&self, order: &P, k: u64) -> Result<Sieve> {
        if !order.is_object(k) || !order.le(k, self.base) {
            return Err(Error::NotBelow {
                value: k,
                base: self.base,
            });
        }
        Ok(self.pullback_unchecked(order, k))
    }

    pub(crate) fn pullback_unchecked<P: FiniteOrder + ?Sized>(&self, order: &P, k: u64) -> Sieve {
        Sieve {
            base: k,
            members: self
                .members
                .iter()
                .copied()
                .filter(|&m| order.le(m, k))
                .collect(),
        }
    }

    /// Elements of the sieve with nothing above them inside it.
    pub fn maximal_members<P: FiniteOrder + ?Sized>(&self, order: &P) -> Vec<u64> {
        self.members
            .iter()
            .copied()
            .filter(|&m| {
                !self
                    .members
                    .iter()
                    .any(|&other| other != m && order.le(m, other))
            })
            .collect()
    }
}

impl fmt::Display for Sieve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Every sieve on `n`, sorted canonically.
///
/// Objects below `n` are visited along a linear extension; an object may be
/// added only once everything strictly below it is already in, so each
/// branch of the recursion is a distinct down-set.
pub fn enumerate_sieves<P: FiniteOrder + ?Sized>(order: &P, n: u64) -> Vec<Sieve> {
    let mut below = order.below(n);
    // |↓x| strictly increases along the order, so sorting by it is a linear extension
    let sizes: Vec<usize> = below.iter().map(|&x| order.below(x).len()).collect();
    let mut keyed: Vec<(usize, u64)> = sizes.into_iter().zip(below.iter().copied()).collect();
    keyed.sort_unstable();
    below = keyed.into_iter().map(|(_, x)| x).collect();

    let strictly_below: Vec<Vec<usize>> = below
        .iter()
        .map(|&x| {
            below
                .iter()
                .enumerate()
                .filter(|&(_, &y)| y != x && order.le(y, x))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut chosen = vec![false; below.len()];
    fn rec(
        i: usize,
        below: &[u64],
        strictly_below: &[Vec<usize>],
        chosen: &mut Vec<bool>,
        base: u64,
        out: &mut Vec<Sieve>,
    ) {
        if i == below.len() {
            let mut members: Vec<u64> = below
                .iter()
                .zip(chosen.iter())
                .filter_map(|(&x, &c)| c.then_some(x))
                .collect();
            members.sort_unstable();
            out.push(Sieve { base, members });
            return;
        }
        rec(i + 1, below, strictly_below, chosen, base, out);
        if strictly_below[i].iter().all(|&j| chosen[j]) {
            chosen[i] = true;
            rec(i + 1, below, strictly_below, chosen, base, out);
            chosen[i] = false;
        }
    }
    rec(0, &below, &strictly_below, &mut chosen, n, &mut out);
    out.sort();
    out
}

/// `D` is dense below `n`: every `m ≤ n` lies above some member of `D`.
pub fn is_dense_below<P: FiniteOrder + ?Sized>(order: &P, sieve: &Sieve, n: u64) -> bool {
    order
        .below(n)
        .into_iter()
        .all(|m| sieve.members().iter().any(|&k| order.le(k, m)))
}
