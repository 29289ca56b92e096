//! Finite posets over dense indices `0..n`.
//!
//! The order is stored as two strict reachability matrices (`below[y]` is the
//! set of `x < y`, `above[x]` the set of `y > x`), so comparisons and
//! up/down-set queries are single bit lookups.

mod dot;
mod iso;
mod ops;
mod stats;

use std::collections::BinaryHeap;
use std::cmp::Reverse;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dot::to_dot;
pub use iso::{is_isomorphic, IsoOptions};
pub use stats::{basic_stats, max_antichain, BasicStats};

/// How the pair list passed to [`Poset::build`] is to be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    /// Hasse diagram; the order is its transitive closure.
    Covers,
    /// Strict comparabilities, closed transitively on input.
    Leq,
}

/// Hasse diagram as `(lower, upper)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverList {
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone)]
pub struct Poset {
    n: usize,
    below: Vec<FixedBitSet>,
    above: Vec<FixedBitSet>,
    labels: Option<Vec<String>>,
    /// Position of each element in the canonical linear extension.
    rank: Vec<usize>,
    linear_extension: Vec<usize>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.below == other.below && self.labels == other.labels
    }
}

impl Eq for Poset {}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("covers", &self.transitive_reduction().pairs)
            .finish()
    }
}

pub(crate) fn bitset(n: usize) -> FixedBitSet {
    FixedBitSet::with_capacity(n)
}

impl Poset {
    /// Builds a poset from a pair list. Both kinds are closed transitively;
    /// any directed cycle (including a self-loop) is rejected.
    pub fn build(
        n: usize,
        _kind: RelationKind,
        pairs: &[(usize, usize)],
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::InvalidInput(format!(
                    "{} labels for {} elements",
                    l.len(),
                    n
                )));
            }
        }
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in pairs {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, n });
                }
            }
            if a == b {
                return Err(Error::CyclicRelation(a));
            }
            succ[a].push(b);
            indeg[b] += 1;
        }
        // Kahn's algorithm, smallest index first.
        let mut heap: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(v)) = heap.pop() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    heap.push(Reverse(w));
                }
            }
        }
        if order.len() < n {
            let culprit = (0..n).find(|&v| indeg[v] > 0).unwrap_or(0);
            return Err(Error::CyclicRelation(culprit));
        }
        let mut above = vec![bitset(n); n];
        for &v in order.iter().rev() {
            let mut acc = bitset(n);
            for &w in &succ[v] {
                acc.insert(w);
                acc.union_with(&above[w]);
            }
            above[v] = acc;
        }
        Ok(Self::from_above(above, labels))
    }

    /// Builds from a strict order predicate. The predicate must already be a
    /// strict order; it is closed transitively and checked for cycles.
    pub fn from_fn(n: usize, labels: Option<Vec<String>>, lt: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && lt(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Self::build(n, RelationKind::Leq, &pairs, labels)
    }

    /// `above` must be a transitively closed strict order.
    pub(crate) fn from_above(above: Vec<FixedBitSet>, labels: Option<Vec<String>>) -> Self {
        let n = above.len();
        let mut below = vec![bitset(n); n];
        for (x, row) in above.iter().enumerate() {
            for y in row.ones() {
                below[y].insert(x);
            }
        }
        let mut remaining: Vec<usize> = below.iter().map(|b| b.count_ones(..)).collect();
        let mut heap: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&v| remaining[v] == 0).map(Reverse).collect();
        let mut linear_extension = Vec::with_capacity(n);
        while let Some(Reverse(v)) = heap.pop() {
            linear_extension.push(v);
            for w in above[v].ones() {
                remaining[w] -= 1;
                if remaining[w] == 0 {
                    heap.push(Reverse(w));
                }
            }
        }
        debug_assert_eq!(linear_extension.len(), n, "relation is not acyclic");
        let mut rank = vec![0; n];
        for (pos, &v) in linear_extension.iter().enumerate() {
            rank[v] = pos;
        }
        Self {
            n,
            below,
            above,
            labels,
            rank,
            linear_extension,
        }
    }

    pub fn empty() -> Self {
        Self::from_above(Vec::new(), None)
    }

    pub fn chain(n: usize) -> Self {
        let above = (0..n)
            .map(|x| {
                let mut b = bitset(n);
                b.insert_range(x + 1..n);
                b
            })
            .collect();
        Self::from_above(above, None)
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_above(vec![bitset(n); n], None)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Strict order `x < y`.
    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.above[x].contains(y)
    }

    /// Reflexive order `x <= y`.
    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        x == y || self.above[x].contains(y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.le(y, x)
    }

    /// `{z : z < x}`.
    #[inline]
    pub fn strict_below(&self, x: usize) -> &FixedBitSet {
        &self.below[x]
    }

    /// `{z : x < z}`.
    #[inline]
    pub fn strict_above(&self, x: usize) -> &FixedBitSet {
        &self.above[x]
    }

    /// `{z : z <= x}`.
    pub fn down(&self, x: usize) -> FixedBitSet {
        let mut s = self.below[x].clone();
        s.insert(x);
        s
    }

    /// `{z : x <= z}`.
    pub fn up(&self, x: usize) -> FixedBitSet {
        let mut s = self.above[x].clone();
        s.insert(x);
        s
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Self {
        if let Some(l) = &labels {
            assert_eq!(l.len(), self.n, "label count must match element count");
        }
        self.labels = labels;
        self
    }

    /// Linear extension by repeated removal of the smallest-index minimal
    /// element.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear_extension
    }

    #[inline]
    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    pub fn minimals(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.below[x].is_clear()).collect()
    }

    pub fn maximals(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.above[x].is_clear()).collect()
    }

    pub fn least(&self) -> Option<usize> {
        match self.minimals().as_slice() {
            [m] if self.above[*m].count_ones(..) + 1 == self.n => Some(*m),
            _ => None,
        }
    }

    pub fn greatest(&self) -> Option<usize> {
        match self.maximals().as_slice() {
            [m] if self.below[*m].count_ones(..) + 1 == self.n => Some(*m),
            _ => None,
        }
    }

    /// Every strict comparability `(x, y)` with `x < y`, sorted.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            out.extend(self.above[x].ones().map(|y| (x, y)));
        }
        out
    }

    /// The Hasse diagram: pairs `x < y` with nothing strictly between.
    pub fn transitive_reduction(&self) -> CoverList {
        let mut pairs = Vec::new();
        for x in 0..self.n {
            for y in self.above[x].ones() {
                if self.above[x].is_disjoint(&self.below[y]) {
                    pairs.push((x, y));
                }
            }
        }
        CoverList { pairs }
    }

    pub fn upper_covers(&self, x: usize) -> Vec<usize> {
        self.above[x]
            .ones()
            .filter(|&y| self.above[x].is_disjoint(&self.below[y]))
            .collect()
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        self.below[x]
            .ones()
            .filter(|&y| self.above[y].is_disjoint(&self.below[x]))
            .collect()
    }

    /// Number of elements on a longest chain ending at each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![1; self.n];
        for &v in &self.linear_extension {
            h[v] = 1 + self.below[v].ones().map(|u| h[u]).max().unwrap_or(0);
        }
        h
    }

    pub fn is_antichain(&self, elems: &[usize]) -> bool {
        elems.iter().enumerate().all(|(i, &a)| {
            elems[i + 1..]
                .iter()
                .all(|&b| a != b && !self.comparable(a, b))
        })
    }

    pub fn is_chain(&self, elems: &[usize]) -> bool {
        elems.iter().enumerate().all(|(i, &a)| {
            elems[i + 1..].iter().all(|&b| self.comparable(a, b))
        })
    }

    /// Subposet induced on `elems`, in the given order; labels carried over.
    pub fn induced(&self, elems: &[usize]) -> Poset {
        let m = elems.len();
        let above = elems
            .iter()
            .map(|&x| {
                let mut row = bitset(m);
                for (j, &y) in elems.iter().enumerate() {
                    if self.lt(x, y) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| elems.iter().map(|&x| l[x].clone()).collect());
        Self::from_above(above, labels)
    }

    /// Asserts the strict-order axioms directly on the stored relation.
    pub fn check_axioms(&self) -> bool {
        for x in 0..self.n {
            if self.above[x].contains(x) {
                return false;
            }
            for y in self.above[x].ones() {
                if !self.above[y].is_subset(&self.above[x]) || self.above[y].contains(x) {
                    return false;
                }
                if !self.below[y].contains(x) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson::from(self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("poset json")
    }
}

/// Canonical wire form, version 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub version: u32,
    pub n: usize,
    pub relation: RelationJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub kind: RelationKind,
    pub pairs: Vec<(usize, usize)>,
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        let mut pairs = p.transitive_reduction().pairs;
        pairs.sort_unstable();
        PosetJson {
            version: 1,
            n: p.n,
            relation: RelationJson {
                kind: RelationKind::Covers,
                pairs,
            },
            labels: p.labels.clone(),
        }
    }
}

impl TryFrom<PosetJson> for Poset {
    type Error = Error;

    fn try_from(j: PosetJson) -> Result<Self> {
        if j.version != 1 {
            return Err(Error::InvalidInput(format!(
                "unsupported poset version {}",
                j.version
            )));
        }
        Poset::build(j.n, j.relation.kind, &j.relation.pairs, j.labels)
    }
}

impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PosetJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PosetJson::deserialize(d)?;
        Poset::try_from(j).map_err(serde::de::Error::custom)
    }
}
