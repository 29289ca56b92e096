//! Downsets, ideals, and lattices of downsets.

use std::cmp::Ordering;
use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poset::{bitset, Poset};
use crate::semilattice::{self, certify, MapWitness};

/// A set of element indices, ordered by size and then lexicographically on
/// the sorted member list. Whether it is actually downward closed depends on
/// the host it is paired with; constructors that take a host check it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DownSet(FixedBitSet);

impl DownSet {
    /// Wraps `bits`, checking downward closure in `p`.
    pub fn new(p: &Poset, bits: FixedBitSet) -> Result<Self> {
        let bits = resize(bits, p.len())?;
        if !is_downset(p, &bits) {
            return Err(Error::InvalidInput("set is not downward closed".into()));
        }
        Ok(DownSet(bits))
    }

    pub fn from_indices(p: &Poset, idx: &[usize]) -> Result<Self> {
        let mut bits = bitset(p.len());
        for &i in idx {
            if i >= p.len() {
                return Err(Error::IndexOutOfRange { index: i, n: p.len() });
            }
            bits.insert(i);
        }
        Self::new(p, bits)
    }

    pub(crate) fn from_bits_unchecked(bits: FixedBitSet) -> Self {
        DownSet(bits)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.0
    }

    pub fn members(&self) -> Vec<usize> {
        self.0.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn is_subset(&self, other: &DownSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &DownSet) -> DownSet {
        let mut b = self.0.clone();
        b.union_with(&other.0);
        DownSet(b)
    }

    pub fn intersection(&self, other: &DownSet) -> DownSet {
        let mut b = self.0.clone();
        b.intersect_with(&other.0);
        DownSet(b)
    }

    /// `{a,b,...}` using host labels.
    pub fn label(&self, host: &Poset) -> String {
        let parts: Vec<String> = self.0.ones().map(|x| host.label(x)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

fn resize(mut bits: FixedBitSet, n: usize) -> Result<FixedBitSet> {
    if let Some(bad) = bits.ones().find(|&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, n });
    }
    bits.grow(n);
    if bits.len() > n {
        let mut b = bitset(n);
        b.extend(bits.ones());
        bits = b;
    }
    Ok(bits)
}

impl Ord for DownSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.ones().cmp(other.0.ones()))
    }
}

impl PartialOrd for DownSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for DownSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.0.ones()).finish()
    }
}

impl Serialize for DownSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(s)
    }
}

pub fn is_downset(p: &Poset, bits: &FixedBitSet) -> bool {
    bits.ones().all(|y| p.strict_below(y).is_subset(bits))
}

/// Nonempty, and any two members have a common upper bound inside.
pub fn is_up_directed(p: &Poset, bits: &FixedBitSet) -> bool {
    if bits.is_clear() {
        return false;
    }
    let members: Vec<usize> = bits.ones().collect();
    members.iter().enumerate().all(|(i, &x)| {
        members[i..].iter().all(|&y| {
            let mut ub = p.up(x);
            ub.intersect_with(&p.up(y));
            !ub.is_disjoint(bits)
        })
    })
}

pub fn down_closure(p: &Poset, elems: &[usize]) -> DownSet {
    let mut bits = bitset(p.len());
    for &x in elems {
        bits.insert(x);
        bits.union_with(p.strict_below(x));
    }
    DownSet(bits)
}

pub fn principal(p: &Poset, x: usize) -> DownSet {
    DownSet(p.down(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyRole {
    All,
    Ideals,
    Custom,
}

/// Distinct downsets over one host, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DownSetFamily {
    pub host: Poset,
    pub sets: Vec<DownSet>,
    pub role: FamilyRole,
}

impl DownSetFamily {
    /// Sorts and deduplicates `sets`.
    pub fn new(host: Poset, mut sets: Vec<DownSet>, role: FamilyRole) -> Self {
        sets.sort();
        sets.dedup();
        DownSetFamily { host, sets, role }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn index_of(&self, s: &DownSet) -> Option<usize> {
        self.sets.binary_search(s).ok()
    }

    /// The members ordered by inclusion, labelled by their contents.
    pub fn inclusion_poset(&self) -> Poset {
        let m = self.sets.len();
        let above = (0..m)
            .map(|i| {
                let mut row = bitset(m);
                for j in i + 1..m {
                    if self.sets[i].len() < self.sets[j].len() && self.sets[i].is_subset(&self.sets[j]) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        let labels = self.sets.iter().map(|s| s.label(&self.host)).collect();
        Poset::from_above(above, Some(labels))
    }
}

#[derive(Deserialize)]
struct FamilyWire {
    host: Poset,
    sets: Vec<Vec<usize>>,
    role: FamilyRole,
}

impl<'de> Deserialize<'de> for DownSetFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = FamilyWire::deserialize(d)?;
        let mut sets = Vec::with_capacity(w.sets.len());
        for s in &w.sets {
            sets.push(DownSet::from_indices(&w.host, s).map_err(D::Error::custom)?);
        }
        let fam = DownSetFamily::new(w.host, sets, w.role);
        if fam.sets.len() != w.sets.len() {
            return Err(D::Error::custom("duplicate sets in family"));
        }
        Ok(fam)
    }
}

/// Every downset of `p`, within the default downset budget.
pub fn enumerate_downsets(p: &Poset) -> Result<DownSetFamily> {
    enumerate_downsets_with(p, &Budget::downsets())
}

pub fn enumerate_downsets_with(p: &Poset, budget: &Budget) -> Result<DownSetFamily> {
    let order = p.linear_extension().to_vec();
    let mut out = Vec::new();
    let mut cur = bitset(p.len());
    downsets_dfs(p, &order, 0, &mut cur, &mut out, budget)?;
    out.sort();
    Ok(DownSetFamily {
        host: p.clone(),
        sets: out,
        role: FamilyRole::All,
    })
}

fn downsets_dfs(
    p: &Poset,
    order: &[usize],
    depth: usize,
    cur: &mut FixedBitSet,
    out: &mut Vec<DownSet>,
    budget: &Budget,
) -> Result<()> {
    if depth == order.len() {
        budget.tick()?;
        out.push(DownSet(cur.clone()));
        return Ok(());
    }
    let x = order[depth];
    // Everything below x precedes it in the linear extension, so the
    // decision for x is final once its lower set is known.
    if p.strict_below(x).is_subset(cur) {
        cur.insert(x);
        downsets_dfs(p, order, depth + 1, cur, out, budget)?;
        cur.set(x, false);
    }
    downsets_dfs(p, order, depth + 1, cur, out, budget)
}

/// All nonempty up-directed downsets, searched from the top of the linear
/// extension. An element that is not below anything already chosen is
/// maximal in every completion, so two such choices can never be
/// up-directed; that is the only pruning applied. Each result is checked
/// against the definition before it is kept.
pub fn enumerate_ideals(p: &Poset) -> DownSetFamily {
    let order: Vec<usize> = p.linear_extension().iter().rev().copied().collect();
    let mut out = Vec::new();
    let mut cur = bitset(p.len());
    ideals_dfs(p, &order, 0, false, &mut cur, &mut out);
    out.sort();
    DownSetFamily {
        host: p.clone(),
        sets: out,
        role: FamilyRole::Ideals,
    }
}

fn ideals_dfs(
    p: &Poset,
    order: &[usize],
    depth: usize,
    has_top: bool,
    cur: &mut FixedBitSet,
    out: &mut Vec<DownSet>,
) {
    if depth == order.len() {
        if is_downset(p, cur) && is_up_directed(p, cur) {
            out.push(DownSet(cur.clone()));
        }
        return;
    }
    let x = order[depth];
    let forced = !p.strict_above(x).is_disjoint(cur);
    if forced {
        cur.insert(x);
        ideals_dfs(p, order, depth + 1, has_top, cur, out);
        cur.set(x, false);
        return;
    }
    if !has_top {
        cur.insert(x);
        ideals_dfs(p, order, depth + 1, true, cur, out);
        cur.set(x, false);
    }
    ideals_dfs(p, order, depth + 1, has_top, cur, out);
}

/// All downsets of `p` ordered by inclusion, in family order, labelled by
/// their members.
pub fn downset_lattice(p: &Poset) -> Result<Poset> {
    Ok(downset_lattice_family(p)?.0)
}

pub fn downset_lattice_family(p: &Poset) -> Result<(Poset, DownSetFamily)> {
    let fam = enumerate_downsets(p)?;
    let lat = fam.inclusion_poset();
    Ok((lat, fam))
}

/// Closure of a nonempty family under finite nonempty unions, in canonical
/// order. On a finite host this is also the closure under arbitrary
/// nonempty unions.
pub fn family_union_closure(f: &DownSetFamily) -> Result<DownSetFamily> {
    family_union_closure_with(f, &Budget::downsets())
}

pub fn family_union_closure_with(f: &DownSetFamily, budget: &Budget) -> Result<DownSetFamily> {
    if f.sets.is_empty() {
        return Err(Error::Precondition("family must be nonempty".into()));
    }
    let mut seen: HashSet<DownSet> = HashSet::new();
    let mut frontier: Vec<DownSet> = Vec::new();
    for s in &f.sets {
        if seen.insert(s.clone()) {
            budget.tick()?;
            frontier.push(s.clone());
        }
    }
    while let Some(s) = frontier.pop() {
        for g in &f.sets {
            let u = s.union(g);
            if !seen.contains(&u) {
                budget.tick()?;
                seen.insert(u.clone());
                frontier.push(u);
            }
        }
    }
    Ok(DownSetFamily::new(
        f.host.clone(),
        seen.into_iter().collect(),
        FamilyRole::Custom,
    ))
}

pub fn family_union_lattice(f: &DownSetFamily) -> Result<Poset> {
    Ok(family_union_closure(f)?.inclusion_poset())
}

/// Elements with exactly one upper cover, paired with that cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetIrreducibles {
    pub elements: Vec<usize>,
    pub successor: Vec<(usize, usize)>,
}

impl MeetIrreducibles {
    pub fn successor_of(&self, x: usize) -> Option<usize> {
        self.successor.iter().find(|&&(a, _)| a == x).map(|&(_, b)| b)
    }
}

pub fn completely_meet_irreducibles(l: &Poset) -> Result<MeetIrreducibles> {
    if !semilattice::is_lattice(l) {
        return Err(Error::NotALattice);
    }
    let mut elements = Vec::new();
    let mut successor = Vec::new();
    for x in 0..l.len() {
        if let [c] = l.upper_covers(x).as_slice() {
            elements.push(x);
            successor.push((x, *c));
        }
    }
    Ok(MeetIrreducibles { elements, successor })
}

/// `x ↦ {J ∈ Q : x ∉ J}` into the downset lattice of `Q` ordered by
/// inclusion. The witness is an order embedding exactly when `Q` separates
/// points: for `x ≰ y` some member contains `y` but not `x`.
pub fn representation_map(p: &Poset, q: &DownSetFamily) -> Result<MapWitness> {
    if q.host.len() != p.len() {
        return Err(Error::InvalidInput("family host differs from poset".into()));
    }
    let qpos = q.inclusion_poset();
    let (target, tfam) = downset_lattice_family(&qpos)?;
    let table = (0..p.len())
        .map(|x| {
            let mut bits = bitset(q.len());
            for (j, s) in q.sets.iter().enumerate() {
                if !s.contains(x) {
                    bits.insert(j);
                }
            }
            tfam.index_of(&DownSet(bits)).expect("image is a downset of Q")
        })
        .collect();
    certify(p, &target, table)
}

/// Whether `q` separates: for all `x ≰ y` there is `J ∈ Q` with `x ∉ J`,
/// `y ∈ J`.
pub fn separates_points(p: &Poset, q: &DownSetFamily) -> bool {
    (0..p.len()).all(|x| {
        (0..p.len()).all(|y| {
            p.le(x, y) || q.sets.iter().any(|j| !j.contains(x) && j.contains(y))
        })
    })
}

/// The ideals of `p` that are completely meet-irreducible in the downset
/// lattice and do not contain `x`.
///
/// Ideals of a finite poset are its principal downsets `↓a`. Inside the
/// downset lattice, `↓a` is completely meet-irreducible when it has a single
/// upper cover, i.e. when the complement of `↓a` has exactly one minimal
/// element. The empty downset is not an ideal and is never returned.
pub fn phi_triangle(p: &Poset, x: usize) -> Result<Vec<DownSet>> {
    if x >= p.len() {
        return Err(Error::IndexOutOfRange { index: x, n: p.len() });
    }
    let (lat, fam) = downset_lattice_family(p)?;
    let cmi = completely_meet_irreducibles(&lat)?;
    let ideals = enumerate_ideals(p);
    Ok(cmi
        .elements
        .iter()
        .map(|&i| &fam.sets[i])
        .filter(|s| !s.contains(x) && ideals.index_of(s).is_some())
        .cloned()
        .collect())
}
