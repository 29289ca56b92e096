//! Chains of ideals in a join-semilattice: the separation test, extraction
//! of an independent set from a separating chain, and the descending-chain
//! or grid dichotomy for chains whose tails are all non-separating.
//!
//! On a finite chain the least member always exists, so the separation
//! test skips it along with the union, and it quantifies only over the
//! minimal elements outside each member.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{Certificate, ElementsPayload, GridPayload, Payload};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::families::{finite_powerset, grid_coords, omega_star_grid};
use crate::poset::{bitset, Poset};
use crate::segments::{is_downset, is_up_directed, DownSet};
use crate::semilattice::{certify, OpTable};

/// A strictly monotone chain of ideals of a join-semilattice.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ChainJson", into = "ChainJson")]
pub struct ChainOfDownSets {
    host: Poset,
    joins: OpTable,
    members: Vec<DownSet>,
    descending: bool,
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    host: Poset,
    members: Vec<Vec<usize>>,
}

impl TryFrom<ChainJson> for ChainOfDownSets {
    type Error = Error;

    fn try_from(w: ChainJson) -> Result<Self> {
        let members = w
            .members
            .iter()
            .map(|m| DownSet::from_indices(&w.host, m))
            .collect::<Result<Vec<_>>>()?;
        ChainOfDownSets::new(w.host, members)
    }
}

impl From<ChainOfDownSets> for ChainJson {
    fn from(c: ChainOfDownSets) -> Self {
        ChainJson {
            members: c.members.iter().map(|m| m.members()).collect(),
            host: c.host,
        }
    }
}

impl ChainOfDownSets {
    /// Members may be listed in increasing or decreasing order.
    pub fn new(host: Poset, members: Vec<DownSet>) -> Result<Self> {
        let joins = OpTable::joins(&host);
        if !joins.is_total() {
            return Err(Error::NotJoinSemilattice);
        }
        if members.is_empty() {
            return Err(Error::InvalidInput("chain has no members".into()));
        }
        for m in &members {
            if m.is_empty() || !is_downset(&host, m.bits()) || !is_up_directed(&host, m.bits()) {
                return Err(Error::InvalidInput(format!("{} is not an ideal", m.label(&host))));
            }
        }
        let strict = |a: &DownSet, b: &DownSet| a.is_subset(b) && a != b;
        let descending = members.len() > 1 && strict(&members[1], &members[0]);
        let monotone = members.windows(2).all(|w| {
            if descending {
                strict(&w[1], &w[0])
            } else {
                strict(&w[0], &w[1])
            }
        });
        if !monotone {
            return Err(Error::InvalidInput("members are not strictly monotone".into()));
        }
        Ok(ChainOfDownSets {
            host,
            joins,
            members,
            descending,
        })
    }

    pub fn host(&self) -> &Poset {
        &self.host
    }

    /// Members in the order given.
    pub fn members(&self) -> &[DownSet] {
        &self.members
    }

    pub fn is_descending(&self) -> bool {
        self.descending
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// In the powerset of `0..n`: member `k` holds the subsets of `k..n`.
    pub fn powerset_suffixes(n: usize) -> Self {
        let host = finite_powerset(n);
        let members = (0..n)
            .map(|k| {
                let low = (1usize << k) - 1;
                let bits = (0..1usize << n).filter(|s| s & low == 0).collect();
                DownSet::from_bits_unchecked(bits_of(host.len(), bits))
            })
            .collect();
        Self::new(host, members).expect("suffix chain")
    }

    /// In `omega_star_grid(n)`: member `k` holds the pairs `(i,j)` with
    /// `k ≤ i`.
    pub fn grid_suffixes(n: usize) -> Self {
        let host = omega_star_grid(n);
        let coords = grid_coords(n);
        let members = (0..n)
            .map(|k| {
                let bits = (0..coords.len()).filter(|&e| coords[e].0 >= k).collect();
                DownSet::from_bits_unchecked(bits_of(host.len(), bits))
            })
            .collect();
        Self::new(host, members).expect("grid chain")
    }

    fn largest_first(&self) -> Vec<&DownSet> {
        let mut v: Vec<&DownSet> = self.members.iter().collect();
        if !self.descending {
            v.reverse();
        }
        v
    }

    fn original_index(&self, k: usize) -> usize {
        if self.descending {
            k
        } else {
            self.members.len() - 1 - k
        }
    }
}

/// `{x} ⋁ J`: the closure of `{x} ∪ J` under joins, then downward.
pub fn join_with_ideal(host: &Poset, jt: &OpTable, x: usize, j: &DownSet) -> DownSet {
    let mut gens: Vec<usize> = j.members();
    gens.push(x);
    let mut seen = bitset(host.len());
    for &g in &gens {
        seen.insert(g);
    }
    let mut k = 0;
    while k < gens.len() {
        for l in 0..k {
            let v = jt.at(gens[k], gens[l]);
            if !seen.contains(v) {
                seen.insert(v);
                gens.push(v);
            }
        }
        k += 1;
    }
    let mut down = bitset(host.len());
    for g in seen.ones() {
        down.union_with(&host.down(g));
    }
    DownSet::from_bits_unchecked(down)
}

fn bits_of(n: usize, elems: Vec<usize>) -> FixedBitSet {
    let mut b = bitset(n);
    b.extend(elems);
    b
}

fn minimal_outside(host: &Poset, outer: &DownSet, inner: &DownSet) -> Vec<usize> {
    let mut diff: FixedBitSet = outer.bits().clone();
    diff.difference_with(inner.bits());
    diff.ones()
        .filter(|&y| !host.strict_below(y).ones().any(|z| diff.contains(z)))
        .collect()
}

/// Whether `inner ⊆ {x} ⋁ J` for every `J` in `chain`.
fn absorbed(host: &Poset, jt: &OpTable, x: usize, inner: &DownSet, chain: &[&DownSet]) -> bool {
    chain.iter().all(|j| inner.is_subset(&join_with_ideal(host, jt, x, j)))
}

fn violation(host: &Poset, jt: &OpTable, desc: &[&DownSet]) -> Option<(usize, usize)> {
    if desc.len() < 3 {
        return None;
    }
    for (k, inner) in desc.iter().enumerate().take(desc.len() - 1).skip(1) {
        for x in minimal_outside(host, desc[0], inner) {
            if absorbed(host, jt, x, inner, desc) {
                return Some((k, x));
            }
        }
    }
    None
}

/// A pair `(member index, x)` showing the chain is not separating.
pub fn separation_witness(c: &ChainOfDownSets) -> Option<(usize, usize)> {
    violation(&c.host, &c.joins, &c.largest_first()).map(|(k, x)| (c.original_index(k), x))
}

pub fn is_separating(c: &ChainOfDownSets) -> bool {
    separation_witness(c).is_none()
}

/// Walks a separating chain downward, picking at each step an element of
/// the current member outside `{x_0 ∨ … ∨ x_{n-1}} ⋁ J` for the largest
/// smaller member `J` that leaves one.
pub fn independent_from_separating(c: &ChainOfDownSets) -> Result<Certificate> {
    if c.len() < 2 {
        return Err(Error::Precondition("chain needs at least two members".into()));
    }
    if !is_separating(c) {
        return Err(Error::Precondition("chain is not separating".into()));
    }
    let (host, jt) = (&c.host, &c.joins);
    let desc = c.largest_first();
    let cert = |xs: &[usize]| {
        Certificate::new(Payload::IndependentSet(ElementsPayload {
            host: host.clone(),
            elements: xs.to_vec(),
        }))
    };
    let x0 = minimal_outside(host, desc[0], desc[1])[0];
    let mut xs = vec![x0];
    let mut acc = x0;
    let mut cur = 1;
    while cur + 1 < desc.len() {
        let step = (cur + 1..desc.len()).find_map(|k| {
            let cover = join_with_ideal(host, jt, acc, desc[k]);
            let mut rest = desc[cur].bits().clone();
            rest.difference_with(cover.bits());
            rest.ones().next().map(|z| (k, z))
        });
        let Some((k, z)) = step else {
            return Err(Error::ConstructionStalled {
                level: xs.len(),
                partial: Box::new(cert(&xs)),
            });
        };
        xs.push(z);
        acc = jt.at(acc, z);
        cur = k;
    }
    Ok(cert(&xs))
}

pub fn dichotomy_extract(c: &ChainOfDownSets, d: usize) -> Result<Certificate> {
    dichotomy_extract_with(c, d, &Budget::nodes())
}

/// For a chain whose tails of three or more members are all
/// non-separating, returns either a join-preserving injective map from
/// `omega_star_grid(d)` or a strictly descending chain of `d` elements.
/// The grid construction is tried first.
pub fn dichotomy_extract_with(c: &ChainOfDownSets, d: usize, budget: &Budget) -> Result<Certificate> {
    if d == 0 {
        return Err(Error::Precondition("depth must be positive".into()));
    }
    let (host, jt) = (&c.host, &c.joins);
    let desc = c.largest_first();
    for k in 0..desc.len().saturating_sub(2) {
        budget.tick()?;
        if violation(host, jt, &desc[k..]).is_none() {
            return Err(Error::Precondition(format!("tail starting at member {k} is separating")));
        }
    }
    let ys = grid_sequence(host, jt, &desc, d + 1, budget)?;
    if ys.len() > d {
        let table = grid_coords(d).into_iter().map(|(i, j)| jt.at(ys[i], ys[j])).collect();
        let map = certify(&omega_star_grid(d), host, table)?;
        if map.certified().join_preserving && map.certified().injective {
            return Ok(Certificate::new(Payload::GridMap(GridPayload { depth: d, map })));
        }
    }
    let grid_depth = ys.len().saturating_sub(1);
    let chain = descending_sequence(host, &desc, budget)?;
    if chain.len() >= d {
        return Ok(Certificate::new(Payload::DescendingChain(ElementsPayload {
            host: host.clone(),
            elements: chain[..d].to_vec(),
        })));
    }
    Err(Error::DepthUnreachable {
        requested: d,
        achieved: grid_depth.max(chain.len()),
    })
}

/// The sequence `y_0, y_1, …` of the grid branch, at most `want` long. Stops
/// early when a required element does not exist in the host.
fn grid_sequence(host: &Poset, jt: &OpTable, desc: &[&DownSet], want: usize, budget: &Budget) -> Result<Vec<usize>> {
    // x_n with I_n ⊂ I_{n-1} and I_n ⊆ {x_n} ⋁ J for every J ⊆ I_{n-1}.
    let mut xs = Vec::new();
    let mut levels = Vec::new();
    let mut prev = 0;
    while desc.len() - prev >= 3 && xs.len() < want {
        let tail = &desc[prev..];
        let mut pick = None;
        'search: for k in prev + 1..desc.len() - 1 {
            for x in minimal_outside(host, desc[prev], desc[k]) {
                budget.tick()?;
                if absorbed(host, jt, x, desc[k], tail) {
                    pick = Some((k, x));
                    break 'search;
                }
            }
        }
        let Some((k, x)) = pick else { break };
        xs.push(x);
        levels.push(k);
        prev = k;
    }
    let mut ys: Vec<usize> = xs.first().copied().into_iter().collect();
    for n in 1..xs.len().min(want) {
        let ideal = desc[levels[n - 1]];
        let acc = jt.fold(ys.iter().copied()).expect("nonempty");
        let Some(z) = ideal.bits().ones().find(|&z| !host.le(z, acc)) else {
            break;
        };
        let mut y = jt.at(xs[n], z);
        let mut stuck = false;
        for j in 0..n.saturating_sub(1) {
            budget.tick()?;
            let above = jt.fold(ys[j + 1..n].iter().copied()).expect("nonempty");
            match ideal.bits().ones().find(|&t| host.le(above, jt.at(xs[j], t))) {
                Some(t) => y = jt.at(y, t),
                None => {
                    stuck = true;
                    break;
                }
            }
        }
        if stuck {
            break;
        }
        let a = host.le(xs[n], y) && ideal.contains(y);
        let b = !host.le(y, jt.at(ys[0], ys[n - 1]));
        let c = (0..=n).all(|i| {
            (i..=n).all(|j| {
                let yj = if j == n { y } else { ys[j] };
                let yi = if i == n { y } else { ys[i] };
                host.le(yj, jt.at(yi, y))
            })
        });
        if !(a && b && c) {
            break;
        }
        ys.push(y);
    }
    Ok(ys)
}

/// Longest sequence `x_0 > x_1 > …` with `x_0` in the union, each `x_{n+1}`
/// in the largest member strictly inside `↓x_n`.
fn descending_sequence(host: &Poset, desc: &[&DownSet], budget: &Budget) -> Result<Vec<usize>> {
    let m = desc.len();
    let next = |x: usize| -> Option<usize> {
        let down = DownSet::from_bits_unchecked(host.down(x));
        (0..m).find(|&k| desc[k].is_subset(&down) && desc[k] != &down)
    };
    let nexts: Vec<Option<usize>> = (0..host.len()).map(next).collect();
    // best[k]: longest sequence starting inside member k.
    let mut best = vec![0usize; m + 1];
    let mut choice = vec![None; m];
    for k in (0..m).rev() {
        for x in desc[k].bits().ones() {
            budget.tick()?;
            if let Some(nk) = nexts[x] {
                let len = 1 + best[nk];
                if len > best[k] {
                    best[k] = len;
                    choice[k] = Some((x, nk));
                }
            }
        }
    }
    let mut out = Vec::with_capacity(best[0]);
    let mut k = 0;
    while let Some((x, nk)) = choice[k] {
        out.push(x);
        k = nk;
    }
    Ok(out)
}
