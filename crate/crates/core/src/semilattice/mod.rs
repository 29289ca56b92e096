//! Join/meet structure, irreducibles, independence, embeddings and maps
//! between semilattices.

mod embedding;
mod independence;
mod irreducible;
mod maps;
mod witness;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

pub use embedding::{embedding_search, embedding_search_with, EmbeddingMode};
pub use independence::{find_independent_set, find_independent_set_with, is_independent};
pub use irreducible::{join_irreducibles, join_primes};
pub use maps::{
    check_delta_map, delta_from_hom, f_vee, phi_quotient, DeltaReport, FVee, PhiQuotient,
};
pub use witness::{certify, Certified, MapWitness};

/// Least upper bound of `x` and `y`, if it exists.
pub fn join(p: &Poset, x: usize, y: usize) -> Option<usize> {
    let mut ub = p.up(x);
    ub.intersect_with(&p.up(y));
    let cand = ub.ones().min_by_key(|&u| p.rank(u))?;
    // The least element of `ub`, if any, has the smallest rank in it.
    (ub.count_ones(..) == p.strict_above(cand).intersection(&ub).count() + 1).then_some(cand)
}

/// Greatest lower bound of `x` and `y`, if it exists.
pub fn meet(p: &Poset, x: usize, y: usize) -> Option<usize> {
    let mut lb = p.down(x);
    lb.intersect_with(&p.down(y));
    let cand = lb.ones().max_by_key(|&u| p.rank(u))?;
    (lb.count_ones(..) == p.strict_below(cand).intersection(&lb).count() + 1).then_some(cand)
}

const NONE: u32 = u32::MAX;

/// Dense binary operation table; entries are absent where the operation is
/// undefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTable {
    n: usize,
    data: Vec<u32>,
}

impl OpTable {
    fn build(p: &Poset, op: fn(&Poset, usize, usize) -> Option<usize>) -> Self {
        let n = p.len();
        let mut data = vec![NONE; n * n];
        for x in 0..n {
            data[x * n + x] = x as u32;
            for y in x + 1..n {
                let v = op(p, x, y).map_or(NONE, |v| v as u32);
                data[x * n + y] = v;
                data[y * n + x] = v;
            }
        }
        OpTable { n, data }
    }

    pub fn joins(p: &Poset) -> Self {
        Self::build(p, join)
    }

    pub fn meets(p: &Poset) -> Self {
        Self::build(p, meet)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<usize> {
        let v = self.data[x * self.n + y];
        (v != NONE).then_some(v as usize)
    }

    /// Total-table access; panics on an undefined entry.
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> usize {
        self.get(x, y).expect("operation undefined")
    }

    pub fn is_total(&self) -> bool {
        self.data.iter().all(|&v| v != NONE)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Fold over a nonempty list.
    pub fn fold(&self, items: impl IntoIterator<Item = usize>) -> Option<usize> {
        let mut it = items.into_iter();
        let mut acc = it.next()?;
        for x in it {
            acc = self.get(acc, x)?;
        }
        Some(acc)
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| self.at(x, y)).collect())
            .collect()
    }
}

pub fn is_join_semilattice(p: &Poset) -> bool {
    OpTable::joins(p).is_total()
}

pub fn is_meet_semilattice(p: &Poset) -> bool {
    OpTable::meets(p).is_total()
}

pub fn is_lattice(p: &Poset) -> bool {
    is_join_semilattice(p) && is_meet_semilattice(p)
}

/// `x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z)` for all triples.
pub fn is_distributive_tables(j: &OpTable, m: &OpTable) -> bool {
    let n = j.len();
    (0..n).all(|x| {
        (0..n).all(|y| {
            let xy = m.at(x, y);
            (0..n).all(|z| m.at(x, j.at(y, z)) == j.at(xy, m.at(x, z)))
        })
    })
}

/// `x ≤ z` implies `x ∨ (y ∧ z) = (x ∨ y) ∧ z`, for all triples.
pub fn is_modular_tables(p: &Poset, j: &OpTable, m: &OpTable) -> bool {
    let n = j.len();
    (0..n).all(|x| {
        (0..n).filter(|&z| p.le(x, z)).all(|z| {
            (0..n).all(|y| j.at(x, m.at(y, z)) == m.at(j.at(x, y), z))
        })
    })
}

/// First triple violating the modular law, if any.
pub fn modular_violation(p: &Poset) -> Option<(usize, usize, usize)> {
    let j = OpTable::joins(p);
    let m = OpTable::meets(p);
    if !j.is_total() || !m.is_total() {
        return None;
    }
    let n = p.len();
    for x in 0..n {
        for z in (0..n).filter(|&z| p.le(x, z)) {
            for y in 0..n {
                if j.at(x, m.at(y, z)) != m.at(j.at(x, y), z) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n: usize,
    pub is_join_semilattice: bool,
    pub is_meet_semilattice: bool,
    pub is_lattice: bool,
    pub is_distributive: bool,
    pub is_modular: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub join_table: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meet_table: Option<Vec<Vec<usize>>>,
}

pub fn structure_report(p: &Poset) -> StructureReport {
    let j = OpTable::joins(p);
    let m = OpTable::meets(p);
    let (js, ms) = (j.is_total(), m.is_total());
    let lattice = js && ms;
    StructureReport {
        n: p.len(),
        is_join_semilattice: js,
        is_meet_semilattice: ms,
        is_lattice: lattice,
        is_distributive: lattice && is_distributive_tables(&j, &m),
        is_modular: lattice && is_modular_tables(p, &j, &m),
        join_table: js.then(|| j.rows()),
        meet_table: ms.then(|| m.rows()),
    }
}

pub fn is_distributive_lattice(p: &Poset) -> bool {
    let j = OpTable::joins(p);
    let m = OpTable::meets(p);
    j.is_total() && m.is_total() && is_distributive_tables(&j, &m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenOps {
    Join,
    Meet,
    Both,
}

/// Least superset of `s` closed under the selected operations, sorted.
pub fn subsemilattice_generated(p: &Poset, s: &[usize], ops: GenOps) -> Result<Vec<usize>> {
    let want_join = matches!(ops, GenOps::Join | GenOps::Both);
    let want_meet = matches!(ops, GenOps::Meet | GenOps::Both);
    let jt = want_join.then(|| OpTable::joins(p));
    let mt = want_meet.then(|| OpTable::meets(p));
    if jt.as_ref().is_some_and(|t| !t.is_total()) {
        return Err(Error::StructureMismatch("joins are not total".into()));
    }
    if mt.as_ref().is_some_and(|t| !t.is_total()) {
        return Err(Error::StructureMismatch("meets are not total".into()));
    }
    generated_with(p.len(), s, jt.as_ref(), mt.as_ref())
}

pub(crate) fn generated_with(
    n: usize,
    s: &[usize],
    jt: Option<&OpTable>,
    mt: Option<&OpTable>,
) -> Result<Vec<usize>> {
    let mut inside = vec![false; n];
    let mut members = Vec::new();
    let mut queue = Vec::new();
    for &x in s {
        if x >= n {
            return Err(Error::IndexOutOfRange { index: x, n });
        }
        if !inside[x] {
            inside[x] = true;
            queue.push(x);
        }
    }
    while let Some(x) = queue.pop() {
        members.push(x);
        for &y in &members {
            for t in [jt, mt].into_iter().flatten() {
                let v = t.at(x, y);
                if !inside[v] {
                    inside[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    members.sort_unstable();
    Ok(members)
}
