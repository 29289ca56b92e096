use serde::{Deserialize, Serialize};

use super::{certify, MapWitness, OpTable};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingMode {
    /// Injective, order-preserving and order-reflecting.
    Order,
    /// Injective and preserving binary joins.
    Join,
    /// Injective and preserving binary meets.
    Meet,
    /// Injective lattice homomorphism.
    Sublattice,
}

impl std::str::FromStr for EmbeddingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "order" => Ok(Self::Order),
            "join" => Ok(Self::Join),
            "meet" => Ok(Self::Meet),
            "sublattice" => Ok(Self::Sublattice),
            _ => Err(Error::InvalidInput(format!("unknown embedding mode `{s}`"))),
        }
    }
}

/// First embedding of `pattern` into `target` in canonical order: pattern
/// elements are placed by (height, index), target candidates ascending.
pub fn embedding_search(pattern: &Poset, target: &Poset, mode: EmbeddingMode) -> Result<Option<MapWitness>> {
    embedding_search_with(pattern, target, mode, &Budget::nodes())
}

struct Ctx<'a> {
    p: &'a Poset,
    t: &'a Poset,
    order: Vec<usize>,
    /// For each pattern element `c`, the pairs `(a, b)` strictly below it
    /// with `a ∨ b = c`.
    join_pairs: Vec<Vec<(usize, usize)>>,
    pattern_meets: Option<OpTable>,
    target_joins: Option<OpTable>,
    target_meets: Option<OpTable>,
    budget: &'a Budget,
}

pub fn embedding_search_with(
    pattern: &Poset,
    target: &Poset,
    mode: EmbeddingMode,
    budget: &Budget,
) -> Result<Option<MapWitness>> {
    let need_join = matches!(mode, EmbeddingMode::Join | EmbeddingMode::Sublattice);
    let need_meet = matches!(mode, EmbeddingMode::Meet | EmbeddingMode::Sublattice);
    let mut pj = None;
    let mut tj = None;
    let mut pm = None;
    let mut tm = None;
    if need_join {
        let (a, b) = (OpTable::joins(pattern), OpTable::joins(target));
        if !a.is_total() || !b.is_total() {
            return Err(Error::StructureMismatch("join mode needs two join-semilattices".into()));
        }
        pj = Some(a);
        tj = Some(b);
    }
    if need_meet {
        let (a, b) = (OpTable::meets(pattern), OpTable::meets(target));
        if !a.is_total() || !b.is_total() {
            return Err(Error::StructureMismatch("meet mode needs two meet-semilattices".into()));
        }
        pm = Some(a);
        tm = Some(b);
    }
    if pattern.len() > target.len() {
        return Ok(None);
    }
    let heights = pattern.heights();
    let mut order: Vec<usize> = (0..pattern.len()).collect();
    order.sort_by_key(|&x| (heights[x], x));
    let mut join_pairs = vec![Vec::new(); pattern.len()];
    if let Some(pj) = &pj {
        for a in 0..pattern.len() {
            for b in a + 1..pattern.len() {
                let c = pj.at(a, b);
                if c != a && c != b {
                    join_pairs[c].push((a, b));
                }
            }
        }
    }
    let ctx = Ctx {
        p: pattern,
        t: target,
        order,
        join_pairs,
        pattern_meets: pm,
        target_joins: tj,
        target_meets: tm,
        budget,
    };
    let mut table = vec![usize::MAX; pattern.len()];
    let mut used = vec![false; target.len()];
    if !place(&ctx, 0, &mut table, &mut used)? {
        return Ok(None);
    }
    let w = certify(pattern, target, table)?;
    let c = w.certified();
    debug_assert!(c.injective && c.order_embedding);
    debug_assert!(!need_join || c.join_preserving);
    debug_assert!(!need_meet || c.meet_preserving);
    Ok(Some(w))
}

fn place(ctx: &Ctx<'_>, depth: usize, table: &mut [usize], used: &mut [bool]) -> Result<bool> {
    if depth == ctx.order.len() {
        return Ok(true);
    }
    let (p, t) = (ctx.p, ctx.t);
    let x = ctx.order[depth];
    let need_down = p.strict_below(x).count_ones(..);
    let need_up = p.strict_above(x).count_ones(..);
    for y in 0..t.len() {
        if used[y]
            || t.strict_below(y).count_ones(..) < need_down
            || t.strict_above(y).count_ones(..) < need_up
        {
            continue;
        }
        ctx.budget.tick()?;
        let placed = &ctx.order[..depth];
        if !placed.iter().all(|&q| {
            let fq = table[q];
            p.lt(q, x) == t.lt(fq, y) && p.lt(x, q) == t.lt(y, fq)
        }) {
            continue;
        }
        if let Some(tj) = &ctx.target_joins {
            // Both arguments sit strictly lower, hence are already placed.
            if !ctx.join_pairs[x]
                .iter()
                .all(|&(a, b)| tj.at(table[a], table[b]) == y)
            {
                continue;
            }
        }
        if let (Some(pm), Some(tm)) = (&ctx.pattern_meets, &ctx.target_meets) {
            // A meet strictly below both arguments is lower, hence placed.
            if !placed.iter().all(|&q| tm.at(table[q], y) == table_or(table, pm.at(q, x), y, x)) {
                continue;
            }
        }
        table[x] = y;
        used[y] = true;
        if place(ctx, depth + 1, table, used)? {
            return Ok(true);
        }
        used[y] = false;
        table[x] = usize::MAX;
    }
    Ok(false)
}

fn table_or(table: &[usize], v: usize, y: usize, x: usize) -> usize {
    if v == x {
        y
    } else {
        table[v]
    }
}
