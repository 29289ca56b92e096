use super::Poset;
use crate::budget::Budget;
use crate::error::{Error, Result};

/// Largest size searched without `force`.
pub const ISO_UNFORCED_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, Default)]
pub struct IsoOptions {
    /// Search inputs above [`ISO_UNFORCED_LIMIT`] elements anyway.
    pub force: bool,
    /// Node limit; the default node budget when absent.
    pub budget: Option<u64>,
}

impl IsoOptions {
    pub fn forced() -> Self {
        IsoOptions {
            force: true,
            budget: None,
        }
    }
}

fn invariants(p: &Poset) -> Vec<(usize, usize, usize, usize)> {
    let h = p.heights();
    let d = p.dual().heights();
    (0..p.len())
        .map(|x| {
            (
                p.strict_below(x).count_ones(..),
                p.strict_above(x).count_ones(..),
                h[x],
                d[x],
            )
        })
        .collect()
}

/// Returns an order-isomorphism `table` with `table[a] = b`, or `None`.
/// The first isomorphism in lexicographic order of candidate choices along
/// `a`'s linear extension is returned.
pub fn is_isomorphic(a: &Poset, b: &Poset, opts: IsoOptions) -> Result<Option<Vec<usize>>> {
    let n = a.len();
    if n != b.len() {
        return Ok(None);
    }
    let budget = match opts.budget {
        Some(l) => Budget::new("isomorphism nodes", l),
        None => Budget::nodes(),
    };
    if n > ISO_UNFORCED_LIMIT && !opts.force {
        return Err(Error::BudgetExceeded {
            what: "isomorphism input size",
            limit: ISO_UNFORCED_LIMIT as u64,
        });
    }
    if a.strict_pairs().len() != b.strict_pairs().len() {
        return Ok(None);
    }
    let ia = invariants(a);
    let ib = invariants(b);
    let (mut sa, mut sb) = (ia.clone(), ib.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }
    let order: Vec<usize> = a.linear_extension().to_vec();
    let mut table = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let found = search(a, b, &ia, &ib, &order, 0, &mut table, &mut used, &budget)?;
    Ok(found.then_some(table))
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &Poset,
    b: &Poset,
    ia: &[(usize, usize, usize, usize)],
    ib: &[(usize, usize, usize, usize)],
    order: &[usize],
    depth: usize,
    table: &mut [usize],
    used: &mut [bool],
    budget: &Budget,
) -> Result<bool> {
    if depth == order.len() {
        return Ok(true);
    }
    let x = order[depth];
    for y in 0..b.len() {
        if used[y] || ia[x] != ib[y] {
            continue;
        }
        budget.tick()?;
        let consistent = order[..depth].iter().all(|&p| {
            let q = table[p];
            a.lt(p, x) == b.lt(q, y) && a.lt(x, p) == b.lt(y, q)
        });
        if !consistent {
            continue;
        }
        table[x] = y;
        used[y] = true;
        if search(a, b, ia, ib, order, depth + 1, table, used, budget)? {
            return Ok(true);
        }
        used[y] = false;
        table[x] = usize::MAX;
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::RelationKind;

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_iso(a: &Poset, b: &Poset) -> bool {
        a.len() == b.len()
            && all_perms(a.len()).into_iter().any(|f| {
                (0..a.len()).all(|x| (0..a.len()).all(|y| a.lt(x, y) == b.lt(f[x], f[y])))
            })
    }

    fn verify(a: &Poset, b: &Poset, t: &[usize]) -> bool {
        (0..a.len()).all(|x| (0..a.len()).all(|y| a.lt(x, y) == b.lt(t[x], t[y])))
    }

    #[test]
    fn diamond_vs_square() {
        let d = Poset::build(4, RelationKind::Covers, &[(0, 1), (0, 2), (1, 3), (2, 3)], None).unwrap();
        let sq = Poset::chain(2).direct_product(&Poset::chain(2));
        let t = is_isomorphic(&d, &sq, IsoOptions::default()).unwrap().unwrap();
        assert!(verify(&d, &sq, &t));
        assert!(is_isomorphic(&Poset::chain(3), &Poset::antichain(3), IsoOptions::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn pentagon_is_not_diamond_plus_point() {
        let pentagon = Poset::build(5, RelationKind::Covers, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], None).unwrap();
        let d = Poset::build(4, RelationKind::Covers, &[(0, 1), (0, 2), (1, 3), (2, 3)], None).unwrap();
        let dp = d.direct_sum(&Poset::chain(1));
        assert!(!brute_iso(&pentagon, &dp));
        assert!(is_isomorphic(&pentagon, &dp, IsoOptions::default()).unwrap().is_none());
        let dp2 = d.ordinal_sum(&Poset::chain(1));
        assert!(!brute_iso(&pentagon, &dp2));
        assert!(is_isomorphic(&pentagon, &dp2, IsoOptions::default()).unwrap().is_none());
    }

    #[test]
    fn large_inputs_need_force() {
        let c = Poset::chain(13);
        assert!(is_isomorphic(&c, &c, IsoOptions::default()).unwrap_err().is_budget());
        assert!(is_isomorphic(&c, &c, IsoOptions::forced()).unwrap().is_some());
    }

    #[test]
    fn agrees_with_brute_force_on_small_posets() {
        use crate::theoremlab::random_poset;
        for seed in 0..60u64 {
            let n = 2 + (seed % 5) as usize;
            let a = random_poset(n, 0.4, seed);
            let b = random_poset(n, 0.4, seed + 1000);
            let got = is_isomorphic(&a, &b, IsoOptions::default()).unwrap();
            assert_eq!(got.is_some(), brute_iso(&a, &b), "seed {seed}");
            if let Some(t) = got {
                assert!(verify(&a, &b, &t));
            }
        }
    }
}
