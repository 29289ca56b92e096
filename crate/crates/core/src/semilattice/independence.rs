use super::OpTable;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Joins of every nonempty subset of `xs`, indexed by bitmask.
fn subset_joins(jt: &OpTable, xs: &[usize]) -> Vec<usize> {
    let mut out = vec![usize::MAX; 1 << xs.len()];
    for mask in 1usize..1 << xs.len() {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        out[mask] = if rest == 0 {
            xs[low]
        } else {
            jt.at(out[rest], xs[low])
        };
    }
    out
}

/// No member lies below the join of a nonempty finite subset of the others.
/// When the poset has a least element the empty join is that element, so a
/// member equal to it also breaks independence.
pub fn is_independent(p: &Poset, jt: &OpTable, xs: &[usize]) -> bool {
    let mut sorted = xs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != xs.len() {
        return false;
    }
    if let Some(b) = p.least() {
        if xs.contains(&b) {
            return false;
        }
    }
    let joins = subset_joins(jt, xs);
    let full = (1usize << xs.len()) - 1;
    xs.iter().enumerate().all(|(i, &x)| {
        let others = full & !(1 << i);
        // Iterate the nonempty submasks of `others`.
        let mut sub = others;
        while sub != 0 {
            if p.le(x, joins[sub]) {
                return false;
            }
            sub = (sub - 1) & others;
        }
        true
    })
}

/// The lexicographically first independent set of size `k`, or `None` if
/// none exists.
pub fn find_independent_set(p: &Poset, k: usize) -> Result<Option<Vec<usize>>> {
    find_independent_set_with(p, k, &Budget::nodes())
}

pub fn find_independent_set_with(p: &Poset, k: usize, budget: &Budget) -> Result<Option<Vec<usize>>> {
    let jt = OpTable::joins(p);
    if !jt.is_total() {
        return Err(Error::NotJoinSemilattice);
    }
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    let bottom = p.least();
    let candidates: Vec<usize> = (0..p.len()).filter(|&x| Some(x) != bottom).collect();
    let mut chosen = Vec::with_capacity(k);
    if search(p, &jt, &candidates, 0, k, &mut chosen, budget)? {
        Ok(Some(chosen))
    } else {
        Ok(None)
    }
}

fn search(
    p: &Poset,
    jt: &OpTable,
    cands: &[usize],
    start: usize,
    k: usize,
    chosen: &mut Vec<usize>,
    budget: &Budget,
) -> Result<bool> {
    if chosen.len() == k {
        return Ok(true);
    }
    for i in start..cands.len() {
        if chosen.len() + (cands.len() - i) < k {
            break;
        }
        budget.tick()?;
        let c = cands[i];
        if chosen.iter().any(|&x| p.comparable(x, c)) {
            continue;
        }
        chosen.push(c);
        // Independence is hereditary, so checking each extension suffices.
        if is_independent(p, jt, chosen) && search(p, jt, cands, i + 1, k, chosen, budget)? {
            return Ok(true);
        }
        chosen.pop();
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{delta, finite_powerset};
    use crate::segments::{downset_lattice_family, principal};

    #[test]
    fn powerset_singletons() {
        for n in 1..=5 {
            let b = finite_powerset(n);
            let got = find_independent_set(&b, n).unwrap().unwrap();
            assert_eq!(got, (0..n).map(|i| 1 << i).collect::<Vec<_>>());
            assert_eq!(find_independent_set(&b, n + 1).unwrap(), None);
        }
    }

    #[test]
    fn chains_have_no_pairs() {
        assert_eq!(find_independent_set(&Poset::chain(5), 2).unwrap(), None);
        assert_eq!(find_independent_set(&Poset::chain(5), 1).unwrap(), Some(vec![1]));
    }

    #[test]
    fn requires_joins() {
        assert!(matches!(
            find_independent_set(&Poset::antichain(3), 2),
            Err(Error::NotJoinSemilattice)
        ));
    }

    #[test]
    fn delta_columns_are_independent() {
        let d = delta(2);
        let (lat, fam) = downset_lattice_family(&d).unwrap();
        let jt = OpTable::joins(&lat);
        let cols: Vec<usize> = (3..6).map(|x| fam.index_of(&principal(&d, x)).unwrap()).collect();
        assert!(is_independent(&lat, &jt, &cols));
        assert!(find_independent_set(&lat, 3).unwrap().is_some());
    }

    #[test]
    fn three_atoms_of_m3_are_not_independent() {
        use crate::poset::RelationKind;
        let m3 = Poset::build(5, RelationKind::Covers, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], None).unwrap();
        let jt = OpTable::joins(&m3);
        assert!(is_independent(&m3, &jt, &[1, 2]));
        assert!(!is_independent(&m3, &jt, &[1, 2, 3]));
        assert_eq!(find_independent_set(&m3, 3).unwrap(), None);
    }
}
