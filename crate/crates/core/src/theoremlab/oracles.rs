//! Brute-force reference implementations. These read only the order
//! relation and never call the search or table code they are compared with.

use crate::poset::Poset;

/// Least upper bound of `xs` by scanning all elements, `None` if absent.
/// The empty set has the least element as its join.
pub fn join_of(p: &Poset, xs: &[usize]) -> Option<usize> {
    let ub: Vec<usize> = (0..p.len()).filter(|&u| xs.iter().all(|&x| p.le(x, u))).collect();
    ub.iter().copied().find(|&u| ub.iter().all(|&v| p.le(u, v)))
}

pub fn meet_of(p: &Poset, xs: &[usize]) -> Option<usize> {
    let lb: Vec<usize> = (0..p.len()).filter(|&l| xs.iter().all(|&x| p.le(l, x))).collect();
    lb.iter().copied().find(|&l| lb.iter().all(|&v| p.le(v, l)))
}

/// No member is below the join of any subset of the others, the empty
/// subset included.
pub fn independent(p: &Poset, xs: &[usize]) -> bool {
    let k = xs.len();
    for (i, &x) in xs.iter().enumerate() {
        let others: Vec<usize> = (0..k).filter(|&j| j != i).map(|j| xs[j]).collect();
        for mask in 0usize..1 << others.len() {
            let f: Vec<usize> = (0..others.len()).filter(|b| mask >> b & 1 == 1).map(|b| others[b]).collect();
            match join_of(p, &f) {
                Some(j) if p.le(x, j) => return false,
                _ => {}
            }
        }
    }
    let mut s = xs.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len() == k
}

/// Whether some `k`-subset is independent, by enumerating all of them.
pub fn has_independent_set(p: &Poset, k: usize) -> bool {
    fn go(p: &Poset, k: usize, from: usize, cur: &mut Vec<usize>) -> bool {
        if cur.len() == k {
            return independent(p, cur);
        }
        for x in from..p.len() {
            cur.push(x);
            if go(p, k, x + 1, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(p, k, 0, &mut Vec::new())
}

pub fn is_injective(table: &[usize]) -> bool {
    (0..table.len()).all(|a| (a + 1..table.len()).all(|b| table[a] != table[b]))
}

/// `x ≤ y ⇒ f(x) ≤ f(y)` over all pairs.
pub fn order_preserving(s: &Poset, t: &Poset, table: &[usize]) -> bool {
    (0..s.len()).all(|x| (0..s.len()).all(|y| !s.le(x, y) || t.le(table[x], table[y])))
}

/// Every pairwise meet in `s` is sent to the meet of the images in `t`.
pub fn meet_preserving(s: &Poset, t: &Poset, table: &[usize]) -> bool {
    (0..s.len()).all(|x| {
        (0..s.len()).all(|y| match meet_of(s, &[x, y]) {
            None => true,
            Some(m) => meet_of(t, &[table[x], table[y]]) == Some(table[m]),
        })
    })
}

pub fn join_preserving(s: &Poset, t: &Poset, table: &[usize]) -> bool {
    (0..s.len()).all(|x| {
        (0..s.len()).all(|y| match join_of(s, &[x, y]) {
            None => true,
            Some(m) => join_of(t, &[table[x], table[y]]) == Some(table[m]),
        })
    })
}
