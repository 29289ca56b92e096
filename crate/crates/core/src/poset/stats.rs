use serde::{Deserialize, Serialize};

use super::Poset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicStats {
    pub n: usize,
    pub minimals: Vec<usize>,
    pub maximals: Vec<usize>,
    pub height: usize,
    pub width: usize,
    pub linear_extension: Vec<usize>,
}

pub fn basic_stats(p: &Poset) -> BasicStats {
    BasicStats {
        n: p.len(),
        minimals: p.minimals(),
        maximals: p.maximals(),
        height: p.heights().into_iter().max().unwrap_or(0),
        width: max_antichain(p).len(),
        linear_extension: p.linear_extension().to_vec(),
    }
}

/// A maximum antichain, via a maximum matching in the comparability
/// bipartite graph (Dilworth/König). Sorted ascending.
pub fn max_antichain(p: &Poset) -> Vec<usize> {
    let n = p.len();
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    let mut match_left: Vec<Option<usize>> = vec![None; n];
    for x in 0..n {
        let mut seen = vec![false; n];
        augment(p, x, &mut seen, &mut match_left, &mut match_right);
    }
    // Alternating reachability from unmatched left vertices.
    let mut zl = vec![false; n];
    let mut zr = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&x| match_left[x].is_none()).collect();
    for &x in &stack {
        zl[x] = true;
    }
    while let Some(x) = stack.pop() {
        for y in p.strict_above(x).ones() {
            if !zr[y] && match_left[x] != Some(y) {
                zr[y] = true;
                if let Some(x2) = match_right[y] {
                    if !zl[x2] {
                        zl[x2] = true;
                        stack.push(x2);
                    }
                }
            }
        }
    }
    (0..n).filter(|&x| zl[x] && !zr[x]).collect()
}

fn augment(
    p: &Poset,
    x: usize,
    seen: &mut [bool],
    match_left: &mut [Option<usize>],
    match_right: &mut [Option<usize>],
) -> bool {
    for y in p.strict_above(x).ones() {
        if seen[y] {
            continue;
        }
        seen[y] = true;
        let free = match match_right[y] {
            None => true,
            Some(x2) => augment(p, x2, seen, match_left, match_right),
        };
        if free {
            match_right[y] = Some(x);
            match_left[x] = Some(y);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theoremlab::random_poset;

    fn brute_width(p: &Poset) -> usize {
        let n = p.len();
        (0u32..1 << n)
            .filter(|&m| {
                let xs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
                p.is_antichain(&xs)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn chains_and_antichains() {
        let s = basic_stats(&Poset::chain(5));
        assert_eq!((s.height, s.width), (5, 1));
        let s = basic_stats(&Poset::antichain(5));
        assert_eq!((s.height, s.width), (1, 5));
        let s = basic_stats(&Poset::empty());
        assert_eq!((s.height, s.width), (0, 0));
    }

    #[test]
    fn width_matches_brute_force() {
        for seed in 0..200u64 {
            let n = (seed % 11) as usize;
            let p = random_poset(n, 0.1 + (seed % 7) as f64 * 0.1, seed);
            let a = max_antichain(&p);
            assert!(p.is_antichain(&a));
            assert_eq!(a.len(), brute_width(&p), "seed {seed}");
        }
    }

    #[test]
    fn linear_extension_respects_order() {
        for seed in 0..50u64 {
            let p = random_poset(9, 0.3, seed);
            let le = basic_stats(&p).linear_extension;
            for x in 0..p.len() {
                for y in p.strict_above(x).ones() {
                    assert!(p.rank(x) < p.rank(y));
                    assert!(le.iter().position(|&v| v == x) < le.iter().position(|&v| v == y));
                }
            }
        }
    }
}
