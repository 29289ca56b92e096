//! Sierpinskisations: orders on `0..n` obtained by intersecting the natural
//! order with a second linear order of type ω·β.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ordinal::OrdinalCNF;
use crate::error::{Error, Result};
use crate::poset::{bitset, Poset};
use crate::semilattice::{certify, MapWitness};

/// How the ground set is dealt out to the columns `ω × {β}`. Each scheme
/// works in rounds; round `r` visits, in increasing order of `β`, every
/// column whose truncation digits are all `≤ r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// One element per eligible column per round.
    ColumnAlternating,
    /// `k` consecutive elements per eligible column per round.
    Block(usize),
    /// One element per eligible column per round, in an order shuffled by
    /// ChaCha8 from the seed.
    SeededShuffle(u64),
}

#[derive(Clone, Debug)]
pub struct Sierpinskisation {
    pub poset: Poset,
    /// Column of each element, as an index into the truncated points of β.
    pub columns: Vec<usize>,
    /// `φ(x) = (m, column)`: `x` is the `m`-th element of its column.
    pub phi: Vec<(usize, usize)>,
    /// Elements sorted by the ω·β order. The other linear order is the
    /// natural order on indices.
    pub second_order: Vec<usize>,
}

fn column_sequence(births: &[usize], n: usize, scheme: Scheme) -> Result<Vec<usize>> {
    if let Scheme::Block(0) = scheme {
        return Err(Error::UnsupportedParams("block size must be positive".into()));
    }
    let mut rng = match scheme {
        Scheme::SeededShuffle(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut out = Vec::with_capacity(n);
    let mut round = 0;
    while out.len() < n {
        let mut eligible: Vec<usize> = (0..births.len()).filter(|&c| births[c] <= round).collect();
        if let Some(rng) = rng.as_mut() {
            eligible.shuffle(rng);
        }
        let reps = match scheme {
            Scheme::Block(k) => k,
            _ => 1,
        };
        for c in eligible {
            out.extend(std::iter::repeat_n(c, reps));
        }
        round += 1;
    }
    out.truncate(n);
    Ok(out)
}

/// Monotonic sierpinskisation of `alpha = ω·β` on `0..n`.
pub fn sierpinskisation_detail(alpha: &OrdinalCNF, n: usize, scheme: Scheme) -> Result<Sierpinskisation> {
    let beta = alpha.as_omega_multiple()?;
    let points = beta.positions(n.max(1))?;
    let births: Vec<usize> = points.iter().map(|p| p.birth()).collect();
    let columns = column_sequence(&births, n, scheme)?;
    let mut seen = vec![0usize; points.len()];
    let phi: Vec<(usize, usize)> = columns
        .iter()
        .map(|&c| {
            seen[c] += 1;
            (seen[c] - 1, c)
        })
        .collect();
    let key = |x: usize| (phi[x].1, phi[x].0);
    let mut second_order: Vec<usize> = (0..n).collect();
    second_order.sort_by_key(|&x| key(x));
    let labels = phi
        .iter()
        .map(|&(m, c)| format!("({m},{})", beta.position_label(&points[c])))
        .collect();
    let poset = Poset::from_fn(n, Some(labels), |x, y| x < y && key(x) < key(y))?;
    Ok(Sierpinskisation {
        poset,
        columns,
        phi,
        second_order,
    })
}

pub fn sierpinskisation(alpha: &OrdinalCNF, n: usize, scheme: Scheme) -> Result<Poset> {
    Ok(sierpinskisation_detail(alpha, n, scheme)?.poset)
}

/// Splits `0..n` into maximal consecutive runs on which the column strictly
/// increases; `r(x)` is the index of the run containing `x`.
pub fn r_map(columns: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(columns.len());
    let mut run = 0;
    for (x, &c) in columns.iter().enumerate() {
        if x > 0 && c <= columns[x - 1] {
            run += 1;
        }
        out.push(run);
    }
    out
}

/// `x ↦ (r(x), column(x))` into the product of two chains.
pub fn theta_embedding(s: &Sierpinskisation) -> Result<MapWitness> {
    let r = r_map(&s.columns);
    let rows = r.iter().max().map_or(0, |m| m + 1);
    let cols = s.columns.iter().max().map_or(0, |m| m + 1);
    let target = Poset::chain(rows).direct_product(&Poset::chain(cols));
    let table = (0..s.poset.len()).map(|x| r[x] * cols + s.columns[x]).collect();
    certify(&s.poset, &target, table)
}

/// The points `(i, β)` with `β`'s digits all `≤ i < n`, ordered as a
/// subset of the product of the chain `n` and the truncation of `beta`.
/// Every vertical line is nonempty and every horizontal line is a final
/// segment of `0..n`, which makes the set join-closed in the product.
pub fn lattice_sierp(beta: &OrdinalCNF, n: usize) -> Result<Poset> {
    if beta.is_zero() {
        return Err(Error::UnsupportedOrdinal("0".into()));
    }
    let points = beta.positions(n)?;
    let elems: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| {
            points
                .iter()
                .enumerate()
                .filter(move |(_, p)| p.birth() <= i)
                .map(move |(b, _)| (i, b))
        })
        .collect();
    let m = elems.len();
    let above = (0..m)
        .map(|a| {
            let mut row = bitset(m);
            for b in 0..m {
                if a != b && elems[a].0 <= elems[b].0 && elems[a].1 <= elems[b].1 {
                    row.insert(b);
                }
            }
            row
        })
        .collect();
    let labels = elems
        .iter()
        .map(|&(i, b)| format!("({i},{})", beta.position_label(&points[b])))
        .collect();
    let p = Poset::from_above(above, Some(labels));
    debug_assert!(lattice_sierp_window_ok(&elems, n, points.len()));
    Ok(p)
}

fn lattice_sierp_window_ok(elems: &[(usize, usize)], n: usize, width: usize) -> bool {
    use std::collections::HashSet;
    let set: HashSet<(usize, usize)> = elems.iter().copied().collect();
    let join_closed = elems.iter().all(|&(i, a)| {
        elems
            .iter()
            .all(|&(j, b)| set.contains(&(i.max(j), a.max(b))))
    });
    let vertical = (0..n).all(|i| elems.iter().any(|&(k, _)| k == i));
    let horizontal = (0..width).all(|b| {
        let line: Vec<usize> = elems.iter().filter(|e| e.1 == b).map(|e| e.0).collect();
        line.last() == Some(&(n - 1)) && line.windows(2).all(|w| w[1] == w[0] + 1)
    });
    join_closed && vertical && horizontal
}

/// `Ω(β) ⊕ c` for `alpha = ω·β + c`, the first summand truncated to `n`
/// elements with the column-alternating scheme; a chain when `alpha` is
/// finite.
pub fn s_alpha(alpha: &OrdinalCNF, n: usize) -> Result<Poset> {
    let tail = alpha.finite_part() as usize;
    let chain = Poset::chain(tail).with_labels(Some((0..tail).map(|k| format!("t{k}")).collect()));
    if alpha.is_finite() {
        return Ok(chain);
    }
    let head_alpha = OrdinalCNF::new(std::iter::once(0).chain(alpha.coeffs()[1..].iter().copied()).collect());
    let head = sierpinskisation(&head_alpha, n, Scheme::ColumnAlternating)?;
    Ok(head.direct_sum(&chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{is_isomorphic, IsoOptions};
    use crate::semilattice::structure_report;

    fn omega_times(k: u64) -> OrdinalCNF {
        OrdinalCNF::new(vec![0, k])
    }

    #[test]
    fn omega_two_alternating() {
        let s = sierpinskisation_detail(&omega_times(2), 6, Scheme::ColumnAlternating).unwrap();
        let p = &s.poset;
        assert_eq!(s.columns, vec![0, 1, 0, 1, 0, 1]);
        for (a, b) in [(0, 2), (2, 4), (1, 3), (3, 5), (0, 1), (2, 3), (4, 5), (0, 3), (0, 5), (2, 5)] {
            assert!(p.lt(a, b), "{a} < {b}");
        }
        assert!(!p.comparable(1, 2));
        assert!(!p.comparable(3, 4));
        assert_eq!(crate::poset::basic_stats(p).width, 2);
    }

    #[test]
    fn omega_one_is_chain() {
        let p = sierpinskisation(&omega_times(1), 5, Scheme::ColumnAlternating).unwrap();
        assert_eq!(p.strict_pairs().len(), 10);
    }

    #[test]
    fn order_is_intersection_and_columns_monotone() {
        let alphas = [omega_times(3), OrdinalCNF::new(vec![0, 0, 1]), OrdinalCNF::new(vec![0, 2, 1])];
        let schemes = [Scheme::ColumnAlternating, Scheme::Block(2), Scheme::SeededShuffle(7)];
        for a in &alphas {
            for &sc in &schemes {
                let s = sierpinskisation_detail(a, 12, sc).unwrap();
                let pos: Vec<usize> = {
                    let mut v = vec![0; 12];
                    for (k, &x) in s.second_order.iter().enumerate() {
                        v[x] = k;
                    }
                    v
                };
                for x in 0..12 {
                    for y in 0..12 {
                        assert_eq!(s.poset.lt(x, y), x < y && pos[x] < pos[y]);
                        if x < y && s.columns[x] == s.columns[y] {
                            assert!(s.phi[x].0 < s.phi[y].0);
                        }
                    }
                }
                let w = theta_embedding(&s).unwrap();
                assert!(w.certified().order_embedding, "{a} {sc:?}");
            }
        }
    }

    #[test]
    fn non_multiples_rejected() {
        assert!(matches!(
            sierpinskisation(&OrdinalCNF::new(vec![1, 1]), 4, Scheme::ColumnAlternating),
            Err(Error::UnsupportedOrdinal(_))
        ));
        assert!(lattice_sierp(&OrdinalCNF::finite(0), 3).is_err());
    }

    #[test]
    fn lattice_sierp_shapes() {
        let two = lattice_sierp(&OrdinalCNF::finite(2), 4).unwrap();
        let grid = Poset::chain(4).direct_product(&Poset::chain(2));
        assert!(is_isomorphic(&two, &grid, IsoOptions::default()).unwrap().is_some());
        assert!(structure_report(&two).is_join_semilattice);

        let one = lattice_sierp(&OrdinalCNF::finite(1), 5).unwrap();
        assert_eq!(one.strict_pairs().len(), 10);

        let w = lattice_sierp(&OrdinalCNF::new(vec![0, 1]), 5).unwrap();
        assert_eq!(w.len(), 15);
        assert!(structure_report(&w).is_join_semilattice);
        // Staircase {(i,j) : j ≤ i < 5}, ordered componentwise.
        let stair: Vec<(usize, usize)> = (0..5).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
        let expect = Poset::from_fn(15, None, |a, b| {
            a != b && stair[a].0 <= stair[b].0 && stair[a].1 <= stair[b].1
        })
        .unwrap();
        assert!(is_isomorphic(&w, &expect, IsoOptions::forced()).unwrap().is_some());
    }

    #[test]
    fn alternating_theta_image_is_lattice_sierp() {
        let s = sierpinskisation_detail(&omega_times(2), 8, Scheme::ColumnAlternating).unwrap();
        let ls = lattice_sierp(&OrdinalCNF::finite(2), 4).unwrap();
        assert!(is_isomorphic(&s.poset, &ls, IsoOptions::default()).unwrap().is_some());
    }

    #[test]
    fn s_alpha_shapes() {
        let p = s_alpha(&OrdinalCNF::new(vec![2, 2]), 6).unwrap();
        assert_eq!(p.len(), 8);
        assert_eq!(p.maximals().len(), 2);
        assert_eq!(s_alpha(&OrdinalCNF::finite(3), 6).unwrap().len(), 3);
    }
}
