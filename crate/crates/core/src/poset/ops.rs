use super::{bitset, Poset};
use crate::error::{Error, Result};

fn pair_labels(a: &Poset, b: &Poset, fmt: impl Fn(&str, &str) -> String) -> Option<Vec<String>> {
    if a.labels().is_none() && b.labels().is_none() {
        return None;
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in 0..a.len() {
        for y in 0..b.len() {
            out.push(fmt(&a.label(x), &b.label(y)));
        }
    }
    Some(out)
}

impl Poset {
    /// The dual order, same indices and labels.
    pub fn dual(&self) -> Poset {
        Poset::from_above(self.below.clone(), self.labels.clone())
    }

    /// Product order; `(a, b)` is encoded as `a * |B| + b`.
    pub fn direct_product(&self, other: &Poset) -> Poset {
        let (na, nb) = (self.len(), other.len());
        let n = na * nb;
        let mut above = vec![bitset(n); n];
        for a in 0..na {
            let ua = self.up(a);
            for b in 0..nb {
                let ub = other.up(b);
                let row = &mut above[a * nb + b];
                for a2 in ua.ones() {
                    for b2 in ub.ones() {
                        if a2 != a || b2 != b {
                            row.insert(a2 * nb + b2);
                        }
                    }
                }
            }
        }
        let labels = pair_labels(self, other, |x, y| format!("({x},{y})"));
        Poset::from_above(above, labels)
    }

    /// Disjoint union with no cross comparabilities; `self` comes first.
    pub fn direct_sum(&self, other: &Poset) -> Poset {
        let parts = [self.clone(), other.clone()];
        Poset::lexicographic_sum(&Poset::antichain(2), &parts).expect("two parts")
    }

    /// Ordinal sum: every element of `self` below every element of `other`.
    pub fn ordinal_sum(&self, other: &Poset) -> Poset {
        let parts = [self.clone(), other.clone()];
        Poset::lexicographic_sum(&Poset::chain(2), &parts).expect("two parts")
    }

    /// Sum of `parts` indexed by `index`: `(i,x) < (j,y)` iff `i < j` in the
    /// index, or `i = j` and `x < y`. Parts are laid out consecutively in
    /// index order.
    pub fn lexicographic_sum(index: &Poset, parts: &[Poset]) -> Result<Poset> {
        if parts.len() != index.len() {
            return Err(Error::ArityMismatch {
                expected: index.len(),
                got: parts.len(),
            });
        }
        let mut offset = Vec::with_capacity(parts.len() + 1);
        offset.push(0);
        for p in parts {
            offset.push(offset.last().unwrap() + p.len());
        }
        let n = *offset.last().unwrap();
        let mut above = vec![bitset(n); n];
        for (i, p) in parts.iter().enumerate() {
            for x in 0..p.len() {
                let row = &mut above[offset[i] + x];
                for y in p.strict_above(x).ones() {
                    row.insert(offset[i] + y);
                }
                for j in index.strict_above(i).ones() {
                    row.insert_range(offset[j]..offset[j + 1]);
                }
            }
        }
        let labels = if parts.iter().any(|p| p.labels().is_some()) {
            Some(
                parts
                    .iter()
                    .flat_map(|p| (0..p.len()).map(move |x| p.label(x)))
                    .collect(),
            )
        } else {
            None
        };
        Ok(Poset::from_above(above, labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{is_isomorphic, IsoOptions, RelationKind};

    fn iso(a: &Poset, b: &Poset) -> bool {
        is_isomorphic(a, b, IsoOptions::default()).unwrap().is_some()
    }

    fn diamond() -> Poset {
        Poset::build(4, RelationKind::Covers, &[(0, 1), (0, 2), (1, 3), (2, 3)], None).unwrap()
    }

    #[test]
    fn dual_is_involution() {
        let d = diamond();
        assert_eq!(d.dual().dual(), d);
        assert!(iso(&Poset::chain(3).dual(), &Poset::chain(3)));
        assert_eq!(d.dual().minimals(), d.maximals());
        assert!(d.dual().lt(3, 0));
    }

    #[test]
    fn product_examples() {
        let c2 = Poset::chain(2);
        let sq = c2.direct_product(&c2);
        assert!(iso(&sq, &diamond()));
        assert!(sq.lt(0, 3) && !sq.comparable(1, 2));
        let d = diamond();
        assert!(iso(&d.direct_product(&Poset::chain(1)), &d));
    }

    #[test]
    fn sum_examples() {
        let one = Poset::chain(1);
        assert_eq!(one.direct_sum(&one), Poset::antichain(2));
        let s = Poset::lexicographic_sum(&Poset::chain(2), &[one.clone(), one.clone()]).unwrap();
        assert_eq!(s, Poset::chain(2));
        let d = diamond();
        assert_eq!(d.direct_sum(&Poset::chain(2)).maximals(), vec![3, 5]);
        assert!(matches!(
            Poset::lexicographic_sum(&Poset::chain(2), &[one]),
            Err(Error::ArityMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn pentagon_as_lexicographic_sum() {
        let one = Poset::chain(1);
        let middle = one.direct_sum(&Poset::chain(2));
        let pentagon =
            Poset::lexicographic_sum(&Poset::chain(3), &[one.clone(), middle, one]).unwrap();
        assert_eq!(pentagon.len(), 5);
        assert_eq!(pentagon.transitive_reduction().pairs.len(), 5);
        assert!(!iso(&pentagon, &diamond().ordinal_sum(&Poset::chain(1))));
    }

    #[test]
    fn antichain_index_sum_is_direct_sum_fold() {
        let parts = [Poset::chain(2), diamond(), Poset::antichain(2)];
        let s = Poset::lexicographic_sum(&Poset::antichain(3), &parts).unwrap();
        let folded = parts[0].direct_sum(&parts[1]).direct_sum(&parts[2]);
        assert_eq!(s, folded);
    }
}
