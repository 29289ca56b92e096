use super::OpTable;
use crate::error::{Error, Result};
use crate::poset::Poset;

fn checked_joins(p: &Poset) -> Result<(OpTable, usize)> {
    let jt = OpTable::joins(p);
    if !jt.is_total() {
        return Err(Error::NotJoinSemilattice);
    }
    let bottom = p.least().ok_or(Error::NoLeastElement)?;
    Ok((jt, bottom))
}

/// Elements other than the least one that are not the join of two
/// elements different from themselves.
pub fn join_irreducibles(p: &Poset) -> Result<Vec<usize>> {
    let (jt, bottom) = checked_joins(p)?;
    let n = p.len();
    Ok((0..n)
        .filter(|&x| x != bottom)
        .filter(|&x| {
            (0..n).all(|a| (a..n).all(|b| jt.at(a, b) != x || a == x || b == x))
        })
        .collect())
}

/// Elements other than the least one such that `x ≤ a ∨ b` forces
/// `x ≤ a` or `x ≤ b`.
pub fn join_primes(p: &Poset) -> Result<Vec<usize>> {
    let (jt, bottom) = checked_joins(p)?;
    let n = p.len();
    Ok((0..n)
        .filter(|&x| x != bottom)
        .filter(|&x| {
            (0..n).all(|a| {
                (a..n).all(|b| !p.le(x, jt.at(a, b)) || p.le(x, a) || p.le(x, b))
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{finite_powerset, l_alpha};
    use crate::segments::{downset_lattice_family, principal};

    #[test]
    fn powerset_atoms() {
        let b3 = finite_powerset(3);
        assert_eq!(join_irreducibles(&b3).unwrap(), vec![1, 2, 4]);
        assert_eq!(join_primes(&b3).unwrap(), vec![1, 2, 4]);
    }

    #[test]
    fn pentagon() {
        // bottom 0, side 1, lower chain 2, upper chain 3, top 4
        let p = l_alpha(2);
        assert_eq!(join_irreducibles(&p).unwrap(), vec![1, 2, 3]);
        assert_eq!(join_primes(&p).unwrap(), vec![1, 2]);
    }

    #[test]
    fn errors() {
        assert!(matches!(join_irreducibles(&Poset::antichain(2)), Err(Error::NotJoinSemilattice)));
        let v = Poset::antichain(2).ordinal_sum(&Poset::chain(1));
        assert!(matches!(join_primes(&v), Err(Error::NoLeastElement)));
    }

    #[test]
    fn downset_lattice_irreducibles_are_principal() {
        let q = Poset::chain(2).direct_sum(&Poset::antichain(2));
        let (lat, fam) = downset_lattice_family(&q).unwrap();
        let mut expected: Vec<usize> = (0..q.len())
            .map(|x| fam.index_of(&principal(&q, x)).unwrap())
            .collect();
        expected.sort_unstable();
        assert_eq!(join_irreducibles(&lat).unwrap(), expected);
        assert_eq!(join_primes(&lat).unwrap(), expected);
    }
}
