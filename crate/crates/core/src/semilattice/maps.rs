//! Maps between powerset quotients, the Δ family, and downset lattices.

use serde::{Deserialize, Serialize};

use super::{
    certify, generated_with, is_distributive_tables, is_independent, join_irreducibles, MapWitness,
    OpTable,
};
use crate::error::{Error, Result};
use crate::families::{delta, delta_coords, delta_index, finite_powerset, OMEGA};
use crate::poset::Poset;
use crate::segments::downset_lattice_family;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiQuotient {
    /// Elements of the sublattice generated by the independent set, sorted.
    pub generated: Vec<usize>,
    /// `x ↦ {i : L[i] ≤ x}` from the generated sublattice onto the powerset
    /// lattice, bit `i` standing for `L[i]`.
    pub witness: MapWitness,
    /// Every member of the independent set is join-irreducible in the
    /// generated sublattice.
    pub generators_join_irreducible: bool,
}

fn distributive_tables(t: &Poset) -> Result<(OpTable, OpTable)> {
    let jt = OpTable::joins(t);
    let mt = OpTable::meets(t);
    if !jt.is_total() || !mt.is_total() || !is_distributive_tables(&jt, &mt) {
        return Err(Error::NotDistributive);
    }
    Ok((jt, mt))
}

/// Quotient of the sublattice generated by an independent set `l` onto the
/// lattice of subsets of `l`.
pub fn phi_quotient(t: &Poset, l: &[usize]) -> Result<PhiQuotient> {
    let (jt, mt) = distributive_tables(t)?;
    if l.len() < 2 {
        return Err(Error::Precondition("need at least two independent elements".into()));
    }
    if let Some(&bad) = l.iter().find(|&&x| x >= t.len()) {
        return Err(Error::IndexOutOfRange { index: bad, n: t.len() });
    }
    if l.len() >= usize::BITS as usize || !is_independent(t, &jt, l) {
        return Err(Error::NotIndependent);
    }
    let generated = generated_with(t.len(), l, Some(&jt), Some(&mt))?;
    let source = t.induced(&generated);
    let target = finite_powerset(l.len());
    let table = generated
        .iter()
        .map(|&g| {
            l.iter()
                .enumerate()
                .filter(|&(_, &a)| t.le(a, g))
                .fold(0usize, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let witness = certify(&source, &target, table)?;
    let irr = join_irreducibles(&source)?;
    let generators_join_irreducible = l.iter().all(|a| {
        let pos = generated.binary_search(a).expect("generator in closure");
        irr.contains(&pos)
    });
    Ok(PhiQuotient {
        generated,
        witness,
        generators_join_irreducible,
    })
}

/// Builds a meet-preserving map from `Δ_{n-1}` into the source of `phi`,
/// a lattice homomorphism onto the powerset lattice of an `n`-set, whose
/// column tops map to the singletons `{i}`. Representatives of the fibres
/// are the smallest indices.
pub fn delta_from_hom(phi: &MapWitness) -> Result<MapWitness> {
    let c = phi.certified();
    if !c.lattice_hom {
        return Err(Error::NotLatticeHom);
    }
    if !c.surjective {
        return Err(Error::NotSurjective);
    }
    let m = phi.target().len();
    if !m.is_power_of_two() {
        return Err(Error::StructureMismatch("target is not a powerset lattice".into()));
    }
    let n = m.trailing_zeros() as usize;
    if phi.target().strict_pairs() != finite_powerset(n).strict_pairs() {
        return Err(Error::StructureMismatch("target is not a powerset lattice".into()));
    }
    if n < 2 {
        return Err(Error::Precondition("powerset must have at least two atoms".into()));
    }
    let t = phi.source();
    let jt = OpTable::joins(t);
    let mt = OpTable::meets(t);
    if !jt.is_total() || !mt.is_total() {
        return Err(Error::StructureMismatch("source is not a lattice".into()));
    }
    let fibre = |mask: usize| -> usize {
        phi.table()
            .iter()
            .position(|&v| v == mask)
            .expect("surjective map has nonempty fibres")
    };
    let b0 = fibre(0);
    let mut tops = Vec::with_capacity(n);
    tops.push(jt.at(fibre(1), b0));
    tops.push(jt.at(fibre(2), b0));
    for k in 2..n {
        let mut bk: Option<usize> = None;
        for i in 0..k {
            for j in i + 1..k {
                let v = mt.at(tops[i], tops[j]);
                bk = Some(bk.map_or(v, |acc| jt.at(acc, v)));
            }
        }
        let bk = bk.expect("k >= 2 gives a pair");
        tops.push(jt.at(bk, fibre(1 << k)));
    }
    let table = delta_coords(n - 1)
        .into_iter()
        .map(|(i, j)| {
            if j == OMEGA {
                tops[i]
            } else {
                mt.at(tops[i], tops[j])
            }
        })
        .collect();
    certify(&delta(n - 1), t, table)
}

/// Evaluation of a map `Δ_n → P` against the equivalent conditions for
/// meet preservation and the two strictness conditions for injectivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub n: usize,
    pub meet_preserving: bool,
    pub order_preserving: bool,
    /// `f(i,j) ≤ f(k,ω)` for `i<j<k`.
    pub below_later_top: bool,
    /// `f(i,j) ≤ f(j,k)` for `i<j<k`.
    pub below_next_pair: bool,
    /// `f(i,j) ≤ f(i,k)` for `i<j<k`.
    pub below_same_row: bool,
    /// `f(i,j) = f(i,k) ∧ f(j,k)` for `i<j<k`.
    pub pair_meet: bool,
    /// `f(i,j) < f(j,k)` for `i<j<k`, with `k` ranging up to `ω`.
    pub strict_next_pair: bool,
    /// `f(i,j) < f(i,k)` for `i<j<k`, with `k` ranging up to `ω`.
    pub strict_same_row: bool,
    pub injective: bool,
    /// All six meet-preservation conditions share one truth value.
    pub conditions_agree: bool,
    /// When they hold: injective iff both strictness conditions hold.
    pub injectivity_agrees: bool,
}

impl DeltaReport {
    pub fn consistent(&self) -> bool {
        self.conditions_agree && self.injectivity_agrees
    }
}

/// Checks a map from `delta(n)` into `p`, given as a table over the
/// `delta(n)` element order. The map must satisfy
/// `f(i,j) = f(i,ω) ∧ f(j,ω)`.
pub fn check_delta_map(n: usize, p: &Poset, table: &[usize]) -> Result<DeltaReport> {
    let mt = OpTable::meets(p);
    if !mt.is_total() {
        return Err(Error::StructureMismatch("target is not a meet-semilattice".into()));
    }
    let dom = delta(n);
    let w = certify(&dom, p, table.to_vec())?;
    let f = |i: usize, j: usize| table[delta_index(n, i, j)];
    for i in 0..=n {
        for j in i + 1..=n {
            if f(i, j) != mt.at(f(i, OMEGA), f(j, OMEGA)) {
                return Err(Error::BaseHypothesisViolated { i, j });
            }
        }
    }
    let le = |a: usize, b: usize| p.le(a, b);
    let lt = |a: usize, b: usize| p.lt(a, b);
    let (mut iii, mut iv, mut v, mut vi) = (true, true, true, true);
    let (mut sa, mut sb) = (true, true);
    for i in 0..=n {
        for j in i + 1..=n {
            for k in (j + 1..=n).chain(std::iter::once(OMEGA)) {
                if k != OMEGA {
                    iii &= le(f(i, j), f(k, OMEGA));
                    iv &= le(f(i, j), f(j, k));
                    v &= le(f(i, j), f(i, k));
                    vi &= f(i, j) == mt.at(f(i, k), f(j, k));
                }
                sa &= lt(f(i, j), f(j, k));
                sb &= lt(f(i, j), f(i, k));
            }
        }
    }
    let c = w.certified();
    let all = [c.meet_preserving, c.order_preserving, iii, iv, v, vi];
    let conditions_agree = all.iter().all(|&b| b == all[0]);
    let injectivity_agrees = !all[0] || c.injective == (sa && sb);
    Ok(DeltaReport {
        n,
        meet_preserving: c.meet_preserving,
        order_preserving: c.order_preserving,
        below_later_top: iii,
        below_next_pair: iv,
        below_same_row: v,
        pair_meet: vi,
        strict_next_pair: sa,
        strict_same_row: sb,
        injective: c.injective,
        conditions_agree,
        injectivity_agrees,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FVee {
    /// From the nonempty downsets of the source (in downset-lattice order,
    /// empty set dropped) into the target.
    pub witness: MapWitness,
    pub map_injective: bool,
    /// No image is the join of images of other elements below it.
    pub no_join_collapse: bool,
    /// `map_injective && no_join_collapse`.
    pub predicted_injective: bool,
    /// The prediction matches the table.
    pub agrees: bool,
}

/// Extends a meet-preserving map into a distributive lattice to the
/// nonempty downsets of its source by taking joins of images.
pub fn f_vee(f: &MapWitness) -> Result<FVee> {
    if !f.certified().meet_preserving {
        return Err(Error::NotMeetPreserving);
    }
    let t = f.target();
    let (jt, _) = distributive_tables(t)?;
    let p = f.source();
    let (lat, fam) = downset_lattice_family(p)?;
    // Index 0 is the empty downset in canonical order.
    let nonempty: Vec<usize> = (1..lat.len()).collect();
    let i0 = lat.induced(&nonempty);
    let table = fam.sets[1..]
        .iter()
        .map(|s| jt.fold(s.bits().ones().map(|a| f.apply(a))).expect("nonempty downset"))
        .collect();
    let witness = certify(&i0, t, table)?;
    let map_injective = f.certified().injective;
    let no_join_collapse = (0..p.len()).all(|x| {
        let fx = f.apply(x);
        let below = (0..p.len()).filter(|&y| y != x && t.le(f.apply(y), fx));
        jt.fold(below.map(|y| f.apply(y))) != Some(fx)
    });
    let predicted_injective = map_injective && no_join_collapse;
    Ok(FVee {
        agrees: predicted_injective == witness.certified().injective,
        witness,
        map_injective,
        no_join_collapse,
        predicted_injective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::gamma;
    use crate::segments::principal;

    fn principal_map(p: &Poset) -> MapWitness {
        let (lat, fam) = downset_lattice_family(p).unwrap();
        let table = (0..p.len()).map(|x| fam.index_of(&principal(p, x)).unwrap()).collect();
        certify(p, &lat, table).unwrap()
    }

    #[test]
    fn phi_on_powerset_is_iso() {
        let b3 = finite_powerset(3);
        let q = phi_quotient(&b3, &[1, 2, 4]).unwrap();
        assert_eq!(q.generated.len(), 8);
        let c = q.witness.certified();
        assert!(c.lattice_hom && c.injective && c.surjective);
        assert!(q.generators_join_irreducible);
    }

    #[test]
    fn phi_on_delta_downsets() {
        for (p, k) in [(delta(2), 3usize), (gamma(3), 4)] {
            let (lat, fam) = downset_lattice_family(&p).unwrap();
            let cols: Vec<usize> = (p.len() - k..p.len())
                .map(|x| fam.index_of(&principal(&p, x)).unwrap())
                .collect();
            let q = phi_quotient(&lat, &cols).unwrap();
            let c = q.witness.certified();
            assert!(c.lattice_hom && c.surjective);
            assert_eq!(q.witness.target().len(), 1 << k);
            assert!(q.generators_join_irreducible);
        }
    }

    #[test]
    fn phi_errors() {
        let b3 = finite_powerset(3);
        assert!(matches!(phi_quotient(&b3, &[1, 3]), Err(Error::NotIndependent)));
        let m5 = crate::families::l_alpha(2);
        assert!(matches!(phi_quotient(&m5, &[1, 2]), Err(Error::NotDistributive)));
    }

    #[test]
    fn delta_from_identity() {
        let b3 = finite_powerset(3);
        let id = certify(&b3, &b3, (0..8).collect()).unwrap();
        let f = delta_from_hom(&id).unwrap();
        assert!(f.certified().meet_preserving);
        // Column tops are the singletons; every pair meets in the empty set.
        let d = delta(2);
        for (x, (_, j)) in delta_coords(2).into_iter().enumerate() {
            let expect = if j == OMEGA { 1 << (x - 3) } else { 0 };
            assert_eq!(f.apply(x), expect, "{}", d.label(x));
        }
        let r = check_delta_map(2, &b3, f.table()).unwrap();
        assert!(r.meet_preserving && r.consistent());
    }

    #[test]
    fn delta_from_quotient_hits_singletons() {
        let p = delta(2);
        let (lat, fam) = downset_lattice_family(&p).unwrap();
        let cols: Vec<usize> = (3..6).map(|x| fam.index_of(&principal(&p, x)).unwrap()).collect();
        let q = phi_quotient(&lat, &cols).unwrap();
        let f = delta_from_hom(&q.witness).unwrap();
        assert!(f.certified().meet_preserving);
        for i in 0..3 {
            let x = delta_index(2, i, OMEGA);
            assert_eq!(q.witness.apply(f.apply(x)), 1 << i);
        }
    }

    #[test]
    fn delta_from_hom_rejects_non_surjective() {
        let b2 = finite_powerset(2);
        let b3 = finite_powerset(3);
        let w = certify(&b2, &b3, vec![0, 1, 2, 3]).unwrap();
        assert!(matches!(delta_from_hom(&w), Err(Error::NotSurjective)));
    }

    #[test]
    fn principal_delta_map_is_injective() {
        let p = delta(3);
        let w = principal_map(&p);
        let r = check_delta_map(3, w.target(), w.table()).unwrap();
        assert!(r.meet_preserving && r.injective && r.strict_next_pair && r.strict_same_row);
        assert!(r.consistent());
    }

    #[test]
    fn constant_map() {
        let p = Poset::chain(1);
        let r = check_delta_map(3, &p, &vec![0; delta(3).len()]).unwrap();
        assert!(r.meet_preserving && r.below_later_top && r.pair_meet);
        assert!(!r.strict_next_pair && !r.strict_same_row && !r.injective);
        assert!(r.consistent());
    }

    #[test]
    fn violated_third_condition() {
        // f(0,1) = f(0,ω) ∧ f(1,ω) is the top of B_2, f(2,ω) the bottom.
        let b2 = finite_powerset(2);
        let tops = [3usize, 3, 0];
        let table: Vec<usize> = delta_coords(2)
            .into_iter()
            .map(|(i, j)| if j == OMEGA { tops[i] } else { tops[i] & tops[j] })
            .collect();
        let r = check_delta_map(2, &b2, &table).unwrap();
        assert!(!r.below_later_top);
        assert!(!r.meet_preserving && !r.order_preserving && !r.pair_meet);
        assert!(r.conditions_agree);
    }

    #[test]
    fn base_hypothesis_checked() {
        let b2 = finite_powerset(2);
        let mut table = vec![0; delta(1).len()];
        table[0] = 3;
        assert!(matches!(
            check_delta_map(1, &b2, &table),
            Err(Error::BaseHypothesisViolated { i: 0, j: 1 })
        ));
    }

    #[test]
    fn f_vee_examples() {
        let c2 = Poset::chain(2);
        let b2 = finite_powerset(2);
        let f = certify(&c2, &b2, vec![0, 1]).unwrap();
        let v = f_vee(&f).unwrap();
        assert!(v.witness.certified().lattice_hom && v.predicted_injective && v.agrees);

        let g = gamma(2);
        let v = f_vee(&principal_map(&g)).unwrap();
        assert!(v.witness.certified().lattice_hom && v.witness.certified().injective && v.agrees);
    }

    #[test]
    fn f_vee_detects_join_collapse() {
        let p = delta(2);
        let (lat, fam) = downset_lattice_family(&p).unwrap();
        let mut table: Vec<usize> =
            (0..p.len()).map(|x| fam.index_of(&principal(&p, x)).unwrap()).collect();
        // Send (2,ω) to ↓(0,2) ∪ ↓(1,2) instead of its principal downset.
        let collapsed = principal(&p, delta_index(2, 0, 2)).union(&principal(&p, delta_index(2, 1, 2)));
        table[delta_index(2, 2, OMEGA)] = fam.index_of(&collapsed).unwrap();
        let f = certify(&p, &lat, table).unwrap();
        assert!(f.certified().meet_preserving && f.certified().injective);
        let v = f_vee(&f).unwrap();
        assert!(v.witness.certified().lattice_hom);
        assert!(!v.no_join_collapse && !v.witness.certified().injective && v.agrees);
    }

    #[test]
    fn f_vee_requires_meet_preservation() {
        let b2 = finite_powerset(2);
        let f = certify(&b2, &b2, vec![3, 1, 2, 3]).unwrap();
        assert!(matches!(f_vee(&f), Err(Error::NotMeetPreserving)));
    }
}
