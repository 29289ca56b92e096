//! From an independent set in a finite distributive lattice to a sublattice
//! isomorphic to the nonempty downsets of a Δ, Γ or V pattern.

use super::ramsey::pattern_size;
use super::{ramsey_extract_with, Certificate, Payload, PatternPayload, Shape, TripleClass};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::families::{delta, delta_coords, delta_index, OMEGA};
use crate::poset::Poset;
use crate::semilattice::{
    certify, delta_from_hom, f_vee, find_independent_set_with, is_distributive_lattice, phi_quotient, MapWitness,
};

pub fn thm8_pipeline(t: &Poset, k: usize) -> Result<Certificate> {
    thm8_pipeline_with(t, k, &Budget::nodes())
}

/// Runs independent set → powerset quotient → Δ map → monochromatic
/// subset of the column tops → join extension, thinning a Δ pattern to
/// even coordinates when the extension collapses.
pub fn thm8_pipeline_with(t: &Poset, k: usize, budget: &Budget) -> Result<Certificate> {
    if k < 4 {
        return Err(Error::Precondition("independence target must be at least 4".into()));
    }
    if !is_distributive_lattice(t) {
        return Err(Error::NotDistributive);
    }
    let Some(l) = find_independent_set_with(t, k, budget)? else {
        let mut found = k - 1;
        while found > 0 && find_independent_set_with(t, found, budget)?.is_none() {
            found -= 1;
        }
        return Err(Error::IndependenceTooSmall { required: k, found });
    };
    let phi = phi_quotient(t, &l)?;
    let local = delta_from_hom(&phi.witness)?;
    let table = local.table().iter().map(|&g| phi.generated[g]).collect();
    let f = certify(local.source(), t, table)?;
    let tops: Vec<usize> = (0..k).map(|i| f.apply(delta_index(k - 1, i, OMEGA))).collect();

    let allowed = [TripleClass::Increasing, TripleClass::Equal, TripleClass::LaterPairHigher];
    let mut ramsey = None;
    for m in (3..=k).rev() {
        match ramsey_extract_with(t, &tops, m, &allowed, budget) {
            Ok(c) => {
                ramsey = Some(c);
                break;
            }
            Err(Error::NoMonochromaticSubset { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let Some(ramsey) = ramsey else {
        return Err(Error::NoMonochromaticSubset { m: 3, n: k });
    };
    let Payload::RamseyClass(r) = &ramsey.payload else {
        unreachable!("ramsey step returns a ramsey certificate")
    };
    let (shape, h) = (r.shape, r.map.clone().expect("allowed classes carry a map"));
    let mut size = pattern_size(shape, r.subset.len());
    let mut ext = f_vee(&h)?;
    if !ext.witness.certified().injective && shape == Shape::DeltaLike && size > 0 {
        let half = size / 2;
        let g = even_thinning(half, size)?;
        ext = f_vee(&g.then(&h)?)?;
        size = half;
    }
    let c = ext.witness.certified();
    if !(c.lattice_hom && c.injective) {
        return Err(Error::ConstructionStalled {
            level: 4,
            partial: Box::new(ramsey),
        });
    }
    Ok(Certificate::new(Payload::SublatticePattern(PatternPayload {
        shape,
        size,
        map: ext.witness,
    })))
}

/// `(i,ω) ↦ (2i,ω)`, `(i,j) ↦ (2i,2j)` from `delta(s)` into `delta(n)`.
fn even_thinning(s: usize, n: usize) -> Result<MapWitness> {
    let table = delta_coords(s)
        .into_iter()
        .map(|(i, j)| {
            if j == OMEGA {
                delta_index(n, 2 * i, OMEGA)
            } else {
                delta_index(n, 2 * i, 2 * j)
            }
        })
        .collect();
    certify(&delta(s), &delta(n), table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{finite_powerset, gamma};
    use crate::segments::downset_lattice;

    fn pattern(c: &Certificate) -> &PatternPayload {
        match &c.payload {
            Payload::SublatticePattern(p) => p,
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn powerset_gives_fan() {
        let c = thm8_pipeline(&finite_powerset(6), 6).unwrap();
        let p = pattern(&c);
        assert_eq!(p.shape, Shape::VLike);
        assert!(c.verify());
    }

    #[test]
    fn delta_downsets_give_delta_pattern() {
        let t = downset_lattice(&delta(4)).unwrap();
        let c = thm8_pipeline(&t, 5).unwrap();
        assert_eq!(pattern(&c).shape, Shape::DeltaLike);
        assert!(c.verify());
    }

    #[test]
    fn gamma_downsets_give_gamma_pattern() {
        let t = downset_lattice(&gamma(4)).unwrap();
        let c = thm8_pipeline(&t, 5).unwrap();
        assert_eq!(pattern(&c).shape, Shape::GammaLike);
        assert!(c.verify());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            thm8_pipeline(&finite_powerset(3), 4),
            Err(Error::IndependenceTooSmall { required: 4, found: 3 })
        ));
        assert!(matches!(thm8_pipeline(&finite_powerset(5), 3), Err(Error::Precondition(_))));
        assert!(matches!(thm8_pipeline(&crate::families::m5(), 4), Err(Error::NotDistributive)));
    }

    #[test]
    fn thinning_is_meet_embedding() {
        let g = even_thinning(2, 4).unwrap();
        assert!(g.certified().meet_preserving && g.certified().injective);
    }
}
