//! Monochromatic subsets of an antichain under the five-way colouring of
//! triples by their pairwise meets.

use serde::{Deserialize, Serialize};

use super::{ev, pattern_poset, Certificate, Evidence, Payload, RamseyPayload};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::families::{delta_coords, gamma_coords, OMEGA};
use crate::poset::Poset;
use crate::semilattice::{certify, MapWitness, OpTable};

/// Colour of a triple `x < y < z` (positions in the antichain) by the meets
/// `xy = x∧y`, `xz = x∧z`, `yz = y∧z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleClass {
    /// `xy` and `xz` are incomparable.
    Incomparable,
    /// `xy > xz`.
    Decreasing,
    /// `xy < xz`.
    Increasing,
    /// `xy = xz = yz`.
    Equal,
    /// `xy = xz < yz`.
    LaterPairHigher,
}

impl TripleClass {
    pub const ALL: [TripleClass; 5] = [
        TripleClass::Incomparable,
        TripleClass::Decreasing,
        TripleClass::Increasing,
        TripleClass::Equal,
        TripleClass::LaterPairHigher,
    ];

    fn bit(self) -> u8 {
        1 << self as u8
    }

    pub fn shape(self) -> Shape {
        match self {
            TripleClass::Increasing => Shape::DeltaLike,
            TripleClass::LaterPairHigher => Shape::GammaLike,
            TripleClass::Equal => Shape::VLike,
            TripleClass::Incomparable | TripleClass::Decreasing => Shape::NotWqoEvidence,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    DeltaLike,
    GammaLike,
    VLike,
    /// The colour cannot occur when the elements below the antichain form a
    /// well-quasi-order.
    NotWqoEvidence,
}

pub fn classify_triple(p: &Poset, mt: &OpTable, x: usize, y: usize, z: usize) -> TripleClass {
    let (xy, xz, yz) = (mt.at(x, y), mt.at(x, z), mt.at(y, z));
    if xy == xz {
        // yz ≥ x∧y∧z = xy always.
        if yz == xy {
            TripleClass::Equal
        } else {
            TripleClass::LaterPairHigher
        }
    } else if p.lt(xy, xz) {
        TripleClass::Increasing
    } else if p.lt(xz, xy) {
        TripleClass::Decreasing
    } else {
        TripleClass::Incomparable
    }
}

pub fn ramsey_extract(p: &Poset, x: &[usize], m: usize) -> Result<Certificate> {
    ramsey_extract_with(p, x, m, &TripleClass::ALL, &Budget::nodes())
}

/// Finds the lexicographically first `m`-subset of `x` (by position) whose
/// triples all share a colour among `allowed`, and builds the map from the
/// matching pattern.
pub fn ramsey_extract_with(
    p: &Poset,
    x: &[usize],
    m: usize,
    allowed: &[TripleClass],
    budget: &Budget,
) -> Result<Certificate> {
    if m < 3 {
        return Err(Error::Precondition("target size must be at least 3".into()));
    }
    if let Some(&bad) = x.iter().find(|&&e| e >= p.len()) {
        return Err(Error::IndexOutOfRange { index: bad, n: p.len() });
    }
    let mut sorted = x.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != x.len() || !p.is_antichain(x) {
        return Err(Error::NotAntichain);
    }
    let mt = OpTable::meets(p);
    if !mt.is_total() {
        return Err(Error::NotMeetSemilattice);
    }
    let n = x.len();
    let mut colour = vec![0u8; n * n * n];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                colour[(a * n + b) * n + c] = classify_triple(p, &mt, x[a], x[b], x[c]).bit();
            }
        }
    }
    let mask = allowed.iter().fold(0u8, |acc, c| acc | c.bit());
    let mut chosen = Vec::with_capacity(m);
    let found = search(&colour, n, m, 0, mask, &mut chosen, budget)?;
    let Some(bits) = found else {
        return Err(Error::NoMonochromaticSubset { m, n });
    };
    let triple_class = TripleClass::ALL
        .into_iter()
        .find(|c| c.bit() == bits)
        .expect("one colour per triple");
    let subset: Vec<usize> = chosen.iter().map(|&i| x[i]).collect();
    let shape = triple_class.shape();
    let map = pattern_map(p, &mt, shape, &subset)?;
    Ok(Certificate::new(Payload::RamseyClass(RamseyPayload {
        host: p.clone(),
        antichain: x.to_vec(),
        subset,
        triple_class,
        shape,
        map,
    })))
}

fn search(
    colour: &[u8],
    n: usize,
    m: usize,
    from: usize,
    mask: u8,
    chosen: &mut Vec<usize>,
    budget: &Budget,
) -> Result<Option<u8>> {
    if chosen.len() == m {
        return Ok(Some(mask));
    }
    for c in from..n {
        if n - c < m - chosen.len() {
            break;
        }
        budget.tick()?;
        let mut next = mask;
        'pairs: for (ia, &a) in chosen.iter().enumerate() {
            for &b in &chosen[ia + 1..] {
                next &= colour[(a * n + b) * n + c];
                if next == 0 {
                    break 'pairs;
                }
            }
        }
        if next == 0 {
            continue;
        }
        chosen.push(c);
        if let Some(found) = search(colour, n, m, c + 1, next, chosen, budget)? {
            return Ok(Some(found));
        }
        chosen.pop();
    }
    Ok(None)
}

/// Size parameter of the pattern built from an `m`-element subset.
pub(crate) fn pattern_size(shape: Shape, m: usize) -> usize {
    match shape {
        // Even thinning keeps ⌊m/2⌋ columns.
        Shape::DeltaLike => m / 2 - 1,
        Shape::GammaLike => m - 1,
        Shape::VLike | Shape::NotWqoEvidence => m,
    }
}

fn pattern_map(p: &Poset, mt: &OpTable, shape: Shape, h: &[usize]) -> Result<Option<MapWitness>> {
    let Some(domain) = pattern_poset(shape, pattern_size(shape, h.len())) else {
        return Ok(None);
    };
    let table: Vec<usize> = match shape {
        Shape::DeltaLike => {
            let cols: Vec<usize> = h.iter().step_by(2).take(h.len() / 2).copied().collect();
            delta_coords(cols.len() - 1)
                .into_iter()
                .map(|(i, j)| if j == OMEGA { cols[i] } else { mt.at(cols[i], cols[j]) })
                .collect()
        }
        Shape::GammaLike => gamma_coords(h.len() - 1)
            .into_iter()
            .map(|(i, j)| if j == OMEGA { h[i] } else { mt.at(h[i], h[j]) })
            .collect(),
        Shape::VLike => std::iter::once(mt.at(h[0], h[1])).chain(h.iter().copied()).collect(),
        Shape::NotWqoEvidence => unreachable!(),
    };
    certify(&domain, p, table).map(Some)
}

pub(super) fn evaluate(r: &RamseyPayload) -> Vec<Evidence> {
    let p = &r.host;
    let in_range = r.antichain.iter().chain(&r.subset).all(|&e| e < p.len());
    let mt = OpTable::meets(p);
    let is_meet = mt.is_total();
    let mut pos = 0;
    let subsequence = r.subset.iter().all(|s| match r.antichain[pos..].iter().position(|a| a == s) {
        Some(k) => {
            pos += k + 1;
            true
        }
        None => false,
    });
    let sane = in_range && is_meet;
    let h = &r.subset;
    let monochromatic = sane
        && h.len() >= 3
        && (0..h.len()).all(|a| {
            (a + 1..h.len())
                .all(|b| (b + 1..h.len()).all(|c| classify_triple(p, &mt, h[a], h[b], h[c]) == r.triple_class))
        });
    let mut out = vec![
        ev("in_range", in_range),
        ev("meet_semilattice", is_meet),
        ev("antichain", in_range && p.is_antichain(&r.antichain)),
        ev("subset_of_antichain", subsequence),
        ev("monochromatic", monochromatic),
        ev("shape_matches_class", r.shape == r.triple_class.shape()),
    ];
    match &r.map {
        None => out.push(ev("map_present", r.shape == Shape::NotWqoEvidence)),
        Some(w) => {
            let expect = sane
                .then(|| pattern_map(p, &mt, r.shape, h).ok().flatten())
                .flatten();
            let c = w.certified();
            out.push(ev("map_matches_subset", expect.as_ref() == Some(w)));
            out.push(ev("meet_preserving", c.meet_preserving));
            out.push(ev("injective", c.injective));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{delta, delta_index, finite_powerset, gamma, gamma_index};

    fn tops_delta(n: usize) -> Vec<usize> {
        (0..=n).map(|i| delta_index(n, i, OMEGA)).collect()
    }

    fn ramsey_payload(c: &Certificate) -> &RamseyPayload {
        match &c.payload {
            Payload::RamseyClass(r) => r,
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn delta_tops_are_increasing() {
        let p = delta(5);
        let c = ramsey_extract(&p, &tops_delta(5), 6).unwrap();
        let r = ramsey_payload(&c);
        assert_eq!(r.triple_class, TripleClass::Increasing);
        assert_eq!(r.shape, Shape::DeltaLike);
        let w = r.map.as_ref().unwrap();
        assert_eq!(w.source().len(), delta(2).len());
        assert!(w.certified().meet_preserving && w.certified().injective);
        assert!(c.verify());
    }

    #[test]
    fn gamma_tops_are_later_pair_higher() {
        let p = gamma(5);
        let x: Vec<usize> = (0..=5).map(|i| gamma_index(5, i, OMEGA)).collect();
        let c = ramsey_extract(&p, &x, 6).unwrap();
        let r = ramsey_payload(&c);
        assert_eq!(r.shape, Shape::GammaLike);
        let w = r.map.as_ref().unwrap();
        assert!(w.certified().meet_preserving && w.certified().injective);
        assert!(c.verify());
    }

    #[test]
    fn powerset_singletons_fan() {
        let p = finite_powerset(4);
        let c = ramsey_extract(&p, &[1, 2, 4, 8], 4).unwrap();
        let r = ramsey_payload(&c);
        assert_eq!(r.triple_class, TripleClass::Equal);
        assert_eq!(r.shape, Shape::VLike);
        assert_eq!(r.map.as_ref().unwrap().table(), &[0, 1, 2, 4, 8]);
        assert!(c.verify());
    }

    #[test]
    fn errors() {
        let p = finite_powerset(3);
        assert!(matches!(ramsey_extract(&p, &[1, 3, 4], 3), Err(Error::NotAntichain)));
        assert!(matches!(
            ramsey_extract(&p, &[1, 2, 4], 4),
            Err(Error::NoMonochromaticSubset { m: 4, n: 3 })
        ));
        assert!(matches!(ramsey_extract(&p, &[1, 2, 4], 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn tampered_subset_fails_verification() {
        let p = delta(4);
        let c = ramsey_extract(&p, &tops_delta(4), 4).unwrap();
        let mut bad = c.clone();
        if let Payload::RamseyClass(r) = &mut bad.payload {
            r.subset.reverse();
        }
        assert!(!bad.verify());
    }
}
