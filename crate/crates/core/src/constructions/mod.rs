//! Constructive extraction procedures with re-checkable certificates.

mod bad_antichain;
mod chain;
mod pipeline;
mod ramsey;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use bad_antichain::{check_bad_antichain, BadAntichainReport};
pub use chain::{
    dichotomy_extract, dichotomy_extract_with, independent_from_separating, is_separating, join_with_ideal,
    separation_witness, ChainOfDownSets,
};
pub use pipeline::{thm8_pipeline, thm8_pipeline_with};
pub use ramsey::{classify_triple, ramsey_extract, ramsey_extract_with, Shape, TripleClass};

use crate::error::Result;
use crate::families::{delta, gamma, omega_star_grid, v};
use crate::poset::Poset;
use crate::segments::downset_lattice;
use crate::semilattice::{is_independent, MapWitness, OpTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    IndependentSet,
    DescendingChain,
    GridMap,
    RamseyClass,
    SublatticePattern,
}

/// A named assertion and whether it held when checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub name: String,
    pub holds: bool,
}

fn ev(name: &str, holds: bool) -> Evidence {
    Evidence {
        name: name.to_string(),
        holds,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementsPayload {
    pub host: Poset,
    pub elements: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPayload {
    /// The map's domain is `omega_star_grid(depth)`.
    pub depth: usize,
    pub map: MapWitness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RamseyPayload {
    pub host: Poset,
    pub antichain: Vec<usize>,
    /// Host elements, a subsequence of `antichain`, all of whose triples
    /// fall in `triple_class`.
    pub subset: Vec<usize>,
    pub triple_class: TripleClass,
    pub shape: Shape,
    /// Meet-preserving map from the pattern of `shape` onto the
    /// meet-subsemilattice generated by (a thinning of) `subset`.
    pub map: Option<MapWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternPayload {
    pub shape: Shape,
    /// Size parameter: `delta(size)`, `gamma(size)` or `v(size)`.
    pub size: usize,
    /// From the nonempty downsets of the pattern into the host.
    pub map: MapWitness,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    IndependentSet(ElementsPayload),
    DescendingChain(ElementsPayload),
    GridMap(GridPayload),
    RamseyClass(RamseyPayload),
    SublatticePattern(PatternPayload),
}

impl Payload {
    pub fn kind(&self) -> CertKind {
        match self {
            Payload::IndependentSet(_) => CertKind::IndependentSet,
            Payload::DescendingChain(_) => CertKind::DescendingChain,
            Payload::GridMap(_) => CertKind::GridMap,
            Payload::RamseyClass(_) => CertKind::RamseyClass,
            Payload::SublatticePattern(_) => CertKind::SublatticePattern,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub payload: Payload,
    pub evidence: Vec<Evidence>,
}

impl Certificate {
    /// Builds a certificate whose evidence is computed from the payload.
    pub fn new(payload: Payload) -> Self {
        let evidence = evaluate(&payload);
        Certificate { payload, evidence }
    }

    pub fn kind(&self) -> CertKind {
        self.payload.kind()
    }

    /// Every recorded assertion holds.
    pub fn holds(&self) -> bool {
        self.evidence.iter().all(|e| e.holds)
    }

    /// Recomputes the evidence from the payload alone and checks that it
    /// matches the record and that every assertion holds.
    pub fn verify(&self) -> bool {
        let fresh = evaluate(&self.payload);
        fresh == self.evidence && fresh.iter().all(|e| e.holds)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate json")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Nonempty downsets of `pattern`, in the order `f_vee` uses.
pub(crate) fn nonempty_downsets(pattern: &Poset) -> Result<Poset> {
    let lat = downset_lattice(pattern)?;
    Ok(lat.induced(&(1..lat.len()).collect::<Vec<_>>()))
}

fn in_range(host: &Poset, xs: &[usize]) -> bool {
    xs.iter().all(|&x| x < host.len())
}

fn evaluate(payload: &Payload) -> Vec<Evidence> {
    match payload {
        Payload::IndependentSet(p) => {
            let ok = in_range(&p.host, &p.elements);
            let jt = OpTable::joins(&p.host);
            vec![
                ev("in_range", ok),
                ev("join_semilattice", jt.is_total()),
                ev("independent", ok && jt.is_total() && is_independent(&p.host, &jt, &p.elements)),
            ]
        }
        Payload::DescendingChain(p) => {
            let ok = in_range(&p.host, &p.elements);
            vec![
                ev("in_range", ok),
                ev(
                    "strictly_descending",
                    ok && p.elements.windows(2).all(|w| p.host.lt(w[1], w[0])),
                ),
            ]
        }
        Payload::GridMap(p) => {
            let c = p.map.certified();
            vec![
                ev("domain_is_grid", p.map.source() == &omega_star_grid(p.depth)),
                ev("join_preserving", c.join_preserving),
                ev("injective", c.injective),
            ]
        }
        Payload::RamseyClass(p) => ramsey::evaluate(p),
        Payload::SublatticePattern(p) => {
            let c = p.map.certified();
            let domain = pattern_poset(p.shape, p.size).and_then(|q| nonempty_downsets(&q).ok());
            vec![
                ev("domain_shape", domain.as_ref() == Some(p.map.source())),
                ev("lattice_hom", c.lattice_hom),
                ev("injective", c.injective),
            ]
        }
    }
}

/// The pattern poset named by a shape: `delta(size)`, `gamma(size)` or
/// `v(size)`.
pub fn pattern_poset(shape: Shape, size: usize) -> Option<Poset> {
    match shape {
        Shape::DeltaLike => Some(delta(size)),
        Shape::GammaLike => Some(gamma(size)),
        Shape::VLike => Some(v(size)),
        Shape::NotWqoEvidence => None,
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    kind: CertKind,
    payload: serde_json::Value,
    evidence: Vec<Evidence>,
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        let payload = match &self.payload {
            Payload::IndependentSet(p) | Payload::DescendingChain(p) => serde_json::to_value(p),
            Payload::GridMap(p) => serde_json::to_value(p),
            Payload::RamseyClass(p) => serde_json::to_value(p),
            Payload::SublatticePattern(p) => serde_json::to_value(p),
        }
        .map_err(S::Error::custom)?;
        Wire {
            kind: self.kind(),
            payload,
            evidence: self.evidence.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(d)?;
        let v = w.payload;
        let payload = match w.kind {
            CertKind::IndependentSet => serde_json::from_value(v).map(Payload::IndependentSet),
            CertKind::DescendingChain => serde_json::from_value(v).map(Payload::DescendingChain),
            CertKind::GridMap => serde_json::from_value(v).map(Payload::GridMap),
            CertKind::RamseyClass => serde_json::from_value(v).map(Payload::RamseyClass),
            CertKind::SublatticePattern => serde_json::from_value(v).map(Payload::SublatticePattern),
        }
        .map_err(D::Error::custom)?;
        Ok(Certificate {
            payload,
            evidence: w.evidence,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::finite_powerset;

    #[test]
    fn independent_set_round_trip() {
        let c = Certificate::new(Payload::IndependentSet(ElementsPayload {
            host: finite_powerset(3),
            elements: vec![1, 2, 4],
        }));
        assert!(c.verify());
        let back = Certificate::from_json_str(&c.to_json_string()).unwrap();
        assert_eq!(back, c);
        assert!(back.verify());
    }

    #[test]
    fn tampered_evidence_fails() {
        let mut c = Certificate::new(Payload::IndependentSet(ElementsPayload {
            host: finite_powerset(3),
            elements: vec![1, 3],
        }));
        assert!(!c.holds());
        assert!(!c.verify());
        for e in &mut c.evidence {
            e.holds = true;
        }
        assert!(!c.verify());
    }

    #[test]
    fn descending_chain_evidence() {
        let c = Certificate::new(Payload::DescendingChain(ElementsPayload {
            host: Poset::chain(4),
            elements: vec![3, 1, 0],
        }));
        assert!(c.verify());
        let bad = Certificate::new(Payload::DescendingChain(ElementsPayload {
            host: Poset::chain(4),
            elements: vec![1, 3],
        }));
        assert!(!bad.holds());
    }
}
