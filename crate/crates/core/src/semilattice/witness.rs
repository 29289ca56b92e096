use serde::{Deserialize, Serialize};

use super::OpTable;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Properties of a map, each computed from its table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certified {
    pub order_preserving: bool,
    pub order_embedding: bool,
    /// Every join that exists in the source is sent to the join of the
    /// images, which must exist.
    pub join_preserving: bool,
    pub meet_preserving: bool,
    pub lattice_hom: bool,
    pub injective: bool,
    pub surjective: bool,
    /// Both sides have a least element and it is mapped to the least element.
    pub bottom_preserving: bool,
}

/// A function table between two posets with its verified properties.
/// Only [`certify`] constructs one, so the flags always match the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapWitness {
    source: Poset,
    target: Poset,
    table: Vec<usize>,
    certified: Certified,
}

impl MapWitness {
    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn target(&self) -> &Poset {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn certified(&self) -> &Certified {
        &self.certified
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Recomputes every flag from the table and compares.
    pub fn reverify(&self) -> bool {
        compute_flags(&self.source, &self.target, &self.table) == self.certified
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MapWitness) -> Result<MapWitness> {
        if self.target != other.source {
            return Err(Error::StructureMismatch("maps do not compose".into()));
        }
        let table = self.table.iter().map(|&y| other.table[y]).collect();
        certify(&self.source, &other.target, table)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("witness json")
    }
}

pub fn certify(source: &Poset, target: &Poset, table: Vec<usize>) -> Result<MapWitness> {
    if table.len() != source.len() {
        return Err(Error::ArityMismatch {
            expected: source.len(),
            got: table.len(),
        });
    }
    if let Some(&bad) = table.iter().find(|&&y| y >= target.len()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            n: target.len(),
        });
    }
    let certified = compute_flags(source, target, &table);
    Ok(MapWitness {
        source: source.clone(),
        target: target.clone(),
        table,
        certified,
    })
}

fn preserves(src: &OpTable, dst: &OpTable, f: &[usize]) -> bool {
    let n = src.len();
    (0..n).all(|x| {
        (x + 1..n).all(|y| match src.get(x, y) {
            None => true,
            Some(v) => dst.get(f[x], f[y]) == Some(f[v]),
        })
    })
}

fn compute_flags(s: &Poset, t: &Poset, f: &[usize]) -> Certified {
    let n = s.len();
    let mut order_preserving = true;
    let mut reflects = true;
    for x in 0..n {
        for y in 0..n {
            let a = s.le(x, y);
            let b = t.le(f[x], f[y]);
            if a && !b {
                order_preserving = false;
            }
            if b && !a {
                reflects = false;
            }
        }
    }
    let mut hit = vec![false; t.len()];
    let mut injective = true;
    for &y in f {
        if hit[y] {
            injective = false;
        }
        hit[y] = true;
    }
    let surjective = hit.iter().all(|&h| h);
    let join_preserving = preserves(&OpTable::joins(s), &OpTable::joins(t), f);
    let meet_preserving = preserves(&OpTable::meets(s), &OpTable::meets(t), f);
    let bottom_preserving = match (s.least(), t.least()) {
        (Some(a), Some(b)) => f[a] == b,
        _ => false,
    };
    Certified {
        order_preserving,
        order_embedding: order_preserving && reflects,
        join_preserving,
        meet_preserving,
        lattice_hom: join_preserving && meet_preserving,
        injective,
        surjective,
        bottom_preserving,
    }
}

#[derive(Serialize, Deserialize)]
struct WitnessWire {
    source: Poset,
    target: Poset,
    table: Vec<usize>,
    certified: Certified,
}

impl Serialize for MapWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WitnessWire {
            source: self.source.clone(),
            target: self.target.clone(),
            table: self.table.clone(),
            certified: self.certified,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MapWitness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = WitnessWire::deserialize(d)?;
        let m = certify(&w.source, &w.target, w.table).map_err(D::Error::custom)?;
        if m.certified != w.certified {
            return Err(D::Error::custom("certified flags do not match the table"));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::finite_powerset;

    #[test]
    fn chain_into_powerset() {
        let c = Poset::chain(2);
        let b2 = finite_powerset(2);
        let w = certify(&c, &b2, vec![0, 1]).unwrap();
        let f = w.certified();
        assert!(f.order_embedding && f.join_preserving && f.meet_preserving && f.injective);
        assert!(f.bottom_preserving && !f.surjective);
        assert!(w.reverify());
    }

    #[test]
    fn bad_tables_rejected() {
        let c = Poset::chain(2);
        assert!(certify(&c, &c, vec![0]).is_err());
        assert!(certify(&c, &c, vec![0, 2]).is_err());
    }

    #[test]
    fn flags_survive_round_trip_and_tampering_is_caught() {
        let b2 = finite_powerset(2);
        let w = certify(&b2, &b2, vec![0, 2, 1, 3]).unwrap();
        assert!(w.certified().lattice_hom && w.certified().surjective);
        let s = w.to_json_string();
        let back: MapWitness = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        let forged = s.replace(r#""table":[0,2,1,3]"#, r#""table":[0,0,1,3]"#);
        assert_ne!(forged, s);
        assert!(serde_json::from_str::<MapWitness>(&forged).is_err());
    }

    #[test]
    fn order_preserving_but_not_join_preserving() {
        // Two atoms of B_2 sent to two incomparable elements whose join is
        // not the image of the top.
        let b2 = finite_powerset(2);
        let b3 = finite_powerset(3);
        let w = certify(&b2, &b3, vec![0, 1, 2, 7]).unwrap();
        assert!(w.certified().order_embedding);
        assert!(!w.certified().join_preserving);
        assert!(w.certified().meet_preserving);
    }
}
