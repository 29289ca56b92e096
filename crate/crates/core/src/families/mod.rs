//! Finite truncations of the standard obstruction posets.
//!
//! Every generator is deterministic and labels its elements with their
//! coordinates. Truncations are prefixes of the natural enumeration; they are
//! not claimed to inherit properties of the infinite objects.

mod ordinal;
mod sierp;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{bitset, Poset};

pub use ordinal::OrdinalCNF;
pub use sierp::{
    lattice_sierp, r_map, s_alpha, sierpinskisation, sierpinskisation_detail, theta_embedding,
    Scheme, Sierpinskisation,
};

/// Coordinate standing for ω; above every finite coordinate.
pub const OMEGA: usize = usize::MAX;

fn coord(j: usize) -> String {
    if j == OMEGA {
        "ω".to_string()
    } else {
        j.to_string()
    }
}

fn pair_label(i: usize, j: usize) -> String {
    format!("({},{})", i, coord(j))
}

/// Subsets of `{0..n}`; element `m` is the subset with bitmask `m`.
pub fn finite_powerset(n: usize) -> Poset {
    assert!(n < 24, "powerset too large");
    let size = 1usize << n;
    let above = (0..size)
        .map(|a| {
            let mut row = bitset(size);
            // Strict supersets of a: a | s for nonempty s disjoint from a.
            let free = !a & (size - 1);
            let mut s = free;
            while s != 0 {
                row.insert(a | s);
                s = (s - 1) & free;
            }
            row
        })
        .collect();
    let labels = (0..size)
        .map(|m| {
            let parts: Vec<String> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| i.to_string()).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    Poset::from_above(above, Some(labels))
}

/// Pairs `(i,j)`, `0 ≤ i < j ≤ n`, in lexicographic order.
pub fn grid_coords(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

/// `(i,j) ≤ (i',j')` iff `i' ≤ i` and `j ≤ j'`; joins are `(min i, max j)`.
pub fn omega_star_grid(n: usize) -> Poset {
    let c = grid_coords(n);
    let labels = c.iter().map(|&(i, j)| pair_label(i, j)).collect();
    Poset::from_fn(c.len(), Some(labels), |a, b| {
        let ((i, j), (k, l)) = (c[a], c[b]);
        a != b && k <= i && j <= l
    })
    .expect("grid order is a partial order")
}

pub fn grid_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j <= n);
    // Row r holds n - r pairs.
    i * n - i * (i.saturating_sub(1)) / 2 + (j - i - 1)
}

/// Elements of `delta(n)`: the pairs `(i,j)` with `j ≤ n` in lexicographic
/// order, then the column tops `(i,ω)`.
pub fn delta_coords(n: usize) -> Vec<(usize, usize)> {
    let mut c = grid_coords(n);
    c.extend((0..=n).map(|i| (i, OMEGA)));
    c
}

pub fn delta_index(n: usize, i: usize, j: usize) -> usize {
    if j == OMEGA {
        assert!(i <= n);
        n * (n + 1) / 2 + i
    } else {
        grid_index(n, i, j)
    }
}

fn delta_lt(a: (usize, usize), b: (usize, usize)) -> bool {
    // (i,j) ≤ (i',j') iff j ≤ i', or i = i' and j ≤ j'.
    a != b && (a.1 <= b.0 || (a.0 == b.0 && a.1 <= b.1))
}

/// `{(i,j) : i < j ≤ n} ∪ {(i,ω) : i ≤ n}`.
pub fn delta(n: usize) -> Poset {
    let c = delta_coords(n);
    let labels = c.iter().map(|&(i, j)| pair_label(i, j)).collect();
    Poset::from_fn(c.len(), Some(labels), |a, b| delta_lt(c[a], c[b])).expect("delta order")
}

/// Elements of `gamma(n)`: `(i,i+1)` for `i < n`, then `(i,ω)` for `i ≤ n`.
pub fn gamma_coords(n: usize) -> Vec<(usize, usize)> {
    let mut c: Vec<(usize, usize)> = (0..n).map(|i| (i, i + 1)).collect();
    c.extend((0..=n).map(|i| (i, OMEGA)));
    c
}

pub fn gamma_index(n: usize, i: usize, j: usize) -> usize {
    if j == OMEGA {
        assert!(i <= n);
        n + i
    } else {
        assert!(j == i + 1 && j <= n);
        i
    }
}

/// The elements of `delta(n)` with `j = i+1` or `j = ω`, induced order.
pub fn gamma(n: usize) -> Poset {
    let c = gamma_coords(n);
    let labels = c.iter().map(|&(i, j)| pair_label(i, j)).collect();
    Poset::from_fn(c.len(), Some(labels), |a, b| delta_lt(c[a], c[b])).expect("gamma order")
}

/// A least element below an antichain of `n` elements.
pub fn v(n: usize) -> Poset {
    let mut labels = vec!["∅".to_string()];
    labels.extend((0..n).map(|i| format!("{{{i}}}")));
    Poset::from_fn(n + 1, Some(labels), |a, b| a == 0 && b > 0).expect("fan order")
}

/// `1 + (1 ⊕ a) + 1`: a bottom, a side point next to a chain of length `a`,
/// and a top. Indices: bottom 0, side 1, chain `2..a+2`, top `a+2`.
pub fn l_alpha(a: usize) -> Poset {
    let one = Poset::chain(1);
    let middle = one.direct_sum(&Poset::chain(a));
    let p = Poset::lexicographic_sum(&Poset::chain(3), &[one.clone(), middle, one]).expect("three parts");
    let mut labels = vec!["0".to_string(), "p".to_string()];
    labels.extend((0..a).map(|k| format!("c{k}")));
    labels.push("1".to_string());
    p.with_labels(Some(labels))
}

/// The five-element non-modular lattice.
pub fn m5() -> Poset {
    l_alpha(2)
}

/// `{(m, i/2^m) : m ≤ n, i < 2^m}`, ordered componentwise.
pub fn omega_eta(n: usize) -> Poset {
    assert!(n < 20, "dyadic grid too large");
    let c: Vec<(usize, usize)> = (0..=n).flat_map(|m| (0..1usize << m).map(move |i| (m, i))).collect();
    // Compare i/2^m with i'/2^m' by cross-multiplying.
    let le_q = |(m, i): (usize, usize), (k, l): (usize, usize)| (i << k) <= (l << m);
    let labels = c.iter().map(|&(m, i)| format!("({m},{i}/{})", 1usize << m)).collect();
    Poset::from_fn(c.len(), Some(labels), |a, b| {
        a != b && c[a].0 <= c[b].0 && le_q(c[a], c[b])
    })
    .expect("dyadic order")
}

/// Adds a new least element at index 0, shifting the others up by one.
pub fn with_bottom(p: &Poset) -> Poset {
    let n = p.len() + 1;
    let mut above = Vec::with_capacity(n);
    let mut row = bitset(n);
    row.insert_range(1..n);
    above.push(row);
    for x in 0..p.len() {
        let mut r = bitset(n);
        r.extend(p.strict_above(x).ones().map(|y| y + 1));
        above.push(r);
    }
    let labels = p.labels().map(|l| {
        let mut v = vec!["⊥".to_string()];
        v.extend(l.iter().cloned());
        v
    });
    Poset::from_above(above, labels)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    FinitePowerset,
    OmegaStarGrid,
    Delta,
    Gamma,
    V,
    LAlpha,
    M5,
    Sierpinskisation,
    LatticeSierp,
    OmegaEta,
    SAlpha,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::FinitePowerset,
        Family::OmegaStarGrid,
        Family::Delta,
        Family::Gamma,
        Family::V,
        Family::LAlpha,
        Family::M5,
        Family::Sierpinskisation,
        Family::LatticeSierp,
        Family::OmegaEta,
        Family::SAlpha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::FinitePowerset => "finite_powerset",
            Family::OmegaStarGrid => "omega_star_grid",
            Family::Delta => "delta",
            Family::Gamma => "gamma",
            Family::V => "v",
            Family::LAlpha => "l_alpha",
            Family::M5 => "m5",
            Family::Sierpinskisation => "sierpinskisation",
            Family::LatticeSierp => "lattice_sierp",
            Family::OmegaEta => "omega_eta",
            Family::SAlpha => "s_alpha",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnsupportedParams(format!("unknown family `{s}`")))
    }
}

/// A generator name plus its integer parameters.
///
/// Parameters: `n` (truncation) for the pair, powerset, fan and dyadic
/// families; `a` for `l_alpha`; ordinal coefficients `c0, c1, ...` plus `n`
/// for the sierpinskisation families, where `sierpinskisation` also takes
/// `scheme` (0 column-alternating, 1 block, 2 seeded shuffle), `block` and
/// `seed`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    #[serde(default)]
    pub params: BTreeMap<String, u64>,
    #[serde(default)]
    pub with_bottom: bool,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        FamilySpec {
            family,
            params: BTreeMap::new(),
            with_bottom: false,
        }
    }

    pub fn param(mut self, key: &str, value: u64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn get(&self, key: &str) -> Result<usize> {
        self.params
            .get(key)
            .map(|&v| v as usize)
            .ok_or_else(|| Error::UnsupportedParams(format!("{} needs `{key}`", self.family.name())))
    }

    fn cnf(&self) -> Result<OrdinalCNF> {
        let mut coeffs = Vec::new();
        while let Some(&c) = self.params.get(&format!("c{}", coeffs.len())) {
            coeffs.push(c);
        }
        if coeffs.is_empty() {
            return Err(Error::UnsupportedParams(format!(
                "{} needs ordinal coefficients c0, c1, ...",
                self.family.name()
            )));
        }
        Ok(OrdinalCNF::new(coeffs))
    }

    fn check_keys(&self, allowed: &[&str], coefficients: bool) -> Result<()> {
        for k in self.params.keys() {
            let is_coeff = coefficients
                && k.strip_prefix('c').is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
            if !is_coeff && !allowed.contains(&k.as_str()) {
                return Err(Error::UnsupportedParams(format!(
                    "{} does not take `{k}`",
                    self.family.name()
                )));
            }
        }
        Ok(())
    }
}

const MAX_TRUNC: usize = 64;

fn bounded(what: &str, v: usize, max: usize) -> Result<usize> {
    if v > max {
        return Err(Error::UnsupportedParams(format!("{what} = {v} exceeds {max}")));
    }
    Ok(v)
}

pub fn generate(spec: &FamilySpec) -> Result<Poset> {
    use Family::*;
    let p = match spec.family {
        FinitePowerset => {
            spec.check_keys(&["n"], false)?;
            finite_powerset(bounded("n", spec.get("n")?, 16)?)
        }
        OmegaStarGrid => {
            spec.check_keys(&["n"], false)?;
            omega_star_grid(bounded("n", spec.get("n")?, MAX_TRUNC)?)
        }
        Delta => {
            spec.check_keys(&["n"], false)?;
            delta(bounded("n", spec.get("n")?, MAX_TRUNC)?)
        }
        Gamma => {
            spec.check_keys(&["n"], false)?;
            gamma(bounded("n", spec.get("n")?, 1024)?)
        }
        V => {
            spec.check_keys(&["n"], false)?;
            v(bounded("n", spec.get("n")?, 4096)?)
        }
        LAlpha => {
            spec.check_keys(&["a"], false)?;
            l_alpha(bounded("a", spec.get("a")?, 4096)?)
        }
        M5 => {
            spec.check_keys(&[], false)?;
            m5()
        }
        OmegaEta => {
            spec.check_keys(&["n"], false)?;
            omega_eta(bounded("n", spec.get("n")?, 12)?)
        }
        Sierpinskisation => {
            spec.check_keys(&["n", "scheme", "block", "seed"], true)?;
            let scheme = match spec.params.get("scheme").copied().unwrap_or(0) {
                0 => Scheme::ColumnAlternating,
                1 => Scheme::Block(spec.get("block")?),
                2 => Scheme::SeededShuffle(spec.params.get("seed").copied().unwrap_or(0)),
                s => return Err(Error::UnsupportedParams(format!("unknown scheme {s}"))),
            };
            sierpinskisation(&spec.cnf()?, bounded("n", spec.get("n")?, 4096)?, scheme)?
        }
        LatticeSierp => {
            spec.check_keys(&["n"], true)?;
            lattice_sierp(&spec.cnf()?, bounded("n", spec.get("n")?, MAX_TRUNC)?)?
        }
        SAlpha => {
            spec.check_keys(&["n"], true)?;
            s_alpha(&spec.cnf()?, bounded("n", spec.get("n")?, 4096)?)?
        }
    };
    Ok(if spec.with_bottom { with_bottom(&p) } else { p })
}
