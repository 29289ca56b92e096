use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordinal below ω^ω in Cantor normal form: `coeffs[e]` is the
/// coefficient of ω^e.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrdinalCNF {
    coeffs: Vec<u64>,
}

/// A point of an ordinal: copy `copy` of the block ω^`exp`, then an element
/// of ω^`exp` written as digits, most significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Position {
    pub exp: usize,
    pub copy: u64,
    pub digits: Vec<usize>,
}

impl Position {
    /// First truncation level at which this point appears.
    pub fn birth(&self) -> usize {
        self.digits.iter().copied().max().unwrap_or(0)
    }
}

const MAX_POSITIONS: usize = 1 << 16;

fn term(e: usize, c: u64) -> String {
    let base = match e {
        0 => return c.to_string(),
        1 => "ω".to_string(),
        _ => format!("ω^{e}"),
    };
    if c == 1 {
        base
    } else {
        format!("{base}·{c}")
    }
}

fn render(coeffs: &[u64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|&(_, &c)| c != 0)
        .map(|(e, &c)| term(e, c))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

impl OrdinalCNF {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        OrdinalCNF { coeffs }
    }

    pub fn finite(n: u64) -> Self {
        Self::new(vec![n])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The constant term.
    pub fn finite_part(&self) -> u64 {
        self.coeffs.first().copied().unwrap_or(0)
    }

    /// `β` with `self = ω·β + finite_part`.
    pub fn omega_quotient(&self) -> OrdinalCNF {
        OrdinalCNF::new(self.coeffs.iter().skip(1).copied().collect())
    }

    /// `β` with `self = ω·β`, if the constant term is zero and `self ≠ 0`.
    pub fn as_omega_multiple(&self) -> Result<OrdinalCNF> {
        if self.is_zero() || self.finite_part() != 0 {
            return Err(Error::UnsupportedOrdinal(format!("{self} is not of the form ω·β with β > 0")));
        }
        Ok(self.omega_quotient())
    }

    /// Points whose digits are all below `n`, in increasing order.
    pub(crate) fn positions(&self, n: usize) -> Result<Vec<Position>> {
        let mut total = 0usize;
        for (e, &c) in self.coeffs.iter().enumerate() {
            let per = n.checked_pow(e as u32).unwrap_or(usize::MAX);
            total = total.saturating_add(per.saturating_mul(c as usize));
        }
        if total > MAX_POSITIONS {
            return Err(Error::UnsupportedOrdinal(format!(
                "{self} truncated at {n} has {total} points"
            )));
        }
        let mut out = Vec::with_capacity(total);
        for e in (0..self.coeffs.len()).rev() {
            let count = n.pow(e as u32);
            for copy in 0..self.coeffs[e] {
                for idx in 0..count {
                    let mut digits = vec![0usize; e];
                    let mut rest = idx;
                    for d in digits.iter_mut().rev() {
                        *d = rest % n;
                        rest /= n;
                    }
                    out.push(Position { exp: e, copy, digits });
                }
            }
        }
        Ok(out)
    }

    /// Cantor normal form of the ordinal denoted by `pos`.
    pub(crate) fn position_label(&self, pos: &Position) -> String {
        let mut c: Vec<u64> = self.coeffs.clone();
        for (e, slot) in c.iter_mut().enumerate() {
            if e < pos.exp {
                *slot = pos.digits[pos.exp - 1 - e] as u64;
            } else if e == pos.exp {
                *slot = pos.copy;
            }
        }
        render(&c)
    }
}

impl fmt::Display for OrdinalCNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.coeffs))
    }
}
