use serde::Serialize;

use crate::poset::{max_antichain, Poset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadAntichainReport {
    pub is_antichain: bool,
    /// Every element is above some member of the antichain, or below all
    /// but at most `slack` of them.
    pub condition_one: bool,
    /// Elements breaking the first condition.
    pub violators: Vec<usize>,
    /// The elements not above any member.
    pub remainder: Vec<usize>,
    /// Largest antichain inside the remainder.
    pub remainder_width: usize,
}

pub fn check_bad_antichain(p: &Poset, a: &[usize], slack: usize) -> BadAntichainReport {
    let a: Vec<usize> = a.iter().copied().filter(|&x| x < p.len()).collect();
    let violators: Vec<usize> = (0..p.len())
        .filter(|&x| {
            let above = a.iter().any(|&y| p.le(y, x));
            let missed = a.iter().filter(|&&y| !p.lt(x, y)).count();
            !above && missed > slack
        })
        .collect();
    let remainder: Vec<usize> = (0..p.len()).filter(|&x| !a.iter().any(|&y| p.le(y, x))).collect();
    let remainder_width = max_antichain(&p.induced(&remainder)).len();
    BadAntichainReport {
        is_antichain: p.is_antichain(&a),
        condition_one: violators.is_empty(),
        violators,
        remainder,
        remainder_width,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{delta, delta_index, OMEGA};

    #[test]
    fn delta_tops() {
        let p = delta(4);
        let tops: Vec<usize> = (0..=4).map(|i| delta_index(4, i, OMEGA)).collect();
        // (0,4) sits below only (0,ω) and (4,ω).
        let r = check_bad_antichain(&p, &tops, 0);
        assert!(!r.condition_one);
        assert!(r.violators.contains(&delta_index(4, 0, 4)));
        assert!(check_bad_antichain(&p, &tops, 3).condition_one);
        assert!(!check_bad_antichain(&p, &tops, 2).condition_one);
        assert_eq!(r.remainder.len(), 10);
        assert_eq!(r.remainder_width, 4);
    }

    #[test]
    fn antichain_is_its_own_witness() {
        let p = Poset::antichain(3);
        let r = check_bad_antichain(&p, &[0, 1, 2], 0);
        assert!(r.is_antichain && r.condition_one);
        assert!(r.remainder.is_empty());
    }

    #[test]
    fn chain_middle() {
        let p = Poset::chain(3);
        let r = check_bad_antichain(&p, &[1], 0);
        // The top is above the middle and the bottom is below it.
        assert!(r.condition_one);
        assert_eq!(r.remainder, vec![0]);
        assert!(!check_bad_antichain(&p, &[0, 1], 0).is_antichain);
    }
}
