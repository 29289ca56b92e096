use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poset::{Poset, RelationKind};
use crate::segments::{enumerate_downsets, family_union_closure, DownSetFamily, FamilyRole};

/// Each forward pair `i < j` is related independently with probability `p`,
/// then closed transitively.
pub fn random_poset(n: usize, p: f64, seed: u64) -> Poset {
    let p = p.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    Poset::build(n, RelationKind::Leq, &pairs, None).expect("forward pairs are acyclic")
}

/// A union-closed family of downsets of a small random poset, together
/// with the empty set, ordered by inclusion. The size target is drawn
/// uniformly from `1..=max_n`.
///
/// The least element matters: without it `{a, b, a∨b}` has the independent
/// pair `a, b` but cannot contain a copy of `B_2`.
pub fn random_join_semilattice(max_n: usize, seed: u64) -> Poset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = rng.gen_range(1..=max_n.max(1));
    let q = random_poset(rng.gen_range(2..=7), rng.gen_range(0.0..0.5), rng.gen());
    let all = enumerate_downsets(&q).expect("tiny host");
    let empty = all.sets[0].clone();
    let mut candidates = all.sets[1..].to_vec();
    candidates.shuffle(&mut rng);
    let mut gens = vec![empty];
    let mut best = family_union_closure(&DownSetFamily::new(q.clone(), gens.clone(), FamilyRole::Custom))
        .expect("nonempty family");
    for c in candidates {
        gens.push(c);
        let fam = DownSetFamily::new(q.clone(), gens.clone(), FamilyRole::Custom);
        let closed = family_union_closure(&fam).expect("nonempty family");
        if closed.len() <= target {
            best = closed;
        } else {
            gens.pop();
        }
    }
    best.inclusion_poset()
}

/// The dual of [`random_join_semilattice`].
pub fn random_meet_semilattice(max_n: usize, seed: u64) -> Poset {
    random_join_semilattice(max_n, seed).dual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilattice::is_join_semilattice;

    #[test]
    fn extremes() {
        assert_eq!(random_poset(5, 0.0, 1), Poset::antichain(5));
        assert_eq!(random_poset(5, 1.0, 1).strict_pairs().len(), 10);
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            random_poset(8, 0.3, 9).to_json_string(),
            random_poset(8, 0.3, 9).to_json_string()
        );
        assert_eq!(random_join_semilattice(10, 4), random_join_semilattice(10, 4));
    }

    #[test]
    fn join_semilattices_in_range() {
        let mut sizes = [0usize; 11];
        for seed in 0..200 {
            let j = random_join_semilattice(10, seed);
            assert!(!j.is_empty() && j.len() <= 10);
            assert!(is_join_semilattice(&j), "seed {seed}");
            assert!(j.least().is_some());
            sizes[j.len()] += 1;
        }
        assert!(sizes[8..].iter().sum::<usize>() > 20, "{sizes:?}");
    }
}
