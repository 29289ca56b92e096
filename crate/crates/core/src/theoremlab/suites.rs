use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::oracles;
use super::random::{random_join_semilattice, random_meet_semilattice, random_poset};
use crate::constructions::{
    independent_from_separating, is_separating, separation_witness, thm8_pipeline, ChainOfDownSets, Payload,
};
use crate::error::{Error, Result};
use crate::families::{delta, delta_coords, delta_index, finite_powerset, OMEGA};
use crate::poset::{max_antichain, Poset};
use crate::segments::{downset_lattice_family, enumerate_ideals, principal, DownSet};
use crate::semilattice::{
    certify, check_delta_map, embedding_search, f_vee, find_independent_set, join_irreducibles, join_primes,
    EmbeddingMode,
};

pub const SUITES: [&str; 8] = [
    "tm21",
    "irr_eq",
    "sum_prod",
    "ideal_principal",
    "lem2_3",
    "fvee",
    "thm8_pipe",
    "separating",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    /// Upper bound on generated sizes; each suite has its own default.
    pub max_n: Option<usize>,
    /// Self-test: the first trial of `lem2_3` checks a deliberately
    /// falsified report, which the suite must flag.
    pub plant_fault: bool,
}

impl SuiteConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        SuiteConfig {
            trials,
            seed,
            max_n: None,
            plant_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub trial_seed: u64,
    pub reason: String,
    /// The concrete inputs of the failing check.
    pub bundle: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub max_n: usize,
    pub plant_fault: bool,
    pub failures: Vec<Failure>,
    pub wall_time_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Trial {
    index: usize,
    seed: u64,
    max_n: usize,
    planted: bool,
}

type Outcome = std::result::Result<(), (String, Value)>;

fn default_max_n(name: &str) -> usize {
    match name {
        "tm21" => 10,
        "irr_eq" | "ideal_principal" => 7,
        "sum_prod" => 5,
        "lem2_3" => 3,
        "fvee" => 6,
        "thm8_pipe" => 5,
        _ => 8,
    }
}

fn trial_fn(name: &str) -> Result<fn(&Trial) -> Outcome> {
    Ok(match name {
        "tm21" => tm21,
        "irr_eq" => irr_eq,
        "sum_prod" => sum_prod,
        "ideal_principal" => ideal_principal,
        "lem2_3" => lem2_3,
        "fvee" => fvee,
        "thm8_pipe" => thm8_pipe,
        "separating" => separating,
        _ => return Err(Error::UnknownSuite(name.to_string())),
    })
}

fn trial_seed(seed: u64, index: usize) -> u64 {
    // splitmix64 finalizer over seed and index
    let mut z = seed ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn run_suite(name: &str, trials: usize, seed: u64, max_n: Option<usize>) -> Result<SuiteReport> {
    run_suite_with(
        name,
        &SuiteConfig {
            max_n,
            ..SuiteConfig::new(trials, seed)
        },
    )
}

/// Runs the trials in parallel; failures are reported in trial order.
pub fn run_suite_with(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let f = trial_fn(name)?;
    let max_n = cfg.max_n.unwrap_or_else(|| default_max_n(name));
    let start = Instant::now();
    let failures: Vec<Failure> = (0..cfg.trials)
        .into_par_iter()
        .filter_map(|index| {
            let t = Trial {
                index,
                seed: trial_seed(cfg.seed, index),
                max_n,
                planted: cfg.plant_fault && index == 0,
            };
            run_trial(f, &t)
        })
        .collect();
    Ok(SuiteReport {
        suite: name.to_string(),
        trials: cfg.trials,
        seed: cfg.seed,
        max_n,
        plant_fault: cfg.plant_fault,
        failures,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

fn run_trial(f: fn(&Trial) -> Outcome, t: &Trial) -> Option<Failure> {
    f(t).err().map(|(reason, bundle)| Failure {
        trial: t.index,
        trial_seed: t.seed,
        reason,
        bundle,
    })
}

/// Re-runs the trial recorded in `failure`. Returns the fresh failure, or
/// `None` if the trial now passes.
pub fn replay_failure(name: &str, max_n: usize, failure: &Failure, plant_fault: bool) -> Result<Option<Failure>> {
    let f = trial_fn(name)?;
    let t = Trial {
        index: failure.trial,
        seed: failure.trial_seed,
        max_n,
        planted: plant_fault && failure.trial == 0,
    };
    Ok(run_trial(f, &t))
}

fn rng(t: &Trial) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(t.seed)
}

fn fail(reason: impl Into<String>, bundle: Value) -> Outcome {
    Err((reason.into(), bundle))
}

fn lib_err(stage: &str, e: Error, bundle: Value) -> (String, Value) {
    (format!("{stage}: {e}"), bundle)
}

/// Ideals of a finite poset are exactly its principal downsets.
fn check_ideals(p: &Poset) -> Outcome {
    let ideals = enumerate_ideals(p);
    let mut principals: Vec<DownSet> = (0..p.len()).map(|x| principal(p, x)).collect();
    principals.sort();
    if ideals.sets != principals {
        return fail(
            "ideal_principal: ideals differ from principal downsets",
            json!({ "poset": p, "ideals": ideals.len() }),
        );
    }
    Ok(())
}

fn tm21(t: &Trial) -> Outcome {
    let mut r = rng(t);
    let j = random_join_semilattice(t.max_n, r.gen());
    check_ideals(&j)?;
    for k in 1..=3 {
        let bundle = || json!({ "poset": j, "k": k });
        let independent = oracles::has_independent_set(&j, k);
        let found = find_independent_set(&j, k).map_err(|e| lib_err("search", e, bundle()))?;
        let bk = finite_powerset(k);
        let order = embedding_search(&bk, &j, EmbeddingMode::Order).map_err(|e| lib_err("order", e, bundle()))?;
        let join = embedding_search(&bk, &j, EmbeddingMode::Join).map_err(|e| lib_err("join", e, bundle()))?;
        if found.is_some() != independent || order.is_some() != independent || join.is_some() != independent {
            return fail(
                "independence, order embedding and join embedding disagree",
                json!({
                    "poset": j, "k": k, "oracle": independent, "search": found.is_some(),
                    "order": order.is_some(), "join": join.is_some()
                }),
            );
        }
        if let Some(w) = join {
            if !oracles::join_preserving(w.source(), w.target(), w.table()) || !oracles::is_injective(w.table()) {
                return fail("join witness fails oracle", json!({ "poset": j, "k": k, "table": w.table() }));
            }
        }
    }
    Ok(())
}

fn random_small_poset(r: &mut ChaCha8Rng, lo: usize, hi: usize) -> Poset {
    random_poset(r.gen_range(lo..=hi.max(lo)), r.gen_range(0.0..0.7), r.gen())
}

fn irr_eq(t: &Trial) -> Outcome {
    let mut r = rng(t);
    let q = random_small_poset(&mut r, 1, t.max_n);
    check_ideals(&q)?;
    let bundle = || json!({ "poset": q });
    let (lat, fam) = downset_lattice_family(&q).map_err(|e| lib_err("lattice", e, bundle()))?;
    let irr = join_irreducibles(&lat).map_err(|e| lib_err("irreducibles", e, bundle()))?;
    let primes = join_primes(&lat).map_err(|e| lib_err("primes", e, bundle()))?;
    let mut principals: Vec<usize> = (0..q.len())
        .map(|x| fam.index_of(&principal(&q, x)).expect("principal downset"))
        .collect();
    principals.sort_unstable();
    if irr != principals || primes != principals {
        return fail(
            "irreducibles, primes and principal downsets differ",
            json!({ "poset": q, "irreducibles": irr, "primes": primes, "principal": principals }),
        );
    }
    Ok(())
}

fn sum_prod(t: &Trial) -> Outcome {
    let mut r = rng(t);
    let a = random_small_poset(&mut r, 1, t.max_n);
    let b = random_small_poset(&mut r, 1, t.max_n);
    let sum = a.direct_sum(&b);
    for p in [&a, &b, &sum, &a.direct_product(&b)] {
        check_ideals(p)?;
    }
    let bundle = || json!({ "a": a, "b": b });
    let (ls, fs) = downset_lattice_family(&sum).map_err(|e| lib_err("sum", e, bundle()))?;
    let (la, fa) = downset_lattice_family(&a).map_err(|e| lib_err("a", e, bundle()))?;
    let (lb, fb) = downset_lattice_family(&b).map_err(|e| lib_err("b", e, bundle()))?;
    if ls.len() != la.len() * lb.len() {
        return fail("downset counts do not multiply", bundle());
    }
    let prod = la.direct_product(&lb);
    let n = a.len();
    let table = fs
        .sets
        .iter()
        .map(|d| {
            let left: Vec<usize> = d.bits().ones().filter(|&x| x < n).collect();
            let right: Vec<usize> = d.bits().ones().filter(|&x| x >= n).map(|x| x - n).collect();
            let ia = fa.index_of(&DownSet::from_indices(&a, &left).expect("restriction is a downset"));
            let ib = fb.index_of(&DownSet::from_indices(&b, &right).expect("restriction is a downset"));
            ia.expect("listed") * lb.len() + ib.expect("listed")
        })
        .collect();
    let w = certify(&ls, &prod, table).map_err(|e| lib_err("certify", e, bundle()))?;
    let c = w.certified();
    if !(c.order_embedding && c.injective && c.surjective) {
        return fail("restriction map is not an isomorphism", bundle());
    }
    Ok(())
}

fn ideal_principal(t: &Trial) -> Outcome {
    let mut r = rng(t);
    check_ideals(&random_small_poset(&mut r, 0, t.max_n))
}

/// Conditions recomputed from the definitions, in report order.
fn delta_oracle(n: usize, p: &Poset, table: &[usize]) -> [bool; 9] {
    let dom = delta(n);
    let f = |i: usize, j: usize| table[delta_index(n, i, j)];
    let mut c = [true; 9];
    c[0] = oracles::meet_preserving(&dom, p, table);
    c[1] = oracles::order_preserving(&dom, p, table);
    for i in 0..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                c[2] &= p.le(f(i, j), f(k, OMEGA));
                c[3] &= p.le(f(i, j), f(j, k));
                c[4] &= p.le(f(i, j), f(i, k));
                c[5] &= oracles::meet_of(p, &[f(i, k), f(j, k)]) == Some(f(i, j));
            }
            for k in (j + 1..=n).chain([OMEGA]) {
                c[6] &= p.lt(f(i, j), f(j, k));
                c[7] &= p.lt(f(i, j), f(i, k));
            }
        }
    }
    c[8] = oracles::is_injective(table);
    c
}

fn delta_table(n: usize, p: &Poset, tops: &[usize]) -> Vec<usize> {
    delta_coords(n)
        .into_iter()
        .map(|(i, j)| {
            if j == OMEGA {
                tops[i]
            } else {
                oracles::meet_of(p, &[tops[i], tops[j]]).expect("lattice")
            }
        })
        .collect()
}

fn lem2_3(t: &Trial) -> Outcome {
    let mut r = rng(t);
    let n = r.gen_range(1..=t.max_n.max(1));
    let (p, tops) = match t.index % 3 {
        0 => {
            let d = delta(n);
            let (lat, fam) = downset_lattice_family(&d).expect("small");
            let tops = (0..=n)
                .map(|i| fam.index_of(&principal(&d, delta_index(n, i, OMEGA))).expect("listed"))
                .collect();
            (lat, tops)
        }
        1 => {
            let q = random_small_poset(&mut r, 1, 4);
            let (lat, _) = downset_lattice_family(&q).expect("small");
            let tops = (0..=n).map(|_| r.gen_range(0..lat.len())).collect();
            (lat, tops)
        }
        _ => {
            let c = Poset::chain(r.gen_range(1..=4));
            let top = r.gen_range(0..c.len());
            (c, vec![top; n + 1])
        }
    };
    let table = delta_table(n, &p, &tops);
    let bundle = json!({ "n": n, "poset": p, "table": table });
    let rep = check_delta_map(n, &p, &table).map_err(|e| lib_err("check", e, bundle.clone()))?;
    let got = [
        rep.meet_preserving,
        rep.order_preserving,
        rep.below_later_top,
        rep.below_next_pair,
        rep.below_same_row,
        rep.pair_meet,
        rep.strict_next_pair,
        rep.strict_same_row,
        rep.injective,
    ];
    let want = delta_oracle(n, &p, &table);
    if got != want {
        return fail("report differs from oracle", json!({ "input": bundle, "report": got, "oracle": want }));
    }
    if want[..6].iter().any(|&b| b != want[0]) {
        return fail("meet-preservation conditions disagree", bundle);
    }
    if want[0] && want[8] != (want[6] && want[7]) {
        return fail("injectivity differs from the strictness conditions", bundle);
    }
    if !rep.consistent() {
        return fail("report flags inconsistency", bundle);
    }

    // A decreasing column of tops in a chain breaks f(i,j) ≤ f(k,ω).
    let m = n.max(2);
    let chain = Poset::chain(m + 1);
    let bad_tops: Vec<usize> = (0..=m).map(|i| m - i).collect();
    let bad = delta_table(m, &chain, &bad_tops);
    let bad_bundle = json!({ "n": m, "poset": chain, "table": bad, "planted": t.planted });
    let mut rep = check_delta_map(m, &chain, &bad).map_err(|e| lib_err("check", e, bad_bundle.clone()))?;
    if t.planted {
        rep.below_later_top = true;
        rep.meet_preserving = true;
    }
    if rep.below_later_top || rep.meet_preserving {
        return fail("planted violation of f(i,j) ≤ f(k,ω) not caught", bad_bundle);
    }
    Ok(())
}

fn fvee(t: &Trial) -> Outcome {
    let mut r = rng(t);
    let p = random_meet_semilattice(t.max_n, r.gen());
    let (lat, fam) = downset_lattice_family(&p).expect("small");
    // x ↦ ↓x ∩ S is meet-preserving; S = P keeps it injective.
    let s = if r.gen_bool(0.5) {
        fam.sets.last().expect("nonempty").clone()
    } else {
        fam.sets[r.gen_range(0..fam.len())].clone()
    };
    let table: Vec<usize> = (0..p.len())
        .map(|x| fam.index_of(&principal(&p, x).intersection(&s)).expect("downset"))
        .collect();
    let bundle = || json!({ "poset": p, "cut": s.members() });
    let f = certify(&p, &lat, table).map_err(|e| lib_err("certify", e, bundle()))?;
    if !f.certified().meet_preserving {
        return fail("generated map is not meet-preserving", bundle());
    }
    let ext = f_vee(&f).map_err(|e| lib_err("f_vee", e, bundle()))?;
    let w = &ext.witness;
    if !w.certified().lattice_hom
        || !oracles::join_preserving(w.source(), w.target(), w.table())
        || !oracles::meet_preserving(w.source(), w.target(), w.table())
    {
        return fail("extension is not a lattice homomorphism", bundle());
    }
    if ext.predicted_injective != oracles::is_injective(w.table()) {
        return fail("injectivity criterion disagrees with the table", bundle());
    }
    Ok(())
}

fn thm8_pipe(t: &Trial) -> Outcome {
    let mut r = rng(t);
    let mut q = random_poset(r.gen_range(2..=t.max_n.max(2)), r.gen_range(0.0..0.35), r.gen());
    let w = max_antichain(&q).len();
    if w < 4 {
        q = q.direct_sum(&Poset::antichain(4 - w));
    }
    let (lat, _) = downset_lattice_family(&q).expect("small");
    let bundle = || json!({ "poset": q });
    let cert = thm8_pipeline(&lat, 4).map_err(|e| lib_err("pipeline", e, bundle()))?;
    if !cert.verify() {
        return fail("certificate does not re-verify", bundle());
    }
    let Payload::SublatticePattern(pp) = &cert.payload else {
        return fail("wrong certificate kind", bundle());
    };
    let m = &pp.map;
    if !oracles::is_injective(m.table())
        || !oracles::join_preserving(m.source(), m.target(), m.table())
        || !oracles::meet_preserving(m.source(), m.target(), m.table())
    {
        return fail("sublattice witness fails oracle", bundle());
    }
    Ok(())
}

/// `inner ⊆ {x} ⋁ J` for every `J`, with the join closure computed from
/// scratch.
fn absorbed_oracle(host: &Poset, x: usize, inner: &DownSet, chain: &[DownSet]) -> bool {
    chain.iter().all(|j| {
        let mut gens: Vec<usize> = j.members();
        gens.push(x);
        loop {
            let mut grew = false;
            for a in 0..gens.len() {
                for b in 0..a {
                    if let Some(v) = oracles::join_of(host, &[gens[a], gens[b]]) {
                        if !gens.contains(&v) {
                            gens.push(v);
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        inner.members().iter().all(|&y| gens.iter().any(|&g| host.le(y, g)))
    })
}

fn separating(t: &Trial) -> Outcome {
    let mut r = rng(t);
    let span = t.max_n.max(3) - 1;
    let n = 2 + t.index % span;
    let c = ChainOfDownSets::powerset_suffixes(n);
    if !is_separating(&c) {
        return fail("powerset suffix chain reported non-separating", json!({ "n": n }));
    }
    let cert = independent_from_separating(&c).map_err(|e| lib_err("extract", e, json!({ "n": n })))?;
    match &cert.payload {
        Payload::IndependentSet(p)
            if p.elements.len() == n - 1 && cert.verify() && oracles::independent(&p.host, &p.elements) => {}
        _ => return fail("extraction size or independence wrong", json!({ "n": n })),
    }

    let g = ChainOfDownSets::grid_suffixes(n + 1);
    match separation_witness(&g) {
        Some((k, x)) if absorbed_oracle(g.host(), x, &g.members()[k], g.members()) => {}
        _ => return fail("grid chain separation witness missing or wrong", json!({ "n": n + 1 })),
    }

    // A random chain of principal ideals.
    let j = random_join_semilattice(t.max_n.max(4) * 2, r.gen());
    let mut tops = vec![j.greatest().expect("finite join-semilattice has a top")];
    while let Some(&x) = tops.last() {
        let below = j.lower_covers(x);
        if below.is_empty() {
            break;
        }
        tops.push(below[r.gen_range(0..below.len())]);
    }
    let members: Vec<DownSet> = tops.iter().map(|&x| principal(&j, x)).collect();
    let bundle = json!({ "poset": j, "chain": tops });
    let chain = ChainOfDownSets::new(j.clone(), members).map_err(|e| lib_err("chain", e, bundle.clone()))?;
    let witness = separation_witness(&chain);
    if let Some((k, x)) = witness {
        if chain.members()[k].contains(x) || !absorbed_oracle(&j, x, &chain.members()[k], chain.members()) {
            return fail("separation witness fails oracle", bundle);
        }
    } else if chain.len() >= 2 {
        match independent_from_separating(&chain) {
            Ok(cert) if cert.verify() => {}
            Err(Error::ConstructionStalled { partial, .. }) if partial.verify() => {}
            _ => return fail("extraction from separating chain failed", bundle),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", 1, 0, None), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn small_runs_pass_and_are_deterministic() {
        for name in SUITES {
            let a = run_suite(name, 6, 11, None).unwrap();
            assert!(a.passed(), "{name}: {:?}", a.failures);
            let b = run_suite(name, 6, 11, None).unwrap();
            assert_eq!(a.failures, b.failures);
        }
    }

    #[test]
    fn planted_fault_is_reported_and_replays() {
        let cfg = SuiteConfig {
            plant_fault: true,
            ..SuiteConfig::new(5, 3)
        };
        let rep = run_suite_with("lem2_3", &cfg).unwrap();
        assert_eq!(rep.failures.len(), 1);
        let f = &rep.failures[0];
        assert_eq!(f.trial, 0);
        assert_eq!(replay_failure("lem2_3", rep.max_n, f, true).unwrap().as_ref(), Some(f));
        assert_eq!(replay_failure("lem2_3", rep.max_n, f, false).unwrap(), None);
    }
}
