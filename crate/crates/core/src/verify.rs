//! The self-verification suite behind `divitopos verify-all`.
//!
//! Every criterion runs on a fixed set of moduli; the requested modulus is
//! added wherever its lattice stays within the desk-scale bounds below.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::equiv::{check_poset_iso, transport_topology, FamilyKind, IndexedFamily};
use crate::error::Result;
use crate::heyting::{adjunction_counterexample, check_negation_laws, is_boolean};
use crate::lattice::{is_squarefree, Lattice};
use crate::omega::build_omega;
use crate::omega::verify_classifier;
use crate::presheaf::{constant_presheaf, random_presheaf, random_sheaf, Presheaf};
use crate::sieve::enumerate_sieves;
use crate::topology::{Topology, TopologyKind};

/// Largest `|D_N|` for which presheaf criteria include the requested modulus.
pub const PRESHEAF_SCALE: usize = 24;
/// Largest `|D_N|` for which topology and classifier criteria include it.
pub const TOPOLOGY_SCALE: usize = 12;
/// Largest `|↓n|` for which the subset-filter sieve oracle is run.
pub const SUBSET_ORACLE_SCALE: usize = 16;

/// Inputs shared by all criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub modulus: u64,
    pub seed: u64,
    pub max_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub modulus: u64,
    pub seed: u64,
    pub criteria: Vec<CriterionOutcome>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("verify-all modulus={} seed={}\n", self.modulus, self.seed);
        for c in &self.criteria {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("criterion {}: {} {}\n", c.id, verdict, c.name));
        }
        out.push_str(if self.pass {
            "overall: PASS\n"
        } else {
            "overall: FAIL\n"
        });
        out
    }
}

fn moduli_with(fixed: &[u64], extra: u64, lattice: &Lattice, scale: usize) -> Vec<u64> {
    let mut set: BTreeSet<u64> = fixed.iter().copied().collect();
    if lattice.len() <= scale {
        set.insert(extra);
    }
    set.into_iter().collect()
}

fn outcome(id: u8, name: &'static str, failure: Option<Value>, detail: Value) -> CriterionOutcome {
    match failure {
        None => CriterionOutcome {
            id,
            name,
            pass: true,
            detail,
        },
        Some(w) => CriterionOutcome {
            id,
            name,
            pass: false,
            detail: json!({ "context": detail, "witness": w }),
        },
    }
}

pub fn adjunction(moduli: &[u64]) -> Result<CriterionOutcome> {
    let mut triples = 0usize;
    let mut failure = None;
    for &m in moduli {
        let l = Lattice::new(m)?;
        triples += l.len().pow(3);
        if let Some((t, k, n)) = adjunction_counterexample(&l) {
            failure.get_or_insert(json!({ "modulus": m, "t": t, "k": k, "n": n }));
        }
    }
    Ok(outcome(
        1,
        "heyting adjunction",
        failure,
        json!({ "moduli": moduli, "triples": triples }),
    ))
}

pub fn negation_laws(moduli: &[u64]) -> Result<CriterionOutcome> {
    let mut failure = None;
    for &m in moduli {
        let report = check_negation_laws(&Lattice::new(m)?);
        if !report.all_pass() {
            failure.get_or_insert(serde_json::to_value(&report).expect("serializable"));
        }
    }
    Ok(outcome(
        2,
        "negation laws",
        failure,
        json!({ "moduli": moduli }),
    ))
}

pub fn boolean_squarefree(upto: u64, extra: u64) -> Result<CriterionOutcome> {
    let mut failure = None;
    let mut ns: Vec<u64> = (1..=upto).collect();
    if extra > upto {
        ns.push(extra);
    }
    for &n in &ns {
        let boolean = is_boolean(&Lattice::new(n)?);
        if boolean != is_squarefree(n) {
            failure.get_or_insert(json!({ "modulus": n, "boolean": boolean }));
        }
    }
    Ok(outcome(
        3,
        "boolean iff squarefree",
        failure,
        json!({ "checked": ns.len() }),
    ))
}

pub fn topology_axioms(moduli: &[u64]) -> Result<CriterionOutcome> {
    let mut failure = None;
    for &m in moduli {
        let l = Lattice::new(m)?;
        for kind in TopologyKind::BUILT_IN {
            let report = Topology::build(&l, kind).check_axioms(&l);
            if !report.all_ok() {
                failure.get_or_insert(json!({ "modulus": m, "topology": kind, "report": report }));
            }
        }
        let dense = Topology::build(&l, TopologyKind::Dense);
        let atomic = Topology::build(&l, TopologyKind::Atomic);
        if let Some(&n) = l
            .elements()
            .iter()
            .find(|&&n| dense.covers(n) != atomic.covers(n))
        {
            failure.get_or_insert(json!({ "modulus": m, "dense_differs_from_atomic_at": n }));
        }
    }
    Ok(outcome(
        4,
        "topology axioms",
        failure,
        json!({ "moduli": moduli }),
    ))
}

/// Every subset of `↓n` that is closed downward, by brute force.
fn sieves_by_subset_filter(lattice: &Lattice, n: u64) -> Vec<Vec<u64>> {
    let below: Vec<u64> = lattice
        .elements()
        .iter()
        .copied()
        .filter(|&k| n % k == 0)
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << below.len()) {
        let set: Vec<u64> = (0..below.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| below[i])
            .collect();
        let closed = set
            .iter()
            .all(|&k| below.iter().all(|&j| k % j != 0 || set.contains(&j)));
        if closed {
            out.push(set);
        }
    }
    out.sort();
    out
}

pub fn sieve_count(extra: u64) -> Result<CriterionOutcome> {
    let l12 = Lattice::new(12)?;
    let sieves = enumerate_sieves(&l12, 12);
    let mut failure = None;
    if sieves.len() != 10 {
        failure = Some(json!({ "expected": 10, "found": sieves.len() }));
    }
    let mut compared = vec![12];
    let le = Lattice::new(extra)?;
    if le.len() <= SUBSET_ORACLE_SCALE && extra != 12 {
        compared.push(extra);
    }
    for &m in &compared {
        let l = Lattice::new(m)?;
        for &n in l.elements() {
            let mut ours: Vec<Vec<u64>> = enumerate_sieves(&l, n)
                .iter()
                .map(|s| s.members().to_vec())
                .collect();
            ours.sort();
            if ours != sieves_by_subset_filter(&l, n) {
                failure.get_or_insert(json!({ "modulus": m, "object": n }));
            }
        }
    }
    Ok(outcome(
        5,
        "sieve counting",
        failure,
        json!({ "sieves_on_12": sieves.len(), "oracle_moduli": compared }),
    ))
}

/// The 20 seeded presheaves used by criteria 6 and 7.
pub fn random_fixtures(lattice: &Lattice, seed: u64, max_size: usize) -> Vec<Presheaf> {
    (0..20)
        .map(|i| random_presheaf(lattice, seed.wrapping_add(i), max_size))
        .collect()
}

/// Five all-singleton presheaves with distinct labels.
pub fn singleton_fixtures(lattice: &Lattice) -> Result<Vec<Presheaf>> {
    ["a", "b", "x", "y", "*"]
        .iter()
        .map(|l| constant_presheaf(lattice, &[l]))
        .collect()
}

pub fn trivial_sheaves(cfg: &SuiteConfig) -> Result<CriterionOutcome> {
    let extra = Lattice::new(cfg.modulus)?;
    let moduli = moduli_with(&[12], cfg.modulus, &extra, PRESHEAF_SCALE);
    let mut failure = None;
    let mut checked = 0;
    for &m in &moduli {
        let l = Lattice::new(m)?;
        let t = Topology::build(&l, TopologyKind::Trivial);
        for (i, f) in random_fixtures(&l, cfg.seed, cfg.max_size)
            .iter()
            .enumerate()
        {
            checked += 1;
            let functorial = f.validate();
            let verdict = f.is_sheaf(&t)?;
            if !functorial.valid || !verdict.is_sheaf {
                failure.get_or_insert(json!({
                    "modulus": m,
                    "fixture": i,
                    "functor": functorial,
                    "verdict": verdict,
                }));
            }
        }
    }
    Ok(outcome(
        6,
        "trivial-topology sheaves",
        failure,
        json!({ "moduli": moduli, "presheaves": checked }),
    ))
}

pub fn discrete_collapse(cfg: &SuiteConfig) -> Result<CriterionOutcome> {
    let extra = Lattice::new(cfg.modulus)?;
    let moduli = moduli_with(&[12], cfg.modulus, &extra, PRESHEAF_SCALE);
    let mut failure = None;
    let mut sheaves = 0;
    let mut checked = 0;
    for &m in &moduli {
        let l = Lattice::new(m)?;
        let t = Topology::build(&l, TopologyKind::Discrete);
        let mut fixtures = random_fixtures(&l, cfg.seed, cfg.max_size);
        fixtures.extend(singleton_fixtures(&l)?);
        for (i, f) in fixtures.iter().enumerate() {
            checked += 1;
            let verdict = f.is_sheaf(&t)?;
            sheaves += usize::from(verdict.is_sheaf);
            let witnessed = verdict.witness.as_ref().is_none_or(|w| w.confirms(f));
            if verdict.is_sheaf != f.is_all_singleton() || !witnessed {
                failure.get_or_insert(json!({ "modulus": m, "fixture": i, "verdict": verdict }));
            }
        }
    }
    Ok(outcome(
        7,
        "discrete-topology collapse",
        failure,
        json!({ "moduli": moduli, "presheaves": checked, "sheaves": sheaves }),
    ))
}

pub fn classifier(cfg: &SuiteConfig) -> Result<CriterionOutcome> {
    let extra = Lattice::new(cfg.modulus)?;
    let moduli = moduli_with(&[12, 30], cfg.modulus, &extra, TOPOLOGY_SCALE);
    let mut failure = None;
    let mut trials = 0usize;
    let mut unique_checked = 0usize;
    for &m in &moduli {
        let l = Lattice::new(m)?;
        for kind in TopologyKind::BUILT_IN {
            let t = Topology::build(&l, kind);
            let omega = build_omega(&l, &t);
            let verdict = omega.presheaf().is_sheaf(&t)?;
            if !verdict.is_sheaf {
                failure.get_or_insert(json!({ "modulus": m, "topology": kind, "omega": verdict }));
            }
            for s in 0..5u64 {
                let sheaf_seed = cfg.seed.wrapping_mul(31).wrapping_add(s);
                let f = random_sheaf(&l, &t, sheaf_seed, cfg.max_size);
                let report = verify_classifier(&f, &t, 2, sheaf_seed.wrapping_add(1000))?;
                trials += report.trials.len();
                unique_checked += report
                    .trials
                    .iter()
                    .filter(|tr| tr.check.classifying_maps.is_some())
                    .count();
                if !report.passed {
                    failure.get_or_insert(json!({
                        "modulus": m,
                        "topology": kind,
                        "sheaf_seed": sheaf_seed,
                        "report": report,
                    }));
                }
            }
        }
    }
    Ok(outcome(
        8,
        "omega sheafhood and classification",
        failure,
        json!({ "moduli": moduli, "trials": trials, "uniqueness_checked": unique_checked }),
    ))
}

pub fn equivalences(extra_modulus: u64) -> Result<CriterionOutcome> {
    let extra = Lattice::new(extra_modulus)?;
    let moduli = moduli_with(&[12], extra_modulus, &extra, TOPOLOGY_SCALE);
    let mut failure = None;
    let mut transports = 0;
    for &m in &moduli {
        let l = Lattice::new(m)?;
        for kind in FamilyKind::ALL {
            let family = IndexedFamily::build(&l, kind);
            let iso = check_poset_iso(&family, &l);
            if !iso.all_ok() {
                failure.get_or_insert(json!({ "modulus": m, "iso": iso }));
                continue;
            }
            for tk in TopologyKind::BUILT_IN {
                let moved = transport_topology(&Topology::build(&l, tk), &family, &l)?;
                transports += 1;
                if !moved.report.all_ok() {
                    failure.get_or_insert(json!({ "modulus": m, "family": kind, "topology": tk, "report": moved.report }));
                }
            }
        }
    }
    Ok(outcome(
        9,
        "equivalences",
        failure,
        json!({ "moduli": moduli, "transports": transports }),
    ))
}

/// Runs criteria 1 through 9.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let lattice = Lattice::new(cfg.modulus)?;
    let criteria = vec![
        adjunction(&moduli_with(&[360], cfg.modulus, &lattice, usize::MAX))?,
        negation_laws(&moduli_with(
            &[12, 30, 360],
            cfg.modulus,
            &lattice,
            usize::MAX,
        ))?,
        boolean_squarefree(1000, cfg.modulus)?,
        topology_axioms(&moduli_with(
            &[12, 36, 60],
            cfg.modulus,
            &lattice,
            TOPOLOGY_SCALE,
        ))?,
        sieve_count(cfg.modulus)?,
        trivial_sheaves(cfg)?,
        discrete_collapse(cfg)?,
        classifier(cfg)?,
        equivalences(cfg.modulus)?,
    ];
    Ok(SuiteReport {
        modulus: cfg.modulus,
        seed: cfg.seed,
        pass: criteria.iter().all(|c| c.pass),
        criteria,
    })
}
