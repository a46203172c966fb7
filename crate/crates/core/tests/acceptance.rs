//! Acceptance suite: each test prints one `criterion N: PASS|FAIL` line,
//! then asserts. Oracles here are deliberately naive and share no code
//! with the library beyond constructors.

use std::process::Command;
use std::time::{Duration, Instant};

use divitopos::equiv::{check_poset_iso, transport_topology, FamilyKind, IndexedFamily};
use divitopos::heyting::{check_negation_laws, implies, is_boolean, neg};
use divitopos::omega::{build_omega, verify_classifier};
use divitopos::presheaf::{constant_presheaf, random_presheaf, random_sheaf};
use divitopos::sieve::enumerate_sieves;
use divitopos::{Lattice, Topology, TopologyKind};

fn report(id: u8, pass: bool, elapsed: Duration, budget: Duration) {
    let ok = pass && elapsed < budget;
    println!(
        "criterion {id}: {} ({:.3}s, budget {}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(pass, "criterion {id} failed");
    assert!(
        elapsed < budget,
        "criterion {id} exceeded its runtime budget"
    );
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn divisors_naive(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % *d == 0).collect()
}

fn squarefree_naive(n: u64) -> bool {
    (2..=n).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
}

/// Largest divisor of `modulus` coprime to `n`.
fn neg_naive(modulus: u64, n: u64) -> u64 {
    divisors_naive(modulus)
        .into_iter()
        .filter(|&t| gcd(t, n) == 1)
        .max()
        .unwrap()
}

#[test]
fn criterion_1_heyting_adjunction() {
    let start = Instant::now();
    let l = Lattice::new(360).unwrap();
    let ds = divisors_naive(360);
    let mut triples = 0;
    let mut pass = l.elements() == ds.as_slice() && ds.len() == 24;
    for &k in &ds {
        for &n in &ds {
            let imp = implies(&l, k, n).unwrap();
            for &t in &ds {
                triples += 1;
                pass &= (imp % t == 0) == (n % gcd(t, k) == 0);
            }
        }
    }
    pass &= triples == 13_824;
    report(1, pass, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_2_negation_laws() {
    let start = Instant::now();
    let mut pass = true;
    for modulus in [12, 30, 360] {
        let l = Lattice::new(modulus).unwrap();
        pass &= check_negation_laws(&l).all_pass();
        let ds = divisors_naive(modulus);
        let ng = |x: u64| neg_naive(modulus, x);
        for &n in &ds {
            pass &= neg(&l, n).unwrap() == ng(n);
            pass &= ng(ng(n)) % n == 0;
            pass &= ng(n) == ng(ng(ng(n)));
            for &k in &ds {
                if k % n == 0 {
                    pass &= ng(n) % ng(k) == 0;
                }
                pass &= ng(ng(gcd(n, k))) == gcd(ng(ng(n)), ng(ng(k)));
            }
        }
    }
    report(2, pass, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_3_boolean_iff_squarefree() {
    let start = Instant::now();
    let pass = (1..=1000u64).all(|n| is_boolean(&Lattice::new(n).unwrap()) == squarefree_naive(n));
    report(3, pass, start.elapsed(), Duration::from_secs(30));
}

#[test]
fn criterion_4_topology_axioms() {
    let start = Instant::now();
    let mut pass = true;
    for modulus in [12, 36, 60] {
        let l = Lattice::new(modulus).unwrap();
        for kind in TopologyKind::BUILT_IN {
            pass &= Topology::build(&l, kind).check_axioms(&l).all_ok();
        }
        let dense = Topology::build(&l, TopologyKind::Dense);
        let atomic = Topology::build(&l, TopologyKind::Atomic);
        for &n in l.elements() {
            pass &= dense.covers(n) == atomic.covers(n);
            // atomic covers are exactly the nonempty sieves
            pass &= atomic.covers(n).len() == enumerate_sieves(&l, n).len() - 1;
        }
    }
    report(4, pass, start.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_5_sieve_counting() {
    let start = Instant::now();
    let l = Lattice::new(12).unwrap();
    let below = divisors_naive(12);
    let mut oracle: Vec<Vec<u64>> = (0u32..1 << below.len())
        .map(|mask| {
            (0..below.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| below[i])
                .collect::<Vec<u64>>()
        })
        .filter(|s| {
            s.iter()
                .all(|&m| divisors_naive(m).iter().all(|d| s.contains(d)))
        })
        .collect();
    oracle.sort();
    let mut ours: Vec<Vec<u64>> = enumerate_sieves(&l, 12)
        .iter()
        .map(|s| s.members().to_vec())
        .collect();
    ours.sort();
    let pass = ours.len() == 10 && ours == oracle;
    report(5, pass, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_6_trivial_topology_sheaves() {
    let start = Instant::now();
    let l = Lattice::new(12).unwrap();
    let t = Topology::build(&l, TopologyKind::Trivial);
    let mut pass = true;
    for seed in 0..20 {
        let f = random_presheaf(&l, seed, 3);
        pass &= f.validate().valid;
        pass &= l
            .elements()
            .iter()
            .all(|&n| (1..=3).contains(&f.values(n).unwrap().len()));
        pass &= f.is_sheaf(&t).unwrap().is_sheaf;
    }
    report(6, pass, start.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_7_discrete_topology_collapse() {
    let start = Instant::now();
    let l = Lattice::new(12).unwrap();
    let t = Topology::build(&l, TopologyKind::Discrete);
    let mut fixtures: Vec<_> = (0..20).map(|seed| random_presheaf(&l, seed, 3)).collect();
    for label in ["a", "b", "x", "y", "*"] {
        fixtures.push(constant_presheaf(&l, &[label]).unwrap());
    }
    let mut pass = fixtures.len() == 25;
    for f in &fixtures {
        let singletons = l
            .elements()
            .iter()
            .all(|&n| f.values(n).unwrap().len() == 1);
        let verdict = f.is_sheaf(&t).unwrap();
        pass &= verdict.is_sheaf == singletons;
        if let Some(w) = &verdict.witness {
            pass &= w.confirms(f);
        }
    }
    report(7, pass, start.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_8_omega_and_classification() {
    let start = Instant::now();
    let mut pass = true;
    let mut unique_checks = 0;
    for modulus in [12, 30] {
        let l = Lattice::new(modulus).unwrap();
        for kind in TopologyKind::BUILT_IN {
            let t = Topology::build(&l, kind);
            pass &= build_omega(&l, &t)
                .presheaf()
                .is_sheaf(&t)
                .unwrap()
                .is_sheaf;
            for seed in 0..5 {
                let f = random_sheaf(&l, &t, seed, 3);
                let r = verify_classifier(&f, &t, 2, 100 + seed).unwrap();
                pass &= r.passed && r.trials.len() == 2;
                for trial in &r.trials {
                    if trial.check.classifying_maps.is_some() {
                        unique_checks += 1;
                        pass &= trial.check.classifying_maps == Some(1);
                    }
                }
            }
        }
    }
    println!("criterion 8: uniqueness enumerated in {unique_checks} of 80 trials");
    report(8, pass, start.elapsed(), Duration::from_secs(60));
}

#[test]
fn criterion_9_equivalences() {
    let start = Instant::now();
    let l = Lattice::new(12).unwrap();
    let mut pass = true;
    for kind in FamilyKind::ALL {
        let family = IndexedFamily::build(&l, kind);
        // meet as intersection, checked directly
        for &m in l.elements() {
            for &n in l.elements() {
                let inter: Vec<_> = family
                    .carrier(m)
                    .unwrap()
                    .intersection(family.carrier(n).unwrap())
                    .collect();
                let g: Vec<_> = family.carrier(gcd(m, n)).unwrap().iter().collect();
                pass &= inter == g;
            }
        }
        pass &= check_poset_iso(&family, &l).all_ok();
        for tk in TopologyKind::BUILT_IN {
            let source = Topology::build(&l, tk);
            let moved = transport_topology(&source, &family, &l).unwrap();
            pass &= moved.report.all_ok() && &moved.covers == source.cover_map();
        }
    }
    report(9, pass, start.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_10_end_to_end() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_divitopos"))
        .args(["verify-all", "--modulus", "12"])
        .output()
        .expect("binary runs");
    let mut pass = out.status.code() == Some(0);
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    let ids: Vec<u64> = parsed["criteria"]
        .as_array()
        .map(|cs| cs.iter().filter_map(|c| c["id"].as_u64()).collect())
        .unwrap_or_default();
    pass &= ids == (1..=9).collect::<Vec<u64>>();
    pass &= parsed["criteria"]
        .as_array()
        .is_some_and(|cs| cs.iter().all(|c| c["pass"] == true));
    report(10, pass, start.elapsed(), Duration::from_secs(90));
}
