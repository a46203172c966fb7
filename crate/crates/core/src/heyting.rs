//! Heyting implication and pseudo-complement on `D_N`.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::Result;
use crate::lattice::Lattice;

/// `k ⇒ n`: the lcm of every divisor `t` of `N` with `gcd(t, k) | n`.
pub fn implies(lattice: &Lattice, k: u64, n: u64) -> Result<u64> {
    lattice.position(k)?;
    lattice.position(n)?;
    Ok(implies_unchecked(lattice, k, n))
}

fn implies_unchecked(lattice: &Lattice, k: u64, n: u64) -> u64 {
    lattice
        .elements()
        .iter()
        .filter(|&&t| n % t.gcd(&k) == 0)
        .fold(1, |acc, &t| acc.lcm(&t))
}

/// `¬n = n ⇒ 1`, the largest divisor of `N` coprime to `n`.
pub fn neg(lattice: &Lattice, n: u64) -> Result<u64> {
    implies(lattice, n, 1)
}

fn neg_unchecked(lattice: &Lattice, n: u64) -> u64 {
    implies_unchecked(lattice, n, 1)
}

/// Outcome of a single law check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<u64>>,
}

impl LawResult {
    fn from_witness(witness: Option<Vec<u64>>) -> Self {
        LawResult {
            pass: witness.is_none(),
            counterexample: witness,
        }
    }
}

/// Results of the exhaustive negation-law and adjunction checks on one lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeytingReport {
    pub modulus: u64,
    pub laws: BTreeMap<String, LawResult>,
}

impl HeytingReport {
    pub fn all_pass(&self) -> bool {
        self.laws.values().all(|l| l.pass)
    }
}

/// First `(t, k, n)` violating `t | (k ⇒ n) ⟺ gcd(t, k) | n`.
pub fn adjunction_counterexample(lattice: &Lattice) -> Option<(u64, u64, u64)> {
    let els = lattice.elements();
    for &k in els {
        for &n in els {
            let imp = implies_unchecked(lattice, k, n);
            for &t in els {
                if (imp % t == 0) != (n % t.gcd(&k) == 0) {
                    return Some((t, k, n));
                }
            }
        }
    }
    None
}

/// Checks the adjunction and the four negation laws for every pair of divisors:
/// `n | ¬¬n`, `n | k ⇒ ¬k | ¬n`, `¬n = ¬¬¬n`, `¬¬gcd(n,k) = gcd(¬¬n, ¬¬k)`.
pub fn check_negation_laws(lattice: &Lattice) -> HeytingReport {
    let els = lattice.elements();
    let negs: Vec<u64> = els.iter().map(|&n| neg_unchecked(lattice, n)).collect();
    let neg_of = |x: u64| negs[lattice.position(x).expect("negation stays in D_N")];
    let dneg = |x: u64| neg_of(neg_of(x));

    let dnn_intro = els.iter().find(|&&n| dneg(n) % n != 0).map(|&n| vec![n]);
    let triple_neg = els
        .iter()
        .find(|&&n| neg_of(n) != neg_of(dneg(n)))
        .map(|&n| vec![n]);
    let mut antitone = None;
    let mut dnn_meet = None;
    for &n in els {
        for &k in els {
            if antitone.is_none() && k % n == 0 && neg_of(n) % neg_of(k) != 0 {
                antitone = Some(vec![n, k]);
            }
            if dnn_meet.is_none() && dneg(n.gcd(&k)) != dneg(n).gcd(&dneg(k)) {
                dnn_meet = Some(vec![n, k]);
            }
        }
    }
    let adjunction = adjunction_counterexample(lattice).map(|(t, k, n)| vec![t, k, n]);

    let laws = [
        ("adjunction", adjunction),
        ("dnn_intro", dnn_intro),
        ("antitone", antitone),
        ("triple_neg", triple_neg),
        ("dnn_meet", dnn_meet),
    ]
    .into_iter()
    .map(|(name, w)| (name.to_string(), LawResult::from_witness(w)))
    .collect();

    HeytingReport {
        modulus: lattice.modulus(),
        laws,
    }
}

/// True iff `¬¬n = n` for every divisor.
pub fn is_boolean(lattice: &Lattice) -> bool {
    boolean_witness(lattice).is_none()
}

/// First `(n, ¬¬n)` with `¬¬n ≠ n`.
pub fn boolean_witness(lattice: &Lattice) -> Option<(u64, u64)> {
    lattice.elements().iter().find_map(|&n| {
        let dn = neg_unchecked(lattice, neg_unchecked(lattice, n));
        (dn != n).then_some((n, dn))
    })
}
