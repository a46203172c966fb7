//! Concrete posets that mirror `D_N`: periodic points of a permutation,
//! groups of roots of unity, and solution spaces of `f^(n) = f`.
//!
//! Each family is a map `n ↦ carrier(n)` of finite sets. The order on a
//! family is always computed from set inclusion of carriers and then
//! compared against divisibility, never assumed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::sieve::{FiniteOrder, Sieve};
use crate::topology::{check_topology_axioms, AxiomReport, CoverMap, Topology};

/// A permutation of `0..len`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Returns `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<usize>) -> Option<Permutation> {
        let mut seen = vec![false; images.len()];
        for &y in &images {
            if y >= images.len() || std::mem::replace(&mut seen[y], true) {
                return None;
            }
        }
        Some(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `f^times(x)`.
    pub fn iterate(&self, x: usize, times: u64) -> usize {
        (0..times).fold(x, |y, _| self.images[y])
    }

    /// Length of the cycle through `x`.
    pub fn cycle_length(&self, x: usize) -> u64 {
        let mut len = 1;
        let mut y = self.images[x];
        while y != x {
            y = self.images[y];
            len += 1;
        }
        len
    }

    /// Disjoint cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut y = self.images[start];
            while y != start {
                seen[y] = true;
                cycle.push(y);
                y = self.images[y];
            }
            out.push(cycle);
        }
        out
    }
}

/// One cycle of length `d` for every divisor `d` of `N`, laid out on
/// consecutive points in increasing order of `d`.
pub fn build_permutation(lattice: &Lattice) -> Permutation {
    let mut images = Vec::new();
    for &d in lattice.elements() {
        let offset = images.len();
        let d = d as usize;
        images.extend((0..d).map(|i| offset + (i + 1) % d));
    }
    Permutation { images }
}

/// `Per_n(f)`: points fixed by `f^n`.
pub fn periodic_points(perm: &Permutation, n: u64) -> BTreeSet<usize> {
    (0..perm.len())
        .filter(|&x| n % perm.cycle_length(x) == 0)
        .collect()
}

/// A point on the unit circle, `exp(2πi·r)`, kept as the rotation `r ∈ [0, 1)`.
pub type Rotation = Ratio<u64>;

/// `R_n` as reduced rotations `j/n`, `0 ≤ j < n`.
pub fn roots_of_unity(n: u64) -> BTreeSet<Rotation> {
    (0..n).map(|j| Ratio::new(j, n)).collect()
}

/// Group law of the circle: addition mod 1.
pub fn add_rotations(a: Rotation, b: Rotation) -> Rotation {
    let s = a + b;
    s - Ratio::from_integer(s.to_integer())
}

/// `j/n` with the denominator always written out (`0/1` for zero).
pub fn format_rotation(r: &Rotation) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// The basis function `t ↦ exp(ωt)` of a solution space, `ω = exp(2πi·r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrequencyLabel(pub Rotation);

impl FrequencyLabel {
    /// Rotation of the eigenvalue `ω^times` picked up under `times`
    /// applications of `d/dt`.
    pub fn derivative_eigenvalue(&self, times: u64) -> Rotation {
        let scaled = self.0 * Ratio::from_integer(times);
        scaled - Ratio::from_integer(scaled.to_integer())
    }

    /// `(d/dt)^times` maps the label to itself exactly when `ω^times = 1`.
    pub fn is_fixed_by(&self, times: u64) -> bool {
        self.derivative_eigenvalue(times) == Ratio::from_integer(0)
    }
}

impl fmt::Display for FrequencyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})", format_rotation(&self.0))
    }
}

/// Basis of `V_n = { f : f^(n) = f }`: the candidate rotations `j/n` whose
/// labels are fixed by the `n`-fold derivative.
pub fn solution_space_basis(n: u64) -> BTreeSet<FrequencyLabel> {
    (0..n)
        .map(|j| FrequencyLabel(Ratio::new(j, n)))
        .filter(|label| label.is_fixed_by(n))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    PeriodicPoints,
    RootGroups,
    SolutionSpaces,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 3] = [
        FamilyKind::PeriodicPoints,
        FamilyKind::RootGroups,
        FamilyKind::SolutionSpaces,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::PeriodicPoints => "periodic_points",
            FamilyKind::RootGroups => "root_groups",
            FamilyKind::SolutionSpaces => "solution_spaces",
        }
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "periodic" | "periodic_points" => Ok(FamilyKind::PeriodicPoints),
            "roots" | "root_groups" => Ok(FamilyKind::RootGroups),
            "solutions" | "solution_spaces" => Ok(FamilyKind::SolutionSpaces),
            other => Err(format!("unknown family kind `{other}`")),
        }
    }
}

/// An element of some carrier set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CarrierElement {
    Point(usize),
    Root(Rotation),
    Frequency(FrequencyLabel),
}

impl Serialize for CarrierElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            CarrierElement::Point(p) => s.serialize_u64(*p as u64),
            CarrierElement::Root(r) | CarrierElement::Frequency(FrequencyLabel(r)) => {
                s.serialize_str(&format_rotation(r))
            }
        }
    }
}

/// Concrete sets indexed by divisors, ordered by inclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexedFamily {
    kind: FamilyKind,
    #[serde(skip)]
    index: Vec<u64>,
    carriers: BTreeMap<u64, BTreeSet<CarrierElement>>,
}

impl IndexedFamily {
    pub fn build(lattice: &Lattice, kind: FamilyKind) -> IndexedFamily {
        let carriers = match kind {
            FamilyKind::PeriodicPoints => {
                let perm = build_permutation(lattice);
                lattice
                    .elements()
                    .iter()
                    .map(|&n| {
                        let pts = periodic_points(&perm, n)
                            .into_iter()
                            .map(CarrierElement::Point)
                            .collect();
                        (n, pts)
                    })
                    .collect()
            }
            FamilyKind::RootGroups => lattice
                .elements()
                .iter()
                .map(|&n| {
                    (
                        n,
                        roots_of_unity(n)
                            .into_iter()
                            .map(CarrierElement::Root)
                            .collect(),
                    )
                })
                .collect(),
            FamilyKind::SolutionSpaces => lattice
                .elements()
                .iter()
                .map(|&n| {
                    let basis = solution_space_basis(n)
                        .into_iter()
                        .map(CarrierElement::Frequency)
                        .collect();
                    (n, basis)
                })
                .collect(),
        };
        IndexedFamily::new(kind, carriers)
    }

    pub fn new(
        kind: FamilyKind,
        carriers: BTreeMap<u64, BTreeSet<CarrierElement>>,
    ) -> IndexedFamily {
        IndexedFamily {
            kind,
            index: carriers.keys().copied().collect(),
            carriers,
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn indices(&self) -> &[u64] {
        &self.index
    }

    pub fn carrier(&self, n: u64) -> Option<&BTreeSet<CarrierElement>> {
        self.carriers.get(&n)
    }

    pub fn carriers(&self) -> &BTreeMap<u64, BTreeSet<CarrierElement>> {
        &self.carriers
    }

    fn includes(&self, k: u64, n: u64) -> bool {
        self.carriers[&k].is_subset(&self.carriers[&n])
    }

    /// Greatest member contained in both, if there is exactly one.
    fn extensional_meet(&self, a: u64, b: u64) -> Option<u64> {
        let lower: Vec<u64> = self
            .index
            .iter()
            .copied()
            .filter(|&c| self.includes(c, a) && self.includes(c, b))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&c| lower.iter().all(|&o| self.includes(o, c)))
    }

    /// Least member containing both, if there is exactly one.
    fn extensional_join(&self, a: u64, b: u64) -> Option<u64> {
        let upper: Vec<u64> = self
            .index
            .iter()
            .copied()
            .filter(|&c| self.includes(a, c) && self.includes(b, c))
            .collect();
        upper
            .iter()
            .copied()
            .find(|&c| upper.iter().all(|&o| self.includes(c, o)))
    }
}

impl FiniteOrder for IndexedFamily {
    fn objects(&self) -> &[u64] {
        &self.index
    }

    fn le(&self, a: u64, b: u64) -> bool {
        self.includes(a, b)
    }
}

/// `(k, n, carrier(k) ⊆ carrier(n))` for every ordered pair of indices.
pub fn inclusion_order(family: &IndexedFamily) -> Vec<(u64, u64, bool)> {
    let idx = family.indices();
    idx.iter()
        .flat_map(|&k| idx.iter().map(move |&n| (k, n, family.includes(k, n))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum IsoWitness {
    IndexMismatch {
        expected: Vec<u64>,
        found: Vec<u64>,
    },
    Order {
        k: u64,
        n: u64,
        included: bool,
        divides: bool,
    },
    Meet {
        m: u64,
        n: u64,
    },
    Join {
        m: u64,
        n: u64,
    },
    Distributive {
        a: u64,
        b: u64,
        c: u64,
    },
}

/// Comparison of a family's inclusion order with divisibility on `D_N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosetIsoReport {
    pub kind: FamilyKind,
    pub order_match: bool,
    pub meet_match: bool,
    pub join_match: bool,
    pub distributive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<IsoWitness>,
}

impl PosetIsoReport {
    pub fn all_ok(&self) -> bool {
        self.order_match && self.meet_match && self.join_match && self.distributive
    }
}

/// Checks that `n ↦ carrier(n)` is an order isomorphism `D_N → family`:
/// inclusion matches divisibility, `carrier(gcd) = ∩`, `carrier(lcm)` is the
/// least member containing both, and the inclusion lattice is distributive.
pub fn check_poset_iso(family: &IndexedFamily, lattice: &Lattice) -> PosetIsoReport {
    let mut report = PosetIsoReport {
        kind: family.kind,
        order_match: true,
        meet_match: true,
        join_match: true,
        distributive: true,
        counterexample: None,
    };
    if family.indices() != lattice.elements() {
        report.order_match = false;
        report.meet_match = false;
        report.join_match = false;
        report.distributive = false;
        report.counterexample = Some(IsoWitness::IndexMismatch {
            expected: lattice.elements().to_vec(),
            found: family.indices().to_vec(),
        });
        return report;
    }
    let els = lattice.elements();
    let mut witness = None;

    for &k in els {
        for &n in els {
            let included = family.includes(k, n);
            let divides = n % k == 0;
            if included != divides && report.order_match {
                report.order_match = false;
                witness.get_or_insert(IsoWitness::Order {
                    k,
                    n,
                    included,
                    divides,
                });
            }
        }
    }

    for &m in els {
        for &n in els {
            let g = num_integer::gcd(m, n);
            let l = num_integer::lcm(m, n);
            let (cm, cn) = (&family.carriers[&m], &family.carriers[&n]);
            let inter: BTreeSet<CarrierElement> = cm.intersection(cn).copied().collect();
            if family.carriers[&g] != inter && report.meet_match {
                report.meet_match = false;
                witness.get_or_insert(IsoWitness::Meet { m, n });
            }
            let union: BTreeSet<CarrierElement> = cm.union(cn).copied().collect();
            let cl = &family.carriers[&l];
            let least = union.is_subset(cl)
                && family
                    .carriers
                    .values()
                    .filter(|c| union.is_subset(c))
                    .all(|c| cl.is_subset(c));
            if !least && report.join_match {
                report.join_match = false;
                witness.get_or_insert(IsoWitness::Join { m, n });
            }
        }
    }

    'dist: for &a in els {
        for &b in els {
            for &c in els {
                let lhs = family
                    .extensional_join(b, c)
                    .and_then(|bc| family.extensional_meet(a, bc));
                let rhs = match (family.extensional_meet(a, b), family.extensional_meet(a, c)) {
                    (Some(ab), Some(ac)) => family.extensional_join(ab, ac),
                    _ => None,
                };
                let same = match (lhs, rhs) {
                    (Some(x), Some(y)) => family.carriers[&x] == family.carriers[&y],
                    _ => false,
                };
                if !same {
                    report.distributive = false;
                    witness.get_or_insert(IsoWitness::Distributive { a, b, c });
                    break 'dist;
                }
            }
        }
    }

    report.counterexample = witness;
    report
}

/// A topology moved along `n ↦ carrier(n)` and re-checked in the family's own order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransportedTopology {
    pub kind: FamilyKind,
    pub source: String,
    pub covers: CoverMap,
    pub report: AxiomReport,
}

/// Sends every cover `S ∈ J(n)` to the sieve `{carrier(k) : k ∈ S}` on
/// `carrier(n)` and checks the axioms against inclusion of carriers.
pub fn transport_topology(
    topology: &Topology,
    family: &IndexedFamily,
    lattice: &Lattice,
) -> Result<TransportedTopology> {
    let iso = check_poset_iso(family, lattice);
    if !iso.all_ok() {
        let detail = serde_json::to_string(&iso.counterexample).unwrap_or_default();
        return Err(Error::NotIsomorphic(detail));
    }
    let mut covers = CoverMap::new();
    for &n in family.indices() {
        let mut image = BTreeSet::new();
        for cover in topology.covers(n) {
            image.insert(Sieve::new(family, n, cover.members())?);
        }
        covers.insert(n, image);
    }
    let report = check_topology_axioms(family, &covers);
    Ok(TransportedTopology {
        kind: family.kind,
        source: topology.name().to_string(),
        covers,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::TopologyKind;

    fn d(n: u64) -> Lattice {
        Lattice::new(n).unwrap()
    }

    /// Fixed points of `f^n`, found by iterating the map point by point.
    fn periodic_by_iteration(perm: &Permutation, n: u64) -> BTreeSet<usize> {
        (0..perm.len())
            .filter(|&x| perm.iterate(x, n) == x)
            .collect()
    }

    #[test]
    fn permutation_layout() {
        let p = build_permutation(&d(4));
        assert_eq!(p.len(), 7);
        let lens: Vec<usize> = p.cycles().iter().map(Vec::len).collect();
        assert_eq!(lens, vec![1, 2, 4]);
        let p1 = build_permutation(&d(1));
        assert_eq!(p1.len(), 1);
        assert_eq!(p1.apply(0), 0);
        assert_eq!(build_permutation(&d(12)).len(), 28);
        assert!(Permutation::from_images(vec![1, 0, 2]).is_some());
        assert!(Permutation::from_images(vec![1, 1, 2]).is_none());
    }

    #[test]
    fn periodic_points_match_iteration() {
        let l = d(12);
        let p = build_permutation(&l);
        assert_eq!(periodic_points(&p, 1).len(), 1);
        assert_eq!(periodic_points(&p, 4).len(), 7);
        assert_eq!(periodic_points(&p, 12).len(), 28);
        for &n in l.elements() {
            assert_eq!(periodic_points(&p, n), periodic_by_iteration(&p, n));
        }
    }

    #[test]
    fn roots_examples() {
        assert_eq!(roots_of_unity(1), BTreeSet::from([Ratio::new(0, 1)]));
        let r4: Vec<String> = roots_of_unity(4).iter().map(format_rotation).collect();
        assert_eq!(r4, vec!["0/1", "1/4", "1/2", "3/4"]);
        assert!(roots_of_unity(2).is_subset(&roots_of_unity(4)));
        assert!(!roots_of_unity(3).is_subset(&roots_of_unity(4)));
    }

    #[test]
    fn roots_form_groups() {
        for n in 1..=36 {
            let r = roots_of_unity(n);
            assert_eq!(r.len() as u64, n);
            for &a in &r {
                for &b in &r {
                    assert!(r.contains(&add_rotations(a, b)));
                }
            }
        }
    }

    #[test]
    fn solution_basis() {
        let v1 = solution_space_basis(1);
        assert_eq!(v1.len(), 1);
        assert_eq!(v1.iter().next().unwrap().to_string(), "exp(0/1)");
        let v4 = solution_space_basis(4);
        assert_eq!(v4.len(), 4);
        assert!(v4.iter().all(|l| l.is_fixed_by(4)));
        assert!(!FrequencyLabel(Ratio::new(1, 2)).is_fixed_by(1));
        assert!(FrequencyLabel(Ratio::new(1, 2)).is_fixed_by(2));
    }

    #[test]
    fn inclusion_examples() {
        let l = d(12);
        let per = IndexedFamily::build(&l, FamilyKind::PeriodicPoints);
        let order = inclusion_order(&per);
        assert!(order.contains(&(4, 12, true)));
        let roots = IndexedFamily::build(&l, FamilyKind::RootGroups);
        assert!(inclusion_order(&roots).contains(&(2, 3, false)));
        for family in [&per, &roots] {
            for &n in l.elements() {
                assert!(inclusion_order(family).contains(&(n, n, true)));
            }
        }
    }

    #[test]
    fn all_kinds_isomorphic() {
        for modulus in [1, 12, 30, 36] {
            let l = d(modulus);
            for kind in FamilyKind::ALL {
                let report = check_poset_iso(&IndexedFamily::build(&l, kind), &l);
                assert!(report.all_ok(), "{modulus} {kind:?} {report:?}");
            }
        }
    }

    #[test]
    fn root_group_meet() {
        let r: BTreeSet<Rotation> = roots_of_unity(4)
            .intersection(&roots_of_unity(6))
            .copied()
            .collect();
        assert_eq!(r, roots_of_unity(2));
    }

    #[test]
    fn corrupted_family_detected() {
        let l = d(12);
        let per = IndexedFamily::build(&l, FamilyKind::PeriodicPoints);
        let mut carriers = per.carriers().clone();
        // drop the fixed point from Per_6
        carriers
            .get_mut(&6)
            .unwrap()
            .remove(&CarrierElement::Point(0));
        let broken = IndexedFamily::new(FamilyKind::PeriodicPoints, carriers);
        let report = check_poset_iso(&broken, &l);
        assert!(!report.order_match);
        match report.counterexample {
            Some(IsoWitness::Order {
                k,
                n,
                included,
                divides,
            }) => {
                assert!(divides && !included);
                assert_eq!(broken.includes(k, n), included);
            }
            other => panic!("unexpected witness {other:?}"),
        }
        let t = Topology::build(&l, TopologyKind::Trivial);
        assert!(matches!(
            transport_topology(&t, &broken, &l),
            Err(Error::NotIsomorphic(_))
        ));
    }

    #[test]
    fn transported_topologies() {
        let l = d(12);
        for kind in FamilyKind::ALL {
            let family = IndexedFamily::build(&l, kind);
            for tk in TopologyKind::BUILT_IN {
                let t = Topology::build(&l, tk);
                let moved = transport_topology(&t, &family, &l).unwrap();
                assert!(moved.report.all_ok(), "{kind:?} {tk}");
                assert_eq!(&moved.covers, t.cover_map());
            }
            let dense =
                transport_topology(&Topology::build(&l, TopologyKind::Dense), &family, &l).unwrap();
            let atomic =
                transport_topology(&Topology::build(&l, TopologyKind::Atomic), &family, &l)
                    .unwrap();
            assert_eq!(dense.covers, atomic.covers);
        }
    }

    #[test]
    fn carrier_json_uses_fractions() {
        let l = d(2);
        let v = serde_json::to_value(IndexedFamily::build(&l, FamilyKind::RootGroups)).unwrap();
        assert_eq!(v["carriers"]["2"], serde_json::json!(["0/1", "1/2"]));
        let v = serde_json::to_value(IndexedFamily::build(&l, FamilyKind::PeriodicPoints)).unwrap();
        assert_eq!(v["carriers"]["2"], serde_json::json!([0, 1, 2]));
    }
}
