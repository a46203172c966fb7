//! The subobject classifier of a site `(D_N, J)`.
//!
//! `Ω(n)` is the set of `J`-closed sieves on `n`, restriction is pullback, and
//! `true_n = ↓n`. A subpresheaf `A ⊆ F` is classified by
//! `χ_n(x) = { k | n : F(k|n)(x) ∈ A(k) }`.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::presheaf::Presheaf;
use crate::sieve::{enumerate_sieves, Sieve};
use crate::topology::Topology;

/// Default cap on search nodes when enumerating natural maps `F → Ω`.
pub const DEFAULT_SEARCH_BUDGET: usize = 1_000_000;

/// Which sieves make up `Ω(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaReading {
    /// `J`-closed sieves; this is the reading that classifies subobjects.
    Closed,
    /// Principal sieves `↓k` only, kept for comparison.
    Principal,
}

/// `S` is closed for `J` when `S ∩ ↓k ∈ J(k)` forces `k ∈ S` for every `k | base`.
pub fn is_closed_sieve(lattice: &Lattice, topology: &Topology, sieve: &Sieve) -> bool {
    lattice
        .elements()
        .iter()
        .filter(|&&k| sieve.base() % k == 0)
        .all(|&k| sieve.contains(k) || !topology.is_cover(&sieve.pullback_unchecked(lattice, k)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaSheaf {
    topology: Topology,
    reading: OmegaReading,
    sieves: Vec<Vec<Sieve>>,
    presheaf: Presheaf,
}

pub fn build_omega(lattice: &Lattice, topology: &Topology) -> OmegaSheaf {
    build_omega_with(lattice, topology, OmegaReading::Closed)
}

pub fn build_omega_with(
    lattice: &Lattice,
    topology: &Topology,
    reading: OmegaReading,
) -> OmegaSheaf {
    let els = lattice.elements();
    let sieves: Vec<Vec<Sieve>> = els
        .iter()
        .map(|&n| match reading {
            OmegaReading::Closed => enumerate_sieves(lattice, n)
                .into_iter()
                .filter(|s| is_closed_sieve(lattice, topology, s))
                .collect(),
            OmegaReading::Principal => {
                let mut v: Vec<Sieve> = els
                    .iter()
                    .filter(|&&k| n % k == 0)
                    .map(|&k| {
                        Sieve::from_sorted_unchecked(
                            n,
                            els.iter().copied().filter(|&t| k % t == 0).collect(),
                        )
                    })
                    .collect();
                v.sort();
                v
            }
        })
        .collect();

    let mut maps = BTreeMap::new();
    for (j, &n) in els.iter().enumerate() {
        for (i, &k) in els.iter().enumerate().filter(|&(_, &k)| n % k == 0) {
            let map = sieves[j]
                .iter()
                .map(|s| {
                    sieves[i]
                        .binary_search(&s.pullback_unchecked(lattice, k))
                        .expect("pullback stays inside Ω")
                })
                .collect();
            maps.insert((i, j), map);
        }
    }
    let values = sieves
        .iter()
        .map(|v| v.iter().map(|s| s.to_string()).collect())
        .collect();
    OmegaSheaf {
        topology: topology.clone(),
        reading,
        presheaf: Presheaf::from_indexed(lattice.clone(), values, maps),
        sieves,
    }
}

impl OmegaSheaf {
    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn reading(&self) -> OmegaReading {
        self.reading
    }

    /// `Ω` as a plain presheaf; labels are the sieves written `{1,2,...}`.
    pub fn presheaf(&self) -> &Presheaf {
        &self.presheaf
    }

    pub fn lattice(&self) -> &Lattice {
        self.presheaf.lattice()
    }

    pub fn sieves(&self, n: u64) -> Result<&[Sieve]> {
        Ok(&self.sieves[self.lattice().position(n)?])
    }

    fn index_of(&self, pos: usize, sieve: &Sieve) -> Option<usize> {
        self.sieves[pos].binary_search(sieve).ok()
    }

    /// `{"n": [[members], ...]}` keyed by divisor.
    pub fn to_dump(&self) -> BTreeMap<u64, Vec<Vec<u64>>> {
        self.lattice()
            .elements()
            .iter()
            .zip(&self.sieves)
            .map(|(&n, v)| (n, v.iter().map(|s| s.members().to_vec()).collect()))
            .collect()
    }
}

/// The components of `true: 1 → Ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrueArrow {
    pub components: BTreeMap<u64, Sieve>,
}

pub fn true_arrow(omega: &OmegaSheaf) -> TrueArrow {
    let lattice = omega.lattice();
    TrueArrow {
        components: lattice
            .elements()
            .iter()
            .map(|&n| (n, Sieve::maximal(lattice, n)))
            .collect(),
    }
}

impl TrueArrow {
    /// Every component lies in `Ω` and `true_n` pulls back to `true_k`.
    pub fn is_natural(&self, omega: &OmegaSheaf) -> bool {
        let lattice = omega.lattice();
        self.components.iter().all(|(&n, t)| {
            let pos = lattice.position(n).unwrap();
            omega.index_of(pos, t).is_some()
                && lattice
                    .elements()
                    .iter()
                    .filter(|&&k| n % k == 0)
                    .all(|&k| t.pullback_unchecked(lattice, k) == self.components[&k])
        })
    }
}

/// A selection `A(n) ⊆ F(n)` closed under restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subpresheaf {
    parent: Presheaf,
    selected: Vec<Vec<bool>>,
}

/// JSON subobject format; divisors that are not listed select nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubpresheafFile {
    pub modulus: u64,
    pub selection: BTreeMap<u64, Vec<String>>,
}

impl Subpresheaf {
    pub fn new(parent: &Presheaf, selection: &BTreeMap<u64, Vec<String>>) -> Result<Subpresheaf> {
        let lattice = parent.lattice();
        let mut selected: Vec<Vec<bool>> = (0..lattice.len())
            .map(|p| vec![false; parent.values_at(p).len()])
            .collect();
        for (&n, labels) in selection {
            let pos = lattice.position(n)?;
            for l in labels {
                selected[pos][parent.label_index(pos, l)?] = true;
            }
        }
        Subpresheaf::from_flags(parent, selected)
    }

    pub fn from_file(parent: &Presheaf, file: &SubpresheafFile) -> Result<Subpresheaf> {
        if file.modulus != parent.lattice().modulus() {
            return Err(Error::ModulusMismatch {
                expected: parent.lattice().modulus(),
                found: file.modulus,
            });
        }
        Subpresheaf::new(parent, &file.selection)
    }

    fn from_flags(parent: &Presheaf, selected: Vec<Vec<bool>>) -> Result<Subpresheaf> {
        let lattice = parent.lattice();
        let els = lattice.elements();
        for j in 0..els.len() {
            for i in (0..els.len()).filter(|&i| lattice.leq_at(i, j)) {
                for (x, _) in selected[j].iter().enumerate().filter(|(_, &s)| s) {
                    if !selected[i][parent.restrict_at(i, j, x)] {
                        return Err(Error::NotSubpresheaf {
                            k: els[i],
                            n: els[j],
                            label: parent.values_at(j)[x].clone(),
                        });
                    }
                }
            }
        }
        Ok(Subpresheaf {
            parent: parent.clone(),
            selected,
        })
    }

    /// The whole of `F`.
    pub fn full(parent: &Presheaf) -> Subpresheaf {
        let selected = (0..parent.lattice().len())
            .map(|p| vec![true; parent.values_at(p).len()])
            .collect();
        Subpresheaf {
            parent: parent.clone(),
            selected,
        }
    }

    pub fn empty(parent: &Presheaf) -> Subpresheaf {
        let selected = (0..parent.lattice().len())
            .map(|p| vec![false; parent.values_at(p).len()])
            .collect();
        Subpresheaf {
            parent: parent.clone(),
            selected,
        }
    }

    pub fn parent(&self) -> &Presheaf {
        &self.parent
    }

    pub fn selection(&self, n: u64) -> Result<Vec<&str>> {
        let pos = self.parent.lattice().position(n)?;
        Ok(self
            .parent
            .values_at(pos)
            .iter()
            .zip(&self.selected[pos])
            .filter_map(|(l, &s)| s.then_some(l.as_str()))
            .collect())
    }

    pub fn to_file(&self) -> SubpresheafFile {
        let lattice = self.parent.lattice();
        SubpresheafFile {
            modulus: lattice.modulus(),
            selection: lattice
                .elements()
                .iter()
                .map(|&n| {
                    let picked = self.selection(n).unwrap();
                    (n, picked.into_iter().map(String::from).collect())
                })
                .collect(),
        }
    }

    fn sieve_of(&self, pos: usize, x: usize) -> Sieve {
        let lattice = self.parent.lattice();
        let els = lattice.elements();
        let members = (0..els.len())
            .filter(|&i| {
                lattice.leq_at(i, pos) && self.selected[i][self.parent.restrict_at(i, pos, x)]
            })
            .map(|i| els[i])
            .collect();
        Sieve::from_sorted_unchecked(els[pos], members)
    }

    /// Smallest `J`-closed subpresheaf containing this one.
    pub fn closure(&self, topology: &Topology) -> Subpresheaf {
        let mut current = self.clone();
        loop {
            let mut next = current.selected.clone();
            for (pos, flags) in next.iter_mut().enumerate() {
                for (x, flag) in flags.iter_mut().enumerate() {
                    if !*flag && topology.is_cover(&current.sieve_of(pos, x)) {
                        *flag = true;
                    }
                }
            }
            if next == current.selected {
                return current;
            }
            current.selected = next;
        }
    }

    pub fn is_closed(&self, topology: &Topology) -> bool {
        self.closure(topology) == *self
    }
}

/// A family of maps `F(n) → {sieves on n}`, candidate natural transformation `F → Ω`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SieveMap {
    modulus: u64,
    components: Vec<Vec<Sieve>>,
}

impl SieveMap {
    pub fn image(&self, lattice: &Lattice, n: u64, x: usize) -> Result<&Sieve> {
        let pos = lattice.position(n)?;
        self.components[pos].get(x).ok_or(Error::NotInLattice {
            value: n,
            modulus: self.modulus,
        })
    }

    /// Replaces one component value; meant for building deliberately broken maps.
    pub fn set_image(&mut self, lattice: &Lattice, n: u64, x: usize, sieve: Sieve) -> Result<()> {
        let pos = lattice.position(n)?;
        self.components[pos][x] = sieve;
        Ok(())
    }

    /// `{"n": {"label": [members]}}`.
    pub fn to_dump(&self, presheaf: &Presheaf) -> BTreeMap<u64, BTreeMap<String, Vec<u64>>> {
        let els = presheaf.lattice().elements();
        els.iter()
            .enumerate()
            .map(|(pos, &n)| {
                let comp = presheaf
                    .values_at(pos)
                    .iter()
                    .zip(&self.components[pos])
                    .map(|(l, s)| (l.clone(), s.members().to_vec()))
                    .collect();
                (n, comp)
            })
            .collect()
    }
}

/// `χ_A`, sending `x ∈ F(n)` to the sieve of divisors where `x` restricts into `A`.
pub fn char_map(sub: &Subpresheaf) -> SieveMap {
    let lattice = sub.parent.lattice();
    SieveMap {
        modulus: lattice.modulus(),
        components: (0..lattice.len())
            .map(|pos| {
                (0..sub.parent.values_at(pos).len())
                    .map(|x| sub.sieve_of(pos, x))
                    .collect()
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum ClassifierFailure {
    /// `χ_n(x)` is not an element of `Ω(n)`.
    NotInOmega { n: u64, label: String, sieve: Sieve },
    /// `χ_n(x) ∩ ↓k ≠ χ_k(F(k|n)(x))`.
    NotNatural {
        k: u64,
        n: u64,
        label: String,
        pulled_back: Sieve,
        expected: Sieve,
    },
    /// `x ∈ A(n)` disagrees with `χ_n(x) = ↓n`.
    PullbackMismatch {
        n: u64,
        label: String,
        selected: bool,
        image: Sieve,
    },
    /// Number of natural maps `F → Ω` whose preimage of `true` is `A`.
    NotUnique { count: usize },
}

/// Result of checking one characteristic map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifierCheck {
    pub natural: bool,
    pub pulls_back_true: bool,
    /// Count of classifying natural maps, `None` when the search budget ran out.
    pub classifying_maps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<ClassifierFailure>,
}

impl ClassifierCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn naturality_failure(
    presheaf: &Presheaf,
    omega: &OmegaSheaf,
    map: &SieveMap,
) -> Option<ClassifierFailure> {
    let lattice = presheaf.lattice();
    let els = lattice.elements();
    for j in 0..els.len() {
        for (x, s) in map.components[j].iter().enumerate() {
            let label = presheaf.values_at(j)[x].clone();
            if omega.index_of(j, s).is_none() {
                return Some(ClassifierFailure::NotInOmega {
                    n: els[j],
                    label,
                    sieve: s.clone(),
                });
            }
            for i in (0..els.len()).filter(|&i| lattice.leq_at(i, j)) {
                let pulled_back = s.pullback_unchecked(lattice, els[i]);
                let expected = &map.components[i][presheaf.restrict_at(i, j, x)];
                if pulled_back != *expected {
                    return Some(ClassifierFailure::NotNatural {
                        k: els[i],
                        n: els[j],
                        label,
                        pulled_back,
                        expected: expected.clone(),
                    });
                }
            }
        }
    }
    None
}

/// Checks that `chi` is natural, that `A` is its preimage of `true`, and
/// (within `budget` search nodes) that no other natural map has that preimage.
pub fn check_characteristic(
    omega: &OmegaSheaf,
    sub: &Subpresheaf,
    chi: &SieveMap,
    budget: usize,
) -> ClassifierCheck {
    let presheaf = &sub.parent;
    let els = presheaf.lattice().elements();
    let natural_failure = naturality_failure(presheaf, omega, chi);
    let natural = natural_failure.is_none();

    let mut pullback_failure = None;
    'outer: for (j, comp) in chi.components.iter().enumerate() {
        for (x, s) in comp.iter().enumerate() {
            if s.is_maximal() != sub.selected[j][x] {
                pullback_failure = Some(ClassifierFailure::PullbackMismatch {
                    n: els[j],
                    label: presheaf.values_at(j)[x].clone(),
                    selected: sub.selected[j][x],
                    image: s.clone(),
                });
                break 'outer;
            }
        }
    }
    let pulls_back_true = pullback_failure.is_none();

    let classifying_maps = NaturalMapSearch::new(presheaf, omega, Some(sub), budget, Some(2))
        .run()
        .map(|maps| maps.len());
    let unique_failure = match classifying_maps {
        Some(count) if count != 1 => Some(ClassifierFailure::NotUnique { count }),
        _ => None,
    };

    ClassifierCheck {
        natural,
        pulls_back_true,
        classifying_maps,
        failure: natural_failure.or(pullback_failure).or(unique_failure),
    }
}

/// Depth-first enumeration of natural maps `F → Ω`.
///
/// Slots `(n, x)` are filled in increasing order of `n`, so when `x ∈ F(n)` is
/// reached every restriction of `x` already has an image and only sieves
/// agreeing with all of them are tried.
struct NaturalMapSearch<'a> {
    presheaf: &'a Presheaf,
    omega: &'a OmegaSheaf,
    constraint: Option<&'a Subpresheaf>,
    slots: Vec<(usize, usize)>,
    budget: usize,
    nodes: usize,
    stop_after: Option<usize>,
    found: Vec<Vec<Vec<usize>>>,
}

impl<'a> NaturalMapSearch<'a> {
    fn new(
        presheaf: &'a Presheaf,
        omega: &'a OmegaSheaf,
        constraint: Option<&'a Subpresheaf>,
        budget: usize,
        stop_after: Option<usize>,
    ) -> Self {
        let len = presheaf.lattice().len();
        let slots = (0..len)
            .flat_map(|j| (0..presheaf.values_at(j).len()).map(move |x| (j, x)))
            .collect();
        NaturalMapSearch {
            presheaf,
            omega,
            constraint,
            slots,
            budget,
            nodes: 0,
            stop_after,
            found: Vec::new(),
        }
    }

    /// `None` if the node budget was exhausted before the search finished.
    fn run(mut self) -> Option<Vec<Vec<Vec<usize>>>> {
        let len = self.presheaf.lattice().len();
        let mut assignment: Vec<Vec<usize>> = (0..len)
            .map(|j| vec![usize::MAX; self.presheaf.values_at(j).len()])
            .collect();
        if self.step(0, &mut assignment) {
            Some(self.found)
        } else {
            None
        }
    }

    // false when the budget ran out
    fn step(&mut self, slot: usize, assignment: &mut Vec<Vec<usize>>) -> bool {
        if self
            .stop_after
            .is_some_and(|limit| self.found.len() >= limit)
        {
            return true;
        }
        if slot == self.slots.len() {
            self.found.push(assignment.clone());
            return true;
        }
        let (j, x) = self.slots[slot];
        let lattice = self.presheaf.lattice();
        let els = lattice.elements();
        for (c, candidate) in self.omega.sieves[j].iter().enumerate() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            if let Some(sub) = self.constraint {
                if candidate.is_maximal() != sub.selected[j][x] {
                    continue;
                }
            }
            let consistent = (0..j).filter(|&i| lattice.leq_at(i, j)).all(|i| {
                let below = assignment[i][self.presheaf.restrict_at(i, j, x)];
                candidate.pullback_unchecked(lattice, els[i]) == self.omega.sieves[i][below]
            });
            if !consistent {
                continue;
            }
            assignment[j][x] = c;
            if !self.step(slot + 1, assignment) {
                return false;
            }
            assignment[j][x] = usize::MAX;
            if self
                .stop_after
                .is_some_and(|limit| self.found.len() >= limit)
            {
                break;
            }
        }
        true
    }
}

fn to_sieve_map(omega: &OmegaSheaf, raw: Vec<Vec<usize>>) -> SieveMap {
    SieveMap {
        modulus: omega.lattice().modulus(),
        components: raw
            .into_iter()
            .enumerate()
            .map(|(j, comp)| {
                comp.into_iter()
                    .map(|c| omega.sieves[j][c].clone())
                    .collect()
            })
            .collect(),
    }
}

/// Every natural map `F → Ω`, or `None` past `budget` search nodes.
pub fn natural_maps(
    presheaf: &Presheaf,
    omega: &OmegaSheaf,
    budget: usize,
) -> Option<Vec<SieveMap>> {
    NaturalMapSearch::new(presheaf, omega, None, budget, None)
        .run()
        .map(|raw| raw.into_iter().map(|m| to_sieve_map(omega, m)).collect())
}

/// Every subpresheaf of `F`, enumerated level by level.
pub fn subpresheaves(presheaf: &Presheaf) -> Vec<Subpresheaf> {
    let lattice = presheaf.lattice();
    let len = lattice.len();
    let mut out = Vec::new();
    let mut selected: Vec<Vec<bool>> = (0..len)
        .map(|p| vec![false; presheaf.values_at(p).len()])
        .collect();

    fn rec(
        presheaf: &Presheaf,
        j: usize,
        selected: &mut Vec<Vec<bool>>,
        out: &mut Vec<Subpresheaf>,
    ) {
        let lattice = presheaf.lattice();
        if j == lattice.len() {
            out.push(Subpresheaf {
                parent: presheaf.clone(),
                selected: selected.clone(),
            });
            return;
        }
        let size = presheaf.values_at(j).len();
        for mask in 0u64..(1u64 << size) {
            let flags: Vec<bool> = (0..size).map(|x| mask >> x & 1 == 1).collect();
            let closed = flags.iter().enumerate().filter(|(_, &f)| f).all(|(x, _)| {
                (0..j)
                    .filter(|&i| lattice.leq_at(i, j))
                    .all(|i| selected[i][presheaf.restrict_at(i, j, x)])
            });
            if closed {
                selected[j] = flags;
                rec(presheaf, j + 1, selected, out);
            }
        }
        selected[j] = vec![false; size];
    }
    rec(presheaf, 0, &mut selected, &mut out);
    out
}

/// Outcome of comparing closed subobjects of `F` with natural maps `F → Ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionCheck {
    pub closed_subobjects: usize,
    pub natural_maps: usize,
    pub bijective: bool,
}

/// Exhaustively checks that `A ↦ χ_A` is a bijection from `J`-closed
/// subpresheaves onto natural maps `F → Ω`. `None` past the search budget.
pub fn check_classification_bijection(
    presheaf: &Presheaf,
    omega: &OmegaSheaf,
    budget: usize,
) -> Option<BijectionCheck> {
    let maps: BTreeSet<SieveMap> = natural_maps(presheaf, omega, budget)?.into_iter().collect();
    let closed: Vec<Subpresheaf> = subpresheaves(presheaf)
        .into_iter()
        .filter(|s| s.is_closed(omega.topology()))
        .collect();
    let images: BTreeSet<SieveMap> = closed.iter().map(char_map).collect();
    Some(BijectionCheck {
        closed_subobjects: closed.len(),
        natural_maps: maps.len(),
        bijective: images.len() == closed.len() && images == maps,
    })
}

/// A seeded `J`-closed subpresheaf: random generators, closed downward under
/// restriction, then closed for `J`.
pub fn random_closed_subpresheaf(
    presheaf: &Presheaf,
    topology: &Topology,
    rng: &mut impl Rng,
) -> Subpresheaf {
    let lattice = presheaf.lattice();
    let len = lattice.len();
    let mut selected: Vec<Vec<bool>> = (0..len)
        .map(|p| {
            (0..presheaf.values_at(p).len())
                .map(|_| rng.gen_bool(0.35))
                .collect()
        })
        .collect();
    for j in (0..len).rev() {
        for x in 0..selected[j].len() {
            if selected[j][x] {
                for i in (0..len).filter(|&i| lattice.leq_at(i, j)) {
                    let y = presheaf.restrict_at(i, j, x);
                    selected[i][y] = true;
                }
            }
        }
    }
    let sub = Subpresheaf {
        parent: presheaf.clone(),
        selected,
    };
    sub.closure(topology)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifierTrial {
    pub selection: BTreeMap<u64, Vec<String>>,
    pub check: ClassifierCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifierReport {
    pub passed: bool,
    pub presheaf_is_sheaf: bool,
    pub trials: Vec<ClassifierTrial>,
}

/// Samples `trials` closed subpresheaves of `presheaf` and checks each
/// characteristic map for naturality, the pullback property and uniqueness.
pub fn verify_classifier(
    presheaf: &Presheaf,
    topology: &Topology,
    trials: usize,
    seed: u64,
) -> Result<ClassifierReport> {
    let presheaf_is_sheaf = presheaf.is_sheaf(topology)?.is_sheaf;
    let omega = build_omega(presheaf.lattice(), topology);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials: Vec<ClassifierTrial> = (0..trials)
        .map(|_| {
            let sub = random_closed_subpresheaf(presheaf, topology, &mut rng);
            let chi = char_map(&sub);
            ClassifierTrial {
                selection: sub.to_file().selection,
                check: check_characteristic(&omega, &sub, &chi, DEFAULT_SEARCH_BUDGET),
            }
        })
        .collect();
    Ok(ClassifierReport {
        passed: presheaf_is_sheaf && trials.iter().all(|t| t.check.passed()),
        presheaf_is_sheaf,
        trials,
    })
}
