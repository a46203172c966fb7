//! Grothendieck topologies on a finite order: the four standard ones on
//! `D_N`, custom ones loaded from JSON, and an exhaustive axiom checker.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::sieve::{enumerate_sieves, is_dense_below, FiniteOrder, Sieve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Trivial,
    Discrete,
    Atomic,
    Dense,
    Custom,
}

impl TopologyKind {
    pub const BUILT_IN: [TopologyKind; 4] = [
        TopologyKind::Trivial,
        TopologyKind::Discrete,
        TopologyKind::Atomic,
        TopologyKind::Dense,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::Trivial => "trivial",
            TopologyKind::Discrete => "discrete",
            TopologyKind::Atomic => "atomic",
            TopologyKind::Dense => "dense",
            TopologyKind::Custom => "custom",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parses one of the four built-in names; `custom` is not buildable by name.
impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(TopologyKind::Trivial),
            "discrete" => Ok(TopologyKind::Discrete),
            "atomic" => Ok(TopologyKind::Atomic),
            "dense" => Ok(TopologyKind::Dense),
            other => Err(Error::UnknownTopology(other.to_string())),
        }
    }
}

pub type CoverMap = BTreeMap<u64, BTreeSet<Sieve>>;

/// An assignment `n ↦ J(n)` of covering sieves on `D_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    modulus: u64,
    kind: TopologyKind,
    name: String,
    covers: CoverMap,
}

static NO_COVERS: BTreeSet<Sieve> = BTreeSet::new();

impl Topology {
    pub fn build(lattice: &Lattice, kind: TopologyKind) -> Topology {
        let mut covers = CoverMap::new();
        for &n in lattice.elements() {
            let sieves = match kind {
                TopologyKind::Trivial | TopologyKind::Custom => {
                    std::iter::once(Sieve::maximal(lattice, n)).collect()
                }
                TopologyKind::Discrete => enumerate_sieves(lattice, n).into_iter().collect(),
                TopologyKind::Atomic => enumerate_sieves(lattice, n)
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect(),
                TopologyKind::Dense => enumerate_sieves(lattice, n)
                    .into_iter()
                    .filter(|s| is_dense_below(lattice, s, n))
                    .collect(),
            };
            covers.insert(n, sieves);
        }
        Topology {
            modulus: lattice.modulus(),
            kind,
            name: kind.as_str().to_string(),
            covers,
        }
    }

    /// Validates every listed cover as a sieve on its key. Objects absent
    /// from `covers` get no covering sieves at all.
    pub fn custom(
        lattice: &Lattice,
        name: impl Into<String>,
        covers: &BTreeMap<u64, Vec<Vec<u64>>>,
    ) -> Result<Topology> {
        let mut out = CoverMap::new();
        for &n in lattice.elements() {
            out.insert(n, BTreeSet::new());
        }
        for (&n, sieves) in covers {
            lattice.position(n)?;
            let slot = out.get_mut(&n).expect("every divisor has a slot");
            for members in sieves {
                for &m in members {
                    lattice.position(m)?;
                }
                slot.insert(Sieve::new(lattice, n, members)?);
            }
        }
        Ok(Topology {
            modulus: lattice.modulus(),
            kind: TopologyKind::Custom,
            name: name.into(),
            covers: out,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `J(n)`; empty for objects outside the lattice.
    pub fn covers(&self, n: u64) -> &BTreeSet<Sieve> {
        self.covers.get(&n).unwrap_or(&NO_COVERS)
    }

    pub fn cover_map(&self) -> &CoverMap {
        &self.covers
    }

    pub fn is_cover(&self, sieve: &Sieve) -> bool {
        self.covers(sieve.base()).contains(sieve)
    }

    pub fn check_axioms(&self, lattice: &Lattice) -> AxiomReport {
        check_topology_axioms(lattice, &self.covers)
    }

    pub fn to_file(&self) -> TopologyFile {
        TopologyFile {
            modulus: self.modulus,
            name: self.name.clone(),
            covers: self
                .covers
                .iter()
                .map(|(&n, sieves)| (n, sieves.iter().map(|s| s.members().to_vec()).collect()))
                .collect(),
        }
    }

    pub fn from_file(file: &TopologyFile) -> Result<Topology> {
        let lattice = Lattice::new(file.modulus)?;
        Topology::custom(&lattice, file.name.clone(), &file.covers)
    }
}

/// JSON topology format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyFile {
    pub modulus: u64,
    pub name: String,
    pub covers: BTreeMap<u64, Vec<Vec<u64>>>,
}

/// Outcome of checking the three topology axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub maximal_ok: bool,
    pub stability_ok: bool,
    pub transitivity_ok: bool,
    /// First witness found for each failing axiom.
    pub counterexamples: Vec<AxiomWitness>,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.maximal_ok && self.stability_ok && self.transitivity_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "lowercase")]
pub enum AxiomWitness {
    /// `↓n ∉ J(n)`.
    Maximal { n: u64 },
    /// `cover ∈ J(n)`, `k ≤ n`, but `cover ∩ ↓k ∉ J(k)`.
    Stability {
        n: u64,
        cover: Sieve,
        k: u64,
        pullback: Sieve,
    },
    /// `cover ∈ J(n)` and `sieve ∩ ↓k ∈ J(k)` for all `k ∈ cover`, yet `sieve ∉ J(n)`.
    Transitivity { n: u64, cover: Sieve, sieve: Sieve },
}

impl AxiomWitness {
    /// Re-evaluates the violation directly against the definitions.
    pub fn confirms<P: FiniteOrder + ?Sized>(&self, order: &P, covers: &CoverMap) -> bool {
        let j = |n: u64| covers.get(&n).unwrap_or(&NO_COVERS);
        match self {
            AxiomWitness::Maximal { n } => !j(*n).contains(&Sieve::maximal(order, *n)),
            AxiomWitness::Stability {
                n,
                cover,
                k,
                pullback,
            } => {
                j(*n).contains(cover)
                    && order.le(*k, *n)
                    && cover.pullback_unchecked(order, *k) == *pullback
                    && !j(*k).contains(pullback)
            }
            AxiomWitness::Transitivity { n, cover, sieve } => {
                j(*n).contains(cover)
                    && !j(*n).contains(sieve)
                    && cover
                        .members()
                        .iter()
                        .all(|&k| j(k).contains(&sieve.pullback_unchecked(order, k)))
            }
        }
    }
}

/// Exhaustively checks maximality, stability and transitivity; the last is
/// quantified over every sieve `R` on every object.
pub fn check_topology_axioms<P: FiniteOrder + ?Sized>(order: &P, covers: &CoverMap) -> AxiomReport {
    let j = |n: u64| covers.get(&n).unwrap_or(&NO_COVERS);
    let mut maximal = None;
    let mut stability = None;
    let mut transitivity = None;

    for &n in order.objects() {
        if maximal.is_none() && !j(n).contains(&Sieve::maximal(order, n)) {
            maximal = Some(AxiomWitness::Maximal { n });
        }

        if stability.is_none() {
            'stab: for cover in j(n) {
                for k in order.below(n) {
                    let pullback = cover.pullback_unchecked(order, k);
                    if !j(k).contains(&pullback) {
                        stability = Some(AxiomWitness::Stability {
                            n,
                            cover: cover.clone(),
                            k,
                            pullback,
                        });
                        break 'stab;
                    }
                }
            }
        }

        if transitivity.is_none() {
            'trans: for sieve in enumerate_sieves(order, n) {
                if j(n).contains(&sieve) {
                    continue;
                }
                // objects along which `sieve` is locally covering
                let local: Vec<u64> = order
                    .below(n)
                    .into_iter()
                    .filter(|&k| j(k).contains(&sieve.pullback_unchecked(order, k)))
                    .collect();
                for cover in j(n) {
                    if cover.members().iter().all(|k| local.contains(k)) {
                        transitivity = Some(AxiomWitness::Transitivity {
                            n,
                            cover: cover.clone(),
                            sieve,
                        });
                        break 'trans;
                    }
                }
            }
        }
    }

    AxiomReport {
        maximal_ok: maximal.is_none(),
        stability_ok: stability.is_none(),
        transitivity_ok: transitivity.is_none(),
        counterexamples: [maximal, stability, transitivity]
            .into_iter()
            .flatten()
            .collect(),
    }
}

/// Builds one of the four named topologies.
pub fn build_topology(lattice: &Lattice, name: &str) -> Result<Topology> {
    Ok(Topology::build(lattice, name.parse()?))
}
