//! Finite presheaves of sets on `D_N`, matching families, amalgamations and
//! the sheaf condition for a topology.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::sieve::Sieve;
use crate::topology::{Topology, TopologyKind};

/// A contravariant functor `D_N → Sets` with finite, labelled value sets.
///
/// Values are stored per lattice position; restriction maps are index maps
/// keyed by `(position of k, position of n)` for every `k | n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    lattice: Lattice,
    values: Vec<Vec<String>>,
    maps: BTreeMap<(usize, usize), Vec<usize>>,
}

/// First failure of the identity or composition law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "lowercase")]
pub enum FunctorViolation {
    /// The map `n|n` moves `label`.
    Identity { n: u64, label: String },
    /// `(k|n)(label) ≠ (k|m)((m|n)(label))`.
    Composition {
        k: u64,
        m: u64,
        n: u64,
        label: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctorCheck {
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<FunctorViolation>,
}

/// JSON presheaf format. Restriction keys are written `"k|n"`; identity maps
/// may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafFile {
    pub modulus: u64,
    pub values: BTreeMap<u64, Vec<String>>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, BTreeMap<String, String>>,
}

/// A compatible choice of one element per member of a sieve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingFamily {
    pub cover: Sieve,
    pub assignment: BTreeMap<u64, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SheafWitness {
    pub n: u64,
    pub cover: Sieve,
    pub family: BTreeMap<u64, String>,
    pub amalgamations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SheafVerdict {
    pub is_sheaf: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SheafWitness>,
}

pub(crate) fn label(i: usize) -> String {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    if i < LETTERS.len() {
        (LETTERS[i] as char).to_string()
    } else {
        format!("x{i}")
    }
}

impl Presheaf {
    /// Builds a presheaf from labelled data. Every divisor needs a value set
    /// and every proper pair `k | n` a total restriction map; missing identity
    /// maps are filled in.
    pub fn new(
        lattice: &Lattice,
        values: &BTreeMap<u64, Vec<String>>,
        restrictions: &BTreeMap<(u64, u64), BTreeMap<String, String>>,
    ) -> Result<Presheaf> {
        for &n in values.keys() {
            lattice.position(n)?;
        }
        let mut vals = Vec::with_capacity(lattice.len());
        for &n in lattice.elements() {
            let set = values.get(&n).ok_or(Error::MissingValues(n))?;
            for (i, l) in set.iter().enumerate() {
                if set[..i].contains(l) {
                    return Err(Error::DuplicateLabel {
                        n,
                        label: l.clone(),
                    });
                }
            }
            vals.push(set.clone());
        }
        for &(k, n) in restrictions.keys() {
            if !lattice.contains(k) || !lattice.contains(n) || n % k != 0 {
                return Err(Error::BadRestrictionKey(format!("{k}|{n}")));
            }
        }

        let mut maps = BTreeMap::new();
        for (j, &n) in lattice.elements().iter().enumerate() {
            for (i, &k) in lattice.elements().iter().enumerate() {
                if n % k != 0 {
                    continue;
                }
                let map = match restrictions.get(&(k, n)) {
                    Some(m) => m,
                    None if k == n => {
                        maps.insert((i, j), (0..vals[j].len()).collect());
                        continue;
                    }
                    None => return Err(Error::MissingRestriction { k, n }),
                };
                for key in map.keys() {
                    if !vals[j].contains(key) {
                        return Err(Error::UnknownLabel {
                            n,
                            label: key.clone(),
                        });
                    }
                }
                let mut idx = Vec::with_capacity(vals[j].len());
                for x in &vals[j] {
                    let image = map
                        .get(x)
                        .and_then(|y| vals[i].iter().position(|v| v == y))
                        .ok_or_else(|| Error::PartialRestriction {
                            k,
                            n,
                            label: x.clone(),
                        })?;
                    idx.push(image);
                }
                maps.insert((i, j), idx);
            }
        }
        Ok(Presheaf {
            lattice: lattice.clone(),
            values: vals,
            maps,
        })
    }

    pub(crate) fn from_indexed(
        lattice: Lattice,
        values: Vec<Vec<String>>,
        maps: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Presheaf {
        Presheaf {
            lattice,
            values,
            maps,
        }
    }

    pub fn from_file(file: &PresheafFile) -> Result<Presheaf> {
        let lattice = Lattice::new(file.modulus)?;
        let mut restrictions = BTreeMap::new();
        for (key, map) in &file.restrictions {
            let parsed = key
                .split_once('|')
                .and_then(|(k, n)| Some((k.trim().parse().ok()?, n.trim().parse().ok()?)))
                .ok_or_else(|| Error::BadRestrictionKey(key.clone()))?;
            restrictions.insert(parsed, map.clone());
        }
        Presheaf::new(&lattice, &file.values, &restrictions)
    }

    pub fn to_file(&self) -> PresheafFile {
        let els = self.lattice.elements();
        let values = els
            .iter()
            .zip(&self.values)
            .map(|(&n, v)| (n, v.clone()))
            .collect();
        let mut restrictions = BTreeMap::new();
        for (&(i, j), idx) in &self.maps {
            if i == j && idx.iter().enumerate().all(|(a, &b)| a == b) {
                continue;
            }
            let map = idx
                .iter()
                .enumerate()
                .map(|(x, &y)| (self.values[j][x].clone(), self.values[i][y].clone()))
                .collect();
            restrictions.insert(format!("{}|{}", els[i], els[j]), map);
        }
        PresheafFile {
            modulus: self.lattice.modulus(),
            values,
            restrictions,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn values(&self, n: u64) -> Result<&[String]> {
        Ok(&self.values[self.lattice.position(n)?])
    }

    pub(crate) fn values_at(&self, pos: usize) -> &[String] {
        &self.values[pos]
    }

    pub(crate) fn restrict_at(&self, kp: usize, np: usize, x: usize) -> usize {
        self.maps[&(kp, np)][x]
    }

    /// Applies the restriction `F(n) → F(k)` to `label`.
    pub fn restrict(&self, k: u64, n: u64, label: &str) -> Result<&str> {
        let kp = self.lattice.position(k)?;
        let np = self.lattice.position(n)?;
        if n % k != 0 {
            return Err(Error::NotBelow { value: k, base: n });
        }
        let x = self.label_index(np, label)?;
        Ok(&self.values[kp][self.restrict_at(kp, np, x)])
    }

    pub(crate) fn label_index(&self, pos: usize, label: &str) -> Result<usize> {
        self.values[pos]
            .iter()
            .position(|v| v == label)
            .ok_or_else(|| Error::UnknownLabel {
                n: self.lattice.elements()[pos],
                label: label.to_string(),
            })
    }

    /// True when every value set has exactly one element.
    pub fn is_all_singleton(&self) -> bool {
        self.values.iter().all(|v| v.len() == 1)
    }

    /// Exhaustive identity and composition check over all chains `k | m | n`.
    pub fn validate(&self) -> FunctorCheck {
        let els = self.lattice.elements();
        let len = els.len();
        let violation = (|| {
            for n in 0..len {
                let id = &self.maps[&(n, n)];
                if let Some(x) = (0..id.len()).find(|&x| id[x] != x) {
                    return Some(FunctorViolation::Identity {
                        n: els[n],
                        label: self.values[n][x].clone(),
                    });
                }
            }
            for n in 0..len {
                for m in (0..len).filter(|&m| self.lattice.leq_at(m, n)) {
                    for k in (0..len).filter(|&k| self.lattice.leq_at(k, m)) {
                        for x in 0..self.values[n].len() {
                            let direct = self.restrict_at(k, n, x);
                            let composed = self.restrict_at(k, m, self.restrict_at(m, n, x));
                            if direct != composed {
                                return Some(FunctorViolation::Composition {
                                    k: els[k],
                                    m: els[m],
                                    n: els[n],
                                    label: self.values[n][x].clone(),
                                });
                            }
                        }
                    }
                }
            }
            None
        })();
        FunctorCheck {
            valid: violation.is_none(),
            violation,
        }
    }

    /// Matching families as index vectors aligned with `cover.members()`.
    ///
    /// Values are chosen on the maximal members only; everything below is
    /// forced by restriction, and conflicting forced values prune the search.
    pub(crate) fn families_indexed(&self, cover: &Sieve) -> Vec<Vec<usize>> {
        let members: Vec<usize> = cover
            .members()
            .iter()
            .map(|&m| self.lattice.position(m).expect("cover lies in the lattice"))
            .collect();
        let tops: Vec<usize> = cover
            .maximal_members(&self.lattice)
            .iter()
            .map(|&m| members[cover.members().binary_search(&m).unwrap()])
            .collect();

        let mut out = Vec::new();
        let forced = vec![None; members.len()];
        self.extend_family(&members, &tops, 0, forced, &mut out);
        out
    }

    fn extend_family(
        &self,
        members: &[usize],
        tops: &[usize],
        depth: usize,
        forced: Vec<Option<usize>>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == tops.len() {
            let family: Vec<usize> = forced
                .into_iter()
                .map(|v| v.expect("every member lies below a maximal member"))
                .collect();
            if self.is_compatible(members, &family) {
                out.push(family);
            }
            return;
        }
        let top = tops[depth];
        'choice: for x in 0..self.values[top].len() {
            let mut next = forced.clone();
            for (slot, &t) in members.iter().enumerate() {
                if !self.lattice.leq_at(t, top) {
                    continue;
                }
                let v = self.restrict_at(t, top, x);
                match next[slot] {
                    Some(existing) if existing != v => continue 'choice,
                    _ => next[slot] = Some(v),
                }
            }
            self.extend_family(members, tops, depth + 1, next, out);
        }
    }

    fn is_compatible(&self, members: &[usize], family: &[usize]) -> bool {
        members.iter().enumerate().all(|(a, &k)| {
            members.iter().enumerate().all(|(b, &t)| {
                !self.lattice.leq_at(t, k) || self.restrict_at(t, k, family[a]) == family[b]
            })
        })
    }

    pub(crate) fn amalgamations_indexed(&self, cover: &Sieve, family: &[usize]) -> Vec<usize> {
        let np = self
            .lattice
            .position(cover.base())
            .expect("cover base lies in the lattice");
        let members: Vec<usize> = cover
            .members()
            .iter()
            .map(|&m| self.lattice.position(m).unwrap())
            .collect();
        (0..self.values[np].len())
            .filter(|&a| {
                members
                    .iter()
                    .zip(family)
                    .all(|(&k, &v)| self.restrict_at(k, np, a) == v)
            })
            .collect()
    }

    fn family_to_labels(&self, cover: &Sieve, family: &[usize]) -> BTreeMap<u64, String> {
        cover
            .members()
            .iter()
            .zip(family)
            .map(|(&k, &v)| {
                let kp = self.lattice.position(k).unwrap();
                (k, self.values[kp][v].clone())
            })
            .collect()
    }

    fn check_cover(&self, cover: &Sieve) -> Result<()> {
        self.lattice.position(cover.base())?;
        for &m in cover.members() {
            self.lattice.position(m)?;
        }
        Ok(())
    }

    /// All matching families for `cover`; the empty sieve has exactly one.
    pub fn matching_families(&self, cover: &Sieve) -> Result<Vec<MatchingFamily>> {
        self.check_cover(cover)?;
        Ok(self
            .families_indexed(cover)
            .into_iter()
            .map(|f| MatchingFamily {
                cover: cover.clone(),
                assignment: self.family_to_labels(cover, &f),
            })
            .collect())
    }

    /// Elements of `F(n)` restricting to the family on every member of its cover.
    pub fn amalgamations(&self, family: &MatchingFamily) -> Result<Vec<String>> {
        self.check_cover(&family.cover)?;
        let mut idx = Vec::with_capacity(family.cover.len());
        for &k in family.cover.members() {
            let kp = self.lattice.position(k)?;
            let label = family
                .assignment
                .get(&k)
                .ok_or_else(|| Error::UnknownLabel {
                    n: k,
                    label: String::new(),
                })?;
            idx.push(self.label_index(kp, label)?);
        }
        let np = self.lattice.position(family.cover.base())?;
        Ok(self
            .amalgamations_indexed(&family.cover, &idx)
            .into_iter()
            .map(|a| self.values[np][a].clone())
            .collect())
    }

    /// Checks the unique-amalgamation condition for every cover of `topology`.
    pub fn is_sheaf(&self, topology: &Topology) -> Result<SheafVerdict> {
        if topology.modulus() != self.lattice.modulus() {
            return Err(Error::ModulusMismatch {
                expected: self.lattice.modulus(),
                found: topology.modulus(),
            });
        }
        for &n in self.lattice.elements() {
            for cover in topology.covers(n) {
                for family in self.families_indexed(cover) {
                    let count = self.amalgamations_indexed(cover, &family).len();
                    if count != 1 {
                        return Ok(SheafVerdict {
                            is_sheaf: false,
                            witness: Some(SheafWitness {
                                n,
                                cover: cover.clone(),
                                family: self.family_to_labels(cover, &family),
                                amalgamations: count,
                            }),
                        });
                    }
                }
            }
        }
        Ok(SheafVerdict {
            is_sheaf: true,
            witness: None,
        })
    }
}

impl SheafWitness {
    /// Recounts the amalgamations of the recorded family.
    pub fn confirms(&self, presheaf: &Presheaf) -> bool {
        let family = MatchingFamily {
            cover: self.cover.clone(),
            assignment: self.family.clone(),
        };
        presheaf
            .amalgamations(&family)
            .map(|a| a.len() == self.amalgamations && a.len() != 1)
            .unwrap_or(false)
    }
}

/// The same label set at every divisor with identity restrictions.
pub fn constant_presheaf(lattice: &Lattice, labels: &[&str]) -> Result<Presheaf> {
    let set: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    let values = lattice
        .elements()
        .iter()
        .map(|&n| (n, set.clone()))
        .collect();
    let identity: BTreeMap<String, String> = set.iter().map(|l| (l.clone(), l.clone())).collect();
    let mut restrictions = BTreeMap::new();
    for &n in lattice.elements() {
        for &k in lattice.elements().iter().filter(|&&k| n % k == 0) {
            restrictions.insert((k, n), identity.clone());
        }
    }
    Presheaf::new(lattice, &values, &restrictions)
}

/// `y_m`: one point `*` over each divisor of `m`, empty elsewhere.
pub fn representable_presheaf(lattice: &Lattice, m: u64) -> Result<Presheaf> {
    lattice.position(m)?;
    let len = lattice.len();
    let els = lattice.elements();
    let values: Vec<Vec<String>> = els
        .iter()
        .map(|&n| {
            if m % n == 0 {
                vec!["*".to_string()]
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut maps = BTreeMap::new();
    for j in 0..len {
        for i in (0..len).filter(|&i| lattice.leq_at(i, j)) {
            maps.insert((i, j), vec![0; values[j].len()]);
        }
    }
    Ok(Presheaf::from_indexed(lattice.clone(), values, maps))
}

/// A seeded presheaf with value sets of size `1..=max_size`.
///
/// Objects are built bottom-up. Each new element of `F(n)` is sent to a
/// matching family on the strict down-set of `n`, which makes every
/// composite of restrictions agree. Element `a` always restricts to `a`, so
/// no value set is empty.
pub fn random_presheaf(lattice: &Lattice, seed: u64, max_size: usize) -> Presheaf {
    let max_size = max_size.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let els = lattice.elements();
    let len = els.len();
    let mut partial =
        Presheaf::from_indexed(lattice.clone(), vec![Vec::new(); len], BTreeMap::new());

    for j in 0..len {
        let n = els[j];
        let size = rng.gen_range(1..=max_size);
        partial.values[j] = (0..size).map(label).collect();
        partial.maps.insert((j, j), (0..size).collect());

        let strict: Vec<u64> = els[..j].iter().copied().filter(|&k| n % k == 0).collect();
        if strict.is_empty() {
            continue;
        }
        let cover = Sieve::from_sorted_unchecked(n, strict);
        let families = partial.families_indexed(&cover);
        let mut images: Vec<Vec<usize>> = vec![vec![0; cover.len()]];
        for _ in 1..size {
            images.push(
                families
                    .choose(&mut rng)
                    .expect("the all-`a` family exists")
                    .clone(),
            );
        }
        for (slot, &k) in cover.members().iter().enumerate() {
            let i = lattice.position(k).unwrap();
            partial
                .maps
                .insert((i, j), images.iter().map(|f| f[slot]).collect());
        }
    }
    partial
}

/// A seeded sheaf for `topology`, built directly for the standard topologies.
///
/// Trivial: any presheaf. Discrete: the terminal presheaf. Atomic and dense:
/// every restriction a bijection onto `F(1)`. Custom topologies get a random
/// presheaf if it happens to be a sheaf, the terminal presheaf otherwise.
pub fn random_sheaf(
    lattice: &Lattice,
    topology: &Topology,
    seed: u64,
    max_size: usize,
) -> Presheaf {
    let terminal = || constant_presheaf(lattice, &["*"]).expect("single label");
    match topology.kind() {
        TopologyKind::Trivial => random_presheaf(lattice, seed, max_size),
        TopologyKind::Discrete => terminal(),
        TopologyKind::Atomic | TopologyKind::Dense => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let size = rng.gen_range(1..=max_size.max(1));
            let len = lattice.len();
            // twist[j][x] is the global value of element x of F(n_j)
            let mut twist: Vec<Vec<usize>> = Vec::with_capacity(len);
            for j in 0..len {
                let mut perm: Vec<usize> = (0..size).collect();
                if j > 0 {
                    perm.shuffle(&mut rng);
                }
                twist.push(perm);
            }
            let mut maps = BTreeMap::new();
            for j in 0..len {
                for i in (0..len).filter(|&i| lattice.leq_at(i, j)) {
                    let map = (0..size)
                        .map(|x| twist[i].iter().position(|&g| g == twist[j][x]).unwrap())
                        .collect();
                    maps.insert((i, j), map);
                }
            }
            let values = vec![(0..size).map(label).collect(); len];
            Presheaf::from_indexed(lattice.clone(), values, maps)
        }
        TopologyKind::Custom => {
            let candidate = random_presheaf(lattice, seed, max_size);
            match candidate.is_sheaf(topology) {
                Ok(v) if v.is_sheaf => candidate,
                _ => terminal(),
            }
        }
    }
}
