//! The divisor lattice `D_N`: all divisors of a fixed modulus ordered by
//! divisibility, with gcd as meet and lcm as join.

use std::fmt::Write as _;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sieve::{FiniteOrder, Sieve};

/// All positive divisors of `n`, ascending. Returns an empty list for `n = 0`.
pub fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut d = 1u64;
    while d <= n / d {
        if n % d == 0 {
            low.push(d);
            if d != n / d {
                high.push(n / d);
            }
        }
        d += 1;
    }
    low.extend(high.into_iter().rev());
    low
}

/// Prime factorization of `n` by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= n / p {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of prime factors of `n` counted with multiplicity.
pub fn prime_factor_count(n: u64) -> u32 {
    factorize(n).iter().map(|&(_, e)| e).sum()
}

/// True iff no prime square divides `n`.
pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Sum of the divisors of `n`.
pub fn divisor_sum(n: u64) -> u64 {
    divisors(n).iter().sum()
}

/// The finite divisibility poset `D_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    modulus: u64,
    elements: Vec<u64>,
    // row-major, order[i * len + j] == elements[i] | elements[j]
    order: Vec<bool>,
}

impl Lattice {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let elements = divisors(modulus);
        let len = elements.len();
        let mut order = vec![false; len * len];
        for (i, &k) in elements.iter().enumerate() {
            for (j, &n) in elements.iter().enumerate() {
                order[i * len + j] = n % k == 0;
            }
        }
        Ok(Lattice {
            modulus,
            elements,
            order,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Divisors of the modulus in ascending order.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn bottom(&self) -> u64 {
        1
    }

    pub fn top(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, n: u64) -> bool {
        self.elements.binary_search(&n).is_ok()
    }

    /// Position of `n` in [`Lattice::elements`].
    pub fn position(&self, n: u64) -> Result<usize> {
        self.elements
            .binary_search(&n)
            .map_err(|_| Error::NotInLattice {
                value: n,
                modulus: self.modulus,
            })
    }

    /// Divisibility test on element positions, read from the cached matrix.
    pub fn leq_at(&self, i: usize, j: usize) -> bool {
        self.order[i * self.len() + j]
    }

    /// `k ≤ n` in the divisibility order.
    pub fn leq(&self, k: u64, n: u64) -> Result<bool> {
        let i = self.position(k)?;
        let j = self.position(n)?;
        Ok(self.leq_at(i, j))
    }

    pub fn meet(&self, m: u64, n: u64) -> Result<u64> {
        self.position(m)?;
        self.position(n)?;
        Ok(m.gcd(&n))
    }

    pub fn join(&self, m: u64, n: u64) -> Result<u64> {
        self.position(m)?;
        self.position(n)?;
        Ok(m.lcm(&n))
    }

    /// The principal sieve `↓n`, i.e. all divisors of `n`.
    pub fn down_set(&self, n: u64) -> Result<Sieve> {
        self.position(n)?;
        Ok(Sieve::maximal(self, n))
    }

    /// Multiples of `n` that still divide the modulus.
    pub fn up_set(&self, n: u64) -> Result<Vec<u64>> {
        let i = self.position(n)?;
        Ok((0..self.len())
            .filter(|&j| self.leq_at(i, j))
            .map(|j| self.elements[j])
            .collect())
    }

    /// Union of `↓m` over `m ∈ generators`, as a sieve on the top element.
    pub fn down_closure(&self, generators: &[u64]) -> Result<Sieve> {
        let mut flags = vec![false; self.len()];
        for &m in generators {
            let j = self.position(m)?;
            for (i, flag) in flags.iter_mut().enumerate() {
                *flag |= self.leq_at(i, j);
            }
        }
        let members = self
            .elements
            .iter()
            .zip(flags)
            .filter_map(|(&e, f)| f.then_some(e))
            .collect();
        Ok(Sieve::from_sorted_unchecked(self.modulus, members))
    }

    /// Covering pairs `(k, n)` of the Hasse diagram: `k | n` with `n / k` prime.
    pub fn covering_edges(&self) -> Vec<(u64, u64)> {
        let mut edges = Vec::new();
        for &n in &self.elements {
            for &(p, _) in &factorize(n) {
                edges.push((n / p, n));
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Exhaustive check of `gcd(a, lcm(b, c)) = lcm(gcd(a, b), gcd(a, c))`.
    pub fn check_distributive(&self) -> bool {
        self.distributivity_counterexample().is_none()
    }

    pub fn distributivity_counterexample(&self) -> Option<(u64, u64, u64)> {
        for &a in &self.elements {
            for &b in &self.elements {
                for &c in &self.elements {
                    if a.gcd(&b.lcm(&c)) != a.gcd(&b).lcm(&a.gcd(&c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// The same elements with the order reversed (the multiplicative order).
    pub fn dual(&self) -> DualOrderView<'_> {
        DualOrderView { base: self }
    }

    pub fn to_json(&self) -> LatticeDump {
        LatticeDump {
            modulus: self.modulus,
            elements: self.elements.clone(),
            hasse: self
                .covering_edges()
                .into_iter()
                .map(|(k, n)| [k, n])
                .collect(),
        }
    }

    /// Graphviz rendering of the Hasse diagram, ranked by `Ω(n)`.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph D{} {{", self.modulus);
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=circle];");
        let max_rank = prime_factor_count(self.modulus);
        for rank in 0..=max_rank {
            let nodes: Vec<String> = self
                .elements
                .iter()
                .filter(|&&e| prime_factor_count(e) == rank)
                .map(|e| format!("\"{e}\";"))
                .collect();
            let _ = writeln!(out, "  {{ rank=same; {} }}", nodes.join(" "));
        }
        for (k, n) in self.covering_edges() {
            let _ = writeln!(out, "  \"{k}\" -> \"{n}\";");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "D_{} ({} elements)", self.modulus, self.len());
        for &n in &self.elements {
            let covers: Vec<String> = self
                .covering_edges()
                .into_iter()
                .filter(|&(k, _)| k == n)
                .map(|(_, m)| m.to_string())
                .collect();
            let _ = writeln!(out, "{n} < {}", covers.join(", "));
        }
        out
    }
}

impl FiniteOrder for Lattice {
    fn objects(&self) -> &[u64] {
        &self.elements
    }

    fn le(&self, a: u64, b: u64) -> bool {
        b % a == 0
    }
}

/// JSON dump format of a lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeDump {
    pub modulus: u64,
    pub elements: Vec<u64>,
    pub hasse: Vec<[u64; 2]>,
}

/// `D_N` with the order reversed: `a ≺ b` iff `a = b·c` for some `c`.
#[derive(Debug, Clone, Copy)]
pub struct DualOrderView<'a> {
    base: &'a Lattice,
}

impl DualOrderView<'_> {
    pub fn leq(&self, a: u64, b: u64) -> Result<bool> {
        self.base.leq(b, a)
    }

    /// Bottom of the dual order is the modulus.
    pub fn bottom(&self) -> u64 {
        self.base.top()
    }

    pub fn top(&self) -> u64 {
        self.base.bottom()
    }

    pub fn meet(&self, a: u64, b: u64) -> Result<u64> {
        self.base.join(a, b)
    }

    pub fn join(&self, a: u64, b: u64) -> Result<u64> {
        self.base.meet(a, b)
    }
}
