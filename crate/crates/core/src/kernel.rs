//! Generic finite hypergroups given by an explicit multiplication table.
//!
//! Everything here works from the table alone and knows nothing about
//! signatures or supports, which is what makes it usable as an oracle for
//! the structured algorithms in [`crate::classify`].

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::gf2::BigCount;

/// Largest table a [`TableHypergroup`] can hold (one `u64` bitset per entry).
pub const MAX_TABLE_ORDER: usize = 64;
/// Largest table the exhaustive subset scans accept.
pub const MAX_SCAN_ORDER: usize = 16;
/// Largest subset the bijection searches accept.
pub const MAX_MAP_ORDER: usize = 16;

/// A set of element indices of one table, stored as a bitset.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(Subset(0), |acc, i| acc.with(i))
    }

    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite hypergroup candidate: identity, involution map and the full
/// hypermultiplication table. Construction checks shape only; the axioms
/// are checked by [`validate_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableHypergroup {
    n: usize,
    identity: usize,
    star: Vec<usize>,
    table: Vec<Subset>,
}

impl TableHypergroup {
    pub fn new(identity: usize, star: Vec<usize>, table: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let n = star.len();
        if n == 0 {
            return Err(Error::MalformedTable("table has no elements".into()));
        }
        if n > MAX_TABLE_ORDER {
            return Err(Error::MalformedTable(format!(
                "{n} elements exceeds the limit of {MAX_TABLE_ORDER}"
            )));
        }
        if identity >= n {
            return Err(Error::MalformedTable(format!(
                "identity {identity} out of range"
            )));
        }
        if let Some(bad) = star.iter().find(|&&s| s >= n) {
            return Err(Error::MalformedTable(format!(
                "star image {bad} out of range"
            )));
        }
        if table.len() != n {
            return Err(Error::MalformedTable(format!(
                "expected {n} rows, found {}",
                table.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (p, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!(
                    "row {p} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (q, entry) in row.iter().enumerate() {
                if entry.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::MalformedTable(format!(
                        "entry ({p},{q}) is not strictly increasing"
                    )));
                }
                if let Some(bad) = entry.iter().find(|&&a| a >= n) {
                    return Err(Error::MalformedTable(format!(
                        "entry ({p},{q}) names element {bad} out of range"
                    )));
                }
                flat.push(Subset::from_indices(entry.iter().copied()));
            }
        }
        Ok(Self {
            n,
            identity,
            star,
            table: flat,
        })
    }

    /// Builds a table from a product function; `product(p, q)` must only
    /// name indices below `n`.
    pub fn from_fn<F>(n: usize, identity: usize, star: Vec<usize>, mut product: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Vec<usize>,
    {
        let table = (0..n)
            .map(|p| {
                (0..n)
                    .map(|q| {
                        let mut entry = product(p, q);
                        entry.sort_unstable();
                        entry.dedup();
                        entry
                    })
                    .collect()
            })
            .collect();
        Self::new(identity, star, table)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn star(&self, p: usize) -> usize {
        self.star[p]
    }

    pub fn star_map(&self) -> &[usize] {
        &self.star
    }

    pub fn product(&self, p: usize, q: usize) -> Subset {
        self.table[p * self.n + q]
    }

    pub fn all(&self) -> Subset {
        if self.n == 64 {
            Subset(u64::MAX)
        } else {
            Subset((1 << self.n) - 1)
        }
    }

    pub fn unit(&self) -> Subset {
        Subset::singleton(self.identity)
    }

    pub fn star_set(&self, set: Subset) -> Subset {
        Subset::from_indices(set.iter().map(|p| self.star[p]))
    }

    fn check_subset(&self, set: Subset) -> Result<()> {
        if set.is_subset_of(self.all()) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "subset {set:?} names elements outside a table of order {}",
                self.n
            )))
        }
    }

    pub fn to_document(&self) -> TableDocument {
        TableDocument {
            n: self.n,
            identity: self.identity,
            star: self.star.clone(),
            table: (0..self.n)
                .map(|p| (0..self.n).map(|q| self.product(p, q).to_vec()).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("table document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TableDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_table()
    }
}

/// Serialized form of a table: `n`, `identity`, `star`, and `table` as an
/// `n x n` array of ascending index arrays.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub n: usize,
    pub identity: usize,
    pub star: Vec<usize>,
    pub table: Vec<Vec<Vec<usize>>>,
}

impl TableDocument {
    pub fn into_table(self) -> Result<TableHypergroup> {
        if self.star.len() != self.n {
            return Err(Error::MalformedTable(format!(
                "n = {} but star has {} entries",
                self.n,
                self.star.len()
            )));
        }
        TableHypergroup::new(self.identity, self.star, self.table)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// (pq)r = p(qr).
    Associativity,
    /// ep = pe = {p}.
    Identity,
    /// p in qr  <=>  q in pr*  <=>  r in q*p.
    Reversibility,
    /// (p*)* = p.
    StarInvolution,
    NonEmptyProducts,
}

impl Axiom {
    pub fn tag(self) -> &'static str {
        match self {
            Axiom::Associativity => "H1",
            Axiom::Identity => "H2",
            Axiom::Reversibility => "H3",
            Axiom::StarInvolution => "star",
            Axiom::NonEmptyProducts => "nonempty",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    /// Offending element indices (a pair or a triple).
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn violated(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

/// Checks (H1)-(H3), star involutivity and nonempty products, recording the
/// first witness found for each failing axiom.
pub fn validate_axioms(t: &TableHypergroup) -> AxiomReport {
    let n = t.n;
    let mut first: Vec<Violation> = Vec::new();
    let mut record = |axiom: Axiom, witness: Vec<usize>| {
        if !first.iter().any(|v| v.axiom == axiom) {
            first.push(Violation { axiom, witness });
        }
    };

    for p in 0..n {
        for q in 0..n {
            if t.product(p, q).is_empty() {
                record(Axiom::NonEmptyProducts, vec![p, q]);
            }
        }
        if t.star(t.star(p)) != p {
            record(Axiom::StarInvolution, vec![p]);
        }
        let e = t.identity;
        if t.product(e, p) != Subset::singleton(p) || t.product(p, e) != Subset::singleton(p) {
            record(Axiom::Identity, vec![e, p]);
        }
    }

    for p in 0..n {
        for q in 0..n {
            let pq = t.product(p, q);
            for r in 0..n {
                let left = product_sets(t, pq, Subset::singleton(r));
                let right = product_sets(t, Subset::singleton(p), t.product(q, r));
                if left != right {
                    record(Axiom::Associativity, vec![p, q, r]);
                }
                let a = t.product(q, r).contains(p);
                let b = t.product(p, t.star(r)).contains(q);
                let c = t.product(t.star(q), p).contains(r);
                if a != b || b != c {
                    record(Axiom::Reversibility, vec![p, q, r]);
                }
            }
        }
    }

    first.sort_by_key(|v| v.axiom);
    AxiomReport {
        passed: first.is_empty(),
        violations: first,
    }
}

/// The complex product FG.
pub fn product_sets(t: &TableHypergroup, f: Subset, g: Subset) -> Subset {
    let mut out = Subset::EMPTY;
    for b in f.iter() {
        for c in g.iter() {
            out = out.union(t.product(b, c));
        }
    }
    out
}

/// G*G contained in G.
pub fn is_closed_subset(t: &TableHypergroup, g: Subset) -> Result<bool> {
    if g.is_empty() {
        return Err(Error::EmptySubset);
    }
    t.check_subset(g)?;
    Ok(product_sets(t, t.star_set(g), g).is_subset_of(g))
}

fn require_closed(t: &TableHypergroup, g: Subset) -> Result<()> {
    if is_closed_subset(t, g)? {
        Ok(())
    } else {
        Err(Error::NotClosed)
    }
}

/// Every closed subset, ascending by bitset value.
pub fn brute_closed_subsets(t: &TableHypergroup) -> Result<Vec<Subset>> {
    guard(
        "table order for subset scan",
        MAX_SCAN_ORDER as u64,
        t.n as u64,
    )?;
    let e = t.identity;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << t.n) {
        let g = Subset(bits);
        if g.contains(e) && product_sets(t, t.star_set(g), g).is_subset_of(g) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Least closed subset containing `s`, as the union of powers of S u S* u {e}.
pub fn generated_closed_subset(t: &TableHypergroup, s: Subset) -> Subset {
    let gens = s.union(t.star_set(s)).union(t.unit());
    let mut current = gens;
    loop {
        let next = current.union(product_sets(t, current, gens));
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Thin elements of `g`: those with p*p = {e}.
pub fn thin_part(t: &TableHypergroup, g: Subset) -> Subset {
    Subset::from_indices(g.iter().filter(|&p| t.product(t.star(p), p) == t.unit()))
}

/// The closed subset generated by all p*p with p in `g`.
pub fn strong_core(t: &TableHypergroup, g: Subset) -> Result<Subset> {
    require_closed(t, g)?;
    let squares = g
        .iter()
        .fold(Subset::EMPTY, |acc, p| acc.union(t.product(t.star(p), p)));
    Ok(generated_closed_subset(t, squares))
}

/// p*Fp contained in F for every p in G.
pub fn is_strongly_normal(t: &TableHypergroup, f: Subset, g: Subset) -> Result<bool> {
    require_closed(t, f)?;
    require_closed(t, g)?;
    if !f.is_subset_of(g) {
        return Err(Error::Precondition("F is not contained in G".into()));
    }
    Ok(g.iter().all(|p| {
        let conj = product_sets(
            t,
            product_sets(t, Subset::singleton(t.star(p)), f),
            Subset::singleton(p),
        );
        conj.is_subset_of(f)
    }))
}

/// [F, G]: the closed subset generated by every a in b*c*bc.
pub fn commutator_closed_subset(t: &TableHypergroup, f: Subset, g: Subset) -> Subset {
    let mut values = Subset::EMPTY;
    for b in f.iter() {
        for c in g.iter() {
            let mut word = Subset::singleton(t.star(b));
            for x in [t.star(c), b, c] {
                word = product_sets(t, word, Subset::singleton(x));
            }
            values = values.union(word);
        }
    }
    generated_closed_subset(t, values)
}

fn closed_subsets_within(t: &TableHypergroup, g: Subset) -> Result<Vec<Subset>> {
    Ok(brute_closed_subsets(t)?
        .into_iter()
        .filter(|f| f.is_subset_of(g))
        .collect())
}

/// Whether a chain {e} = F1 < F2 < ... < Fk = G exists with each link
/// strongly normal in the next.
pub fn is_residually_thin(t: &TableHypergroup, g: Subset) -> Result<bool> {
    guard(
        "table order for chain search",
        MAX_SCAN_ORDER as u64,
        t.n as u64,
    )?;
    require_closed(t, g)?;
    let closed = closed_subsets_within(t, g)?;
    let mut memo: HashMap<Subset, bool> = HashMap::new();
    reaches_identity(t, g, &closed, &mut memo)
}

fn reaches_identity(
    t: &TableHypergroup,
    g: Subset,
    closed: &[Subset],
    memo: &mut HashMap<Subset, bool>,
) -> Result<bool> {
    if g == t.unit() {
        return Ok(true);
    }
    if let Some(&known) = memo.get(&g) {
        return Ok(known);
    }
    let mut found = false;
    for &f in closed {
        if f != g
            && f.is_subset_of(g)
            && is_strongly_normal(t, f, g)?
            && reaches_identity(t, f, closed, memo)?
        {
            found = true;
            break;
        }
    }
    memo.insert(g, found);
    Ok(found)
}

/// Iterates G(1) = G, G(k+1) = [G(k), G] and reports whether {e} is reached.
pub fn is_nilpotent(t: &TableHypergroup, g: Subset) -> Result<bool> {
    require_closed(t, g)?;
    let mut seen = HashSet::new();
    let mut current = g;
    loop {
        if current == t.unit() {
            return Ok(true);
        }
        if !seen.insert(current) {
            return Ok(false);
        }
        current = commutator_closed_subset(t, current, g);
    }
}

/// Intersection of the maximal closed subsets of `g`; `{e}` when there are none.
pub fn frattini(t: &TableHypergroup, g: Subset) -> Result<Subset> {
    guard(
        "table order for Frattini",
        MAX_SCAN_ORDER as u64,
        t.n as u64,
    )?;
    require_closed(t, g)?;
    let proper: Vec<Subset> = closed_subsets_within(t, g)?
        .into_iter()
        .filter(|&f| f != g)
        .collect();
    let maximal = proper
        .iter()
        .filter(|&&f| !proper.iter().any(|&e| e != f && f.is_subset_of(e)));
    let mut out: Option<Subset> = None;
    for &m in maximal {
        out = Some(out.map_or(m, |acc| acc.intersection(m)));
    }
    Ok(out.unwrap_or(t.unit()))
}

/// Backtracking search for bijections G1 -> G2 that fix e and preserve
/// products as sets.
struct MapSearch<'a> {
    t1: &'a TableHypergroup,
    t2: &'a TableHypergroup,
    domain: Vec<usize>,
    codomain: Subset,
    forward: Vec<Option<usize>>,
    backward: Vec<Option<usize>>,
    fp1: Vec<Fingerprint>,
    fp2: Vec<Fingerprint>,
}

/// Isomorphism-invariant data used to prune candidate images.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Fingerprint {
    is_identity: bool,
    square_size: usize,
    row_sizes: Vec<usize>,
}

fn fingerprints(t: &TableHypergroup, g: Subset) -> Vec<Fingerprint> {
    let mut out = vec![Fingerprint::default(); t.n];
    for p in g.iter() {
        let mut row_sizes: Vec<usize> = g.iter().map(|q| t.product(p, q).len()).collect();
        row_sizes.sort_unstable();
        out[p] = Fingerprint {
            is_identity: p == t.identity,
            square_size: t.product(p, p).len(),
            row_sizes,
        };
    }
    out
}

impl<'a> MapSearch<'a> {
    fn new(t1: &'a TableHypergroup, g1: Subset, t2: &'a TableHypergroup, g2: Subset) -> Self {
        let mut domain = vec![t1.identity];
        domain.extend(g1.iter().filter(|&p| p != t1.identity));
        Self {
            t1,
            t2,
            domain,
            codomain: g2,
            forward: vec![None; t1.n],
            backward: vec![None; t2.n],
            fp1: fingerprints(t1, g1),
            fp2: fingerprints(t2, g2),
        }
    }

    fn image(&self, set: Subset) -> Option<Subset> {
        let mut out = Subset::EMPTY;
        for a in set.iter() {
            out = out.with(self.forward[a]?);
        }
        Some(out)
    }

    /// Partial consistency of products between `p` and already mapped elements.
    fn consistent(&self, p: usize) -> bool {
        let x = self.forward[p].expect("p is mapped");
        for (q, y) in self.forward.iter().enumerate() {
            let Some(y) = *y else { continue };
            for (a, b, u, v) in [(p, q, x, y), (q, p, y, x)] {
                let source = self.t1.product(a, b);
                let target = self.t2.product(u, v);
                if source.len() != target.len() {
                    return false;
                }
                for s in source.iter() {
                    if let Some(img) = self.forward[s] {
                        if !target.contains(img) {
                            return false;
                        }
                    }
                }
                for s in target.iter() {
                    if let Some(pre) = self.backward[s] {
                        if !source.contains(pre) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn complete_is_homomorphism(&self) -> bool {
        self.domain.iter().all(|&p| {
            self.domain.iter().all(|&q| {
                let x = self.forward[p].unwrap();
                let y = self.forward[q].unwrap();
                self.image(self.t1.product(p, q)) == Some(self.t2.product(x, y))
            })
        })
    }

    /// Counts completions from depth `depth`, stopping after `limit`.
    fn search(&mut self, depth: usize, limit: u64) -> u64 {
        if depth == self.domain.len() {
            return u64::from(self.complete_is_homomorphism());
        }
        let p = self.domain[depth];
        let mut found = 0;
        let candidates: Vec<usize> = self
            .codomain
            .iter()
            .filter(|&x| self.backward[x].is_none() && self.fp1[p] == self.fp2[x])
            .collect();
        for x in candidates {
            if depth == 0 && x != self.t2.identity {
                continue;
            }
            self.forward[p] = Some(x);
            self.backward[x] = Some(p);
            if self.consistent(p) {
                found += self.search(depth + 1, limit - found);
            }
            self.forward[p] = None;
            self.backward[x] = None;
            if found >= limit {
                break;
            }
        }
        found
    }
}

fn check_map_inputs(t: &TableHypergroup, g: Subset) -> Result<()> {
    guard(
        "subset order for map search",
        MAX_MAP_ORDER as u64,
        g.len() as u64,
    )?;
    require_closed(t, g)
}

/// Whether some isomorphism G1 -> G2 exists (exhaustive search).
pub fn brute_isomorphism_exists(
    t1: &TableHypergroup,
    g1: Subset,
    t2: &TableHypergroup,
    g2: Subset,
) -> Result<bool> {
    check_map_inputs(t1, g1)?;
    check_map_inputs(t2, g2)?;
    if g1.len() != g2.len() {
        return Ok(false);
    }
    Ok(MapSearch::new(t1, g1, t2, g2).search(0, 1) > 0)
}

/// Exact number of automorphisms of `g`.
pub fn brute_automorphism_count(t: &TableHypergroup, g: Subset) -> Result<BigCount> {
    check_map_inputs(t, g)?;
    Ok(BigUint::from(
        MapSearch::new(t, g, t, g).search(0, u64::MAX),
    ))
}
