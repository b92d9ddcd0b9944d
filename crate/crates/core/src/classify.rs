//! Closed subsets: recognition, enumeration, counting, isomorphism classes,
//! bases and automorphism groups.
//!
//! Every closed subset `G` is determined by a [`ClosedDescriptor`]: the
//! support `A` of its unique maximal thick element together with the thin
//! subgroup `F`, a GF(2) subspace of the thin coordinates. The elements of
//! `G` are exactly those with thick part inside `A` and thin part in `F`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::ea2::{submasks_ascending, Element, ElementSet, Signature, SubsetStats};
use crate::error::{guard, Error, Result};
use crate::gf2::{
    enumerate_subspaces, gaussian_binomial, gl2_order, BigCount, Gf2Subspace, MAX_ENUM_WIDTH,
};

/// Largest closed subset [`materialize`] will expand, as log2 of its size.
pub const MAX_MATERIALIZE_LOG: u32 = 20;

/// Canonical description `(A, F)` of a closed subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedDescriptor {
    sig: Signature,
    thick_support: u64,
    thin: Gf2Subspace,
}

impl ClosedDescriptor {
    /// `thin` must live in GF(2)^(number of thin generators).
    pub fn new(sig: Signature, thick_support: u64, thin: Gf2Subspace) -> Result<Self> {
        if thick_support & !sig.thick_mask() != 0 {
            return Err(Error::MaskOutOfRange {
                mask: thick_support,
                width: sig.rank(),
            });
        }
        if thin.width() != sig.thin_count() {
            return Err(Error::WidthMismatch {
                expected: sig.thin_count(),
                actual: thin.width(),
            });
        }
        Ok(Self {
            sig,
            thick_support,
            thin,
        })
    }

    /// The closed subset `{e}`.
    pub fn trivial(sig: Signature) -> Self {
        Self {
            sig,
            thick_support: 0,
            thin: Gf2Subspace::zero(sig.thin_count()).expect("thin width fits"),
        }
    }

    /// The whole hypergroup.
    pub fn whole(sig: Signature) -> Self {
        Self {
            sig,
            thick_support: sig.thick_mask(),
            thin: Gf2Subspace::full(sig.thin_count()).expect("thin width fits"),
        }
    }

    /// Parses `A={i,...};F=[m,...]`. Thick indices are 1-based generator
    /// indices; `F` masks are in thin coordinates and may be written in
    /// binary (`0b`), hex (`0x`) or decimal. The basis is re-canonicalized.
    pub fn parse(sig: Signature, text: &str) -> Result<Self> {
        let text = text.trim();
        let (a_part, f_part) = text
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `A=...;F=[...]`, found `{text}`")))?;
        let a_text = a_part
            .trim()
            .strip_prefix("A=")
            .ok_or_else(|| Error::Parse(format!("expected `A=` in `{text}`")))?;
        let thick_support = a_text.parse::<Element>()?.support();
        if thick_support & !sig.thick_mask() != 0 {
            return Err(Error::Parse(format!(
                "A={} is not contained in the thick generators of {sig}",
                Element::from_support_unchecked(thick_support)
            )));
        }
        let list = f_part
            .trim()
            .strip_prefix("F=[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected `F=[...]` in `{text}`")))?;
        let mut masks = Vec::new();
        for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            masks.push(parse_mask(tok)?);
        }
        let thin = Gf2Subspace::span_masks(sig.thin_count(), masks)?;
        Self::new(sig, thick_support, thin)
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    /// The support `A` of the largest thick element.
    pub fn thick_support(&self) -> u64 {
        self.thick_support
    }

    /// The thin subgroup `F` in thin coordinates.
    pub fn thin_subgroup(&self) -> &Gf2Subspace {
        &self.thin
    }

    /// Basis of `F` embedded back into full support masks.
    pub fn thin_basis_supports(&self) -> Vec<u64> {
        self.thin
            .basis()
            .iter()
            .map(|&m| self.sig.expand_thin(m))
            .collect()
    }

    pub fn stats(&self) -> SubsetStats {
        SubsetStats::new(self.thick_support.count_ones(), self.thin.dim())
    }

    pub fn size_log2(&self) -> u32 {
        self.stats().size_log2()
    }

    pub fn size(&self) -> BigCount {
        BigUint::one() << self.size_log2()
    }

    /// Membership without materializing.
    pub fn contains(&self, x: Element) -> bool {
        let support = x.support();
        let thick = support & self.sig.thick_mask();
        support >> self.sig.rank() == 0
            && thick & !self.thick_support == 0
            && self.thin.contains_mask(self.sig.compress_thin(support))
    }

    /// Whether this closed subset contains `other`.
    pub fn contains_subset(&self, other: &ClosedDescriptor) -> bool {
        self.sig == other.sig
            && other.thick_support & !self.thick_support == 0
            && other.thin.is_subspace_of(&self.thin)
    }
}

impl fmt::Display for ClosedDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "A={};F=[",
            Element::from_support_unchecked(self.thick_support)
        )?;
        for (i, m) in self.thin.basis().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m:#b}")?;
        }
        f.write_str("]")
    }
}

fn parse_mask(tok: &str) -> Result<u64> {
    let bad = || Error::Parse(format!("bad mask `{tok}`"));
    if let Some(b) = tok.strip_prefix("0b") {
        u64::from_str_radix(b, 2).map_err(|_| bad())
    } else if let Some(h) = tok.strip_prefix("0x") {
        u64::from_str_radix(h, 16).map_err(|_| bad())
    } else {
        tok.parse().map_err(|_| bad())
    }
}

/// Expands a descriptor into its elements, ascending by support.
pub fn materialize(d: &ClosedDescriptor) -> Result<ElementSet> {
    guard(
        "closed subset size (log2)",
        MAX_MATERIALIZE_LOG as u64,
        d.size_log2() as u64,
    )?;
    let thin: Vec<u64> = d
        .thin
        .member_masks()?
        .into_iter()
        .map(|m| d.sig.expand_thin(m))
        .collect();
    let mut out = Vec::with_capacity(1 << d.size_log2());
    for thick in submasks_ascending(d.thick_support) {
        out.extend(thin.iter().map(|&t| thick | t));
    }
    Ok(ElementSet::from_supports(out))
}

/// Recovers the descriptor of a closed subset, or reports [`Error::NotClosed`].
pub fn recognize(sig: Signature, g: &ElementSet) -> Result<ClosedDescriptor> {
    if g.is_empty() {
        return Err(Error::EmptySubset);
    }
    for x in g {
        sig.element(x.support())?;
    }
    if !g.contains(Element::IDENTITY) {
        return Err(Error::NotClosed);
    }
    let thick_support = g.supports().fold(0, |acc, m| acc | (m & sig.thick_mask()));
    let thin =
        Gf2Subspace::span_masks(sig.thin_count(), g.supports().map(|m| sig.compress_thin(m)))?;
    let d = ClosedDescriptor::new(sig, thick_support, thin)?;
    if g.len() as u128 != 1u128 << d.size_log2() {
        return Err(Error::NotClosed);
    }
    if materialize(&d)? != *g {
        return Err(Error::NotClosed);
    }
    Ok(d)
}

/// Lazy stream of closed-subset descriptors.
pub struct ClosedIter {
    inner: Box<dyn Iterator<Item = ClosedDescriptor> + Send>,
}

impl Iterator for ClosedIter {
    type Item = ClosedDescriptor;

    fn next(&mut self) -> Option<ClosedDescriptor> {
        self.inner.next()
    }
}

/// Every closed subset exactly once, ordered by `A` ascending and then by
/// subspace enumeration order. `size_log2` keeps only subsets of
/// `2^size_log2` elements; `strongly_normal` keeps only those with `A = K`.
pub fn enumerate_closed(
    sig: Signature,
    size_log2: Option<u32>,
    strongly_normal: bool,
) -> Result<ClosedIter> {
    let n = sig.thin_count();
    guard("thin rank for enumeration", MAX_ENUM_WIDTH as u64, n as u64)?;
    let thick_choices: Box<dyn Iterator<Item = u64> + Send> = if strongly_normal {
        Box::new(std::iter::once(sig.thick_mask()))
    } else {
        Box::new(submasks_ascending(sig.thick_mask()))
    };
    let inner = thick_choices.flat_map(move |a| {
        let dim = match size_log2 {
            None => Some(None),
            Some(r) => r.checked_sub(a.count_ones()).filter(|&k| k <= n).map(Some),
        };
        dim.into_iter().flat_map(move |k| {
            enumerate_subspaces(n, k)
                .expect("width and dimension checked")
                .map(move |thin| ClosedDescriptor {
                    sig,
                    thick_support: a,
                    thin,
                })
        })
    });
    Ok(ClosedIter {
        inner: Box::new(inner),
    })
}

/// Ordinary binomial coefficient.
pub fn binomial(n: u32, k: u32) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigCount {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn subspace_total(n: u32) -> BigCount {
    (0..=n).map(|r| gaussian_binomial(n, r)).sum()
}

pub fn count_closed(sig: Signature) -> BigCount {
    subspace_total(sig.thin_count()) << sig.thick_count()
}

pub fn count_strongly_normal(sig: Signature) -> BigCount {
    subspace_total(sig.thin_count())
}

fn size_term(stats: SubsetStats, r: u32, t: u32) -> BigCount {
    if t > r {
        return BigUint::zero();
    }
    binomial(stats.s, t) * gaussian_binomial(stats.r2, r - t)
}

fn size_sum(stats: SubsetStats, r: u32, lo: u32, hi: u32) -> BigCount {
    (lo..=hi).map(|t| size_term(stats, r, t)).sum()
}

/// Number of closed subsets of `2^r` elements inside a closed subset with
/// the given stats.
pub fn count_closed_of_size(stats: SubsetStats, r: u32) -> BigCount {
    let SubsetStats { s, r2 } = stats;
    if r <= s.min(r2) {
        size_sum(stats, r, 0, r)
    } else if r > s && r <= r2 {
        size_sum(stats, r, 0, s)
    } else if r > r2 && r <= s {
        size_sum(stats, r, r - r2, r)
    } else {
        let lo = s.min(r - r2);
        let hi = s.max(r - r2);
        size_sum(stats, r, lo, hi)
    }
}

/// Number of strongly normal closed subsets of `2^r` elements inside a
/// closed subset with the given stats.
pub fn count_strongly_normal_of_size(stats: SubsetStats, r: u32) -> BigCount {
    if r < stats.s {
        BigUint::zero()
    } else {
        gaussian_binomial(stats.r2, r - stats.s)
    }
}

/// Two closed subsets are isomorphic iff they agree in `s` and `r2`.
pub fn is_isomorphic(a: &ClosedDescriptor, b: &ClosedDescriptor) -> bool {
    a.stats() == b.stats()
}

/// One isomorphism class of closed subsets and its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoClassStat {
    pub s: u32,
    pub r2: u32,
    pub cardinality: BigCount,
}

/// Isomorphism classes of closed subsets, ordered by `s` then `r2`.
pub fn iso_class_stats(sig: Signature) -> Vec<IsoClassStat> {
    let (ps, n) = (sig.thick_count(), sig.thin_count());
    let mut out = Vec::with_capacity(((ps + 1) * (n + 1)) as usize);
    for s in 0..=ps {
        for r2 in 0..=n {
            out.push(IsoClassStat {
                s,
                r2,
                cardinality: binomial(ps, s) * gaussian_binomial(n, r2),
            });
        }
    }
    out
}

/// Number of isomorphism classes of closed subsets inside a closed subset
/// with the given stats.
pub fn num_iso_classes_within(stats: SubsetStats) -> BigCount {
    BigUint::from(stats.s + 1) * (stats.r2 + 1)
}

/// `Aut(G)` is `S_s x GL(r2, 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutDescriptor {
    pub s: u32,
    pub r2: u32,
    pub order: BigCount,
}

impl AutDescriptor {
    pub fn from_stats(stats: SubsetStats) -> Self {
        Self {
            s: stats.s,
            r2: stats.r2,
            order: factorial(stats.s) * gl2_order(stats.r2),
        }
    }
}

pub fn aut_descriptor(d: &ClosedDescriptor) -> AutDescriptor {
    AutDescriptor::from_stats(d.stats())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Factor {
    Symmetric(u32),
    GeneralLinear(u32),
}

/// Directly indecomposable factors of `S_s x GL(r2, 2)`, sorted.
fn aut_factors(s: u32, r2: u32) -> Vec<Factor> {
    let mut out = Vec::with_capacity(2);
    if s >= 2 {
        out.push(Factor::Symmetric(s));
    }
    match r2 {
        0 | 1 => {}
        2 => out.push(Factor::Symmetric(3)),
        r => out.push(Factor::GeneralLinear(r)),
    }
    out.sort_unstable();
    out
}

/// Whether the two automorphism groups are isomorphic, by comparing their
/// decompositions into directly indecomposable factors.
pub fn aut_groups_isomorphic(a: &AutDescriptor, b: &AutDescriptor) -> bool {
    aut_factors(a.s, a.r2) == aut_factors(b.s, b.r2)
}

/// Size of a smallest generating set.
pub fn dimension(d: &ClosedDescriptor) -> u32 {
    if d.thick_support != 0 && d.thin.dim() == 0 {
        1
    } else {
        d.thin.dim()
    }
}

/// A generating set of size [`dimension`]: the whole thick support is
/// attached to the first thin basis vector.
pub fn find_basis(d: &ClosedDescriptor) -> Vec<Element> {
    let thin = d.thin_basis_supports();
    if thin.is_empty() {
        return if d.thick_support == 0 {
            Vec::new()
        } else {
            vec![Element::from_support_unchecked(d.thick_support)]
        };
    }
    thin.iter()
        .enumerate()
        .map(|(i, &f)| {
            let thick = if i == 0 { d.thick_support } else { 0 };
            Element::from_support_unchecked(thick | f)
        })
        .collect()
}

/// Checks the characterization of bases: for nontrivial thin part, the
/// candidates lie in `G`, number `r2`, their thick parts cover exactly the
/// thick support, and their thin parts form a basis of the thin part. With
/// trivial thin part the unique basis is the largest thick element (or the
/// empty set for `{e}`).
pub fn satisfies_basis_conditions(d: &ClosedDescriptor, basis: &[Element]) -> bool {
    if !basis.iter().all(|&x| d.contains(x)) {
        return false;
    }
    let k = d.sig.thick_mask();
    if d.thin.dim() == 0 {
        return if d.thick_support == 0 {
            basis.is_empty()
        } else {
            basis.len() == 1 && basis[0].support() == d.thick_support
        };
    }
    if basis.len() != d.thin.dim() as usize {
        return false;
    }
    let cover = basis.iter().fold(0, |acc, x| acc | (x.support() & k));
    if cover.count_ones() != d.thick_support.count_ones() {
        return false;
    }
    let thin = Gf2Subspace::span_masks(
        d.sig.thin_count(),
        basis.iter().map(|x| d.sig.compress_thin(x.support())),
    );
    matches!(thin, Ok(t) if t == d.thin)
}

/// Residually thin exactly when there is no thick element.
pub fn is_residually_thin_fast(d: &ClosedDescriptor) -> bool {
    d.thick_support == 0
}

/// Nilpotent exactly when residually thin.
pub fn is_nilpotent_fast(d: &ClosedDescriptor) -> bool {
    is_residually_thin_fast(d)
}

/// The Frattini closed subset is always `{e}`.
pub fn frattini_fast(d: &ClosedDescriptor) -> ClosedDescriptor {
    ClosedDescriptor::trivial(d.sig)
}
