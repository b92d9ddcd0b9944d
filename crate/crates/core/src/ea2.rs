//! Elementary abelian 2-hypergroups in support-mask form.
//!
//! A hypergroup is fixed by a [`Signature`]: `p` involution generators, a
//! subset of which (the thick mask `K`) are thick. Every element is
//! identified by its support, a `p`-bit mask where bit `i` stands for
//! generator `q_{i+1}`. Products multiply coordinatewise: a thin generator
//! squares to `{e}`, a thick one to `{e, q}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{guard, Error, Result};
use crate::gf2::{width_mask, Gf2Subspace, MAX_WIDTH};
use crate::kernel::TableHypergroup;

/// Largest rank [`to_table`] will materialize.
pub const MAX_TABLE_RANK: u32 = 4;
/// Largest product [`multiply`] will materialize, as log2 of its size.
pub const MAX_PRODUCT_LOG: u32 = 20;

/// Generating data of one elementary abelian 2-hypergroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    p: u32,
    thick: u64,
}

impl Signature {
    pub fn new(p: u32, thick: u64) -> Result<Self> {
        if p > MAX_WIDTH {
            return Err(Error::WidthTooLarge(p));
        }
        if thick & !width_mask(p) != 0 {
            return Err(Error::MaskOutOfRange {
                mask: thick,
                width: p,
            });
        }
        Ok(Self { p, thick })
    }

    /// Builds a signature from 1-based thick generator indices.
    pub fn from_indices(p: u32, thick: &[u32]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in thick {
            if i == 0 || i > p {
                return Err(Error::Parse(format!("thick index {i} is outside 1..={p}")));
            }
            mask |= 1 << (i - 1);
        }
        Self::new(p, mask)
    }

    /// All `2^p` signatures of rank `p`, ordered by thick mask.
    pub fn all_of_rank(p: u32) -> impl Iterator<Item = Signature> {
        (0u64..(1u64 << p)).map(move |thick| Signature { p, thick })
    }

    pub fn rank(self) -> u32 {
        self.p
    }

    pub fn thick_mask(self) -> u64 {
        self.thick
    }

    pub fn thin_mask(self) -> u64 {
        width_mask(self.p) & !self.thick
    }

    /// Number of thick generators.
    pub fn thick_count(self) -> u32 {
        self.thick.count_ones()
    }

    pub fn thin_count(self) -> u32 {
        self.p - self.thick_count()
    }

    pub fn order_log2(self) -> u32 {
        self.p
    }

    pub fn element(self, support: u64) -> Result<Element> {
        if support & !width_mask(self.p) != 0 {
            return Err(Error::MaskOutOfRange {
                mask: support,
                width: self.p,
            });
        }
        Ok(Element(support))
    }

    pub fn generator(self, index: u32) -> Result<Element> {
        if index == 0 || index > self.p {
            return Err(Error::Precondition(format!(
                "generator index {index} is outside 1..={}",
                self.p
            )));
        }
        Ok(Element(1 << (index - 1)))
    }

    /// Every element, ascending by support.
    pub fn elements(self) -> Result<ElementSet> {
        guard("hypergroup rank", MAX_PRODUCT_LOG as u64, self.p as u64)?;
        Ok(ElementSet((0..1u64 << self.p).map(Element).collect()))
    }

    /// Packs the thin bits of `mask` into consecutive thin coordinates.
    pub fn compress_thin(self, mask: u64) -> u64 {
        let mut out = 0;
        let mut j = 0;
        let thin = self.thin_mask();
        for i in 0..self.p {
            if thin >> i & 1 == 1 {
                out |= (mask >> i & 1) << j;
                j += 1;
            }
        }
        out
    }

    /// Inverse of [`Signature::compress_thin`].
    pub fn expand_thin(self, coords: u64) -> u64 {
        let mut out = 0;
        let mut j = 0;
        let thin = self.thin_mask();
        for i in 0..self.p {
            if thin >> i & 1 == 1 {
                out |= (coords >> j & 1) << i;
                j += 1;
            }
        }
        out
    }

    fn check(self, x: Element) -> Result<()> {
        self.element(x.0).map(|_| ())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={},thick=", self.p)?;
        write_indices(f, self.thick)
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Accepts `p=<int>` or `p=<int>,thick=<i,j,...>` with 1-based indices.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p_part, thick_part) = match s.find(",thick=") {
            Some(at) => (&s[..at], Some(&s[at + ",thick=".len()..])),
            None => (s, None),
        };
        let p = p_part
            .strip_prefix("p=")
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("expected `p=<int>` in signature `{s}`")))?;
        let indices = match thick_part {
            Some(list) => parse_index_list(list)?,
            None => Vec::new(),
        };
        Signature::from_indices(p, &indices)
    }
}

fn parse_index_list(list: &str) -> Result<Vec<u32>> {
    let list = list.trim();
    if list.is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad index `{tok}`")))
        })
        .collect()
}

fn write_indices(f: &mut fmt::Formatter<'_>, mask: u64) -> fmt::Result {
    let mut first = true;
    for i in 0..64 {
        if mask >> i & 1 == 1 {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
            first = false;
        }
    }
    Ok(())
}

/// An element, identified by its support mask. Mask inclusion is the
/// partial order on elements; the empty support is the identity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(u64);

impl Element {
    pub const IDENTITY: Element = Element(0);

    pub fn support(self) -> u64 {
        self.0
    }

    pub(crate) fn from_support_unchecked(support: u64) -> Self {
        Element(support)
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    /// `self` lies below `other` in the support order.
    pub fn precedes(self, other: Element) -> bool {
        self.0 & !other.0 == 0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        write_indices(f, self.0)?;
        f.write_str("}")
    }
}

impl FromStr for Element {
    type Err = Error;

    /// Parses `{i,j,...}` (1-based support indices); `{}` is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected `{{...}}`, found `{s}`")))?;
        let mut mask = 0u64;
        for i in parse_index_list(inner)? {
            if i == 0 || i > MAX_WIDTH {
                return Err(Error::Parse(format!("support index {i} out of range")));
            }
            mask |= 1 << (i - 1);
        }
        Ok(Element(mask))
    }
}

/// A set of elements kept sorted ascending by support, without duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(Vec<Element>);

impl ElementSet {
    pub fn new<I: IntoIterator<Item = Element>>(elements: I) -> Self {
        let mut v: Vec<Element> = elements.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ElementSet(v)
    }

    pub fn from_supports<I: IntoIterator<Item = u64>>(supports: I) -> Self {
        Self::new(supports.into_iter().map(Element))
    }

    pub fn singleton(x: Element) -> Self {
        ElementSet(vec![x])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Element] {
        &self.0
    }

    pub fn supports(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|x| x.0)
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a Element;
    type IntoIter = std::slice::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

/// The product `xy`: every `U` with `D ⊆ U ⊆ D ∪ M`, where `D` is the
/// symmetric difference of the supports and `M` their common thick part.
pub fn multiply(sig: Signature, x: Element, y: Element) -> Result<ElementSet> {
    sig.check(x)?;
    sig.check(y)?;
    let diff = x.0 ^ y.0;
    let shared = x.0 & y.0 & sig.thick;
    guard(
        "product size (log2)",
        MAX_PRODUCT_LOG as u64,
        shared.count_ones() as u64,
    )?;
    Ok(ElementSet(
        submasks_ascending(shared)
            .map(|sub| Element(diff | sub))
            .collect(),
    ))
}

/// Submasks of `mask` in ascending numeric order.
pub(crate) fn submasks_ascending(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == mask {
            None
        } else {
            Some(((current | !mask).wrapping_add(1)) & mask)
        };
        Some(current)
    })
}

/// The full multiplication table; element index equals support mask.
pub fn to_table(sig: Signature) -> Result<TableHypergroup> {
    guard("rank for table", MAX_TABLE_RANK as u64, sig.p as u64)?;
    let n = 1usize << sig.p;
    TableHypergroup::from_fn(n, 0, (0..n).collect(), |a, b| {
        multiply(sig, Element(a as u64), Element(b as u64))
            .expect("masks are in range")
            .supports()
            .map(|s| s as usize)
            .collect()
    })
}

/// Splits `x` into its thick part `x+` and thin part `x-`, with `x+ x- = {x}`.
pub fn plus_minus(sig: Signature, x: Element) -> Result<(Element, Element)> {
    sig.check(x)?;
    Ok((Element(x.0 & sig.thick), Element(x.0 & !sig.thick)))
}

/// Number of thick generators in the support of `x`.
pub fn s_of(sig: Signature, x: Element) -> Result<u32> {
    sig.check(x)?;
    Ok((x.0 & sig.thick).count_ones())
}

/// `s(G)` and the 2-rank of the thin part of a closed subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetStats {
    pub s: u32,
    pub r2: u32,
}

impl SubsetStats {
    pub fn new(s: u32, r2: u32) -> Self {
        Self { s, r2 }
    }

    /// Stats of the whole hypergroup.
    pub fn of_signature(sig: Signature) -> Self {
        Self {
            s: sig.thick_count(),
            r2: sig.thin_count(),
        }
    }

    /// `log2 |G|`.
    pub fn size_log2(self) -> u32 {
        self.s + self.r2
    }
}

/// Computes `s(G)` and `r2(G)` for a closed subset (closedness is the
/// caller's responsibility).
pub fn subset_stats(sig: Signature, g: &ElementSet) -> Result<SubsetStats> {
    let mut s = 0;
    for &x in g {
        s = s.max(s_of(sig, x)?);
    }
    let thin = Gf2Subspace::span_masks(sig.p, g.iter().map(|x| x.0 & sig.thin_mask()))?;
    Ok(SubsetStats { s, r2: thin.dim() })
}
