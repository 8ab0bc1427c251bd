//! Subsets of a ground set `[n] = {1, ..., n}` packed into one machine word,
//! and permutations of `[n]`.
//!
//! Element `i` of the ground set lives at bit `i - 1`, so the numeric order
//! of the packed words is the roster order used everywhere else.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 63;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    bits: u64,
    ground: u8,
}

fn ground_mask(n: u8) -> u64 {
    (1u64 << n) - 1
}

fn check_ground(n: usize) -> Result<u8> {
    if n > MAX_GROUND {
        return Err(Error::GroundTooLarge(n));
    }
    Ok(n as u8)
}

impl ElementSet {
    pub fn empty(ground: usize) -> Result<Self> {
        Ok(ElementSet {
            bits: 0,
            ground: check_ground(ground)?,
        })
    }

    pub fn full(ground: usize) -> Result<Self> {
        let ground = check_ground(ground)?;
        Ok(ElementSet {
            bits: ground_mask(ground),
            ground,
        })
    }

    /// Builds a set from 1-based elements.
    pub fn new<I: IntoIterator<Item = usize>>(ground: usize, elements: I) -> Result<Self> {
        let g = check_ground(ground)?;
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > ground {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    ground: g,
                });
            }
            bits |= 1 << (e - 1);
        }
        Ok(ElementSet { bits, ground: g })
    }

    pub fn from_bits(ground: usize, bits: u64) -> Result<Self> {
        let g = check_ground(ground)?;
        if bits & !ground_mask(g) != 0 {
            let element = 64 - (bits & !ground_mask(g)).leading_zeros() as usize;
            return Err(Error::ElementOutOfRange { element, ground: g });
        }
        Ok(ElementSet { bits, ground: g })
    }

    /// Caller guarantees `bits` only uses the low `ground` bits.
    pub(crate) fn from_bits_unchecked(ground: u8, bits: u64) -> Self {
        debug_assert!(bits & !ground_mask(ground) == 0);
        ElementSet { bits, ground }
    }

    /// Parses the `{1,3,5}` notation.
    pub fn parse(ground: usize, text: &str) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected {{...}}, got {t:?}")))?;
        let mut elements = Vec::new();
        for tok in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let e = tok
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad element {tok:?}")))?;
            elements.push(e);
        }
        Self::new(ground, elements)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn ground_size(self) -> usize {
        self.ground as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, element: usize) -> bool {
        element >= 1 && element <= self.ground as usize && self.bits >> (element - 1) & 1 == 1
    }

    pub fn is_subset_of(self, other: ElementSet) -> bool {
        self.bits & !other.bits == 0
    }

    /// Elements in ascending order, 1-based.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(tz + 1)
            }
        })
    }

    pub fn smallest(self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize + 1)
    }

    pub fn largest(self) -> Option<usize> {
        (self.bits != 0).then(|| 64 - self.bits.leading_zeros() as usize)
    }

    pub fn with(self, element: usize) -> Result<Self> {
        if element == 0 || element > self.ground as usize {
            return Err(Error::ElementOutOfRange {
                element,
                ground: self.ground,
            });
        }
        Ok(ElementSet {
            bits: self.bits | 1 << (element - 1),
            ..self
        })
    }

    pub fn without(self, element: usize) -> Self {
        if element == 0 || element > 64 {
            return self;
        }
        ElementSet {
            bits: self.bits & !(1 << (element - 1)),
            ..self
        }
    }

    fn same_ground(self, other: ElementSet) -> Result<()> {
        if self.ground != other.ground {
            return Err(Error::GroundSizeMismatch {
                left: self.ground,
                right: other.ground,
            });
        }
        Ok(())
    }
}

/// Elements lying in exactly one of `a`, `b`.
pub fn symdiff(a: ElementSet, b: ElementSet) -> Result<ElementSet> {
    a.same_ground(b)?;
    Ok(ElementSet {
        bits: a.bits ^ b.bits,
        ground: a.ground,
    })
}

pub fn intersection_size(a: ElementSet, b: ElementSet) -> Result<usize> {
    a.same_ground(b)?;
    Ok((a.bits & b.bits).count_ones() as usize)
}

/// `universe \ a`, requiring `a ⊆ universe`.
pub fn complement_in(a: ElementSet, universe: ElementSet) -> Result<ElementSet> {
    a.same_ground(universe)?;
    if !a.is_subset_of(universe) {
        return Err(Error::NotSubset(a, universe));
    }
    Ok(ElementSet {
        bits: universe.bits & !a.bits,
        ground: a.ground,
    })
}

// The operators panic on mismatched ground sets; mixing ground sets there is a
// programming error, the fallible functions above are for checked call sites.
impl BitXor for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn bitxor(self, rhs: ElementSet) -> ElementSet {
        assert_eq!(self.ground, rhs.ground, "ground size mismatch");
        ElementSet {
            bits: self.bits ^ rhs.bits,
            ground: self.ground,
        }
    }
}

impl BitAnd for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn bitand(self, rhs: ElementSet) -> ElementSet {
        assert_eq!(self.ground, rhs.ground, "ground size mismatch");
        ElementSet {
            bits: self.bits & rhs.bits,
            ground: self.ground,
        }
    }
}

impl BitOr for ElementSet {
    type Output = ElementSet;
    #[inline]
    fn bitor(self, rhs: ElementSet) -> ElementSet {
        assert_eq!(self.ground, rhs.ground, "ground size mismatch");
        ElementSet {
            bits: self.bits | rhs.bits,
            ground: self.ground,
        }
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A bijection of `[n]`.
///
/// Composition convention, used by every piece of group code in the crate:
/// `p.then(&q)` is the map `i -> q(p(i))`, i.e. permutations compose left to
/// right and act on the right of their arguments.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // images[i] = p(i + 1) - 1
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        check_ground(n)?;
        Ok(Permutation {
            images: (0..n as u8).collect(),
        })
    }

    /// `images[i]` is the image of element `i + 1`, with 1-based values.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = check_ground(images.len())? as usize;
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &im in images {
            if im == 0 || im > n || seen[im - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of [1..{n}]"
                )));
            }
            seen[im - 1] = true;
            out.push((im - 1) as u8);
        }
        Ok(Permutation { images: out })
    }

    /// 0-based images; caller guarantees a bijection.
    pub(crate) fn from_zero_based(images: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| v as usize == i)
        });
        Permutation { images }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        let mut p = Self::identity(n)?;
        for e in [a, b] {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    ground: n as u8,
                });
            }
        }
        p.images.swap(a - 1, b - 1);
        Ok(p)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut p = Self::identity(n)?;
        p.images.shuffle(rng);
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based element `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// 1-based images, `out[i]` being the image of `i + 1`.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    #[inline]
    pub(crate) fn zero_based(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &v)| v as usize == i)
    }

    /// First do `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&v| other.images[v as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// `{ p(i) : i in a }`.
    pub fn apply(&self, a: ElementSet) -> Result<ElementSet> {
        if a.ground_size() != self.degree() {
            return Err(Error::GroundSizeMismatch {
                left: self.degree() as u8,
                right: a.ground,
            });
        }
        Ok(self.apply_unchecked(a))
    }

    #[inline]
    pub(crate) fn apply_unchecked(&self, a: ElementSet) -> ElementSet {
        let mut bits = 0u64;
        let mut rest = a.bits;
        while rest != 0 {
            let tz = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            bits |= 1 << self.images[tz];
        }
        ElementSet {
            bits,
            ground: a.ground,
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.images().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// All `size`-element subsets of `[ground]` in ascending bitmask order.
pub fn subsets_of_size(ground: usize, size: usize) -> Result<Vec<ElementSet>> {
    let g = check_ground(ground)?;
    if size > ground {
        return Ok(Vec::new());
    }
    if size == 0 {
        return Ok(vec![ElementSet { bits: 0, ground: g }]);
    }
    let limit = 1u64 << ground;
    let mut out = Vec::new();
    let mut v: u64 = (1u64 << size) - 1;
    while v < limit {
        out.push(ElementSet { bits: v, ground: g });
        // Gosper's hack: next word with the same popcount.
        let c = v & v.wrapping_neg();
        let r = v.wrapping_add(c);
        if r >= limit || r == 0 {
            break;
        }
        v = (((r ^ v) >> 2) / c) | r;
    }
    Ok(out)
}

/// `size`-element subsets of an arbitrary set `within`, ascending.
pub fn subsets_within(within: ElementSet, size: usize) -> Vec<ElementSet> {
    let elems: Vec<usize> = within.iter().collect();
    let local = subsets_of_size(elems.len(), size).expect("within fits");
    local
        .into_iter()
        .map(|s| {
            let bits = s.iter().fold(0u64, |acc, i| acc | 1 << (elems[i - 1] - 1));
            ElementSet {
                bits,
                ground: within.ground,
            }
        })
        .collect()
}
