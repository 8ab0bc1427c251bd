//! The geometry of `2m`-element subsets of `[n]` with `m = 2^(k-2)` and
//! `n = 2^k - 1`: two points are collinear when they meet in exactly `m`
//! elements, and the third point on their line is the symmetric difference.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::combinatorics::{subsets_of_size, ElementSet};
use crate::error::{Error, Result};

/// Largest `k` whose point roster we are willing to materialize
/// (`C(15, 8) = 6435` points; `k = 5` would need `C(31, 16) ≈ 3·10^8`).
pub const MAX_ROSTER_K: u32 = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GeometryParams {
    k: u32,
    m: u32,
    n: u32,
}

impl GeometryParams {
    /// `m = 2^(k-2)`, `n = 2^k - 1`, for `2 <= k <= 6` (so that `n` fits a word).
    pub fn new(k: u32) -> Result<Self> {
        if !(2..=6).contains(&k) {
            return Err(Error::InvalidParams(format!("k must be in 2..=6, got {k}")));
        }
        Ok(GeometryParams {
            k,
            m: 1 << (k - 2),
            n: (1 << k) - 1,
        })
    }

    pub fn from_triple(k: u32, m: u32, n: u32) -> Result<Self> {
        let p = Self::new(k)?;
        if p.m != m || p.n != n {
            return Err(Error::InvalidParams(format!(
                "(k, m, n) = ({k}, {m}, {n}) violates m = 2^(k-2), n = 2^k - 1"
            )));
        }
        Ok(p)
    }

    /// Parameters whose ground set has `n` elements, if any.
    pub fn for_ground(n: usize) -> Result<Self> {
        let k = (n + 1).trailing_zeros();
        if n < 3 || (n + 1).count_ones() != 1 {
            return Err(Error::InvalidParams(format!(
                "{n} is not of the form 2^k - 1"
            )));
        }
        Self::new(k)
    }

    pub fn k(self) -> u32 {
        self.k
    }
    pub fn m(self) -> usize {
        self.m as usize
    }
    pub fn n(self) -> usize {
        self.n as usize
    }
    /// Cardinality of every point.
    pub fn point_size(self) -> usize {
        2 * self.m as usize
    }

    pub fn is_point(self, x: ElementSet) -> bool {
        x.ground_size() == self.n() && x.len() == self.point_size()
    }

    /// Collinearity of two points, without roster lookup.
    #[inline]
    pub fn collinear(self, x: ElementSet, y: ElementSet) -> bool {
        x != y && (x.bits() & y.bits()).count_ones() as usize == self.m()
    }

    fn check_point(self, x: ElementSet) -> Result<()> {
        if self.is_point(x) {
            Ok(())
        } else {
            Err(Error::NotAPoint(x))
        }
    }

    pub fn line_through(self, x: ElementSet, y: ElementSet) -> Result<Line> {
        self.check_point(x)?;
        self.check_point(y)?;
        if !self.collinear(x, y) {
            return Err(Error::NotCollinear(x, y));
        }
        Ok(Line::new_unchecked(x, y, x ^ y))
    }

    pub fn is_subspace(self, s: &[ElementSet]) -> bool {
        let set: HashSet<ElementSet> = s.iter().copied().collect();
        s.iter().enumerate().all(|(i, &a)| {
            s[i + 1..]
                .iter()
                .all(|&b| !self.collinear(a, b) || set.contains(&(a ^ b)))
        })
    }

    pub fn is_singular_subspace(self, s: &[ElementSet]) -> bool {
        let set: HashSet<ElementSet> = s.iter().copied().collect();
        let distinct: Vec<ElementSet> = {
            let mut v: Vec<_> = set.iter().copied().collect();
            v.sort();
            v
        };
        distinct.iter().enumerate().all(|(i, &a)| {
            distinct[i + 1..]
                .iter()
                .all(|&b| self.collinear(a, b) && set.contains(&(a ^ b)))
        })
    }

    /// Smallest singular subspace containing `s`, by closing under the third
    /// point of collinear pairs. Returned sorted in roster order.
    pub fn singular_span(self, s: &[ElementSet]) -> Result<Vec<ElementSet>> {
        for &x in s {
            self.check_point(x)?;
        }
        let mut members: Vec<ElementSet> = Vec::new();
        let mut seen: HashSet<ElementSet> = HashSet::new();
        for &x in s {
            if seen.insert(x) {
                members.push(x);
            }
        }
        // Each new point is paired with every earlier one exactly once.
        let mut next = 0;
        while next < members.len() {
            let c = members[next];
            for i in 0..next {
                let a = members[i];
                let third = a ^ c;
                if third.len() != self.point_size() {
                    return Err(Error::SpanLeavesGeometry(third));
                }
                if seen.insert(third) {
                    members.push(third);
                }
            }
            next += 1;
        }
        members.sort();
        Ok(members)
    }
}

impl fmt::Display for GeometryParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={}, m={}, n={}", self.k, self.m, self.n)
    }
}

/// Three points, each the symmetric difference of the other two, sorted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Line([ElementSet; 3]);

impl Line {
    pub(crate) fn new_unchecked(a: ElementSet, b: ElementSet, c: ElementSet) -> Line {
        let mut pts = [a, b, c];
        pts.sort();
        Line(pts)
    }

    pub fn points(&self) -> [ElementSet; 3] {
        self.0
    }

    pub fn contains(&self, x: ElementSet) -> bool {
        self.0.contains(&x)
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
    }
}

/// The full point roster, in ascending bitmask order.
#[derive(Clone, Debug)]
pub struct Geometry {
    params: GeometryParams,
    points: Vec<ElementSet>,
    index: HashMap<ElementSet, usize>,
}

impl Geometry {
    pub fn build(params: GeometryParams) -> Result<Self> {
        if params.k() > MAX_ROSTER_K {
            return Err(Error::GeometryTooLarge(params.k()));
        }
        let points = subsets_of_size(params.n(), params.point_size())?;
        let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(Geometry {
            params,
            points,
            index,
        })
    }

    pub fn params(&self) -> GeometryParams {
        self.params
    }

    pub fn points(&self) -> &[ElementSet] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, x: ElementSet) -> Option<usize> {
        self.index.get(&x).copied()
    }

    pub fn point(&self, i: usize) -> ElementSet {
        self.points[i]
    }

    fn require(&self, x: ElementSet) -> Result<()> {
        self.index_of(x).map(|_| ()).ok_or(Error::NotAPoint(x))
    }

    /// Whether two distinct roster points meet in exactly `m` elements.
    pub fn is_collinear(&self, x: ElementSet, y: ElementSet) -> Result<bool> {
        self.require(x)?;
        self.require(y)?;
        Ok(self.params.collinear(x, y))
    }

    pub fn line_through(&self, x: ElementSet, y: ElementSet) -> Result<Line> {
        self.require(x)?;
        self.require(y)?;
        self.params.line_through(x, y)
    }

    pub fn is_subspace(&self, s: &[ElementSet]) -> bool {
        s.iter().all(|&x| self.index_of(x).is_some()) && self.params.is_subspace(s)
    }

    pub fn is_singular_subspace(&self, s: &[ElementSet]) -> bool {
        s.iter().all(|&x| self.index_of(x).is_some()) && self.params.is_singular_subspace(s)
    }

    pub fn singular_span(&self, s: &[ElementSet]) -> Result<Vec<ElementSet>> {
        for &x in s {
            self.require(x)?;
        }
        self.params.singular_span(s)
    }
}
