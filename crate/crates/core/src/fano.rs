//! Fano planes realized as seven points closed under symmetric difference,
//! bijections between two such planes, and their index.
//!
//! Within a plane, points are addressed by position `0..7`. The canonical
//! labeling `P1, P2, P3, P12, P13, P23, P123` takes `P1`, `P2` to be the
//! first two points, `P3` the first point off their line, and `Pij` the third
//! point on the line `Pi Pj`; `P123` is the third point on `P12 P3`.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use crate::combinatorics::{subsets_within, ElementSet};
use crate::error::{Error, Result};
use crate::geometry::{Geometry, GeometryParams};

/// Position of each canonical label, in the order
/// `P1, P2, P3, P12, P13, P23, P123`.
pub type Labeling = [u8; 7];

/// Label slots by name, indexing into a [`Labeling`].
pub mod label {
    pub const P1: usize = 0;
    pub const P2: usize = 1;
    pub const P3: usize = 2;
    pub const P12: usize = 3;
    pub const P13: usize = 4;
    pub const P23: usize = 5;
    pub const P123: usize = 6;
}

/// Coordinate vector (bit 0 = P1, bit 1 = P2, bit 2 = P3) of each label slot.
const LABEL_VECTORS: [u8; 7] = [0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111];

#[derive(Clone)]
pub struct FanoPlane {
    points: [ElementSet; 7],
    lines: [[u8; 3]; 7],
    // third[a][b] = position of a △ b
    third: [[u8; 7]; 7],
    automorphisms: Vec<[u8; 7]>,
}

impl PartialEq for FanoPlane {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for FanoPlane {}

impl fmt::Debug for FanoPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FanoPlane")
            .field("points", &self.points)
            .finish()
    }
}

impl FanoPlane {
    /// Seven distinct non-empty sets, closed under symmetric difference of
    /// distinct members. Point order is kept.
    pub fn new(points: &[ElementSet]) -> Result<Self> {
        if points.len() != 7 {
            return Err(Error::InvalidFanoPlane(format!(
                "{} points, need 7",
                points.len()
            )));
        }
        let pts: [ElementSet; 7] = points.try_into().expect("length checked");
        let pos: HashMap<ElementSet, u8> =
            pts.iter().enumerate().map(|(i, &p)| (p, i as u8)).collect();
        if pos.len() != 7 || pts.iter().any(|p| p.is_empty()) {
            return Err(Error::InvalidFanoPlane(
                "points must be distinct and non-empty".into(),
            ));
        }
        let mut third = [[u8::MAX; 7]; 7];
        for a in 0..7 {
            for b in 0..7 {
                if a == b {
                    continue;
                }
                let c = crate::combinatorics::symdiff(pts[a], pts[b])?;
                third[a][b] = *pos.get(&c).ok_or_else(|| {
                    Error::InvalidFanoPlane(format!("{} △ {} = {c} is missing", pts[a], pts[b]))
                })?;
            }
        }
        let mut lines = Vec::with_capacity(7);
        for a in 0..7u8 {
            for b in a + 1..7 {
                let c = third[a as usize][b as usize];
                if c > b {
                    lines.push([a, b, c]);
                }
            }
        }
        let lines: [[u8; 3]; 7] = lines.try_into().expect("seven lines in a closed 7-set");
        let mut plane = FanoPlane {
            points: pts,
            lines,
            third,
            automorphisms: Vec::new(),
        };
        plane.automorphisms = plane.compute_automorphisms();
        Ok(plane)
    }

    pub fn points(&self) -> &[ElementSet; 7] {
        &self.points
    }

    /// Lines as ascending position triples, sorted.
    pub fn lines(&self) -> &[[u8; 3]; 7] {
        &self.lines
    }

    pub fn position(&self, x: ElementSet) -> Option<usize> {
        self.points.iter().position(|&p| p == x)
    }

    pub fn third_point(&self, a: usize, b: usize) -> usize {
        self.third[a][b] as usize
    }

    pub fn is_line(&self, a: usize, b: usize, c: usize) -> bool {
        a != b && self.third[a][b] as usize == c
    }

    /// The canonical labeling.
    pub fn labeling(&self) -> Labeling {
        self.labeling_from(0, 1, self.first_off_line(0, 1))
    }

    fn first_off_line(&self, a: usize, b: usize) -> usize {
        let c = self.third_point(a, b);
        (0..7)
            .find(|&x| x != a && x != b && x != c)
            .expect("seven points")
    }

    /// Labeling with `P1, P2, P3` at the given non-collinear positions.
    pub fn labeling_from(&self, p1: usize, p2: usize, p3: usize) -> Labeling {
        debug_assert!(p1 != p2 && !self.is_line(p1, p2, p3) && p3 != p1 && p3 != p2);
        let basis = [p1, p2, p3];
        let mut out = [0u8; 7];
        for (slot, &v) in LABEL_VECTORS.iter().enumerate() {
            let mut acc: Option<usize> = None;
            for (bit, &b) in basis.iter().enumerate() {
                if v >> bit & 1 == 1 {
                    acc = Some(match acc {
                        None => b,
                        Some(a) => self.third_point(a, b),
                    });
                }
            }
            out[slot] = acc.expect("non-zero vector") as u8;
        }
        out
    }

    fn compute_automorphisms(&self) -> Vec<[u8; 7]> {
        let base = self.labeling();
        let mut out = Vec::with_capacity(168);
        for a in 0..7 {
            for b in 0..7 {
                if b == a {
                    continue;
                }
                let ab = self.third_point(a, b);
                for c in 0..7 {
                    if c == a || c == b || c == ab {
                        continue;
                    }
                    let target = self.labeling_from(a, b, c);
                    let mut g = [0u8; 7];
                    for slot in 0..7 {
                        g[base[slot] as usize] = target[slot];
                    }
                    out.push(g);
                }
            }
        }
        out.sort();
        out
    }

    /// All 168 collineations, as position maps `g[i] = image of i`.
    pub fn automorphisms(&self) -> &[[u8; 7]] {
        &self.automorphisms
    }

    pub fn is_automorphism(&self, g: &[u8; 7]) -> bool {
        is_permutation(g)
            && self.lines.iter().all(|l| {
                self.is_line(
                    g[l[0] as usize] as usize,
                    g[l[1] as usize] as usize,
                    g[l[2] as usize] as usize,
                )
            })
    }

    /// No three of the four positions on a line.
    pub fn is_simplex(&self, s: [usize; 4]) -> Result<bool> {
        if s.iter().any(|&x| x >= 7) || s.iter().tuple_combinations().any(|(a, b)| a == b) {
            return Err(Error::InvalidFanoPlane(format!(
                "{s:?} is not a 4-subset of the plane"
            )));
        }
        Ok(!s
            .iter()
            .tuple_combinations()
            .any(|(&a, &b, &c)| self.is_line(a, b, c)))
    }

    pub fn is_simplex_of_points(&self, s: &[ElementSet; 4]) -> Result<bool> {
        let mut pos = [0usize; 4];
        for (i, &x) in s.iter().enumerate() {
            pos[i] = self.position(x).ok_or(Error::NotAPoint(x))?;
        }
        self.is_simplex(pos)
    }
}

fn is_permutation(map: &[u8; 7]) -> bool {
    let mut seen = 0u8;
    for &v in map {
        if v >= 7 || seen >> v & 1 == 1 {
            return false;
        }
        seen |= 1 << v;
    }
    true
}

/// All Fano planes formed by 4-element subsets of a 7-element set `ground`,
/// i.e. the maximal cliques of that small geometry (30 of them).
pub fn fano_planes_on(ground: ElementSet) -> Result<Vec<FanoPlane>> {
    if ground.len() != 7 {
        return Err(Error::WrongSize {
            expected: 7,
            found: ground.len(),
        });
    }
    let params = GeometryParams::new(3)?;
    let local = Geometry::build(params)?;
    let graph = crate::cliques::CollinearityGraph::build(&local);
    let elems: Vec<usize> = ground.iter().collect();
    let lift = |s: ElementSet| -> ElementSet {
        let bits = s.iter().fold(0u64, |acc, i| acc | 1 << (elems[i - 1] - 1));
        ElementSet::from_bits_unchecked(ground.ground_size() as u8, bits)
    };
    graph
        .maximal_cliques()
        .map(|c| {
            let pts: Vec<ElementSet> = c.sorted_points().into_iter().map(lift).collect();
            FanoPlane::new(&pts)
        })
        .collect()
}

/// Same as [`fano_planes_on`] but computed directly from 4-subsets, without
/// the clique search. Used as a cross-check.
pub fn fano_planes_by_closure(ground: ElementSet) -> Result<Vec<FanoPlane>> {
    if ground.len() != 7 {
        return Err(Error::WrongSize {
            expected: 7,
            found: ground.len(),
        });
    }
    let quads = subsets_within(ground, 4);
    let mut planes: Vec<Vec<ElementSet>> = Vec::new();
    for (i, &a) in quads.iter().enumerate() {
        for &b in &quads[i + 1..] {
            if (a & b).len() != 2 {
                continue;
            }
            for &c in &quads {
                if c == a || c == b || c == a ^ b || (a & c).len() != 2 || (b & c).len() != 2 {
                    continue;
                }
                let mut plane = vec![a, b, c, a ^ b, a ^ c, b ^ c, a ^ b ^ c];
                plane.sort();
                if plane.iter().all(|p| p.len() == 4) && !planes.contains(&plane) {
                    planes.push(plane);
                }
            }
        }
    }
    planes.sort();
    planes.iter().map(|p| FanoPlane::new(p)).collect()
}

/// A bijection from the points of one Fano plane onto the points of another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanoBijection {
    source: FanoPlane,
    target: FanoPlane,
    // map[i] = target position of the image of source position i
    map: [u8; 7],
}

impl FanoBijection {
    pub fn new(source: FanoPlane, target: FanoPlane, map: [u8; 7]) -> Result<Self> {
        if !is_permutation(&map) {
            return Err(Error::InvalidFanoPlane(format!(
                "{map:?} is not a bijection"
            )));
        }
        Ok(FanoBijection {
            source,
            target,
            map,
        })
    }

    /// Bijection given as explicit point pairs.
    pub fn from_pairs(
        source: FanoPlane,
        target: FanoPlane,
        pairs: &[(ElementSet, ElementSet)],
    ) -> Result<Self> {
        if pairs.len() != 7 {
            return Err(Error::WrongSize {
                expected: 7,
                found: pairs.len(),
            });
        }
        let mut map = [u8::MAX; 7];
        for &(x, y) in pairs {
            let i = source.position(x).ok_or(Error::NotAPoint(x))?;
            let j = target.position(y).ok_or(Error::NotAPoint(y))?;
            map[i] = j as u8;
        }
        Self::new(source, target, map)
    }

    pub fn source(&self) -> &FanoPlane {
        &self.source
    }

    pub fn target(&self) -> &FanoPlane {
        &self.target
    }

    pub fn map(&self) -> [u8; 7] {
        self.map
    }

    pub fn image(&self, x: ElementSet) -> Option<ElementSet> {
        self.source
            .position(x)
            .map(|i| self.target.points[self.map[i] as usize])
    }

    /// `(x, δ(x))` in source point order.
    pub fn pairs(&self) -> Vec<(ElementSet, ElementSet)> {
        (0..7)
            .map(|i| {
                (
                    self.source.points[i],
                    self.target.points[self.map[i] as usize],
                )
            })
            .collect()
    }

    /// Number of source lines sent onto target lines.
    pub fn index(&self) -> u8 {
        map_index(&self.source, &self.target, &self.map)
    }

    /// `g_target ∘ δ ∘ g_source`, the automorphisms given as position maps.
    pub fn conjugate(&self, g_source: &[u8; 7], g_target: &[u8; 7]) -> FanoBijection {
        FanoBijection {
            source: self.source.clone(),
            target: self.target.clone(),
            map: compose3(g_source, &self.map, g_target),
        }
    }

    pub fn with_map(&self, map: [u8; 7]) -> Result<FanoBijection> {
        Self::new(self.source.clone(), self.target.clone(), map)
    }
}

impl fmt::Display for FanoBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, y)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} -> {y}")?;
        }
        Ok(())
    }
}

/// `x -> c(b(a(x)))` on positions.
fn compose3(a: &[u8; 7], b: &[u8; 7], c: &[u8; 7]) -> [u8; 7] {
    let mut out = [0u8; 7];
    for i in 0..7 {
        out[i] = c[b[a[i] as usize] as usize];
    }
    out
}

fn invert(a: &[u8; 7]) -> [u8; 7] {
    let mut out = [0u8; 7];
    for i in 0..7 {
        out[a[i] as usize] = i as u8;
    }
    out
}

/// Index of the position map `map` from `source` to `target`.
pub fn map_index(source: &FanoPlane, target: &FanoPlane, map: &[u8; 7]) -> u8 {
    source
        .lines
        .iter()
        .filter(|l| {
            target.is_line(
                map[l[0] as usize] as usize,
                map[l[1] as usize] as usize,
                map[l[2] as usize] as usize,
            )
        })
        .count() as u8
}

pub fn bijection_index(d: &FanoBijection) -> u8 {
    d.index()
}

/// Isomorphism `from -> to` matching canonical labelings, as a position map.
fn canonical_isomorphism(from: &FanoPlane, to: &FanoPlane) -> [u8; 7] {
    let lf = from.labeling();
    let lt = to.labeling();
    let mut out = [0u8; 7];
    for slot in 0..7 {
        out[lf[slot] as usize] = lt[slot];
    }
    out
}

/// Whether automorphisms `g1` of the source and `g2` of the target exist with
/// `d2 = g2 ∘ d1 ∘ g1`, decided by trying all 168 × 168 pairs.
///
/// When `d2` runs between different planes, it is first transported onto the
/// planes of `d1` along fixed isomorphisms; every isomorphism is one of those
/// composed with an automorphism, so the search stays exhaustive.
pub fn are_equivalent(d1: &FanoBijection, d2: &FanoBijection) -> bool {
    let to_d2_source = canonical_isomorphism(&d1.source, &d2.source);
    let from_d2_target = canonical_isomorphism(&d2.target, &d1.target);
    let transported = compose3(&to_d2_source, &d2.map, &from_d2_target);
    find_conjugating_pair(d1, &transported).is_some()
}

/// Automorphisms `(g1, g2)` with `target_map = g2 ∘ d ∘ g1`, if any.
pub fn find_conjugating_pair(
    d: &FanoBijection,
    target_map: &[u8; 7],
) -> Option<([u8; 7], [u8; 7])> {
    for g1 in d.source.automorphisms() {
        // g2 is forced: g2 = target_map ∘ g1⁻¹ ∘ d⁻¹
        let dg1 = compose3(g1, &d.map, &IDENTITY);
        let g2 = compose3(&invert(&dg1), target_map, &IDENTITY);
        if d.target.automorphisms().binary_search(&g2).is_ok() {
            return Some((*g1, g2));
        }
    }
    None
}

const IDENTITY: [u8; 7] = [0, 1, 2, 3, 4, 5, 6];

/// Every bijection between the two planes, as position maps in
/// lexicographic order.
pub fn all_bijection_maps() -> Vec<[u8; 7]> {
    (0..7u8)
        .permutations(7)
        .map(|p| p.try_into().expect("seven"))
        .collect()
}

/// Partition of all 5040 bijections `source -> target` into orbits of the
/// action `δ -> g2 ∘ δ ∘ g1`, found by applying every automorphism pair to
/// an unclassified representative. Classes are ordered by their smallest map.
pub fn equivalence_classes(source: &FanoPlane, target: &FanoPlane) -> Vec<Vec<[u8; 7]>> {
    let all = all_bijection_maps();
    let slot: HashMap<[u8; 7], usize> = all.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut class_of = vec![usize::MAX; all.len()];
    let mut classes: Vec<Vec<[u8; 7]>> = Vec::new();
    for (i, rep) in all.iter().enumerate() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        for g1 in source.automorphisms() {
            for g2 in target.automorphisms() {
                let m = compose3(g1, rep, g2);
                let j = slot[&m];
                if class_of[j] == usize::MAX {
                    class_of[j] = id;
                    members.push(m);
                }
            }
        }
        members.sort();
        classes.push(members);
    }
    classes
}

/// A bijection of the requested index built from the canonical labelings:
///
/// * 7: the labeling isomorphism;
/// * 3: fix the simplex `P1, P2, P3, P123`, swap `P12` and `P13`;
/// * 1: fix that simplex, cycle `P12 -> P13 -> P23 -> P12`;
/// * 0: fix `P1, P2, P3`, cycle `P123 -> P23 -> P12 -> P13 -> P123`.
pub fn representative_of_index(f1: &FanoPlane, f2: &FanoPlane, idx: u8) -> Result<FanoBijection> {
    use label::*;
    // sigma[slot] = slot of the image
    let mut sigma: [usize; 7] = [0, 1, 2, 3, 4, 5, 6];
    match idx {
        7 => {}
        3 => {
            sigma[P12] = P13;
            sigma[P13] = P12;
        }
        1 => {
            sigma[P12] = P13;
            sigma[P13] = P23;
            sigma[P23] = P12;
        }
        0 => {
            sigma[P123] = P23;
            sigma[P23] = P12;
            sigma[P12] = P13;
            sigma[P13] = P123;
        }
        other => return Err(Error::InvalidIndex(other)),
    }
    let l1 = f1.labeling();
    let l2 = f2.labeling();
    let mut map = [0u8; 7];
    for slot in 0..7 {
        map[l1[slot] as usize] = l2[sigma[slot]];
    }
    let d = FanoBijection::new(f1.clone(), f2.clone(), map)?;
    if d.index() != idx {
        return Err(Error::Inconsistent(format!(
            "representative for index {idx} has index {}",
            d.index()
        )));
    }
    Ok(d)
}
