//! Explicit cliques: the centered product of two `(2m-1)`-cliques along a
//! bijection, its inverse decomposition at a center point, the hyperplane
//! complements of `PG(k-1, 2)`, and a non-centered 15-clique.

use std::collections::HashSet;

use crate::cliques::{Clique, CliqueTag};
use crate::combinatorics::ElementSet;
use crate::error::{Error, Result};
use crate::fano::{representative_of_index, FanoBijection, FanoPlane};
use crate::geometry::GeometryParams;

/// A centered clique split at its center `O` along a `(2m-1)`-subset `Z ⊂ O`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenteredDecomposition {
    params: GeometryParams,
    center: ElementSet,
    z: ElementSet,
    // x[i] ⊂ O^c and y[i] = δ(x[i]) ⊂ Z
    x: Vec<ElementSet>,
    y: Vec<ElementSet>,
}

impl CenteredDecomposition {
    pub fn params(&self) -> GeometryParams {
        self.params
    }

    pub fn center(&self) -> ElementSet {
        self.center
    }

    pub fn z(&self) -> ElementSet {
        self.z
    }

    /// The clique on `O^c`, in the order its members first occur in the
    /// decomposed clique.
    pub fn x(&self) -> &[ElementSet] {
        &self.x
    }

    /// `δ(x[i])` at position `i`.
    pub fn delta_images(&self) -> &[ElementSet] {
        &self.y
    }

    /// The clique on `Z`, in roster order.
    pub fn y(&self) -> Vec<ElementSet> {
        let mut v = self.y.clone();
        v.sort();
        v
    }

    pub fn delta_pairs(&self) -> Vec<(ElementSet, ElementSet)> {
        self.x.iter().copied().zip(self.y.iter().copied()).collect()
    }

    /// `x ∪ δ(x)` for every `x`.
    pub fn plus_half(&self) -> Vec<ElementSet> {
        self.x.iter().zip(&self.y).map(|(&x, &y)| x | y).collect()
    }

    /// `x ∪ (O \ δ(x))` for every `x`.
    pub fn minus_half(&self) -> Vec<ElementSet> {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(&x, &y)| x | (self.center ^ y))
            .collect()
    }

    /// `δ` as a bijection between Fano planes (only for `n = 15`).
    pub fn fano_bijection(&self) -> Result<FanoBijection> {
        if self.params.k() != 4 {
            return Err(Error::InvalidClique(format!(
                "Fano bijections arise only for n = 15, got {}",
                self.params
            )));
        }
        let source = FanoPlane::new(&self.x)?;
        let target = FanoPlane::new(&self.y())?;
        FanoBijection::from_pairs(source, target, &self.delta_pairs())
    }

    /// The product this decomposition describes.
    pub fn to_clique(&self) -> Result<Clique> {
        let order: Vec<usize> = (0..self.x.len()).collect();
        product_clique(self.center, &self.x, &self.y, &order)
    }
}

/// `O` minus its largest element.
pub fn default_z(center: ElementSet) -> ElementSet {
    center.without(center.largest().unwrap_or(0))
}

fn params_for(center: ElementSet) -> Result<GeometryParams> {
    let params = GeometryParams::for_ground(center.ground_size())?;
    if params.k() < 3 {
        return Err(Error::InvalidParams("the product needs k >= 3".into()));
    }
    if center.len() != params.point_size() {
        return Err(Error::WrongSize {
            expected: params.point_size(),
            found: center.len(),
        });
    }
    Ok(params)
}

fn check_half_clique(sets: &[ElementSet], within: ElementSet, m: usize, what: &str) -> Result<()> {
    if sets.len() != 2 * m - 1 {
        return Err(Error::InvalidClique(format!(
            "{what} has {} members, need {}",
            sets.len(),
            2 * m - 1
        )));
    }
    for (i, &a) in sets.iter().enumerate() {
        if a.ground_size() != within.ground_size() || a.len() != m || !a.is_subset_of(within) {
            return Err(Error::InvalidClique(format!(
                "{what} member {a} is not an {m}-subset of {within}"
            )));
        }
        for &b in &sets[i + 1..] {
            if (a & b).len() != m / 2 || a == b {
                return Err(Error::InvalidClique(format!(
                    "{what} members {a} and {b} are not collinear"
                )));
            }
        }
    }
    Ok(())
}

/// The centered product: `O` together with `x ∪ δ(x)` and `x ∪ (O \ δ(x))`
/// for every `x`, where `δ(x[i]) = y[delta[i]]`.
///
/// Points come out as the `+` half in `x` order, then `O`, then the `-` half
/// in `x` order.
pub fn product_clique(
    center: ElementSet,
    x: &[ElementSet],
    y: &[ElementSet],
    delta: &[usize],
) -> Result<Clique> {
    let params = params_for(center)?;
    let m = params.m();
    let outside = ElementSet::full(params.n())? ^ center;
    check_half_clique(x, outside, m, "X")?;
    check_half_clique(y, center, m, "Y")?;
    let support = y
        .iter()
        .fold(ElementSet::empty(params.n())?, |acc, &s| acc | s);
    if support.len() > 2 * m - 1 {
        return Err(Error::InvalidClique(format!(
            "Y covers {support}, which is not inside a {}-subset of the center",
            2 * m - 1
        )));
    }
    if delta.len() != x.len() || {
        let mut d = delta.to_vec();
        d.sort_unstable();
        d.iter().enumerate().any(|(i, &v)| i != v)
    } {
        return Err(Error::InvalidPermutation(format!(
            "{delta:?} is not a bijection X -> Y"
        )));
    }

    let plus = x.iter().zip(delta).map(|(&a, &j)| a | y[j]);
    let minus = x.iter().zip(delta).map(|(&a, &j)| a | (center ^ y[j]));
    let points: Vec<ElementSet> = plus.chain(std::iter::once(center)).chain(minus).collect();
    let clique = Clique::new(params, points)?;
    if clique.len() != params.n() {
        return Err(Error::Inconsistent(format!(
            "product has {} points, expected {}",
            clique.len(),
            params.n()
        )));
    }
    Ok(clique)
}

/// [`product_clique`] for a bijection between Fano planes.
pub fn product_from_bijection(center: ElementSet, delta: &FanoBijection) -> Result<Clique> {
    let map: Vec<usize> = delta.map().iter().map(|&v| v as usize).collect();
    product_clique(
        center,
        delta.source().points(),
        delta.target().points(),
        &map,
    )
}

pub fn is_center_point(c: &Clique, o: ElementSet) -> bool {
    let set: HashSet<ElementSet> = c.points().iter().copied().collect();
    set.contains(&o) && c.points().iter().all(|&x| x == o || set.contains(&(o ^ x)))
}

/// Recovers `(X, Y, δ)` with `c = product(O, X, Y, δ)`; `z` defaults to
/// [`default_z`].
pub fn decompose(
    c: &Clique,
    center: ElementSet,
    z: Option<ElementSet>,
) -> Result<CenteredDecomposition> {
    let params = c.params();
    if !is_center_point(c, center) {
        return Err(Error::NotCenter(center));
    }
    if c.len() != params.n() {
        return Err(Error::WrongSize {
            expected: params.n(),
            found: c.len(),
        });
    }
    let m = params.m();
    let z = z.unwrap_or_else(|| default_z(center));
    if z.ground_size() != center.ground_size() || !z.is_subset_of(center) || z.len() != 2 * m - 1 {
        return Err(Error::InvalidClique(format!(
            "{z} is not a {}-subset of the center {center}",
            2 * m - 1
        )));
    }
    let outside = ElementSet::full(params.n())? ^ center;
    let mut seen: HashSet<ElementSet> = HashSet::new();
    let mut x = Vec::new();
    let mut y = Vec::new();
    for &p in c.points() {
        if p == center {
            continue;
        }
        let xc = p & outside;
        if !seen.insert(xc) {
            continue;
        }
        let plus = if (p & center).is_subset_of(z) {
            p
        } else {
            p ^ center
        };
        let yc = plus & center;
        if !yc.is_subset_of(z) {
            return Err(Error::Inconsistent(format!(
                "neither {p} nor its partner meets the center inside {z}"
            )));
        }
        x.push(xc);
        y.push(yc);
    }
    if x.len() != 2 * m - 1 {
        return Err(Error::Inconsistent(format!(
            "found {} members of X, expected {}",
            x.len(),
            2 * m - 1
        )));
    }
    Ok(CenteredDecomposition {
        params,
        center,
        z,
        x,
        y,
    })
}

/// Moves a `Y` clique on `z1` to the one on `z2 = O \ {s}`: every member
/// containing `s` is replaced by its complement in `O`.
pub fn switch_z(center: ElementSet, y: &[ElementSet], z2: ElementSet) -> Result<Vec<ElementSet>> {
    let dropped = center ^ z2;
    if dropped.len() != 1 || !z2.is_subset_of(center) {
        return Err(Error::InvalidClique(format!(
            "{z2} is not the center minus one element"
        )));
    }
    Ok(y.iter()
        .map(|&s| {
            if (s & dropped).is_empty() {
                s
            } else {
                center ^ s
            }
        })
        .collect())
}

/// Complements of the hyperplanes of `PG(k-1, 2)`, whose points are the
/// non-zero vectors `1..2^k` identified with ground elements. The block for
/// the functional `u` is `{ v : u·v = 1 }`, listed by ascending `u`.
pub fn hyperplane_complement_clique(k: u32) -> Result<Clique> {
    if k < 3 {
        return Err(Error::InvalidParams(format!(
            "k must be at least 3, got {k}"
        )));
    }
    let params = GeometryParams::new(k)?;
    let n = params.n();
    let blocks = (1..=n as u32)
        .map(|u| ElementSet::new(n, (1..=n).filter(|&v| (u & v as u32).count_ones() % 2 == 1)))
        .collect::<Result<Vec<_>>>()?;
    Clique::new(params, blocks)
}

/// Ground element for a signed label in `-7..=7`: `-7..-1 -> 1..7`,
/// `0 -> 8`, `1..7 -> 9..15`.
pub fn signed_label(i: i32) -> Result<usize> {
    if !(-7..=7).contains(&i) {
        return Err(Error::ElementOutOfRange {
            element: i.unsigned_abs() as usize,
            ground: 7,
        });
    }
    Ok((i + 8) as usize)
}

pub fn signed_set(labels: &[i32]) -> Result<ElementSet> {
    let elems = labels
        .iter()
        .map(|&i| signed_label(i))
        .collect::<Result<Vec<_>>>()?;
    ElementSet::new(15, elems)
}

/// `{±i : i in indices}`.
pub fn plus_minus(indices: &[i32]) -> Result<ElementSet> {
    let labels: Vec<i32> = indices.iter().flat_map(|&i| [i, -i]).collect();
    signed_set(&labels)
}

fn neg_six_without(drop: &[i32]) -> Vec<i32> {
    (1..=6).filter(|i| !drop.contains(i)).map(|i| -i).collect()
}

fn check_indices(idx: &[i32]) -> Result<()> {
    for (a, &i) in idx.iter().enumerate() {
        if !(1..=6).contains(&i) || idx[a + 1..].contains(&i) {
            return Err(Error::InvalidParams(format!(
                "{idx:?} must be distinct values in 1..=6"
            )));
        }
    }
    Ok(())
}

/// `N_ij = {0, i, j, 7} ∪ ([-6] \ {-i, -j})`.
pub fn n_point(i: i32, j: i32) -> Result<ElementSet> {
    check_indices(&[i, j])?;
    let mut labels = vec![0, i, j, 7];
    labels.extend(neg_six_without(&[i, j]));
    signed_set(&labels)
}

/// `M_ijt = {-7, 0, i, j, t} ∪ ([-6] \ {-i, -j, -t})`.
pub fn m_point(i: i32, j: i32, t: i32) -> Result<ElementSet> {
    check_indices(&[i, j, t])?;
    let mut labels = vec![-7, 0, i, j, t];
    labels.extend(neg_six_without(&[i, j, t]));
    signed_set(&labels)
}

/// All the pieces of the non-centered clique.
#[derive(Clone, Debug)]
pub struct NonCenteredConstruction {
    /// `X1, X2, X3, X, X△X1, X△X2, X△X3`.
    pub plane: Vec<ElementSet>,
    /// `{0} ∪ [7]`.
    pub y: ElementSet,
    /// `N13, N25, N46, M124, M156, M236, M345`.
    pub extra: Vec<ElementSet>,
    /// The plane formed by `Y △ P` for the seven extra points `P`.
    pub deleted_plane: Vec<ElementSet>,
    /// Singular subspace spanned by the deleted plane and `Y`, roster order.
    pub subspace: Vec<ElementSet>,
    pub clique: Clique,
}

pub fn non_centered_construction() -> Result<NonCenteredConstruction> {
    let params = GeometryParams::new(4)?;
    let x1 = plus_minus(&[1, 2, 3, 4])?;
    let x2 = plus_minus(&[1, 2, 5, 6])?;
    let x3 = plus_minus(&[3, 4, 5, 6])?;
    let x = plus_minus(&[1, 3, 5, 7])?;
    let plane = vec![x1, x2, x3, x, x ^ x1, x ^ x2, x ^ x3];
    let y = signed_set(&[0, 1, 2, 3, 4, 5, 6, 7])?;
    let extra = vec![
        n_point(1, 3)?,
        n_point(2, 5)?,
        n_point(4, 6)?,
        m_point(1, 2, 4)?,
        m_point(1, 5, 6)?,
        m_point(2, 3, 6)?,
        m_point(3, 4, 5)?,
    ];
    let deleted_plane: Vec<ElementSet> = extra.iter().map(|&p| y ^ p).collect();
    let mut span_input = deleted_plane.clone();
    span_input.push(y);
    let subspace = params.singular_span(&span_input)?;
    let kept: Vec<ElementSet> = subspace
        .iter()
        .copied()
        .filter(|p| !deleted_plane.contains(p))
        .collect();
    let expected: HashSet<ElementSet> = extra.iter().copied().chain(std::iter::once(y)).collect();
    if kept.len() != 8 || kept.iter().any(|p| !expected.contains(p)) {
        return Err(Error::Inconsistent(
            "span minus the deleted plane is not Y with the seven extra points".into(),
        ));
    }
    let mut points = plane.clone();
    points.push(y);
    points.extend(extra.iter().copied());
    let clique = Clique::new(params, points)?;
    Ok(NonCenteredConstruction {
        plane,
        y,
        extra,
        deleted_plane,
        subspace,
        clique,
    })
}

pub fn non_centered_clique() -> Result<Clique> {
    Ok(non_centered_construction()?.clique)
}

/// The clique families the library can build directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CliqueKind {
    C1,
    C2,
    C3,
    C4,
    NonCentered,
    HyperplaneComplement,
}

impl CliqueKind {
    pub const ALL: [CliqueKind; 6] = [
        CliqueKind::C1,
        CliqueKind::C2,
        CliqueKind::C3,
        CliqueKind::C4,
        CliqueKind::NonCentered,
        CliqueKind::HyperplaneComplement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CliqueKind::C1 => "c1",
            CliqueKind::C2 => "c2",
            CliqueKind::C3 => "c3",
            CliqueKind::C4 => "c4",
            CliqueKind::NonCentered => "non-centered",
            CliqueKind::HyperplaneComplement => "hyperplane-complement",
        }
    }

    /// Bijection index of the canonical product, for the centered kinds.
    pub fn index(self) -> Option<u8> {
        match self {
            CliqueKind::C1 => Some(7),
            CliqueKind::C2 => Some(3),
            CliqueKind::C3 => Some(1),
            CliqueKind::C4 => Some(0),
            _ => None,
        }
    }

    pub fn expected_tag(self) -> CliqueTag {
        match self {
            CliqueKind::C1 | CliqueKind::HyperplaneComplement => CliqueTag::C1,
            CliqueKind::C2 => CliqueTag::C2,
            CliqueKind::C3 => CliqueTag::C3,
            CliqueKind::C4 => CliqueTag::C4,
            CliqueKind::NonCentered => CliqueTag::NonCentered,
        }
    }
}

impl std::str::FromStr for CliqueKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CliqueKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown clique kind {s:?}")))
    }
}

impl std::fmt::Display for CliqueKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `{8, ..., 15}`.
pub fn canonical_center() -> ElementSet {
    ElementSet::from_bits_unchecked(15, 0x7f80)
}

/// The plane of hyperplane complements of `PG(2, 2)` on `{1..7}` and its
/// copy shifted by 8 onto `{9..15}`, both in functional order.
pub fn canonical_planes() -> Result<(FanoPlane, FanoPlane)> {
    let base = hyperplane_complement_clique(3)?;
    let lift = |shift: u32| -> Vec<ElementSet> {
        base.points()
            .iter()
            .map(|p| ElementSet::from_bits_unchecked(15, p.bits() << shift))
            .collect()
    };
    Ok((FanoPlane::new(&lift(0))?, FanoPlane::new(&lift(8))?))
}

pub fn canonical_bijection(idx: u8) -> Result<FanoBijection> {
    let (x, y) = canonical_planes()?;
    representative_of_index(&x, &y, idx)
}

/// The canonical member of each family. The index-7 product coincides, point
/// for point, with the hyperplane complements of `PG(3, 2)`.
pub fn construct(kind: CliqueKind) -> Result<Clique> {
    match kind {
        CliqueKind::NonCentered => non_centered_clique(),
        CliqueKind::HyperplaneComplement => hyperplane_complement_clique(4),
        k => {
            let idx = k.index().expect("centered kind");
            product_from_bijection(canonical_center(), &canonical_bijection(idx)?)
        }
    }
}
