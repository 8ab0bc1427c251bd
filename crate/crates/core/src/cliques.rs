//! Collinearity graph, maximal clique enumeration and the classification of
//! maximal 15-element cliques of the `n = 15` geometry.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::combinatorics::ElementSet;
use crate::constructions::decompose;
use crate::error::{Error, Result};
use crate::geometry::{Geometry, GeometryParams, Line};

/// Adjacency bitsets over roster indices.
#[derive(Clone, Debug)]
pub struct CollinearityGraph<'g> {
    geometry: &'g Geometry,
    adjacency: Vec<FixedBitSet>,
}

impl<'g> CollinearityGraph<'g> {
    pub fn build(geometry: &'g Geometry) -> Self {
        let pts = geometry.points();
        let m = geometry.params().m() as u32;
        let v = pts.len();
        let mut adjacency = vec![FixedBitSet::with_capacity(v); v];
        for i in 0..v {
            let a = pts[i].bits();
            for j in i + 1..v {
                if (a & pts[j].bits()).count_ones() == m {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
        CollinearityGraph {
            geometry,
            adjacency,
        }
    }

    pub fn geometry(&self) -> &'g Geometry {
        self.geometry
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> &FixedBitSet {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].count_ones(..)
    }

    /// Maximal cliques of the whole graph, in a fixed deterministic order.
    pub fn maximal_cliques(&self) -> MaximalCliques<'_, 'g> {
        self.search(CliqueSearch::default())
    }

    pub fn search(&self, opts: CliqueSearch) -> MaximalCliques<'_, 'g> {
        MaximalCliques::new(self, opts)
    }

    /// Convenience wrapper collecting up to `limit` cliques.
    pub fn enumerate_maximal_cliques(&self, limit: Option<usize>) -> Vec<Clique> {
        self.search(CliqueSearch {
            limit,
            ..Default::default()
        })
        .collect()
    }

    /// Vertices ordered by repeatedly removing one of minimum remaining degree
    /// (ties to the smallest index).
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let v = self.vertex_count();
        let mut deg: Vec<usize> = (0..v).map(|u| self.degree(u)).collect();
        let mut removed = FixedBitSet::with_capacity(v);
        let mut order = Vec::with_capacity(v);
        for _ in 0..v {
            let u = (0..v)
                .filter(|&u| !removed.contains(u))
                .min_by_key(|&u| (deg[u], u))
                .expect("vertices remain");
            removed.insert(u);
            order.push(u);
            for w in self.adjacency[u].ones() {
                if !removed.contains(w) {
                    deg[w] -= 1;
                }
            }
        }
        order
    }
}

/// Controls for [`CollinearityGraph::search`].
#[derive(Clone, Debug, Default)]
pub struct CliqueSearch {
    /// Stop after this many cliques.
    pub limit: Option<usize>,
    /// Only report cliques with at least this many vertices; branches that
    /// cannot reach it are cut.
    pub min_size: Option<usize>,
    /// Only cliques through this roster index.
    pub through: Option<usize>,
}

struct Frame {
    r: Vec<usize>,
    p: FixedBitSet,
    x: FixedBitSet,
    todo: Vec<usize>,
    pos: usize,
}

/// Bron–Kerbosch with Tomita pivoting, driven by an explicit stack so that
/// cliques are produced lazily. The top level follows the degeneracy order.
pub struct MaximalCliques<'a, 'g> {
    graph: &'a CollinearityGraph<'g>,
    stack: Vec<Frame>,
    pending: Option<Vec<usize>>,
    min_size: usize,
    remaining: Option<usize>,
    ryser_bound: usize,
}

impl<'a, 'g> MaximalCliques<'a, 'g> {
    fn new(graph: &'a CollinearityGraph<'g>, opts: CliqueSearch) -> Self {
        let v = graph.vertex_count();
        let min_size = opts.min_size.unwrap_or(0);
        let mut it = MaximalCliques {
            graph,
            stack: Vec::new(),
            pending: None,
            min_size,
            remaining: opts.limit,
            ryser_bound: graph.geometry.params().n(),
        };
        match opts.through {
            None => {
                let mut p = FixedBitSet::with_capacity(v);
                p.insert_range(..);
                let todo = graph.degeneracy_order();
                if v == 0 {
                    return it;
                }
                it.stack.push(Frame {
                    r: Vec::new(),
                    p,
                    x: FixedBitSet::with_capacity(v),
                    todo,
                    pos: 0,
                });
            }
            Some(u) => {
                let p = graph.adjacency[u].clone();
                let x = FixedBitSet::with_capacity(v);
                if p.is_clear() {
                    if min_size <= 1 {
                        it.pending = Some(vec![u]);
                    }
                } else {
                    it.push_frame(vec![u], p, x);
                }
            }
        }
        it
    }

    fn push_frame(&mut self, r: Vec<usize>, p: FixedBitSet, x: FixedBitSet) {
        // Pivot: vertex of P ∪ X with the most neighbours in P, smallest index on ties.
        let mut best: Option<(usize, usize)> = None;
        for u in p.ones().chain(x.ones()) {
            let c = self.graph.adjacency[u].intersection_count(&p);
            if best.is_none_or(|(bc, bu)| c > bc || (c == bc && u < bu)) {
                best = Some((c, u));
            }
        }
        let pivot = best.expect("P is non-empty").1;
        let todo: Vec<usize> = p
            .ones()
            .filter(|&w| !self.graph.adjacency[pivot].contains(w))
            .collect();
        self.stack.push(Frame {
            r,
            p,
            x,
            todo,
            pos: 0,
        });
    }

    fn to_clique(&self, mut r: Vec<usize>) -> Clique {
        debug_assert!(r.len() <= self.ryser_bound);
        r.sort_unstable();
        let geometry = self.graph.geometry;
        Clique {
            params: geometry.params(),
            points: r.iter().map(|&i| geometry.point(i)).collect(),
        }
    }

    fn advance(&mut self) -> Option<Vec<usize>> {
        if let Some(r) = self.pending.take() {
            return Some(r);
        }
        while let Some(top) = self.stack.last_mut() {
            if top.pos == top.todo.len() {
                self.stack.pop();
                continue;
            }
            let v = top.todo[top.pos];
            top.pos += 1;
            let nv = &self.graph.adjacency[v];
            let mut p = top.p.clone();
            p.intersect_with(nv);
            let mut x = top.x.clone();
            x.intersect_with(nv);
            top.p.remove(v);
            top.x.insert(v);
            let mut r = top.r.clone();
            r.push(v);

            if r.len() + p.count_ones(..) < self.min_size {
                continue;
            }
            if p.is_clear() {
                if x.is_clear() {
                    return Some(r);
                }
                continue;
            }
            self.push_frame(r, p, x);
        }
        None
    }
}

impl Iterator for MaximalCliques<'_, '_> {
    type Item = Clique;

    fn next(&mut self) -> Option<Clique> {
        if self.remaining == Some(0) {
            return None;
        }
        let r = self.advance()?;
        if let Some(left) = self.remaining.as_mut() {
            *left -= 1;
        }
        Some(self.to_clique(r))
    }
}

/// Mutually collinear points of one geometry.
///
/// Points keep the order they were supplied in (constructions rely on it for
/// row order of incidence matrices); equality ignores order.
#[derive(Clone, Debug)]
pub struct Clique {
    params: GeometryParams,
    points: Vec<ElementSet>,
}

impl PartialEq for Clique {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.sorted_points() == other.sorted_points()
    }
}

impl Eq for Clique {}

impl Clique {
    pub fn new(params: GeometryParams, points: Vec<ElementSet>) -> Result<Self> {
        for &x in &points {
            if !params.is_point(x) {
                return Err(Error::NotAPoint(x));
            }
        }
        for (i, &a) in points.iter().enumerate() {
            for &b in &points[i + 1..] {
                if a == b {
                    return Err(Error::InvalidClique(format!("{a} appears twice")));
                }
                if !params.collinear(a, b) {
                    return Err(Error::NotCollinear(a, b));
                }
            }
        }
        if points.len() > params.n() {
            return Err(Error::Inconsistent(format!(
                "{} mutually collinear points exceed the bound n = {}",
                points.len(),
                params.n()
            )));
        }
        Ok(Clique { params, points })
    }

    pub fn from_vertices(graph: &CollinearityGraph<'_>, vertices: &[usize]) -> Result<Self> {
        let g = graph.geometry();
        Self::new(g.params(), vertices.iter().map(|&v| g.point(v)).collect())
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

    pub fn contains(&self, x: ElementSet) -> bool {
        self.points.contains(&x)
    }

    pub fn sorted_points(&self) -> Vec<ElementSet> {
        let mut v = self.points.clone();
        v.sort();
        v
    }

    /// Roster indices, ascending.
    pub fn vertex_indices(&self, geometry: &Geometry) -> Result<Vec<usize>> {
        let mut out = self
            .points
            .iter()
            .map(|&x| geometry.index_of(x).ok_or(Error::NotAPoint(x)))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        Ok(out)
    }

    /// An `n`-element clique is maximal by the size bound; smaller ones are
    /// checked against the roster.
    pub fn is_maximal(&self, geometry: &Geometry) -> bool {
        if self.len() == self.params.n() {
            return true;
        }
        !geometry
            .points()
            .iter()
            .any(|&y| !self.contains(y) && self.points.iter().all(|&x| self.params.collinear(x, y)))
    }

    pub fn is_singular_subspace(&self) -> bool {
        self.params.is_singular_subspace(&self.points)
    }

    /// Image under a permutation of the ground set, keeping point order.
    pub fn relabel(&self, p: &crate::combinatorics::Permutation) -> Result<Clique> {
        let points = self
            .points
            .iter()
            .map(|&x| p.apply(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Clique {
            params: self.params,
            points,
        })
    }
}

/// Points `O` of `c` such that `O △ C` lies in `c` for every other `C`,
/// in roster order.
pub fn center_points(c: &Clique) -> Vec<ElementSet> {
    let set: HashSet<ElementSet> = c.points.iter().copied().collect();
    let mut out: Vec<ElementSet> = c
        .points
        .iter()
        .copied()
        .filter(|&o| c.points.iter().all(|&x| x == o || set.contains(&(o ^ x))))
        .collect();
    out.sort();
    out
}

/// All lines with their three points in `c`, sorted.
pub fn lines_inside(c: &Clique) -> Vec<Line> {
    let set: HashSet<ElementSet> = c.points.iter().copied().collect();
    let mut out = Vec::new();
    let pts = c.sorted_points();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let third = a ^ b;
            if third > b && set.contains(&third) {
                out.push(Line::new_unchecked(a, b, third));
            }
        }
    }
    out.sort();
    out
}

/// 7-point planes (singular subspaces spanned by three non-collinear points)
/// contained in `c`, each sorted, in sorted order.
pub fn fano_planes_inside(c: &Clique) -> Vec<Vec<ElementSet>> {
    let set: HashSet<ElementSet> = c.points.iter().copied().collect();
    let pts = c.sorted_points();
    let mut planes: Vec<Vec<ElementSet>> = Vec::new();
    for (i, &a) in pts.iter().enumerate() {
        for (j, &b) in pts.iter().enumerate().skip(i + 1) {
            let ab = a ^ b;
            if !set.contains(&ab) {
                continue;
            }
            for &d in &pts[j + 1..] {
                if d == ab {
                    continue;
                }
                let plane_rest = [a ^ d, b ^ d, ab ^ d];
                if plane_rest.iter().all(|p| set.contains(p)) {
                    let mut plane = vec![a, b, ab, d, a ^ d, b ^ d, ab ^ d];
                    plane.sort();
                    if !planes.contains(&plane) {
                        planes.push(plane);
                    }
                }
            }
        }
    }
    planes.sort();
    planes
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CliqueTag {
    C1,
    C2,
    C3,
    C4,
    NonCentered,
}

impl CliqueTag {
    /// Class of a centered clique from the index of its Fano bijection.
    pub fn from_index(index: u8) -> Result<CliqueTag> {
        match index {
            7 => Ok(CliqueTag::C1),
            3 => Ok(CliqueTag::C2),
            1 => Ok(CliqueTag::C3),
            0 => Ok(CliqueTag::C4),
            other => Err(Error::InvalidIndex(other)),
        }
    }

    pub fn index(self) -> Option<u8> {
        match self {
            CliqueTag::C1 => Some(7),
            CliqueTag::C2 => Some(3),
            CliqueTag::C3 => Some(1),
            CliqueTag::C4 => Some(0),
            CliqueTag::NonCentered => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CliqueTag::C1 => "C1",
            CliqueTag::C2 => "C2",
            CliqueTag::C3 => "C3",
            CliqueTag::C4 => "C4",
            CliqueTag::NonCentered => "NON_CENTERED",
        }
    }
}

impl fmt::Display for CliqueTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Class tag together with the evidence that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueClass {
    pub tag: CliqueTag,
    pub centers: Vec<ElementSet>,
    pub fano_planes: Vec<Vec<ElementSet>>,
    pub lines_inside: usize,
    /// Index of the bijection obtained by decomposing at the smallest center.
    pub index: Option<u8>,
    /// Lines with all three points in the `+` half of that decomposition.
    pub plus_half_lines: Option<usize>,
}

/// Classifies a maximal 15-element clique of the `n = 15` geometry.
///
/// Centered cliques are decomposed at their smallest center point and tagged
/// by the index of the resulting Fano bijection; the structural description
/// of each class is then checked and any disagreement is an
/// [`Error::Inconsistent`].
pub fn classify_clique(c: &Clique) -> Result<CliqueClass> {
    let params = c.params();
    if params.k() != 4 {
        return Err(Error::InvalidClique(format!(
            "classification needs the n = 15 geometry, got {params}"
        )));
    }
    if c.len() != params.n() {
        return Err(Error::WrongSize {
            expected: params.n(),
            found: c.len(),
        });
    }
    let centers = center_points(c);
    let lines = lines_inside(c);
    let fano_planes = fano_planes_inside(c);

    let Some(&center) = centers.first() else {
        return Ok(CliqueClass {
            tag: CliqueTag::NonCentered,
            centers,
            fano_planes,
            lines_inside: lines.len(),
            index: None,
            plus_half_lines: None,
        });
    };

    let dec = decompose(c, center, None)?;
    let index = dec.fano_bijection()?.index();
    let tag = CliqueTag::from_index(index)?;
    let plus_lines = lines
        .iter()
        .filter(|l| l.points().iter().all(|p| dec.plus_half().contains(p)))
        .count();

    let class = CliqueClass {
        tag,
        centers,
        fano_planes,
        lines_inside: lines.len(),
        index: Some(index),
        plus_half_lines: Some(plus_lines),
    };
    check_structure(c, &class, &lines)?;
    Ok(class)
}

fn mismatch(tag: CliqueTag, what: impl fmt::Display) -> Error {
    Error::Inconsistent(format!("index route says {tag} but {what}"))
}

fn check_structure(c: &Clique, class: &CliqueClass, lines: &[Line]) -> Result<()> {
    let tag = class.tag;
    let index = class.index.unwrap_or_default() as usize;
    if class.plus_half_lines != Some(index) {
        return Err(mismatch(
            tag,
            format!("the + half holds {:?} lines", class.plus_half_lines),
        ));
    }
    let through = |o: ElementSet, l: &Line| l.contains(o);
    match tag {
        CliqueTag::C1 => {
            if !c.is_singular_subspace() {
                return Err(mismatch(tag, "the clique is not a singular subspace"));
            }
            if class.centers.len() != c.len() || lines.len() != 35 {
                return Err(mismatch(
                    tag,
                    format!("{} centers and {} lines", class.centers.len(), lines.len()),
                ));
            }
        }
        CliqueTag::C2 => {
            if class.fano_planes.len() != 3 || class.centers.len() != 3 {
                return Err(mismatch(
                    tag,
                    format!(
                        "{} planes and {} centers",
                        class.fano_planes.len(),
                        class.centers.len()
                    ),
                ));
            }
            let [a, b, d] = [class.centers[0], class.centers[1], class.centers[2]];
            if a ^ b != d {
                return Err(mismatch(tag, "the centers do not form a line"));
            }
            let common: Vec<ElementSet> = class.fano_planes[0]
                .iter()
                .copied()
                .filter(|p| class.fano_planes[1].contains(p) && class.fano_planes[2].contains(p))
                .collect();
            if common != class.centers {
                return Err(mismatch(
                    tag,
                    "the planes do not meet in the line of centers",
                ));
            }
            if !lines.iter().all(|l| {
                class
                    .fano_planes
                    .iter()
                    .any(|pl| l.points().iter().all(|p| pl.contains(p)))
            }) {
                return Err(mismatch(tag, "some line lies outside the three planes"));
            }
        }
        CliqueTag::C3 => {
            if class.fano_planes.len() != 1 || class.centers.len() != 1 {
                return Err(mismatch(
                    tag,
                    format!(
                        "{} planes and {} centers",
                        class.fano_planes.len(),
                        class.centers.len()
                    ),
                ));
            }
            let o = class.centers[0];
            let plane = &class.fano_planes[0];
            if !plane.contains(&o) {
                return Err(mismatch(tag, "the center is off the plane"));
            }
            if !lines
                .iter()
                .all(|l| through(o, l) || l.points().iter().all(|p| plane.contains(p)))
            {
                return Err(mismatch(tag, "a line avoids both the plane and the center"));
            }
        }
        CliqueTag::C4 => {
            if class.centers.len() != 1 || !class.fano_planes.is_empty() {
                return Err(mismatch(
                    tag,
                    format!(
                        "{} planes and {} centers",
                        class.fano_planes.len(),
                        class.centers.len()
                    ),
                ));
            }
            let o = class.centers[0];
            if !lines.iter().all(|l| through(o, l)) {
                return Err(mismatch(tag, "a line misses the center"));
            }
        }
        CliqueTag::NonCentered => unreachable!("checked only for centered cliques"),
    }
    Ok(())
}
