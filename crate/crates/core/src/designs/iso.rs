use std::collections::BTreeMap;

use itertools::Itertools;

use crate::combinatorics::Permutation;

use super::Design;

/// Stable colours of points and blocks after iterated refinement of the
/// incidence graph, starting from 3-wise intersection counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub point_colors: Vec<u32>,
    pub block_colors: Vec<u32>,
}

impl Refinement {
    fn histogram(&self) -> (Vec<u32>, Vec<u32>) {
        let mut p = self.point_colors.clone();
        let mut b = self.block_colors.clone();
        p.sort_unstable();
        b.sort_unstable();
        (p, b)
    }

    pub fn point_class_count(&self) -> usize {
        self.point_colors.iter().unique().count()
    }

    pub fn block_class_count(&self) -> usize {
        self.block_colors.iter().unique().count()
    }
}

struct Incidence {
    point_blocks: Vec<u64>,
    block_points: Vec<u64>,
}

impl Incidence {
    fn of(d: &Design) -> Self {
        let block_points: Vec<u64> = d.blocks().iter().map(|b| b.bits()).collect();
        let point_blocks = (0..d.v())
            .map(|p| {
                block_points
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b >> p & 1 == 1)
                    .fold(0u64, |acc, (i, _)| acc | 1 << i)
            })
            .collect();
        Incidence {
            point_blocks,
            block_points,
        }
    }
}

fn triple_profile(sets: &[u64], i: usize) -> Vec<u32> {
    let mut counts: Vec<u32> = (0..sets.len())
        .filter(|&j| j != i)
        .tuple_combinations()
        .map(|(j, k)| (sets[i] & sets[j] & sets[k]).count_ones())
        .collect();
    counts.sort_unstable();
    counts
}

fn intern(table: &mut BTreeMap<Vec<u32>, u32>, sig: Vec<u32>) -> u32 {
    let next = table.len() as u32;
    *table.entry(sig).or_insert(next)
}

/// Colours for several designs at once, so that colour ids are comparable
/// between them.
pub fn refined_colors(designs: &[&Design]) -> Vec<Refinement> {
    let inc: Vec<Incidence> = designs.iter().map(|d| Incidence::of(d)).collect();
    let mut ptab = BTreeMap::new();
    let mut btab = BTreeMap::new();
    let mut out: Vec<Refinement> = inc
        .iter()
        .map(|x| Refinement {
            point_colors: (0..x.point_blocks.len())
                .map(|p| intern(&mut ptab, triple_profile(&x.point_blocks, p)))
                .collect(),
            block_colors: (0..x.block_points.len())
                .map(|b| intern(&mut btab, triple_profile(&x.block_points, b)))
                .collect(),
        })
        .collect();
    let classes = |r: &[Refinement]| -> usize {
        r.iter()
            .map(|x| x.point_class_count() + x.block_class_count())
            .sum()
    };
    loop {
        let before = classes(&out);
        let mut ptab = BTreeMap::new();
        let mut btab = BTreeMap::new();
        let next: Vec<Refinement> = inc
            .iter()
            .zip(&out)
            .map(|(x, r)| {
                let point_colors = (0..x.point_blocks.len())
                    .map(|p| {
                        let mut sig = vec![r.point_colors[p]];
                        sig.extend(bits(x.point_blocks[p]).map(|b| r.block_colors[b]).sorted());
                        intern(&mut ptab, sig)
                    })
                    .collect();
                let block_colors = (0..x.block_points.len())
                    .map(|b| {
                        let mut sig = vec![r.block_colors[b]];
                        sig.extend(bits(x.block_points[b]).map(|p| r.point_colors[p]).sorted());
                        intern(&mut btab, sig)
                    })
                    .collect();
                Refinement {
                    point_colors,
                    block_colors,
                }
            })
            .collect();
        out = next;
        if classes(&out) == before {
            return out;
        }
    }
}

fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(i)
        }
    })
}

const UNSET: u8 = u8::MAX;

/// Backtracking over point images, pruned by colours and by the set of
/// target blocks each source block can still become.
pub(crate) struct Matcher {
    a: Incidence,
    b: Incidence,
    point_colors: (Vec<u32>, Vec<u32>),
    initial: Vec<u64>,
    v: usize,
}

impl Matcher {
    /// `None` when the refined colour histograms already differ.
    pub(crate) fn new(d1: &Design, d2: &Design) -> Option<Matcher> {
        if d1.v() != d2.v() || d1.block_size() != d2.block_size() {
            return None;
        }
        let r = refined_colors(&[d1, d2]);
        if r[0].histogram() != r[1].histogram() {
            return None;
        }
        let initial = r[0]
            .block_colors
            .iter()
            .map(|&c| {
                r[1].block_colors
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d == c)
                    .fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        let [ra, rb]: [Refinement; 2] = r.try_into().ok()?;
        Some(Matcher {
            a: Incidence::of(d1),
            b: Incidence::of(d2),
            point_colors: (ra.point_colors, rb.point_colors),
            initial,
            v: d1.v(),
        })
    }

    fn order(&self, fixed: &[(usize, usize)]) -> Vec<usize> {
        let pc = &self.point_colors.0;
        let mut rest: Vec<usize> = (0..self.v)
            .filter(|p| fixed.iter().all(|f| f.0 != *p))
            .collect();
        rest.sort_by_key(|&p| (pc.iter().filter(|&&c| c == pc[p]).count(), p));
        fixed.iter().map(|f| f.0).chain(rest).collect()
    }

    fn assign(&self, cand: &mut [u64], p: usize, q: usize) -> bool {
        let full = if self.v == 64 {
            u64::MAX
        } else {
            (1u64 << self.v) - 1
        };
        let on = self.b.point_blocks[q];
        let mut union = 0;
        for (i, c) in cand.iter_mut().enumerate() {
            *c &= if self.a.block_points[i] >> p & 1 == 1 {
                on
            } else {
                !on & full
            };
            if *c == 0 {
                return false;
            }
            union |= *c;
        }
        union.count_ones() as usize == cand.len()
    }

    /// Calls `visit` with every complete map extending `fixed` until it
    /// returns `false`.
    pub(crate) fn each(&self, fixed: &[(usize, usize)], visit: &mut dyn FnMut(&[u8]) -> bool) {
        let order = self.order(fixed);
        let mut map = vec![UNSET; self.v];
        let mut cand = self.initial.clone();
        for &(p, q) in fixed {
            if q >= self.v
                || map.contains(&(q as u8))
                || self.point_colors.0[p] != self.point_colors.1[q]
            {
                return;
            }
            if !self.assign(&mut cand, p, q) {
                return;
            }
            map[p] = q as u8;
        }
        let used = fixed.iter().fold(0u64, |acc, f| acc | 1 << f.1);
        self.descend(&order, fixed.len(), &mut map, used, &cand, visit);
    }

    fn descend(
        &self,
        order: &[usize],
        depth: usize,
        map: &mut [u8],
        used: u64,
        cand: &[u64],
        visit: &mut dyn FnMut(&[u8]) -> bool,
    ) -> bool {
        if depth == order.len() {
            return visit(map);
        }
        let p = order[depth];
        let color = self.point_colors.0[p];
        for q in 0..self.v {
            if used >> q & 1 == 1 || self.point_colors.1[q] != color {
                continue;
            }
            let mut next = cand.to_vec();
            if !self.assign(&mut next, p, q) {
                continue;
            }
            map[p] = q as u8;
            if !self.descend(order, depth + 1, map, used | 1 << q, &next, visit) {
                return false;
            }
            map[p] = UNSET;
        }
        true
    }

    pub(crate) fn first(&self, fixed: &[(usize, usize)]) -> Option<Permutation> {
        let mut found = None;
        self.each(fixed, &mut |m| {
            found = Some(Permutation::from_zero_based(m.to_vec()));
            false
        });
        found
    }
}

/// A point permutation carrying the blocks of `d1` onto those of `d2`.
pub fn find_isomorphism(d1: &Design, d2: &Design) -> Option<Permutation> {
    let p = Matcher::new(d1, d2)?.first(&[])?;
    debug_assert!(d1.relabel(&p).map(|e| e.same_blocks(d2)).unwrap_or(false));
    Some(p)
}

/// Every automorphism, by exhaustive search; stops after `limit` if given.
pub fn all_automorphisms(d: &Design, limit: Option<usize>) -> Vec<Permutation> {
    let mut out = Vec::new();
    if let Some(m) = Matcher::new(d, d) {
        m.each(&[], &mut |map| {
            out.push(Permutation::from_zero_based(map.to_vec()));
            limit.is_none_or(|l| out.len() < l)
        });
    }
    out
}
