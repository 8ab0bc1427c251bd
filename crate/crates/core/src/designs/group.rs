use std::collections::{HashMap, HashSet, VecDeque};

use crate::combinatorics::Permutation;
use crate::error::{Error, Result};

use super::iso::Matcher;
use super::Design;

/// Groups up to this order get their elements listed.
pub const MATERIALIZE_LIMIT: u64 = 1_000_000;

type Perm = Vec<u8>;

fn compose(a: &[u8], b: &[u8]) -> Perm {
    a.iter().map(|&x| b[x as usize]).collect()
}

fn invert(a: &[u8]) -> Perm {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

fn is_identity(a: &[u8]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i == x as usize)
}

fn identity(n: usize) -> Perm {
    (0..n as u8).collect()
}

/// Base and strong generating set, built by Schreier-Sims.
#[derive(Clone, Debug)]
struct StabChain {
    degree: usize,
    base: Vec<usize>,
    strong: Vec<Vec<Perm>>,
    // transversal[i][x] carries base[i] to x
    transversal: Vec<Vec<Option<Perm>>>,
}

impl StabChain {
    fn new(degree: usize, generators: &[Perm]) -> Self {
        let mut chain = StabChain {
            degree,
            base: Vec::new(),
            strong: Vec::new(),
            transversal: Vec::new(),
        };
        for g in generators {
            let (r, j) = chain.sift(g.clone(), 0);
            if !is_identity(&r) {
                chain.add(j, r);
            }
        }
        while chain.complete_one() {}
        chain
    }

    fn generators_from(&self, level: usize) -> impl Iterator<Item = &Perm> {
        self.strong[level..].iter().flatten()
    }

    fn rebuild_orbit(&mut self, level: usize) {
        let b = self.base[level];
        let mut trans: Vec<Option<Perm>> = vec![None; self.degree];
        trans[b] = Some(identity(self.degree));
        let gens: Vec<Perm> = self.generators_from(level).cloned().collect();
        let mut queue = VecDeque::from([b]);
        while let Some(x) = queue.pop_front() {
            let ux = trans[x].clone().unwrap_or_default();
            for g in &gens {
                let y = g[x] as usize;
                if trans[y].is_none() {
                    trans[y] = Some(compose(&ux, g));
                    queue.push_back(y);
                }
            }
        }
        self.transversal[level] = trans;
    }

    fn add(&mut self, level: usize, g: Perm) {
        if level == self.base.len() {
            let moved = g
                .iter()
                .enumerate()
                .position(|(i, &x)| i != x as usize)
                .unwrap_or(0);
            self.base.push(moved);
            self.strong.push(Vec::new());
            self.transversal.push(Vec::new());
        }
        self.strong[level].push(g);
        for i in 0..=level {
            self.rebuild_orbit(i);
        }
    }

    fn sift(&self, mut h: Perm, from: usize) -> (Perm, usize) {
        for j in from..self.base.len() {
            let x = h[self.base[j]] as usize;
            match &self.transversal[j][x] {
                Some(u) => h = compose(&h, &invert(u)),
                None => return (h, j),
            }
        }
        (h, self.base.len())
    }

    // Sifts Schreier generators until one fails; true if the chain grew.
    fn complete_one(&mut self) -> bool {
        for i in (0..self.base.len()).rev() {
            let gens: Vec<Perm> = self.generators_from(i).cloned().collect();
            for x in 0..self.degree {
                let Some(ux) = self.transversal[i][x].clone() else {
                    continue;
                };
                for s in &gens {
                    let y = s[x] as usize;
                    let uy = self.transversal[i][y]
                        .as_ref()
                        .map(|u| invert(u))
                        .unwrap_or_default();
                    let h = compose(&compose(&ux, s), &uy);
                    let (r, j) = self.sift(h, i + 1);
                    if !is_identity(&r) {
                        self.add(j, r);
                        return true;
                    }
                }
            }
        }
        false
    }

    fn order(&self) -> u64 {
        self.transversal
            .iter()
            .map(|t| t.iter().filter(|u| u.is_some()).count() as u64)
            .product()
    }

    fn contains(&self, p: &[u8]) -> bool {
        p.len() == self.degree && is_identity(&self.sift(p.to_vec(), 0).0)
    }
}

/// A permutation group on `[degree]` given by generators.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    order: u64,
    elements: Option<Vec<Permutation>>,
    chain: StabChain,
}

impl PermGroup {
    /// Order by Schreier-Sims; when it is at most [`MATERIALIZE_LIMIT`] the
    /// elements are also listed by closure and the two counts compared.
    pub fn from_generators(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidPermutation(format!(
                "{g} does not act on [{degree}]"
            )));
        }
        let raw: Vec<Perm> = generators.iter().map(|g| g.zero_based().to_vec()).collect();
        let chain = StabChain::new(degree, &raw);
        let order = chain.order();
        let elements = if order <= MATERIALIZE_LIMIT {
            let all = closure(degree, &raw);
            if all.len() as u64 != order {
                return Err(Error::Inconsistent(format!(
                    "stabilizer chain gives order {order}, closure lists {} elements",
                    all.len()
                )));
            }
            Some(all.into_iter().map(Permutation::from_zero_based).collect())
        } else {
            None
        };
        Ok(PermGroup {
            degree,
            generators,
            order,
            elements,
            chain,
        })
    }

    pub fn trivial(degree: usize) -> Result<Self> {
        PermGroup::from_generators(degree, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// All elements in a fixed order, when the group is small enough.
    pub fn elements(&self) -> Option<&[Permutation]> {
        self.elements.as_deref()
    }

    pub fn base(&self) -> &[usize] {
        &self.chain.base
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.chain.contains(p.zero_based())
    }

    /// Point orbits, as 0-based index lists.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let images: Vec<Vec<usize>> = self
            .generators
            .iter()
            .map(|g| g.zero_based().iter().map(|&x| x as usize).collect())
            .collect();
        orbits(self.degree, &images)
    }

    /// Same group after renaming points by `p`.
    pub fn conjugate(&self, p: &Permutation) -> Result<PermGroup> {
        let inv = p.inverse();
        let gens = self
            .generators
            .iter()
            .map(|g| inv.then(g).then(p))
            .collect();
        PermGroup::from_generators(self.degree, gens)
    }
}

fn closure(degree: usize, gens: &[Perm]) -> Vec<Perm> {
    let id = identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    out
}

/// Orbits of the group generated by maps `images[g][x]` on `0..n`; each
/// orbit is sorted and orbits are ordered by their least member.
fn orbits(n: usize, images: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        label[start] = id;
        let mut orbit = vec![start];
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in images {
                if label[g[x]] == usize::MAX {
                    label[g[x]] = id;
                    orbit.push(g[x]);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// The full automorphism group of `d`.
///
/// Generators come from a coset search along the base `1, 2, ..., v`: for
/// each base point, deepest level first, one automorphism is sought for
/// every image not yet reached. The product of the level orbit sizes must
/// agree with the order computed from those generators.
pub fn automorphism_group(d: &Design) -> Result<PermGroup> {
    let v = d.v();
    let matcher = Matcher::new(d, d)
        .ok_or_else(|| Error::Inconsistent("design is not isomorphic to itself".into()))?;
    let mut gens: Vec<Permutation> = Vec::new();
    let mut product: u64 = 1;
    for level in (0..v).rev() {
        let mut fixed: Vec<(usize, usize)> = (0..level).map(|i| (i, i)).collect();
        let mut reached = level_orbit(&gens, level, v);
        for c in level + 1..v {
            if reached[c] {
                continue;
            }
            fixed.push((level, c));
            if let Some(g) = matcher.first(&fixed) {
                gens.push(g);
                reached = level_orbit(&gens, level, v);
            }
            fixed.pop();
        }
        product *= reached.iter().filter(|&&r| r).count() as u64;
    }
    if let Some(g) = gens.iter().find(|g| !d.is_automorphism(g)) {
        return Err(Error::Inconsistent(format!(
            "search returned {g}, which is not an automorphism"
        )));
    }
    let group = PermGroup::from_generators(v, gens)?;
    if group.order() != product {
        return Err(Error::Inconsistent(format!(
            "coset search found {product} automorphisms, generated group has order {}",
            group.order()
        )));
    }
    Ok(group)
}

fn level_orbit(gens: &[Permutation], start: usize, v: usize) -> Vec<bool> {
    let mut reached = vec![false; v];
    reached[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g.zero_based()[x] as usize;
            if !reached[y] {
                reached[y] = true;
                stack.push(y);
            }
        }
    }
    reached
}

fn check_preserves(d: &Design, g: &PermGroup) -> Result<HashMap<u64, usize>> {
    if g.degree() != d.v() {
        return Err(Error::GroupDoesNotPreserve(format!(
            "group acts on [{}], design on [{}]",
            g.degree(),
            d.v()
        )));
    }
    if let Some(bad) = g.generators().iter().find(|p| !d.is_automorphism(p)) {
        return Err(Error::GroupDoesNotPreserve(format!(
            "{bad} does not preserve the blocks"
        )));
    }
    Ok(d.blocks()
        .iter()
        .enumerate()
        .map(|(i, b)| (b.bits(), i))
        .collect())
}

/// Orbits on block indices (0-based).
pub fn block_orbits(d: &Design, g: &PermGroup) -> Result<Vec<Vec<usize>>> {
    let index = check_preserves(d, g)?;
    let images: Vec<Vec<usize>> = g
        .generators()
        .iter()
        .map(|p| {
            d.blocks()
                .iter()
                .map(|&b| index[&p.apply_unchecked(b).bits()])
                .collect()
        })
        .collect();
    Ok(orbits(d.blocks().len(), &images))
}

pub fn block_orbit_count(d: &Design, g: &PermGroup) -> Result<usize> {
    Ok(block_orbits(d, g)?.len())
}

/// Orbits on incident (point, block) pairs.
pub fn flag_orbit_count(d: &Design, g: &PermGroup) -> Result<usize> {
    let index = check_preserves(d, g)?;
    let flags: Vec<(usize, usize)> = d
        .blocks()
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.iter().map(move |p| (p, i)))
        .collect();
    let flag_index: HashMap<(usize, usize), usize> =
        flags.iter().enumerate().map(|(k, &f)| (f, k)).collect();
    let images: Vec<Vec<usize>> = g
        .generators()
        .iter()
        .map(|p| {
            flags
                .iter()
                .map(|&(pt, b)| {
                    let nb = index[&p.apply_unchecked(d.blocks()[b]).bits()];
                    flag_index[&(p.image(pt), nb)]
                })
                .collect()
        })
        .collect();
    Ok(orbits(flags.len(), &images).len())
}

/// How a group acts on points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointStructure {
    pub orbit_sizes: Vec<usize>,
    pub transitive: bool,
    /// Sizes of the minimal non-trivial blocks of imprimitivity (empty for
    /// a primitive or intransitive group).
    pub block_sizes: Vec<usize>,
}

impl PointStructure {
    pub fn primitive(&self) -> bool {
        self.transitive && self.block_sizes.is_empty()
    }
}

/// Orbit sizes and, for a transitive group, the block sizes of the finest
/// invariant partitions joining point 1 to each other point.
pub fn point_structure(g: &PermGroup) -> PointStructure {
    let n = g.degree();
    let orbit_sizes: Vec<usize> = g.point_orbits().iter().map(Vec::len).collect();
    let transitive = orbit_sizes.len() == 1;
    let mut block_sizes = Vec::new();
    if transitive {
        let gens: Vec<&[u8]> = g.generators().iter().map(|p| p.zero_based()).collect();
        for x in 1..n {
            let size = minimal_block(n, &gens, x);
            if size < n && !block_sizes.contains(&size) {
                block_sizes.push(size);
            }
        }
        block_sizes.sort_unstable();
    }
    PointStructure {
        orbit_sizes,
        transitive,
        block_sizes,
    }
}

// Size of the block containing 0 in the finest invariant partition with 0 ~ x.
fn minimal_block(n: usize, gens: &[&[u8]], x: usize) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut queue = vec![(0usize, x)];
    parent[x] = 0;
    while let Some((a, b)) = queue.pop() {
        for g in gens {
            let (ga, gb) = (g[a] as usize, g[b] as usize);
            let (ra, rb) = (find(&mut parent, ga), find(&mut parent, gb));
            if ra != rb {
                parent[rb] = ra;
                queue.push((ga, gb));
            }
        }
    }
    let root = find(&mut parent, 0);
    (0..n).filter(|&i| find(&mut parent, i) == root).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::hyperplane_complement_clique;
    use crate::designs::{all_automorphisms, design_from_clique};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn symmetric_group_orders() {
        for n in 1..=7usize {
            let mut gens = vec![];
            if n > 1 {
                gens.push(Permutation::transposition(n, 1, 2).unwrap());
                let cycle: Vec<usize> = (2..=n).chain([1]).collect();
                gens.push(Permutation::from_images(&cycle).unwrap());
            }
            let g = PermGroup::from_generators(n, gens).unwrap();
            assert_eq!(g.order(), (1..=n as u64).product::<u64>());
        }
    }

    #[test]
    fn large_group_is_not_listed() {
        let n = 12;
        let cycle: Vec<usize> = (2..=n).chain([1]).collect();
        let g = PermGroup::from_generators(
            n,
            vec![
                Permutation::transposition(n, 1, 2).unwrap(),
                Permutation::from_images(&cycle).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(g.order(), 479_001_600);
        assert!(g.elements().is_none());
        assert!(g.contains(&Permutation::transposition(n, 3, 9).unwrap()));
    }

    #[test]
    fn membership() {
        // the cyclic group of order 5 on [5]
        let c = Permutation::from_images(&[2, 3, 4, 5, 1]).unwrap();
        let g = PermGroup::from_generators(5, vec![c.clone()]).unwrap();
        assert_eq!(g.order(), 5);
        assert!(g.contains(&c.then(&c)));
        assert!(!g.contains(&Permutation::transposition(5, 1, 2).unwrap()));
        assert_eq!(g.elements().unwrap().len(), 5);
        let s = point_structure(&g);
        assert!(s.primitive());
    }

    #[test]
    fn imprimitive_action() {
        // the dihedral group of the square preserves the diagonals {1,3} {2,4}
        let r = Permutation::from_images(&[2, 3, 4, 1]).unwrap();
        let f = Permutation::from_images(&[1, 4, 3, 2]).unwrap();
        let g = PermGroup::from_generators(4, vec![r, f]).unwrap();
        assert_eq!(g.order(), 8);
        let s = point_structure(&g);
        assert!(s.transitive);
        assert_eq!(s.block_sizes, vec![2]);
    }

    #[test]
    fn fano_group() {
        let d = design_from_clique(&hyperplane_complement_clique(3).unwrap()).unwrap();
        let g = automorphism_group(&d).unwrap();
        assert_eq!(g.order(), 168);
        assert_eq!(block_orbit_count(&d, &g).unwrap(), 1);
        assert_eq!(flag_orbit_count(&d, &g).unwrap(), 1);
        assert!(point_structure(&g).primitive());
        let mut listed: Vec<Vec<usize>> =
            g.elements().unwrap().iter().map(|p| p.images()).collect();
        let mut brute: Vec<Vec<usize>> = all_automorphisms(&d, None)
            .iter()
            .map(|p| p.images())
            .collect();
        listed.sort();
        brute.sort();
        assert_eq!(listed, brute);
    }

    #[test]
    fn trivial_group_orbits() {
        let d = design_from_clique(&hyperplane_complement_clique(4).unwrap()).unwrap();
        let t = PermGroup::trivial(15).unwrap();
        assert_eq!(t.order(), 1);
        assert_eq!(block_orbit_count(&d, &t).unwrap(), 15);
        assert_eq!(flag_orbit_count(&d, &t).unwrap(), 120);
    }

    #[test]
    fn foreign_group_is_rejected() {
        let d = design_from_clique(&hyperplane_complement_clique(4).unwrap()).unwrap();
        let g = PermGroup::from_generators(15, vec![Permutation::transposition(15, 1, 2).unwrap()])
            .unwrap();
        assert!(matches!(
            block_orbit_count(&d, &g),
            Err(Error::GroupDoesNotPreserve(_))
        ));
        assert!(matches!(
            flag_orbit_count(&d, &g),
            Err(Error::GroupDoesNotPreserve(_))
        ));
    }

    #[test]
    fn conjugation_keeps_order() {
        let d = design_from_clique(&hyperplane_complement_clique(3).unwrap()).unwrap();
        let g = automorphism_group(&d).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        let p = Permutation::random(7, &mut rng).unwrap();
        let h = g.conjugate(&p).unwrap();
        assert_eq!(h.order(), 168);
        let e = d.relabel(&p).unwrap();
        assert!(h.generators().iter().all(|x| e.is_automorphism(x)));
    }
}
