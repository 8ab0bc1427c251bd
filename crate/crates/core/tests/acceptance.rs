//! Acceptance checks. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails. Oracles are computed here from first
//! principles rather than through the library routine under test.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use simplex_geom::cliques::{
    center_points, classify_clique, fano_planes_inside, lines_inside, CliqueTag,
};
use simplex_geom::combinatorics::{subsets_of_size, ElementSet, Permutation};
use simplex_geom::constructions::{
    canonical_bijection, canonical_center, canonical_planes, construct, decompose,
    hyperplane_complement_clique, m_point, n_point, non_centered_construction, product_clique,
    product_from_bijection, CliqueKind,
};
use simplex_geom::designs::{
    automorphism_group, block_orbit_count, design_from_clique, find_isomorphism, flag_orbit_count,
    from_hadamard, to_hadamard, Design, HadamardMatrix, HadamardStyle,
};
use simplex_geom::fano::{
    all_bijection_maps, equivalence_classes, fano_planes_on, representative_of_index,
    FanoBijection, FanoPlane,
};
use simplex_geom::geometry::{Geometry, GeometryParams};
use simplex_geom::{Clique, CollinearityGraph};

const LIMIT_POLAR: Duration = Duration::from_secs(1);
const LIMIT_SPECTRUM: Duration = Duration::from_secs(10);
const LIMIT_ROUND_TRIP: Duration = Duration::from_secs(30);
const LIMIT_NON_CENTERED: Duration = Duration::from_secs(1);
const LIMIT_ISOMORPHISM: Duration = Duration::from_secs(120);
const LIMIT_GROUPS: Duration = Duration::from_secs(300);
const RANDOM_PRODUCTS: usize = 120;
const RELABELINGS: usize = 20;

const KINDS: [CliqueKind; 5] = [
    CliqueKind::C1,
    CliqueKind::C2,
    CliqueKind::C3,
    CliqueKind::C4,
    CliqueKind::NonCentered,
];
const FIXTURES: [&str; 5] = ["c1", "c2", "c3", "c4", "non_centered"];

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn set(n: usize, e: &[usize]) -> ElementSet {
    ElementSet::new(n, e.iter().copied()).unwrap()
}

fn within(label: &str, start: Instant, limit: Duration) -> String {
    let t = start.elapsed();
    assert!(t < limit, "{label} took {t:?}, limit {limit:?}");
    format!("{:.0} ms", t.as_secs_f64() * 1e3)
}

// Oracle: number of lines of `f` whose image under `map` is a line of `g`,
// read straight off the symmetric differences.
fn index_oracle(f: &FanoPlane, g: &FanoPlane, map: &[u8; 7]) -> usize {
    let img =
        |x: ElementSet| g.points()[map[f.points().iter().position(|&p| p == x).unwrap()] as usize];
    f.points()
        .iter()
        .tuple_combinations()
        .filter(|(&a, &b)| {
            let c = a ^ b;
            // each line once: a < b < c
            a < b && b < c && img(a) ^ img(b) == img(c)
        })
        .count()
}

// Oracle: every 8-subset of [15] outside `c` fails to meet some member of
// `c` in exactly 4 points.
fn is_maximal_oracle(c: &Clique, roster: &[ElementSet]) -> bool {
    roster
        .iter()
        .filter(|p| !c.contains(**p))
        .all(|&p| c.points().iter().any(|&q| (p & q).len() != 4))
}

fn is_closed(points: &[ElementSet]) -> bool {
    let s: HashSet<ElementSet> = points.iter().copied().collect();
    points
        .iter()
        .tuple_combinations()
        .all(|(&a, &b)| s.contains(&(a ^ b)))
}

fn criterion_1() -> String {
    let start = Instant::now();
    let geometry = Geometry::build(GeometryParams::new(3).unwrap()).unwrap();
    let graph = CollinearityGraph::build(&geometry);
    let cliques = graph.enumerate_maximal_cliques(None);
    // oracle: a Fano plane on 7 labelled points is a labelling modulo its
    // 168 collineations, 7!/168 = 30
    let oracle = (1..=7).product::<usize>() / 168;
    assert_eq!(cliques.len(), oracle);
    assert!(cliques
        .iter()
        .all(|c| c.len() == 7 && is_closed(c.points())));
    let distinct: HashSet<Vec<ElementSet>> = cliques.iter().map(|c| c.sorted_points()).collect();
    assert_eq!(distinct.len(), 30);
    let t = within("n = 7 enumeration", start, LIMIT_POLAR);
    format!("30 maximal cliques on 35 vertices, all 7-point singular subspaces ({t})")
}

fn criterion_2() -> String {
    let start = Instant::now();
    let planes = fano_planes_on(set(15, &[1, 2, 3, 4, 5, 6, 7])).unwrap();
    let (f, g) = (&planes[2], &planes[19]);
    let maps = all_bijection_maps();
    assert_eq!(maps.len(), 5040);
    let mut spectrum = BTreeMap::new();
    for m in &maps {
        let d = FanoBijection::new(f.clone(), g.clone(), *m).unwrap();
        let idx = d.index();
        assert_eq!(idx as usize, index_oracle(f, g, m));
        *spectrum.entry(idx).or_insert(0usize) += 1;
    }
    assert!(
        spectrum.keys().all(|k| [0, 1, 3, 7].contains(k)),
        "{spectrum:?}"
    );
    // oracle: index 7 means a collineation composed with a fixed isomorphism
    assert_eq!(spectrum[&7], f.automorphisms().len());
    assert_eq!(spectrum[&7], 168);
    let classes = equivalence_classes(f, g);
    assert_eq!(classes.len(), 4);
    let mut members = 0;
    for class in &classes {
        let indices: HashSet<usize> = class.iter().map(|m| index_oracle(f, g, m)).collect();
        assert_eq!(indices.len(), 1, "class mixes indices {indices:?}");
        members += class.len();
    }
    assert_eq!(members, 5040);
    let t = within("spectrum", start, LIMIT_SPECTRUM);
    format!("spectrum {spectrum:?}, 4 classes matching index ({t})")
}

struct RandomProduct {
    center: ElementSet,
    z: ElementSet,
    x: Vec<ElementSet>,
    y: Vec<ElementSet>,
    delta: Vec<usize>,
}

fn random_product(rng: &mut StdRng) -> RandomProduct {
    let mut elems: Vec<usize> = (1..=15).collect();
    elems.shuffle(rng);
    let center = set(15, &elems[..8]);
    let drop = elems[rng.gen_range(0..8)];
    let z = center.without(drop);
    let xs = fano_planes_on(ElementSet::full(15).unwrap() ^ center).unwrap();
    let ys = fano_planes_on(z).unwrap();
    let mut x = xs.choose(rng).unwrap().points().to_vec();
    x.shuffle(rng);
    let y = ys.choose(rng).unwrap().points().to_vec();
    let mut delta: Vec<usize> = (0..7).collect();
    delta.shuffle(rng);
    RandomProduct {
        center,
        z,
        x,
        y,
        delta,
    }
}

fn criterion_3(roster: &[ElementSet]) -> String {
    let start = Instant::now();
    let mut checked = 0;
    let f1 = canonical_planes().unwrap().0;
    let o = set(15, &[8, 9, 10, 11, 12, 13, 14, 15]);
    let f2 = fano_planes_on(set(15, &[8, 9, 10, 11, 12, 13, 14]))
        .unwrap()
        .remove(11);
    for idx in [7, 3, 1, 0] {
        let d = representative_of_index(&f1, &f2, idx).unwrap();
        let c = product_from_bijection(o, &d).unwrap();
        assert!(center_points(&c).contains(&o));
        assert!(is_maximal_oracle(&c, roster));
        let dec = decompose(&c, o, None).unwrap();
        assert_eq!(dec.x(), f1.points());
        assert_eq!(dec.delta_pairs(), d.pairs());
        assert_eq!(dec.to_clique().unwrap(), c);
        checked += 1;
    }
    let mut rng = StdRng::seed_from_u64(20240617);
    for _ in 0..RANDOM_PRODUCTS {
        let r = random_product(&mut rng);
        let c = product_clique(r.center, &r.x, &r.y, &r.delta).unwrap();
        assert_eq!(c.len(), 15);
        assert!(center_points(&c).contains(&r.center));
        assert!(is_maximal_oracle(&c, roster));
        let dec = decompose(&c, r.center, Some(r.z)).unwrap();
        assert_eq!(dec.x(), &r.x[..]);
        let expected: Vec<ElementSet> = r.delta.iter().map(|&j| r.y[j]).collect();
        assert_eq!(dec.delta_images(), &expected[..]);
        assert_eq!(dec.to_clique().unwrap(), c);
        checked += 1;
    }
    let t = within("round trip", start, LIMIT_ROUND_TRIP);
    format!("{checked} products recovered exactly, all maximal with their center ({t})")
}

fn structural_tag(c: &Clique) -> CliqueTag {
    let centers = center_points(c);
    let planes = fano_planes_inside(c);
    let lines = lines_inside(c);
    match (centers.len(), planes.len()) {
        (15, _) => {
            assert!(is_closed(c.points()));
            CliqueTag::C1
        }
        (3, 3) => {
            assert_eq!(centers[0] ^ centers[1], centers[2], "centers form a line");
            for p in &planes {
                assert!(
                    centers.iter().all(|o| p.contains(o)),
                    "each plane holds the center line"
                );
            }
            CliqueTag::C2
        }
        (1, 1) => {
            assert!(planes[0].contains(&centers[0]));
            CliqueTag::C3
        }
        (1, 0) => {
            assert!(
                lines.iter().all(|l| l.contains(centers[0])),
                "all lines through the center"
            );
            CliqueTag::C4
        }
        (0, _) => CliqueTag::NonCentered,
        other => panic!("unexpected structure {other:?}"),
    }
}

fn criterion_4() -> String {
    let mut rng = StdRng::seed_from_u64(77);
    let mut seen = BTreeMap::new();
    let cases = [
        (7u8, CliqueTag::C1),
        (3, CliqueTag::C2),
        (1, CliqueTag::C3),
        (0, CliqueTag::C4),
    ];
    for (idx, tag) in cases {
        let c =
            product_from_bijection(canonical_center(), &canonical_bijection(idx).unwrap()).unwrap();
        assert_eq!(classify_clique(&c).unwrap().tag, tag);
        assert_eq!(structural_tag(&c), tag);
        *seen.entry(tag.name()).or_insert(0) += 1;
    }
    for _ in 0..40 {
        let r = random_product(&mut rng);
        let c = product_clique(r.center, &r.x, &r.y, &r.delta).unwrap();
        let class = classify_clique(&c).unwrap();
        assert_eq!(class.tag, structural_tag(&c));
        *seen.entry(class.tag.name()).or_insert(0) += 1;
    }
    format!("index 7/3/1/0 -> C1/C2/C3/C4, structure agrees on all; tags seen {seen:?}")
}

fn criterion_5(roster: &[ElementSet]) -> String {
    let start = Instant::now();
    let nc = non_centered_construction().unwrap();
    let c = &nc.clique;
    assert_eq!(c.len(), 15);
    assert!(is_maximal_oracle(c, roster));
    assert!(center_points(c).is_empty());
    assert_eq!(nc.subspace.len(), 15);
    assert!(is_closed(&nc.subspace));
    assert!(is_closed(&nc.plane) && nc.plane.len() == 7);
    assert!(
        is_closed(&nc.deleted_plane) && nc.deleted_plane.iter().all(|p| nc.subspace.contains(p))
    );
    let kept: HashSet<ElementSet> = nc
        .subspace
        .iter()
        .copied()
        .filter(|p| !nc.deleted_plane.contains(p))
        .collect();
    assert_eq!(kept.len(), 8);
    let plane: HashSet<ElementSet> = nc.plane.iter().copied().collect();
    assert!(kept.is_disjoint(&plane));
    let union: HashSet<ElementSet> = kept.union(&plane).copied().collect();
    assert_eq!(union, c.points().iter().copied().collect());

    let pairs: Vec<[i32; 2]> = (1..=6).tuple_combinations().map(|(a, b)| [a, b]).collect();
    let triples: Vec<[i32; 3]> = (1..=6)
        .tuple_combinations()
        .map(|(a, b, t)| [a, b, t])
        .collect();
    let meet = |a: &[i32], b: &[i32]| a.iter().filter(|x| b.contains(x)).count();
    let mut checks = 0;
    for (p, q) in pairs.iter().tuple_combinations() {
        let coll = (n_point(p[0], p[1]).unwrap() & n_point(q[0], q[1]).unwrap()).len() == 4;
        assert_eq!(coll, meet(p, q) == 0, "N{p:?} N{q:?}");
        checks += 1;
    }
    for (p, q) in triples.iter().tuple_combinations() {
        let coll =
            (m_point(p[0], p[1], p[2]).unwrap() & m_point(q[0], q[1], q[2]).unwrap()).len() == 4;
        assert_eq!(coll, meet(p, q) == 1, "M{p:?} M{q:?}");
        checks += 1;
    }
    for p in &pairs {
        for q in &triples {
            let coll =
                (n_point(p[0], p[1]).unwrap() & m_point(q[0], q[1], q[2]).unwrap()).len() == 4;
            assert_eq!(coll, meet(p, q) == 1, "N{p:?} M{q:?}");
            checks += 1;
        }
    }
    let t = within("non-centered", start, LIMIT_NON_CENTERED);
    format!("maximal, 0 centers, (S minus F') with F, {checks} N/M collinearity checks ({t})")
}

fn designs() -> Vec<Design> {
    KINDS
        .iter()
        .map(|&k| design_from_clique(&construct(k).unwrap()).unwrap())
        .collect()
}

fn criterion_6() -> String {
    let start = Instant::now();
    let ds = designs();
    for (i, j) in (0..5).tuple_combinations() {
        assert!(
            find_isomorphism(&ds[i], &ds[j]).is_none(),
            "{} ~ {}",
            KINDS[i],
            KINDS[j]
        );
    }
    let mut rng = StdRng::seed_from_u64(6);
    for d in &ds {
        for _ in 0..RELABELINGS {
            let p = Permutation::random(15, &mut rng).unwrap();
            let e = d.relabel(&p).unwrap();
            let w = find_isomorphism(d, &e).expect("relabeling must be found");
            assert!(d.relabel(&w).unwrap().same_blocks(&e));
        }
    }
    let t = within("isomorphism", start, LIMIT_ISOMORPHISM);
    format!(
        "10 pairs absent, {} planted relabelings found ({t})",
        5 * RELABELINGS
    )
}

fn criterion_7() -> String {
    let hc = design_from_clique(&hyperplane_complement_clique(4).unwrap()).unwrap();
    // an index-7 product away from the canonical layout
    let mut rng = StdRng::seed_from_u64(7);
    let r = random_product(&mut rng);
    let f1 = FanoPlane::new(&r.x).unwrap();
    let f2 = FanoPlane::new(&r.y).unwrap();
    let d = representative_of_index(&f1, &f2, 7).unwrap();
    let c1 = design_from_clique(&product_from_bijection(r.center, &d).unwrap()).unwrap();
    let w = find_isomorphism(&c1, &hc).expect("isomorphism");
    assert!(c1.relabel(&w).unwrap().same_blocks(&hc));
    format!(
        "C1 product on center {} maps onto the hyperplane-complement design via {w}",
        r.center
    )
}

fn criterion_8() -> String {
    let ds = designs();
    for (name, built) in FIXTURES.iter().zip(&ds) {
        let text = fixture(&format!("{name}.hadamard"));
        let h = HadamardMatrix::parse(&text).unwrap();
        assert_eq!(h.order(), 16);
        assert!(h.is_normalized());
        let g = h.gram();
        assert!((0..16).all(|i| (0..16).all(|j| g[i * 16 + j] == if i == j { 16 } else { 0 })));
        let d = from_hadamard(&h).unwrap();
        let inc = Design::parse_incidence(&fixture(&format!("{name}.incidence"))).unwrap();
        assert_eq!(d, inc, "{name}: Hadamard and incidence fixtures disagree");
        let back = to_hadamard(&d).unwrap();
        assert_eq!(
            back.render(HadamardStyle::Binary),
            text,
            "{name}: not bit-exact"
        );
        assert_eq!(from_hadamard(&back).unwrap(), d);
        assert!(
            find_isomorphism(built, &d).is_some(),
            "{name}: construction differs from fixture"
        );
    }
    let c1 = to_hadamard(&ds[0]).unwrap().render(HadamardStyle::Binary);
    assert_eq!(c1, fixture("c1.hadamard"), "construct c1 is not bit-exact");
    "five fixtures round-trip bit-exactly, constructions isomorphic, C1 identical".into()
}

fn criterion_9() -> String {
    let start = Instant::now();
    // oracle: |GL(4, 2)| = (16-1)(16-2)(16-4)(16-8)
    let gl42: u64 = (0..4).map(|i| 16 - (1u64 << i)).product();
    let mut summary = Vec::new();
    for (kind, d) in KINDS.iter().zip(designs()) {
        let g = automorphism_group(&d).unwrap();
        assert!(g.generators().iter().all(|p| d.is_automorphism(p)));
        let blocks = block_orbit_count(&d, &g).unwrap();
        let flags = flag_orbit_count(&d, &g).unwrap();
        if *kind == CliqueKind::C1 {
            assert_eq!(g.order(), gl42);
            assert_eq!(blocks, 1);
            assert_eq!(flags, 1);
        } else {
            assert!(blocks >= 2, "{kind}: block-transitive");
            assert!(flags > 1);
        }
        summary.push(format!("{kind}:{}/{blocks}/{flags}", g.order()));
    }
    let t = within("groups", start, LIMIT_GROUPS);
    format!("order/block orbits/flag orbits {} ({t})", summary.join(" "))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> String + 'a>);

#[test]
fn acceptance() {
    let roster = subsets_of_size(15, 8).unwrap();
    let criteria: Vec<Criterion> = vec![
        ("1 polar-space cliques at n = 7", Box::new(criterion_1)),
        ("2 Fano index spectrum", Box::new(criterion_2)),
        (
            "3 product/decomposition round trip",
            Box::new(|| criterion_3(&roster)),
        ),
        ("4 centered classification", Box::new(criterion_4)),
        ("5 non-centered clique", Box::new(|| criterion_5(&roster))),
        (
            "6 five designs pairwise non-isomorphic",
            Box::new(criterion_6),
        ),
        (
            "7 C1 product vs hyperplane complements",
            Box::new(criterion_7),
        ),
        ("8 Hadamard round trip", Box::new(criterion_8)),
        ("9 automorphism groups", Box::new(criterion_9)),
    ];
    let mut failed = Vec::new();
    for (name, check) in &criteria {
        match catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL criterion {name}: {msg}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
