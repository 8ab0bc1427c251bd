//! Command-line front end. `main.rs` only parses arguments and maps the
//! outcome of [`run`] to an exit status.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use thiserror::Error;

use crate::cliques::{center_points, classify_clique, lines_inside, CollinearityGraph};
use crate::combinatorics::{ElementSet, Permutation};
use crate::constructions::{canonical_center, construct, default_z, CliqueKind};
use crate::designs::{
    automorphism_group, block_orbit_count, design_from_clique, find_isomorphism, flag_orbit_count,
    point_structure, to_hadamard, Design, HadamardStyle,
};
use crate::error::Error;
use crate::fano::{all_bijection_maps, fano_planes_on, map_index};
use crate::geometry::{Geometry, GeometryParams};

#[derive(Debug, Parser)]
#[command(
    name = "simplex-geom",
    version,
    about = "Cliques of the 2m-subset geometry and their (15,8,4)-designs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Directory searched for bare fixture names such as `c2`.
    #[arg(long, global = true)]
    pub fixture_dir: Option<PathBuf>,

    /// Caps enumeration work (cliques listed, plane pairs visited).
    #[arg(long, global = true)]
    pub limit: Option<usize>,

    /// Drop timing and sort keys so identical runs print identical reports.
    #[arg(long, global = true)]
    pub sorted: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write matrices produced by the command into this directory.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = MatrixStyle::Signs)]
    pub hadamard_style: MatrixStyle,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a clique, its design and Hadamard matrix.
    Construct {
        /// c1, c2, c3, c4, non-centered or hyperplane-complement.
        kind: CliqueKind,
    },
    /// Validate an incidence matrix and classify its clique.
    Classify { input: PathBuf },
    /// Search for a point relabeling between two designs.
    Isomorphic { a: PathBuf, b: PathBuf },
    /// Count product cliques for a fixed center and Z.
    Census {
        /// Center point, e.g. `8,9,10,11,12,13,14,15`.
        #[arg(long)]
        center: Option<String>,
        /// A (2m-1)-subset of the center; defaults to the center minus its largest element.
        #[arg(long)]
        z: Option<String>,
    },
    /// Enumerate maximal cliques of the collinearity graph.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Only cliques through this roster index.
        #[arg(long)]
        through: Option<usize>,
        #[arg(long)]
        min_size: Option<usize>,
    },
    /// Apply a seeded random point permutation to a design.
    Relabel { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Kv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixStyle {
    Signs,
    Binary,
}

impl From<MatrixStyle> for HadamardStyle {
    fn from(s: MatrixStyle) -> Self {
        match s {
            MatrixStyle::Signs => HadamardStyle::Signs,
            MatrixStyle::Binary => HadamardStyle::Binary,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 1 invariant violation, 2 parse or input error, 3 internal inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Core(Error::Parse(_)) => 2,
            CliError::Core(Error::Inconsistent(_)) => 3,
            CliError::Core(_) => 1,
        }
    }
}

/// What a command produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub results: Vec<(String, String)>,
    pub matrices: Vec<(String, String)>,
    pub elapsed: Option<Duration>,
}

impl Report {
    fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            ..Default::default()
        }
    }

    fn param(&mut self, k: &str, v: impl ToString) {
        self.params.push((k.into(), v.to_string()));
    }

    fn result(&mut self, k: &str, v: impl ToString) {
        self.results.push((k.into(), v.to_string()));
    }

    fn matrix(&mut self, k: &str, v: String) {
        self.matrices.push((k.into(), v));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.results
            .iter()
            .chain(&self.params)
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn sort(&mut self) {
        self.params.sort();
        self.results.sort();
        self.matrices.sort();
        self.elapsed = None;
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => {
                let _ = writeln!(out, "command: {}", self.command);
                for (k, v) in &self.params {
                    let _ = writeln!(out, "  {k}: {v}");
                }
                for (k, v) in &self.results {
                    let _ = writeln!(out, "{k}: {v}");
                }
                for (k, v) in &self.matrices {
                    let _ = writeln!(out, "{k}:");
                    for line in v.lines() {
                        let _ = writeln!(out, "  {line}");
                    }
                }
                if let Some(t) = self.elapsed {
                    let _ = writeln!(out, "elapsed: {:.3} ms", t.as_secs_f64() * 1e3);
                }
            }
            Format::Kv => {
                let _ = writeln!(out, "command={}", self.command);
                for (k, v) in &self.params {
                    let _ = writeln!(out, "param.{k}={v}");
                }
                for (k, v) in &self.results {
                    let _ = writeln!(out, "{k}={v}");
                }
                for (k, v) in &self.matrices {
                    let _ = writeln!(
                        out,
                        "matrix.{k}={}",
                        v.lines().collect::<Vec<_>>().join(",")
                    );
                }
                if let Some(t) = self.elapsed {
                    let _ = writeln!(out, "elapsed_ms={:.3}", t.as_secs_f64() * 1e3);
                }
            }
        }
        out
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Construct { kind } => cmd_construct(*kind, cli)?,
        Command::Classify { input } => cmd_classify(&read_design(cli, input)?.1, input)?,
        Command::Isomorphic { a, b } => {
            cmd_isomorphic(&read_design(cli, a)?.1, &read_design(cli, b)?.1, a, b)
        }
        Command::Census { center, z } => cmd_census(center.as_deref(), z.as_deref(), cli.limit)?,
        Command::Enumerate {
            k,
            through,
            min_size,
        } => cmd_enumerate(*k, *through, *min_size, cli.limit)?,
        Command::Relabel { input } => cmd_relabel(&read_design(cli, input)?.1, cli.seed)?,
    };
    report.elapsed = Some(start.elapsed());
    if cli.sorted {
        report.sort();
    }
    if let Some(dir) = &cli.out_dir {
        write_matrices(dir, &report)?;
    }
    Ok(report)
}

fn write_matrices(dir: &Path, report: &Report) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    };
    fs::create_dir_all(dir).map_err(io)?;
    let stem = report
        .get("kind")
        .unwrap_or(&report.command)
        .replace('-', "_");
    for (name, body) in &report.matrices {
        let path = dir.join(format!("{stem}.{name}"));
        fs::write(&path, body).map_err(|source| CliError::Io { path, source })?;
    }
    Ok(())
}

/// Resolves `path` directly or as a fixture name under `--fixture-dir`.
pub fn resolve(cli: &Cli, path: &Path) -> PathBuf {
    if path.exists() {
        return path.to_path_buf();
    }
    if let Some(dir) = &cli.fixture_dir {
        for cand in [dir.join(path), dir.join(path).with_extension("incidence")] {
            if cand.exists() {
                return cand;
            }
        }
    }
    path.to_path_buf()
}

fn read_design(cli: &Cli, path: &Path) -> Result<(PathBuf, Design), CliError> {
    let path = resolve(cli, path);
    let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    Ok((path, Design::parse_incidence(&text)?))
}

fn set_list(sets: &[ElementSet]) -> String {
    sets.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn describe_design(report: &mut Report, d: &Design) -> Result<(), Error> {
    let g = automorphism_group(d)?;
    report.result("group_order", g.order());
    report.result("block_orbits", block_orbit_count(d, &g)?);
    report.result("flag_orbits", flag_orbit_count(d, &g)?);
    let ps = point_structure(&g);
    report.result(
        "point_orbits",
        ps.orbit_sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    report.result("point_primitive", ps.primitive());
    Ok(())
}

pub fn cmd_construct(kind: CliqueKind, cli: &Cli) -> Result<Report, CliError> {
    let mut report = Report::new("construct");
    report.param("kind", kind);
    let clique = construct(kind)?;
    let class = classify_clique(&clique)?;
    let design = design_from_clique(&clique)?;
    report.result("tag", class.tag);
    report.result("points", clique.len());
    report.result("centers", class.centers.len());
    report.result("center_points", set_list(&class.centers));
    report.result("lines_inside", class.lines_inside);
    report.result("fano_planes", class.fano_planes.len());
    if let Some(i) = class.index {
        report.result("index", i);
    }
    report.result("blocks", set_list(clique.points()));
    report.matrix("incidence", design.to_incidence_text());
    report.matrix(
        "hadamard",
        to_hadamard(&design)?.render(cli.hadamard_style.into()),
    );
    Ok(report)
}

pub fn cmd_classify(d: &Design, input: &Path) -> Result<Report, CliError> {
    let mut report = Report::new("classify");
    report.param("input", input.display());
    report.result("v", d.v());
    let clique = d.to_clique()?;
    let class = classify_clique(&clique)?;
    report.result("tag", class.tag);
    report.result("centers", class.centers.len());
    report.result("lines_inside", lines_inside(&clique).len());
    report.result("fano_planes", class.fano_planes.len());
    if let Some(i) = class.index {
        report.result("index", i);
    }
    describe_design(&mut report, d)?;
    Ok(report)
}

pub fn cmd_isomorphic(a: &Design, b: &Design, pa: &Path, pb: &Path) -> Report {
    let mut report = Report::new("isomorphic");
    report.param("a", pa.display());
    report.param("b", pb.display());
    match find_isomorphism(a, b) {
        Some(p) => {
            report.result("isomorphic", true);
            report.result("witness", p);
        }
        None => {
            report.result("isomorphic", false);
            report.result("witness", "none (search exhausted)");
        }
    }
    report
}

pub fn cmd_relabel(d: &Design, seed: u64) -> Result<Report, CliError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let p = Permutation::random(d.v(), &mut rng)?;
    let e = d.relabel(&p)?;
    let mut report = Report::new("relabel");
    report.param("seed", seed);
    report.result("permutation", &p);
    report.matrix("incidence", e.to_incidence_text());
    Ok(report)
}

pub fn cmd_enumerate(
    k: u32,
    through: Option<usize>,
    min_size: Option<usize>,
    limit: Option<usize>,
) -> Result<Report, CliError> {
    let params = GeometryParams::new(k)?;
    let geometry = Geometry::build(params)?;
    let graph = CollinearityGraph::build(&geometry);
    let mut report = Report::new("enumerate");
    report.param("k", k);
    report.result("vertices", graph.vertex_count());
    report.result("degree", graph.degree(0));
    let search = crate::cliques::CliqueSearch {
        limit,
        min_size,
        through,
    };
    let cliques: Vec<_> = graph.search(search).collect();
    let mut sizes: Vec<usize> = cliques.iter().map(|c| c.len()).collect();
    sizes.sort_unstable();
    sizes.dedup();
    report.result("cliques", cliques.len());
    report.result(
        "sizes",
        sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    report.result(
        "all_singular",
        cliques.iter().all(|c| c.is_singular_subspace()),
    );
    if k == 4 {
        let centered = cliques
            .iter()
            .filter(|c| !center_points(c).is_empty())
            .count();
        report.result("centered", centered);
    }
    Ok(report)
}

/// Every `(X, Y, δ)` for the given center and `Z`: `X` ranges over the Fano
/// planes on the complement of `O`, `Y` over those on `Z`, `δ` over all
/// bijections.
pub fn cmd_census(
    center: Option<&str>,
    z: Option<&str>,
    limit: Option<usize>,
) -> Result<Report, CliError> {
    let o = match center {
        Some(s) => ElementSet::parse(15, s)?,
        None => canonical_center(),
    };
    let params = GeometryParams::new(4)?;
    if o.len() != params.point_size() {
        return Err(Error::InvalidParams(format!("center {o} must have 8 elements")).into());
    }
    let z = match z {
        Some(s) => ElementSet::parse(15, s)?,
        None => default_z(o),
    };
    if z.len() != 7 || !z.is_subset_of(o) {
        return Err(Error::InvalidParams(format!("Z = {z} is not a 7-subset of {o}")).into());
    }
    let outside = ElementSet::full(15)? ^ o;
    let xs = fano_planes_on(outside)?;
    let ys = fano_planes_on(z)?;
    let maps = all_bijection_maps();
    let pairs = xs.iter().flat_map(|x| ys.iter().map(move |y| (x, y)));
    let pairs: Vec<_> = match limit {
        Some(l) => pairs.take(l).collect(),
        None => pairs.collect(),
    };

    let mut tally = [0u64; 8];
    let mut distinct = 0u64;
    let mut invalid = 0u64;
    let mut index7_nonsingular = 0u64;
    let mut cross_plane = 0u64;
    let mut i = 0;
    while i < pairs.len() {
        // products over one X plane share their X-part, so they can be
        // deduplicated per plane; the X-part of each product is rechecked
        let x = pairs[i].0;
        let mut keys: Vec<[u16; 15]> = Vec::new();
        while i < pairs.len() && std::ptr::eq(pairs[i].0, x) {
            let y = pairs[i].1;
            for map in &maps {
                let idx = map_index(x, y, map);
                tally[idx as usize] += 1;
                let mut pts = [0u16; 15];
                pts[0] = o.bits() as u16;
                for (s, &xs) in x.points().iter().enumerate() {
                    let ys = y.points()[map[s] as usize];
                    pts[1 + s] = (xs | ys).bits() as u16;
                    pts[8 + s] = (xs | (o ^ ys)).bits() as u16;
                }
                if !pairwise_collinear(&pts) {
                    invalid += 1;
                }
                let x_part: HashSet<u16> = pts[1..]
                    .iter()
                    .map(|&p| p & outside.bits() as u16)
                    .collect();
                if x_part.len() != 7
                    || x.points()
                        .iter()
                        .any(|p| !x_part.contains(&(p.bits() as u16)))
                {
                    cross_plane += 1;
                }
                if idx == 7 && !closed_under_symdiff(&pts) {
                    index7_nonsingular += 1;
                }
                pts.sort_unstable();
                keys.push(pts);
            }
            i += 1;
        }
        keys.sort_unstable();
        keys.dedup();
        distinct += keys.len() as u64;
    }
    let total = pairs.len() as u64 * maps.len() as u64;

    let mut report = Report::new("census");
    report.param("center", o);
    report.param("z", z);
    report.param("x_planes", xs.len());
    report.param("y_planes", ys.len());
    report.param("plane_pairs", pairs.len());
    report.result("triples", total);
    report.result("distinct_cliques", distinct);
    report.result("invalid_products", invalid);
    report.result("x_part_mismatches", cross_plane);
    for idx in [0, 1, 3, 7] {
        report.result(&format!("index_{idx}"), tally[idx]);
    }
    report.result(
        "index_other",
        tally
            .iter()
            .enumerate()
            .filter(|(i, _)| ![0, 1, 3, 7].contains(i))
            .map(|(_, c)| c)
            .sum::<u64>(),
    );
    report.result("index_7_all_singular", index7_nonsingular == 0);
    if invalid > 0 || cross_plane > 0 || index7_nonsingular > 0 || distinct != total {
        return Err(Error::Inconsistent(format!(
            "census mismatch: {distinct} distinct of {total}, {invalid} invalid, {cross_plane} X mismatches, {index7_nonsingular} non-singular index-7 products"
        ))
        .into());
    }
    Ok(report)
}

fn pairwise_collinear(pts: &[u16; 15]) -> bool {
    (0..15).all(|i| (i + 1..15).all(|j| (pts[i] & pts[j]).count_ones() == 4 && pts[i] != pts[j]))
}

fn closed_under_symdiff(pts: &[u16; 15]) -> bool {
    let set: HashSet<u16> = pts.iter().copied().collect();
    (0..15).all(|i| (i + 1..15).all(|j| set.contains(&(pts[i] ^ pts[j]))))
}
