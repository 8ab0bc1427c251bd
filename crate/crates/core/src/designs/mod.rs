//! Symmetric `(4t-1, 2t, t)`-designs, their incidence and Hadamard forms,
//! and isomorphism and automorphism search.

mod group;
mod hadamard;
mod iso;

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::cliques::Clique;
use crate::combinatorics::{ElementSet, Permutation};
use crate::error::{Error, Result};
use crate::geometry::GeometryParams;

pub use group::{
    automorphism_group, block_orbit_count, block_orbits, flag_orbit_count, point_structure,
    PermGroup, PointStructure, MATERIALIZE_LIMIT,
};
pub use hadamard::{from_hadamard, to_hadamard, HadamardMatrix, HadamardStyle};
pub use iso::{all_automorphisms, find_isomorphism, refined_colors, Refinement};

/// Blocks on the points `1..=v`, one per row of the incidence matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    v: usize,
    block_size: usize,
    lambda: usize,
    blocks: Vec<ElementSet>,
}

impl Design {
    /// Checks the symmetric `(4t-1, 2t, t)` conditions, naming the first
    /// failing block or pair.
    pub fn new(blocks: Vec<ElementSet>) -> Result<Self> {
        let v = blocks.len();
        if v < 3 || v % 4 != 3 {
            return Err(Error::InvalidDesign(format!(
                "{v} blocks; need v = 4t - 1 with t >= 1"
            )));
        }
        let (block_size, lambda) = (v.div_ceil(2), (v + 1) / 4);
        for (i, b) in blocks.iter().enumerate() {
            if b.ground_size() != v {
                return Err(Error::InvalidDesign(format!(
                    "block {} lives on [{}], expected [{v}]",
                    i + 1,
                    b.ground_size()
                )));
            }
            if b.len() != block_size {
                return Err(Error::InvalidDesign(format!(
                    "block {} has {} points, expected {block_size}",
                    i + 1,
                    b.len()
                )));
            }
        }
        for i in 0..v {
            for j in i + 1..v {
                let meet = (blocks[i] & blocks[j]).len();
                if meet != lambda {
                    return Err(Error::InvalidDesign(format!(
                        "blocks {} and {} meet in {meet} points, expected {lambda}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Design {
            v,
            block_size,
            lambda,
            blocks,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn blocks(&self) -> &[ElementSet] {
        &self.blocks
    }

    pub fn block_set(&self) -> HashSet<ElementSet> {
        self.blocks.iter().copied().collect()
    }

    /// Same blocks, ignoring their order.
    pub fn same_blocks(&self, other: &Design) -> bool {
        self.v == other.v && self.block_set() == other.block_set()
    }

    pub fn relabel(&self, p: &Permutation) -> Result<Design> {
        let blocks = self
            .blocks
            .iter()
            .map(|&b| p.apply(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Design { blocks, ..*self })
    }

    /// Whether `p` maps the block set onto itself.
    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        if p.degree() != self.v {
            return false;
        }
        let set = self.block_set();
        self.blocks
            .iter()
            .all(|&b| set.contains(&p.apply_unchecked(b)))
    }

    /// The blocks as a clique, when `v = 2^k - 1`.
    pub fn to_clique(&self) -> Result<Clique> {
        let params = GeometryParams::for_ground(self.v)?;
        Clique::new(params, self.blocks.clone())
    }

    /// Row `i`, column `j` is 1 when point `j + 1` lies on block `i`.
    pub fn incidence(&self) -> Vec<Vec<u8>> {
        self.blocks
            .iter()
            .map(|b| (1..=self.v).map(|p| b.contains(p) as u8).collect())
            .collect()
    }

    pub fn from_incidence(rows: &[Vec<u8>]) -> Result<Design> {
        let v = rows.len();
        let mut blocks = Vec::with_capacity(v);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != v {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {v}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|&&x| x > 1) {
                return Err(Error::Parse(format!(
                    "row {} holds {bad}, expected 0 or 1",
                    i + 1
                )));
            }
            blocks.push(ElementSet::new(v, (1..=v).filter(|&p| row[p - 1] == 1))?);
        }
        Design::new(blocks)
    }

    /// `v` lines of `v` characters `0`/`1`.
    pub fn to_incidence_text(&self) -> String {
        let mut out = String::with_capacity(self.v * (self.v + 1));
        for row in self.incidence() {
            for x in row {
                out.push(if x == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Blank lines and whitespace inside rows are ignored.
    pub fn parse_incidence(text: &str) -> Result<Design> {
        Design::from_incidence(&parse_binary_rows(text)?)
    }
}

impl std::fmt::Display for Design {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = format!("({}, {}, {})-design:", self.v, self.block_size, self.lambda);
        for b in &self.blocks {
            let _ = write!(s, " {b}");
        }
        f.write_str(&s)
    }
}

pub(crate) fn parse_binary_rows(text: &str) -> Result<Vec<Vec<u8>>> {
    let mut rows = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let mut row = Vec::new();
        for ch in line.chars().filter(|c| !c.is_whitespace()) {
            match ch {
                '0' => row.push(0),
                '1' => row.push(1),
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unexpected character {other:?}",
                        ln + 1
                    )))
                }
            }
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse("no rows".into()));
    }
    Ok(rows)
}

/// The blocks of an `n`-point clique.
pub fn design_from_clique(c: &Clique) -> Result<Design> {
    let n = c.params().n();
    if c.len() != n {
        return Err(Error::InvalidDesign(format!(
            "clique has {} points, need {n}",
            c.len()
        )));
    }
    Design::new(c.points().to_vec())
}
