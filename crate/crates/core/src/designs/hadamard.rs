use std::fmt;

use crate::combinatorics::ElementSet;
use crate::error::{Error, Result};

use super::Design;

/// Text rendering of a Hadamard matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HadamardStyle {
    /// `+` and `-`.
    #[default]
    Signs,
    /// `0` for `+1`, `1` for `-1`.
    Binary,
}

/// A square `±1` matrix with pairwise orthogonal rows.
#[derive(Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    entries: Vec<Vec<i8>>,
}

impl HadamardMatrix {
    pub fn new(entries: Vec<Vec<i8>>) -> Result<Self> {
        let order = entries.len();
        if order == 0 {
            return Err(Error::NotHadamard("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != order {
                return Err(Error::NotHadamard(format!(
                    "row {} has {} entries, expected {order}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().any(|&x| x != 1 && x != -1) {
                return Err(Error::NotHadamard(format!(
                    "row {} has an entry other than +1/-1",
                    i + 1
                )));
            }
        }
        for i in 0..order {
            for j in i + 1..order {
                let dot: i32 = entries[i]
                    .iter()
                    .zip(&entries[j])
                    .map(|(&a, &b)| (a * b) as i32)
                    .sum();
                if dot != 0 {
                    return Err(Error::NotHadamard(format!(
                        "rows {} and {} have inner product {dot}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(HadamardMatrix { entries })
    }

    pub fn order(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i8>] {
        &self.entries
    }

    pub fn is_normalized(&self) -> bool {
        self.entries[0].iter().all(|&x| x == 1) && self.entries.iter().all(|r| r[0] == 1)
    }

    /// `H Hᵀ` as a flat row-major vector.
    pub fn gram(&self) -> Vec<i32> {
        let n = self.order();
        let mut g = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = self.entries[i]
                    .iter()
                    .zip(&self.entries[j])
                    .map(|(&a, &b)| (a * b) as i32)
                    .sum();
            }
        }
        g
    }

    pub fn render(&self, style: HadamardStyle) -> String {
        let mut out = String::new();
        for row in &self.entries {
            for &x in row {
                out.push(match (style, x) {
                    (HadamardStyle::Signs, 1) => '+',
                    (HadamardStyle::Signs, _) => '-',
                    (HadamardStyle::Binary, 1) => '0',
                    (HadamardStyle::Binary, _) => '1',
                });
            }
            out.push('\n');
        }
        out
    }

    /// Reads either rendering; `−` (U+2212) is accepted as `-`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let mut row = Vec::new();
            for ch in line.chars().filter(|c| !c.is_whitespace()) {
                row.push(match ch {
                    '+' | '0' => 1,
                    '-' | '\u{2212}' | '1' => -1,
                    other => {
                        return Err(Error::Parse(format!(
                            "line {}: unexpected character {other:?}",
                            ln + 1
                        )))
                    }
                });
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return Err(Error::Parse("no rows".into()));
        }
        HadamardMatrix::new(rows)
    }
}

impl fmt::Debug for HadamardMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HadamardMatrix(order {})\n{}",
            self.order(),
            self.render(HadamardStyle::Signs)
        )
    }
}

/// Borders the signed incidence matrix (incident = `-1`) with a row and
/// column of `+1`.
pub fn to_hadamard(d: &Design) -> Result<HadamardMatrix> {
    let n = d.v() + 1;
    let mut entries = vec![vec![1i8; n]; n];
    for (i, b) in d.blocks().iter().enumerate() {
        for p in b.iter() {
            entries[i + 1][p] = -1;
        }
    }
    HadamardMatrix::new(entries)
        .map_err(|e| Error::NotHadamard(format!("design does not yield a Hadamard matrix: {e}")))
}

pub fn from_hadamard(h: &HadamardMatrix) -> Result<Design> {
    if !h.is_normalized() {
        return Err(Error::NotHadamard("matrix is not normalized".into()));
    }
    let v = h.order() - 1;
    let blocks = h.entries()[1..]
        .iter()
        .map(|row| ElementSet::new(v, (1..=v).filter(|&p| row[p] == -1)))
        .collect::<Result<Vec<_>>>()?;
    Design::new(blocks)
}
