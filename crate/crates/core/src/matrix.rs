//! Intervention matrices: one binary row per node, one column per
//! intervention, plus the separation predicates and cost model.
//!
//! Row u and row v are *separated* when they differ, and *strongly separated*
//! when neither support contains the other (so each endpoint is intervened in
//! some column that skips the other).  The linear cost of a matrix is
//! sum_v C(v) * weight(row v).

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::graph::CostGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeparationMode {
    #[serde(rename = "sep")]
    Separating,
    #[serde(rename = "strong")]
    StronglySeparating,
}

impl SeparationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SeparationMode::Separating => "sep",
            SeparationMode::StronglySeparating => "strong",
        }
    }
}

impl std::str::FromStr for SeparationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sep" | "separating" => Ok(SeparationMode::Separating),
            "strong" | "strongly-separating" => Ok(SeparationMode::StronglySeparating),
            other => Err(Error::InvalidParameter {
                name: "mode",
                message: format!("unknown mode {other:?} (expected `sep` or `strong`)"),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterventionMatrix {
    m: usize,
    rows: Vec<BitRow>,
}

impl InterventionMatrix {
    pub fn zeros(n: usize, m: usize) -> Self {
        InterventionMatrix {
            m,
            rows: vec![BitRow::zeros(m); n],
        }
    }

    pub fn from_rows(m: usize, rows: Vec<BitRow>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::DimensionMismatch {
                    what: "matrix row width",
                    expected: m,
                    actual: rows[i].len(),
                });
            }
        }
        Ok(InterventionMatrix { m, rows })
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, v: u32) -> &BitRow {
        &self.rows[v as usize]
    }

    pub fn set_row(&mut self, v: u32, row: BitRow) {
        assert_eq!(row.len(), self.m, "row width mismatch");
        self.rows[v as usize] = row;
    }

    pub fn get(&self, v: u32, col: usize) -> bool {
        self.rows[v as usize].get(col)
    }

    pub fn set(&mut self, v: u32, col: usize, bit: bool) {
        self.rows[v as usize].set(col, bit);
    }

    pub fn weight(&self, v: u32) -> usize {
        self.rows[v as usize].weight()
    }

    /// Nodes intervened in the given column, in ascending order.
    pub fn column_support(&self, col: usize) -> Vec<u32> {
        (0..self.node_count() as u32)
            .filter(|&v| self.get(v, col))
            .collect()
    }

    fn check_pair(&self, u: u32, v: u32) -> Result<()> {
        let n = self.node_count();
        for x in [u, v] {
            if x as usize >= n {
                return Err(Error::InvalidNode { node: x, n });
            }
        }
        if u == v {
            return Err(Error::SameNode { node: u });
        }
        Ok(())
    }

    pub fn is_separated(&self, u: u32, v: u32) -> Result<bool> {
        self.check_pair(u, v)?;
        Ok(self.rows[u as usize] != self.rows[v as usize])
    }

    pub fn is_strongly_separated(&self, u: u32, v: u32) -> Result<bool> {
        self.check_pair(u, v)?;
        Ok(self.rows[u as usize].is_incomparable(&self.rows[v as usize]))
    }

    /// sum_v C(v) * ||row v||_1; errors if the matrix and graph disagree on n.
    pub fn cost(&self, g: &CostGraph) -> Result<f64> {
        if g.node_count() != self.node_count() {
            return Err(Error::DimensionMismatch {
                what: "matrix rows vs graph nodes",
                expected: g.node_count(),
                actual: self.node_count(),
            });
        }
        Ok((0..self.node_count() as u32)
            .map(|v| g.cost(v) * self.weight(v) as f64)
            .sum())
    }

    /// Edges of `g` whose endpoints the matrix fails to separate under the
    /// given mode, in the graph's canonical edge order.
    pub fn unseparated_edges(&self, g: &CostGraph, mode: SeparationMode) -> Result<Vec<(u32, u32)>> {
        if g.node_count() != self.node_count() {
            return Err(Error::DimensionMismatch {
                what: "matrix rows vs graph nodes",
                expected: g.node_count(),
                actual: self.node_count(),
            });
        }
        let mut out = Vec::new();
        for &(u, v) in g.edges() {
            let ok = match mode {
                SeparationMode::Separating => self.is_separated(u, v)?,
                SeparationMode::StronglySeparating => self.is_strongly_separated(u, v)?,
            };
            if !ok {
                out.push((u, v));
            }
        }
        Ok(out)
    }

    /// Strict Definition-style check: fewer than ceil(eps * n^2) unseparated
    /// edges.
    pub fn is_eps_separating(&self, g: &CostGraph, mode: SeparationMode, eps: f64) -> Result<bool> {
        let count = self.unseparated_edges(g, mode)?.len() as u64;
        Ok(count < crate::graph::eps_edge_budget(g.node_count(), eps))
    }

    /// Serialize to the text format:
    /// ```text
    /// matrix <n> <m>
    /// <m characters from {0,1}>   (one line per node; character j = column j)
    /// ```
    pub fn to_text(&self) -> String {
        let mut out = format!("matrix {} {}\n", self.node_count(), self.m);
        for r in &self.rows {
            out.push_str(&r.to_bit_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<InterventionMatrix> {
        let mut lines = text.lines().enumerate();
        let (line_no, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty matrix file".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "matrix" {
            return Err(Error::Parse {
                line: line_no + 1,
                message: "expected header `matrix <n> <m>`".into(),
            });
        }
        let n: usize = fields[1].parse().map_err(|_| Error::Parse {
            line: line_no + 1,
            message: format!("invalid node count {:?}", fields[1]),
        })?;
        let m: usize = fields[2].parse().map_err(|_| Error::Parse {
            line: line_no + 1,
            message: format!("invalid column count {:?}", fields[2]),
        })?;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, text) = lines.next().ok_or(Error::Parse {
                line: 0,
                message: "unexpected end of file in row section".into(),
            })?;
            let row = text.trim();
            if row.len() != m {
                return Err(Error::Parse {
                    line: ln + 1,
                    message: format!("row has {} characters, expected {m}", row.len()),
                });
            }
            rows.push(BitRow::from_bit_string(row).map_err(|e| Error::Parse {
                line: ln + 1,
                message: e.to_string(),
            })?);
        }
        if let Some((ln, text)) = lines.next() {
            if !text.trim().is_empty() {
                return Err(Error::Parse {
                    line: ln + 1,
                    message: "trailing content after row section".into(),
                });
            }
        }
        InterventionMatrix::from_rows(m, rows)
    }
}
