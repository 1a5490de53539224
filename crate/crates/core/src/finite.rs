//! Finite groups given by a Cayley table.

use std::collections::HashMap;

use crate::error::Error;

/// A validated Cayley table; elements are `0..order()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    labels: Vec<String>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, Error> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::MalformedTable(format!("row {i} references element {bad}")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j))
            .ok_or_else(|| Error::MalformedTable("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for (i, row) in table.iter().enumerate() {
            let inv = (0..n)
                .find(|&j| row[j] == identity && table[j][i] == identity)
                .ok_or_else(|| Error::MalformedTable(format!("element {i} has no inverse")))?;
            inverses.push(inv);
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::MalformedTable(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(FiniteGroup { table, identity, inverses, labels })
    }

    /// Parses the plain-text format: one row per line, whitespace-separated
    /// indices, row `i` column `j` holding the index of `g_i g_j`. Blank lines
    /// and lines starting with `#` are ignored.
    pub fn parse_table(text: &str) -> Result<Self, Error> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Error::MalformedTable(format!("line {}: {e}", lineno + 1)))?;
            rows.push(row);
        }
        Self::from_table(rows)
    }

    pub fn to_table_text(&self) -> String {
        self.table
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// `ℤ/n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table is a group")
    }

    /// The symmetric group on `{0..degree}`. Element `i` is the `i`-th
    /// permutation in lexicographic order of image vectors, so `0` is the
    /// identity. Products compose right to left: `(ab)(x) = a(b(x))`.
    pub fn symmetric(degree: usize) -> Self {
        let perms = permutations(degree);
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let table = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| index[&b.iter().map(|&x| a[x]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let mut g = Self::from_table(table).expect("symmetric table is a group");
        g.labels = perms.iter().map(|p| format!("{p:?}")).collect();
        g
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Index of the element with the given label, for tables built by
    /// [`Self::symmetric`].
    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// All permutations of `0..n` as image vectors, lexicographic.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}
