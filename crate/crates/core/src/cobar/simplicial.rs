use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simplex `s_{j1} s_{j2} … s_{jk} y` with `j1 > j2 > … > jk` and `y`
/// nondegenerate of dimension `base_dim`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    pub degeneracies: Vec<u32>,
    pub base_dim: u32,
    pub base: usize,
}

impl Simplex {
    pub fn nondegenerate(dim: u32, base: usize) -> Self {
        Simplex { degeneracies: Vec::new(), base_dim: dim, base }
    }

    pub fn dim(&self) -> u32 {
        self.base_dim + self.degeneracies.len() as u32
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degeneracies.is_empty()
    }

    /// `s_j` applied to this simplex, kept in canonical form.
    pub fn degenerate(&self, j: u32) -> Simplex {
        let mut out = self.clone();
        // s_j s_{j1} … with j <= j1 becomes s_{j1+1} s_j …
        let mut pos = 0;
        while pos < out.degeneracies.len() && j <= out.degeneracies[pos] {
            out.degeneracies[pos] += 1;
            pos += 1;
        }
        // after shifting, entries before pos are > j and entries from pos on are < j
        out.degeneracies.insert(pos, j);
        out
    }
}

#[derive(Clone, Debug)]
struct Cell {
    name: String,
    faces: Vec<Simplex>,
}

/// A finite simplicial set given by its nondegenerate simplices and their
/// faces. Reduced: exactly one vertex.
#[derive(Clone, Debug)]
pub struct SimplicialSet {
    cells: Vec<Vec<Cell>>,
}

impl SimplicialSet {
    pub fn dim(&self) -> u32 {
        self.cells.len() as u32 - 1
    }

    /// Number of nondegenerate simplices in dimension `n`.
    pub fn count(&self, n: u32) -> usize {
        self.cells.get(n as usize).map_or(0, Vec::len)
    }

    pub fn name(&self, n: u32, i: usize) -> &str {
        &self.cells[n as usize][i].name
    }

    pub fn index_of(&self, n: u32, name: &str) -> Option<usize> {
        self.cells.get(n as usize)?.iter().position(|c| c.name == name)
    }

    pub fn basepoint(&self) -> Simplex {
        Simplex::nondegenerate(0, 0)
    }

    /// `d_i` of an arbitrary simplex.
    pub fn face(&self, s: &Simplex, i: u32) -> Simplex {
        assert!(s.dim() > 0 && i <= s.dim(), "face index out of range");
        match s.degeneracies.split_first() {
            None => self.cells[s.base_dim as usize][s.base].faces[i as usize].clone(),
            Some((&j, rest)) => {
                let inner = Simplex { degeneracies: rest.to_vec(), base_dim: s.base_dim, base: s.base };
                if i < j {
                    self.face(&inner, i).degenerate(j - 1)
                } else if i == j || i == j + 1 {
                    inner
                } else {
                    self.face(&inner, i - 1).degenerate(j)
                }
            }
        }
    }

    /// Front `j`-face `d_{j+1} ⋯ d_n σ` (vertices `0..=j`).
    pub fn front(&self, s: &Simplex, j: u32) -> Simplex {
        let mut out = s.clone();
        for k in (j + 1..=s.dim()).rev() {
            out = self.face(&out, k);
        }
        out
    }

    /// Rear `(n-j)`-face `d_0^j σ` (vertices `j..=n`).
    pub fn rear(&self, s: &Simplex, j: u32) -> Simplex {
        let mut out = s.clone();
        for _ in 0..j {
            out = self.face(&out, 0);
        }
        out
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for `i < j` on every nondegenerate
    /// simplex of dimension at least 2, and face dimensions.
    pub fn check_identities(&self) -> Result<()> {
        for (n, cells) in self.cells.iter().enumerate() {
            for (k, c) in cells.iter().enumerate() {
                if n > 0 && c.faces.len() != n + 1 {
                    return Err(Error::Input(format!("{} needs {} faces", c.name, n + 1)));
                }
                if c.faces.iter().any(|f| f.dim() as usize + 1 != n) {
                    return Err(Error::Input(format!("{} has a face of the wrong dimension", c.name)));
                }
                if n < 2 {
                    continue;
                }
                let s = Simplex::nondegenerate(n as u32, k);
                for j in 0..=n as u32 {
                    for i in 0..j {
                        let a = self.face(&self.face(&s, j), i);
                        let b = self.face(&self.face(&s, i), j - 1);
                        if a != b {
                            return Err(Error::Input(format!(
                                "simplicial identity d_{i} d_{j} = d_{} d_{i} fails on {}",
                                j - 1,
                                c.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn display(&self, s: &Simplex) -> String {
        let mut out = self.name(s.base_dim, s.base).to_string();
        for j in s.degeneracies.iter().rev() {
            out = format!("s{j}({out})");
        }
        out
    }

    pub fn from_json(json: &str) -> Result<SimplicialSet> {
        let doc: SimplicialSetDocument = serde_json::from_str(json)?;
        doc.into_set()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.base_dim, self.base)?;
        for j in &self.degeneracies {
            write!(f, "s{j}")?;
        }
        Ok(())
    }
}

/// On-disk form:
///
/// ```json
/// { "simplices": { "0": ["v"],
///                  "1": [{"id": "e", "faces": ["v", "v"]}],
///                  "2": [{"id": "t", "faces": ["e", "s0(v)", "e"]}] },
///   "basepoint": "v" }
/// ```
///
/// A face is the id of a nondegenerate simplex or a degeneracy `sK(face)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplicialSetDocument {
    pub simplices: BTreeMap<String, Vec<CellEntry>>,
    pub basepoint: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellEntry {
    Vertex(String),
    Cell { id: String, faces: Vec<String> },
}

impl SimplicialSetDocument {
    pub fn into_set(self) -> Result<SimplicialSet> {
        let mut by_dim: BTreeMap<u32, Vec<CellEntry>> = BTreeMap::new();
        for (k, v) in self.simplices {
            let n: u32 = k.parse().map_err(|_| Error::Input(format!("bad dimension key '{k}'")))?;
            by_dim.insert(n, v);
        }
        let top = by_dim.keys().next_back().copied().unwrap_or(0);
        let mut names: Vec<Vec<String>> = Vec::new();
        for n in 0..=top {
            let entries = by_dim.get(&n).map(Vec::as_slice).unwrap_or(&[]);
            names.push(
                entries
                    .iter()
                    .map(|e| match e {
                        CellEntry::Vertex(s) => s.clone(),
                        CellEntry::Cell { id, .. } => id.clone(),
                    })
                    .collect(),
            );
        }
        if names[0].len() != 1 {
            return Err(Error::Input("simplicial set must have exactly one vertex".into()));
        }
        if names[0][0] != self.basepoint {
            return Err(Error::Input("basepoint is not the vertex".into()));
        }
        let mut cells = Vec::new();
        for n in 0..=top {
            let entries = by_dim.get(&n).map(Vec::as_slice).unwrap_or(&[]);
            let mut row = Vec::new();
            for e in entries {
                match (n, e) {
                    (0, CellEntry::Vertex(s)) => row.push(Cell { name: s.clone(), faces: Vec::new() }),
                    (0, _) => return Err(Error::Input("vertices are listed by id only".into())),
                    (_, CellEntry::Vertex(s)) => {
                        return Err(Error::Input(format!("simplex '{s}' in dimension {n} needs faces")))
                    }
                    (_, CellEntry::Cell { id, faces }) => {
                        let faces = faces
                            .iter()
                            .map(|f| parse_face(f, n - 1, &names))
                            .collect::<Result<Vec<_>>>()?;
                        row.push(Cell { name: id.clone(), faces });
                    }
                }
            }
            cells.push(row);
        }
        let set = SimplicialSet { cells };
        set.check_identities()?;
        Ok(set)
    }
}

fn parse_face(text: &str, dim: u32, names: &[Vec<String>]) -> Result<Simplex> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix('s') {
        if let Some(open) = rest.find('(') {
            if let Ok(j) = rest[..open].parse::<u32>() {
                let inner = rest[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Input(format!("unbalanced face '{text}'")))?;
                if dim == 0 || j >= dim {
                    return Err(Error::Input(format!("degeneracy out of range in '{text}'")));
                }
                return Ok(parse_face(inner, dim - 1, names)?.degenerate(j));
            }
        }
    }
    let base = names
        .get(dim as usize)
        .and_then(|row| row.iter().position(|n| n == t))
        .ok_or_else(|| Error::Input(format!("unknown {dim}-simplex '{t}'")))?;
    Ok(Simplex::nondegenerate(dim, base))
}
