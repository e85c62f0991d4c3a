use crate::error::{Error, Result};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Entry of a Coxeter matrix: a positive integer or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Finite(u32),
    Infinity,
}

impl Label {
    pub fn is_finite(self) -> bool {
        matches!(self, Label::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinity => None,
        }
    }

    /// An edge of the Coxeter graph: label ≥ 3 or ∞.
    pub fn is_edge(self) -> bool {
        match self {
            Label::Finite(m) => m >= 3,
            Label::Infinity => true,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Label::Finite(m) => serializer.serialize_u32(*m),
            Label::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct LabelVisitor;
        impl<'de> Visitor<'de> for LabelVisitor {
            type Value = Label;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive integer or the string \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Label, E> {
                u32::try_from(v).map(Label::Finite).map_err(|_| E::custom("label too large"))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Label, E> {
                u32::try_from(v).map(Label::Finite).map_err(|_| E::custom("label out of range"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Label, E> {
                match v {
                    "inf" | "∞" | "infinity" => Ok(Label::Infinity),
                    other => other
                        .parse::<u32>()
                        .map(Label::Finite)
                        .map_err(|_| E::custom(format!("bad label `{other}`"))),
                }
            }
        }
        deserializer.deserialize_any(LabelVisitor)
    }
}

/// Symmetric Coxeter matrix `(m_st)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    rank: usize,
    labels: Vec<Label>,
}

/// Largest rank supported; subsets of generators are stored as `u64` masks.
pub const MAX_RANK: usize = 64;

impl CoxeterMatrix {
    pub fn new(rows: Vec<Vec<Label>>) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 {
            return Err(Error::MatrixShape("rank must be positive".into()));
        }
        if rank > MAX_RANK {
            return Err(Error::MatrixShape(format!("rank {rank} exceeds {MAX_RANK}")));
        }
        let mut labels = Vec::with_capacity(rank * rank);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::MatrixShape(format!("row {i} has {} entries, expected {rank}", row.len())));
            }
            labels.extend_from_slice(row);
        }
        let m = CoxeterMatrix { rank, labels };
        m.validate()?;
        Ok(m)
    }

    /// Builds a matrix from off-diagonal labels given by `f(i, j)` for `i < j`.
    pub fn from_fn(rank: usize, mut f: impl FnMut(usize, usize) -> Label) -> Result<Self> {
        let mut rows = vec![vec![Label::Finite(1); rank]; rank];
        for i in 0..rank {
            for j in i + 1..rank {
                let l = f(i, j);
                rows[i][j] = l;
                rows[j][i] = l;
            }
        }
        Self::new(rows)
    }

    /// Linear diagram with consecutive labels `path[i]` between `i` and `i+1`; all
    /// other pairs commute.
    pub fn linear(path: &[u32]) -> Result<Self> {
        Self::from_fn(path.len() + 1, |i, j| if j == i + 1 { Label::Finite(path[i]) } else { Label::Finite(2) })
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.rank {
            for j in 0..self.rank {
                let l = self.get(i, j);
                if l != self.get(j, i) {
                    return Err(Error::MatrixShape(format!("not symmetric at ({i}, {j})")));
                }
                if i == j {
                    if l != Label::Finite(1) {
                        return Err(Error::MatrixShape(format!("diagonal entry ({i}, {i}) is {l}, expected 1")));
                    }
                } else if let Label::Finite(m) = l {
                    if m < 2 {
                        return Err(Error::MatrixShape(format!("off-diagonal entry ({i}, {j}) is {m} < 2")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Label {
        self.labels[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<Label>> {
        self.labels.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    /// Restriction to the generators listed in `members` (in that order).
    pub fn restrict(&self, members: &[usize]) -> CoxeterMatrix {
        let rank = members.len();
        let mut labels = Vec::with_capacity(rank * rank);
        for &i in members {
            for &j in members {
                labels.push(self.get(i, j));
            }
        }
        CoxeterMatrix { rank, labels }
    }

    /// Matrix with rows and columns permuted: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> CoxeterMatrix {
        self.restrict(perm)
    }
}

/// JSON form: `{"rank": n, "labels": [[...]], "names": [...]}` with `∞` as `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rank: usize,
    pub labels: Vec<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl MatrixFile {
    pub fn into_matrix(self) -> Result<(CoxeterMatrix, Option<Vec<String>>)> {
        if self.labels.len() != self.rank {
            return Err(Error::MatrixShape(format!(
                "declared rank {} but {} rows given",
                self.rank,
                self.labels.len()
            )));
        }
        Ok((CoxeterMatrix::new(self.labels)?, self.names))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
