//! The rank-2 and rank-3 table of even hyperbolic Coxeter polyhedra.

use super::andreev::{parse_angle, Angle, AngleTriple};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// A family of angle patterns; `pi/n` ranges over `n_min..=n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleFamily {
    pub pattern: Vec<String>,
    pub n_min: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
}

impl AngleFamily {
    /// Angles for one value of `n`.
    pub fn instantiate(&self, n: u32) -> Result<Vec<Angle>> {
        self.pattern.iter().map(|p| parse_angle(&p.replace('n', &n.to_string()))).collect()
    }

    /// Values of `n`, with unbounded families cut at `cap`.
    pub fn range(&self, cap: u32) -> std::ops::RangeInclusive<u32> {
        self.n_min..=self.n_max.unwrap_or(cap)
    }
}

/// A label value or the free parameter `"m"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableLabel {
    Value(u32),
    Param(String),
}

impl TableLabel {
    fn resolve(&self, m: u32) -> u32 {
        match self {
            TableLabel::Value(v) => *v,
            TableLabel::Param(_) => m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank3Labels {
    pub ab: TableLabel,
    pub bc: TableLabel,
    pub ac: TableLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronTableEntry {
    pub rank: usize,
    pub coxeter_type: String,
    /// Rank 2: the single label `m_st` (polygons have `2 m_st` sides).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<TableLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Rank3Labels>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cellulation: Option<String>,
    /// Rank 2: a single family for the vertex angle. Rank 3: families for
    /// `(α_a, α_b, α_c)`.
    pub angles: Vec<AngleFamily>,
}

#[derive(Deserialize)]
struct RawTable {
    m_values: String,
    rank2: Vec<RawRank2>,
    rank3: Vec<RawRank3>,
}

#[derive(Deserialize)]
struct RawRank2 {
    coxeter_type: String,
    label: TableLabel,
    angle: AngleFamily,
}

#[derive(Deserialize)]
struct RawRank3 {
    coxeter_type: String,
    labels: Rank3Labels,
    cellulation: String,
    angles: Vec<AngleFamily>,
}

fn raw() -> &'static RawTable {
    static DATA: OnceLock<RawTable> = OnceLock::new();
    DATA.get_or_init(|| serde_json::from_str(include_str!("../../data/polyhedra_table.json")).expect("valid table"))
}

/// Allowed values of the parameter `m`: `m = 5` or `m ≥ 7`.
pub fn m_allowed(m: u32) -> bool {
    debug_assert_eq!(raw().m_values, "m = 5 or m >= 7");
    m == 5 || m >= 7
}

pub fn even_polyhedra_table(rank: usize) -> Result<Vec<PolyhedronTableEntry>> {
    let t = raw();
    match rank {
        2 => Ok(t
            .rank2
            .iter()
            .map(|e| PolyhedronTableEntry {
                rank: 2,
                coxeter_type: e.coxeter_type.clone(),
                label: Some(e.label.clone()),
                labels: None,
                cellulation: None,
                angles: vec![e.angle.clone()],
            })
            .collect()),
        3 => Ok(t
            .rank3
            .iter()
            .map(|e| PolyhedronTableEntry {
                rank: 3,
                coxeter_type: e.coxeter_type.clone(),
                label: None,
                labels: Some(e.labels.clone()),
                cellulation: Some(e.cellulation.clone()),
                angles: e.angles.clone(),
            })
            .collect()),
        r => Err(Error::BadRank(r)),
    }
}

/// One concrete rank-3 polyhedron from the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableInstance {
    pub coxeter_type: String,
    /// `(m_ab, m_bc, m_ac)`.
    pub labels: (u32, u32, u32),
    pub cellulation: String,
    pub n: u32,
    #[serde(with = "triple_serde")]
    pub angles: AngleTriple,
}

mod triple_serde {
    use super::{parse_angle, AngleTriple};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(t: &AngleTriple, s: S) -> Result<S::Ok, S::Error> {
        [t.0, t.1, t.2].iter().map(|a| format!("{a}pi")).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<AngleTriple, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let p = |i: usize| {
            let text = v.get(i).ok_or_else(|| serde::de::Error::custom("three angles expected"))?;
            parse_angle(&text.replace("pi", "")).map_err(serde::de::Error::custom)
        };
        Ok((p(0)?, p(1)?, p(2)?))
    }
}

/// Every rank-3 entry instantiated for `n ≤ n_cap` (unbounded families) and
/// for each allowed `m` in `m_values` (the `A1xI2(m)` row).
pub fn instantiate_rank3(n_cap: u32, m_values: &[u32]) -> Vec<TableInstance> {
    let mut out = Vec::new();
    for e in &raw().rank3 {
        let ms: Vec<u32> = if e.cellulation.contains('m') {
            m_values.iter().copied().filter(|&m| m_allowed(m)).collect()
        } else {
            vec![0]
        };
        for m in ms {
            let cellulation = e.cellulation.replace("2m", &(2 * m).to_string());
            let coxeter_type = e.coxeter_type.replace("(m)", &format!("({m})"));
            let labels = (e.labels.ab.resolve(m), e.labels.bc.resolve(m), e.labels.ac.resolve(m));
            for fam in &e.angles {
                for n in fam.range(n_cap) {
                    let a = fam.instantiate(n).expect("table angles parse");
                    out.push(TableInstance {
                        coxeter_type: coxeter_type.clone(),
                        labels,
                        cellulation: cellulation.clone(),
                        n,
                        angles: (a[0], a[1], a[2]),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn rank3_rows() {
        let t = even_polyhedra_table(3).unwrap();
        let names: Vec<&str> = t.iter().map(|e| e.coxeter_type.as_str()).collect();
        assert_eq!(names, ["A1xA1xA1", "A1xA2", "A1xB2", "A1xG2", "A1xI2(m)", "A3", "B3", "H3"]);
        let a3 = &t[5];
        assert_eq!(a3.angles[0].pattern, ["pi/2", "pi/n", "pi/2"]);
        assert_eq!((a3.angles[0].n_min, a3.angles[0].n_max), (3, None));
        assert_eq!(a3.angles[1].pattern, ["pi/2", "pi/n", "pi/3"]);
        assert_eq!((a3.angles[1].n_min, a3.angles[1].n_max), (3, Some(5)));
        assert_eq!(t[1].angles[0].pattern, ["pi/2", "pi/3", "pi/n"]);
    }

    #[test]
    fn rank2_rows() {
        let t = even_polyhedra_table(2).unwrap();
        let a2 = t.iter().find(|e| e.coxeter_type == "A2").unwrap();
        assert_eq!(a2.angles[0].pattern, ["pi/n"]);
        assert_eq!(a2.angles[0].n_min, 2);
        assert_eq!(t[0].angles[0].n_min, 3);
        assert_eq!(even_polyhedra_table(4), Err(Error::BadRank(4)));
    }

    #[test]
    fn instances() {
        let all = instantiate_rank3(6, &[5, 6, 7]);
        let i2 = all.iter().filter(|i| i.coxeter_type.starts_with("A1xI2")).count();
        assert_eq!(i2, 2 * 3);
        assert!(all.iter().any(|i| i.cellulation == "bigon-14" && i.labels == (2, 7, 2)));
        let h3: Vec<_> = all.iter().filter(|i| i.coxeter_type == "H3").collect();
        assert_eq!(h3.len(), 4 + 3);
        assert_eq!(h3[0].angles, (Ratio::new(1, 2), Ratio::new(1, 3), Ratio::new(1, 2)));
        let json = serde_json::to_string(&h3[0]).unwrap();
        assert_eq!(serde_json::from_str::<TableInstance>(&json).unwrap(), *h3[0]);
    }
}
