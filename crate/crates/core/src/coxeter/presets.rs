//! Named Coxeter systems used throughout the tests, benches and the CLI.

use super::matrix::{CoxeterMatrix, Label};
use super::system::CoxeterSystem;
use crate::complexes::{self, LinkGraph};
use crate::error::{Error, Result};

fn named(matrix: CoxeterMatrix, names: &[&str]) -> CoxeterSystem {
    CoxeterSystem::with_names(matrix, names.iter().map(|s| s.to_string()).collect()).expect("preset is valid")
}

/// `I_2(m)` with generators `s, t`.
pub fn dihedral(m: u32) -> CoxeterSystem {
    named(CoxeterMatrix::linear(&[m]).expect("m >= 2"), &["s", "t"])
}

pub fn a2() -> CoxeterSystem {
    dihedral(3)
}

pub fn b2() -> CoxeterSystem {
    dihedral(4)
}

pub fn infinite_dihedral() -> CoxeterSystem {
    named(CoxeterMatrix::from_fn(2, |_, _| Label::Infinity).unwrap(), &["s", "t"])
}

pub fn a1() -> CoxeterSystem {
    named(CoxeterMatrix::new(vec![vec![Label::Finite(1)]]).unwrap(), &["s"])
}

pub fn a1_cubed() -> CoxeterSystem {
    named(CoxeterMatrix::linear(&[2, 2]).unwrap(), &["s", "t", "u"])
}

pub fn a3() -> CoxeterSystem {
    named(CoxeterMatrix::linear(&[3, 3]).unwrap(), &["s", "t", "u"])
}

pub fn b3() -> CoxeterSystem {
    named(CoxeterMatrix::linear(&[3, 4]).unwrap(), &["s", "t", "u"])
}

/// `s -3- t -5- u`.
pub fn h3() -> CoxeterSystem {
    named(CoxeterMatrix::linear(&[3, 5]).unwrap(), &["s", "t", "u"])
}

/// Affine `Ã2`: a triangle with every label 3.
pub fn affine_a2() -> CoxeterSystem {
    named(CoxeterMatrix::from_fn(3, |_, _| Label::Finite(3)).unwrap(), &["s", "t", "u"])
}

/// `D∞ × D∞`: `{s0, s1}` and `{s2, s3}` free pairs commuting with each other.
pub fn d_inf_squared() -> CoxeterSystem {
    CoxeterSystem::new(
        CoxeterMatrix::from_fn(4, |i, j| if i / 2 == j / 2 { Label::Infinity } else { Label::Finite(2) }).unwrap(),
    )
    .unwrap()
}

/// `W(k, L)`.
pub fn w_kl(k: u32, graph: &LinkGraph) -> Result<CoxeterSystem> {
    CoxeterSystem::new(complexes::matrix_from_graph(graph, k)?)
}

/// `W(4, C5)`.
pub fn w4_c5() -> CoxeterSystem {
    w_kl(4, &LinkGraph::cycle(5)).unwrap()
}

/// `W(6, K_{3,3})`, the Coxeter system of Bourdon's building `I_{6,3}`.
pub fn bourdon_k33() -> CoxeterSystem {
    complexes::bourdon_system(6, 3).unwrap()
}

/// `H̄3`: `H3` (`s -3- t -5- u`) with `s` and `t` tripled.
pub fn h3_bar() -> CoxeterSystem {
    complexes::inflate(&h3(), &[3, 3, 1]).unwrap()
}

/// Looks up a preset by name (case-insensitive).
pub fn by_name(name: &str) -> Result<CoxeterSystem> {
    let lower = name.to_ascii_lowercase();
    if let Some(m) = lower.strip_prefix("i2(").and_then(|r| r.strip_suffix(')')) {
        let m: u32 = m.parse().map_err(|_| Error::Parse(format!("bad dihedral label in `{name}`")))?;
        if m < 2 {
            return Err(Error::Parse(format!("dihedral label must be at least 2 in `{name}`")));
        }
        return Ok(dihedral(m));
    }
    Ok(match lower.as_str() {
        "a1" => a1(),
        "a2" => a2(),
        "b2" => b2(),
        "g2" => dihedral(6),
        "a1^3" | "a1xa1xa1" => a1_cubed(),
        "a3" => a3(),
        "b3" => b3(),
        "h3" => h3(),
        "affine-a2" | "a2~" => affine_a2(),
        "d-inf" | "i2(inf)" => infinite_dihedral(),
        "d-inf^2" => d_inf_squared(),
        "w4-c5" => w4_c5(),
        "w6-k33" | "bourdon-6-3" => bourdon_k33(),
        "h3-bar" => h3_bar(),
        _ => return Err(Error::Parse(format!("unknown preset `{name}`"))),
    })
}

/// Names accepted by [`by_name`], besides `I2(m)`.
pub const PRESET_NAMES: &[&str] =
    &["A1", "A2", "B2", "G2", "A1^3", "A3", "B3", "H3", "affine-A2", "D-inf", "D-inf^2", "W4-C5", "W6-K33", "H3-bar"];

/// The systems on which the wall calculus is checked pair by pair.
pub fn wall_catalog() -> Vec<(&'static str, CoxeterSystem)> {
    vec![
        ("A2", a2()),
        ("B2", b2()),
        ("I2(5)", dihedral(5)),
        ("A3", a3()),
        ("B3", b3()),
        ("H3", h3()),
        ("affine-A2", affine_a2()),
        ("W(4,C5)", w4_c5()),
        ("W(6,K33)", bourdon_k33()),
    ]
}
