//! The space-with-walls structure on `W`.
//!
//! A wall is a reflection `t`; its two half-spaces are
//! `A_t⁺ = {w : ℓ(w) < ℓ(tw)}` (containing `1`) and `A_t⁻` (containing `t`).
//! Internally a wall is keyed by the positive root of `t`, which determines
//! `t` and is determined by it, so wall equality is reflection equality.

use crate::coxeter::{CayleyBall, CoxeterSystem, GroupElement};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

#[derive(Clone, Debug)]
pub struct Wall {
    root: Vec<i128>,
    /// `(u, s)` with `t = u s u⁻¹`.
    witness: Option<(Vec<u8>, usize)>,
}

impl PartialEq for Wall {
    fn eq(&self, other: &Self) -> bool {
        self.root == other.root
    }
}

impl Eq for Wall {}

impl Hash for Wall {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.root.hash(state);
    }
}

impl Wall {
    fn from_root(system: &CoxeterSystem, mut root: Vec<i128>, witness: Option<(Vec<u8>, usize)>) -> Wall {
        if system.root_sign(&root) == Ordering::Less {
            for x in &mut root {
                *x = -*x;
            }
        }
        Wall { root, witness }
    }

    /// The wall of the generator `s`.
    pub fn of_generator(system: &CoxeterSystem, s: usize) -> Wall {
        Wall::from_root(system, system.column(&system.identity_matrix(), s), Some((Vec::new(), s)))
    }

    /// The wall `u s u⁻¹` crossed by the edge `u -- us`.
    pub fn from_edge(system: &CoxeterSystem, u: &GroupElement, s: usize) -> Wall {
        Wall::from_root(system, system.column(u.matrix(), s), Some((u.word().to_vec(), s)))
    }

    /// The wall of a reflection, or `None` if `t` is not a reflection.
    pub fn from_reflection(system: &CoxeterSystem, t: &GroupElement) -> Option<Wall> {
        // t = u s u⁻¹ has odd length; the middle letter gives the witness.
        let n = t.length();
        if n % 2 == 0 {
            return None;
        }
        let word = t.word_indices();
        let u = system.element(&word[..n / 2]).ok()?;
        let s = word[n / 2];
        let wall = Wall::from_edge(system, &u, s);
        (wall.reflection(system) == *t).then_some(wall)
    }

    /// Positive root in the simple-root basis (flattened `Z[c]` coefficients).
    pub fn root(&self) -> &[i128] {
        &self.root
    }

    pub fn witness(&self) -> Option<(&[u8], usize)> {
        self.witness.as_ref().map(|(u, s)| (u.as_slice(), *s))
    }

    /// The reflection `t` as a canonical group element.
    pub fn reflection(&self, system: &CoxeterSystem) -> GroupElement {
        let m = system.reflection_matrix(&self.root);
        system.element_from_matrix(&m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// The half-space containing the identity.
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub wall: Wall,
    pub sign: Side,
}

impl HalfSpace {
    pub fn contains(&self, system: &CoxeterSystem, w: &GroupElement) -> Result<bool> {
        Ok(side_of(system, &self.wall, w)? == self.sign)
    }
}

/// `Plus` iff `ℓ(w) < ℓ(tw)`, decided by the sign of `w⁻¹(β_t)`.
pub fn side_of(system: &CoxeterSystem, wall: &Wall, w: &GroupElement) -> Result<Side> {
    system.check(w)?;
    let v = system.apply(w.inverse_matrix(), &wall.root);
    Ok(match system.root_sign(&v) {
        Ordering::Greater => Side::Plus,
        _ => Side::Minus,
    })
}

/// Walls separating `x` and `y`: for a reduced word `s_1 … s_n` of `x⁻¹y`,
/// the reflections `x s_1 … s_{i-1} s_i s_{i-1} … s_1 x⁻¹`.
pub fn walls_separating(system: &CoxeterSystem, x: &GroupElement, y: &GroupElement) -> Result<Vec<Wall>> {
    system.check(x)?;
    system.check(y)?;
    let between = system.multiply(&system.invert(x)?, y)?;
    let mut prefix = x.matrix().to_vec();
    let mut prefix_word = x.word().to_vec();
    let mut walls = Vec::with_capacity(between.length());
    for &s in between.word() {
        let s = s as usize;
        walls.push(Wall::from_root(system, system.column(&prefix, s), Some((prefix_word.clone(), s))));
        system.right_mul_gen(&mut prefix, s);
        prefix_word.push(s as u8);
    }
    Ok(walls)
}

/// `M(x, y) = M(x, z) ⊔ M(z, y)`, tested through lengths.
pub fn is_between(system: &CoxeterSystem, z: &GroupElement, x: &GroupElement, y: &GroupElement) -> Result<bool> {
    let d = |a: &GroupElement, b: &GroupElement| -> Result<usize> {
        Ok(system.multiply(&system.invert(a)?, b)?.length())
    };
    Ok(d(x, z)? + d(z, y)? == d(x, y)?)
}

/// Set-level betweenness, used as a cross-check of [`is_between`].
pub fn is_between_by_walls(
    system: &CoxeterSystem,
    z: &GroupElement,
    x: &GroupElement,
    y: &GroupElement,
) -> Result<bool> {
    let xy: HashSet<Wall> = walls_separating(system, x, y)?.into_iter().collect();
    let xz = walls_separating(system, x, z)?;
    let zy = walls_separating(system, z, y)?;
    let mut union: HashSet<Wall> = HashSet::new();
    for w in xz.into_iter().chain(zy) {
        if !union.insert(w) {
            return Ok(false);
        }
    }
    Ok(union == xy)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub separating: usize,
    pub distance: usize,
    pub reason: String,
}

/// Report for axiom (M) on a ball: `{pairs_checked, max_separating, violations}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub pairs_checked: usize,
    pub max_separating: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_pair(system: &CoxeterSystem, x: &GroupElement, y: &GroupElement) -> (usize, Option<AxiomViolation>) {
    let distance = system.multiply(&system.invert(x).unwrap(), y).unwrap().length();
    let walls = walls_separating(system, x, y).unwrap();
    let distinct: HashSet<&Wall> = walls.iter().collect();
    let violation = |reason: &str| AxiomViolation {
        x: system.word_names(x.word()),
        y: system.word_names(y.word()),
        separating: distinct.len(),
        distance,
        reason: reason.to_string(),
    };
    let v = if distinct.is_empty() {
        Some(violation("no separating wall"))
    } else if distinct.len() != distance {
        Some(violation("card M(x,y) differs from l(x^-1 y)"))
    } else if walls.iter().any(|w| side_of(system, w, x).unwrap() == side_of(system, w, y).unwrap()) {
        Some(violation("listed wall does not separate"))
    } else {
        None
    };
    (distinct.len(), v)
}

/// Checks, for every pair `x ≠ y` of the ball, that the separating walls are
/// nonempty, pairwise distinct, really separate, and number `ℓ(x⁻¹y)`.
pub fn check_axiom_m(ball: &CayleyBall) -> AxiomReport {
    check_axiom_m_pairs(ball, None)
}

/// As [`check_axiom_m`], restricted to explicitly chosen index pairs.
pub fn check_axiom_m_pairs(ball: &CayleyBall, pairs: Option<&[(usize, usize)]>) -> AxiomReport {
    let system = ball.system();
    let elems = ball.elements();
    let results: Vec<(usize, usize, Vec<AxiomViolation>)> = match pairs {
        None => (0..elems.len())
            .into_par_iter()
            .map(|i| {
                let mut max = 0;
                let mut viol = Vec::new();
                for j in i + 1..elems.len() {
                    let (n, v) = check_pair(system, &elems[i], &elems[j]);
                    max = max.max(n);
                    viol.extend(v);
                }
                (elems.len() - i - 1, max, viol)
            })
            .collect(),
        Some(pairs) => pairs
            .par_iter()
            .map(|&(i, j)| {
                let (n, v) = check_pair(system, &elems[i], &elems[j]);
                (1, n, v.into_iter().collect())
            })
            .collect(),
    };
    let mut report = AxiomReport { pairs_checked: 0, max_separating: 0, violations: Vec::new() };
    for (count, max, viol) in results {
        report.pairs_checked += count;
        report.max_separating = report.max_separating.max(max);
        report.violations.extend(viol);
    }
    report
}

/// Result of walking a word from `1` and recording crossed walls.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicReport {
    pub geodesic: bool,
    /// First repetition `t_i = t_j` (1-based, `i < j`), if any.
    pub repeated: Option<(usize, usize)>,
}

/// A path is geodesic iff the walls it crosses are pairwise distinct.
///
/// The crossed walls are computed as reflection matrices
/// `t_i = P_{i-1} S_{s_i} P_{i-1}⁻¹` and compared as group elements, without
/// any root-sign decision, so this is independent of [`CoxeterSystem::is_reduced`].
pub fn is_geodesic_path(system: &CoxeterSystem, word: &[usize]) -> Result<GeodesicReport> {
    system.check_generators(word)?;
    let mut prefix = system.identity_matrix();
    let mut prefix_inv = system.identity_matrix();
    let mut seen: HashMap<Vec<i128>, usize> = HashMap::new();
    for (i, &s) in word.iter().enumerate() {
        let mut t = prefix.clone();
        system.right_mul_gen(&mut t, s);
        let t = system.mat_mul(&t, &prefix_inv);
        if let Some(&first) = seen.get(&t) {
            return Ok(GeodesicReport { geodesic: false, repeated: Some((first + 1, i + 1)) });
        }
        seen.insert(t, i);
        system.right_mul_gen(&mut prefix, s);
        system.left_mul_gen(&mut prefix_inv, s);
    }
    Ok(GeodesicReport { geodesic: true, repeated: None })
}

pub fn is_geodesic_path_str(system: &CoxeterSystem, word: &str) -> Result<GeodesicReport> {
    is_geodesic_path(system, &system.parse_word(word)?)
}

/// Graph recovered from betweenness on the radius-`(R-1)` core of a ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallspaceGraph {
    pub core_radius: usize,
    pub core_vertices: usize,
    /// Index pairs `(i, j)`, `i < j`, into the ball.
    pub edges: Vec<(usize, usize)>,
    pub matches_cayley: bool,
}

/// Edges `{x, y}` of the core such that no other ball vertex lies between
/// `x` and `y`, compared with the Cayley edges of the core.
pub fn wallspace_graph(ball: &CayleyBall) -> Result<WallspaceGraph> {
    let radius = ball.radius();
    if radius < 2 {
        return Err(Error::RadiusTooSmall { radius, min: 2 });
    }
    let system = ball.system();
    let core = ball.count_within(radius - 1);
    let elems = ball.elements();
    // dist[i][z] for i in the core, z anywhere in the ball.
    let inverses: Vec<GroupElement> = elems[..core].iter().map(|x| system.invert(x).unwrap()).collect();
    let dist: Vec<Vec<usize>> = inverses
        .par_iter()
        .map(|xi| elems.iter().map(|z| system.multiply(xi, z).unwrap().length()).collect())
        .collect();
    let mut edges = Vec::new();
    for x in 0..core {
        for y in x + 1..core {
            let dxy = dist[x][y];
            let has_between = (0..elems.len()).any(|z| z != x && z != y && dist[x][z] + dist[y][z] == dxy);
            if !has_between {
                edges.push((x, y));
            }
        }
    }
    let mut cayley: Vec<(usize, usize)> =
        ball.edges().iter().filter(|e| e.to < core).map(|e| (e.from.min(e.to), e.from.max(e.to))).collect();
    cayley.sort_unstable();
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    Ok(WallspaceGraph { core_radius: radius - 1, core_vertices: core, matches_cayley: sorted == cayley, edges })
}
