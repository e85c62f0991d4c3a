//! The three cycle conditions on the barycentric subdivision `τ` of a
//! cellulation of the 2-sphere, with exact angles in multiples of `π`.

use crate::error::{Error, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

/// An angle as a rational multiple of `π`.
pub type Angle = Ratio<i64>;

/// Angles `(α_a, α_b, α_c)` attached to the generators `a, b, c`.
pub type AngleTriple = (Angle, Angle, Angle);

/// A cellulation of the 2-sphere: vertices `0..vertices`, edges as vertex
/// pairs, faces as cyclic lists of edge indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cellulation {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<Vec<usize>>,
    /// Generator index (`0 = a, 1 = b, 2 = c`) carried by τ-edges of types
    /// vertex–edge, vertex–face and edge–face.
    #[serde(skip)]
    pub generators: [u8; 3],
}

fn polyhedra() -> &'static BTreeMap<String, Cellulation> {
    static DATA: OnceLock<BTreeMap<String, Cellulation>> = OnceLock::new();
    DATA.get_or_init(|| serde_json::from_str(include_str!("../../data/cellulations.json")).expect("valid data"))
}

/// `k` bigons between two poles `N = 0`, `S = 1`; face `i` is bounded by
/// meridians `i` and `i + 1`.
fn bigons(k: usize) -> Cellulation {
    Cellulation {
        vertices: 2,
        edges: vec![(0, 1); k],
        faces: (0..k).map(|i| vec![i, (i + 1) % k]).collect(),
        // Reflection in the equator is the isolated generator a.
        generators: [1, 2, 0],
    }
}

/// Resolves a catalog id: `bigon-k` (`k` even, `k ≥ 4`), `tetrahedron`,
/// `cube` or `dodecahedron`.
pub fn cellulation(id: &str) -> Result<Cellulation> {
    if let Some(k) = id.strip_prefix("bigon-") {
        return match k.parse::<usize>() {
            Ok(k) if k >= 4 && k % 2 == 0 => Ok(bigons(k)),
            _ => Err(Error::UnknownCellulation(id.to_string())),
        };
    }
    let mut c = polyhedra().get(id).cloned().ok_or_else(|| Error::UnknownCellulation(id.to_string()))?;
    c.generators = [0, 1, 2];
    Ok(c)
}

/// The barycentric subdivision: vertices are cells of `Z`, typed 0, 1, 2 by
/// dimension; edges join incident cells of different dimensions.
#[derive(Clone, Debug)]
pub struct Tau {
    /// `(dimension, index)` of each τ-vertex.
    pub cells: Vec<(u8, usize)>,
    adj: Vec<BTreeSet<usize>>,
    /// Generator carried by each τ-edge `(u, v)`, `u < v`.
    edge_gen: HashMap<(usize, usize), u8>,
    triangles: BTreeSet<[usize; 3]>,
}

impl Tau {
    pub fn new(c: &Cellulation) -> Self {
        let nv = c.vertices;
        let ne = c.edges.len();
        let nf = c.faces.len();
        let mut cells: Vec<(u8, usize)> = (0..nv).map(|i| (0, i)).collect();
        cells.extend((0..ne).map(|i| (1, i)));
        cells.extend((0..nf).map(|i| (2, i)));
        let ev = |e: usize| nv + e;
        let fv = |f: usize| nv + ne + f;
        let mut adj = vec![BTreeSet::new(); cells.len()];
        let mut edge_gen = HashMap::new();
        let mut link = |a: usize, b: usize, g: u8, adj: &mut Vec<BTreeSet<usize>>| {
            adj[a].insert(b);
            adj[b].insert(a);
            edge_gen.insert((a.min(b), a.max(b)), g);
        };
        for (e, &(x, y)) in c.edges.iter().enumerate() {
            link(x, ev(e), c.generators[0], &mut adj);
            link(y, ev(e), c.generators[0], &mut adj);
        }
        let mut triangles = BTreeSet::new();
        for (f, edges) in c.faces.iter().enumerate() {
            for &e in edges {
                link(ev(e), fv(f), c.generators[2], &mut adj);
                for v in [c.edges[e].0, c.edges[e].1] {
                    link(v, fv(f), c.generators[1], &mut adj);
                    let mut t = [v, ev(e), fv(f)];
                    t.sort_unstable();
                    triangles.insert(t);
                }
            }
        }
        Tau { cells, adj, edge_gen, triangles }
    }

    pub fn vertex_count(&self) -> usize {
        self.cells.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_gen.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_triangle(&self, a: usize, b: usize, c: usize) -> bool {
        let mut t = [a, b, c];
        t.sort_unstable();
        self.triangles.contains(&t)
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    fn generator(&self, a: usize, b: usize) -> u8 {
        self.edge_gen[&(a.min(b), a.max(b))]
    }

    /// Simple 3-cycles, each listed once with its least vertex first.
    pub fn three_cycles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 0..self.vertex_count() {
            for &b in self.adj[a].range(a + 1..) {
                for &c in self.adj[b].range(b + 1..) {
                    if self.adjacent(a, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Simple 4-cycles `a b c d`, each listed once: `a` least, `b < d`.
    pub fn four_cycles(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for a in 0..self.vertex_count() {
            for &b in self.adj[a].range(a + 1..) {
                for &c in self.adj[b].range(a + 1..) {
                    if c == b {
                        continue;
                    }
                    for &d in self.adj[c].range(b + 1..) {
                        if d != c && self.adjacent(d, a) {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    }

    /// The 4-cycle is the boundary of two triangles glued along a diagonal.
    pub fn bounds_two_triangles(&self, q: &[usize; 4]) -> bool {
        let [a, b, c, d] = *q;
        (self.adjacent(a, c) && self.is_triangle(a, b, c) && self.is_triangle(a, c, d))
            || (self.adjacent(b, d) && self.is_triangle(b, c, d) && self.is_triangle(b, d, a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AndreevReport {
    pub passed: bool,
    /// 1, 2 or 3 for the first violated condition.
    pub condition: Option<u8>,
    /// The violating cycle, as `dim:index` labels of τ-vertices.
    pub cycle: Option<Vec<String>>,
    /// Angle sum of the violating cycle as a multiple of `π`, e.g. `2` or `1/2`.
    pub sum: Option<String>,
}

fn check_angle(a: Angle) -> Result<()> {
    if a <= Ratio::from_integer(0) || a > Ratio::new(1, 2) {
        return Err(Error::AngleRange(format!("{a}π")));
    }
    Ok(())
}

/// Evaluates, in order, (1) 3-cycles of `τ` not bounding a triangle have
/// angle sum `< π`, (2) 3-cycles bounding a triangle have sum `> π`, (3)
/// 4-cycles not bounding two triangles have sum `< 2π`, and reports the
/// first violation.
pub fn andreev_check(id: &str, angles: AngleTriple) -> Result<AndreevReport> {
    let c = cellulation(id)?;
    for a in [angles.0, angles.1, angles.2] {
        check_angle(a)?;
    }
    let tau = Tau::new(&c);
    let value = [angles.0, angles.1, angles.2];
    let alpha = |a: usize, b: usize| value[tau.generator(a, b) as usize];
    let pi = Ratio::from_integer(1);
    let label = |v: usize| {
        let (d, i) = tau.cells[v];
        format!("{}:{i}", ["v", "e", "f"][d as usize])
    };
    let fail = |cond: u8, cycle: &[usize], sum: Angle| AndreevReport {
        passed: false,
        condition: Some(cond),
        cycle: Some(cycle.iter().map(|&v| label(v)).collect()),
        sum: Some(sum.to_string()),
    };
    let threes = tau.three_cycles();
    let sum3 = |t: &[usize; 3]| alpha(t[0], t[1]) + alpha(t[1], t[2]) + alpha(t[2], t[0]);
    for t in threes.iter().filter(|t| !tau.is_triangle(t[0], t[1], t[2])) {
        if sum3(t) >= pi {
            return Ok(fail(1, t, sum3(t)));
        }
    }
    for t in threes.iter().filter(|t| tau.is_triangle(t[0], t[1], t[2])) {
        if sum3(t) <= pi {
            return Ok(fail(2, t, sum3(t)));
        }
    }
    for q in tau.four_cycles() {
        if tau.bounds_two_triangles(&q) {
            continue;
        }
        let s = alpha(q[0], q[1]) + alpha(q[1], q[2]) + alpha(q[2], q[3]) + alpha(q[3], q[0]);
        if s >= pi + pi {
            return Ok(fail(3, &q, s));
        }
    }
    Ok(AndreevReport { passed: true, condition: None, cycle: None, sum: None })
}

/// Parses `pi/n`, `k*pi/n` or `k/n` (all meaning multiples of `π`).
pub fn parse_angle(text: &str) -> Result<Angle> {
    let t = text.trim().replace(' ', "");
    let bad = || Error::Parse(format!("bad angle `{text}`"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.to_string(), d.parse::<i64>().map_err(|_| bad())?),
        None => (t.clone(), 1),
    };
    let num = num.trim_end_matches("*pi").trim_end_matches("pi");
    let num: i64 = if num.is_empty() { 1 } else { num.parse().map_err(|_| bad())? };
    if den == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(num, den))
}

/// [`andreev_check`] with angles given as strings such as `pi/3`.
pub fn andreev_check_str(id: &str, angles: [&str; 3]) -> Result<AndreevReport> {
    andreev_check(id, (parse_angle(angles[0])?, parse_angle(angles[1])?, parse_angle(angles[2])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi_over(n: i64) -> Angle {
        Ratio::new(1, n)
    }

    #[test]
    fn tau_sizes() {
        for (id, v, e, f) in [("tetrahedron", 4, 6, 4), ("cube", 8, 12, 6), ("dodecahedron", 20, 30, 12)] {
            let tau = Tau::new(&cellulation(id).unwrap());
            assert_eq!(tau.vertex_count(), v + e + f);
            assert_eq!(tau.triangle_count(), 4 * e);
            // Euler characteristic of the sphere.
            assert_eq!(tau.vertex_count() as i64 - tau.edge_count() as i64 + tau.triangle_count() as i64, 2);
        }
        let tau = Tau::new(&cellulation("bigon-6").unwrap());
        assert_eq!((tau.vertex_count(), tau.triangle_count()), (14, 24));
    }

    #[test]
    fn every_three_cycle_bounds_a_triangle() {
        for id in ["tetrahedron", "cube", "dodecahedron", "bigon-4", "bigon-10"] {
            let tau = Tau::new(&cellulation(id).unwrap());
            assert!(tau.three_cycles().iter().all(|t| tau.is_triangle(t[0], t[1], t[2])), "{id}");
        }
    }

    #[test]
    fn negative_controls() {
        let r = andreev_check("cube", (pi_over(2), pi_over(2), pi_over(2))).unwrap();
        assert_eq!(r.condition, Some(3));
        assert_eq!(r.sum.as_deref(), Some("2"));
        let r = andreev_check("dodecahedron", (pi_over(2), pi_over(6), pi_over(3))).unwrap();
        assert_eq!(r.condition, Some(2));
        assert_eq!(r.sum.as_deref(), Some("1"));
    }

    #[test]
    fn positive_examples() {
        assert!(andreev_check("tetrahedron", (pi_over(2), pi_over(3), pi_over(2))).unwrap().passed);
        assert!(andreev_check("bigon-8", (pi_over(2), pi_over(3), pi_over(4))).unwrap().passed);
        assert!(andreev_check_str("cube", ["pi/2", "pi/4", "pi/3"]).unwrap().passed);
    }

    #[test]
    fn errors() {
        assert_eq!(andreev_check("octahedron", (pi_over(2), pi_over(2), pi_over(2))).unwrap_err(),
            Error::UnknownCellulation("octahedron".into()));
        assert!(matches!(cellulation("bigon-7"), Err(Error::UnknownCellulation(_))));
        assert!(matches!(cellulation("bigon-2"), Err(Error::UnknownCellulation(_))));
        assert!(matches!(andreev_check("cube", (Ratio::new(2, 3), pi_over(2), pi_over(2))), Err(Error::AngleRange(_))));
        assert!(matches!(andreev_check("cube", (Ratio::from_integer(0), pi_over(2), pi_over(2))), Err(Error::AngleRange(_))));
    }

    #[test]
    fn angle_parsing() {
        assert_eq!(parse_angle("pi/3").unwrap(), pi_over(3));
        assert_eq!(parse_angle("2pi/5").unwrap(), Ratio::new(2, 5));
        assert_eq!(parse_angle("1/4").unwrap(), pi_over(4));
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("x").is_err());
    }
}
