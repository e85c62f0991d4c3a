use super::element::GroupElement;
use super::system::CoxeterSystem;
use crate::error::{Error, Result};
use crate::walls::Wall;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

/// Default bound on the number of vertices of an enumerated ball.
pub const DEFAULT_MAX_VERTICES: usize = 2_000_000;

/// Largest ball exported as DOT.
pub const DOT_MAX_VERTICES: usize = 10_000;

/// Cayley-graph edge `u -- u·s`, stored from the shorter endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub generator: usize,
    pub to: usize,
}

/// The ball `{w : ℓ(w) ≤ radius}` of the Cayley graph, in ShortLex order.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    system: CoxeterSystem,
    radius: usize,
    elements: Vec<GroupElement>,
    level_starts: Vec<usize>,
    /// `neighbors[i * rank + s]` is the index of `elements[i] · s`, if in the ball.
    neighbors: Vec<Option<u32>>,
    edges: Vec<Edge>,
    index: HashMap<Vec<u8>, usize>,
}

pub fn enumerate_ball(system: &CoxeterSystem, radius: usize) -> Result<CayleyBall> {
    enumerate_ball_with_limit(system, radius, DEFAULT_MAX_VERTICES)
}

/// Breadth-first enumeration by length. Each new element `w·s` keeps the
/// lexicographically least candidate word; since parents are visited in
/// ShortLex order and generators in increasing order, that is the first one
/// found, and each level comes out sorted.
pub fn enumerate_ball_with_limit(system: &CoxeterSystem, radius: usize, max_vertices: usize) -> Result<CayleyBall> {
    let rank = system.rank();
    let mut elements = vec![system.identity()];
    let mut level_starts = vec![0usize];
    let mut neighbors: Vec<Option<u32>> = vec![None; rank];
    let mut edges = Vec::new();

    let mut level = 0;
    while level < radius {
        let start = level_starts[level];
        let end = elements.len();
        let mut seen: HashMap<Vec<i128>, usize> = HashMap::new();
        for i in start..end {
            for s in 0..rank {
                if system.column_sign(elements[i].matrix(), s) != Ordering::Greater {
                    continue;
                }
                let mut matrix = elements[i].matrix().to_vec();
                system.right_mul_gen(&mut matrix, s);
                let j = match seen.get(&matrix) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= max_vertices {
                            return Err(Error::ResourceLimit { what: "ball vertices", limit: max_vertices });
                        }
                        let mut inverse = elements[i].inverse_matrix().to_vec();
                        system.left_mul_gen(&mut inverse, s);
                        let mut word = elements[i].word().to_vec();
                        word.push(s as u8);
                        let j = elements.len();
                        seen.insert(matrix.clone(), j);
                        elements.push(system.element_from_parts(word, matrix, inverse));
                        neighbors.extend(std::iter::repeat(None).take(rank));
                        j
                    }
                };
                neighbors[i * rank + s] = Some(j as u32);
                neighbors[j * rank + s] = Some(i as u32);
                edges.push(Edge { from: i, generator: s, to: j });
            }
        }
        if elements.len() == end {
            break;
        }
        level_starts.push(end);
        level += 1;
    }
    let index = elements.iter().enumerate().map(|(i, e)| (e.word().to_vec(), i)).collect();
    Ok(CayleyBall { system: system.clone(), radius, elements, level_starts, neighbors, edges, index })
}

/// Every element of a finite group; `ResourceLimit` if it has more than
/// `max_vertices` elements (or is infinite).
pub fn enumerate_group(system: &CoxeterSystem, max_vertices: usize) -> Result<CayleyBall> {
    enumerate_ball_with_limit(system, usize::MAX, max_vertices)
}

impl CayleyBall {
    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Largest length actually present (smaller than `radius` for small finite groups).
    pub fn max_length(&self) -> usize {
        self.level_starts.len() - 1
    }

    /// Indices of the elements of length exactly `k`.
    pub fn level(&self, k: usize) -> std::ops::Range<usize> {
        if k >= self.level_starts.len() {
            return self.len()..self.len();
        }
        let end = self.level_starts.get(k + 1).copied().unwrap_or(self.len());
        self.level_starts[k]..end
    }

    /// Number of elements of length at most `r`.
    pub fn count_within(&self, r: usize) -> usize {
        self.level(r.min(self.max_length())).end
    }

    pub fn index_of(&self, e: &GroupElement) -> Option<usize> {
        if self.system.check(e).is_err() {
            return None;
        }
        self.index.get(e.word()).copied()
    }

    pub fn index_of_word(&self, word: &[u8]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Index of `elements[i] · s`, when it lies in the ball.
    pub fn neighbor(&self, i: usize, s: usize) -> Option<usize> {
        self.neighbors[i * self.system.rank() + s].map(|j| j as usize)
    }

    pub fn is_right_descent(&self, i: usize, s: usize) -> bool {
        self.system.is_right_descent(&self.elements[i], s)
    }

    /// Wall crossed by an edge: the reflection `u s u⁻¹`.
    pub fn edge_wall(&self, edge: &Edge) -> Wall {
        let u = &self.elements[edge.from];
        Wall::from_edge(&self.system, u, edge.generator)
    }

    /// Minimal representative of the coset `elements[i] · W_T`, obtained by
    /// stripping right descents in `T`. Each step shortens the element, so
    /// the walk stays inside the ball.
    pub fn coset_min_rep(&self, mut i: usize, mask: u64) -> usize {
        'outer: loop {
            for s in 0..self.system.rank() {
                if mask >> s & 1 == 1 && self.is_right_descent(i, s) {
                    i = self.neighbor(i, s).expect("shorter neighbour lies in the ball");
                    continue 'outer;
                }
            }
            return i;
        }
    }

    pub fn to_export(&self) -> BallExport {
        let sys = &self.system;
        BallExport {
            radius: self.radius,
            vertices: self.elements.iter().map(|e| sys.word_names(e.word())).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| (sys.word_names(self.elements[e.from].word()), sys.name(e.generator).to_string()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_export()).expect("serializable")
    }

    /// Graphviz rendering; vertex label = normal word, edge label = generator.
    pub fn to_dot(&self) -> Result<String> {
        if self.len() > DOT_MAX_VERTICES {
            return Err(Error::ResourceLimit { what: "DOT vertices", limit: DOT_MAX_VERTICES });
        }
        let sys = &self.system;
        let mut out = String::new();
        writeln!(out, "graph cayley_ball {{").unwrap();
        writeln!(out, "  // radius {}", self.radius).unwrap();
        for (i, e) in self.elements.iter().enumerate() {
            writeln!(out, "  v{i} [label=\"{}\"];", sys.format_word(e.word())).unwrap();
        }
        for e in &self.edges {
            writeln!(out, "  v{} -- v{} [label=\"{}\"];", e.from, e.to, sys.name(e.generator)).unwrap();
        }
        writeln!(out, "}}").unwrap();
        Ok(out)
    }
}

/// JSON export: vertices as normal words, edges as `[word, generator]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallExport {
    pub radius: usize,
    pub vertices: Vec<Vec<String>>,
    pub edges: Vec<(Vec<String>, String)>,
}
