//! Coxeter cells: the face poset of the even polytope of a finite Coxeter
//! system, its parallelism classes, and the rank-2/3 table of even
//! hyperbolic Coxeter polyhedra.

mod andreev;
mod table;

pub use andreev::{
    andreev_check, andreev_check_str, cellulation, parse_angle, AndreevReport, Angle, AngleTriple, Cellulation, Tau,
};
pub use table::{even_polyhedra_table, instantiate_rank3, AngleFamily, PolyhedronTableEntry, TableInstance};

use crate::classification::{classify_system, mask_members};
use crate::coxeter::{enumerate_group, CayleyBall, CoxeterSystem, GroupElement, DEFAULT_MAX_VERTICES};
use crate::error::{Error, Result};
use crate::walls::Wall;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// A face `wW_T`, stored as (minimal coset representative, `T`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    /// Index of the representative in [`CoxeterCell::group`].
    pub rep: usize,
    pub subset: u64,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.subset.count_ones() as usize
    }
}

#[derive(Clone, Debug)]
pub struct CoxeterCell {
    group: CayleyBall,
    faces: Vec<Face>,
    index: HashMap<Face, usize>,
    /// `(i, j)`: face `j` covers face `i` (one dimension up).
    covers: Vec<(usize, usize)>,
}

/// Builds the face poset of the Coxeter cell of a finite system.
pub fn coxeter_cell(system: &CoxeterSystem) -> Result<CoxeterCell> {
    if !classify_system(system).is_finite() {
        return Err(Error::NotFinite);
    }
    if system.rank() > 16 {
        return Err(Error::ResourceLimit { what: "rank for Coxeter cells", limit: 16 });
    }
    let group = enumerate_group(system, DEFAULT_MAX_VERTICES)?;
    let rank = system.rank();
    let mut subsets: Vec<u64> = (0..1u64 << rank).collect();
    subsets.sort_by_key(|&t| (t.count_ones(), mask_members(t)));
    let descents: Vec<u64> = (0..group.len())
        .map(|i| (0..rank).filter(|&s| group.is_right_descent(i, s)).fold(0, |m, s| m | 1 << s))
        .collect();
    let mut faces = Vec::new();
    for &t in &subsets {
        for (i, &d) in descents.iter().enumerate() {
            if d & t == 0 {
                faces.push(Face { rep: i, subset: t });
            }
        }
    }
    let index: HashMap<Face, usize> = faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut covers = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        for s in 0..rank {
            if f.subset >> s & 1 == 0 {
                let t = f.subset | 1 << s;
                let up = Face { rep: group.coset_min_rep(f.rep, t), subset: t };
                covers.push((i, index[&up]));
            }
        }
    }
    covers.sort_unstable();
    Ok(CoxeterCell { group, faces, index, covers })
}

impl CoxeterCell {
    pub fn system(&self) -> &CoxeterSystem {
        self.group.system()
    }

    /// The whole group, in ShortLex order.
    pub fn group(&self) -> &CayleyBall {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.system().rank()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn face_index(&self, face: &Face) -> Option<usize> {
        self.index.get(face).copied()
    }

    /// The face of type `T` through vertex `i`.
    pub fn face_through(&self, i: usize, subset: u64) -> Face {
        Face { rep: self.group.coset_min_rep(i, subset), subset }
    }

    /// `f_k` for `k = 0..=rank`.
    pub fn face_vector(&self) -> Vec<usize> {
        let mut v = vec![0; self.rank() + 1];
        for f in &self.faces {
            v[f.dim()] += 1;
        }
        v
    }

    /// Number of 2-faces by polygon size `2 m_T`.
    pub fn polygon_sizes(&self) -> BTreeMap<u32, usize> {
        let sys = self.system();
        let mut out = BTreeMap::new();
        for f in self.faces.iter().filter(|f| f.dim() == 2) {
            let m = mask_members(f.subset);
            let sides = 2 * sys.label(m[0], m[1]).finite().expect("finite system");
            *out.entry(sides).or_insert(0) += 1;
        }
        out
    }

    /// `Σ_{k < rank} (-1)^k f_k`, the Euler characteristic of the boundary.
    pub fn boundary_euler_characteristic(&self) -> i64 {
        self.face_vector()[..self.rank()].iter().enumerate().map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }

    /// `(u, T) ≤ (v, T')` iff `T ⊆ T'` and `u ∈ vW_{T'}`.
    pub fn is_subface(&self, a: &Face, b: &Face) -> bool {
        a.subset & !b.subset == 0 && self.group.coset_min_rep(a.rep, b.subset) == b.rep
    }

    pub fn to_export(&self) -> FaceExport {
        let sys = self.system();
        FaceExport {
            faces: self
                .faces
                .iter()
                .map(|f| ExportFace {
                    rep: sys.word_names(self.group.element(f.rep).word()),
                    subset: mask_members(f.subset).iter().map(|&s| sys.name(s).to_string()).collect(),
                    dim: f.dim(),
                })
                .collect(),
            covers: self.covers.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_export()).expect("serializable")
    }
}

/// `{faces: [{rep, T, dim}], covers: [[i, j]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceExport {
    pub faces: Vec<ExportFace>,
    pub covers: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportFace {
    pub rep: Vec<String>,
    #[serde(rename = "T")]
    pub subset: Vec<String>,
    pub dim: usize,
}

/// Edges of the cell sharing one wall.
#[derive(Clone, Debug)]
pub struct ParallelClass {
    pub wall: Wall,
    /// Indices into `cell.group().edges()`.
    pub edges: Vec<usize>,
}

impl ParallelClass {
    pub fn reflection(&self, cell: &CoxeterCell) -> GroupElement {
        self.wall.reflection(cell.system())
    }
}

/// Groups the edges of the cell by their wall, in order of first appearance.
pub fn parallel_classes(cell: &CoxeterCell) -> Vec<ParallelClass> {
    let mut order: Vec<ParallelClass> = Vec::new();
    let mut lookup: HashMap<Wall, usize> = HashMap::new();
    for (i, e) in cell.group.edges().iter().enumerate() {
        let w = cell.group.edge_wall(e);
        match lookup.get(&w) {
            Some(&k) => order[k].edges.push(i),
            None => {
                lookup.insert(w.clone(), order.len());
                order.push(ParallelClass { wall: w, edges: vec![i] });
            }
        }
    }
    order
}

/// The reflection of a class swaps the endpoints of each of its edges:
/// `t · u = u · s` for the edge `u -- us`.
pub fn verify_parallel_class(cell: &CoxeterCell, class: &ParallelClass) -> bool {
    let sys = cell.system();
    let t = class.reflection(cell);
    class.edges.iter().all(|&i| {
        let e = cell.group.edges()[i];
        let u = cell.group.element(e.from);
        let us = cell.group.element(e.to);
        sys.multiply(&t, u).ok().as_ref() == Some(us) && sys.multiply(&t, us).ok().as_ref() == Some(u)
    })
}

/// Each vertex link is the full simplex on `S`: for every vertex `w` and
/// every `T ⊆ S` there is exactly one face of dimension `|T|` at `w` whose
/// edges at `w` are the edges `w -- wt`, `t ∈ T`.
pub fn verify_simple(cell: &CoxeterCell) -> bool {
    let rank = cell.rank();
    let g = &cell.group;
    (0..g.len()).all(|w| {
        let edge_types = |face: &Face| -> u64 {
            (0..rank)
                .filter(|&s| g.neighbor(w, s).is_some_and(|ws| g.coset_min_rep(ws, face.subset) == face.rep))
                .fold(0, |m, s| m | 1 << s)
        };
        let mut seen = std::collections::HashSet::new();
        (0..1u64 << rank).all(|t| {
            let face = cell.face_through(w, t);
            cell.face_index(&face).is_some() && seen.insert(face) && edge_types(&face) == t
        })
    })
}
