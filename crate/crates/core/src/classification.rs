//! Diagram classification of special subgroups, the nerve, Moussong's
//! hyperbolicity criterion, diagram automorphisms and rigidity.

use crate::coxeter::{CoxeterMatrix, CoxeterSystem, Label};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

// ----- catalog data -----

#[derive(Debug, Deserialize)]
struct Catalog {
    finite: Vec<FiniteEntry>,
    affine: Vec<AffineEntry>,
}

#[derive(Debug, Deserialize)]
struct FiniteEntry {
    family: String,
    min_rank: usize,
    max_rank: Option<usize>,
    order: OrderFormula,
}

#[derive(Debug, Deserialize)]
struct AffineEntry {
    family: String,
    min_n: usize,
    max_n: Option<usize>,
}

#[derive(Debug, Deserialize)]
enum OrderFormula {
    /// `(n + shift)! · 2^(n · two_power_per_rank + two_power_offset)`.
    Factorial { shift: usize, two_power_per_rank: u32, two_power_offset: i32 },
    Constant(u128),
    /// `2m` for `I2(m)`.
    Dihedral,
}

fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| serde_json::from_str(include_str!("../data/catalog.json")).expect("catalog.json is valid"))
}

fn in_range(n: usize, min: usize, max: Option<usize>) -> bool {
    n >= min && max.map_or(true, |m| n <= m)
}

// ----- special subsets -----

/// A subset `T ⊆ S` with the induced Coxeter matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialSubset {
    members: Vec<usize>,
    matrix: CoxeterMatrix,
}

impl SpecialSubset {
    pub fn new(system: &CoxeterSystem, members: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if let Some(&bad) = set.iter().find(|&&s| s >= system.rank()) {
            return Err(Error::UnknownGenerator(format!("index {bad}")));
        }
        let members: Vec<usize> = set.into_iter().collect();
        let matrix = system.matrix().restrict(&members);
        Ok(SpecialSubset { members, matrix })
    }

    pub fn from_mask(system: &CoxeterSystem, mask: u64) -> Self {
        let members: Vec<usize> = (0..system.rank()).filter(|&s| mask >> s & 1 == 1).collect();
        Self::new(system, &members).expect("mask within rank")
    }

    pub fn whole(system: &CoxeterSystem) -> Self {
        Self::new(system, &(0..system.rank()).collect::<Vec<_>>()).expect("all generators")
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &s| m | 1 << s)
    }
}

// ----- diagram types -----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    Finite,
    Affine,
    Indefinite,
}

/// One connected component of a Coxeter diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// Generator indices of the parent system.
    pub members: Vec<usize>,
    pub tag: TypeTag,
    /// Catalog name such as `A3`, `I2(7)` or `~A2`; absent for indefinite components.
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramType {
    pub tag: TypeTag,
    /// Component names joined by `x`; `1` for the empty diagram.
    pub name: String,
    pub components: Vec<Component>,
}

impl DiagramType {
    pub fn is_finite(&self) -> bool {
        self.tag == TypeTag::Finite
    }

    pub fn is_affine(&self) -> bool {
        self.tag == TypeTag::Affine
    }

    /// Irreducible affine: a single affine component.
    pub fn is_irreducible_affine(&self) -> bool {
        self.components.len() == 1 && self.tag == TypeTag::Affine
    }
}

enum Shape {
    Finite { family: &'static str, rank: usize, label: Option<u32> },
    Affine { family: &'static str, n: usize },
    Indefinite,
}

fn finite(family: &'static str, rank: usize) -> Shape {
    Shape::Finite { family, rank, label: None }
}

fn affine(family: &'static str, n: usize) -> Shape {
    Shape::Affine { family, n }
}

fn path_labels(m: &CoxeterMatrix, adj: &[Vec<usize>], from: usize, first: usize) -> (Vec<usize>, Vec<u32>) {
    let mut verts = vec![first];
    let mut labels = vec![m.get(from, first).finite().unwrap()];
    let (mut prev, mut cur) = (from, first);
    while adj[cur].len() == 2 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        labels.push(m.get(cur, next).finite().unwrap());
        verts.push(next);
        prev = cur;
        cur = next;
    }
    (verts, labels)
}

fn oriented(labels: &[u32], pattern: &[u32]) -> bool {
    labels == pattern || labels.iter().rev().eq(pattern.iter())
}

/// Shape of a connected diagram.
fn shape_of(m: &CoxeterMatrix) -> Shape {
    let n = m.rank();
    if n == 1 {
        return finite("A", 1);
    }
    let mut adj = vec![Vec::new(); n];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let l = m.get(i, j);
            if l != Label::Finite(2) {
                adj[i].push(j);
                adj[j].push(i);
                edges.push(l);
            }
        }
    }
    if n == 2 {
        return match m.get(0, 1) {
            Label::Infinity => affine("A", 1),
            Label::Finite(3) => finite("A", 2),
            Label::Finite(4) => finite("B", 2),
            Label::Finite(k) => Shape::Finite { family: "I2", rank: 2, label: Some(k) },
        };
    }
    if edges.contains(&Label::Infinity) {
        return Shape::Indefinite;
    }
    let all3 = edges.iter().all(|&l| l == Label::Finite(3));
    if edges.len() == n {
        return if all3 && adj.iter().all(|a| a.len() == 2) { affine("A", n - 1) } else { Shape::Indefinite };
    }
    if edges.len() != n - 1 {
        return Shape::Indefinite;
    }
    let branches: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    match branches.len() {
        0 => {
            let end = (0..n).find(|&v| adj[v].len() == 1).unwrap();
            let (_, labels) = path_labels(m, &adj, end, adj[end][0]);
            let threes = |ls: &[u32]| ls.iter().all(|&l| l == 3);
            if threes(&labels) {
                finite("A", n)
            } else if oriented(&labels, &[3, 4, 3]) {
                finite("F", 4)
            } else if oriented(&labels, &[5, 3]) {
                finite("H", 3)
            } else if oriented(&labels, &[5, 3, 3]) {
                finite("H", 4)
            } else if oriented(&labels, &[3, 3, 4, 3]) {
                affine("F", 4)
            } else if oriented(&labels, &[6, 3]) {
                affine("G", 2)
            } else if labels[0] == 4 && labels[n - 2] == 4 && threes(&labels[1..n - 2]) {
                affine("C", n - 1)
            } else if (labels[0] == 4 && threes(&labels[1..])) || (labels[n - 2] == 4 && threes(&labels[..n - 2])) {
                finite("B", n)
            } else {
                Shape::Indefinite
            }
        }
        1 => {
            let b = branches[0];
            if adj[b].len() == 4 {
                return if n == 5 && all3 { affine("D", 4) } else { Shape::Indefinite };
            }
            if adj[b].len() > 4 {
                return Shape::Indefinite;
            }
            let mut arms: Vec<Vec<u32>> = adj[b].iter().map(|&v| path_labels(m, &adj, b, v).1).collect();
            arms.sort_by_key(|a| a.len());
            let lens = (arms[0].len(), arms[1].len(), arms[2].len());
            if all3 {
                return match lens {
                    (1, 1, k) => finite("D", k + 3),
                    (1, 2, 2) => finite("E", 6),
                    (1, 2, 3) => finite("E", 7),
                    (1, 2, 4) => finite("E", 8),
                    (2, 2, 2) => affine("E", 6),
                    (1, 3, 3) => affine("E", 7),
                    (1, 2, 5) => affine("E", 8),
                    _ => Shape::Indefinite,
                };
            }
            // B̃_n: arms (1, 1, n - 2) with a single 4 closing the long arm.
            let fours = edges.iter().filter(|&&l| l == Label::Finite(4)).count();
            let others3 = edges.iter().all(|&l| l == Label::Finite(3) || l == Label::Finite(4));
            if fours == 1 && others3 && lens.0 == 1 && lens.1 == 1 {
                let long = &arms[2];
                let closes_long = *long.last().unwrap() == 4;
                let closes_short = lens.2 == 1 && (arms[0][0] == 4 || arms[1][0] == 4);
                if closes_long || closes_short {
                    return affine("B", n - 1);
                }
            }
            Shape::Indefinite
        }
        2 => {
            let leaves: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 1).collect();
            let ok = all3
                && branches.iter().all(|&b| adj[b].len() == 3)
                && leaves.len() == 4
                && leaves.iter().all(|&l| branches.contains(&adj[l][0]))
                && branches.iter().all(|&b| adj[b].iter().filter(|v| leaves.contains(v)).count() == 2);
            if ok {
                affine("D", n - 1)
            } else {
                Shape::Indefinite
            }
        }
        _ => Shape::Indefinite,
    }
}

fn component_name(shape: &Shape) -> Option<(TypeTag, String)> {
    let cat = catalog();
    match *shape {
        Shape::Finite { family, rank, label } => {
            cat.finite.iter().find(|e| e.family == family && in_range(rank, e.min_rank, e.max_rank))?;
            Some((TypeTag::Finite, match label {
                Some(6) => "G2".to_string(),
                Some(m) => format!("I2({m})"),
                None => format!("{family}{rank}"),
            }))
        }
        Shape::Affine { family, n } => {
            cat.affine.iter().find(|e| e.family == family && in_range(n, e.min_n, e.max_n))?;
            Some((TypeTag::Affine, format!("~{family}{n}")))
        }
        Shape::Indefinite => None,
    }
}

fn order_of_shape(shape: &Shape) -> Option<u128> {
    let Shape::Finite { family, rank, label } = *shape else { return None };
    let entry = catalog().finite.iter().find(|e| e.family == family && in_range(rank, e.min_rank, e.max_rank))?;
    match entry.order {
        OrderFormula::Constant(n) => Some(n),
        OrderFormula::Dihedral => Some(2 * label? as u128),
        OrderFormula::Factorial { shift, two_power_per_rank, two_power_offset } => {
            let mut v: u128 = 1;
            for k in 2..=(rank + shift) as u128 {
                v = v.checked_mul(k)?;
            }
            let e = rank as i64 * two_power_per_rank as i64 + two_power_offset as i64;
            v.checked_mul(1u128.checked_shl(u32::try_from(e).ok()?)?)
        }
    }
}

/// Connected components (edges: labels other than 2), as sorted member lists.
fn components(m: &CoxeterMatrix) -> Vec<Vec<usize>> {
    let n = m.rank();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            for w in 0..n {
                if !seen[w] && m.get(v, w) != Label::Finite(2) {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Classifies `W_T` by matching each connected component against the finite
/// and affine catalogs.
pub fn classify(subset: &SpecialSubset) -> DiagramType {
    let mut comps = Vec::new();
    for local in components(subset.matrix()) {
        let shape = shape_of(&subset.matrix().restrict(&local));
        let members = local.iter().map(|&i| subset.members[i]).collect();
        let (tag, name) = match component_name(&shape) {
            Some((tag, name)) => (tag, Some(name)),
            None => (TypeTag::Indefinite, None),
        };
        comps.push(Component { members, tag, name });
    }
    let tag = if comps.iter().all(|c| c.tag == TypeTag::Finite) {
        TypeTag::Finite
    } else if comps.iter().all(|c| c.tag != TypeTag::Indefinite) {
        TypeTag::Affine
    } else {
        TypeTag::Indefinite
    };
    let name = if comps.is_empty() {
        "1".to_string()
    } else {
        comps.iter().map(|c| c.name.as_deref().unwrap_or("?")).collect::<Vec<_>>().join("x")
    };
    DiagramType { tag, name, components: comps }
}

pub fn classify_system(system: &CoxeterSystem) -> DiagramType {
    classify(&SpecialSubset::whole(system))
}

/// `|W_T|` from the catalog order formulas.
pub fn order_of_finite(subset: &SpecialSubset) -> Result<u128> {
    let mut order: u128 = 1;
    for local in components(subset.matrix()) {
        let shape = shape_of(&subset.matrix().restrict(&local));
        if !matches!(shape, Shape::Finite { .. }) {
            return Err(Error::NotFinite);
        }
        let part = order_of_shape(&shape).ok_or(Error::NotFinite)?;
        order = order.checked_mul(part).ok_or(Error::ResourceLimit { what: "group order", limit: usize::MAX })?;
    }
    Ok(order)
}

fn is_finite_mask(system: &CoxeterSystem, mask: u64) -> bool {
    classify(&SpecialSubset::from_mask(system, mask)).is_finite()
}

// ----- Gram-matrix oracle -----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Definiteness {
    PositiveDefinite,
    /// Positive semidefinite with a nontrivial kernel.
    Degenerate,
    Indefinite,
}

/// Largest rank accepted by [`gram_definiteness`].
pub const GRAM_MAX_RANK: usize = 6;

/// Exact definiteness of `(-cos(π/m_st))` (with `-1` for `∞`), from the signs
/// of all principal minors computed by permutation expansion over `Q(c)`.
pub fn gram_definiteness(system: &CoxeterSystem) -> Result<Definiteness> {
    let n = system.rank();
    if n > GRAM_MAX_RANK {
        return Err(Error::ResourceLimit { what: "rank for the Gram oracle", limit: GRAM_MAX_RANK });
    }
    let field = system.field();
    // Twice the Gram matrix keeps entries in Z[c].
    let entry = |i: usize, j: usize| -> Vec<i128> {
        if i == j {
            return field.from_int(2).0;
        }
        match system.label(i, j) {
            Label::Infinity => field.from_int(-2).0,
            Label::Finite(2) => field.zero().0,
            Label::Finite(m) => field.neg(&field.two_cos_pi_over(m as u64)).0,
        }
    };
    let minor = |idx: &[usize]| -> Ordering {
        let k = idx.len();
        let mut total = field.zero();
        let mut perm: Vec<usize> = (0..k).collect();
        let mut sign = 1i128;
        loop {
            let mut term = field.from_int(sign);
            for (r, &c) in perm.iter().enumerate() {
                let e = crate::field::FieldElem(entry(idx[r], idx[c]));
                term = field.mul(&term, &e);
            }
            total = field.add(&total, &term);
            if !next_permutation(&mut perm, &mut sign) {
                break;
            }
        }
        field.sign(&total.0)
    };
    let mut any_zero = false;
    for mask in 1u64..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        match minor(&idx) {
            Ordering::Less => return Ok(Definiteness::Indefinite),
            Ordering::Equal => any_zero = true,
            Ordering::Greater => {}
        }
    }
    Ok(if any_zero { Definiteness::Degenerate } else { Definiteness::PositiveDefinite })
}

/// Lexicographic successor, tracking the permutation sign.
fn next_permutation(p: &mut [usize], sign: &mut i128) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    *sign = -*sign;
    let tail = n - i;
    p[i..].reverse();
    if (tail / 2) % 2 == 1 {
        *sign = -*sign;
    }
    true
}

// ----- nerve -----

/// The simplicial complex of subsets `T` with `W_T` finite (including `∅`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nerve {
    rank: usize,
    /// Faces as bit masks, ordered by size and then numerically.
    faces: Vec<u64>,
}

fn mask_key(m: u64) -> (u32, Vec<usize>) {
    (m.count_ones(), (0..64).filter(|&i| m >> i & 1 == 1).collect())
}

fn sort_masks(v: &mut [u64]) {
    v.sort_by_cached_key(|&m| mask_key(m));
}

pub fn mask_members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

impl Nerve {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn faces(&self) -> &[u64] {
        &self.faces
    }

    pub fn contains(&self, mask: u64) -> bool {
        self.faces.binary_search_by(|&f| mask_key(f).cmp(&mask_key(mask))).is_ok()
    }

    /// Largest face size minus one; `-1` for the empty system.
    pub fn dimension(&self) -> i64 {
        self.faces.iter().map(|f| f.count_ones() as i64).max().unwrap_or(0) - 1
    }

    pub fn faces_of_size(&self, k: u32) -> impl Iterator<Item = u64> + '_ {
        self.faces.iter().copied().filter(move |f| f.count_ones() == k)
    }

    pub fn maximal_faces(&self) -> Vec<u64> {
        self.faces
            .iter()
            .copied()
            .filter(|&f| !self.faces.iter().any(|&g| g != f && g & f == f))
            .collect()
    }

    /// Faces as lists of generator names.
    pub fn named_faces(&self, system: &CoxeterSystem) -> Vec<Vec<String>> {
        self.faces.iter().map(|&f| mask_members(f).iter().map(|&s| system.name(s).to_string()).collect()).collect()
    }
}

/// Monotone search: a set is tested only once all its facets are faces.
pub fn nerve(system: &CoxeterSystem) -> Nerve {
    let n = system.rank();
    let mut faces = vec![0u64];
    let mut layer = vec![0u64];
    let mut all: HashSet<u64> = HashSet::from([0]);
    while !layer.is_empty() {
        let mut candidates: BTreeSet<u64> = BTreeSet::new();
        for &f in &layer {
            for s in 0..n {
                if f >> s & 1 == 0 {
                    let g = f | 1 << s;
                    if mask_members(g).iter().all(|&x| all.contains(&(g & !(1 << x)))) {
                        candidates.insert(g);
                    }
                }
            }
        }
        layer = candidates.into_iter().filter(|&g| is_finite_mask(system, g)).collect();
        all.extend(layer.iter().copied());
        faces.extend(layer.iter().copied());
    }
    sort_masks(&mut faces);
    Nerve { rank: n, faces }
}

/// Minimal subsets `T` with `W_T` infinite, ordered by size then members.
pub fn minimal_infinite_subsets(system: &CoxeterSystem, nerve: &Nerve) -> Vec<u64> {
    let n = system.rank();
    let mut out: BTreeSet<u64> = BTreeSet::new();
    for &f in nerve.faces() {
        for s in 0..n {
            if f >> s & 1 == 0 {
                let g = f | 1 << s;
                if !nerve.contains(g) && mask_members(g).iter().all(|&x| nerve.contains(g & !(1 << x))) {
                    out.insert(g);
                }
            }
        }
    }
    let mut out: Vec<u64> = out.into_iter().collect();
    sort_masks(&mut out);
    out
}

// ----- Moussong's criterion -----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HyperbolicityWitness {
    /// An irreducible affine special subgroup of rank at least 3.
    Affine { subset: Vec<usize>, name: String },
    /// Disjoint infinite special subgroups with every cross label equal to 2.
    Commuting { t1: Vec<usize>, t2: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicityReport {
    pub hyperbolic: bool,
    pub witness: Option<HyperbolicityWitness>,
}

/// Moussong: `W` is hyperbolic iff there is no irreducible affine `T` with
/// `|T| ≥ 3` and no pair of disjoint commuting infinite `T1, T2`.
///
/// Every affine irreducible `T` and every infinite `T_i` can be shrunk to a
/// minimal infinite subset, so only those are scanned.
pub fn is_hyperbolic(system: &CoxeterSystem) -> HyperbolicityReport {
    let nerve = nerve(system);
    let minimal = minimal_infinite_subsets(system, &nerve);
    for &t in &minimal {
        if t.count_ones() >= 3 {
            let ty = classify(&SpecialSubset::from_mask(system, t));
            if ty.is_irreducible_affine() {
                return HyperbolicityReport {
                    hyperbolic: false,
                    witness: Some(HyperbolicityWitness::Affine { subset: mask_members(t), name: ty.name }),
                };
            }
        }
    }
    let commute = |a: u64, b: u64| {
        mask_members(a).iter().all(|&x| mask_members(b).iter().all(|&y| system.label(x, y) == Label::Finite(2)))
    };
    for (i, &a) in minimal.iter().enumerate() {
        for &b in &minimal[i + 1..] {
            if a & b == 0 && commute(a, b) {
                return HyperbolicityReport {
                    hyperbolic: false,
                    witness: Some(HyperbolicityWitness::Commuting { t1: mask_members(a), t2: mask_members(b) }),
                };
            }
        }
    }
    HyperbolicityReport { hyperbolic: true, witness: None }
}

// ----- diagram automorphisms -----

/// A permutation `f` of `S` with `m_{f(s) f(t)} = m_{st}`; `perm[s] = f(s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiagramAutomorphism {
    pub perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize) -> Self {
        DiagramAutomorphism { perm: (0..rank).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn apply(&self, s: usize) -> usize {
        self.perm[s]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        DiagramAutomorphism { perm: other.perm.iter().map(|&x| self.perm[x]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        DiagramAutomorphism { perm: inv }
    }

    /// Checks bijectivity and label preservation.
    pub fn is_valid_for(&self, system: &CoxeterSystem) -> bool {
        let n = system.rank();
        if self.perm.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &p in &self.perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return false;
            }
        }
        (0..n).all(|s| (0..n).all(|t| system.label(self.perm[s], self.perm[t]) == system.label(s, t)))
    }
}

/// Default rank bound for [`diagram_automorphisms`].
pub const AUTOMORPHISM_MAX_RANK: usize = 12;

/// Bound on the number of automorphisms listed.
pub const AUTOMORPHISM_MAX_COUNT: usize = 1_000_000;

/// Extends `perm[..k]` in lexicographic order; `fixed[s]` forces `perm[s] = s`.
/// `visit` returns `false` to stop the search.
fn backtrack(
    system: &CoxeterSystem,
    profiles: &[Vec<Label>],
    fixed: &[bool],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let n = system.rank();
    let k = perm.len();
    if k == n {
        return visit(perm);
    }
    for img in 0..n {
        if used[img] || (fixed[k] && img != k) || (!fixed[k] && fixed[img]) || profiles[k] != profiles[img] {
            continue;
        }
        if (0..k).any(|j| system.label(j, k) != system.label(perm[j], img)) {
            continue;
        }
        perm.push(img);
        used[img] = true;
        let go_on = backtrack(system, profiles, fixed, perm, used, visit);
        used[img] = false;
        perm.pop();
        if !go_on {
            return false;
        }
    }
    true
}

/// Sorted labels at a vertex, a necessary invariant for mapping `s` to `t`.
fn label_profile(system: &CoxeterSystem, s: usize) -> Vec<Label> {
    let mut v: Vec<Label> = (0..system.rank()).filter(|&t| t != s).map(|t| system.label(s, t)).collect();
    v.sort_by_key(|l| match l {
        Label::Finite(m) => *m as u64,
        Label::Infinity => u64::MAX,
    });
    v
}

fn search(system: &CoxeterSystem, fixed: &[bool], visit: &mut dyn FnMut(&[usize]) -> bool) {
    let n = system.rank();
    let profiles: Vec<Vec<Label>> = (0..n).map(|s| label_profile(system, s)).collect();
    backtrack(system, &profiles, fixed, &mut Vec::with_capacity(n), &mut vec![false; n], visit);
}

/// All diagram automorphisms, in lexicographic order of permutations
/// (identity first).
pub fn diagram_automorphisms(system: &CoxeterSystem) -> Result<Vec<DiagramAutomorphism>> {
    diagram_automorphisms_with_limit(system, AUTOMORPHISM_MAX_RANK)
}

pub fn diagram_automorphisms_with_limit(system: &CoxeterSystem, max_rank: usize) -> Result<Vec<DiagramAutomorphism>> {
    let n = system.rank();
    if n > max_rank {
        return Err(Error::ResourceLimit { what: "rank for diagram automorphisms", limit: max_rank });
    }
    let mut out = Vec::new();
    let mut overflow = false;
    search(system, &vec![false; n], &mut |p| {
        if out.len() == AUTOMORPHISM_MAX_COUNT {
            overflow = true;
            return false;
        }
        out.push(DiagramAutomorphism { perm: p.to_vec() });
        true
    });
    if overflow {
        return Err(Error::ResourceLimit { what: "diagram automorphisms", limit: AUTOMORPHISM_MAX_COUNT });
    }
    Ok(out)
}

/// Closure under composition and inverses, and presence of the identity.
pub fn is_group(autos: &[DiagramAutomorphism]) -> bool {
    let Some(first) = autos.first() else { return false };
    let set: HashSet<&DiagramAutomorphism> = autos.iter().collect();
    set.contains(&DiagramAutomorphism::identity(first.perm.len()))
        && autos.iter().all(|a| set.contains(&a.inverse()) && autos.iter().all(|b| set.contains(&a.compose(b))))
}

// ----- rigidity -----

/// `T_s = {t : m_st < ∞}`; contains `s` itself.
pub fn finite_star(system: &CoxeterSystem, s: usize) -> Vec<usize> {
    (0..system.rank()).filter(|&t| system.label(s, t).is_finite()).collect()
}

/// A non-trivial diagram automorphism fixing `s` and its finite-weight star.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarFixingWitness {
    pub s: usize,
    pub automorphism: DiagramAutomorphism,
}

impl StarFixingWitness {
    /// Replays the defining conditions.
    pub fn verify(&self, system: &CoxeterSystem) -> bool {
        self.s < system.rank()
            && self.automorphism.is_valid_for(system)
            && !self.automorphism.is_identity()
            && finite_star(system, self.s).iter().all(|&t| self.automorphism.apply(t) == t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub rigid: bool,
    pub witness: Option<StarFixingWitness>,
}

/// Calls `visit` on every non-identity automorphism fixing `T_s`, in order.
pub(crate) fn star_fixing_for(system: &CoxeterSystem, s: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let n = system.rank();
    let mut fixed = vec![false; n];
    for t in finite_star(system, s) {
        fixed[t] = true;
    }
    search(system, &fixed, &mut |p| {
        if p.iter().enumerate().all(|(i, &x)| i == x) {
            true
        } else {
            visit(p)
        }
    });
}

/// Rigid iff no non-trivial diagram automorphism fixes some `s` together with
/// every `t` joined to `s` by a finite-weight edge. The witness is the first
/// `(s, f)` found, scanning `s` in order and `f` lexicographically.
pub fn is_rigid(system: &CoxeterSystem) -> RigidityReport {
    for s in 0..system.rank() {
        let mut found = None;
        star_fixing_for(system, s, &mut |p| {
            found = Some(p.to_vec());
            false
        });
        if let Some(perm) = found {
            return RigidityReport {
                rigid: false,
                witness: Some(StarFixingWitness { s, automorphism: DiagramAutomorphism { perm } }),
            };
        }
    }
    RigidityReport { rigid: true, witness: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{bourdon_system, LinkGraph};
    use crate::coxeter::presets;

    fn ty(sys: &CoxeterSystem) -> DiagramType {
        classify_system(sys)
    }

    fn linear(labels: &[u32]) -> CoxeterSystem {
        CoxeterSystem::new(CoxeterMatrix::linear(labels).unwrap()).unwrap()
    }

    #[test]
    fn rank_two() {
        assert_eq!(ty(&presets::dihedral(5)).name, "I2(5)");
        assert_eq!(ty(&presets::a2()).name, "A2");
        assert_eq!(ty(&presets::b2()).name, "B2");
        assert_eq!(ty(&presets::dihedral(6)).name, "G2");
        assert_eq!(ty(&presets::dihedral(2)).name, "A1xA1");
        let d = ty(&presets::infinite_dihedral());
        assert_eq!((d.tag, d.name.as_str()), (TypeTag::Affine, "~A1"));
    }

    #[test]
    fn finite_families() {
        for (labels, name) in [
            (&[3, 3][..], "A3"),
            (&[3, 4], "B3"),
            (&[4, 3, 3], "B4"),
            (&[3, 5], "H3"),
            (&[3, 3, 5], "H4"),
            (&[3, 4, 3], "F4"),
        ] {
            let t = ty(&linear(labels));
            assert_eq!((t.tag, t.name.as_str()), (TypeTag::Finite, name), "{labels:?}");
        }
        assert_eq!(ty(&presets::a1_cubed()).name, "A1xA1xA1");
        let empty = classify(&SpecialSubset::new(&presets::a2(), &[]).unwrap());
        assert_eq!((empty.tag, empty.name.as_str()), (TypeTag::Finite, "1"));
    }

    fn tree(n: usize, edges: &[(usize, usize, u32)]) -> CoxeterSystem {
        CoxeterSystem::new(
            CoxeterMatrix::from_fn(n, |i, j| {
                if i == j {
                    return Label::Finite(1);
                }
                edges
                    .iter()
                    .find(|&&(a, b, _)| (a, b) == (i, j) || (a, b) == (j, i))
                    .map_or(Label::Finite(2), |&(_, _, m)| Label::Finite(m))
            })
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn branched_families() {
        let d4 = tree(4, &[(0, 1, 3), (1, 2, 3), (1, 3, 3)]);
        assert_eq!(ty(&d4).name, "D4");
        let e6 = tree(6, &[(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (2, 5, 3)]);
        assert_eq!(ty(&e6).name, "E6");
        let e8 = tree(8, &[(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3), (5, 6, 3), (4, 7, 3)]);
        assert_eq!(ty(&e8).name, "E8");
        let d4t = tree(5, &[(0, 1, 3), (0, 2, 3), (0, 3, 3), (0, 4, 3)]);
        assert_eq!(ty(&d4t).name, "~D4");
        let d5t = tree(6, &[(0, 2, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (3, 5, 3)]);
        assert_eq!(ty(&d5t).name, "~D5");
        let b3t = tree(4, &[(0, 1, 3), (1, 2, 3), (1, 3, 4)]);
        assert_eq!(ty(&b3t).name, "~B3");
        let b4t = tree(5, &[(0, 1, 3), (1, 2, 3), (1, 3, 3), (3, 4, 4)]);
        assert_eq!(ty(&b4t).name, "~B4");
        let e6t = tree(7, &[(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (2, 5, 3), (5, 6, 3)]);
        assert_eq!(ty(&e6t).name, "~E6");
        assert_eq!(ty(&linear(&[4, 4])).name, "~C2");
        assert_eq!(ty(&linear(&[4, 3, 4])).name, "~C3");
        assert_eq!(ty(&linear(&[6, 3])).name, "~G2");
        assert_eq!(ty(&linear(&[3, 3, 4, 3])).name, "~F4");
        assert_eq!(ty(&linear(&[3, 6])).name, "~G2");
        assert_eq!(ty(&linear(&[3, 7])).tag, TypeTag::Indefinite);
        assert_eq!(ty(&linear(&[5, 5])).tag, TypeTag::Indefinite);
        assert_eq!(ty(&presets::affine_a2()).name, "~A2");
    }

    #[test]
    fn orders() {
        let o = |s: &CoxeterSystem| order_of_finite(&SpecialSubset::whole(s)).unwrap();
        assert_eq!(o(&presets::dihedral(7)), 14);
        assert_eq!(o(&presets::a3()), 24);
        assert_eq!(o(&presets::b3()), 48);
        assert_eq!(o(&presets::h3()), 120);
        assert_eq!(o(&presets::a1_cubed()), 8);
        assert_eq!(o(&linear(&[3, 4, 3])), 1152);
        assert_eq!(o(&tree(4, &[(0, 1, 3), (1, 2, 3), (1, 3, 3)])), 192);
        assert_eq!(order_of_finite(&SpecialSubset::whole(&presets::affine_a2())), Err(Error::NotFinite));
    }

    #[test]
    fn gram_oracle_examples() {
        assert_eq!(gram_definiteness(&presets::h3()).unwrap(), Definiteness::PositiveDefinite);
        assert_eq!(gram_definiteness(&presets::affine_a2()).unwrap(), Definiteness::Degenerate);
        assert_eq!(gram_definiteness(&presets::infinite_dihedral()).unwrap(), Definiteness::Degenerate);
        assert_eq!(gram_definiteness(&linear(&[3, 7])).unwrap(), Definiteness::Indefinite);
        assert_eq!(gram_definiteness(&linear(&[3, 3, 5])).unwrap(), Definiteness::PositiveDefinite);
        assert_eq!(gram_definiteness(&linear(&[3, 3, 4, 3])).unwrap(), Definiteness::Degenerate);
    }

    #[test]
    fn nerve_examples() {
        let n = nerve(&presets::a2());
        assert_eq!(n.faces(), &[0, 1, 2, 3]);
        let n = nerve(&presets::infinite_dihedral());
        assert_eq!(n.faces(), &[0, 1, 2]);
        assert_eq!(n.dimension(), 0);
        let sys = presets::bourdon_k33();
        let n = nerve(&sys);
        assert_eq!(n.dimension(), 1);
        assert_eq!(n.faces_of_size(2).count(), 9);
        let k33 = LinkGraph::complete_bipartite(3, 3);
        for f in n.faces_of_size(2) {
            let m = mask_members(f);
            assert!(k33.has_edge(m[0], m[1]));
        }
    }

    #[test]
    fn hyperbolicity_fixtures() {
        let r = is_hyperbolic(&presets::affine_a2());
        assert!(!r.hyperbolic);
        assert_eq!(r.witness, Some(HyperbolicityWitness::Affine { subset: vec![0, 1, 2], name: "~A2".into() }));
        let r = is_hyperbolic(&presets::d_inf_squared());
        assert_eq!(r.witness, Some(HyperbolicityWitness::Commuting { t1: vec![0, 1], t2: vec![2, 3] }));
        assert!(is_hyperbolic(&presets::w4_c5()).hyperbolic);
        assert!(is_hyperbolic(&presets::bourdon_k33()).hyperbolic);
        assert!(is_hyperbolic(&presets::h3_bar()).hyperbolic);
        assert!(is_hyperbolic(&presets::h3()).hyperbolic);
        assert!(!is_hyperbolic(&bourdon_system(4, 2).unwrap()).hyperbolic);
    }

    #[test]
    fn automorphism_counts() {
        let a = diagram_automorphisms(&presets::a2()).unwrap();
        assert_eq!(a.len(), 2);
        assert!(is_group(&a));
        assert_eq!(diagram_automorphisms(&presets::infinite_dihedral()).unwrap().len(), 2);
        let k = diagram_automorphisms(&presets::bourdon_k33()).unwrap();
        assert_eq!(k.len(), 72);
        assert!(is_group(&k));
        assert!(k[0].is_identity());
        assert_eq!(diagram_automorphisms(&presets::h3()).unwrap().len(), 1);
        let big = presets::w_kl(6, &LinkGraph::cycle(13)).unwrap();
        assert!(matches!(diagram_automorphisms(&big), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn rigidity_fixtures() {
        assert!(is_rigid(&presets::a2()).rigid);
        let sys = presets::bourdon_k33();
        let r = is_rigid(&sys);
        let w = r.witness.unwrap();
        assert!(w.verify(&sys));
        assert_eq!(w.s, 0);
        assert_eq!(w.automorphism.perm, vec![0, 2, 1, 3, 4, 5]);
        let h = presets::h3_bar();
        let w = is_rigid(&h).witness.unwrap();
        assert!(w.verify(&h));
        let bad = StarFixingWitness { s: 0, automorphism: DiagramAutomorphism::identity(6) };
        assert!(!bad.verify(&sys));
    }

    #[test]
    fn rigid_iff_no_star_fixing_automorphism() {
        for sys in [presets::a2(), presets::a3(), presets::affine_a2(), presets::w4_c5(), presets::bourdon_k33()] {
            let all = diagram_automorphisms(&sys).unwrap();
            let exists = (0..sys.rank()).any(|s| {
                all.iter().any(|f| StarFixingWitness { s, automorphism: f.clone() }.verify(&sys))
            });
            assert_eq!(is_rigid(&sys).rigid, !exists);
        }
    }
}
