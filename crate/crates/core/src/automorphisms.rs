//! Wall-fixing automorphisms of the Cayley graph built from a star-fixing
//! diagram automorphism, checked on finite balls.
//!
//! For `s ∈ S` and `T_s = {t : m_st < ∞}`, the region `H` is the set of
//! vertices reachable from `1` without crossing an edge `w -- ws` with
//! `w ∈ W_{T_s}`. It is built in stages: `H_1 = W_{S∖s}`, then
//! `K_{n+1}` is the union of the cosets `wW_{T_s}` over `w ∈ H_n ∖ W_{T_s}`
//! and `H_{n+1}` the union of the cosets `wW_{S∖s}` over `w ∈ K_{n+1}`.

use crate::classification::{finite_star, star_fixing_for, DiagramAutomorphism, StarFixingWitness};
use crate::coxeter::{enumerate_skeleton, BallSkeleton, CayleyBall, CoxeterSystem, DEFAULT_MAX_VERTICES};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::{HashSet, VecDeque};

/// Extra BFS depth used when computing `H` inside a ball.
pub const DEFAULT_MARGIN: usize = 2;

/// Every `(s, f)` with `f` a non-trivial diagram automorphism fixing `T_s`
/// pointwise, scanning `s` in order and `f` lexicographically.
pub fn star_fixing_automorphisms(system: &CoxeterSystem) -> Vec<StarFixingWitness> {
    let mut out = Vec::new();
    for s in 0..system.rank() {
        star_fixing_for(system, s, &mut |p| {
            out.push(StarFixingWitness { s, automorphism: DiagramAutomorphism { perm: p.to_vec() } });
            true
        });
    }
    out
}

/// The half-space `A_s = {w : ℓ(sw) < ℓ(w)}` inside `ball`, as normal words.
pub fn halfspace_a(system: &CoxeterSystem, s: usize, ball: &CayleyBall) -> Result<Vec<Vec<u8>>> {
    if ball.system() != system {
        return Err(Error::SystemMismatch);
    }
    if s >= system.rank() {
        return Err(Error::UnknownGenerator(s.to_string()));
    }
    let mut out = Vec::new();
    for e in ball.elements() {
        if system.left_descents(e)?.contains(&s) {
            out.push(e.word().to_vec());
        }
    }
    Ok(out)
}

/// `H` restricted to a ball, with the stage `n(w) = min{i : w ∈ H_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HSet {
    pub s: usize,
    pub radius: usize,
    pub margin: usize,
    /// `(normal word, stage)` in ShortLex order.
    pub members: Vec<(Vec<u8>, usize)>,
}

impl HSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn find(&self, word: &[u8]) -> Option<usize> {
        self.members.binary_search_by(|(w, _)| crate::coxeter::shortlex_cmp(w, word)).ok()
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        self.find(word).is_some()
    }

    pub fn stage(&self, word: &[u8]) -> Option<usize> {
        self.find(word).map(|i| self.members[i].1)
    }

    pub fn max_stage(&self) -> usize {
        self.members.iter().map(|m| m.1).max().unwrap_or(0)
    }

    pub fn to_json(&self, system: &CoxeterSystem) -> serde_json::Value {
        json!({
            "s": system.name(self.s),
            "radius": self.radius,
            "margin": self.margin,
            "members": self.members.iter().map(|(w, n)| json!({"word": system.word_names(w), "stage": n})).collect::<Vec<_>>(),
        })
    }
}

fn in_parabolic(word: &[u8], mask: u64) -> bool {
    word.iter().all(|&t| mask >> t & 1 == 1)
}

/// Stages on the whole skeleton; `0` marks vertices outside `H`.
///
/// A 0-1 BFS over (vertex, phase): moving along `S∖s` in the `H` phase and
/// along `T_s` in the `K` phase is free, entering the `K` phase from
/// `w ∉ W_{T_s}` costs one stage, and leaving it is free.
fn stages_on(sk: &BallSkeleton, s: usize) -> Vec<usize> {
    let rank = sk.system().rank();
    let star = finite_star(sk.system(), s).iter().fold(0u64, |m, &t| m | 1 << t);
    let n = sk.len();
    let mut dist = vec![usize::MAX; 2 * n];
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    dist[0] = 0;
    while let Some((state, d)) = queue.pop_front() {
        if d > dist[state] {
            continue;
        }
        let (w, k_phase) = (state % n, state >= n);
        let mut relax = |to: usize, cost: usize, queue: &mut VecDeque<(usize, usize)>| {
            if d + cost < dist[to] {
                dist[to] = d + cost;
                if cost == 0 {
                    queue.push_front((to, d));
                } else {
                    queue.push_back((to, d + cost));
                }
            }
        };
        let outside_star = !in_parabolic(sk.word(w), star);
        if k_phase {
            relax(w, 0, &mut queue);
            for t in (0..rank).filter(|&t| star >> t & 1 == 1) {
                if t != s || outside_star {
                    if let Some(v) = sk.neighbor(w, t) {
                        relax(n + v, 0, &mut queue);
                    }
                }
            }
        } else {
            for t in (0..rank).filter(|&t| t != s) {
                if let Some(v) = sk.neighbor(w, t) {
                    relax(v, 0, &mut queue);
                }
            }
            if outside_star {
                relax(n + w, 1, &mut queue);
            }
        }
    }
    dist[..n].iter().map(|&d| if d == usize::MAX { 0 } else { d + 1 }).collect()
}

/// Plain reachability from `1` avoiding the edges `w -- ws`, `w ∈ W_{T_s}`.
fn reachable_on(sk: &BallSkeleton, s: usize) -> Vec<bool> {
    let star = finite_star(sk.system(), s).iter().fold(0u64, |m, &t| m | 1 << t);
    let mut seen = vec![false; sk.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(w) = queue.pop_front() {
        let blocked = in_parabolic(sk.word(w), star);
        for t in 0..sk.system().rank() {
            if t == s && blocked {
                continue;
            }
            if let Some(v) = sk.neighbor(w, t) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    seen
}

fn check_generator(system: &CoxeterSystem, s: usize) -> Result<()> {
    if s >= system.rank() {
        return Err(Error::UnknownGenerator(s.to_string()));
    }
    Ok(())
}

fn hset_from_skeleton(sk: &BallSkeleton, s: usize, radius: usize, margin: usize) -> HSet {
    let stages = stages_on(sk, s);
    debug_assert!(stages.iter().zip(reachable_on(sk, s)).all(|(&n, r)| (n > 0) == r));
    let members = (0..sk.count_within(radius)).filter(|&i| stages[i] > 0).map(|i| (sk.word(i).to_vec(), stages[i])).collect();
    HSet { s, radius, margin, members }
}

/// `H` on the radius-`radius` ball, computed inside a ball of radius
/// `radius + DEFAULT_MARGIN`.
pub fn compute_h(system: &CoxeterSystem, s: usize, radius: usize) -> Result<HSet> {
    compute_h_with_margin(system, s, radius, DEFAULT_MARGIN, DEFAULT_MAX_VERTICES)
}

pub fn compute_h_with_margin(
    system: &CoxeterSystem,
    s: usize,
    radius: usize,
    margin: usize,
    max_vertices: usize,
) -> Result<HSet> {
    check_generator(system, s)?;
    let sk = enumerate_skeleton(system, radius + margin, max_vertices)?;
    Ok(hset_from_skeleton(&sk, s, radius, margin))
}

/// `H` on the radius-`radius` ball from an already enumerated skeleton; the
/// margin is whatever the skeleton has beyond `radius`.
pub fn compute_h_in(sk: &BallSkeleton, s: usize, radius: usize) -> Result<HSet> {
    check_generator(sk.system(), s)?;
    if radius > sk.radius() {
        return Err(Error::RadiusTooSmall { radius: sk.radius(), min: radius });
    }
    Ok(hset_from_skeleton(sk, s, radius, sk.radius() - radius))
}

/// Same as [`compute_h`], but by plain reachability without stages; used as a
/// cross-check.
pub fn compute_h_by_reachability(system: &CoxeterSystem, s: usize, radius: usize, margin: usize) -> Result<Vec<Vec<u8>>> {
    check_generator(system, s)?;
    let sk = enumerate_skeleton(system, radius + margin, DEFAULT_MAX_VERTICES)?;
    let seen = reachable_on(&sk, s);
    Ok((0..sk.count_within(radius)).filter(|&i| seen[i]).map(|i| sk.word(i).to_vec()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointReport {
    pub disjoint: bool,
    pub offending: Vec<Vec<u8>>,
}

pub fn verify_disjoint(h: &HSet, a: &[Vec<u8>]) -> DisjointReport {
    let offending: Vec<Vec<u8>> = a.iter().filter(|w| h.contains(w)).cloned().collect();
    DisjointReport { disjoint: offending.is_empty(), offending }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismChecks {
    /// `φ` maps the ball bijectively onto itself.
    pub bijection: bool,
    /// Every `t`-edge maps to an `f(t)`-edge on `H` and to itself elsewhere.
    pub edges: bool,
    /// `φ` fixes `A_s` pointwise.
    pub fixes_halfspace: bool,
    /// `φ` fixes both ends of every edge crossed by the wall of `s`.
    pub fixes_wall_edges: bool,
    pub non_identity: bool,
}

impl AutomorphismChecks {
    pub fn all(&self) -> bool {
        self.bijection && self.edges && self.fixes_halfspace && self.fixes_wall_edges && self.non_identity
    }
}

/// `φ` on the ball of radius `valid_radius = radius - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialAutomorphism {
    pub witness: StarFixingWitness,
    pub radius: usize,
    pub valid_radius: usize,
    /// `(u, φ(u))` for every vertex of the ball, in ShortLex order of `u`.
    pub map: Vec<(Vec<u8>, Vec<u8>)>,
    pub checks: AutomorphismChecks,
}

impl PartialAutomorphism {
    pub fn moved(&self) -> impl Iterator<Item = &(Vec<u8>, Vec<u8>)> {
        self.map.iter().filter(|(a, b)| a != b)
    }

    pub fn to_json(&self, system: &CoxeterSystem) -> serde_json::Value {
        let names = |w: &[u8]| system.word_names(w);
        json!({
            "s": system.name(self.witness.s),
            "automorphism": self.witness.automorphism.perm.iter().map(|&t| system.name(t)).collect::<Vec<_>>(),
            "radius": self.radius,
            "valid_radius": self.valid_radius,
            "fixed": self.map.iter().filter(|(a, b)| a == b).map(|(a, _)| names(a)).collect::<Vec<_>>(),
            "moved": self.moved().map(|(a, b)| json!({"from": names(a), "to": names(b)})).collect::<Vec<_>>(),
            "checks": self.checks,
        })
    }
}

/// Builds `φ = f̂` on `H` and the identity elsewhere, where `f̂` applies `f`
/// letter by letter, and checks it on the ball of radius `radius - 1`.
pub fn build_wall_fixing_automorphism(
    system: &CoxeterSystem,
    witness: &StarFixingWitness,
    radius: usize,
) -> Result<PartialAutomorphism> {
    validate(system, witness, radius)?;
    let sk = enumerate_skeleton(system, radius - 1 + DEFAULT_MARGIN, DEFAULT_MAX_VERTICES)?;
    let h = hset_from_skeleton(&sk, witness.s, radius - 1, DEFAULT_MARGIN);
    Ok(check_map(&sk, witness, radius, &h))
}

/// Like [`build_wall_fixing_automorphism`] with a caller-supplied `H`.
pub fn build_wall_fixing_automorphism_with(
    system: &CoxeterSystem,
    witness: &StarFixingWitness,
    radius: usize,
    h: &HSet,
) -> Result<PartialAutomorphism> {
    validate(system, witness, radius)?;
    let sk = enumerate_skeleton(system, radius - 1 + DEFAULT_MARGIN, DEFAULT_MAX_VERTICES)?;
    Ok(check_map(&sk, witness, radius, h))
}

fn validate(system: &CoxeterSystem, witness: &StarFixingWitness, radius: usize) -> Result<()> {
    if !witness.verify(system) {
        return Err(Error::NotAWitness(format!("s = {}, f = {:?}", witness.s, witness.automorphism.perm)));
    }
    if radius < 2 {
        return Err(Error::RadiusTooSmall { radius, min: 2 });
    }
    Ok(())
}

fn check_map(sk: &BallSkeleton, witness: &StarFixingWitness, radius: usize, h: &HSet) -> PartialAutomorphism {
    let rank = sk.system().rank();
    let r = radius - 1;
    let n = sk.count_within(r);
    let s = witness.s;
    let f = &witness.automorphism;
    let in_h: Vec<bool> = (0..n).map(|i| h.contains(sk.word(i))).collect();
    let phi: Vec<Option<usize>> = (0..n)
        .map(|i| if in_h[i] { sk.walk(0, sk.word(i).iter().map(|&t| f.apply(t as usize))) } else { Some(i) })
        .collect();

    let mut image = HashSet::new();
    let bijection = phi.iter().all(|p| p.is_some_and(|j| j < n && image.insert(j)));

    let mut edges = true;
    let mut fixes_wall_edges = true;
    for u in 0..n {
        let su = sk.walk(0, std::iter::once(s).chain(sk.word(u).iter().map(|&t| t as usize)));
        for t in 0..rank {
            let Some(v) = sk.neighbor(u, t).filter(|&v| v < n) else { continue };
            let ok = if in_h[u] {
                phi[u].and_then(|pu| sk.neighbor(pu, f.apply(t))) == phi[v]
            } else {
                phi[u] == Some(u) && phi[v] == Some(v)
            };
            edges &= ok;
            if su == Some(v) {
                fixes_wall_edges &= phi[u] == Some(u) && phi[v] == Some(v);
            }
        }
    }
    let fixes_halfspace = (0..n).filter(|&i| sk.left_descents(i) >> s & 1 == 1).all(|i| phi[i] == Some(i));
    let non_identity = phi.iter().enumerate().any(|(i, &p)| p != Some(i));

    let map = (0..n).map(|i| (sk.word(i).to_vec(), phi[i].map_or_else(Vec::new, |j| sk.word(j).to_vec()))).collect();
    PartialAutomorphism {
        witness: witness.clone(),
        radius,
        valid_radius: r,
        map,
        checks: AutomorphismChecks { bijection, edges, fixes_halfspace, fixes_wall_edges, non_identity },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::is_rigid;
    use crate::coxeter::{enumerate_ball, presets};

    #[test]
    fn finite_and_rigid_have_no_witnesses() {
        assert!(star_fixing_automorphisms(&presets::a2()).is_empty());
        assert!(star_fixing_automorphisms(&presets::h3()).is_empty());
    }

    #[test]
    fn witnesses_verify() {
        let k33 = presets::bourdon_k33();
        let all = star_fixing_automorphisms(&k33);
        assert!(!all.is_empty());
        assert!(all.iter().all(|w| w.verify(&k33)));
        assert_eq!(all[0], is_rigid(&k33).witness.unwrap());
    }

    #[test]
    fn halfspace_in_a2() {
        let a2 = presets::a2();
        let ball = enumerate_ball(&a2, 3).unwrap();
        let a = halfspace_a(&a2, 0, &ball).unwrap();
        assert_eq!(a, vec![vec![0], vec![0, 1], vec![0, 1, 0]]);
        assert!(matches!(halfspace_a(&presets::b2(), 0, &ball), Err(Error::SystemMismatch)));
    }

    #[test]
    fn stages_match_reachability() {
        for sys in [presets::bourdon_k33(), presets::h3_bar(), presets::infinite_dihedral()] {
            for s in 0..sys.rank() {
                let h = compute_h(&sys, s, 3).unwrap();
                let words: Vec<Vec<u8>> = h.members.iter().map(|m| m.0.clone()).collect();
                assert_eq!(words, compute_h_by_reachability(&sys, s, 3, 2).unwrap());
                assert_eq!(h.stage(&[]), Some(1));
            }
        }
    }

    #[test]
    fn infinite_dihedral_by_hand() {
        // The line s - 1 - t - ts - tst - ...; only the edge 1 - s is cut.
        let h = compute_h(&presets::infinite_dihedral(), 0, 4).unwrap();
        let expect: Vec<(Vec<u8>, usize)> =
            vec![(vec![], 1), (vec![1], 1), (vec![1, 0], 2), (vec![1, 0, 1], 2), (vec![1, 0, 1, 0], 3)];
        assert_eq!(h.members, expect);
    }

    #[test]
    fn k33_check_passes() {
        let k33 = presets::bourdon_k33();
        let w = is_rigid(&k33).witness.unwrap();
        let p = build_wall_fixing_automorphism(&k33, &w, 4).unwrap();
        assert!(p.checks.all(), "{:?}", p.checks);
        assert_eq!(p.valid_radius, 3);
        let ball = enumerate_ball(&k33, 3).unwrap();
        let h = compute_h(&k33, w.s, 3).unwrap();
        assert!(verify_disjoint(&h, &halfspace_a(&k33, w.s, &ball).unwrap()).disjoint);
    }

    #[test]
    fn corrupted_h_fails() {
        let k33 = presets::bourdon_k33();
        let w = is_rigid(&k33).witness.unwrap();
        let mut h = compute_h(&k33, w.s, 3).unwrap();
        let pos = h.members.binary_search_by(|m| crate::coxeter::shortlex_cmp(&m.0, &[w.s as u8])).unwrap_err();
        h.members.insert(pos, (vec![w.s as u8], 1));
        let p = build_wall_fixing_automorphism_with(&k33, &w, 4, &h).unwrap();
        assert!(!p.checks.all());
        let a = halfspace_a(&k33, w.s, &enumerate_ball(&k33, 3).unwrap()).unwrap();
        assert_eq!(verify_disjoint(&h, &a).offending, vec![vec![w.s as u8]]);
    }

    #[test]
    fn bad_inputs() {
        let k33 = presets::bourdon_k33();
        let w = is_rigid(&k33).witness.unwrap();
        assert!(matches!(build_wall_fixing_automorphism(&k33, &w, 1), Err(Error::RadiusTooSmall { .. })));
        let bad = StarFixingWitness { s: w.s, automorphism: DiagramAutomorphism::identity(6) };
        assert!(matches!(build_wall_fixing_automorphism(&k33, &bad, 3), Err(Error::NotAWitness(_))));
    }
}
