use super::element::shortlex_cmp;
use super::system::CoxeterSystem;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use hashbrown::HashTable;
use rustc_hash::FxBuildHasher;
use std::hash::BuildHasher;

const NONE: u32 = u32::MAX;

/// A Cayley ball stored by normal words and a neighbour table only.
///
/// Vertices are told apart by the linear form `w⁻¹·f`, where `f` takes the
/// value 1 on every simple root: it lies in the interior of the fundamental
/// chamber of the dual action, so its stabiliser is trivial. Its value on
/// `α_s` is the coefficient sum of the root `w(α_s)`, whose sign decides
/// whether `s` is a right descent. Forms are kept for one BFS level at a
/// time, so balls of a few million vertices fit in memory.
#[derive(Clone, Debug)]
pub struct BallSkeleton {
    system: CoxeterSystem,
    radius: usize,
    arena: Vec<u8>,
    offsets: Vec<usize>,
    level_starts: Vec<usize>,
    neighbors: Vec<u32>,
    right_descents: Vec<u64>,
}

fn pack(v: &[i128], out: &mut Vec<i64>) -> Result<()> {
    for &x in v {
        out.push(i64::try_from(x).map_err(|_| Error::ResourceLimit { what: "dual coordinates", limit: i64::MAX as usize })?);
    }
    Ok(())
}

pub fn enumerate_skeleton(system: &CoxeterSystem, radius: usize, max_vertices: usize) -> Result<BallSkeleton> {
    let rank = system.rank();
    let d = system.d();
    let width = rank * d;
    let mut sk = BallSkeleton {
        system: system.clone(),
        radius,
        arena: Vec::new(),
        offsets: vec![0, 0],
        level_starts: vec![0],
        neighbors: vec![NONE; rank],
        right_descents: Vec::new(),
    };
    let hasher = FxBuildHasher;
    let mut one = vec![0i128; width];
    for s in 0..rank {
        one[s * d] = 1;
    }
    // Forms of the current level, flattened.
    let mut current = Vec::new();
    pack(&one, &mut current)?;
    let mut level = 0;
    let mut form = vec![0i128; width];
    let mut key = Vec::with_capacity(width);
    let mut scratch = vec![0i128; d];
    loop {
        let start = sk.level_starts[level];
        for f in current.chunks(width) {
            let mask = (0..rank)
                .filter(|&s| {
                    for (x, &y) in scratch.iter_mut().zip(&f[s * d..(s + 1) * d]) {
                        *x = i128::from(y);
                    }
                    system.field_sign(&scratch) == Ordering::Less
                })
                .fold(0u64, |a, s| a | 1 << s);
            sk.right_descents.push(mask);
        }
        if level == radius {
            break;
        }
        let next_start = sk.len();
        let mut next: Vec<i64> = Vec::new();
        let mut table: HashTable<u32> = HashTable::new();
        for (k, f) in current.chunks(width).enumerate() {
            let i = start + k;
            for s in 0..rank {
                if sk.right_descents[i] >> s & 1 == 1 {
                    continue;
                }
                for (x, &y) in form.iter_mut().zip(f) {
                    *x = i128::from(y);
                }
                system.dual_act(&mut form, s);
                key.clear();
                pack(&form, &mut key)?;
                let h = hasher.hash_one(&key);
                let found = table.find(h, |&j| next[j as usize * width..(j as usize + 1) * width] == key[..]).copied();
                let j = match found {
                    Some(j) => next_start + j as usize,
                    None => {
                        let j = sk.len();
                        if j >= max_vertices {
                            return Err(Error::ResourceLimit { what: "ball vertices", limit: max_vertices });
                        }
                        let (a, b) = (sk.offsets[i], sk.offsets[i + 1]);
                        sk.arena.extend_from_within(a..b);
                        sk.arena.push(s as u8);
                        sk.offsets.push(sk.arena.len());
                        sk.neighbors.extend(std::iter::repeat(NONE).take(rank));
                        next.extend_from_slice(&key);
                        let local = (j - next_start) as u32;
                        table.insert_unique(h, local, |&x| hasher.hash_one(&next[x as usize * width..(x as usize + 1) * width]));
                        j
                    }
                };
                sk.neighbors[i * rank + s] = j as u32;
                sk.neighbors[j * rank + s] = i as u32;
            }
        }
        if sk.len() == next_start {
            break;
        }
        current = next;
        sk.level_starts.push(next_start);
        level += 1;
    }
    Ok(sk)
}

impl BallSkeleton {
    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.arena[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn length(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Number of vertices of length at most `r`.
    pub fn count_within(&self, r: usize) -> usize {
        self.level_starts.get(r + 1).copied().unwrap_or(self.len())
    }

    pub fn neighbor(&self, i: usize, s: usize) -> Option<usize> {
        let j = self.neighbors[i * self.system.rank() + s];
        (j != NONE).then_some(j as usize)
    }

    pub fn right_descents(&self, i: usize) -> u64 {
        self.right_descents[i]
    }

    /// Right descents of `w⁻¹`, found by walking the reversed word.
    pub fn left_descents(&self, i: usize) -> u64 {
        let inv = self.walk(0, self.word(i).iter().rev().map(|&t| t as usize)).expect("balls are closed under inverses");
        self.right_descents[inv]
    }

    /// Binary search; vertices are stored in ShortLex order.
    pub fn index_of_word(&self, word: &[u8]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match shortlex_cmp(self.word(mid), word) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Follows `word` from vertex `start`; `None` if the walk leaves the ball.
    pub fn walk(&self, start: usize, word: impl IntoIterator<Item = usize>) -> Option<usize> {
        word.into_iter().try_fold(start, |i, s| self.neighbor(i, s))
    }
}
