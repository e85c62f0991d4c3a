use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

/// An element of `W`, stored by its ShortLex normal word together with the
/// matrices of it and its inverse acting on the simple-root basis.
///
/// Normal words are unique, so equality, hashing and ordering only look at
/// the word; two elements with the same word have identical matrices.
#[derive(Clone, Debug)]
pub struct GroupElement {
    system: u64,
    word: Vec<u8>,
    matrix: Vec<i128>,
    inverse: Vec<i128>,
}

impl GroupElement {
    pub(crate) fn from_parts(system: u64, word: Vec<u8>, matrix: Vec<i128>, inverse: Vec<i128>) -> Self {
        GroupElement { system, word, matrix, inverse }
    }

    /// ShortLex-least reduced word, as generator indices.
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn word_indices(&self) -> Vec<usize> {
        self.word.iter().map(|&s| s as usize).collect()
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Row-major `rank × rank` matrix, each entry `degree` integer
    /// coefficients of an element of `Z[c]`.
    pub fn matrix(&self) -> &[i128] {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &[i128] {
        &self.inverse
    }

    pub(crate) fn system_id(&self) -> u64 {
        self.system
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system && self.word == other.word
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.system.hash(state);
        self.word.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// ShortLex on normal words.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.system
            .cmp(&other.system)
            .then(self.word.len().cmp(&other.word.len()))
            .then_with(|| self.word.cmp(&other.word))
    }
}

pub fn shortlex_cmp(a: &[u8], b: &[u8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}
