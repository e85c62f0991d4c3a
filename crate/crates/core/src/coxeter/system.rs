use super::element::GroupElement;
use super::matrix::{CoxeterMatrix, Label, MatrixFile};
use crate::error::{Error, Result};
use crate::field::{cadd, cmul, lcm, FieldElem, FieldModulus, NumberField};
use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A Coxeter system `(W, S)` with its geometric representation over `Q(c)`.
///
/// Cheap to clone; the data is shared.
#[derive(Clone)]
pub struct CoxeterSystem {
    inner: Arc<Inner>,
}

struct Inner {
    matrix: CoxeterMatrix,
    names: Vec<String>,
    field: NumberField,
    /// `coef[s * rank + t] = -2B(e_s, e_t)`; the `s`-coordinate of `σ_s(e_t)` for `t ≠ s`.
    coef: Vec<i128>,
    nonzero: Vec<bool>,
    fingerprint: u64,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("rank", &self.rank())
            .field("names", &self.inner.names)
            .field("labels", &self.inner.matrix.rows())
            .finish()
    }
}

impl PartialEq for CoxeterSystem {
    fn eq(&self, other: &Self) -> bool {
        self.inner.fingerprint == other.inner.fingerprint
            && self.inner.matrix == other.inner.matrix
            && self.inner.names == other.inner.names
    }
}

impl Eq for CoxeterSystem {}

/// Default generator names `s0, s1, …`.
pub fn default_names(rank: usize) -> Vec<String> {
    (0..rank).map(|i| format!("s{i}")).collect()
}

impl CoxeterSystem {
    pub fn new(matrix: CoxeterMatrix) -> Result<Self> {
        let names = default_names(matrix.rank());
        Self::with_names(matrix, names)
    }

    pub fn with_names(matrix: CoxeterMatrix, names: Vec<String>) -> Result<Self> {
        let rank = matrix.rank();
        if names.len() != rank {
            return Err(Error::MatrixShape(format!("{} generator names for rank {rank}", names.len())));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(char::is_whitespace) {
                return Err(Error::MatrixShape(format!("bad generator name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::MatrixShape(format!("duplicate generator name `{n}`")));
            }
        }
        if rank > 255 {
            return Err(Error::MatrixShape("rank above 255 is not supported".into()));
        }

        let mut order = 1u64;
        for i in 0..rank {
            for j in i + 1..rank {
                // cos(π/2) = 0 is rational, so label 2 never enlarges the field.
                if let Label::Finite(m) = matrix.get(i, j) {
                    if m != 2 {
                        order = lcm(order, m as u64);
                    }
                }
            }
        }
        let field = NumberField::shared(order);
        let d = field.degree();
        let mut coef = vec![0i128; rank * rank * d];
        let mut nonzero = vec![false; rank * rank];
        for s in 0..rank {
            for t in 0..rank {
                let value: FieldElem = if s == t {
                    field.from_int(-2)
                } else {
                    match matrix.get(s, t) {
                        Label::Finite(2) => field.zero(),
                        Label::Finite(m) => field.two_cos_pi_over(m as u64),
                        Label::Infinity => field.from_int(2),
                    }
                };
                nonzero[s * rank + t] = !field.is_zero(&value.0);
                coef[(s * rank + t) * d..(s * rank + t + 1) * d].copy_from_slice(&value.0);
            }
        }

        let mut hasher = DefaultHasher::new();
        matrix.hash(&mut hasher);
        names.hash(&mut hasher);
        let fingerprint = hasher.finish();

        Ok(CoxeterSystem { inner: Arc::new(Inner { matrix, names, field, coef, nonzero, fingerprint }) })
    }

    pub fn from_file(file: MatrixFile) -> Result<Self> {
        let (matrix, names) = file.into_matrix()?;
        match names {
            Some(n) => Self::with_names(matrix, n),
            None => Self::new(matrix),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(MatrixFile::from_json(text)?)
    }

    pub fn to_file(&self) -> MatrixFile {
        let names = self.inner.names.clone();
        let default = default_names(self.rank());
        MatrixFile {
            rank: self.rank(),
            labels: self.inner.matrix.rows(),
            names: if names == default { None } else { Some(names) },
        }
    }

    pub fn rank(&self) -> usize {
        self.inner.matrix.rank()
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.inner.matrix
    }

    pub fn label(&self, s: usize, t: usize) -> Label {
        self.inner.matrix.get(s, t)
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn name(&self, s: usize) -> &str {
        &self.inner.names[s]
    }

    pub fn field(&self) -> &NumberField {
        &self.inner.field
    }

    pub fn ground_field_modulus(&self) -> FieldModulus {
        self.inner.field.describe()
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        self.inner.fingerprint
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.inner.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Parses a word: whitespace-separated generator names, or, when every
    /// name is a single character, a compact string such as `"sts"`.
    /// The identity may be written as the empty string, `"1"` or `"e"` if no
    /// generator carries that name.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        if (text == "1" || text == "e") && self.generator_index(text).is_err() {
            return Ok(Vec::new());
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() > 1 || self.generator_index(text).is_ok() {
            return tokens.iter().map(|t| self.generator_index(t)).collect();
        }
        if self.inner.names.iter().all(|n| n.chars().count() == 1) {
            return text.chars().map(|c| self.generator_index(&c.to_string())).collect();
        }
        Err(Error::UnknownGenerator(text.to_string()))
    }

    /// Human-readable word; single-character names are concatenated.
    pub fn format_word(&self, word: &[u8]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let compact = self.inner.names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = word.iter().map(|&s| self.name(s as usize)).collect();
        if compact {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    pub fn word_names(&self, word: &[u8]) -> Vec<String> {
        word.iter().map(|&s| self.name(s as usize).to_string()).collect()
    }

    pub(crate) fn check_generators(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&s| s >= self.rank()) {
            Some(s) => Err(Error::UnknownGenerator(format!("#{s}"))),
            None => Ok(()),
        }
    }

    pub(crate) fn check(&self, e: &GroupElement) -> Result<()> {
        if e.system_id() == self.fingerprint() {
            Ok(())
        } else {
            Err(Error::SystemMismatch)
        }
    }

    // ----- linear algebra on flattened rank×rank matrices over Z[c] -----

    #[inline]
    pub(crate) fn d(&self) -> usize {
        self.inner.field.degree()
    }

    #[inline]
    fn coef(&self, s: usize, t: usize) -> &[i128] {
        let d = self.d();
        let r = self.rank();
        &self.inner.coef[(s * r + t) * d..(s * r + t + 1) * d]
    }

    pub(crate) fn identity_matrix(&self) -> Vec<i128> {
        let r = self.rank();
        let d = self.d();
        let mut m = vec![0i128; r * r * d];
        for i in 0..r {
            m[(i * r + i) * d] = 1;
        }
        m
    }

    /// `a ← a · S_s` (column update).
    pub(crate) fn right_mul_gen(&self, a: &mut [i128], s: usize) {
        let r = self.rank();
        let d = self.d();
        let field = &self.inner.field;
        let mut col = vec![0i128; r * d];
        for i in 0..r {
            col[i * d..(i + 1) * d].copy_from_slice(&a[(i * r + s) * d..(i * r + s + 1) * d]);
        }
        for t in 0..r {
            if t == s || !self.inner.nonzero[s * r + t] {
                continue;
            }
            let k = self.coef(s, t);
            for i in 0..r {
                let idx = (i * r + t) * d;
                field.mul_add_into(&mut a[idx..idx + d], &col[i * d..(i + 1) * d], k);
            }
        }
        for i in 0..r {
            for x in &mut a[(i * r + s) * d..(i * r + s + 1) * d] {
                *x = -*x;
            }
        }
    }

    /// Contragredient action on a linear form given by its values on the
    /// simple roots: `(s·f)(α_t) = f(α_t) - 2B(α_s, α_t) f(α_s)`.
    pub(crate) fn dual_act(&self, f: &mut [i128], s: usize) {
        let r = self.rank();
        let d = self.d();
        let field = &self.inner.field;
        let fs: Vec<i128> = f[s * d..(s + 1) * d].to_vec();
        for t in 0..r {
            if t != s && self.inner.nonzero[s * r + t] {
                field.mul_add_into(&mut f[t * d..(t + 1) * d], self.coef(s, t), &fs);
            }
        }
        for x in &mut f[s * d..(s + 1) * d] {
            *x = -*x;
        }
    }

    /// `a ← S_s · a` (row update).
    pub(crate) fn left_mul_gen(&self, a: &mut [i128], s: usize) {
        let r = self.rank();
        let d = self.d();
        let field = &self.inner.field;
        let mut row = vec![0i128; r * d];
        for (x, &y) in row.iter_mut().zip(&a[s * r * d..(s + 1) * r * d]) {
            *x = -y;
        }
        for t in 0..r {
            if t == s || !self.inner.nonzero[s * r + t] {
                continue;
            }
            let k = self.coef(s, t);
            for j in 0..r {
                let idx = (t * r + j) * d;
                field.mul_add_into(&mut row[j * d..(j + 1) * d], k, &a[idx..idx + d]);
            }
        }
        a[s * r * d..(s + 1) * r * d].copy_from_slice(&row);
    }

    pub(crate) fn mat_mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let r = self.rank();
        let d = self.d();
        let field = &self.inner.field;
        let mut out = vec![0i128; r * r * d];
        for i in 0..r {
            for k in 0..r {
                let aik = &a[(i * r + k) * d..(i * r + k + 1) * d];
                if aik.iter().all(|&x| x == 0) {
                    continue;
                }
                for j in 0..r {
                    let idx = (i * r + j) * d;
                    field.mul_add_into(&mut out[idx..idx + d], aik, &b[(k * r + j) * d..(k * r + j + 1) * d]);
                }
            }
        }
        out
    }

    /// Column `j` of `a` as a vector in the simple-root basis.
    pub(crate) fn column(&self, a: &[i128], j: usize) -> Vec<i128> {
        let r = self.rank();
        let d = self.d();
        let mut v = vec![0i128; r * d];
        for i in 0..r {
            v[i * d..(i + 1) * d].copy_from_slice(&a[(i * r + j) * d..(i * r + j + 1) * d]);
        }
        v
    }

    pub(crate) fn apply(&self, a: &[i128], v: &[i128]) -> Vec<i128> {
        let r = self.rank();
        let d = self.d();
        let field = &self.inner.field;
        let mut out = vec![0i128; r * d];
        for i in 0..r {
            for k in 0..r {
                let vk = &v[k * d..(k + 1) * d];
                if vk.iter().all(|&x| x == 0) {
                    continue;
                }
                field.mul_add_into(&mut out[i * d..(i + 1) * d], &a[(i * r + k) * d..(i * r + k + 1) * d], vk);
            }
        }
        out
    }

    /// Sign of a root: the sign of its first nonzero coordinate (roots are
    /// either nonnegative or nonpositive combinations of simple roots).
    pub(crate) fn root_sign(&self, v: &[i128]) -> Ordering {
        let d = self.d();
        for chunk in v.chunks(d) {
            let s = self.inner.field.sign(chunk);
            if s != Ordering::Equal {
                return s;
            }
        }
        Ordering::Equal
    }

    pub(crate) fn field_sign(&self, a: &[i128]) -> Ordering {
        self.inner.field.sign(a)
    }

    /// Sign of column `j` of `a`, which must be a root.
    pub(crate) fn column_sign(&self, a: &[i128], j: usize) -> Ordering {
        let r = self.rank();
        let d = self.d();
        for i in 0..r {
            let e = &a[(i * r + j) * d..(i * r + j + 1) * d];
            let s = self.inner.field.sign(e);
            if s != Ordering::Equal {
                return s;
            }
        }
        Ordering::Equal
    }

    /// Reflection matrix of the root `beta`: `v ↦ v - 2B(β, v) β`.
    pub(crate) fn reflection_matrix(&self, beta: &[i128]) -> Vec<i128> {
        let r = self.rank();
        let d = self.d();
        let field = &self.inner.field;
        let mut m = self.identity_matrix();
        for t in 0..r {
            // 2B(β, e_t) = 2β_t - Σ_{u≠t} β_u coef(u, t)
            let mut two_b = vec![0i128; d];
            for (x, &y) in two_b.iter_mut().zip(&beta[t * d..(t + 1) * d]) {
                *x = cmul(2, y);
            }
            let mut acc = vec![0i128; d];
            for u in 0..r {
                if u != t && self.inner.nonzero[u * r + t] {
                    field.mul_add_into(&mut acc, &beta[u * d..(u + 1) * d], self.coef(u, t));
                }
            }
            for (x, &y) in two_b.iter_mut().zip(&acc) {
                *x = x.checked_sub(y).expect("coefficient overflow");
            }
            // column t: e_t - two_b * β
            for i in 0..r {
                let mut prod = vec![0i128; d];
                field.mul_add_into(&mut prod, &two_b, &beta[i * d..(i + 1) * d]);
                let idx = (i * r + t) * d;
                for (x, &p) in m[idx..idx + d].iter_mut().zip(&prod) {
                    *x = cadd(*x, -p);
                }
            }
        }
        m
    }

    /// Lexicographically least reduced word of the element whose inverse
    /// matrix is `inverse`, by repeatedly stripping the smallest left descent.
    pub(crate) fn normal_word_from_inverse(&self, inverse: &[i128]) -> Vec<u8> {
        let mut w = inverse.to_vec();
        let mut word = Vec::new();
        'outer: loop {
            for s in 0..self.rank() {
                if self.column_sign(&w, s) == Ordering::Less {
                    word.push(s as u8);
                    self.right_mul_gen(&mut w, s);
                    continue 'outer;
                }
            }
            break;
        }
        word
    }

    pub(crate) fn element_from_parts(&self, word: Vec<u8>, matrix: Vec<i128>, inverse: Vec<i128>) -> GroupElement {
        GroupElement::from_parts(self.fingerprint(), word, matrix, inverse)
    }

    // ----- group operations -----

    pub fn identity(&self) -> GroupElement {
        self.element_from_parts(Vec::new(), self.identity_matrix(), self.identity_matrix())
    }

    pub fn generator(&self, s: usize) -> GroupElement {
        assert!(s < self.rank());
        let mut m = self.identity_matrix();
        self.right_mul_gen(&mut m, s);
        self.element_from_parts(vec![s as u8], m.clone(), m)
    }

    /// Canonical element represented by `word` (generator indices).
    pub fn element(&self, word: &[usize]) -> Result<GroupElement> {
        self.check_generators(word)?;
        let mut matrix = self.identity_matrix();
        let mut inverse = self.identity_matrix();
        for &s in word {
            self.right_mul_gen(&mut matrix, s);
            self.left_mul_gen(&mut inverse, s);
        }
        let normal = self.normal_word_from_inverse(&inverse);
        Ok(self.element_from_parts(normal, matrix, inverse))
    }

    /// Canonical element represented by a textual word.
    pub fn normal_form(&self, word: &str) -> Result<GroupElement> {
        let w = self.parse_word(word)?;
        self.element(&w)
    }

    /// Element with the given action matrix; the inverse is recomputed from
    /// the normal word, so `matrix` must lie in the image of the group.
    pub(crate) fn element_from_matrix(&self, matrix: &[i128]) -> GroupElement {
        // The normal word of w⁻¹ reversed is a reduced word of w.
        let inv_word = self.normal_word_from_inverse(matrix);
        let word: Vec<usize> = inv_word.iter().rev().map(|&s| s as usize).collect();
        self.element(&word).expect("generators in range")
    }

    /// Primary reducedness test: `s_1 … s_n` is reduced iff every prefix
    /// `s_1 … s_{i-1}` maps the simple root of `s_i` to a positive root.
    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        self.check_generators(word)?;
        let mut prefix = self.identity_matrix();
        for &s in word {
            if self.column_sign(&prefix, s) != Ordering::Greater {
                return Ok(false);
            }
            self.right_mul_gen(&mut prefix, s);
        }
        Ok(true)
    }

    pub fn is_reduced_str(&self, word: &str) -> Result<bool> {
        let w = self.parse_word(word)?;
        self.is_reduced(&w)
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        let mut matrix = a.matrix().to_vec();
        let mut inverse = a.inverse_matrix().to_vec();
        for &s in b.word() {
            self.right_mul_gen(&mut matrix, s as usize);
            self.left_mul_gen(&mut inverse, s as usize);
        }
        let word = self.normal_word_from_inverse(&inverse);
        Ok(self.element_from_parts(word, matrix, inverse))
    }

    /// `a · s` for a generator `s`.
    pub fn multiply_generator(&self, a: &GroupElement, s: usize) -> Result<GroupElement> {
        self.check(a)?;
        let mut matrix = a.matrix().to_vec();
        let mut inverse = a.inverse_matrix().to_vec();
        self.right_mul_gen(&mut matrix, s);
        self.left_mul_gen(&mut inverse, s);
        let word = self.normal_word_from_inverse(&inverse);
        Ok(self.element_from_parts(word, matrix, inverse))
    }

    pub fn invert(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let word = self.normal_word_from_inverse(a.matrix());
        Ok(self.element_from_parts(word, a.inverse_matrix().to_vec(), a.matrix().to_vec()))
    }

    pub fn length(&self, a: &GroupElement) -> Result<usize> {
        self.check(a)?;
        Ok(a.length())
    }

    /// `s` with `ℓ(s·a) < ℓ(a)`.
    pub fn left_descents(&self, a: &GroupElement) -> Result<Vec<usize>> {
        self.check(a)?;
        Ok((0..self.rank()).filter(|&s| self.column_sign(a.inverse_matrix(), s) == Ordering::Less).collect())
    }

    /// `s` with `ℓ(a·s) < ℓ(a)`.
    pub fn right_descents(&self, a: &GroupElement) -> Result<Vec<usize>> {
        self.check(a)?;
        Ok((0..self.rank()).filter(|&s| self.is_right_descent(a, s)).collect())
    }

    pub(crate) fn is_right_descent(&self, a: &GroupElement, s: usize) -> bool {
        self.column_sign(a.matrix(), s) == Ordering::Less
    }

    /// Image of `a` under the group automorphism induced by a permutation of
    /// the generators preserving the Coxeter matrix.
    pub fn apply_diagram_map(&self, a: &GroupElement, perm: &[usize]) -> Result<GroupElement> {
        self.check(a)?;
        let mapped: Vec<usize> = a.word().iter().map(|&s| perm[s as usize]).collect();
        self.element(&mapped)
    }

    /// Letters of the normal word all lie in `mask`: membership in `W_T`.
    pub fn in_special_subgroup(&self, a: &GroupElement, mask: u64) -> bool {
        a.word().iter().all(|&s| mask >> s & 1 == 1)
    }
}
