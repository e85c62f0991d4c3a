//! Exact arithmetic in the real cyclotomic field `Q(c)`, `c = 2cos(π/N)`.
//!
//! Every entry of a generator reflection matrix is an integer polynomial in
//! `c`, so elements are stored as integer coefficient vectors of length
//! `degree` (low order first), reduced modulo the minimal polynomial of `c`.
//! Since that polynomial is monic with integer coefficients, `Z[c]` is closed
//! under the operations used here and no denominators ever appear.
//!
//! Signs are decided by a floating-point evaluation with a conservative error
//! margin, falling back to exact rational interval arithmetic around a
//! bracketing interval of `c` that is bisected until the sign is certain.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

const OVERFLOW: &str = "coefficient overflow in Q(c) arithmetic (i128 exceeded)";

#[inline]
pub(crate) fn cmul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect(OVERFLOW)
}

#[inline]
pub(crate) fn cadd(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect(OVERFLOW)
}

/// The field `Q(2cos(π/N))` together with everything needed to compute in it.
#[derive(Clone, Debug)]
pub struct NumberField {
    order: u64,
    degree: usize,
    /// Monic minimal polynomial of `c`, low order first, length `degree + 1`.
    modulus: Vec<i128>,
    /// `c^(degree + k) mod modulus` for `k = 0 .. degree - 1`.
    reduction: Vec<Vec<i128>>,
    powers: Vec<f64>,
    bracket: (BigRational, BigRational),
}

/// Serializable description of the ground field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldModulus {
    pub order: u64,
    pub coefficients: Vec<i128>,
}

impl NumberField {
    /// Builds `Q(2cos(π/order))`. `order = 1` gives `c = -2`, i.e. the rationals.
    pub fn new(order: u64) -> Self {
        assert!(order >= 1);
        let modulus = if order == 1 { vec![2, 1] } else { minimal_polynomial(order) };
        let degree = modulus.len() - 1;

        let mut reduction: Vec<Vec<i128>> = Vec::new();
        if degree > 1 {
            // c^d = -sum_{i<d} m_i c^i
            let mut cur: Vec<i128> = modulus[..degree].iter().map(|&m| -m).collect();
            reduction.push(cur.clone());
            for _ in 1..degree - 1 {
                // multiply by c
                let top = cur[degree - 1];
                let mut next = vec![0i128; degree];
                for i in (1..degree).rev() {
                    next[i] = cur[i - 1];
                }
                for i in 0..degree {
                    next[i] = cadd(next[i], cmul(top, -modulus[i]));
                }
                cur = next;
                reduction.push(cur.clone());
            }
        }

        let approx = 2.0 * (std::f64::consts::PI / order as f64).cos();
        let powers = (0..degree.max(1)).map(|i| approx.powi(i as i32)).collect();

        let mut field = NumberField {
            order,
            degree,
            modulus,
            reduction,
            powers,
            bracket: (BigRational::zero(), BigRational::zero()),
        };
        field.bracket = field.initial_bracket(approx);
        field
    }

    /// Like [`NumberField::new`], but built at most once per `order` in a
    /// process.
    pub fn shared(order: u64) -> Self {
        static CACHE: OnceLock<Mutex<HashMap<u64, NumberField>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
        map.entry(order).or_insert_with(|| NumberField::new(order)).clone()
    }

    /// `N` such that the generator of the field is `2cos(π/N)`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Minimal polynomial of `c`, low order first.
    pub fn modulus(&self) -> &[i128] {
        &self.modulus
    }

    pub fn describe(&self) -> FieldModulus {
        FieldModulus { order: self.order, coefficients: self.modulus.clone() }
    }

    /// Floating-point value of `c`.
    pub fn approx_generator(&self) -> f64 {
        2.0 * (std::f64::consts::PI / self.order as f64).cos()
    }

    /// Rational interval containing `c` and no other root of the modulus.
    pub fn bracket(&self) -> &(BigRational, BigRational) {
        &self.bracket
    }

    fn initial_bracket(&self, approx: f64) -> (BigRational, BigRational) {
        if self.degree == 1 {
            let root = BigRational::from_integer(BigInt::from(-self.modulus[0]));
            return (root.clone(), root);
        }
        // order >= 4 here: the root just below c is 2cos(3π/N) < 2cos(π/(N-1)) < c < 2.
        let lo_f = 2.0 * (std::f64::consts::PI / (self.order - 1) as f64).cos();
        let mut lo = BigRational::from_float(lo_f).expect("finite");
        let mut hi = BigRational::from_integer(BigInt::from(2));
        let s_lo = self.eval_modulus_sign(&lo);
        let s_hi = self.eval_modulus_sign(&hi);
        assert!(
            s_lo != Ordering::Equal && s_hi != Ordering::Equal && s_lo != s_hi,
            "minimal polynomial does not change sign around 2cos(π/{})",
            self.order
        );
        debug_assert!(lo_f < approx);
        // Tighten to width 2^-64 once, so the slow path rarely bisects further.
        let target = BigRational::new(BigInt::one(), BigInt::one() << 64);
        while &hi - &lo > target {
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            let s_mid = self.eval_modulus_sign(&mid);
            if s_mid == Ordering::Equal {
                return (mid.clone(), mid);
            }
            if s_mid == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    fn eval_modulus_sign(&self, x: &BigRational) -> Ordering {
        let mut acc = BigRational::zero();
        for &coef in self.modulus.iter().rev() {
            acc = acc * x + BigRational::from_integer(BigInt::from(coef));
        }
        acc.cmp(&BigRational::zero())
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.degree])
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i128) -> FieldElem {
        let mut e = vec![0; self.degree];
        e[0] = v;
        FieldElem(e)
    }

    /// The generator `c` itself.
    pub fn generator(&self) -> FieldElem {
        let mut e = self.zero();
        if self.degree == 1 {
            e.0[0] = -self.modulus[0];
        } else {
            e.0[1] = 1;
        }
        e
    }

    /// `2cos(kπ/N)`, computed as the Dickson polynomial `D_k(c)`.
    pub fn two_cos_multiple(&self, k: u64) -> FieldElem {
        let c = self.generator();
        let mut prev = self.from_int(2);
        if k == 0 {
            return prev;
        }
        let mut cur = c.clone();
        for _ in 1..k {
            let next = self.sub(&self.mul(&c, &cur), &prev);
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `2cos(π/m)` for a divisor `m` of the field order.
    pub fn two_cos_pi_over(&self, m: u64) -> FieldElem {
        assert!(self.order % m == 0, "label {m} does not divide field order {}", self.order);
        self.two_cos_multiple(self.order / m)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| cadd(x, y)).collect())
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().zip(&b.0).map(|(&x, &y)| x.checked_sub(y).expect(OVERFLOW)).collect())
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|&x| -x).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let mut out = vec![0; self.degree];
        self.mul_add_into(&mut out, &a.0, &b.0);
        FieldElem(out)
    }

    /// `acc += a * b` on raw coefficient slices.
    #[inline]
    pub(crate) fn mul_add_into(&self, acc: &mut [i128], a: &[i128], b: &[i128]) {
        let d = self.degree;
        if d == 1 {
            acc[0] = cadd(acc[0], cmul(a[0], b[0]));
            return;
        }
        let mut prod = [0i128; 64];
        let prod: &mut [i128] = if 2 * d - 1 <= 64 { &mut prod[..2 * d - 1] } else { unreachable_big(d) };
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = cadd(prod[i + j], cmul(x, y));
                }
            }
        }
        for i in 0..d {
            acc[i] = cadd(acc[i], prod[i]);
        }
        for (k, row) in self.reduction.iter().enumerate() {
            let p = prod[d + k];
            if p != 0 {
                for i in 0..d {
                    acc[i] = cadd(acc[i], cmul(p, row[i]));
                }
            }
        }
    }

    pub fn is_zero(&self, a: &[i128]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Exact sign of a field element.
    pub fn sign(&self, a: &[i128]) -> Ordering {
        if self.is_zero(a) {
            return Ordering::Equal;
        }
        if self.degree == 1 {
            return a[0].cmp(&0);
        }
        let mut value = 0.0f64;
        let mut scale = 0.0f64;
        for (&coef, &p) in a.iter().zip(&self.powers) {
            let term = coef as f64 * p;
            value += term;
            scale += term.abs();
        }
        if value.abs() > 1e-9 * scale {
            return if value > 0.0 { Ordering::Greater } else { Ordering::Less };
        }
        self.sign_exact(a)
    }

    fn sign_exact(&self, a: &[i128]) -> Ordering {
        let (mut lo, mut hi) = self.bracket.clone();
        let s_lo = self.eval_modulus_sign(&lo);
        let two = BigRational::from_integer(BigInt::from(2));
        loop {
            // lo > 0 whenever degree > 1
            let mut min = BigRational::zero();
            let mut max = BigRational::zero();
            let mut plo = BigRational::one();
            let mut phi = BigRational::one();
            for &coef in a {
                let c = BigRational::from_integer(BigInt::from(coef));
                if coef >= 0 {
                    min += &c * &plo;
                    max += &c * &phi;
                } else {
                    min += &c * &phi;
                    max += &c * &plo;
                }
                plo = plo * &lo;
                phi = phi * &hi;
            }
            if min.is_positive() {
                return Ordering::Greater;
            }
            if max.is_negative() {
                return Ordering::Less;
            }
            let mid = (&lo + &hi) / &two;
            let s_mid = self.eval_modulus_sign(&mid);
            if s_mid == Ordering::Equal {
                lo = mid.clone();
                hi = mid;
            } else if s_mid == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    pub fn to_f64(&self, a: &[i128]) -> f64 {
        a.iter().zip(&self.powers).map(|(&c, &p)| c as f64 * p).sum()
    }
}

#[cold]
fn unreachable_big(d: usize) -> &'static mut [i128] {
    panic!("field degree {d} exceeds the supported maximum of 32")
}

/// Element of `Z[c]` as integer coefficients, low order first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElem(pub Vec<i128>);

impl FieldElem {
    pub fn coefficients(&self) -> &[i128] {
        &self.0
    }
}

/// Integer polynomial helpers, low order first.
fn poly_trim(p: &mut Vec<i128>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = *den.last().unwrap();
    assert_eq!(lead.abs(), 1);
    let mut quot = vec![0i128; num.len() + 1 - dl];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dl - 1] * lead;
        quot[i] = q;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= q * d;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "cyclotomic division left a remainder");
    poly_trim(&mut quot);
    quot
}

fn cyclotomic(n: u64, memo: &mut HashMap<u64, Vec<i128>>) -> Vec<i128> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic(d, memo);
            p = poly_div_exact(&p, &phi_d);
        }
    }
    memo.insert(n, p.clone());
    p
}

/// Minimal polynomial of `2cos(π/n)` for `n >= 2`, obtained from the
/// palindromic cyclotomic polynomial `Φ_{2n}(z) = z^d Ψ(z + 1/z)`.
pub fn minimal_polynomial(n: u64) -> Vec<i128> {
    assert!(n >= 2);
    let phi = cyclotomic(2 * n, &mut HashMap::new());
    let two_d = phi.len() - 1;
    assert!(two_d % 2 == 0);
    let d = two_d / 2;
    // Dickson polynomials D_k(x) with D_k(z + 1/z) = z^k + z^-k.
    let mut dickson: Vec<Vec<i128>> = vec![vec![2], vec![0, 1]];
    for k in 2..=d {
        let mut next = vec![0i128; k + 1];
        for (i, &c) in dickson[k - 1].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in dickson[k - 2].iter().enumerate() {
            next[i] -= c;
        }
        dickson.push(next);
    }
    let mut psi = vec![0i128; d + 1];
    psi[0] += phi[d];
    for k in 1..=d {
        for (i, &c) in dickson[k].iter().enumerate() {
            psi[i] += phi[d + k] * c;
        }
    }
    psi
}

/// Euler's totient, used by tests to confirm the degree `φ(2N)/2`.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[allow(dead_code)]
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
