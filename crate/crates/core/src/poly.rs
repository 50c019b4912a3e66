//! Exact characteristic polynomials with arbitrary-precision coefficients.
//!
//! [`charpoly_exact`] reduces the matrix modulo enough 62-bit primes to cover
//! the coefficient bound `(1 + ρ)^m`, where `ρ` is the largest absolute row sum,
//! computes the polynomial of a Hessenberg form over each prime field and
//! reconstructs the integers by CRT. [`charpoly_berkowitz`] is the
//! division-free reference computed directly over `BigInt`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::matrix::IntMatrix;

/// Monic characteristic polynomial `λ^m + c₁λ^{m−1} + … + c_m`, stored as
/// `[1, c₁, …, c_m]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    /// From descending coefficients; the leading one must be 1.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Option<Self> {
        (coeffs.first() == Some(&BigInt::one())).then_some(CharPoly { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Option<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `Π (λ − r)^k` over `(r, k)` pairs.
    pub fn from_roots(roots: &[(i64, usize)]) -> Self {
        let mut c = vec![BigInt::one()];
        for &(r, k) in roots {
            let r = BigInt::from(r);
            for _ in 0..k {
                c.push(BigInt::zero());
                for i in (1..c.len()).rev() {
                    let t = &c[i - 1] * &r;
                    c[i] -= t;
                }
            }
        }
        CharPoly { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `[1, c₁, …, c_m]`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `c_k`, the coefficient of `λ^{m−k}`.
    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    /// Coefficients that fit in `i64`, if all of them do.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Multiplicity of the root 0.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        horner(&self.coeffs, x)
    }

    /// `ψ(μ) = φ(μ + a)`.
    pub fn shift(&self, a: i64) -> CharPoly {
        CharPoly { coeffs: taylor_shift(&self.coeffs, &BigInt::from(a)) }
    }

    /// Sign of `φ^{(order)}(x)` for the dyadic `x = num / 2^scale`, exact.
    pub fn derivative_sign_at(&self, order: usize, num: &BigInt, scale: u32) -> Ordering {
        let d = derivative(&self.coeffs, order);
        dyadic_sign(&d, num, scale)
    }

    /// Multiplicity of the integer `r` as a root.
    pub fn root_multiplicity(&self, r: i64) -> usize {
        let r = BigInt::from(r);
        let mut c = self.coeffs.clone();
        let mut k = 0;
        while c.len() > 1 {
            let (q, rem) = synthetic_division(&c, &r);
            if !rem.is_zero() {
                break;
            }
            c = q;
            k += 1;
        }
        k
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter().map(|c| c.to_string())).finish()
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.degree();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = m - k;
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = !a.is_one() || p == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match p {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{p}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Serialized as a list of decimal strings.
impl Serialize for CharPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

fn horner(c: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for a in c {
        acc = acc * x + a;
    }
    acc
}

/// Divides by `(x − r)`; returns quotient and remainder.
fn synthetic_division(c: &[BigInt], r: &BigInt) -> (Vec<BigInt>, BigInt) {
    let mut q = Vec::with_capacity(c.len() - 1);
    let mut acc = BigInt::zero();
    for a in c {
        acc = acc * r + a;
        q.push(acc.clone());
    }
    let rem = q.pop().unwrap_or_default();
    (q, rem)
}

/// Descending coefficients of `p(x + a)`.
fn taylor_shift(c: &[BigInt], a: &BigInt) -> Vec<BigInt> {
    let mut out = c.to_vec();
    let n = out.len();
    for i in 0..n {
        for j in 1..n - i {
            let t = &out[j - 1] * a;
            out[j] += t;
        }
    }
    out
}

/// `order`-th derivative, descending coefficients.
fn derivative(c: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut d = c.to_vec();
    for _ in 0..order {
        let deg = d.len() - 1;
        if deg == 0 {
            return vec![BigInt::zero()];
        }
        d = d[..deg].iter().enumerate().map(|(i, a)| a * BigInt::from(deg - i)).collect();
    }
    d
}

/// Sign of `p(num / 2^scale)` computed as `2^{scale·deg} p(num / 2^scale)`.
fn dyadic_sign(c: &[BigInt], num: &BigInt, scale: u32) -> Ordering {
    let mut acc = BigInt::zero();
    for (i, a) in c.iter().enumerate() {
        acc = acc * num + (a << (scale as usize * i));
    }
    // After the loop `acc = Σ a_i num^{deg−i} 2^{scale·i}`.
    acc.sign_ordering()
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        match self.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Writes a finite `f64` as `num / 2^scale` exactly.
pub fn f64_to_dyadic(x: f64) -> (BigInt, u32) {
    assert!(x.is_finite(), "dyadic conversion of a non-finite value");
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let neg = bits >> 63 == 1;
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut mant, mut e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let tz = mant.trailing_zeros() as i64;
    mant >>= tz;
    e += tz;
    let mut num = BigInt::from(mant);
    if neg {
        num = -num;
    }
    if e >= 0 {
        (num << e as usize, 0)
    } else {
        (num, (-e) as u32)
    }
}

/// Characteristic polynomial by Berkowitz's division-free algorithm over
/// `BigInt`. `O(m⁴)` big-integer operations.
pub fn charpoly_berkowitz(a: &IntMatrix) -> CharPoly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let big = |i: usize, j: usize| BigInt::from(a[(i, j)]);
    // `v` holds the polynomial of the leading r×r block, descending.
    let mut v: Vec<BigInt> = vec![BigInt::one()];
    for r in 0..n {
        // Toeplitz column: 1, -a_rr, -R S, -R A S, ..., -R A^{r-1} S.
        let mut col = Vec::with_capacity(r + 2);
        col.push(BigInt::one());
        col.push(-big(r, r));
        let mut s: Vec<BigInt> = (0..r).map(|i| big(i, r)).collect();
        for _ in 0..r {
            let rs: BigInt = (0..r).map(|j| big(r, j) * &s[j]).sum();
            col.push(-rs);
            s = (0..r).map(|i| (0..r).map(|j| big(i, j) * &s[j]).sum()).collect();
        }
        // New polynomial = Toeplitz(col) · v, length r + 2.
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j && i - j < col.len() {
                    *slot += &col[i - j] * vj;
                }
            }
        }
        v = next;
    }
    CharPoly { coeffs: v }
}

/// Characteristic polynomial by multi-modular Hessenberg reduction and CRT.
pub fn charpoly_exact(a: &IntMatrix) -> CharPoly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return CharPoly { coeffs: vec![BigInt::one()] };
    }
    // |c_k| ≤ C(n,k) ρ^k ≤ (1+ρ)^n; the modulus must exceed twice that.
    let rho = a.max_abs_row_sum() as f64;
    let bits = (n as f64 * (1.0 + rho).log2()).ceil() as usize + 2;
    let mut modulus = BigInt::one();
    let mut value: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    for p in primes() {
        if modulus.bits() as usize > bits {
            break;
        }
        let residues = charpoly_mod(a, p);
        let inv = mod_inverse(big_mod(&modulus, p), p);
        let pb = BigInt::from(p);
        for (x, &r) in value.iter_mut().zip(&residues) {
            let cur = big_mod(x, p);
            let t = mul_mod(sub_mod(r, cur, p), inv, p);
            *x += &modulus * BigInt::from(t);
        }
        modulus *= &pb;
    }
    let half = &modulus >> 1usize;
    for x in &mut value {
        if *x > half {
            *x -= &modulus;
        }
    }
    CharPoly { coeffs: value }
}

fn big_mod(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    debug_assert!(a != 0);
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes just below `2^62`, in decreasing order.
fn primes() -> impl Iterator<Item = u64> {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let mut out = Vec::with_capacity(256);
        let mut c = (1u64 << 62) - 1;
        while out.len() < 256 {
            if is_prime(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    });
    let last = *cache.last().unwrap();
    let more = std::iter::successors(Some(last - 2), |&c| Some(c - 2)).filter(|&c| is_prime(c));
    cache.iter().copied().chain(more)
}

/// Characteristic polynomial over `Z/p`, ascending-to-descending as
/// `[1, c₁, …, c_n]` residues.
fn charpoly_mod(a: &IntMatrix, p: u64) -> Vec<u64> {
    let n = a.rows();
    let pi = p as i128;
    let mut h: Vec<Vec<u64>> = (0..n)
        .map(|i| a.row(i).iter().map(|&x| (x as i128).rem_euclid(pi) as u64).collect())
        .collect();
    // Reduce to upper Hessenberg form by similarity.
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = mod_inverse(h[j + 1][j], p);
        for k in j + 2..n {
            if h[k][j] == 0 {
                continue;
            }
            let u = mul_mod(h[k][j], inv, p);
            // row_k -= u * row_{j+1}
            let (top, bottom) = h.split_at_mut(k);
            let src = &top[j + 1];
            let dst = &mut bottom[0];
            for c in 0..n {
                dst[c] = sub_mod(dst[c], mul_mod(u, src[c], p), p);
            }
            // col_{j+1} += u * col_k
            for row in h.iter_mut() {
                row[j + 1] = add_mod(row[j + 1], mul_mod(u, row[k], p), p);
            }
        }
    }
    // p_{k+1}(x) = (x − h_kk) p_k(x) − Σ_{i<k} h_ik (Π_{l=i+1}^{k} h_{l,l−1}) p_i(x),
    // stored ascending.
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = add_mod(next[d + 1], c, p);
            next[d] = sub_mod(next[d], mul_mod(h[k][k], c, p), p);
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = mul_mod(prod, h[i + 1][i], p);
            if prod == 0 {
                break;
            }
            let t = mul_mod(h[i][k], prod, p);
            if t == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = sub_mod(next[d], mul_mod(t, c, p), p);
            }
        }
        polys.push(next);
    }
    let mut out = polys.pop().unwrap();
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn worked_h() -> IntMatrix {
        IntMatrix::from_rows(&crate::graph::named::WORKED_EXAMPLE_H)
    }

    #[test]
    fn worked_example_both_routes() {
        let h = worked_h();
        let expected = CharPoly::from_i64(&crate::graph::named::WORKED_EXAMPLE_CHARPOLY).unwrap();
        assert_eq!(charpoly_exact(&h), expected);
        assert_eq!(charpoly_berkowitz(&h), expected);
        assert_eq!(expected.trailing_zeros(), 1);
    }

    #[test]
    fn small_cases() {
        let k3 = IntMatrix::identity(3).shift_diagonal(2);
        assert_eq!(charpoly_exact(&k3).to_i64().unwrap(), vec![1, -9, 27, -27]);
        let p3 = IntMatrix::from_rows(&[[2, -1], [-1, 2]]);
        assert_eq!(charpoly_exact(&p3).to_i64().unwrap(), vec![1, -4, 3]);
        assert_eq!(charpoly_exact(&IntMatrix::zeros(0, 0)).degree(), 0);
        assert_eq!(charpoly_berkowitz(&IntMatrix::zeros(3, 3)).to_i64().unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn routes_agree_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..14 {
            for _ in 0..4 {
                let rows: Vec<Vec<i64>> =
                    (0..n).map(|_| (0..n).map(|_| rng.gen_range(-40..=40)).collect()).collect();
                let a = IntMatrix::from_rows(&rows);
                let c = charpoly_exact(&a);
                assert_eq!(c, charpoly_berkowitz(&a));
                // Evaluating at an integer gives det(xI − A).
                let x = rng.gen_range(-5i64..=5);
                let shifted = IntMatrix::identity(n).shift_diagonal(x - 1);
                let mut m = shifted.clone();
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = shifted[(i, j)] - a[(i, j)];
                    }
                }
                let det = charpoly_berkowitz(&m).coeff(n).clone() * if n % 2 == 0 { 1 } else { -1 };
                assert_eq!(c.eval(&BigInt::from(x)), det);
            }
        }
    }

    #[test]
    fn large_entries_need_many_primes() {
        let a = IntMatrix::from_rows(&[[1_000_000_007i64, 3, 5], [7, -999_999_937, 11], [13, 17, 123_456_789]]);
        assert_eq!(charpoly_exact(&a), charpoly_berkowitz(&a));
    }

    #[test]
    fn shift_roots_and_display() {
        let p = CharPoly::from_roots(&[(3, 2), (1, 1)]);
        assert_eq!(p.to_i64().unwrap(), vec![1, -7, 15, -9]);
        assert_eq!(p.root_multiplicity(3), 2);
        assert_eq!(p.root_multiplicity(1), 1);
        assert_eq!(p.root_multiplicity(0), 0);
        let q = p.shift(2);
        assert_eq!(q, CharPoly::from_roots(&[(1, 2), (-1, 1)]));
        assert_eq!(format!("{}", CharPoly::from_i64(&[1, -4, 3]).unwrap()), "x^2 - 4x + 3");
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["1","-7","15","-9"]"#);
    }

    #[test]
    fn dyadic_signs() {
        let p = CharPoly::from_roots(&[(3, 1), (1, 1)]);
        let (a, s) = f64_to_dyadic(2.5);
        assert_eq!((a.clone(), s), (BigInt::from(5), 1));
        assert_eq!(p.derivative_sign_at(0, &a, s), Ordering::Less);
        let (b, t) = f64_to_dyadic(3.25);
        assert_eq!(p.derivative_sign_at(0, &b, t), Ordering::Greater);
        assert_eq!(p.derivative_sign_at(1, &BigInt::from(2), 0), Ordering::Equal);
        assert_eq!(f64_to_dyadic(-6.0), (BigInt::from(-6), 0));
    }

    #[test]
    fn primes_are_prime() {
        let ps: Vec<u64> = primes().take(5).collect();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| is_prime(p) && p < 1 << 62));
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(1_000_000_007));
    }
}
