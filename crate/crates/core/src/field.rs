//! Scalar fields used to run the same mutation dynamics symbolically, modulo a
//! prime, or in floating point.
//!
//! The [`Field`] trait uses `*_like` constructors instead of associated
//! constants because some fields (rational functions) carry context such as
//! the number of variables.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::matrix::Matrix;

pub trait Field:
    Clone
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    /// Embeds a rational constant; `None` if it cannot be represented
    /// (e.g. its denominator vanishes modulo the prime).
    fn from_rational_like(&self, q: &BigRational) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;

    /// Magnitude used to choose elimination pivots. Exact fields only need to
    /// distinguish zero from nonzero.
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    /// Canonical reduced form; exact rational functions cancel common
    /// factors here, every other field returns `self`.
    fn tidy(self) -> Self {
        self
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.clone() * r)
    }

    fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one_like();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * sq;
            }
        }
        Some(acc)
    }

    /// Determinant of a square matrix. The default is Gaussian elimination
    /// with pivoting by [`Field::pivot_weight`].
    fn det(m: &Matrix<Self>) -> Self {
        crate::matrix::gaussian_det(m)
    }
}

impl Field for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn from_i64_like(&self, v: i64) -> Self {
        v as f64
    }
    fn from_rational_like(&self, q: &BigRational) -> Option<Self> {
        q.to_f64()
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn pivot_weight(&self) -> f64 {
        self.abs()
    }
}

impl Field for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rational_like(&self, q: &BigRational) -> Option<Self> {
        q.to_f64().map(|x| Complex64::new(x, 0.0))
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn inv(&self) -> Option<Self> {
        (!Field::is_zero(self)).then(|| self.inv())
    }
    fn pivot_weight(&self) -> f64 {
        self.norm()
    }
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_i64_like(&self, v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational_like(&self, q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// Largest prime below 2^62.
pub const DEFAULT_MODULUS: u64 = (1u64 << 62) - 57;

/// Environment variable that overrides the prime used by modular checks.
pub const MODULUS_ENV: &str = "CLUSTER_NZ_MODULUS";

static MODULUS: OnceLock<u64> = OnceLock::new();

/// The prime used by [`Fp`], read once per process.
pub fn modulus() -> u64 {
    *MODULUS.get_or_init(|| {
        std::env::var(MODULUS_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&p| p > 2 && p < (1u64 << 63))
            .unwrap_or(DEFAULT_MODULUS)
    })
}

/// Element of the prime field of size [`modulus()`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp(u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % modulus())
    }

    pub fn from_i64(v: i64) -> Self {
        let p = modulus() as i128;
        Fp((v as i128).rem_euclid(p) as u64)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        let p = BigInt::from(modulus());
        let r = v.mod_floor(&p);
        Fp(r.to_u64().expect("reduced residue fits in u64"))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..modulus()))
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let p = modulus() as u128;
        Fp(((self.0 as u128 + rhs.0 as u128) % p) as u64)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let p = modulus() as u128;
        Fp(((self.0 as u128 + p - rhs.0 as u128) % p) as u64)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let p = modulus() as u128;
        Fp(((self.0 as u128 * rhs.0 as u128) % p) as u64)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(modulus() - self.0)
        }
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp(0)
    }
    fn one_like(&self) -> Self {
        Fp(1)
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Fp::from_i64(v)
    }
    fn from_rational_like(&self, q: &BigRational) -> Option<Self> {
        let num = Fp::from_bigint(q.numer());
        let den = Fp::from_bigint(q.denom());
        den.inv().map(|d| num * d)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // extended Euclid; works for any modulus coprime to the value
        let p = modulus() as i128;
        let (mut r0, mut r1) = (p, self.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        (r0 == 1).then(|| Fp(t0.rem_euclid(p) as u64))
    }
}

/// Upper bounds on the total degrees of a numerator/denominator
/// representation of a rational function.
///
/// Running a computation over this "field" bounds the degree of the result
/// without computing it. Used to state Schwartz-Zippel failure probabilities
/// for modular identity checks. `num == None` marks the exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBound {
    pub num: Option<u64>,
    pub den: u64,
}

impl DegreeBound {
    pub const ZERO: DegreeBound = DegreeBound { num: None, den: 0 };
    pub const CONST: DegreeBound = DegreeBound { num: Some(0), den: 0 };

    pub fn new(num: u64, den: u64) -> Self {
        DegreeBound { num: Some(num), den }
    }

    /// Bound on the numerator degree of `self - other` after clearing
    /// denominators, i.e. the polynomial a Schwartz-Zippel test samples.
    pub fn difference_degree(&self, other: &DegreeBound) -> u64 {
        let a = self.num.unwrap_or(0) + other.den;
        let b = other.num.unwrap_or(0) + self.den;
        a.max(b)
    }
}

impl Add for DegreeBound {
    type Output = DegreeBound;
    fn add(self, rhs: DegreeBound) -> DegreeBound {
        match (self.num, rhs.num) {
            (None, _) => rhs,
            (_, None) => self,
            (Some(a), Some(b)) => DegreeBound {
                num: Some((a + rhs.den).max(b + self.den)),
                den: self.den + rhs.den,
            },
        }
    }
}

impl Sub for DegreeBound {
    type Output = DegreeBound;
    fn sub(self, rhs: DegreeBound) -> DegreeBound {
        self + rhs
    }
}

impl Mul for DegreeBound {
    type Output = DegreeBound;
    fn mul(self, rhs: DegreeBound) -> DegreeBound {
        match (self.num, rhs.num) {
            (Some(a), Some(b)) => DegreeBound {
                num: Some(a + b),
                den: self.den + rhs.den,
            },
            _ => DegreeBound::ZERO,
        }
    }
}

impl Neg for DegreeBound {
    type Output = DegreeBound;
    fn neg(self) -> DegreeBound {
        self
    }
}

impl Field for DegreeBound {
    fn zero_like(&self) -> Self {
        DegreeBound::ZERO
    }
    fn one_like(&self) -> Self {
        DegreeBound::CONST
    }
    fn from_i64_like(&self, v: i64) -> Self {
        if v == 0 {
            DegreeBound::ZERO
        } else {
            DegreeBound::CONST
        }
    }
    fn from_rational_like(&self, q: &BigRational) -> Option<Self> {
        Some(if Zero::is_zero(q) {
            DegreeBound::ZERO
        } else {
            DegreeBound::CONST
        })
    }
    fn is_zero(&self) -> bool {
        self.num.is_none()
    }
    fn inv(&self) -> Option<Self> {
        self.num.map(|n| DegreeBound {
            num: Some(self.den),
            den: n,
        })
    }

    /// Leibniz bound: put each row over the product of its denominators.
    fn det(m: &Matrix<Self>) -> Self {
        let n = m.rows();
        let mut num = 0u64;
        let mut den = 0u64;
        for i in 0..n {
            let row_den: u64 = (0..n).map(|j| m[(i, j)].den).sum();
            let row_num = (0..n)
                .filter_map(|j| m[(i, j)].num.map(|a| a + row_den - m[(i, j)].den))
                .max();
            match row_num {
                Some(r) => num += r,
                None => return DegreeBound::ZERO,
            }
            den += row_den;
        }
        DegreeBound::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_u64(n: u64) -> bool {
        // deterministic Miller-Rabin for 64-bit inputs
        if n < 2 {
            return false;
        }
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if n % p == 0 {
                return n == p;
            }
        }
        let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
        let powmod = |mut a: u64, mut e: u64| {
            let mut r = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    r = mulmod(r, a);
                }
                a = mulmod(a, a);
                e >>= 1;
            }
            r
        };
        let (mut d, mut s) = (n - 1, 0);
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = powmod(a, d);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 1..s {
                x = mulmod(x, x);
                if x == n - 1 {
                    continue 'witness;
                }
            }
            return false;
        }
        true
    }

    #[test]
    fn default_modulus_is_prime_and_large() {
        assert!(is_prime_u64(DEFAULT_MODULUS));
        assert!(DEFAULT_MODULUS > 1u64 << 60);
        assert!(((DEFAULT_MODULUS + 1)..(1u64 << 62)).all(|q| !is_prime_u64(q)));
    }

    #[test]
    fn fp_inverse_round_trip() {
        for v in [1i64, 2, 3, -1, 123456789, -987654321] {
            let x = Fp::from_i64(v);
            assert_eq!(x * x.inv().unwrap(), Fp::from_i64(1));
        }
        assert!(Fp::from_i64(0).inv().is_none());
    }

    #[test]
    fn fp_rational_embedding() {
        let q = BigRational::new(BigInt::from(3), BigInt::from(7));
        let x = Fp(0).from_rational_like(&q).unwrap();
        assert_eq!(x * Fp::from_i64(7), Fp::from_i64(3));
    }

    #[test]
    fn pow_handles_negative_exponents() {
        assert_eq!(2.0f64.pow(-2), Some(0.25));
        assert_eq!(0.0f64.pow(-1), None);
        assert_eq!(3.0f64.pow(0), Some(1.0));
    }

    #[test]
    fn degree_bound_arithmetic() {
        let y = DegreeBound::new(1, 0);
        let one = DegreeBound::CONST;
        // y/(y+1)
        let z = y * (y + one).inv().unwrap();
        assert_eq!(z, DegreeBound::new(1, 1));
        assert_eq!(z.difference_degree(&one), 1);
    }
}
