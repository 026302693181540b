//! Exact multivariate rational functions over the rationals.
//!
//! A [`RatFun`] is a numerator/denominator pair of [`Poly`]s. Every operation
//! applies a cheap normalization (integer content, common monomial factor and
//! denominator sign) but does not cancel general common factors; equality is
//! decided by cross-multiplication. [`RatFun::simplify`] cancels the full gcd
//! on request.

mod gcd;
mod parse;
mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{DegreeBound, Field, Fp};
use crate::matrix::Matrix;

pub use gcd::gcd as poly_gcd;
pub use parse::parse_ratfun;
pub use poly::{Monomial, Poly};

#[derive(Clone)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    /// `num / den`, normalized.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if num.nvars() != den.nvars() {
            return Err(Error::ArityMismatch {
                expected: num.nvars(),
                found: den.nvars(),
            });
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        RatFun::normalized(p, Poly::one(n))
    }

    pub fn zero(nvars: usize) -> Self {
        RatFun {
            num: Poly::zero(nvars),
            den: Poly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        RatFun {
            num: Poly::one(nvars),
            den: Poly::one(nvars),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        RatFun::from_poly(Poly::constant(nvars, c))
    }

    pub fn from_i64(nvars: usize, c: i64) -> Self {
        RatFun::from_poly(Poly::from_i64(nvars, c))
    }

    /// The variable `y_{i+1}` (0-based `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        RatFun {
            num: Poly::var(nvars, i),
            den: Poly::one(nvars),
        }
    }

    /// The initial Y-tuple `(y1, ..., yn)`.
    pub fn variables(nvars: usize) -> Vec<RatFun> {
        (0..nvars).map(|i| RatFun::var(nvars, i)).collect()
    }

    pub fn parse(src: &str, nvars: usize) -> Result<Self> {
        parse_ratfun(src, nvars)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Largest total degree of numerator and denominator.
    pub fn total_degree(&self) -> u64 {
        self.num.total_degree().max(self.den.total_degree())
    }

    pub fn degree_bound(&self) -> DegreeBound {
        if self.is_zero() {
            DegreeBound::ZERO
        } else {
            DegreeBound::new(self.num.total_degree(), self.den.total_degree())
        }
    }

    fn normalized(mut num: Poly, mut den: Poly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return RatFun::zero(n);
        }
        if num == den {
            return RatFun::one(n);
        }
        let l = num.denominator_lcm().lcm_with(&den.denominator_lcm());
        if !l.is_one() {
            let s = BigRational::from_integer(l);
            num = num.scale(&s);
            den = den.scale(&s);
        }
        let mut g = num_integer::Integer::gcd(&num.numerator_gcd(), &den.numerator_gcd());
        if den.leading_coefficient().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        if !g.is_one() {
            let s = BigRational::from_integer(g).recip();
            num = num.scale(&s);
            den = den.scale(&s);
        }
        if let (Some(mn), Some(md)) = (num.monomial_content(), den.monomial_content()) {
            let common = mn.gcd(&md);
            if !common.is_one() {
                num = num.div_monomial(&common);
                den = den.div_monomial(&common);
            }
        }
        if num == den {
            return RatFun::one(n);
        }
        RatFun { num, den }
    }

    fn check_arity(&self, other: &RatFun) {
        assert_eq!(
            self.nvars(),
            other.nvars(),
            "rational function arity mismatch"
        );
    }

    fn add_ref(&self, other: &RatFun) -> RatFun {
        self.check_arity(other);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFun::normalized(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatFun::normalized(num, self.den.mul(&other.den))
    }

    fn sub_ref(&self, other: &RatFun) -> RatFun {
        self.add_ref(&other.neg_ref())
    }

    fn neg_ref(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul_ref(&self, other: &RatFun) -> RatFun {
        self.check_arity(other);
        if self.is_zero() || other.is_zero() {
            return RatFun::zero(self.nvars());
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        // cancel literally repeated factors before multiplying out
        let (an, bd) = if self.num == other.den {
            (Poly::one(self.nvars()), Poly::one(self.nvars()))
        } else {
            (self.num.clone(), other.den.clone())
        };
        let (bn, ad) = if other.num == self.den {
            (Poly::one(self.nvars()), Poly::one(self.nvars()))
        } else {
            (other.num.clone(), self.den.clone())
        };
        RatFun::normalized(an.mul(&bn), ad.mul(&bd))
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<RatFun> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = u32::try_from(e.unsigned_abs()).map_err(|_| Error::Overflow)?;
        if k == 0 {
            return Ok(RatFun::one(self.nvars()));
        }
        Ok(RatFun::normalized(base.num.pow(k), base.den.pow(k)))
    }

    /// Exact equality by cross-multiplication.
    pub fn eq_exact(&self, other: &RatFun) -> Result<bool> {
        if self.nvars() != other.nvars() {
            return Err(Error::ArityMismatch {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        if self.den == other.den {
            return Ok(self.num == other.num);
        }
        Ok(self.num.mul(&other.den) == other.num.mul(&self.den))
    }

    /// Probabilistic equality: compares values at `trials` random points of
    /// the prime field, skipping points where a denominator vanishes.
    pub fn eq_modular(&self, other: &RatFun, trials: usize, seed: u64) -> Result<bool> {
        if self.nvars() != other.nvars() {
            return Err(Error::ArityMismatch {
                expected: self.nvars(),
                found: other.nvars(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut usable = 0;
        for _ in 0..trials.max(1) {
            let point: Vec<Fp> = (0..self.nvars().max(1)).map(|_| Fp::random(&mut rng)).collect();
            let point = &point[..self.nvars()];
            let (a, b) = match (self.eval_fp(point), other.eval_fp(point)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            usable += 1;
            if a != b {
                return Ok(false);
            }
        }
        if usable == 0 {
            return Err(Error::AllPointsSingular);
        }
        Ok(true)
    }

    fn eval_fp(&self, point: &[Fp]) -> Result<Fp> {
        if point.is_empty() {
            let c = |p: &Poly| {
                p.constant_value()
                    .and_then(|q| Fp::new(0).from_rational_like(&q))
                    .ok_or(Error::SingularPoint)
            };
            let d = c(&self.den)?;
            return Field::inv(&d)
                .map(|di| c(&self.num).map(|n| n * di))
                .unwrap_or(Err(Error::SingularPoint));
        }
        self.eval(point)
    }

    /// Evaluates at a point of any field.
    pub fn eval<F: Field>(&self, point: &[F]) -> Result<F> {
        let d = self.den.eval(point)?;
        let di = d.inv().ok_or(Error::SingularPoint)?;
        Ok(self.num.eval(point)? * di)
    }

    /// Cancels the full gcd of numerator and denominator when both have total
    /// degree at most `degree_cap`; otherwise returns the input unchanged.
    pub fn simplify(&self, degree_cap: u64) -> RatFun {
        if self.num.total_degree() > degree_cap || self.den.total_degree() > degree_cap {
            return self.clone();
        }
        let g = poly_gcd(&self.num, &self.den);
        if g.is_constant() {
            return self.clone();
        }
        let num = self.num.div_exact(&g).expect("gcd divides numerator");
        let den = self.den.div_exact(&g).expect("gcd divides denominator");
        RatFun::normalized(num, den)
    }

    /// Partial derivative with respect to the 0-based variable `var`.
    pub fn derivative(&self, var: usize) -> RatFun {
        let num = self
            .num
            .derivative(var)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(var)));
        RatFun::normalized(num, self.den.mul(&self.den))
    }
}

trait LcmWith {
    fn lcm_with(&self, other: &Self) -> Self;
}

impl LcmWith for BigInt {
    fn lcm_with(&self, other: &BigInt) -> BigInt {
        num_integer::Integer::lcm(self, other)
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &RatFun) -> bool {
        self.eq_exact(other).unwrap_or(false)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})/", self.num)?;
        } else {
            write!(f, "{}/", self.num)?;
        }
        // A constant or a single power `y_i^e` needs no parentheses.
        let bare = self.den.is_constant()
            || self.den.leading_term().is_some_and(|(m, c)| {
                self.den.num_terms() == 1 && c.is_one() && m.0.iter().filter(|&&e| e > 0).count() == 1
            });
        if bare {
            write!(f, "{}", self.den)
        } else {
            write!(f, "({})", self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for RatFun {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr for RatFun {
            type Output = RatFun;
            fn $method(self, rhs: RatFun) -> RatFun {
                self.$imp(&rhs)
            }
        }

        impl $tr<&RatFun> for &RatFun {
            type Output = RatFun;
            fn $method(self, rhs: &RatFun) -> RatFun {
                self.$imp(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        self.neg_ref()
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        self.neg_ref()
    }
}

impl Field for RatFun {
    fn zero_like(&self) -> Self {
        RatFun::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        RatFun::one(self.nvars())
    }
    fn from_i64_like(&self, v: i64) -> Self {
        RatFun::from_i64(self.nvars(), v)
    }
    fn from_rational_like(&self, q: &BigRational) -> Option<Self> {
        Some(RatFun::constant(self.nvars(), q.clone()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        RatFun::inv(self).ok()
    }
    fn pow(&self, e: i64) -> Option<Self> {
        RatFun::pow(self, e).ok()
    }
    fn tidy(self) -> Self {
        self.simplify(TIDY_DEGREE_CAP)
    }
    fn det(m: &Matrix<Self>) -> Self {
        det_ratfun(m).tidy()
    }
}

/// Degree up to which [`Field::tidy`] cancels polynomial gcds.
pub const TIDY_DEGREE_CAP: u64 = 400;

/// Exact determinant. Cofactor expansion up to size 3; beyond that
/// Gaussian elimination over the fraction field, cancelling gcds after
/// every update so intermediate entries stay small.
pub fn det_ratfun(m: &Matrix<RatFun>) -> RatFun {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    assert!(n > 0, "determinant of a 0x0 rational-function matrix");
    if n <= 3 {
        let idx: Vec<usize> = (0..n).collect();
        return laplace(m, 0, &idx);
    }
    eliminate(m)
}

/// Pivots on the entry of smallest total degree in each column.
fn eliminate(m: &Matrix<RatFun>) -> RatFun {
    let n = m.rows();
    let nv = m[(0, 0)].nvars();
    let mut a: Vec<Vec<RatFun>> = m.to_rows();
    let mut det = RatFun::one(nv);
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].num().total_degree() + a[i][k].den().total_degree());
        let Some(p) = pivot else {
            return RatFun::zero(nv);
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let inv = a[k][k].inv().expect("nonzero pivot");
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = (&a[i][k] * &inv).tidy();
            for j in k + 1..n {
                if !a[k][j].is_zero() {
                    a[i][j] = (&a[i][j] - &(&f * &a[k][j])).tidy();
                }
            }
        }
        det = (&det * &a[k][k]).tidy();
    }
    det
}

fn laplace(m: &Matrix<RatFun>, row: usize, cols: &[usize]) -> RatFun {
    let nv = m[(0, 0)].nvars();
    if cols.len() == 1 {
        return m[(row, cols[0])].clone();
    }
    let mut acc = RatFun::zero(nv);
    for (k, &c) in cols.iter().enumerate() {
        let e = &m[(row, c)];
        if e.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(m, row + 1, &rest);
        if minor.is_zero() {
            continue;
        }
        let term = e * &minor;
        acc = if k % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> RatFun {
        RatFun::parse(s, n).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!((p("y1", 1) + RatFun::one(1)).to_string(), "y1 + 1");
        let a = p("y1/(y1+1)", 1) + p("1/(y1+1)", 1);
        assert!(a.is_one());
        assert_eq!(a.to_string(), "1");
        let b = p("(y1+1)/y2", 2) * p("y2/(y1+1)", 2);
        assert_eq!(b.to_string(), "1");
        assert_eq!(p("y1", 1).div(&RatFun::zero(1)).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn pow_examples() {
        assert_eq!(p("y1", 1).pow(0).unwrap().to_string(), "1");
        assert_eq!(p("y1+1", 1).pow(2).unwrap().to_string(), "y1^2 + 2*y1 + 1");
        assert_eq!(
            p("y1/(y1+1)", 1).pow(-1).unwrap().to_string(),
            "(y1 + 1)/y1"
        );
        assert_eq!(RatFun::zero(1).pow(-1).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn normalization_cancels_content_monomials_and_sign() {
        let r = RatFun::new(
            p("-6*y1^2*y2 - 6*y1*y2", 2).num().clone(),
            p("-4*y1*y2^2", 2).num().clone(),
        )
        .unwrap();
        assert_eq!(r.to_string(), "(3*y1 + 3)/(2*y2)");
        let half = p("1/2 + y1/3", 1);
        assert_eq!(half.to_string(), "(2*y1 + 3)/6");
    }

    #[test]
    fn exact_equality() {
        assert!(p("y1/y1", 1).eq_exact(&RatFun::one(1)).unwrap());
        assert!(!p("y1", 2).eq_exact(&p("y2", 2)).unwrap());
        assert!(p("y1", 1).eq_exact(&p("y1", 2)).is_err());
        let lhs = p("(4 + 4*y2 + 3*y1*y2)/(1 + y2 + y1*y2)", 2);
        let rhs = p("(8 + 8*y2 + 6*y1*y2)*(1 + y1)/((2 + 2*y2 + 2*y1*y2)*(1+y1))", 2);
        assert!(lhs.eq_exact(&rhs).unwrap());
    }

    #[test]
    fn modular_equality() {
        let a = p("(y1^2 - 1)/(y1 - 1)", 1);
        assert!(a.eq_modular(&a, 5, 7).unwrap());
        assert!(a.eq_modular(&p("y1 + 1", 1), 5, 7).unwrap());
        assert!(!p("y1+1", 1).eq_modular(&p("y1+2", 1), 1, 0).unwrap());
    }

    #[test]
    fn simplify_cancels_gcd() {
        let a = p("(y1^2 - 1)/(y1 - 1)", 1);
        assert_eq!(a.simplify(10).to_string(), "y1 + 1");
        assert_eq!(a.simplify(1).to_string(), a.to_string());
        assert_eq!(p("(y1*y2)/y1", 2).to_string(), "y2");
    }

    #[test]
    fn eval_and_singular_points() {
        let f = p("y1/(y1+1)", 1);
        let one = BigRational::one();
        assert_eq!(f.eval(&[one.clone()]).unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(f.eval(&[-one]).unwrap_err(), Error::SingularPoint);
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["3*y1*y2 + 4*y2 + 4", "(y1^2 + 2*y1 + 1)/(y1*y2)", "-y1 + 1", "0"] {
            let r = p(s, 2);
            assert_eq!(RatFun::parse(&r.to_string(), 2).unwrap().to_string(), r.to_string());
        }
        assert!(RatFun::parse("y3", 2).is_err());
        assert!(RatFun::parse("y1 +", 2).is_err());
    }

    #[test]
    fn determinant_small_and_large_agree() {
        let entries: Vec<Vec<RatFun>> = (0..5)
            .map(|i| {
                (0..5)
                    .map(|j| {
                        if i == j {
                            p("2", 2)
                        } else if (i + j) % 2 == 0 {
                            p("y1/(y1+1)", 2)
                        } else if i < j {
                            p("1/(1 + y2)", 2)
                        } else {
                            RatFun::zero(2)
                        }
                    })
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(entries).unwrap();
        let fast = det_ratfun(&m);
        let idx: Vec<usize> = (0..5).collect();
        let slow = laplace(&m, 0, &idx);
        assert!(fast.eq_exact(&slow).unwrap());
    }

    #[test]
    fn two_by_two_determinant_from_tau_example() {
        let m = Matrix::from_rows(vec![
            vec![p("2", 2), p("-y1/(1+y1)", 2)],
            vec![p("-y2*(1+y1)/(1+y2+y1*y2)", 2), p("2", 2)],
        ])
        .unwrap();
        let d = det_ratfun(&m);
        assert!(d.eq_exact(&p("(4+4*y2+3*y1*y2)/(1+y2+y1*y2)", 2)).unwrap());
    }
}
