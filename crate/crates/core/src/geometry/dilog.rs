//! The dilogarithm `Li₂`, the Bloch–Wigner function `D` and the Rogers
//! dilogarithm `L`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const PI2_6: f64 = PI * PI / 6.0;
const SERIES_RADIUS: f64 = 0.5;
const BERNOULLI_TERMS: usize = 30;

/// Coefficients `B_{2k} / (2k+1)!` of the series in `u = -log(1-z)`.
fn bernoulli_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let top = 2 * BERNOULLI_TERMS;
        let mut b = vec![BigRational::one()];
        for m in 1..=top {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                acc += bk * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(BERNOULLI_TERMS);
        for n in 1..=(top + 1) {
            fact *= BigInt::from(n);
            if n % 2 == 1 && n >= 3 {
                let c = &b[n - 1] / BigRational::from_integer(fact.clone());
                out.push(c.to_f64().expect("finite coefficient"));
            }
        }
        out
    })
}

fn power_series(z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = z;
    for k in 1..200u32 {
        let term = p / f64::from(k * k);
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        p *= z;
    }
    sum
}

fn bernoulli_series(z: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    let mut sum = u - u2 / 4.0;
    let mut p = u * u2;
    for &c in bernoulli_coefficients() {
        let term = p * c;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        p *= u2;
    }
    sum
}

/// Principal branch of `Li₂(z)`, analytic off `[1, ∞)`.
pub fn dilog(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    if z == one {
        return Complex64::new(PI2_6, 0.0);
    }
    if z.norm() > 1.0 {
        let l = (-z).ln();
        return -PI2_6 - l * l / 2.0 - dilog(one / z);
    }
    if z.norm() <= SERIES_RADIUS {
        return power_series(z);
    }
    if z.re > 0.5 {
        return PI2_6 - z.ln() * (one - z).ln() - dilog(one - z);
    }
    bernoulli_series(z)
}

/// `D(z) = Im Li₂(z) + arg(1-z) log|z|`, zero on the real line.
pub fn bloch_wigner(z: Complex64) -> Result<f64> {
    if z.norm() == 0.0 || (z - 1.0).norm() == 0.0 {
        return Err(Error::DomainError(format!("Bloch-Wigner function at {z}")));
    }
    if z.im == 0.0 {
        return Ok(0.0);
    }
    Ok(dilog(z).im + (Complex64::new(1.0, 0.0) - z).arg() * z.norm().ln())
}

/// `L(x) = Li₂(x) + ½ log x log(1-x)` for `0 < x < 1`.
pub fn rogers(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::DomainError(format!("Rogers dilogarithm at {x}")));
    }
    Ok(dilog(Complex64::new(x, 0.0)).re + 0.5 * x.ln() * (1.0 - x).ln())
}
