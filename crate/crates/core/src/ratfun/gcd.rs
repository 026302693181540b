//! Multivariate polynomial gcd by the recursive primitive polynomial
//! remainder sequence.

use super::poly::{Monomial, Poly};

/// Highest-numbered variable occurring in either polynomial.
fn main_var(a: &Poly, b: &Poly) -> Option<usize> {
    (0..a.nvars())
        .rev()
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

/// Coefficients of `p` viewed as a univariate polynomial in `v`.
fn coeffs_in(p: &Poly, v: usize) -> Vec<Poly> {
    let n = p.nvars();
    let mut out = vec![Poly::zero(n); p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let d = m.0[v] as usize;
        let mut e = m.clone();
        e.0[v] = 0;
        out[d] = out[d].add(&Poly::monomial(n, e, c.clone()));
    }
    out
}

fn leading_coeff_in(p: &Poly, v: usize) -> Poly {
    coeffs_in(p, v).pop().unwrap_or_else(|| Poly::zero(p.nvars()))
}

/// Gcd of the coefficients of `p` with respect to `v`.
fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero(p.nvars());
    for c in coeffs_in(p, v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g
}

fn primitive_in(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    if c.is_zero() {
        return p.clone();
    }
    p.div_exact(&c).expect("content divides its polynomial")
}

/// Pseudo-remainder of `a` by `b` with respect to `v`, without tracking the
/// multiplier (only used up to primitive parts).
fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lcb = leading_coeff_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lcr = leading_coeff_in(&r, v);
        let mut shift = Monomial::one(a.nvars());
        shift.0[v] = dr - db;
        r = r.mul(&lcb).sub(&b.mul(&lcr).mul_monomial(&shift));
    }
    r
}

/// Normalized gcd: integer coefficients, content 1, positive leading
/// coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let n = a.nvars();
    if a.is_zero() {
        return b.primitive().0;
    }
    if b.is_zero() {
        return a.primitive().0;
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(n);
    }
    let v = match main_var(a, b) {
        Some(v) => v,
        None => return Poly::one(n),
    };
    if a.degree_in(v) == 0 {
        return gcd(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            break primitive_in(&q, v);
        }
        if r.degree_in(v) == 0 {
            break Poly::one(n);
        }
        p = q;
        q = primitive_in(&r, v);
    };
    g.mul(&c).primitive().0
}
