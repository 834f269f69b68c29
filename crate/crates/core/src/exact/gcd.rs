//! Multivariate gcd over Q by recursive primitive pseudo-remainder sequences,
//! with cheap exits for the shapes that dominate in practice (monomial factors,
//! exact divisibility, linear factors).

use super::monomial::Monomial;
use super::poly::MultiPoly;
use super::ring::Ring;
use super::Rational;

type P = MultiPoly<Rational>;

/// Monic gcd. `gcd(0, 0) = 0`.
pub fn gcd(a: &P, b: &P) -> P {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return P::one();
    }
    let ma = monomial_content(a);
    let mb = monomial_content(b);
    let mg = min_monomial(&ma, &mb);
    let a1 = strip_monomial(a, &ma);
    let b1 = strip_monomial(b, &mb);
    let g = gcd_no_monomial(&a1, &b1);
    if mg.is_one() {
        g
    } else {
        g.mul_monomial(&mg, &Rational::one())
    }
}

pub fn lcm(a: &P, b: &P) -> P {
    if a.is_zero() || b.is_zero() {
        return P::zero();
    }
    let g = gcd(a, b);
    a.div_exact_poly(&g).expect("gcd divides").mul(b).monic()
}

fn monomial_content(a: &P) -> Monomial {
    let mut it = a.terms().keys();
    let mut m = it.next().cloned().unwrap_or_default();
    for k in it {
        if m.is_one() {
            break;
        }
        m = min_monomial(&m, k);
    }
    m
}

fn min_monomial(a: &Monomial, b: &Monomial) -> Monomial {
    let n = a.width().min(b.width());
    let e: Vec<u16> = (0..n).map(|i| a.get(i).min(b.get(i))).collect();
    Monomial::from_exps(&e)
}

fn strip_monomial(a: &P, m: &Monomial) -> P {
    if m.is_one() {
        return a.clone();
    }
    P::from_terms(a.nvars(), a.terms().iter().map(|(k, c)| (k.div(m).unwrap(), c.clone())))
}

fn gcd_no_monomial(a: &P, b: &P) -> P {
    if a.is_constant() || b.is_constant() {
        return P::one();
    }
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if big.div_exact_poly(small).is_some() {
        return small.monic();
    }
    if small != big && small.div_exact_poly(big).is_some() {
        return big.monic();
    }
    if a.total_degree() == Some(1) || b.total_degree() == Some(1) {
        return P::one();
    }
    gcd_rec(a, b)
}

fn used_vars(a: &P) -> Vec<bool> {
    let mut v = vec![false; a.nvars()];
    for m in a.terms().keys() {
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                v[i] = true;
            }
        }
    }
    v
}

fn gcd_rec(a: &P, b: &P) -> P {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return P::one();
    }
    let nv = a.nvars().max(b.nvars());
    let mut ua = used_vars(a);
    let mut ub = used_vars(b);
    ua.resize(nv, false);
    ub.resize(nv, false);
    // A variable present in only one argument cannot occur in the gcd.
    for i in 0..nv {
        if ua[i] && !ub[i] {
            return gcd_rec(&content_in(a, i), b);
        }
        if ub[i] && !ua[i] {
            return gcd_rec(a, &content_in(b, i));
        }
    }
    let v = (0..nv)
        .filter(|&i| ua[i])
        .min_by_key(|&i| (a.degree_in(i).min(b.degree_in(i)), a.degree_in(i) + b.degree_in(i)))
        .expect("nonconstant polynomials use a variable");
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_rec(&ca, &cb);
    let pa = a.div_exact_poly(&ca).expect("content divides");
    let pb = b.div_exact_poly(&cb).expect("content divides");
    let g = prs(pa, pb, v);
    c.mul(&g).monic()
}

/// Gcd of the coefficients of `a` viewed as a polynomial in variable `v`.
fn content_in(a: &P, v: usize) -> P {
    let coeffs = a.coefficients_in(v);
    let mut list: Vec<P> = coeffs.into_values().collect();
    list.sort_by_key(|p| p.len());
    let mut g = P::zero();
    for c in list {
        g = if g.is_zero() { c.monic() } else { gcd(&g, &c) };
        if g.is_constant() {
            return P::one();
        }
    }
    g
}

fn primitive_in(a: &P, v: usize) -> P {
    let c = content_in(a, v);
    a.div_exact_poly(&c).expect("content divides").monic()
}

fn lead_in(a: &P, v: usize) -> (u16, P) {
    let d = a.degree_in(v);
    let mut out = P::zero();
    for (m, c) in a.terms() {
        if m.get(v) == d {
            out.add_term(m.with(v, 0), c);
        }
    }
    (d, out)
}

/// Primitive PRS in variable `v` for inputs primitive in `v`.
fn prs(mut a: P, mut b: P, v: usize) -> P {
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            return primitive_in(&a, v);
        }
        if b.degree_in(v) == 0 {
            return P::one();
        }
        let r = pseudo_rem(&a, &b, v);
        a = b;
        b = if r.is_zero() { r } else { primitive_in(&r, v) };
    }
}

fn pseudo_rem(a: &P, b: &P, v: usize) -> P {
    let (db, lb) = lead_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let (dr, lr) = lead_in(&r, v);
        let shift = Monomial::var_pow(v, dr - db);
        let t = lr.mul(b).mul_monomial(&shift, &Rational::one());
        r = lb.mul(&r).sub(&t);
    }
    r
}
