//! Univariate factoring over `F_p`, `p = 2^61 - 1`.
//!
//! Used only as a bucketing hash for shared-component detection: two curves
//! whose specializations at a fixed abscissa share no factor modulo `p`
//! share no component. Every positive answer is re-checked exactly.
//!
//! Factoring is squarefree reduction, distinct-degree splitting and
//! Cantor–Zassenhaus equal-degree splitting driven by a seeded SplitMix64.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use crate::exact::BiPoly;
use crate::rng::SplitMix64;

pub const P: u64 = (1 << 61) - 1;

/// Abscissa at which curves are specialized.
pub const ANCHOR: u64 = 0x0123_4567_89ab_cdef % P;

#[inline]
fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

/// Reduction of a 128-bit value modulo the Mersenne prime.
#[inline]
fn fold(x: u128) -> u64 {
    let lo = (x as u64 & P) as u128;
    let hi = x >> 61;
    let once = lo + (hi & P as u128) + (hi >> 61);
    let twice = (once as u64 & P) + (once >> 61) as u64;
    if twice >= P {
        twice - P
    } else {
        twice
    }
}

/// Product modulo the Mersenne prime: `2^61 = 1`, so the high and low
/// 61-bit halves of the product are added.
#[inline]
fn mul(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    let folded = (x as u64 & P) + (x >> 61) as u64;
    let once = (folded & P) + (folded >> 61);
    if once >= P {
        once - P
    } else {
        once
    }
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce(v: &BigInt) -> u64 {
    let r = (v % BigInt::from(P)).to_i128().expect("residue fits");
    if r < 0 {
        (r + P as i128) as u64
    } else {
        r as u64
    }
}

/// Dense polynomial, low degree first, no trailing zeros.
pub type Poly = Vec<u64>;

fn trim(mut f: Poly) -> Poly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn deg(f: &[u64]) -> isize {
    f.len() as isize - 1
}

fn monic(f: &[u64]) -> Poly {
    match f.last() {
        None => Vec::new(),
        Some(&l) => {
            let li = inv(l);
            f.iter().map(|&c| mul(c, li)).collect()
        }
    }
}

fn poly_sub(a: &[u64], b: &[u64]) -> Poly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        *o = sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0));
    }
    trim(out)
}

#[cfg(test)]
fn poly_mul(a: &[u64], b: &[u64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add(out[i + j], mul(x, y));
        }
    }
    trim(out)
}

fn div_rem(a: &[u64], m: &[u64]) -> (Poly, Poly) {
    assert!(!m.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    if r.len() < m.len() {
        return (Vec::new(), trim(r));
    }
    let li = inv(*m.last().expect("nonzero"));
    let dm = m.len() - 1;
    let mut q = vec![0; r.len() - dm];
    for top in (dm..r.len()).rev() {
        let c = mul(r[top], li);
        if c == 0 {
            continue;
        }
        q[top - dm] = c;
        for (k, &mk) in m.iter().enumerate() {
            let idx = top - dm + k;
            r[idx] = sub(r[idx], mul(c, mk));
        }
    }
    r.truncate(dm);
    (trim(q), trim(r))
}

fn rem(a: &[u64], m: &[u64]) -> Poly {
    div_rem(a, m).1
}

fn gcd(a: &[u64], b: &[u64]) -> Poly {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

fn derivative(f: &[u64]) -> Poly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul(c, i as u64 % P))
            .collect(),
    )
}

/// Residue arithmetic modulo a fixed monic polynomial, with residues held
/// as length-`deg m` coefficient vectors.
struct Modulus {
    m: Poly,
    n: usize,
    prod: Vec<u64>,
}

impl Modulus {
    fn new(m: &[u64]) -> Self {
        let m = monic(m);
        let n = m.len() - 1;
        assert!((1..64).contains(&n), "modulus degree {n} outside 1..64");
        Self {
            m,
            n,
            prod: vec![0; 2 * n - 1],
        }
    }

    fn residue(&self, a: &[u64]) -> Vec<u64> {
        let mut r = rem(a, &self.m);
        r.resize(self.n, 0);
        r
    }

    fn mul_into(&mut self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let n = self.n;
        let prod = &mut self.prod;
        // each partial sum stays below n * 2^122
        for (k, slot) in prod.iter_mut().enumerate() {
            let lo = k.saturating_sub(n - 1);
            let hi = k.min(n - 1);
            let mut acc: u128 = 0;
            for i in lo..=hi {
                acc += a[i] as u128 * b[k - i] as u128;
            }
            *slot = fold(acc);
        }
        for top in (n..2 * n - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            for k in 0..n {
                let idx = top - n + k;
                prod[idx] = sub(prod[idx], mul(c, self.m[k]));
            }
        }
        out.copy_from_slice(&prod[..n]);
    }

    fn pow(&mut self, base: &[u64], exp: &BigUint) -> Poly {
        let base = self.residue(base);
        let mut acc = self.residue(&[1]);
        let mut tmp = vec![0; self.n];
        for i in (0..exp.bits()).rev() {
            self.mul_into(&acc, &acc, &mut tmp);
            std::mem::swap(&mut acc, &mut tmp);
            if exp.bit(i) {
                self.mul_into(&acc, &base, &mut tmp);
                std::mem::swap(&mut acc, &mut tmp);
            }
        }
        trim(acc)
    }
}

fn pow_mod(base: &[u64], exp: &BigUint, m: &[u64]) -> Poly {
    Modulus::new(m).pow(base, exp)
}

/// Squarefree part of a monic polynomial (`deg f < p`).
fn squarefree(f: &[u64]) -> Poly {
    let g = gcd(f, &derivative(f));
    if deg(&g) <= 0 {
        f.to_vec()
    } else {
        monic(&div_rem(f, &g).0)
    }
}

/// Pairs `(g, d)` where `g` is the product of all degree-`d` irreducible
/// factors of the squarefree monic `f`.
fn distinct_degree(f: &[u64]) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x: Poly = vec![0, 1];
    let mut h = rem(&x, &rest);
    let p = BigUint::from(P);
    let mut d = 1;
    while deg(&rest) >= 2 * d as isize {
        h = pow_mod(&h, &p, &rest);
        let g = gcd(&poly_sub(&h, &x), &rest);
        if deg(&g) > 0 {
            rest = monic(&div_rem(&rest, &g).0);
            h = rem(&h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if deg(&rest) > 0 {
        let dr = deg(&rest) as usize;
        out.push((rest, dr));
    }
    out
}

fn equal_degree(f: Poly, d: usize, rng: &mut SplitMix64, out: &mut Vec<Poly>) {
    let n = deg(&f) as usize;
    if n == d {
        out.push(f);
        return;
    }
    let exp = (BigUint::from(P).pow(d as u32) - BigUint::one()) >> 1;
    loop {
        let a: Poly = trim((0..n).map(|_| rng.below(P)).collect());
        if deg(&a) <= 0 {
            continue;
        }
        let b = poly_sub(&pow_mod(&a, &exp, &f), &[1]);
        let u = gcd(&b, &f);
        if deg(&u) > 0 && deg(&u) < n as isize {
            let v = monic(&div_rem(&f, &u).0);
            equal_degree(u, d, rng, out);
            equal_degree(v, d, rng, out);
            return;
        }
    }
}

/// Distinct monic irreducible factors of `f`, sorted.
pub fn factor_keys(f: &[u64]) -> Vec<Poly> {
    let f = monic(&trim(f.to_vec()));
    if deg(&f) <= 0 {
        return Vec::new();
    }
    let mut rng = SplitMix64::new(0x5eed_f00d);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&squarefree(&f)) {
        equal_degree(g, d, &mut rng, &mut out);
    }
    out.sort();
    out
}

/// `F(ANCHOR, x')` modulo `p` for an integer-coefficient `F`, or `None`
/// when the specialization drops degree in `x'`.
pub fn specialize(f: &BiPoly) -> Option<Poly> {
    let dy = f.degree_y()? as usize;
    let mut out = vec![0u64; dy + 1];
    for (&(i, j), c) in f.terms() {
        assert!(c.is_integer(), "specialize expects integer coefficients");
        let v = mul(reduce(c.numer()), pow(ANCHOR, i as u64));
        out[j as usize] = add(out[j as usize], v);
    }
    let out = trim(out);
    (deg(&out) == dy as isize && dy > 0).then_some(out)
}

/// Keys of `F(ANCHOR, x')`; `None` when the specialization is degenerate.
pub fn curve_keys(f: &BiPoly) -> Option<Vec<Poly>> {
    specialize(f).map(|s| factor_keys(&s))
}
