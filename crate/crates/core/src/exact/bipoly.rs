use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::unipoly::write_terms;
use super::{common_denominator, Scalar, UniPoly};
use crate::error::{Error, Result};

/// Sparse bivariate polynomial `sum c_ij * x^i * y^j`.
///
/// For curves of the proximity family the second variable is `x'`; for the
/// conics of the congruence dichotomy the pair is `(x, y)`. Monomials are
/// ordered lexicographically with the first variable dominant, so the
/// leading term is the last key of the map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn term(c: Scalar, i: u32, j: u32) -> Self {
        Self::from_terms([((i, j), c)])
    }

    /// The first variable.
    pub fn x() -> Self {
        Self::term(Scalar::one(), 1, 0)
    }

    /// The second variable.
    pub fn y() -> Self {
        Self::term(Scalar::one(), 0, 1)
    }

    /// Sums repeated exponents and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Scalar)>) -> Self {
        let mut map: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert_with(Scalar::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Self { terms: map }
    }

    /// Lifts `p(x)` into the first variable.
    pub fn from_x(p: &UniPoly) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| ((k as u32, 0), c.clone())),
        )
    }

    /// Lifts `p(y)` into the second variable.
    pub fn from_y(p: &UniPoly) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| ((0, k as u32), c.clone())),
        )
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Scalar {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    /// Maximum `i + j` over stored monomials; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// Leading monomial and coefficient under lex order (first variable dominant).
    pub fn leading_term(&self) -> Option<((u32, u32), &Scalar)> {
        self.terms.iter().next_back().map(|(k, c)| (*k, c))
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let dx = self.degree_x().unwrap_or(0) as usize;
        let dy = self.degree_y().unwrap_or(0) as usize;
        let xp = powers(x, dx);
        let yp = powers(y, dy);
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * &xp[i as usize] * &yp[j as usize])
            .fold(Scalar::zero(), |a, b| a + b)
    }

    pub fn scale(&self, k: &Scalar) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, c * k)))
    }

    /// Exchanges the roles of the two variables.
    pub fn swap_vars(&self) -> BiPoly {
        BiPoly::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    ///
    /// Lex-order division: if `d | self` then every intermediate remainder is
    /// a multiple of `d`, so its leading term is divisible by `lt(d)`.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let ((di, dj), dc) = d.leading_term()?;
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot: Vec<((u32, u32), Scalar)> = Vec::new();
        while let Some(((ri, rj), rc)) = rem.leading_term() {
            if ri < di || rj < dj {
                return None;
            }
            let q = rc / &dc;
            let shift = (ri - di, rj - dj);
            for (&(i, j), c) in &d.terms {
                let key = (i + shift.0, j + shift.1);
                let entry = rem.terms.entry(key).or_insert_with(Scalar::zero);
                *entry -= &q * c;
                if entry.is_zero() {
                    rem.terms.remove(&key);
                }
            }
            quot.push((shift, q));
        }
        Some(BiPoly::from_terms(quot))
    }

    pub fn divides(&self, other: &BiPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Divides by the rational content and fixes the sign: the result has
    /// coprime integer coefficients and a positive lex-leading coefficient.
    pub fn primitive_part(&self) -> Result<BiPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let den = common_denominator(self.terms.values());
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * Scalar::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let lead_negative = ints.last().is_some_and(|v| v.is_negative());
        if lead_negative {
            g = -g;
        }
        Ok(BiPoly {
            terms: self
                .terms
                .keys()
                .zip(ints)
                .map(|(k, v)| (*k, Scalar::from_integer(v / &g)))
                .collect(),
        })
    }

    /// Integer-primitive gcd with positive lex-leading coefficient.
    pub fn gcd(&self, other: &BiPoly) -> Result<BiPoly> {
        super::gcd::bipoly_gcd(self, other)
    }

    /// Writes the polynomial with the given variable names.
    pub fn display_with(&self, names: [&str; 2]) -> String {
        struct Named<'a>(&'a BiPoly, [&'a str; 2]);
        impl fmt::Display for Named<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let terms = self.0.terms.iter().rev().map(|(&(i, j), c)| {
                    let mut parts = Vec::new();
                    for (e, name) in [(i, self.1[0]), (j, self.1[1])] {
                        match e {
                            0 => {}
                            1 => parts.push(name.to_string()),
                            _ => parts.push(format!("{name}^{e}")),
                        }
                    }
                    (c, parts.join("*"))
                });
                write_terms(f, terms)
            }
        }
        Named(self, names).to_string()
    }
}

fn powers(x: &Scalar, max: usize) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(Scalar::one());
    for k in 0..max {
        out.push(&out[k] * x);
    }
    out
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(["x", "x'"]))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(k, c)| (*k, c.clone())),
        )
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .map(|(k, c)| (*k, c.clone()))
                .chain(rhs.terms.iter().map(|(k, c)| (*k, -c))),
        )
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                out.push(((i1 + i2, j1 + j2), a * b));
            }
        }
        BiPoly::from_terms(out)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&-Scalar::one())
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: BiPoly) -> BiPoly {
        &self + &rhs
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        &self - &rhs
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        &self * &rhs
    }
}
