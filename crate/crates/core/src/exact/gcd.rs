//! Bivariate gcd by subresultant remainder sequences.
//!
//! Polynomials are viewed as univariate in the second variable with
//! coefficients in `Q[x]`. The gcd splits into the gcd of contents (a
//! univariate gcd in `Q[x]`) times the primitive part of the last nonzero
//! subresultant of the primitive parts.

use super::{BiPoly, Scalar, UniPoly};
use crate::error::{Error, Result};

/// Coefficients in `Q[x]`, indexed by the power of the second variable.
type Rec = Vec<UniPoly>;

fn to_rec(f: &BiPoly) -> Rec {
    let deg = f.degree_y().map_or(0, |d| d as usize + 1);
    let mut cols: Vec<Vec<Scalar>> = vec![Vec::new(); deg];
    for (&(i, j), c) in f.terms() {
        let col = &mut cols[j as usize];
        if col.len() <= i as usize {
            col.resize(i as usize + 1, Scalar::default());
        }
        col[i as usize] = c.clone();
    }
    trim(cols.into_iter().map(UniPoly::new).collect())
}

fn from_rec(r: &Rec) -> BiPoly {
    BiPoly::from_terms(r.iter().enumerate().flat_map(|(j, p)| {
        p.coeffs()
            .iter()
            .enumerate()
            .map(move |(i, c)| ((i as u32, j as u32), c.clone()))
    }))
}

fn trim(mut r: Rec) -> Rec {
    while r.last().is_some_and(UniPoly::is_zero) {
        r.pop();
    }
    r
}

fn deg(r: &Rec) -> usize {
    r.len().saturating_sub(1)
}

fn content(r: &Rec) -> UniPoly {
    r.iter().fold(UniPoly::zero(), |acc, c| acc.gcd(c))
}

fn div_coeffs(r: &Rec, d: &UniPoly) -> Rec {
    r.iter()
        .map(|c| c.div_exact(d).expect("content divides every coefficient"))
        .collect()
}

fn mul_coeffs(r: &Rec, k: &UniPoly) -> Rec {
    trim(r.iter().map(|c| c * k).collect())
}

/// `lc(b)^(deg a - deg b + 1) * a  mod  b`, computed without division.
fn prem(a: &Rec, b: &Rec) -> Rec {
    let db = deg(b);
    let lb = b[db].clone();
    let mut r = a.clone();
    let mut e = deg(a) as i64 - db as i64 + 1;
    while !r.is_empty() && deg(&r) >= db {
        let shift = deg(&r) - db;
        let lr = r[deg(&r)].clone();
        let mut next: Rec = r.iter().map(|c| c * &lb).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = &next[k + shift] - &(bc * &lr);
        }
        r = trim(next);
        e -= 1;
    }
    if e > 0 {
        r = mul_coeffs(&r, &lb.pow(e as u32));
    }
    r
}

/// Last nonzero element of the subresultant PRS of `a`, `b` (deg a >= deg b).
fn subresultant_tail(mut a: Rec, mut b: Rec) -> Rec {
    let mut g = UniPoly::one();
    let mut h = UniPoly::one();
    loop {
        let d = (deg(&a) - deg(&b)) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            return b;
        }
        if deg(&r) == 0 {
            return r;
        }
        let divisor = &g * &h.pow(d);
        a = b;
        b = div_coeffs(&r, &divisor);
        g = a[deg(&a)].clone();
        h = match d {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(d)
                .div_exact(&h.pow(d - 1))
                .expect("subresultant scaling is exact"),
        };
    }
}

pub(super) fn bipoly_gcd(f: &BiPoly, g: &BiPoly) -> Result<BiPoly> {
    match (f.is_zero(), g.is_zero()) {
        (true, true) => return Err(Error::ZeroGcd),
        (true, false) => return g.primitive_part(),
        (false, true) => return f.primitive_part(),
        _ => {}
    }
    let (rf, rg) = (to_rec(f), to_rec(g));
    let (cf, cg) = (content(&rf), content(&rg));
    let cont = cf.gcd(&cg);
    let (mut pf, mut pg) = (div_coeffs(&rf, &cf), div_coeffs(&rg, &cg));
    if deg(&pf) < deg(&pg) {
        std::mem::swap(&mut pf, &mut pg);
    }
    let tail = if deg(&pg) == 0 {
        vec![UniPoly::one()]
    } else {
        let t = subresultant_tail(pf, pg);
        if deg(&t) == 0 {
            vec![UniPoly::one()]
        } else {
            let c = content(&t);
            div_coeffs(&t, &c)
        }
    };
    (&BiPoly::from_x(&cont) * &from_rec(&tail)).primitive_part()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};
    use proptest::prelude::*;

    fn lin(a: i64, b: i64, c: i64) -> BiPoly {
        BiPoly::from_terms([((1, 0), int(a)), ((0, 1), int(b)), ((0, 0), int(c))])
    }

    #[test]
    fn constructed_common_factor() {
        let diag = lin(1, -1, 0);
        let f = &diag * &lin(1, 0, 1);
        let g = &diag * &lin(0, 1, 2);
        assert_eq!(f.gcd(&g).unwrap(), diag);
    }

    #[test]
    fn difference_of_squares() {
        let f = BiPoly::from_terms([((2, 0), int(1)), ((0, 2), int(-1))]);
        assert_eq!(f.gcd(&lin(1, -1, 0)).unwrap(), lin(1, -1, 0));
    }

    #[test]
    fn zero_inputs() {
        assert_eq!(BiPoly::zero().gcd(&BiPoly::zero()), Err(Error::ZeroGcd));
        let f = lin(2, 4, 6);
        assert_eq!(BiPoly::zero().gcd(&f).unwrap(), lin(1, 2, 3));
    }

    #[test]
    fn content_only_in_first_variable() {
        // (x+1)*x'^2 + (x+1) and (x+1)*(x-2)
        let xp1 = BiPoly::from_x(&UniPoly::from_ints(&[1, 1]));
        let f = &xp1 * &BiPoly::from_terms([((0, 2), int(1)), ((0, 0), int(1))]);
        let g = &xp1 * &BiPoly::from_x(&UniPoly::from_ints(&[-2, 1]));
        assert_eq!(f.gcd(&g).unwrap(), xp1);
    }

    #[test]
    fn coprime_gives_one() {
        let f = BiPoly::from_terms([((2, 0), int(1)), ((0, 1), int(1))]);
        let g = lin(1, 1, -3);
        assert_eq!(f.gcd(&g).unwrap(), BiPoly::one());
    }

    #[test]
    fn rational_coefficients_normalise() {
        let f = &lin(1, 1, 0).scale(&ratio(1, 3)) * &lin(2, 0, -1);
        let g = &lin(3, 3, 0) * &lin(0, 1, 5);
        assert_eq!(f.gcd(&g).unwrap(), lin(1, 1, 0));
    }

    fn small_bipoly() -> impl Strategy<Value = BiPoly> {
        prop::collection::vec(((0u32..3, 0u32..3), -4i64..5), 1..5)
            .prop_map(|ts| BiPoly::from_terms(ts.into_iter().map(|(k, c)| (k, int(c)))))
            .prop_filter("nonzero", |p| !p.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gcd_divides_both_and_is_symmetric(f in small_bipoly(), g in small_bipoly()) {
            let d = f.gcd(&g).unwrap();
            prop_assert!(d.divides(&f));
            prop_assert!(d.divides(&g));
            prop_assert_eq!(d, g.gcd(&f).unwrap());
        }

        #[test]
        fn common_factor_survives(f in small_bipoly(), h in small_bipoly(), g in small_bipoly()) {
            let d = (&f * &g).gcd(&(&h * &g)).unwrap();
            let pg = g.primitive_part().unwrap();
            prop_assert!(pg.divides(&d));
        }
    }
}
