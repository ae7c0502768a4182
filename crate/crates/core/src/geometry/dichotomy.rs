//! Congruence versus conic constraint for a pair of point triples.
//!
//! For triples `p`, `p'` the solution set of
//! `|p_i - q| = |p_i' - q'|` (i = 1, 2, 3) either contains the graph of an
//! isometry (the triples are congruent) or projects to curves of degree at
//! most two in each of `q` and `q'`. Subtracting the third equation from the
//! first two gives the linear system `A q - B q' = (u - v) / 2`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{int, rational_sqrt, BiPoly, Point2, Scalar};

use super::isometry::{mat_apply, mat_inverse, mat_mul, Mat2};
use super::Isometry;

/// Two ordered triples; the first is pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriplePair {
    p: [Point2; 3],
    p_prime: [Point2; 3],
}

impl TriplePair {
    pub fn new(p: [Point2; 3], p_prime: [Point2; 3]) -> Result<Self> {
        if p[0] == p[1] || p[0] == p[2] || p[1] == p[2] {
            return Err(Error::CoincidentPoints);
        }
        Ok(Self { p, p_prime })
    }

    pub fn p(&self) -> &[Point2; 3] {
        &self.p
    }

    pub fn p_prime(&self) -> &[Point2; 3] {
        &self.p_prime
    }
}

/// Whether three points lie on a common line (coincident points count).
pub fn collinear(p: &[Point2; 3]) -> bool {
    p[0].sub(&p[2]).cross(&p[1].sub(&p[2])).is_zero()
}

/// The linear part of the distance equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaSystem {
    /// Rows `p_1 - p_3`, `p_2 - p_3`.
    pub a: Mat2,
    /// Rows `p_1' - p_3'`, `p_2' - p_3'`.
    pub b: Mat2,
    /// `|p_i|^2 - |p_3|^2`.
    pub u: [Scalar; 2],
    /// `|p_i'|^2 - |p_3'|^2`.
    pub v: [Scalar; 2],
    /// `B^{-1} (v - u) / 2` when `B` is invertible.
    pub w: Option<Point2>,
}

impl SigmaSystem {
    pub fn new(p: &[Point2; 3], p_prime: &[Point2; 3]) -> Self {
        let rows = |t: &[Point2; 3]| -> Mat2 {
            let (r1, r2) = (t[0].sub(&t[2]), t[1].sub(&t[2]));
            [[r1.x, r1.y], [r2.x, r2.y]]
        };
        let norms = |t: &[Point2; 3]| -> [Scalar; 2] {
            let base = t[2].norm_sq();
            [t[0].norm_sq() - &base, t[1].norm_sq() - &base]
        };
        let (a, b) = (rows(p), rows(p_prime));
        let (u, v) = (norms(p), norms(p_prime));
        let half = Scalar::new(1.into(), 2.into());
        let w = mat_inverse(&b).map(|bi| {
            let rhs = Point2::new(&v[0] - &u[0], &v[1] - &u[1]);
            mat_apply(&bi, &rhs).scale(&half)
        });
        Self { a, b, u, v, w }
    }

    /// `T(q) = B^{-1} A q + w`, the unique partner of `q` when `B` is invertible.
    pub fn transfer(&self) -> Option<(Mat2, Point2)> {
        let bi = mat_inverse(&self.b)?;
        Some((mat_mul(&bi, &self.a), self.w.clone()?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaOutcome {
    /// An isometry maps `p_i` to `p_i'` for each `i`.
    Congruent(Isometry),
    /// Defining polynomials of the projections of the solution set: `sigma`
    /// in `(x, y)` for `q` and `sigma_prime` in `(x', y')` for `q'`.
    ConicPair { sigma: BiPoly, sigma_prime: BiPoly },
    /// Both triples collinear: in coordinates where `p_3` is the origin and
    /// `p_1` lies on the positive first axis, every solution has first
    /// coordinates `x0` and `x0_prime`. `sigma` and `sigma_prime` give the
    /// same lines in the original coordinates.
    VerticalLines {
        x0: Scalar,
        x0_prime: Scalar,
        sigma: BiPoly,
        sigma_prime: BiPoly,
    },
    /// No solutions.
    Empty,
}

/// An isometry mapping `p_i` to `p_i'`, preferring determinant `+1`.
pub fn congruent_triples(tp: &TriplePair) -> Option<Isometry> {
    let (p, pp) = (&tp.p, &tp.p_prime);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if p[i].dist_sq(&p[j]) != pp[i].dist_sq(&pp[j]) {
            return None;
        }
    }
    let e = p[0].sub(&p[2]);
    let e_prime = pp[0].sub(&pp[2]);
    let linear = if collinear(p) {
        let n = e.norm_sq();
        let c = e.dot(&e_prime) / &n;
        let s = e.cross(&e_prime) / &n;
        [[c.clone(), -&s], [s, c]]
    } else {
        let f = p[1].sub(&p[2]);
        let f_prime = pp[1].sub(&pp[2]);
        let cols = [[e.x.clone(), f.x.clone()], [e.y.clone(), f.y.clone()]];
        let cols_prime = [[e_prime.x, f_prime.x], [e_prime.y, f_prime.y]];
        mat_mul(&cols_prime, &mat_inverse(&cols)?)
    };
    let translation = pp[2].sub(&mat_apply(&linear, &p[2]));
    let r = Isometry::new(linear, translation)?;
    (0..3).all(|i| r.apply(&p[i]) == pp[i]).then_some(r)
}

/// Classifies the solution set of the distance equations.
pub fn sigma_dichotomy(tp: &TriplePair) -> Result<SigmaOutcome> {
    if !collinear(&tp.p_prime) {
        return Ok(noncollinear_target(&tp.p, &tp.p_prime));
    }
    if !collinear(&tp.p) {
        return Ok(match noncollinear_target(&tp.p_prime, &tp.p) {
            SigmaOutcome::Congruent(r) => SigmaOutcome::Congruent(r.inverse()),
            SigmaOutcome::ConicPair { sigma, sigma_prime } => SigmaOutcome::ConicPair {
                sigma: sigma_prime,
                sigma_prime: sigma,
            },
            other => other,
        });
    }
    both_collinear(tp)
}

/// Polynomial `r . (X, Y) + k` in the two variables.
fn affine_form(r: &Point2, k: &Scalar) -> BiPoly {
    BiPoly::from_terms([
        ((1, 0), r.x.clone()),
        ((0, 1), r.y.clone()),
        ((0, 0), k.clone()),
    ])
}

/// `|Q - c|^2` for a point `Q = (qx, qy)` with polynomial coordinates.
fn dist_sq_poly(qx: &BiPoly, qy: &BiPoly, c: &Point2) -> BiPoly {
    let dx = qx - &BiPoly::constant(c.x.clone());
    let dy = qy - &BiPoly::constant(c.y.clone());
    &(&dx * &dx) + &(&dy * &dy)
}

fn canonical(f: BiPoly) -> BiPoly {
    f.primitive_part().unwrap_or(f)
}

/// Case where `p'` spans the plane, so `q' = T(q)` is forced.
fn noncollinear_target(p: &[Point2; 3], p_prime: &[Point2; 3]) -> SigmaOutcome {
    let sys = SigmaSystem::new(p, p_prime);
    let (m, w) = sys.transfer().expect("non-collinear triple gives invertible B");
    if let Some(r) = Isometry::new(m.clone(), w.clone()) {
        debug_assert!((0..3).all(|i| r.apply(&p[i]) == p_prime[i]));
        return SigmaOutcome::Congruent(r);
    }
    let (x, y) = (BiPoly::x(), BiPoly::y());
    let tx = affine_form(&Point2::new(m[0][0].clone(), m[0][1].clone()), &w.x);
    let ty = affine_form(&Point2::new(m[1][0].clone(), m[1][1].clone()), &w.y);
    let sigma = &dist_sq_poly(&x, &y, &p[2]) - &dist_sq_poly(&tx, &ty, &p_prime[2]);

    let half = Scalar::new(1.into(), 2.into());
    // A q = B q' - (v - u) / 2
    let rhs0 = (&sys.u[0] - &sys.v[0]) * &half;
    let rhs1 = (&sys.u[1] - &sys.v[1]) * &half;
    let bq0 = affine_form(&Point2::new(sys.b[0][0].clone(), sys.b[0][1].clone()), &rhs0);
    let bq1 = affine_form(&Point2::new(sys.b[1][0].clone(), sys.b[1][1].clone()), &rhs1);
    let sigma_prime = match mat_inverse(&sys.a) {
        Some(ai) => {
            let sx = &bq0.scale(&ai[0][0]) + &bq1.scale(&ai[0][1]);
            let sy = &bq0.scale(&ai[1][0]) + &bq1.scale(&ai[1][1]);
            &dist_sq_poly(&sx, &sy, &p[2]) - &dist_sq_poly(&x, &y, &p_prime[2])
        }
        None => {
            // image of T: the right-hand side must lie in the column space of A
            let col = if sys.a[0][0].is_zero() && sys.a[1][0].is_zero() {
                (sys.a[0][1].clone(), sys.a[1][1].clone())
            } else {
                (sys.a[0][0].clone(), sys.a[1][0].clone())
            };
            &bq1.scale(&col.0) - &bq0.scale(&col.1)
        }
    };
    SigmaOutcome::ConicPair {
        sigma: canonical(sigma),
        sigma_prime: canonical(sigma_prime),
    }
}

/// Both triples collinear.
///
/// Writing `p_i - p_3 = alpha_i e` and `p_i' - p_3' = alpha_i' e'`, the
/// first coordinates `X = (q - p_3) . e` and `X' = (q' - p_3') . e'` satisfy
/// `2 alpha_i X - 2 alpha_i' X' = alpha_i^2 |e|^2 - alpha_i'^2 |e'|^2`.
fn both_collinear(tp: &TriplePair) -> Result<SigmaOutcome> {
    if let Some(r) = congruent_triples(tp) {
        return Ok(SigmaOutcome::Congruent(r));
    }
    let (p, pp) = (&tp.p, &tp.p_prime);
    let e = p[0].sub(&p[2]);
    let Some(e_prime) = [pp[0].sub(&pp[2]), pp[1].sub(&pp[2])]
        .into_iter()
        .find(|v| !v.is_zero())
    else {
        return Ok(SigmaOutcome::Empty);
    };
    let (n, n_prime) = (e.norm_sq(), e_prime.norm_sq());
    let alpha = [int(1), p[1].sub(&p[2]).dot(&e) / &n];
    let alpha_prime = [
        pp[0].sub(&pp[2]).dot(&e_prime) / &n_prime,
        pp[1].sub(&pp[2]).dot(&e_prime) / &n_prime,
    ];
    let det = &alpha_prime[0] * &alpha[1] - &alpha[0] * &alpha_prime[1];
    if det.is_zero() {
        // equal ratio t, and t = +-1 was handled as congruence
        return Ok(SigmaOutcome::Empty);
    }
    let rhs = |k: usize| {
        &alpha[k] * &alpha[k] * &n - &alpha_prime[k] * &alpha_prime[k] * &n_prime
    };
    // [2a0, -2a0'; 2a1, -2a1'] (X, X') = (rhs0, rhs1)
    let (m00, m01) = (&alpha[0] * int(2), -&alpha_prime[0] * int(2));
    let (m10, m11) = (&alpha[1] * int(2), -&alpha_prime[1] * int(2));
    let d = &m00 * &m11 - &m01 * &m10;
    let (r0, r1) = (rhs(0), rhs(1));
    let big_x = (&r0 * &m11 - &m01 * &r1) / &d;
    let big_x_prime = (&m00 * &r1 - &r0 * &m10) / &d;

    let sigma = canonical(affine_form(&e, &(-e.dot(&p[2]) - &big_x)));
    let sigma_prime = canonical(affine_form(&e_prime, &(-e_prime.dot(&pp[2]) - &big_x_prime)));
    let len = rational_sqrt(&n).ok_or(Error::IrrationalNormalizer)?;
    let len_prime = rational_sqrt(&n_prime).ok_or(Error::IrrationalNormalizer)?;
    Ok(SigmaOutcome::VerticalLines {
        x0: big_x / len,
        x0_prime: big_x_prime / len_prime,
        sigma,
        sigma_prime,
    })
}
