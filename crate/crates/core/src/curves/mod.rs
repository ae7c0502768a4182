//! The proximity curve family, shared components, the exceptional family
//! and incidence accounting.
//!
//! A parameter tuple `(b, c, b', c')` gives the plane curve
//! `f(x, b, c) = f(x', b', c')` in the `(x, x')` plane. Two triples of a
//! strict quadruple with the same `f`-value put the point `(a, a')` on the
//! curve of their `(b, c, b', c')`, which turns quadruple counting into
//! point-curve incidence counting.

mod classes;
mod incidence;
pub mod modp;

pub use classes::{multiplicity_classes, ComponentClass, MultiplicityReport};
pub use incidence::{
    incidences, incidences_fast, verify_upper_accounting, verify_upper_accounting_with,
    IncidenceCount, UpperAccountingReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, BiPoly, Scalar, UniPoly};
use crate::expansion::GroundData;
use crate::geometry::{graph_symmetries, symmetry_abscissa, Isometry};

/// Which parameter tuples enter the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyMode {
    /// `b ~ b'` and `c ~ c'`: distinct elements of one segment.
    Strict,
    /// Same segments, equality allowed.
    Relaxed,
}

impl FamilyMode {
    fn admits(self, x: usize, y: usize) -> bool {
        match self {
            FamilyMode::Strict => x != y,
            FamilyMode::Relaxed => true,
        }
    }
}

/// A tuple `(b, c, b', c')` by grid position, with its segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveParams {
    /// Positions of `b, c, b', c'` in `B, C, B, C`.
    pub positions: [u32; 4],
    /// Segment of `b` and `b'`, then of `c` and `c'`.
    pub segments: (u32, u32),
}

impl CurveParams {
    pub fn values<'a>(&self, g: &'a GroundData) -> [&'a Scalar; 4] {
        let [b, c, b2, c2] = self.positions.map(|p| p as usize);
        let s = g.sets();
        [&s.b()[b], &s.c()[c], &s.b()[b2], &s.c()[c2]]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub params: CurveParams,
    /// Canonical primitive form.
    pub poly: BiPoly,
}

/// `(x - b)^2 + (phi(x) - c)^2` as a polynomial in `x`.
pub fn distance_poly(b: &Scalar, c: &Scalar, phi: &UniPoly) -> UniPoly {
    let dx = &UniPoly::x() - &UniPoly::constant(b.clone());
    let dy = phi - &UniPoly::constant(c.clone());
    &(&dx * &dx) + &(&dy * &dy)
}

fn curve_from_parts(u: &UniPoly, u_prime: &UniPoly) -> Result<BiPoly> {
    (BiPoly::from_x(u) - BiPoly::from_y(u_prime)).primitive_part()
}

/// Canonical primitive form of `f(x, b, c) - f(x', b', c')`.
pub fn curve_poly(b: &Scalar, c: &Scalar, b_prime: &Scalar, c_prime: &Scalar, phi: &UniPoly) -> Result<BiPoly> {
    curve_from_parts(&distance_poly(b, c, phi), &distance_poly(b_prime, c_prime, phi))
}

/// One record per admitted tuple, ordered by `(b, c, b', c')` positions.
pub fn build_family(g: &GroundData, mode: FamilyMode) -> Result<Vec<CurveRecord>> {
    let sets = g.sets();
    let n = g.n();
    let (pb, pc) = (g.partition_b(), g.partition_c());
    let u: Vec<UniPoly> = (0..n * n)
        .map(|idx| distance_poly(&sets.b()[idx / n], &sets.c()[idx % n], sets.phi()))
        .collect();
    let mut out = Vec::new();
    for b in 0..n {
        let sb = pb.segment_of(b);
        for c in 0..n {
            let sc = pc.segment_of(c);
            for b2 in pb.range(sb) {
                if !mode.admits(b, b2) {
                    continue;
                }
                for c2 in pc.range(sc) {
                    if !mode.admits(c, c2) {
                        continue;
                    }
                    let params = CurveParams {
                        positions: [b as u32, c as u32, b2 as u32, c2 as u32],
                        segments: (sb as u32, sc as u32),
                    };
                    let poly = curve_from_parts(&u[b * n + c], &u[b2 * n + c2])?;
                    out.push(CurveRecord { params, poly });
                }
            }
        }
    }
    Ok(out)
}

/// `sum_{j,k} |B_j| (|B_j| - 1) |C_k| (|C_k| - 1)` in strict mode, with
/// `m^2` in place of `m (m - 1)` in relaxed mode.
pub fn family_size(g: &GroundData, mode: FamilyMode) -> u64 {
    let side = |sizes: Vec<usize>| -> u64 {
        sizes
            .into_iter()
            .map(|m| match mode {
                FamilyMode::Strict => (m * m.saturating_sub(1)) as u64,
                FamilyMode::Relaxed => (m * m) as u64,
            })
            .sum()
    };
    side(g.partition_b().sizes()) * side(g.partition_c().sizes())
}

/// Nonconstant gcd of the two curves, if any.
pub fn shared_component(r1: &CurveRecord, r2: &CurveRecord) -> Option<BiPoly> {
    let g = r1.poly.gcd(&r2.poly).ok()?;
    (!g.is_constant()).then_some(g)
}

/// A linear component induced by a symmetry of the graph of `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictedComponent {
    pub component: BiPoly,
    pub isometry: Isometry,
}

/// `x - x'` for the identity and `x + x' - 2 c0` for the symmetry centred at
/// abscissa `c0`, in canonical form.
///
/// If `R` fixes the graph and maps `(b, c)` to `(b', c')`, then the point
/// `(x', phi(x')) = R(x, phi(x))` is at the same distance from `(b', c')` as
/// `(x, phi(x))` is from `(b, c)`, so the curve contains the line relating
/// `x` and `x'`.
pub fn predict_gamma0(phi: &UniPoly) -> Result<Vec<PredictedComponent>> {
    let c0 = symmetry_abscissa(phi)?;
    graph_symmetries(phi)?
        .into_iter()
        .map(|r| {
            let line = if r.is_identity() {
                BiPoly::x() - BiPoly::y()
            } else {
                BiPoly::x() + BiPoly::y() - BiPoly::constant(&c0 * int(2))
            };
            Ok(PredictedComponent {
                component: line.primitive_part()?,
                isometry: r,
            })
        })
        .collect()
}

/// Ordered pairs `(a, a')` of positions in `A` sharing a segment; relaxed
/// mode adds the diagonal.
pub fn point_set_p(g: &GroundData, mode: FamilyMode) -> Vec<(u32, u32)> {
    let pa = g.partition_a();
    let mut out = Vec::new();
    for seg in 0..pa.segments() {
        let r = pa.range(seg);
        for a in r.clone() {
            for a2 in r.clone() {
                if mode.admits(a, a2) {
                    out.push((a as u32, a2 as u32));
                }
            }
        }
    }
    out
}

/// The points of [`point_set_p`] as values.
pub fn point_values(g: &GroundData, pts: &[(u32, u32)]) -> Vec<(Scalar, Scalar)> {
    let a = g.sets().a();
    pts.iter()
        .map(|&(i, j)| (a[i as usize].clone(), a[j as usize].clone()))
        .collect()
}

fn checked_degree(phi: &UniPoly) -> Result<usize> {
    match phi.degree() {
        Some(d) if d >= 3 => Ok(d),
        Some(d) => Err(Error::DegreeTooLow(d)),
        None => Err(Error::ZeroPolynomial),
    }
}
