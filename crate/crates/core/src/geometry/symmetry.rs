//! Isometries of the plane that map the graph `y = phi(x)` onto itself.
//!
//! For `deg phi >= 2` the graph is unbounded in both horizontal directions
//! and every vertical line meets it once, so a symmetry must map vertical
//! lines to vertical lines and preserve or reverse the horizontal axis. That
//! leaves translations, the reflection in a vertical line, the half-turn and
//! the reflection in a horizontal line (with their glide variants). A
//! horizontal translation shifts `phi` and cannot preserve its graph unless
//! `phi` is periodic, hence constant; vertical translations and reflections
//! in horizontal lines change the leading coefficient's sign or the constant
//! term. Coefficient comparison of the remaining two families pins the
//! abscissa of the centre to `c0 = -a_{d-1} / (d * a_d)`.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{int, Point2, Scalar, UniPoly};

use super::Isometry;

fn checked_degree(phi: &UniPoly) -> Result<usize> {
    match phi.degree() {
        Some(d) if d >= 3 => Ok(d),
        Some(d) => Err(Error::DegreeTooLow(d)),
        None => Err(Error::ZeroPolynomial),
    }
}

/// Abscissa where `phi(2c - x) = +-phi(x)` can possibly hold.
pub fn symmetry_abscissa(phi: &UniPoly) -> Result<Scalar> {
    let d = checked_degree(phi)?;
    let lead = phi.coeff(d);
    Ok(-phi.coeff(d - 1) / (lead * int(d as i64)))
}

/// All symmetries of the graph of `phi`, identity first.
pub fn graph_symmetries(phi: &UniPoly) -> Result<Vec<Isometry>> {
    let d = checked_degree(phi)?;
    let c0 = symmetry_abscissa(phi)?;
    let mirrored = phi.compose_affine(&-Scalar::one(), &(&c0 * int(2)));
    let mut out = vec![Isometry::identity()];
    if d % 2 == 0 {
        if mirrored == *phi {
            out.push(Isometry::vertical_reflection(&c0));
        }
    } else {
        let d0 = phi.eval(&c0);
        if &mirrored + phi == UniPoly::constant(&d0 * int(2)) {
            out.push(Isometry::half_turn(&Point2::new(c0, d0)));
        }
    }
    Ok(out)
}

/// Exact check that `r` maps the graph of `phi` into itself, as the
/// polynomial identity `phi(X(x)) = Y(x)` where `(X, Y) = r(x, phi(x))`.
pub fn fixes_graph(r: &Isometry, phi: &UniPoly) -> bool {
    let m = r.linear();
    let t = r.translation();
    let image = |row: usize, shift: &Scalar| {
        &(&UniPoly::monomial(m[row][0].clone(), 1) + &phi.scale(&m[row][1]))
            + &UniPoly::constant(shift.clone())
    };
    let x_image = image(0, &t.x);
    let y_image = image(1, &t.y);
    phi.compose(&x_image) == y_image
}

/// Graph-fixing check at finitely many abscissae.
pub fn fixes_graph_at(r: &Isometry, phi: &UniPoly, xs: &[Scalar]) -> bool {
    xs.iter().all(|x| {
        let q = r.apply(&Point2::new(x.clone(), phi.eval(x)));
        phi.eval(&q.x) == q.y
    })
}
