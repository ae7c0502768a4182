use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{int, Point2, Scalar};

/// 2x2 matrix, row-major.
pub type Mat2 = [[Scalar; 2]; 2];

pub fn mat_identity() -> Mat2 {
    [[int(1), int(0)], [int(0), int(1)]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_det(a: &Mat2) -> Scalar {
    &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
}

pub fn mat_transpose(a: &Mat2) -> Mat2 {
    [
        [a[0][0].clone(), a[1][0].clone()],
        [a[0][1].clone(), a[1][1].clone()],
    ]
}

pub fn mat_inverse(a: &Mat2) -> Option<Mat2> {
    let det = mat_det(a);
    if det.is_zero() {
        return None;
    }
    let k = det.recip();
    Some([
        [&a[1][1] * &k, -&a[0][1] * &k],
        [-&a[1][0] * &k, &a[0][0] * &k],
    ])
}

pub fn mat_apply(a: &Mat2, p: &Point2) -> Point2 {
    Point2::new(
        &a[0][0] * &p.x + &a[0][1] * &p.y,
        &a[1][0] * &p.x + &a[1][1] * &p.y,
    )
}

pub fn is_orthogonal(a: &Mat2) -> bool {
    mat_mul(&mat_transpose(a), a) == mat_identity()
}

/// Plane isometry `q -> M q + t` with `M^T M = I` exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Isometry {
    linear: Mat2,
    translation: Point2,
}

impl Isometry {
    /// `None` unless `linear` is exactly orthogonal.
    pub fn new(linear: Mat2, translation: Point2) -> Option<Self> {
        is_orthogonal(&linear).then_some(Self {
            linear,
            translation,
        })
    }

    pub fn identity() -> Self {
        Self {
            linear: mat_identity(),
            translation: Point2::origin(),
        }
    }

    pub fn translation_by(v: Point2) -> Self {
        Self {
            linear: mat_identity(),
            translation: v,
        }
    }

    /// Rotation by the angle with the given cosine and sine; requires
    /// `cos^2 + sin^2 = 1`.
    pub fn rotation(cos: Scalar, sin: Scalar) -> Option<Self> {
        Self::new([[cos.clone(), -&sin], [sin, cos]], Point2::origin())
    }

    /// Point reflection (rotation by pi) about `center`.
    pub fn half_turn(center: &Point2) -> Self {
        Self {
            linear: [[int(-1), int(0)], [int(0), int(-1)]],
            translation: center.scale(&int(2)),
        }
    }

    /// Reflection in the vertical line `x = c`.
    pub fn vertical_reflection(c: &Scalar) -> Self {
        Self {
            linear: [[int(-1), int(0)], [int(0), int(1)]],
            translation: Point2::new(c * int(2), Scalar::zero()),
        }
    }

    /// Reflection in the horizontal axis `y = 0`.
    pub fn axis_reflection() -> Self {
        Self {
            linear: [[int(1), int(0)], [int(0), int(-1)]],
            translation: Point2::origin(),
        }
    }

    pub fn linear(&self) -> &Mat2 {
        &self.linear
    }

    pub fn translation(&self) -> &Point2 {
        &self.translation
    }

    pub fn det(&self) -> Scalar {
        mat_det(&self.linear)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn apply(&self, q: &Point2) -> Point2 {
        mat_apply(&self.linear, q).add(&self.translation)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            linear: mat_mul(&self.linear, &other.linear),
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let lin = mat_transpose(&self.linear);
        let t = mat_apply(&lin, &self.translation).scale(&-Scalar::one());
        Isometry {
            linear: lin,
            translation: t,
        }
    }

    pub fn to_repr(&self) -> IsometryRepr {
        IsometryRepr {
            linear: self
                .linear
                .iter()
                .map(|row| row.iter().map(|c| c.to_string()).collect())
                .collect(),
            translation: vec![self.translation.x.to_string(), self.translation.y.to_string()],
            det: self.det().to_string(),
        }
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.linear;
        write!(
            f,
            "[[{}, {}], [{}, {}]] q + {}",
            m[0][0], m[0][1], m[1][0], m[1][1], self.translation
        )
    }
}

/// Serialisable form; entries are exact `p/q` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryRepr {
    pub linear: Vec<Vec<String>>,
    pub translation: Vec<String>,
    pub det: String,
}
