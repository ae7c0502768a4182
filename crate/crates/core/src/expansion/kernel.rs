//! Integer keys for values of `f` on a grid.
//!
//! With `L` the least common multiple of all denominators among `A`, `B`,
//! `C` and `phi(A)`, the key `(L a - L b)^2 + (L phi(a) - L c)^2` equals
//! `L^2 f(a, b, c)`. Keys are exact, order-preserving and injective, so
//! grouping, sorting and counting can run on machine integers whenever the
//! largest possible key fits.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::{common_denominator, Scalar};

use super::GroundSets;

/// Exact evaluation of `f` on grid positions `(i, j, k)`.
pub trait Evaluator: Sync {
    type Key: Clone + Ord + Hash + Debug + Send + Sync;

    fn key(&self, i: usize, j: usize, k: usize) -> Self::Key;

    /// Value of `f` encoded by `key`.
    fn decode(&self, key: &Self::Key) -> Scalar;
}

/// Fixed-width integer lane together with its unsigned key type.
pub trait Lane: Copy + Send + Sync {
    type Key: Copy + Ord + Hash + Debug + Send + Sync + Into<BigInt>;
    const KEY_MAX: u128;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn key(a: Self, b: Self, pa: Self, c: Self) -> Self::Key;
}

impl Lane for i64 {
    type Key = u64;
    const KEY_MAX: u128 = u64::MAX as u128;
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    #[inline]
    fn key(a: i64, b: i64, pa: i64, c: i64) -> u64 {
        let dx = a.abs_diff(b);
        let dy = pa.abs_diff(c);
        dx * dx + dy * dy
    }
}

impl Lane for i128 {
    type Key = u128;
    const KEY_MAX: u128 = u128::MAX;
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    #[inline]
    fn key(a: i128, b: i128, pa: i128, c: i128) -> u128 {
        let dx = a.abs_diff(b);
        let dy = pa.abs_diff(c);
        dx * dx + dy * dy
    }
}

/// Scaled coordinates, shared by every tier.
#[derive(Clone, Debug)]
struct Scaled<T> {
    a: Vec<T>,
    phi_a: Vec<T>,
    b: Vec<T>,
    c: Vec<T>,
    scale_sq: BigInt,
}

impl<T> Scaled<T> {
    fn map<U>(&self, f: impl Fn(&T) -> Option<U>) -> Option<Scaled<U>> {
        let conv = |v: &[T]| v.iter().map(&f).collect::<Option<Vec<U>>>();
        Some(Scaled {
            a: conv(&self.a)?,
            phi_a: conv(&self.phi_a)?,
            b: conv(&self.b)?,
            c: conv(&self.c)?,
            scale_sq: self.scale_sq.clone(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct IntEvaluator<T> {
    s: Scaled<T>,
}

impl<T: Lane> Evaluator for IntEvaluator<T> {
    type Key = T::Key;

    #[inline]
    fn key(&self, i: usize, j: usize, k: usize) -> T::Key {
        let s = &self.s;
        T::key(s.a[i], s.b[j], s.phi_a[i], s.c[k])
    }

    fn decode(&self, key: &T::Key) -> Scalar {
        Scalar::new((*key).into(), self.s.scale_sq.clone())
    }
}

#[derive(Clone, Debug)]
pub struct BigEvaluator {
    s: Scaled<BigInt>,
}

impl Evaluator for BigEvaluator {
    type Key = BigInt;

    fn key(&self, i: usize, j: usize, k: usize) -> BigInt {
        let s = &self.s;
        let dx = &s.a[i] - &s.b[j];
        let dy = &s.phi_a[i] - &s.c[k];
        &dx * &dx + &dy * &dy
    }

    fn decode(&self, key: &BigInt) -> Scalar {
        Scalar::new(key.clone(), self.s.scale_sq.clone())
    }
}

/// The narrowest evaluator that cannot overflow on the given sets.
#[derive(Clone, Debug)]
pub enum Kernel {
    Small(IntEvaluator<i64>),
    Wide(IntEvaluator<i128>),
    Big(BigEvaluator),
}

/// Runs `$body` with `$e` bound to the concrete evaluator.
#[macro_export]
macro_rules! with_evaluator {
    ($kernel:expr, $e:ident => $body:expr) => {
        match $kernel {
            $crate::expansion::Kernel::Small($e) => $body,
            $crate::expansion::Kernel::Wide($e) => $body,
            $crate::expansion::Kernel::Big($e) => $body,
        }
    };
}

impl Kernel {
    pub fn new(sets: &GroundSets) -> Self {
        let phi_a: Vec<Scalar> = sets.a().iter().map(|x| sets.phi().eval(x)).collect();
        let scale = common_denominator(
            sets.a()
                .iter()
                .chain(sets.b())
                .chain(sets.c())
                .chain(phi_a.iter()),
        );
        let lift = |v: &[Scalar]| -> Vec<BigInt> {
            v.iter()
                .map(|x| (x * Scalar::from_integer(scale.clone())).to_integer())
                .collect()
        };
        let big = Scaled {
            a: lift(sets.a()),
            phi_a: lift(&phi_a),
            b: lift(sets.b()),
            c: lift(sets.c()),
            scale_sq: &scale * &scale,
        };
        let max_abs = |v: &[BigInt]| v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero);
        let dx = max_abs(&big.a) + max_abs(&big.b);
        let dy = max_abs(&big.phi_a) + max_abs(&big.c);
        let bound = &dx * &dx + &dy * &dy;
        if bound <= BigInt::from(<i64 as Lane>::KEY_MAX) {
            if let Some(s) = big.map(i64::from_big) {
                return Kernel::Small(IntEvaluator { s });
            }
        }
        if bound <= BigInt::from(<i128 as Lane>::KEY_MAX) {
            if let Some(s) = big.map(i128::from_big) {
                return Kernel::Wide(IntEvaluator { s });
            }
        }
        Kernel::Big(BigEvaluator { s: big })
    }

    pub fn tier(&self) -> &'static str {
        match self {
            Kernel::Small(_) => "u64",
            Kernel::Wide(_) => "u128",
            Kernel::Big(_) => "bigint",
        }
    }

    /// Exact `f(A[i], B[j], C[k])`.
    pub fn value(&self, i: usize, j: usize, k: usize) -> Scalar {
        with_evaluator!(self, e => e.decode(&e.key(i, j, k)))
    }
}
