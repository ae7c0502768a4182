//! Deterministic ground-set generators.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{int, Scalar, UniPoly};
use crate::expansion::GroundSets;
use crate::rng::SplitMix64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `{start + i * step}`.
    Arithmetic { start: Scalar, step: Scalar },
    /// `{first * ratio^i}`.
    Geometric { first: Scalar, ratio: Scalar },
    /// `n` distinct integers drawn uniformly from `low..=high`, independently
    /// for `A`, `B` and `C`.
    RandomInteger { low: i64, high: i64 },
    /// `{-m, .., -1, 1, .., m}`, with `0` added for odd `n`.
    Symmetric,
    /// The listed values; their count fixes `n`.
    Explicit(Vec<Scalar>),
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Arithmetic { .. } => "arithmetic",
            Generator::Geometric { .. } => "geometric",
            Generator::RandomInteger { .. } => "random-integer",
            Generator::Symmetric => "symmetric",
            Generator::Explicit(_) => "explicit",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn random_set(rng: &mut SplitMix64, n: usize, low: i64, high: i64) -> Vec<Scalar> {
    let mut seen = BTreeSet::new();
    while seen.len() < n {
        seen.insert(rng.range_inclusive(low, high));
    }
    seen.into_iter().map(int).collect()
}

/// One ground set of size `n`; random generators draw from `rng`.
fn one_set(kind: &Generator, n: usize, rng: &mut SplitMix64) -> Result<Vec<Scalar>> {
    Ok(match kind {
        Generator::Arithmetic { start, step } => {
            if step.is_zero() {
                return Err(Error::InvalidParameter("arithmetic step must be nonzero".into()));
            }
            (0..n).map(|i| start + step * int(i as i64)).collect()
        }
        Generator::Geometric { first, ratio } => {
            if first.is_zero() || ratio.is_zero() || ratio.abs().is_one() {
                return Err(Error::InvalidParameter(
                    "geometric sets need first != 0 and ratio not in {0, 1, -1}".into(),
                ));
            }
            let mut out = Vec::with_capacity(n);
            let mut v = first.clone();
            for _ in 0..n {
                out.push(v.clone());
                v *= ratio;
            }
            out
        }
        Generator::RandomInteger { low, high } => {
            if *high < *low || ((*high as i128 - *low as i128 + 1) as u128) < n as u128 {
                return Err(Error::InvalidParameter(format!(
                    "range {low}..={high} holds fewer than {n} integers"
                )));
            }
            random_set(rng, n, *low, *high)
        }
        Generator::Symmetric => {
            let m = (n / 2) as i64;
            let mut out: Vec<Scalar> = (1..=m).flat_map(|v| [int(-v), int(v)]).collect();
            if n % 2 == 1 {
                out.push(Scalar::zero());
            }
            out
        }
        Generator::Explicit(values) => {
            if values.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "explicit set has {} values, n = {n}",
                    values.len()
                )));
            }
            values.clone()
        }
    })
}

/// Ground sets for `(kind, n, seed)`. Deterministic generators give
/// `A = B = C`; the random generator draws three sets from one stream.
pub fn generate_sets(kind: &Generator, n: usize, seed: u64, phi: &UniPoly) -> Result<GroundSets> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    match kind {
        Generator::RandomInteger { .. } => {
            let a = one_set(kind, n, &mut rng)?;
            let b = one_set(kind, n, &mut rng)?;
            let c = one_set(kind, n, &mut rng)?;
            GroundSets::new(a, b, c, phi.clone())
        }
        _ => GroundSets::uniform(one_set(kind, n, &mut rng)?, phi.clone()),
    }
}

/// `Generator::Arithmetic` from integers.
pub fn arithmetic(start: i64, step: i64) -> Generator {
    Generator::Arithmetic {
        start: int(start),
        step: int(step),
    }
}
