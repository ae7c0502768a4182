//! Image sets of `f(x, y, z) = (x - y)^2 + (phi(x) - z)^2`, proximity
//! partitions, quadruple counts and the lower counting chain.

mod chain;
mod kernel;
mod level;
mod partition;
mod quadruples;
mod surface;

pub use chain::{sz_bound, verify_lower_chain, HeavyStep, Inequality, LowerChainReport, SzBound};
pub use kernel::{BigEvaluator, Evaluator, IntEvaluator, Kernel, Lane};
pub use level::{heavy_values, level_sets, BoxGroup, BoxIndex, HeavyValues, LevelSets};
pub use partition::{partition_consecutive, position, related, Partition};
pub use quadruples::{count_quadruples, GroupContribution, QMode, QuadrupleStats};
pub use surface::{surface_box_counts, surface_boxes, SurfaceProfile};

use num_integer::Roots;

use crate::with_evaluator;

use crate::error::{Error, Result};
use crate::exact::{Scalar, UniPoly};

/// `(a - b)^2 + (phi(a) - c)^2`, exactly.
pub fn eval_f(a: &Scalar, b: &Scalar, c: &Scalar, phi: &UniPoly) -> Scalar {
    let dx = a - b;
    let dy = phi.eval(a) - c;
    &dx * &dx + &dy * &dy
}

/// Three equal-size sorted sets without repeats, and `phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSets {
    a: Vec<Scalar>,
    b: Vec<Scalar>,
    c: Vec<Scalar>,
    phi: UniPoly,
}

fn sorted_distinct(mut v: Vec<Scalar>, name: &str) -> Result<Vec<Scalar>> {
    v.sort();
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateElement(format!("{} in {name}", w[0])));
    }
    Ok(v)
}

impl GroundSets {
    /// Sorts each set; rejects repeats, empty sets and unequal sizes.
    pub fn new(a: Vec<Scalar>, b: Vec<Scalar>, c: Vec<Scalar>, phi: UniPoly) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidGroundSet("sets must be non-empty".into()));
        }
        if a.len() != b.len() || a.len() != c.len() {
            return Err(Error::InvalidGroundSet(format!(
                "sizes differ: |A|={}, |B|={}, |C|={}",
                a.len(),
                b.len(),
                c.len()
            )));
        }
        Ok(Self {
            a: sorted_distinct(a, "A")?,
            b: sorted_distinct(b, "B")?,
            c: sorted_distinct(c, "C")?,
            phi,
        })
    }

    /// `A = B = C = set`.
    pub fn uniform(set: Vec<Scalar>, phi: UniPoly) -> Result<Self> {
        Self::new(set.clone(), set.clone(), set, phi)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Scalar] {
        &self.a
    }

    pub fn b(&self) -> &[Scalar] {
        &self.b
    }

    pub fn c(&self) -> &[Scalar] {
        &self.c
    }

    pub fn phi(&self) -> &UniPoly {
        &self.phi
    }

    pub fn kernel(&self) -> Kernel {
        Kernel::new(self)
    }
}

/// Ground sets with the parameter `s`, the segment count `t` and the three
/// partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundData {
    sets: GroundSets,
    s: u64,
    t: usize,
    parts: [Partition; 3],
}

impl GroundData {
    pub fn new(sets: GroundSets, s: u64, t: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter("s must be positive".into()));
        }
        let n = sets.n();
        let part = Partition::new(n, t)?;
        Ok(Self {
            sets,
            s,
            t,
            parts: [part.clone(), part.clone(), part],
        })
    }

    /// Uses `t = choose_t(n, |D|, s)`.
    pub fn with_chosen_t(sets: GroundSets, s: u64) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter("s must be positive".into()));
        }
        let t = choose_t(sets.n() as u64, image_size(&sets), s);
        Self::new(sets, s, t)
    }

    pub fn sets(&self) -> &GroundSets {
        &self.sets
    }

    pub fn n(&self) -> usize {
        self.sets.n()
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn phi(&self) -> &UniPoly {
        self.sets.phi()
    }

    pub fn partition_a(&self) -> &Partition {
        &self.parts[0]
    }

    pub fn partition_b(&self) -> &Partition {
        &self.parts[1]
    }

    pub fn partition_c(&self) -> &Partition {
        &self.parts[2]
    }

    /// `n^3` as a checked count.
    pub fn n_cubed(&self) -> u64 {
        (self.n() as u64).pow(3)
    }
}

/// Sorted `f(A, B, C)`.
pub fn image_set(sets: &GroundSets) -> Vec<Scalar> {
    with_evaluator!(&sets.kernel(), e => {
        let keys = sorted_keys(e, sets.n());
        keys.iter().map(|k| e.decode(k)).collect()
    })
}

/// `|f(A, B, C)|`.
pub fn image_size(sets: &GroundSets) -> u64 {
    with_evaluator!(&sets.kernel(), e => sorted_keys(e, sets.n()).len() as u64)
}

fn sorted_keys<E: Evaluator>(e: &E, n: usize) -> Vec<E::Key> {
    let mut keys = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                keys.push(e.key(i, j, k));
            }
        }
    }
    keys.sort_unstable();
    keys.dedup();
    keys
}

/// `n^{3/2} / (s |D|^{1/2})` rounded half up, clamped to `[1, n]`.
///
/// `floor(x + 1/2) = floor((floor(2x) + 1) / 2)` and
/// `floor(2x) = isqrt(floor(4 n^3 / (s^2 |D|)))`, so the computation is
/// exact in integers.
pub fn choose_t(n: u64, d_size: u64, s: u64) -> usize {
    let num = 4 * (n as u128).pow(3);
    let den = (s as u128).pow(2) * d_size.max(1) as u128;
    let twice = (num / den).sqrt();
    let t = twice.div_ceil(2);
    t.clamp(1, n.max(1) as u128) as usize
}
