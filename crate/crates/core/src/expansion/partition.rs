use crate::error::{Error, Result};
use crate::exact::Scalar;

/// Split of `len` sorted elements into `t` consecutive segments whose sizes
/// differ by at most one, larger segments first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    starts: Vec<usize>,
    segment: Vec<u32>,
}

impl Partition {
    pub fn new(len: usize, t: usize) -> Result<Self> {
        if t == 0 || t > len {
            return Err(Error::PartitionTooFine { t, len });
        }
        let (base, extra) = (len / t, len % t);
        let mut starts = Vec::with_capacity(t + 1);
        let mut segment = Vec::with_capacity(len);
        let mut pos = 0;
        for i in 0..t {
            starts.push(pos);
            let size = base + usize::from(i < extra);
            segment.extend(std::iter::repeat_n(i as u32, size));
            pos += size;
        }
        starts.push(pos);
        Ok(Self { starts, segment })
    }

    pub fn segments(&self) -> usize {
        self.starts.len() - 1
    }

    pub fn len(&self) -> usize {
        self.segment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segment.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.starts.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.starts[i]..self.starts[i + 1]
    }

    /// Segment holding the element at sorted position `idx`.
    pub fn segment_of(&self, idx: usize) -> usize {
        self.segment[idx] as usize
    }

    /// Ordered pairs of distinct positions sharing a segment: `sum |X_i| (|X_i| - 1)`.
    pub fn related_pairs(&self) -> u64 {
        self.sizes()
            .iter()
            .map(|&m| (m as u64) * (m as u64).saturating_sub(1))
            .sum()
    }

    /// Whether positions `i` and `j` are related: distinct and in one segment.
    pub fn related_index(&self, i: usize, j: usize) -> bool {
        i != j && self.segment[i] == self.segment[j]
    }
}

pub fn partition_consecutive(len: usize, t: usize) -> Result<Partition> {
    Partition::new(len, t)
}

/// Position of `x` in the sorted set.
pub fn position(set: &[Scalar], x: &Scalar) -> Result<usize> {
    set.binary_search(x)
        .map_err(|_| Error::NotAMember(x.to_string()))
}

/// `x ~ x'`: distinct members of the same segment.
pub fn related(x: &Scalar, x_prime: &Scalar, set: &[Scalar], part: &Partition) -> Result<bool> {
    let i = position(set, x)?;
    let j = position(set, x_prime)?;
    Ok(part.related_index(i, j))
}
