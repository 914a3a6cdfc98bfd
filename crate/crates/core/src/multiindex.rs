//! Increasing multi-indices `I = (i1 < ... < ik)` over `{1..n}`.
//!
//! The lexicographic order of [`MultiIndex::enumerate`] is the coordinate
//! order used by every presentation map in the crate.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("degree {degree} outside 0..={ambient}")]
    DegreeOutOfRange { degree: usize, ambient: usize },
    #[error("components {components:?} are not strictly increasing within 1..={ambient}")]
    NotIncreasing {
        components: Vec<usize>,
        ambient: usize,
    },
    #[error("rank {rank} out of range for C({ambient},{degree})")]
    RankOutOfRange {
        rank: usize,
        degree: usize,
        ambient: usize,
    },
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    components: Vec<usize>,
    ambient: usize,
}

impl MultiIndex {
    pub fn new(components: Vec<usize>, ambient: usize) -> Result<Self, IndexError> {
        let increasing = components.windows(2).all(|w| w[0] < w[1]);
        let in_range = components.iter().all(|&i| (1..=ambient).contains(&i));
        if !increasing || !in_range {
            return Err(IndexError::NotIncreasing {
                components,
                ambient,
            });
        }
        Ok(Self {
            components,
            ambient,
        })
    }

    /// The empty index `()`, basis of 0-forms.
    pub fn empty(ambient: usize) -> Self {
        Self {
            components: Vec::new(),
            ambient,
        }
    }

    /// `(1, 2, ..., n)`.
    pub fn full(ambient: usize) -> Self {
        Self {
            components: (1..=ambient).collect(),
            ambient,
        }
    }

    pub(crate) fn from_sorted_unchecked(components: Vec<usize>, ambient: usize) -> Self {
        debug_assert!(components.windows(2).all(|w| w[0] < w[1]));
        Self {
            components,
            ambient,
        }
    }

    /// All of `I(k, n)` in lexicographic order.
    pub fn enumerate(degree: usize, ambient: usize) -> Result<Vec<Self>, IndexError> {
        if degree > ambient {
            return Err(IndexError::DegreeOutOfRange { degree, ambient });
        }
        let mut out = Vec::with_capacity(binomial(ambient, degree));
        let mut current: Vec<usize> = (1..=degree).collect();
        loop {
            out.push(Self::from_sorted_unchecked(current.clone(), ambient));
            // advance to the next k-subset in lexicographic order
            let mut pos = degree;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                if current[pos] < ambient - (degree - 1 - pos) {
                    break;
                }
            }
            current[pos] += 1;
            for q in pos + 1..degree {
                current[q] = current[q - 1] + 1;
            }
        }
    }

    pub fn components(&self) -> &[usize] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.components.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn contains(&self, i: usize) -> bool {
        self.components.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> Self {
        let components = (1..=self.ambient).filter(|&i| !self.contains(i)).collect();
        Self::from_sorted_unchecked(components, self.ambient)
    }

    /// Sign of the permutation `(i1..ik, j1..j_{n-k})` with `J` the complement,
    /// by inversion count.
    pub fn signature(&self) -> i32 {
        let perm: Vec<usize> = self
            .components
            .iter()
            .copied()
            .chain(self.complement().components)
            .collect();
        let mut inversions = 0usize;
        for a in 0..perm.len() {
            for b in a + 1..perm.len() {
                if perm[a] > perm[b] {
                    inversions += 1;
                }
            }
        }
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Position of this index in [`MultiIndex::enumerate`].
    pub fn rank(&self) -> usize {
        let k = self.degree();
        let n = self.ambient;
        let mut rank = 0;
        let mut prev = 0;
        for (pos, &c) in self.components.iter().enumerate() {
            for skipped in prev + 1..c {
                rank += binomial(n - skipped, k - pos - 1);
            }
            prev = c;
        }
        rank
    }

    pub fn unrank(rank: usize, degree: usize, ambient: usize) -> Result<Self, IndexError> {
        if degree > ambient {
            return Err(IndexError::DegreeOutOfRange { degree, ambient });
        }
        if rank >= binomial(ambient, degree) {
            return Err(IndexError::RankOutOfRange {
                rank,
                degree,
                ambient,
            });
        }
        let mut remaining = rank;
        let mut components = Vec::with_capacity(degree);
        let mut candidate = 1;
        for pos in 0..degree {
            loop {
                let block = binomial(ambient - candidate, degree - pos - 1);
                if remaining < block {
                    break;
                }
                remaining -= block;
                candidate += 1;
            }
            components.push(candidate);
            candidate += 1;
        }
        Ok(Self::from_sorted_unchecked(components, ambient))
    }

    /// `dx_i dx_I = sign * dx_{I + i}`, or `None` when `i` is already in `I`.
    pub fn insert_front(&self, i: usize) -> Option<(i32, Self)> {
        match self.components.binary_search(&i) {
            Ok(_) => None,
            Err(pos) => {
                let mut components = self.components.clone();
                components.insert(pos, i);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                Some((sign, Self::from_sorted_unchecked(components, self.ambient)))
            }
        }
    }

    /// `dx_I dx_J = sign * dx_{sort(I u J)}`, or `None` if the indices overlap.
    pub fn merge(&self, other: &Self) -> Option<(i32, Self)> {
        let mut inversions = 0usize;
        for &a in &self.components {
            for &b in &other.components {
                match a.cmp(&b) {
                    Ordering::Equal => return None,
                    Ordering::Greater => inversions += 1,
                    Ordering::Less => {}
                }
            }
        }
        let mut components: Vec<usize> = self
            .components
            .iter()
            .chain(other.components.iter())
            .copied()
            .collect();
        components.sort_unstable();
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Some((sign, Self::from_sorted_unchecked(components, self.ambient)))
    }
}

/// Degree first, then lexicographic on components.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.components.cmp(&other.components))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (pos, c) in self.components.iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}
