//! The differential operations `∇0..∇n` on coordinate vector functions.
//!
//! `A_k` is represented by [`VectorFunction`]: `C(n,k)` polynomial coordinates
//! in the lexicographic order of `I(k,n)`. Each `∇i` is a composition of the
//! presentation maps with `d` and Hodge stars, following the operation lists
//! for even and odd `n`; `∇0` is the directional derivative along a symbolic
//! direction `e = (e1..en)`.
//!
//! A sequence `[i1, ..., ik]` always means `∇ik ∘ ... ∘ ∇i1`, i.e. `i1` is
//! applied first.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{FormError, KForm};
use crate::multiindex::{binomial, MultiIndex};
use crate::ring::{x_monomials_of_degree, Polynomial, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NablaError {
    #[error("operations are defined for n >= 2, got n = {0}")]
    DimensionTooSmall(usize),
    #[error("operation index {index} outside 0..={ambient}")]
    IndexOutOfRange { index: usize, ambient: usize },
    #[error("∇{index} expects an element of A_{expected}, got A_{got}")]
    RankMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("field lives on R^{got}, operation on R^{expected}")]
    AmbientMismatch { expected: usize, got: usize },
    #[error("A_{rank} on R^{ambient} has {expected} coordinates, got {got}")]
    CoordinateCount {
        rank: usize,
        ambient: usize,
        expected: usize,
        got: usize,
    },
    #[error("∇{next} cannot follow ∇{prev} at position {position}")]
    NotComposable {
        position: usize,
        prev: usize,
        next: usize,
    },
    #[error("empty composition")]
    EmptySequence,
    #[error("∇{index} does not start a non-trivial alternating composition of order {order} on R^{ambient}")]
    ExcludedStarIndex {
        index: usize,
        order: usize,
        ambient: usize,
    },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// `𝒜n = {∇1..∇n}` or `ℬn = 𝒜n ∪ {∇0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
}

impl Family {
    pub fn with_directional(self) -> bool {
        matches!(self, Family::B)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
        })
    }
}

/// `⌊n/2⌋`.
pub fn half(ambient: usize) -> usize {
    ambient / 2
}

/// An element of `A_rank` on `R^ambient`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorFunction {
    rank: usize,
    ambient: usize,
    coords: Vec<Polynomial>,
}

impl VectorFunction {
    pub fn new(rank: usize, ambient: usize, coords: Vec<Polynomial>) -> Result<Self, NablaError> {
        let expected = binomial(ambient, rank);
        if rank > ambient || coords.len() != expected {
            return Err(NablaError::CoordinateCount {
                rank,
                ambient,
                expected,
                got: coords.len(),
            });
        }
        Ok(Self {
            rank,
            ambient,
            coords,
        })
    }

    /// A scalar function, element of `A_0`.
    pub fn scalar(f: Polynomial, ambient: usize) -> Self {
        Self {
            rank: 0,
            ambient,
            coords: vec![f],
        }
    }

    pub fn zero(rank: usize, ambient: usize) -> Self {
        Self {
            rank,
            ambient,
            coords: vec![Polynomial::zero(); binomial(ambient, rank)],
        }
    }

    /// `f` in coordinate `slot`, zero elsewhere.
    pub fn unit(rank: usize, ambient: usize, slot: usize, f: Polynomial) -> Self {
        let mut out = Self::zero(rank, ambient);
        out.coords[slot] = f;
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn coords(&self) -> &[Polynomial] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Polynomial::is_zero)
    }

    /// Euclidean pairing with the symbolic direction, `sum_r f_r e_r`.
    /// Meaningful for rank-1 fields.
    pub fn dot_direction(&self) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (r, f) in self.coords.iter().enumerate() {
            acc += &f.mul(&Polynomial::e(r + 1));
        }
        acc
    }

    /// Replace the symbolic direction by concrete rationals in every coordinate.
    pub fn substitute_direction(&self, direction: &[Rational]) -> Result<Self, crate::ring::RingError> {
        let coords = self
            .coords
            .iter()
            .map(|f| f.substitute_direction(direction))
            .collect::<Result<_, _>>()?;
        Ok(Self { coords, ..self.clone() })
    }
}

impl fmt::Display for VectorFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (pos, c) in self.coords.iter().enumerate() {
            if pos > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `p_k`: coefficients read off in lexicographic multi-index order.
pub fn presentation(form: &KForm) -> VectorFunction {
    let n = form.ambient();
    let coords = MultiIndex::enumerate(form.degree(), n)
        .expect("form degree is at most n")
        .iter()
        .map(|idx| form.coefficient(idx))
        .collect();
    VectorFunction {
        rank: form.degree(),
        ambient: n,
        coords,
    }
}

/// `p_k^{-1}`.
pub fn presentation_inverse(f: &VectorFunction) -> KForm {
    let basis = MultiIndex::enumerate(f.rank, f.ambient).expect("rank is at most n");
    KForm::from_terms(f.rank, f.ambient, basis.into_iter().zip(f.coords.iter().cloned()))
        .expect("basis indices match rank and ambient")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OpKind {
    /// `∇0`, Gateaux derivative along `e`.
    Directional,
    /// `∇i = p_i d_{i-1} p_{i-1}^{-1}`, `1 <= i <= m`.
    Ascending,
    /// `∇_{m+1} = p ⋆^{-1} d_m p_m^{-1}`: `A_m -> A_{m-1}` for even `n`, `A_m -> A_m` for odd `n`.
    Middle,
    /// `∇_{n-j} = p_j ⋆_j^{-1} d ⋆_{j+1} p_{j+1}^{-1}`.
    Descending,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OperationDescriptor {
    pub index: usize,
    pub ambient: usize,
    pub domain_rank: usize,
    pub codomain_rank: usize,
    pub kind: OpKind,
}

impl fmt::Display for OperationDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "∇{}: A{} -> A{}",
            self.index, self.domain_rank, self.codomain_rank
        )
    }
}

/// Descriptor of `∇index` on `R^ambient`.
pub fn operation(ambient: usize, index: usize) -> Result<OperationDescriptor, NablaError> {
    if ambient < 2 {
        return Err(NablaError::DimensionTooSmall(ambient));
    }
    if index > ambient {
        return Err(NablaError::IndexOutOfRange { index, ambient });
    }
    let m = half(ambient);
    let (domain_rank, codomain_rank, kind) = if index == 0 {
        (0, 0, OpKind::Directional)
    } else if index <= m {
        (index - 1, index, OpKind::Ascending)
    } else if index == m + 1 {
        let out = if ambient.is_multiple_of(2) { m - 1 } else { m };
        (m, out, OpKind::Middle)
    } else {
        let j = ambient - index;
        (j + 1, j, OpKind::Descending)
    };
    Ok(OperationDescriptor {
        index,
        ambient,
        domain_rank,
        codomain_rank,
        kind,
    })
}

/// `∇1..∇n`, preceded by `∇0` when `with_directional` is set.
pub fn build_operations(
    ambient: usize,
    with_directional: bool,
) -> Result<Vec<OperationDescriptor>, NablaError> {
    let first = if with_directional { 0 } else { 1 };
    (first..=ambient).map(|i| operation(ambient, i)).collect()
}

pub fn family_operations(ambient: usize, family: Family) -> Result<Vec<OperationDescriptor>, NablaError> {
    build_operations(ambient, family.with_directional())
}

pub fn apply_nabla(
    desc: &OperationDescriptor,
    f: &VectorFunction,
) -> Result<VectorFunction, NablaError> {
    if f.ambient != desc.ambient {
        return Err(NablaError::AmbientMismatch {
            expected: desc.ambient,
            got: f.ambient,
        });
    }
    if f.rank != desc.domain_rank {
        return Err(NablaError::RankMismatch {
            index: desc.index,
            expected: desc.domain_rank,
            got: f.rank,
        });
    }
    let n = desc.ambient;
    let out = match desc.kind {
        OpKind::Directional => {
            let g = &f.coords[0];
            let mut acc = Polynomial::zero();
            for k in 1..=n {
                acc += &g.d_dx(k).mul(&Polynomial::e(k));
            }
            VectorFunction::scalar(acc, n)
        }
        OpKind::Ascending => presentation(&presentation_inverse(f).exterior_derivative()),
        OpKind::Middle => {
            let raised = presentation_inverse(f).exterior_derivative();
            presentation(&raised.hodge_star_inverse(desc.codomain_rank)?)
        }
        OpKind::Descending => {
            let raised = presentation_inverse(f).hodge_star().exterior_derivative();
            presentation(&raised.hodge_star_inverse(desc.codomain_rank)?)
        }
    };
    debug_assert_eq!(out.rank, desc.codomain_rank);
    Ok(out)
}

/// `b` may be applied after `a`.
pub fn composable(a: &OperationDescriptor, b: &OperationDescriptor) -> bool {
    a.ambient == b.ambient && b.domain_rank == a.codomain_rank
}

/// `∇i ν ∇j`: the composition `∇j ∘ ∇i` is non-trivial.
pub fn nu_related(i: usize, j: usize, n: usize) -> bool {
    (i == 0 && j == 0) || (i == 0 && j == 1) || (i == n && j == 0) || (i + j == n + 1 && 2 * i != n)
}

/// Whether `[i, n+1-i, i, ...]` of the given order is a non-trivial composition.
///
/// For odd `n` every `1 <= i <= n` qualifies. For even `n = 2m` the two
/// exceptional starts die at a fixed order: `i = m` is trivial from order 2
/// on (`∇_{m+1} ∘ ∇_m` contains `d d`) and `i = m + 1` from order 3 on.
pub fn star_admissible(i: usize, order: usize, n: usize) -> bool {
    if i == 0 || i > n || order == 0 {
        return false;
    }
    !((order >= 2 && 2 * i == n) || (order >= 3 && 2 * (i - 1) == n))
}

/// The alternating sequence `[i, n+1-i, i, ...]` of the given order, in
/// application order.
pub fn star_sequence(i: usize, order: usize, n: usize) -> Result<Vec<usize>, NablaError> {
    if n < 2 {
        return Err(NablaError::DimensionTooSmall(n));
    }
    if i == 0 || i > n {
        return Err(NablaError::IndexOutOfRange { index: i, ambient: n });
    }
    if order == 0 {
        return Err(NablaError::EmptySequence);
    }
    if !star_admissible(i, order, n) {
        return Err(NablaError::ExcludedStarIndex {
            index: i,
            order,
            ambient: n,
        });
    }
    let partner = n + 1 - i;
    Ok((0..order).map(|p| if p % 2 == 0 { i } else { partner }).collect())
}

/// Every admissible alternating sequence of the given order, ordered by start.
pub fn star_sequences(order: usize, n: usize) -> Vec<Vec<usize>> {
    (1..=n)
        .filter_map(|i| star_sequence(i, order, n).ok())
        .collect()
}

/// Descriptors of `seq`, checked for range and type-compatibility.
pub fn sequence_operations(seq: &[usize], n: usize) -> Result<Vec<OperationDescriptor>, NablaError> {
    if seq.is_empty() {
        return Err(NablaError::EmptySequence);
    }
    let ops = seq
        .iter()
        .map(|&i| operation(n, i))
        .collect::<Result<Vec<_>, _>>()?;
    for (position, pair) in ops.windows(2).enumerate() {
        if !composable(&pair[0], &pair[1]) {
            return Err(NablaError::NotComposable {
                position: position + 1,
                prev: pair[0].index,
                next: pair[1].index,
            });
        }
    }
    Ok(ops)
}

fn apply_ops(ops: &[OperationDescriptor], f: &VectorFunction) -> Result<VectorFunction, NablaError> {
    let mut current = f.clone();
    for op in ops {
        current = apply_nabla(op, &current)?;
    }
    Ok(current)
}

/// Apply `∇ik ∘ ... ∘ ∇i1` to `f`.
pub fn apply_sequence(seq: &[usize], f: &VectorFunction) -> Result<VectorFunction, NablaError> {
    let ops = sequence_operations(seq, f.ambient)?;
    apply_ops(&ops, f)
}

/// Inputs on which a composition of order `order` with domain `A_rank` is
/// tested: one monomial of degree at most `order` in one coordinate slot.
pub fn oracle_basis(rank: usize, n: usize, order: usize) -> Vec<VectorFunction> {
    let slots = binomial(n, rank);
    let mut out = Vec::new();
    // highest degree first: lower-degree monomials are annihilated by any
    // homogeneous operator of order `order` and only confirm triviality
    for degree in (0..=order as u32).rev() {
        for m in x_monomials_of_degree(n, degree) {
            for slot in 0..slots {
                let f = Polynomial::term(Rational::from_integer(1.into()), m.clone());
                out.push(VectorFunction::unit(rank, n, slot, f));
            }
        }
    }
    out
}

/// Whether `∇ik ∘ ... ∘ ∇i1` is the zero operator.
///
/// Every `∇` is a first-order operator with constant coefficients, so the
/// composition is a constant-coefficient operator of order at most `k`.
/// Such an operator vanishes identically iff it kills every monomial of
/// degree at most `k` placed in every coordinate. Direction symbols stay
/// symbolic, so a composition with `∇0` is trivial only if it vanishes for
/// every direction.
pub fn is_trivial_composition(seq: &[usize], n: usize) -> Result<bool, NablaError> {
    let ops = sequence_operations(seq, n)?;
    let basis = oracle_basis(ops[0].domain_rank, n, seq.len());
    let nonzero = basis
        .par_iter()
        .map(|f| apply_ops(&ops, f).map(|out| !out.is_zero()))
        .try_fold(|| false, |acc, hit| hit.map(|h| acc || h))
        .try_reduce(|| false, |a, b| Ok(a || b))?;
    Ok(!nonzero)
}

/// All type-composable sequences of the given order over the family, in
/// lexicographic order.
pub fn composable_sequences(
    n: usize,
    order: usize,
    family: Family,
) -> Result<Vec<Vec<usize>>, NablaError> {
    let ops = family_operations(n, family)?;
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = ops.iter().rev().map(|op| vec![op.index]).collect();
    if order == 0 {
        return Ok(out);
    }
    while let Some(seq) = stack.pop() {
        if seq.len() == order {
            out.push(seq);
            continue;
        }
        let last = operation(n, *seq.last().expect("non-empty"))?;
        for op in ops.iter().rev() {
            if composable(&last, op) {
                let mut next = seq.clone();
                next.push(op.index);
                stack.push(next);
            }
        }
    }
    Ok(out)
}

/// `∇ik ∘ ... ∘ ∇i1` for `[i1, ..., ik]`.
pub fn render_sequence(seq: &[usize]) -> String {
    seq.iter()
        .rev()
        .map(|i| format!("∇{i}"))
        .collect::<Vec<_>>()
        .join(" ∘ ")
}
