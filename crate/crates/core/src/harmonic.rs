//! Harmonic polynomials, harmonic fields and the alternating compositions
//! acting on them.
//!
//! Two predicates are kept apart: [`is_harmonic_field`] asks whether the
//! Laplace-de Rham operator kills the form `p_k^{-1} f`, while
//! [`is_coordinate_harmonic`] asks whether every coordinate is killed by the
//! scalar Laplacian.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::multiindex::binomial;
use crate::nabla::{
    self, apply_sequence, half, operation, presentation_inverse, render_sequence, star_sequences,
    NablaError, VectorFunction,
};
use crate::ring::{x_monomials_of_degree, Polynomial, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarmonicError {
    #[error("rank {rank} outside {min}..={max} on R^{ambient}")]
    RankOutOfRange {
        rank: usize,
        min: usize,
        max: usize,
        ambient: usize,
    },
    #[error("input is not harmonic: {0}")]
    NotHarmonic(String),
    #[error("the scan needs n >= 3, got {0}")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    Nabla(#[from] NablaError),
}

/// Basis of the harmonic homogeneous polynomials of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicBasis {
    pub n: usize,
    pub degree: u32,
    pub elements: Vec<Polynomial>,
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
fn row_reduce(matrix: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(found) = (row..rows).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(row, found);
        let inv = Rational::one() / matrix[row][col].clone();
        for entry in matrix[row].iter_mut() {
            *entry *= &inv;
        }
        for r in 0..rows {
            if r == row || matrix[r][col].is_zero() {
                continue;
            }
            let factor = matrix[r][col].clone();
            for c in col..cols {
                let delta = &factor * &matrix[row][c];
                matrix[r][c] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Kernel of the scalar Laplacian on homogeneous polynomials of degree `d`
/// in `x1..xn`, by exact row reduction on the monomial basis.
pub fn harmonic_basis(n: usize, d: u32) -> HarmonicBasis {
    let columns = x_monomials_of_degree(n, d);
    let rows = if d >= 2 {
        x_monomials_of_degree(n, d - 2)
    } else {
        Vec::new()
    };
    let mut matrix: Vec<Vec<Rational>> = vec![vec![Rational::zero(); columns.len()]; rows.len()];
    for (c, m) in columns.iter().enumerate() {
        let lap = Polynomial::term(Rational::one(), m.clone()).laplacian(n);
        for (r, target) in rows.iter().enumerate() {
            matrix[r][c] = lap.coefficient(target);
        }
    }
    let pivots = row_reduce(&mut matrix);
    let mut elements = Vec::new();
    for free in (0..columns.len()).filter(|c| !pivots.contains(c)) {
        let mut p = Polynomial::term(Rational::one(), columns[free].clone());
        for (row, &pivot) in pivots.iter().enumerate() {
            p.add_term(columns[pivot].clone(), -matrix[row][free].clone());
        }
        elements.push(p);
    }
    HarmonicBasis {
        n,
        degree: d,
        elements,
    }
}

/// Every coordinate has zero scalar Laplacian.
pub fn is_coordinate_harmonic(f: &VectorFunction) -> bool {
    f.coords().iter().all(|c| c.laplacian(f.ambient()).is_zero())
}

fn check_rank(f: &VectorFunction, min: usize) -> Result<(), HarmonicError> {
    let max = half(f.ambient());
    if f.rank() < min || f.rank() > max {
        return Err(HarmonicError::RankOutOfRange {
            rank: f.rank(),
            min,
            max,
            ambient: f.ambient(),
        });
    }
    Ok(())
}

/// `Δ_k(p_k^{-1} f) = 0`, for `0 <= k <= ⌊n/2⌋`.
pub fn is_harmonic_field(f: &VectorFunction) -> Result<bool, HarmonicError> {
    check_rank(f, 0)?;
    Ok(presentation_inverse(f).laplace_de_rham().is_zero())
}

/// The three predicates of the harmonic-field equivalence for one field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaSides {
    /// `Δ_k(p_k^{-1} f) = 0`.
    pub harmonic: bool,
    /// `∇_{n-(k-1)} f = 0`.
    pub lowering_zero: bool,
    /// `∇_{k+1} f = 0`.
    pub raising_zero: bool,
}

impl LemmaSides {
    pub fn holds(&self) -> bool {
        self.harmonic == (self.lowering_zero && self.raising_zero)
    }
}

pub fn lemma_sides(f: &VectorFunction) -> Result<LemmaSides, HarmonicError> {
    check_rank(f, 1)?;
    let n = f.ambient();
    let k = f.rank();
    let lowering = nabla::apply_nabla(&operation(n, n - (k - 1))?, f)?;
    let raising = nabla::apply_nabla(&operation(n, k + 1)?, f)?;
    Ok(LemmaSides {
        harmonic: is_harmonic_field(f)?,
        lowering_zero: lowering.is_zero(),
        raising_zero: raising.is_zero(),
    })
}

/// Whether `Δ_k(p_k^{-1} f) = 0 ⟺ ∇_{n-(k-1)} f = 0 ∧ ∇_{k+1} f = 0` holds
/// for this `f ∈ A_k`, `1 <= k <= ⌊n/2⌋`.
pub fn lemma_check(f: &VectorFunction) -> Result<bool, HarmonicError> {
    Ok(lemma_sides(f)?.holds())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionCase {
    pub sequence: Vec<usize>,
    pub rendered: String,
    pub zero: bool,
    /// Output coordinates when nonzero.
    pub output: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    pub n: usize,
    pub rank: usize,
    pub witness: Vec<String>,
    pub k_max: usize,
    pub cases: Vec<CompositionCase>,
    pub all_zero: bool,
}

impl CompositionReport {
    pub fn first_nonzero(&self) -> Option<&CompositionCase> {
        self.cases.iter().find(|c| !c.zero)
    }
}

fn run_case(seq: Vec<usize>, f: &VectorFunction) -> Result<CompositionCase, HarmonicError> {
    let out = apply_sequence(&seq, f)?;
    let zero = out.is_zero();
    Ok(CompositionCase {
        rendered: render_sequence(&seq),
        sequence: seq,
        zero,
        output: (!zero).then(|| out.coords().iter().map(ToString::to_string).collect()),
    })
}

/// Alternating sequences of orders `orders` whose first operation accepts `A_rank`.
fn star_sequences_from_rank(
    n: usize,
    rank: usize,
    orders: std::ops::RangeInclusive<usize>,
) -> Result<Vec<Vec<usize>>, HarmonicError> {
    let mut out = Vec::new();
    for order in orders {
        for seq in star_sequences(order, n) {
            if operation(n, seq[0])?.domain_rank == rank {
                out.push(seq);
            }
        }
    }
    Ok(out)
}

/// Applies every alternating composition that accepts `f` to it: orders
/// `2..=k_max` for a harmonic function, `1..=k_max` for a harmonic field.
/// For functions the chain `∇n ∘ ∇1` is the first case.
pub fn theorem3_check(f: &VectorFunction, k_max: usize) -> Result<CompositionReport, HarmonicError> {
    let n = f.ambient();
    if !is_harmonic_field(f)? {
        return Err(HarmonicError::NotHarmonic(f.to_string()));
    }
    let rank = f.rank();
    let mut seqs = Vec::new();
    let first_order = if rank == 0 {
        seqs.push(vec![1, n]);
        2
    } else {
        1
    };
    for seq in star_sequences_from_rank(n, rank, first_order..=k_max)? {
        if !seqs.contains(&seq) {
            seqs.push(seq);
        }
    }
    let cases = seqs
        .into_iter()
        .map(|seq| run_case(seq, f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CompositionReport {
        n,
        rank,
        witness: f.coords().iter().map(ToString::to_string).collect(),
        k_max,
        all_zero: cases.iter().all(|c| c.zero),
        cases,
    })
}

/// A nonzero output of an alternating composition on a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub sequence: Vec<usize>,
    pub rendered: String,
    pub witness_rank: usize,
    pub witness: Vec<String>,
    pub output: Vec<String>,
    pub witness_coordinate_harmonic: bool,
}

/// Bounded evidence on alternating compositions of order `k_min..=k_max`
/// acting on coordinate-harmonic witnesses. An empty result is not a proof.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub degree_max: u32,
    pub sequences_tested: usize,
    pub witnesses_tested: usize,
    pub applications: usize,
    pub nonzero_outputs: usize,
    pub counterexample: Option<Counterexample>,
}

/// Every harmonic basis element of degree `<= degree_max` in every coordinate
/// slot of `A_rank`, for each `0 <= rank <= ⌊n/2⌋`.
pub fn coordinate_harmonic_witnesses(n: usize, degree_max: u32) -> Vec<VectorFunction> {
    let bases: Vec<HarmonicBasis> = (0..=degree_max).map(|d| harmonic_basis(n, d)).collect();
    let mut out = Vec::new();
    for rank in 0..=half(n) {
        for basis in &bases {
            for element in &basis.elements {
                for slot in 0..binomial(n, rank) {
                    out.push(VectorFunction::unit(rank, n, slot, element.clone()));
                }
            }
        }
    }
    out
}

/// Runs the alternating compositions of order `k_min..=k_max` on the given
/// witnesses (each against the sequences accepting its rank).
pub fn scan_witnesses(
    n: usize,
    k_min: usize,
    k_max: usize,
    witnesses: &[VectorFunction],
) -> Result<ConjectureReport, HarmonicError> {
    let mut seqs = Vec::new();
    for order in k_min.max(1)..=k_max {
        seqs.extend(star_sequences(order, n));
    }
    let mut pairs = Vec::new();
    for (w_pos, w) in witnesses.iter().enumerate() {
        for (s_pos, seq) in seqs.iter().enumerate() {
            if operation(n, seq[0])?.domain_rank == w.rank() {
                pairs.push((s_pos, w_pos));
            }
        }
    }
    let mut hits = pairs
        .par_iter()
        .map(|&(s, w)| apply_sequence(&seqs[s], &witnesses[w]).map(|out| (s, w, out)))
        .filter(|res| res.as_ref().map_or(true, |(_, _, out)| !out.is_zero()))
        .collect::<Result<Vec<_>, _>>()?;
    hits.sort_by_key(|&(s, w, _)| (s, w));
    let counterexample = match hits.first() {
        Some((s, w, _)) => {
            let seq = seqs[*s].clone();
            let witness = &witnesses[*w];
            // recompute rather than trusting the parallel result
            let output = apply_sequence(&seq, witness)?;
            assert!(!output.is_zero(), "counterexample failed to re-verify");
            Some(Counterexample {
                rendered: render_sequence(&seq),
                sequence: seq,
                witness_rank: witness.rank(),
                witness: witness.coords().iter().map(ToString::to_string).collect(),
                output: output.coords().iter().map(ToString::to_string).collect(),
                witness_coordinate_harmonic: is_coordinate_harmonic(witness),
            })
        }
        None => None,
    };
    let degree_max = witnesses
        .iter()
        .flat_map(|w| w.coords().iter().filter_map(Polynomial::total_degree))
        .max()
        .unwrap_or(0);
    Ok(ConjectureReport {
        n,
        k_min,
        k_max,
        degree_max,
        sequences_tested: seqs.len(),
        witnesses_tested: witnesses.len(),
        applications: pairs.len(),
        nonzero_outputs: hits.len(),
        counterexample,
    })
}

/// Scan of alternating compositions of order `k_min..=k_max` over all
/// coordinate-harmonic witnesses built from harmonic bases of degree
/// `<= degree_max`.
pub fn conjecture_scan(
    n: usize,
    k_min: usize,
    k_max: usize,
    degree_max: u32,
) -> Result<ConjectureReport, HarmonicError> {
    if n < 3 {
        return Err(HarmonicError::DimensionTooSmall(n));
    }
    let witnesses = coordinate_harmonic_witnesses(n, degree_max);
    let mut report = scan_witnesses(n, k_min, k_max, &witnesses)?;
    report.degree_max = degree_max;
    if let Some(c) = &report.counterexample {
        debug_assert!(c.witness_coordinate_harmonic);
    }
    Ok(report)
}


#[cfg(test)]
mod properties {
    use super::*;
    use crate::random::{random_field, PolySpec};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn harmonic_basis_spans_kernel(n in 2usize..=4, d in 0u32..=5, seed in any::<u64>()) {
            let basis = harmonic_basis(n, d);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut combo = Polynomial::zero();
            for h in &basis.elements {
                combo = combo.add(&h.scale(&crate::ring::rat(rand::Rng::gen_range(&mut rng, -5..=5))));
            }
            prop_assert!(combo.laplacian(n).is_zero());
        }

        #[test]
        fn field_harmonicity_is_coordinatewise(n in 2usize..=6, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for k in 0..=half(n) {
                let f = random_field(&mut rng, k, &PolySpec::new(n, 3));
                prop_assert_eq!(is_harmonic_field(&f).unwrap(), is_coordinate_harmonic(&f));
            }
        }
    }
}
