//! Counting compositions and non-trivial compositions.
//!
//! Three independent routes are kept side by side:
//!
//! * walks in a digraph over the operations, counted with big-integer
//!   vector-matrix products (composability digraph for all compositions,
//!   `ν` digraph for the non-trivial ones);
//! * the closed forms `g`, `j` and `g^G`, and the Fibonacci recurrence for
//!   `g̃^G`;
//! * the symbolic oracle of [`crate::nabla::is_trivial_composition`] run over
//!   every composable sequence (small `n` and `k` only).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::nabla::{self, composable, family_operations, nu_related, Family, NablaError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("Fibonacci numbers are indexed from 1")]
    FibonacciIndex,
    #[error(transparent)]
    Nabla(#[from] NablaError),
}

/// `F_k` with `F_1 = F_2 = 1`.
pub fn fibonacci(k: usize) -> Result<BigUint, CensusError> {
    if k == 0 {
        return Err(CensusError::FibonacciIndex);
    }
    let (mut a, mut b) = (BigUint::one(), BigUint::one());
    for _ in 2..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    Ok(b)
}

fn fib(k: usize) -> BigUint {
    fibonacci(k).expect("index is positive")
}

/// Adjacency matrix of a digraph on `nodes`, stored row-major.
struct Digraph {
    nodes: Vec<usize>,
    edges: Vec<Vec<bool>>,
}

impl Digraph {
    fn new(nodes: Vec<usize>, edge: impl Fn(usize, usize) -> bool) -> Self {
        let edges = nodes
            .iter()
            .map(|&a| nodes.iter().map(|&b| edge(a, b)).collect())
            .collect();
        Self { nodes, edges }
    }

    /// Number of walks visiting `length` nodes. The all-ones start vector is
    /// the virtual root above every node; `length = 0` is the root alone.
    fn walks(&self, length: usize) -> BigUint {
        if length == 0 {
            return BigUint::one();
        }
        let size = self.nodes.len();
        let mut ends = vec![BigUint::one(); size];
        for _ in 1..length {
            let mut next = vec![BigUint::zero(); size];
            for (a, count) in ends.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                for (b, slot) in next.iter_mut().enumerate() {
                    if self.edges[a][b] {
                        *slot += count;
                    }
                }
            }
            ends = next;
        }
        ends.into_iter().sum()
    }
}

fn family_nodes(n: usize, family: Family) -> Vec<usize> {
    let first = if family.with_directional() { 0 } else { 1 };
    (first..=n).collect()
}

/// Number of type-composable sequences of order `k` over the family.
pub fn count_compositions_graph(n: usize, k: usize, family: Family) -> Result<BigUint, CensusError> {
    let ops = family_operations(n, family)?;
    let nodes = ops.iter().map(|op| op.index).collect();
    let graph = Digraph::new(nodes, |a, b| {
        let by_index = |i| ops.iter().find(|op| op.index == i).expect("node is an operation");
        composable(by_index(a), by_index(b))
    });
    Ok(graph.walks(k))
}

/// Number of walks of `k` nodes in the `ν` digraph of the family.
pub fn count_nontrivial_graph(n: usize, k: usize, family: Family) -> Result<BigUint, CensusError> {
    if n < 2 {
        return Err(NablaError::DimensionTooSmall(n).into());
    }
    let graph = Digraph::new(family_nodes(n, family), |i, j| nu_related(i, j, n));
    Ok(graph.walks(k))
}

/// Number of non-trivial compositions of order `k` over `𝒜n`.
pub fn g_formula(n: usize, k: usize) -> i64 {
    let n = n as i64;
    match (n % 2 == 0, k) {
        (false, _) => n,
        (true, 1) => n,
        (true, 2) => n - 1,
        (true, _) => n - 2,
    }
}

/// `j(k) = g(k) - 2`, the non-trivial compositions starting with `∇2..∇_{n-1}`.
pub fn j_formula(n: usize, k: usize) -> i64 {
    let n = n as i64;
    match (n % 2 == 0, k) {
        (false, _) => n - 2,
        (true, 1) => n - 2,
        (true, 2) => n - 3,
        (true, _) => n - 4,
    }
}

/// Number of non-trivial compositions of order `k` over `ℬn`, piecewise form.
pub fn g_g_formula(n: usize, k: usize) -> BigInt {
    let ni = n as i64;
    let fib_term = || BigInt::from(fib(k + 3));
    match (n.is_multiple_of(2), k) {
        (false, _) => fib_term() + (ni - 2),
        (true, 1) => BigInt::from(ni + 1),
        (true, 2) => BigInt::from(ni + 2),
        (true, _) => fib_term() + (ni - 4),
    }
}

/// `g̃^G(k)` from `g̃^G(1) = 3`, `g̃^G(2) = 5` and `g̃^G(k) = g̃^G(k-1) + g̃^G(k-2)`.
pub fn g_tilde_recurrence(k: usize) -> BigUint {
    let (mut prev, mut cur) = (BigUint::from(3u32), BigUint::from(5u32));
    match k {
        0 => panic!("order starts at 1"),
        1 => prev,
        _ => {
            for _ in 2..k {
                let next = &prev + &cur;
                prev = std::mem::replace(&mut cur, next);
            }
            cur
        }
    }
}

/// `g^G(k) = g̃^G(k) + j(k)` with `g̃^G` from its recurrence.
pub fn g_g_recurrence(n: usize, k: usize) -> BigInt {
    BigInt::from(g_tilde_recurrence(k)) + j_formula(n, k)
}

/// The three-dimensional route: `t(k) = t(k-1) + t(k-2)` with `t(1) = 3`,
/// `t(2) = 5`, and `g^G(k) = t(k) + 1`.
pub fn g_g_recurrence_r3(k: usize) -> BigUint {
    let (mut t_prev, mut t) = (BigUint::from(3u32), BigUint::from(5u32));
    if k == 1 {
        return t_prev + 1u32;
    }
    for _ in 2..k {
        let next = &t_prev + &t;
        t_prev = std::mem::replace(&mut t, next);
    }
    t + 1u32
}

/// Per-start counts `(g_0, g_1, g_n)` of `ℬn` from the start-node
/// recurrences `g_0(k) = g_0(k-1) + g_1(k-1)`, `g_1(k) = g_n(k-1)`,
/// `g_n(k) = g_0(k-1) + g_1(k-1)`, all starting at 1 for `k = 1`.
pub fn start_counts_recurrence(k: usize) -> (BigUint, BigUint, BigUint) {
    let mut g = (BigUint::one(), BigUint::one(), BigUint::one());
    for _ in 1..k {
        let (g0, g1, gn) = g;
        let both = &g0 + &g1;
        g = (both.clone(), gn, both);
    }
    g
}

/// Number of non-trivial sequences of order `k`, by running the symbolic
/// oracle over every composable sequence.
pub fn count_nontrivial_oracle(n: usize, k: usize, family: Family) -> Result<BigUint, CensusError> {
    let seqs = nabla::composable_sequences(n, k, family)?;
    let verdicts = seqs
        .par_iter()
        .map(|seq| nabla::is_trivial_composition(seq, n))
        .collect::<Result<Vec<bool>, _>>()?;
    Ok(BigUint::from(verdicts.iter().filter(|trivial| !**trivial).count()))
}

fn as_decimal<S: Serializer, T: ToString>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

fn as_optional_decimal<S: Serializer, T: ToString>(value: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// One `(n, k, family)` cell of the census.
///
/// For `𝒜n` the formula is `g(k)` and the recurrence column holds
/// `j(k) + 2`; for `ℬn` they are `g^G(k)` and `g̃^G(k) + j(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub k: usize,
    pub family: Family,
    #[serde(serialize_with = "as_decimal")]
    pub compositions: BigUint,
    #[serde(serialize_with = "as_decimal")]
    pub count_graph: BigInt,
    #[serde(serialize_with = "as_decimal")]
    pub count_formula: BigInt,
    #[serde(serialize_with = "as_decimal")]
    pub count_recurrence: BigInt,
    #[serde(serialize_with = "as_optional_decimal")]
    pub count_oracle: Option<BigInt>,
    pub agree: bool,
}

/// Bounds under which the symbolic oracle is run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimit {
    pub n_max: usize,
    pub k_max: usize,
}

impl OracleLimit {
    pub const DEFAULT: OracleLimit = OracleLimit { n_max: 5, k_max: 4 };
    pub const OFF: OracleLimit = OracleLimit { n_max: 0, k_max: 0 };

    fn covers(&self, n: usize, k: usize) -> bool {
        n <= self.n_max && k <= self.k_max
    }
}

/// Census cell for one `(n, k, family)`.
pub fn census_cell(
    n: usize,
    k: usize,
    family: Family,
    oracle: OracleLimit,
) -> Result<CensusReport, CensusError> {
    let compositions = count_compositions_graph(n, k, family)?;
    let count_graph = BigInt::from(count_nontrivial_graph(n, k, family)?);
    let (count_formula, count_recurrence) = match family {
        Family::A => (BigInt::from(g_formula(n, k)), BigInt::from(j_formula(n, k) + 2)),
        Family::B => (g_g_formula(n, k), g_g_recurrence(n, k)),
    };
    let count_oracle = if oracle.covers(n, k) {
        Some(BigInt::from(count_nontrivial_oracle(n, k, family)?))
    } else {
        None
    };
    let agree = count_graph == count_formula
        && count_graph == count_recurrence
        && count_oracle.as_ref().is_none_or(|c| *c == count_graph);
    Ok(CensusReport {
        n,
        k,
        family,
        compositions,
        count_graph,
        count_formula,
        count_recurrence,
        count_oracle,
        agree,
    })
}

/// Census over `2 <= n <= n_max`, `1 <= k <= k_max` and both families,
/// sorted by `(n, family, k)`.
pub fn cross_check(
    n_max: usize,
    k_max: usize,
    oracle: OracleLimit,
) -> Result<Vec<CensusReport>, CensusError> {
    let cells: Vec<(usize, Family, usize)> = (2..=n_max)
        .flat_map(|n| {
            [Family::A, Family::B]
                .into_iter()
                .flat_map(move |fam| (1..=k_max).map(move |k| (n, fam, k)))
        })
        .collect();
    cells
        .par_iter()
        .map(|&(n, fam, k)| census_cell(n, k, fam, oracle))
        .collect()
}


#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn graph_counts_match_closed_forms(n in 3usize..=14, k in 1usize..=40) {
            let a = count_nontrivial_graph(n, k, Family::A).unwrap();
            prop_assert_eq!(BigInt::from(a), BigInt::from(g_formula(n, k)));
            let b = BigInt::from(count_nontrivial_graph(n, k, Family::B).unwrap());
            prop_assert_eq!(&b, &g_g_formula(n, k));
            prop_assert_eq!(&b, &g_g_recurrence(n, k));
        }

        #[test]
        fn nontrivial_never_exceeds_compositions(n in 2usize..=10, k in 1usize..=20) {
            for family in [Family::A, Family::B] {
                prop_assert!(
                    count_nontrivial_graph(n, k, family).unwrap()
                        <= count_compositions_graph(n, k, family).unwrap()
                );
            }
        }
    }
}
