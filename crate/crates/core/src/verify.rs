//! Seeded identity suites over random and constructed inputs.
//!
//! Each suite reports how many cases ran, how many passed and a rendering of
//! the first failing witness, so a red line can be reproduced from the seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::forms::KForm;
use crate::harmonic::{
    coordinate_harmonic_witnesses, harmonic_basis, lemma_sides, theorem3_check,
};
use crate::nabla::{
    apply_nabla, apply_sequence, half, is_trivial_composition, nu_related, operation,
    presentation, presentation_inverse, render_sequence, VectorFunction,
};
use crate::random::{random_field, random_form, random_polynomial, PolySpec};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub n: usize,
    pub cases: usize,
    pub passed: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(suite: &str, n: usize) -> Self {
        Self {
            suite: suite.to_string(),
            n,
            cases: 0,
            passed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(witness());
        }
    }

    pub fn ok(&self) -> bool {
        self.cases == self.passed
    }
}

fn rng_for(seed: u64, n: usize, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream * 64 + n as u64);
    rng
}

fn parity(k: usize) -> i32 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `d∘d = 0`, `⋆⋆ = (-1)^{k(n-k)}`, `⋆^{-1}⋆ = id`, the graded Leibniz rule and
/// agreement of the two codifferential formulas, on `cases` random forms of
/// every degree `0..=n`.
pub fn forms_suites(n: usize, cases: usize, seed: u64) -> Vec<SuiteResult> {
    let mut rng = rng_for(seed, n, 1);
    let spec = PolySpec::new(n, 4);
    let mut dd = SuiteResult::new("d∘d = 0", n);
    let mut star_star = SuiteResult::new("⋆⋆ = (-1)^(k(n-k)) id", n);
    let mut round_trip = SuiteResult::new("⋆⁻¹∘⋆ = id", n);
    let mut leibniz = SuiteResult::new("d(ω∧η) = dω∧η + (-1)^k ω∧dη", n);
    let mut delta = SuiteResult::new("δ = (-1)^k ⋆⁻¹d⋆ = (-1)^(n(k-1)+1) ⋆d⋆", n);
    for k in 0..=n {
        for _ in 0..cases {
            let w = random_form(&mut rng, k, &spec);
            dd.record(w.exterior_derivative().exterior_derivative().is_zero(), || {
                format!("k={k}: {w}")
            });
            star_star.record(w.hodge_star().hodge_star() == w.signed(parity(k * (n - k))), || {
                format!("k={k}: {w}")
            });
            round_trip.record(
                w.hodge_star().hodge_star_inverse(k).ok().as_ref() == Some(&w),
                || format!("k={k}: {w}"),
            );
            let l = rng.gen_range(0..=n - k);
            let v = random_form(&mut rng, l, &spec);
            leibniz.record(leibniz_holds(&w, &v), || format!("k={k}, l={l}: ω = {w}; η = {v}"));
            if k >= 1 {
                let ok = matches!(
                    (w.codifferential(), w.codifferential_double_star()),
                    (Ok(a), Ok(b)) if a == b
                );
                delta.record(ok, || format!("k={k}: {w}"));
            }
        }
    }
    vec![dd, star_star, round_trip, leibniz, delta]
}

fn leibniz_holds(w: &KForm, v: &KForm) -> bool {
    let lhs = w.wedge(v).map(|p| p.exterior_derivative());
    let first = w.exterior_derivative().wedge(v);
    let second = w.wedge(&v.exterior_derivative());
    match (lhs, first, second) {
        (Ok(lhs), Ok(a), Ok(b)) => a.add(&b.signed(parity(w.degree()))).ok() == Some(lhs),
        _ => false,
    }
}

/// Identities of the operations `∇0..∇n`: the presentation round trip,
/// `∇0 f = e·∇1 f`, vanishing of every composable pair outside `ν` on random
/// inputs, and non-triviality of every pair inside `ν` by the symbolic oracle.
pub fn nabla_suites(n: usize, cases: usize, seed: u64) -> Vec<SuiteResult> {
    let mut rng = rng_for(seed, n, 2);
    let spec = PolySpec::new(n, 4);
    let mut presentation_suite = SuiteResult::new("p_k∘p_k⁻¹ = id", n);
    for k in 0..=n {
        for _ in 0..cases {
            let f = random_field(&mut rng, k, &spec);
            presentation_suite.record(presentation(&presentation_inverse(&f)) == f, || {
                format!("k={k}: {f}")
            });
        }
    }

    let mut directional = SuiteResult::new("∇0 f = e·∇1 f", n);
    let grad = operation(n, 1).expect("n >= 2");
    let gateaux = operation(n, 0).expect("n >= 2");
    for _ in 0..cases {
        let f = VectorFunction::scalar(random_polynomial(&mut rng, &spec), n);
        let ok = match (apply_nabla(&gateaux, &f), apply_nabla(&grad, &f)) {
            (Ok(a), Ok(b)) => a.coords()[0] == b.dot_direction(),
            _ => false,
        };
        directional.record(ok, || f.to_string());
    }

    let mut outside = SuiteResult::new("composable pairs outside ν vanish", n);
    let mut inside = SuiteResult::new("pairs in ν are non-trivial", n);
    for i in 0..=n {
        for j in 0..=n {
            let (a, b) = (operation(n, i).expect("index <= n"), operation(n, j).expect("index <= n"));
            if b.domain_rank != a.codomain_rank {
                continue;
            }
            let seq = [i, j];
            if nu_related(i, j, n) {
                inside.record(is_trivial_composition(&seq, n) == Ok(false), || {
                    render_sequence(&seq)
                });
            } else {
                for _ in 0..cases.min(20) {
                    let f = random_field(&mut rng, a.domain_rank, &spec);
                    let ok = apply_sequence(&seq, &f).map(|g| g.is_zero()) == Ok(true);
                    outside.record(ok, || format!("{} on {f}", render_sequence(&seq)));
                }
            }
        }
    }
    vec![presentation_suite, directional, outside, inside]
}

fn describe_sides(f: &VectorFunction) -> String {
    let n = f.ambient();
    let k = f.rank();
    match lemma_sides(f) {
        Ok(s) => format!(
            "k={k}, f = {f}: Δ harmonic = {}, ∇{} f = 0 is {}, ∇{} f = 0 is {}",
            s.harmonic,
            n - (k - 1),
            s.lowering_zero,
            k + 1,
            s.raising_zero
        ),
        Err(e) => format!("k={k}, f = {f}: {e}"),
    }
}

fn lemma_case(suite: &mut SuiteResult, f: &VectorFunction) {
    let ok = lemma_sides(f).map(|s| s.holds()).unwrap_or(false);
    suite.record(ok, || describe_sides(f));
}

/// Harmonic-field equivalence on `cases` random fields of each rank
/// `1..=⌊n/2⌋` (coordinates of degree at most 3).
pub fn lemma_random_suite(n: usize, cases: usize, seed: u64) -> SuiteResult {
    let mut rng = rng_for(seed, n, 3);
    let spec = PolySpec::new(n, 3);
    let mut suite = SuiteResult::new("harmonic-field equivalence, random fields", n);
    for k in 1..=half(n) {
        for _ in 0..cases {
            lemma_case(&mut suite, &random_field(&mut rng, k, &spec));
        }
    }
    suite
}

/// Harmonic-field equivalence on constructed inputs: gradients and slot
/// placements of harmonic polynomials (harmonic), and the same multiplied by
/// `x1^2` (generically not harmonic).
pub fn lemma_constructed_suite(n: usize, degree_max: u32) -> SuiteResult {
    let mut suite = SuiteResult::new("harmonic-field equivalence, constructed fields", n);
    let x1_sq = crate::ring::Polynomial::x(1).mul(&crate::ring::Polynomial::x(1));
    let mut fields = Vec::new();
    for d in 0..=degree_max {
        for h in harmonic_basis(n, d).elements {
            if let Ok(g) = apply_sequence(&[1], &VectorFunction::scalar(h.clone(), n)) {
                fields.push(g);
            }
            for k in 1..=half(n) {
                fields.push(VectorFunction::unit(k, n, 0, h.clone()));
                fields.push(VectorFunction::unit(k, n, 0, h.mul(&x1_sq)));
            }
        }
    }
    for f in fields.iter().filter(|f| !f.is_zero()) {
        lemma_case(&mut suite, f);
    }
    suite
}

fn composition_suite(name: &str, n: usize, k_max: usize, witnesses: &[VectorFunction]) -> SuiteResult {
    let outcomes: Vec<(bool, String)> = witnesses
        .par_iter()
        .map(|w| match theorem3_check(w, k_max) {
            Ok(report) => match report.first_nonzero() {
                None => (true, String::new()),
                Some(case) => (
                    false,
                    format!(
                        "{} on {w} gives ({})",
                        case.rendered,
                        case.output.as_deref().unwrap_or_default().join(", ")
                    ),
                ),
            },
            Err(e) => (false, format!("{w}: {e}")),
        })
        .collect();
    let mut suite = SuiteResult::new(name, n);
    for (ok, witness) in outcomes {
        suite.record(ok, || witness);
    }
    suite
}

/// Alternating compositions of order up to `k_max` on harmonic polynomials of
/// degree `<= degree_max`.
pub fn harmonic_function_suite(n: usize, k_max: usize, degree_max: u32) -> SuiteResult {
    let witnesses: Vec<VectorFunction> = coordinate_harmonic_witnesses(n, degree_max)
        .into_iter()
        .filter(|w| w.rank() == 0 && !w.is_zero())
        .collect();
    composition_suite("alternating compositions on harmonic functions", n, k_max, &witnesses)
}

/// Alternating compositions of order up to `k_max` on harmonic fields made by
/// placing one harmonic polynomial of degree `<= degree_max` in one slot.
pub fn harmonic_field_suite(n: usize, k_max: usize, degree_max: u32) -> SuiteResult {
    let witnesses: Vec<VectorFunction> = coordinate_harmonic_witnesses(n, degree_max)
        .into_iter()
        .filter(|w| w.rank() >= 1 && !w.is_zero())
        .collect();
    composition_suite("alternating compositions on harmonic fields", n, k_max, &witnesses)
}
