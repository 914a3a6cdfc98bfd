//! Acceptance suite. Each criterion runs at its stated tolerance and time
//! limit and prints one PASS/FAIL line; the process exits nonzero if any
//! criterion fails.
//!
//! Run with `cargo test -p diffops --test acceptance`.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use diffops::census::{
    count_compositions_graph, count_nontrivial_graph, count_nontrivial_oracle, g_formula,
    g_g_formula, g_g_recurrence,
};
use diffops::harmonic::{conjecture_scan, ConjectureReport};
use diffops::nabla::{
    apply_sequence, composable_sequences, is_trivial_composition, render_sequence,
    star_sequences, Family, VectorFunction,
};
use diffops::random::{random_field, random_polynomial, PolySpec};
use diffops::verify::{
    forms_suites, harmonic_field_suite, harmonic_function_suite, lemma_constructed_suite,
    lemma_random_suite, SuiteResult, DEFAULT_SEED,
};
use diffops::Polynomial;

type Outcome = Result<String, String>;

struct Criterion {
    id: &'static str,
    title: &'static str,
    limit: Duration,
    check: fn() -> Outcome,
}

/// `F_k` with `F_1 = F_2 = 1`, by plain iteration.
fn fib(k: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::from(0u8), BigUint::from(1u8));
    for _ in 0..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r3_family_a() -> Outcome {
    for k in 1..=30 {
        let g = count_nontrivial_graph(3, k, Family::A).map_err(|e| e.to_string())?;
        ensure(g == BigUint::from(3u8), || format!("k={k}: non-trivial count {g}, expected 3"))?;
    }
    for k in 1..=20 {
        let f = count_compositions_graph(3, k, Family::A).map_err(|e| e.to_string())?;
        ensure(f == fib(k + 3), || format!("k={k}: {f} compositions, expected {}", fib(k + 3)))?;
    }
    Ok("g(k) = 3 for k <= 30, compositions = F(k+3) for k <= 20".into())
}

fn r3_family_b() -> Outcome {
    for k in 1..=20 {
        let f = count_compositions_graph(3, k, Family::B).map_err(|e| e.to_string())?;
        let expected = BigUint::from(1u8) << (k + 1);
        ensure(f == expected, || format!("k={k}: {f} compositions, expected {expected}"))?;
        let g = count_nontrivial_graph(3, k, Family::B).map_err(|e| e.to_string())?;
        let expected = fib(k + 3) + 1u8;
        ensure(g == expected, || format!("k={k}: {g} non-trivial, expected {expected}"))?;
    }
    let first: Vec<String> = (1..=3)
        .map(|k| count_nontrivial_graph(3, k, Family::B).map(|g| g.to_string()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(first == ["4", "6", "9"], || format!("first counts {first:?}, expected [4, 6, 9]"))?;
    Ok("compositions = 2^(k+1), non-trivial = F(k+3)+1 for k <= 20; 4, 6, 9".into())
}

fn closed_forms() -> Outcome {
    let mut mismatches = Vec::new();
    let mut cells = 0;
    for n in 2..=10 {
        for k in 1..=30 {
            cells += 1;
            let a = BigInt::from(count_nontrivial_graph(n, k, Family::A).map_err(|e| e.to_string())?);
            if a != BigInt::from(g_formula(n, k)) {
                mismatches.push(format!("A n={n} k={k}: graph {a}, g = {}", g_formula(n, k)));
            }
            let b = BigInt::from(count_nontrivial_graph(n, k, Family::B).map_err(|e| e.to_string())?);
            let formula = g_g_formula(n, k);
            let recurrence = g_g_recurrence(n, k);
            if b != formula || recurrence != formula {
                mismatches.push(format!(
                    "B n={n} k={k}: graph {b}, closed form {formula}, recurrence {recurrence}"
                ));
            }
        }
    }
    if mismatches.is_empty() {
        Ok(format!("{cells} cells per family agree"))
    } else {
        Err(format!(
            "{} of {} cells disagree; first: {}",
            mismatches.len(),
            2 * cells,
            mismatches[..mismatches.len().min(3)].join("; ")
        ))
    }
}

fn oracle_equivalence() -> Outcome {
    for n in 3..=5 {
        for k in 1..=4 {
            for family in [Family::A, Family::B] {
                let oracle = count_nontrivial_oracle(n, k, family).map_err(|e| e.to_string())?;
                let graph = count_nontrivial_graph(n, k, family).map_err(|e| e.to_string())?;
                ensure(oracle == graph, || {
                    format!("n={n} k={k} family {family}: oracle {oracle}, graph {graph}")
                })?;
            }
            let mut nontrivial = BTreeSet::new();
            for seq in composable_sequences(n, k, Family::A).map_err(|e| e.to_string())? {
                if !is_trivial_composition(&seq, n).map_err(|e| e.to_string())? {
                    nontrivial.insert(seq);
                }
            }
            let alternating: BTreeSet<Vec<usize>> = star_sequences(k, n).into_iter().collect();
            ensure(nontrivial == alternating, || {
                let render = |s: &BTreeSet<Vec<usize>>| {
                    s.iter().map(|q| render_sequence(q)).collect::<Vec<_>>().join(", ")
                };
                format!(
                    "n={n} k={k}: oracle set [{}] differs from alternating set [{}]",
                    render(&nontrivial),
                    render(&alternating)
                )
            })?;
        }
    }
    Ok("n = 3, 4, 5, k <= 4: oracle counts and sets agree".into())
}

fn forms_identities() -> Outcome {
    let mut cases = 0;
    for n in 1..=6 {
        for s in forms_suites(n, 200, DEFAULT_SEED) {
            cases += s.cases;
            ensure(s.ok(), || {
                format!("n={n} {}: {}", s.suite, s.first_failure.clone().unwrap_or_default())
            })?;
        }
    }
    Ok(format!("{cases} cases"))
}

fn partial(f: &Polynomial, i: usize) -> Polynomial {
    f.partial(i, 3).expect("variable within R^3")
}

fn concordance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let spec = PolySpec::new(3, 4);
    let zero = Polynomial::zero();
    for case in 0..100 {
        let f = random_polynomial(&mut rng, &spec);
        let scalar = VectorFunction::scalar(f.clone(), 3);
        let grad = apply_sequence(&[1], &scalar).map_err(|e| e.to_string())?;
        let expected = [partial(&f, 1), partial(&f, 2), partial(&f, 3)];
        ensure(grad.coords() == expected, || format!("case {case}: grad of {f} is {grad}"))?;

        let field = random_field(&mut rng, 1, &spec);
        let [f1, f2, f3] = [&field.coords()[0], &field.coords()[1], &field.coords()[2]];
        let curl = apply_sequence(&[2], &field).map_err(|e| e.to_string())?;
        let expected = [
            partial(f3, 2).sub(&partial(f2, 3)),
            partial(f1, 3).sub(&partial(f3, 1)),
            partial(f2, 1).sub(&partial(f1, 2)),
        ];
        ensure(curl.coords() == expected, || format!("case {case}: curl of {field} is {curl}"))?;

        let div = apply_sequence(&[3], &field).map_err(|e| e.to_string())?;
        let expected = partial(f1, 1).add(&partial(f2, 2)).add(&partial(f3, 3));
        ensure(div.coords() == [expected], || format!("case {case}: div of {field} is {div}"))?;

        let g1 = apply_sequence(&[1], &scalar).map_err(|e| e.to_string())?;
        let dir = VectorFunction::scalar(g1.dot_direction(), 3);
        let grad_dir = apply_sequence(&[1], &dir).map_err(|e| e.to_string())?;
        let checks = [
            (vec![0, 0], scalar.clone(), VectorFunction::scalar(grad_dir.dot_direction(), 3)),
            (vec![0, 1], scalar.clone(), grad_dir.clone()),
            (
                vec![1, 3],
                scalar.clone(),
                VectorFunction::scalar(f.laplacian(3), 3),
            ),
            (
                vec![3, 0],
                field.clone(),
                VectorFunction::scalar(
                    apply_sequence(&[3, 1], &field).map_err(|e| e.to_string())?.dot_direction(),
                    3,
                ),
            ),
            (vec![1, 2], scalar.clone(), VectorFunction::zero(1, 3)),
            (vec![2, 3], field.clone(), VectorFunction::scalar(zero.clone(), 3)),
        ];
        for (seq, input, expected) in checks {
            let got = apply_sequence(&seq, &input).map_err(|e| e.to_string())?;
            ensure(got == expected, || {
                format!("case {case}: {} on {input} gives {got}, expected {expected}", render_sequence(&seq))
            })?;
        }
    }
    let listed: BTreeSet<Vec<usize>> = [
        vec![0, 0],
        vec![0, 1],
        vec![1, 3],
        vec![2, 2],
        vec![3, 0],
        vec![3, 1],
        vec![1, 2],
        vec![2, 3],
    ]
    .into_iter()
    .collect();
    let all: BTreeSet<Vec<usize>> = composable_sequences(3, 2, Family::B)
        .map_err(|e| e.to_string())?
        .into_iter()
        .collect();
    ensure(all == listed, || format!("second-order compositions {all:?}"))?;
    let mut trivial = Vec::new();
    for seq in &all {
        if is_trivial_composition(seq, 3).map_err(|e| e.to_string())? {
            trivial.push(seq.clone());
        }
    }
    ensure(trivial == vec![vec![1, 2], vec![2, 3]], || {
        format!("trivial second-order compositions {trivial:?}")
    })?;
    Ok("grad, curl, div on 100 inputs; 8 second-order compositions, 2 trivial".into())
}

fn summarize(suites: &[SuiteResult]) -> Outcome {
    let cases: usize = suites.iter().map(|s| s.cases).sum();
    let failed: Vec<&SuiteResult> = suites.iter().filter(|s| !s.ok()).collect();
    if failed.is_empty() {
        return Ok(format!("{cases} cases"));
    }
    let bad: usize = failed.iter().map(|s| s.cases - s.passed).sum();
    let first = failed[0];
    Err(format!(
        "{bad} of {cases} cases fail; first at n={}: {}",
        first.n,
        first.first_failure.as_deref().unwrap_or_default()
    ))
}

fn equivalence_on_fields() -> Outcome {
    let mut suites = Vec::new();
    for n in 2..=6 {
        suites.push(lemma_random_suite(n, 500, DEFAULT_SEED));
        suites.push(lemma_constructed_suite(n, 3));
    }
    summarize(&suites)
}

fn compositions_on_harmonic_functions() -> Outcome {
    let suites: Vec<SuiteResult> = (2..=5).map(|n| harmonic_function_suite(n, 5, 5)).collect();
    summarize(&suites)
}

fn compositions_on_harmonic_fields() -> Outcome {
    let suites: Vec<SuiteResult> = (2..=5).map(|n| harmonic_field_suite(n, 5, 5)).collect();
    summarize(&suites)
}

fn golden_path(n: usize) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(format!("conjecture_n{n}_k4_deg4.json"))
}

fn compare_golden(report: &ConjectureReport) -> Result<String, String> {
    let rendered = serde_json::to_string_pretty(report).map_err(|e| e.to_string())? + "\n";
    let path = golden_path(report.n);
    match std::fs::read_to_string(&path) {
        Ok(stored) => {
            ensure(stored == rendered, || {
                format!("n={} report differs from {}", report.n, path.display())
            })?;
            Ok(format!("n={} matches golden", report.n))
        }
        Err(_) => {
            std::fs::create_dir_all(path.parent().expect("golden directory"))
                .map_err(|e| e.to_string())?;
            std::fs::write(&path, rendered).map_err(|e| e.to_string())?;
            Ok(format!("n={} archived to {}", report.n, path.display()))
        }
    }
}

fn conjecture_regression() -> Outcome {
    let r3 = conjecture_scan(3, 3, 5, 6).map_err(|e| e.to_string())?;
    ensure(r3.counterexample.is_none(), || {
        format!("n=3 counterexample {:?}", r3.counterexample)
    })?;
    let mut notes = vec![format!("n=3: {} applications, no counterexample", r3.applications)];
    for n in [4, 5] {
        let report = conjecture_scan(n, 3, 4, 4).map_err(|e| e.to_string())?;
        let verdict = if report.counterexample.is_some() { "counterexample" } else { "no counterexample" };
        notes.push(format!("{}, {verdict}", compare_golden(&report)?));
    }
    Ok(notes.join("; "))
}

fn main() {
    let criteria = [
        Criterion { id: "1", title: "R^3 family A counts", limit: Duration::from_secs(1), check: r3_family_a },
        Criterion { id: "2", title: "R^3 family B counts", limit: Duration::from_secs(1), check: r3_family_b },
        Criterion { id: "3", title: "closed forms, 2 <= n <= 10, k <= 30", limit: Duration::from_secs(5), check: closed_forms },
        Criterion { id: "4", title: "oracle equivalence", limit: Duration::from_secs(120), check: oracle_equivalence },
        Criterion { id: "5", title: "forms identities", limit: Duration::from_secs(60), check: forms_identities },
        Criterion { id: "6", title: "grad/curl/div concordance", limit: Duration::from_secs(10), check: concordance },
        Criterion { id: "7a", title: "harmonic-field equivalence", limit: Duration::from_secs(120), check: equivalence_on_fields },
        Criterion { id: "7b", title: "compositions on harmonic functions", limit: Duration::from_secs(120), check: compositions_on_harmonic_functions },
        Criterion { id: "7c", title: "compositions on harmonic fields", limit: Duration::from_secs(120), check: compositions_on_harmonic_fields },
        Criterion { id: "8", title: "conjecture scan regression", limit: Duration::from_secs(600), check: conjecture_regression },
    ];
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, limit {:?}", c.limit)),
            Err(d) => (false, d),
        };
        println!(
            "criterion {:<3} {} {:<36} [{:>9.3?}] {}",
            c.id,
            if pass { "PASS" } else { "FAIL" },
            c.title,
            elapsed,
            detail
        );
        if !pass {
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {}", failed.join(", "));
        std::process::exit(1);
    }
}
