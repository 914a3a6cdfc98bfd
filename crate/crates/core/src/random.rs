//! Seeded generators for random polynomials, forms and coordinate fields.
//!
//! Everything takes a caller-owned RNG so suites are reproducible from a
//! single seed. `ChaCha8Rng` is the generator used throughout the crate.

use rand::Rng;

use crate::forms::KForm;
use crate::multiindex::MultiIndex;
use crate::nabla::VectorFunction;
use crate::ring::{ratio, Monomial, Polynomial};

/// Shape of a random polynomial.
#[derive(Clone, Debug)]
pub struct PolySpec {
    /// Number of coordinates `x1..xn`.
    pub ambient: usize,
    /// Bound on the total degree in `x`.
    pub max_degree: u32,
    /// Upper bound on the number of terms drawn (duplicates merge).
    pub max_terms: usize,
    /// Whether direction symbols `e1..en` may appear.
    pub directions: bool,
}

impl PolySpec {
    pub fn new(ambient: usize, max_degree: u32) -> Self {
        Self {
            ambient,
            max_degree,
            max_terms: 4,
            directions: false,
        }
    }

    pub fn with_directions(ambient: usize, max_degree: u32) -> Self {
        Self {
            directions: true,
            ..Self::new(ambient, max_degree)
        }
    }
}

fn random_monomial<R: Rng>(rng: &mut R, spec: &PolySpec) -> Monomial {
    let degree = rng.gen_range(0..=spec.max_degree);
    let mut exps = vec![0u32; spec.ambient];
    for _ in 0..degree {
        exps[rng.gen_range(0..spec.ambient)] += 1;
    }
    let mut m = Monomial::from_x_exponents(&exps);
    if spec.directions && rng.gen_bool(0.3) {
        m = m.mul(&Monomial::e_power(rng.gen_range(1..=spec.ambient), 1));
    }
    m
}

/// Random polynomial with small rational coefficients. May be zero.
pub fn random_polynomial<R: Rng>(rng: &mut R, spec: &PolySpec) -> Polynomial {
    let terms = rng.gen_range(0..=spec.max_terms);
    let mut p = Polynomial::zero();
    for _ in 0..terms {
        let numer = rng.gen_range(-9i64..=9);
        let denom = rng.gen_range(1i64..=3);
        p.add_term(random_monomial(rng, spec), ratio(numer, denom));
    }
    p
}

/// Random `k`-form on `R^n`; each basis coefficient is independently random.
pub fn random_form<R: Rng>(rng: &mut R, degree: usize, spec: &PolySpec) -> KForm {
    let n = spec.ambient;
    let terms = MultiIndex::enumerate(degree, n)
        .expect("degree within ambient")
        .into_iter()
        .map(|idx| (idx, random_polynomial(rng, spec)));
    KForm::from_terms(degree, n, terms).expect("indices generated for this ambient")
}

/// Random element of `A_rank`.
pub fn random_field<R: Rng>(rng: &mut R, rank: usize, spec: &PolySpec) -> VectorFunction {
    let n = spec.ambient;
    let len = crate::multiindex::binomial(n, rank);
    let coords = (0..len).map(|_| random_polynomial(rng, spec)).collect();
    VectorFunction::new(rank, n, coords).expect("coordinate count matches binomial")
}
