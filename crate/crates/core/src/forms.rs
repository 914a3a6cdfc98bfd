//! Differential forms on `R^n` with polynomial coefficients.
//!
//! A [`KForm`] stores one coefficient per increasing multi-index. The
//! exterior derivative and the wedge product are total: anything that would
//! land above degree `n` is returned as the zero form of degree `n`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::multiindex::{IndexError, MultiIndex};
use crate::ring::Polynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("forms live on R^{left} and R^{right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("expected a form of degree {expected}, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("codifferential of a 0-form is undefined")]
    CodifferentialOfFunction,
    #[error("key {index} does not index a basis {degree}-form on R^{ambient}")]
    BadKey {
        index: String,
        degree: usize,
        ambient: usize,
    },
    #[error(transparent)]
    Index(#[from] IndexError),
}

fn parity_sign(exponent: usize) -> i32 {
    if exponent.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KForm {
    degree: usize,
    ambient: usize,
    coeffs: BTreeMap<MultiIndex, Polynomial>,
}

impl KForm {
    pub fn zero(degree: usize, ambient: usize) -> Result<Self, FormError> {
        if degree > ambient {
            return Err(IndexError::DegreeOutOfRange { degree, ambient }.into());
        }
        Ok(Self {
            degree,
            ambient,
            coeffs: BTreeMap::new(),
        })
    }

    /// The 0-form `f`.
    pub fn function(f: Polynomial, ambient: usize) -> Self {
        let mut form = Self {
            degree: 0,
            ambient,
            coeffs: BTreeMap::new(),
        };
        form.accumulate(MultiIndex::empty(ambient), f);
        form
    }

    /// `f dx_I`.
    pub fn monomial(f: Polynomial, index: MultiIndex) -> Self {
        let mut form = Self {
            degree: index.degree(),
            ambient: index.ambient(),
            coeffs: BTreeMap::new(),
        };
        form.accumulate(index, f);
        form
    }

    /// Sum of `f_I dx_I`; repeated keys are added.
    pub fn from_terms<I>(degree: usize, ambient: usize, terms: I) -> Result<Self, FormError>
    where
        I: IntoIterator<Item = (MultiIndex, Polynomial)>,
    {
        let mut form = Self::zero(degree, ambient)?;
        for (index, f) in terms {
            if index.degree() != degree || index.ambient() != ambient {
                return Err(FormError::BadKey {
                    index: index.to_string(),
                    degree,
                    ambient,
                });
            }
            form.accumulate(index, f);
        }
        Ok(form)
    }

    fn accumulate(&mut self, index: MultiIndex, f: Polynomial) {
        if f.is_zero() {
            return;
        }
        match self.coeffs.entry(index) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += &f;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, index: &MultiIndex) -> Polynomial {
        self.coeffs.get(index).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.coeffs.iter()
    }

    fn same_shape(&self, other: &Self) -> Result<(), FormError> {
        if self.ambient != other.ambient {
            return Err(FormError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (index, f) in &other.coeffs {
            out.accumulate(index.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FormError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.signed(-1)
    }

    pub fn signed(&self, sign: i32) -> Self {
        if sign > 0 {
            return self.clone();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(i, f)| (i.clone(), f.neg())).collect(),
            ..self.clone()
        }
    }

    /// Multiply every coefficient by the function `g`.
    pub fn scale(&self, g: &Polynomial) -> Self {
        let mut out = Self {
            coeffs: BTreeMap::new(),
            ..self.clone()
        };
        for (index, f) in &self.coeffs {
            out.accumulate(index.clone(), f.mul(g));
        }
        out
    }

    fn top_zero(&self) -> Self {
        Self {
            degree: self.ambient,
            ambient: self.ambient,
            coeffs: BTreeMap::new(),
        }
    }

    /// `d_k`: `sum_I sum_i (d w_I / dx_i) dx_i dx_I`.
    pub fn exterior_derivative(&self) -> Self {
        if self.degree == self.ambient {
            return self.top_zero();
        }
        let mut out = Self {
            degree: self.degree + 1,
            ambient: self.ambient,
            coeffs: BTreeMap::new(),
        };
        for (index, f) in &self.coeffs {
            for var in 1..=self.ambient {
                let Some((sign, target)) = index.insert_front(var) else {
                    continue;
                };
                let df = f.d_dx(var);
                if !df.is_zero() {
                    out.accumulate(target, df.signed(sign));
                }
            }
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, FormError> {
        if self.ambient != other.ambient {
            return Err(FormError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        if self.degree + other.degree > self.ambient {
            return Ok(self.top_zero());
        }
        let mut out = Self {
            degree: self.degree + other.degree,
            ambient: self.ambient,
            coeffs: BTreeMap::new(),
        };
        for (i, f) in &self.coeffs {
            for (j, g) in &other.coeffs {
                if let Some((sign, merged)) = i.merge(j) {
                    out.accumulate(merged, f.mul(g).signed(sign));
                }
            }
        }
        Ok(out)
    }

    /// `*_k(w) = sum_I w_I sigma(I) dx_J`, `J` the complement of `I`.
    pub fn hodge_star(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(index, f)| (index.complement(), f.signed(index.signature())))
            .collect();
        Self {
            degree: self.ambient - self.degree,
            ambient: self.ambient,
            coeffs,
        }
    }

    /// Inverse of `*_target` applied to this `(n - target)`-form:
    /// `(-1)^{target (n - target)} *_{n - target}`.
    pub fn hodge_star_inverse(&self, target: usize) -> Result<Self, FormError> {
        let n = self.ambient;
        if target > n || self.degree != n - target {
            return Err(FormError::DegreeMismatch {
                expected: n.saturating_sub(target),
                got: self.degree,
            });
        }
        Ok(self.hodge_star().signed(parity_sign(target * (n - target))))
    }

    /// `delta_{k-1} = (-1)^k *^{-1}_{k-1} d_{n-k} *_k`.
    pub fn codifferential(&self) -> Result<Self, FormError> {
        let k = self.degree;
        if k == 0 {
            return Err(FormError::CodifferentialOfFunction);
        }
        let inner = self.hodge_star().exterior_derivative();
        Ok(inner.hodge_star_inverse(k - 1)?.signed(parity_sign(k)))
    }

    /// `delta_{k-1} = (-1)^{n(k-1)+1} *_{n-(k-1)} d_{n-k} *_k`, the second
    /// closed form of the codifferential.
    pub fn codifferential_double_star(&self) -> Result<Self, FormError> {
        let k = self.degree;
        if k == 0 {
            return Err(FormError::CodifferentialOfFunction);
        }
        let n = self.ambient;
        let out = self.hodge_star().exterior_derivative().hodge_star();
        Ok(out.signed(parity_sign(n * (k - 1) + 1)))
    }

    /// Laplace-de Rham operator `delta d + d delta` (`delta d` on functions).
    pub fn laplace_de_rham(&self) -> Self {
        let k = self.degree;
        let down_up = if k == self.ambient {
            // d lands above the top degree
            Self {
                coeffs: BTreeMap::new(),
                ..self.clone()
            }
        } else {
            self.exterior_derivative()
                .codifferential()
                .expect("d raises the degree to at least 1")
        };
        if k == 0 {
            return down_up;
        }
        let up_down = self
            .codifferential()
            .expect("degree is positive")
            .exterior_derivative();
        down_up.add(&up_down).expect("both terms have degree k")
    }
}

/// `poly dx_I + ...` in lexicographic key order; coefficients with several
/// terms are parenthesised.
impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (pos, (index, coeff)) in self.coeffs.iter().enumerate() {
            if pos > 0 {
                f.write_str(" + ")?;
            }
            let basis: String = index
                .components()
                .iter()
                .map(|c| format!("dx{c}"))
                .collect::<Vec<_>>()
                .join("^");
            match (basis.is_empty(), coeff.num_terms()) {
                (true, _) => write!(f, "{coeff}")?,
                (false, 1) => write!(f, "{coeff} {basis}")?,
                (false, _) => write!(f, "({coeff}) {basis}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_form, random_polynomial, PolySpec};
    use crate::ring::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x(i: usize) -> Polynomial {
        Polynomial::x(i)
    }

    fn dx(c: &[usize], n: usize) -> MultiIndex {
        MultiIndex::new(c.to_vec(), n).unwrap()
    }

    fn one() -> Polynomial {
        Polynomial::one()
    }

    #[test]
    fn exterior_derivative_examples() {
        let f = KForm::function(x(1).mul(&x(2)), 3);
        let expected = KForm::from_terms(1, 3, [(dx(&[1], 3), x(2)), (dx(&[2], 3), x(1))]).unwrap();
        assert_eq!(f.exterior_derivative(), expected);
        assert_eq!(f.exterior_derivative().to_string(), "x2 dx1 + x1 dx2");

        let w = KForm::monomial(x(2), dx(&[1], 2));
        assert_eq!(
            w.exterior_derivative(),
            KForm::monomial(Polynomial::from(-1), dx(&[1, 2], 2))
        );
    }

    #[test]
    fn top_degree_derivative_is_zero_form_of_top_degree() {
        let vol = KForm::monomial(x(1), MultiIndex::full(3));
        let d = vol.exterior_derivative();
        assert!(d.is_zero());
        assert_eq!(d.degree(), 3);
    }

    #[test]
    fn wedge_examples() {
        let dx1 = KForm::monomial(one(), dx(&[1], 3));
        let dx2 = KForm::monomial(one(), dx(&[2], 3));
        assert_eq!(dx1.wedge(&dx2).unwrap(), KForm::monomial(one(), dx(&[1, 2], 3)));
        assert!(dx1.wedge(&dx1).unwrap().is_zero());
        let a = KForm::monomial(x(1), dx(&[2], 3));
        assert_eq!(
            a.wedge(&dx1).unwrap(),
            KForm::monomial(x(1).neg(), dx(&[1, 2], 3))
        );
        let other = KForm::monomial(one(), dx(&[1], 4));
        assert_eq!(
            dx1.wedge(&other),
            Err(FormError::AmbientMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn hodge_star_examples() {
        let vol = KForm::monomial(one(), MultiIndex::full(3));
        assert_eq!(KForm::function(one(), 3).hodge_star(), vol);
        assert_eq!(
            KForm::monomial(one(), dx(&[2], 3)).hodge_star(),
            KForm::monomial(Polynomial::from(-1), dx(&[1, 3], 3))
        );
        assert_eq!(
            KForm::monomial(one(), dx(&[1], 3)).hodge_star(),
            KForm::monomial(one(), dx(&[2, 3], 3))
        );
    }

    #[test]
    fn hodge_star_inverse_examples() {
        let dx23 = KForm::monomial(one(), dx(&[2, 3], 3));
        assert_eq!(dx23.hodge_star_inverse(1).unwrap(), KForm::monomial(one(), dx(&[1], 3)));
        let vol = KForm::monomial(one(), MultiIndex::full(3));
        assert_eq!(vol.hodge_star_inverse(0).unwrap(), KForm::function(one(), 3));
        let w = KForm::from_terms(1, 3, [(dx(&[1], 3), x(2)), (dx(&[3], 3), one())]).unwrap();
        assert_eq!(w.hodge_star().hodge_star_inverse(1).unwrap(), w);
        assert!(matches!(
            dx23.hodge_star_inverse(2),
            Err(FormError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn codifferential_examples() {
        let w = KForm::monomial(x(1).scale(&rat(2)), dx(&[1], 3));
        assert_eq!(w.codifferential().unwrap(), KForm::function(Polynomial::from(-2), 3));
        assert!(KForm::monomial(one(), dx(&[1], 3)).codifferential().unwrap().is_zero());
        assert_eq!(
            KForm::function(one(), 3).codifferential(),
            Err(FormError::CodifferentialOfFunction)
        );
    }

    #[test]
    fn laplace_examples() {
        let sq = KForm::function(x(1).mul(&x(1)), 3);
        assert_eq!(sq.laplace_de_rham(), KForm::function(Polynomial::from(-2), 3));
        let harmonic = KForm::function(x(1).mul(&x(1)).sub(&x(2).mul(&x(2))), 3);
        assert!(harmonic.laplace_de_rham().is_zero());
        assert!(KForm::function(Polynomial::from(7), 3).laplace_de_rham().is_zero());
    }

    #[test]
    fn delta_delta_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=5 {
            for _ in 0..20 {
                let w = random_form(&mut rng, 2, &PolySpec::new(n, 4));
                let dd = w.codifferential().unwrap().codifferential().unwrap();
                assert!(dd.is_zero());
            }
        }
    }

    #[test]
    fn laplace_is_negative_componentwise_laplacian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=5 {
            for k in 0..=n {
                for _ in 0..10 {
                    let w = random_form(&mut rng, k, &PolySpec::new(n, 4));
                    let expected = KForm::from_terms(
                        k,
                        n,
                        w.terms().map(|(i, f)| (i.clone(), f.laplacian(n).neg())),
                    )
                    .unwrap();
                    assert_eq!(w.laplace_de_rham(), expected, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn identities_on_random_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for n in 1..=6 {
            let spec = PolySpec::new(n, 4);
            for k in 0..=n {
                for _ in 0..8 {
                    let w = random_form(&mut rng, k, &spec);
                    assert!(w.exterior_derivative().exterior_derivative().is_zero());
                    let twice = w.hodge_star().hodge_star();
                    assert_eq!(twice, w.signed(parity_sign(k * (n - k))));
                    assert_eq!(w.hodge_star().hodge_star_inverse(k).unwrap(), w);
                    if k >= 1 {
                        assert_eq!(
                            w.codifferential().unwrap(),
                            w.codifferential_double_star().unwrap()
                        );
                    }
                    for l in 0..=n - k {
                        let v = random_form(&mut rng, l, &spec);
                        let lhs = w.wedge(&v).unwrap().exterior_derivative();
                        let rhs = w
                            .exterior_derivative()
                            .wedge(&v)
                            .unwrap()
                            .add(&w.wedge(&v.exterior_derivative()).unwrap().signed(parity_sign(k)))
                            .unwrap();
                        assert_eq!(lhs, rhs, "Leibniz n={n} k={k} l={l}");
                    }
                }
            }
            let f = random_polynomial(&mut rng, &spec);
            let lap = KForm::function(f.clone(), n).laplace_de_rham();
            assert!(lap.add(&KForm::function(f.laplacian(n), n)).unwrap().is_zero());
        }
    }

    #[test]
    fn rendering() {
        let w = KForm::from_terms(
            2,
            3,
            [(dx(&[1, 3], 3), x(1).add(&one())), (dx(&[1, 2], 3), x(2))],
        )
        .unwrap();
        assert_eq!(w.to_string(), "x2 dx1^dx2 + (x1 + 1) dx1^dx3");
        assert_eq!(KForm::zero(1, 3).unwrap().to_string(), "0");
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::random::{random_form, PolySpec};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arb_form() -> impl Strategy<Value = KForm> {
        (1usize..=5, any::<u64>()).prop_flat_map(|(n, seed)| {
            (0..=n).prop_map(move |k| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                random_form(&mut rng, k, &PolySpec::new(n, 3))
            })
        })
    }

    proptest! {
        #[test]
        fn exterior_derivative_squares_to_zero(w in arb_form()) {
            prop_assert!(w.exterior_derivative().exterior_derivative().is_zero());
        }

        #[test]
        fn star_inverse_undoes_star(w in arb_form()) {
            prop_assert_eq!(w.hodge_star().hodge_star_inverse(w.degree()).unwrap(), w);
        }

        #[test]
        fn codifferential_formulas_agree(w in arb_form()) {
            prop_assume!(w.degree() >= 1);
            prop_assert_eq!(w.codifferential().unwrap(), w.codifferential_double_star().unwrap());
        }

        #[test]
        fn laplace_de_rham_is_negative_coordinate_laplacian(w in arb_form()) {
            let n = w.ambient();
            let expected = KForm::from_terms(
                w.degree(),
                n,
                w.terms().map(|(i, f)| (i.clone(), f.laplacian(n).neg())),
            )
            .unwrap();
            prop_assert_eq!(w.laplace_de_rham(), expected);
        }
    }
}
