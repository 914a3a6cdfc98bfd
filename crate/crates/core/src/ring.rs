//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Two families of indeterminates live side by side: the coordinates
//! `x1..xn`, which are differentiated, and the direction components
//! `e1..en`, which behave as constants under [`Polynomial::partial`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("variable index {index} out of range 1..={ambient}")]
    VariableOutOfRange { index: usize, ambient: usize },
    #[error("direction has {got} components, expected {expected}")]
    DirectionLength { got: usize, expected: usize },
}

/// Integer-valued rational.
pub fn rat(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `numer / denom` reduced to lowest terms. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// A product of powers of `x_i` and `e_i`.
///
/// Exponent lists are sorted by variable index and never hold a zero
/// exponent, so structural equality is monomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    x: Vec<(u32, u32)>,
    e: Vec<(u32, u32)>,
}

fn set_power(powers: &mut Vec<(u32, u32)>, var: u32, exp: u32) {
    match powers.binary_search_by_key(&var, |&(v, _)| v) {
        Ok(pos) if exp == 0 => {
            powers.remove(pos);
        }
        Ok(pos) => powers[pos].1 = exp,
        Err(_) if exp == 0 => {}
        Err(pos) => powers.insert(pos, (var, exp)),
    }
}

fn merge_powers(a: &[(u32, u32)], b: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Lexicographic comparison of sparse exponent vectors where a smaller
/// variable index is the more significant position.
fn lex_powers(a: &[(u32, u32)], b: &[(u32, u32)]) -> Ordering {
    for (pa, pb) in a.iter().zip(b.iter()) {
        if pa.0 != pb.0 {
            // The side holding the smaller variable has a positive exponent
            // where the other side has zero.
            return if pa.0 < pb.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        match pa.1.cmp(&pb.1) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `x_var^exp`.
    pub fn x_power(var: usize, exp: u32) -> Self {
        let mut m = Self::one();
        set_power(&mut m.x, var as u32, exp);
        m
    }

    /// `e_var^exp`.
    pub fn e_power(var: usize, exp: u32) -> Self {
        let mut m = Self::one();
        set_power(&mut m.e, var as u32, exp);
        m
    }

    /// Monomial in `x` from a dense exponent vector, `exps[0]` belonging to `x1`.
    pub fn from_x_exponents(exps: &[u32]) -> Self {
        let x = exps
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0)
            .map(|(i, &p)| (i as u32 + 1, p))
            .collect();
        Self { x, e: Vec::new() }
    }

    pub fn x_exponent(&self, var: usize) -> u32 {
        self.x
            .binary_search_by_key(&(var as u32), |&(v, _)| v)
            .map(|pos| self.x[pos].1)
            .unwrap_or(0)
    }

    pub fn e_exponent(&self, var: usize) -> u32 {
        self.e
            .binary_search_by_key(&(var as u32), |&(v, _)| v)
            .map(|pos| self.e[pos].1)
            .unwrap_or(0)
    }

    pub fn x_degree(&self) -> u32 {
        self.x.iter().map(|&(_, p)| p).sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.x_degree() + self.e.iter().map(|&(_, p)| p).sum::<u32>()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_empty() && self.e.is_empty()
    }

    pub fn has_direction(&self) -> bool {
        !self.e.is_empty()
    }

    /// Largest variable index mentioned, over both families.
    pub fn max_variable(&self) -> usize {
        self.x
            .last()
            .map(|&(v, _)| v)
            .into_iter()
            .chain(self.e.last().map(|&(v, _)| v))
            .max()
            .unwrap_or(0) as usize
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            x: merge_powers(&self.x, &other.x),
            e: merge_powers(&self.e, &other.e),
        }
    }

    /// `d/dx_var` as `(exponent, monomial with exponent lowered)`, or `None`
    /// if `x_var` does not occur.
    fn lower_x(&self, var: usize) -> Option<(u32, Self)> {
        let exp = self.x_exponent(var);
        if exp == 0 {
            return None;
        }
        let mut lowered = self.clone();
        set_power(&mut lowered.x, var as u32, exp - 1);
        Some((exp, lowered))
    }
}

/// Graded lexicographic order: total degree first, then `x1 > x2 > ... > e1 > e2 > ...`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| lex_powers(&self.x, &other.x))
            .then_with(|| lex_powers(&self.e, &other.e))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let factors = self
            .x
            .iter()
            .map(|&(v, p)| ('x', v, p))
            .chain(self.e.iter().map(|&(v, p)| ('e', v, p)));
        for (pos, (sym, v, p)) in factors.enumerate() {
            if pos > 0 {
                f.write_str("*")?;
            }
            write!(f, "{sym}{v}")?;
            if p > 1 {
                write!(f, "^{p}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in `x1..xn, e1..en` over the rationals.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// The coordinate `x_var`.
    pub fn x(var: usize) -> Self {
        Self::term(Rational::one(), Monomial::x_power(var, 1))
    }

    /// The direction component `e_var`.
    pub fn e(var: usize) -> Self {
        Self::term(Rational::one(), Monomial::e_power(var, 1))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    pub fn max_variable(&self) -> usize {
        self.terms.keys().map(Monomial::max_variable).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut acc, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            acc.add_term(m.clone(), c.clone());
        }
        acc
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut acc = self.clone();
        for (m, c) in &other.terms {
            acc.add_term(m.clone(), -c.clone());
        }
        acc
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiply by `+1` or `-1`.
    pub fn signed(&self, sign: i32) -> Self {
        if sign < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.add_term(ma.mul(mb), ca * cb);
            }
        }
        acc
    }

    /// Formal `d/dx_var`; direction components are constants. Requires
    /// `1 <= var <= ambient`.
    pub fn partial(&self, var: usize, ambient: usize) -> Result<Self, RingError> {
        if var == 0 || var > ambient {
            return Err(RingError::VariableOutOfRange {
                index: var,
                ambient,
            });
        }
        Ok(self.d_dx(var))
    }

    /// Unchecked `d/dx_var`; `var` is 1-based.
    pub(crate) fn d_dx(&self, var: usize) -> Self {
        let mut acc = Self::zero();
        for (m, c) in &self.terms {
            if let Some((exp, lowered)) = m.lower_x(var) {
                acc.add_term(lowered, c * Rational::from_integer(BigInt::from(exp)));
            }
        }
        acc
    }

    /// Coordinate Laplacian `sum_i d^2/dx_i^2` over `x1..x_ambient`.
    pub fn laplacian(&self, ambient: usize) -> Self {
        let mut acc = Self::zero();
        for var in 1..=ambient {
            acc = acc.add(&self.d_dx(var).d_dx(var));
        }
        acc
    }

    pub fn has_direction(&self) -> bool {
        self.terms.keys().any(Monomial::has_direction)
    }

    /// Replace each `e_i` by `direction[i-1]`.
    pub fn substitute_direction(&self, direction: &[Rational]) -> Result<Self, RingError> {
        let needed = self
            .terms
            .keys()
            .flat_map(|m| m.e.iter().map(|&(v, _)| v as usize))
            .max()
            .unwrap_or(0);
        if needed > direction.len() {
            return Err(RingError::DirectionLength {
                got: direction.len(),
                expected: needed,
            });
        }
        let mut acc = Self::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for &(v, p) in &m.e {
                coeff *= num_traits::pow(direction[v as usize - 1].clone(), p as usize);
            }
            let stripped = Monomial {
                x: m.x.clone(),
                e: Vec::new(),
            };
            acc.add_term(stripped, coeff);
        }
        Ok(acc)
    }
}

/// All monomials in `x1..xn` of total degree exactly `degree`, in
/// descending graded lexicographic order.
pub fn x_monomials_of_degree(ambient: usize, degree: u32) -> Vec<Monomial> {
    fn fill(var: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var + 1 == exps.len() {
            exps[var] = left;
            out.push(Monomial::from_x_exponents(exps));
            return;
        }
        for p in (0..=left).rev() {
            exps[var] = p;
            fill(var + 1, left - p, exps, out);
        }
        exps[var] = 0;
    }
    let mut out = Vec::new();
    if ambient == 0 {
        if degree == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    fill(0, degree, &mut vec![0; ambient], &mut out);
    out
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, c: &Rational, bare: bool) -> fmt::Result {
    // `c` is non-negative here; `bare` means the monomial is 1.
    if c.is_one() && !bare {
        return Ok(());
    }
    if c.is_integer() {
        write!(f, "{}", c.numer())?;
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())?;
    }
    if !bare {
        f.write_str("*")?;
    }
    Ok(())
}

/// Canonical rendering: terms in descending graded lexicographic order,
/// e.g. `x1^2 - 1/3*x1*e2 + 2`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (pos, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (pos, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let bare = m.is_one();
            write_coefficient(f, &c.abs(), bare)?;
            if !bare {
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Self) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Self) -> Polynomial {
        Polynomial::sub(self, rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Self) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Self::constant(rat(c))
    }
}
