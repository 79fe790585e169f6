//! Sparse multivariate polynomial arithmetic over exact rationals in the
//! matrix-entry indeterminates x[i,j], 1 <= i,j <= n.
//!
//! Polynomials are kept in canonical form at all times: no zero coefficient
//! is ever stored, and terms are ordered by total degree first, then by the
//! exponent vector read in flat row-major variable order. Coefficients are
//! arbitrary-precision rationals, always reduced with a positive denominator.
//! All values are immutable after construction and all operations are pure,
//! so concurrent reads are safe.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

/// Exact rational coefficient: reduced, positive denominator, zero is 0/1.
/// `BigRational` maintains these invariants on construction.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Rational from numerator and denominator.
pub fn rat(numerator: i64, denominator: i64) -> Rat {
    Rat::new(BigInt::from(numerator), BigInt::from(denominator))
}

/// 1-based (row, col) address of one generic-matrix indeterminate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarIndex {
    pub row: usize,
    pub col: usize,
}

impl VarIndex {
    pub fn new(row: usize, col: usize) -> VarIndex {
        assert!(row >= 1 && col >= 1, "VarIndex is 1-based");
        VarIndex { row, col }
    }

    /// Flat row-major index into the exponent vector: (row-1)*n + (col-1).
    pub fn flat(&self, n: usize) -> usize {
        debug_assert!(self.row <= n && self.col <= n);
        (self.row - 1) * n + (self.col - 1)
    }

    pub fn from_flat(index: usize, n: usize) -> VarIndex {
        VarIndex {
            row: index / n + 1,
            col: index % n + 1,
        }
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.row, self.col)
    }
}

/// Exponent vector over the n^2 indeterminates.
///
/// The ordering is graded lexicographic: first by total degree, then by the
/// exponent vector compared entrywise in flat row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    /// The constant monomial 1 over `nvars` variables.
    pub fn one(nvars: usize) -> Monomial {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    /// A single variable to the first power.
    pub fn var(flat: usize, nvars: usize) -> Monomial {
        let mut exps = vec![0; nvars];
        exps[flat] = 1;
        Monomial { exps }
    }

    pub fn from_exponents(exps: Vec<u16>) -> Monomial {
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    /// Componentwise quotient, or `None` if any exponent would go negative.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (&a, &b) in self.exps.iter().zip(&other.exps) {
            exps.push(a.checked_sub(b)?);
        }
        Some(Monomial { exps })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of the given total degree over `nvars` variables, in
/// canonical order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; nvars];
    fill_monomials(&mut out, &mut exps, 0, degree);
    out.sort();
    out
}

fn fill_monomials(out: &mut Vec<Monomial>, exps: &mut Vec<u16>, pos: usize, remaining: u32) {
    if pos == exps.len() - 1 {
        exps[pos] = remaining as u16;
        out.push(Monomial { exps: exps.clone() });
        exps[pos] = 0;
        return;
    }
    for e in 0..=remaining {
        exps[pos] = e as u16;
        fill_monomials(out, exps, pos + 1, remaining - e);
    }
    exps[pos] = 0;
}

/// Sparse multivariate polynomial over the n^2 generic-matrix indeterminates.
///
/// Two polynomials are equal iff their ambient size and term maps are equal;
/// canonical form makes this structural equality coincide with mathematical
/// equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Polynomial {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Polynomial {
        Polynomial::constant(n, Rat::one())
    }

    pub fn constant(n: usize, value: Rat) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::one(n * n), value);
        }
        Polynomial { n, terms }
    }

    pub fn variable(n: usize, var: VarIndex) -> Polynomial {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(var.flat(n), n * n), Rat::one());
        Polynomial { n, terms }
    }

    /// Builds a polynomial from raw terms, summing duplicates and purging
    /// zero coefficients.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Polynomial {
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (mon, coeff) in terms {
            debug_assert_eq!(mon.nvars(), n * n);
            let entry = map.entry(mon).or_insert_with(Rat::zero);
            *entry += coeff;
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial { n, terms: map }
    }

    /// Ambient matrix size n (the polynomial lives in n^2 variables).
    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (ascending) monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// The constant-term coefficient.
    pub fn constant_coefficient(&self) -> Rat {
        self.terms
            .get(&Monomial::one(self.n * self.n))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    fn check_ambient(&self, other: &Polynomial) -> Result<(), Error> {
        if self.n != other.n {
            return Err(Error::MismatchedAmbient(self.n, other.n));
        }
        Ok(())
    }

    /// Termwise sum. Fails on mismatched ambient size.
    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, Error> {
        self.check_ambient(other)?;
        let mut terms = self.terms.clone();
        for (mon, coeff) in &other.terms {
            match terms.get_mut(mon) {
                Some(c) => {
                    *c += coeff;
                    if c.is_zero() {
                        terms.remove(mon);
                    }
                }
                None => {
                    terms.insert(mon.clone(), coeff.clone());
                }
            }
        }
        Ok(Polynomial { n: self.n, terms })
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, Error> {
        self.checked_add(&-other)
    }

    /// Distributive product in canonical form. Fails on mismatched ambient size.
    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, Error> {
        self.check_ambient(other)?;
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mon = ma.mul(mb);
                let coeff = ca * cb;
                let entry = terms.entry(mon).or_insert_with(Rat::zero);
                *entry += coeff;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial { n: self.n, terms })
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, factor: &Rat) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    /// Repeated product; `pow(f, 0) = 1`.
    pub fn pow(&self, exponent: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.n);
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }

    /// True iff every monomial has total degree `degree`. The zero polynomial
    /// is homogeneous of every degree.
    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    /// `Some(d)` when all terms share total degree d. Returns `Some(0)` for
    /// the zero polynomial and `None` when the degrees are mixed.
    pub fn uniform_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        let first = match degrees.next() {
            Some(d) => d,
            None => return Some(0),
        };
        degrees.all(|d| d == first).then_some(first)
    }

    /// Largest total degree among the terms; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Formal partial derivative with respect to one indeterminate.
    pub fn partial_derivative(&self, var: VarIndex) -> Polynomial {
        let flat = var.flat(self.n);
        let mut terms = BTreeMap::new();
        for (mon, coeff) in &self.terms {
            let e = mon.exponents()[flat];
            if e == 0 {
                continue;
            }
            let mut exps = mon.exponents().to_vec();
            exps[flat] = e - 1;
            terms.insert(Monomial::from_exponents(exps), coeff * rat_int(e as i64));
        }
        Polynomial { n: self.n, terms }
    }

    /// Sum of the terms of total degree exactly `degree`.
    pub fn homogeneous_component(&self, degree: u32) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor` by long division against the leading
    /// monomial. Fails with `NotDivisible` as soon as a leading term cannot
    /// be cancelled, which for a single divisor certifies non-divisibility.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Result<Polynomial, Error> {
        self.check_ambient(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (div_mon, div_coeff) = divisor.leading_term().expect("nonzero divisor");
        let mut remainder = self.clone();
        let mut quotient = BTreeMap::new();
        while let Some((rem_mon, rem_coeff)) = remainder.leading_term() {
            let mon = rem_mon.checked_div(div_mon).ok_or(Error::NotDivisible)?;
            let coeff = rem_coeff / div_coeff;
            let step = Polynomial {
                n: self.n,
                terms: BTreeMap::from([(mon.clone(), coeff.clone())]),
            };
            remainder = &remainder - &(&step * divisor);
            quotient.insert(mon, coeff);
        }
        Ok(Polynomial {
            n: self.n,
            terms: quotient,
        })
    }

    /// Exact evaluation at a rational point. Every variable occurring in the
    /// polynomial must be assigned.
    pub fn substitute(&self, assignment: &HashMap<VarIndex, Rat>) -> Result<Rat, Error> {
        let nvars = self.n * self.n;
        let mut values: Vec<Option<&Rat>> = vec![None; nvars];
        for (var, value) in assignment {
            values[var.flat(self.n)] = Some(value);
        }
        let mut total = Rat::zero();
        for (mon, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (flat, &e) in mon.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let value = values[flat]
                    .ok_or_else(|| Error::MissingAssignment(VarIndex::from_flat(flat, self.n)))?;
                for _ in 0..e {
                    term *= value;
                }
            }
            total += term;
        }
        Ok(total)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ambient sizes must match")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ambient sizes must match")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ambient sizes must match")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Render highest-order terms first.
        for (mon, coeff) in self.terms.iter().rev() {
            let negative = coeff < &Rat::zero();
            let magnitude = if negative { -coeff.clone() } else { coeff.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if !magnitude.is_one() || mon.is_one() {
                factors.push(magnitude.to_string());
            }
            for (flat, &e) in mon.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let var = VarIndex::from_flat(flat, self.n);
                if e == 1 {
                    factors.push(var.to_string());
                } else {
                    factors.push(format!("{var}^{e}"));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(n: usize, row: usize, col: usize) -> Polynomial {
        Polynomial::variable(n, VarIndex::new(row, col))
    }

    #[test]
    fn add_cancels_inverse() {
        let f = xi(2, 1, 1);
        let sum = f.checked_add(&-&f).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn add_keeps_distinct_terms() {
        let sum = &xi(2, 1, 1) + &xi(2, 1, 2);
        assert_eq!(sum.num_terms(), 2);
    }

    #[test]
    fn add_merges_common_terms() {
        let f = &xi(2, 1, 1) + &xi(2, 1, 2);
        let g = &xi(2, 1, 1) - &xi(2, 1, 2);
        let sum = &f + &g;
        assert_eq!(sum, xi(2, 1, 1).scale(&rat_int(2)));
    }

    #[test]
    fn add_rejects_mismatched_ambient() {
        let err = xi(2, 1, 1).checked_add(&xi(3, 1, 1)).unwrap_err();
        assert_eq!(err, Error::MismatchedAmbient(2, 3));
    }

    #[test]
    fn mul_difference_of_squares() {
        let lhs = &(&xi(2, 1, 1) - &xi(2, 1, 2)) * &(&xi(2, 1, 1) + &xi(2, 1, 2));
        let rhs = &xi(2, 1, 1).pow(2) - &xi(2, 1, 2).pow(2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mul_identity_and_zero() {
        let f = &(&xi(2, 1, 1) + &xi(2, 2, 2)) * &xi(2, 2, 1);
        assert_eq!(&f * &Polynomial::one(2), f);
        assert!((&f * &Polynomial::zero(2)).is_zero());
    }

    #[test]
    fn mul_rejects_mismatched_ambient() {
        let err = xi(2, 1, 1).checked_mul(&xi(3, 1, 1)).unwrap_err();
        assert_eq!(err, Error::MismatchedAmbient(2, 3));
    }

    #[test]
    fn pow_basics() {
        let f = xi(2, 1, 1);
        assert_eq!(f.pow(3), &(&f * &f) * &f);
        assert!(f.pow(0).is_one());
        let g = &xi(2, 1, 1) + &xi(2, 2, 2);
        let expected = &(&xi(2, 1, 1).pow(2) + &xi(2, 2, 2).pow(2))
            + &(&xi(2, 1, 1) * &xi(2, 2, 2)).scale(&rat_int(2));
        assert_eq!(g.pow(2), expected);
    }

    #[test]
    fn homogeneity() {
        let det_like = &(&xi(2, 1, 1) * &xi(2, 2, 2)) - &(&xi(2, 1, 2) * &xi(2, 2, 1));
        assert!(det_like.is_homogeneous(2));
        let mixed = &xi(2, 1, 1) + &xi(2, 1, 1).pow(2);
        assert!(!mixed.is_homogeneous(1));
        for d in 0..4 {
            assert!(Polynomial::zero(2).is_homogeneous(d));
        }
    }

    #[test]
    fn partial_derivative_examples() {
        let f = xi(2, 1, 1).pow(2);
        assert_eq!(
            f.partial_derivative(VarIndex::new(1, 1)),
            xi(2, 1, 1).scale(&rat_int(2))
        );
        let g = &xi(2, 1, 2) * &xi(2, 2, 1);
        assert!(g.partial_derivative(VarIndex::new(1, 1)).is_zero());
        let h = &xi(2, 1, 1) * &xi(2, 2, 2);
        assert_eq!(h.partial_derivative(VarIndex::new(2, 2)), xi(2, 1, 1));
    }

    #[test]
    fn exact_divide_examples() {
        let f = &xi(2, 1, 1).pow(2) - &xi(2, 1, 2).pow(2);
        let g = &xi(2, 1, 1) - &xi(2, 1, 2);
        assert_eq!(f.exact_divide(&g).unwrap(), &xi(2, 1, 1) + &xi(2, 1, 2));
        assert_eq!(f.exact_divide(&Polynomial::one(2)).unwrap(), f);
        assert_eq!(
            xi(2, 1, 1).exact_divide(&xi(2, 1, 2)).unwrap_err(),
            Error::NotDivisible
        );
        assert_eq!(
            f.exact_divide(&Polynomial::zero(2)).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn substitute_examples() {
        let det_like = &(&xi(2, 1, 1) * &xi(2, 2, 2)) - &(&xi(2, 1, 2) * &xi(2, 2, 1));
        let identity: HashMap<VarIndex, Rat> = [
            (VarIndex::new(1, 1), rat_int(1)),
            (VarIndex::new(1, 2), rat_int(0)),
            (VarIndex::new(2, 1), rat_int(0)),
            (VarIndex::new(2, 2), rat_int(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(det_like.substitute(&identity).unwrap(), rat_int(1));
        assert_eq!(
            Polynomial::zero(2).substitute(&HashMap::new()).unwrap(),
            rat_int(0)
        );

        let f = &xi(2, 1, 1) + &xi(2, 2, 2);
        let point: HashMap<VarIndex, Rat> = [
            (VarIndex::new(1, 1), rat(1, 2)),
            (VarIndex::new(2, 2), rat(1, 3)),
        ]
        .into_iter()
        .collect();
        assert_eq!(f.substitute(&point).unwrap(), rat(5, 6));
        assert!(matches!(
            f.substitute(&HashMap::new()).unwrap_err(),
            Error::MissingAssignment(_)
        ));
    }

    #[test]
    fn homogeneous_component_examples() {
        let f = &xi(2, 1, 1) + &xi(2, 1, 1).pow(2);
        assert_eq!(f.homogeneous_component(1), xi(2, 1, 1));
        let g = &(&xi(2, 1, 1) * &xi(2, 2, 2)) - &(&xi(2, 1, 2) * &xi(2, 2, 1));
        assert_eq!(g.homogeneous_component(2), g);
        assert!(g.homogeneous_component(3).is_zero());
    }

    #[test]
    fn monomial_order_is_graded() {
        let one = Monomial::one(4);
        let x11 = Monomial::var(0, 4);
        let x12 = Monomial::var(1, 4);
        assert!(one < x11);
        assert!(x12 < x11, "same degree falls back to exponent-vector order");
        assert!(x11 < x11.mul(&x12));
    }

    #[test]
    fn monomial_enumeration_counts() {
        // Number of degree-d monomials in v variables is C(d+v-1, v-1).
        assert_eq!(monomials_of_degree(4, 0).len(), 1);
        assert_eq!(monomials_of_degree(4, 1).len(), 4);
        assert_eq!(monomials_of_degree(4, 2).len(), 10);
        assert_eq!(monomials_of_degree(9, 2).len(), 45);
        let mons = monomials_of_degree(4, 3);
        assert!(mons.windows(2).all(|w| w[0] < w[1]));
    }
}
