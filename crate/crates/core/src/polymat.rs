//! Matrices over the polynomial ring: generic matrix construction, exact
//! matrix arithmetic, and the Faddeev-LeVerrier computation of the
//! characteristic polynomial, adjugate and determinant in one pass.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::Error;
use crate::polyring::{rat_int, Polynomial, Rat, VarIndex};
use crate::tracemaps::ScalarPoly;

/// Square matrix of polynomials, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zero(n: usize) -> PolyMatrix {
        PolyMatrix {
            n,
            entries: vec![Polynomial::zero(n); n * n],
        }
    }

    pub fn identity(n: usize) -> PolyMatrix {
        PolyMatrix::scalar(n, &Polynomial::one(n))
    }

    /// The scalar matrix value * I.
    pub fn scalar(n: usize, value: &Polynomial) -> PolyMatrix {
        let mut m = PolyMatrix::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = value.clone();
        }
        m
    }

    /// Builds a matrix from a row-major entry function.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> PolyMatrix {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = f(i, j);
                debug_assert_eq!(e.ambient(), n);
                entries.push(e);
            }
        }
        PolyMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry by 0-based (row, col).
    pub fn entry(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    fn check_size(&self, other: &PolyMatrix) -> Result<(), Error> {
        if self.n != other.n {
            return Err(Error::MismatchedAmbient(self.n, other.n));
        }
        Ok(())
    }

    /// Exact matrix product. Fails on mismatched sizes.
    pub fn checked_matmul(&self, other: &PolyMatrix) -> Result<PolyMatrix, Error> {
        self.check_size(other)?;
        let n = self.n;
        Ok(PolyMatrix::from_fn(n, |i, j| {
            let mut acc = Polynomial::zero(n);
            for k in 0..n {
                acc = &acc + &(self.entry(i, k) * other.entry(k, j));
            }
            acc
        }))
    }

    /// Commutator AB - BA.
    pub fn commutator(&self, other: &PolyMatrix) -> Result<PolyMatrix, Error> {
        Ok(&self.checked_matmul(other)? - &other.checked_matmul(self)?)
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> Polynomial {
        let mut acc = Polynomial::zero(self.n);
        for i in 0..self.n {
            acc = &acc + self.entry(i, i);
        }
        acc
    }

    /// Entrywise product with a polynomial.
    pub fn scalar_mul(&self, factor: &Polynomial) -> PolyMatrix {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn scale(&self, factor: &Rat) -> PolyMatrix {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e.scale(factor)).collect(),
        }
    }

    /// Matrix power by repeated multiplication; `pow(0) = I`.
    pub fn pow(&self, exponent: u32) -> PolyMatrix {
        let mut acc = PolyMatrix::identity(self.n);
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }

    /// `Some(alpha)` when the matrix equals alpha * I, otherwise `None`.
    pub fn is_central(&self) -> Option<Polynomial> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if i != j && !self.entry(i, j).is_zero() {
                    return None;
                }
            }
        }
        let head = self.entry(0, 0);
        for i in 1..n {
            if self.entry(i, i) != head {
                return None;
            }
        }
        Some(head.clone())
    }

    /// Entrywise substitution of the indeterminates by the entries of a
    /// rational point.
    pub fn evaluate(&self, point: &RatMat) -> Result<RatMat, Error> {
        if point.n != self.n {
            return Err(Error::MismatchedAmbient(self.n, point.n));
        }
        let assignment = point.assignment();
        let mut entries = Vec::with_capacity(self.n * self.n);
        for e in &self.entries {
            entries.push(e.substitute(&assignment)?);
        }
        Ok(RatMat {
            n: self.n,
            entries,
        })
    }
}

impl Add for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.check_size(rhs).expect("matrix sizes must match");
        PolyMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.check_size(rhs).expect("matrix sizes must match");
        PolyMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.checked_matmul(rhs).expect("matrix sizes must match")
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// The generic n x n matrix whose (i, j) entry is the indeterminate x[i,j].
pub fn generic_matrix(n: usize) -> Result<PolyMatrix, Error> {
    if n < 1 {
        return Err(Error::InvalidSize(n));
    }
    Ok(PolyMatrix::from_fn(n, |i, j| {
        Polynomial::variable(n, VarIndex::new(i + 1, j + 1))
    }))
}

/// Characteristic-polynomial data of a matrix A: the coefficients of
/// det(t - A) = sum c_k t^k (with c_n = 1), the adjugate, and the
/// determinant. Satisfies A * adjugate = adjugate * A = determinant * I.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPolyData {
    pub coefficients: Vec<Polynomial>,
    pub adjugate: PolyMatrix,
    pub determinant: Polynomial,
}

/// Runs the Faddeev-LeVerrier recursion
/// `M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k`,
/// producing characteristic-polynomial coefficients, adjugate
/// `(-1)^{n-1} M_n` and determinant `(-1)^n c_0` in a single pass. Divisions
/// are only by the integers 1..n, which is valid over the rationals.
pub fn faddeev_leverrier(a: &PolyMatrix) -> CharPolyData {
    let n = a.size();
    let mut coefficients = vec![Polynomial::zero(n); n + 1];
    coefficients[n] = Polynomial::one(n);
    let mut m = PolyMatrix::zero(n);
    for k in 1..=n {
        m = &(a * &m) + &PolyMatrix::scalar(n, &coefficients[n - k + 1]);
        let am = a * &m;
        coefficients[n - k] = am.trace().scale(&-(rat_int(1) / rat_int(k as i64)));
    }
    let sign = |negative: bool| if negative { rat_int(-1) } else { rat_int(1) };
    let adjugate = m.scale(&sign(n.is_multiple_of(2)));
    let determinant = coefficients[0].scale(&sign(!n.is_multiple_of(2)));
    CharPolyData {
        coefficients,
        adjugate,
        determinant,
    }
}

/// Verifies the Cayley-Hamilton identity sum c_k A^k = 0 exactly.
pub fn cayley_hamilton_check(a: &PolyMatrix) -> bool {
    let n = a.size();
    let data = faddeev_leverrier(a);
    let mut acc = PolyMatrix::zero(n);
    let mut power = PolyMatrix::identity(n);
    for k in 0..=n {
        acc = &acc + &power.scalar_mul(&data.coefficients[k]);
        if k < n {
            power = &power * a;
        }
    }
    acc.is_zero()
}

/// Coefficients tau_0..tau_{n-1} expressing the adjugate of the generic
/// matrix as adj(Y) = sum tau_i(Y) Y^i, with tau_i homogeneous of degree
/// n-1-i. They are read off the characteristic polynomial:
/// adj(Y) = (-1)^{n-1} (Y^{n-1} + c_{n-1} Y^{n-2} + ... + c_1 I).
pub fn adj_standard_form(n: usize) -> Result<Vec<ScalarPoly>, Error> {
    if n < 1 {
        return Err(Error::InvalidSize(n));
    }
    let data = generic_char_data(n);
    let sign = if n.is_multiple_of(2) { rat_int(-1) } else { rat_int(1) };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let poly = data.coefficients[i + 1].scale(&sign);
        out.push(ScalarPoly::new(n, (n - 1 - i) as u32, poly)?);
    }
    Ok(out)
}

/// Square matrix of rationals, used for spot checks of symbolic identities
/// at concrete points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    n: usize,
    entries: Vec<Rat>,
}

impl RatMat {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rat) -> RatMat {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        RatMat { n, entries }
    }

    pub fn identity(n: usize) -> RatMat {
        RatMat::from_fn(n, |i, j| if i == j { Rat::one() } else { Rat::zero() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rat {
        &self.entries[row * self.n + col]
    }

    pub fn matmul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.n, other.n);
        RatMat::from_fn(self.n, |i, j| {
            let mut acc = Rat::zero();
            for k in 0..self.n {
                acc += self.entry(i, k) * other.entry(k, j);
            }
            acc
        })
    }

    pub fn scale(&self, factor: &Rat) -> RatMat {
        RatMat {
            n: self.n,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn sub(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.n, other.n);
        RatMat {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Full variable assignment x[i,j] -> entry(i,j).
    pub fn assignment(&self) -> HashMap<VarIndex, Rat> {
        let mut map = HashMap::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                map.insert(VarIndex::new(i + 1, j + 1), self.entry(i, j).clone());
            }
        }
        map
    }
}

// Caches keyed by n for data derived from the generic matrix. Entries are
// computed deterministically, so a lost insertion race only repeats work.
pub(crate) type Memo<K, V> = OnceLock<Mutex<HashMap<K, V>>>;

static Y_POWERS: Memo<usize, Vec<PolyMatrix>> = OnceLock::new();
static Y_CHAR: Memo<usize, Arc<CharPolyData>> = OnceLock::new();
static Y_ADJ_POWERS: Memo<(usize, u32), Arc<PolyMatrix>> = OnceLock::new();

/// The k-th power of the generic matrix, memoized per (n, k).
pub fn generic_power(n: usize, k: u32) -> PolyMatrix {
    let lock = Y_POWERS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = lock.lock().expect("generic power cache poisoned");
    let powers = map
        .entry(n)
        .or_insert_with(|| vec![PolyMatrix::identity(n)]);
    while powers.len() <= k as usize {
        let y = generic_matrix(n).expect("n >= 1");
        let next = powers.last().expect("nonempty") * &y;
        powers.push(next);
    }
    powers[k as usize].clone()
}

/// Characteristic-polynomial data of the generic matrix, memoized per n.
pub fn generic_char_data(n: usize) -> Arc<CharPolyData> {
    let lock = Y_CHAR.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(found) = lock.lock().expect("char cache poisoned").get(&n) {
        return Arc::clone(found);
    }
    let y = generic_matrix(n).expect("n >= 1");
    let data = Arc::new(faddeev_leverrier(&y));
    lock.lock()
        .expect("char cache poisoned")
        .entry(n)
        .or_insert(data)
        .clone()
}

/// adj(Y)^m, memoized per (n, m).
pub fn generic_adjugate_power(n: usize, m: u32) -> Arc<PolyMatrix> {
    let lock = Y_ADJ_POWERS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(found) = lock.lock().expect("adj cache poisoned").get(&(n, m)) {
        return Arc::clone(found);
    }
    let adj = generic_char_data(n).adjugate.clone();
    let value = Arc::new(adj.pow(m));
    lock.lock()
        .expect("adj cache poisoned")
        .entry((n, m))
        .or_insert(value)
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat;

    fn xi(n: usize, row: usize, col: usize) -> Polynomial {
        Polynomial::variable(n, VarIndex::new(row, col))
    }

    /// Cofactor-expansion determinant, used as an independent oracle for the
    /// Faddeev-LeVerrier results.
    fn cofactor_det(m: &PolyMatrix) -> Polynomial {
        let n = m.size();
        if n == 1 {
            return m.entry(0, 0).clone();
        }
        let mut acc = Polynomial::zero(m.entry(0, 0).ambient());
        for j in 0..n {
            let minor = delete_row_col(m, 0, j);
            let term = &m.entry(0, j).clone() * &cofactor_det(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// Submatrix with one row and column removed. The minor keeps the
    /// original ambient variable count.
    fn delete_row_col(m: &PolyMatrix, row: usize, col: usize) -> PolyMatrix {
        let n = m.size();
        let mut kept = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != row && j != col {
                    kept.push(m.entry(i, j).clone());
                }
            }
        }
        PolyMatrix {
            n: n - 1,
            entries: kept,
        }
    }

    /// Adjugate from cofactors: adj(A)[j][i] = (-1)^{i+j} det(minor_ij).
    fn cofactor_adjugate(m: &PolyMatrix) -> PolyMatrix {
        let n = m.size();
        let ambient = m.entry(0, 0).ambient();
        if n == 1 {
            return PolyMatrix::scalar(1, &Polynomial::one(ambient));
        }
        PolyMatrix::from_fn(n, |j, i| {
            let det = cofactor_det(&delete_row_col(m, i, j));
            if (i + j) % 2 == 0 {
                det
            } else {
                -&det
            }
        })
    }

    #[test]
    fn generic_matrix_examples() {
        let y1 = generic_matrix(1).unwrap();
        assert_eq!(y1.entry(0, 0), &xi(1, 1, 1));
        let y2 = generic_matrix(2).unwrap();
        assert_eq!(y2.entry(0, 0), &xi(2, 1, 1));
        assert_eq!(y2.entry(0, 1), &xi(2, 1, 2));
        assert_eq!(y2.entry(1, 0), &xi(2, 2, 1));
        assert_eq!(y2.entry(1, 1), &xi(2, 2, 2));
        let y3 = generic_matrix(3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for e in y3.entries() {
            assert_eq!(e.num_terms(), 1);
            seen.insert(format!("{e}"));
        }
        assert_eq!(seen.len(), 9);
        assert_eq!(generic_matrix(0).unwrap_err(), Error::InvalidSize(0));
    }

    #[test]
    fn matmul_examples() {
        let y = generic_matrix(2).unwrap();
        assert_eq!(&y * &PolyMatrix::identity(2), y);
        let y2 = &y * &y;
        let expected = &xi(2, 1, 1).pow(2) + &(&xi(2, 1, 2) * &xi(2, 2, 1));
        assert_eq!(y2.entry(0, 0), &expected);
        assert!((&y * &PolyMatrix::zero(2)).is_zero());
        assert_eq!(
            y.checked_matmul(&PolyMatrix::zero(3)).unwrap_err(),
            Error::MismatchedAmbient(2, 3)
        );
    }

    #[test]
    fn commutator_examples() {
        let y = generic_matrix(2).unwrap();
        assert!(y.commutator(&y).unwrap().is_zero());
        assert!((&y * &y).commutator(&y).unwrap().is_zero());
        // E11 embedded as a constant matrix: [E11, Y] has the closed form
        // [[0, x12], [-x21, 0]].
        let mut e11 = PolyMatrix::zero(2);
        e11.entries[0] = Polynomial::one(2);
        let c = e11.commutator(&y).unwrap();
        assert!(c.entry(0, 0).is_zero());
        assert_eq!(c.entry(0, 1), &xi(2, 1, 2));
        assert_eq!(c.entry(1, 0), &-&xi(2, 2, 1));
        assert!(c.entry(1, 1).is_zero());
    }

    #[test]
    fn trace_examples() {
        let y = generic_matrix(2).unwrap();
        assert_eq!(y.trace(), &xi(2, 1, 1) + &xi(2, 2, 2));
        assert_eq!(
            PolyMatrix::identity(3).trace(),
            Polynomial::constant(3, rat_int(3))
        );
        let a = &y * &y;
        let mut b = PolyMatrix::zero(2);
        b.entries[1] = xi(2, 2, 1).pow(2);
        b.entries[2] = Polynomial::one(2);
        assert!(a.commutator(&b).unwrap().trace().is_zero());
    }

    #[test]
    fn faddeev_leverrier_closed_forms_n2() {
        let y = generic_matrix(2).unwrap();
        let data = faddeev_leverrier(&y);
        let tr = &xi(2, 1, 1) + &xi(2, 2, 2);
        let det = &(&xi(2, 1, 1) * &xi(2, 2, 2)) - &(&xi(2, 1, 2) * &xi(2, 2, 1));
        assert_eq!(data.coefficients[2], Polynomial::one(2));
        assert_eq!(data.coefficients[1], -&tr);
        assert_eq!(data.coefficients[0], det);
        assert_eq!(data.determinant, det);
        assert_eq!(data.adjugate.entry(0, 0), &xi(2, 2, 2));
        assert_eq!(data.adjugate.entry(0, 1), &-&xi(2, 1, 2));
        assert_eq!(data.adjugate.entry(1, 0), &-&xi(2, 2, 1));
        assert_eq!(data.adjugate.entry(1, 1), &xi(2, 1, 1));
    }

    #[test]
    fn faddeev_leverrier_identity_n3() {
        let data = faddeev_leverrier(&PolyMatrix::identity(3));
        assert!(data.determinant.is_one());
        assert_eq!(data.adjugate, PolyMatrix::identity(3));
        // det(t - I) = (t - 1)^3 = t^3 - 3t^2 + 3t - 1.
        let expect = [-1i64, 3, -3, 1];
        for (k, &c) in expect.iter().enumerate() {
            assert_eq!(data.coefficients[k], Polynomial::constant(3, rat_int(c)));
        }
    }

    #[test]
    fn faddeev_leverrier_matches_cofactor_oracle() {
        for n in 1..=3 {
            let y = generic_matrix(n).unwrap();
            let data = faddeev_leverrier(&y);
            assert_eq!(data.determinant, cofactor_det(&y), "determinant n={n}");
            assert_eq!(data.adjugate, cofactor_adjugate(&y), "adjugate n={n}");
            let prod = &y * &data.adjugate;
            assert_eq!(prod, PolyMatrix::scalar(n, &data.determinant));
            let prod2 = &data.adjugate * &y;
            assert_eq!(prod2, PolyMatrix::scalar(n, &data.determinant));
        }
    }

    #[test]
    fn cayley_hamilton_small() {
        for n in 1..=3 {
            assert!(cayley_hamilton_check(&generic_matrix(n).unwrap()));
            assert!(cayley_hamilton_check(&PolyMatrix::identity(n)));
        }
    }

    #[test]
    fn adj_standard_form_closed_forms() {
        let tau1 = adj_standard_form(1).unwrap();
        assert!(tau1[0].poly().is_one());

        let tau2 = adj_standard_form(2).unwrap();
        assert_eq!(tau2[0].poly(), &(&xi(2, 1, 1) + &xi(2, 2, 2)));
        assert_eq!(tau2[1].poly(), &Polynomial::constant(2, rat_int(-1)));

        let tau3 = adj_standard_form(3).unwrap();
        assert!(tau3[2].poly().is_one());
        let y = generic_matrix(3).unwrap();
        assert_eq!(tau3[1].poly(), &-&y.trace());
        let tr2 = (&y * &y).trace();
        let expected = (&y.trace().pow(2) - &tr2).scale(&rat(1, 2));
        assert_eq!(tau3[0].poly(), &expected);
        // Reconstruction against the adjugate from Faddeev-LeVerrier.
        let mut rebuilt = PolyMatrix::zero(3);
        for (i, tau) in tau3.iter().enumerate() {
            rebuilt = &rebuilt + &generic_power(3, i as u32).scalar_mul(tau.poly());
        }
        assert_eq!(rebuilt, generic_char_data(3).adjugate);
        // Degrees: tau_i homogeneous of degree n-1-i.
        for (i, tau) in tau3.iter().enumerate() {
            assert!(tau.poly().is_homogeneous((3 - 1 - i) as u32));
        }
    }

    #[test]
    fn is_central_examples() {
        let y = generic_matrix(2).unwrap();
        let det = faddeev_leverrier(&y).determinant;
        assert_eq!(PolyMatrix::scalar(2, &det).is_central(), Some(det));
        assert_eq!(y.is_central(), None);
        assert_eq!(
            PolyMatrix::zero(2).is_central(),
            Some(Polynomial::zero(2))
        );
    }

    #[test]
    fn evaluate_examples() {
        let y = generic_matrix(2).unwrap();
        let p = RatMat::from_fn(2, |i, j| rat((i + 2 * j) as i64 + 1, 3));
        assert_eq!(y.evaluate(&p).unwrap(), p);
        assert!(PolyMatrix::zero(2)
            .evaluate(&p)
            .unwrap()
            .is_zero());
        // adjugate identity at the point: adj(Y)(P) * P = det(P) * I.
        let data = faddeev_leverrier(&y);
        let adj_p = data.adjugate.evaluate(&p).unwrap();
        let det_p = data
            .determinant
            .substitute(&p.assignment())
            .unwrap();
        let lhs = adj_p.matmul(&p);
        assert_eq!(lhs, RatMat::identity(2).scale(&det_p));
    }

    #[test]
    fn evaluate_is_multiplicative_at_points() {
        let y = generic_matrix(2).unwrap();
        let a = &y * &y;
        let b = &y + &PolyMatrix::identity(2);
        let p = RatMat::from_fn(2, |i, j| rat(2 * i as i64 - j as i64 + 1, 2));
        let prod_then_eval = (&a * &b).evaluate(&p).unwrap();
        let eval_then_prod = a.evaluate(&p).unwrap().matmul(&b.evaluate(&p).unwrap());
        assert_eq!(prod_then_eval, eval_then_prod);
    }
}
