//! The calculus of traces of d-linear maps, identified with homogeneous
//! polynomial matrices: degree bookkeeping, the degree-lowering partial
//! operator, and sandwiching by powers of the argument.
//!
//! A trace map q of degree d stands for x -> M(x, ..., x) with M symmetric
//! d-linear; the symmetric map itself is never materialized. The partial
//! operator returns the map x -> M(x, ..., x, 1); concretely it is the
//! directional derivative of the body along the identity matrix, divided
//! by d.

use std::fmt;

use num_traits::One;

use crate::error::Error;
use crate::polymat::{generic_power, PolyMatrix};
use crate::polyring::{rat_int, Polynomial, Rat, VarIndex};

/// A central-valued trace map x -> poly(x), homogeneous of degree d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarPoly {
    n: usize,
    d: u32,
    poly: Polynomial,
}

impl ScalarPoly {
    pub fn new(n: usize, d: u32, poly: Polynomial) -> Result<ScalarPoly, Error> {
        if !poly.is_homogeneous(d) {
            return Err(Error::NotHomogeneous {
                expected: d,
                detail: format!("scalar map body {poly}"),
            });
        }
        Ok(ScalarPoly { n, d, poly })
    }

    pub fn zero(n: usize, d: u32) -> ScalarPoly {
        ScalarPoly {
            n,
            d,
            poly: Polynomial::zero(n),
        }
    }

    pub fn one(n: usize) -> ScalarPoly {
        ScalarPoly {
            n,
            d: 0,
            poly: Polynomial::one(n),
        }
    }

    pub fn constant(n: usize, value: Rat) -> ScalarPoly {
        ScalarPoly {
            n,
            d: 0,
            poly: Polynomial::constant(n, value),
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Product of two central maps; degrees add.
    pub fn mul(&self, other: &ScalarPoly) -> Result<ScalarPoly, Error> {
        let poly = self.poly.checked_mul(&other.poly)?;
        Ok(ScalarPoly {
            n: self.n,
            d: self.d + other.d,
            poly,
        })
    }
}

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// The trace of a d-linear map on the n x n matrix algebra, carried as an
/// n x n matrix of polynomials homogeneous of degree d (zero entries are
/// allowed at any degree).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceMap {
    n: usize,
    d: u32,
    body: PolyMatrix,
}

/// Validates homogeneity and wraps a polynomial matrix as a trace map.
pub fn make_trace_map(n: usize, d: u32, body: PolyMatrix) -> Result<TraceMap, Error> {
    if body.size() != n {
        return Err(Error::MismatchedAmbient(n, body.size()));
    }
    for i in 0..n {
        for j in 0..n {
            if !body.entry(i, j).is_homogeneous(d) {
                return Err(Error::NotHomogeneous {
                    expected: d,
                    detail: format!("entry ({i}, {j}) = {}", body.entry(i, j)),
                });
            }
        }
    }
    Ok(TraceMap { n, d, body })
}

impl TraceMap {
    pub fn new(n: usize, d: u32, body: PolyMatrix) -> Result<TraceMap, Error> {
        make_trace_map(n, d, body)
    }

    pub fn zero(n: usize, d: u32) -> TraceMap {
        TraceMap {
            n,
            d,
            body: PolyMatrix::zero(n),
        }
    }

    /// The identity map x -> x.
    pub fn identity_map(n: usize) -> TraceMap {
        TraceMap {
            n,
            d: 1,
            body: generic_power(n, 1),
        }
    }

    /// The map x -> x^k.
    pub fn power_map(n: usize, k: u32) -> TraceMap {
        TraceMap {
            n,
            d: k,
            body: generic_power(n, k),
        }
    }

    /// A central map embedded as scalar * I.
    pub fn from_scalar(scalar: &ScalarPoly) -> TraceMap {
        TraceMap {
            n: scalar.ambient(),
            d: scalar.degree(),
            body: PolyMatrix::scalar(scalar.ambient(), scalar.poly()),
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn body(&self) -> &PolyMatrix {
        &self.body
    }

    pub fn into_body(self) -> PolyMatrix {
        self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Map value at the identity matrix: the body with every diagonal
    /// variable set to 1 and every off-diagonal variable set to 0.
    pub fn value_at_identity(&self) -> Result<crate::polymat::RatMat, Error> {
        self.body.evaluate(&crate::polymat::RatMat::identity(self.n))
    }
}

impl fmt::Display for TraceMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree-{} map with body\n{}", self.d, self.body)
    }
}

/// The degree-lowering operator: for q of degree d >= 1 returns the map
/// x -> M(x, ..., x, 1) of degree d - 1, computed as the directional
/// derivative of the body along the identity divided by d. The partial of a
/// degree-0 map is the zero map of degree 0.
pub fn partial(q: &TraceMap) -> TraceMap {
    if q.d == 0 {
        return TraceMap::zero(q.n, 0);
    }
    let n = q.n;
    let mut body = PolyMatrix::zero(n);
    for i in 1..=n {
        let var = VarIndex::new(i, i);
        let derived = PolyMatrix::from_fn(n, |r, c| q.body.entry(r, c).partial_derivative(var));
        body = &body + &derived;
    }
    TraceMap {
        n,
        d: q.d - 1,
        body: body.scale(&(Rat::one() / rat_int(q.d as i64))),
    }
}

/// t-fold application of the partial operator; the d-fold partial is the
/// constant map x -> q(1).
pub fn iterated_partial(q: &TraceMap, t: u32) -> Result<TraceMap, Error> {
    if t > q.d {
        return Err(Error::OutOfRange {
            order: t,
            degree: q.d,
        });
    }
    let mut current = q.clone();
    for _ in 0..t {
        current = partial(&current);
    }
    Ok(current)
}

/// The map x -> x^left * q(x) * x^right, of degree d + left + right.
pub fn sandwich(q: &TraceMap, left: u32, right: u32) -> TraceMap {
    let n = q.n;
    let mut body = q.body.clone();
    if left > 0 {
        body = &generic_power(n, left) * &body;
    }
    if right > 0 {
        body = &body * &generic_power(n, right);
    }
    TraceMap {
        n,
        d: q.d + left + right,
        body,
    }
}

/// The map x -> mu(x) * q(x), of degree mu.d + q.d.
pub fn scalar_mul_map(mu: &ScalarPoly, q: &TraceMap) -> Result<TraceMap, Error> {
    if mu.ambient() != q.n {
        return Err(Error::MismatchedAmbient(mu.ambient(), q.n));
    }
    Ok(TraceMap {
        n: q.n,
        d: mu.degree() + q.d,
        body: q.body.scalar_mul(mu.poly()),
    })
}

/// Checks the product rule
/// `partial(q q') = d/(d+d') partial(q) q' + d'/(d+d') q partial(q')`
/// exactly, where q q' is the pointwise product map.
pub fn product_rule_check(q: &TraceMap, q_prime: &TraceMap) -> bool {
    let total = q.d + q_prime.d;
    let product = TraceMap {
        n: q.n,
        d: total,
        body: &q.body * &q_prime.body,
    };
    let lhs = partial(&product);
    if total == 0 {
        return lhs.body.is_zero();
    }
    let left = (&partial(q).body * &q_prime.body)
        .scale(&(rat_int(q.d as i64) / rat_int(total as i64)));
    let right = (&q.body * &partial(q_prime).body)
        .scale(&(rat_int(q_prime.d as i64) / rat_int(total as i64)));
    lhs.body == &left + &right
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polymat::generic_matrix;

    #[test]
    fn make_trace_map_validates_homogeneity() {
        let y2 = generic_power(2, 2);
        assert!(make_trace_map(2, 2, y2.clone()).is_ok());
        let err = make_trace_map(2, 1, y2).unwrap_err();
        assert!(matches!(err, Error::NotHomogeneous { expected: 1, .. }));
        assert!(make_trace_map(2, 5, PolyMatrix::zero(2)).is_ok());
    }

    #[test]
    fn partial_of_power_maps() {
        // q(x) = x^2 -> x, q(x) = x^3 -> x^2.
        for k in [2u32, 3] {
            let q = TraceMap::power_map(2, k);
            assert_eq!(partial(&q), TraceMap::power_map(2, k - 1));
        }
    }

    #[test]
    fn partial_of_trace_times_x() {
        // q(x) = tr(x) x at n = 2 has partial (tr(x) I + 2x) / 2, obtained by
        // symmetrizing M(x1, x2) = (tr(x1) x2 + tr(x2) x1) / 2 at x2 = 1.
        let y = generic_matrix(2).unwrap();
        let q = make_trace_map(2, 2, y.scalar_mul(&y.trace())).unwrap();
        let got = partial(&q);
        let expected = (&PolyMatrix::scalar(2, &y.trace()) + &y.scale(&rat_int(2)))
            .scale(&crate::polyring::rat(1, 2));
        assert_eq!(got.body(), &expected);
        assert_eq!(got.degree(), 1);
    }

    #[test]
    fn partial_of_degree_zero_is_zero() {
        let constant = TraceMap::power_map(2, 0);
        let p = partial(&constant);
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn iterated_partial_examples() {
        let q = TraceMap::power_map(2, 2);
        assert_eq!(iterated_partial(&q, 0).unwrap(), q);
        // x^2 twice-derived is the constant map 1.
        let twice = iterated_partial(&q, 2).unwrap();
        assert_eq!(twice.body(), &PolyMatrix::identity(2));
        assert_eq!(twice.degree(), 0);
        assert_eq!(
            iterated_partial(&q, 3).unwrap_err(),
            Error::OutOfRange {
                order: 3,
                degree: 2
            }
        );
        // q(x) = tr(x) x at n = 2: the 2-fold partial is q(1) = tr(1) 1 = 2 I.
        let y = generic_matrix(2).unwrap();
        let q = make_trace_map(2, 2, y.scalar_mul(&y.trace())).unwrap();
        let q2 = iterated_partial(&q, 2).unwrap();
        assert_eq!(q2.body(), &PolyMatrix::identity(2).scale(&rat_int(2)));
    }

    #[test]
    fn iterated_partial_reaches_value_at_identity() {
        // The d-fold partial is the constant map x -> q(1).
        let y = generic_matrix(2).unwrap();
        let q = make_trace_map(2, 3, (&y * &y).scalar_mul(&y.trace())).unwrap();
        let q3 = iterated_partial(&q, 3).unwrap();
        let at_one = q.value_at_identity().unwrap();
        let constant = q3.body().evaluate(&crate::polymat::RatMat::identity(2)).unwrap();
        assert_eq!(constant, at_one);
        // and the constant body has degree 0 entries
        assert_eq!(q3.degree(), 0);
    }

    #[test]
    fn sandwich_examples() {
        let q = TraceMap::power_map(2, 2);
        assert_eq!(sandwich(&q, 0, 0), q);
        assert_eq!(sandwich(&q, 1, 0), TraceMap::power_map(2, 3));
        // Sandwiching the adjugate map by one left power gives det(Y) I.
        let data = crate::polymat::generic_char_data(2);
        let adj_map = make_trace_map(2, 1, data.adjugate.clone()).unwrap();
        let s = sandwich(&adj_map, 1, 0);
        assert_eq!(s.body(), &PolyMatrix::scalar(2, &data.determinant));
    }

    #[test]
    fn sandwich_exponents_compose() {
        let y = generic_matrix(2).unwrap();
        let q = make_trace_map(2, 2, y.scalar_mul(&y.trace())).unwrap();
        let twice = sandwich(&sandwich(&q, 1, 2), 2, 1);
        assert_eq!(twice, sandwich(&q, 3, 3));
    }

    #[test]
    fn scalar_mul_map_examples() {
        let q = TraceMap::power_map(2, 2);
        assert_eq!(scalar_mul_map(&ScalarPoly::one(2), &q).unwrap(), q);
        let y = generic_matrix(2).unwrap();
        let tr = ScalarPoly::new(2, 1, y.trace()).unwrap();
        let scaled = scalar_mul_map(&tr, &TraceMap::identity_map(2)).unwrap();
        assert_eq!(scaled.body(), &y.scalar_mul(&y.trace()));
        assert_eq!(scaled.degree(), 2);
        let zeroed = scalar_mul_map(&ScalarPoly::zero(2, 1), &q).unwrap();
        assert!(zeroed.is_zero());
    }

    #[test]
    fn product_rule_simple_cases() {
        let x = TraceMap::identity_map(2);
        let x2 = TraceMap::power_map(2, 2);
        assert!(product_rule_check(&x, &x));
        assert!(product_rule_check(&x2, &x));
    }

    #[test]
    fn partial_lowers_degree_to_homogeneous_body() {
        let y = generic_matrix(3).unwrap();
        let q = make_trace_map(3, 2, &y * &y).unwrap();
        let p = partial(&q);
        assert_eq!(p.degree(), 1);
        assert!(make_trace_map(3, 1, p.body().clone()).is_ok());
    }
}
