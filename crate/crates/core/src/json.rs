//! Canonical JSON serialization.
//!
//! A polynomial serializes as a list of `[numerator, denominator,
//! exponent-vector]` triples in canonical monomial order, with the integers
//! rendered as decimal strings so consumers never lose precision. Matrices
//! are row-major lists of polynomial term lists; the composite types carry
//! their dimensions alongside.

use serde_json::{json, Value};

use crate::decompose::{FIDecomposition, StandardForm};
use crate::polymat::{CharPolyData, PolyMatrix};
use crate::polyring::Polynomial;
use crate::tracemaps::{ScalarPoly, TraceMap};

impl Polynomial {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(mon, coeff)| {
                json!([
                    coeff.numer().to_string(),
                    coeff.denom().to_string(),
                    mon.exponents(),
                ])
            })
            .collect();
        Value::Array(terms)
    }
}

impl PolyMatrix {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.size())
            .map(|i| {
                Value::Array(
                    (0..self.size())
                        .map(|j| self.entry(i, j).to_json())
                        .collect(),
                )
            })
            .collect();
        Value::Array(rows)
    }
}

impl CharPolyData {
    pub fn to_json(&self) -> Value {
        json!({
            "coefficients": self.coefficients.iter().map(Polynomial::to_json).collect::<Vec<_>>(),
            "adjugate": self.adjugate.to_json(),
            "determinant": self.determinant.to_json(),
        })
    }
}

impl TraceMap {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.ambient(),
            "d": self.degree(),
            "body": self.body().to_json(),
        })
    }
}

impl ScalarPoly {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.ambient(),
            "d": self.degree(),
            "poly": self.poly().to_json(),
        })
    }
}

impl StandardForm {
    /// The `verified` flag reflects the reconstruction check that every
    /// constructor performs before returning.
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.ambient(),
            "d": self.degree(),
            "coefficients": self.coefficients().iter().map(ScalarPoly::to_json).collect::<Vec<_>>(),
            "verified": true,
        })
    }
}

impl FIDecomposition {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.ambient(),
            "m": self.sandwich_exponent(),
            "d": self.degree(),
            "p": self.p().iter().map(TraceMap::to_json).collect::<Vec<_>>(),
            "mu": self.mu().iter().map(ScalarPoly::to_json).collect::<Vec<_>>(),
            "lambda": self.lambda().to_json(),
            "case": if self.is_homogeneous_case() { "a" } else { "b" },
            "verified": true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{rat, Polynomial, VarIndex};

    #[test]
    fn polynomial_terms_are_ordered_and_stringly() {
        let f = &Polynomial::variable(2, VarIndex::new(1, 1))
            .scale(&rat(-1, 2))
            + &Polynomial::variable(2, VarIndex::new(1, 2)).pow(2);
        let v = f.to_json();
        let terms = v.as_array().unwrap();
        assert_eq!(terms.len(), 2);
        // Degree-1 term first (canonical ascending order).
        assert_eq!(terms[0][0], "-1");
        assert_eq!(terms[0][1], "2");
        assert_eq!(terms[0][2], json!([1, 0, 0, 0]));
        assert_eq!(terms[1][0], "1");
        assert_eq!(terms[1][2], json!([0, 2, 0, 0]));
    }

    #[test]
    fn zero_polynomial_is_empty_list() {
        assert_eq!(Polynomial::zero(2).to_json(), json!([]));
    }
}
