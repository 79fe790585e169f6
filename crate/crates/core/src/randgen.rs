//! Seeded deterministic generators for randomized testing and the fuzz
//! harness. Every generator draws from a caller-provided ChaCha stream, so
//! a (seed, case index) pair pins the generated instance bit-for-bit across
//! runs and platforms.

use rand::Rng;
use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::polymat::{generic_adjugate_power, generic_power, PolyMatrix};
use crate::polyring::{rat_int, Monomial, Polynomial, Rat};
use crate::tracemaps::{sandwich, ScalarPoly, TraceMap};

/// An independent deterministic stream for one indexed case of a seeded run.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(case))
}

/// Nonzero coefficient in -3..=3.
fn coefficient(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            return rat_int(c);
        }
    }
}

fn monomial(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> Monomial {
    let mut exps = vec![0u16; nvars];
    for _ in 0..degree {
        exps[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::from_exponents(exps)
}

/// Sparse homogeneous polynomial with `terms` sampled monomials of the
/// given degree (duplicates merge, so the result can be sparser).
pub fn polynomial(rng: &mut ChaCha8Rng, n: usize, degree: u32, terms: usize) -> Polynomial {
    let nvars = n * n;
    Polynomial::from_terms(
        n,
        (0..terms).map(|_| (monomial(rng, nvars, degree), coefficient(rng))),
    )
}

pub fn scalar_poly(rng: &mut ChaCha8Rng, n: usize, degree: u32, terms: usize) -> ScalarPoly {
    ScalarPoly::new(n, degree, polynomial(rng, n, degree, terms))
        .expect("generated polynomial is homogeneous")
}

/// Raw trace map: four (entry, monomial, coefficient) samples by default.
/// Such maps are almost never commuting.
pub fn trace_map(rng: &mut ChaCha8Rng, n: usize, degree: u32, terms: usize) -> TraceMap {
    let nvars = n * n;
    let mut entries = vec![Vec::new(); n * n];
    for _ in 0..terms {
        let slot = rng.gen_range(0..n * n);
        entries[slot].push((monomial(rng, nvars, degree), coefficient(rng)));
    }
    let body = PolyMatrix::from_fn(n, |i, j| {
        Polynomial::from_terms(n, entries[i * n + j].drain(..))
    });
    TraceMap::new(n, degree, body).expect("generated entries are homogeneous")
}

/// Commuting map built in standard form sum mu_i(x) x^i together with its
/// generating coefficients; mu_i is homogeneous of degree d - i and indices
/// with i > d stay zero.
pub fn standard_form_map(
    rng: &mut ChaCha8Rng,
    n: usize,
    degree: u32,
) -> (TraceMap, Vec<ScalarPoly>) {
    let mut coefficients = Vec::with_capacity(n);
    let mut body = PolyMatrix::zero(n);
    for i in 0..n as u32 {
        if i > degree {
            coefficients.push(ScalarPoly::zero(n, 0));
            continue;
        }
        let mu = scalar_poly(rng, n, degree - i, 3);
        if !mu.is_zero() {
            body = &body + &generic_power(n, i).scalar_mul(mu.poly());
        }
        coefficients.push(mu);
    }
    let map = TraceMap::new(n, degree, body).expect("standard-form body is homogeneous");
    (map, coefficients)
}

/// Pair (q, r) of equal degree d >= 1 with [q(x) x - x r(x), x] = 0:
/// q = x s + mu I and r = s x + mu I + e for a random s of degree d - 1,
/// central mu of degree d, and a random commuting e of degree d, so that
/// q(x) x - x r(x) = -x e(x) commutes with x.
pub fn l2_pair(rng: &mut ChaCha8Rng, n: usize, degree: u32) -> (TraceMap, TraceMap) {
    assert!(degree >= 1);
    let s = trace_map(rng, n, degree - 1, 4);
    let mu = scalar_poly(rng, n, degree, 2);
    let (e, _) = standard_form_map(rng, n, degree);
    let q_body = &(generic_power(n, 1).checked_matmul(s.body()))
        .expect("sizes match")
        + &PolyMatrix::scalar(n, mu.poly());
    let r_body = &(&sandwich(&s, 0, 1).into_body() + &PolyMatrix::scalar(n, mu.poly()))
        + e.body();
    let q = TraceMap::new(n, degree, q_body).expect("homogeneous");
    let r = TraceMap::new(n, degree, r_body).expect("homogeneous");
    (q, r)
}

/// Instance q = mu adj(x)^m for the adjugate solver, returned with the
/// generating mu.
pub fn adjugate_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    mu_degree: u32,
) -> (TraceMap, ScalarPoly) {
    let mu = scalar_poly(rng, n, mu_degree, 2);
    let body = generic_adjugate_power(n, m as u32).scalar_mul(mu.poly());
    let degree = mu_degree + (m as u32) * (n as u32 - 1);
    let q = TraceMap::new(n, degree, body).expect("homogeneous");
    (q, mu)
}

/// Ground-truth data behind a generated functional-identity instance.
pub struct GroundTruth {
    pub p: Vec<TraceMap>,
    pub mu: Vec<ScalarPoly>,
    pub lambda: ScalarPoly,
}

/// Builds q_0..q_m from random p_i (degree d-1), central mu_i (degree d)
/// and lambda (degree d - m(n-1), zero when `zero_lambda` or when the
/// degree balance is infeasible), wired together by the decomposition
/// identities so the family is an identity by construction.
pub fn identity_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    degree: u32,
    zero_lambda: bool,
) -> (Vec<TraceMap>, GroundTruth) {
    assert!(m >= 1 && degree >= 1);
    let p: Vec<TraceMap> = (0..m).map(|_| trace_map(rng, n, degree - 1, 4)).collect();
    let mu: Vec<ScalarPoly> = (0..m).map(|_| scalar_poly(rng, n, degree, 2)).collect();
    let required = (m as u32) * (n as u32 - 1);
    let lambda = if zero_lambda || degree < required {
        ScalarPoly::zero(n, degree.saturating_sub(required))
    } else {
        scalar_poly(rng, n, degree - required, 2)
    };

    let y = generic_power(n, 1);
    let mut qs = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut body = &(&y * p[i].body()) + &PolyMatrix::scalar(n, mu[i].poly());
        if i > 0 {
            body = &body - &(p[i - 1].body() * &y);
        }
        qs.push(TraceMap::new(n, degree, body).expect("homogeneous"));
    }
    let mut mu_total = Polynomial::zero(n);
    for m_i in &mu {
        mu_total = &mu_total + m_i.poly();
    }
    let last = &(&generic_adjugate_power(n, m as u32).scalar_mul(lambda.poly())
        - &(p[m - 1].body() * &y))
        - &PolyMatrix::scalar(n, &mu_total);
    qs.push(TraceMap::new(n, degree, last).expect("homogeneous"));

    (qs, GroundTruth { p, mu, lambda })
}

/// Commuting map for Engel-style suites: even picks are standard-form
/// (commuting) maps, odd picks raw (generically non-commuting) ones.
pub fn engel_candidate(rng: &mut ChaCha8Rng, n: usize, degree: u32, case: u64) -> TraceMap {
    if case.is_multiple_of(2) {
        standard_form_map(rng, n, degree).0
    } else {
        trace_map(rng, n, degree, 4)
    }
}
