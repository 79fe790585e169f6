//! Seeded fuzz suites with deterministic JSON reports. Each case draws its
//! own ChaCha stream from (seed, case index), so reports are byte-identical
//! across runs for a fixed seed, and cases stay reproducible in isolation.

use serde_json::{json, Value};

use fident_core::randgen::{self, case_rng};
use fident_core::tracemaps::partial;
use fident_core::{
    engel_check, fi_decompose, fi_decompose_oracle, generic_power, l2_reduce, standard_form,
    adjugate_solve, AdjugateOutcome, EngelOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ring,
    StandardForm,
    Engel,
    L2,
    Adjugate,
    Decompose,
}

impl Suite {
    pub fn from_name(name: &str) -> Option<Suite> {
        Some(match name {
            "ring" => Suite::Ring,
            "standard-form" => Suite::StandardForm,
            "engel" => Suite::Engel,
            "l2" => Suite::L2,
            "adjugate" => Suite::Adjugate,
            "decompose" => Suite::Decompose,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ring => "ring",
            Suite::StandardForm => "standard-form",
            Suite::Engel => "engel",
            Suite::L2 => "l2",
            Suite::Adjugate => "adjugate",
            Suite::Decompose => "decompose",
        }
    }

    pub const NAMES: &'static [&'static str] =
        &["ring", "standard-form", "engel", "l2", "adjugate", "decompose"];
}

pub struct FuzzParams {
    pub suite: Suite,
    pub seed: u64,
    pub cases: u64,
    pub n: usize,
    pub d: u32,
}

/// Runs one suite; the report lists per-case results ordered by case index
/// and a pass/fail summary.
pub fn run(params: &FuzzParams) -> (Value, bool) {
    let mut results = Vec::new();
    let mut passed = 0u64;
    for case in 0..params.cases {
        match run_case(params, case) {
            Ok(detail) => {
                passed += 1;
                results.push(json!({"case": case, "status": "pass", "detail": detail}));
            }
            Err(message) => {
                results.push(json!({"case": case, "status": "fail", "error": message}));
            }
        }
    }
    let all_passed = passed == params.cases;
    let report = json!({
        "command": "fuzz",
        "suite": params.suite.name(),
        "seed": params.seed,
        "cases": params.cases,
        "n": params.n,
        "d": params.d,
        "results": results,
        "summary": {"pass": passed, "fail": params.cases - passed},
    });
    (report, all_passed)
}

fn run_case(params: &FuzzParams, case: u64) -> Result<Value, String> {
    let mut rng = case_rng(params.seed, case);
    let n = params.n;
    let d = params.d.max(1);
    match params.suite {
        Suite::Ring => {
            // Inhomogeneous sparse polynomials exercise the ring axioms,
            // the exact-division roundtrip and the Leibniz rule.
            let mix = |rng: &mut randgen::ChaCha8Rng| {
                let high = randgen::polynomial(rng, n, d, 3);
                let low = randgen::polynomial(rng, n, d.saturating_sub(1), 2);
                &high + &low
            };
            let f = mix(&mut rng);
            let g = mix(&mut rng);
            let h = mix(&mut rng);
            if &(&f + &g) + &h != &f + &(&g + &h) || &f + &g != &g + &f {
                return Err("addition axioms failed".into());
            }
            if &(&f * &g) * &h != &f * &(&g * &h) || &f * &g != &g * &f {
                return Err("multiplication axioms failed".into());
            }
            if &f * &(&g + &h) != &(&f * &g) + &(&f * &h) {
                return Err("distributivity failed".into());
            }
            if !g.is_zero() && (&f * &g).exact_divide(&g).map_err(|e| e.to_string())? != f {
                return Err("exact-division roundtrip failed".into());
            }
            for flat in 0..n * n {
                let v = fident_core::VarIndex::from_flat(flat, n);
                let lhs = (&f * &g).partial_derivative(v);
                let rhs = &(&f.partial_derivative(v) * &g) + &(&f * &g.partial_derivative(v));
                if lhs != rhs {
                    return Err(format!("Leibniz rule failed at {v}"));
                }
            }
            Ok(json!({"terms": [f.num_terms(), g.num_terms(), h.num_terms()]}))
        }
        Suite::StandardForm => {
            let (map, mus) = randgen::standard_form_map(&mut rng, n, d);
            let form = standard_form(&map).map_err(|e| e.to_string())?;
            if form.coefficients() != &mus[..] {
                return Err("standard form did not recover the generating coefficients".into());
            }
            Ok(json!({"nonzero_coefficients":
                mus.iter().filter(|mu| !mu.is_zero()).count()}))
        }
        Suite::Engel => {
            let q = randgen::engel_candidate(&mut rng, n, d, case);
            let y = generic_power(n, 1);
            let first = q.body().commutator(&y).map_err(|e| e.to_string())?;
            let second = first.commutator(&y).map_err(|e| e.to_string())?;
            if first.is_zero() != second.is_zero() {
                return Err("Engel equivalence failed".into());
            }
            let commuting = match engel_check(&q).map_err(|e| e.to_string())? {
                EngelOutcome::Commuting(_) => true,
                EngelOutcome::NotEngel => false,
            };
            if commuting != first.is_zero() {
                return Err("engel_check disagrees with the direct commutator".into());
            }
            Ok(json!({"commuting": commuting}))
        }
        Suite::L2 => {
            let (q, r) = randgen::l2_pair(&mut rng, n, d);
            let p = l2_reduce(&q, &r).map_err(|e| e.to_string())?;
            let y = generic_power(n, 1);
            let reduced = q.body() - &(&y * p.body());
            let second = reduced
                .commutator(&y)
                .and_then(|c| c.commutator(&y))
                .map_err(|e| e.to_string())?;
            if !second.is_zero() {
                return Err("second-order Engel postcondition failed".into());
            }
            // The partial of p must stay homogeneous one degree lower.
            let lowered = partial(&p);
            if p.degree() > 0 && lowered.degree() != p.degree() - 1 {
                return Err("degree bookkeeping failed".into());
            }
            Ok(json!({"p_degree": p.degree()}))
        }
        Suite::Adjugate => {
            let m = 1 + (case % 2) as usize;
            let (q, mu) = randgen::adjugate_instance(&mut rng, n, m, d);
            match adjugate_solve(&q, m).map_err(|e| e.to_string())? {
                AdjugateOutcome::Lambda(lam) => {
                    if lam != mu {
                        return Err("recovered lambda differs from the generating mu".into());
                    }
                    Ok(json!({"m": m, "lambda_degree": lam.degree()}))
                }
                AdjugateOutcome::Zero => {
                    if !mu.is_zero() {
                        return Err("spurious zero outcome".into());
                    }
                    Ok(json!({"m": m, "zero": true}))
                }
            }
        }
        Suite::Decompose => {
            let zero_lambda = case.is_multiple_of(3);
            let (qs, truth) = randgen::identity_instance(&mut rng, n, 1, d, zero_lambda);
            let fid = fi_decompose(&qs).map_err(|e| e.to_string())?;
            if fid.lambda() != &truth.lambda {
                return Err("lambda differs from the generating value".into());
            }
            let rebuilt = fid.reconstruct();
            for (i, q) in qs.iter().enumerate() {
                if &rebuilt[i] != q.body() {
                    return Err(format!("reconstruction differs on q_{i}"));
                }
            }
            let oracle = fi_decompose_oracle(&qs).map_err(|e| e.to_string())?;
            if oracle.lambda() != &truth.lambda {
                return Err("oracle lambda differs from the generating value".into());
            }
            Ok(json!({"case_kind": if zero_lambda { "a" } else { "b" }}))
        }
    }
}
