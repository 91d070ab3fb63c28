//! Acceptance gate. Every criterion is an exact identity; there is no
//! tolerance anywhere. Runs without the libtest harness so that each
//! criterion reports exactly one PASS/FAIL line.

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::Value as Json;

use gossez_core::certificates::{extremize_truncated, quad_objective};
use gossez_core::exact::{int, rat};
use gossez_core::operators::apply_a_in_c;
use gossez_core::oracle::{self, QuadraticSup};
use gossez_core::sampling::Sampler;
use gossez_core::{
    apply_a, apply_g, closure_membership, extremize, inverse_type_d_certificate, pair_l1_c, solve_a,
    trunc_matrix, type_d_gap, EvConstSeq, FinSeq, LimFunctional, Linear, Membership, QuadOutcome, Rat, Sense,
    Verdict,
};

const SEED: u64 = 0xACCE97;
const SAMPLES: usize = 500;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn sampler(stream: u64) -> Sampler {
    Sampler::new(SEED, stream, 12, 10)
}

fn e() -> EvConstSeq {
    EvConstSeq::ones()
}

fn beta_reproduction() -> Outcome {
    let start = Instant::now();
    let report = inverse_type_d_certificate(&e(), &LimFunctional::limit(int(1)));
    let took = within(Duration::from_secs(1), start)?;
    let QuadOutcome::Finite { value, witness } = &report.beta else {
        return Err(format!("beta is {}", report.beta));
    };
    ensure(*value == rat(1, 4), || format!("beta = {value}"))?;
    ensure(*witness == FinSeq::scaled_delta(1, rat(1, 2)), || format!("witness = {witness}"))?;
    Ok(format!("beta = {value} at {witness} in {took:?}"))
}

fn failure_verdict() -> Outcome {
    let report = inverse_type_d_certificate(&e(), &LimFunctional::limit(int(1)));
    ensure(report.pairing == int(1), || format!("pairing = {}", report.pairing))?;
    ensure(report.verdict == Verdict::TypeDFails, || format!("verdict = {}", report.verdict))?;
    Ok(format!("pairing = {}, verdict = {}", report.pairing, report.verdict))
}

fn criterion_for_t() -> Outcome {
    let mut s = sampler(3);
    let mut unbounded = 0;
    for case in 0..SAMPLES {
        let xstar = s.finseq();
        let xss = if case % 4 == 0 {
            // cancels the non-constant part of the reduced linear term, so the sup is finite
            &(&apply_g(&xstar) - &EvConstSeq::constant(xstar.sum())) + &EvConstSeq::constant(s.rat())
        } else {
            s.evconst()
        };
        let gap = type_d_gap(&xstar, &xss);
        ensure(gap.criterion_holds, || format!("case {case}: x* = {xstar}, x** = {xss}: {gap}"))?;
        // Independent of the reported flag: the outcome itself must dominate.
        match &gap.outcome {
            QuadOutcome::Finite { value, .. } => {
                let pairing = pair_l1_c(&xstar, &xss);
                ensure(*value >= pairing, || format!("case {case}: sup {value} < pairing {pairing}"))?;
            }
            QuadOutcome::Unbounded { .. } => unbounded += 1,
        }
    }
    Ok(format!("{SAMPLES} pairs hold ({unbounded} unbounded)"))
}

/// `⟨x* − y*, x** − A y*⟩` from the operator formula, bypassing the
/// certificate code.
fn closure_value(xss: &EvConstSeq, xstar: &FinSeq, ystar: &FinSeq) -> Rat {
    pair_l1_c(&(xstar - ystar), &(xss - &apply_a_in_c(ystar)))
}

fn extension_adds_nothing() -> Outcome {
    let mut s = sampler(4);
    for case in 0..SAMPLES {
        let xstar = s.finseq();
        let xss = apply_a(&xstar).to_evconst();
        let m = closure_membership(&xss, &xstar);
        ensure(m.is_member(), || format!("graph point {case}: (A x*, x*) with x* = {xstar}: {m}"))?;
    }
    let mut shifted = 0;
    for case in 0..SAMPLES {
        let xstar = s.finseq();
        let eps = s.nonzero_rat();
        let perturbation = if case % 2 == 0 {
            shifted += 1;
            EvConstSeq::constant(eps)
        } else {
            s.nonzero_finseq().to_evconst()
        };
        let xss = &apply_a(&xstar).to_evconst() + &perturbation;
        match closure_membership(&xss, &xstar) {
            Membership::Member => return Err(format!("perturbation {case}: x** = {xss}, x* = {xstar} is a member")),
            Membership::Violation { witness_ystar, value } => {
                let direct = closure_value(&xss, &xstar, &witness_ystar);
                ensure(direct == value, || format!("perturbation {case}: reported {value}, direct {direct}"))?;
                ensure(direct.is_negative(), || format!("perturbation {case}: q = {direct} is not negative"))?;
            }
        }
    }
    Ok(format!(
        "{SAMPLES} graph points are members, {SAMPLES} perturbations ({shifted} tail shifts) are violations"
    ))
}

fn operator_identities() -> Outcome {
    let mut s = sampler(5);
    for case in 0..SAMPLES {
        let x = s.finseq();
        let y = s.finseq();
        let (gx, gy) = (apply_g(&x), apply_g(&y));
        let (lhs, rhs) = (pair_l1_c(&y, &gx), -pair_l1_c(&x, &gy));
        ensure(lhs == rhs, || format!("case {case}: <y,Gx> = {lhs}, -<x,Gy> = {rhs}"))?;
        ensure(pair_l1_c(&x, &gx).is_zero(), || format!("case {case}: <x,Gx> != 0 for {x}"))?;
        ensure(*gx.tail() == -x.sum(), || format!("case {case}: tail(G{x}) = {}", gx.tail()))?;
        let ax = apply_a(&x);
        let quad: Rat = ax.iter().map(|(k, v)| v * x.get(k)).sum();
        ensure(quad == x.sum() * x.sum(), || format!("case {case}: <Ax,x> = {quad} for {x}"))?;
        ensure(solve_a(&ax) == x, || format!("case {case}: solve(A x) != x for {x}"))?;
        ensure(apply_a(&solve_a(&y)) == y, || format!("case {case}: A(solve y) != y for {y}"))?;
    }
    Ok(format!("{SAMPLES} samples: anti-symmetry, tail identity, <Ax,x> = <x,e>^2, both round trips"))
}

fn injectivity_at_scale() -> Outcome {
    let start = Instant::now();
    for n in 1..=100 {
        let m = trunc_matrix(n).map_err(|err| err.to_string())?;
        // Columns must be the truncations of A δ_j.
        for j in 1..=n {
            let col = apply_a(&FinSeq::delta(j));
            for i in 1..=n {
                ensure(*m.get(i, j) == col.get(i), || format!("N={n}: entry ({i},{j}) differs from A"))?;
            }
        }
        let det = oracle::determinant(m.rows());
        ensure(det.is_one(), || format!("det trunc_matrix({n}) = {det}"))?;
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!("det = 1 for every N <= 100 in {took:?}"))
}

fn oracle_equivalence() -> Outcome {
    let mut s = sampler(7);
    let million = Rat::from_integer(BigInt::from(1_000_000));
    let (mut finite, mut unbounded) = (0, 0);
    for case in 0..SAMPLES {
        let mu = s.rat();
        let w = if case % 3 == 0 { FinSeq::new() } else { s.finseq_within(8) };
        let c = EvConstSeq::compose(mu, &w);
        let sigma = s.positive_rat();
        let n = w.max_index() + 1;
        for sense in [Sense::Max, Sense::Min] {
            let fast = extremize(&c, &sigma, sense).map_err(|err| err.to_string())?;
            let brute = extremize_truncated(&c, &sigma, sense, n);
            match (&fast, &brute) {
                (QuadOutcome::Finite { value, witness }, QuadraticSup::Finite { value: bv, argmax }) => {
                    ensure(value == bv, || format!("case {case} {c}: {value} vs brute force {bv}"))?;
                    let oracle_witness = FinSeq::from_dense(argmax);
                    ensure(*witness == oracle_witness, || format!("case {case}: {witness} vs {oracle_witness}"))?;
                    finite += 1;
                }
                (QuadOutcome::Unbounded { ray }, QuadraticSup::Unbounded) => {
                    let slope = quad_objective(&c, &sigma, sense, ray);
                    ensure(!slope.is_zero(), || format!("case {case}: flat ray {ray}"))?;
                    let q = quad_objective(&c, &sigma, sense, &ray.scaled(&million));
                    ensure(q == &million * &slope, || format!("case {case}: q(10^6 ray) = {q}"))?;
                    unbounded += 1;
                }
                _ => return Err(format!("case {case} {c}: {fast} vs brute force {brute:?}")),
            }
        }
    }
    Ok(format!("{finite} finite and {unbounded} unbounded outcomes agree"))
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gossez"))
        .args(args)
        .output()
        .map_err(|err| err.to_string())?;
    let code = out.status.code().ok_or("terminated by signal")?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn end_to_end() -> Outcome {
    let (code, stdout) = run_cli(&["verify-paper", "--format", "machine"])?;
    ensure(code == 0, || format!("correct build exited {code}"))?;
    let doc: Json = serde_json::from_str(&stdout).map_err(|err| err.to_string())?;
    let cert = &doc["certificate"];
    ensure(cert["beta"]["value"] == "1/4" && cert["pairing"] == "1", || format!("certificate {cert}"))?;
    for mutation in ["g-sign-flip", "a-drops-rank-one", "non-strict-verdict"] {
        let (code, _) = run_cli(&["verify-paper", "--mutate", mutation])?;
        ensure(code == 1, || format!("mutation {mutation} exited {code}"))?;
    }
    Ok("exit 0 on the correct build, exit 1 under each of 3 mutations".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 beta reproduction", beta_reproduction),
        ("2 failure verdict", failure_verdict),
        ("3 type (D) criterion for T", criterion_for_t),
        ("4 extension adds nothing", extension_adds_nothing),
        ("5 operator identities", operator_identities),
        ("6 injectivity at scale", injectivity_at_scale),
        ("7 oracle equivalence", oracle_equivalence),
        ("8 end to end", end_to_end),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
