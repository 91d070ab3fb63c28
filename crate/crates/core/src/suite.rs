//! Seeded property suites and the end-to-end verification run.
//!
//! Each property draws its inputs from its own stream of the configured
//! seed, so results do not depend on scheduling. A failing input is shrunk
//! greedily before it is reported.

use std::fmt::Write as _;
use std::thread;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value as Json};

use crate::certificates::{
    closure_membership_with, closure_objective, counterexample_pipeline_with, extremize, extremize_truncated,
    inverse_type_d_certificate_with, kernel_truncation, quad_objective, type_d_gap_with, Membership, QuadOutcome,
    Sense, Verdict, INJECTIVITY_DIMENSION,
};
use crate::exact::{pair_c_functional, pair_l1_c, EvConstSeq, FinSeq, LimFunctional, Linear, Rat};
use crate::expr::{self, Expr, Func};
use crate::format::{cert_json, cert_text, evconst_json, finseq_json, limfunc_json};
use crate::kernel::Kernel;
use crate::operators::{apply_g, invert_a_recursion, trunc_matrix};
use crate::oracle::{self, QuadraticSup};
use crate::sampling::Sampler;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Machine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub sample_count: usize,
    pub max_support: usize,
    pub max_magnitude: u64,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0xD15EA5E,
            sample_count: 500,
            max_support: 12,
            max_magnitude: 10,
            output_format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.sample_count == 0 {
            return Err("sample count must be positive".into());
        }
        if self.max_support == 0 {
            return Err("max support must be positive".into());
        }
        if self.max_magnitude == 0 {
            return Err("max magnitude must be positive".into());
        }
        Ok(())
    }

    fn json(&self) -> Json {
        json!({
            "seed": self.seed,
            "samples": self.sample_count,
            "max_support": self.max_support,
            "max_magnitude": self.max_magnitude,
        })
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: Vec<(String, String)>,
    /// Shrunk failing input, as a JSON document.
    pub counterexample: Option<Json>,
}

impl Check {
    fn new(name: &str, passed: bool, details: Vec<(String, String)>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            details,
            counterexample: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub certificate: Option<crate::certificates::CertReport>,
    /// Extra requirement on top of all checks passing.
    pub verdict_ok: bool,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdict_ok && self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> Json {
        json!({
            "command": self.command,
            "config": self.config.json(),
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| {
                let details: serde_json::Map<String, Json> =
                    c.details.iter().map(|(k, v)| (k.clone(), Json::String(v.clone()))).collect();
                json!({
                    "name": c.name,
                    "passed": c.passed,
                    "details": details,
                    "counterexample": c.counterexample,
                })
            }).collect::<Vec<_>>(),
            "certificate": self.certificate.as_ref().map(cert_json),
        })
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "{}  seed={:#x} samples={} max-support={} max-magnitude={}\n\n",
            self.command, c.seed, c.sample_count, c.max_support, c.max_magnitude
        );
        let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
        for check in &self.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            let details: Vec<String> = check.details.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let pad = width - check.name.chars().count();
            let _ = writeln!(out, "{status}  {}{}  {}", check.name, " ".repeat(pad), details.join(" "));
            if let Some(cx) = &check.counterexample {
                let _ = writeln!(out, "      counterexample: {cx}");
            }
        }
        if let Some(cert) = &self.certificate {
            out.push_str("\ncertificate\n");
            for line in cert_text(cert).lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(
            out,
            "\nresult: {} ({passed}/{} checks passed)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len()
        );
        out
    }

    pub fn render(&self) -> String {
        match self.config.output_format {
            OutputFormat::Text => self.to_text(),
            OutputFormat::Machine => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serialisable");
                s.push('\n');
                s
            }
        }
    }
}

/// One generated input of a property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sample {
    Rat(Rat),
    Fin(FinSeq),
    Evc(EvConstSeq),
    Lim(LimFunctional),
    Src(String),
}

impl Sample {
    fn json(&self) -> Json {
        match self {
            Sample::Rat(r) => json!({ "rat": r.to_string() }),
            Sample::Fin(x) => json!({ "finseq": finseq_json(x) }),
            Sample::Evc(y) => json!({ "evconst": evconst_json(y) }),
            Sample::Lim(phi) => json!({ "limfunc": limfunc_json(phi) }),
            Sample::Src(s) => json!({ "source": s }),
        }
    }

    fn rat(&self) -> &Rat {
        match self {
            Sample::Rat(r) => r,
            other => panic!("expected a rational sample, got {other:?}"),
        }
    }

    fn fin(&self) -> &FinSeq {
        match self {
            Sample::Fin(x) => x,
            other => panic!("expected a FinSeq sample, got {other:?}"),
        }
    }

    fn evc(&self) -> &EvConstSeq {
        match self {
            Sample::Evc(y) => y,
            other => panic!("expected an EvConstSeq sample, got {other:?}"),
        }
    }

    fn lim(&self) -> &LimFunctional {
        match self {
            Sample::Lim(phi) => phi,
            other => panic!("expected a LimFunctional sample, got {other:?}"),
        }
    }

    fn shrink_candidates(&self) -> Vec<Sample> {
        match self {
            Sample::Rat(r) => simpler_rats(r).into_iter().map(Sample::Rat).collect(),
            Sample::Fin(x) => simpler_finseqs(x).into_iter().map(Sample::Fin).collect(),
            Sample::Evc(y) => {
                let (mu, w) = y.decompose();
                let mut out: Vec<Sample> = simpler_finseqs(&w)
                    .into_iter()
                    .map(|w| Sample::Evc(EvConstSeq::compose(mu.clone(), &w)))
                    .collect();
                out.extend(simpler_rats(&mu).into_iter().map(|m| Sample::Evc(EvConstSeq::compose(m, &w))));
                out
            }
            Sample::Lim(phi) => {
                let mut out: Vec<Sample> = simpler_finseqs(&phi.abs_part)
                    .into_iter()
                    .map(|a| Sample::Lim(LimFunctional::new(a, phi.lim_coeff.clone())))
                    .collect();
                out.extend(
                    simpler_rats(&phi.lim_coeff)
                        .into_iter()
                        .map(|l| Sample::Lim(LimFunctional::new(phi.abs_part.clone(), l))),
                );
                out
            }
            Sample::Src(_) => Vec::new(),
        }
    }
}

fn simpler_rats(r: &Rat) -> Vec<Rat> {
    let mut out = Vec::new();
    if !r.is_zero() {
        out.push(Rat::zero());
    }
    if r.abs() != Rat::one() && !r.is_zero() {
        out.push(if r.is_negative() { -Rat::one() } else { Rat::one() });
    }
    if !r.is_integer() {
        let t = r.trunc();
        if !t.is_zero() {
            out.push(t);
        }
    }
    out
}

fn simpler_finseqs(x: &FinSeq) -> Vec<FinSeq> {
    let mut out = Vec::new();
    for k in x.support() {
        let dropped = x.plus(&FinSeq::scaled_delta(k, -x.get(k)));
        out.push(dropped);
    }
    for (k, v) in x.iter() {
        for s in simpler_rats(v) {
            if !s.is_zero() {
                out.push(x.plus(&FinSeq::scaled_delta(k, s - v)));
            }
        }
    }
    out
}

type CheckFn = fn(&dyn Kernel, &[Sample]) -> Result<(), String>;
type GenFn = fn(&mut Sampler) -> Vec<Sample>;

/// A named invariant over generated inputs. Inputs outside the property's
/// domain (which shrinking can produce) pass vacuously.
pub struct Property {
    pub name: &'static str,
    generate: GenFn,
    check: CheckFn,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c0_of(kernel: &dyn Kernel, x: &FinSeq) -> Result<FinSeq, String> {
    let ax = kernel.apply_a(x);
    ax.to_finseq().ok_or_else(|| format!("A x = {ax} has nonzero tail"))
}

// Direct evaluation of (Gx)_n from the two partial sums.
fn g_entry_direct(x: &FinSeq, n: usize) -> Rat {
    let mut v = Rat::zero();
    for (k, xk) in x.iter() {
        if k > n {
            v += xk;
        } else if k < n {
            v -= xk;
        }
    }
    v
}

fn random_expr(s: &mut Sampler, depth: u32) -> Expr {
    let leaf = depth == 0 || s.index(3) == 1;
    if leaf {
        return match s.index(7) {
            1 => Expr::Rat(s.rat()),
            2 => Expr::Fin(s.finseq_within(4)),
            3 => Expr::Evc(s.evconst()),
            4 => Expr::Delta(s.index(9)),
            5 => Expr::Lim(s.rat()),
            6 => Expr::Limf(s.finseq_within(3), s.rat()),
            _ => Expr::Var("e".into()),
        };
    }
    let sub = |s: &mut Sampler| Box::new(random_expr(s, depth - 1));
    match s.index(5) {
        1 => Expr::Neg(sub(s)),
        2 => Expr::Add(sub(s), sub(s)),
        3 => Expr::Sub(sub(s), sub(s)),
        4 => Expr::Mul(sub(s), sub(s)),
        _ => {
            let func = Func::ALL[s.index(Func::ALL.len()) - 1];
            let args = (0..func.arity()).map(|_| random_expr(s, depth - 1)).collect();
            Expr::Call(func, args)
        }
    }
}

fn tail_shift_or_general(s: &mut Sampler) -> EvConstSeq {
    loop {
        let d = if s.coin() {
            EvConstSeq::constant(s.nonzero_rat())
        } else {
            s.evconst()
        };
        if d != EvConstSeq::zero() {
            return d;
        }
    }
}

/// Linear term chosen so that the certificate's reduced term is `μe`.
fn finite_beta_point(s: &mut Sampler) -> Vec<Sample> {
    let abs = s.finseq();
    let mu = s.rat();
    let xss0 = EvConstSeq::constant(mu - abs.sum()).plus(&apply_g(&abs));
    vec![Sample::Evc(xss0), Sample::Lim(LimFunctional::new(abs, s.rat()))]
}

pub fn properties() -> Vec<Property> {
    vec![
        Property {
            name: "pairing bilinear in l1 argument",
            generate: |s| vec![Sample::Rat(s.rat()), Sample::Rat(s.rat()), Sample::Fin(s.finseq()), Sample::Fin(s.finseq()), Sample::Evc(s.evconst())],
            check: |_, v| {
                let (a, b, x, x2, y) = (v[0].rat(), v[1].rat(), v[2].fin(), v[3].fin(), v[4].evc());
                let lhs = pair_l1_c(&x.scaled(a).plus(&x2.scaled(b)), y);
                let rhs = a * pair_l1_c(x, y) + b * pair_l1_c(x2, y);
                ensure(lhs == rhs, || format!("{lhs} != {rhs}"))
            },
        },
        Property {
            name: "pairing bilinear in c argument",
            generate: |s| vec![Sample::Rat(s.rat()), Sample::Rat(s.rat()), Sample::Fin(s.finseq()), Sample::Evc(s.evconst()), Sample::Evc(s.evconst())],
            check: |_, v| {
                let (a, b, x, y, y2) = (v[0].rat(), v[1].rat(), v[2].fin(), v[3].evc(), v[4].evc());
                let lhs = pair_l1_c(x, &y.scaled(a).plus(&y2.scaled(b)));
                let rhs = a * pair_l1_c(x, y) + b * pair_l1_c(x, y2);
                ensure(lhs == rhs, || format!("{lhs} != {rhs}"))
            },
        },
        Property {
            name: "decompose round trip",
            generate: |s| vec![Sample::Evc(s.evconst())],
            check: |_, v| {
                let y = v[0].evc();
                let (mu, w) = y.decompose();
                let back = EvConstSeq::constant(mu.clone()).plus(&w.to_evconst());
                ensure(&back == y && &mu == y.tail(), || format!("mu e + w = {back}"))
            },
        },
        Property {
            name: "Holder bound",
            generate: |s| vec![Sample::Fin(s.finseq()), Sample::Evc(s.evconst())],
            check: |_, v| {
                let (x, y) = (v[0].fin(), v[1].evc());
                let p = pair_l1_c(x, y).abs();
                let bound = x.l1_norm() * y.sup_norm();
                ensure(p <= bound, || format!("|<x,y>| = {p} > {bound}"))
            },
        },
        Property {
            name: "functional linear in c argument",
            generate: |s| vec![Sample::Rat(s.rat()), Sample::Rat(s.rat()), Sample::Evc(s.evconst()), Sample::Evc(s.evconst()), Sample::Lim(s.limfunc())],
            check: |_, v| {
                let (a, b, y, y2, phi) = (v[0].rat(), v[1].rat(), v[2].evc(), v[3].evc(), v[4].lim());
                let lhs = pair_c_functional(&y.scaled(a).plus(&y2.scaled(b)), phi);
                let rhs = a * pair_c_functional(y, phi) + b * pair_c_functional(y2, phi);
                ensure(lhs == rhs, || format!("{lhs} != {rhs}"))
            },
        },
        Property {
            name: "limit functional annihilates c0",
            generate: |s| vec![Sample::Rat(s.rat()), Sample::Fin(s.finseq())],
            check: |_, v| {
                let value = pair_c_functional(&v[1].fin().to_evconst(), &LimFunctional::limit(v[0].rat().clone()));
                ensure(value.is_zero(), || format!("value {value}"))
            },
        },
        Property {
            name: "G anti-symmetry",
            generate: |s| vec![Sample::Fin(s.finseq()), Sample::Fin(s.finseq())],
            check: |k, v| {
                let (x, y) = (v[0].fin(), v[1].fin());
                let lhs = pair_l1_c(y, &k.apply_g(x));
                let rhs = -pair_l1_c(x, &k.apply_g(y));
                ensure(lhs == rhs, || format!("<y,Gx> = {lhs}, -<x,Gy> = {rhs}"))?;
                // the skew form itself: <y,Gx> = Σ_{n<k} (y_n x_k − x_n y_k)
                let mut form = Rat::zero();
                for (n, yn) in y.iter() {
                    for (m, xm) in x.iter() {
                        match n.cmp(&m) {
                            std::cmp::Ordering::Less => form += yn * xm,
                            std::cmp::Ordering::Greater => form -= yn * xm,
                            std::cmp::Ordering::Equal => {}
                        }
                    }
                }
                ensure(lhs == form, || format!("<y,Gx> = {lhs} but the skew form gives {form}"))
            },
        },
        Property {
            name: "G pointwise definition",
            generate: |s| vec![Sample::Fin(s.finseq())],
            check: |k, v| {
                let x = v[0].fin();
                let g = k.apply_g(x);
                for n in 1..=x.max_index() + 2 {
                    let direct = g_entry_direct(x, n);
                    ensure(g.get(n) == direct, || format!("(Gx)_{n} = {} but the sums give {direct}", g.get(n)))?;
                }
                ensure(g.head().len() <= x.max_index(), || format!("head of {g} too long"))
            },
        },
        Property {
            name: "G tail limit",
            generate: |s| vec![Sample::Fin(s.finseq())],
            check: |k, v| {
                let x = v[0].fin();
                let g = k.apply_g(x);
                let expected = -pair_l1_c(x, &EvConstSeq::ones());
                ensure(g.tail() == &expected, || format!("lim Gx = {} != -<x,e> = {expected}", g.tail()))
            },
        },
        Property {
            name: "A maps into c0",
            generate: |s| vec![Sample::Fin(s.finseq())],
            check: |k, v| {
                let x = v[0].fin();
                let ax = c0_of(k, x)?;
                ensure(ax.max_index() <= x.max_index(), || format!("support of {ax} exceeds that of x"))
            },
        },
        Property {
            name: "quadratic form identity",
            generate: |s| vec![Sample::Fin(s.finseq())],
            check: |k, v| {
                let x = v[0].fin();
                let form = pair_l1_c(x, &k.apply_a(x));
                let t = x.sum();
                ensure(form == &t * &t, || format!("<Ax,x> = {form}, <x,e>^2 = {}", &t * &t))
            },
        },
        Property {
            name: "monotonicity gap identity",
            generate: |s| vec![Sample::Fin(s.finseq()), Sample::Fin(s.finseq())],
            check: |k, v| {
                let (x, y) = (v[0].fin(), v[1].fin());
                let d = x - y;
                let gap = pair_l1_c(&d, &(&k.apply_a(x) - &k.apply_a(y)));
                let t = d.sum();
                ensure(gap == &t * &t, || format!("gap {gap} != <x-y,e>^2 = {}", &t * &t))
            },
        },
        Property {
            name: "solve after apply",
            generate: |s| vec![Sample::Fin(s.finseq())],
            check: |k, v| {
                let x = v[0].fin();
                let back = invert_a_recursion(&c0_of(k, x)?);
                ensure(&back == x, || format!("solve(A x) = {back}"))
            },
        },
        Property {
            name: "apply after solve",
            generate: |s| vec![Sample::Fin(s.finseq())],
            check: |k, v| {
                let y = v[0].fin();
                let ay = k.apply_a(&invert_a_recursion(y));
                ensure(ay == y.to_evconst(), || format!("A(solve y) = {ay}"))
            },
        },
        Property {
            name: "A matches truncation matrix",
            generate: |s| vec![Sample::Fin(s.nonzero_finseq())],
            check: |k, v| {
                let x = v[0].fin();
                if x.is_zero() {
                    return Ok(());
                }
                let m = trunc_matrix(x.max_index()).expect("n >= 1");
                let by_matrix = m.apply(x).to_evconst();
                let ax = k.apply_a(x);
                ensure(by_matrix == ax, || format!("matrix gives {by_matrix}, A gives {ax}"))
            },
        },
        Property {
            name: "solve matches elimination",
            generate: |s| vec![Sample::Fin(s.nonzero_finseq())],
            check: |k, v| {
                let y = v[0].fin();
                if y.is_zero() {
                    return Ok(());
                }
                let n = y.max_index();
                let matrix = kernel_truncation(k, n);
                let by_elim = oracle::solve(&matrix, &y.to_dense(n)).map(|x| FinSeq::from_dense(&x));
                let by_recursion = invert_a_recursion(y);
                ensure(by_elim.as_ref() == Some(&by_recursion), || {
                    format!("elimination gives {by_elim:?}, recursion gives {by_recursion}")
                })
            },
        },
        Property {
            name: "nonlinear monotonicity",
            generate: |s| vec![Sample::Fin(s.finseq()), Sample::Rat(s.rat()), Sample::Fin(s.finseq()), Sample::Rat(s.rat())],
            check: |k, v| {
                let point = |y: &FinSeq, t: &Rat| -> Result<(FinSeq, Rat), String> {
                    let xstar = invert_a_recursion(y);
                    let ax = k.apply_a(&xstar);
                    ensure(ax == y.to_evconst(), || format!("A(x*) = {ax} != y = {y}"))?;
                    Ok((xstar, t * t * t))
                };
                let (y1, t1, y2, t2) = (v[0].fin(), v[1].rat(), v[2].fin(), v[3].rat());
                let (x1, s1) = point(y1, t1)?;
                let (x2, s2) = point(y2, t2)?;
                let dx = &x1 - &x2;
                let pairing = pair_l1_c(&dx, &(y1 - y2).to_evconst()) + (&s1 - &s2) * (t1 - t2);
                let expected = dx.sum() * dx.sum() + (t1 - t2) * (&s1 - &s2);
                ensure(pairing == expected && !pairing.is_negative(), || {
                    format!("pairing {pairing}, expected {expected}")
                })
            },
        },
        Property {
            name: "extremize soundness (max)",
            generate: |s| vec![Sample::Evc(EvConstSeq::constant(s.rat())), Sample::Rat(s.positive_rat()), Sample::Fin(s.finseq())],
            check: |_, v| soundness(v, Sense::Max),
        },
        Property {
            name: "extremize soundness (min)",
            generate: |s| vec![Sample::Evc(EvConstSeq::constant(s.rat())), Sample::Rat(s.positive_rat()), Sample::Fin(s.finseq())],
            check: |_, v| soundness(v, Sense::Min),
        },
        Property {
            name: "extremize unboundedness",
            generate: |s| vec![Sample::Evc(s.evconst()), Sample::Rat(s.positive_rat())],
            check: |_, v| {
                let (c, sigma) = (v[0].evc(), v[1].rat());
                if !sigma.is_positive() {
                    return Ok(());
                }
                for sense in [Sense::Max, Sense::Min] {
                    check_unbounded(c, sigma, sense)?;
                }
                Ok(())
            },
        },
        Property {
            name: "extremize matches truncated quadratic",
            generate: |s| {
                let mu = s.rat();
                let w = s.finseq_within(8);
                vec![Sample::Evc(EvConstSeq::compose(mu, &w)), Sample::Rat(s.positive_rat())]
            },
            check: |_, v| {
                let (c, sigma) = (v[0].evc(), v[1].rat());
                if !sigma.is_positive() {
                    return Ok(());
                }
                let n = c.head().len() + 1;
                for sense in [Sense::Max, Sense::Min] {
                    let closed = extremize(c, sigma, sense).map_err(|e| e.to_string())?;
                    let brute = extremize_truncated(c, sigma, sense, n);
                    let agree = match (&closed, &brute) {
                        (QuadOutcome::Finite { value, .. }, QuadraticSup::Finite { value: b, .. }) => value == b,
                        (QuadOutcome::Unbounded { .. }, QuadraticSup::Unbounded) => true,
                        _ => false,
                    };
                    ensure(agree, || format!("{sense:?}: closed form {closed}, truncated {brute:?}"))?;
                }
                Ok(())
            },
        },
        Property {
            name: "type (D) criterion for T",
            generate: |s| vec![Sample::Fin(s.finseq()), Sample::Evc(s.evconst())],
            check: |k, v| {
                let (xstar, xss) = (v[0].fin(), v[1].evc());
                let report = type_d_gap_with(k, xstar, xss);
                ensure(report.criterion_holds, || format!("criterion fails: {report}"))?;
                // Evaluate the unreduced objective on graph points.
                let direct = |ystar: &FinSeq| {
                    let ay = k.apply_a(ystar);
                    pair_l1_c(xstar, &ay) + pair_l1_c(ystar, xss) - pair_l1_c(ystar, &ay)
                };
                match &report.outcome {
                    QuadOutcome::Finite { value, witness } => {
                        let d = direct(witness);
                        ensure(&d == value, || format!("objective at witness {d} != {value}"))
                    }
                    QuadOutcome::Unbounded { ray } => {
                        let s = Rat::from_integer(BigInt::from(1_000_000));
                        let up = direct(&ray.scaled(&s)).max(direct(&ray.scaled(&-&s)));
                        ensure(up > report.pairing, || format!("objective along ray only reaches {up}"))
                    }
                }
            },
        },
        Property {
            name: "graph points are members",
            generate: |s| vec![Sample::Fin(s.finseq())],
            check: |k, v| {
                let ystar = v[0].fin();
                let xss = k.apply_a(ystar);
                let m = closure_membership_with(k, &xss, ystar);
                ensure(m.is_member(), || format!("(A y*, y*) reported as {m}"))?;
                let at_self = closure_objective(k, &xss, ystar, ystar);
                ensure(at_self.is_zero(), || format!("q(y*) = {at_self}"))
            },
        },
        Property {
            name: "perturbed points are violations",
            generate: |s| vec![Sample::Fin(s.finseq()), Sample::Evc(tail_shift_or_general(s))],
            check: |k, v| {
                let (xstar, shift) = (v[0].fin(), v[1].evc());
                if shift == &EvConstSeq::zero() {
                    return Ok(());
                }
                let xss = k.apply_a(xstar).plus(shift);
                match closure_membership_with(k, &xss, xstar) {
                    Membership::Member => Err(format!("x** = A x* + {shift} reported as member")),
                    Membership::Violation { witness_ystar, value } => {
                        let direct = closure_objective(k, &xss, xstar, &witness_ystar);
                        ensure(value.is_negative() && direct == value, || {
                            format!("witness {witness_ystar} has value {value}, direct {direct}")
                        })
                    }
                }
            },
        },
        Property {
            name: "membership iff graph point",
            generate: |s| {
                let xstar = s.finseq();
                let xss = if s.coin() { crate::operators::apply_a(&xstar).to_evconst() } else { s.evconst() };
                vec![Sample::Fin(xstar), Sample::Evc(xss)]
            },
            check: |k, v| {
                let (xstar, xss) = (v[0].fin(), v[1].evc());
                let on_graph = &k.apply_a(xstar) == xss;
                let m = closure_membership_with(k, xss, xstar);
                ensure(m.is_member() == on_graph, || format!("on graph: {on_graph}, membership: {m}"))
            },
        },
        Property {
            name: "certificate verdict threshold",
            generate: finite_beta_point,
            check: |k, v| {
                let (xss0, phi) = (v[0].evc(), v[1].lim());
                let report = inverse_type_d_certificate_with(k, xss0, phi);
                let expected = match report.beta.value() {
                    Some(beta) if beta < &report.pairing => Verdict::TypeDFails,
                    _ => Verdict::TypeDHolds,
                };
                ensure(report.verdict == expected, || {
                    format!("beta {}, pairing {}, verdict {}", report.beta, report.pairing, report.verdict)
                })?;
                let (Some(beta), false) = (report.beta.value(), xss0.tail().is_zero()) else {
                    return Ok(());
                };
                // Move the limit coefficient so the pairing sits at β, then just above it.
                let at = |target: &Rat| {
                    let lim = &phi.lim_coeff + (target - &report.pairing) / xss0.tail();
                    let moved = LimFunctional::new(phi.abs_part.clone(), lim);
                    inverse_type_d_certificate_with(k, xss0, &moved).verdict
                };
                let above = beta + Rat::new(BigInt::one(), BigInt::from(1_000_000));
                ensure(at(beta) == Verdict::TypeDHolds, || format!("pairing = beta = {beta} reported as failure"))?;
                ensure(at(&above) == Verdict::TypeDFails, || format!("pairing {above} > beta not reported as failure"))
            },
        },
        Property {
            name: "parser round trip",
            generate: |s| vec![Sample::Src(random_expr(s, 3).to_string())],
            check: |_, v| {
                let Sample::Src(src) = &v[0] else { return Ok(()) };
                let e = expr::parse(src).map_err(|err| format!("{src}: {err}"))?;
                let printed = e.to_string();
                let again = expr::parse(&printed).map_err(|err| format!("{printed}: {err}"))?;
                ensure(again == e, || format!("{src} reprinted as {printed}"))
            },
        },
    ]
}

fn soundness(v: &[Sample], sense: Sense) -> Result<(), String> {
    let (c, sigma, x) = (v[0].evc(), v[1].rat(), v[2].fin());
    if !sigma.is_positive() {
        return Ok(());
    }
    match extremize(c, sigma, sense).map_err(|e| e.to_string())? {
        QuadOutcome::Finite { value, witness } => {
            let at_witness = quad_objective(c, sigma, sense, &witness);
            ensure(at_witness == value, || format!("q(witness) = {at_witness} != {value}"))?;
            let q = quad_objective(c, sigma, sense, x);
            let ok = match sense {
                Sense::Max => q <= value,
                Sense::Min => q >= value,
            };
            ensure(ok, || format!("q({x}) = {q} beats the optimum {value}"))
        }
        QuadOutcome::Unbounded { .. } => ensure(!c.decompose().1.is_zero(), || format!("constant {c} reported unbounded")),
    }
}

fn check_unbounded(c: &EvConstSeq, sigma: &Rat, sense: Sense) -> Result<(), String> {
    let outcome = extremize(c, sigma, sense).map_err(|e| e.to_string())?;
    let w_zero = c.decompose().1.is_zero();
    let QuadOutcome::Unbounded { ray } = outcome else {
        return ensure(w_zero, || format!("{c} has a nonconstant part but a finite optimum"));
    };
    ensure(!w_zero, || format!("constant {c} reported unbounded"))?;
    ensure(ray.sum().is_zero(), || format!("<ray, e> != 0 for {ray}"))?;
    let slope = pair_l1_c(&ray, c);
    ensure(!slope.is_zero(), || format!("<ray, c> = 0 for {ray}"))?;
    let s = Rat::from_integer(BigInt::from(1_000_000));
    let q1 = quad_objective(c, sigma, sense, &ray.scaled(&s));
    let q2 = quad_objective(c, sigma, sense, &ray.scaled(&(&s + &s)));
    ensure(q1 == &s * &slope && &q2 - &q1 == &s * &slope, || {
        format!("q(10^6 ray) = {q1}, q(2*10^6 ray) = {q2}, slope {slope}")
    })
}

fn shrink(kernel: &dyn Kernel, check: CheckFn, mut input: Vec<Sample>) -> Vec<Sample> {
    let mut budget = 2000;
    'outer: loop {
        for i in 0..input.len() {
            for cand in input[i].shrink_candidates() {
                budget -= 1;
                if budget == 0 {
                    break 'outer;
                }
                let mut trial = input.clone();
                trial[i] = cand;
                if check(kernel, &trial).is_err() {
                    input = trial;
                    continue 'outer;
                }
            }
        }
        break;
    }
    input
}

fn run_property(kernel: &dyn Kernel, prop: &Property, stream: u64, config: &RunConfig) -> Check {
    let mut sampler = Sampler::new(config.seed, stream, config.max_support, config.max_magnitude);
    for case in 0..config.sample_count {
        let input = (prop.generate)(&mut sampler);
        if let Err(first) = (prop.check)(kernel, &input) {
            let shrunk = shrink(kernel, prop.check, input);
            let message = (prop.check)(kernel, &shrunk).err().unwrap_or(first);
            let mut check = Check::new(
                prop.name,
                false,
                vec![("case".into(), case.to_string()), ("error".into(), message)],
            );
            check.counterexample = Some(Json::Array(shrunk.iter().map(Sample::json).collect()));
            return check;
        }
    }
    Check::new(prop.name, true, vec![("cases".into(), config.sample_count.to_string())])
}

fn run_properties(kernel: &dyn Kernel, config: &RunConfig) -> Vec<Check> {
    let props = properties();
    thread::scope(|scope| {
        let handles: Vec<_> = props
            .iter()
            .enumerate()
            .map(|(i, p)| scope.spawn(move || run_property(kernel, p, i as u64, config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("property thread panicked"))
            .collect()
    })
}

/// Runs every property on `config.sample_count` seeded inputs.
pub fn random_suite(config: &RunConfig, kernel: &dyn Kernel) -> Report {
    Report {
        command: "random-check".into(),
        config: config.clone(),
        checks: run_properties(kernel, config),
        certificate: None,
        verdict_ok: true,
    }
}

fn reference_values(kernel: &dyn Kernel) -> Check {
    let e = EvConstSeq::ones();
    let int = |n: i64| Rat::from_integer(n.into());
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let mut failures = Vec::new();
    let mut expect = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    expect("G delta1", kernel.apply_g(&FinSeq::delta(1)) == EvConstSeq::new(vec![int(0)], int(-1)));
    let x = FinSeq::from_pairs([(1, int(-2)), (2, int(1))]).expect("positive indices");
    expect("A(-2 delta1 + delta2)", kernel.apply_a(&x) == FinSeq::delta(2).to_evconst());
    expect("A(delta1/2)", kernel.apply_a(&FinSeq::scaled_delta(1, half.clone())) == FinSeq::scaled_delta(1, half.clone()).to_evconst());
    expect(
        "sup <x,e> - <x,e>^2",
        extremize(&e, &int(1), Sense::Max).ok()
            == Some(QuadOutcome::Finite {
                value: &half * &half,
                witness: FinSeq::scaled_delta(1, half.clone()),
            }),
    );
    expect("lim e", pair_c_functional(&e, &LimFunctional::limit(int(1))) == int(1));
    let details = if failures.is_empty() {
        vec![("values".into(), "5".into())]
    } else {
        vec![("mismatch".into(), failures.join(", "))]
    };
    Check::new("reference values", failures.is_empty(), details)
}

fn injectivity(kernel: &dyn Kernel) -> Check {
    let matrix = kernel_truncation(kernel, INJECTIVITY_DIMENSION);
    let formula = trunc_matrix(INJECTIVITY_DIMENSION).expect("positive dimension");
    let bad = oracle::leading_principal_minors(&matrix)
        .enumerate()
        .find(|(_, d)| !d.is_one());
    let matches_formula = matrix.as_slice() == formula.rows();
    let mut details = vec![("N".into(), INJECTIVITY_DIMENSION.to_string())];
    if let Some((n, d)) = &bad {
        details.push(("order".into(), (n + 1).to_string()));
        details.push(("determinant".into(), d.to_string()));
    }
    if !matches_formula {
        details.push(("matrix".into(), "differs from the 1/2/0 pattern".into()));
    }
    Check::new("injectivity up to N=100", bad.is_none() && matches_formula, details)
}

fn verdict_strictness(kernel: &dyn Kernel) -> Check {
    let e = EvConstSeq::ones();
    let quarter = Rat::new(BigInt::one(), BigInt::from(4));
    let at = inverse_type_d_certificate_with(kernel, &e, &LimFunctional::limit(quarter.clone())).verdict;
    let above = inverse_type_d_certificate_with(
        kernel,
        &e,
        &LimFunctional::limit(quarter + Rat::new(BigInt::one(), BigInt::from(1_000_000))),
    )
    .verdict;
    Check::new(
        "verdict strictness at the boundary",
        at == Verdict::TypeDHolds && above == Verdict::TypeDFails,
        vec![
            ("pairing=beta".into(), at.to_string()),
            ("pairing>beta".into(), above.to_string()),
        ],
    )
}

/// The counterexample pipeline, fixed reference values, the injectivity
/// and boundary checks, and every property at `config` scale.
pub fn verify_paper(config: &RunConfig, kernel: &dyn Kernel) -> Report {
    let mut checks = vec![reference_values(kernel)];
    let (certificate, pipeline_check) = match counterexample_pipeline_with(kernel) {
        Ok(cert) => {
            let quarter = Rat::new(BigInt::one(), BigInt::from(4));
            let ok = cert.verdict == Verdict::TypeDFails
                && cert.beta.value() == Some(&quarter)
                && cert.pairing == Rat::one();
            let beta = cert.beta.value().map_or("unbounded".to_string(), Rat::to_string);
            let details = vec![
                ("beta".into(), beta),
                ("pairing".into(), cert.pairing.to_string()),
                ("verdict".into(), cert.verdict.to_string()),
            ];
            (Some(cert), Check::new("counterexample pipeline", ok, details))
        }
        Err(err) => (
            None,
            Check::new("counterexample pipeline", false, vec![("error".into(), err.to_string())]),
        ),
    };
    let verdict_ok = certificate.as_ref().is_some_and(|c| c.verdict == Verdict::TypeDFails);
    checks.push(pipeline_check);
    checks.push(injectivity(kernel));
    checks.push(verdict_strictness(kernel));
    checks.extend(run_properties(kernel, config));
    Report {
        command: "verify-paper".into(),
        config: config.clone(),
        checks,
        certificate,
        verdict_ok,
    }
}
