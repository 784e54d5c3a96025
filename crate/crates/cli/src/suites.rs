//! Seeded property suites behind `unorm verify`.
//!
//! Case `i` of a run with seed `s` draws everything from a generator seeded
//! by `(s, i)`, so any failure replays alone with `--case i`.

use std::sync::Arc;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use unorm_analytic::synthetic::random_member;
use unorm_analytic::{
    contradiction_pipeline, determinant_log_check, layer_values, phi_orbit_wedge, wronskian_det, Mode, Outcome, PipelineConfig,
    VectorSeries,
};
use unorm_padic::exec::Exec;
use unorm_padic::linalg::DEFAULT_GUARD;
use unorm_padic::{CyclotomicLayer, FieldElement, Padic, UnramifiedField};
use unorm_phimod::presets::preset;
use unorm_phimod::random::{random_generic, random_module, random_slopes, random_weakly_admissible, spread_weights};
use unorm_phimod::{
    fil1, is_weakly_admissible, max_subspace_slope, n_condition, slope_bound_check, tensor_product, totaro_check, wedge_power,
    FilteredPhiModule,
};
use unorm_series::ops::{d, gamma_action, phi, psi};
use unorm_series::{cyclotomic_evaluate, divide_by_log, log_order, phi_quotient_scalar, rho_norm, LogOrder, LogPolynomial, Tail, TruncatedSeries};

use crate::json::module_value;
use crate::CliError;

pub const SUITES: [&str; 10] =
    ["operators", "norms", "orders", "divisibility", "slopes", "totaro", "admissibility", "tilde", "contradiction", "twist-monotone"];

pub fn default_count(suite: &str) -> usize {
    match suite {
        "operators" => 50,
        "totaro" | "norms" => 100,
        "orders" => 25,
        "contradiction" => 20,
        _ => 50,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub index: usize,
    pub passed: bool,
    /// The generated inputs, enough to rebuild the case by hand.
    pub input: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    pub passed: usize,
    pub cases: Vec<CaseOutcome>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.count
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseOutcome> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

/// Shared parameters of a run. The fields are built once so that their
/// memoized `φ`/`ψ` tables are shared by all cases.
#[derive(Clone, Debug)]
pub struct SeriesParams {
    pub p: u32,
    pub prec: i64,
    pub trunc: usize,
    fields: Vec<Arc<UnramifiedField>>,
}

impl SeriesParams {
    pub fn new(p: u32, prec: i64, trunc: usize) -> Result<Self, CliError> {
        let fields = (1..=2).map(|f| UnramifiedField::with_degree(p, f, prec)).collect::<Result<_, _>>()?;
        Ok(SeriesParams { p, prec, trunc, fields })
    }
}

type CaseFn = fn(&SeriesParams, &mut ChaCha8Rng, usize) -> (String, Result<(), String>);

fn case_fn(suite: &str) -> Option<CaseFn> {
    Some(match suite {
        "operators" => operators,
        "norms" => norms,
        "orders" => orders,
        "divisibility" => divisibility,
        "slopes" => slopes,
        "totaro" => totaro,
        "admissibility" => admissibility,
        "tilde" => tilde,
        "contradiction" => contradiction,
        "twist-monotone" => twist_monotone,
        _ => return None,
    })
}

fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

pub fn run_case(suite: &str, sp: &SeriesParams, seed: u64, index: usize) -> Result<CaseOutcome, CliError> {
    let f = case_fn(suite).ok_or_else(|| CliError::Usage(format!("unknown suite {suite:?}; known: {}", SUITES.join(", "))))?;
    let mut rng = case_rng(seed, index);
    let (input, res) = f(sp, &mut rng, index);
    Ok(match res {
        Ok(()) => CaseOutcome { index, passed: true, input, detail: String::new() },
        Err(detail) => CaseOutcome { index, passed: false, input, detail },
    })
}

pub fn run_suite(suite: &str, sp: &SeriesParams, seed: u64, count: usize, exec: Exec) -> Result<SuiteReport, CliError> {
    case_fn(suite).ok_or_else(|| CliError::Usage(format!("unknown suite {suite:?}; known: {}", SUITES.join(", "))))?;
    let cases: Vec<CaseOutcome> =
        exec.map_range(count, |i| run_case(suite, sp, seed, i)).into_iter().collect::<Result<_, _>>()?;
    let passed = cases.iter().filter(|c| c.passed).count();
    Ok(SuiteReport { suite: suite.to_string(), seed, count, passed, cases })
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn field(sp: &SeriesParams, f: usize) -> Result<Arc<UnramifiedField>, String> {
    sp.fields.get(f - 1).cloned().ok_or_else(|| format!("no field of degree {f}"))
}

fn element(k: &Arc<UnramifiedField>, rng: &mut ChaCha8Rng, bound: i64) -> FieldElement {
    let c = (0..k.degree()).map(|_| Padic::from_i64(k.p(), rng.gen_range(-bound..=bound), k.prec())).collect();
    k.from_coords(c).unwrap()
}

/// Integral coefficients up to degree `n`, bounded tail.
fn random_series(k: &Arc<UnramifiedField>, n: usize, rng: &mut ChaCha8Rng) -> TruncatedSeries {
    let c = (0..=n).map(|_| element(k, rng, 10_000)).collect();
    TruncatedSeries::bounded(k, c, 0, 0).unwrap()
}

fn describe(s: &TruncatedSeries) -> String {
    serde_json::to_string(&crate::json::series_value(s)).unwrap()
}

fn describe_module(m: &FilteredPhiModule) -> String {
    serde_json::to_string(&module_value(m)).unwrap()
}

fn mismatch(what: &str, a: &TruncatedSeries, b: &TruncatedSeries) -> String {
    match a.first_difference(b) {
        Some(i) => format!("{what}: coefficient {i} differs ({:?} vs {:?})", a.coeff(i), b.coeff(i)),
        None => format!("{what}: truncations {} and {} disagree", a.trunc(), b.trunc()),
    }
}

fn operators(sp: &SeriesParams, rng: &mut ChaCha8Rng, index: usize) -> (String, Result<(), String>) {
    let f_deg = 1 + index % 2;
    let k = match field(sp, f_deg) {
        Ok(k) => k,
        Err(e) => return (String::new(), Err(e)),
    };
    let f = random_series(&k, sp.trunc, rng);
    let unit = loop {
        let u: i64 = rng.gen_range(1..100_000);
        if u % sp.p as i64 != 0 {
            break u;
        }
    };
    let input = format!("f = {}, c = {unit}", describe(&f));
    let run = || -> Result<(), String> {
        let p = k.exact_int(sp.p as i128);
        let phi_f = phi(&f);
        let back = psi(&phi_f).map_err(e2s)?;
        check(back.trunc() >= f.trunc() && back.truncate(f.trunc()).eq_at(&f), || mismatch("ψφf = f", &back, &f))?;
        let df = d(&f).map_err(e2s)?;
        let lhs = d(&phi_f).map_err(e2s)?;
        let rhs = phi(&df).scale(&p);
        check(lhs.eq_at(&rhs), || mismatch("Dφ = pφD", &lhs, &rhs))?;
        let lhs = psi(&df).map_err(e2s)?;
        let rhs = d(&psi(&f).map_err(e2s)?).map_err(e2s)?.scale(&p);
        check(lhs.eq_at(&rhs), || mismatch("ψD = pDψ", &lhs, &rhs))?;
        let c = Padic::from_i64(sp.p, unit, sp.prec);
        let lhs = d(&gamma_action(&f, &c).map_err(e2s)?).map_err(e2s)?;
        let rhs = gamma_action(&df, &c).map_err(e2s)?.scale(&k.from_padic(c));
        check(lhs.eq_at(&rhs), || mismatch("Dγ_c = cγ_cD", &lhs, &rhs))
    };
    (input, run())
}

/// Coefficients with valuations in `-b..`, the lowest attained at `x^0`.
fn valued_series(k: &Arc<UnramifiedField>, n: usize, b: i64, rng: &mut ChaCha8Rng) -> TruncatedSeries {
    let p = k.p() as i64;
    let c: Vec<FieldElement> = (0..=n)
        .map(|i| {
            let shift = if i == 0 { -b } else { rng.gen_range(-b..=2) };
            let mut u = rng.gen_range(1..1000);
            if u % p == 0 {
                u += 1;
            }
            let u = if rng.gen_bool(0.5) { -u } else { u };
            k.from_i64(u).shift(shift)
        })
        .collect();
    TruncatedSeries::bounded(k, c, b, 0).unwrap()
}

fn norms(sp: &SeriesParams, rng: &mut ChaCha8Rng, _index: usize) -> (String, Result<(), String>) {
    let k = match field(sp, 1) {
        Ok(k) => k,
        Err(e) => return (String::new(), Err(e)),
    };
    let n = 40;
    let (b1, b2) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
    let f = valued_series(&k, n, b1, rng);
    let g = valued_series(&k, n, b2, rng);
    let input = format!("f = {}, g = {}", describe(&f), describe(&g));
    let run = || -> Result<(), String> {
        let fg = f.mul(&g);
        for r in 1..=2u32 {
            let (a, b, c) = (rho_norm(&f, r).map_err(e2s)?, rho_norm(&g, r).map_err(e2s)?, rho_norm(&fg, r).map_err(e2s)?);
            check(c.value == a.value + b.value, || format!("‖fg‖ at ρ_{r}: {} != {} + {}", c.value, a.value, b.value))?;
            let up = rho_norm(&phi(&f), r + 1).map_err(e2s)?;
            check(up.value == a.value, || format!("‖φf‖ at ρ_{}: {} != ‖f‖ at ρ_{r}: {}", r + 1, up.value, a.value))?;
        }
        Ok(())
    };
    (input, run())
}

fn orders(sp: &SeriesParams, rng: &mut ChaCha8Rng, index: usize) -> (String, Result<(), String>) {
    let k = match field(sp, 2) {
        Ok(k) => k,
        Err(e) => return (String::new(), Err(e)),
    };
    let n = 30;
    // c2 with unit constant term; c1 = κ·c2 so that μ is a constant.
    let mut c2 = random_series(&k, n, rng);
    let mut c = c2.coeffs().to_vec();
    c[0] = &k.one() + &element(&k, rng, 1000).shift(1);
    c2 = TruncatedSeries::bounded(&k, c, 0, 0).unwrap();
    let kappa = loop {
        let x = element(&k, rng, 1000).shift(rng.gen_range(-2..=2));
        if x.val().is_some() {
            break x;
        }
    };
    let c1 = c2.scale(&kappa);
    let (a, b) = (rng.gen_range(0..=4u32), rng.gen_range(0..=4u32));
    let input = format!("c2 = {}, κ = {:?}, a = {a}, b = {b} (case {index})", describe(&c2), kappa);
    let run = || -> Result<(), String> {
        let mu = phi_quotient_scalar(&c1, &c2, a as i64 - b as i64).map_err(e2s)?;
        let ord = Rational64::from(mu.val().ok_or("μ indistinguishable from zero")?);
        let f = LogPolynomial::new([(a, c1.clone())]).map_err(e2s)?;
        let g = LogPolynomial::new([(b, c2.clone())]).map_err(e2s)?;
        let (of, og) = (f.growth_order().map_err(e2s)?, g.growth_order().map_err(e2s)?);
        check(of == ord + og, || format!("𝔇(f) = {of} but ord μ + 𝔇(g) = {ord} + {og}"))?;
        // 𝔇(log^r) = r on the side.
        let r = (index % 5) as u32;
        let lr = LogPolynomial::new([(r, TruncatedSeries::one(&k))]).map_err(e2s)?;
        check(lr.growth_order().map_err(e2s)? == Rational64::from(r as i64), || format!("𝔇(log^{r}) != {r}"))
    };
    (input, run())
}

fn divisibility(sp: &SeriesParams, rng: &mut ChaCha8Rng, index: usize) -> (String, Result<(), String>) {
    let k = match field(sp, 1) {
        Ok(k) => k,
        Err(e) => return (String::new(), Err(e)),
    };
    let n = 200;
    let r = (index % 4) as u32;
    let layer = match CyclotomicLayer::new(&k, 1) {
        Ok(l) => l,
        Err(e) => return (String::new(), Err(e2s(e))),
    };
    // h bounded polynomial with h(ζ_p - 1) ≠ 0, by rejection.
    let h = loop {
        let deg = rng.gen_range(0..=12);
        let mut c: Vec<FieldElement> = (0..=deg).map(|_| element(&k, rng, 2000)).collect();
        c.resize(n + 1, k.exact_zero());
        let h = TruncatedSeries::polynomial(&k, c);
        let nonzero = cyclotomic_evaluate(&h, &layer).ok().and_then(|e| e.certified_valuation()).is_some();
        if nonzero && h.coeffs()[0].val().is_some() {
            break h;
        }
    };
    let input = format!("h = {}, r = {r}", describe(&h.truncate(12)));
    let run = || -> Result<(), String> {
        let log = TruncatedSeries::log1p(&k, n);
        let f = log.pow(r).mul(&h).with_tail(Tail::Bounded { b: h.coeff_bound(0), r });
        let lo = log_order(&f, 1);
        check(lo == LogOrder::Finite(r), || format!("log_order = {lo:?}, expected {r}"))?;
        let mut g = f.clone();
        for i in 0..r {
            g = divide_by_log(&g, 1).map_err(|e| format!("division {} of {r}: {e}", i + 1))?;
        }
        let want = h.truncate(g.trunc());
        check(g.trunc() >= 12 && g.eq_at(&want), || mismatch("divide_by_log^r(log^r h) = h", &g, &want))
    };
    (input, run())
}

fn slopes(sp: &SeriesParams, rng: &mut ChaCha8Rng, _index: usize) -> (String, Result<(), String>) {
    let k = match field(sp, 1) {
        Ok(k) => k,
        Err(e) => return (String::new(), Err(e)),
    };
    let (d1, d2) = (rng.gen_range(1..=3), rng.gen_range(1..=2));
    let (m1, m2) = match (random_generic(&k, d1, rng), random_generic(&k, d2, rng)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return (String::new(), Err(e2s(e))),
    };
    let input = format!("M1 = {}, M2 = {}", describe_module(&m1), describe_module(&m2));
    let run = || -> Result<(), String> {
        let (th1, tn1) = (m1.t_h(), m1.t_n().map_err(e2s)?);
        let (th2, tn2) = (m2.t_h(), m2.t_n().map_err(e2s)?);
        for (m, tn) in [(&m1, tn1), (&m2, tn2)] {
            let poly = m.newton_slopes().map_err(e2s)?;
            check(poly.t_n() == Rational64::from(tn), || format!("slope sum {} != t_N = {tn}", poly.t_n()))?;
        }
        let top = wedge_power(&m1, d1).map_err(e2s)?;
        check(top.t_h() == th1, || format!("t_H(Λ^d M) = {} != {th1}", top.t_h()))?;
        check(top.t_n().map_err(e2s)? == tn1, || "t_N(Λ^d M) != t_N(M)".into())?;
        let t = tensor_product(&m1, &m2).map_err(e2s)?;
        let (d1, d2) = (d1 as i64, d2 as i64);
        check(t.t_h() == d2 * th1 + d1 * th2, || format!("t_H(M1⊗M2) = {}", t.t_h()))?;
        let tn = t.t_n().map_err(e2s)?;
        check(tn == d2 * tn1 + d1 * tn2, || format!("t_N(M1⊗M2) = {tn}"))?;
        let ts = t.newton_slopes().map_err(e2s)?;
        check(ts.t_n() == Rational64::from(tn), || "tensor slopes do not sum to t_N".into())
    };
    (input, run())
}

fn totaro(sp: &SeriesParams, rng: &mut ChaCha8Rng, _index: usize) -> (String, Result<(), String>) {
    let k = match field(sp, 1) {
        Ok(k) => k,
        Err(e) => return (String::new(), Err(e)),
    };
    let (m1, m2) = match (random_generic(&k, 2, rng), random_generic(&k, 2, rng)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return (String::new(), Err(e2s(e))),
    };
    let input = format!("M1 = {}, M2 = {}", describe_module(&m1), describe_module(&m2));
    let run = || -> Result<(), String> {
        let c1 = max_subspace_slope(&m1).map_err(e2s)?;
        let c2 = max_subspace_slope(&m2).map_err(e2s)?;
        let cert = totaro_check(&m1, &m2, c1, c2).map_err(e2s)?;
        check(cert.holds, || {
            let w = cert.witness_entry().map(|e| format!("t_H = {}, t_N = {}, dim {}", e.t_h, e.t_n, e.dim()));
            format!("slope of M1⊗M2 exceeds {c1} + {c2} on {}", w.unwrap_or_default())
        })
    };
    (input, run())
}

fn admissibility(sp: &SeriesParams, rng: &mut ChaCha8Rng, index: usize) -> (String, Result<(), String>) {
    let f = 1 + index % 2;
    let k = match field(sp, f) {
        Ok(k) => k,
        Err(e) => return (String::new(), Err(e)),
    };
    let d = rng.gen_range(1..=3);
    let m = match random_weakly_admissible(&k, d, rng) {
        Ok(m) => m,
        Err(e) => return (String::new(), Err(e2s(e))),
    };
    let tw = rng.gen_range(-3..=3);
    let input = format!("M = {}, twist {tw}", describe_module(&m));
    let run = || -> Result<(), String> {
        let cert = is_weakly_admissible(&m).map_err(e2s)?;
        check(cert.holds, || "generator produced a module that is not weakly admissible".into())?;
        for e in &cert.entries {
            check(e.t_h <= e.t_n, || format!("stable subspace of dim {} has t_H = {} > t_N = {}", e.dim(), e.t_h, e.t_n))?;
            let ind = m.induced_submodule(&e.space).map_err(e2s)?;
            check(ind.t_h() == e.t_h, || "certificate t_H does not match the induced module".into())?;
            check(ind.newton_slopes().map_err(e2s)?.t_n() == Rational64::from(e.t_n), || "certificate t_N mismatch".into())?;
        }
        check(is_weakly_admissible(&m.twist(tw)).map_err(e2s)?.holds, || format!("twist by {tw} is not weakly admissible"))
    };
    (input, run())
}

/// Weakly admissible, top jump 0 (so `h_0 ≠ 0` and `Fil^1 = 0`), with (N_0).
fn tilde_input(k: &Arc<UnramifiedField>, rng: &mut ChaCha8Rng) -> Result<FilteredPhiModule, String> {
    for _ in 0..400 {
        let d = rng.gen_range(1..=3);
        let slopes = random_slopes(d, -2, 1, rng);
        let w = spread_weights(&slopes, 2 * d, rng);
        let m = random_module(k, &slopes, &w, rng).map_err(e2s)?;
        let m = m.twist(m.max_jump().unwrap());
        if is_weakly_admissible(&m).map_err(e2s)?.holds && n_condition(&m, 0).map_err(e2s)?.holds {
            return Ok(m);
        }
    }
    Err("no module with (N_0) found in 400 draws".into())
}

fn tilde(sp: &SeriesParams, rng: &mut ChaCha8Rng, _index: usize) -> (String, Result<(), String>) {
    let k = match field(sp, 1) {
        Ok(k) => k,
        Err(e) => return (String::new(), Err(e)),
    };
    let m = match tilde_input(&k, rng) {
        Ok(m) => m,
        Err(e) => return (String::new(), Err(e)),
    };
    let input = format!("M = {}", describe_module(&m));
    let run = || -> Result<(), String> {
        let t = m.tilde_modification(0).map_err(e2s)?;
        let cert = slope_bound_check(&t, Rational64::from(0), true).map_err(e2s)?;
        check(cert.holds, || {
            let w = cert.witness_entry().map(|e| format!("dim {}: t_H = {}, t_N = {}", e.dim(), e.t_h, e.t_n));
            format!("tilde modification has a subspace of slope >= 0 ({})", w.unwrap_or_default())
        })
    };
    (input, run())
}

/// Random module with weights in `-1..=0`, so `Fil^1 = 0`.
pub fn contradiction_module(k: &Arc<UnramifiedField>, d: usize, rng: &mut ChaCha8Rng) -> Result<FilteredPhiModule, String> {
    let slopes = random_slopes(d, -1, 1, rng);
    let weights: Vec<i64> = (0..d).map(|_| rng.gen_range(-1..=0)).collect();
    random_module(k, &slopes, &weights, rng).map_err(e2s)
}

fn contradiction(sp: &SeriesParams, rng: &mut ChaCha8Rng, index: usize) -> (String, Result<(), String>) {
    if index == 0 {
        return supersingular_case(sp, rng);
    }
    let k = match field(sp, 1) {
        Ok(k) => k,
        Err(e) => return (String::new(), Err(e)),
    };
    let d = 1 + index % 3;
    let m = match contradiction_module(&k, d, rng) {
        Ok(m) => Arc::new(m),
        Err(e) => return (String::new(), Err(e)),
    };
    let input = format!("M = {}", describe_module(&m));
    let mut run = || -> Result<(), String> {
        let n = sp.trunc;
        let g = random_member(&m, n, rng).map_err(e2s)?;
        let gs: Vec<VectorSeries> = (0..d).map(|_| random_member(&m, n, rng)).collect::<Result<_, _>>().map_err(e2s)?;
        let out = determinant_log_check(&gs, 2).map_err(e2s)?;
        check(out.verified, || format!("det log order {:?} below -t_H = {}", out.log_lower, out.bound))?;
        for mode in [Mode::Wronskian, Mode::OrbitWedge] {
            let rep = contradiction_pipeline(&m, mode, &g, &PipelineConfig::default()).map_err(e2s)?;
            check(rep.verdict != Outcome::Inconclusive, || format!("{}: inconclusive: {:?}", mode.name(), rep.trail))?;
            if rep.verdict == Outcome::ForcedZero {
                let f = match mode {
                    Mode::Wronskian => wronskian_det(&g, d).map_err(e2s)?,
                    _ => phi_orbit_wedge(&g, d - 1).map_err(e2s)?.remove(0),
                };
                match rep.log_exact {
                    Some(None) => check(f.is_zero(), || format!("{}: exact determinant is zero, series is not", mode.name()))?,
                    Some(Some(e)) => {
                        let e = e as i64;
                        check(Rational64::from(e) > rep.order_upper, || format!("{}: log order {e} <= order bound", mode.name()))?;
                        check(e >= rep.log_lower, || format!("{}: log order {e} below the guaranteed {}", mode.name(), rep.log_lower))?;
                        if rep.log_lower >= 1 {
                            let vals = layer_values(&f, 1).map_err(e2s)?;
                            check(vals.iter().all(Option::is_none), || format!("{}: nonzero at layer 1: {vals:?}", mode.name()))?;
                        }
                    }
                    None => return Err(format!("{}: forced zero without an exact structure", mode.name())),
                }
            } else {
                check(Rational64::from(rep.log_lower) <= rep.order_upper, || format!("{}: not forced but bounds cross", mode.name()))?;
            }
        }
        Ok(())
    };
    let res = run();
    (input, res)
}

fn supersingular_case(sp: &SeriesParams, rng: &mut ChaCha8Rng) -> (String, Result<(), String>) {
    let mut run = || -> Result<(), String> {
        let m = Arc::new(preset("supersingular", sp.prec).map_err(e2s)?);
        let g = random_member(&m, sp.trunc, rng).map_err(e2s)?;
        let rep = contradiction_pipeline(&m, Mode::Dim2Det, &g, &PipelineConfig::default()).map_err(e2s)?;
        check(
            rep.order_upper == Rational64::from(1) && rep.log_lower == 2 && rep.verdict == Outcome::ForcedZero,
            || format!("order_upper {}, log_lower {}, verdict {}", rep.order_upper, rep.log_lower, rep.verdict),
        )
    };
    ("preset supersingular, dim2-det".into(), run())
}

fn twist_monotone(sp: &SeriesParams, rng: &mut ChaCha8Rng, index: usize) -> (String, Result<(), String>) {
    let f = 1 + index % 2;
    let k = match field(sp, f) {
        Ok(k) => k,
        Err(e) => return (String::new(), Err(e)),
    };
    let d = rng.gen_range(1..=3);
    let m = match random_weakly_admissible(&k, d, rng) {
        Ok(m) => m,
        Err(e) => return (String::new(), Err(e2s(e))),
    };
    let input = format!("M = {}", describe_module(&m));
    let run = || -> Result<(), String> {
        // Twisting leaves the underlying space alone, so fil1(M) is also a
        // subspace of the twist.
        let a = fil1(&m).map_err(e2s)?;
        let b = fil1(&m.twist(1)).map_err(e2s)?;
        check(b.contains(&a, DEFAULT_GUARD).map_err(e2s)?, || format!("Fil¹ of dim {} not inside Fil¹ of the twist (dim {})", a.dim(), b.dim()))
    };
    (input, run())
}
