//! Division by `log(1+x)` with two independent vanishing checks.
//!
//! Check A evaluates `f` at `π_n` for `n = 0..=n_max`. Check B divides
//! `f·φ^L(x/log(1+x))` by `(1+x)^{p^L} - 1`, whose roots are exactly the
//! points `π_n` with `n <= L`, and inspects the remainder. The quotient is
//! `g = p^L·q`, since `log(1+x) = p^{-L}((1+x)^{p^L} - 1)·φ^L(log(1+x)/x)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Rational64;
use unorm_padic::scalar::max_rel;
use unorm_padic::{CyclotomicLayer, FieldElement, Padic, UnramifiedField};

use crate::eval::cyclotomic_evaluate;
use crate::ops::phi_to;
use crate::series::{lgp, Tail, TruncatedSeries};
use crate::tables::binomial_row;
use crate::SeriesError;

pub const DEFAULT_GUARD: i64 = 4;

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// `f(π_n)` has this certified valuation.
    Layer { n: u32, valuation: Rational64 },
    /// Coefficient `index` of the division remainder has this valuation.
    Remainder { index: usize, valuation: i64 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Layer { n, valuation } => write!(f, "value at layer {n} has valuation {valuation}"),
            Witness::Remainder { index, valuation } => {
                write!(f, "remainder coefficient {index} has valuation {valuation}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DivideConfig {
    pub n_max: u32,
    /// Decisions need at least this much absolute precision.
    pub guard: i64,
    pub max_layer: u32,
}

impl DivideConfig {
    pub fn new(n_max: u32) -> Self {
        DivideConfig { n_max, guard: DEFAULT_GUARD, max_layer: n_max.max(unorm_padic::cyclo::DEFAULT_MAX_LAYER) }
    }
}

enum Check {
    Zero,
    NonZero(Witness),
    Undecidable(String),
}

fn check_layers(f: &TruncatedSeries, cfg: &DivideConfig) -> Result<Check, SeriesError> {
    let a0 = &f.coeffs()[0];
    if let Some(v) = a0.val() {
        return Ok(Check::NonZero(Witness::Layer { n: 0, valuation: v.into() }));
    }
    if a0.prec() < cfg.guard {
        return Ok(Check::Undecidable(format!("constant term known only to precision {}", a0.prec())));
    }
    let guard = Rational64::from(cfg.guard);
    for n in 1..=cfg.n_max {
        let layer = CyclotomicLayer::with_cap(f.field(), n, cfg.max_layer)?;
        let ev = cyclotomic_evaluate(f, &layer)?;
        if let Some(v) = ev.certified_valuation() {
            return Ok(Check::NonZero(Witness::Layer { n, valuation: v }));
        }
        if ev.precision() < guard {
            return Ok(Check::Undecidable(format!("layer {n} known only to precision {}", ev.precision())));
        }
    }
    Ok(Check::Zero)
}

/// `1/φ^L(log(1+x)/x)` to degree `n` at the highest workable precision.
fn unit_factor(k: &Arc<UnramifiedField>, l: u32, n: usize) -> Result<TruncatedSeries, SeriesError> {
    #[derive(Clone)]
    struct Cached(Vec<FieldElement>);
    let key = format!("series:log-unit:{l}");
    let cached = k.memo.get_or_grow(key.as_str(), |c: &Option<Cached>| c.as_ref().is_some_and(|c| c.0.len() > n), || {
        let p = k.p();
        let w = max_rel(p) - 4;
        let cap = (n + 1).next_power_of_two();
        let c: Vec<FieldElement> = (0..cap)
            .map(|i| {
                let s = if i % 2 == 0 { 1 } else { -1 };
                let x = Padic::from_ratio(p, &BigInt::from(s), &BigInt::from(i as i64 + 1), w).unwrap();
                k.from_padic(x)
            })
            .collect();
        let mut s = TruncatedSeries::polynomial(k, c);
        for _ in 0..l {
            s = phi_to(&s, cap - 1).truncate(cap - 1);
        }
        s.with_tail(Tail::Unknown).inverse().ok().map(|u| Cached(u.coeffs().to_vec()))
    });
    match cached.as_ref() {
        Some(c) => Ok(TruncatedSeries::from_parts(k, c.0[..=n].to_vec(), Tail::Unknown)),
        None => Err(SeriesError::NotInvertible),
    }
}

struct Division {
    g: TruncatedSeries,
    remainder: Check,
}

/// Estimated number of quotient coefficients kept at split level `l`.
fn kept_estimate(p: u32, n: usize, l: u32, f_prec: i64, b_g: i64, r_g: u32, guard: i64) -> usize {
    let d = (p as usize).pow(l);
    if n + 1 < 2 * d {
        return 0;
    }
    let e_l = (p as i64).pow(l - 1) * (p as i64 - 1);
    let e_next = e_l * p as i64;
    let v_e = 1 - l as i64 - b_g - r_g as i64 * lgp(p, n);
    let mut kept = 0;
    for j in 0..=n - d {
        let trunc_cap = v_e + (n as i64 + 2 - 2 * d as i64 - j as i64).max(0) / e_l + l as i64;
        let prec = f_prec - ((j + d) as i64 + e_next - 1) / e_next + l as i64;
        if trunc_cap.min(prec) < guard {
            break;
        }
        kept = j + 1;
    }
    kept
}

fn divide_at(f: &TruncatedSeries, l: u32, b_g: i64, r_g: u32, guard: i64) -> Result<Division, SeriesError> {
    let k = f.field();
    let p = k.p();
    let n = f.trunc();
    let d = (p as usize).pow(l);
    let e_l = (p as i64).pow(l - 1) * (p as i64 - 1);
    let u = unit_factor(k, l, n)?;
    let mut r: Vec<FieldElement> = f.clone().with_tail(Tail::Unknown).mul(&u).coeffs().to_vec();
    r.truncate(n + 1);
    let w = binomial_row(p, d as u32);
    let mut q = vec![k.exact_zero(); n - d + 1];
    for top in (d..=n).rev() {
        let c = r[top].clone();
        for (i, wi) in w.iter().enumerate().take(d).skip(1) {
            r[top - d + i] = &r[top - d + i] - &c.scale(wi);
        }
        q[top - d] = c;
    }
    // Truncating f perturbs q_j by at least v_e + max(0, N+2-2D-j)/e_L in
    // valuation, and the remainder by one more than the smallest such term.
    let v_e = 1 - l as i64 - b_g - r_g as i64 * lgp(p, n);
    let qcap = |j: usize| {
        let t = (n as i64 + 2 - 2 * d as i64 - j as i64).max(0);
        Rational64::new(t, e_l) + v_e
    };
    let rcap = Rational64::new((n as i64 + 2 - 3 * d as i64).max(0), e_l) + 1 + v_e;
    let rcap = rcap.ceil().to_integer();
    let mut g: Vec<FieldElement> = Vec::new();
    for (j, qj) in q.iter().enumerate() {
        let gj = qj.with_prec(qcap(j).ceil().to_integer()).shift(l as i64);
        if gj.prec() < guard {
            break;
        }
        g.push(gj);
    }
    if g.is_empty() {
        return Err(SeriesError::Undecidable(format!("no quotient coefficient survives at split level {l}")));
    }
    let mut remainder = Check::Zero;
    for (i, ri) in r.iter().enumerate().take(d) {
        let thr = ri.prec().min(rcap);
        match ri.val() {
            Some(v) if v < thr => {
                remainder = Check::NonZero(Witness::Remainder { index: i, valuation: v });
                break;
            }
            _ if thr < guard => {
                if matches!(remainder, Check::Zero) {
                    remainder = Check::Undecidable(format!("remainder coefficient {i} known only to precision {thr}"));
                }
            }
            _ => {}
        }
    }
    let g = TruncatedSeries::from_parts(k, g, Tail::Bounded { b: b_g, r: r_g });
    Ok(Division { g, remainder })
}

pub fn divide_by_log(f: &TruncatedSeries, n_max: u32) -> Result<TruncatedSeries, SeriesError> {
    divide_by_log_with(f, &DivideConfig::new(n_max))
}

/// `g` with `f = g·log(1+x)`.
///
/// The quotient is assumed to obey the tail model of `f` with one fewer
/// power of `log`, i.e. `(b, r - 1)`.
pub fn divide_by_log_with(f: &TruncatedSeries, cfg: &DivideConfig) -> Result<TruncatedSeries, SeriesError> {
    let (b, r) = f.bound_pair().ok_or(SeriesError::TailUnknown("divide_by_log"))?;
    let (b_g, r_g) = (b, r.saturating_sub(1));
    let p = f.p();
    let n = f.trunc();
    let a = check_layers(f, cfg)?;
    let f_prec = f.min_prec();
    let l = (1..=cfg.n_max.max(1))
        .map(|l| (kept_estimate(p, n, l, f_prec, b_g, r_g, cfg.guard), l))
        .max_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)))
        .filter(|(kept, _)| *kept > 0)
        .map(|(_, l)| l);
    let Some(l) = l else {
        return match a {
            Check::NonZero(w) => Err(SeriesError::NotDivisible(w)),
            _ => Err(SeriesError::Undecidable(format!("truncation {n} too short to divide"))),
        };
    };
    let div = divide_at(f, l, b_g, r_g, cfg.guard)?;
    match (a, div.remainder) {
        (Check::NonZero(Witness::Layer { n: m, .. }), Check::Zero) if m <= l => Err(SeriesError::Inconsistent(
            format!("layer {m} is nonzero but the remainder at split level {l} vanishes"),
        )),
        (Check::NonZero(w), _) => Err(SeriesError::NotDivisible(w)),
        (Check::Zero, Check::NonZero(w)) => {
            Err(SeriesError::Inconsistent(format!("all layers vanish but the division leaves {w}")))
        }
        (Check::Zero, Check::Zero) => Ok(div.g),
        (Check::Undecidable(_), Check::NonZero(w)) => Err(SeriesError::NotDivisible(w)),
        (Check::Undecidable(s), _) | (_, Check::Undecidable(s)) => Err(SeriesError::Undecidable(s)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogOrder {
    Finite(u32),
    /// Divisible this many times; the next step could not be decided.
    AtLeast(u32),
    /// The zero series.
    Infinite,
}

/// The largest `r` with `log^r | f`, probing layers up to `n_max`.
pub fn log_order(f: &TruncatedSeries, n_max: u32) -> LogOrder {
    if f.is_zero() && f.tail() == Tail::Zero {
        return LogOrder::Infinite;
    }
    let cfg = DivideConfig::new(n_max);
    let mut cur = f.clone();
    let mut r = 0;
    loop {
        match divide_by_log_with(&cur, &cfg) {
            Ok(g) => {
                r += 1;
                cur = g;
            }
            Err(SeriesError::NotDivisible(_)) => return LogOrder::Finite(r),
            Err(_) => {
                if r == 0 && f.is_zero() {
                    return LogOrder::Infinite;
                }
                return LogOrder::AtLeast(r);
            }
        }
    }
}
