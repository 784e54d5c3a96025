//! Upper bounds on the order of a determinant built from `g`, against
//! lower bounds on its divisibility by `log(1+x)`. A function of order
//! `≤ a` divisible by `log^b` with `b > a` is zero.

use std::fmt;

use num_rational::Rational64;
use unorm_phimod::FilteredPhiModule;
use unorm_series::{cyclotomic_evaluate, log_order, tail_valuation_bound, LogOrder, Tail, TruncatedSeries};

use crate::membership::{check_a_membership, MembershipParams, MembershipReport, Verdict};
use crate::vector::VectorSeries;
use crate::wedge::{det, phi_orbit, truncated_det, wedge_coords, wedge_structured, wronskian_det, wronskian_structured};
use crate::AnalyticError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `F = g ∧ Φg` in dimension 2, with `g` vanishing at the layers.
    Dim2Det,
    /// `𝒱 = g ∧ Dg ∧ … ∧ D^{d-1}g`.
    Wronskian,
    /// `F = g ∧ Φg ∧ … ∧ Φ^{d-1}g`.
    OrbitWedge,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "dim2-det" => Some(Mode::Dim2Det),
            "wronskian" => Some(Mode::Wronskian),
            "orbit-wedge" => Some(Mode::OrbitWedge),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Dim2Det => "dim2-det",
            Mode::Wronskian => "wronskian",
            Mode::OrbitWedge => "orbit-wedge",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    ForcedZero,
    NotForced,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::ForcedZero => "forced zero",
            Outcome::NotForced => "not forced",
            Outcome::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ContradictionReport {
    pub mode: Mode,
    /// Bound on the order of the determinant, from the Newton polygon.
    pub order_upper: Rational64,
    /// Divisibility by `log(1+x)` guaranteed by the filtration hypotheses.
    pub log_lower: i64,
    /// `log_order` of the determinant actually built from `g`.
    pub log_observed: LogOrder,
    /// Exact log order from the structured determinant, when available.
    pub log_exact: Option<Option<u32>>,
    pub membership: MembershipReport,
    pub verdict: Outcome,
    pub trail: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub n_max: u32,
    pub guard: i64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { n_max: 2, guard: crate::membership::DEFAULT_GUARD }
    }
}

fn tri(d: usize) -> i64 {
    (d * (d - 1) / 2) as i64
}

fn render(o: LogOrder) -> String {
    match o {
        LogOrder::Finite(r) => r.to_string(),
        LogOrder::AtLeast(r) => format!(">= {r}"),
        LogOrder::Infinite => "infinite".into(),
    }
}

/// Runs one of the three order-versus-divisibility arguments on `g`.
///
/// The layer hypotheses on `g` are checked up to `n_max`; any undecided
/// condition makes the verdict inconclusive. The order hypothesis
/// `𝔇_φ(g) ≤ 0` is reported but not required, since no nonzero `g`
/// can satisfy every hypothesis at once.
pub fn contradiction_pipeline(
    m: &FilteredPhiModule,
    mode: Mode,
    g: &VectorSeries,
    cfg: &PipelineConfig,
) -> Result<ContradictionReport, AnalyticError> {
    let d = m.dim();
    let mut trail = Vec::new();
    let t_h = m.t_h();
    let t_n = m.t_n()?;
    let slopes = m.newton_slopes()?.slopes;
    let slope_text = slopes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ");

    let (order_upper, log_lower, j_set) = match mode {
        Mode::Dim2Det => {
            if d != 2 {
                return Err(AnalyticError::Shape("dim2-det needs a module of dimension 2".into()));
            }
            if !m.jumps().contains(&0) {
                return Err(AnalyticError::Unsupported("dim2-det needs 0 to be a jump".into()));
            }
            trail.push(format!("order(g ∧ Φg) <= -t_N = {} from Newton slopes [{slope_text}] and order(g) <= 0", -t_n));
            trail.push(format!(
                "g ∧ Φg divisible by log^{}: log^(-t_H) = log^{} from the filtration conditions, one more from g(ζ - 1) = 0",
                -t_h + 1,
                -t_h
            ));
            (Rational64::from(-t_n), -t_h + 1, vec![0])
        }
        Mode::Wronskian => {
            if m.max_jump().is_some_and(|j| j > 0) {
                return Err(AnalyticError::Unsupported("the Wronskian bound needs Fil^1 = 0".into()));
            }
            trail.push(format!(
                "order(𝒱) <= -t_N - d(d-1)/2 = {} - {} from Newton slopes [{slope_text}], each D lowering the order by 1",
                -t_n,
                tri(d)
            ));
            trail.push(format!(
                "𝒱 divisible by log^(-t_H - d(d-1)/2) = log^{}, each derivative costing one power",
                -t_h - tri(d)
            ));
            (Rational64::from(-t_n - tri(d)), -t_h - tri(d), vec![])
        }
        Mode::OrbitWedge => {
            trail.push(format!("order(F) <= -t_N = {} from Newton slopes [{slope_text}]", -t_n));
            trail.push(format!("F divisible by log^(-t_H) = log^{} from the filtration conditions", -t_h));
            (Rational64::from(-t_n), -t_h, vec![])
        }
    };

    let mut params = MembershipParams::new(0, j_set, Rational64::from(0), cfg.n_max);
    params.guard = cfg.guard;
    let membership = check_a_membership(g, &params)?;
    trail.push(format!("layer hypotheses up to n = {}: {}", cfg.n_max, membership.layer_verdict()));
    trail.push(format!(
        "order hypothesis: 𝔇_φ(g) = {} against 0 ({:?})",
        membership.order.order.as_ref().map(|o| o.to_string()).unwrap_or_else(|| "unknown".into()),
        membership.order.status
    ));

    let (series, exact) = match mode {
        Mode::Dim2Det => {
            let orbit = phi_orbit(g, 1)?;
            (wedge_coords(&orbit).remove(0), wedge_structured(&orbit))
        }
        Mode::OrbitWedge => {
            let orbit = phi_orbit(g, d - 1)?;
            (wedge_coords(&orbit).remove(0), wedge_structured(&orbit))
        }
        Mode::Wronskian => (wronskian_det(g, d)?, wronskian_structured(g)?),
    };
    let depth = probe_depth(&series, cfg.n_max, cfg.guard);
    let log_observed = log_order(&series, depth);
    let log_exact = exact.as_ref().map(|e| e.log_order());
    trail.push(format!("observed log order of the determinant (layers <= {depth}): {}", render(log_observed)));
    if let Some(e) = log_exact {
        trail.push(format!("exact log order from the structure: {}", e.map(|r| r.to_string()).unwrap_or("infinite".into())));
    }

    let identically_zero = matches!(log_observed, LogOrder::Infinite) || log_exact == Some(None);
    let verdict = if membership.layer_verdict() != Verdict::Member {
        trail.push("hypotheses not verified: no conclusion".into());
        Outcome::Inconclusive
    } else if observed_below(log_observed, log_exact, log_lower) {
        trail.push("observed divisibility is below the guaranteed bound: hypotheses inconsistent".into());
        Outcome::Inconclusive
    } else if Rational64::from(log_lower) > order_upper {
        trail.push(format!("{log_lower} > {order_upper}: the determinant must vanish"));
        if identically_zero {
            trail.push("the determinant vanishes identically".into());
        }
        Outcome::ForcedZero
    } else {
        trail.push(format!("{log_lower} <= {order_upper}: no contradiction"));
        if identically_zero {
            trail.push("the determinant vanishes identically, which the bounds do not require".into());
        }
        Outcome::NotForced
    };
    Ok(ContradictionReport { mode, order_upper, log_lower, log_observed, log_exact, membership, verdict, trail })
}

fn observed_below(obs: LogOrder, exact: Option<Option<u32>>, bound: i64) -> bool {
    if let Some(Some(e)) = exact {
        return (e as i64) < bound;
    }
    matches!(obs, LogOrder::Finite(r) if (r as i64) < bound)
}

#[derive(Clone, Debug)]
pub struct DeterminantLogCheck {
    pub verified: bool,
    pub log_lower: LogOrder,
    pub bound: i64,
    pub determinant: TruncatedSeries,
}

/// `det(g_1, …, g_d)` and whether its `log_order` reaches `-t_H`.
///
/// An `AtLeast(r)` answer with `r < -t_H` is not verified.
pub fn determinant_log_check(gs: &[VectorSeries], n_max: u32) -> Result<DeterminantLogCheck, AnalyticError> {
    let m = gs.first().ok_or_else(|| AnalyticError::Shape("no vectors".into()))?.module().clone();
    if gs.len() != m.dim() {
        return Err(AnalyticError::Shape(format!("{} vectors in dimension {}", gs.len(), m.dim())));
    }
    let cols: Vec<Vec<TruncatedSeries>> = gs.iter().map(|g| g.comps().to_vec()).collect();
    let f = truncated_det(&cols);
    let bound = -m.t_h();
    let structured: Option<Vec<_>> = gs.iter().map(|g| g.structure().map(|s| s.to_vec())).collect();
    let lo = match structured.map(|c| det(&c).log_order()) {
        Some(None) => LogOrder::Infinite,
        _ => log_order(&f, probe_depth(&f, n_max, crate::membership::DEFAULT_GUARD)),
    };
    let verified = match lo {
        LogOrder::Infinite => true,
        LogOrder::Finite(r) | LogOrder::AtLeast(r) => r as i64 >= bound,
    };
    Ok(DeterminantLogCheck { verified, log_lower: lo, bound, determinant: f })
}

/// Values of a determinant at `ζ_{p^n} - 1` for `n = 1..=n_max`: the
/// certified valuation if visibly nonzero, else `None`.
pub fn layer_values(f: &TruncatedSeries, n_max: u32) -> Result<Vec<Option<Rational64>>, AnalyticError> {
    let k = f.field();
    (1..=n_max)
        .map(|n| {
            let layer = unorm_padic::CyclotomicLayer::with_cap(k, n, n_max)?;
            Ok(cyclotomic_evaluate(f, &layer)?.certified_valuation())
        })
        .collect()
}

/// The deepest layer `n ≤ n_max` (at least 1) at which the untracked tail of
/// `f` still leaves `guard` digits.
pub fn probe_depth(f: &TruncatedSeries, n_max: u32, guard: i64) -> u32 {
    let p = f.p();
    let (b, r) = match f.tail() {
        Tail::Zero => return n_max.max(1),
        Tail::Bounded { b, r } => (b, r),
        Tail::Unknown => return 1,
    };
    (1..=n_max)
        .rev()
        .find(|&n| {
            let e = (p as i64).pow(n - 1) * (p as i64 - 1);
            tail_valuation_bound(p, f.trunc(), b, r, e) >= Rational64::from(guard)
        })
        .unwrap_or(1)
}
