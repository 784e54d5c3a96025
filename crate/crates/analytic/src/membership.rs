//! Finite-layer membership checks for `𝒜_{v,J}^{(r)}`.
//!
//! For each `j` from the lowest jump up to `v` and each layer `n ≤ n_max`,
//! `D^{-j}(g)(ζ_{p^n} - 1)` must lie in `K_n ⊗ φ^n(Fil^j)`; for `j ∈ J` it
//! must vanish; and `𝔇_φ(g) ≤ v + r`. Passing means "member up to layer
//! `n_max`".

use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use unorm_padic::exec::Exec;
use unorm_padic::linalg::Mat;
use unorm_padic::scalar::EXACT;
use unorm_padic::{CyclotomicLayer, FieldElement, PadicError};
use unorm_series::Evaluation;

use crate::order::{phi_growth_order, PhiOrder};
use crate::vector::VectorSeries;
use crate::wedge::subsets;
use crate::AnalyticError;

pub const DEFAULT_GUARD: i64 = 4;

#[derive(Clone, Debug)]
pub struct MembershipParams {
    pub v: i64,
    pub j_set: Vec<i64>,
    pub r: Rational64,
    pub n_max: u32,
    /// Also require `ψ(g) = 0` (the space `𝒜` rather than `𝒜̃`).
    pub require_psi: bool,
    /// Decisions need this much absolute precision.
    pub guard: i64,
}

impl MembershipParams {
    pub fn new(v: i64, j_set: Vec<i64>, r: Rational64, n_max: u32) -> Self {
        MembershipParams { v, j_set, r, n_max, require_psi: false, guard: DEFAULT_GUARD }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Undecided(String),
}

impl Status {
    fn from_margin(margin: Option<Rational64>, precision: Rational64, guard: i64) -> Status {
        match margin {
            Some(m) if m < precision => Status::Fails,
            _ if precision >= Rational64::from(guard) => Status::Holds,
            _ => Status::Undecided(format!("precision {precision} below guard {guard}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionKind {
    /// `D^{-j}(g)(ζ_{p^n} - 1) ∈ K_n ⊗ φ^n Fil^j`.
    Filtration,
    /// `D^{-j}(g)(ζ_{p^n} - 1) = 0`.
    Vanishing,
}

#[derive(Clone, Debug)]
pub struct Condition {
    pub j: i64,
    pub n: u32,
    pub kind: ConditionKind,
    /// Valuation of the component outside the target space; `None` if it
    /// vanishes to the precision at hand.
    pub margin: Option<Rational64>,
    pub precision: Rational64,
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct OrderCheck {
    /// `None` when not even an estimate was available.
    pub order: Option<PhiOrder>,
    pub bound: Rational64,
    pub status: Status,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Member => "member",
            Verdict::NonMember => "non-member",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

fn combine<'a>(it: impl IntoIterator<Item = &'a Status>) -> Verdict {
    let mut out = Verdict::Member;
    for s in it {
        match s {
            Status::Fails => return Verdict::NonMember,
            Status::Undecided(_) => out = Verdict::Inconclusive,
            Status::Holds => {}
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub params: MembershipParams,
    pub order: OrderCheck,
    /// Sorted by `(j, n, kind)`.
    pub conditions: Vec<Condition>,
    pub psi: Option<Status>,
    pub verdict: Verdict,
}

impl MembershipReport {
    /// Verdict of the layer conditions and the `ψ` check alone.
    pub fn layer_verdict(&self) -> Verdict {
        combine(self.conditions.iter().map(|c| &c.status).chain(self.psi.iter()))
    }

    pub fn first_failure(&self) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.status == Status::Fails)
    }
}

fn cap(x: i64) -> i64 {
    x.min(EXACT)
}

/// Distance from `x` to `K_n ⊗ span(w)`: `(margin, precision)`, where the
/// margin is the largest valuation of `x - y` over `y` in the subspace.
///
/// Rows `R` of a maximal `k`-minor make `B = w·w_R^{-1}` integral with an
/// identity block on `R`, so `[B | e_i (i ∉ R)]` is unimodular and the
/// residual is `x_i - (B x_R)_i` for `i ∉ R`.
fn residual(x: &[Evaluation], w: &Mat) -> Result<(Option<Rational64>, Rational64), AnalyticError> {
    let d = x.len();
    let kdim = w.cols();
    let e = x[0].value.layer().ramification() as i64;
    let tail = x.iter().map(|v| v.tail.unwrap_or(Rational64::from(EXACT))).min().unwrap();
    let eval_prec = x.iter().map(|v| v.value.prec()).min().unwrap();
    let mut prec = eval_prec.min(tail);
    if kdim == d {
        return Ok((None, prec));
    }
    let cols: Vec<usize> = (0..kdim).collect();
    let mut best: Option<(i64, Vec<usize>)> = None;
    if kdim > 0 {
        for rows in subsets(d, kdim) {
            if let Some(v) = w.minor(&rows, &cols)?.val() {
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, rows));
                }
            }
        }
    }
    let (rows, b) = match best {
        Some((_, rows)) => {
            let wr = Mat::from_rows(w.field(), rows.iter().map(|&r| w.row(r)).collect())?;
            (rows, Some(w.mul(&wr.inverse()?)))
        }
        None if kdim == 0 => (vec![], None),
        None => return Err(PadicError::Singular.into()),
    };
    let mut margin: Option<Rational64> = None;
    for t in 0..e as usize {
        let off = Rational64::new(t as i64, e);
        let xt: Vec<&FieldElement> = x.iter().map(|v| &v.value.coords()[t]).collect();
        for i in (0..d).filter(|i| !rows.contains(i)) {
            let mut z = xt[i].clone();
            if let Some(b) = &b {
                for (c, &r) in rows.iter().enumerate() {
                    z = &z - &(b.get(i, c) * xt[r]);
                }
            }
            prec = prec.min(Rational64::from(cap(z.prec())) + off);
            if let Some(v) = z.val() {
                let m = Rational64::from(v) + off;
                margin = Some(margin.map_or(m, |a| a.min(m)));
            }
        }
    }
    Ok((margin, prec))
}

fn vanishing(x: &[Evaluation]) -> (Option<Rational64>, Rational64) {
    let margin = x.iter().filter_map(|v| v.value.valuation()).min();
    let prec = x.iter().map(|v| v.precision()).min().unwrap();
    (margin, prec)
}

pub fn check_a_membership(g: &VectorSeries, params: &MembershipParams) -> Result<MembershipReport, AnalyticError> {
    let m = g.module().clone();
    let k = m.field().clone();
    let lo = m.min_jump().unwrap_or(0).min(params.v);
    let js: Vec<i64> = (lo..=params.v).collect();
    let layers: Vec<Arc<CyclotomicLayer>> = (1..=params.n_max)
        .map(|n| CyclotomicLayer::with_cap(&k, n, params.n_max.max(1)))
        .collect::<Result<_, _>>()?;

    // Values of D^e(g) at every layer, for e = -j ≥ 0.
    let e_max = js.iter().map(|&j| -j).max().unwrap_or(0).max(0) as usize;
    let e_min = js.iter().map(|&j| -j).min().unwrap_or(0).max(0) as usize;
    let mut values: Vec<Option<Vec<Vec<Evaluation>>>> = vec![None; e_max + 1];
    let mut cur = g.d_pow(e_min)?;
    for (e, slot) in values.iter_mut().enumerate().skip(e_min) {
        if e > e_min {
            cur = cur.d()?;
        }
        *slot = Some(layers.iter().map(|l| cur.evaluate(l)).collect::<Result<_, _>>()?);
    }

    let mut tasks = Vec::new();
    for &j in &js {
        for n in 1..=params.n_max {
            tasks.push((j, n, ConditionKind::Filtration));
            if params.j_set.contains(&j) {
                tasks.push((j, n, ConditionKind::Vanishing));
            }
        }
    }
    let guard = params.guard;
    let results = Exec::default().map_slice(&tasks, |&(j, n, kind)| -> Result<Condition, AnalyticError> {
        if j > 0 {
            return Ok(Condition {
                j,
                n,
                kind,
                margin: None,
                precision: Rational64::from(0),
                status: Status::Undecided(format!("D^{} is not available", -j)),
            });
        }
        let x = &values[(-j) as usize].as_ref().expect("evaluated")[(n - 1) as usize];
        let (margin, precision) = match kind {
            ConditionKind::Vanishing => vanishing(x),
            ConditionKind::Filtration => {
                let w = m.phi_pow_image(m.fil(j).basis(), n as usize);
                residual(x, &w)?
            }
        };
        Ok(Condition { j, n, kind, margin, precision, status: Status::from_margin(margin, precision, guard) })
    });
    let conditions = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let bound = Rational64::from(params.v) + params.r;
    let order = match phi_growth_order(g, params.n_max.max(2)) {
        Ok(o) => {
            let status = match &o {
                PhiOrder::Zero => Status::Holds,
                PhiOrder::Exact(x) if *x <= bound => Status::Holds,
                PhiOrder::Exact(_) => Status::Fails,
                PhiOrder::Estimate { reason, .. } => Status::Undecided(format!("order only estimated: {reason}")),
            };
            OrderCheck { order: Some(o), bound, status }
        }
        Err(AnalyticError::Unsupported(why)) => OrderCheck { order: None, bound, status: Status::Undecided(why) },
        Err(e) => return Err(e),
    };

    let psi = if params.require_psi {
        let mut h = g.clone();
        Some(if h.verify_psi_zero()? { Status::Holds } else { Status::Fails })
    } else {
        None
    };
    let verdict = combine(conditions.iter().map(|c| &c.status).chain(std::iter::once(&order.status)).chain(psi.iter()));
    Ok(MembershipReport { params: params.clone(), order, conditions, psi, verdict })
}
