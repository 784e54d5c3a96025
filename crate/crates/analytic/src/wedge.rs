//! Wronskians, wedges of `Φ`-orbits and linear relations among them.

use unorm_series::{Tail, TruncatedSeries};

use crate::logterms::LogTerms;
use crate::vector::VectorSeries;
use crate::AnalyticError;

/// The little ring interface the determinant expansion needs.
pub trait Entry: Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Entry for TruncatedSeries {
    fn add(&self, o: &Self) -> Self {
        TruncatedSeries::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        TruncatedSeries::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        TruncatedSeries::mul(self, o)
    }
    fn neg(&self) -> Self {
        TruncatedSeries::neg(self)
    }
}

impl Entry for LogTerms {
    fn add(&self, o: &Self) -> Self {
        LogTerms::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        LogTerms::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        LogTerms::mul(self, o)
    }
    fn neg(&self) -> Self {
        LogTerms::neg(self)
    }
}

/// Laplace expansion along the first column; `cols[c][r]` is row `r` of column `c`.
pub fn det<T: Entry>(cols: &[Vec<T>]) -> T {
    let n = cols.len();
    assert!(n > 0 && cols.iter().all(|c| c.len() == n), "square matrix expected");
    if n == 1 {
        return cols[0][0].clone();
    }
    let mut acc: Option<T> = None;
    for r in 0..n {
        let minor: Vec<Vec<T>> = cols[1..]
            .iter()
            .map(|c| c.iter().enumerate().filter(|&(i, _)| i != r).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = cols[0][r].mul(&det(&minor));
        acc = Some(match acc {
            None if r % 2 == 0 => term,
            None => term.neg(),
            Some(a) if r % 2 == 0 => a.add(&term),
            Some(a) => a.sub(&term),
        });
    }
    acc.unwrap()
}

fn rows_of<T: Clone>(v: &[T], rows: &[usize]) -> Vec<T> {
    rows.iter().map(|&r| v[r].clone()).collect()
}

/// Lexicographic `v`-subsets of `0..d`.
pub fn subsets(d: usize, v: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, v: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == v {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            go(i + 1, d, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, d, v, &mut Vec::new(), &mut out);
    out
}

/// `det(g, Dg, …, D^{d'-1}g)` on the rows `rows` (one row per derivative).
pub fn wronskian_rows(g: &VectorSeries, rows: &[usize]) -> Result<TruncatedSeries, AnalyticError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|&r| r >= g.dim()) {
        return Err(AnalyticError::Shape(format!("rows {rows:?} for a vector of dimension {}", g.dim())));
    }
    let mut cols = Vec::with_capacity(n);
    let mut cur = g.clone();
    for i in 0..n {
        if i > 0 {
            cur = cur.d()?;
        }
        cols.push(rows_of(cur.comps(), rows));
    }
    Ok(truncated_det(&cols))
}

/// The Wronskian on the first `order` coordinates.
pub fn wronskian_det(g: &VectorSeries, order: usize) -> Result<TruncatedSeries, AnalyticError> {
    wronskian_rows(g, &(0..order).collect::<Vec<_>>())
}

/// Exact Wronskian on all coordinates, when `g` carries its structure.
pub fn wronskian_structured(g: &VectorSeries) -> Result<Option<LogTerms>, AnalyticError> {
    if g.structure().is_none() {
        return Ok(None);
    }
    let mut cols = Vec::with_capacity(g.dim());
    let mut cur = g.clone();
    for i in 0..g.dim() {
        if i > 0 {
            cur = cur.d()?;
        }
        cols.push(cur.structure().expect("structured").to_vec());
    }
    Ok(Some(det(&cols)))
}

/// The determinant cut to the common truncation of its entries.
pub fn truncated_det(cols: &[Vec<TruncatedSeries>]) -> TruncatedSeries {
    let n = cols.iter().flatten().filter(|c| c.tail() != Tail::Zero).map(|c| c.trunc()).min();
    let out = det(cols);
    match n {
        Some(n) => out.truncate(n),
        None => out,
    }
}

/// The orbit `g, Φg, …, Φ^n g`.
pub fn phi_orbit(g: &VectorSeries, n: usize) -> Result<Vec<VectorSeries>, AnalyticError> {
    let mut out = vec![g.clone()];
    for _ in 0..n {
        let next = out.last().unwrap().phi_vec()?;
        out.push(next);
    }
    Ok(out)
}

/// Coordinates of `g ∧ Φg ∧ … ∧ Φ^n g` on the lexicographic basis of
/// `Λ^{n+1}`; for `n + 1 = d` this is the single top coordinate and for
/// `n = 0` it is `g` itself.
pub fn phi_orbit_wedge(g: &VectorSeries, n: usize) -> Result<Vec<TruncatedSeries>, AnalyticError> {
    if n + 1 > g.dim() {
        return Err(AnalyticError::Shape(format!("a wedge of {} vectors in dimension {}", n + 1, g.dim())));
    }
    let orbit = phi_orbit(g, n)?;
    Ok(wedge_coords(&orbit))
}

pub fn wedge_coords(vs: &[VectorSeries]) -> Vec<TruncatedSeries> {
    let d = vs[0].dim();
    subsets(d, vs.len())
        .iter()
        .map(|rows| {
            let cols: Vec<Vec<TruncatedSeries>> = vs.iter().map(|v| rows_of(v.comps(), rows)).collect();
            truncated_det(&cols)
        })
        .collect()
}

/// Exact top wedge of structured vectors.
pub fn wedge_structured(vs: &[VectorSeries]) -> Option<LogTerms> {
    let cols: Option<Vec<Vec<LogTerms>>> = vs.iter().map(|v| v.structure().map(|s| s.to_vec())).collect();
    let cols = cols?;
    (cols.len() == cols[0].len()).then(|| det(&cols))
}

/// `g ∧ Φ^n g` in dimension 2.
pub fn pairwise_wedge(g: &VectorSeries, n: usize) -> Result<TruncatedSeries, AnalyticError> {
    if g.dim() != 2 {
        return Err(AnalyticError::Shape("the pairwise wedge needs dimension 2".into()));
    }
    let h = g.phi_pow(n)?;
    Ok(truncated_det(&[g.comps().to_vec(), h.comps().to_vec()]))
}

/// `a = numerator / denominator`, both tracked at truncation.
#[derive(Clone, Debug)]
pub struct SeriesQuotient {
    pub numerator: TruncatedSeries,
    pub denominator: TruncatedSeries,
}

#[derive(Clone, Debug)]
pub enum OrbitRelation {
    /// `Φ^v g = Σ_{i<v} a_i Φ^i g`, solved by Cramer's rule on `rows`.
    Relation { v: usize, rows: Vec<usize>, coefficients: Vec<SeriesQuotient> },
    NoRelation { v_max: usize },
    Indeterminate(String),
}

/// Nonzero, zero, or not decidable at the given absolute precision.
fn classify(s: &TruncatedSeries, guard: i64) -> Option<bool> {
    if s.coeffs().iter().any(|a| a.val().is_some_and(|v| v < a.prec())) {
        return Some(true);
    }
    (s.min_prec() >= guard).then_some(false)
}

/// The least `v ≤ v_max` with `Φ^v g` in the span of the earlier orbit.
pub fn orbit_relation(g: &VectorSeries, v_max: usize, guard: i64) -> Result<OrbitRelation, AnalyticError> {
    if v_max > g.dim() {
        return Err(AnalyticError::Shape(format!("v_max = {v_max} exceeds the dimension {}", g.dim())));
    }
    if g.is_zero() {
        return Ok(OrbitRelation::Relation { v: 0, rows: vec![], coefficients: vec![] });
    }
    let orbit = phi_orbit(g, v_max)?;
    let d = g.dim();
    // The rows and value of a nonzero maximal minor of the previous orbit.
    let mut prev: Option<(Vec<usize>, TruncatedSeries)> = None;
    for v in 1..=v_max {
        let wedge = &orbit[..=v];
        let mut nonzero = None;
        let mut undecided = false;
        if v < d {
            for rows in subsets(d, v + 1) {
                let cols: Vec<Vec<TruncatedSeries>> = wedge.iter().map(|x| rows_of(x.comps(), &rows)).collect();
                match classify(&truncated_det(&cols), guard) {
                    Some(true) => {
                        nonzero = Some(rows);
                        break;
                    }
                    Some(false) => {}
                    None => undecided = true,
                }
            }
        }
        // v = d: d+1 vectors are always dependent.
        if nonzero.is_none() {
            if undecided {
                return Ok(OrbitRelation::Indeterminate(format!("wedge of length {} is small but not certified zero", v + 1)));
            }
            let (rows, den) = match prev {
                Some(p) => p,
                None => first_nonzero(g, guard)?,
            };
            let target = rows_of(orbit[v].comps(), &rows);
            let coefficients = (0..v)
                .map(|i| {
                    let cols: Vec<Vec<TruncatedSeries>> = (0..v)
                        .map(|c| if c == i { target.clone() } else { rows_of(orbit[c].comps(), &rows) })
                        .collect();
                    SeriesQuotient { numerator: truncated_det(&cols), denominator: den.clone() }
                })
                .collect();
            return Ok(OrbitRelation::Relation { v, rows, coefficients });
        }
        let rows = nonzero.unwrap();
        let cols: Vec<Vec<TruncatedSeries>> = wedge.iter().map(|x| rows_of(x.comps(), &rows)).collect();
        prev = Some((rows, truncated_det(&cols)));
    }
    Ok(OrbitRelation::NoRelation { v_max })
}

fn first_nonzero(g: &VectorSeries, guard: i64) -> Result<(Vec<usize>, TruncatedSeries), AnalyticError> {
    for (r, c) in g.comps().iter().enumerate() {
        match classify(c, guard) {
            Some(true) => return Ok((vec![r], c.clone())),
            Some(false) => {}
            None => return Err(AnalyticError::Unsupported("g is not certified nonzero".into())),
        }
    }
    Err(AnalyticError::Unsupported("g is not certified nonzero".into()))
}
