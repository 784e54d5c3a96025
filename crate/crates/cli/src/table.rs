//! Rank tables `j ↦ rank Z_∞(K, V_f(j))` for modular-form modules.

use std::fmt::Write;

use num_rational::Rational64;
use serde::Serialize;
use unorm_padic::UnramifiedField;
use unorm_phimod::presets::modular_form_module;
use unorm_phimod::{fil1, universal_norm_rank};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankRow {
    pub j: i64,
    pub dim_fil1: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankTable {
    pub p: u32,
    pub weight: i64,
    pub a_p: String,
    pub f: usize,
    pub rows: Vec<RankRow>,
}

/// Largest `|j|` accepted; past this the twisted Frobenius leaves the
/// working precision.
pub const MAX_TWIST: i64 = 12;

pub fn mf_rank_table(p: u32, weight: i64, a_p: Rational64, j_min: i64, j_max: i64, prec: i64) -> Result<RankTable, CliError> {
    if j_min > j_max {
        return Err(CliError::Usage(format!("jmin {j_min} exceeds jmax {j_max}")));
    }
    if j_min.abs().max(j_max.abs()) > MAX_TWIST {
        return Err(CliError::Usage(format!("twists are supported for |j| <= {MAX_TWIST}")));
    }
    let k = UnramifiedField::qp(p, prec)?;
    let m = modular_form_module(&k, weight, a_p, None)?;
    let f = k.degree();
    let mut rows = Vec::new();
    for j in j_min..=j_max {
        let t = m.twist(j);
        let dim_fil1 = fil1(&t)?.dim();
        let rank = universal_norm_rank(&t)?;
        if rank != f * dim_fil1 {
            return Err(CliError::Internal(format!("rank {rank} != f·dim Fil¹ = {} at j = {j}", f * dim_fil1)));
        }
        rows.push(RankRow { j, dim_fil1, rank });
    }
    if rows.windows(2).any(|w| w[1].rank < w[0].rank) {
        return Err(CliError::Internal("rank decreases in j".into()));
    }
    Ok(RankTable { p, weight, a_p: a_p.to_string(), f, rows })
}

impl RankTable {
    pub fn tsv(&self) -> String {
        let mut s = String::from("j\tdim_fil1\trank\n");
        for r in &self.rows {
            writeln!(s, "{}\t{}\t{}", r.j, r.dim_fil1, r.rank).unwrap();
        }
        s
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.rank).collect()
    }
}
