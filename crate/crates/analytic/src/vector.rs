//! Vectors `Σ g_i e_i` with series coordinates in the ambient basis of a
//! filtered φ-module, and the operator `Φ = φ ⊗ φ`.

use std::sync::Arc;

use unorm_padic::CyclotomicLayer;
use unorm_phimod::FilteredPhiModule;
use unorm_series::ops::{d, phi_to, psi};
use unorm_series::{cyclotomic_evaluate, Evaluation, Tail, TruncatedSeries};

use crate::logterms::LogTerms;
use crate::AnalyticError;

#[derive(Clone, Debug)]
pub struct VectorSeries {
    module: Arc<FilteredPhiModule>,
    comps: Vec<TruncatedSeries>,
    /// Exact description of each coordinate, when known.
    structure: Option<Vec<LogTerms>>,
    psi_zero_checked: bool,
}

impl VectorSeries {
    /// Coordinates are cut to a common truncation degree.
    pub fn new(module: &Arc<FilteredPhiModule>, comps: Vec<TruncatedSeries>) -> Result<Self, AnalyticError> {
        if comps.len() != module.dim() {
            return Err(AnalyticError::Shape(format!("{} coordinates for a module of dimension {}", comps.len(), module.dim())));
        }
        if comps.iter().any(|c| **c.field() != **module.field()) {
            return Err(AnalyticError::Shape("coordinates live over a different field".into()));
        }
        let n = comps.iter().map(|c| c.trunc()).min().unwrap_or(0);
        let comps = comps.iter().map(|c| c.truncate(n)).collect();
        Ok(VectorSeries { module: module.clone(), comps, structure: None, psi_zero_checked: false })
    }

    /// From exact log-polynomial coordinates, expanded to degree `n`.
    pub fn from_log_terms(module: &Arc<FilteredPhiModule>, terms: Vec<LogTerms>, n: usize) -> Result<Self, AnalyticError> {
        let comps = terms.iter().map(|t| t.expand(n)).collect::<Result<Vec<_>, _>>()?;
        let mut g = VectorSeries::new(module, comps)?;
        g.structure = Some(terms);
        Ok(g)
    }

    pub fn zero(module: &Arc<FilteredPhiModule>, n: usize) -> Self {
        let k = module.field();
        let terms = vec![LogTerms::zero(k); module.dim()];
        VectorSeries::from_log_terms(module, terms, n).expect("zero vector")
    }

    pub fn module(&self) -> &Arc<FilteredPhiModule> {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[TruncatedSeries] {
        &self.comps
    }

    pub fn structure(&self) -> Option<&[LogTerms]> {
        self.structure.as_deref()
    }

    pub fn trunc(&self) -> usize {
        self.comps.first().map(|c| c.trunc()).unwrap_or(0)
    }

    pub fn psi_zero_checked(&self) -> bool {
        self.psi_zero_checked
    }

    pub fn is_zero(&self) -> bool {
        match &self.structure {
            Some(s) => s.iter().all(|t| t.is_zero()),
            None => self.comps.iter().all(|c| c.is_zero() && c.tail() == Tail::Zero),
        }
    }

    /// Checks `ψ(g) = 0` coordinate-wise (the `σ^{-1}` twist does not affect
    /// vanishing) and records the result.
    pub fn verify_psi_zero(&mut self) -> Result<bool, AnalyticError> {
        let ok = match &self.structure {
            Some(s) => {
                let mut ok = true;
                for t in s {
                    ok &= t.psi_is_zero()?;
                }
                ok
            }
            None => {
                let mut ok = true;
                for c in &self.comps {
                    ok &= psi(c)?.is_zero();
                }
                ok
            }
        };
        self.psi_zero_checked = ok;
        Ok(ok)
    }

    pub fn d(&self) -> Result<Self, AnalyticError> {
        let comps = self.comps.iter().map(d).collect::<Result<Vec<_>, _>>()?;
        let mut out = VectorSeries::new(&self.module, comps)?;
        if let Some(s) = &self.structure {
            out.structure = Some(s.iter().map(|t| t.d()).collect::<Result<_, _>>()?);
        }
        Ok(out)
    }

    pub fn d_pow(&self, e: usize) -> Result<Self, AnalyticError> {
        let mut g = self.clone();
        for _ in 0..e {
            g = g.d()?;
        }
        Ok(g)
    }

    /// `Φ(g)_r = Σ_c A_{rc}·φ(g_c)`, kept at the same truncation degree.
    pub fn phi_vec(&self) -> Result<Self, AnalyticError> {
        let a = self.module.phi();
        let n = self.trunc();
        let k = self.module.field();
        let images: Vec<TruncatedSeries> = self.comps.iter().map(|c| phi_to(c, n)).collect();
        let mut comps = Vec::with_capacity(self.dim());
        for r in 0..self.dim() {
            let mut acc = TruncatedSeries::from_parts(k, vec![k.exact_zero(); n + 1], Tail::Zero);
            for (c, img) in images.iter().enumerate() {
                acc = acc.add(&img.scale(a.get(r, c)));
            }
            comps.push(acc.truncate(n));
        }
        let mut out = VectorSeries::new(&self.module, comps)?;
        if let Some(s) = &self.structure {
            let images: Vec<LogTerms> = s.iter().map(|t| t.phi()).collect();
            let rows = (0..self.dim())
                .map(|r| {
                    images.iter().enumerate().fold(LogTerms::zero(k), |acc, (c, img)| acc.add(&img.scale(a.get(r, c))))
                })
                .collect();
            out.structure = Some(rows);
        }
        Ok(out)
    }

    pub fn phi_pow(&self, n: usize) -> Result<Self, AnalyticError> {
        let mut g = self.clone();
        for _ in 0..n {
            g = g.phi_vec()?;
        }
        Ok(g)
    }

    /// `g(ζ_{p^n} - 1)`, coordinate-wise; exact when the structure is known.
    pub fn evaluate(&self, layer: &Arc<CyclotomicLayer>) -> Result<Vec<Evaluation>, AnalyticError> {
        match &self.structure {
            Some(s) => s.iter().map(|t| t.evaluate(layer)).collect(),
            None => self.comps.iter().map(|c| Ok(cyclotomic_evaluate(c, layer)?)).collect(),
        }
    }
}
