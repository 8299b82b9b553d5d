//! Exact and numeric checks of the identities behind the approximants, the
//! series for `u`, and the digamma conjecture harness.

mod binomial;
mod conjecture;
mod fq;
mod hypergeom;
mod report;
mod theorem;

pub use binomial::{check_bin_formula, check_binformula2};
pub use conjecture::{a_coeff, calibrate, conjecture_rhs, Calibration, ConjectureRow};
pub use fq::{check_base_recurrence, check_diff_equality, f_deriv, f_eval};
pub use hypergeom::{
    check_gauss_terminating, gauss_family_binomial, gauss_family_ratio, hypergeom_terminating, HyperGeomParams,
};
pub use report::{sort_reports, IdentityReport, Value, Verdict};
pub use theorem::{theorem_partial_sum, theorem_partial_sums, SumPath};

use rayon::prelude::*;

use crate::error::Result;
use crate::exactmath::{int_rat, rat, BigRat};
use crate::reference::PrecisionContext;

/// Sample points for `eps` inside `(-1, -1/2)`.
pub fn epsilon_samples() -> Vec<BigRat> {
    vec![rat(-3, 4), rat(-2, 3), rat(-5, 9)]
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// `m <= bin_formula_max_m`, `r <= bin_formula_max_r`, `eps` in `epsilons`.
    pub bin_formula_max_m: u32,
    pub bin_formula_max_r: u32,
    pub epsilons: Vec<BigRat>,
    /// `r <= j <= m <= binformula2_max_m`.
    pub binformula2_max_m: u32,
    /// Both Gauss families with `m <= gauss_max_m`.
    pub gauss_max_m: u32,
    /// Add the numeric recurrence checks at this precision.
    pub numeric: Option<PrecisionContext>,
    /// Perturb the closed form of the first Gauss grid point (negative control).
    pub corrupt: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            bin_formula_max_m: 12,
            bin_formula_max_r: 3,
            epsilons: epsilon_samples(),
            binformula2_max_m: 20,
            gauss_max_m: 15,
            numeric: None,
            corrupt: false,
        }
    }
}

impl SuiteConfig {
    /// Same grids with every `m` bound capped at `max_m`.
    pub fn with_max_m(mut self, max_m: u32) -> Self {
        self.bin_formula_max_m = max_m;
        self.binformula2_max_m = max_m;
        self.gauss_max_m = max_m;
        self
    }
}

enum Job {
    BinFormula(u32, u32, u32, BigRat),
    BinFormula2(u32, u32, u32),
    GaussRatio(u32, u32, u32, bool),
    GaussBinomial(u32, u32, u32, BigRat),
    Base(BigRat, u32, BigRat),
    Diff(u32, BigRat, u32, BigRat),
}

/// Runs every grid point (concurrently) and returns the reports in canonical
/// order: identity name, then parameters.
pub fn run_identity_suite(config: &SuiteConfig) -> Result<Vec<IdentityReport>> {
    let mut jobs = Vec::new();
    for eps in &config.epsilons {
        for m in 0..=config.bin_formula_max_m {
            for i in 0..=m {
                for r in 0..=config.bin_formula_max_r {
                    jobs.push(Job::BinFormula(m, i, r, eps.clone()));
                }
            }
        }
    }
    for m in 0..=config.binformula2_max_m {
        for j in 0..=m {
            for r in 0..=j {
                jobs.push(Job::BinFormula2(m, j, r));
            }
        }
    }
    let mut first = true;
    for m in 1..=config.gauss_max_m {
        for j in 2..=m {
            for r in 1..j {
                jobs.push(Job::GaussRatio(m, j, r, config.corrupt && first));
                first = false;
            }
        }
    }
    for eps in &config.epsilons {
        for m in 0..=config.gauss_max_m.min(config.bin_formula_max_m) {
            for i in 0..=m {
                for r in 0..=config.bin_formula_max_r {
                    jobs.push(Job::GaussBinomial(m, i, r, eps.clone()));
                }
            }
        }
    }
    if config.numeric.is_some() {
        for eps in [rat(-3, 4), rat(-2, 3)] {
            for r in 0..=1 {
                for u in [rat(1, 2), int_rat(1)] {
                    jobs.push(Job::Base(eps.clone(), r, u.clone()));
                    for j in 1..=3 {
                        jobs.push(Job::Diff(j, eps.clone(), r, u.clone()));
                    }
                }
            }
        }
    }
    let ctx = config.numeric;
    let mut reports: Vec<IdentityReport> = jobs
        .into_par_iter()
        .map(|job| match job {
            Job::BinFormula(m, i, r, eps) => check_bin_formula(m, i, r, &eps),
            Job::BinFormula2(m, j, r) => check_binformula2(m, j, r),
            Job::GaussRatio(m, j, r, corrupt) => {
                let (p, mut cf) = gauss_family_ratio(m, j, r);
                if corrupt {
                    cf += rat(1, 1000);
                }
                Ok(check_gauss_terminating(&p, &cf))
            }
            Job::GaussBinomial(m, i, r, eps) => {
                let (p, cf) = gauss_family_binomial(m, i, r, &eps);
                Ok(check_gauss_terminating(&p, &cf))
            }
            Job::Base(eps, r, u) => check_base_recurrence(&eps, r, &u, ctx.as_ref().expect("numeric context")),
            Job::Diff(j, eps, r, u) => check_diff_equality(j, &eps, r, &u, ctx.as_ref().expect("numeric context")),
        })
        .collect::<Result<_>>()?;
    sort_reports(&mut reports);
    Ok(reports)
}
