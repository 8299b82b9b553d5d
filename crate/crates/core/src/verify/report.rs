use std::fmt;

use num_traits::Zero;

use crate::exactmath::BigRat;
use crate::reference::BigFloat;

/// One side of an identity, or the gap between the two sides.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(BigRat),
    Numeric(BigFloat),
}

impl Value {
    pub fn render(&self, digits: u32) -> String {
        match self {
            Self::Exact(v) => v.to_string(),
            Self::Numeric(v) => v.to_decimal_string(digits),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    ExactPass,
    NumericPass {
        tolerance: BigFloat,
    },
    Fail,
    /// Degenerate instance; never counted as a pass.
    Skipped {
        reason: String,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Self::ExactPass => "ExactPass",
            Self::NumericPass { .. } => "NumericPass",
            Self::Fail => "Fail",
            Self::Skipped { .. } => "Skipped",
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Self::Fail)
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Self::ExactPass | Self::NumericPass { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub identity: &'static str,
    /// Parameter symbols and values, in the identity's own order.
    pub params: Vec<(&'static str, BigRat)>,
    pub lhs: Option<Value>,
    pub rhs: Option<Value>,
    pub verdict: Verdict,
    /// `lhs - rhs` for exact identities, `|lhs - rhs|` for numeric ones.
    pub residual: Option<Value>,
}

impl IdentityReport {
    pub(crate) fn exact(identity: &'static str, params: Vec<(&'static str, BigRat)>, lhs: BigRat, rhs: BigRat) -> Self {
        let residual = &lhs - &rhs;
        let verdict = if residual.is_zero() {
            Verdict::ExactPass
        } else {
            Verdict::Fail
        };
        Self {
            identity,
            params,
            lhs: Some(Value::Exact(lhs)),
            rhs: Some(Value::Exact(rhs)),
            verdict,
            residual: Some(Value::Exact(residual)),
        }
    }

    pub(crate) fn numeric(
        identity: &'static str,
        params: Vec<(&'static str, BigRat)>,
        lhs: BigFloat,
        rhs: BigFloat,
        tolerance: BigFloat,
    ) -> Self {
        let residual = (&lhs - &rhs).abs();
        let verdict = if residual < tolerance {
            Verdict::NumericPass { tolerance }
        } else {
            Verdict::Fail
        };
        Self {
            identity,
            params,
            lhs: Some(Value::Numeric(lhs)),
            rhs: Some(Value::Numeric(rhs)),
            verdict,
            residual: Some(Value::Numeric(residual)),
        }
    }

    pub(crate) fn skipped(identity: &'static str, params: Vec<(&'static str, BigRat)>, reason: String) -> Self {
        Self {
            identity,
            params,
            lhs: None,
            rhs: None,
            verdict: Verdict::Skipped { reason },
            residual: None,
        }
    }

    /// `m=3;j=2;r=1`
    pub fn params_string(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub(crate) fn sort_key(&self) -> (&'static str, Vec<BigRat>) {
        (self.identity, self.params.iter().map(|(_, v)| v.clone()).collect())
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}",
            self.identity,
            self.params_string(),
            self.verdict.label()
        )
    }
}

/// Canonical order: identity name, then parameter values compared numerically.
pub fn sort_reports(reports: &mut [IdentityReport]) {
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}
