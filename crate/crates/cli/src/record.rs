use serde::{Deserialize, Serialize};

use largen::analysis::{Bracket, SeriesReport};
use largen::{BigReal, ProblemSpec, Solution};

/// Everything one solve produced, with every number as a decimal string at
/// the full working precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub potential: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub l: u32,
    pub state: u8,
    pub mass: String,
    pub digits: u32,
    pub order: usize,
    pub rho0: String,
    pub e_minus2: String,
    pub coefficients: Vec<String>,
    pub partial_sums: Vec<String>,
    pub divergence_order: Option<usize>,
    pub bracket: Option<BracketRecord>,
    pub center: Option<String>,
    pub shanks: Option<Vec<Option<String>>>,
    pub audit: Option<AuditRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketRecord {
    pub low: String,
    pub high: String,
    pub order_low: usize,
    pub order_high: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub agreeing_digits: u32,
}

/// Machine-readable failure, emitted instead of a [`RunRecord`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub error: String,
    pub message: String,
}

impl RunRecord {
    pub fn new(
        potential: &str,
        spec: &ProblemSpec,
        solution: &Solution,
        report: &SeriesReport,
        center: Option<&BigReal>,
    ) -> Self {
        let digits = spec.ctx.digits();
        let s = |v: &BigReal| v.to_sci_string(digits as usize);
        RunRecord {
            potential: potential.to_string(),
            n: spec.n,
            l: spec.l,
            state: spec.state.index(),
            mass: spec.mass.label().to_string(),
            digits,
            order: spec.order,
            rho0: s(&solution.scaled.rho0),
            e_minus2: s(&solution.energy.e_minus2),
            coefficients: solution.energy.coeffs.iter().map(s).collect(),
            partial_sums: report.partial_sums.sums.iter().map(s).collect(),
            divergence_order: report.divergence_order,
            bracket: report.bracket.as_ref().map(|b: &Bracket| BracketRecord {
                low: s(&b.low),
                high: s(&b.high),
                order_low: b.order_low,
                order_high: b.order_high,
            }),
            center: center.map(s),
            shanks: report
                .shanks
                .as_ref()
                .map(|v| v.iter().map(|e| e.value.as_ref().map(s)).collect()),
            audit: report
                .audit
                .map(|agreeing_digits| AuditRecord { agreeing_digits }),
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("record serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

impl ErrorRecord {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("record serializes");
        out.push('\n');
        out
    }
}
