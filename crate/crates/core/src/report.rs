//! JSON report body shared by the CLI and the web demo.
//!
//! Output is deterministic: struct fields serialize in declaration order,
//! `input` is a sorted map, and timings only appear when asked for.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::homothety::{FalsifyOutcome, KernelCheck, TorsionCheck};
use crate::weil::{SupersingularityVerdict, WeilPolynomial};

pub const SCHEMA_ID: &str = "frobhom.report.v1";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub input: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub charpoly: Option<CharpolyJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<VerdictJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub point_counts: Option<Vec<PointCountJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub torsion_checks: Option<Vec<TorsionJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kernel_checks: Option<Vec<KernelJson>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub falsify: Option<FalsifyJson>,
    /// Non-canonical; milliseconds per step.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<BTreeMap<String, f64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharpolyJson {
    pub q: String,
    pub p: String,
    /// Little-endian decimal strings.
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub supersingular: bool,
    pub reason: Option<String>,
    pub m: Option<u64>,
    /// `[n, multiplicity]`.
    pub factors: Vec<[u64; 2]>,
    /// `[numerator, denominator, multiplicity]`.
    pub newton_slopes: Vec<[i64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCountJson {
    pub r: usize,
    pub count: String,
    pub predicted: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionJson {
    pub ell: u64,
    pub r: usize,
    pub size: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelJson {
    pub n: u64,
    pub size: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FalsifyJson {
    pub ell: u64,
    pub m_max: u64,
    /// Least `m` that works on this `E[l]`, if any.
    pub m: Option<u64>,
    pub r: Option<usize>,
    /// Always true: a congruence on one `E[l]` is not a global statement.
    pub per_ell_only: bool,
}

impl Report {
    pub fn new(input: BTreeMap<String, Value>) -> Self {
        Report { schema: SCHEMA_ID.to_string(), input, ..Default::default() }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

impl CharpolyJson {
    pub fn from_weil(w: &WeilPolynomial) -> Self {
        CharpolyJson { q: w.q().to_string(), p: w.p().to_string(), coeffs: w.poly().to_decimal_strings() }
    }

    pub fn to_weil(&self) -> Result<WeilPolynomial> {
        let parse =
            |s: &str| s.parse::<BigInt>().map_err(|_| Error::InvalidInput(format!("not a decimal integer: {s:?}")));
        let coeffs = self.coeffs.iter().map(|c| parse(c)).collect::<Result<Vec<_>>>()?;
        WeilPolynomial::new(coeffs, parse(&self.q)?)
    }
}

impl VerdictJson {
    pub fn from_verdict(v: &SupersingularityVerdict) -> Self {
        VerdictJson {
            supersingular: v.supersingular,
            reason: v.reason.map(|r| r.to_string()),
            m: v.m(),
            factors: v
                .certificate
                .iter()
                .flat_map(|c| c.factors.iter().map(|f| [f.n, f.multiplicity as u64]))
                .collect(),
            newton_slopes: v
                .newton_slopes
                .iter()
                .map(|s| [*s.value.numer(), *s.value.denom(), s.multiplicity as i64])
                .collect(),
        }
    }
}

impl From<&TorsionCheck> for TorsionJson {
    fn from(t: &TorsionCheck) -> Self {
        TorsionJson { ell: t.ell, r: t.r, size: t.size, pass: t.all_pass }
    }
}

impl From<&KernelCheck> for KernelJson {
    fn from(k: &KernelCheck) -> Self {
        KernelJson { n: k.n, size: k.size, pass: k.pass }
    }
}

impl FalsifyJson {
    pub fn from_outcome(outcome: FalsifyOutcome, ell: u64, m_max: u64) -> Self {
        let (m, r) = match outcome {
            FalsifyOutcome::HoldsAt { m, r, .. } => (Some(m), Some(r)),
            FalsifyOutcome::NoHomothetyUpTo(_) => (None, None),
        };
        FalsifyJson { ell, m_max, m, r, per_ell_only: true }
    }
}
