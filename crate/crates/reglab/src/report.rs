//! Check reports with exact rationals rendered as `"p/q"`.

use std::collections::BTreeMap;

use reglab_core::regulator::{IdentityReport, RegulatorConstant};
use reglab_core::{BigInt, BigRational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub factorization: BTreeMap<String, i64>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub params: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub details: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Set when two independent computations disagreed; carries a dump.
    #[serde(skip)]
    pub fatal: Option<Value>,
}

pub fn render_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (p, q) = s.split_once('/')?;
    let p: BigInt = p.parse().ok()?;
    let q: BigInt = q.parse().ok()?;
    (q != BigInt::from(0)).then(|| BigRational::new(p, q))
}

pub fn factorization_map(c: &RegulatorConstant) -> BTreeMap<String, i64> {
    c.factorization.iter().map(|(p, e)| (p.to_string(), *e)).collect()
}

impl Report {
    pub fn new(check: &str, status: Status, seed: u64) -> Self {
        Report {
            check: check.to_string(),
            status,
            lhs: None,
            rhs: None,
            factorization: BTreeMap::new(),
            seed,
            module_digest: None,
            trial: None,
            params: BTreeMap::new(),
            details: BTreeMap::new(),
            message: None,
            fatal: None,
        }
    }

    /// A pass/fail report comparing two exact values.
    pub fn compare(check: &str, lhs: &BigRational, rhs: &BigRational, seed: u64) -> Self {
        let status = if lhs == rhs { Status::Pass } else { Status::Fail };
        Report::new(check, status, seed).with_sides(lhs, rhs)
    }

    pub fn from_bool(check: &str, ok: bool, seed: u64) -> Self {
        Report::new(check, if ok { Status::Pass } else { Status::Fail }, seed)
    }

    pub fn from_identity(r: &IdentityReport, seed: u64) -> Self {
        let status = if r.pass { Status::Pass } else { Status::Fail };
        let mut out = Report::new(r.identity.name(), status, seed).with_sides(&r.lhs, &r.rhs);
        out.details = r.details.iter().cloned().collect();
        if let Some(c) = &r.regulator {
            out.factorization = factorization_map(c);
        }
        out
    }

    pub fn from_error(check: &str, err: &reglab_core::Error, seed: u64) -> Self {
        let mut r = Report::new(check, Status::Error, seed);
        r.message = Some(err.to_string());
        if matches!(err, reglab_core::Error::Internal(_)) {
            r.fatal = Some(Value::Null);
        }
        r
    }

    pub fn with_sides(mut self, lhs: &BigRational, rhs: &BigRational) -> Self {
        self.lhs = Some(render_rational(lhs));
        self.rhs = Some(render_rational(rhs));
        self
    }

    pub fn with_digest(mut self, digest: &str) -> Self {
        self.module_digest = Some(digest.to_string());
        self
    }

    pub fn with_trial(mut self, trial: usize) -> Self {
        self.trial = Some(trial);
        self
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn detail(mut self, key: &str, value: impl ToString) -> Self {
        self.details.insert(key.to_string(), value.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

impl Summary {
    pub fn of(reports: &[Report]) -> Self {
        let mut s = Summary { total: reports.len(), ..Summary::default() };
        for r in reports {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }

    pub fn all_passed(&self) -> bool {
        self.pass == self.total
    }
}
