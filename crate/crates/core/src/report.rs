//! Structured outcome of a verification run.
//!
//! A [`Report`] collects named quantities and checks; its verdict is the
//! conjunction of the checks. Reports serialize to JSON without timestamps so
//! that identical runs give identical documents. Non-finite numbers are written
//! as the strings `"inf"`, `"-inf"` and `"nan"` so the round trip is lossless.

use serde::{Deserialize, Serialize};

use crate::bump::tau_hash;
use crate::grid::LineGrid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub n: usize,
    #[serde(with = "lossless")]
    pub h: f64,
}

impl From<&LineGrid> for GridInfo {
    fn from(g: &LineGrid) -> Self {
        Self { n: g.n(), h: g.h() }
    }
}

/// Where an input came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub name: String,
    pub seed: Option<u64>,
    pub construction: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    #[serde(with = "lossless")]
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs ≤ rhs + tolerance`
    LessEq,
    /// `lhs < rhs`
    Less,
    /// `|lhs - rhs| ≤ tolerance`
    ApproxEq,
}

impl Relation {
    pub fn holds(self, lhs: f64, rhs: f64, tolerance: f64) -> bool {
        match self {
            Relation::LessEq => lhs <= rhs + tolerance,
            Relation::Less => lhs < rhs,
            Relation::ApproxEq => (lhs - rhs).abs() <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(with = "lossless")]
    pub lhs: f64,
    #[serde(with = "lossless")]
    pub rhs: f64,
    #[serde(with = "lossless")]
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub grid: GridInfo,
    pub inputs: Vec<Provenance>,
    pub quantities: Vec<Quantity>,
    pub checks: Vec<Check>,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub tau_hash: String,
    pub pass: bool,
}

impl Report {
    pub fn new(suite: impl Into<String>, grid: &LineGrid) -> Self {
        Self {
            suite: suite.into(),
            grid: grid.into(),
            inputs: Vec::new(),
            quantities: Vec::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
            tau_hash: tau_hash(),
            pass: true,
        }
    }

    pub fn input(&mut self, name: impl Into<String>, seed: Option<u64>, construction: impl Into<String>) -> &mut Self {
        self.inputs.push(Provenance {
            name: name.into(),
            seed,
            construction: construction.into(),
        });
        self
    }

    pub fn quantity(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.quantities.push(Quantity {
            name: name.into(),
            value,
        });
        self
    }

    pub fn warn(&mut self, message: impl Into<String>) -> &mut Self {
        self.warnings.push(message.into());
        self
    }

    pub fn warn_opt(&mut self, message: Option<String>) -> &mut Self {
        if let Some(m) = message {
            self.warnings.push(m);
        }
        self
    }

    pub fn check(&mut self, name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64, relation: Relation) -> bool {
        let pass = relation.holds(lhs, rhs, tolerance);
        self.checks.push(Check {
            name: name.into(),
            lhs,
            rhs,
            tolerance,
            relation,
            pass,
        });
        self.pass &= pass;
        pass
    }

    pub fn check_le(&mut self, name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> bool {
        self.check(name, lhs, rhs, tolerance, Relation::LessEq)
    }

    pub fn check_lt(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) -> bool {
        self.check(name, lhs, rhs, 0.0, Relation::Less)
    }

    pub fn check_approx(&mut self, name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> bool {
        self.check(name, lhs, rhs, tolerance, Relation::ApproxEq)
    }

    /// A yes/no check, recorded as `1 ≈ 1` or `0 ≈ 1`.
    pub fn check_flag(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.check(name, if ok { 1.0 } else { 0.0 }, 1.0, 0.0, Relation::ApproxEq)
    }

    pub fn get_quantity(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|q| q.name == name).map(|q| q.value)
    }

    pub fn get_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Append the contents of `other`, prefixing its names with `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        let name = |s: String| if prefix.is_empty() { s } else { format!("{prefix}/{s}") };
        for mut p in other.inputs {
            p.name = name(p.name);
            self.inputs.push(p);
        }
        for mut q in other.quantities {
            q.name = name(q.name);
            self.quantities.push(q);
        }
        for mut c in other.checks {
            c.name = name(c.name);
            self.pass &= c.pass;
            self.checks.push(c);
        }
        for w in other.warnings {
            self.warnings.push(name(w));
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

pub(crate) mod lossless {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    struct F64Visitor;

    impl Visitor<'_> for F64Visitor {
        type Value = f64;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        d.deserialize_any(F64Visitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_is_conjunction() {
        let g = LineGrid::self_dual(16).unwrap();
        let mut r = Report::new("demo", &g);
        assert!(r.pass);
        assert!(r.check_le("a", 1.0, 2.0, 0.0));
        assert!(r.pass);
        assert!(!r.check_approx("b", 1.0, 1.1, 0.01));
        assert!(!r.pass);
        assert_eq!(r.failed_checks().count(), 1);
    }

    #[test]
    fn json_round_trip_keeps_non_finite_values() {
        let g = LineGrid::self_dual(16).unwrap();
        let mut r = Report::new("demo", &g);
        r.quantity("big", f64::INFINITY).quantity("tiny", 5e-324).quantity("third", 1.0 / 3.0);
        r.check_le("inf bound", 3.0, f64::INFINITY, 0.0);
        r.input("x", Some(7), "seeded");
        let back = Report::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        r.quantity("nan", f64::NAN);
        let back = Report::from_json(&r.to_json().unwrap()).unwrap();
        assert!(back.get_quantity("nan").unwrap().is_nan());
    }
}
