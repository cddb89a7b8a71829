//! Report types shared by the censuses, baselines and verifications, and
//! their JSON / CSV encodings.
//!
//! Exact values serialize as `{"num": "...", "den": "..."}` so they survive
//! any JSON reader; CSV rows carry numerator and denominator columns.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::ffield::FieldDesc;
use crate::fmaps::DegreeMode;
use crate::theory::{self, to_f64, Rational};

pub const SCHEMA_VERSION: u32 = 1;

/// Number of standard errors a sampled estimate may sit from theory.
pub const Z_TOLERANCE: f64 = 5.0;

#[derive(Serialize)]
struct Exact {
    num: String,
    den: String,
}

impl From<&Rational> for Exact {
    fn from(r: &Rational) -> Self {
        Exact {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

pub(crate) fn ser_exact<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    Exact::from(r).serialize(s)
}

fn ser_exact_opt<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    r.as_ref().map(Exact::from).serialize(s)
}

fn ser_exact_map<S: Serializer>(
    m: &BTreeMap<usize, Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.to_string(), Exact::from(v))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Ge,
    Gt,
    Le,
    Lt,
}

impl Relation {
    pub fn holds(self, observed: &Rational, theory: &Rational) -> bool {
        match self {
            Relation::Eq => observed == theory,
            Relation::Ge => observed >= theory,
            Relation::Gt => observed > theory,
            Relation::Le => observed <= theory,
            Relation::Lt => observed < theory,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Lt => "<",
        }
    }

    pub fn lower(strict: bool) -> Self {
        if strict {
            Relation::Gt
        } else {
            Relation::Ge
        }
    }

    pub fn upper(strict: bool) -> Self {
        if strict {
            Relation::Lt
        } else {
            Relation::Le
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// Holds, but the bound carries no information (e.g. a negative lower bound).
    Vacuous,
    /// Soft diagnostic outside its band; never affects the exit code.
    Warn,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Vacuous => "vacuous",
            Status::Warn => "warn",
            Status::Fail => "fail",
        }
    }
}

/// One observed value checked against one theoretical value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub name: String,
    pub quantity: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, u64>,
    pub relation: Relation,
    #[serde(serialize_with = "ser_exact")]
    pub observed: Rational,
    #[serde(serialize_with = "ser_exact")]
    pub theory: Rational,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
}

impl Comparison {
    pub fn exact(
        name: &str,
        quantity: &str,
        relation: Relation,
        observed: Rational,
        theory: Rational,
        vacuous: bool,
    ) -> Self {
        let status = match (relation.holds(&observed, &theory), vacuous) {
            (false, _) => Status::Fail,
            (true, true) => Status::Vacuous,
            (true, false) => Status::Pass,
        };
        Comparison {
            name: name.to_string(),
            quantity: quantity.to_string(),
            params: BTreeMap::new(),
            relation,
            observed,
            theory,
            status,
            z_score: None,
        }
    }

    /// Compares a sample mean with standard error `stderr` against theory,
    /// allowing [`Z_TOLERANCE`] standard errors on the side the relation
    /// forbids. A sample with zero spread has no usable z-score: it passes if
    /// the relation holds exactly and is a `warn` otherwise.
    pub fn sampled(
        name: &str,
        quantity: &str,
        relation: Relation,
        observed: Rational,
        stderr: f64,
        theory: Rational,
        vacuous: bool,
    ) -> Self {
        if stderr <= 0.0 || !stderr.is_finite() {
            let mut c = Self::exact(name, quantity, relation, observed, theory, vacuous);
            if c.status == Status::Fail {
                c.status = Status::Warn;
            }
            return c;
        }
        let z = (to_f64(&observed) - to_f64(&theory)) / stderr;
        let ok = match relation {
            Relation::Eq => z.abs() <= Z_TOLERANCE,
            Relation::Ge | Relation::Gt => z >= -Z_TOLERANCE,
            Relation::Le | Relation::Lt => z <= Z_TOLERANCE,
        };
        let mut c = Self::exact(name, quantity, relation, observed, theory, vacuous);
        c.status = match (ok, vacuous) {
            (false, _) => Status::Fail,
            (true, true) => Status::Vacuous,
            (true, false) => Status::Pass,
        };
        c.z_score = Some(z);
        c
    }

    pub fn with_param(mut self, key: &str, value: u64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn k(&self) -> Option<u64> {
        self.params.get("k").copied()
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    fn describe(&self) -> String {
        format!(
            "{} {} {} {}",
            self.name,
            fmt_rational(&self.observed),
            self.relation.symbol(),
            fmt_rational(&self.theory)
        )
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    #[serde(rename = "poly")]
    Poly,
    #[serde(rename = "rat")]
    Rational,
    #[serde(rename = "baseline:random")]
    BaselineRandom,
    #[serde(rename = "baseline:quadratic")]
    BaselineQuadratic,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Poly => "poly",
            Family::Rational => "rat",
            Family::BaselineRandom => "baseline:random",
            Family::BaselineQuadratic => "baseline:quadratic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplingInfo {
    /// `uniform` or `full_support`.
    pub scheme: String,
    pub samples: u64,
    pub seed: u64,
    pub stderr_components: f64,
    pub stderr_periodic: f64,
    pub stderr_k_cycles: BTreeMap<usize, f64>,
}

/// Averaged cycle statistics over a family of maps or graphs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDesc>,
    /// Field order for censuses, vertex count for baselines.
    pub q: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, u64>,
    pub degree_mode: Option<DegreeMode>,
    pub mode: Mode,
    pub vertex_count: u64,
    pub map_count: u64,
    pub kmax: usize,
    #[serde(serialize_with = "ser_exact")]
    pub avg_components: Rational,
    #[serde(serialize_with = "ser_exact")]
    pub avg_periodic: Rational,
    #[serde(serialize_with = "ser_exact_map")]
    pub avg_k_cycles: BTreeMap<usize, Rational>,
    pub max_tail: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingInfo>,
    pub theory: Vec<Comparison>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn has_failures(&self) -> bool {
        self.theory.iter().any(Comparison::is_fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn csv_header() -> &'static str {
        "family,q,d,k,avg_num,avg_den,theory_num,theory_den,bound_status\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::csv_header());
        self.write_csv_rows(&mut out);
        out
    }

    pub fn write_csv_rows(&self, out: &mut String) {
        let d = self.d.map(|d| d.to_string()).unwrap_or_default();
        let mut rows = |key: String, quantity: &str, k: Option<u64>, avg: &Rational| {
            let matching: Vec<&Comparison> = self
                .theory
                .iter()
                .filter(|c| c.quantity == quantity && c.k() == k)
                .collect();
            if matching.is_empty() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},,,none",
                    self.family.as_str(),
                    self.q,
                    d,
                    key,
                    avg.numer(),
                    avg.denom()
                );
            }
            for c in matching {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}:{}:{}",
                    self.family.as_str(),
                    self.q,
                    d,
                    key,
                    avg.numer(),
                    avg.denom(),
                    c.theory.numer(),
                    c.theory.denom(),
                    c.name,
                    c.relation.symbol(),
                    c.status.as_str()
                );
            }
        };
        for (k, avg) in &self.avg_k_cycles {
            rows(k.to_string(), "k_cycles", Some(*k as u64), avg);
        }
        rows("components".into(), "components", None, &self.avg_components);
        rows("periodic".into(), "periodic", None, &self.avg_periodic);
    }

    pub fn failures(&self) -> Vec<String> {
        self.theory
            .iter()
            .filter(|c| c.is_fail())
            .map(Comparison::describe)
            .collect()
    }
}

/// Outcome of a verification harness: one comparison per checked case.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub schema: u32,
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDesc>,
    pub status: Status,
    pub cases: Vec<Comparison>,
}

impl Verification {
    pub fn new(check: &str, field: Option<FieldDesc>, cases: Vec<Comparison>) -> Self {
        let status = if cases.iter().any(Comparison::is_fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        Verification {
            schema: SCHEMA_VERSION,
            check: check.to_string(),
            field,
            status,
            cases,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("verification serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "check,name,quantity,params,observed_num,observed_den,relation,theory_num,theory_den,status\n",
        );
        for c in &self.cases {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                self.check,
                c.name,
                c.quantity,
                params.join(";"),
                c.observed.numer(),
                c.observed.denom(),
                c.relation.symbol(),
                c.theory.numer(),
                c.theory.denom(),
                c.status.as_str()
            );
        }
        out
    }

    pub fn failures(&self) -> Vec<String> {
        self.cases
            .iter()
            .filter(|c| c.is_fail())
            .map(|c| {
                let params: Vec<String> =
                    c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                format!("{} [{}]", c.describe(), params.join(" "))
            })
            .collect()
    }
}

/// One entry of the formula dump.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormulaValue {
    #[serde(serialize_with = "ser_exact_opt", skip_serializing_if = "Option::is_none")]
    pub value: Option<Rational>,
    #[serde(serialize_with = "ser_exact_opt", skip_serializing_if = "Option::is_none")]
    pub lower: Option<Rational>,
    #[serde(serialize_with = "ser_exact_opt", skip_serializing_if = "Option::is_none")]
    pub upper: Option<Rational>,
    #[serde(serialize_with = "ser_exact_opt", skip_serializing_if = "Option::is_none")]
    pub extra_lower: Option<Rational>,
    pub valid: bool,
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tight: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub float: Option<f64>,
}

impl FormulaValue {
    fn value(v: Rational) -> Self {
        FormulaValue {
            vacuous: false,
            value: Some(v),
            lower: None,
            upper: None,
            extra_lower: None,
            valid: true,
            tight: None,
            float: None,
        }
    }

    fn invalid() -> Self {
        FormulaValue {
            valid: false,
            ..Self::value(Rational::zero())
        }
        .without_value()
    }

    fn without_value(mut self) -> Self {
        self.value = None;
        self
    }

    fn bounds(b: &theory::BoundSet) -> Self {
        FormulaValue {
            value: None,
            lower: b.lower_applies.then(|| b.lower.clone()),
            upper: Some(b.upper.clone()),
            extra_lower: b.extra_lower.clone(),
            valid: true,
            vacuous: b.lower_applies && b.lower_vacuous,
            tight: Some(b.lower_is_tight),
            float: b.minorant,
        }
    }
}

/// Every closed form and bound evaluated at `(q, d)`, plus the per-`k` ones
/// when `k` is given.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormulaDump {
    pub schema: u32,
    pub q: u64,
    pub d: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    pub formulas: BTreeMap<String, FormulaValue>,
}

impl FormulaDump {
    pub fn build(q: u64, d: u64, k: Option<u64>) -> Self {
        use theory::*;
        let mut f = BTreeMap::new();
        let mut put = |name: &str, v: FormulaValue| {
            f.insert(name.to_string(), v);
        };
        put(
            "poly_component_bounds",
            FormulaValue::bounds(&poly_component_bounds(q, d)),
        );
        let pl = poly_periodic_lower(q, d);
        put(
            "poly_periodic_lower",
            FormulaValue {
                tight: Some(pl.tight),
                float: Some(pl.minorant),
                ..FormulaValue::value(pl.value)
            },
        );
        put(
            "rat_count_at_most",
            FormulaValue::value(int(rat_count(q, d, DegreeMode::AtMost))),
        );
        put(
            "rat_count_exactly",
            FormulaValue::value(int(rat_count(q, d, DegreeMode::Exactly))),
        );
        put("coprime_prob", FormulaValue::value(coprime_prob(q, d)));
        put(
            "rat_component_bounds",
            FormulaValue::bounds(&rat_component_bounds(q, d)),
        );
        let rl = rat_periodic_lower(q, d);
        put(
            "rat_periodic_lower",
            FormulaValue {
                vacuous: !rl.value.is_positive(),
                float: Some(rl.minorant),
                ..FormulaValue::value(rl.value)
            },
        );
        if q as usize <= crate::census::EXACT_RANDOM_LIMIT {
            let rm = random_map_stats(q);
            put(
                "random_map_components",
                FormulaValue {
                    float: Some(rm.components_asymptotic),
                    ..FormulaValue::value(rm.components_exact)
                },
            );
            put(
                "random_map_periodic",
                FormulaValue {
                    float: Some(rm.periodic_asymptotic),
                    ..FormulaValue::value(rm.periodic_exact)
                },
            );
        }
        if let Some(k) = k {
            put(
                "poly_cycle_sum",
                poly_cycle_sum(q, d, k)
                    .map(|v| FormulaValue::value(int(v)))
                    .unwrap_or_else(|_| FormulaValue::invalid()),
            );
            put(
                "poly_avg_k",
                poly_avg_k(q, d, k)
                    .map(FormulaValue::value)
                    .unwrap_or_else(|_| FormulaValue::invalid()),
            );
            put(
                "rat_k_cycle_total_bounds",
                rat_k_cycle_total_bounds(q, d, k)
                    .map(|b| FormulaValue::bounds(&b))
                    .unwrap_or_else(|_| FormulaValue::invalid()),
            );
            put(
                "rat_avg_k_bounds",
                rat_avg_k_bounds(q, d, k)
                    .map(|b| FormulaValue::bounds(&b))
                    .unwrap_or_else(|_| FormulaValue::invalid()),
            );
        }
        FormulaDump {
            schema: SCHEMA_VERSION,
            q,
            d,
            k,
            formulas: f,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("dump serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("formula,q,d,k,value_num,value_den,lower_num,lower_den,upper_num,upper_den,valid,vacuous\n");
        let split = |r: &Option<Rational>| match r {
            Some(r) => format!("{},{}", r.numer(), r.denom()),
            None => ",".to_string(),
        };
        for (name, v) in &self.formulas {
            let _ = writeln!(
                out,
                "{name},{},{},{},{},{},{},{},{}",
                self.q,
                self.d,
                self.k.map(|k| k.to_string()).unwrap_or_default(),
                split(&v.value),
                split(&v.lower),
                split(&v.upper),
                v.valid,
                v.vacuous
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::ratio;

    #[test]
    fn comparison_status() {
        let c = Comparison::exact("x", "components", Relation::Gt, ratio(3, 2), ratio(-1, 1), true);
        assert_eq!(c.status, Status::Vacuous);
        let c = Comparison::exact("x", "components", Relation::Eq, ratio(3, 2), ratio(3, 2), false);
        assert_eq!(c.status, Status::Pass);
        let c = Comparison::exact("x", "components", Relation::Lt, ratio(3, 2), ratio(3, 2), false);
        assert_eq!(c.status, Status::Fail);
    }

    #[test]
    fn sampled_comparison_uses_z_scores() {
        let c = Comparison::sampled("x", "periodic", Relation::Eq, ratio(105, 100), 0.02, ratio(1, 1), false);
        assert_eq!(c.status, Status::Pass);
        let c = Comparison::sampled("x", "periodic", Relation::Eq, ratio(120, 100), 0.02, ratio(1, 1), false);
        assert_eq!(c.status, Status::Fail);
        let c = Comparison::sampled("x", "periodic", Relation::Ge, ratio(2, 1), 0.02, ratio(1, 1), false);
        assert_eq!(c.status, Status::Pass);
    }

    #[test]
    fn exact_serialization() {
        let c = Comparison::exact("x", "k_cycles", Relation::Eq, ratio(2, 5), ratio(2, 5), false)
            .with_param("k", 2);
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains(r#""observed":{"num":"2","den":"5"}"#), "{json}");
        assert!(json.contains(r#""params":{"k":2}"#));
    }

    #[test]
    fn formula_dump_flags() {
        let dump = FormulaDump::build(9, 3, Some(5));
        assert!(!dump.formulas["poly_avg_k"].valid);
        assert!(dump.formulas["rat_component_bounds"].vacuous);
        assert_eq!(dump.formulas["rat_count_exactly"].value, Some(ratio(9i64.pow(5) * 80, 1)));
        let json = dump.to_json();
        assert!(json.ends_with('\n'));
    }
}
