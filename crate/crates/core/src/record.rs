//! Line-oriented `key=value` records.
//!
//! A record is a run of `key=value` lines; records are separated by a blank
//! line. Lists are comma-separated and rationals are written `p/q`. Keys use
//! `[A-Za-z0-9_.+-]`; values may hold anything except a line break.

use std::fmt;
use std::str::FromStr;

use crate::certify::{BoundReport, CertificateAnalysis, Resonance, Verdict};
use crate::error::{Error, Result};
use crate::jump::{JumpCertificate, JumpParams, VerifyReport};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Record {
    fields: Vec<(String, String)>,
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'+' | b'-'))
}

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a field. Panics on a malformed key or a value with a line break,
    /// both of which are programming errors.
    pub fn push(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        let value = value.to_string();
        assert!(valid_key(key), "invalid record key {key:?}");
        assert!(!value.contains(['\n', '\r']), "record value for {key} spans lines");
        self.fields.push((key.to_string(), value));
        self
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.push(key, value);
        self
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| Error::Parse(format!("record lacks field {key:?}")))
    }

    pub fn parse<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|_| Error::Parse(format!("field {key}: cannot parse {raw:?}")))
    }

    pub fn rational(&self, key: &str) -> Result<Rational> {
        rational::parse_rational(self.require(key)?)
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Vec<T>> {
        parse_list(self.require(key)?)
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.fields {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Record {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut records = parse_records(text)?;
        match records.len() {
            1 => Ok(records.remove(0)),
            n => Err(Error::Parse(format!("expected one record, found {n}"))),
        }
    }
}

pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    let mut current = Record::new();
    for (no, line) in text.lines().enumerate() {
        if line.is_empty() {
            if !current.fields.is_empty() {
                out.push(std::mem::take(&mut current));
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", no + 1)))?;
        if !valid_key(key) {
            return Err(Error::Parse(format!("line {}: invalid key {key:?}", no + 1)));
        }
        current.fields.push((key.to_string(), value.to_string()));
    }
    if !current.fields.is_empty() {
        out.push(current);
    }
    Ok(out)
}

pub fn write_records(records: &[Record]) -> String {
    records
        .iter()
        .map(Record::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn join_list<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_list<T: FromStr>(raw: &str) -> Result<Vec<T>> {
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|item| {
            item.parse()
                .map_err(|_| Error::Parse(format!("cannot parse list item {item:?}")))
        })
        .collect()
}

impl From<&JumpCertificate> for Record {
    fn from(c: &JumpCertificate) -> Self {
        Record::new()
            .with("record", "certificate")
            .with("d_plus", c.d_plus)
            .with("k_plus", join_list(&c.k_plus))
            .with("d_minus", c.d_minus)
            .with("k_minus", join_list(&c.k_minus))
            .with("eta", rational::fmt_rational(&c.params.eta))
            .with("ell0", c.params.ell0)
            .with("divisor", c.params.divisor)
    }
}

impl TryFrom<&Record> for JumpCertificate {
    type Error = Error;

    fn try_from(r: &Record) -> Result<Self> {
        let params = JumpParams::new(r.rational("eta")?, r.parse("ell0")?, r.parse("divisor")?, 1);
        Ok(JumpCertificate {
            d_plus: r.parse("d_plus")?,
            k_plus: r.list("k_plus")?,
            d_minus: r.parse("d_minus")?,
            k_minus: r.list("k_minus")?,
            params,
        })
    }
}

impl From<&VerifyReport> for Record {
    fn from(report: &VerifyReport) -> Self {
        let mut r = Record::new().with("record", "verification");
        for check in &report.checks {
            r.push(&format!("check.{}", check_key(check.name)), if check.passed { "pass" } else { "fail" });
        }
        if let Some(first) = report.first_failure() {
            r.push("first_failure", first.name);
            if let Some(ce) = &first.counterexample {
                r.push("counterexample", ce);
            }
        }
        r.with("passed", report.passed())
    }
}

/// `(ii)` becomes `ii`, `jump count +` becomes `jump_count_plus`.
fn check_key(name: &str) -> String {
    name.replace(" +", " plus")
        .replace(" -", " minus")
        .replace("(a) = (b)", "agreement")
        .chars()
        .filter_map(|c| match c {
            '(' | ')' => None,
            c if c.is_ascii_alphanumeric() => Some(c),
            _ => Some('_'),
        })
        .collect()
}

fn analysis_record(tag: &str, a: &CertificateAnalysis) -> Record {
    let w = &a.window;
    let c = &w.counts;
    let mut r = Record::new()
        .with("record", "window")
        .with("side", tag)
        .with("d", w.d)
        .with("top", w.top)
        .with("k", join_list(&w.k))
        .with("ell0", w.ell0)
        .with("class_a", join_list(w.classes.iter().map(|c| c.a)))
        .with("class_b1", join_list(w.classes.iter().map(|c| c.b1)))
        .with("class_b2", join_list(w.classes.iter().map(|c| c.b2)))
        .with("class_c1", join_list(w.classes.iter().map(|c| c.c1)))
        .with("class_c2", join_list(w.classes.iter().map(|c| c.c2)))
        .with("class_d", join_list(w.classes.iter().map(|c| c.d)))
        .with("c_e_plus", c.c_e_plus)
        .with("c_e_minus", c.c_e_minus)
        .with("c_o_plus", c.c_o_plus)
        .with("c_o_minus", c.c_o_minus)
        .with("r_e_plus", c.r_e_plus)
        .with("r_e_minus", c.r_e_minus)
        .with("r_o_plus", c.r_o_plus)
        .with("r_o_minus", c.r_o_minus)
        .with("window_enumerated", w.enumerated)
        .with("window_closed_form", w.closed_form)
        .with("homology_sum", a.homology_sum)
        .with("morse_slack", a.morse_slack)
        .with("lemma_enumerated", a.lemma.enumerated)
        .with("lemma_weighted", rational::fmt_rational(&a.lemma.weighted))
        .with("lemma_mean_euler", rational::fmt_rational(&a.lemma.mean_euler))
        .with("lower_estimate", a.lower_estimate);
    if let (Some(s), Some(closed)) = (a.lemma.s, a.lemma.closed) {
        r.push("s", s);
        r.push("lemma_closed", closed);
    }
    r
}

fn resonance_fields(r: &mut Record, res: &Resonance) {
    r.push("resonance_lhs", rational::fmt_rational(&res.lhs));
    r.push("resonance_rhs", rational::fmt_rational(&res.rhs));
    r.push("resonance_residual", rational::fmt_rational(&res.residual));
    r.push("resonance_rhs_derived", res.rhs_derived);
}

/// The summary record followed by one record per analysed certificate.
pub fn bound_report_records(report: &BoundReport) -> Vec<Record> {
    let mut head = Record::new()
        .with("record", "bound")
        .with("verdict", report.verdict)
        .with("orbits", report.orbit_count)
        .with("n", report.n)
        .with("mirrored", report.mirrored);
    resonance_fields(&mut head, &report.resonance);
    head.push("eta", rational::fmt_rational(&report.eta));
    head.push("divisor", report.divisor);
    head.push("ell0", report.ell0);
    if report.plus.is_some() {
        head.push("lower_estimate", report.lower_estimate);
        head.push("homology_term", report.homology_term);
        head.push("implied_bound", report.implied_bound);
        head.push("nonhyperbolic_witnesses", report.nonhyperbolic_witnesses);
    }
    for (name, ok) in &report.checks {
        head.push(&format!("check.{}", check_key(name)), if *ok { "pass" } else { "fail" });
    }
    if let Some(first) = report.first_violation() {
        head.push("first_violation", first);
    }
    let mut out = vec![head];
    if let Some(cert) = &report.certificate {
        out.push(Record::from(cert));
    }
    for (tag, a) in [("plus", &report.plus), ("minus", &report.minus)] {
        if let Some(a) = a {
            out.push(analysis_record(tag, a));
        }
    }
    out
}

/// Reads back the verdict of a bound record.
pub fn verdict_of(record: &Record) -> Result<Verdict> {
    record.parse("verdict")
}
