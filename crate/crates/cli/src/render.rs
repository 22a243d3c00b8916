//! Human-readable reports.

use std::fmt::Write;

use reebmult::catalog::CrossEntry;
use reebmult::certify::{BoundReport, CertificateAnalysis};
use reebmult::homology::{self, BaseManifold};
use reebmult::jump::{JumpCertificate, VerifyReport};
use reebmult::rational::{fmt_rational, Rational};
use reebmult::PathModel;

fn mark(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn list<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

pub fn index_table(path: &PathModel, slope: &Rational, rows: &[(u64, i64, Rational, bool)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "half_dim = {}, nondeg_bound = {}", path.half_dim(), path.nondeg_bound());
    let _ = writeln!(out, "mean index per iterate = {}", fmt_rational(slope));
    let _ = writeln!(out, "{:>8}  {:>8}  {:>16}  good", "k", "cz", "mean index");
    for (k, mu, mean, good) in rows {
        let _ = writeln!(out, "{k:>8}  {mu:>8}  {:>16}  {}", fmt_rational(mean), if *good { "yes" } else { "no" });
    }
    out
}

pub fn verification(cert: &JumpCertificate, report: &VerifyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "d+ = {}, k+ = ({})", cert.d_plus, list(&cert.k_plus));
    let _ = writeln!(out, "d- = {}, k- = ({})", cert.d_minus, list(&cert.k_minus));
    let _ = writeln!(
        out,
        "eta = {}, ell0 = {}, divisor = {}",
        fmt_rational(&cert.params.eta),
        cert.params.ell0,
        cert.params.divisor
    );
    for check in &report.checks {
        let _ = writeln!(out, "  {:<16} {}", check.name, mark(check.passed));
    }
    match report.first_failure() {
        None => out.push_str("certificate verified\n"),
        Some(f) => {
            let _ = writeln!(
                out,
                "verification failed at {}: {}",
                f.name,
                f.counterexample.as_deref().unwrap_or("no detail")
            );
        }
    }
    out
}

pub fn hc_table(base: &BaseManifold, chi: &Rational, ranks: &[(i64, u64)]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "n = {}, c_B = {}, chi(B) = {}",
        base.n(),
        base.chern_min(),
        base.euler_characteristic()
    );
    let derived = if homology::mean_euler_char_is_derived(base) { " (derived)" } else { "" };
    let _ = writeln!(out, "mean Euler characteristic = {}{derived}", fmt_rational(chi));
    for w in base.hypothesis_warnings() {
        let _ = writeln!(out, "warning: {w}");
    }
    let _ = writeln!(out, "{:>8}  rank", "degree");
    for (m, r) in ranks {
        let _ = writeln!(out, "{m:>8}  {r}");
    }
    out
}

fn analysis(out: &mut String, side: &str, a: &CertificateAnalysis) {
    let w = &a.window;
    let c = &w.counts;
    let _ = writeln!(out, "window {side}: d = {}, k = ({})", w.d, list(&w.k));
    let _ = writeln!(
        out,
        "  alternating sum: enumerated {}, closed form {}; homology {}; slack {}",
        w.enumerated, w.closed_form, a.homology_sum, a.morse_slack
    );
    let _ = writeln!(
        out,
        "  r^e = ({}, {}), r^o = ({}, {}), coincidences {}",
        c.r_e_plus, c.r_e_minus, c.r_o_plus, c.r_o_minus, w.coincidences
    );
    let _ = writeln!(
        out,
        "  lemma: enumerated {}, weighted {}, mean {}{}",
        a.lemma.enumerated,
        fmt_rational(&a.lemma.weighted),
        fmt_rational(&a.lemma.mean_euler),
        a.lemma.closed.map(|c| format!(", closed {c}")).unwrap_or_default()
    );
}

pub fn bound_report(report: &BoundReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", report.verdict);
    let _ = writeln!(out, "orbits: {}, n = {}", report.orbit_count, report.n);
    let res = &report.resonance;
    let _ = writeln!(
        out,
        "resonance: {} = {}{} (residual {})",
        fmt_rational(&res.lhs),
        fmt_rational(&res.rhs),
        if res.rhs_derived { " (derived)" } else { "" },
        fmt_rational(&res.residual)
    );
    let _ = writeln!(
        out,
        "eta = {}, divisor = {}, ell0 = {}",
        fmt_rational(&report.eta),
        report.divisor,
        report.ell0
    );
    if let Some(cert) = &report.certificate {
        let _ = writeln!(out, "certificate: d+ = {}, k+ = ({})", cert.d_plus, list(&cert.k_plus));
        let _ = writeln!(out, "             d- = {}, k- = ({})", cert.d_minus, list(&cert.k_minus));
    }
    for (side, a) in [("+", &report.plus), ("-", &report.minus)] {
        if let Some(a) = a {
            analysis(&mut out, side, a);
        }
    }
    if report.plus.is_some() {
        let _ = writeln!(
            out,
            "implied bound: 2 * {} + {} = {} ({} non-hyperbolic witnesses)",
            report.lower_estimate, report.homology_term, report.implied_bound, report.nonhyperbolic_witnesses
        );
    }
    out.push_str("checks:\n");
    for (name, ok) in &report.checks {
        let _ = writeln!(out, "  {name:<26} {}", mark(*ok));
    }
    if let Some(first) = report.first_violation() {
        let _ = writeln!(out, "first violation: {first}");
    }
    out
}

pub fn catalog_entries(entries: &[CrossEntry]) -> String {
    let mut out = String::from("Recomputed instances\n\n");
    for e in entries {
        let _ = writeln!(
            out,
            "{:<10} n = {:<3} r_B = {:<4} r_nonhyp = {:<4} c_B = {:<3} {}",
            e.name,
            e.base.n(),
            e.r_b,
            e.r_nonhyp,
            e.c_b,
            if e.consistent() { "consistent" } else { "INCONSISTENT" }
        );
    }
    out
}
