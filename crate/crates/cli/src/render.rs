//! Human-readable rendering of reports.

use std::fmt::Write;

use flasque_core::classify::{Classification, PermutationVerdict, Verdict};
use flasque_core::constructions::{Param, Report};

fn set(els: &[usize]) -> String {
    let inner: Vec<String> = els.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn verdict_line(v: &Verdict) -> String {
    let mut s = format!(
        "{} ({} of {} subgroups checked)",
        if v.holds { "true" } else { "false" },
        v.checked_subgroups,
        v.total_subgroups
    );
    for w in &v.witnesses {
        let _ = write!(s, "; H1 = {:?} on {} (order {})", w.invariant_factors, set(&w.subgroup), w.order);
    }
    s
}

pub fn report(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "construction: {}", r.construction);
    if !r.parameters.is_empty() {
        let _ = writeln!(s, "parameters:");
        for (k, v) in &r.parameters {
            let v = match v {
                Param::Int(i) => i.to_string(),
                Param::Text(t) => t.clone(),
            };
            let _ = writeln!(s, "  {:<28} {}", k, v);
        }
    }
    if !r.ranks.is_empty() {
        let _ = writeln!(s, "ranks:");
        for (k, v) in &r.ranks {
            let _ = writeln!(s, "  {:<28} {}", k, v);
        }
    }
    if !r.invariant_factors.is_empty() {
        let _ = writeln!(s, "invariant factors:");
        for (k, v) in &r.invariant_factors {
            let _ = writeln!(s, "  {:<28} {:?}", k, v);
        }
    }
    if !r.verdicts.is_empty() {
        let _ = writeln!(s, "verdicts:");
        for (k, v) in &r.verdicts {
            let _ = writeln!(s, "  {:<28} {}", k, verdict_line(v));
        }
    }
    if !r.witnesses.is_empty() {
        let _ = writeln!(s, "subgroups:");
        for (k, v) in &r.witnesses {
            let list: Vec<String> = v.iter().map(|e| set(e)).collect();
            let _ = writeln!(s, "  {:<28} {}", k, if list.is_empty() { "(none)".into() } else { list.join(" ") });
        }
    }
    if let Some(sym) = &r.symbols {
        let _ = writeln!(s, "symbols (p = {}, generators {}):", sym.p, sym.generators.join(", "));
        for pt in &sym.points {
            let _ = writeln!(
                s,
                "  [{}:{}]  p w = {:?}  {{b, t}} -> {}",
                pt.point[0], pt.point[1], pt.relation, pt.verdict
            );
        }
        let _ = writeln!(s, "  base class {{b, t}}: {}", sym.base_verdict);
    }
    let _ = writeln!(s, "checks:");
    for c in &r.checks {
        let _ = writeln!(
            s,
            "  {} {:<40} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if let Some(t) = &r.timings {
        let _ = writeln!(s, "timings:");
        for (k, v) in t {
            let _ = writeln!(s, "  {:<28} {:.3} s", k, v);
        }
    }
    let _ = writeln!(s, "result: {}", if r.passed() { "PASS" } else { "FAIL" });
    s
}

pub fn classification(c: &Classification) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "lattice: {} (rank {}, group order {})", c.label, c.rank, c.group_order);
    let _ = writeln!(s, "flasque:     {}", verdict_line(&c.flasque));
    let _ = writeln!(s, "coflasque:   {}", verdict_line(&c.coflasque));
    let perm = match &c.permutation {
        PermutationVerdict::Certified { basis } => format!("certified (basis {:?})", basis),
        PermutationVerdict::Refuted { reason } => format!("refuted ({})", reason),
        PermutationVerdict::Unknown => "unknown".into(),
    };
    let _ = writeln!(s, "permutation: {}", perm);
    s
}
