//! Aligned plain-text rendering of the reports.

use std::fmt::Write;

use nilricci::catalog::CatalogEntry;
use nilricci::io::basis_vector_string;
use nilricci::nice::Outcome;
use nilricci::rational::fmt_q;
use nilricci::signature::{SignSet, SignatureReport};
use nilricci::RationalMatrix;

use crate::TableRow;

fn matrix(out: &mut String, m: &RationalMatrix) {
    let cells: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(fmt_q).collect()).collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    if cells.is_empty() || m.cols() == 0 {
        out.push_str("  (empty)\n");
        return;
    }
    for row in &cells {
        out.push(' ');
        for c in row {
            let _ = write!(out, " {c:>width$}");
        }
        out.push('\n');
    }
}

pub fn entry(e: &CatalogEntry) -> String {
    let mut s = String::new();
    let labels = e.algebra.labels();
    let _ = writeln!(s, "{}  (dim {})", e.id, e.algebra.dim());
    for b in e.algebra.brackets() {
        let rhs: Vec<String> = b
            .rhs
            .iter()
            .map(|(k, c)| {
                let c = fmt_q(c);
                match c.as_str() {
                    "1" => labels[*k].clone(),
                    "-1" => format!("-{}", labels[*k]),
                    _ => format!("{c}*{}", labels[*k]),
                }
            })
            .collect();
        let _ = writeln!(s, "  [{}, {}] = {}", labels[b.i], labels[b.j], rhs.join(" + ").replace("+ -", "- "));
    }
    if let Some(b) = &e.nice_basis {
        let cols: Vec<String> = b.columns().iter().map(|c| basis_vector_string(c)).collect();
        let _ = writeln!(s, "nice basis   ({})", cols.join(", "));
    }
    if let Some(seed) = &e.nice_seed {
        let v: Vec<String> = seed.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "seed         ({})", v.join(", "));
    }
    for r in &e.recipes {
        let cols: Vec<String> = r.basis.columns().iter().map(|c| basis_vector_string(c)).collect();
        let sweep: Vec<String> = r.sweep.iter().map(|i| format!("a{}", i + 1)).collect();
        let _ = writeln!(s, "recipe       ({}) sweep {}", cols.join(", "), sweep.join(","));
    }
    if let Some(exp) = &e.expected {
        let v: Vec<String> = exp.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "signatures   {}", v.join(" "));
    }
    s
}

pub fn ricci(id: &str, r: &SignatureReport) -> String {
    let mut s = String::new();
    let [n1, n2, n3, n4] = r.splitting.sizes();
    let _ = writeln!(s, "algebra     {id}");
    let _ = writeln!(
        s,
        "signature   {}   p = {n3}, m = {}",
        r.signature, r.reduced.reduced_signature
    );
    let _ = writeln!(s, "splitting   K+ {n1}   O+ {n2}   K- {n3}   O- {n4}");
    s.push_str("Ricci form\n");
    matrix(&mut s, &r.ric_form);
    s.push_str("reduced matrix\n");
    matrix(&mut s, r.reduced.reduced());
    s
}

pub fn sign_set(id: &str, set: &SignSet) -> String {
    let mut s = String::new();
    let p = set.profile;
    let _ = writeln!(s, "{id}  n = {}  d = {}  k = {}  l = {}", p.n, p.d, p.k, p.ell);
    for t in &set.triples {
        let decs: Vec<String> = set
            .decompositions(t)
            .iter()
            .map(|(p, m)| format!("p={p} m={m}"))
            .collect();
        let _ = writeln!(s, "  {t:<10} {}", decs.join("; "));
    }
    s
}

pub fn outcomes(id: &str, outs: &[Outcome]) -> String {
    let mut s = String::new();
    for o in outs {
        match o {
            Outcome::Realized(c) => {
                let method = serde_json::to_value(c.method).ok().and_then(|v| v.as_str().map(String::from));
                let metric = match (&c.metric.diag, &c.metric.basis_change) {
                    (Some(d), Some(b)) => format!("diag({}) in ({})", d.join(", "), b.join(", ")),
                    (Some(d), None) => format!("diag({})", d.join(", ")),
                    _ => format!("gram {:?}", c.gram),
                };
                let _ = writeln!(
                    s,
                    "{id:<10} {:<9} realized   {:<14} p={} m={}  {metric}",
                    c.target.to_string(),
                    method.unwrap_or_default(),
                    c.p,
                    c.m
                );
            }
            Outcome::Unrealized { target, reason } => {
                let _ = writeln!(s, "{id:<10} {:<9} UNREALIZED {reason}", target.to_string());
            }
        }
    }
    s
}

pub fn table(rows: &[TableRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<10} {:>3} {:>5} {:>9} {:>9}  status", "algebra", "n", "|Sign|", "sign-set", "realized");
    for r in rows {
        let matches = match r.sign_set_matches() {
            Some(true) => "match",
            Some(false) => "MISMATCH",
            None => "-",
        };
        let _ = writeln!(
            s,
            "{:<10} {:>3} {:>6} {:>9} {:>9}  {}",
            r.id,
            r.dim,
            r.computed.len(),
            matches,
            format!("{}/{}", r.realized(), r.outcomes.len()),
            if r.pass() { "PASS" } else { "FAIL" }
        );
        for o in &r.outcomes {
            if let Outcome::Unrealized { target, reason } = o {
                let _ = writeln!(s, "           unrealized {target}: {reason}");
            }
        }
        if r.sign_set_matches() == Some(false) {
            let fmt = |v: &[nilricci::SignatureTriple]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            let _ = writeln!(s, "           stored   {}", fmt(r.expected.as_deref().unwrap_or_default()));
            let _ = writeln!(s, "           computed {}", fmt(&r.computed));
        }
    }
    let failed = rows.iter().filter(|r| !r.pass()).count();
    let _ = writeln!(s, "{} entries, {} PASS, {} FAIL", rows.len(), rows.len() - failed, failed);
    s
}
