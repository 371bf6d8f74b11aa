//! Human-readable renderings. Never parsed back.

use std::fmt::Write;

use blockscope::blocks::BlockReport;
use blockscope::chartab::CharacterTable;
use blockscope::correspond::CorrespondenceResult;
use blockscope::verify::{CorpusReport, Verdict, VerificationReport, Witness};

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Inapplicable => "N/A",
        Verdict::Finding => "FINDING",
    }
}

pub fn table(t: &CharacterTable) -> String {
    let r = t.num_classes();
    let cells: Vec<Vec<String>> =
        std::iter::once((0..r).map(|k| format!("{}", t.classes().element_order(k))).collect())
            .chain(std::iter::once(
                (0..r).map(|k| format!("{}", t.class_size(k))).collect(),
            ))
            .chain(
                t.irreducibles()
                    .iter()
                    .map(|chi| chi.values().iter().map(|v| v.to_string()).collect()),
            )
            .collect();
    let widths: Vec<usize> = (0..r)
        .map(|k| cells.iter().map(|row| row[k].len()).max().unwrap_or(1))
        .collect();
    let mut out = format!("order {}, {} classes, exponent {}\n", t.order(), r, t.exponent());
    let labels = ["ord".to_string(), "size".to_string()];
    for (i, row) in cells.iter().enumerate() {
        let label = labels.get(i).cloned().unwrap_or_else(|| format!("X{}", i - 2));
        let _ = write!(out, "{label:>5} ");
        for (k, cell) in row.iter().enumerate() {
            let _ = write!(out, " {cell:>w$}", w = widths[k]);
        }
        out.push('\n');
    }
    out
}

pub fn blocks(b: &BlockReport) -> String {
    let mut out = format!("p = {}: {} blocks", b.p, b.blocks.len());
    if let Some(f) = &b.residue_field {
        let _ = write!(out, " (central characters reduced into {f})");
    }
    out.push('\n');
    for (i, e) in b.blocks.iter().enumerate() {
        let _ = writeln!(
            out,
            "  B{i}: defect {}, members {:?}, degrees {:?}, heights {:?}, p-rational {:?}",
            e.defect, e.members, e.degrees, e.heights, e.p_rational
        );
    }
    out
}

pub fn correspondence(res: &CorrespondenceResult) -> String {
    let mut out = format!(
        "|G| = {}, |C| = {}, |N| = {}; {} invariant characters\n",
        res.table_g.order(),
        res.c.order(),
        res.table_n.order(),
        res.pairs.len()
    );
    for q in &res.pairs {
        let _ = writeln!(
            out,
            "  chi_{} -> chi*_{}  (degree {}, e = {})",
            q.chi, q.star, q.degree, q.e
        );
    }
    out
}

pub fn report(r: &VerificationReport) -> String {
    let name = r
        .inputs
        .get("group")
        .and_then(|v| v.as_str())
        .map(str::to_string)
        .unwrap_or_else(|| format!("order {}", r.inputs.get("order").cloned().unwrap_or_default()));
    let p = r.inputs.get("p").map(|p| format!(" p={p}")).unwrap_or_default();
    let mut out = format!("{} {}{}: {}", r.target, name, p, verdict(r.verdict));
    if let Some(reason) = &r.reason {
        let _ = write!(out, " ({reason})");
    }
    out.push('\n');
    for w in &r.witnesses {
        let line = match w {
            Witness::Character {
                group,
                index,
                degree,
                role,
                ..
            } => {
                format!("character {index} of {group}, degree {degree}: {role}")
            }
            Witness::Subgroup { role, order, .. } => format!("subgroup of order {order}: {role}"),
            Witness::Diagnostic { message } => message.clone(),
        };
        let _ = writeln!(out, "    {line}");
    }
    out
}

pub fn corpus(r: &CorpusReport) -> String {
    let s = &r.summary;
    let mut out = format!(
        "{} items ({} skipped), {} errors, {} pin mismatches\n",
        s.items, s.skipped, s.errors, s.pin_mismatches
    );
    for (target, t) in &s.by_target {
        let _ = writeln!(
            out,
            "  {target}: {} pass, {} fail, {} inapplicable, {} findings",
            t.pass, t.fail, t.inapplicable, t.finding
        );
    }
    for item in &r.items {
        if let Some(e) = &item.error {
            let _ = writeln!(out, "  ERROR {}: {e}", item.name);
        }
        for m in &item.pin_mismatches {
            let _ = writeln!(out, "  PIN {}: {m}", item.name);
        }
        for rep in item
            .reports
            .iter()
            .filter(|x| matches!(x.verdict, Verdict::Fail | Verdict::Finding))
        {
            out.push_str("  ");
            out.push_str(&report(rep));
        }
    }
    out
}
