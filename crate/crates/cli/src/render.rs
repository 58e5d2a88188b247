use std::io::{self, Write};

use serde::Serialize;

use defectus_core::verify::SuiteSummary;
use defectus_core::{DefectReport, SmithDecomposition, Valuation};

use crate::Format;

/// One line per report; the column set is fixed.
#[derive(Serialize)]
struct ReportRow {
    m: usize,
    n: usize,
    backend: String,
    rank: usize,
    w: Valuation,
    psi: Valuation,
    #[serde(rename = "phi_A")]
    phi_a: Valuation,
    #[serde(rename = "phi_C")]
    phi_c: Option<Valuation>,
    colength: Valuation,
    delta: Option<i64>,
    checks_passed: bool,
}

const ROW_HEADER: [&str; 11] = [
    "m", "n", "backend", "rank", "w", "psi", "phi_A", "phi_C", "colength", "delta", "checks_passed",
];

impl ReportRow {
    fn new(r: &DefectReport) -> Self {
        ReportRow {
            m: r.shape.m(),
            n: r.shape.n(),
            backend: r.backend.to_string(),
            rank: r.rank,
            w: r.w,
            psi: r.psi_length,
            phi_a: r.phi_a_length,
            phi_c: r.phi_c_length,
            colength: r.conductor_colength,
            delta: r.delta,
            checks_passed: r.all_checks_pass(),
        }
    }

    fn cells(&self) -> [String; 11] {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        [
            self.m.to_string(),
            self.n.to_string(),
            self.backend.clone(),
            self.rank.to_string(),
            self.w.to_string(),
            self.psi.to_string(),
            self.phi_a.to_string(),
            opt(self.phi_c.map(|v| v.to_string())),
            self.colength.to_string(),
            opt(self.delta.map(|d| d.to_string())),
            self.checks_passed.to_string(),
        ]
    }
}

fn csv_rows<W: Write, T: Serialize>(out: &mut W, header: &[&str], rows: impl IntoIterator<Item = T>) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

fn table(out: &mut impl Write, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let widths: Vec<usize> = (0..header.len())
        .map(|j| rows.iter().map(|r| r[j].len()).chain([header[j].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for r in rows {
        writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

pub fn report(out: &mut impl Write, format: Format, r: &DefectReport) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, r)?;
            writeln!(out)
        }
        Format::Csv => csv_rows(out, &ROW_HEADER, [ReportRow::new(r)]),
        Format::Table => {
            let cells = ReportRow::new(r).cells();
            let width = ROW_HEADER.iter().map(|h| h.len()).max().unwrap_or(0);
            for (h, c) in ROW_HEADER.iter().zip(&cells) {
                writeln!(out, "{h:<width$}  {c}")?;
            }
            writeln!(out, "{:<width$}  {}", "regular_A", r.regular_a)?;
            writeln!(out, "{:<width$}  {}", "regular_C", r.regular_c)?;
            writeln!(out, "{:<width$}  {}", "w_alt", r.w_alt)?;
            for (name, ok) in &r.checks {
                writeln!(out, "{}  {name}", if *ok { "PASS" } else { "FAIL" })?;
            }
            for f in &r.findings {
                writeln!(out, "finding {}: {}", f.check, f.detail)?;
                write!(out, "{}", f.witness)?;
            }
            Ok(())
        }
    }
}

pub fn reports(out: &mut impl Write, format: Format, reports: &[DefectReport]) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in reports {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
            Ok(())
        }
        Format::Csv => csv_rows(out, &ROW_HEADER, reports.iter().map(ReportRow::new)),
        Format::Table => {
            if reports.is_empty() {
                return Ok(());
            }
            let rows: Vec<Vec<String>> = reports.iter().map(|r| ReportRow::new(r).cells().to_vec()).collect();
            table(out, &ROW_HEADER, &rows)
        }
    }
}

#[derive(Serialize)]
struct SmithOutput<'a> {
    exponents: &'a [u64],
    rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<&'a defectus_core::DvrMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right: Option<&'a defectus_core::DvrMatrix>,
}

pub fn smith(out: &mut impl Write, format: Format, s: &SmithDecomposition, transforms: bool) -> io::Result<()> {
    match format {
        Format::Json => {
            let shown = SmithOutput {
                exponents: &s.exponents,
                rank: s.rank,
                left: transforms.then_some(&s.left),
                right: transforms.then_some(&s.right),
            };
            serde_json::to_writer_pretty(&mut *out, &shown)?;
            writeln!(out)
        }
        Format::Csv => csv_rows(out, &["index", "exponent"], s.exponents.iter().enumerate().map(|(i, e)| (i + 1, e))),
        Format::Table => {
            let exps: Vec<String> = s.exponents.iter().map(u64::to_string).collect();
            writeln!(out, "rank       {}", s.rank)?;
            writeln!(out, "exponents  {}", exps.join(" "))?;
            if transforms {
                write!(out, "left\n{}right\n{}", s.left, s.right)?;
            }
            Ok(())
        }
    }
}

pub fn summary(out: &mut impl Write, format: Format, s: &SuiteSummary) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, s)?;
            writeln!(out)
        }
        Format::Csv => csv_rows(
            out,
            &["lemma", "passed", "failed", "skipped"],
            s.lemmas.iter().map(|l| (l.lemma, l.passed, l.failed, l.skipped)),
        ),
        Format::Table => {
            for l in &s.lemmas {
                let status = if l.ok() { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{status}  {:<26} {:>5} passed {:>3} failed {:>3} skipped",
                    l.lemma, l.passed, l.failed, l.skipped
                )?;
                for w in &l.witnesses {
                    writeln!(out, "      {w}")?;
                }
            }
            Ok(())
        }
    }
}
