use std::fmt::Write as _;

use crate::config::OutputFormat;
use crate::experiment::StudyReport;
use crate::CliError;
use fracfem::analysis::mean_rate;
use fracfem::ConvergenceReport;

pub const CSV_HEADER: [&str; 14] = [
    "alpha",
    "k",
    "h",
    "err_l2",
    "err_energy",
    "err_linf",
    "err_mu",
    "rate_l2",
    "rate_energy",
    "rate_linf",
    "rate_mu",
    "expected_l2",
    "expected_energy",
    "expected_linf",
];

/// One CSV line. A failed cell is a single line with `error` set and every
/// numeric field empty.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub alpha: f64,
    pub k: Option<u32>,
    pub h: Option<f64>,
    pub err_l2: Option<f64>,
    pub err_energy: Option<f64>,
    pub err_linf: Option<f64>,
    pub err_mu: Option<f64>,
    pub rate_l2: Option<f64>,
    pub rate_energy: Option<f64>,
    pub rate_linf: Option<f64>,
    pub rate_mu: Option<f64>,
    pub expected_l2: Option<f64>,
    pub expected_energy: Option<f64>,
    pub expected_linf: Option<f64>,
    pub error: Option<String>,
}

impl CsvRow {
    fn failed(alpha: f64, msg: &str) -> Self {
        Self {
            alpha,
            k: None,
            h: None,
            err_l2: None,
            err_energy: None,
            err_linf: None,
            err_mu: None,
            rate_l2: None,
            rate_energy: None,
            rate_linf: None,
            rate_mu: None,
            expected_l2: None,
            expected_energy: None,
            expected_linf: None,
            error: Some(msg.to_string()),
        }
    }
}

fn report_rows(r: &ConvergenceReport) -> Vec<CsvRow> {
    let (l2, en, inf, mu) = (r.rates_l2(), r.rates_energy(), r.rates_linf(), r.rates_mu());
    let prev = |v: &[Option<f64>], i: usize| if i == 0 { None } else { v[i - 1] };
    r.rows
        .iter()
        .enumerate()
        .map(|(i, row)| CsvRow {
            alpha: r.alpha,
            k: Some(row.k),
            h: Some(row.h),
            err_l2: Some(row.err_l2),
            err_energy: Some(row.err_energy),
            err_linf: Some(row.err_linf),
            err_mu: row.err_mu,
            rate_l2: prev(&l2, i),
            rate_energy: prev(&en, i),
            rate_linf: prev(&inf, i),
            rate_mu: if row.err_mu.is_some() { prev(&mu, i) } else { None },
            expected_l2: r.expected.map(|e| e.l2),
            expected_energy: r.expected.map(|e| e.energy),
            expected_linf: r.expected.map(|e| e.linf),
            error: None,
        })
        .collect()
}

/// The lines that [`emit_table`] writes in CSV mode.
pub fn csv_rows(study: &StudyReport) -> Vec<CsvRow> {
    study
        .cells
        .iter()
        .flat_map(|c| match &c.outcome {
            Ok(r) => report_rows(r),
            Err(msg) => vec![CsvRow::failed(c.alpha, msg)],
        })
        .collect()
}

// `{:e}` is the shortest representation that parses back to the same f64.
fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn emit_table(study: &StudyReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => emit_csv(study),
        OutputFormat::Markdown => emit_markdown(study),
    }
}

fn emit_csv(study: &StudyReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in csv_rows(study) {
        let record = match &r.error {
            Some(msg) => {
                let mut v = vec![String::new(); CSV_HEADER.len()];
                v[0] = format!("{}", r.alpha);
                v[1] = "error".into();
                v[3] = msg.clone();
                v
            }
            None => vec![
                format!("{}", r.alpha),
                r.k.map(|k| k.to_string()).unwrap_or_default(),
                num(r.h),
                num(r.err_l2),
                num(r.err_energy),
                num(r.err_linf),
                num(r.err_mu),
                num(r.rate_l2),
                num(r.rate_energy),
                num(r.rate_linf),
                num(r.rate_mu),
                num(r.expected_l2),
                num(r.expected_energy),
                num(r.expected_linf),
            ],
        };
        w.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// Reads CSV produced by [`emit_table`].
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, CliError> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(|e| CliError::Csv(e.to_string()))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::Csv(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| CliError::Csv(e.to_string()))?;
        let field = |i: usize| -> Result<Option<f64>, CliError> {
            let s = &rec[i];
            if s.is_empty() {
                return Ok(None);
            }
            s.parse().map(Some).map_err(|_| CliError::Csv(format!("bad number '{s}' in column {}", CSV_HEADER[i])))
        };
        let alpha = field(0)?.ok_or_else(|| CliError::Csv("missing alpha".into()))?;
        if &rec[1] == "error" {
            out.push(CsvRow::failed(alpha, &rec[3]));
            continue;
        }
        let k = rec[1].parse().map_err(|_| CliError::Csv(format!("bad level '{}'", &rec[1])))?;
        out.push(CsvRow {
            alpha,
            k: Some(k),
            h: field(2)?,
            err_l2: field(3)?,
            err_energy: field(4)?,
            err_linf: field(5)?,
            err_mu: field(6)?,
            rate_l2: field(7)?,
            rate_energy: field(8)?,
            rate_linf: field(9)?,
            rate_mu: field(10)?,
            expected_l2: field(11)?,
            expected_energy: field(12)?,
            expected_linf: field(13)?,
            error: None,
        });
    }
    Ok(out)
}

fn emit_markdown(study: &StudyReport) -> String {
    let mut s = String::new();
    for cell in &study.cells {
        let _ = writeln!(s, "### α = {}\n", cell.alpha);
        let r = match &cell.outcome {
            Ok(r) => r,
            Err(msg) => {
                let _ = writeln!(s, "failed: {msg}\n");
                continue;
            }
        };
        let with_mu = r.rows.iter().all(|row| row.err_mu.is_some());
        let mut head = vec!["k", "L2", "rate", "energy", "rate", "Linf", "rate"];
        if with_mu {
            head.extend(["mu", "rate"]);
        }
        let _ = writeln!(s, "| {} |", head.join(" | "));
        let _ = writeln!(s, "|{}", "---|".repeat(head.len()));
        let rates = [r.rates_l2(), r.rates_energy(), r.rates_linf(), r.rates_mu()];
        let rate = |v: &[Option<f64>], i: usize| match i.checked_sub(1).and_then(|j| v[j]) {
            Some(x) => format!("{x:.2}"),
            None => String::new(),
        };
        for (i, row) in r.rows.iter().enumerate() {
            let mut cols = vec![
                row.k.to_string(),
                format!("{:.3e}", row.err_l2),
                rate(&rates[0], i),
                format!("{:.3e}", row.err_energy),
                rate(&rates[1], i),
                format!("{:.3e}", row.err_linf),
                rate(&rates[2], i),
            ];
            if with_mu {
                cols.push(format!("{:.3e}", row.err_mu.unwrap_or(f64::NAN)));
                cols.push(rate(&rates[3], i));
            }
            let _ = writeln!(s, "| {} |", cols.join(" | "));
        }
        let summary = |errs: Vec<f64>, expected: Option<f64>| {
            let mean = mean_rate(&errs, 0).map(|m| format!("≈ {m:.2}")).unwrap_or_else(|| "n/a".into());
            match expected {
                Some(e) => format!("{mean} ({e:.2})"),
                None => mean,
            }
        };
        let e = r.expected;
        let mut cols = vec![
            "rate".to_string(),
            String::new(),
            summary(r.column(|x| x.err_l2), e.map(|e| e.l2)),
            String::new(),
            summary(r.column(|x| x.err_energy), e.map(|e| e.energy)),
            String::new(),
            summary(r.column(|x| x.err_linf), e.map(|e| e.linf)),
        ];
        if with_mu {
            cols.push(String::new());
            cols.push(summary(r.column(|x| x.err_mu.unwrap_or(0.0)), e.and_then(|e| e.mu)));
        }
        let _ = writeln!(s, "| {} |\n", cols.join(" | "));
    }
    s
}
