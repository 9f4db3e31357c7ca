use std::process::Command;

use fracfem::fraccalc::rl_integral_power;
use fracfem_cli::{
    csv_rows, emit_table, parse_csv, run_experiment, CsvRow, ExampleKind, ExperimentConfig, Expr, GradingKind,
    MethodKind, OutputFormat, QKind, CSV_HEADER,
};

fn cfg(method: MethodKind, k_min: u32, k_max: u32) -> ExperimentConfig {
    ExperimentConfig::new(vec![1.25, 1.5, 1.75], ExampleKind::A, QKind::Zero, method, k_min, k_max)
}

#[test]
fn config_json_round_trip_and_defaults() {
    let text = r#"{"alpha_list":[1.5],"example":"b","q_kind":"x_times_1mx","method":"recon","k_min":3,"k_max":5}"#;
    let c = ExperimentConfig::from_json(text).unwrap();
    assert_eq!(c.reference_m, 4096);
    assert_eq!(c.grading, GradingKind::Uniform);
    assert_eq!(c.output, OutputFormat::Csv);
    assert_eq!(ExperimentConfig::from_json(&c.to_json()).unwrap(), c);

    let graded = cfg(MethodKind::Standard, 3, 5).graded(2.0);
    let back = ExperimentConfig::from_json(&graded.to_json()).unwrap();
    assert_eq!(back, graded);
    assert!(back.to_json().contains("\"delta\": 2.0"));
}

#[test]
fn config_validation() {
    let bad = [
        r#"{"alpha_list":[1.5],"example":"a","method":"standard","k_min":6,"k_max":5}"#,
        r#"{"alpha_list":[1.5],"example":"a","method":"recon_mixed","k_min":3,"k_max":5}"#,
        r#"{"alpha_list":[2.5],"example":"a","method":"standard","k_min":3,"k_max":5}"#,
        r#"{"alpha_list":[],"example":"a","method":"standard","k_min":3,"k_max":5}"#,
        r#"{"alpha_list":[1.5],"example":"a","q_kind":"x_times_1mx","method":"recon","k_min":3,"k_max":10}"#,
        r#"{"alpha_list":[1.5],"example":"a","method":"standard","k_min":3,"k_max":5,"grading":"graded"}"#,
        r#"{"alpha_list":[1.5],"example":"custom","method":"standard","k_min":3,"k_max":5}"#,
        r#"{"alpha_list":[1.5],"example":"custom","f_expr":"x+","f_hint":0,"method":"recon","k_min":3,"k_max":5}"#,
        r#"{"alpha_list":[1.5],"example":"a","method":"standard","k_min":3,"k_max":5,"seed":1}"#,
        r#"{"alpha_list":[1.5],"example":"d","method":"standard","k_min":3,"k_max":5}"#,
    ];
    for text in bad {
        assert!(ExperimentConfig::from_json(text).is_err(), "{text}");
    }
    // the reference-size rule only applies when a reference solve is needed
    assert!(cfg(MethodKind::Standard, 5, 10).validate().is_ok());
    let mut c = cfg(MethodKind::Recon, 5, 10);
    c.q_kind = QKind::XTimes1mx;
    assert!(c.validate().is_err());
    c.reference_m = 1 << 13;
    assert!(c.validate().is_ok());
    assert!(run_experiment(&cfg(MethodKind::Standard, 6, 5)).is_err());
}

#[test]
fn expressions_build_fields() {
    let e = Expr::parse("x*(1-x)").unwrap();
    assert_eq!(e.eval(0.5), 0.25);
    let f = Expr::parse("chi(0, 0.5)").unwrap().into_field(0.0).unwrap();
    assert_eq!(f.breakpoints(), &[0.5]);
    assert_eq!(f.eval(0.25), 1.0);
    assert_eq!(f.eval(0.75), 0.0);
    let g = Expr::parse("x^-0.25").unwrap().into_field(-0.25).unwrap();
    assert!((g.eval(0.0625) - 2.0).abs() < 1e-14);
    assert!(Expr::parse("x^-0.25").unwrap().into_field(-1.5).is_err());
}

#[test]
fn custom_expressions_match_catalog() {
    let mut catalog = ExperimentConfig::new(vec![1.5], ExampleKind::B, QKind::XTimes1mx, MethodKind::Recon, 3, 5);
    catalog.reference_m = 512;
    let mut custom = catalog.clone();
    custom.example = ExampleKind::Custom;
    custom.f_expr = Some("chi(0, 0.5)".into());
    custom.f_hint = Some(0.0);
    custom.q_kind = QKind::Custom;
    custom.q_expr = Some("x - x^2".into());
    custom.q_hint = Some(0.0);
    let a = run_experiment(&catalog).unwrap();
    let b = run_experiment(&custom).unwrap();
    let (ra, rb) = (a.get(1.5).unwrap(), b.get(1.5).unwrap());
    assert!(rb.expected.is_none());
    for (x, y) in ra.rows.iter().zip(&rb.rows) {
        assert!((x.err_l2 / y.err_l2 - 1.0).abs() < 1e-6);
        assert!((x.err_mu.unwrap() / y.err_mu.unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn standard_study_has_table_shape() {
    let study = run_experiment(&cfg(MethodKind::Standard, 5, 7)).unwrap();
    assert_eq!(study.cells.len(), 3);
    for (cell, a) in study.cells.iter().zip([1.25, 1.5, 1.75]) {
        let r = cell.outcome.as_ref().unwrap();
        assert_eq!(r.alpha, a);
        assert_eq!(r.rows.iter().map(|x| x.k).collect::<Vec<_>>(), vec![5, 6, 7]);
        assert!(r.rows.iter().all(|x| x.err_mu.is_none() && x.err_l2 <= x.err_linf));
        assert_eq!(r.expected.unwrap().linf, a - 1.0);
    }
}

#[test]
fn csv_layout_and_round_trip() {
    let one = run_experiment(&ExperimentConfig::new(vec![1.5], ExampleKind::A, QKind::Zero, MethodKind::Recon, 4, 4))
        .unwrap();
    let text = emit_table(&one, OutputFormat::Csv);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_HEADER.join(","));
    assert_eq!(lines[1].split(',').nth(7), Some(""));

    let mut c = ExperimentConfig::new(vec![1.25, 1.75], ExampleKind::C, QKind::XTimes1mx, MethodKind::Recon, 3, 6);
    c.reference_m = 512;
    let study = run_experiment(&c).unwrap();
    let text = emit_table(&study, OutputFormat::Csv);
    let parsed = parse_csv(&text).unwrap();
    assert_eq!(parsed, csv_rows(&study));
    let r = study.get(1.75).unwrap();
    let rows: Vec<&CsvRow> = parsed.iter().filter(|x| x.alpha == 1.75).collect();
    for (p, row) in rows.iter().zip(&r.rows) {
        assert_eq!(p.err_l2, Some(row.err_l2));
        assert_eq!(p.err_energy, Some(row.err_energy));
        assert_eq!(p.err_linf, Some(row.err_linf));
        assert_eq!(p.err_mu, row.err_mu);
        assert_eq!(p.h, Some(row.h));
    }
    assert!(parse_csv("alpha,k\n1.5,3\n").is_err());
}

#[test]
fn markdown_blocks() {
    let study = run_experiment(&cfg(MethodKind::Recon, 5, 10)).unwrap();
    let md = emit_table(&study, OutputFormat::Markdown);
    assert_eq!(md.matches("### α = ").count(), 3);
    let data_rows = md.lines().filter(|l| l.starts_with("| ") && l.chars().nth(2).unwrap().is_ascii_digit()).count();
    assert_eq!(data_rows, 18);
    assert!(md.contains("(1.50)"));
}

#[test]
fn output_is_deterministic() {
    let mut c = ExperimentConfig::new(vec![1.6, 1.8], ExampleKind::C, QKind::XTimes1mx, MethodKind::ReconMixed, 3, 5);
    c.reference_m = 256;
    let a = emit_table(&run_experiment(&c).unwrap(), OutputFormat::Csv);
    let b = emit_table(&run_experiment(&c).unwrap(), OutputFormat::Csv);
    assert_eq!(a, b);
}

fn degenerate_constant(alpha: f64) -> f64 {
    // q ≡ c with 1 + c·I^α(x^{α−1} − x²)(1) = 0
    -1.0 / (rl_integral_power(alpha, alpha - 1.0, 1.0).unwrap() - rl_integral_power(alpha, 2.0, 1.0).unwrap())
}

#[test]
fn failing_cell_becomes_error_row() {
    let mut c = ExperimentConfig::new(vec![1.5, 1.75], ExampleKind::A, QKind::Custom, MethodKind::Recon, 3, 4);
    c.reference_m = 128;
    c.q_expr = Some(format!("{:e}", degenerate_constant(1.5)));
    c.q_hint = Some(0.0);
    let study = run_experiment(&c).unwrap();
    assert!(study.any_failed());
    assert!(study.cells[0].outcome.is_err());
    assert!(study.cells[1].outcome.is_ok());
    let text = emit_table(&study, OutputFormat::Csv);
    let rows = parse_csv(&text).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].error.as_deref().unwrap().contains("degenerate"));
    assert!(text.lines().nth(1).unwrap().starts_with("1.5,error,"));
}

fn close(a: Option<f64>, b: Option<f64>, rel: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= rel * x.abs().max(y.abs()),
        _ => false,
    }
}

#[test]
fn golden_outputs() {
    for (file, method) in [("standard_a_q0.csv", MethodKind::Standard), ("recon_a_q0.csv", MethodKind::Recon)] {
        let golden = std::fs::read_to_string(format!("{}/tests/golden/{file}", env!("CARGO_MANIFEST_DIR"))).unwrap();
        let want = parse_csv(&golden).unwrap();
        let got = csv_rows(&run_experiment(&cfg(method, 5, 10)).unwrap());
        assert_eq!(want.len(), got.len());
        for (w, g) in want.iter().zip(&got) {
            assert_eq!((w.alpha, w.k), (g.alpha, g.k));
            for (a, b) in [(w.err_l2, g.err_l2), (w.err_energy, g.err_energy), (w.err_linf, g.err_linf)] {
                assert!(close(a, b, 1e-6), "{file} k={:?}: {a:?} vs {b:?}", w.k);
            }
            for (a, b) in [(w.rate_l2, g.rate_l2), (w.rate_energy, g.rate_energy), (w.rate_linf, g.rate_linf)] {
                assert!(close(a, b, 1e-6));
            }
            // μ errors are at rounding level when q = 0
            if let (Some(a), Some(b)) = (w.err_mu, g.err_mu) {
                assert!(a < 1e-13 && b < 1e-13);
            }
        }
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_fracfem");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let status = Command::new(bin)
        .args(["--alpha", "1.5", "--method", "recon", "--levels", "3..4", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(parse_csv(&text).unwrap().len(), 2);

    let config = dir.path().join("c.json");
    let mut c = ExperimentConfig::new(vec![1.5], ExampleKind::A, QKind::Custom, MethodKind::Recon, 3, 4);
    c.reference_m = 128;
    c.q_expr = Some(format!("{:e}", degenerate_constant(1.5)));
    c.q_hint = Some(0.0);
    std::fs::write(&config, c.to_json()).unwrap();
    let run = Command::new(bin).arg("--config").arg(&config).output().unwrap();
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stdout).contains(",error,"));

    let md = Command::new(bin).arg("--config").arg(&config).args(["--q", "zero", "--format", "markdown"]).output();
    let md = md.unwrap();
    assert_eq!(md.status.code(), Some(1), "custom q_expr with q=zero is rejected");

    let bad = Command::new(bin).args(["--levels", "7..5"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("empty level range"));
}
