use super::*;
use crate::problems::example_monomial_system;

fn parse(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("satura").chain(args.iter().copied())).unwrap()
}

#[test]
fn probabilities_parse_exactly() {
    assert_eq!(parse_probability("0.99").unwrap(), BigRational::new(99.into(), 100.into()));
    assert_eq!(parse_probability("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
    assert!(parse_probability("1").is_err());
    assert!(parse_probability("0").is_err());
    assert!(parse_probability("0.9x").is_err());
    assert!(parse_probability("1/0").is_err());
}

#[test]
fn unknown_flags_are_rejected() {
    let bad = Cli::try_parse_from(["satura", "gi", "--problem", "alt", "--i", "7", "--bogus"]);
    assert!(bad.is_err());
    assert!(Cli::try_parse_from(["satura", "gb"]).is_ok());
    assert!(Cli::try_parse_from(["satura", "gb", "--problem", "alt", "--file", "x.json"]).is_err());
}

#[test]
fn threads_flag_wins_and_zero_is_rejected() {
    assert_eq!(parse(&["--threads", "3", "problems", "list"]).settings().threads, 3);
    assert!(Cli::try_parse_from(["satura", "--threads", "0", "problems", "list"]).is_err());
}

#[test]
fn text_files_with_and_without_headers() {
    let sys = parse_text_file("vars: y, x\nfield: Fp:7\nx^2 - 1\ny - 2\n", None, MonomialOrder::GrevLex).unwrap();
    assert_eq!(sys.vars(), ["y", "x"]);
    assert_eq!(sys.descriptor(), FieldDescriptor::PrimeField(7));
    let sys = parse_text_file("# comment\nb*a + c2\na - 1\n", None, MonomialOrder::GrevLex).unwrap();
    assert_eq!(sys.vars(), ["b", "a", "c2"]);
    assert!(parse_text_file("1 + 2\n", None, MonomialOrder::GrevLex).is_err());
}

#[test]
fn gb_reports_count_and_basis() {
    let cli = parse(&["gb", "--problem", "conics-pstar", "--field", "Fp:32003"]);
    let rep = run(&cli).unwrap();
    assert_eq!(rep.json["standard_monomials"], 18);
    assert_eq!(rep.json["field"], "Fp:32003");
    assert_eq!(rep.rows.len(), rep.json["basis"]["polys"].as_array().unwrap().len());
}

#[test]
fn gi_single_and_table_agree() {
    let one = run(&parse(&["--seed", "5", "gi", "--problem", "monomial-example", "--i", "1", "--prime", "32003"])).unwrap();
    assert_eq!(one.json["value"], 5);
    assert_eq!(one.json["degenerate"], false);
    let table = run(&parse(&["--seed", "5", "gi", "--problem", "monomial-example", "--i", "1,0", "--prime", "32003,101"])).unwrap();
    let cells = table.json["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    assert_eq!(cells[0]["display"], "5");
    assert_eq!(cells[1]["display"], "6");
    assert_eq!(table.failures, 0);
}

#[test]
fn validation_errors_map_to_exit_two() {
    let e = run(&parse(&["gi", "--problem", "nope", "--i", "0"])).unwrap_err();
    assert_eq!(exit_code(&e), 2);
    let e = run(&parse(&["gi", "--problem", "alt", "--i", "9"])).unwrap_err();
    assert_eq!(exit_code(&e), 2);
    let e = run(&parse(&["gi", "--problem", "alt", "--i", "7", "--prime", "15"])).unwrap_err();
    assert_eq!(exit_code(&e), 2);
    let e = run(&parse(&["bounds", "--n", "2", "--g-upper", "3"])).unwrap_err();
    assert_eq!(exit_code(&e), 2);
    assert_eq!(exit_code(&Error::Timeout), 3);
}

#[test]
fn trials_conserve_and_ignore_thread_count() {
    let inst = example_monomial_system();
    let a = run_trials(&inst, 1, 101, 40, 9, TrialOptions { threads: 1, ..Default::default() }).unwrap();
    let b = run_trials(&inst, 1, 101, 40, 9, TrialOptions { threads: 4, ..Default::default() }).unwrap();
    assert_eq!(a.fingerprint(), b.fingerprint());
    assert_eq!(a.bucket_total(), 40);
    assert_eq!(a.reference, Some(5));
    let empty = run_trials(&inst, 1, 101, 0, 9, TrialOptions::default()).unwrap();
    assert_eq!((empty.successes, empty.bucket_total()), (0, 0));
}

#[test]
fn trial_csv_matches_json() {
    let inst = example_monomial_system();
    let rep = run_trials(&inst, 0, 11, 30, 2, TrialOptions { threads: 2, ..Default::default() }).unwrap();
    let json = serde_json::to_value(&rep).unwrap();
    for row in trial_rows(&rep) {
        assert_eq!(row[6], json["successes"].to_string());
        let count: usize = row[8].parse().unwrap();
        let expected = match row[7].as_str() {
            "unit" => json["unit"].as_u64().unwrap(),
            "positive_dimensional" => json["positive_dimensional"].as_u64().unwrap(),
            "timeout" => json["timeouts"].as_u64().unwrap(),
            "error" => json["errors"].as_u64().unwrap(),
            v => json["histogram"][v].as_u64().unwrap(),
        };
        assert_eq!(count as u64, expected);
    }
}

#[test]
fn checkpoint_resumes_finished_cells() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cells.jsonl");
    let inst = example_monomial_system();
    let first = gi_table(&inst, &[1], &[32003], 4, TableOptions::default(), Some(&path)).unwrap();
    assert_eq!(first.resumed, 0);
    let second = gi_table(&inst, &[1, 0], &[32003], 4, TableOptions::default(), Some(&path)).unwrap();
    assert_eq!(second.resumed, 1);
    assert_eq!(second.cell(1, 32003).unwrap(), first.cell(1, 32003).unwrap());
    assert_eq!(second.cell(0, 32003).unwrap().display, "6");
    // a torn trailing line is ignored
    std::fs::write(&path, format!("{}{{\"i\":", std::fs::read_to_string(&path).unwrap())).unwrap();
    let third = gi_table(&inst, &[1, 0], &[32003], 4, TableOptions::default(), Some(&path)).unwrap();
    assert_eq!(third.resumed, 2);
}

#[test]
fn emit_cert_picks_an_invertible_block() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.txt");
    std::fs::write(&path, "vars: x, y\nfield: Fp:7\nx^2 - 1\ny - 2\n").unwrap();
    let file = path.to_str().unwrap();
    let rep = run(&parse(&["emit-cert", "--file", file, "--d", "1"])).unwrap();
    assert_eq!(rep.json["points"], json!([["1", "2"], ["6", "2"]]));
    // y is constant on the points, so x is the second column
    assert_eq!(rep.json["columns"], json!([[0, 0], [1, 0]]));
    assert_eq!(rep.rows.len(), 2 * 2 + 2 * 2);
    let forced = run(&parse(&["emit-cert", "--file", file, "--d", "1", "--columns", "1, y"])).unwrap_err();
    assert_eq!(forced, Error::SingularSubmatrix);
    let too_low = run(&parse(&["emit-cert", "--file", file, "--d", "0"])).unwrap_err();
    assert_eq!(too_low, Error::SingularSubmatrix);
}

#[test]
fn bounds_command_reports_thresholds() {
    let degrees = "2,3,3,4,4,5,5,4,5,5,6,6,6,7,7";
    let rep = run(&parse(&["bounds", "--n", "8", "--degrees", degrees, "--g-upper", "47", "--prime-exp", "55"])).unwrap();
    assert_eq!(rep.json["discriminant_degree_bound"], "317987389440000");
    assert_eq!(rep.json["min_prime_exponent"], 55);
    assert_eq!(rep.json["success_probability"]["exact"], false);
    let e = run(&parse(&["bounds", "--n", "8", "--degrees", degrees, "--dmax", "6", "--g-upper", "47"])).unwrap_err();
    assert_eq!(exit_code(&e), 2);
}

#[test]
fn problems_export_is_the_system_file() {
    let rep = run(&parse(&["problems", "export", "--name", "monomial-example"])).unwrap();
    let text = rep.render(Format::Json);
    assert_eq!(text.trim_end(), example_monomial_system().to_file().to_json());
    let list = run(&parse(&["problems", "list"])).unwrap();
    assert_eq!(list.rows.len(), BUILTIN_NAMES.len() + 1);
}
