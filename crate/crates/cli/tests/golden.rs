use std::process::{Command, Output};

fn polycount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycount"))
        .args(args)
        .env_remove("POLYCOUNT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn line_after<'a>(text: &'a str, prefix: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(prefix))
        .unwrap_or_else(|| panic!("no line starting with {prefix:?} in\n{text}"))
        .trim()
}

#[test]
fn decompose_collision_has_two_decompositions() {
    let out = polycount(&[
        "decompose",
        "--field",
        "3",
        "--poly",
        "x^9+x^5-x^4+x^3+x^2",
        "--left-degree",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("2 decompositions"), "{text}");
    assert!(text.contains("x^3+x^2"), "{text}");
    assert!(text.contains("x^3+2*x^2+2*x"), "{text}");
}

#[test]
fn wild_failure_exits_two() {
    let out = polycount(&[
        "decompose",
        "--field",
        "3",
        "--poly",
        "x^9-x",
        "--left-degree",
        "3",
        "--algorithm",
        "wild",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("failure"));
}

#[test]
fn brute_finds_what_wild_declines() {
    let out = polycount(&[
        "decompose",
        "--field",
        "3",
        "--poly",
        "x^9-x",
        "--left-degree",
        "3",
        "--algorithm",
        "brute",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("2 decompositions"));
}

#[test]
fn indecomposable_split() {
    let out = polycount(&[
        "decompose",
        "--field",
        "5",
        "--poly",
        "x^4+x^3",
        "--left-degree",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("indecomposable at this split"));
}

#[test]
fn non_monic_input_is_normalized() {
    let out = polycount(&[
        "decompose",
        "--field",
        "7",
        "--poly",
        "2*x^4+3",
        "--left-degree",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("normalized"), "{text}");
    assert!(text.contains("f = x^4 over"), "{text}");
}

#[test]
fn census_table_row() {
    let out = polycount(&["census", "--field", "2", "--degree", "12", "--table"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,d,count,alpha,ratio"));
    assert_eq!(lines.next(), Some("2,12,236,256,0.9218"));
    assert_eq!(lines.next(), None);
}

#[test]
fn census_table_several_degrees() {
    let out = polycount(&["census", "--field", "2", "--degree", "4,8", "--table"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, ["2,4,6,8,0.7500", "2,8,36,64,0.5625"]);
}

#[test]
fn census_verify_shows_chain() {
    let out = polycount(&["census", "--field", "3", "--degree", "9", "--verify"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(line_after(&text, "  #D"), "414");
    assert_eq!(line_after(&text, "  alpha"), "486");
    assert_eq!(line_after(&text, "chain:"), "288 < #D = 414 < alpha = 486");
    assert!(line_after(&text, "bounds:").ends_with("all hold"), "{text}");
    assert!(!text.contains("[FAIL]"), "{text}");
}

#[test]
fn census_degree_36_fits_default_budget() {
    let out = polycount(&["census", "--field", "2", "--degree", "36"]);
    assert_eq!(code(&out), 0);
    assert_eq!(line_after(&stdout(&out), "  #D"), "821600");
}

#[test]
fn census_over_budget_exits_three() {
    let out = polycount(&[
        "census", "--field", "2", "--degree", "24", "--budget", "1000",
    ]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
}

#[test]
fn census_json_is_deterministic() {
    let args = [
        "census",
        "--field",
        "4",
        "--degree",
        "8",
        "--json",
        "--workers",
        "1",
    ];
    let a = polycount(&args);
    let b = polycount(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let value: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(value["q"], 4);
    assert_eq!(value["d"], 8);
    assert!(value.get("elapsed").is_none());
}

#[test]
fn census_json_independent_of_workers() {
    let one = polycount(&[
        "census",
        "--field",
        "3",
        "--degree",
        "12",
        "--json",
        "--workers",
        "1",
    ]);
    let four = polycount(&[
        "census",
        "--field",
        "3",
        "--degree",
        "12",
        "--json",
        "--workers",
        "4",
    ]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn dickson_over_gf7() {
    let out = polycount(&["dickson", "--field", "7", "--n", "3", "--z", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "x^3+4*x");
}

#[test]
fn bluher_brute_agrees() {
    let out = polycount(&["bluher", "--field", "5", "--dexp", "1", "--brute-check"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("c = (2,1,1,0)"), "{text}");
    assert!(text.contains("closure holds"), "{text}");
    assert!(text.contains("brute agrees"), "{text}");
}

#[test]
fn ritt_second_case_round_trip() {
    let built = polycount(&[
        "ritt", "build", "--case", "second", "--field", "7", "--l", "2", "--m", "3", "--z", "3",
        "--shift", "2", "--json",
    ]);
    assert_eq!(code(&built), 0);
    let value: serde_json::Value = serde_json::from_slice(&built.stdout).unwrap();
    let f = value["tuple"]["f"]
        .as_str()
        .expect("f is a string")
        .to_owned();
    let out = polycount(&[
        "ritt", "recover", "--case", "second", "--field", "7", "--poly", &f,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(line_after(&text, "z ="), "3");
    assert_eq!(line_after(&text, "shift ="), "2");
}

#[test]
fn ritt_first_case_round_trip() {
    let built = polycount(&[
        "ritt", "build", "--case", "first", "--field", "7", "--l", "2", "--m", "5", "--w", "x^2+3",
        "--shift", "1",
    ]);
    assert_eq!(code(&built), 0);
    let text = stdout(&built);
    let f = line_after(&text, "f  =").to_owned();
    assert_eq!(line_after(&text, "classification:"), "FirstOnly");
    let out = polycount(&[
        "ritt", "recover", "--case", "first", "--field", "7", "--poly", &f, "--l", "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(line_after(&text, "w ="), "x^2+3");
    assert_eq!(line_after(&text, "shift ="), "1");
}

#[test]
fn parse_error_exits_one() {
    let out = polycount(&["decompose", "--field", "6", "--poly", "x^4"]);
    assert_eq!(code(&out), 1);
    let out = polycount(&["decompose", "--field", "5", "--poly", "x^4+*x"]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn missing_subcommand_exits_one() {
    assert_eq!(code(&polycount(&[])), 1);
    assert_eq!(code(&polycount(&["census", "--field", "2"])), 1);
}
