use std::process::{Command, Output};

fn rightq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rightq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tsv_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('\t'))
}

#[test]
fn normalize_prints_form_and_steps() {
    let o = rightq(&["normalize", "321/221"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("123/122 + 123/212 + 123/221 - 213/122 - 231/212"));
    assert_eq!(lines.next(), Some("steps\t4"));
}

#[test]
fn strategies_agree_from_the_command_line() {
    let first = |args: &[&str]| stdout(&rightq(args)).lines().next().unwrap().to_string();
    let left = first(&["normalize", "--system", "sq", "321/321"]);
    let right = first(&["normalize", "--system", "sq", "--strategy", "rightmost", "321/321"]);
    let random = first(&["normalize", "--system", "sq", "--strategy", "random:9", "321/321"]);
    assert_eq!(left, right);
    assert_eq!(left, random);
    assert!(left.contains("q^-1"));
}

#[test]
fn negative_leading_term_is_accepted() {
    let o = rightq(&["normalize", "-21/21 + 21/21"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("0"));
}

#[test]
fn trace_ends_with_normal_form() {
    let out = stdout(&rightq(&["trace", "321/221"]));
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.len() > 1);
    assert!(lines[..lines.len() - 1].iter().all(|l| l.starts_with("STEP ")));
    assert_eq!(*lines.last().unwrap(), "123/122 + 123/212 + 123/221 - 213/122 - 231/212");
}

#[test]
fn stats_block() {
    let out = stdout(&rightq(&["stats", "3121/1221"]));
    assert_eq!(tsv_value(&out, "inv-"), Some("-2"));
    assert_eq!(tsv_value(&out, "inv+"), Some("8"));
    assert_eq!(tsv_value(&out, "double-descents"), Some("3"));
    assert_eq!(tsv_value(&out, "irreducible"), Some("false"));
}

#[test]
fn phi_round_trip() {
    let fwd = stdout(&rightq(&["phi", "21/12 + 12/21"]));
    assert_eq!(fwd.trim(), "q*12/21 + q^-1*21/12");
    let back = stdout(&rightq(&["phi", "--inverse", fwd.trim()]));
    assert_eq!(back.trim(), "12/21 + 21/12");
}

#[test]
fn checks_pass() {
    for args in [
        &["check", "ambiguities"][..],
        &["check", "ambiguities", "--system", "sq"],
        &["check", "confluence", "--r", "3", "--max-len", "5", "--trials", "100", "--seed", "4"],
        &["check", "confluence", "--r", "2", "--max-len", "5", "--trials", "50", "--seed", "4", "--system", "sq"],
        &["check", "principle", "--r", "3", "--trials", "30", "--seed", "2"],
        &["qmm", "--r", "2", "--max-degree", "4", "--variant", "q"],
        &["basis", "--r", "2", "--degree", "3", "--q", "-5/7"],
    ] {
        let o = rightq(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn tsv_reports() {
    let out = stdout(&rightq(&["basis", "--r", "2", "--degree", "2", "--format", "tsv"]));
    assert_eq!(tsv_value(&out, "ambient_dim"), Some("16"));
    assert_eq!(tsv_value(&out, "relation_rank"), Some("3"));
    assert_eq!(tsv_value(&out, "quotient_dim"), Some("13"));
    assert_eq!(tsv_value(&out, "match"), Some("true"));

    let out = stdout(&rightq(&["qmm", "--r", "2", "--max-degree", "3", "--format", "tsv"]));
    let blocks: Vec<&str> = out.split("\n\n").collect();
    assert_eq!(blocks.len(), 5);
    assert_eq!(tsv_value(blocks[0], "passed"), Some("true"));
    assert_eq!(tsv_value(blocks[1], "normal_form"), Some("e"));
    assert!(blocks[2..].iter().all(|b| tsv_value(b, "normal_form") == Some("0")));
}

#[test]
fn usage_errors_exit_2() {
    let o = rightq(&["normalize", "21/12 +"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("byte 7"), "{err}");
    assert_eq!(rightq(&["basis", "--r", "2", "--degree", "2", "--q", "0"]).status.code(), Some(2));
    assert_eq!(rightq(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rightq(&["trace", "12/21 + 21/12"]).status.code(), Some(2));
    assert_eq!(rightq(&["normalize", "--strategy", "random:x", "1/1"]).status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let o = rightq(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("normalize"));
}
