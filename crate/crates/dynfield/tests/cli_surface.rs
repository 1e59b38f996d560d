//! Exit-code and output contract for the binary: 0 on success (including
//! certificates that reject their instance), 2 on bad input, 3 on blown
//! budgets; `--format` switching; `--out` side channel.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dynfield"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn success_is_exit_zero() {
    let (code, stdout, _) = run(&["factor", "--field", "p=3", "--base", "t^6+t^2"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "t^6+t^2 = 1 * (t)^2 * (t^2+t+2) * (t^2+2*t+2)\n");
}

#[test]
fn negative_certificates_still_exit_zero() {
    let (code, stdout, _) = run(&[
        "certify", "family", "--field", "p=3", "--f", "1", "--g", "t", "--dexp", "1",
    ]);
    assert_eq!(code, 0, "a rejection is a successful verdict");
    assert!(stdout.contains("rejected"), "stdout: {stdout}");
}

#[test]
fn missing_flags_are_input_errors() {
    let (code, _, stderr) = run(&["factor", "--field", "p=3"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--base"), "stderr: {stderr}");

    let (code, _, stderr) = run(&["density", "--field", "p=3", "--map", "x^2+t", "--base", "t"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--Dmax"), "stderr: {stderr}");
}

#[test]
fn bad_field_descriptions_are_input_errors() {
    for field in ["p=4", "p=2", "q=9", "p=3 e=2"] {
        let (code, _, _) = run(&["factor", "--field", field, "--base", "t"]);
        assert_eq!(code, 2, "field {field:?}");
    }
}

#[test]
fn syntax_errors_carry_a_byte_position() {
    let (code, _, stderr) = run(&[
        "orbit", "--field", "p=3", "--map", "x^2+ +t", "--base", "0",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("syntax error at byte 5"), "stderr: {stderr}");
}

#[test]
fn the_map_variable_is_rejected_outside_map_context() {
    let (code, _, stderr) = run(&[
        "orbit", "--field", "p=3", "--map", "x^2+t", "--base", "x",
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("only allowed in maps"), "stderr: {stderr}");
}

#[test]
fn maps_must_have_degree_at_least_two() {
    let (code, _, _) = run(&["orbit", "--field", "p=3", "--map", "x+1", "--base", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn csv_is_only_for_tabular_commands() {
    let (code, _, stderr) = run(&["factor", "--field", "p=3", "--base", "t", "--format", "csv"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("csv"), "stderr: {stderr}");

    let (code, stdout, _) = run(&[
        "density", "--field", "p=3", "--map", "x^2+t", "--base", "t", "--Dmax", "2", "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("deg,primes,hits,bad,proportion,cumulative\n"));

    let (code, stdout, _) = run(&[
        "orbit", "--field", "p=3", "--map", "x^2+t", "--base", "0", "--N", "2", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "n,height,value\n0,0,0\n1,1,t\n2,2,t^2+t\n");
}

#[test]
fn budget_exhaustion_is_exit_three() {
    let (code, _, stderr) = run(&[
        "density", "--field", "p=3", "--map", "x^2+t", "--base", "t", "--Dmax", "4",
        "--max-steps", "3",
    ]);
    assert_eq!(code, 3);
    assert!(stderr.contains("budget"), "stderr: {stderr}");

    let (code, _, _) = run(&[
        "orbit", "--field", "p=3", "--map", "x^2+t", "--base", "0", "--N", "30",
    ]);
    assert_eq!(code, 3, "orbit heights past the cap");

    let (code, _, _) = run(&[
        "height", "--field", "p=3", "--map", "x^2+t", "--base", "0", "--N", "200",
    ]);
    assert_eq!(code, 3, "interval depth past the cap");
}

#[test]
fn out_writes_the_json_report_alongside_text_stdout() {
    let path = std::env::temp_dir().join("dynfield_cli_surface_out.json");
    let path_str = path.to_str().unwrap();
    let (code, stdout, _) = run(&[
        "orbit", "--field", "p=3", "--map", "x^2+t", "--base", "0", "--N", "3", "--out", path_str,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("   n  height  value\n"), "stdout stays text");
    let raw = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&raw).unwrap();
    assert_eq!(parsed["input"]["command"], "orbit");
    assert_eq!(parsed["input"]["seed"], 0);
    assert!(parsed["version"].is_string());
    assert_eq!(parsed["result"]["rows"].as_array().unwrap().len(), 4);
    std::fs::remove_file(&path).ok();
}

#[test]
fn help_and_version_exit_zero() {
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("Usage"));
    let (code, stdout, _) = run(&["--version"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("dynfield"));
}

#[test]
fn unknown_subcommands_and_flags_exit_two() {
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["orbit", "--nope"]);
    assert_eq!(code, 2);
}

#[test]
fn the_default_format_is_text() {
    let args = ["classify", "--field", "p=3", "--map", "(x-t)^2+t"];
    let (c1, default_out, _) = run(&args);
    let mut with_text = args.to_vec();
    with_text.extend(["--format", "text"]);
    let (c2, text_out, _) = run(&with_text);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(default_out, text_out);
}
