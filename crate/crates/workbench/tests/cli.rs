use serde_json::Value;
use std::path::PathBuf;
use std::process::Command;

struct Run {
    code: i32,
    report: Option<Value>,
    stdout: String,
    stderr: String,
}

fn vpcsp(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_vpcsp")).args(args).output().expect("spawn vpcsp");
    let stdout = String::from_utf8(out.stdout).unwrap();
    Run {
        code: out.status.code().expect("exit code"),
        report: serde_json::from_str(&stdout).ok(),
        stdout,
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn save(name: &str, r: &Run) -> String {
    let p = scratch(name);
    std::fs::write(&p, &r.stdout).unwrap();
    p.to_str().unwrap().to_string()
}

fn cert<'a>(r: &'a Value, kind: &str) -> &'a Value {
    r["certificates"].as_array().unwrap().iter().find(|c| c["kind"] == kind).unwrap_or_else(|| panic!("no {kind} certificate"))
}

#[test]
fn valid_template_reports_a_witness() {
    let r = vpcsp(&["check-template", "--builtin", "3lin2", "--c", "1", "--s", "1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = r.report.unwrap();
    assert_eq!(rep["verdict"], "ok");
    assert_eq!(rep["result"]["valid"], true);
    assert_eq!(rep["result"]["kappa"], "1");
    assert_eq!(rep["result"]["weighting"]["output"][0]["function"], serde_json::json!([0, 1]));
}

#[test]
fn invalid_template_reports_a_counter_formula() {
    let r = vpcsp(&["check-template", "--builtin", "3lin2", "--c", "1/2", "--s", "3/4"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    let rep = r.report.as_ref().unwrap();
    assert_eq!(rep["verdict"], "negative");
    assert_eq!(rep["result"]["confirmed"], true);
    assert!(!cert(rep, "formula")["data"]["constraints"].as_array().unwrap().is_empty());
}

#[test]
fn hastad_small_case() {
    let r = vpcsp(&["fourier", "verify-hastad", "--d", "2", "--e", "1", "--delta", "1/8"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = &r.report.unwrap()["result"];
    assert_eq!(res["epsilon"], "1/32");
    assert_eq!(res["violations"], 0);
    let jobs = vpcsp(&["--jobs", "3", "fourier", "verify-hastad", "--d", "2", "--e", "1", "--delta", "1/8"]);
    assert_eq!(jobs.report.unwrap()["result"], *res);
}

#[test]
fn exit_codes() {
    assert_eq!(vpcsp(&["no-such-command"]).code, 2);
    assert_eq!(vpcsp(&["check-template", "--builtin", "nosuch"]).code, 2);
    assert_eq!(vpcsp(&["check-template", "--builtin", "3lin2", "--c", "x"]).code, 2);
    assert_eq!(vpcsp(&["pluri", "--builtin", "3lin2", "--weightings", "/nonexistent.json"]).code, 2);
    assert_eq!(vpcsp(&["fourier", "verify-hastad", "--d", "2", "--e", "1", "--delta", "3/8"]).code, 2);
    assert_eq!(vpcsp(&["--help"]).code, 0);

    let r = vpcsp(&["--max-minion-size", "3", "pol", "--builtin", "3lin2", "--arity", "3"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("resource limit"), "{}", r.stderr);
    assert!(r.report.is_none());
    assert_eq!(vpcsp(&["fourier", "verify-hastad", "--d", "5", "--e", "5"]).code, 3);
}

#[test]
fn reports_are_deterministic() {
    let args = ["--seed", "5", "check-template", "--builtin", "3lin2", "--c", "1/2", "--s", "3/4"];
    let strip = |r: Run| {
        let mut v = r.report.unwrap();
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(strip(vpcsp(&args)), strip(vpcsp(&args)));
    let hastad = ["fourier", "verify-hastad", "--d", "2", "--e", "2", "--delta", "1/4"];
    assert_eq!(strip(vpcsp(&hastad)), strip(vpcsp(&hastad)));
}

#[test]
fn certificates_reverify_in_a_separate_process() {
    let valid = vpcsp(&["check-template", "--builtin", "3lin2", "--c", "1", "--s", "1"]);
    let p = save("valid.json", &valid);
    let r = vpcsp(&["pluri", "--builtin", "3lin2", "--c", "1", "--s", "1", "--weightings", &p]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report.unwrap()["result"]["plurimorphism"], true);
    // the same weighting does not certify a template it was not built for
    let r = vpcsp(&["pluri", "--builtin", "3lin2", "--c", "1/2", "--s", "3/4", "--weightings", &p]);
    assert_eq!(r.code, 1, "{}", r.stderr);

    let invalid = vpcsp(&["check-template", "--builtin", "3lin2", "--c", "1/2", "--s", "3/4"]);
    let p = save("invalid.json", &invalid);
    let r = vpcsp(&["reduce", "classify", "--builtin", "3lin2", "--c", "1/2", "--s", "3/4", "--formula", &p]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let res = r.report.unwrap()["result"].clone();
    assert_eq!((res["yes"].clone(), res["no"].clone()), (Value::Bool(true), Value::Bool(true)));

    let dump = scratch("canonical-lp.json");
    let canon = vpcsp(&[
        "canonical",
        "--builtin",
        "3lin2",
        "--mode",
        "baby",
        "--arity",
        "1",
        "--alpha",
        "1",
        "--beta",
        "0",
        "--dump-lp",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(canon.code, 1, "{}", canon.stderr);
    assert_eq!(canon.report.as_ref().unwrap()["result"]["outcome"], "dual");
    let p = save("canonical.json", &canon);
    for input in [p.as_str(), dump.to_str().unwrap()] {
        let r = vpcsp(&["lp", "verify", "--input", input]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(r.report.unwrap()["result"]["verified"], true);
    }
    let r = vpcsp(&["pluri", "--builtin", "3lin2", "--weightings", &p]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn tampered_lp_certificate_is_rejected() {
    let dump = scratch("tamper.json");
    let canon = vpcsp(&[
        "canonical",
        "--builtin",
        "3lin2",
        "--mode",
        "baby",
        "--arity",
        "1",
        "--alpha",
        "1",
        "--beta",
        "0",
        "--dump-lp",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(canon.code, 1);
    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    let x: Vec<String> = serde_json::from_value(cert["result"]["x"].clone()).unwrap();
    let used = x.iter().position(|v| v != "0").expect("a Farkas certificate uses some row");
    cert["system"]["rows"][used]["rhs"] = Value::String("1000".into());
    std::fs::write(&dump, serde_json::to_string(&cert).unwrap()).unwrap();
    let r = vpcsp(&["lp", "verify", "--input", dump.to_str().unwrap()]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    let r = vpcsp(&["lp", "solve", "--system", dump.to_str().unwrap()]);
    assert!(r.code <= 1, "{}", r.stderr);
}

#[test]
fn reductions_chain_through_files() {
    let invalid = vpcsp(&["check-template", "--builtin", "3lin2", "--c", "1/2", "--s", "3/4"]);
    let f = save("chain-formula.json", &invalid);
    let mc = vpcsp(&["reduce", "pcsp-to-mc", "--builtin", "3lin2-crisp", "--formula", &f, "--k", "4"]);
    // the counter-formula is over the valued signature, which 3lin2-crisp shares
    assert_eq!(mc.code, 0, "{}", mc.stderr);
    let inst = scratch("chain-mc.json");
    std::fs::write(&inst, serde_json::to_string(&mc.report.unwrap()["result"]["instance"]).unwrap()).unwrap();
    let back = vpcsp(&["reduce", "mc-to-pcsp", "--builtin", "3lin2-crisp", "--instance", inst.to_str().unwrap()]);
    assert_eq!(back.code, 0, "{}", back.stderr);
    assert!(!back.report.unwrap()["result"]["formula"]["constraints"].as_array().unwrap().is_empty());
}

#[test]
fn gadgets_and_pp_definitions() {
    assert_eq!(vpcsp(&["gadget", "--target", "4lin2", "--k", "2"]).code, 0);
    assert_eq!(vpcsp(&["gadget", "--target", "4lin2", "--k", "2", "--map", "identity"]).code, 1);
    assert_eq!(vpcsp(&["gadget", "--target", "5lin2", "--k", "2"]).code, 0);
    let r = vpcsp(&["ppdef", "--source", "3lin2-crisp", "--target", "3lin2-crisp", "--psi", "phi1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report.unwrap()["result"]["verified"], true);
}

#[test]
fn template_files_match_builtins() {
    let t = vpcsp_core::zoo::klin2(3, vpcsp_core::num::q(3, 4), vpcsp_core::num::q(1, 2)).unwrap();
    let p = scratch("template.json");
    std::fs::write(&p, serde_json::to_string(&vpcsp::format::TemplateFile::from_template(&t)).unwrap()).unwrap();
    let from_file = vpcsp(&["check-template", "--template", p.to_str().unwrap()]);
    let builtin = vpcsp(&["check-template", "--builtin", "3lin2 c=3/4 s=1/2"]);
    assert_eq!(from_file.code, builtin.code);
    assert_eq!(from_file.report.unwrap()["result"], builtin.report.unwrap()["result"]);
}
