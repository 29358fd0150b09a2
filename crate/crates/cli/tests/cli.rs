use std::path::PathBuf;
use std::process::{Command, Output};

fn connint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_connint")).args(args).env_remove("CONNINT_REPORT").output().expect("spawn connint")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_string_lossy().into_owned()
}

fn output_value<'a>(text: &'a str, name: &str) -> &'a str {
    let prefix = format!("output {name} = ");
    text.lines().find_map(|l| l.strip_prefix(prefix.as_str())).unwrap_or_else(|| panic!("no output {name} in\n{text}"))
}

#[test]
fn identities_suite_passes() {
    let o = connint(&["verify", "--suite", "identities"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("status=PASS"));
}

#[test]
fn scalar_at_origin() {
    let o = connint(&["basic-integral", "--j", "0", "--gamma", "1", "--v", "0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(output_value(&text, "scalar"), "0.000000000000000e0-1.591549430918953e-1i");
}

#[test]
fn tensor_pole_is_a_failure() {
    let o = connint(&["basic-integral", "--j", "2", "--v", "0,0,0", "--alpha", "1,2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("failure basic integral"));
}

#[test]
fn model_integral_matches_closed_form() {
    let o = connint(&["model-integral", "--A", "2", "--lambda", "0.3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn divergent_model_integral_fails() {
    let o = connint(&["model-integral", "--A", "0", "--lambda", "0.3"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn table_integral_negative_h() {
    let o = connint(&["table-integral", "--h", "-0.7", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn moments_agree_across_routes() {
    let o = connint(&["moments", "--j", "1", "--k", "1", "--l", "2", "--m", "1", "--gamma", "2", "--alpha", "1", "--gamma-idx", "1"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("check measure vs jets status=PASS"));
    assert!(text.contains("check support-node fit residual status=PASS"));
}

#[test]
fn action_on_sample_prism() {
    let o = connint(&["action", "--complex", &data("single_tet.leaf"), "--data", &data("single_tet_prism.data"), "--gamma", "2"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(output_value(&text, "simplices"), "8 22 28 17 4");
}

#[test]
fn output_is_deterministic() {
    let args = ["moments", "--j", "1", "--gamma", "3", "--kernel", "holst"];
    assert_eq!(connint(&args).stdout, connint(&args).stdout);
}

#[test]
fn timing_only_on_request() {
    assert!(!stdout(&connint(&["table-integral", "--h", "0.2", "--n", "1"])).contains("wall_time"));
    assert!(stdout(&connint(&["table-integral", "--h", "0.2", "--n", "1", "--timing"])).contains("wall_time"));
}

#[test]
fn report_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("connint-report-{}.txt", std::process::id()));
    let p = path.to_string_lossy().into_owned();
    let o = connint(&["--report", &p, "table-integral", "--h", "0.5", "--n", "0"]);
    let written = std::fs::read_to_string(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    assert_eq!(written, stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(connint(&["--bogus"]).status.code(), Some(2));
    assert_eq!(connint(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(connint(&["basic-integral", "--v", "1,2"]).status.code(), Some(2));
    assert_eq!(connint(&["basic-integral", "--v", "0,0,1", "--gamma", "0"]).status.code(), Some(2));
    assert_eq!(connint(&["basic-integral", "--j", "2", "--v", "0,0,1", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(connint(&["action", "--complex", "/nonexistent", "--data", "/nonexistent"]).status.code(), Some(2));
}
