use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).expect("golden file")
}

fn cobool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobool"))
        .args(args)
        .output()
        .expect("run cobool")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let p = std::env::temp_dir().join(format!("cobool-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&p).unwrap();
        TempDir(p)
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn classify_prints_verdict_line() {
    let o = cobool(&["classify", &fixture("fix_1in3.cbt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "NP-complete\n");
}

#[test]
fn classify_explain_collapse() {
    let o = cobool(&["classify", "--explain", &fixture("fix_collapse.cbt")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("P DegenerateCore\n"));
    assert!(out.contains("retraction: 0->0 1->0 2->0 3->0"));
    assert!(out.contains("core: one element, original element 0"));
}

#[test]
fn classify_json_is_pure_json() {
    let o = cobool(&["classify", "--json", &fixture("fix_horn.cbt")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "P");
    assert_eq!(v["reason"], "MeetClosedOrdered");
}

#[test]
fn solve_engines_agree_on_horn() {
    let d = TempDir::new("horn");
    let i = d.file("i.cbi", "f1(x) = y\nf3(y) = z\n");
    for engine in ["auto", "poly", "oracle"] {
        let o = cobool(&["solve", "--engine", engine, &fixture("fix_horn.cbt"), &i]);
        assert_eq!(o.status.code(), Some(10), "{engine}");
        assert!(stdout(&o).starts_with("SAT\n"));
    }
}

#[test]
fn solve_outputs_sorted_assignment() {
    let d = TempDir::new("sorted");
    let i = d.file("i.cbi", "neg(b) = a\nb := 1\n");
    let o = cobool(&["solve", &fixture("fix_not.cbt"), &i]);
    assert_eq!(o.status.code(), Some(10));
    assert_eq!(stdout(&o), "SAT\na = 0\nb = 1\n");
}

#[test]
fn solve_dump_and_explain() {
    let d = TempDir::new("dump");
    let i = d.file("i.cbi", "neg(x) = y\n");
    let o = cobool(&["solve", "--dump-boolean", "--explain", &fixture("fix_not.cbt"), &i]);
    assert_eq!(o.status.code(), Some(10));
    let out = stdout(&o);
    assert!(out.contains("p cobool 7 4\n"));
    assert!(out.contains("# engine: poly (MajorityClosed)"));
}

#[test]
fn solve_on_np_template_uses_oracle() {
    let d = TempDir::new("np");
    let i = d.file("i.cbi", "e0(x) = t\nt := 1\ne1(x) = t\n");
    let o = cobool(&["solve", "--explain", &fixture("fix_1in3.cbt"), &i]);
    assert_eq!(o.status.code(), Some(20));
    assert!(stdout(&o).contains("# engine: oracle"));
}

#[test]
fn errors_exit_with_two() {
    let d = TempDir::new("err");
    let bad = d.file("bad.cbi", "f1(x) = \n");
    let o = cobool(&["solve", &fixture("fix_horn.cbt"), &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"));

    let o = cobool(&["classify", "/nonexistent/t.cbt"]);
    assert_eq!(o.status.code(), Some(2));

    let o = cobool(&["solve", "--engine", "fast", &fixture("fix_horn.cbt"), &bad]);
    assert_eq!(o.status.code(), Some(2));

    let o = cobool(&["check", &fixture("fix_nonord.cbt"), "--samples", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_shows_seed_defaults() {
    let o = cobool(&["check", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("--seed <SEED>") && out.contains("[default: 0]"));
}

#[test]
fn check_reports_full_agreement() {
    for f in ["fix_not.cbt", "fix_affine.cbt", "fix_horn.cbt", "fix_collapse.cbt"] {
        let o = cobool(&["check", &fixture(f), "--samples", "100", "--seed", "3"]);
        assert_eq!(o.status.code(), Some(0), "{f}");
        assert!(stdout(&o).contains("samples: 100\n"));
        assert!(stdout(&o).contains("disagree: 0\n"));
    }
}

#[test]
fn gen_template_matches_golden() {
    let o = cobool(&["gen", "template", "--domain", "3", "--functions", "2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("template_seed1_n3_k2.cbt"));
    let again = cobool(&["gen", "template", "--domain", "3", "--functions", "2", "--seed", "1"]);
    assert_eq!(stdout(&again), stdout(&o));
    let other = cobool(&["gen", "template", "--domain", "3", "--functions", "2", "--seed", "2"]);
    assert_eq!(stdout(&other), golden("template_seed2_n3_k2.cbt"));
    assert_ne!(stdout(&other), stdout(&o));
}

#[test]
fn gen_instance_matches_golden() {
    let o = cobool(&[
        "gen", "instance", &fixture("fix_horn.cbt"), "--vars", "5", "--cons", "6", "--pin-prob", "0.1", "--seed", "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("instance_horn_seed7.cbi"));
}

#[test]
fn gen_rejects_bad_bounds() {
    let o = cobool(&["gen", "template", "--domain", "1", "--functions", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("domain size"));
}
