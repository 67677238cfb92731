//! End-to-end runs of the `divdom` binary: exit codes, file formats and
//! certificate re-verification.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use divdom::rational::{int, ratio};
use divdom::{verify_div1_certificate, SimpleDist};
use divdom_cli::io::{dist_from_json, dist_to_json, read_certificate, CertificateJson};
use proptest::prelude::*;
use tempfile::TempDir;

fn divdom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divdom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files {
            dir: TempDir::new().unwrap(),
        }
    }

    fn dist(&self, name: &str, d: &SimpleDist) -> String {
        self.text(name, &dist_to_json(d))
    }

    fn text(&self, name: &str, text: &str) -> String {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_owned()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn pm_one() -> SimpleDist {
    SimpleDist::new(vec![(int(-1), ratio(1, 2)), (int(1), ratio(1, 2))]).unwrap()
}

#[test]
fn check_exit_codes() {
    let f = Files::new();
    let zero = f.dist("zero.json", &SimpleDist::point(int(0)));
    let spread = f.dist("spread.json", &pm_one());

    let holds = divdom(&["check", "ssd", &zero, &spread]);
    assert_eq!(code(&holds), 0);
    assert_eq!(stdout_json(&holds)["holds"], true);

    let fails = divdom(&["check", "ssd", &spread, &zero]);
    assert_eq!(code(&fails), 1);
    let report = stdout_json(&fails);
    assert_eq!(report["witness"]["alpha"]["exact"], "1/2");
    assert_eq!(report["mean_a"]["exact"], "0");

    assert_eq!(code(&divdom(&["check", "fsd", &spread, &zero])), 1);
    assert_eq!(code(&divdom(&["check", "majorization", &zero, &spread])), 0);
    assert_eq!(code(&divdom(&["check", "majorization", &spread, &zero])), 1);

    let missing = f.path("missing.json");
    assert_eq!(code(&divdom(&["check", "ssd", missing.to_str().unwrap(), &zero])), 2);
    let garbage = f.text("garbage.json", "{\"atoms\": [");
    assert_eq!(code(&divdom(&["check", "ssd", &garbage, &zero])), 2);
    let invalid = f.text("invalid.json", r#"{"atoms":[{"v":"1","p":"1/3"}]}"#);
    assert_eq!(code(&divdom(&["check", "ssd", &invalid, &zero])), 2);
    assert_eq!(code(&divdom(&["check", "sideways", &zero, &zero])), 2);
}

#[test]
fn es_command() {
    let f = Files::new();
    let point = f.dist("c.json", &SimpleDist::point(ratio(7, 3)));
    let out = divdom(&["es", &point, "--alpha", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["es"]["exact"], "-7/3");

    let spread = f.dist("s.json", &pm_one());
    let out = divdom(&["es", &spread, "--alpha", "0.5"]);
    assert_eq!(stdout_json(&out)["es"]["exact"], "1");
    assert_eq!(stdout_json(&out)["es"]["decimal"], "1");

    assert_eq!(code(&divdom(&["es", &spread, "--alpha", "0"])), 2);
    assert_eq!(code(&divdom(&["es", &spread, "--alpha", "x"])), 2);
}

#[test]
fn certify_writes_a_certificate_that_verifies() {
    let f = Files::new();
    let xi = SimpleDist::point(int(2));
    let eta = SimpleDist::new(vec![(int(1), ratio(1, 2)), (int(3), ratio(1, 2))]).unwrap();
    let (xi_p, eta_p) = (f.dist("xi.json", &xi), f.dist("eta.json", &eta));
    let cert_path = f.path("cert.json");

    let out = divdom(&["certify", &xi_p, &eta_p, "--out", cert_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let doc: CertificateJson = serde_json::from_str(&fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert_eq!(doc.terms.len(), 2);
    assert!(doc.joint.is_some() && doc.coupling.is_some());

    let cert = read_certificate(&cert_path).unwrap();
    assert!(verify_div1_certificate(&xi, &eta, &cert).unwrap());
    let verify = divdom(&["verify", &xi_p, &eta_p, cert_path.to_str().unwrap()]);
    assert_eq!(code(&verify), 0);

    // the same certificate does not witness a different pair
    let other = f.dist("other.json", &SimpleDist::new(vec![(int(0), ratio(1, 2)), (int(3), ratio(1, 2))]).unwrap());
    assert_eq!(code(&divdom(&["verify", &xi_p, &other, cert_path.to_str().unwrap()])), 1);
}

#[test]
fn certify_on_equal_inputs_gives_the_identity() {
    let f = Files::new();
    let d = f.dist("d.json", &pm_one());
    let out = divdom(&["certify", &d, &d]);
    assert_eq!(code(&out), 0);
    let doc: CertificateJson = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.terms.len(), 1);
    assert_eq!(doc.terms[0].perm, vec![0, 1]);
    assert_eq!(doc.terms[0].weight, "1");
}

#[test]
fn certify_reports_failed_preconditions() {
    let f = Files::new();
    let two = f.dist("two.json", &SimpleDist::point(int(2)));
    let zero = f.dist("zero.json", &SimpleDist::point(int(0)));
    let spread = f.dist("spread.json", &pm_one());

    let out = divdom(&["certify", &two, &zero]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["reason"], "means differ");
    assert!(String::from_utf8_lossy(&out.stderr).contains("means differ"));

    let out = divdom(&["certify", &spread, &zero]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["reason"], "ssd violated at α=1/2");

    let missing = f.path("none.json");
    assert_eq!(code(&divdom(&["certify", missing.to_str().unwrap(), &zero])), 2);
}

#[test]
fn lift_and_decompose() {
    let f = Files::new();
    let x = f.text("x.csv", "2\n2\n");
    let y = f.text("y.csv", "1\n4\n");
    let out = divdom(&["lift", &x, &y]);
    assert_eq!(code(&out), 0);
    let r = stdout_json(&out);
    let delta: Vec<_> = r["delta"].as_array().unwrap().iter().map(|d| d["exact"].clone()).collect();
    assert_eq!(delta, vec!["0", "1"]);
    assert_eq!(r["gamma_top"]["exact"], "0");
    assert_eq!(r["mean_delta"]["exact"], "1/2");

    let d = f.dist("d.json", &pm_one());
    let out = divdom(&["decompose", &d, &d]);
    assert_eq!(code(&out), 0);
    let r = stdout_json(&out);
    assert!(r["c"].is_null());
    let zeta: divdom_cli::io::DistJson = serde_json::from_value(r["zeta"].clone()).unwrap();
    assert_eq!(SimpleDist::try_from(&zeta).unwrap(), pm_one());

    let hi = f.dist("hi.json", &SimpleDist::new(vec![(int(0), ratio(1, 2)), (int(2), ratio(1, 2))]).unwrap());
    let r = stdout_json(&divdom(&["decompose", &hi, &d]));
    assert_eq!(r["c"]["exact"], "0");
}

#[test]
fn kantorovich_mix_quantize_mps() {
    let f = Files::new();
    let zero = f.dist("zero.json", &SimpleDist::point(int(0)));
    let one = f.dist("one.json", &SimpleDist::point(int(1)));
    let out = divdom(&["kantorovich", &zero, &one]);
    assert_eq!(stdout_json(&out)["distance"]["exact"], "1");

    let out = divdom(&["mix", &zero, &one, "--weights", "1/4,3/4"]);
    assert_eq!(code(&out), 0);
    let mixed = dist_from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(mixed.mean(), ratio(3, 4));
    assert_eq!(code(&divdom(&["mix", &zero, &one, "--weights", "1"])), 2);
    assert_eq!(code(&divdom(&["mix", &zero, &one, "--weights", "1/2,1/3"])), 2);
    let uniform = dist_from_json(std::str::from_utf8(&divdom(&["mix", &zero, &one]).stdout).unwrap()).unwrap();
    assert_eq!(uniform.mean(), ratio(1, 2));

    let odd = f.dist("odd.json", &SimpleDist::point(ratio(5, 7)));
    let out = divdom(&["quantize", &odd, "--denominator", "2"]);
    let q = dist_from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(q, SimpleDist::point(ratio(1, 2)));
    assert_eq!(code(&divdom(&["quantize", &odd, "--denominator", "0"])), 2);

    let spread = f.dist("spread.json", &pm_one());
    let out = divdom(&["mps", &zero, &spread]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["valid"], true);
    assert_eq!(code(&divdom(&["mps", &spread, &zero])), 1);
}

#[test]
fn demo_table() {
    let out = divdom(&["demo-lln", "--max-doublings", "0", "--grid", "64"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 2);
    let out = divdom(&["demo-lln", "--max-doublings", "2", "--grid", "32", "--seed", "9"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 4);
    assert_eq!(code(&divdom(&["demo-lln", "--grid", "0"])), 2);
    assert_eq!(code(&divdom(&["demo-lln", "--alpha", "2"])), 2);
    assert_eq!(code(&divdom(&["demo-lln", "--max-doublings", "-1"])), 2);
}

#[test]
fn csv_input_goes_through_samples() {
    let f = Files::new();
    let csv = f.text("s.csv", "0.5\n1.5\n");
    let out = divdom(&["es", &csv, "--alpha", "1"]);
    assert_eq!(stdout_json(&out)["es"]["exact"], "-1");
    let bad = f.text("bad.csv", "0.5\nnan\n");
    assert_eq!(code(&divdom(&["es", &bad, "--alpha", "1"])), 2);
}

fn canonical_dist() -> impl Strategy<Value = SimpleDist> {
    prop::collection::vec((-50i64..50, 1i64..8, 1i64..6), 1..6).prop_map(|atoms| {
        let total: i64 = atoms.iter().map(|a| a.2).sum();
        SimpleDist::new(atoms.iter().map(|&(n, d, w)| (ratio(n, d), ratio(w, total)))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_byte_identical(d in canonical_dist()) {
        let text = dist_to_json(&d);
        let again = dist_from_json(&text).unwrap();
        prop_assert_eq!(&again, &d);
        prop_assert_eq!(dist_to_json(&again), text);
    }
}

#[test]
fn written_files_round_trip_through_the_cli() {
    let f = Files::new();
    let d = SimpleDist::new(vec![(ratio(-1, 3), ratio(1, 6)), (ratio(5, 2), ratio(5, 6))]).unwrap();
    let path = f.dist("d.json", &d);
    let out = divdom(&["mix", &path]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), fs::read_to_string(Path::new(&path)).unwrap());
}
