use std::io::Write;
use std::process::Command;

use serde_json::Value;
use twisted_h1_cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("twisted-h1").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, err) = exec(&a);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn h1_json_example() {
    let v = json(&[
        "h1",
        "--type",
        "A",
        "--rank",
        "3",
        "--isogeny",
        "sc",
        "--tau-order",
        "2",
        "--m",
        "2",
    ]);
    assert_eq!(v["cardinality"], 2);
    assert_eq!(v["type"], "A3^(2)");
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
    assert_eq!(v["classes"][1]["coweight"][1], "1/2");
}

#[test]
fn h1_methods_agree() {
    let base = [
        "h1",
        "--type",
        "A",
        "--rank",
        "5",
        "--tau-order",
        "2",
        "--m",
        "6",
    ];
    let counts: Vec<Value> = ["orbit", "alcove", "auto"]
        .iter()
        .map(|m| {
            let mut a = base.to_vec();
            a.extend(["--method", m]);
            json(&a)["cardinality"].clone()
        })
        .collect();
    assert!(counts.iter().all(|c| *c == counts[0]));
    assert_eq!(counts[0], 8);
}

#[test]
fn verify_flag() {
    let (code, out, _) = exec(&[
        "h1",
        "--type",
        "D",
        "--rank",
        "4",
        "--tau-order",
        "3",
        "--m",
        "3",
        "--verify",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verified"));
}

#[test]
fn kac_method_requires_adjoint() {
    let (code, _, err) = exec(&[
        "h1",
        "--type",
        "A",
        "--rank",
        "3",
        "--tau-order",
        "2",
        "--m",
        "2",
        "--method",
        "kac",
    ]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("adjoint"), "{err}");
}

#[test]
fn torus_factors() {
    let v = json(&[
        "h1-torus",
        "--type",
        "D",
        "--rank",
        "4",
        "--tau-order",
        "3",
        "--m",
        "6",
    ]);
    assert_eq!(v["invariant_factors"], serde_json::json!([2, 6]));
    assert_eq!(v["cardinality"], "12");
}

#[test]
fn kac_and_alcove_counts() {
    let args = [
        "--type",
        "A",
        "--rank",
        "4",
        "--isogeny",
        "adjoint",
        "--tau-order",
        "2",
        "--m",
        "6",
    ];
    let kac = json(&[&["kac"], &args[..]].concat());
    let alcove = json(&[&["alcove"], &args[..]].concat());
    assert_eq!(kac["count"], alcove["count"]);
    let classes = json(&[&["kac", "--classes"], &args[..]].concat());
    assert!(classes["count"].as_u64().unwrap() <= kac["count"].as_u64().unwrap());
}

#[test]
fn pgl_parity() {
    for (n, expected) in [(3, 1), (4, 2), (5, 1), (6, 2)] {
        let rank = (n - 1).to_string();
        let v = json(&[
            "classify-autos",
            "--type",
            "A",
            "--rank",
            &rank,
            "--tau-order",
            "2",
            "--m",
            "2",
        ]);
        assert_eq!(v["count"], expected, "PGL{n}");
    }
}

#[test]
fn reduce_and_parahoric() {
    let v = json(&[
        "reduce", "--type", "C", "--rank", "2", "--point", "5/3,-7/4",
    ]);
    let p: Vec<&str> = v["reduction"]["point"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(p.len(), 2);
    assert!(p.iter().all(|s| !s.contains('.')));
    let v = json(&[
        "parahoric",
        "--type",
        "G",
        "--rank",
        "2",
        "--isogeny",
        "adjoint",
        "--theta",
        "1/4,1/8",
    ]);
    assert_eq!(v["m_min"], 8);
}

#[test]
fn covering_exists_examples() {
    let v = json(&["covering-exists", "--genus", "0", "--indices", "7"]);
    assert_eq!(v["exists"], false);
    assert_eq!(v["reason"], "g=0, s=1");
    let v = json(&["covering-exists", "--genus", "0", "--indices", "3,3"]);
    assert_eq!(v["exists"], true);
}

#[test]
fn components_from_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"genus": 2, "orbits": [{{"m": 2, "type": "E", "rank": 6, "tau_order": 2}}, {{"m": 2, "type": "A", "rank": 3, "tau_order": 2}}]}}"#
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    let v = json(&["components", "--covering", path, "--isogeny", "sc"]);
    assert_eq!(v["components"], "4");
    assert_eq!(v["labels"].as_array().unwrap().len(), 4);
    let (code, _, _) = exec(&["components", "--covering", path, "--isogeny", "adjoint"]);
    assert_eq!(code, EXIT_DOMAIN);
    let (code, _, _) = exec(&["components", "--covering", "/nonexistent.json"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn argument_errors() {
    assert_eq!(exec(&["h1", "--type", "A", "--rank", "3"]).0, EXIT_USAGE);
    assert_eq!(
        exec(&["h1", "--type", "X", "--rank", "3", "--m", "2"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        exec(&["reduce", "--type", "A", "--rank", "2", "--point", "1/0,1"]).0,
        EXIT_USAGE
    );
    assert_eq!(exec(&["frobnicate"]).0, EXIT_USAGE);
}

#[test]
fn domain_errors() {
    let (code, _, err) = exec(&[
        "h1",
        "--type",
        "A",
        "--rank",
        "3",
        "--tau-order",
        "2",
        "--m",
        "3",
    ]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("divide"), "{err}");
    assert_eq!(
        exec(&[
            "h1",
            "--type",
            "B",
            "--rank",
            "3",
            "--tau-order",
            "2",
            "--m",
            "2"
        ])
        .0,
        EXIT_DOMAIN
    );
    assert_eq!(
        exec(&["h1", "--type", "E", "--rank", "5", "--m", "2"]).0,
        EXIT_DOMAIN
    );
    assert_eq!(
        exec(&["reduce", "--type", "A", "--rank", "3", "--point", "1,2"]).0,
        EXIT_USAGE
    );
}

#[test]
fn dump_datum() {
    let v = json(&[
        "h1",
        "--type",
        "G",
        "--rank",
        "2",
        "--isogeny",
        "adjoint",
        "--m",
        "1",
        "--dump-datum",
    ]);
    assert_eq!(v["type"], "G");
    assert_eq!(v["isogeny"], "adjoint");
    assert_eq!(v["cartan"], serde_json::json!([[2, -3], [-1, 2]]));
}

#[test]
fn output_is_deterministic() {
    for format in ["text", "json", "csv"] {
        let a = [
            "classify-autos",
            "--type",
            "E",
            "--rank",
            "6",
            "--tau-order",
            "2",
            "--m",
            "4",
            "--format",
            format,
        ];
        assert_eq!(exec(&a), exec(&a));
    }
}

#[test]
fn csv_has_header_and_rows() {
    let (code, out, _) = exec(&[
        "alcove", "--type", "A", "--rank", "2", "--m", "3", "--format", "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        vec!["point", "lattice_vector"]
    );
    assert!(rdr.records().all(|r| r.unwrap().len() == 2));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_twisted-h1");
    let out = Command::new(bin)
        .args(["covering-exists", "--genus", "1", "--indices", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        "true (no exceptional case applies)"
    );
    let out = Command::new(bin)
        .args([
            "h1",
            "--type",
            "A",
            "--rank",
            "2",
            "--tau-order",
            "2",
            "--m",
            "5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_DOMAIN));
    let out = Command::new(bin).args(["h1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn enumeration_cap_env() {
    let bin = env!("CARGO_BIN_EXE_twisted-h1");
    let out = Command::new(bin)
        .env("TWISTED_H1_ENUM_CAP", "10")
        .args(["h1", "--type", "A", "--rank", "3", "--m", "4", "--verify"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_DOMAIN));
}
