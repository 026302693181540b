//! Golden-file tests for the command-line frontend. Set `UPDATE_GOLDEN=1`
//! to rewrite the expected outputs under `tests/golden/`.

use std::path::PathBuf;

use cluster_nz::cli::run;

struct Case {
    name: &'static str,
    args: &'static [&'static str],
    exit: i32,
}

const CASES: &[Case] = &[
    Case { name: "run_a2", args: &["run", "tests/fixtures/a2.json"], exit: 0 },
    Case { name: "run_a2_matrices_only", args: &["run", "tests/fixtures/a2.json", "--matrices-only"], exit: 0 },
    Case { name: "network_a2", args: &["network", "tests/fixtures/a2.json"], exit: 0 },
    Case { name: "network_a2_dot", args: &["network", "tests/fixtures/a2.json", "--output", "dot"], exit: 0 },
    Case { name: "network_figure_eight", args: &["network", "tests/fixtures/figure_eight.json"], exit: 0 },
    Case {
        name: "verify_a2_exact",
        args: &["verify", "tests/fixtures/a2.json", "--mode", "exact", "--check", "all"],
        exit: 0,
    },
    Case {
        name: "verify_a2_all_signs",
        args: &["verify", "tests/fixtures/a2.json", "--mode", "exact", "--check", "f-det", "--all-signs"],
        exit: 0,
    },
    Case {
        name: "verify_a2_prime_exact",
        args: &["verify", "tests/fixtures/a2_prime.json", "--mode", "exact", "--check", "det"],
        exit: 0,
    },
    Case {
        name: "verify_period_one_modular",
        args: &["verify", "tests/fixtures/period_one_3.json", "--mode", "modular", "--check", "det"],
        exit: 0,
    },
    Case {
        name: "verify_period_one_exact",
        args: &["verify", "tests/fixtures/period_one_3.json", "--mode", "exact", "--check", "det"],
        exit: 0,
    },
    Case { name: "verify_not_fully_mutated", args: &["verify", "tests/fixtures/not_fully_mutated.json"], exit: 3 },
    Case { name: "tropical_a2", args: &["tropical", "tests/fixtures/a2.json"], exit: 0 },
    Case { name: "reddening_a2", args: &["reddening", "tests/fixtures/a2.json", "--depth", "2"], exit: 0 },
    Case {
        name: "reddening_torus",
        args: &["reddening", "tests/fixtures/torus_triangulation.json", "--depth", "8"],
        exit: 4,
    },
    Case {
        name: "gluing_figure_eight",
        args: &["gluing", "tests/fixtures/figure_eight.json", "--init", "0.5,0.8"],
        exit: 0,
    },
    Case { name: "gluing_a2_positive", args: &["gluing", "tests/fixtures/a2.json", "--positive"], exit: 0 },
    Case { name: "dynkin_a2", args: &["dynkin", "--type", "A", "--rank", "2"], exit: 0 },
    Case { name: "dynkin_a1_text", args: &["dynkin", "--type", "A", "--rank", "1", "--output", "text"], exit: 0 },
    Case { name: "triangulate_torus", args: &["triangulate", "tests/fixtures/torus_triangulation.json"], exit: 0 },
    Case { name: "malformed", args: &["run", "tests/fixtures/malformed.json"], exit: 2 },
    Case { name: "missing_file", args: &["run", "tests/fixtures/does_not_exist.json"], exit: 2 },
];

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cluster-nz").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

fn render(code: i32, out: &str, err: &str) -> String {
    format!("exit: {code}\n--- stdout\n{out}--- stderr\n{err}")
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for case in CASES {
        let (code, out, err) = invoke(case.args);
        assert_eq!(code, case.exit, "{}: exit code\nstdout: {out}\nstderr: {err}", case.name);
        let actual = render(code, &out, &err);
        let path = golden_path(case.name);
        if update {
            std::fs::write(&path, &actual).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path)
            .unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
        if expected != actual {
            mismatches.push(case.name);
        }
    }
    assert!(mismatches.is_empty(), "golden mismatches: {mismatches:?}");
}

#[test]
fn output_is_deterministic() {
    for case in CASES {
        assert_eq!(invoke(case.args), invoke(case.args), "{}", case.name);
    }
}

#[test]
fn json_documents_carry_schema_version() {
    for case in CASES.iter().filter(|c| !c.args.contains(&"--output")) {
        let (code, out, err) = invoke(case.args);
        let text = if code == 0 || code == 4 || code == 1 { out } else { err };
        let v: serde_json::Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", case.name));
        assert_eq!(v["schema"], 1, "{}", case.name);
    }
}

#[test]
fn figure_eight_volume_reported() {
    let (_, out, _) = invoke(&["gluing", "tests/fixtures/figure_eight.json", "--init", "0.5,0.8"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let vol = v["volume"].as_f64().unwrap();
    assert!((vol - 2.029_883_212_81).abs() < 1e-9, "{vol}");
}

#[test]
fn a2_reddening_finds_maximal_green() {
    let (code, out, _) = invoke(&["reddening", "tests/fixtures/a2.json", "--depth", "2", "--green-only"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["found"], true);
    assert_eq!(v["maximal_green"], true);
}

#[test]
fn all_signs_covers_nine_sequences() {
    let (_, out, _) = invoke(&["verify", "tests/fixtures/a2.json", "--mode", "exact", "--check", "f-det", "--all-signs"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let reports = v["results"][0]["reports"]["f_det"].as_array().unwrap();
    assert_eq!(reports.len(), 9);
    assert!(reports.iter().all(|r| r["equal"] == true));
}
