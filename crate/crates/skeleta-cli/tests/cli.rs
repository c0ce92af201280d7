//! End-to-end tests of the binary: golden outputs for the punctured
//! plane, exit-code semantics, the exhaustive small-catalogue run, and
//! rejection of corrupted category dumps.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skeleta"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("skeleta-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn punctured() -> PathBuf {
    write_temp("punctured.json", r#"{"n": 2, "facets": [[1], [2]]}"#)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn quiver_matches_golden() {
    let out = bin()
        .args(["quiver", "--input"])
        .arg(punctured())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), include_str!("golden/punctured_quiver.tsv"));
}

#[test]
fn ext_table_matches_golden_and_is_deterministic() {
    let run = || {
        let out = bin()
            .args(["ext-table", "--pipeline", "both", "--input"])
            .arg(punctured())
            .output()
            .unwrap();
        assert!(out.status.success());
        stdout(&out)
    };
    let first = run();
    assert_eq!(first, include_str!("golden/punctured_ext_table.tsv"));
    assert_eq!(first, run());
}

#[test]
fn components_match_golden() {
    let out = bin()
        .args(["components", "--input"])
        .arg(punctured())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), include_str!("golden/punctured_components.tsv"));
    assert_eq!(stdout(&out).lines().count(), 7); // header + six components
}

#[test]
fn verify_passes_for_punctured_plane_and_full_simplex() {
    for (name, json) in [
        ("pp.json", r#"{"n": 2, "facets": [[1], [2]]}"#),
        ("full3.json", r#"{"n": 3, "facets": [[1, 2, 3]]}"#),
    ] {
        let path = write_temp(name, json);
        let out = bin().args(["verify", "--input"]).arg(&path).output().unwrap();
        assert!(out.status.success(), "verify failed for {name}: {}", stdout(&out));
    }
}

#[test]
fn verify_whole_catalogue_n3() {
    // every vertex-complete complex on three vertices is determined by the
    // pairs it contains plus the optional triangle
    let pair_sets: Vec<Vec<[usize; 2]>> = {
        let pairs = [[1, 2], [1, 3], [2, 3]];
        (0u8..8)
            .map(|mask| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, p)| *p)
                    .collect()
            })
            .collect()
    };
    let mut cases: Vec<String> = Vec::new();
    for ps in &pair_sets {
        let mut facets: Vec<Vec<usize>> = vec![vec![1], vec![2], vec![3]];
        facets.extend(ps.iter().map(|p| p.to_vec()));
        cases.push(serde_json::json!({"n": 3, "facets": facets}).to_string());
    }
    cases.push(r#"{"n": 3, "facets": [[1, 2, 3]]}"#.to_string());
    assert_eq!(cases.len(), 9);
    for (i, json) in cases.iter().enumerate() {
        let path = write_temp(&format!("cat{i}.json"), json);
        let out = bin().args(["verify", "--input"]).arg(&path).output().unwrap();
        assert!(out.status.success(), "catalogue case {i} failed:\n{}", stdout(&out));
    }
}

#[test]
fn corrupted_category_dump_fails_with_code_1() {
    use skeleta::linalg::Rat;
    use skeleta::toric::build_b_category;

    let k = skeleta::simplicial::punctured_plane();
    let mut cat = build_b_category(&k).category;
    // corrupt an identity composition: the declared identity is no longer
    // neutral, which the category-axiom check names directly
    cat.set_comp((0, 1, 0, 0), (0, 0, 0, 0), vec![(0, Rat::int(2))]);
    let dump = serde_json::to_string(&cat.dump()).unwrap();
    let dump_path = write_temp("corrupt-dump.json", &dump);
    let out = bin()
        .args(["verify", "--input"])
        .arg(punctured())
        .arg("--category-dump")
        .arg(&dump_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn bad_input_exits_with_code_2() {
    let path = write_temp("bad.json", r#"{"n": 2, "facets": [[1, 7]]}"#);
    let out = bin().args(["verify", "--input"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["verify", "--input", "/nonexistent/path.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_vertices_need_the_flag() {
    let path = write_temp("missing.json", r#"{"n": 2, "facets": [[1]]}"#);
    let out = bin().args(["verify", "--input"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["verify", "--allow-missing-vertices", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stdout(&out));
}

#[test]
fn cohomology_and_koszul_agree_on_punctured_plane() {
    let out = bin()
        .args(["cohomology", "--weight=-1,-1", "--input"])
        .arg(punctured())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("dims\t1:1"));

    let out = bin()
        .args(["koszul", "--i-set", "1,2", "--input"])
        .arg(punctured())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("agree\ttrue"));
}

#[test]
fn thread_cap_is_respected() {
    let out = bin()
        .env("SKELETA_THREADS", "1")
        .args(["ext-table", "--pipeline", "both", "--input"])
        .arg(punctured())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), include_str!("golden/punctured_ext_table.tsv"));
}
