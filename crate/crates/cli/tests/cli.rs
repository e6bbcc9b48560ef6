use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ssc_core::constructions::{build_g1_bar, build_g2_bar};
use ssc_core::Graph;

/// Runs `ssc` with whitespace-separated `words`, `@` standing for `file`.
/// Output files go to `out` through the environment default.
fn ssc(words: &str, file: Option<&Path>, out: &Path) -> Output {
    let args = words.split_whitespace().map(|w| match (w, file) {
        ("@", Some(f)) => f.as_os_str().to_owned(),
        _ => w.into(),
    });
    Command::new(env!("CARGO_BIN_EXE_ssc"))
        .args(args)
        .env("SSC_OUT_DIR", out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn construct_writes_all_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = ssc(
        "construct --family G2_BAR --nodes 12 --leaders 3",
        None,
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("30 edges"));
    let stem = dir.path().join("G2_BAR_N12_NL3_D2");
    let edges = fs::read_to_string(stem.with_extension("edges")).unwrap();
    assert!(edges.starts_with("# nodes 12\n# leaders 0 1 2\n"));
    let expected = build_g2_bar(12, 3).unwrap().graph;
    assert_eq!(Graph::parse_edge_list(&edges).unwrap(), expected);
    let dot = fs::read_to_string(stem.with_extension("dot")).unwrap();
    assert!(dot.starts_with("graph G {"));
    let layout = fs::read_to_string(stem.with_extension("layout")).unwrap();
    assert_eq!(layout.lines().next(), Some("0 L1"));
    assert_eq!(layout.lines().nth(3), Some("3 u_1"));
}

#[test]
fn construct_reads_config_and_honors_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.cfg");
    fs::write(
        &cfg,
        "# mixed design\nfamily = G3_BAR\nN = 12\nNL = 3\nD = 3\n",
    )
    .unwrap();
    let o = ssc(
        "construct --config @ --format edgelist",
        Some(&cfg),
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("G3_BAR_N12_NL3_D3.edges").exists());
    assert!(!dir.path().join("G3_BAR_N12_NL3_D3.dot").exists());

    let o = ssc("construct --config @ --diameter 4", Some(&cfg), dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("G3_BAR N=12 NL=3 D=4: 30 edges"));
}

#[test]
fn infeasible_specs_exit_2_naming_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let o = ssc(
        "construct --family G3_BAR --nodes 12 --leaders 3 --diameter 5",
        None,
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[infeasible-spec]:"));
    assert!(stderr(&o).contains("N/N_L = 4"));

    let o = ssc(
        "construct --family G1_BAR --nodes 10 --leaders 3",
        None,
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not divisible by N_L = 3"));

    let o = ssc(
        "construct --family G2_BAR --nodes 12 --leaders 1",
        None,
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn verify_reports_zfs_and_maximality() {
    let dir = tempfile::tempdir().unwrap();
    ssc(
        "construct --family G1_BAR --nodes 12 --leaders 3",
        None,
        dir.path(),
    );
    let file = dir.path().join("G1_BAR_N12_NL3_D4.edges");
    let o = ssc("verify @", Some(&file), dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("ZFS: yes"));
    assert!(stdout(&o).contains("maximal: yes"));
}

#[test]
fn verify_rejects_middle_leader_of_p3() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p3.edges");
    fs::write(&file, "0 1\n1 2\n").unwrap();
    let o = ssc("verify @ --leaders 1", Some(&file), dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("ZFS: no"));

    let o = ssc("verify @ --leaders 0", Some(&file), dir.path());
    assert!(o.status.success());

    let o = ssc("verify @ --leaders 7", Some(&file), dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[input]:"));
}

#[test]
fn verify_lists_a_removed_edge_as_violation() {
    let dir = tempfile::tempdir().unwrap();
    let full = build_g2_bar(12, 3).unwrap().graph;
    let cut = Graph::from_edges(12, full.edges().filter(|&e| e != (1, 2))).unwrap();
    let file = dir.path().join("cut.edges");
    fs::write(&file, cut.to_edge_list()).unwrap();
    let o = ssc("verify @ --leaders 0,1,2", Some(&file), dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("ZFS: yes"));
    assert!(stdout(&o).contains("maximal: no"));
    assert!(stdout(&o).lines().any(|l| l == "violation: 1 2"));
    assert!(stderr(&o).starts_with("error[verification-failed]:"));
}

#[test]
fn spectrum_prints_measures_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k3.edges");
    fs::write(&file, "0 1\n1 2\n0 2\n").unwrap();
    let o = ssc("spectrum @", Some(&file), dir.path());
    assert!(stdout(&o).contains("lambda2: 3\n"));
    assert!(stdout(&o).contains("kirchhoff: 2\n"));

    let o = ssc("spectrum @ --format csv", Some(&file), dir.path());
    assert_eq!(stdout(&o).lines().count(), 4);
    assert!(stdout(&o).starts_with("index,eigenvalue\n"));

    fs::write(&file, "# nodes 3\n0 1\n").unwrap();
    let o = ssc("spectrum @", Some(&file), dir.path());
    assert!(stdout(&o).contains("kirchhoff: inf"));

    let o = ssc("spectrum @ --format dot", Some(&file), dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_defaults_mirror_the_leader_axis() {
    let dir = tempfile::tempdir().unwrap();
    let o = ssc("sweep", None, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("sweep_N60.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').collect())
        .collect();
    let lambda2 = |family: &str, k: usize| -> Option<f64> {
        rows.iter()
            .find(|r| r[0] == family && r[2] == k.to_string())
            .map(|r| r[5].parse().unwrap())
    };
    for k in 2..=10 {
        if let Some(g1) = lambda2("G1_BAR", k) {
            assert!(lambda2("G2_BAR", k).unwrap() > g1);
        }
    }
    let skipped = csv.lines().filter(|l| l.starts_with("# skipped G1_BAR"));
    assert_eq!(skipped.count(), 3);
}

#[test]
fn grammar_run_matches_construction_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cmd = "grammar r1 --nodes 12 --leaders 3 --diameter 4 --seed 7";
    let o = ssc(cmd, None, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("label-isomorphic to G1_BAR: yes"));
    let trace = fs::read_to_string(dir.path().join("r1_trace.txt")).unwrap();
    let edges = build_g1_bar(12, 3, 4).unwrap().graph.edge_count();
    assert_eq!(trace.lines().count(), edges + 3 + 1);

    let again = tempfile::tempdir().unwrap();
    ssc(cmd, None, again.path());
    let read = |dir: &Path, name: &str| fs::read_to_string(dir.join(name)).unwrap();
    assert_eq!(read(again.path(), "r1_trace.txt"), trace);
    assert_eq!(
        read(again.path(), "r1_final.dot"),
        read(dir.path(), "r1_final.dot")
    );

    let frames = tempfile::tempdir().unwrap();
    let o = ssc(
        "grammar r2 --nodes 8 --leaders 2 --policy pi2-priority --frames",
        None,
        frames.path(),
    );
    assert!(o.status.success());
    assert!(frames.path().join("r2_frame_0000.dot").exists());

    let o = ssc("grammar r1 --nodes 10 --leaders 3", None, dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_passes_on_diameter_two_design() {
    let dir = tempfile::tempdir().unwrap();
    ssc(
        "construct --family G2_BAR --nodes 10 --leaders 2",
        None,
        dir.path(),
    );
    let file = dir.path().join("G2_BAR_N10_NL2_D2.edges");
    let o = ssc("oracle @ --trials 50 --seed 3", Some(&file), dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("50/50 controllable"));

    let o = ssc("oracle @ --trials 5 --format csv", Some(&file), dir.path());
    assert_eq!(stdout(&o).lines().count(), 1 + 1 + 5);
}
