//! End-to-end checks of the binary: exit codes, emitted files and
//! run-to-run determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn tfond(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfond"))
        .args(args)
        .arg("--out")
        .arg(out_dir)
        .output()
        .expect("binary runs")
}

fn stdout_without_timing(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout)
        .lines()
        .filter(|l| !l.starts_with("# time:"))
        .collect::<Vec<_>>()
        .join("\n")
}

const PLTLF_GOAL: &str = "vehicleat(l13) & O(vehicleat(l23))";

#[test]
fn translate_writes_the_dfa() {
    let dir = tempfile::tempdir().unwrap();
    let output = tfond(&["translate", "F(vehicleat(l13))"], dir.path());
    assert!(output.status.success(), "{output:?}");
    let dot = std::fs::read_to_string(dir.path().join("automa.dot")).unwrap();
    assert!(dot.contains("1 -> 2 [label=\"1\"];"));
    assert!(dot.contains("2 -> 2 [label=\"X\"];"));

    let output = tfond(&["translate", "true"], dir.path());
    assert!(output.status.success());
    let dot = std::fs::read_to_string(dir.path().join("automa.dot")).unwrap();
    assert!(dot.contains("node [shape = doublecircle]; 1;"));
}

#[test]
fn formula_can_come_from_a_single_line_file() {
    let dir = tempfile::tempdir().unwrap();
    let formula_file = dir.path().join("goal.txt");
    std::fs::write(&formula_file, "F(vehicleat(l13))\n").unwrap();
    let output = tfond(
        &["translate", formula_file.to_str().unwrap()],
        dir.path(),
    );
    assert!(output.status.success(), "{output:?}");
    let dot = std::fs::read_to_string(dir.path().join("automa.dot")).unwrap();
    assert!(dot.contains("atoms = \"vehicleat(l13)\";"));
}

#[test]
fn mixed_formulas_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let output = tfond(&["translate", "F(a) & O(b)"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    let output = tfond(&["translate", "F("], dir.path());
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn compile_is_byte_identical_across_runs() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let args = [
        "compile",
        &fixture("triangle-tire.pddl"),
        &fixture("triangle-tire-p2.pddl"),
        PLTLF_GOAL,
        "--emit-dot",
    ];
    let first = tfond(&args, dir_a.path());
    let second = tfond(&args, dir_b.path());
    assert!(first.status.success());
    assert_eq!(stdout_without_timing(&first), stdout_without_timing(&second));
    for name in ["new-dom.pddl", "new-prob.pddl", "automa.dot"] {
        let a = std::fs::read(dir_a.path().join(name)).unwrap();
        let b = std::fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn clashing_domains_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let clash = dir.path().join("clash.pddl");
    std::fs::write(
        &clash,
        "(define (domain triangle-tire) (:predicates (turndomain) (vehicleat ?l))
          (:action a :parameters (?l) :precondition (vehicleat ?l) :effect (turndomain)))",
    )
    .unwrap();
    let output = tfond(
        &[
            "compile",
            clash.to_str().unwrap(),
            &fixture("triangle-tire-p1.pddl"),
            "F(vehicleat(l13))",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("turndomain"));
}

#[test]
fn solve_produces_all_artifacts_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let output = tfond(
        &[
            "solve",
            &fixture("triangle-tire.pddl"),
            &fixture("triangle-tire-p2.pddl"),
            PLTLF_GOAL,
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("validation: PASS"));
    for name in [
        "new-dom.pddl",
        "new-prob.pddl",
        "policy.txt",
        "controller.dot",
        "controller-collapsed.dot",
    ] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let collapsed =
        std::fs::read_to_string(dir.path().join("controller-collapsed.dot")).unwrap();
    assert!(!collapsed.contains("trans-"));
}

#[test]
fn unsolvable_tasks_exit_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let output = tfond(
        &[
            "solve",
            &fixture("triangle-tire.pddl"),
            &fixture("triangle-tire-p2.pddl"),
            "F(spare-in(l11))",
        ],
        dir.path(),
    );
    assert_eq!(output.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&output.stdout).contains("no strong policy"));
}

#[test]
fn validate_replays_and_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let solve = tfond(
        &[
            "solve",
            &fixture("triangle-tire.pddl"),
            &fixture("triangle-tire-p1.pddl"),
            "F(vehicleat(l13))",
        ],
        dir.path(),
    );
    assert_eq!(solve.status.code(), Some(0));
    let policy_path: PathBuf = dir.path().join("policy.txt");

    let replay = tfond(
        &[
            "validate",
            &fixture("triangle-tire.pddl"),
            &fixture("triangle-tire-p1.pddl"),
            "F(vehicleat(l13))",
            policy_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(replay.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&replay.stdout).contains("PASS"));

    // swap one trans edge; the hash only covers the state, so the file
    // still loads and validation must flag the broken run
    let text = std::fs::read_to_string(&policy_path).unwrap();
    assert!(text.contains("trans-1(l13)"));
    let corrupted_path = dir.path().join("corrupted.txt");
    std::fs::write(
        &corrupted_path,
        text.replacen("trans-1(l13)", "trans-0(l13)", 1),
    )
    .unwrap();
    let failed = tfond(
        &[
            "validate",
            &fixture("triangle-tire.pddl"),
            &fixture("triangle-tire-p1.pddl"),
            "F(vehicleat(l13))",
            corrupted_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(failed.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&failed.stdout).contains("FAIL"));

    // a policy over a different task's vocabulary cannot even be loaded
    let mismatch = tfond(
        &[
            "validate",
            &fixture("hanoi.pddl"),
            &fixture("hanoi-prob.pddl"),
            "F(on(d3,rod3))",
            policy_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(mismatch.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("does not match"));
}

#[test]
fn graph_emits_the_requested_controller() {
    let dir = tempfile::tempdir().unwrap();
    let solve = tfond(
        &[
            "solve",
            &fixture("triangle-tire.pddl"),
            &fixture("triangle-tire-p2.pddl"),
            PLTLF_GOAL,
        ],
        dir.path(),
    );
    assert_eq!(solve.status.code(), Some(0));
    let policy = dir.path().join("policy.txt");
    let out = tempfile::tempdir().unwrap();
    let graph = tfond(
        &[
            "graph",
            &fixture("triangle-tire.pddl"),
            &fixture("triangle-tire-p2.pddl"),
            PLTLF_GOAL,
            policy.to_str().unwrap(),
            "--collapse-trans",
        ],
        out.path(),
    );
    assert_eq!(graph.status.code(), Some(0), "{graph:?}");
    let dot = std::fs::read_to_string(out.path().join("controller-collapsed.dot")).unwrap();
    assert!(dot.contains("digraph controller"));
    assert!(dot.contains("init -> n0;"));
}
