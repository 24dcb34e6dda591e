//! End-to-end tests of the command-line interface: exit codes, file inputs,
//! machine-readable output, and seed determinism.

use std::io::Write;
use std::process::{Command, Output};

fn opotl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opotl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).to_string()
}

const WEX: &str =
    "call{pA} han call{pB} call{pC} call{pC} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}";

#[test]
fn parse_prints_trace_and_chains() {
    let out = opotl(&["parse", "-m", "mcall", "--word", WEX, "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text
        .contains("# < call < han < call < call < call > exc > call = ret > call = ret > ret > #"));
    assert!(text.contains("# = N #"));
    assert!(text.contains("chains: (0,12) (1,7) (1,9) (1,11) (2,6) (3,6) (4,6)"));
    assert_eq!(text.lines().count(), 9); // 8 rows + chains line
}

#[test]
fn parse_reads_word_files() {
    let dir = std::env::temp_dir();
    let path = dir.join("opotl_cli_wex.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "{}", WEX).unwrap();
    let out = opotl(&["parse", "-m", "mcall", "-w", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("(4,6)"));
}

#[test]
fn eval_set_output_flags_delimiters() {
    let out = opotl(&["eval", "-m", "mcall", "--word", WEX, "-f", "Nd call"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("{0#, 2, 3, 4}"));
}

#[test]
fn eval_at_position_uses_exit_codes() {
    let t = opotl(&["eval", "--word", WEX, "-f", "CNu exc", "--at", "3"]);
    assert_eq!(t.status.code(), Some(0));
    assert_eq!(stdout(&t).trim(), "true");
    let f = opotl(&["eval", "--word", WEX, "-f", "CNu exc", "--at", "1"]);
    assert_eq!(f.status.code(), Some(1));
    assert_eq!(stdout(&f).trim(), "false");
}

#[test]
fn eval_json_is_machine_readable() {
    let out = opotl(&["eval", "--word", WEX, "-f", "Nd call", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let holds = doc["holds_at"].as_array().unwrap();
    assert_eq!(holds.len(), 4);
    assert_eq!(holds[0]["position"], 0);
    assert_eq!(holds[0]["delimiter"], true);
}

#[test]
fn accept_and_reject_exit_codes() {
    let yes = opotl(&["accept", "-a", "fig5", "--word", WEX, "--witness"]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).contains("accepted"));
    let no = opotl(&["accept", "-a", "fig5", "--word", "call{pA} ret{pA}"]);
    assert_eq!(no.status.code(), Some(1));
    let max = opotl(&["accept", "-a", "max", "--word", "ret call han"]);
    assert_eq!(max.status.code(), Some(0));
}

#[test]
fn enum_lists_shortest_fig5_words() {
    let out = opotl(&["enum", "-a", "fig5", "-n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains(
        "call{pA} han call{pB} call{pC} exc call{pErr} ret{pErr} call{pErr} ret{pErr} ret{pA}"
    ));
}

#[test]
fn check_finds_no_counterexample_on_the_safe_property() {
    let out = opotl(&[
        "check",
        "-a",
        "fig5",
        "-f",
        "G((call & pB & Scall(T,pA)) -> CallThr(T))",
        "-n",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("holds at position 0 of all 3 accepted words"));
}

#[test]
fn check_reports_counterexamples_with_exit_1() {
    // pErr is called on every accepted trace, so "never pErr" must fail.
    let out = opotl(&["check", "-a", "fig5", "-f", "G (~pErr)", "-n", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("counterexample:"));
}

#[test]
fn tree_untree_roundtrip() {
    let tree = opotl(&["tree", "--word", "call ret"]);
    assert_eq!(tree.status.code(), Some(0));
    let text = stdout(&tree);
    assert_eq!(text, "0 #\n  0.0 call\n    0.0.0 ret\n  0.1 #\n");
    let dir = std::env::temp_dir();
    let path = dir.join("opotl_cli_tree.txt");
    std::fs::write(&path, &text).unwrap();
    let back = opotl(&["untree", "-t", path.to_str().unwrap()]);
    assert_eq!(back.status.code(), Some(0));
    assert_eq!(stdout(&back).trim(), "call ret");
}

#[test]
fn translate_subcommands() {
    let ltl = opotl(&["translate", "ltl", "-f", "X a"]);
    assert_eq!(stdout(&ltl).trim(), "Nd a | Nu a");
    let fo = opotl(&["translate", "fo", "-f", "Nd a"]);
    assert_eq!(
        stdout(&fo).trim(),
        "(exists y (and (and (succ x y) (or (yields x y) (eqprec x y))) \
         (exists x (and (= x y) (a x)))))"
    );
    let xu = opotl(&["translate", "xuntil", "-f", "Dn(a,b)"]);
    assert_eq!(stdout(&xu).trim(), "Nd (a Ud b) | CNd (a Ud b)");
}

#[test]
fn crosscheck_passes_and_is_deterministic() {
    let run = || {
        let out = opotl(&[
            "crosscheck", "fo", "-n", "8", "--len", "7", "--formulas", "6", "--depth", "2",
            "--seed", "5", "--json",
        ]);
        (out.status.code(), stdout(&out))
    };
    let (c1, s1) = run();
    let (c2, s2) = run();
    assert_eq!(c1, Some(0));
    assert_eq!(s1, s2, "identical invocations must produce identical reports");
}

#[test]
fn gen_is_deterministic_per_seed() {
    let a = stdout(&opotl(&["gen", "-n", "4", "--len", "9", "--seed", "21"]));
    let b = stdout(&opotl(&["gen", "-n", "4", "--len", "9", "--seed", "21"]));
    let c = stdout(&opotl(&["gen", "-n", "4", "--len", "9", "--seed", "22"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn usage_errors_exit_2() {
    let out = opotl(&["eval", "--word", WEX]);
    assert_eq!(out.status.code(), Some(2)); // missing -f
    let out = opotl(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out = opotl(&["eval", "--word", "call{nope}", "-f", "T"]);
    assert_eq!(out.status.code(), Some(2)); // unknown proposition
    let out = opotl(&["eval", "--word", WEX, "-f", "Nd ("]);
    assert_eq!(out.status.code(), Some(2)); // malformed formula
}

#[test]
fn incompatible_words_exit_1_from_parse() {
    // Over a sparse matrix, `s0 s0` has no precedence between the symbols.
    let dir = std::env::temp_dir();
    let path = dir.join("opotl_cli_sparse.opm");
    std::fs::write(&path, "props: s0\n# < s0\ns0 > #\n").unwrap();
    let out = opotl(&["parse", "-m", path.to_str().unwrap(), "--word", "s0 s0"]);
    assert_eq!(out.status.code(), Some(2)); // adjacency violation is an input error
    let path2 = dir.join("opotl_cli_sparse2.opm");
    std::fs::write(
        &path2,
        "props: a, b, c\n# < a\na > #\nb > #\nc > #\na < c\nc > b\n",
    )
    .unwrap();
    // `a c b`: adjacent precedences all defined, but reducing `c` exposes the
    // undefined pair (a, b), so the word is outside the universe.
    let out = opotl(&["parse", "-m", path2.to_str().unwrap(), "--word", "a c b"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not in the universe"));
}
