use std::io::Write;
use std::process::{Command, Output, Stdio};

fn itcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itcx")).args(args).env_remove("ITCX_CACHE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn play(args: &[&str], input: &str) -> String {
    let mut child = Command::new(env!("CARGO_BIN_EXE_itcx"))
        .arg("play")
        .args(args)
        .env_remove("ITCX_CACHE")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    stdout(&out)
}

#[test]
fn solve_examples() {
    let o = itcx(&["solve", "[10]"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("sg\t0\n") && s.contains("class\tR1_Empty\n"), "{s}");

    let s = stdout(&itcx(&["solve", "[4X9]"]));
    assert!(s.contains("sg\t4\n") && s.contains("class\tNotRegular\n"), "{s}");

    let s = stdout(&itcx(&["solve", "(11)"]));
    assert!(s.contains("sg\t1\n"), "{s}");
}

#[test]
fn winning_moves_lowest_first_and_verified() {
    let s = stdout(&itcx(&["solve", "[4]", "--moves"]));
    let line = s.lines().find(|l| l.starts_with("winning_moves\t")).unwrap();
    let moves: Vec<usize> = line[14..].split(',').map(|m| m.parse().unwrap()).collect();
    assert!(!moves.is_empty());
    assert!(moves.windows(2).all(|w| w[0] < w[1]));
    for m in moves {
        let (a, b) = (m, 3 - m);
        let pos = format!("[{}X{}]", if a > 0 { a.to_string() } else { String::new() }, if b > 0 { b.to_string() } else { String::new() });
        assert!(stdout(&itcx(&["solve", &pos])).contains("sg\t0\n"), "{pos}");
    }
    assert!(stdout(&itcx(&["solve", "[10]", "--moves"])).contains("winning_moves\t\n"));
}

#[test]
fn json_output() {
    let s = stdout(&itcx(&["--format", "json", "classify", "[X6]"]));
    assert_eq!(s.trim(), r#"{"class":"R1_Star(X6)","position":"[X6]","predicted":0,"sign":1}"#);
}

#[test]
fn exit_codes() {
    assert_eq!(itcx(&["solve", "[3"]).status.code(), Some(2));
    assert_eq!(itcx(&["solve", "[XXX]"]).status.code(), Some(2));
    assert_eq!(itcx(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(itcx(&["--budget", "5", "solve", "[30]"]).status.code(), Some(3));
    assert_eq!(itcx(&["verify", "lemma-alpha"]).status.code(), Some(0));
    assert_eq!(itcx(&["verify", "prop21"]).status.code(), Some(1));
}

#[test]
fn budget_marks_table_cells() {
    let o = itcx(&["--budget", "20", "table", "kcross", "--max-l", "14", "--k-min", "3", "--k-max", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains('?'));
}

#[test]
fn tables_are_stable_across_jobs() {
    let args = ["table", "single-piece", "--max-a", "5", "--max-b", "7"];
    let one = stdout(&itcx(&[&["--jobs", "1"][..], &args].concat()));
    let many = stdout(&itcx(&[&["--jobs", "4"][..], &args].concat()));
    assert_eq!(one, many);
    assert!(one.starts_with("a\\b\t0\t1\t2\t3\t4\t5\t6\t7\n0\t0\t1\t1\t0\t3\t1\t0\t0\n"), "{one}");
}

#[test]
fn empty_table_period() {
    let s = stdout(&itcx(&["table", "empty", "--max-n", "20"]));
    assert_eq!(s.lines().count(), 22);
    assert!(s.lines().skip(1).all(|l| l.ends_with("\tyes")), "{s}");
}

#[test]
fn randomized_suites_print_seed_first() {
    let s = stdout(&itcx(&["verify", "reductions", "--samples", "20", "--max-len", "8", "--seed", "7"]));
    assert!(s.starts_with("seed=7\n"), "{s}");
    let s = stdout(&itcx(&["verify", "conjecture", "simplify", "--samples", "20", "--seed", "9"]));
    assert!(s.starts_with("seed=9\n"), "{s}");
}

#[test]
fn conjecture_findings_do_not_fail() {
    let o = itcx(&["verify", "conjecture", "preperiod", "--max-len", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("observed_b_a=4"));
}

#[test]
fn other_run_limits_print_a_notice() {
    let o = itcx(&["--k", "5", "solve", "[25]"]);
    assert!(String::from_utf8(o.stderr.clone()).unwrap().contains("k = 5"));
    assert!(stdout(&o).contains("sg\t1\n"));
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("memo.txt");
    let p = path.to_str().unwrap();
    assert_eq!(itcx(&["--cache", p, "cache", "warm", "--max-n", "20"]).status.code(), Some(0));
    let header = std::fs::read_to_string(&path).unwrap();
    assert!(header.starts_with("ITCX-CACHE v1 k=3 reductions=on\n"));
    assert!(stdout(&itcx(&["--cache", p, "cache", "info"])).contains("entries\t"));
    assert!(stdout(&itcx(&["--cache", p, "solve", "[20]"])).contains("sg\t0\n"));
    assert_eq!(itcx(&["--cache", p, "--no-reductions", "solve", "[5]"]).status.code(), Some(2));
    assert_eq!(itcx(&["--cache", p, "cache", "clear"]).status.code(), Some(0));
    assert!(!path.exists());
    assert_eq!(itcx(&["cache", "info"]).status.code(), Some(2));
}

#[test]
fn play_reprompts_on_occupied_cell() {
    let s = play(&["[X4]"], "0\nq\n");
    assert!(s.contains("illegal move 0"));
    assert_eq!(s.matches("your move>").count(), 2);
}

fn lowest_legal(board: &str) -> usize {
    // Boards here stay short; the first legal move is the first empty cell
    // that does not complete three in a row.
    let cells: Vec<bool> = board.chars().map(|c| c == 'X').collect();
    (0..cells.len())
        .find(|&i| {
            if cells[i] {
                return false;
            }
            let mut c = cells.clone();
            c[i] = true;
            !c.windows(3).any(|w| w.iter().all(|&x| x))
        })
        .unwrap()
}

fn play_out(args: &[&str], len: usize) -> String {
    // Replays the game step by step, always feeding the human's lowest legal move.
    let mut input = String::new();
    loop {
        let s = play(args, &input);
        if s.contains("no legal move") {
            return s;
        }
        let last_board = s
            .lines()
            .filter_map(|l| l.strip_prefix("  "))
            .rfind(|l| l.len() == len && l.chars().all(|c| c == 'X' || c == '.'))
            .unwrap();
        input.push_str(&format!("{}\n", lowest_legal(last_board.trim())));
    }
}

#[test]
fn engine_wins_from_winning_seat() {
    let s = play_out(&["[5]", "--engine-first"], 5);
    assert!(s.contains("no legal move: you lose"), "{s}");
    let s = play_out(&["[10]"], 10);
    assert!(s.contains("no legal move: you lose"), "{s}");
    let s = play_out(&["[10]", "--engine", "lemma"], 10);
    assert!(s.contains("no legal move: you lose"), "{s}");
}
