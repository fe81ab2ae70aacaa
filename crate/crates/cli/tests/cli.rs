use std::process::{Command, Output};

fn tnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tnn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tnn_env(args: &[&str], workers: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tnn"))
        .args(args)
        .env("TNN_WORKERS", workers)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

struct Row {
    index: u64,
    mode: String,
    trials: u64,
    updates: f64,
    error: f64,
    converged: f64,
}

fn parse_csv(text: &str) -> Vec<Row> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("function_index,mode,trials,mean_updates,mean_error_rate,convergence_fraction")
    );
    lines
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            Row {
                index: c[0].parse().unwrap(),
                mode: c[1].to_string(),
                trials: c[2].parse().unwrap(),
                updates: c[3].parse().unwrap(),
                error: c[4].parse().unwrap(),
                converged: c[5].parse().unwrap(),
            }
        })
        .collect()
}

#[test]
fn train_worked_example() {
    let o = tnn(&["train", "-n", "3", "-f", "00101001", "--mode", "ideal"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("E^(0) = {010, 100, 111}\n"));
    assert!(text.contains("E^(1) = {011, 101}\n"));
    assert!(text.contains("E^(2) = {}\n"));
    assert_eq!(field(&text, "converged"), "yes");
    assert_eq!(field(&text, "updates"), "2");
    assert_eq!(field(&text, "anf"), "x0^x1^x0.x2^x1.x2^x0.x1.x2");
    assert_eq!(field(&text, "error_rate"), "0");
}

#[test]
fn train_accepts_anf_text() {
    let o = tnn(&[
        "train",
        "-n",
        "3",
        "-f",
        "x1 ^ x0 ^ x1.x2 ^ x0.x2 ^ x0.x1.x2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "function"), "00101001");
}

#[test]
fn train_zero_function() {
    let o = tnn(&["train", "-n", "2", "-f", "0000", "--mode", "ideal"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(field(&text, "updates"), "0");
    assert_eq!(field(&text, "anf"), "0");
}

#[test]
fn sampled_train_never_converges_wrongly() {
    let mut converged = 0;
    for seed in 0..30 {
        let s = seed.to_string();
        let o = tnn(&[
            "train", "-n", "2", "-f", "1011", "--mode", "sampled", "--policy", "exact", "--seed",
            &s,
        ]);
        match o.status.code() {
            Some(0) => {
                assert_eq!(field(&stdout(&o), "anf"), "1^x1^x0.x1", "seed {seed}");
                converged += 1;
            }
            Some(2) => assert_eq!(field(&stdout(&o), "converged"), "no"),
            other => panic!("seed {seed}: exit {other:?}"),
        }
    }
    assert!(converged >= 25, "{converged}/30");
    let o = tnn(&[
        "train", "-n", "2", "-f", "1011", "--mode", "sampled", "--seed", "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn non_convergence_exits_two() {
    let o = tnn(&[
        "train",
        "-n",
        "3",
        "-f",
        "01101001",
        "--mode",
        "sampled",
        "--policy",
        "fixed:1",
        "--max-updates",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(field(&stdout(&o), "converged"), "no");
}

#[test]
fn parse_failures_exit_one() {
    for args in [
        &["train", "-n", "2", "-f", "10x1"][..],
        &["train", "-n", "2", "-f", "101"],
        &["train", "-n", "2", "-f", "x2"],
        &["train", "-n", "2", "-f", "1011", "--policy", "often"],
        &[
            "train", "-n", "2", "-f", "1011", "--mode", "sampled", "--source", "uniform",
        ],
        &["frobnicate"],
    ] {
        let o = tnn(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn sweep_n2_ideal() {
    let o = tnn(&["sweep", "-n", "2", "--mode", "ideal"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 16);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.index, i as u64);
        assert_eq!(r.mode, "ideal");
        assert_eq!(r.trials, 100);
        assert_eq!(r.error, 0.0);
        assert!(r.updates <= 2.0);
        assert_eq!(r.converged, 1.0);
    }
}

#[test]
fn sweep_zero_function_needs_no_updates() {
    let o = tnn(&["sweep", "-n", "2", "--trials", "20"]);
    let rows = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 32);
    let zero: Vec<_> = rows.iter().filter(|r| r.index == 0).collect();
    assert_eq!(zero.len(), 2);
    assert_eq!(zero[0].mode, "ideal");
    assert_eq!(zero[1].mode, "sampled");
    assert!(zero.iter().all(|r| r.updates == 0.0));
}

#[test]
fn sweep_n3_sampled_is_sound() {
    let o = tnn(&[
        "sweep", "-n", "3", "--mode", "sampled", "--policy", "exact", "--seed", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 256);
    for r in &rows {
        assert!(
            r.converged >= 0.95,
            "function {} at {}",
            r.index,
            r.converged
        );
    }
}

#[test]
fn sweep_output_is_deterministic() {
    let args = ["sweep", "-n", "2", "--trials", "30", "--seed", "11"];
    let a = tnn_env(&args, "1");
    let b = tnn_env(&args, "3");
    let c = tnn_env(&args, "3");
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let p = path.to_str().unwrap();
    let o = tnn(&[
        "sweep", "-n", "2", "--trials", "30", "--seed", "11", "-o", p,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn sweep_n4_samples_functions() {
    let o = tnn(&["sweep", "-n", "4", "--sample-count", "6", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.index < 1 << 16));
}

#[test]
fn sweep_rejects_bad_arguments() {
    for args in [
        &["sweep", "-n", "1"][..],
        &["sweep", "-n", "5"],
        &["sweep", "-n", "2", "--trials", "0"],
        &["sweep", "-n", "4", "--sample-count", "0"],
    ] {
        assert_eq!(tnn(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(
        tnn_env(&["sweep", "-n", "2"], "many").status.code(),
        Some(1)
    );
}

fn gate_lines(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| l.starts_with("RY") || l.starts_with("MCX"))
        .collect()
}

#[test]
fn prep_dump_three_down() {
    let o = tnn(&["prep-dump", "-n", "3", "--direction", "down"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let gates = gate_lines(&text);
    assert_eq!(gates.len(), 8);
    assert!(gates[..3].iter().all(|g| g.starts_with("RY")));
    assert_eq!(
        gates[3..],
        [
            "MCX target=0 pos=0110 neg=0000",
            "MCX target=1 pos=1010 neg=0000",
            "MCX target=2 pos=1000 neg=0100",
            "MCX target=1 pos=1010 neg=0000",
            "MCX target=0 pos=0110 neg=0000",
        ]
    );
}

#[test]
fn prep_dump_one_qubit() {
    let text = stdout(&tnn(&["prep-dump", "-n", "1"]));
    let gates = gate_lines(&text);
    assert_eq!(gates.len(), 1);
    assert!(gates[0].starts_with("RY target=0"));
}

#[test]
fn prep_dump_four_follows_ranking() {
    let p4 = [0, 1, 2, 5, 3, 6, 7, 11, 4, 8, 9, 12, 10, 13, 14, 15];
    for (dir, descending) in [("down", true), ("up", false)] {
        let text = stdout(&tnn(&["prep-dump", "-n", "4", "--direction", dir]));
        let rows: Vec<(usize, f64)> = text
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with("RY") && !l.starts_with("MCX"))
            .map(|l| {
                let c: Vec<&str> = l.split_whitespace().collect();
                (c[1].parse().unwrap(), c[3].parse().unwrap())
            })
            .collect();
        let ranks: Vec<usize> = rows.iter().map(|r| r.0).collect();
        assert_eq!(ranks, p4);
        let mut by_prob = rows.clone();
        by_prob.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if descending {
            by_prob.reverse();
        }
        let order: Vec<usize> = by_prob.iter().map(|r| r.0).collect();
        assert_eq!(order, (0..16).collect::<Vec<_>>(), "{dir}");
    }
}

#[test]
fn prep_dump_rejects_large_n() {
    assert_eq!(tnn(&["prep-dump", "-n", "40"]).status.code(), Some(1));
}
