use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use clap::CommandFactory;
use distcolor_cli::Cli;
use tempfile::TempDir;

fn distcolor(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distcolor"))
        .args(args)
        .current_dir(dir)
        .env_remove("DISTCOLOR_MAX_ROUNDS")
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn parse_dump(text: &str) -> Vec<(usize, u32)> {
    text.lines()
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap().parse().unwrap(), it.next().unwrap().parse().unwrap())
        })
        .collect()
}

#[test]
fn command_definition_is_consistent() {
    Cli::command().debug_assert();
}

#[test]
fn path_three_speed_preset() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("p3.txt"), "0 1\n1 2\n").unwrap();
    let out = distcolor(
        dir.path(),
        &["color", "--edges", "p3.txt", "--parts", "block:1", "--preset", "speed", "--coloring", "c.txt"],
    );
    ok(&out);
    let dump = parse_dump(&fs::read_to_string(dir.path().join("c.txt")).unwrap());
    assert_eq!(dump.len(), 3);
    assert_ne!(dump[0].1, dump[1].1);
    assert_ne!(dump[1].1, dump[2].1);
    assert!(dump.iter().all(|&(_, c)| c >= 1));
}

#[test]
fn invalid_partition_file_fails() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("p3.txt"), "0 1\n1 2\n").unwrap();
    fs::write(dir.path().join("parts.txt"), "0\n5\n1\n").unwrap();
    let out = distcolor(dir.path(), &["color", "--edges", "p3.txt", "--parts", "file:parts.txt:2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    fs::write(dir.path().join("short.txt"), "0\n1\n").unwrap();
    let out = distcolor(dir.path(), &["color", "--edges", "p3.txt", "--parts", "file:short.txt:2"]);
    assert!(!out.status.success());
}

#[test]
fn quality_preset_trajectory() {
    let dir = TempDir::new().unwrap();
    let out = distcolor(
        dir.path(),
        &["color", "--graph", "rmat:10", "--parts", "block:4", "--preset", "quality", "--trajectory", "t.csv"],
    );
    ok(&out);
    let text = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "graph,config,seed,iteration,num_colors");
    let iterations: Vec<&str> = lines[1..].iter().map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(iterations, vec!["0", "1"]);
}

#[test]
fn repeated_runs_write_identical_files() {
    let dir = TempDir::new().unwrap();
    let run = |tag: &str| {
        let metrics = format!("m{tag}.csv");
        let json = format!("m{tag}.json");
        let traj = format!("t{tag}.csv");
        let out = distcolor(
            dir.path(),
            &[
                "color", "--graph", "rmat:9,8,0.45,0.15,0.15,0.25", "--parts", "block:4", "--selection", "randx:3",
                "--superstep", "20", "--recolor-iters", "2", "--perm", "nd-rand:2", "--piggyback", "--metrics",
                &metrics, "--json", &json, "--trajectory", &traj,
            ],
        );
        ok(&out);
        ["csv", "json", "traj"].map(|k| {
            let name = match k {
                "csv" => &metrics,
                "json" => &json,
                _ => &traj,
            };
            fs::read(dir.path().join(name)).unwrap()
        })
    };
    assert_eq!(run("a"), run("b"));
    let csv = fs::read_to_string(dir.path().join("ma.csv")).unwrap();
    assert!(csv.starts_with("graph,config,seed,num_colors,rounds,conflicts,msgs,nonempty_msgs,pairs,bytes,precomm_msgs,ticks\n"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn out_of_range_selection_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = distcolor(dir.path(), &["color", "--graph", "rmat:6", "--selection", "randx:0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--selection"));
}

#[test]
fn conflicting_sources_are_rejected() {
    let dir = TempDir::new().unwrap();
    let out = distcolor(dir.path(), &["color", "--graph", "rmat:6", "--edges", "x.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_partition_color_round_trip() {
    let dir = TempDir::new().unwrap();
    ok(&distcolor(dir.path(), &["generate", "--graph", "rmat:8", "--out", "g.mtx"]));
    ok(&distcolor(dir.path(), &["partition", "--mtx", "g.mtx", "--parts", "block:3", "--out", "parts.txt"]));
    let parts = fs::read_to_string(dir.path().join("parts.txt")).unwrap();
    assert_eq!(parts.lines().count(), 256);
    ok(&distcolor(
        dir.path(),
        &["color", "--graph", "g.mtx", "--parts", "file:parts.txt", "--mode", "async", "--coloring", "c.txt"],
    ));
    ok(&distcolor(
        dir.path(),
        &[
            "recolor", "--mtx", "g.mtx", "--parts", "file:parts.txt", "--initial", "c.txt", "--recolor-iters", "3",
            "--trajectory", "t.csv", "--coloring", "r.txt",
        ],
    ));
    let traj = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let counts: Vec<u32> = traj
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts.len(), 4);
    assert!(counts.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn threaded_backend_matches_deterministic() {
    let dir = TempDir::new().unwrap();
    for backend in ["deterministic", "threaded"] {
        let dump = format!("{backend}.txt");
        ok(&distcolor(
            dir.path(),
            &["color", "--graph", "rmat:9", "--parts", "block:4", "--superstep", "16", "--backend", backend, "--coloring", &dump],
        ));
    }
    assert_eq!(
        fs::read(dir.path().join("deterministic.txt")).unwrap(),
        fs::read(dir.path().join("threaded.txt")).unwrap()
    );
}

#[test]
fn round_cap_from_environment() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("k6.txt"),
        (0..6)
            .flat_map(|u| (u + 1..6).map(move |v| format!("{u} {v}\n")))
            .collect::<String>(),
    )
    .unwrap();
    let run = |value: &str| {
        Command::new(env!("CARGO_BIN_EXE_distcolor"))
            .args(["color", "--edges", "k6.txt", "--parts", "block:6"])
            .current_dir(dir.path())
            .env("DISTCOLOR_MAX_ROUNDS", value)
            .output()
            .unwrap()
    };
    let capped = run("1");
    assert_eq!(capped.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("no convergence"));
    assert!(run("100").status.success());
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn sweep_writes_grid() {
    let dir = TempDir::new().unwrap();
    let out = distcolor(
        dir.path(),
        &[
            "sweep", "--graph", "rmat:7", "--graph", "rmat:8,4", "--ranks", "1,4", "--seeds", "3", "--metrics", "s.csv",
            "--json", "s.json", "--trajectory", "t.csv",
        ],
    );
    ok(&out);
    let csv = fs::read_to_string(dir.path().join("s.csv")).unwrap();
    // 2 graphs x 2 presets x 2 rank counts, 3 seeds plus a mean row each
    assert_eq!(csv.lines().count(), 1 + 8 * 4);
    let json = fs::read_to_string(dir.path().join("s.json")).unwrap();
    assert!(json.trim_start().starts_with('['));
    assert_eq!(json.matches("\"graph\":").count(), 32);
}
