use std::path::Path;
use std::process::{Command, Output};

use dubins_fleet::files::{ResultFile, ScenarioFile};
use dubins_fleet::svg::parse_endpoints;
use dubins_fleet_core::Complex;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dubins-fleet"));
    c.env("DUBINS_FLEET_THREADS", "2");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SWAP: &str = r#"{
  "format": 1,
  "vehicles": {"speed": 15, "min_turn_radius": 40, "separation": 80},
  "aircraft": [
    {"start": [0, 0, 0], "end": [600, 0, 0]},
    {"start": [600, 0, 3.141592653589793], "end": [0, 0, 3.141592653589793]}
  ]
}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.json", SWAP);
    assert_eq!(code(&run(&["plan", &ok])), 0);

    let limited = run(&["plan", &ok, "--max-iters", "1"]);
    assert_eq!(code(&limited), 2);
    let r = ResultFile::from_json(&String::from_utf8(limited.stdout).unwrap()).unwrap();
    assert_eq!(r.status, "IterationLimit");
    assert!(r.aircraft.is_empty());

    let windy = write(dir.path(), "windy.json", &SWAP.replace("\"aircraft\"", "\"wind\": [12, 9],\n  \"aircraft\""));
    let o = run(&["plan", &windy]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("wind"), "{}", stderr(&o));

    let unknown = write(dir.path(), "unknown.json", &SWAP.replace("\"format\": 1", "\"format\": 1, \"colour\": 3"));
    assert_eq!(code(&run(&["plan", &unknown])), 1);
    let broken = write(dir.path(), "broken.json", &SWAP[..40]);
    assert_eq!(code(&run(&["plan", &broken])), 1);
    assert_eq!(code(&run(&["plan", "/nonexistent/scenario.json"])), 1);
    assert_eq!(code(&run(&["plan", &ok, "--timeout", "-1"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn result_and_svg_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.json");
    let o = run(&["generate", "--family", "FullRng", "--n", "4", "--seed", "3", "--out", scenario.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let file = ScenarioFile::load(&scenario).unwrap();
    assert_eq!(file.generator.as_ref().unwrap().seed, 3);

    let out = dir.path().join("r.json");
    let svg = dir.path().join("r.svg");
    let o = run(&["plan", scenario.to_str().unwrap(), "--out", out.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let result = ResultFile::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(result.solved());
    let paths = result.paths(file.vehicles.speed).unwrap();
    let drawn = parse_endpoints(&std::fs::read_to_string(&svg).unwrap());
    assert_eq!(drawn.len(), paths.len());
    for (k, (p, entry)) in paths.iter().zip(&result.aircraft).enumerate() {
        // replayed primitives land on the recorded end
        let end = p.eval(p.duration()).unwrap();
        let recorded = Complex::new(entry.end[0], entry.end[1]);
        assert!((end.position() - recorded).norm() <= 1e-6);
        let start = Complex::new(entry.start[0], entry.start[1]);
        assert!((drawn[k].0 - start).norm() <= 1e-6);
        assert!((drawn[k].1 - recorded).norm() <= 1e-6);
        let target = &file.aircraft[k].end;
        assert!((recorded - Complex::new(target[0], target[1])).norm() <= 1e-6);
    }
}

#[test]
fn bench_rows_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut tables = Vec::new();
    for (name, jobs) in [("a.csv", "1"), ("b.csv", "2")] {
        let path = dir.path().join(name);
        let o = run(&[
            "bench", "--family", "FullRng", "--sizes", "3-6", "--cases", "10", "--seed", "7", "--jobs", jobs, "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let mut reader = csv::Reader::from_path(&path).unwrap();
        let headers = reader.headers().unwrap().clone();
        assert_eq!(
            headers.iter().collect::<Vec<_>>(),
            ["family", "n", "seed", "status", "tau", "wall_time_s", "iterations"]
        );
        let rows: Vec<Vec<String>> = reader
            .records()
            .map(|r| {
                let r = r.unwrap();
                r.iter().enumerate().filter(|&(i, _)| i != 5).map(|(_, f)| f.to_string()).collect()
            })
            .collect();
        assert_eq!(rows.len(), 40);
        tables.push(rows);
    }
    assert_eq!(tables[0], tables[1]);
    assert!(tables[0].iter().all(|r| r[0] == "FullRng"));
    assert_eq!(tables[0][0][2], "7");
    assert_eq!(tables[0][9][2], "16");
}
