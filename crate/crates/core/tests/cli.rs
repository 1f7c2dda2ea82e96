mod common;

use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};
use std::time::{Duration, Instant};

use emotrace::audio::{write_wav_i16, AudioBuffer};
use emotrace::regression::{load_model, save_dataset, save_model};
use emotrace::synth;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_emotrace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn wav(dir: &Path, name: &str, audio: &AudioBuffer) -> PathBuf {
    let path = dir.join(name);
    write_wav_i16(&path, &[audio.samples()], audio.sample_rate()).unwrap();
    path
}

fn model_file(dir: &Path) -> PathBuf {
    let path = dir.join("model.json");
    save_model(&common::new2_model(), &path).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn features_on_silence_has_no_onsets() {
    let dir = tempfile::tempdir().unwrap();
    let audio = wav(dir.path(), "silence.wav", &AudioBuffer::silence(22050 * 6, 22050));
    let out = dir.path().join("feat");
    let o = run(&["features", "--audio", s(&audio), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(out.join("onsets.csv")).unwrap(), "time_s\n");
    let windows = std::fs::read_to_string(out.join("windows.csv")).unwrap();
    assert_eq!(windows.lines().count(), 3);
}

#[test]
fn features_density_matches_click_rate() {
    let dir = tempfile::tempdir().unwrap();
    // offset so no click sits on a window's first sample, where spectral
    // flux has no earlier frame to compare against
    let (clicks, _) = synth::click_train(2.0, 10.0, 0.5, 0.25, 22050);
    let audio = wav(dir.path(), "clicks.wav", &clicks);
    let out = dir.path().join("feat");
    let o = run(&["features", "--audio", s(&audio), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let windows = std::fs::read_to_string(out.join("windows.csv")).unwrap();
    let mut lines = windows.lines();
    assert_eq!(lines.next(), Some("t_start,t_end,onset_density,mean_rms"));
    let mut n = 0;
    for line in lines {
        let density: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((density - 2.0).abs() <= 0.1, "{line}");
        n += 1;
    }
    assert_eq!(n, 6);
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let density: f64 = summary.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((density - 2.0).abs() <= 0.1);
}

#[test]
fn missing_audio_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nowhere.wav");
    let o = run(&["features", "--audio", s(&missing), "--out", s(dir.path())]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("nowhere.wav"), "{}", stderr(&o));
}

#[test]
fn fit_on_exact_data_reports_unit_adjusted_r2() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    save_dataset(&common::exact_dataset(40, 3), &data).unwrap();
    let model = dir.path().join("m.json");
    let o = run(&["fit", "--dataset", s(&data), "--out", s(&model)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let row = text
        .lines()
        .find(|l| l.starts_with("The (9)-mid-level feature set"))
        .unwrap_or_else(|| panic!("no (9) row in\n{text}"));
    let cells: Vec<&str> = row.split('|').map(str::trim).collect();
    assert_eq!(&cells[1..], ["1.000", "1.000"]);
    assert_eq!(load_model(&model).unwrap().p(), 9);
}

#[test]
fn fit_compare_prints_three_rows() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    save_dataset(&common::noisy_dataset(120, 0.5, 1), &data).unwrap();
    let model = dir.path().join("m.json");
    let o = run(&["fit", "--dataset", s(&data), "--out", s(&model), "--compare"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    for label in [
        "The (9)-mid-level feature set",
        "The (7)-mid-level feature set",
        "Onset density and RMS amplitude",
    ] {
        assert_eq!(text.lines().filter(|l| l.starts_with(label)).count(), 1, "{text}");
    }
}

#[test]
fn fit_new2_gives_two_features() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    save_dataset(&common::noisy_dataset(50, 0.3, 2), &data).unwrap();
    let model = dir.path().join("m.json");
    let o = run(&["fit", "--dataset", s(&data), "--features", "new2", "--out", s(&model)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m = load_model(&model).unwrap();
    assert_eq!(m.p(), 2);
    assert_eq!(m.feature_names, ["onset_density", "mean_rms"]);
    assert!(stdout(&o).contains("p = 2"));
}

#[test]
fn fit_reports_bad_row_number() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    save_dataset(&common::exact_dataset(20, 4), &data).unwrap();
    let text = std::fs::read_to_string(&data).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[5] = lines[5].replacen(",", ",oops,", 1);
    lines[5] = lines[5].rsplit_once(',').unwrap().0.to_string();
    std::fs::write(&data, lines.join("\n") + "\n").unwrap();
    let o = run(&["fit", "--dataset", s(&data), "--out", s(&dir.path().join("m.json"))]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("row 6"), "{}", stderr(&o));
    assert!(!dir.path().join("m.json").exists());
}

#[test]
fn analyze_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    save_dataset(&common::noisy_dataset(80, 0.5, 5), &data).unwrap();
    let model = dir.path().join("m.json");
    assert!(run(&["fit", "--dataset", s(&data), "--out", s(&model)]).status.success());
    let out = dir.path().join("imp");
    let o = run(&["analyze", "--model", s(&model), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("importance.csv")).unwrap();
    assert_eq!(csv.lines().count(), 19);
    assert!(std::fs::read_to_string(out.join("importance.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn decode_30s_gives_26_lines() {
    let dir = tempfile::tempdir().unwrap();
    let (clicks, _) = synth::click_train(3.0, 30.0, 0.5, 0.0, 22050);
    let audio = wav(dir.path(), "a.wav", &clicks);
    let model = model_file(dir.path());
    let out = dir.path().join("trace.jsonl");
    let o = run(&["decode", "--audio", s(&audio), "--model", s(&model), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 26);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["t"], 5.0);
    assert_eq!(first["smoothed"], false);
}

#[test]
fn decode_smooth_appends_flagged_records() {
    let dir = tempfile::tempdir().unwrap();
    let (clicks, _) = synth::click_train(3.0, 8.0, 0.5, 0.0, 22050);
    let audio = wav(dir.path(), "a.wav", &clicks);
    let model = model_file(dir.path());
    let out = dir.path().join("trace.csv");
    let o = run(&[
        "decode", "--audio", s(&audio), "--model", s(&model), "--out", s(&out), "--smooth",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("t,valence,arousal,word,smoothed\n"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",false")).count(), 4);
    // ticks at 5 + k/30 up to the last raw time (8 s)
    assert_eq!(text.lines().filter(|l| l.ends_with(",true")).count(), 91);
}

#[test]
fn decode_static_on_15s_gives_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let (clicks, _) = synth::click_train(2.0, 15.0, 0.5, 0.0, 22050);
    let audio = wav(dir.path(), "a.wav", &clicks);
    let model = model_file(dir.path());
    let out = dir.path().join("static.jsonl");
    let o = run(&[
        "decode", "--audio", s(&audio), "--model", s(&model), "--static", "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1);
    let rec: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(rec["t"], 15.0);
}

#[test]
fn both_mode_flags_is_a_usage_error() {
    let o = run(&["decode", "--audio", "a.wav", "--model", "m.json", "--static", "--dynamic"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot be used with"), "{}", stderr(&o));
}

#[test]
fn decode_requires_provider_for_midlevel_models() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data.csv");
    save_dataset(&common::noisy_dataset(60, 0.4, 6), &data).unwrap();
    let model = dir.path().join("m.json");
    assert!(run(&["fit", "--dataset", s(&data), "--out", s(&model)]).status.success());
    let audio = wav(dir.path(), "a.wav", &AudioBuffer::silence(22050 * 6, 22050));
    let o = run(&["decode", "--audio", s(&audio), "--model", s(&model)]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--provider"));
    let o = run(&[
        "decode", "--audio", s(&audio), "--model", s(&model),
        "--provider", "constant:0.5,0.5,0.5,0.5,0.5,0.5,0.5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let (clicks, _) = synth::click_train(2.0, 10.0, 0.5, 0.0, 22050);
    let audio = wav(dir.path(), "a.wav", &clicks);
    let model = model_file(dir.path());
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "[decode]\naudio = {:?}\nmodel = {:?}\nhop = 2.5\n",
            s(&audio),
            s(&model)
        ),
    )
    .unwrap();
    let o = run(&["decode", "--config", s(&cfg)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = run(&["decode", "--config", s(&cfg), "--hop", "1"]);
    assert_eq!(stdout(&o).lines().count(), 6);
}

/// Starts `stream` on a free port and returns the child and its address.
fn spawn_stream(args: &[&str]) -> (Child, String) {
    let mut child = bin()
        .arg("stream")
        .args(["--port", "0"])
        .args(args)
        .stderr(Stdio::piped())
        .stdout(Stdio::null())
        .spawn()
        .unwrap();
    let mut lines = BufReader::new(child.stderr.take().unwrap()).lines();
    let addr = loop {
        let line = lines.next().expect("stream exited early").unwrap();
        if let Some(a) = line.strip_prefix("listening on http://") {
            break a.to_string();
        }
    };
    std::thread::spawn(move || for _ in lines {});
    (child, addr)
}

fn status(addr: &str) -> Option<serde_json::Value> {
    use std::io::{Read, Write};
    let mut s = std::net::TcpStream::connect(addr).ok()?;
    write!(s, "GET /status HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n").ok()?;
    let mut buf = String::new();
    s.read_to_string(&mut buf).ok()?;
    serde_json::from_str(buf.split("\r\n\r\n").nth(1)?).ok()
}

fn collect_frames(addr: &str) -> Vec<serde_json::Value> {
    let (mut ws, _) = tokio_tungstenite::tungstenite::connect(format!("ws://{addr}/stream")).unwrap();
    let mut frames = Vec::new();
    while let Ok(msg) = ws.read() {
        match msg {
            tokio_tungstenite::tungstenite::Message::Text(t) => {
                frames.push(serde_json::from_str(&t).unwrap())
            }
            tokio_tungstenite::tungstenite::Message::Close(_) => break,
            _ => {}
        }
    }
    frames
}

fn write_trace(dir: &Path, n: usize) -> PathBuf {
    let times: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let path = dir.join("trace.jsonl");
    emotrace::decoder::write_trace_jsonl(&path, &[&common::trace(&times)]).unwrap();
    path
}

#[test]
fn stream_status_is_reachable_within_a_second() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write_trace(dir.path(), 3);
    let started = Instant::now();
    let (mut child, addr) = spawn_stream(&["--trace", s(&trace), "--wait-for-clients", "1"]);
    let json = loop {
        if let Some(j) = status(&addr) {
            break j;
        }
        assert!(started.elapsed() < Duration::from_secs(1));
        std::thread::sleep(Duration::from_millis(10));
    };
    assert!(started.elapsed() < Duration::from_secs(1), "{:?}", started.elapsed());
    assert_eq!(json["state"], "waiting");
    child.kill().unwrap();
    child.wait().unwrap();
}

#[test]
fn stream_interrupt_sends_end_and_exits_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write_trace(dir.path(), 100);
    let (mut child, addr) = spawn_stream(&["--trace", s(&trace), "--wait-for-clients", "1"]);
    let reader = std::thread::spawn(move || collect_frames(&addr));
    std::thread::sleep(Duration::from_millis(1500));
    unsafe {
        libc::kill(child.id() as i32, libc::SIGINT);
    }
    let frames = reader.join().unwrap();
    assert_eq!(frames.last().unwrap()["kind"], "end");
    assert!(frames.len() < 10);
    let status = child.wait().unwrap();
    assert!(status.success(), "{status:?}");
}

#[test]
fn stream_live_30s_gives_26_points() {
    let dir = tempfile::tempdir().unwrap();
    let (clicks, _) = synth::click_train(3.0, 30.0, 0.5, 0.0, 22050);
    let audio = wav(dir.path(), "a.wav", &clicks);
    let model = model_file(dir.path());
    let (mut child, addr) = spawn_stream(&[
        "--audio", s(&audio), "--model", s(&model), "--speed", "10", "--wait-for-clients", "1",
    ]);
    let frames = collect_frames(&addr);
    let points = frames.iter().filter(|f| f["kind"] == "point").count();
    assert_eq!(points, 26);
    assert_eq!(frames.last().unwrap()["kind"], "end");
    assert!(child.wait().unwrap().success());
}
