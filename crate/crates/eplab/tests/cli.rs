//! End-to-end checks of the `eplab` binary: config-driven runs match the
//! built-in presets byte for byte, outputs are thread-count independent, and
//! bad inputs fail with actionable messages.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use eplab::config::to_toml;
use eplab::presets::{self, Panel};

fn eplab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eplab"))
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn read(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

#[test]
fn sweep_from_a_config_matches_the_figure_preset() {
    let dir = tempfile::tempdir().unwrap();
    let preset = presets::figure(2).unwrap();
    let mut plan = preset.select(Some(Panel::Left))[0].job.plan().clone();
    plan.steps = 50;

    let config_path = dir.path().join("run.toml");
    fs::write(&config_path, to_toml(&plan.config, Some(&plan))).unwrap();

    let sweep_dir = dir.path().join("sweep");
    run_ok(eplab().args(["sweep", "-c"]).arg(&config_path).arg("-o").arg(&sweep_dir));

    let fig_dir = dir.path().join("fig");
    run_ok(
        eplab()
            .args(["figure", "2", "--panel", "left", "--steps", "50", "-o"])
            .arg(&fig_dir),
    );

    assert_eq!(
        read(&sweep_dir.join("sweep.csv")),
        read(&fig_dir.join("fig2_left.csv")),
        "config-driven sweep and preset panel diverge"
    );
}

#[test]
fn outputs_do_not_depend_on_the_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one");
    let four = dir.path().join("four");
    run_ok(
        eplab()
            .env("EPLAB_THREADS", "1")
            .args(["figure", "3", "--panel", "middle", "--steps", "80", "-q", "-o"])
            .arg(&one),
    );
    run_ok(
        eplab()
            .env("EPLAB_THREADS", "4")
            .args(["figure", "3", "--panel", "middle", "--steps", "80", "-q", "-o"])
            .arg(&four),
    );
    assert_eq!(read(&one.join("fig3_middle.csv")), read(&four.join("fig3_middle.csv")));
}

#[test]
fn semantic_config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("bad.toml");
    fs::write(
        &config_path,
        r#"
[[levels]]
kind = "linear"
c0 = 1.0
c1 = -0.5
gamma_half = 0.25

[[levels]]
kind = "linear"
c0 = 0.0
c1 = 1.0
gamma_half = -0.5

[coupling]
mode = "constant"
omega = [0.0, 0.5]
"#,
    )
    .unwrap();
    let out = eplab().args(["ep-find", "-c"]).arg(&config_path).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("levels[0].gamma_half"), "stderr: {stderr}");
}

#[test]
fn missing_config_file_fails_cleanly() {
    let out = eplab().args(["sweep", "-c", "/definitely/not/here.toml"]).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("not/here.toml"), "stderr: {stderr}");
}

#[test]
fn ep_find_reports_both_constant_coupling_roots() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.toml");
    fs::write(
        &config_path,
        r#"
[[levels]]
kind = "linear"
c0 = 1.2
c1 = -0.5
gamma_half = -0.5

[[levels]]
kind = "linear"
c0 = 0.0
c1 = 1.0
gamma_half = -0.5

[coupling]
mode = "constant"
omega = [0.0, 0.5]
"#,
    )
    .unwrap();
    let out = run_ok(eplab().args(["ep-find", "-c"]).arg(&config_path));
    let stdout = String::from_utf8_lossy(&out.stdout);
    // e1 - e2 = 1.2 - 1.5a = +/-1  =>  a = 2/15 and a = 22/15
    assert!(stdout.contains("a = 0.133333333333"), "stdout: {stdout}");
    assert!(stdout.contains("a = 1.466666666667"), "stdout: {stdout}");
    assert!(stdout.contains("2 candidate(s)"), "stdout: {stdout}");
}

#[test]
fn json_format_produces_parsable_output() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.toml");
    fs::write(
        &config_path,
        r#"
[[levels]]
kind = "linear"
c0 = 1.0
c1 = -0.5
gamma_half = -0.5

[[levels]]
kind = "sqrt"
c = 1.0
gamma_half = -0.5

[coupling]
mode = "gaussian"
omega = [0.0, 0.05]

[sweep]
param = "a"
start = 0.01
stop = 2.0
steps = 10

[output]
prefix = "demo"
"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    run_ok(eplab().args(["sweep", "--format", "json", "-c"]).arg(&config_path).arg("-o").arg(&out_dir));
    let text = fs::read_to_string(out_dir.join("demo.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["param"], "a");
    assert_eq!(value["grid"].as_array().unwrap().len(), 10);
    assert_eq!(value["tracks"].as_array().unwrap().len(), 2);
}

#[test]
fn xsec_writes_a_single_grid_when_a_is_fixed() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.toml");
    fs::write(
        &config_path,
        r#"
[[levels]]
kind = "linear"
c0 = 1.2
c1 = -0.5
gamma_half = -0.5

[[levels]]
kind = "linear"
c0 = 0.0
c1 = 1.0
gamma_half = -0.5

[coupling]
mode = "constant"
omega = [0.0, 0.5]

[scattering]
a = 0.9
energy_min = -1.0
energy_max = 2.0
energy_points = 51
"#,
    )
    .unwrap();
    let out = run_ok(eplab().args(["xsec", "-c"]).arg(&config_path).arg("-o").arg(dir.path()));
    let text = fs::read_to_string(dir.path().join("xsec.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("E,sigma,re_S,im_S"));
    assert_eq!(lines.count(), 51);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("xsec at a = 0.9"), "stdout: {stdout}");
}

#[test]
fn xsec_writes_a_surface_when_sweeping_the_mixing_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.toml");
    fs::write(
        &config_path,
        r#"
[[levels]]
kind = "linear"
c0 = 1.2
c1 = -0.5
gamma_half = -0.5

[[levels]]
kind = "linear"
c0 = 0.0
c1 = 1.0
gamma_half = -0.5

[coupling]
mode = "y-param"
omega0 = 0.5

[sweep]
param = "y"
start = 0.0
stop = 1.0
steps = 3
fixed_a = 0.7

[scattering]
energy_points = 41
"#,
    )
    .unwrap();
    run_ok(eplab().args(["xsec", "-c"]).arg(&config_path).arg("-o").arg(dir.path()));
    let text = fs::read_to_string(dir.path().join("xsec_surface.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("y,E,sigma"));
    assert_eq!(lines.count(), 3 * 41);
}

#[test]
fn quiet_flag_silences_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(
        eplab().args(["figure", "1", "--panel", "right", "--steps", "5", "-q", "-o"]).arg(dir.path()),
    );
    assert!(out.stdout.is_empty());

    let loud = run_ok(
        eplab().args(["figure", "1", "--panel", "right", "--steps", "5", "-o"]).arg(dir.path()),
    );
    let stdout = String::from_utf8_lossy(&loud.stdout);
    assert!(stdout.contains("figure 1"), "stdout: {stdout}");
}

#[test]
fn plot_script_lists_every_generated_file() {
    let dir = tempfile::tempdir().unwrap();
    run_ok(
        eplab().args(["figure", "7", "--steps", "5", "--plot-script", "-q", "-o"]).arg(dir.path()),
    );
    let script = fs::read_to_string(dir.path().join("fig7.gp")).unwrap();
    for name in ["fig7_left.csv", "fig7_right.csv", "fig7_xsec_left.csv", "fig7_xsec_right.csv"] {
        assert!(script.contains(name), "script misses {name}:\n{script}");
        assert!(dir.path().join(name).exists(), "{name} was not written");
    }
}
