//! Reproducibility guarantees: open-loop replay of a recorded control field
//! and bit-exact reruns from a saved manifest.

use qwv::experiments::{preset, run_scenario};
use qwv::io::config::ScenarioConfig;
use qwv::io::manifest::RunManifest;

fn temp_dir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "qwv-test-{tag}-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn shorten(cfg: &mut ScenarioConfig, t_final: f64) {
    cfg.propagation.t_final = t_final;
    cfg.propagation.record_stride = 500;
}

/// A closed-loop control run, replayed open-loop from its recorded per-step
/// field log, must land on the same final populations.
#[test]
fn lct_run_replays_open_loop() {
    let dir = temp_dir("replay");
    let mut cfg = preset("lct-r10").unwrap();
    shorten(&mut cfg, 1500.0);
    cfg.output.dir = dir.to_str().unwrap().to_string();
    let closed = run_scenario(&cfg).unwrap();

    let mut replay_cfg = cfg.clone();
    replay_cfg.scenario = "lct-r10-replay".into();
    replay_cfg.output.dir = String::new();
    replay_cfg.field.kind = "replay".into();
    replay_cfg.field.field_file =
        Some(dir.join("field.dat").to_str().unwrap().to_string());
    let open = run_scenario(&replay_cfg).unwrap();

    let a = closed.trace.last().unwrap();
    let b = open.trace.last().unwrap();
    assert!((a.p_left - b.p_left).abs() < 1e-6, "{} vs {}", a.p_left, b.p_left);
    assert!((a.p_right - b.p_right).abs() < 1e-6);
    assert!((a.p_target - b.p_target).abs() < 1e-6);
    assert!((a.p_total - b.p_total).abs() < 1e-6);

    std::fs::remove_dir_all(&dir).ok();
}

/// Rerunning the exact config stored in a manifest reproduces the trace and
/// field files byte for byte.
#[test]
fn manifest_rerun_is_bit_exact() {
    let dir1 = temp_dir("manifest-a");
    let mut cfg = preset("tunnel-r10").unwrap();
    shorten(&mut cfg, 600.0);
    cfg.output.dir = dir1.to_str().unwrap().to_string();
    run_scenario(&cfg).unwrap();

    let manifest = RunManifest::load(&dir1.join("manifest.toml")).unwrap();
    assert_eq!(manifest.status, "ok");

    let dir2 = temp_dir("manifest-b");
    let mut cfg2 = manifest.config.clone();
    cfg2.output.dir = dir2.to_str().unwrap().to_string();
    run_scenario(&cfg2).unwrap();

    for name in ["trace.dat", "field.dat"] {
        let a = std::fs::read(dir1.join(name)).unwrap();
        let b = std::fs::read(dir2.join(name)).unwrap();
        assert!(a == b, "{name} differs between original and manifest rerun");
    }
    let m2 = RunManifest::load(&dir2.join("manifest.toml")).unwrap();
    for key in ["p_left_final", "p_right_final", "p_total_final", "ionization"] {
        assert_eq!(
            manifest.results.get(key).and_then(|v| v.as_float()),
            m2.results.get(key).and_then(|v| v.as_float()),
            "result '{key}' differs"
        );
    }

    std::fs::remove_dir_all(&dir1).ok();
    std::fs::remove_dir_all(&dir2).ok();
}
