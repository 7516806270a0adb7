//! End-to-end checks of the command-line surface.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_grandlab"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("grandlab-cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn simulate_is_byte_identical_across_worker_counts() {
    let run = |workers: &str, out: &PathBuf| {
        let status = bin()
            .args([
                "simulate",
                "--code",
                "bch:15:11",
                "--variants",
                "orb,sgrand,ft-orb",
                "--ebn0",
                "3,4",
                "--frames",
                "400",
                "--t-max",
                "256",
                "--eta-every",
                "20",
                "--seed",
                "5",
                "--workers",
                workers,
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
    };
    let one = tmp("sweep_w1.csv");
    let eight = tmp("sweep_w8.csv");
    run("1", &one);
    run("8", &eight);
    let a = fs::read(&one).unwrap();
    let b = fs::read(&eight).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "worker count changed the output bytes");
}

#[test]
fn gen_code_emits_readable_alist_pair() {
    let out = tmp("bch_7_4.alist");
    let status = bin()
        .args(["gen-code", "--bch", "3", "1", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let h = grandlab::gf2::read_alist(&out).unwrap();
    assert_eq!((h.n(), h.m_rows()), (7, 3));
    assert_eq!(h.rank(), 3);
    let g_path = out.with_extension("gen.alist");
    let g = grandlab::gf2::read_alist(&g_path).unwrap();
    assert_eq!((g.n(), g.m_rows()), (7, 4));

    // the generated pair drives a simulation via the alist path
    let csv = tmp("alist_sim.csv");
    let status = bin()
        .args([
            "simulate",
            "--code",
            &format!("alist:{}", out.display()),
            "--variants",
            "orb",
            "--ebn0",
            "6",
            "--frames",
            "50",
            "--t-max",
            "64",
            "--seed",
            "2",
            "--out",
            csv.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.lines().count() == 2, "{text}");
}

#[test]
fn patterns_dump_has_expected_head() {
    let out = bin()
        .args(["patterns", "--gamma", "orb", "--n", "8", "--t", "6", "--dump"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,weight,support");
    assert_eq!(lines[1], "1,0.0,");
    assert_eq!(lines[2], "2,1.0,1");
    // weight-3 class: singleton {3} before pair {1 2}
    assert_eq!(lines[4], "4,3.0,3");
    assert_eq!(lines[5], "5,3.0,1 2");
}

#[test]
fn config_file_applies_and_flags_override() {
    let cfg = tmp("sweep.cfg");
    fs::write(
        &cfg,
        "code = bch:15:11\nvariants = orb\nebn0 = 4\nframes = 120\nt_max = 128\nseed = 9\n",
    )
    .unwrap();
    let out = tmp("cfg_run.csv");
    let status = bin()
        .args([
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--frames",
            "60",
            "--out",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&out).unwrap();
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "orb");
    assert_eq!(fields[2], "60", "flag must override the file frames");
}

#[test]
fn validate_partition_csv_shape() {
    let out = bin()
        .args([
            "validate-partition",
            "--gamma",
            "orb",
            "--n-max",
            "40",
            "--n",
            "127",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("m,o_exact,o_tilde,rel_error\n"));
    assert_eq!(text.lines().count(), 41);
}

#[test]
fn unknown_variant_fails_with_message() {
    let out = bin()
        .args([
            "simulate",
            "--code",
            "bch:15:11",
            "--variants",
            "magic",
            "--frames",
            "1",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("magic"), "{err}");
}
