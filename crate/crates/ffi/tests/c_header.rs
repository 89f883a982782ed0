//! Compiles a C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libfockperm_ffi.a");
    assert!(
        lib.exists(),
        "static library not found at {}",
        lib.display()
    );
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "smoke program failed: {}",
        String::from_utf8_lossy(&run.stderr)
    );
    let stdout = String::from_utf8(run.stdout).unwrap();
    let fields: Vec<&str> = stdout.split_whitespace().collect();
    assert_eq!(fields.len(), 3);
    let u = fockperm::haar_random_unitary(3, 11).unwrap();
    let n = fockperm::OccupationVector::new(vec![2, 1, 0]);
    let m = fockperm::OccupationVector::new(vec![1, 1, 1]);
    let lib_value = fockperm::permanent::permanent_kan_reduced(&u, &n, &m)
        .unwrap()
        .value;
    assert_eq!(fields[0].parse::<f64>().unwrap(), lib_value.re);
    assert_eq!(fields[1].parse::<f64>().unwrap(), lib_value.im);
}
