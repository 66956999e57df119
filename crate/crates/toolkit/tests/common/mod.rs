#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub fn demo(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/demo").join(name)
}

pub fn demo_str(name: &str) -> String {
    demo(name).display().to_string()
}

/// Run the tool in-process with `--quiet`.
pub fn aec(args: &[&str]) -> i32 {
    let mut argv = vec!["aec", "--quiet"];
    argv.extend_from_slice(args);
    aec_toolkit::run(argv)
}

pub fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// Every regular file below `dir`, relative, sorted.
pub fn files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(dir).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

/// Contents of every file below `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    files(dir).into_iter().map(|f| (f.clone(), std::fs::read(dir.join(&f)).unwrap())).collect()
}
