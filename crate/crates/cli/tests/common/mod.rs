use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
}

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn split_args(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut any = false;
    for c in line.chars() {
        match c {
            '\'' => {
                quoted = !quoted;
                any = true;
            }
            c if c.is_whitespace() && !quoted => {
                if any {
                    out.push(std::mem::take(&mut cur));
                    any = false;
                }
            }
            c => {
                cur.push(c);
                any = true;
            }
        }
    }
    if any {
        out.push(cur);
    }
    out
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(root().join("golden/cases.txt")).expect("case manifest");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once(':').expect("name: args");
            Case { name: name.trim().to_string(), args: split_args(args) }
        })
        .collect()
}

/// Runs the binary in the data directory; returns the transcript.
pub fn transcript(case: &Case) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_groupgeom"))
        .current_dir(root().join("data"))
        .args(&case.args)
        .output()
        .expect("spawn groupgeom");
    let mut t = format!("$ groupgeom {}\n", case.args.join(" "));
    t.push_str(&String::from_utf8_lossy(&out.stdout));
    if !out.stderr.is_empty() {
        t.push_str("-- stderr --\n");
        t.push_str(&String::from_utf8_lossy(&out.stderr));
    }
    t.push_str(&format!("-- exit {} --\n", out.status.code().unwrap_or(-1)));
    t
}
