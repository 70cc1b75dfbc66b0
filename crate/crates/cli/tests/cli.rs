use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn strux(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_strux"))
        .args(args)
        .env_remove("STRUX_DIALECT_PATH")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn strux");
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: &[u8]) -> Vec<u8> {
    let out = strux(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn ackermann_transforms_and_restores_byte_exact() {
    let src = std::fs::read(data("ackermann.scm")).unwrap();
    let both = std::fs::read(data("ackermann_both.scm")).unwrap();
    let closing = std::fs::read(data("ackermann_closing3.scm")).unwrap();

    let path = data("ackermann.scm");
    let path = path.to_str().unwrap();
    assert_eq!(ok(&["transform", "--dialect", "sexpr", "--ops", "sep,colon", "--style", "table", path], b""), both);
    assert_eq!(ok(&["transform", "--dialect", "sexpr", "--ops", "colon", path], b""), closing);
    assert_eq!(ok(&["restore", "--dialect", "sexpr", "--ops", "sep,colon"], &both), src);
    assert_eq!(ok(&["restore", "--dialect", "sexpr", "--ops", "colon"], &closing), src);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.scm");
    ok(&["transform", "--ops", "colon", "--out", out.to_str().unwrap()], b"(a (b (c)))");
    assert_eq!(std::fs::read(out).unwrap(), b"(a :b :c)");
}

#[test]
fn universal_close_round_trips() {
    let text = b"{a (b [c] d) e}";
    let u = ok(&["transform", "--ops", "ucb"], text);
    assert_eq!(u, b"{a (b [c] d] e]");
    assert_eq!(ok(&["restore", "--ops", "ucb"], &u), text);
}

#[test]
fn conflicting_ops_exit_with_usage_status() {
    let out = strux(&["transform", "--ops", "colon,opening"], b"(a)");
    assert_eq!(out.status.code(), Some(2));
    let out = strux(&["transform", "--fold-depth", "0"], b"(a)");
    assert_eq!(out.status.code(), Some(2));
    let out = strux(&["transform", "--ops", "bogus"], b"(a)");
    assert_eq!(out.status.code(), Some(2));
    let out = strux(&["frobnicate"], b"");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_reports_position() {
    let out = strux(&["transform"], b"(a\n  (b)");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1:1"), "{err}");
}

#[test]
fn escape_expand_and_compress() {
    assert_eq!(ok(&["escape", "expand"], b"\\9("), b"(((((((((");
    let text = b"xxxxxxxx yy";
    let c = ok(&["escape", "compress", "--min-run", "4"], text);
    assert!(c.len() < text.len());
    assert_eq!(ok(&["escape", "expand"], &c), text);
    let out = strux(&["escape", "expand"], b"ab\\q");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn indent_round_trip_and_underflow() {
    let text = b"def f():\n    if x:\n        return 1\n    return 2\n";
    let enc = ok(&["indent", "encode"], text);
    assert!(!enc.contains(&b' ') || enc.len() < text.len());
    assert_eq!(ok(&["indent", "decode"], &enc), text);

    let two = b"a\n  b\n    c\n";
    let enc = ok(&["indent", "encode", "--unit", "2", "--strict"], two);
    assert_eq!(ok(&["indent", "decode", "--unit", "2"], &enc), two);

    let out = strux(&["indent", "decode"], b"\x1d\x1fx\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pop underflow at"));

    let out = strux(&["indent", "encode", "--strict"], b"a\n   b\n");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stats_key_values() {
    let text = String::from_utf8(ok(&["stats"], b"((a))")).unwrap();
    assert!(text.lines().any(|l| l == "paren_count=4"), "{text}");
    assert!(text.lines().any(|l| l == "max_depth=2"), "{text}");
}

#[test]
fn stats_scans_several_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    std::fs::write(&a, "(x (y))").unwrap();
    std::fs::write(&b, "[[[z]]]").unwrap();
    let text = String::from_utf8(ok(&["stats", a.to_str().unwrap(), b.to_str().unwrap()], b"")).unwrap();
    let depths: Vec<_> = text.lines().filter(|l| l.starts_with("max_depth=")).collect();
    assert_eq!(depths, ["max_depth=2", "max_depth=3"]);
    assert!(text.contains("depth.2=1") && text.contains("depth.3=1"), "{text}");

    let missing = dir.path().join("missing.txt");
    let out = strux(&["stats", a.to_str().unwrap(), missing.to_str().unwrap()], b"");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_identity_has_zero_delta() {
    let text = String::from_utf8(ok(&["bench", "--ops", "none"], b"(a (b c))")).unwrap();
    assert!(text.contains("input_bytes=9"), "{text}");
    assert!(text.contains("output_bytes=9"), "{text}");
    assert!(text.contains("marks_added=0"), "{text}");
}

#[test]
fn bench_missing_compressor_is_a_warning() {
    let out = strux(&["bench", "--compress-cmd", "definitely-not-a-compressor"], b"(a (b))");
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn dialect_list_show_and_search_path() {
    let names = String::from_utf8(ok(&["dialect", "list"], b"")).unwrap();
    assert!(names.lines().any(|l| l == "newick"));
    let shown = ok(&["dialect", "show", "newick"], b"");

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tree.dialect"), &shown).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_strux"))
        .args(["transform", "--dialect", "tree", "--ops", "opening"])
        .env("STRUX_DIALECT_PATH", dir.path())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(b"((a,b)c,d);")?;
            c.wait_with_output()
        })
        .unwrap();
    assert!(out.status.success());
    assert_eq!(out.stdout, b"(a,b^c,d);");

    let out = strux(&["transform", "--dialect", "nonexistent"], b"()");
    assert_eq!(out.status.code(), Some(2));
}

fn corpus() -> Vec<Vec<u8>> {
    let mut state = 0x2545_f491_u64;
    let mut next = move |n: u64| {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state % n
    };
    (0..40)
        .map(|_| {
            let mut out = Vec::new();
            let mut stack = Vec::new();
            for _ in 0..60 {
                match next(6) {
                    0 | 1 => {
                        let k = next(3) as usize;
                        out.push(b"([{"[k]);
                        stack.push(b")]}"[k]);
                    }
                    2 | 3 if !stack.is_empty() => out.push(stack.pop().unwrap()),
                    4 => out.push(b' '),
                    _ => out.push(b'a' + next(5) as u8),
                }
            }
            while let Some(c) = stack.pop() {
                out.push(c);
            }
            out
        })
        .collect()
}

#[test]
fn every_op_subset_round_trips_through_the_binary() {
    let subsets = [
        "none", "sep", "colon", "opening", "ucb", "sep,colon", "sep,opening", "sep,ucb", "colon,ucb",
        "opening,ucb", "sep,colon,ucb", "sep,opening,ucb",
    ];
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = corpus()
        .into_iter()
        .enumerate()
        .map(|(i, text)| {
            let p = dir.path().join(format!("{i}.txt"));
            std::fs::write(&p, &text).unwrap();
            (p, text)
        })
        .collect();
    for ops in subsets {
        for (path, text) in &files {
            let t = ok(&["transform", "--dialect", "sexpr", "--ops", ops, path.to_str().unwrap()], b"");
            assert_eq!(&ok(&["restore", "--dialect", "sexpr", "--ops", ops], &t), text, "{ops} {}", path.display());
        }
    }
}
