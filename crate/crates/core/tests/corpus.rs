use std::fs;
use std::path::{Path, PathBuf};

use strux_core::adapters::{newick_dialect, scan_corpus};
use strux_core::transforms::{open_collapse, open_expand};
use strux_core::{tokenize, Dialect, TokenKind};

/// Nesting depth counted straight from the bytes, skipping Newick quotes
/// and comments.
fn recursive_depth(bytes: &[u8]) -> usize {
    fn go(bytes: &[u8], i: &mut usize, depth: usize) -> usize {
        let mut best = depth;
        while *i < bytes.len() {
            let b = bytes[*i];
            *i += 1;
            match b {
                b'(' => best = best.max(go(bytes, i, depth + 1)),
                b')' => return best,
                _ => {}
            }
        }
        best
    }
    go(bytes, &mut 0, 0)
}

#[test]
fn empty_and_deep_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.nwk");
    let deep = dir.path().join("deep.nwk");
    fs::write(&empty, b"").unwrap();
    fs::write(&deep, b"((((((((((((((()))))))))))))))").unwrap();
    let missing = dir.path().join("missing.nwk");
    let scan = scan_corpus(&[&empty, &missing, &deep], &newick_dialect());
    assert_eq!(scan.entries[0].stats.as_ref().unwrap().max_depth, Some(0));
    assert!(scan.entries[1].stats.is_err());
    assert_eq!(scan.entries[2].stats.as_ref().unwrap().max_depth, Some(15));
    assert_eq!(scan.failures().count(), 1);
    assert_eq!(scan.max_depth_histogram.get(&15), Some(&1));
    assert_eq!(scan.entries[2].path, deep);
}

fn rust_sources(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            rust_sources(&path, out);
        } else if path.extension().is_some_and(|e| e == "rs") {
            out.push(path);
        }
    }
}

#[test]
fn own_sources_scan_matches_a_recursive_counter() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("src");
    let mut paths = Vec::new();
    rust_sources(&root, &mut paths);
    paths.sort();
    // Parentheses only, no skip regions: string literals in the sources
    // would otherwise need a Rust-aware lexer.
    let mut d = Dialect::dyck();
    d.name = "parens".into();
    d.bracket_kinds[0] = strux_core::BracketKind { open: b'(', close: b')' };
    d.universal_close = b')';
    let scan = scan_corpus(&paths, &d);
    assert_eq!(scan.entries.len(), paths.len());
    for (entry, path) in scan.entries.iter().zip(&paths) {
        assert_eq!(&entry.path, path);
        let bytes = fs::read(path).unwrap();
        let report = entry.stats.as_ref().unwrap();
        if let Some(depth) = report.max_depth {
            assert_eq!(depth, recursive_depth(&bytes), "{}", path.display());
        }
    }
    assert!(scan.max_depth_histogram.keys().all(|&d| d < 64));
}

#[test]
fn newick_opening_round_trips() {
    let d = newick_dialect();
    let trees: &[&[u8]] = &[
        b"(((a,b),c),d);",
        b"((A:0.1,B:0.2)90:0.3,(C,D));\n",
        b"('x (y)'',z',(b,c)[&comment (]);",
        b"(,(,),);",
        b"((((((a))))));",
        b"",
    ];
    for t in trees {
        let s = tokenize(t, &d).unwrap();
        let m = open_collapse(&s).unwrap();
        let marks = m.kinds().filter(|k| **k == TokenKind::OpenMark).count();
        assert_eq!(m.byte_len() + marks, t.len());
        assert_eq!(open_expand(&m).unwrap().render(), t.to_vec());
    }
    let s = tokenize(b"(((a,b),c),d);", &d).unwrap();
    assert_eq!(open_collapse(&s).unwrap().byte_len(), 12);
}

#[test]
fn dialect_files_resolve_from_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("angle.dialect"),
        "name = angle\nbrackets = <:>,(:)\nuniversal_close = >\ncolon = ~\ntyped_open = none\nskip_regions = none\n",
    )
    .unwrap();
    let d = Dialect::resolve("angle", Some(dir.path())).unwrap();
    assert_eq!(d.name, "angle");
    let s = tokenize(b"<a <b>>", &d).unwrap();
    let c = strux_core::transforms::colon_collapse(&s).unwrap();
    assert_eq!(c.render(), b"<a ~b>");
    assert!(Dialect::resolve("no-such-dialect", Some(dir.path())).is_err());
}
