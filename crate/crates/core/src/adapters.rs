//! Ready-made dialects, corpus scanning and size reporting.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::dialect::Dialect;
use crate::error::Result;
use crate::stats::{stats, StatsReport};
use crate::token::{tokenize, TokenKind, TokenStream};
use crate::transforms::{pipeline, Profile};

/// Only `(` and `)` are reserved; `,` `;` and `:` stay data. Quoted labels
/// (with `''` for a quote) and `[...]` comments are opaque.
pub fn newick_dialect() -> Dialect {
    Dialect::newick()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub path: PathBuf,
    pub dialect: String,
    /// The read or tokenize error, as text, for a file that was skipped.
    pub stats: std::result::Result<StatsReport, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusScan {
    pub entries: Vec<CorpusEntry>,
    /// Number of files per maximum depth; unbalanced files are left out.
    pub max_depth_histogram: BTreeMap<usize, usize>,
}

impl CorpusScan {
    pub fn failures(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter().filter(|e| e.stats.is_err())
    }
}

/// Scans files in parallel. Entries come back in the order of `paths`.
pub fn scan_corpus<P: AsRef<Path> + Sync>(paths: &[P], dialect: &Dialect) -> CorpusScan {
    let entries: Vec<CorpusEntry> = paths
        .par_iter()
        .map(|p| {
            let path = p.as_ref();
            let stats = std::fs::read(path)
                .map_err(|e| e.to_string())
                .and_then(|bytes| tokenize(&bytes, dialect).map_err(|e| e.to_string()))
                .map(|s| stats(&s));
            CorpusEntry {
                path: path.to_path_buf(),
                dialect: dialect.name.clone(),
                stats,
            }
        })
        .collect();
    let mut max_depth_histogram = BTreeMap::new();
    for depth in entries.iter().filter_map(|e| e.stats.as_ref().ok()?.max_depth) {
        *max_depth_histogram.entry(depth).or_insert(0) += 1;
    }
    CorpusScan {
        entries,
        max_depth_histogram,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedSize {
    pub command: String,
    pub before: std::result::Result<usize, String>,
    pub after: std::result::Result<usize, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeReport {
    pub input_bytes: usize,
    pub output_bytes: usize,
    /// Colons, open marks, separators and commas gained by the transform.
    pub marks_added: usize,
    pub parens_before: usize,
    pub parens_after: usize,
    pub compressed: Vec<CompressedSize>,
    pub wall_time: Duration,
}

fn marks(stream: &TokenStream) -> usize {
    stream
        .kinds()
        .filter(|k| {
            matches!(
                k,
                TokenKind::Colon | TokenKind::OpenMark | TokenKind::Separator { .. } | TokenKind::Comma
            )
        })
        .count()
}

fn parens(stream: &TokenStream) -> usize {
    stream.kinds().filter(|k| k.is_open() || k.is_close()).count()
}

/// Sizes before and after a transform. Each compressor command is run on
/// both texts; a command that cannot run is recorded, never fatal.
pub fn size_report(
    input: &TokenStream,
    transformed: &TokenStream,
    compressor_cmds: &[String],
    wall_time: Duration,
) -> SizeReport {
    let before = input.render();
    let after = transformed.render();
    let compressed = compressor_cmds
        .iter()
        .map(|cmd| CompressedSize {
            command: cmd.clone(),
            before: compressed_size(cmd, &before),
            after: compressed_size(cmd, &after),
        })
        .collect();
    SizeReport {
        input_bytes: before.len(),
        output_bytes: after.len(),
        marks_added: marks(transformed).saturating_sub(marks(input)),
        parens_before: parens(input),
        parens_after: parens(transformed),
        compressed,
        wall_time,
    }
}

/// Pipes `data` through a filter command (split on whitespace, so `gzip -9`
/// works) and counts the bytes it writes.
pub fn compressed_size(cmd: &str, data: &[u8]) -> std::result::Result<usize, String> {
    let mut parts = cmd.split_whitespace();
    let program = parts.next().ok_or_else(|| "empty command".to_string())?;
    let mut child = Command::new(program)
        .args(parts)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| format!("{program}: {e}"))?;
    let mut stdin = child.stdin.take().expect("piped");
    let mut stdout = child.stdout.take().expect("piped");
    // Writing from a second thread keeps a filter that fills its output
    // pipe before reading all input from deadlocking us.
    let (written, count) = std::thread::scope(|scope| {
        let writer = scope.spawn(move || stdin.write_all(data));
        let mut sink = Vec::new();
        let count = stdout.read_to_end(&mut sink);
        (writer.join().expect("writer thread"), count)
    });
    let status = child.wait().map_err(|e| e.to_string())?;
    written.map_err(|e| format!("{program}: {e}"))?;
    let count = count.map_err(|e| format!("{program}: {e}"))?;
    if !status.success() {
        return Err(format!("{program} exited with {status}"));
    }
    Ok(count)
}

/// Runs a profile over `text` and reports the sizes. Returns the
/// transformed stream too.
pub fn run_bench(
    text: &[u8],
    dialect: &Dialect,
    profile: &Profile,
    compressor_cmds: &[String],
) -> Result<(TokenStream, SizeReport)> {
    let input = tokenize(text, dialect)?;
    let start = Instant::now();
    let out = pipeline(&input, profile)?;
    let elapsed = start.elapsed();
    let report = size_report(&input, &out, compressor_cmds, elapsed);
    Ok((out, report))
}

fn signed_delta(before: usize, after: usize) -> String {
    if after >= before {
        format!("+{}", after - before)
    } else {
        format!("-{}", before - after)
    }
}

impl SizeReport {
    /// Aligned table with one row for raw sizes and one per compressor.
    pub fn to_text(&self) -> String {
        let mut rows = vec![(
            "none".to_string(),
            self.input_bytes.to_string(),
            self.output_bytes.to_string(),
            signed_delta(self.input_bytes, self.output_bytes),
        )];
        for c in &self.compressed {
            let show = |r: &std::result::Result<usize, String>| match r {
                Ok(n) => n.to_string(),
                Err(_) => "absent".to_string(),
            };
            let delta = match (&c.before, &c.after) {
                (Ok(b), Ok(a)) => signed_delta(*b, *a),
                _ => "-".to_string(),
            };
            rows.push((c.command.clone(), show(&c.before), show(&c.after), delta));
        }
        let header = ("compressor", "before", "after", "delta");
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(header.0.len());
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(header.1.len());
        let w2 = rows.iter().map(|r| r.2.len()).max().unwrap_or(0).max(header.2.len());
        let w3 = rows.iter().map(|r| r.3.len()).max().unwrap_or(0).max(header.3.len());
        let mut out = String::new();
        let _ = writeln!(out, "{:<w0$}  {:>w1$}  {:>w2$}  {:>w3$}", header.0, header.1, header.2, header.3);
        for (a, b, c, d) in &rows {
            let _ = writeln!(out, "{a:<w0$}  {b:>w1$}  {c:>w2$}  {d:>w3$}");
        }
        let _ = writeln!(
            out,
            "marks added {}, brackets {} -> {}, {:.3} ms",
            self.marks_added,
            self.parens_before,
            self.parens_after,
            self.wall_time.as_secs_f64() * 1e3
        );
        out
    }

    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "input_bytes={}", self.input_bytes);
        let _ = writeln!(out, "output_bytes={}", self.output_bytes);
        let _ = writeln!(out, "marks_added={}", self.marks_added);
        let _ = writeln!(out, "parens_before={}", self.parens_before);
        let _ = writeln!(out, "parens_after={}", self.parens_after);
        for c in &self.compressed {
            let key: String = c
                .command
                .chars()
                .map(|ch| if ch.is_ascii_alphanumeric() { ch } else { '_' })
                .collect();
            for (side, r) in [("before", &c.before), ("after", &c.after)] {
                match r {
                    Ok(n) => {
                        let _ = writeln!(out, "{key}.{side}={n}");
                    }
                    Err(e) => {
                        let _ = writeln!(out, "{key}.{side}=absent ({e})");
                    }
                }
            }
        }
        let _ = writeln!(out, "wall_time_ms={:.3}", self.wall_time.as_secs_f64() * 1e3);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{Op, OpSet};

    #[test]
    fn newick_tokens() {
        let d = newick_dialect();
        let s = tokenize(b"((a,b),c);", &d).unwrap();
        assert_eq!(s.kinds().filter(|k| k.is_structural()).count(), 4);
        let s = tokenize(b"('x(y)',b);", &d).unwrap();
        assert_eq!(s.tokens[1].kind, TokenKind::Data(b"'x(y)',b".to_vec()));
    }

    #[test]
    fn bench_accounting() {
        let p = Profile::new(OpSet::NONE.with(Op::Opening));
        let (out, r) = run_bench(b"(((a,b),c),d);", &newick_dialect(), &p, &[]).unwrap();
        assert_eq!(out.render(), b"(a,b^,c^,d);");
        assert_eq!(r.marks_added, 2);
        assert_eq!(r.output_bytes + r.marks_added, r.input_bytes);
        assert_eq!(r.parens_before, 6);
        assert_eq!(r.parens_after, 2);
    }

    #[test]
    fn identity_bench_has_zero_delta() {
        let (_, r) = run_bench(b"(a (b))", &Dialect::sexpr(), &Profile::default(), &[]).unwrap();
        assert_eq!(r.input_bytes, r.output_bytes);
        assert!(r.to_text().contains("+0"));
    }

    #[test]
    fn missing_compressor_is_recorded() {
        let cmds = vec!["definitely-not-a-compressor-xyz".to_string()];
        let (_, r) = run_bench(b"(a)", &Dialect::sexpr(), &Profile::default(), &cmds).unwrap();
        assert!(r.compressed[0].before.is_err());
        assert!(r.to_key_value().contains("definitely_not_a_compressor_xyz.before=absent"));
    }

    #[test]
    fn cat_counts_bytes() {
        if Command::new("cat").arg("--version").output().is_err() {
            return;
        }
        let data = vec![b'x'; 1 << 20];
        assert_eq!(compressed_size("cat", &data), Ok(1 << 20));
    }
}
