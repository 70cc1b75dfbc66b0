//! Seeded synthetic inputs for the benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub const SEED: u64 = 0x5eed;

pub fn rng() -> StdRng {
    StdRng::seed_from_u64(SEED)
}

/// Balanced S-expression-like text of roughly `len` bytes, nesting at most
/// `max_depth` deep.
pub fn balanced_text(rng: &mut impl Rng, len: usize, max_depth: usize) -> Vec<u8> {
    const WORDS: [&str; 8] = ["define", "x", "lambda", "if", "n", "ack", "cond", "else"];
    let mut out = Vec::with_capacity(len + max_depth);
    let mut depth = 0usize;
    while out.len() < len {
        match rng.gen_range(0..10) {
            0..=2 if depth < max_depth => {
                out.push(b'(');
                depth += 1;
            }
            3..=5 if depth > 0 => {
                out.push(b')');
                depth -= 1;
            }
            6 => out.push(if rng.gen_bool(0.2) { b'\n' } else { b' ' }),
            _ => out.extend_from_slice(WORDS[rng.gen_range(0..WORDS.len())].as_bytes()),
        }
    }
    out.extend(std::iter::repeat(b')').take(depth));
    out
}

/// A random binary-ish tree in Newick form, with `leaves` leaves.
pub fn newick_tree(rng: &mut impl Rng, leaves: usize) -> Vec<u8> {
    fn build(rng: &mut impl Rng, leaves: usize, next_id: &mut usize, out: &mut Vec<u8>) {
        if leaves <= 1 {
            out.extend_from_slice(format!("t{next_id}").as_bytes());
            *next_id += 1;
            return;
        }
        let left = rng.gen_range(1..leaves);
        out.push(b'(');
        build(rng, left, next_id, out);
        out.push(b',');
        build(rng, leaves - left, next_id, out);
        out.push(b')');
        if rng.gen_bool(0.3) {
            out.extend_from_slice(format!("n{next_id}").as_bytes());
            *next_id += 1;
        }
    }
    let mut out = Vec::new();
    build(rng, leaves.max(1), &mut 0, &mut out);
    out.push(b';');
    out
}

/// Python-looking lines indented by four spaces per level.
pub fn indented_text(rng: &mut impl Rng, lines: usize) -> Vec<u8> {
    let mut out = Vec::new();
    let mut level = 0usize;
    for i in 0..lines {
        level = match rng.gen_range(0..4) {
            0 => level + 1,
            1 => level.saturating_sub(rng.gen_range(1..3)),
            _ => level,
        }
        .min(12);
        out.extend(std::iter::repeat(b' ').take(level * 4));
        out.extend_from_slice(format!("stmt_{i} = call(arg)\n").as_bytes());
    }
    out
}

/// Text with occasional long runs of one byte, for the escape compressor.
pub fn run_heavy_text(rng: &mut impl Rng, len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let byte = b"()[]ab "[rng.gen_range(0..7)];
        let n = if rng.gen_bool(0.1) { rng.gen_range(8..64) } else { 1 };
        out.extend(std::iter::repeat(byte).take(n));
    }
    out
}
