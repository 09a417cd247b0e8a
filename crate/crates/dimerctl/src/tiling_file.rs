//! Plain-text tiling files.
//!
//! ```text
//! dimerctl-tiling 1
//! n 2
//! a 1/2
//! seed 7
//! index 0
//! 0 1 E
//! 0 3 N
//! ...
//! ```
//!
//! The `seed` and `index` lines appear only for sampled tilings. Each body
//! line is a black vertex and the kind of the dimer covering it, sorted by
//! the black vertex.

use std::fmt::Write as _;

use aztec::lattice::{Color, Dimer, DimerKind, Tiling, Vertex, Weight};
use thiserror::Error;

pub const FORMAT_LINE: &str = "dimerctl-tiling 1";

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TilingFile {
    pub a: Weight,
    pub seed: Option<u64>,
    pub index: Option<u64>,
    pub tiling: Tiling,
}

impl TilingFile {
    pub fn n(&self) -> usize {
        self.tiling.n()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{FORMAT_LINE}").unwrap();
        writeln!(s, "n {}", self.n()).unwrap();
        writeln!(s, "a {}", self.a).unwrap();
        if let Some(seed) = self.seed {
            writeln!(s, "seed {seed}").unwrap();
        }
        if let Some(index) = self.index {
            writeln!(s, "index {index}").unwrap();
        }
        for d in self.tiling.dimers() {
            writeln!(s, "{} {} {}", d.black.x1, d.black.x2, d.kind.letter()).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let err = |line: usize, message: String| ParseError { line, message };
        let mut header = |key: &str| -> Result<(usize, String), ParseError> {
            let (no, l) = lines.next().ok_or_else(|| err(0, format!("missing `{key}` line")))?;
            match l.split_once(' ') {
                Some((k, v)) if k == key => Ok((no, v.to_string())),
                _ => Err(err(no, format!("expected `{key} ...`, found {l:?}"))),
            }
        };
        let (no, version) = header("dimerctl-tiling")?;
        if version != "1" {
            return Err(err(no, format!("unsupported format version {version:?}")));
        }
        let (no, n) = header("n")?;
        let n: usize = n.parse().ok().filter(|&n| n > 0).ok_or_else(|| err(no, format!("bad order {n:?}")))?;
        let (no, a) = header("a")?;
        let a: Weight = a.parse().map_err(|e| err(no, format!("{e}")))?;

        let mut seed = None;
        let mut index = None;
        for (key, slot) in [("seed", &mut seed), ("index", &mut index)] {
            if let Some((no, l)) = lines.peek().copied() {
                if let Some(v) = l.strip_prefix(key).and_then(|r| r.strip_prefix(' ')) {
                    *slot = Some(v.parse::<u64>().map_err(|_| err(no, format!("bad {key} {v:?}")))?);
                    lines.next();
                }
            }
        }

        let mut dimers = Vec::with_capacity(n * (n + 1));
        let mut last: Option<(i64, i64)> = None;
        for (no, l) in lines {
            let fields: Vec<&str> = l.split(' ').collect();
            let [x1, x2, kind] = fields[..] else {
                return Err(err(no, format!("expected `bx by kind`, found {l:?}")));
            };
            let coord = |s: &str| s.parse::<i64>().map_err(|_| err(no, format!("bad coordinate {s:?}")));
            let (x1, x2) = (coord(x1)?, coord(x2)?);
            let black = Vertex::new(x1, x2)
                .ok()
                .filter(|v| v.color() == Color::Black)
                .ok_or_else(|| err(no, format!("({x1}, {x2}) is not a black vertex")))?;
            let mut letters = kind.chars();
            let kind = match (letters.next().and_then(DimerKind::from_letter), letters.next()) {
                (Some(k), None) => k,
                _ => return Err(err(no, format!("bad dimer kind {kind:?}"))),
            };
            if last.is_some_and(|p| p >= (x1, x2)) {
                return Err(err(no, "body lines must be strictly sorted by (bx, by)".to_string()));
            }
            last = Some((x1, x2));
            dimers.push(Dimer::at(black, kind));
        }
        Ok(TilingFile {
            a,
            seed,
            index,
            tiling: Tiling::from_dimers(n, dimers),
        })
    }
}
