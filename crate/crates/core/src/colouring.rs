//! Ground sets and colourings, plus the colouring certificate file format.
//!
//! A colouring file is two non-comment lines:
//!
//! ```text
//! ground=interval:5
//! 0,1,1,0,1
//! ```
//!
//! The header is one of `interval:N` (elements 1..=N), `modstar:M`
//! (elements 1..M-1, arithmetic mod M) or `zmod:N` (elements 0..N-1). The
//! second line lists colour indices in element order.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ground {
    /// `{1, ..., N}` with integer arithmetic.
    Interval(u64),
    /// `{1, ..., M-1}`, the nonzero residues mod `M`.
    ModularStar(u64),
    /// All of `ℤ/Nℤ`, zero included.
    ZMod(u64),
}

impl Ground {
    pub fn len(&self) -> usize {
        match *self {
            Ground::Interval(n) => n as usize,
            Ground::ModularStar(m) => m.saturating_sub(1) as usize,
            Ground::ZMod(n) => n as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first(&self) -> u64 {
        match self {
            Ground::ZMod(_) => 0,
            _ => 1,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        let first = self.first();
        first..first + self.len() as u64
    }

    pub fn index_of(&self, element: u64) -> Option<usize> {
        let first = self.first();
        (element >= first && element < first + self.len() as u64).then(|| (element - first) as usize)
    }
}

impl fmt::Display for Ground {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ground::Interval(n) => write!(f, "interval:{n}"),
            Ground::ModularStar(m) => write!(f, "modstar:{m}"),
            Ground::ZMod(n) => write!(f, "zmod:{n}"),
        }
    }
}

impl FromStr for Ground {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, size) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("ground must look like kind:size, got {s:?}")))?;
        let size: u64 = size
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("ground size {size:?}: {e}")))?;
        match kind.trim() {
            "interval" if size >= 1 => Ok(Ground::Interval(size)),
            "modstar" if size >= 2 => Ok(Ground::ModularStar(size)),
            "zmod" if size >= 1 => Ok(Ground::ZMod(size)),
            "interval" | "modstar" | "zmod" => Err(Error::Parse(format!("ground {s:?} is too small"))),
            other => Err(Error::Parse(format!("unknown ground kind {other:?}"))),
        }
    }
}

impl Serialize for Ground {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A total map from a ground set to colours `0..r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Colouring {
    ground: Ground,
    colours: Vec<usize>,
    r: usize,
}

impl Colouring {
    pub fn new(ground: Ground, colours: Vec<usize>, r: usize) -> Result<Self> {
        if colours.len() != ground.len() {
            return Err(Error::DimensionMismatch { expected: ground.len(), found: colours.len() });
        }
        if let Some(&c) = colours.iter().find(|&&c| c >= r) {
            return Err(Error::InvalidInput(format!("colour {c} out of range for r = {r}")));
        }
        Ok(Colouring { ground, colours, r })
    }

    pub fn ground(&self) -> Ground {
        self.ground
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Colours in element order.
    pub fn colours(&self) -> &[usize] {
        &self.colours
    }

    pub fn colour_of(&self, element: u64) -> Option<usize> {
        self.ground.index_of(element).map(|i| self.colours[i])
    }

    /// Element sets of each colour, in ascending order.
    pub fn classes(&self) -> Vec<Vec<u64>> {
        let mut classes = vec![Vec::new(); self.r];
        for (e, &c) in self.ground.elements().zip(&self.colours) {
            classes[c].push(e);
        }
        classes
    }

    /// Comma-separated colour indices.
    pub fn certificate(&self) -> String {
        self.colours.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    }

    /// Reads a bare certificate string against a known ground set.
    /// `r` is taken as one more than the largest colour used unless given.
    pub fn from_certificate(ground: Ground, text: &str, r: Option<usize>) -> Result<Self> {
        let colours = parse_index_list(text)?;
        let r = r.unwrap_or_else(|| colours.iter().max().map_or(1, |m| m + 1));
        Colouring::new(ground, colours, r)
    }

    /// The header-plus-line file format.
    pub fn to_file_string(&self) -> String {
        format!("ground={}\n{}\n", self.ground, self.certificate())
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty colouring file".into()))?;
        let ground: Ground = header
            .strip_prefix("ground=")
            .ok_or_else(|| Error::Parse(format!("expected ground=... header, got {header:?}")))?
            .parse()?;
        let body = lines.next().unwrap_or("");
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected extra line {extra:?}")));
        }
        Colouring::from_certificate(ground, body, None)
    }

    /// The same colouring restricted to `{1..n}`; only for interval-like grounds.
    pub fn restrict_interval(&self, n: u64) -> Result<Colouring> {
        match self.ground {
            Ground::Interval(_) | Ground::ModularStar(_) if (n as usize) <= self.ground.len() => {
                Colouring::new(Ground::Interval(n), self.colours[..n as usize].to_vec(), self.r)
            }
            _ => Err(Error::InvalidInput(format!("cannot restrict {} to [{n}]", self.ground))),
        }
    }
}

/// Parses `"0,1,2"` (whitespace tolerated, empty string is the empty list).
pub fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("colour index {t:?}: {e}")))
        })
        .collect()
}
