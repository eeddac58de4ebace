//! Versioned, human-readable instance files with exact round-trip.
//!
//! ```text
//! fptgap-instance 1
//! kind mld
//! param gamma 7/6
//! rows 2
//! cols 3
//! k 1
//! matrix
//! 101
//! 011
//! target
//! 11
//! end
//! ```
//!
//! GF(2) matrices are row-major `0`/`1` strings, lattice entries are decimal
//! integers separated by single spaces, rationals are written `a/b`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::csp::{Csp2Instance, Edge};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::latticecore::{LvsInstance, SnvpInstance, SvpInstance};
use crate::mdpchain::MdpInstance;
use crate::mldchain::{MldInstance, SncInstance};
use crate::{ratio, IntMatrix, IntVector};

pub const MAGIC: &str = "fptgap-instance";
pub const SCHEMA_VERSION: u32 = 1;

/// Kind tag of an instance file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Csp2,
    Mld,
    Snc,
    Mdp,
    Lvs,
    Snvp,
    Svp,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Csp2,
        Kind::Mld,
        Kind::Snc,
        Kind::Mdp,
        Kind::Lvs,
        Kind::Snvp,
        Kind::Svp,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Kind::Csp2 => "csp2",
            Kind::Mld => "mld",
            Kind::Snc => "snc",
            Kind::Mdp => "mdp",
            Kind::Lvs => "lvs",
            Kind::Snvp => "snvp",
            Kind::Svp => "svp",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.tag() == tag)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Any instance the tool reads or writes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Csp2(Csp2Instance),
    Mld(MldInstance),
    Snc(SncInstance),
    Mdp(MdpInstance),
    Lvs(LvsInstance),
    Snvp(SnvpInstance),
    Svp(SvpInstance),
}

impl Payload {
    pub fn kind(&self) -> Kind {
        match self {
            Payload::Csp2(_) => Kind::Csp2,
            Payload::Mld(_) => Kind::Mld,
            Payload::Snc(_) => Kind::Snc,
            Payload::Mdp(_) => Kind::Mdp,
            Payload::Lvs(_) => Kind::Lvs,
            Payload::Snvp(_) => Kind::Snvp,
            Payload::Svp(_) => Kind::Svp,
        }
    }
}

/// An instance with free-form string parameters such as the promised gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub payload: Payload,
    pub params: BTreeMap<String, String>,
}

impl InstanceFile {
    pub fn new(payload: Payload) -> Self {
        InstanceFile {
            payload,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn kind(&self) -> Kind {
        self.payload.kind()
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        line(w, format_args!("{MAGIC} {SCHEMA_VERSION}"));
        line(w, format_args!("kind {}", self.kind()));
        for (k, v) in &self.params {
            line(w, format_args!("param {k} {v}"));
        }
        match &self.payload {
            Payload::Csp2(g) => {
                line(w, format_args!("vertices {}", g.vertices()));
                line(w, format_args!("alphabet {}", g.alphabet_size()));
                line(w, format_args!("edges {}", g.edges().len()));
                for e in g.edges() {
                    let pairs: Vec<String> =
                        e.allowed().iter().map(|(a, b)| format!("{a},{b}")).collect();
                    line(w, format_args!("edge {} {} : {}", e.from, e.to, pairs.join(" ")));
                }
            }
            Payload::Mld(i) => emit_bit_system(w, &i.a, Some(&i.y), &[("k", i.k.to_string())]),
            Payload::Snc(i) => emit_bit_system(w, &i.a, Some(&i.y), &[("k", i.k.to_string())]),
            Payload::Mdp(i) => emit_bit_system(w, &i.a, None, &[("k", i.k.to_string())]),
            Payload::Lvs(i) => emit_int_system(w, &i.a, Some(&i.y), &[("k", i.k.to_string())]),
            Payload::Snvp(i) => emit_int_system(
                w,
                &i.b,
                Some(&i.y),
                &[("t", i.t.to_string()), ("p", i.p.to_string())],
            ),
            Payload::Svp(i) => emit_int_system(
                w,
                &i.b,
                None,
                &[("k", ratio::show(&i.k_pp)), ("p", i.p.to_string())],
            ),
        }
        line(w, format_args!("end"));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = Lines::new(text);
        let header = lines.next_line()?;
        let version = header
            .strip_prefix(MAGIC)
            .map(str::trim)
            .ok_or_else(|| lines.error("missing instance header"))?;
        if version != SCHEMA_VERSION.to_string() {
            return Err(lines.error(&format!("unsupported schema version {version:?}")));
        }
        let tag = lines.keyed("kind")?;
        let kind = Kind::from_tag(&tag).ok_or_else(|| lines.error(&format!("unknown kind {tag:?}")))?;
        let mut params = BTreeMap::new();
        while lines.peek().is_some_and(|l| l.starts_with("param ")) {
            let rest = lines.next_line()?["param ".len()..].to_string();
            let (k, v) = rest
                .split_once(' ')
                .ok_or_else(|| lines.error("param needs a key and a value"))?;
            if params.insert(k.to_string(), v.to_string()).is_some() {
                return Err(lines.error(&format!("duplicate param {k:?}")));
            }
        }
        let payload = match kind {
            Kind::Csp2 => Payload::Csp2(parse_csp(&mut lines)?),
            Kind::Mld => {
                let (a, y, s) = parse_bit_system(&mut lines, true, &["k"])?;
                Payload::Mld(MldInstance::new(a, y.expect("target"), s.usize(0)?)?)
            }
            Kind::Snc => {
                let (a, y, s) = parse_bit_system(&mut lines, true, &["k"])?;
                Payload::Snc(SncInstance::new(a, y.expect("target"), s.usize(0)?)?)
            }
            Kind::Mdp => {
                let (a, _, s) = parse_bit_system(&mut lines, false, &["k"])?;
                Payload::Mdp(MdpInstance::new(a, s.usize(0)?)?)
            }
            Kind::Lvs => {
                let (a, y, s) = parse_int_system(&mut lines, true, &["k"])?;
                Payload::Lvs(LvsInstance::new(a, y.expect("target"), s.usize(0)?)?)
            }
            Kind::Snvp => {
                let (b, y, s) = parse_int_system(&mut lines, true, &["t", "p"])?;
                Payload::Snvp(SnvpInstance::new(b, y.expect("target"), s.usize(0)?, s.u32(1)?)?)
            }
            Kind::Svp => {
                let (b, _, s) = parse_int_system(&mut lines, false, &["k", "p"])?;
                let k_pp = ratio::parse(&s.0[0].1).map_err(|e| lines.error(&e.to_string()))?;
                Payload::Svp(SvpInstance::new(b, k_pp, s.u32(1)?)?)
            }
        };
        let end = lines.next_line()?;
        if end != "end" {
            return Err(lines.error("expected `end`"));
        }
        if let Some(extra) = lines.rest_nonempty() {
            return Err(lines.error(&format!("trailing content {extra:?}")));
        }
        Ok(InstanceFile { payload, params })
    }

    /// SHA-256 of the emitted text, in lowercase hex.
    pub fn digest(&self) -> String {
        digest_text(&self.emit())
    }
}

impl fmt::Display for InstanceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

pub fn digest_text(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// True when the text starts with the structured header rather than DIMACS.
pub fn is_structured(text: &str) -> bool {
    text.trim_start().starts_with(MAGIC)
}

fn line(out: &mut String, args: fmt::Arguments<'_>) {
    let _ = out.write_fmt(args);
    out.push('\n');
}

fn bits(v: &BitVector) -> String {
    v.iter().map(|b| if b { '1' } else { '0' }).collect()
}

fn emit_bit_system(out: &mut String, a: &BitMatrix, y: Option<&BitVector>, scalars: &[(&str, String)]) {
    line(out, format_args!("rows {}", a.rows()));
    line(out, format_args!("cols {}", a.cols()));
    for (k, v) in scalars {
        line(out, format_args!("{k} {v}"));
    }
    line(out, format_args!("matrix"));
    for row in a.row_vectors() {
        line(out, format_args!("{}", bits(row)));
    }
    if let Some(y) = y {
        line(out, format_args!("target"));
        line(out, format_args!("{}", bits(y)));
    }
}

fn emit_int_system(out: &mut String, a: &IntMatrix, y: Option<&IntVector>, scalars: &[(&str, String)]) {
    let join = |v: &[BigInt]| v.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ");
    line(out, format_args!("rows {}", a.rows()));
    line(out, format_args!("cols {}", a.cols()));
    for (k, v) in scalars {
        line(out, format_args!("{k} {v}"));
    }
    line(out, format_args!("matrix"));
    for r in 0..a.rows() {
        line(out, format_args!("{}", join(a.row(r))));
    }
    if let Some(y) = y {
        line(out, format_args!("target"));
        line(out, format_args!("{}", join(y)));
    }
}

struct Lines<'a> {
    inner: std::iter::Peekable<std::str::Lines<'a>>,
    number: usize,
}

/// Scalar header values in declaration order.
struct Scalars(Vec<(String, String)>);

impl Scalars {
    fn usize(&self, i: usize) -> Result<usize> {
        self.0[i].1.parse().map_err(|_| Error::Parse {
            line: 0,
            message: format!("{} must be a nonnegative integer", self.0[i].0),
        })
    }

    fn u32(&self, i: usize) -> Result<u32> {
        self.0[i].1.parse().map_err(|_| Error::Parse {
            line: 0,
            message: format!("{} must be a nonnegative integer", self.0[i].0),
        })
    }
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().peekable(),
            number: 0,
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: self.number,
            message: message.to_string(),
        }
    }

    fn peek(&mut self) -> Option<&'a str> {
        self.inner.peek().copied()
    }

    fn next_line(&mut self) -> Result<&'a str> {
        self.number += 1;
        self.inner
            .next()
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .ok_or_else(|| self.error("unexpected end of file"))
    }

    fn keyed(&mut self, key: &str) -> Result<String> {
        let l = self.next_line()?;
        l.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(' '))
            .map(str::to_string)
            .ok_or_else(|| self.error(&format!("expected `{key} <value>`")))
    }

    fn keyed_usize(&mut self, key: &str) -> Result<usize> {
        let v = self.keyed(key)?;
        v.parse()
            .map_err(|_| self.error(&format!("{key} must be a nonnegative integer")))
    }

    fn marker(&mut self, word: &str) -> Result<()> {
        if self.next_line()? == word {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{word}`")))
        }
    }

    fn rest_nonempty(&mut self) -> Option<&'a str> {
        self.inner.by_ref().find(|l| !l.trim().is_empty())
    }
}

fn parse_csp(lines: &mut Lines<'_>) -> Result<Csp2Instance> {
    let vertices = lines.keyed_usize("vertices")?;
    let alphabet = lines.keyed_usize("alphabet")?;
    let count = lines.keyed_usize("edges")?;
    let mut edges = Vec::with_capacity(count);
    for _ in 0..count {
        let rest = lines.keyed("edge")?;
        let (ends, pairs) = rest
            .split_once(" :")
            .ok_or_else(|| lines.error("edge line needs `u v : pairs`"))?;
        let ends: Vec<usize> = ends
            .split(' ')
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| lines.error("bad edge endpoint"))?;
        if ends.len() != 2 {
            return Err(lines.error("edge needs two endpoints"));
        }
        let mut allowed = Vec::new();
        for token in pairs.split(' ').filter(|t| !t.is_empty()) {
            let (a, b) = token
                .split_once(',')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
                .ok_or_else(|| lines.error(&format!("bad label pair {token:?}")))?;
            allowed.push((a, b));
        }
        let edge = Edge::new(ends[0], ends[1], allowed.iter().copied());
        if edge.allowed().len() != allowed.len() || edge.allowed() != allowed.as_slice() {
            return Err(lines.error("label pairs must be sorted and distinct"));
        }
        edges.push(edge);
    }
    let alphabet = u32::try_from(alphabet).map_err(|_| lines.error("alphabet too large"))?;
    Csp2Instance::new(vertices, alphabet, edges)
}

fn parse_scalars(lines: &mut Lines<'_>, keys: &[&str]) -> Result<Scalars> {
    keys.iter()
        .map(|k| Ok((k.to_string(), lines.keyed(k)?)))
        .collect::<Result<Vec<_>>>()
        .map(Scalars)
}

fn parse_bits(lines: &mut Lines<'_>, len: usize) -> Result<BitVector> {
    let l = lines.next_line()?;
    if l.len() != len || !l.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(lines.error(&format!("expected a 0/1 string of length {len}")));
    }
    Ok(BitVector::from_bools(l.bytes().map(|b| b == b'1')))
}

fn parse_bit_system(
    lines: &mut Lines<'_>,
    with_target: bool,
    keys: &[&str],
) -> Result<(BitMatrix, Option<BitVector>, Scalars)> {
    let rows = lines.keyed_usize("rows")?;
    let cols = lines.keyed_usize("cols")?;
    let scalars = parse_scalars(lines, keys)?;
    lines.marker("matrix")?;
    let data = (0..rows)
        .map(|_| parse_bits(lines, cols))
        .collect::<Result<Vec<_>>>()?;
    let a = BitMatrix::from_rows(cols, data)?;
    let y = if with_target {
        lines.marker("target")?;
        Some(parse_bits(lines, rows)?)
    } else {
        None
    };
    Ok((a, y, scalars))
}

fn parse_ints(lines: &mut Lines<'_>, len: usize) -> Result<IntVector> {
    let l = lines.next_line()?;
    let values: Vec<BigInt> = if l.is_empty() {
        Vec::new()
    } else {
        l.split(' ')
            .map(|t| canonical_int(t).ok_or_else(|| lines.error(&format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?
    };
    if values.len() != len {
        return Err(lines.error(&format!("expected {len} integers, found {}", values.len())));
    }
    Ok(values)
}

/// Integers in canonical decimal form only, so parse and emit are inverse.
fn canonical_int(token: &str) -> Option<BigInt> {
    let v: BigInt = token.parse().ok()?;
    (v.to_string() == token).then_some(v)
}

fn parse_int_system(
    lines: &mut Lines<'_>,
    with_target: bool,
    keys: &[&str],
) -> Result<(IntMatrix, Option<IntVector>, Scalars)> {
    let rows = lines.keyed_usize("rows")?;
    let cols = lines.keyed_usize("cols")?;
    let scalars = parse_scalars(lines, keys)?;
    lines.marker("matrix")?;
    let data = (0..rows)
        .map(|_| parse_ints(lines, cols))
        .collect::<Result<Vec<_>>>()?;
    let a = IntMatrix::from_rows(cols, data)?;
    let y = if with_target {
        lines.marker("target")?;
        Some(parse_ints(lines, rows)?)
    } else {
        None
    };
    Ok((a, y, scalars))
}
