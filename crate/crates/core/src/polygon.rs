//! Vertices, n-diagonals and the per-polygon lookup tables.
//!
//! The polygon of the n-cluster category of type `A_m` has `n(m+1)+2`
//! vertices, labelled `1..=N` clockwise. A chord `(a,b)` with `a < b` is an
//! n-diagonal exactly when `b - a ≡ 1 (mod n)`; those chords are the
//! indecomposable objects of the category.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagset::DiagSet;
use crate::error::{Error, Result};

/// The pair `(n, m)` fixing the ambient category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct PolygonSpec {
    n: u32,
    m: u32,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    n: u32,
    m: u32,
}

impl TryFrom<RawSpec> for PolygonSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        PolygonSpec::new(raw.n, raw.m)
    }
}

impl From<PolygonSpec> for RawSpec {
    fn from(spec: PolygonSpec) -> Self {
        RawSpec { n: spec.n, m: spec.m }
    }
}

impl PolygonSpec {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParameters { n, m });
        }
        Ok(PolygonSpec { n, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of polygon vertices, `n(m+1)+2`.
    pub fn vertices(&self) -> u32 {
        self.n * (self.m + 1) + 2
    }

    /// Number of n-diagonals, `N·m/2`.
    pub fn n_diagonal_count(&self) -> usize {
        (self.vertices() as usize * self.m as usize) / 2
    }

    /// Reduce an arbitrary integer label into `1..=N`.
    pub fn wrap(&self, label: i64) -> u32 {
        let big_n = self.vertices() as i64;
        ((label - 1).rem_euclid(big_n) + 1) as u32
    }

    /// A chord between two non-adjacent vertices, normalized so that `a < b`.
    pub fn diagonal(&self, a: u32, b: u32) -> Result<Diagonal> {
        let vertices = self.vertices();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if lo < 1 || hi > vertices || hi - lo < 2 || hi - lo > vertices - 2 {
            return Err(Error::NotADiagonal { a, b, vertices });
        }
        Ok(Diagonal { a: lo, b: hi })
    }

    /// Like [`PolygonSpec::diagonal`] but also requires the n-residue.
    pub fn n_diagonal(&self, a: u32, b: u32) -> Result<Diagonal> {
        let d = self.diagonal(a, b)?;
        if !self.is_n_diagonal(d) {
            return Err(Error::NotAnNDiagonal { diagonal: d, n: self.n });
        }
        Ok(d)
    }

    pub fn is_n_diagonal(&self, d: Diagonal) -> bool {
        (d.b - d.a) % self.n == 1 % self.n
    }

    /// All n-diagonals in lexicographic order; the position is the rank.
    pub fn enumerate_n_diagonals(&self) -> Vec<Diagonal> {
        let vertices = self.vertices();
        let mut out = Vec::with_capacity(self.n_diagonal_count());
        for a in 1..=vertices {
            for b in (a + 2)..=vertices {
                if let Ok(d) = self.n_diagonal(a, b) {
                    out.push(d);
                }
            }
        }
        out
    }

    /// Shift both endpoints by `steps` (mod N) and renormalize.
    pub fn shift(&self, d: Diagonal, steps: i64) -> Diagonal {
        let a = self.wrap(d.a as i64 + steps);
        let b = self.wrap(d.b as i64 + steps);
        Diagonal::ordered(a, b)
    }

    /// The translation `τ_n`: `(i,j) ↦ (i-n, j-n)`.
    pub fn tau_n(&self, d: Diagonal) -> Diagonal {
        self.shift(d, -(self.n as i64))
    }

    /// Inverse of [`PolygonSpec::tau_n`].
    pub fn tau_n_inverse(&self, d: Diagonal) -> Diagonal {
        self.shift(d, self.n as i64)
    }

    /// Order of `τ_n` as a rotation of the polygon.
    pub fn tau_order(&self) -> u32 {
        self.vertices() / gcd(self.vertices(), self.n)
    }
}

impl fmt::Display for PolygonSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.n, self.m)
    }
}

impl FromStr for PolygonSpec {
    type Err = Error;

    /// Parses `"n,m"`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, m) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected `n,m`, got `{s}`")))?;
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("`{t}`: {e}")));
        PolygonSpec::new(parse(n)?, parse(m)?)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A normalized chord `(a,b)` with `a < b`.
///
/// Values are only handed out by [`PolygonSpec::diagonal`] and friends, so a
/// `Diagonal` is always a genuine (non-edge) chord of the polygon it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagonal {
    a: u32,
    b: u32,
}

impl Diagonal {
    pub(crate) fn ordered(x: u32, y: u32) -> Diagonal {
        if x < y {
            Diagonal { a: x, b: y }
        } else {
            Diagonal { a: y, b: x }
        }
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn endpoints(&self) -> [u32; 2] {
        [self.a, self.b]
    }

    pub fn has_endpoint(&self, v: u32) -> bool {
        self.a == v || self.b == v
    }

    /// Strict interleaving of endpoints. Shared endpoints never cross.
    pub fn crosses(&self, other: &Diagonal) -> bool {
        let (c1, c2, d1, d2) = (self.a, self.b, other.a, other.b);
        (c1 < d1 && d1 < c2 && c2 < d2) || (d1 < c1 && c1 < d2 && d2 < c2)
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Parses the text form `"(a,b)"` into a raw pair; validation against a
/// polygon is left to the caller.
pub fn parse_pair(s: &str) -> Result<(u32, u32)> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected `(a,b)`, got `{s}`")))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected `(a,b)`, got `{s}`")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|e| Error::Parse(format!("`{t}` in `{s}`: {e}")))
    };
    Ok((parse(a)?, parse(b)?))
}

/// Splits the set text form `"{(a1,b1),(a2,b2),...}"` into raw pairs.
pub fn parse_pair_list(s: &str) -> Result<Vec<(u32, u32)>> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected `{{(a,b),...}}`, got `{s}`")))?;
    let mut out = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unterminated pair in `{s}`")))?;
        out.push(parse_pair(&rest[..=close])?);
        rest = rest[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(Error::Parse(format!("trailing comma in `{s}`")));
            }
        } else if !rest.is_empty() {
            return Err(Error::Parse(format!("expected `,` in `{s}`")));
        }
    }
    Ok(out)
}

/// Rank tables and crossing masks for one polygon, built once per spec and
/// shared read-only.
#[derive(Debug, Clone)]
pub struct Polygon {
    spec: PolygonSpec,
    diagonals: Vec<Diagonal>,
    // (a-1)*N + (b-1) -> rank, for normalized n-diagonals only
    rank_table: Vec<Option<u32>>,
    // per rank: every n-diagonal that does not cross it (itself included)
    non_crossing: Vec<DiagSet>,
}

impl Polygon {
    pub fn new(spec: PolygonSpec) -> Polygon {
        let vertices = spec.vertices() as usize;
        let diagonals = spec.enumerate_n_diagonals();
        let mut rank_table = vec![None; vertices * vertices];
        for (r, d) in diagonals.iter().enumerate() {
            rank_table[(d.a as usize - 1) * vertices + d.b as usize - 1] = Some(r as u32);
        }
        let non_crossing = diagonals
            .iter()
            .map(|u| {
                let mut mask = DiagSet::empty(spec);
                for (r, v) in diagonals.iter().enumerate() {
                    if !u.crosses(v) {
                        mask.insert(r);
                    }
                }
                mask
            })
            .collect();
        Polygon {
            spec,
            diagonals,
            rank_table,
            non_crossing,
        }
    }

    pub fn spec(&self) -> PolygonSpec {
        self.spec
    }

    pub fn n(&self) -> u32 {
        self.spec.n
    }

    pub fn vertices(&self) -> u32 {
        self.spec.vertices()
    }

    pub fn len(&self) -> usize {
        self.diagonals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonals.is_empty()
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    pub fn rank(&self, d: Diagonal) -> Result<usize> {
        let vertices = self.vertices() as usize;
        if d.b as usize > vertices {
            return Err(Error::NotADiagonal {
                a: d.a,
                b: d.b,
                vertices: self.vertices(),
            });
        }
        self.rank_table[(d.a as usize - 1) * vertices + d.b as usize - 1]
            .map(|r| r as usize)
            .ok_or(Error::NotAnNDiagonal {
                diagonal: d,
                n: self.n(),
            })
    }

    pub fn diagonal(&self, rank: usize) -> Result<Diagonal> {
        self.diagonals.get(rank).copied().ok_or(Error::RankOutOfRange {
            rank,
            count: self.len(),
        })
    }

    pub fn empty_set(&self) -> DiagSet {
        DiagSet::empty(self.spec)
    }

    pub fn full_set(&self) -> DiagSet {
        DiagSet::full(self.spec)
    }

    /// Build a set from raw `(a,b)` pairs, validating each one.
    pub fn set_from_pairs<I>(&self, pairs: I) -> Result<DiagSet>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut set = self.empty_set();
        for (a, b) in pairs {
            set.insert(self.rank(self.spec.n_diagonal(a, b)?)?);
        }
        Ok(set)
    }

    pub fn set_from_diagonals<'a, I>(&self, ds: I) -> Result<DiagSet>
    where
        I: IntoIterator<Item = &'a Diagonal>,
    {
        let mut set = self.empty_set();
        for d in ds {
            set.insert(self.rank(*d)?);
        }
        Ok(set)
    }

    /// Members in rank order.
    pub fn diagonals_of(&self, set: &DiagSet) -> Vec<Diagonal> {
        set.iter().map(|r| self.diagonals[r]).collect()
    }

    pub fn crosses(&self, u: usize, v: usize) -> bool {
        !self.non_crossing[u].contains(v)
    }

    /// Every n-diagonal not crossing the diagonal of rank `r`.
    pub fn non_crossing_mask(&self, r: usize) -> &DiagSet {
        &self.non_crossing[r]
    }

    /// Text form `{(a1,b1),(a2,b2),...}` in rank order.
    pub fn format_set(&self, set: &DiagSet) -> String {
        let parts: Vec<String> = set.iter().map(|r| self.diagonals[r].to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn parse_set(&self, s: &str) -> Result<DiagSet> {
        self.set_from_pairs(parse_pair_list(s)?)
    }
}
