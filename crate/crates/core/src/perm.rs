//! Permutations of `{1..n}` for `3 <= n <= 8`.
//!
//! Products use the right-action convention: `i^(fg) = (i^f)^g`, so in
//! `f.compose(&g)` the left factor is applied first. Under this convention
//! `(1,2)(1,3) = (1,2,3)`.
//!
//! Points are 1-based in every public signature and in the text formats;
//! internally the image array is 0-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CtnError, Result};

pub const MIN_DEGREE: usize = 3;
pub const MAX_DEGREE: usize = 8;

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn binomial2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn check_degree(n: usize) -> Result<()> {
    if (MIN_DEGREE..=MAX_DEGREE).contains(&n) {
        Ok(())
    } else {
        Err(CtnError::DegreeOutOfRange(n))
    }
}

/// A set of points of `{1..n}`, stored as a bitmask (bit `p - 1` for point `p`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(u16);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        let mut bits = 0u16;
        for p in points {
            debug_assert!((1..=MAX_DEGREE).contains(&p));
            bits |= 1 << (p - 1);
        }
        PointSet(bits)
    }

    pub(crate) fn from_bits(bits: u16) -> Self {
        PointSet(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, point: usize) -> bool {
        (1..=16).contains(&point) && self.0 & (1 << (point - 1)) != 0
    }

    pub fn union(self, other: PointSet) -> PointSet {
        PointSet(self.0 | other.0)
    }

    pub fn intersection(self, other: PointSet) -> PointSet {
        PointSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Points in ascending order, 1-based.
    pub fn points(self) -> Vec<usize> {
        (0..16).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", pts.join(","))
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.points().serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn xor(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A transposition `(a,b)` with `a < b`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    a: u8,
    b: u8,
}

impl Transposition {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b || a == 0 || b == 0 || a > MAX_DEGREE || b > MAX_DEGREE {
            return Err(CtnError::InvalidTransposition(a, b));
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Ok(Transposition { a: a as u8, b: b as u8 })
    }

    /// All `C(n,2)` transpositions in lexicographic order of `(a,b)`.
    pub fn all(n: usize) -> Vec<Transposition> {
        let mut out = Vec::with_capacity(binomial2(n));
        for a in 1..=n {
            for b in a + 1..=n {
                out.push(Transposition { a: a as u8, b: b as u8 });
            }
        }
        out
    }

    pub fn points(self) -> (usize, usize) {
        (self.a as usize, self.b as usize)
    }

    pub fn support(self) -> PointSet {
        PointSet::from_points([self.a as usize, self.b as usize])
    }

    pub fn moves(self, point: usize) -> bool {
        self.a as usize == point || self.b as usize == point
    }

    pub fn to_permutation(self, n: usize) -> Result<Permutation> {
        check_degree(n)?;
        if self.b as usize > n {
            return Err(CtnError::InvalidTransposition(self.a as usize, self.b as usize));
        }
        let mut p = Permutation::identity(n)?;
        p.image.swap(self.a as usize - 1, self.b as usize - 1);
        Ok(p)
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A permutation of `{1..n}` in one-line form.
///
/// Unused slots of `image` beyond `n` hold their own index so that derived
/// equality and hashing only depend on the permutation itself.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    n: u8,
    image: [u8; MAX_DEGREE],
}

const IDENTITY_IMAGE: [u8; MAX_DEGREE] = [0, 1, 2, 3, 4, 5, 6, 7];

impl Permutation {
    pub fn identity(n: usize) -> Result<Self> {
        check_degree(n)?;
        Ok(Permutation { n: n as u8, image: IDENTITY_IMAGE })
    }

    /// Builds a permutation from 1-based images: `images[i - 1] = i^x`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        check_degree(n)?;
        let mut image = IDENTITY_IMAGE;
        let mut seen = 0u16;
        for (i, &p) in images.iter().enumerate() {
            if p == 0 || p > n || seen & (1 << (p - 1)) != 0 {
                return Err(CtnError::InvalidPermutation(format!("{images:?}")));
            }
            seen |= 1 << (p - 1);
            image[i] = (p - 1) as u8;
        }
        Ok(Permutation { n: n as u8, image })
    }

    pub(crate) fn from_zero_based_unchecked(n: usize, src: &[u8]) -> Self {
        let mut image = IDENTITY_IMAGE;
        image[..n].copy_from_slice(&src[..n]);
        Permutation { n: n as u8, image }
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    /// 0-based one-line images.
    pub(crate) fn raw(&self) -> &[u8] {
        &self.image[..self.n as usize]
    }

    /// `point^self`, both 1-based.
    pub fn apply(&self, point: usize) -> usize {
        assert!((1..=self.degree()).contains(&point), "point {point} out of range");
        self.image[point - 1] as usize + 1
    }

    /// 1-based one-line images.
    pub fn images(&self) -> Vec<usize> {
        self.raw().iter().map(|&p| p as usize + 1).collect()
    }

    /// Product under the right action: apply `self`, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n != other.n {
            return Err(CtnError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        let mut image = IDENTITY_IMAGE;
        for i in 0..self.n as usize {
            image[i] = other.image[self.image[i] as usize];
        }
        Permutation { n: self.n, image }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = IDENTITY_IMAGE;
        for i in 0..self.n as usize {
            image[self.image[i] as usize] = i as u8;
        }
        Permutation { n: self.n, image }
    }

    pub fn is_identity(&self) -> bool {
        self.image == IDENTITY_IMAGE
    }

    pub fn support(&self) -> PointSet {
        let mut bits = 0u16;
        for i in 0..self.n as usize {
            if self.image[i] as usize != i {
                bits |= 1 << i;
            }
        }
        PointSet::from_bits(bits)
    }

    /// Cycles of length at least 2, each starting at its smallest point,
    /// ordered by that point. 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.image[p] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn parity(&self) -> Parity {
        let n = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.image[p] as usize;
            }
        }
        if (n - cycles) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The transposition equal to `self`, if `self` is one.
    pub fn as_transposition(&self) -> Option<Transposition> {
        let s = self.support();
        if s.len() != 2 {
            return None;
        }
        let pts = s.points();
        Transposition::new(pts[0], pts[1]).ok()
    }

    /// Lexicographic rank of the one-line form (Lehmer code read in the
    /// factorial number system). The identity has rank 0, the reversal
    /// `n..1` has rank `n! - 1`.
    pub fn rank(&self) -> usize {
        let n = self.degree();
        let img = self.raw();
        let mut rank = 0;
        for i in 0..n {
            let smaller_later = img[i + 1..].iter().filter(|&&v| v < img[i]).count();
            rank = rank * (n - i) + smaller_later;
        }
        rank
    }

    pub fn unrank(n: usize, rank: usize) -> Result<Permutation> {
        check_degree(n)?;
        let count = factorial(n);
        if rank >= count {
            return Err(CtnError::RankOutOfRange { rank, n, count });
        }
        let mut digits = [0usize; MAX_DEGREE];
        let mut r = rank;
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = r % base;
            r /= base;
        }
        let mut pool: Vec<u8> = (0..n as u8).collect();
        let mut image = IDENTITY_IMAGE;
        for i in 0..n {
            image[i] = pool.remove(digits[i]);
        }
        Ok(Permutation { n: n as u8, image })
    }

    /// One-line notation, e.g. `"2134"`.
    pub fn to_one_line(&self) -> String {
        self.raw().iter().map(|&p| char::from(b'1' + p)).collect()
    }

    /// Parses one-line notation; the degree is the string length.
    pub fn parse_one_line(s: &str) -> Result<Permutation> {
        let s = s.trim();
        let mut images = Vec::with_capacity(s.len());
        for c in s.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| CtnError::Parse(format!("bad one-line permutation {s:?}")))?;
            images.push(d as usize);
        }
        Permutation::from_images(&images)
    }

    /// Parses `"id"`, cycle notation such as `"(1,2)(3,4)"`, or one-line
    /// notation of length `n`. A product of several cycles is evaluated left
    /// to right under the right action.
    pub fn parse(s: &str, n: usize) -> Result<Permutation> {
        check_degree(n)?;
        let t = s.trim();
        if t == "id" || t == "()" {
            return Permutation::identity(n);
        }
        if !t.starts_with('(') {
            let p = Permutation::parse_one_line(t)?;
            if p.degree() != n {
                return Err(CtnError::DegreeMismatch { left: p.degree(), right: n });
            }
            return Ok(p);
        }
        let mut acc = Permutation::identity(n)?;
        let mut rest = t;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            let body_end = rest_trim
                .find(')')
                .ok_or_else(|| CtnError::Parse(format!("unclosed cycle in {s:?}")))?;
            if !rest_trim.starts_with('(') {
                return Err(CtnError::Parse(format!("expected '(' in {s:?}")));
            }
            let body = &rest_trim[1..body_end];
            let mut points = Vec::new();
            for tok in body.split(',') {
                let p: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| CtnError::Parse(format!("bad point {tok:?} in {s:?}")))?;
                if p == 0 || p > n || points.contains(&p) {
                    return Err(CtnError::Parse(format!("bad point {p} in {s:?}")));
                }
                points.push(p);
            }
            let mut image = IDENTITY_IMAGE;
            for (k, &p) in points.iter().enumerate() {
                let q = points[(k + 1) % points.len()];
                image[p - 1] = (q - 1) as u8;
            }
            let cycle = Permutation { n: n as u8, image };
            acc = acc.compose_unchecked(&cycle);
            rest = &rest_trim[body_end + 1..];
        }
        Ok(acc)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation; the identity prints as `id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.to_one_line())
    }
}
