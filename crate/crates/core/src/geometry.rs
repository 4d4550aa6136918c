//! Points, hyperplanes and lines of PG(3,q²).
//!
//! Coordinates are ordered (J, X, Y, Z); affine points have J = 1 and the
//! hyperplane at infinity is J = 0.

use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};

/// Scales a nonzero 4-tuple so that its first nonzero coordinate is 1.
#[inline]
pub fn normalize(ctx: &FieldCtx, raw: [Fe; 4]) -> Result<[Fe; 4]> {
    let lead = raw.iter().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    if *lead == Fe::ONE {
        return Ok(raw);
    }
    let s = ctx.inv_nonzero(*lead);
    Ok(raw.map(|c| ctx.mul(s, c)))
}

#[inline]
fn dot(ctx: &FieldCtx, u: &[Fe; 4], v: &[Fe; 4]) -> Fe {
    ctx.mul(u[0], v[0]) + ctx.mul(u[1], v[1]) + ctx.mul(u[2], v[2]) + ctx.mul(u[3], v[3])
}

/// A normalized point of PG(3,q²). The derived ordering is the lexicographic
/// order of the coordinate encodings.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProjPoint([Fe; 4]);

impl ProjPoint {
    /// P∞ = (0,0,0,1).
    pub const P_INF: ProjPoint = ProjPoint([Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE]);
    /// O = (1,0,0,0).
    pub const ORIGIN: ProjPoint = ProjPoint([Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO]);

    pub fn new(ctx: &FieldCtx, raw: [Fe; 4]) -> Result<Self> {
        normalize(ctx, raw).map(ProjPoint)
    }

    /// The affine point (1, x, y, z).
    #[inline]
    pub fn affine(x: Fe, y: Fe, z: Fe) -> Self {
        ProjPoint([Fe::ONE, x, y, z])
    }

    /// Wraps coordinates that are already normalized.
    pub(crate) fn from_normalized(c: [Fe; 4]) -> Self {
        debug_assert!(c.iter().find(|x| !x.is_zero()) == Some(&Fe::ONE));
        ProjPoint(c)
    }

    #[inline]
    pub fn coords(&self) -> [Fe; 4] {
        self.0
    }

    #[inline]
    pub fn is_affine(&self) -> bool {
        !self.0[0].is_zero()
    }

    /// Packed 8-bit-per-coordinate key; orders like the point itself.
    pub fn key(&self) -> u32 {
        u32::from_be_bytes(self.0.map(|c| c.0))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [j, x, y, z] = self.0;
        write!(f, "({j},{x},{y},{z})")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A hyperplane Σ h_i·P_i = 0, stored as a normalized covector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Hyperplane([Fe; 4]);

impl Hyperplane {
    /// Σ∞ : J = 0.
    pub const AT_INFINITY: Hyperplane = Hyperplane([Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO]);

    pub fn new(ctx: &FieldCtx, raw: [Fe; 4]) -> Result<Self> {
        normalize(ctx, raw).map(Hyperplane)
    }

    pub fn covector(&self) -> [Fe; 4] {
        self.0
    }

    #[inline]
    pub fn contains(&self, ctx: &FieldCtx, p: &ProjPoint) -> bool {
        dot(ctx, &self.0, &p.0).is_zero()
    }

    /// The plane spanned by three points, or `None` if they are collinear.
    pub fn through(ctx: &FieldCtx, p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Option<Hyperplane> {
        let h = null_vector(ctx, [p.0, q.0, r.0])?;
        Some(Hyperplane(normalize(ctx, h).ok()?))
    }
}

/// A nonzero vector orthogonal to three rank-3 rows.
fn null_vector(ctx: &FieldCtx, rows: [[Fe; 4]; 3]) -> Option<[Fe; 4]> {
    let mut m = rows;
    let mut pivots = [usize::MAX; 3];
    let mut r = 0;
    for col in 0..4 {
        if r == 3 {
            break;
        }
        let Some(p) = (r..3).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let s = ctx.inv_nonzero(m[r][col]);
        m[r] = m[r].map(|x| ctx.mul(s, x));
        for i in 0..3 {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col];
                for c in 0..4 {
                    m[i][c] += ctx.mul(f, m[r][c]);
                }
            }
        }
        pivots[r] = col;
        r += 1;
    }
    if r < 3 {
        return None;
    }
    let free = (0..4).find(|c| !pivots.contains(c))?;
    let mut v = [Fe::ZERO; 4];
    v[free] = Fe::ONE;
    for i in 0..3 {
        v[pivots[i]] = m[i][free];
    }
    Some(v)
}

/// Number of points (equivalently hyperplanes) of PG(3,q²).
pub fn point_count(ctx: &FieldCtx) -> usize {
    let s = ctx.size() as usize;
    s * s * s + s * s + s + 1
}

/// Normalized 4-tuples in lexicographic order.
fn normalized_tuples(ctx: &FieldCtx) -> impl Iterator<Item = [Fe; 4]> + '_ {
    (0..4usize).rev().flat_map(move |lead| {
        let free = 3 - lead;
        let s = ctx.size() as usize;
        (0..s.pow(free as u32)).map(move |mut idx| {
            let mut c = [Fe::ZERO; 4];
            c[lead] = Fe::ONE;
            for pos in (lead + 1..4).rev() {
                c[pos] = Fe((idx % s) as u8);
                idx /= s;
            }
            c
        })
    })
}

/// Every point of PG(3,q²) in lexicographic order, starting at (0,0,0,1).
pub fn enumerate_points(ctx: &FieldCtx) -> impl Iterator<Item = ProjPoint> + '_ {
    normalized_tuples(ctx).map(ProjPoint)
}

/// Every hyperplane of PG(3,q²), in lexicographic covector order.
pub fn enumerate_hyperplanes(ctx: &FieldCtx) -> impl Iterator<Item = Hyperplane> + '_ {
    normalized_tuples(ctx).map(Hyperplane)
}

/// The q⁴+q²+1 points of Σ∞.
pub fn points_at_infinity(ctx: &FieldCtx) -> impl Iterator<Item = ProjPoint> + '_ {
    enumerate_points(ctx).take_while(|p| !p.is_affine())
}

/// A line of PG(3,q²) with its q²+1 points cached in sorted order.
#[derive(Clone, Debug)]
pub struct Line {
    generators: (ProjPoint, ProjPoint),
    points: Vec<ProjPoint>,
}

impl PartialEq for Line {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points
    }
}

impl Eq for Line {}

impl Line {
    pub fn generators(&self) -> (ProjPoint, ProjPoint) {
        self.generators
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// True if the line lies in Σ∞.
    pub fn at_infinity(&self) -> bool {
        self.points.iter().all(|p| !p.is_affine())
    }
}

/// The line through two distinct points.
pub fn line_through(ctx: &FieldCtx, p: &ProjPoint, q: &ProjPoint) -> Result<Line> {
    if p == q {
        return Err(Error::SamePoint);
    }
    let mut points = Vec::with_capacity(ctx.size() as usize + 1);
    points.push(*q);
    for t in ctx.elements() {
        let raw = [0, 1, 2, 3].map(|i| p.0[i] + ctx.mul(t, q.0[i]));
        points.push(ProjPoint(normalize(ctx, raw)?));
    }
    points.sort_unstable();
    points.dedup();
    debug_assert_eq!(points.len(), ctx.size() as usize + 1);
    Ok(Line { generators: (*p, *q), points })
}

/// Writes points in the line-oriented point-set format.
pub fn write_points<W: Write>(ctx: &FieldCtx, points: &[ProjPoint], mut out: W) -> Result<()> {
    writeln!(out, "# PG(3,q^2) q={} modulus={}", ctx.q(), ctx.modulus())?;
    for p in points {
        let [j, x, y, z] = p.0;
        writeln!(out, "{j} {x} {y} {z}")?;
    }
    Ok(())
}

/// Reads a point-set file, checking the header against `ctx` and that every
/// point is normalized. The result is sorted and deduplicated.
pub fn read_points<R: BufRead>(ctx: &FieldCtx, input: R) -> Result<Vec<ProjPoint>> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let header = header?;
    let expected = format!("# PG(3,q^2) q={} modulus={}", ctx.q(), ctx.modulus());
    if header.trim() != expected {
        return Err(Error::Parse { line: 1, msg: format!("expected header {expected:?}, found {header:?}") });
    }
    let mut points = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
        let vals: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|e| parse_err(e.to_string())))
            .collect::<Result<_>>()?;
        if vals.len() != 4 {
            return Err(parse_err(format!("expected 4 coordinates, found {}", vals.len())));
        }
        let mut c = [Fe::ZERO; 4];
        for (slot, v) in c.iter_mut().zip(&vals) {
            *slot = ctx.element(*v).map_err(|e| parse_err(e.to_string()))?;
        }
        if normalize(ctx, c).map_err(|e| parse_err(e.to_string()))? != c {
            return Err(parse_err("point is not normalized".into()));
        }
        points.push(ProjPoint(c));
    }
    points.sort_unstable();
    points.dedup();
    Ok(points)
}
