//! The simple orthogonal arrays OA(q⁵, q⁴, q, 2) of index q³.
//!
//! Rows are indexed by W0 = {(1,x,y,z) : z ∈ C}, where C = {s·eta : s ∈ GF(q)}
//! holds one representative per coset of GF(q). Columns are indexed by the
//! elations g = (γ1, γ2, γ3) with γ3 ∈ C chosen so that g maps the affine
//! origin into B_{a,b}. The entry at (w, g) is F(w·M_g), which on W0 equals
//!
//! ```text
//! F(w) + Tr(b)·(Tr(γ1^q x) + Tr(γ2^q y)).
//! ```
//!
//! Entries lie in GF(q); the stored symbol is the position of the entry in
//! the sorted list of GF(q) elements.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::variety::{affine_value, VarietyParams};

/// The elation with first row (1, γ1, γ2, γ3) and identity elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElationR {
    pub gamma1: Fe,
    pub gamma2: Fe,
    pub gamma3: Fe,
}

impl ElationR {
    /// Solves Tr(γ3) = Tr(a(γ1²+γ2²)) + Tr(b)(N(γ1)+N(γ2)) inside C.
    pub fn new(ctx: &FieldCtx, params: &VarietyParams, gamma1: Fe, gamma2: Fe) -> Self {
        let t = affine_value(ctx, params, gamma1, gamma2, Fe::ZERO);
        ElationR { gamma1, gamma2, gamma3: ctx.mul(t, ctx.eta()) }
    }

    pub fn is_identity(&self) -> bool {
        self.gamma1.is_zero() && self.gamma2.is_zero() && self.gamma3.is_zero()
    }
}

/// All q⁴ elations, ordered by (γ1, γ2).
pub fn build_r(ctx: &FieldCtx, params: &VarietyParams) -> Vec<ElationR> {
    ctx.elements()
        .flat_map(|g1| ctx.elements().map(move |g2| ElationR::new(ctx, params, g1, g2)))
        .collect()
}

/// C in encoding order.
fn sorted_cosets(ctx: &FieldCtx) -> Vec<Fe> {
    let mut c = ctx.coset_reps();
    c.sort_unstable();
    c
}

/// The q⁵ triples (x, y, z) of W0 in lexicographic encoding order.
pub fn build_domain_w0(ctx: &FieldCtx) -> Vec<[Fe; 3]> {
    let cs = sorted_cosets(ctx);
    let mut out = Vec::with_capacity(ctx.size() as usize * ctx.size() as usize * cs.len());
    for x in ctx.elements() {
        for y in ctx.elements() {
            for &z in &cs {
                out.push([x, y, z]);
            }
        }
    }
    out
}

fn check_w0(ctx: &FieldCtx, w: &[Fe; 3]) -> Result<()> {
    for c in w {
        ctx.element(c.bits())?;
    }
    if ctx.coset_rep(w[2]) != w[2] {
        return Err(Error::NotInDomain(format!("(1,{},{},{})", w[0], w[1], w[2])));
    }
    Ok(())
}

/// F^g(w) by the closed form.
pub fn eval_form(ctx: &FieldCtx, params: &VarietyParams, g: &ElationR, w: &[Fe; 3]) -> Result<Fe> {
    check_w0(ctx, w)?;
    let [x, y, z] = *w;
    let lin = ctx.trace(ctx.mul(ctx.frobenius(g.gamma1), x)) + ctx.trace(ctx.mul(ctx.frobenius(g.gamma2), y));
    Ok(affine_value(ctx, params, x, y, z) + ctx.mul(ctx.trace(params.b()), lin))
}

/// F^g(w) by substituting (1,x,y,z)·M_g into F.
pub fn eval_form_matrix(ctx: &FieldCtx, params: &VarietyParams, g: &ElationR, w: &[Fe; 3]) -> Result<Fe> {
    check_w0(ctx, w)?;
    let [x, y, z] = *w;
    // (1,x,y,z)·M_g = (1, x+γ1, y+γ2, z+γ3)
    Ok(affine_value(ctx, params, x + g.gamma1, y + g.gamma2, z + g.gamma3))
}

/// Where an array came from; used in the file header.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OaSource {
    pub q: u32,
    pub a: u32,
    pub b: u32,
    pub modulus: u32,
}

/// An N×k array over the symbols 0..v, stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalArray {
    pub n: usize,
    pub k: usize,
    pub v: usize,
    pub t: usize,
    pub lambda: usize,
    pub source: Option<OaSource>,
    pub row_keys: Vec<[Fe; 3]>,
    pub col_keys: Vec<(Fe, Fe)>,
    data: Vec<u8>,
}

impl OrthogonalArray {
    /// Wraps row-major symbol data without keys.
    pub fn from_rows(v: usize, t: usize, rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, |r| r.len());
        let mut data = vec![0u8; n * k];
        for (i, r) in rows.iter().enumerate() {
            if r.len() != k {
                return Err(Error::Parse { line: i + 1, msg: format!("row has {} entries, expected {k}", r.len()) });
            }
            for (j, &s) in r.iter().enumerate() {
                if s as usize >= v {
                    return Err(Error::Parse { line: i + 1, msg: format!("symbol {s} out of range 0..{v}") });
                }
                data[j * n + i] = s;
            }
        }
        let lambda = n / v.pow(t as u32).max(1);
        Ok(OrthogonalArray { n, k, v, t, lambda, source: None, row_keys: Vec::new(), col_keys: Vec::new(), data })
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> u8 {
        self.data[col * self.n + row]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, sym: u8) {
        assert!((sym as usize) < self.v);
        self.data[col * self.n + row] = sym;
    }

    pub fn column(&self, col: usize) -> &[u8] {
        &self.data[col * self.n..(col + 1) * self.n]
    }

    pub fn row(&self, row: usize) -> Vec<u8> {
        (0..self.k).map(|c| self.entry(row, c)).collect()
    }

    /// The header line "N k v t lambda".
    pub fn header(&self) -> String {
        format!("{} {} {} {} {}", self.n, self.k, self.v, self.t, self.lambda)
    }
}

/// A_0 for the given parameters: entry (w, g) = F^g(w).
pub fn build_oa(ctx: &FieldCtx, params: &VarietyParams) -> OrthogonalArray {
    let q = ctx.q() as usize;
    let q2 = ctx.size() as usize;
    let rows = build_domain_w0(ctx);
    let r = build_r(ctx, params);
    let n = rows.len();

    let mut rank = [0u8; 256];
    for (i, s) in ctx.subfield().iter().enumerate() {
        rank[s.bits() as usize] = i as u8;
    }
    let base: Vec<Fe> = rows.iter().map(|&[x, y, z]| affine_value(ctx, params, x, y, z)).collect();
    let tb = ctx.trace(params.b());
    let elems: Vec<Fe> = ctx.elements().collect();

    let mut data = vec![0u8; n * r.len()];
    data.par_chunks_mut(n).zip(r.par_iter()).for_each(|(col, g)| {
        let g1q = ctx.frobenius(g.gamma1);
        let g2q = ctx.frobenius(g.gamma2);
        let t1: Vec<Fe> = elems.iter().map(|&x| ctx.trace(ctx.mul(g1q, x))).collect();
        let t2: Vec<Fe> = elems.iter().map(|&y| ctx.mul(tb, ctx.trace(ctx.mul(g2q, y)))).collect();
        for xi in 0..q2 {
            let sx = ctx.mul(tb, t1[xi]);
            for yi in 0..q2 {
                let s = sx + t2[yi];
                let off = (xi * q2 + yi) * q;
                for zi in 0..q {
                    col[off + zi] = rank[(base[off + zi] + s).bits() as usize];
                }
            }
        }
    });

    OrthogonalArray {
        n,
        k: r.len(),
        v: q,
        t: 2,
        lambda: n / (q * q),
        source: Some(OaSource { q: ctx.q(), a: params.a().bits(), b: params.b().bits(), modulus: ctx.modulus() }),
        row_keys: rows,
        col_keys: r.iter().map(|g| (g.gamma1, g.gamma2)).collect(),
        data,
    }
}

/// How many column pairs to examine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyMode {
    Full,
    Sampled { n_pairs: usize, seed: u64 },
}

/// Outcome of a strength-2 check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrengthReport {
    pub pairs_checked: usize,
    pub lambda: usize,
    pub violation_count: usize,
    /// at most [`MAX_LISTED_VIOLATIONS`] pairs, in checking order
    pub violations: Vec<(usize, usize)>,
}

pub const MAX_LISTED_VIOLATIONS: usize = 100;

impl StrengthReport {
    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }
}

fn pair_uniform(a: &[u8], b: &[u8], v: usize, lambda: usize, counts: &mut Vec<u32>) -> bool {
    counts.clear();
    counts.resize(v * v, 0);
    for (&x, &y) in a.iter().zip(b) {
        counts[x as usize * v + y as usize] += 1;
    }
    counts.iter().all(|&c| c as usize == lambda)
}

/// Every t=2 projection must hold each of the v² symbol pairs exactly
/// λ = N/v² times.
pub fn verify_strength2(oa: &OrthogonalArray, mode: VerifyMode) -> StrengthReport {
    let v = oa.v;
    let lambda = if v == 0 { 0 } else { oa.n / (v * v) };
    let exact = v > 0 && oa.n == lambda * v * v;
    let pairs: Vec<(usize, usize)> = match mode {
        VerifyMode::Full => (0..oa.k).flat_map(|i| (i + 1..oa.k).map(move |j| (i, j))).collect(),
        VerifyMode::Sampled { n_pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if oa.k < 2 {
                Vec::new()
            } else {
                (0..n_pairs)
                    .map(|_| {
                        let i = rng.gen_range(0..oa.k);
                        let mut j = rng.gen_range(0..oa.k - 1);
                        if j >= i {
                            j += 1;
                        }
                        (i.min(j), i.max(j))
                    })
                    .collect()
            }
        }
    };
    let bad: Vec<bool> = pairs
        .par_iter()
        .map_init(Vec::new, |counts, &(i, j)| !exact || !pair_uniform(oa.column(i), oa.column(j), v, lambda, counts))
        .collect();
    let violations: Vec<(usize, usize)> = pairs.iter().zip(&bad).filter(|(_, &b)| b).map(|(p, _)| *p).collect();
    StrengthReport {
        pairs_checked: pairs.len(),
        lambda,
        violation_count: violations.len(),
        violations: violations.into_iter().take(MAX_LISTED_VIOLATIONS).collect(),
    }
}

/// True iff no two rows coincide.
pub fn check_simple(oa: &OrthogonalArray) -> bool {
    // polynomial row hashes, accumulated column by column
    const P1: u64 = 0x100000001b3;
    const P2: u64 = 0x9e3779b97f4a7c15;
    let mut h1 = vec![0u64; oa.n];
    let mut h2 = vec![0u64; oa.n];
    for c in 0..oa.k {
        let col = oa.column(c);
        for r in 0..oa.n {
            h1[r] = h1[r].wrapping_mul(P1).wrapping_add(col[r] as u64 + 1);
            h2[r] = h2[r].wrapping_mul(P2).wrapping_add(col[r] as u64 + 1);
        }
    }
    let mut groups: HashMap<(u64, u64), Vec<usize>> = HashMap::with_capacity(oa.n);
    for r in 0..oa.n {
        groups.entry((h1[r], h2[r])).or_default().push(r);
    }
    groups.values().filter(|g| g.len() > 1).all(|g| {
        let rows: Vec<Vec<u8>> = g.iter().map(|&r| oa.row(r)).collect();
        (0..rows.len()).all(|i| (i + 1..rows.len()).all(|j| rows[i] != rows[j]))
    })
}

/// Writes "N k v t lambda", the source comment and N rows of symbols.
pub fn export_oa<W: Write>(oa: &OrthogonalArray, out: W) -> Result<()> {
    let mut out = std::io::BufWriter::new(out);
    writeln!(out, "{}", oa.header())?;
    if let Some(s) = &oa.source {
        writeln!(out, "# q={} a={} b={} modulus={}", s.q, s.a, s.b, s.modulus)?;
    }
    let mut line = String::with_capacity(oa.k * 3);
    for r in 0..oa.n {
        line.clear();
        for c in 0..oa.k {
            if c > 0 {
                line.push(' ');
            }
            line.push_str(itoa(oa.entry(r, c)));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    Ok(())
}

fn itoa(s: u8) -> &'static str {
    const DIGITS: [&str; 16] = ["0", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11", "12", "13", "14", "15"];
    DIGITS[s as usize]
}

fn parse_source(line: &str) -> Result<OaSource> {
    let mut kv = HashMap::new();
    for tok in line.trim_start_matches('#').split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or(Error::Parse { line: 2, msg: format!("bad field {tok}") })?;
        let v: u32 = v.parse().map_err(|e| Error::Parse { line: 2, msg: format!("{tok}: {e}") })?;
        kv.insert(k.to_string(), v);
    }
    let get = |k: &str| kv.get(k).copied().ok_or(Error::Parse { line: 2, msg: format!("missing {k}") });
    Ok(OaSource { q: get("q")?, a: get("a")?, b: get("b")?, modulus: get("modulus")? })
}

/// Reads the format written by [`export_oa`]. When the source comment names
/// a valid field and parameter pair the row and column keys are rebuilt.
pub fn import_oa<R: BufRead>(input: R) -> Result<OrthogonalArray> {
    let mut lines = input.lines().enumerate();
    let (_, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let head = head?;
    let nums: Vec<usize> = head
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| Error::Parse { line: 1, msg: format!("{t}: {e}") }))
        .collect::<Result<_>>()?;
    let [n, k, v, t, lambda] = nums[..] else {
        return Err(Error::Parse { line: 1, msg: "expected N k v t lambda".into() });
    };
    let mut source = None;
    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(n);
    for (i, line) in lines {
        let line = line?;
        if line.starts_with('#') {
            if rows.is_empty() && source.is_none() {
                source = Some(parse_source(&line)?);
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<u8> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::Parse { line: i + 1, msg: format!("{t}: {e}") }))
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse { line: rows.len() + 2, msg: format!("found {} rows, header says {n}", rows.len()) });
    }
    let mut oa = OrthogonalArray::from_rows(v, t, &rows)?;
    if oa.k != k && n > 0 {
        return Err(Error::Parse { line: 3, msg: format!("rows have {} entries, header says {k}", oa.k) });
    }
    oa.k = k;
    oa.lambda = lambda;
    oa.source = source;
    if let Some(s) = source {
        let keys = FieldCtx::new(s.q.trailing_zeros()).ok().filter(|c| c.q() == s.q && c.modulus() == s.modulus).and_then(
            |ctx| {
                let a = ctx.element(s.a).ok()?;
                let b = ctx.element(s.b).ok()?;
                let p = VarietyParams::new(&ctx, a, b).ok()?;
                Some((build_domain_w0(&ctx), build_r(&ctx, &p)))
            },
        );
        if let Some((rk, ck)) = keys {
            if rk.len() == n && ck.len() == k {
                oa.row_keys = rk;
                oa.col_keys = ck.iter().map(|g| (g.gamma1, g.gamma2)).collect();
            }
        }
    }
    Ok(oa)
}
