//! Projective equivalence between the varieties M_{a,b}.
//!
//! Every equivalence can be taken of the form "apply σ, then multiply by"
//!
//! ```text
//! 1  0     0     0
//! 0  d     e     0
//! 0  λ1·e  λ2·d  0
//! 0  0     0     c
//! ```
//!
//! with c ∈ GF(q)*, N(λ1) = N(λ2) = 1 and (d, e, λ1, λ2) in one of four
//! cases. Such a map sends M_{a,b} onto M_{a',b'} exactly when
//! a' = c·a^σ/(d² + e²) and b' = c·b^σ/(N(d) + N(e)) + u for some u ∈ GF(q).

use std::fmt;
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collineation::{apply, Collineation};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::variety::{build_mab, VarietyParams};

/// Which branch of the map family a witness belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// e = 0, d ≠ 0, λ2 = 1
    I,
    /// e ≠ 0, d = 0, λ1 = 1
    II,
    /// d, e ≠ 0, λ1 = λ2 = 1, d/e ∈ GF(q) \ {1}
    III,
    /// d, e ≠ 0, λ1, λ2 ≠ 1, λ1 ≠ λ2, d = e(1+λ1)/(1+λ2)
    IV,
    /// a composite of family maps
    CanonicalChain,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::I => "I",
            CaseTag::II => "II",
            CaseTag::III => "III",
            CaseTag::IV => "IV",
            CaseTag::CanonicalChain => "canonical-chain",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "I" => CaseTag::I,
            "II" => CaseTag::II,
            "III" => CaseTag::III,
            "IV" => CaseTag::IV,
            "canonical-chain" => CaseTag::CanonicalChain,
            _ => return None,
        })
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The parameters (σ, c, d, e, λ1, λ2, u) of a family map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub sigma: u32,
    pub c: Fe,
    pub d: Fe,
    pub e: Fe,
    pub lambda1: Fe,
    pub lambda2: Fe,
    pub u: Fe,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub source: VarietyParams,
    pub target: VarietyParams,
    pub map: Collineation,
    pub case: CaseTag,
    pub params: Option<FamilyParams>,
}

/// The family matrix with automorphism exponent `sigma`.
pub fn family_map(ctx: &FieldCtx, sigma: u32, c: Fe, d: Fe, e: Fe, lambda1: Fe, lambda2: Fe) -> Result<Collineation> {
    let z = Fe::ZERO;
    let m = [
        [Fe::ONE, z, z, z],
        [z, d, e, z],
        [z, ctx.mul(lambda1, e), ctx.mul(lambda2, d), z],
        [z, z, z, c],
    ];
    Collineation::new(ctx, m, sigma)
}

/// (a', b' - u) = (c·a^σ/(d²+e²), c·b^σ/(N(d)+N(e))), if both denominators are nonzero.
pub fn parameter_action(ctx: &FieldCtx, p: &VarietyParams, sigma: u32, c: Fe, d: Fe, e: Fe) -> Option<(Fe, Fe)> {
    let s2 = ctx.sq(d) + ctx.sq(e);
    let sn = ctx.norm(d) + ctx.norm(e);
    if s2.is_zero() || sn.is_zero() {
        return None;
    }
    let a1 = ctx.mul(ctx.mul(c, ctx.aut(p.a(), sigma)), ctx.inv_nonzero(s2));
    let b1 = ctx.mul(ctx.mul(c, ctx.aut(p.b(), sigma)), ctx.inv_nonzero(sn));
    Some((a1, b1))
}

/// Does `params` hold the case constraints it is tagged with?
pub fn case_holds(ctx: &FieldCtx, case: CaseTag, fp: &FamilyParams) -> bool {
    let one = Fe::ONE;
    let (d, e, l1, l2) = (fp.d, fp.e, fp.lambda1, fp.lambda2);
    let base = ctx.in_subfield(fp.c) && !fp.c.is_zero() && ctx.norm(l1) == one && ctx.norm(l2) == one;
    base && match case {
        CaseTag::I => e.is_zero() && !d.is_zero() && l2 == one,
        CaseTag::II => !e.is_zero() && d.is_zero() && l1 == one,
        CaseTag::III => {
            !e.is_zero() && !d.is_zero() && l1 == one && l2 == one && {
                let r = ctx.mul(d, ctx.inv_nonzero(e));
                ctx.in_subfield(r) && r != one
            }
        }
        CaseTag::IV => {
            !e.is_zero()
                && !d.is_zero()
                && l1 != one
                && l2 != one
                && l1 != l2
                && d == ctx.mul(ctx.mul(one + l1, ctx.inv_nonzero(one + l2)), e)
        }
        CaseTag::CanonicalChain => false,
    }
}

/// (d, e, λ1, λ2) tuples of one case in encoding order. In cases I and II
/// the unused λ is fixed to 1 since it does not enter the matrix.
fn case_tuples(ctx: &FieldCtx, case: CaseTag) -> Vec<(Fe, Fe, Fe, Fe)> {
    let one = Fe::ONE;
    let z = Fe::ZERO;
    let mut out = Vec::new();
    match case {
        CaseTag::I => out.extend(ctx.nonzero().map(|d| (d, z, one, one))),
        CaseTag::II => out.extend(ctx.nonzero().map(|e| (z, e, one, one))),
        CaseTag::III => {
            for d in ctx.nonzero() {
                for e in ctx.nonzero() {
                    let r = ctx.mul(d, ctx.inv_nonzero(e));
                    if ctx.in_subfield(r) && r != one {
                        out.push((d, e, one, one));
                    }
                }
            }
        }
        CaseTag::IV => {
            let units: Vec<Fe> = ctx.norm_one().into_iter().filter(|&l| l != one).collect();
            let mut v = Vec::new();
            for e in ctx.nonzero() {
                for &l1 in &units {
                    for &l2 in &units {
                        if l1 != l2 {
                            let d = ctx.mul(ctx.mul(one + l1, ctx.inv_nonzero(one + l2)), e);
                            v.push((d, e, l1, l2));
                        }
                    }
                }
            }
            v.sort_unstable();
            out = v;
        }
        CaseTag::CanonicalChain => {}
    }
    out
}

impl EquivalenceWitness {
    pub fn identity(p: VarietyParams) -> Self {
        EquivalenceWitness {
            source: p,
            target: p,
            map: Collineation::IDENTITY,
            case: CaseTag::I,
            params: Some(FamilyParams {
                sigma: 0,
                c: Fe::ONE,
                d: Fe::ONE,
                e: Fe::ZERO,
                lambda1: Fe::ONE,
                lambda2: Fe::ONE,
                u: Fe::ZERO,
            }),
        }
    }

    /// Recomputes the target parameters from the stored family parameters.
    pub fn recompute_target(&self, ctx: &FieldCtx) -> Option<(Fe, Fe)> {
        let fp = self.params?;
        let (a1, b1) = parameter_action(ctx, &self.source, fp.sigma, fp.c, fp.d, fp.e)?;
        Some((a1, b1 + fp.u))
    }

    /// Two lines: "a b a' b' CASE" and the collineation.
    pub fn to_text(&self) -> String {
        format!(
            "{} {} {} {} {}\n{}\n",
            self.source.a(),
            self.source.b(),
            self.target.a(),
            self.target.b(),
            self.case,
            self.map.to_line()
        )
    }

    /// Parses the two-line format. Family parameters are not stored, so the
    /// result carries none.
    pub fn from_text<R: BufRead>(ctx: &FieldCtx, input: R) -> Result<Self> {
        let lines: Vec<String> = input
            .lines()
            .collect::<std::io::Result<Vec<_>>>()?
            .into_iter()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .collect();
        if lines.len() != 2 {
            return Err(Error::Parse { line: lines.len(), msg: "expected a parameter line and a map line".into() });
        }
        let head: Vec<&str> = lines[0].split_whitespace().collect();
        if head.len() != 5 {
            return Err(Error::Parse { line: 1, msg: "expected a b a' b' CASE".into() });
        }
        let num = |s: &str| -> Result<Fe> {
            let n = s.parse::<u32>().map_err(|e| Error::Parse { line: 1, msg: format!("{s}: {e}") })?;
            ctx.element(n)
        };
        let source = VarietyParams::new(ctx, num(head[0])?, num(head[1])?)?;
        let target = VarietyParams::new(ctx, num(head[2])?, num(head[3])?)?;
        let case = CaseTag::parse(head[4]).ok_or(Error::Parse { line: 1, msg: format!("unknown case {}", head[4]) })?;
        let map = Collineation::from_line(ctx, &lines[1]).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: 2, msg },
            other => other,
        })?;
        Ok(EquivalenceWitness { source, target, map, case, params: None })
    }
}

/// Exact check that the map sends M_source onto M_target.
pub fn verify_witness(ctx: &FieldCtx, w: &EquivalenceWitness) -> bool {
    let src = build_mab(ctx, &w.source);
    let dst = build_mab(ctx, &w.target);
    src.len() == dst.len() && src.points().par_iter().all(|p| dst.contains(&apply(ctx, &w.map, p)))
}

fn search_sigma(ctx: &FieldCtx, p1: &VarietyParams, p2: &VarietyParams, sigma: u32) -> Option<(CaseTag, FamilyParams)> {
    let tb2 = ctx.trace(p2.b());
    for case in [CaseTag::I, CaseTag::II, CaseTag::III, CaseTag::IV] {
        let tuples = case_tuples(ctx, case);
        for &c in ctx.subfield().iter().filter(|c| !c.is_zero()) {
            for &(d, e, l1, l2) in &tuples {
                let Some((a1, b1)) = parameter_action(ctx, p1, sigma, c, d, e) else {
                    continue;
                };
                if a1 != p2.a() {
                    continue;
                }
                // b' - b1 must lie in GF(q); equivalently Tr(b') = Tr(b1)
                if ctx.trace(b1) != tb2 {
                    continue;
                }
                let u = p2.b() + b1;
                return Some((case, FamilyParams { sigma, c, d, e, lambda1: l1, lambda2: l2, u }));
            }
        }
    }
    None
}

/// Searches the map family for a map M_{p1} → M_{p2}; the first hit in
/// (σ, case, c, d, e, λ1, λ2) order is returned after exact verification.
pub fn find_equivalence(ctx: &FieldCtx, p1: &VarietyParams, p2: &VarietyParams) -> Result<EquivalenceWitness> {
    if p1 == p2 {
        return Ok(EquivalenceWitness::identity(*p1));
    }
    let hit = (0..2 * ctx.k()).into_par_iter().find_map_first(|sigma| search_sigma(ctx, p1, p2, sigma));
    let fail = || Error::NoEquivalence(p1.to_string(), p2.to_string());
    let (case, fp) = hit.ok_or_else(fail)?;
    let map = family_map(ctx, fp.sigma, fp.c, fp.d, fp.e, fp.lambda1, fp.lambda2)?;
    let w = EquivalenceWitness { source: *p1, target: *p2, map, case, params: Some(fp) };
    if !verify_witness(ctx, &w) {
        return Err(fail());
    }
    Ok(w)
}

/// Maps M_{a,b} onto M_{a/d², ε} with d the smallest solution of
/// N(d) = b1, where b = b0 + ε·b1 over the basis {1, ε}.
pub fn reduce_to_canonical(ctx: &FieldCtx, p: &VarietyParams) -> Result<EquivalenceWitness> {
    let eps = ctx.epsilon();
    let b1 = ctx.trace(p.b()); // Tr(ε) = 1
    let b0 = p.b() + ctx.mul(eps, b1);
    let d = *ctx.solve_norm(b1)?.iter().min().expect("norm is onto GF(q)*");
    let a1 = ctx.mul(p.a(), ctx.inv_nonzero(ctx.sq(d)));
    let target = VarietyParams::new(ctx, a1, eps)?;
    let fp = FamilyParams {
        sigma: 0,
        c: Fe::ONE,
        d,
        e: Fe::ZERO,
        lambda1: Fe::ONE,
        lambda2: Fe::ONE,
        u: ctx.mul(b0, ctx.inv_nonzero(b1)),
    };
    let map = family_map(ctx, 0, fp.c, d, Fe::ZERO, Fe::ONE, Fe::ONE)?;
    Ok(EquivalenceWitness { source: *p, target, map, case: CaseTag::I, params: Some(fp) })
}

/// A linear map M_{a,ε} → M_{a',ε} built directly: case I when
/// N(a'/a) = 1, otherwise case IV with λ2 taken from the quadratic
/// (N(m)λ1^q + 1)λ2² + Tr(λ1)λ2 + (N(m)λ1 + 1) = 0, m² = a'/a.
pub fn constructive_witness(ctx: &FieldCtx, a: Fe, a_target: Fe) -> Result<EquivalenceWitness> {
    let eps = ctx.epsilon();
    let source = VarietyParams::new(ctx, a, eps)?;
    let target = VarietyParams::new(ctx, a_target, eps)?;
    let fail = || Error::NoEquivalence(source.to_string(), target.to_string());
    let ratio = ctx.mul(a_target, ctx.inv_nonzero(a));
    let one = Fe::ONE;

    let (case, d, e, l1, l2) = if let Some(d) = ctx.root_q_minus_1(ratio) {
        (CaseTag::I, d, Fe::ZERO, one, one)
    } else {
        let m = ctx.sqrt(ratio);
        let nm = ctx.norm(m);
        let mut found = None;
        'outer: for l1 in ctx.norm_one().into_iter().filter(|&l| l != one) {
            let lead = ctx.mul(nm, ctx.frobenius(l1)) + one;
            if lead.is_zero() {
                continue;
            }
            let inv = ctx.inv_nonzero(lead);
            let b = ctx.mul(ctx.trace(l1), inv);
            let c = ctx.mul(ctx.mul(nm, l1) + one, inv);
            for l2 in ctx.solve_quadratic(b, c) {
                if l2 == one || l2 == l1 || ctx.norm(l2) != one {
                    continue;
                }
                let beta = ctx.mul(one + l1, ctx.inv_nonzero(one + l2));
                let denom = one + ctx.norm(beta);
                if denom.is_zero() {
                    continue;
                }
                let rhs = ctx.mul(ctx.mul(ctx.sq(m), ctx.sq(one + beta)), ctx.inv_nonzero(denom));
                if let Some(e) = ctx.root_q_minus_1(rhs) {
                    found = Some((CaseTag::IV, ctx.mul(beta, e), e, l1, l2));
                    break 'outer;
                }
            }
        }
        found.ok_or_else(fail)?
    };
    let c = ctx.norm(d) + ctx.norm(e);
    let fp = FamilyParams { sigma: 0, c, d, e, lambda1: l1, lambda2: l2, u: Fe::ZERO };
    let (a1, b1) = parameter_action(ctx, &source, 0, c, d, e).ok_or_else(fail)?;
    if a1 != a_target || b1 != eps {
        return Err(fail());
    }
    let map = family_map(ctx, 0, c, d, e, l1, l2)?;
    Ok(EquivalenceWitness { source, target, map, case, params: Some(fp) })
}

/// The composite witness p1 → canonical(p1) → canonical(p2) → p2.
pub fn canonical_chain(ctx: &FieldCtx, p1: &VarietyParams, p2: &VarietyParams) -> Result<EquivalenceWitness> {
    use crate::collineation::{compose, inverse};
    let r1 = reduce_to_canonical(ctx, p1)?;
    let r2 = reduce_to_canonical(ctx, p2)?;
    let mid = if r1.target == r2.target {
        Collineation::IDENTITY
    } else {
        match constructive_witness(ctx, r1.target.a(), r2.target.a()) {
            Ok(w) => w.map,
            Err(_) => find_equivalence(ctx, &r1.target, &r2.target)?.map,
        }
    };
    let map = compose(ctx, &compose(ctx, &r1.map, &mid), &inverse(ctx, &r2.map));
    let w = EquivalenceWitness { source: *p1, target: *p2, map, case: CaseTag::CanonicalChain, params: None };
    if !verify_witness(ctx, &w) {
        return Err(Error::NoEquivalence(p1.to_string(), p2.to_string()));
    }
    Ok(w)
}

/// β with M_{1,ε}^β = M_{a,b}.
pub fn beta_for(ctx: &FieldCtx, p: &VarietyParams) -> Result<Collineation> {
    let base = VarietyParams::canonical(ctx, Fe::ONE)?;
    match find_equivalence(ctx, &base, p) {
        Ok(w) => Ok(w.map),
        Err(_) => Ok(canonical_chain(ctx, &base, p)?.map),
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Number of equivalence classes among `universe`: each pair is joined to
/// its canonical form, then canonical forms are joined by witnesses.
pub fn class_count(ctx: &FieldCtx, universe: &[VarietyParams]) -> Result<usize> {
    let mut nodes: Vec<VarietyParams> = universe.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    let n_universe = nodes.len();
    let reductions: Vec<EquivalenceWitness> =
        nodes.par_iter().map(|p| reduce_to_canonical(ctx, p)).collect::<Result<_>>()?;
    let mut canon: Vec<VarietyParams> = reductions.iter().map(|w| w.target).collect();
    canon.sort_unstable();
    canon.dedup();
    for c in &canon {
        if !nodes.contains(c) {
            nodes.push(*c);
        }
    }
    let index = |p: &VarietyParams| nodes.iter().position(|x| x == p).unwrap();
    let mut uf = UnionFind((0..nodes.len()).collect());
    for w in &reductions {
        uf.union(index(&w.source), index(&w.target));
    }
    for (i, ci) in canon.iter().enumerate() {
        for cj in &canon[..i] {
            let (xi, xj) = (index(ci), index(cj));
            if uf.find(xi) == uf.find(xj) {
                continue;
            }
            if find_equivalence(ctx, cj, ci).is_ok() {
                uf.union(xi, xj);
            }
        }
    }
    let mut roots: Vec<usize> = (0..n_universe).map(|i| uf.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(roots.len())
}

/// Class count over every valid parameter pair.
pub fn parameter_class_count(ctx: &FieldCtx) -> Result<usize> {
    class_count(ctx, &VarietyParams::all(ctx))
}
