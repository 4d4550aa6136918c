//! Semilinear collineations of PG(3,q²).
//!
//! A collineation is a 4×4 matrix `M` together with an automorphism
//! exponent `j` (x ↦ x^(2^j)). A point given as a row vector `v` is sent to
//! `normalize(v^σ · M)`: the automorphism is applied entrywise first.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::geometry::{self, normalize, ProjPoint};
use crate::variety::{PointSet, VarietyParams};

pub type Matrix = [[Fe; 4]; 4];

const IDENTITY: Matrix = [
    [Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO],
    [Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ZERO],
    [Fe::ZERO, Fe::ZERO, Fe::ONE, Fe::ZERO],
    [Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE],
];

/// A canonically scaled semilinear map: the first nonzero entry of the
/// matrix in row-major order is 1.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Collineation {
    m: Matrix,
    aut: u8,
}

fn mat_mul(ctx: &FieldCtx, a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = [[Fe::ZERO; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut s = Fe::ZERO;
            for (t, bt) in b.iter().enumerate() {
                s += ctx.mul(a[i][t], bt[j]);
            }
            *cell = s;
        }
    }
    out
}

fn mat_aut(ctx: &FieldCtx, m: &Matrix, j: u32) -> Matrix {
    m.map(|row| row.map(|x| ctx.aut(x, j)))
}

fn mat_inverse(ctx: &FieldCtx, m: &Matrix) -> Option<Matrix> {
    let mut a = *m;
    let mut inv = IDENTITY;
    for col in 0..4 {
        let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let s = ctx.inv_nonzero(a[col][col]);
        for j in 0..4 {
            a[col][j] = ctx.mul(a[col][j], s);
            inv[col][j] = ctx.mul(inv[col][j], s);
        }
        for r in 0..4 {
            let f = a[r][col];
            if r != col && !f.is_zero() {
                for j in 0..4 {
                    a[r][j] += ctx.mul(f, a[col][j]);
                    inv[r][j] += ctx.mul(f, inv[col][j]);
                }
            }
        }
    }
    Some(inv)
}

fn canonical(ctx: &FieldCtx, m: Matrix) -> Matrix {
    let lead = *m.iter().flatten().find(|x| !x.is_zero()).expect("nonzero matrix");
    if lead == Fe::ONE {
        return m;
    }
    let s = ctx.inv_nonzero(lead);
    m.map(|row| row.map(|x| ctx.mul(s, x)))
}

impl Collineation {
    pub const IDENTITY: Collineation = Collineation { m: IDENTITY, aut: 0 };

    /// Builds a collineation from any invertible representative.
    pub fn new(ctx: &FieldCtx, m: Matrix, aut: u32) -> Result<Self> {
        for row in &m {
            for x in row {
                ctx.element(x.bits())?;
            }
        }
        if aut >= 2 * ctx.k() {
            return Err(Error::Domain(format!("automorphism exponent {aut} not below {}", 2 * ctx.k())));
        }
        if mat_inverse(ctx, &m).is_none() {
            return Err(Error::Domain("singular matrix".into()));
        }
        Ok(Collineation { m: canonical(ctx, m), aut: aut as u8 })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn aut_exp(&self) -> u32 {
        self.aut as u32
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn is_linear(&self) -> bool {
        self.aut == 0
    }

    /// 16 matrix entries in row-major order followed by the exponent.
    pub fn to_line(&self) -> String {
        let mut parts: Vec<String> = self.m.iter().flatten().map(|x| x.bits().to_string()).collect();
        parts.push(self.aut.to_string());
        parts.join(" ")
    }

    pub fn from_line(ctx: &FieldCtx, line: &str) -> Result<Self> {
        let nums: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|e| Error::Parse { line: 1, msg: format!("{t}: {e}") }))
            .collect::<Result<_>>()?;
        if nums.len() != 17 {
            return Err(Error::Parse { line: 1, msg: format!("expected 17 integers, found {}", nums.len()) });
        }
        let mut m = [[Fe::ZERO; 4]; 4];
        for (i, &n) in nums[..16].iter().enumerate() {
            m[i / 4][i % 4] = ctx.element(n)?;
        }
        Self::new(ctx, m, nums[16])
    }
}

impl fmt::Debug for Collineation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Collineation[{}]", self.to_line())
    }
}

impl fmt::Display for Collineation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

fn require_subfield(ctx: &FieldCtx, x: Fe, what: &str) -> Result<()> {
    ctx.element(x.bits())?;
    if !ctx.in_subfield(x) {
        return Err(Error::Domain(format!("{what}={x} is not in GF({})", ctx.q())));
    }
    Ok(())
}

/// φ_s, s ∈ GF(q): z ↦ z + s.
pub fn make_phi(ctx: &FieldCtx, s: Fe) -> Result<Collineation> {
    require_subfield(ctx, s, "s")?;
    let mut m = IDENTITY;
    m[0][3] = s;
    Ok(Collineation { m, aut: 0 })
}

/// ψ_γ(a,b) in even characteristic (the 2aγ terms of the last column vanish).
pub fn make_psi(ctx: &FieldCtx, g1: Fe, g2: Fe, params: &VarietyParams) -> Result<Collineation> {
    make_bm_elation(ctx, g1, g2, Fe::ZERO, params)
}

/// The elation ψ_{γ1,γ2,s} = ψ_γ(a,b) followed by φ_s.
pub fn make_bm_elation(ctx: &FieldCtx, g1: Fe, g2: Fe, s: Fe, params: &VarietyParams) -> Result<Collineation> {
    ctx.element(g1.bits())?;
    ctx.element(g2.bits())?;
    require_subfield(ctx, s, "s")?;
    let tb = ctx.trace(params.b());
    let corner = ctx.mul(params.a(), ctx.sq(g1) + ctx.sq(g2)) + ctx.mul(params.b(), ctx.norm(g1) + ctx.norm(g2)) + s;
    let mut m = IDENTITY;
    m[0][1] = g1;
    m[0][2] = g2;
    m[0][3] = corner;
    m[1][3] = ctx.mul(tb, ctx.frobenius(g1));
    m[2][3] = ctx.mul(tb, ctx.frobenius(g2));
    Ok(Collineation { m, aut: 0 })
}

/// μ_δ = diag(1, δ, δ, δ²), δ ∈ GF(q)*.
pub fn make_mu(ctx: &FieldCtx, delta: Fe) -> Result<Collineation> {
    require_subfield(ctx, delta, "delta")?;
    if delta.is_zero() {
        return Err(Error::Domain("delta must be nonzero".into()));
    }
    let mut m = IDENTITY;
    m[1][1] = delta;
    m[2][2] = delta;
    m[3][3] = ctx.sq(delta);
    Ok(Collineation { m, aut: 0 })
}

/// τ_e, e ∈ GF(q).
pub fn make_tau(ctx: &FieldCtx, e: Fe) -> Result<Collineation> {
    require_subfield(ctx, e, "e")?;
    let mut m = IDENTITY;
    m[1][1] = e + Fe::ONE;
    m[1][2] = e;
    m[2][1] = e;
    m[2][2] = e + Fe::ONE;
    Ok(Collineation { m, aut: 0 })
}

/// x ↦ x^(2^j) on every coordinate.
pub fn make_sigma(ctx: &FieldCtx, j: u32) -> Result<Collineation> {
    if j >= 2 * ctx.k() {
        return Err(Error::Domain(format!("automorphism exponent {j} not below {}", 2 * ctx.k())));
    }
    Ok(Collineation { m: IDENTITY, aut: j as u8 })
}

#[inline]
fn apply_raw(ctx: &FieldCtx, c: &Collineation, v: &[Fe; 4]) -> [Fe; 4] {
    let v = if c.aut == 0 { *v } else { v.map(|x| ctx.aut(x, c.aut as u32)) };
    let mut out = [Fe::ZERO; 4];
    for (i, &vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (o, &mij) in out.iter_mut().zip(&c.m[i]) {
            *o += ctx.mul(vi, mij);
        }
    }
    out
}

pub fn apply(ctx: &FieldCtx, c: &Collineation, p: &ProjPoint) -> ProjPoint {
    let raw = apply_raw(ctx, c, &p.coords());
    ProjPoint::from_normalized(normalize(ctx, raw).expect("invertible map"))
}

pub fn image_of_set(ctx: &FieldCtx, c: &Collineation, set: &PointSet) -> PointSet {
    PointSet::generic(set.points().iter().map(|p| apply(ctx, c, p)).collect())
}

/// The map "first c1, then c2".
pub fn compose(ctx: &FieldCtx, c1: &Collineation, c2: &Collineation) -> Collineation {
    let a = if c2.aut == 0 { c1.m } else { mat_aut(ctx, &c1.m, c2.aut as u32) };
    let m = canonical(ctx, mat_mul(ctx, &a, &c2.m));
    let aut = ((c1.aut as u32 + c2.aut as u32) % (2 * ctx.k())) as u8;
    Collineation { m, aut }
}

pub fn inverse(ctx: &FieldCtx, c: &Collineation) -> Collineation {
    let n = 2 * ctx.k();
    let j = (n - c.aut as u32) % n;
    let twisted = mat_aut(ctx, &c.m, j);
    let m = mat_inverse(ctx, &twisted).expect("collineation matrices are invertible");
    Collineation { m: canonical(ctx, m), aut: j as u8 }
}

/// g⁻¹ · x · g, i.e. first g⁻¹, then x, then g.
pub fn conjugate(ctx: &FieldCtx, x: &Collineation, g: &Collineation) -> Collineation {
    compose(ctx, &compose(ctx, &inverse(ctx, g), x), g)
}

/// True iff the image of `set` is `set`.
pub fn stabilizes(ctx: &FieldCtx, c: &Collineation, set: &PointSet) -> bool {
    // a collineation is injective, so landing inside the set is enough
    set.points().iter().all(|p| set.contains(&apply(ctx, c, p)))
}

/// Same as [`stabilizes`] for a sorted point slice.
pub fn preserves_points(ctx: &FieldCtx, c: &Collineation, sorted: &[ProjPoint]) -> bool {
    sorted.iter().all(|p| sorted.binary_search(&apply(ctx, c, p)).is_ok())
}

pub fn fixes_pointwise(ctx: &FieldCtx, c: &Collineation, points: &[ProjPoint]) -> bool {
    points.iter().all(|p| apply(ctx, c, p) == *p)
}

/// The affine matrix shape
///
/// ```text
/// 1 γ1 γ2 γ3
/// 0 d  e  h
/// 0 f  g  i
/// 0 0  0  c
/// ```
///
/// with c(dg + ef) ≠ 0 and d + f = e + g.
pub fn has_affine_shape(ctx: &FieldCtx, c: &Collineation) -> bool {
    let m = &c.m;
    let z = Fe::ZERO;
    let cc = m[3][3];
    let det2 = ctx.mul(m[1][1], m[2][2]) + ctx.mul(m[1][2], m[2][1]);
    m[0][0] == Fe::ONE
        && m[1][0] == z
        && m[2][0] == z
        && m[3][0] == z
        && m[3][1] == z
        && m[3][2] == z
        && !ctx.mul(cc, det2).is_zero()
        && m[1][1] + m[2][1] == m[1][2] + m[2][2]
}

/// Σ∞ and ℓ∞ as sorted point lists, with P∞.
#[derive(Clone, Debug)]
pub struct InfinityFrame {
    pub sigma_inf: Vec<ProjPoint>,
    pub l_inf: Vec<ProjPoint>,
}

impl InfinityFrame {
    pub fn new(ctx: &FieldCtx) -> Self {
        let sigma_inf: Vec<ProjPoint> = geometry::points_at_infinity(ctx).collect();
        let l_inf = sigma_inf.iter().copied().filter(|p| p.coords()[1] == p.coords()[2]).collect();
        InfinityFrame { sigma_inf, l_inf }
    }

    /// Fixes P∞ and maps ℓ∞ and Σ∞ onto themselves.
    pub fn preserved_by(&self, ctx: &FieldCtx, c: &Collineation) -> bool {
        apply(ctx, c, &ProjPoint::P_INF) == ProjPoint::P_INF
            && preserves_points(ctx, c, &self.l_inf)
            && preserves_points(ctx, c, &self.sigma_inf)
    }
}

/// Breadth-first closure of `generators` under composition (inverses of
/// the generators are added up front). Returns the elements sorted.
pub fn generate_group(ctx: &FieldCtx, generators: &[Collineation], cap: usize) -> Result<Vec<Collineation>> {
    let mut gens: Vec<Collineation> = generators.to_vec();
    gens.extend(generators.iter().map(|g| inverse(ctx, g)));
    gens.sort_unstable();
    gens.dedup();
    gens.retain(|g| !g.is_identity());

    let mut seen: HashSet<Collineation> = HashSet::from([Collineation::IDENTITY]);
    let mut frontier = vec![Collineation::IDENTITY];
    while !frontier.is_empty() {
        let mut next: Vec<Collineation> = frontier
            .par_iter()
            .flat_map_iter(|g| gens.iter().map(move |h| compose(ctx, g, h)))
            .filter(|x| !seen.contains(x))
            .collect();
        next.sort_unstable();
        next.dedup();
        seen.extend(next.iter().copied());
        if seen.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
        frontier = next;
    }
    let mut out: Vec<Collineation> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// True iff |group| = |domain| and the orbit of the first domain point is the
/// whole domain with trivial stabilizer.
pub fn check_sharp_transitivity(ctx: &FieldCtx, group: &[Collineation], domain: &PointSet) -> bool {
    let Some(base) = domain.points().first() else {
        return group.is_empty();
    };
    if group.len() != domain.len() {
        return false;
    }
    let mut orbit: Vec<ProjPoint> = group.par_iter().map(|g| apply(ctx, g, base)).collect();
    orbit.sort_unstable();
    orbit.dedup();
    orbit == domain.points()
}

/// {φ_s : s ∈ GF(q)}.
pub fn kernel_generators(ctx: &FieldCtx) -> Vec<Collineation> {
    ctx.subfield().iter().map(|&s| make_phi(ctx, s).unwrap()).collect()
}

/// {φ_s} ∪ {ψ_γ(a,b)}.
pub fn sylow_s_generators(ctx: &FieldCtx, params: &VarietyParams) -> Vec<Collineation> {
    let mut out = kernel_generators(ctx);
    for g1 in ctx.elements() {
        for g2 in ctx.elements() {
            out.push(make_psi(ctx, g1, g2, params).unwrap());
        }
    }
    out
}

/// Generators of S:U, adding {τ_e}.
pub fn w_generators(ctx: &FieldCtx, params: &VarietyParams) -> Vec<Collineation> {
    let mut out = sylow_s_generators(ctx, params);
    out.extend(ctx.subfield().iter().map(|&e| make_tau(ctx, e).unwrap()));
    out
}

/// Generators φ_s, ψ_γ(a,b), τ_e, μ_δ of the linear stabilizer.
pub fn linear_generators(ctx: &FieldCtx, params: &VarietyParams) -> Vec<Collineation> {
    let mut out = w_generators(ctx, params);
    out.extend(ctx.subfield().iter().filter(|d| !d.is_zero()).map(|&d| make_mu(ctx, d).unwrap()));
    out
}

/// σ^β = β⁻¹ σ β, where β maps M_{1,ε} onto M_{a,b}.
pub fn sigma_conjugate(ctx: &FieldCtx, beta: &Collineation) -> Collineation {
    conjugate(ctx, &make_sigma(ctx, 1).unwrap(), beta)
}

/// Linear generators together with σ^β.
pub fn semilinear_generators(ctx: &FieldCtx, params: &VarietyParams, beta: &Collineation) -> Vec<Collineation> {
    let mut out = linear_generators(ctx, params);
    out.push(sigma_conjugate(ctx, beta));
    out
}

/// The q⁵ elations ψ_{γ1,γ2,s}.
pub fn bm_group(ctx: &FieldCtx, params: &VarietyParams) -> Vec<Collineation> {
    let mut out = Vec::with_capacity((ctx.size() * ctx.size() * ctx.q()) as usize);
    for g1 in ctx.elements() {
        for g2 in ctx.elements() {
            for &s in ctx.subfield() {
                out.push(make_bm_elation(ctx, g1, g2, s, params).unwrap());
            }
        }
    }
    out.sort_unstable();
    out
}

/// Elements of `group` fixing Σ∞ pointwise.
pub fn sigma_inf_kernel(ctx: &FieldCtx, group: &[Collineation], frame: &InfinityFrame) -> Vec<Collineation> {
    group.par_iter().filter(|c| fixes_pointwise(ctx, c, &frame.sigma_inf)).copied().collect()
}

/// True iff every conjugate g⁻¹ w g of a generator w of `sub` by an element g
/// of `by` lies in `sub`.
pub fn is_normalized_by(ctx: &FieldCtx, sub: &[Collineation], sub_generators: &[Collineation], by: &[Collineation]) -> bool {
    let members: HashSet<Collineation> = sub.iter().copied().collect();
    by.par_iter().all(|g| sub_generators.iter().all(|w| members.contains(&conjugate(ctx, w, g))))
}
