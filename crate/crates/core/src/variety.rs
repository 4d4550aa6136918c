//! The surfaces B_{a,b}, the Hermitian cone F and the BM quasi-Hermitian
//! varieties M_{a,b} = (B_{a,b} \ B∞) ∪ F, with the hyperplane-intersection
//! and line-census checks.
//!
//! Every sign of the defining equations is read as `+` (characteristic 2).
//! On an affine point (1,x,y,z) the equation of B_{a,b} collapses to
//!
//! ```text
//! Tr(z) + Tr(a(x² + y²)) + Tr(b)·(N(x) + N(y)) = 0,
//! ```
//!
//! which is [`affine_value`]; membership tests, the set builders and the
//! orthogonal-array forms all evaluate through it.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::geometry::{self, enumerate_hyperplanes, enumerate_points, line_through, Hyperplane, Line, ProjPoint};

/// The parameter pair (a, b) with a ≠ 0 and b ∉ GF(q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarietyParams {
    a: Fe,
    b: Fe,
}

impl VarietyParams {
    pub fn new(ctx: &FieldCtx, a: Fe, b: Fe) -> Result<Self> {
        ctx.element(a.bits())?;
        ctx.element(b.bits())?;
        if a.is_zero() {
            return Err(Error::InvalidParams("a must be nonzero".into()));
        }
        if ctx.in_subfield(b) {
            return Err(Error::InvalidParams(format!("b={b} lies in GF({})", ctx.q())));
        }
        Ok(VarietyParams { a, b })
    }

    pub fn a(&self) -> Fe {
        self.a
    }

    pub fn b(&self) -> Fe {
        self.b
    }

    /// The canonical pair (a, epsilon).
    pub fn canonical(ctx: &FieldCtx, a: Fe) -> Result<Self> {
        Self::new(ctx, a, ctx.epsilon())
    }

    /// Every valid pair, ordered by (a, b) encodings: (q²-1)(q²-q) of them.
    pub fn all(ctx: &FieldCtx) -> Vec<Self> {
        ctx.nonzero()
            .flat_map(|a| ctx.elements().filter(|&b| !ctx.in_subfield(b)).map(move |b| VarietyParams { a, b }))
            .collect()
    }
}

impl fmt::Display for VarietyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={})", self.a, self.b)
    }
}

/// Which construction a point set came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SetLabel {
    Bab,
    FCone,
    Mab,
    Hermitian,
    Generic,
}

/// A sorted, duplicate-free set of normalized points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    label: SetLabel,
    params: Option<VarietyParams>,
    points: Vec<ProjPoint>,
}

impl PointSet {
    pub fn generic(mut points: Vec<ProjPoint>) -> Self {
        points.sort_unstable();
        points.dedup();
        PointSet { label: SetLabel::Generic, params: None, points }
    }

    fn labelled(label: SetLabel, params: Option<VarietyParams>, points: Vec<ProjPoint>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        PointSet { label, params, points }
    }

    pub fn label(&self) -> SetLabel {
        self.label
    }

    pub fn params(&self) -> Option<VarietyParams> {
        self.params
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn affine_points(&self) -> impl Iterator<Item = &ProjPoint> {
        self.points.iter().filter(|p| p.is_affine())
    }

    pub fn infinite_points(&self) -> impl Iterator<Item = &ProjPoint> {
        self.points.iter().filter(|p| !p.is_affine())
    }

    /// Same points, regardless of label.
    pub fn same_points(&self, other: &PointSet) -> bool {
        self.points == other.points
    }
}

/// Tr(z) + Tr(a(x²+y²)) + Tr(b)(N(x)+N(y)); zero exactly on the affine part
/// of B_{a,b}. The value always lies in GF(q).
#[inline]
pub fn affine_value(ctx: &FieldCtx, params: &VarietyParams, x: Fe, y: Fe, z: Fe) -> Fe {
    let s = ctx.sq(x) + ctx.sq(y);
    ctx.trace(z) + ctx.trace(ctx.mul(params.a, s)) + ctx.mul(ctx.trace(params.b), ctx.norm(x) + ctx.norm(y))
}

/// The homogeneous form of B_{a,b}:
/// Z^q J^q + Z J^(2q-1) + a^q(X^2q + Y^2q) + a(X² + Y²)J^(2q-2)
///   + (b^q + b)(X^(q+1) + Y^(q+1)) J^(q-1).
pub fn bab_form(ctx: &FieldCtx, params: &VarietyParams, p: &[Fe; 4]) -> Fe {
    let q = ctx.q() as u64;
    let [j, x, y, z] = *p;
    let aq = ctx.frobenius(params.a);
    let tb = ctx.trace(params.b);
    let t1 = ctx.mul(ctx.pow(z, q), ctx.pow(j, q));
    let t2 = ctx.mul(z, ctx.pow(j, 2 * q - 1));
    let t3 = ctx.mul(aq, ctx.pow(x, 2 * q) + ctx.pow(y, 2 * q));
    let t4 = ctx.mul(ctx.mul(params.a, ctx.sq(x) + ctx.sq(y)), ctx.pow(j, 2 * q - 2));
    let t5 = ctx.mul(ctx.mul(tb, ctx.pow(x, q + 1) + ctx.pow(y, q + 1)), ctx.pow(j, q - 1));
    t1 + t2 + t3 + t4 + t5
}

/// Membership in the cone F : J = 0, N(X) = N(Y).
#[inline]
pub fn in_cone_f(ctx: &FieldCtx, p: &ProjPoint) -> bool {
    let [j, x, y, _] = p.coords();
    j.is_zero() && ctx.norm(x) == ctx.norm(y)
}

/// Membership in M_{a,b} without materializing the set.
#[inline]
pub fn in_mab(ctx: &FieldCtx, params: &VarietyParams, p: &ProjPoint) -> bool {
    let [j, x, y, z] = p.coords();
    if j.is_zero() {
        in_cone_f(ctx, p)
    } else {
        // normalized, so j = 1
        affine_value(ctx, params, x, y, z).is_zero()
    }
}

/// Affine points of B_{a,b}, built by running over every (x, y, z).
fn affine_part(ctx: &FieldCtx, params: &VarietyParams) -> Vec<ProjPoint> {
    let elems: Vec<Fe> = ctx.elements().collect();
    elems
        .par_iter()
        .flat_map_iter(|&x| {
            let elems = &elems;
            elems.iter().flat_map(move |&y| {
                elems
                    .iter()
                    .filter(move |&&z| affine_value(ctx, params, x, y, z).is_zero())
                    .map(move |&z| ProjPoint::affine(x, y, z))
            })
        })
        .collect()
}

/// B_{a,b}: all points satisfying the homogeneous equation.
pub fn build_bab(ctx: &FieldCtx, params: &VarietyParams) -> PointSet {
    let mut points: Vec<ProjPoint> = geometry::points_at_infinity(ctx)
        .filter(|p| bab_form(ctx, params, &p.coords()).is_zero())
        .collect();
    points.extend(affine_part(ctx, params));
    PointSet::labelled(SetLabel::Bab, Some(*params), points)
}

/// F = {(0,X,Y,Z) : X^(q+1) + Y^(q+1) = 0}, of size (q+1)q² + 1.
pub fn build_cone_f(ctx: &FieldCtx) -> PointSet {
    let points = geometry::points_at_infinity(ctx).filter(|p| in_cone_f(ctx, p)).collect();
    PointSet::labelled(SetLabel::FCone, None, points)
}

/// M_{a,b} = (B_{a,b} \ B∞) ∪ F.
pub fn build_mab(ctx: &FieldCtx, params: &VarietyParams) -> PointSet {
    let mut points = build_cone_f(ctx).points;
    points.extend(affine_part(ctx, params));
    PointSet::labelled(SetLabel::Mab, Some(*params), points)
}

/// The classical non-singular Hermitian surface J^(q+1)+X^(q+1)+Y^(q+1)+Z^(q+1) = 0.
pub fn build_hermitian_surface(ctx: &FieldCtx) -> PointSet {
    let points = enumerate_points(ctx)
        .filter(|p| p.coords().iter().fold(Fe::ZERO, |acc, &c| acc + ctx.norm(c)).is_zero())
        .collect();
    PointSet::labelled(SetLabel::Hermitian, None, points)
}

/// Size of a non-singular Hermitian surface of PG(3,q²): (q²+1)(q³+1).
pub fn hermitian_size(q: u64) -> u64 {
    (q * q + 1) * (q * q * q + 1)
}

/// The two hyperplane intersection numbers of a Hermitian surface:
/// q³+1 and q³+q²+1.
pub fn hermitian_intersections(q: u64) -> (u64, u64) {
    (q * q * q + 1, q * q * q + q * q + 1)
}

/// Tally of |S ∩ H| over every hyperplane H: size ↦ number of hyperplanes.
pub fn hyperplane_spectrum(ctx: &FieldCtx, points: &[ProjPoint]) -> BTreeMap<usize, usize> {
    let hyperplanes: Vec<Hyperplane> = enumerate_hyperplanes(ctx).collect();
    let sizes: Vec<usize> = hyperplanes
        .par_iter()
        .map(|h| points.iter().filter(|p| h.contains(ctx, p)).count())
        .collect();
    let mut spectrum = BTreeMap::new();
    for s in sizes {
        *spectrum.entry(s).or_insert(0) += 1;
    }
    spectrum
}

/// Outcome of the quasi-Hermitian test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QhReport {
    pub q: u64,
    pub size: usize,
    pub expected_size: u64,
    pub allowed: (u64, u64),
    pub spectrum: BTreeMap<usize, usize>,
    pub quasi_hermitian: bool,
}

impl fmt::Display for QhReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spec: Vec<String> = self.spectrum.iter().map(|(s, n)| format!("{s}:{n}")).collect();
        write!(f, "size={} spectrum={{{}}} QH={}", self.size, spec.join(","), self.quasi_hermitian)
    }
}

/// Same size and the same two hyperplane intersection numbers as a
/// non-singular Hermitian surface.
pub fn is_quasi_hermitian(ctx: &FieldCtx, set: &PointSet) -> QhReport {
    let q = ctx.q() as u64;
    let expected_size = hermitian_size(q);
    let allowed = hermitian_intersections(q);
    let spectrum = hyperplane_spectrum(ctx, set.points());
    let quasi_hermitian = set.len() as u64 == expected_size
        && spectrum.keys().all(|&s| s as u64 == allowed.0 || s as u64 == allowed.1);
    QhReport { q, size: set.len(), expected_size, allowed, spectrum, quasi_hermitian }
}

/// Every line of PG(3,q²) through `p` that lies entirely in `set`.
///
/// Only lines joining `p` to another point of the set are examined; each
/// candidate line is visited once.
pub fn lines_in_set_through(ctx: &FieldCtx, set: &PointSet, p: &ProjPoint) -> Result<Vec<Line>> {
    if !set.contains(p) {
        return Err(Error::PointNotInSet(p.to_string()));
    }
    Ok(lines_through_unchecked(ctx, set, p))
}

fn lines_through_unchecked(ctx: &FieldCtx, set: &PointSet, p: &ProjPoint) -> Vec<Line> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for r in set.points() {
        if r == p || seen.contains(r) {
            continue;
        }
        let line = line_through(ctx, p, r).expect("distinct points");
        seen.extend(line.points().iter().copied());
        if line.points().iter().all(|x| set.contains(x)) {
            out.push(line);
        }
    }
    out
}

/// Position of a point relative to P∞, ℓ∞ (X = Y, J = 0) and Σ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PointClass {
    Affine,
    /// ℓ∞ \ {P∞}
    LineAtInfinity,
    PInfinity,
    /// Σ∞ \ ℓ∞; for M_{a,b} these are the points of F \ B∞.
    OtherInfinite,
}

impl PointClass {
    pub fn of(p: &ProjPoint) -> Self {
        let [j, x, y, _] = p.coords();
        if !j.is_zero() {
            PointClass::Affine
        } else if *p == ProjPoint::P_INF {
            PointClass::PInfinity
        } else if x == y {
            PointClass::LineAtInfinity
        } else {
            PointClass::OtherInfinite
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PointClass::Affine => "affine",
            PointClass::LineAtInfinity => "l_inf_minus_p_inf",
            PointClass::PInfinity => "p_inf",
            PointClass::OtherInfinite => "f_minus_b_inf",
        }
    }
}

/// Line counts for one class of points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCensus {
    pub class: PointClass,
    pub points: usize,
    /// number of lines through a point ↦ number of such points
    pub lines: BTreeMap<usize, usize>,
    /// the same, counting only lines not contained in Σ∞
    pub affine_lines: BTreeMap<usize, usize>,
    /// points whose lines are all contained in one plane
    pub coplanar: usize,
}

/// Check of the planes x + y = c carrying the affine lines through ℓ∞.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCheck {
    pub points_checked: usize,
    pub lines_checked: usize,
    pub ok: bool,
}

/// Per-point line counts grouped by [`PointClass`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub classes: Vec<ClassCensus>,
    pub planes: Option<PlaneCheck>,
}

impl CensusReport {
    pub fn class(&self, class: PointClass) -> Option<&ClassCensus> {
        self.classes.iter().find(|c| c.class == class)
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hist = |m: &BTreeMap<usize, usize>| {
            let v: Vec<String> = m.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            format!("{{{}}}", v.join(","))
        };
        for c in &self.classes {
            let n = c.class.name();
            writeln!(f, "{n}.points={}", c.points)?;
            writeln!(f, "{n}.lines={}", hist(&c.lines))?;
            writeln!(f, "{n}.affine_lines={}", hist(&c.affine_lines))?;
            writeln!(f, "{n}.coplanar={}", c.coplanar)?;
        }
        if let Some(p) = &self.planes {
            writeln!(f, "planes.points={}", p.points_checked)?;
            writeln!(f, "planes.lines={}", p.lines_checked)?;
            writeln!(f, "planes.ok={}", p.ok)?;
        }
        Ok(())
    }
}

fn lines_coplanar(ctx: &FieldCtx, p: &ProjPoint, lines: &[Line]) -> bool {
    if lines.len() <= 1 {
        return true;
    }
    let other = |l: &Line| *l.points().iter().find(|x| *x != p).expect("line has q²+1 points");
    let Some(h) = Hyperplane::through(ctx, p, &other(&lines[0]), &other(&lines[1])) else {
        return false;
    };
    lines.iter().all(|l| l.points().iter().all(|x| h.contains(ctx, x)))
}

/// The plane x + y = c expected to carry the affine lines of B_{a,b}
/// through the point (0,1,1,w) of ℓ∞: c = 0 at M∞ = (0,1,1,0) and
/// c = 1/(m^q Tr(b)) at L^m∞ = (0,m,m,1), i.e. c = w^q / Tr(b).
pub fn expected_plane(ctx: &FieldCtx, params: &VarietyParams, p: &ProjPoint) -> Option<Hyperplane> {
    let [j, x, y, w] = p.coords();
    if !j.is_zero() || x != Fe::ONE || y != Fe::ONE {
        return None;
    }
    let c = ctx.mul(ctx.frobenius(w), ctx.inv_nonzero(ctx.trace(params.b)));
    Hyperplane::new(ctx, [c, Fe::ONE, Fe::ONE, Fe::ZERO]).ok()
}

struct PointLines {
    class: PointClass,
    total: usize,
    affine: usize,
    coplanar: bool,
    planes: Option<(usize, bool)>,
}

/// Line census over every point of `set`. For sets built from parameters
/// the affine lines through each point of ℓ∞ are also tested against the
/// plane returned by [`expected_plane`].
pub fn line_census(ctx: &FieldCtx, set: &PointSet) -> CensusReport {
    let per_point: Vec<PointLines> = set
        .points()
        .par_iter()
        .map(|p| {
            let lines = lines_through_unchecked(ctx, set, p);
            let affine: Vec<&Line> = lines.iter().filter(|l| !l.at_infinity()).collect();
            let class = PointClass::of(p);
            let planes = match (set.params(), class) {
                (Some(params), PointClass::LineAtInfinity) => {
                    let h = expected_plane(ctx, &params, p).expect("point of l_inf");
                    let ok = affine.iter().all(|l| l.points().iter().all(|x| h.contains(ctx, x)));
                    Some((affine.len(), ok))
                }
                _ => None,
            };
            PointLines { class, total: lines.len(), affine: affine.len(), coplanar: lines_coplanar(ctx, p, &lines), planes }
        })
        .collect();

    let mut classes: BTreeMap<PointClass, ClassCensus> = BTreeMap::new();
    let mut planes: Option<PlaneCheck> = None;
    for r in &per_point {
        let c = classes.entry(r.class).or_insert_with(|| ClassCensus {
            class: r.class,
            points: 0,
            lines: BTreeMap::new(),
            affine_lines: BTreeMap::new(),
            coplanar: 0,
        });
        c.points += 1;
        *c.lines.entry(r.total).or_insert(0) += 1;
        *c.affine_lines.entry(r.affine).or_insert(0) += 1;
        c.coplanar += r.coplanar as usize;
        if let Some((n, ok)) = r.planes {
            let pc = planes.get_or_insert(PlaneCheck { points_checked: 0, lines_checked: 0, ok: true });
            pc.points_checked += 1;
            pc.lines_checked += n;
            pc.ok &= ok;
        }
    }
    CensusReport { classes: classes.into_values().collect(), planes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FieldCtx {
        FieldCtx::new(1).unwrap()
    }

    #[test]
    fn params_validation() {
        let f = gf4();
        assert!(VarietyParams::new(&f, Fe::ZERO, Fe(2)).is_err());
        assert!(VarietyParams::new(&f, Fe::ONE, Fe::ONE).is_err());
        assert!(VarietyParams::new(&f, Fe::ONE, Fe(9)).is_err());
        assert!(VarietyParams::new(&f, Fe::ONE, Fe(2)).is_ok());
        assert_eq!(VarietyParams::all(&f).len(), 6);
        assert_eq!(VarietyParams::all(&FieldCtx::new(2).unwrap()).len(), 180);
    }

    #[test]
    fn homogeneous_and_affine_forms_agree() {
        for k in 1..=2 {
            let f = FieldCtx::new(k).unwrap();
            let p = VarietyParams::new(&f, f.omega(), f.eta()).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    for z in f.elements() {
                        let v = affine_value(&f, &p, x, y, z);
                        assert!(f.in_subfield(v));
                        assert_eq!(bab_form(&f, &p, &[Fe::ONE, x, y, z]), v);
                    }
                }
            }
        }
    }

    #[test]
    fn bab_small_facts() {
        let f = gf4();
        let p = VarietyParams::new(&f, Fe::ONE, f.omega()).unwrap();
        let b = build_bab(&f, &p);
        assert!(b.contains(&ProjPoint::ORIGIN));
        assert_eq!(b.affine_points().count(), 32);
        // B ∩ Σ∞ = ℓ∞
        let l = line_through(&f, &ProjPoint::P_INF, &ProjPoint::new(&f, [Fe(0), Fe(1), Fe(1), Fe(0)]).unwrap())
            .unwrap();
        let inf: Vec<ProjPoint> = b.infinite_points().copied().collect();
        assert_eq!(inf, l.points());
    }

    #[test]
    fn affine_part_equals_trace_solutions() {
        // Independent route: z ranges over the solutions of Tr(z) = t.
        let f = FieldCtx::new(2).unwrap();
        for p in VarietyParams::all(&f).into_iter().step_by(37) {
            let mut expected = Vec::new();
            for x in f.elements() {
                for y in f.elements() {
                    let t = f.trace(f.mul(p.a(), f.sq(x) + f.sq(y))) + f.mul(f.trace(p.b()), f.norm(x) + f.norm(y));
                    for z in f.solve_trace(t).unwrap() {
                        expected.push(ProjPoint::affine(x, y, z));
                    }
                }
            }
            expected.sort();
            let b = build_bab(&f, &p);
            assert_eq!(b.affine_points().copied().collect::<Vec<_>>(), expected);
        }
    }

    #[test]
    fn bab_matches_exhaustive_filter() {
        let f = gf4();
        for p in VarietyParams::all(&f) {
            let brute: Vec<ProjPoint> = enumerate_points(&f).filter(|x| bab_form(&f, &p, &x.coords()).is_zero()).collect();
            assert_eq!(build_bab(&f, &p).points(), &brute[..]);
        }
    }

    #[test]
    fn cone_and_mab_sizes() {
        let f = gf4();
        let cone = build_cone_f(&f);
        assert_eq!(cone.len(), 13);
        assert!(cone.contains(&ProjPoint::P_INF));
        for p in VarietyParams::all(&f) {
            let m = build_mab(&f, &p);
            assert_eq!(m.len(), 45);
            assert!(m.points().iter().all(|x| in_mab(&f, &p, x)));
            assert_eq!(m.infinite_points().copied().collect::<Vec<_>>(), cone.points());
        }
        let f = FieldCtx::new(2).unwrap();
        assert_eq!(build_cone_f(&f).len(), 5 * 16 + 1);
    }

    #[test]
    fn spectrum_edge_cases() {
        let f = gf4();
        let s = hyperplane_spectrum(&f, &[]);
        assert_eq!(s, BTreeMap::from([(0, 85)]));
        let h = build_hermitian_surface(&f);
        assert_eq!(h.len(), 45);
        assert!(is_quasi_hermitian(&f, &h).quasi_hermitian);
    }

    #[test]
    fn random_set_is_not_quasi_hermitian() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let f = gf4();
        let all: Vec<ProjPoint> = enumerate_points(&f).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let pick: Vec<ProjPoint> = all.choose_multiple(&mut rng, 45).copied().collect();
            let r = is_quasi_hermitian(&f, &PointSet::generic(pick));
            assert_eq!(r.size, 45);
            assert!(!r.quasi_hermitian);
        }
    }

    #[test]
    fn lines_through_requires_membership() {
        let f = gf4();
        let p = VarietyParams::new(&f, Fe::ONE, Fe(2)).unwrap();
        let b = build_bab(&f, &p);
        let outside = enumerate_points(&f).find(|x| !b.contains(x)).unwrap();
        assert!(matches!(lines_in_set_through(&f, &b, &outside), Err(Error::PointNotInSet(_))));
        let lines = lines_in_set_through(&f, &b, &ProjPoint::P_INF).unwrap();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].at_infinity());
    }

    #[test]
    fn census_of_a_single_line() {
        let f = gf4();
        let l = line_through(&f, &ProjPoint::ORIGIN, &ProjPoint::affine(Fe(1), Fe(2), Fe(3))).unwrap();
        let set = PointSet::generic(l.points().to_vec());
        let r = line_census(&f, &set);
        for c in &r.classes {
            assert_eq!(c.lines, BTreeMap::from([(1, c.points)]));
        }
        assert_eq!(r.classes.iter().map(|c| c.points).sum::<usize>(), 5);
        assert!(r.planes.is_none());
    }

    #[test]
    fn bab_census_q2() {
        let f = gf4();
        let p = VarietyParams::new(&f, Fe::ONE, Fe(2)).unwrap();
        let r = line_census(&f, &build_bab(&f, &p));
        assert_eq!(r.class(PointClass::Affine).unwrap().lines, BTreeMap::from([(1, 32)]));
        assert_eq!(r.class(PointClass::LineAtInfinity).unwrap().lines, BTreeMap::from([(3, 4)]));
        assert_eq!(r.class(PointClass::LineAtInfinity).unwrap().affine_lines, BTreeMap::from([(2, 4)]));
        assert_eq!(r.class(PointClass::PInfinity).unwrap().lines, BTreeMap::from([(1, 1)]));
        assert!(r.planes.unwrap().ok);
    }
}
