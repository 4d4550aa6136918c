//! Brute-force reference computations checked against the library.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qherm_core::variety::{build_cone_f, build_hermitian_surface, build_mab, hyperplane_spectrum};
use qherm_core::{Fe, FieldCtx, VarietyParams};

/// Schoolbook GF(2^n) arithmetic, independent of the library's log tables.
struct Naive {
    n: u32,
    modulus: u32,
}

impl Naive {
    fn new(ctx: &FieldCtx) -> Self {
        Naive { n: 2 * ctx.k(), modulus: ctx.modulus() }
    }

    fn mul(&self, mut x: u32, mut y: u32) -> u32 {
        let mut acc = 0;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x;
            }
            y >>= 1;
            x <<= 1;
            if x >> self.n & 1 == 1 {
                x ^= self.modulus;
            }
        }
        acc
    }

    fn pow(&self, x: u32, e: u64) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, x))
    }

    fn q(&self) -> u64 {
        1 << (self.n / 2)
    }

    fn trace(&self, x: u32) -> u32 {
        x ^ self.pow(x, self.q())
    }

    fn norm(&self, x: u32) -> u32 {
        self.pow(x, self.q() + 1)
    }

    fn elements(&self) -> impl Iterator<Item = u32> {
        0..1u32 << self.n
    }
}

fn field(k: u32) -> FieldCtx {
    FieldCtx::new(k).unwrap()
}

#[test]
fn multiplication_matches_schoolbook() {
    for k in 1..=4 {
        let ctx = field(k);
        let nv = Naive::new(&ctx);
        for x in ctx.elements() {
            for y in ctx.elements() {
                assert_eq!(ctx.mul(x, y).bits(), nv.mul(x.bits(), y.bits()), "k={k} {x}*{y}");
            }
        }
    }
}

#[test]
fn trace_and_norm_match_powers() {
    for k in 1..=4 {
        let ctx = field(k);
        let nv = Naive::new(&ctx);
        for x in ctx.elements() {
            assert_eq!(ctx.trace(x).bits(), nv.trace(x.bits()));
            assert_eq!(ctx.norm(x).bits(), nv.norm(x.bits()));
            assert_eq!(ctx.frobenius(x).bits(), nv.pow(x.bits(), nv.q()));
        }
    }
}

#[test]
fn moduli_are_primitive() {
    for k in 1..=4 {
        let ctx = field(k);
        let nv = Naive::new(&ctx);
        let order = (1u64 << nv.n) - 1;
        // t generates the multiplicative group iff t^(order/p) ≠ 1 for every prime p | order
        let primes: Vec<u64> = (2..=order).filter(|p| order % p == 0 && (2..*p).all(|d| p % d != 0)).collect();
        assert_eq!(nv.pow(2, order), 1);
        for p in primes {
            assert_ne!(nv.pow(2, order / p), 1, "k={k} p={p}");
        }
    }
}

#[test]
fn distinguished_elements() {
    for k in 1..=4 {
        let ctx = field(k);
        let nv = Naive::new(&ctx);
        let eta = nv.elements().find(|&x| nv.trace(x) == 1).unwrap();
        assert_eq!(ctx.eta().bits(), eta);
        let order = (1u32 << nv.n) - 1;
        let primitive = |x: u32| (1..order).all(|e| nv.pow(x, e as u64) != 1);
        let eps = nv.elements().find(|&x| x != 0 && nv.trace(x) == 1 && primitive(x)).unwrap();
        assert_eq!(ctx.epsilon().bits(), eps);
        assert_eq!(ctx.omega(), Fe(2));
    }
}

/// Affine points of M_{a,b} counted straight from the defining equation.
fn naive_affine_count(nv: &Naive, a: u32, b: u32) -> usize {
    let tb = nv.trace(b);
    let mut n = 0;
    for x in nv.elements() {
        for y in nv.elements() {
            let s = nv.mul(x, x) ^ nv.mul(y, y);
            let rest = nv.trace(nv.mul(a, s)) ^ nv.mul(tb, nv.norm(x) ^ nv.norm(y));
            n += nv.elements().filter(|&z| nv.trace(z) ^ rest == 0).count();
        }
    }
    n
}

#[test]
fn affine_part_matches_equation() {
    for k in 1..=2 {
        let ctx = field(k);
        let nv = Naive::new(&ctx);
        for p in VarietyParams::all(&ctx).into_iter().step_by(7) {
            let m = build_mab(&ctx, &p);
            assert_eq!(m.affine_points().count(), naive_affine_count(&nv, p.a().bits(), p.b().bits()), "{p}");
        }
    }
}

#[test]
fn size_is_hermitian_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 1..=3 {
        let ctx = field(k);
        let q = ctx.q() as usize;
        let all = VarietyParams::all(&ctx);
        for p in all.choose_multiple(&mut rng, 5) {
            let m = build_mab(&ctx, p);
            assert_eq!(m.len(), (q * q + 1) * (q * q * q + 1), "q={q} {p}");
            assert_eq!(m.affine_points().count(), q.pow(5));
        }
    }
}

#[test]
fn infinite_part_is_the_cone() {
    for k in 1..=3 {
        let ctx = field(k);
        let q = ctx.q() as usize;
        let f = build_cone_f(&ctx);
        assert_eq!(f.len(), q * q * q + q * q + 1);
        let p = VarietyParams::new(&ctx, ctx.omega(), ctx.epsilon()).unwrap();
        let m = build_mab(&ctx, &p);
        let inf: Vec<_> = m.infinite_points().copied().collect();
        assert_eq!(inf.as_slice(), f.points());
    }
}

/// Every normalized vector of GF(q²)^4: first nonzero coordinate is 1.
fn normalized_vectors(nv: &Naive) -> Vec<[u32; 4]> {
    let size = 1u32 << nv.n;
    let mut out = Vec::new();
    for lead in 0..4 {
        for idx in 0..size.pow(3 - lead as u32) {
            let mut v = [0u32; 4];
            v[lead] = 1;
            let mut r = idx;
            for c in v.iter_mut().skip(lead + 1) {
                *c = r % size;
                r /= size;
            }
            out.push(v);
        }
    }
    out
}

fn naive_hermitian(nv: &Naive) -> Vec<[u32; 4]> {
    normalized_vectors(nv).into_iter().filter(|v| v.iter().fold(0, |acc, &c| acc ^ nv.norm(c)) == 0).collect()
}

/// Hyperplane spectrum counted from scratch over all covectors.
fn naive_spectrum(nv: &Naive, points: &[[u32; 4]]) -> BTreeMap<usize, usize> {
    let mut spec = BTreeMap::new();
    for h in normalized_vectors(nv) {
        let n = points.iter().filter(|p| (0..4).fold(0, |acc, i| acc ^ nv.mul(h[i], p[i])) == 0).count();
        *spec.entry(n).or_insert(0) += 1;
    }
    spec
}

#[test]
fn hermitian_surface_and_spectrum() {
    for (k, expected) in [(1, BTreeMap::from([(9, 40), (13, 45)])), (2, BTreeMap::from([(65, 3264), (81, 1105)]))] {
        let ctx = field(k);
        let nv = Naive::new(&ctx);
        let naive = naive_hermitian(&nv);
        let h = build_hermitian_surface(&ctx);
        let mut lib: Vec<[u32; 4]> = h.points().iter().map(|p| p.coords().map(|c| c.bits())).collect();
        let mut ours = naive.clone();
        lib.sort();
        ours.sort();
        assert_eq!(lib, ours);
        if k == 1 {
            assert_eq!(naive_spectrum(&nv, &naive), expected);
        }
        assert_eq!(hyperplane_spectrum(&ctx, h.points()), expected);
    }
}

#[test]
fn small_case_spectrum_matches_hermitian() {
    let ctx = field(1);
    let nv = Naive::new(&ctx);
    let herm = naive_spectrum(&nv, &naive_hermitian(&nv));
    for p in VarietyParams::all(&ctx) {
        let pts: Vec<[u32; 4]> = build_mab(&ctx, &p).points().iter().map(|x| x.coords().map(|c| c.bits())).collect();
        assert_eq!(naive_spectrum(&nv, &pts), herm, "{p}");
    }
}
