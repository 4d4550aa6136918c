//! Arithmetic in GF(q²), q = 2^k, with the subfield GF(q) kept as the set of
//! Frobenius-fixed elements.
//!
//! Elements are stored as their polynomial-basis bit pattern over GF(2).
//! Multiplication goes through discrete log/exp tables built from a primitive
//! modulus, which is cheap at desk scale (at most 256 elements).

use std::fmt;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest primitive polynomial over GF(2) for each supported degree 2k,
/// encoded with bit i holding the coefficient of t^i.
const PRIMITIVE_MODULI: [(u32, u32); 4] = [(2, 0b111), (4, 0b1_0011), (6, 0b100_0011), (8, 0b1_0001_1101)];

/// An element of GF(q²) in polynomial-basis encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fe(pub u8);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for Fe {
    type Output = Fe;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Fe) -> Fe {
        Fe(self.0 ^ rhs.0)
    }
}

impl AddAssign for Fe {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Fe) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field tower GF(2) ⊂ GF(q) ⊂ GF(q²) together with the fixed elements
/// used throughout: a primitive element `omega`, a trace-one element `eta`
/// generating the coset representatives, and `epsilon`, the smallest
/// primitive element of trace one (the canonical second parameter).
#[derive(Clone)]
pub struct FieldCtx {
    k: u32,
    q: u32,
    size: u32,
    modulus: u32,
    exp: Vec<u8>,
    log: Vec<u16>,
    frob: Vec<u8>,
    trace: Vec<u8>,
    norm: Vec<u8>,
    sub: Vec<Fe>,
    omega: Fe,
    eta: Fe,
    epsilon: Fe,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("omega", &self.omega)
            .field("eta", &self.eta)
            .field("epsilon", &self.epsilon)
            .finish()
    }
}

/// Carry-less product of two GF(2) polynomials.
fn clmul(mut a: u32, mut b: u32) -> u32 {
    let mut r = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    r
}

fn degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

/// Remainder of `a` modulo `m` in GF(2)[t].
pub(crate) fn poly_rem(mut a: u32, m: u32) -> u32 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

/// Irreducibility by trial division against every polynomial of degree
/// 1..=deg/2.
pub(crate) fn is_irreducible(p: u32) -> bool {
    let d = degree(p);
    if d < 1 {
        return false;
    }
    for f in 2u32..(1 << (d / 2 + 1)) {
        if degree(f) >= 1 && degree(f) <= d / 2 && poly_rem(p, f) == 0 {
            return false;
        }
    }
    true
}

/// Multiplicative order of the class of t modulo `p` (p assumed irreducible).
#[cfg(test)]
pub(crate) fn order_of_t(p: u32) -> u32 {
    let d = degree(p);
    let mut e = 2u32;
    let mut n = 1;
    while e != 1 {
        e = poly_rem(clmul(e, 2), p);
        n += 1;
        if n > (1 << d) {
            return 0;
        }
    }
    n
}

impl FieldCtx {
    /// Builds GF(q²) with q = 2^k for 1 ≤ k ≤ 4.
    pub fn new(k: u32) -> Result<Self> {
        if !(1..=4).contains(&k) {
            return Err(Error::FieldDegree(k));
        }
        let n = 2 * k;
        let modulus = PRIMITIVE_MODULI
            .iter()
            .find(|(d, _)| *d == n)
            .map(|(_, m)| *m)
            .expect("modulus table covers 2k for k in 1..=4");
        assert!(is_irreducible(modulus), "modulus {modulus} is reducible");
        let q = 1u32 << k;
        let size = q * q;
        let group = (size - 1) as usize;

        let mut exp = vec![0u8; 2 * group];
        let mut log = vec![0u16; size as usize];
        let mut e = 1u32;
        for i in 0..group {
            if i > 0 {
                assert!(e != 1, "modulus {modulus} is not primitive");
            }
            exp[i] = e as u8;
            log[e as usize] = i as u16;
            e = poly_rem(clmul(e, 2), modulus);
        }
        assert_eq!(e, 1, "modulus {modulus} is not primitive");
        for i in 0..group {
            exp[group + i] = exp[i];
        }

        let mut ctx = FieldCtx {
            k,
            q,
            size,
            modulus,
            exp,
            log,
            frob: vec![0; size as usize],
            trace: vec![0; size as usize],
            norm: vec![0; size as usize],
            sub: Vec::new(),
            omega: Fe(2),
            eta: Fe::ZERO,
            epsilon: Fe::ZERO,
        };
        for x in 0..size {
            let x = Fe(x as u8);
            let fx = ctx.pow(x, q as u64);
            ctx.frob[x.0 as usize] = fx.0;
            ctx.trace[x.0 as usize] = (x + fx).0;
            ctx.norm[x.0 as usize] = ctx.mul(x, fx).0;
        }
        ctx.sub = ctx.elements().filter(|&x| ctx.in_subfield(x)).collect();
        ctx.eta = ctx
            .elements()
            .find(|&x| ctx.trace(x) == Fe::ONE)
            .expect("trace is onto GF(q)");
        ctx.epsilon = ctx
            .elements()
            .find(|&x| ctx.trace(x) == Fe::ONE && ctx.is_primitive(x))
            .expect("some primitive element has trace one");
        Ok(ctx)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The subfield order q.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// The field order q².
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn omega(&self) -> Fe {
        self.omega
    }

    pub fn eta(&self) -> Fe {
        self.eta
    }

    pub fn epsilon(&self) -> Fe {
        self.epsilon
    }

    /// Checked conversion from an integer encoding.
    pub fn element(&self, bits: u32) -> Result<Fe> {
        if bits < self.size {
            Ok(Fe(bits as u8))
        } else {
            Err(Error::ElementRange { bits, order: self.size })
        }
    }

    /// All q² elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.size).map(|x| Fe(x as u8))
    }

    /// Nonzero elements in encoding order.
    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.size).map(|x| Fe(x as u8))
    }

    /// GF(q) as a sorted list of its q elements inside GF(q²).
    pub fn subfield(&self) -> &[Fe] {
        &self.sub
    }

    /// Elements of norm one, sorted (q+1 of them).
    pub fn norm_one(&self) -> Vec<Fe> {
        self.nonzero().filter(|&x| self.norm(x) == Fe::ONE).collect()
    }

    #[inline]
    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        x + y
    }

    #[inline]
    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        if x.0 == 0 || y.0 == 0 {
            return Fe::ZERO;
        }
        let i = self.log[x.0 as usize] as usize + self.log[y.0 as usize] as usize;
        Fe(self.exp[i])
    }

    #[inline]
    pub fn sq(&self, x: Fe) -> Fe {
        self.mul(x, x)
    }

    pub fn inv(&self, x: Fe) -> Result<Fe> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nonzero(x))
    }

    /// Inverse of an element known to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, x: Fe) -> Fe {
        debug_assert!(!x.is_zero());
        let group = (self.size - 1) as usize;
        let l = self.log[x.0 as usize] as usize;
        Fe(self.exp[(group - l) % group])
    }

    pub fn div(&self, x: Fe, y: Fe) -> Result<Fe> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Fe, n: u64) -> Fe {
        if n == 0 {
            return Fe::ONE;
        }
        if x.is_zero() {
            return Fe::ZERO;
        }
        let group = (self.size - 1) as u64;
        let l = self.log[x.0 as usize] as u64;
        Fe(self.exp[((l * (n % group)) % group) as usize])
    }

    /// Discrete logarithm to base omega.
    pub fn log_omega(&self, x: Fe) -> Option<u32> {
        (!x.is_zero()).then(|| self.log[x.0 as usize] as u32)
    }

    pub fn omega_pow(&self, i: u32) -> Fe {
        Fe(self.exp[(i % (self.size - 1)) as usize])
    }

    pub fn is_primitive(&self, x: Fe) -> bool {
        match self.log_omega(x) {
            Some(l) => gcd(l, self.size - 1) == 1,
            None => false,
        }
    }

    /// x ↦ x^q.
    #[inline]
    pub fn frobenius(&self, x: Fe) -> Fe {
        Fe(self.frob[x.0 as usize])
    }

    /// The automorphism x ↦ x^(2^j), j taken modulo 2k.
    #[inline]
    pub fn aut(&self, x: Fe, j: u32) -> Fe {
        let j = j % (2 * self.k);
        if j == 0 || x.is_zero() {
            return x;
        }
        let group = (self.size - 1) as usize;
        let l = self.log[x.0 as usize] as usize;
        Fe(self.exp[(l << j) % group])
    }

    /// Square root (squaring is a bijection in characteristic 2).
    pub fn sqrt(&self, x: Fe) -> Fe {
        self.aut(x, 2 * self.k - 1)
    }

    /// Tr(x) = x + x^q, an element of GF(q).
    #[inline]
    pub fn trace(&self, x: Fe) -> Fe {
        Fe(self.trace[x.0 as usize])
    }

    /// N(x) = x^(q+1), an element of GF(q).
    #[inline]
    pub fn norm(&self, x: Fe) -> Fe {
        Fe(self.norm[x.0 as usize])
    }

    /// Absolute trace GF(q²) → GF(2).
    pub fn abs_trace(&self, x: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut y = x;
        for _ in 0..2 * self.k {
            acc += y;
            y = self.sq(y);
        }
        acc
    }

    #[inline]
    pub fn in_subfield(&self, x: Fe) -> bool {
        self.frobenius(x) == x
    }

    /// All x with x^q + x = beta, for beta in GF(q). The result is the coset
    /// beta·eta + GF(q), sorted.
    pub fn solve_trace(&self, beta: Fe) -> Result<Vec<Fe>> {
        if !self.in_subfield(beta) {
            return Err(Error::NotInSubfield(beta.bits()));
        }
        let base = self.mul(beta, self.eta);
        let mut out: Vec<Fe> = self.sub.iter().map(|&s| base + s).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// All x with x^(q+1) = beta, for beta in GF(q)*. There are q+1 of them.
    pub fn solve_norm(&self, beta: Fe) -> Result<Vec<Fe>> {
        if beta.is_zero() {
            return Err(Error::ZeroNorm);
        }
        if !self.in_subfield(beta) {
            return Err(Error::NotInSubfield(beta.bits()));
        }
        // beta = omega^(l(q+1)); the solutions are omega^(l + j(q-1)).
        let l = self.log[beta.0 as usize] as u32 / (self.q + 1);
        let mut out: Vec<Fe> = (0..=self.q).map(|j| self.omega_pow(l + j * (self.q - 1))).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Some x with x^(q-1) = t, when t has norm one.
    pub fn root_q_minus_1(&self, t: Fe) -> Option<Fe> {
        let l = self.log_omega(t)?;
        (l % (self.q - 1) == 0).then(|| self.omega_pow(l / (self.q - 1)))
    }

    /// Roots of x² + b·x + c, sorted.
    pub fn solve_quadratic(&self, b: Fe, c: Fe) -> Vec<Fe> {
        // Exhaustive over at most 256 elements.
        self.elements().filter(|&x| self.sq(x) + self.mul(b, x) + c == Fe::ZERO).collect()
    }

    /// The coset representatives C = { s·eta : s ∈ GF(q) }, ordered by s.
    pub fn coset_reps(&self) -> Vec<Fe> {
        self.sub.iter().map(|&s| self.mul(s, self.eta)).collect()
    }

    /// The unique element of C in the same coset of GF(q) as x.
    pub fn coset_rep(&self, x: Fe) -> Fe {
        self.mul(self.trace(x), self.eta)
    }

    /// Position of a GF(q) element among the sorted subfield elements; this
    /// is the symbol alphabet [0, q) used for exported arrays.
    pub fn subfield_index(&self, s: Fe) -> Option<usize> {
        self.sub.binary_search(&s).ok()
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FieldCtx {
        FieldCtx::new(1).unwrap()
    }

    /// Schoolbook multiply-and-reduce, independent of the log tables.
    fn slow_mul(ctx: &FieldCtx, a: Fe, b: Fe) -> Fe {
        Fe(poly_rem(clmul(a.bits(), b.bits()), ctx.modulus()) as u8)
    }

    #[test]
    fn degree_out_of_range() {
        assert!(matches!(FieldCtx::new(0), Err(Error::FieldDegree(0))));
        assert!(FieldCtx::new(5).is_err());
    }

    #[test]
    fn gf4_constants() {
        let f = gf4();
        assert_eq!(f.modulus(), 0b111);
        let w = f.omega();
        assert_eq!(w, Fe(2));
        assert_eq!(f.mul(w, w), w + Fe::ONE);
        assert_eq!(f.eta(), w);
        assert_eq!(f.epsilon(), w);
        assert_eq!(f.frobenius(w), w + Fe::ONE);
        assert_eq!(f.trace(w), Fe::ONE);
        assert_eq!(f.trace(Fe::ONE), Fe::ZERO);
        assert_eq!(f.norm(w), Fe::ONE);
        assert!(!f.in_subfield(w));
        assert_eq!(f.solve_trace(Fe::ONE).unwrap(), vec![w, w + Fe::ONE]);
        assert_eq!(f.solve_norm(Fe::ONE).unwrap(), vec![Fe(1), Fe(2), Fe(3)]);
        assert_eq!(f.coset_reps(), vec![Fe::ZERO, w]);
    }

    #[test]
    fn moduli_are_smallest_primitive() {
        for k in 1..=4 {
            let n = 2 * k;
            let smallest = ((1u32 << n)..(1 << (n + 1)))
                .find(|&p| is_irreducible(p) && order_of_t(p) == (1 << n) - 1)
                .unwrap();
            assert_eq!(FieldCtx::new(k).unwrap().modulus(), smallest);
        }
    }

    #[test]
    fn irreducibility_of_degree_two() {
        // t², t²+1, t²+t, t²+t+1
        let irr: Vec<u32> = (4..8).filter(|&p| is_irreducible(p)).collect();
        assert_eq!(irr, vec![7]);
    }

    #[test]
    fn table_mul_matches_schoolbook() {
        for k in 1..=2 {
            let f = FieldCtx::new(k).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(f.mul(x, y), slow_mul(&f, x, y));
                }
            }
        }
    }

    #[test]
    fn field_identities() {
        for k in 1..=4 {
            let f = FieldCtx::new(k).unwrap();
            let order = (f.size() - 1) as u64;
            assert_eq!(f.inv(Fe::ONE).unwrap(), Fe::ONE);
            assert!(matches!(f.inv(Fe::ZERO), Err(Error::DivisionByZero)));
            for x in f.elements() {
                assert_eq!(x + x, Fe::ZERO);
                assert_eq!(f.frobenius(f.frobenius(x)), x);
                assert!(f.in_subfield(f.trace(x)));
                assert!(f.in_subfield(f.norm(x)));
                assert_eq!(f.in_subfield(x), f.trace(x) == Fe::ZERO);
                assert_eq!(f.sq(f.sqrt(x)), x);
                if !x.is_zero() {
                    assert_eq!(f.pow(x, order), Fe::ONE);
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), Fe::ONE);
                }
            }
            assert_eq!(f.subfield().len() as u32, f.q());
            assert_eq!(f.norm_one().len() as u32, f.q() + 1);
            let mut orders = std::collections::BTreeSet::new();
            let mut e = Fe::ONE;
            for _ in 0..order {
                e = f.mul(e, f.omega());
                orders.insert(e);
            }
            assert_eq!(orders.len() as u64, order);
            assert_eq!(f.frobenius(f.eta()) + f.eta(), Fe::ONE);
            assert!(!f.in_subfield(f.eta()));
            assert!(f.is_primitive(f.epsilon()));
            assert_eq!(f.trace(f.epsilon()), Fe::ONE);
        }
    }

    #[test]
    fn frobenius_is_automorphism_exhaustive_small() {
        for k in 1..=2 {
            let f = FieldCtx::new(k).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(f.frobenius(x + y), f.frobenius(x) + f.frobenius(y));
                    assert_eq!(f.frobenius(f.mul(x, y)), f.mul(f.frobenius(x), f.frobenius(y)));
                }
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism_sampled() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in 3..=4 {
            let f = FieldCtx::new(k).unwrap();
            for _ in 0..10_000 {
                let x = Fe(rng.gen_range(0..f.size()) as u8);
                let y = Fe(rng.gen_range(0..f.size()) as u8);
                assert_eq!(f.frobenius(x + y), f.frobenius(x) + f.frobenius(y));
                assert_eq!(f.frobenius(f.mul(x, y)), f.mul(f.frobenius(x), f.frobenius(y)));
            }
        }
    }

    #[test]
    fn trace_kernel_and_norm_fibres() {
        for k in 1..=2 {
            let f = FieldCtx::new(k).unwrap();
            let kernel: Vec<Fe> = f.elements().filter(|&x| f.trace(x) == Fe::ZERO).collect();
            assert_eq!(kernel, f.subfield());
            for &beta in f.subfield() {
                let sols: Vec<Fe> = f.elements().filter(|&x| f.trace(x) == beta).collect();
                assert_eq!(f.solve_trace(beta).unwrap(), sols);
                assert_eq!(sols.len() as u32, f.q());
                if !beta.is_zero() {
                    let sols: Vec<Fe> = f.elements().filter(|&x| f.norm(x) == beta).collect();
                    assert_eq!(f.solve_norm(beta).unwrap(), sols);
                    assert_eq!(sols.len() as u32, f.q() + 1);
                }
            }
        }
        let f = FieldCtx::new(2).unwrap();
        for &beta in f.subfield().iter().filter(|b| !b.is_zero()) {
            assert_eq!(f.solve_norm(beta).unwrap().len(), 5);
        }
    }

    #[test]
    fn solver_domain_errors() {
        let f = gf4();
        assert!(matches!(f.solve_norm(Fe::ZERO), Err(Error::ZeroNorm)));
        assert!(matches!(f.solve_norm(Fe(2)), Err(Error::NotInSubfield(2))));
        assert!(matches!(f.solve_trace(Fe(3)), Err(Error::NotInSubfield(3))));
        assert!(f.element(4).is_err());
    }

    #[test]
    fn coset_reps_are_a_transversal() {
        for k in 1..=4 {
            let f = FieldCtx::new(k).unwrap();
            let c = f.coset_reps();
            assert_eq!(c[0], Fe::ZERO);
            let mut traces: Vec<Fe> = c.iter().map(|&x| f.trace(x)).collect();
            traces.sort_unstable();
            assert_eq!(traces, f.subfield());
            for x in f.elements() {
                let r = f.coset_rep(x);
                assert!(c.contains(&r));
                assert!(f.in_subfield(r + x));
            }
        }
    }

    #[test]
    fn trace_nonzero_off_subfield() {
        let f = FieldCtx::new(3).unwrap();
        for b in f.elements().filter(|&b| !f.in_subfield(b)) {
            assert_ne!(f.trace(b), Fe::ZERO);
        }
    }

    #[test]
    fn quadratic_and_power_roots() {
        let f = FieldCtx::new(2).unwrap();
        for t in f.norm_one() {
            let e = f.root_q_minus_1(t).unwrap();
            assert_eq!(f.pow(e, (f.q() - 1) as u64), t);
        }
        assert!(f.root_q_minus_1(f.omega()).is_none());
        for r in f.solve_quadratic(Fe::ONE, f.eta()) {
            assert_eq!(f.sq(r) + r + f.eta(), Fe::ZERO);
        }
    }

    #[test]
    fn aut_composes() {
        let f = FieldCtx::new(2).unwrap();
        for x in f.elements() {
            assert_eq!(f.aut(x, 1), f.sq(x));
            assert_eq!(f.aut(x, f.k()), f.frobenius(x));
            assert_eq!(f.aut(f.aut(x, 3), 1), x);
        }
    }
}
