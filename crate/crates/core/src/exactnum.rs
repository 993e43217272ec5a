//! Exact arithmetic in Q and in cyclotomic fields Q(zeta_n).
//!
//! A [`Cyc`] stores a polynomial in zeta_n of degree < phi(n), reduced modulo
//! the n-th cyclotomic polynomial. The complex realization is always the
//! embedding zeta_n -> e^{2 pi i / n}. The working field for all q-series
//! coefficients is Q(zeta_12), which contains eps = e^{2 pi i/3}, i, and
//! sqrt(3) = -i(2 eps + 1); larger conductors are used by the number-theoretic
//! kernels (Gauss sums, lattice character sums).

use crate::ball::{CBall, Ctx};
use num::{BigInt, BigRational, One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

pub type Rat = BigRational;
pub type Int = BigInt;

/// Hard cap on conductors; coercion beyond this is an error.
pub const MAX_CONDUCTOR: u32 = 120;

#[derive(Debug, thiserror::Error)]
pub enum NumError {
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u32),
    #[error("conductor {0} exceeds the configured maximum {1}")]
    ConductorTooLarge(u32, u32),
    #[error("no square root of {0} in the working cyclotomic field")]
    NoSquareRoot(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(Int::from(n))
}

/// Euler phi.
pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Dense integer coefficients of the n-th cyclotomic polynomial (ascending).
fn cyclotomic_poly(n: u32) -> Vec<Int> {
    // x^n - 1 = prod_{d|n} Phi_d; divide out the proper divisors.
    let mut num = vec![Int::zero(); n as usize + 1];
    num[0] = -Int::one();
    num[n as usize] = Int::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_cached(d);
            num = poly_div_exact_int(&num, &phi_d);
        }
    }
    num
}

static CYC_CACHE: Lazy<Mutex<HashMap<u32, Vec<Int>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn cyclotomic_cached(n: u32) -> Vec<Int> {
    if let Some(p) = CYC_CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    let p = cyclotomic_poly(n);
    CYC_CACHE.lock().unwrap().insert(n, p.clone());
    p
}

/// Exact division of integer polynomials (ascending coefficients).
fn poly_div_exact_int(a: &[Int], b: &[Int]) -> Vec<Int> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    assert!(da >= db);
    let mut rem: Vec<Int> = a.to_vec();
    let mut q = vec![Int::zero(); da - db + 1];
    for k in (0..=(da - db)).rev() {
        let c = rem[k + db].clone() / &b[db]; // b monic in our uses
        if !c.is_zero() {
            for j in 0..=db {
                rem[k + j] -= &c * &b[j];
            }
        }
        q[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    q
}

/// Element of Q(zeta_n), reduced mod Phi_n.
#[derive(Clone)]
pub struct Cyc {
    n: u32,
    /// length phi(n); c[k] is the coefficient of zeta_n^k
    c: Vec<Rat>,
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for Cyc {}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", cyc_to_string(self))
    }
}

impl Cyc {
    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn zero(n: u32) -> Self {
        Cyc { n, c: vec![Rat::zero(); euler_phi(n) as usize] }
    }

    pub fn one(n: u32) -> Self {
        Self::from_rat_in(Rat::one(), n)
    }

    pub fn from_rat_in(q: Rat, n: u32) -> Self {
        let mut v = vec![Rat::zero(); euler_phi(n) as usize];
        v[0] = q;
        Cyc { n, c: v }
    }

    pub fn from_rat(q: Rat) -> Self {
        Self::from_rat_in(q, 12)
    }

    pub fn from_i64(k: i64) -> Self {
        Self::from_rat(rat_int(k))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// zeta_n as an element of Q(zeta_n).
    pub fn zeta(n: u32) -> Self {
        Self::root_of_unity(n, 1)
    }

    /// zeta_n^k in Q(zeta_n).
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let kk = k.rem_euclid(n as i64) as usize;
        let phi = euler_phi(n) as usize;
        let mut poly = vec![Rat::zero(); kk + 1];
        poly[kk] = Rat::one();
        Cyc { n, c: reduce_mod_phi(poly, n, phi) }
    }

    /// eps = e^{2 pi i / 3} in Q(zeta_12).
    pub fn eps() -> Self {
        Self::root_of_unity(12, 4)
    }

    /// i = sqrt(-1) in Q(zeta_12).
    pub fn i() -> Self {
        Self::root_of_unity(12, 3)
    }

    /// sqrt(3) = zeta_12 + zeta_12^{-1} in Q(zeta_12).
    pub fn sqrt3() -> Self {
        Self::root_of_unity(12, 1).add(&Self::root_of_unity(12, 11))
    }

    /// Coerce into Q(zeta_m) for n | m.
    pub fn coerce(&self, m: u32) -> Result<Cyc, NumError> {
        if m == self.n {
            return Ok(self.clone());
        }
        if m > MAX_CONDUCTOR {
            return Err(NumError::ConductorTooLarge(m, MAX_CONDUCTOR));
        }
        assert!(m % self.n == 0, "coerce: {} does not divide {}", self.n, m);
        let step = (m / self.n) as usize;
        let phi_m = euler_phi(m) as usize;
        let mut poly = vec![Rat::zero(); (self.c.len() - 1) * step + 1];
        for (k, coef) in self.c.iter().enumerate() {
            if !coef.is_zero() {
                poly[k * step] = coef.clone();
            }
        }
        Ok(Cyc { n: m, c: reduce_mod_phi(poly, m, phi_m) })
    }

    fn lift_pair(a: &Cyc, b: &Cyc) -> (Cyc, Cyc) {
        if a.n == b.n {
            return (a.clone(), b.clone());
        }
        // rationals re-express in any conductor without growing the field
        if let Some(q) = a.is_rational() {
            return (Cyc::from_rat_in(q, b.n), b.clone());
        }
        if let Some(q) = b.is_rational() {
            return (a.clone(), Cyc::from_rat_in(q, a.n));
        }
        let l = num::integer::lcm(a.n, b.n);
        (
            a.coerce(l).expect("conductor cap exceeded in arithmetic"),
            b.coerce(l).expect("conductor cap exceeded in arithmetic"),
        )
    }

    pub fn add(&self, o: &Cyc) -> Cyc {
        let (a, b) = Self::lift_pair(self, o);
        let c = a.c.iter().zip(b.c.iter()).map(|(x, y)| x + y).collect();
        Cyc { n: a.n, c }
    }

    pub fn sub(&self, o: &Cyc) -> Cyc {
        let (a, b) = Self::lift_pair(self, o);
        let c = a.c.iter().zip(b.c.iter()).map(|(x, y)| x - y).collect();
        Cyc { n: a.n, c }
    }

    pub fn neg(&self) -> Cyc {
        Cyc { n: self.n, c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, o: &Cyc) -> Cyc {
        let (a, b) = Self::lift_pair(self, o);
        let phi = a.c.len();
        let mut poly = vec![Rat::zero(); 2 * phi];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                poly[i + j] += x * y;
            }
        }
        Cyc { n: a.n, c: reduce_mod_phi(poly, a.n, phi) }
    }

    pub fn mul_rat(&self, q: &Rat) -> Cyc {
        Cyc { n: self.n, c: self.c.iter().map(|x| x * q).collect() }
    }

    pub fn inv(&self) -> Result<Cyc, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero(self.n));
        }
        // Extended Euclid in Q[x] between self (as poly) and Phi_n.
        let phi: Vec<Rat> = cyclotomic_cached(self.n).iter().map(|z| Rat::from(z.clone())).collect();
        let a: Vec<Rat> = self.c.clone();
        let (g, s) = poly_ext_gcd(&a, &phi);
        // g is a nonzero constant (Phi_n irreducible over Q)
        assert_eq!(poly_deg(&g), 0, "cyclotomic inversion: gcd not constant");
        let ginv = g[0].recip();
        let inv_poly: Vec<Rat> = s.iter().map(|x| x * &ginv).collect();
        let phi_len = self.c.len();
        Ok(Cyc { n: self.n, c: reduce_mod_phi(inv_poly, self.n, phi_len) })
    }

    pub fn div(&self, o: &Cyc) -> Result<Cyc, NumError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Cyc, NumError> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut acc = Cyc::one(self.n);
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Complex conjugation: zeta -> zeta^{n-1}.
    pub fn conj(&self) -> Cyc {
        let mut acc = Cyc::zero(self.n);
        for (k, coef) in self.c.iter().enumerate() {
            if !coef.is_zero() {
                let term = Cyc::root_of_unity(self.n, -(k as i64)).mul_rat(coef);
                acc = acc.add(&term);
            }
        }
        acc
    }

    pub fn is_rational(&self) -> Option<Rat> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn equals(&self, o: &Cyc) -> bool {
        let (a, b) = Self::lift_pair(self, o);
        a.c == b.c
    }

    /// Embed via zeta_n -> e^{2 pi i/n} with a guaranteed error bound.
    pub fn embed(&self, ctx: &Ctx) -> CBall {
        let mut acc = ctx.from_int(0);
        for (k, coef) in self.c.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let t = Rat::new(Int::from(2 * k as i64), Int::from(self.n));
            let root = ctx.exp_i_pi_rat(&t);
            acc = ctx.add(&acc, &ctx.mul(&root, &ctx.from_rat(coef)));
        }
        acc
    }

    /// Square root in the field for the supported square classes:
    /// rational r with squarefree part in {1, -1, 3, -3} (needs 4 | n or 12 | n
    /// as appropriate). Sign convention: positive real part under the fixed
    /// embedding, ties broken by positive imaginary part.
    pub fn sqrt(&self) -> Result<Cyc, NumError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let cand = if let Some(r) = self.is_rational() {
            let (s, f) = rational_square_split(&r);
            let sq = Cyc::from_rat_in(s, self.n);
            let root_f = match f {
                1 => Cyc::one(self.n),
                -1 => Cyc::i().coerce(num::integer::lcm(self.n, 4))?,
                3 => Cyc::sqrt3().coerce(num::integer::lcm(self.n, 12))?,
                -3 => Cyc::i().mul(&Cyc::sqrt3()).coerce(num::integer::lcm(self.n, 12))?,
                _ => return Err(NumError::NoSquareRoot(format!("{:?}", self))),
            };
            sq.mul(&root_f)
        } else {
            return Err(NumError::NoSquareRoot(format!("{:?}", self)));
        };
        debug_assert!(cand.mul(&cand).equals(self));
        Ok(fix_sqrt_sign(cand))
    }
}

/// Pick the square root with positive real part (ties: positive imaginary).
fn fix_sqrt_sign(c: Cyc) -> Cyc {
    let ctx = Ctx::new(64);
    let v = c.embed(&ctx);
    let re = v.re.clone();
    let tol = v.rad.clone();
    if re.abs().cmp(&tol) == std::cmp::Ordering::Greater {
        if re.is_negative() {
            return c.neg();
        }
        return c;
    }
    // real part is (numerically) zero: use imaginary part
    if v.im.is_negative() {
        c.neg()
    } else {
        c
    }
}

/// r = s^2 * f with f squarefree (sign carried by f); returns (s, f) for small f.
fn rational_square_split(r: &Rat) -> (Rat, i64) {
    fn split_int(n: &Int) -> (Int, Int) {
        // n = s^2 * f, f squarefree, by trial division (inputs stay small here)
        let mut f = Int::one();
        let mut s = Int::one();
        let mut m = n.clone();
        let mut p = Int::from(2);
        while &p * &p <= m {
            let mut e = 0;
            while (&m % &p).is_zero() {
                m /= &p;
                e += 1;
            }
            if e % 2 == 1 {
                f *= &p;
            }
            for _ in 0..(e / 2) {
                s *= &p;
            }
            p += 1;
        }
        f *= &m;
        (s, f)
    }
    let sign = if r.is_negative() { -1 } else { 1 };
    let (sn, fn_) = split_int(&r.numer().abs());
    let (sd, fd) = split_int(&r.denom().abs());
    // r = sign * (sn/sd)^2 * fn/fd; make the squarefree part an integer: fn/fd = fn*fd / fd^2
    let s = Rat::new(sn, sd * &fd);
    let f = &fn_ * &fd;
    let f64v: i64 = f.to_string().parse().unwrap_or(i64::MAX);
    (s, sign * f64v)
}

fn poly_deg(p: &[Rat]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

/// Extended gcd over Q[x]: returns (g, s) with s*a = g mod b (we only need s).
fn poly_ext_gcd(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r0: Vec<Rat> = b.to_vec();
    let mut r1: Vec<Rat> = a.to_vec();
    let mut s0: Vec<Rat> = vec![Rat::zero()];
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while !r1.iter().all(|c| c.is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let db = poly_deg(b);
    let mut rem = a.to_vec();
    let mut da = poly_deg(&rem);
    if da < db || rem.iter().all(|c| c.is_zero()) {
        return (vec![Rat::zero()], rem);
    }
    let mut q = vec![Rat::zero(); da - db + 1];
    while da >= db && !rem.iter().all(|c| c.is_zero()) {
        let c = &rem[da] / &b[db];
        q[da - db] = c.clone();
        for j in 0..=db {
            let t = &c * &b[j];
            rem[da - db + j] -= t;
        }
        if rem[da].is_zero() {
            let nd = poly_deg(&rem);
            if nd == da {
                break;
            }
            da = nd;
        }
    }
    (q, rem)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// Reduce an ascending-coefficient polynomial in zeta_n modulo Phi_n to length phi(n).
fn reduce_mod_phi(mut poly: Vec<Rat>, n: u32, phi: usize) -> Vec<Rat> {
    let modulus = cyclotomic_cached(n);
    let deg = phi; // deg Phi_n
    while poly.len() > deg {
        let k = poly.len() - 1;
        let c = poly[k].clone();
        if !c.is_zero() {
            // zeta^k = zeta^{k-deg} * zeta^deg; zeta^deg = -sum_{j<deg} phi_j zeta^j
            for j in 0..deg {
                let m = Rat::from(modulus[j].clone()) * &c;
                poly[k - deg + j] -= m;
            }
        }
        poly.pop();
    }
    poly.resize(deg, Rat::zero());
    poly
}

/// Serialization form: conductor + "num/den" strings.
pub fn cyc_to_json(c: &Cyc) -> serde_json::Value {
    serde_json::json!({
        "conductor": c.n,
        "coeffs": c.c.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
    })
}

pub fn cyc_from_json(v: &serde_json::Value) -> Option<Cyc> {
    let n = v.get("conductor")?.as_u64()? as u32;
    let coeffs = v.get("coeffs")?.as_array()?;
    let mut c = Vec::with_capacity(coeffs.len());
    for s in coeffs {
        let s = s.as_str()?;
        let q = parse_rat(s)?;
        c.push(q);
    }
    if c.len() != euler_phi(n) as usize {
        return None;
    }
    Some(Cyc { n, c })
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    if let Some((a, b)) = s.split_once('/') {
        Some(Rat::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
    } else {
        Some(Rat::from(s.trim().parse::<Int>().ok()?))
    }
}

/// Short human-readable form, e.g. "1 - 2*z^3" with z = zeta_n.
pub fn cyc_to_string(c: &Cyc) -> String {
    if c.is_zero() {
        return "0".into();
    }
    if let Some(r) = c.is_rational() {
        return r.to_string();
    }
    let mut parts = Vec::new();
    for (k, coef) in c.c.iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        let term = if k == 0 {
            coef.to_string()
        } else if coef.is_one() {
            format!("z{}^{}", c.n, k)
        } else {
            format!("{}*z{}^{}", coef, c.n, k)
        };
        parts.push(term);
    }
    parts.join(" + ").replace("+ -", "- ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_satisfies_minimal_polynomial() {
        let e = Cyc::eps();
        let v = e.mul(&e).add(&e).add(&Cyc::one(12));
        assert!(v.is_zero(), "eps^2 + eps + 1 = {:?}", v);
    }

    #[test]
    fn two_eps_plus_one_squared_is_minus_three() {
        let e = Cyc::eps();
        let t = e.mul_rat(&rat_int(2)).add(&Cyc::one(12));
        let sq = t.mul(&t);
        assert!(sq.equals(&Cyc::from_i64(-3)));
    }

    #[test]
    fn zeta12_cubed_is_i() {
        let z = Cyc::zeta(12);
        let i = z.pow(3).unwrap();
        assert!(i.mul(&i).equals(&Cyc::from_i64(-1)));
        assert!(i.equals(&Cyc::i()));
    }

    #[test]
    fn sqrt3_identity() {
        // sqrt(3) = -i (2 eps + 1)
        let lhs = Cyc::sqrt3();
        let rhs = Cyc::i().neg().mul(&Cyc::eps().mul_rat(&rat_int(2)).add(&Cyc::one(12)));
        assert!(lhs.equals(&rhs));
        assert!(lhs.mul(&lhs).equals(&Cyc::from_i64(3)));
    }

    #[test]
    fn field_inverse() {
        let a = Cyc::eps().add(&Cyc::from_i64(2));
        let inv = a.inv().unwrap();
        assert!(a.mul(&inv).equals(&Cyc::one(12)));
        assert!(Cyc::zero(12).inv().is_err());
    }

    #[test]
    fn embed_eps() {
        let ctx = Ctx::new(64);
        let v = Cyc::eps().embed(&ctx);
        let (re, im, rad) = v.to_f64();
        assert!((re + 0.5).abs() < 1e-12 && (im - 0.8660254037844386).abs() < 1e-12);
        assert!(rad < 1e-15);
    }

    #[test]
    fn embed_sqrt3_is_real() {
        let ctx = Ctx::new(64);
        let v = Cyc::sqrt3().embed(&ctx);
        let (re, im, _) = v.to_f64();
        assert!((re - 1.7320508075688772).abs() < 1e-12);
        assert!(im.abs() < 1e-15);
    }

    #[test]
    fn conjugation_galois() {
        let a = Cyc::zeta(12).mul_rat(&rat(3, 2)).add(&Cyc::eps());
        let ctx = Ctx::new(96);
        let v1 = a.conj().embed(&ctx);
        let v2 = a.embed(&ctx);
        // conj(embed) == embed(conj)
        let ctxc = Ctx::new(96);
        let v2c = CBall { re: v2.re.clone(), im: v2.im.neg(), rad: v2.rad.clone() };
        assert!(ctxc.diff_upper(&v1, &v2c).to_f64() < 1e-25);
    }

    #[test]
    fn mixed_conductor_arithmetic() {
        let a = Cyc::zeta(8);
        let b = Cyc::zeta(12);
        let p = a.mul(&b); // lives in Q(zeta_24)
        assert_eq!(p.conductor(), 24);
        assert!(p.equals(&Cyc::root_of_unity(24, 3 + 2)));
    }

    #[test]
    fn sqrt_of_rationals() {
        let s = Cyc::from_i64(108).sqrt().unwrap();
        // 108 = 36*3 -> 6 sqrt(3)
        assert!(s.equals(&Cyc::sqrt3().mul_rat(&rat_int(6))));
        let m1 = Cyc::from_i64(-1).sqrt().unwrap();
        assert!(m1.equals(&Cyc::i()));
        assert!(Cyc::from_i64(2).sqrt().is_err());
    }
}
