//! Fixed-point big-float arithmetic with explicit error balls.
//!
//! Values are dyadic rationals `m * 2^e` with arbitrary-precision mantissa.
//! A [`RBall`] is a real interval `[mid - rad, mid + rad]`; a [`CBall`] is a
//! complex disc `{z : |z - mid| <= rad}`. Every operation rounds the midpoint
//! to the working precision and accounts for the rounding in the radius, so
//! the enclosure property is maintained throughout.
//!
//! Elementary functions (`exp`, `log`, `atan`, complex powers) are computed by
//! argument reduction plus Taylor series with explicit tail bounds.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;

/// Dyadic rational `m * 2^e`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    pub m: BigInt,
    pub e: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn from_int(k: i64) -> Self {
        Dyadic { m: BigInt::from(k), e: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Number of bits in the mantissa.
    fn bits(&self) -> u64 {
        self.m.magnitude().bits()
    }

    /// `2^e` as a dyadic.
    pub fn pow2(e: i64) -> Self {
        Dyadic { m: BigInt::one(), e }
    }

    pub fn neg(&self) -> Self {
        Dyadic { m: -self.m.clone(), e: self.e }
    }

    pub fn abs(&self) -> Self {
        Dyadic { m: self.m.abs(), e: self.e }
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as u64;
        let b = &o.m << (o.e - e) as u64;
        Dyadic { m: a + b, e }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic { m: &self.m * &o.m, e: self.e + o.e }
    }

    pub fn mul_i64(&self, k: i64) -> Dyadic {
        Dyadic { m: &self.m * k, e: self.e }
    }

    /// Compare |self| with |other|.
    fn cmp_abs(&self, o: &Dyadic) -> Ordering {
        let d = self.abs().sub(&o.abs());
        if d.m.is_zero() {
            Ordering::Equal
        } else if d.m.sign() == Sign::Plus {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn cmp(&self, o: &Dyadic) -> Ordering {
        let d = self.sub(o);
        if d.m.is_zero() {
            Ordering::Equal
        } else if d.m.sign() == Sign::Plus {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn is_negative(&self) -> bool {
        self.m.sign() == Sign::Minus
    }

    /// Upper bound `2^k >= |self|`, as the exponent `k` (None for zero).
    pub fn mag2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.e + self.bits() as i64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Good enough for diagnostics; saturates on overflow.
        let bits = self.bits() as i64;
        if bits == 0 {
            return 0.0;
        }
        let shift = bits - 53;
        let (m, e) = if shift > 0 {
            ((&self.m >> shift as u64).to_string(), self.e + shift)
        } else {
            (self.m.to_string(), self.e)
        };
        let m: f64 = m.parse().unwrap_or(0.0);
        m * 2f64.powi(e.clamp(-1020, 1020) as i32)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> (Dyadic, Dyadic) {
        // q = n/d; compute floor(n * 2^s / d) with s chosen so the result has ~prec bits.
        if q.numer().is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let nb = q.numer().magnitude().bits() as i64;
        let db = q.denom().magnitude().bits() as i64;
        let s = (prec as i64 + 4) - (nb - db);
        let s = s.max(0);
        let scaled = (q.numer() << s as u64) / q.denom();
        let v = Dyadic { m: scaled, e: -s };
        // truncation error < 2^{-s}
        (v, Dyadic::pow2(-s))
    }
}

/// Round a dyadic to `prec` mantissa bits; returns (value, error bound).
fn round(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    let bits = x.bits();
    if bits <= prec as u64 {
        (x.clone(), Dyadic::zero())
    } else {
        let shift = bits - prec as u64;
        let m = &x.m >> shift;
        let e = x.e + shift as i64;
        (Dyadic { m, e }, Dyadic::pow2(e))
    }
}

/// A tight power-of-two upper bound for a nonnegative quantity.
fn mag_up(x: &Dyadic) -> Dyadic {
    match x.mag2() {
        None => Dyadic::zero(),
        Some(k) => Dyadic::pow2(k),
    }
}

/// Round a nonnegative quantity up, keeping ~20 mantissa bits: an upper bound
/// that overshoots by at most a factor 1 + 2^{-19} (so error accounting does
/// not compound noticeably over long products).
fn round_up_small(x: &Dyadic) -> Dyadic {
    let bits = x.bits();
    if bits <= 20 {
        return x.clone();
    }
    let shift = bits - 20;
    let m = (&x.m >> shift) + 1;
    Dyadic { m, e: x.e + shift as i64 }
}

/// Upper bound for sqrt(x), x >= 0, with ~20-bit precision.
fn sqrt_up(x: &Dyadic) -> Dyadic {
    use num::integer::Roots;
    if x.is_zero() {
        return Dyadic::zero();
    }
    // scale to even exponent with enough bits
    let bits = x.bits() as i64;
    let want = 48i64;
    let mut shift = (want - bits).max(0);
    if (x.e - shift) % 2 != 0 {
        shift += 1;
    }
    let m = &x.m << shift as u64;
    let r = m.magnitude().sqrt();
    let r = BigInt::from(r) + 1; // ceiling
    round_up_small(&Dyadic { m: r, e: (x.e - shift) / 2 })
}

/// ~20-bit upper bound for |z| (center only).
fn cabs_up(re: &Dyadic, im: &Dyadic) -> Dyadic {
    sqrt_up(&re.mul(re).add(&im.mul(im)))
}

/// Real ball: `[mid - rad, mid + rad]`.
#[derive(Clone, Debug)]
pub struct RBall {
    pub mid: Dyadic,
    pub rad: Dyadic,
}

/// Complex disc ball: `|z - (re + i*im)| <= rad`.
#[derive(Clone, Debug)]
pub struct CBall {
    pub re: Dyadic,
    pub im: Dyadic,
    pub rad: Dyadic,
}

impl CBall {
    pub fn zero() -> Self {
        CBall { re: Dyadic::zero(), im: Dyadic::zero(), rad: Dyadic::zero() }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        // Exact conversion: f64 is dyadic.
        fn conv(x: f64) -> Dyadic {
            if x == 0.0 {
                return Dyadic::zero();
            }
            let (m, e) = frexp(x);
            let m53 = (m * 2f64.powi(53)) as i64;
            Dyadic { m: BigInt::from(m53), e: e - 53 }
        }
        fn frexp(x: f64) -> (f64, i64) {
            let mut e = 0i64;
            let mut m = x;
            while m.abs() >= 1.0 {
                m /= 2.0;
                e += 1;
            }
            while m.abs() < 0.5 {
                m *= 2.0;
                e -= 1;
            }
            (m, e)
        }
        CBall { re: conv(re), im: conv(im), rad: Dyadic::zero() }
    }

    pub fn mag_upper(&self) -> Dyadic {
        // |z| <= |re| + |im| + rad  (coarse but safe)
        self.re.abs().add(&self.im.abs()).add(&self.rad)
    }

    /// Tighter: sqrt(re^2+im^2) upper + rad.
    pub fn abs_upper(&self) -> Dyadic {
        cabs_up(&self.re, &self.im).add(&self.rad)
    }

    pub fn to_f64(&self) -> (f64, f64, f64) {
        (self.re.to_f64(), self.im.to_f64(), self.rad.to_f64())
    }
}

/// Computation context: working precision in bits.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub prec: u32,
}

impl Ctx {
    pub fn new(prec: u32) -> Self {
        Ctx { prec: prec.max(32) + 32 }
    }

    fn r(&self, x: &Dyadic) -> (Dyadic, Dyadic) {
        round(x, self.prec)
    }

    pub fn from_rat(&self, q: &BigRational) -> CBall {
        let (v, e) = Dyadic::from_rational(q, self.prec);
        CBall { re: v, im: Dyadic::zero(), rad: e }
    }

    pub fn from_int(&self, k: i64) -> CBall {
        CBall { re: Dyadic::from_int(k), im: Dyadic::zero(), rad: Dyadic::zero() }
    }

    pub fn add(&self, a: &CBall, b: &CBall) -> CBall {
        let (re, e1) = self.r(&a.re.add(&b.re));
        let (im, e2) = self.r(&a.im.add(&b.im));
        let rad = round_up_small(&a.rad.add(&b.rad).add(&e1).add(&e2));
        CBall { re, im, rad }
    }

    pub fn sub(&self, a: &CBall, b: &CBall) -> CBall {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &CBall) -> CBall {
        CBall { re: a.re.neg(), im: a.im.neg(), rad: a.rad.clone() }
    }

    pub fn mul(&self, a: &CBall, b: &CBall) -> CBall {
        let (re, e1) = self.r(&a.re.mul(&b.re).sub(&a.im.mul(&b.im)));
        let (im, e2) = self.r(&a.re.mul(&b.im).add(&a.im.mul(&b.re)));
        // |ab - mid_a mid_b| <= |a| rb + |b| ra + ra rb
        let ma = cabs_up(&a.re, &a.im);
        let mb = cabs_up(&b.re, &b.im);
        let rad = ma
            .mul(&b.rad)
            .add(&mb.mul(&a.rad))
            .add(&a.rad.mul(&b.rad))
            .add(&e1)
            .add(&e2);
        CBall { re, im, rad: round_up_small(&rad) }
    }

    pub fn mul_i64(&self, a: &CBall, k: i64) -> CBall {
        let (re, e1) = self.r(&a.re.mul_i64(k));
        let (im, e2) = self.r(&a.im.mul_i64(k));
        let rad = a.rad.mul_i64(k.abs()).add(&e1).add(&e2);
        CBall { re, im, rad }
    }

    /// Multiply by i.
    pub fn mul_i(&self, a: &CBall) -> CBall {
        CBall { re: a.im.neg(), im: a.re.clone(), rad: a.rad.clone() }
    }

    /// Reciprocal of the exact dyadic complex `re + i im` to precision, with error.
    fn recip_mid(&self, re: &Dyadic, im: &Dyadic) -> (Dyadic, Dyadic, Dyadic) {
        // 1/(x+iy) = (x - iy)/(x^2+y^2). Divide in scaled integers:
        // (m * 2^e) / (n.m * 2^{n.e}) = floor(m << s / n.m) * 2^{e - n.e - s} + err,
        // err <= 2^{e - n.e - s}.
        let n2 = re.mul(re).add(&im.mul(im));
        debug_assert!(!n2.is_zero());
        let nbits = n2.m.magnitude().bits() as i64;
        let div = |num: &Dyadic| -> (Dyadic, Dyadic) {
            if num.is_zero() {
                return (Dyadic::zero(), Dyadic::zero());
            }
            let s = (self.prec as i64 + 8 + nbits - num.m.magnitude().bits() as i64).max(0);
            let q = (&num.m << s as u64) / &n2.m;
            let e = num.e - n2.e - s;
            (Dyadic { m: q, e }, Dyadic::pow2(e))
        };
        let (vre, e1) = div(re);
        let (vim, e2) = div(&im.neg());
        (vre, vim, e1.add(&e2))
    }

    pub fn inv(&self, a: &CBall) -> CBall {
        // Require the ball to exclude 0: |mid| > rad.
        let m2 = a.re.mul(&a.re).add(&a.im.mul(&a.im));
        let r2 = a.rad.mul(&a.rad);
        assert!(
            m2.cmp(&r2) == Ordering::Greater,
            "ball division by an enclosure containing zero"
        );
        let (vre, vim, err) = self.recip_mid(&a.re, &a.im);
        // |1/z - 1/m| <= rad / (|m| (|m| - rad)). Use power-of-two bounds.
        let mlow = self.abs_lower(a);
        assert!(!mlow.is_zero(), "ball inverse: cannot bound |z| away from 0");
        let denom = mlow.mul(&mlow);
        let prop = self.div_dyadic_up(&a.rad, &denom);
        let (re, e1) = self.r(&vre);
        let (im, e2) = self.r(&vim);
        CBall { re, im, rad: round_up_small(&prop.add(&err).add(&e1).add(&e2)) }
    }

    /// Lower bound for |z| over the ball (0 if not bounded away).
    fn abs_lower(&self, a: &CBall) -> Dyadic {
        // |mid| >= max(|re|,|im|); lower bound |mid| - rad via that.
        let m = if a.re.abs().cmp(&a.im.abs()) == Ordering::Greater {
            a.re.abs()
        } else {
            a.im.abs()
        };
        let low = m.sub(&a.rad);
        if low.is_negative() || low.is_zero() {
            Dyadic::zero()
        } else {
            // round down to a power of two
            match low.mag2() {
                None => Dyadic::zero(),
                Some(k) => Dyadic::pow2(k - 1),
            }
        }
    }

    /// Upper bound for x/y with dyadic x >= 0, y > 0.
    fn div_dyadic_up(&self, x: &Dyadic, y: &Dyadic) -> Dyadic {
        if x.is_zero() {
            return Dyadic::zero();
        }
        let kx = x.mag2().unwrap();
        let ky = y.mag2().unwrap() - 1; // 2^{ky} <= y
        Dyadic::pow2(kx - ky)
    }

    pub fn div(&self, a: &CBall, b: &CBall) -> CBall {
        self.mul(a, &self.inv(b))
    }

    pub fn pow_u64(&self, a: &CBall, mut k: u64) -> CBall {
        let mut base = a.clone();
        let mut acc = self.from_int(1);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_i64(&self, a: &CBall, k: i64) -> CBall {
        if k >= 0 {
            self.pow_u64(a, k as u64)
        } else {
            self.inv(&self.pow_u64(a, (-k) as u64))
        }
    }

    /// pi as a real ball (Machin's formula).
    pub fn pi(&self) -> CBall {
        let prec = self.prec as i64 + 16;
        // atan(1/k) = sum (-1)^j / ((2j+1) k^{2j+1}), |tail| <= 1/((2N+1) k^{2N+1})
        let atan_inv = |k: i64| -> (BigRational, BigRational) {
            let mut sum = BigRational::zero();
            let kk = BigInt::from(k) * BigInt::from(k);
            let mut p = BigInt::from(k); // k^{2j+1}
            let mut j = 0i64;
            loop {
                let term = BigRational::new(BigInt::one(), &p * BigInt::from(2 * j + 1));
                if j % 2 == 0 {
                    sum += &term;
                } else {
                    sum -= &term;
                }
                // stop when term < 2^-prec
                if p.magnitude().bits() as i64 > prec + 8 {
                    let tail = term;
                    return (sum, tail);
                }
                p *= &kk;
                j += 1;
            }
        };
        let (a5, t5) = atan_inv(5);
        let (a239, t239) = atan_inv(239);
        let pi = BigRational::from(BigInt::from(16)) * a5 - BigRational::from(BigInt::from(4)) * a239;
        let (v, e) = Dyadic::from_rational(&pi, self.prec);
        let (tb5, _) = Dyadic::from_rational(&(t5 * BigRational::from(BigInt::from(16))), 32);
        let (tb239, _) = Dyadic::from_rational(&(t239 * BigRational::from(BigInt::from(4))), 32);
        let rad = e.add(&mag_up(&tb5)).add(&mag_up(&tb239)).add(&Dyadic::pow2(-(prec)));
        CBall { re: v, im: Dyadic::zero(), rad }
    }

    /// exp(z) by scaling and squaring with a Taylor core.
    pub fn exp(&self, z: &CBall) -> CBall {
        // Scale z/2^m so |z| <= 1/4.
        let mag = z.mag_upper();
        let m = match mag.mag2() {
            None => 0,
            Some(k) => (k + 2).max(0),
        } as u64;
        let zs = CBall {
            re: Dyadic { m: z.re.m.clone(), e: z.re.e - m as i64 },
            im: Dyadic { m: z.im.m.clone(), e: z.im.e - m as i64 },
            rad: Dyadic { m: z.rad.m.clone(), e: z.rad.e - m as i64 },
        };
        // Taylor: sum_{k<=N} z^k/k!, tail <= 2 |z|^{N+1}/(N+1)! <= 2 * 4^{-(N+1)}/(N+1)!
        let mut n = 4usize;
        loop {
            // bound: (N+1)! * 4^{N+1} >= 2^{prec+8}?
            let mut bits = 0f64;
            for j in 1..=(n + 1) {
                bits += (j as f64).log2();
            }
            bits += 2.0 * (n as f64 + 1.0);
            if bits > self.prec as f64 + 8.0 {
                break;
            }
            n += 2;
        }
        let mut acc = self.from_int(1);
        let mut term = self.from_int(1);
        let mut fact = BigInt::one();
        for k in 1..=n {
            term = self.mul(&term, &zs);
            fact *= k as i64;
            let coef = self.from_rat(&BigRational::new(BigInt::one(), fact.clone()));
            acc = self.add(&acc, &self.mul(&term, &coef));
        }
        // Tail: |z| <= 1/4 + rad(zs); assume rad small; add 2 * 4^{-(n+1)}/(n+1)! bounded by 2^{-prec-8}.
        // Sensitivity to the input radius: |exp(z) - exp(mid)| <= |exp(mid)| (e^{r} - 1) <= 2 r |exp(mid)| for r<=1/2.
        let em = round_up_small(&acc.abs_upper());
        let sens = em.mul(&zs.rad).mul_i64(2);
        let mut out = CBall {
            re: acc.re,
            im: acc.im,
            rad: acc.rad.add(&Dyadic::pow2(-(self.prec as i64) - 8)).add(&sens),
        };
        for _ in 0..m {
            out = self.mul(&out, &out);
        }
        out
    }

    /// Principal complex logarithm. Requires the ball to exclude 0.
    pub fn log(&self, z: &CBall) -> CBall {
        // Seed from f64 then one high-precision correction step:
        // ln z = w + ln(z e^{-w}), and for |u-1| <= 1/2: ln u by Taylor (atanh form).
        let (re, im, _) = z.to_f64();
        let seed_abs = 0.5 * (re * re + im * im).ln();
        let seed_arg = im.atan2(re);
        let w = CBall::from_f64(seed_abs, seed_arg);
        let u = self.mul(z, &self.exp(&self.neg(&w))); // close to 1
        // ln u = 2 atanh((u-1)/(u+1)) = 2 sum t^{2k+1}/(2k+1)
        let one = self.from_int(1);
        let t = self.div(&self.sub(&u, &one), &self.add(&u, &one));
        let tmag = t.mag_upper().to_f64();
        assert!(tmag < 0.3, "log: seed not accurate enough");
        let t2 = self.mul(&t, &t);
        let mut acc = CBall::zero();
        let mut p = t.clone();
        let mut k = 0i64;
        loop {
            let coef = self.from_rat(&BigRational::new(BigInt::from(2), BigInt::from(2 * k + 1)));
            acc = self.add(&acc, &self.mul(&p, &coef));
            // tail bound: 2 |t|^{2k+3} / (1-|t|^2)
            let tb = 2.0 * tmag.powi((2 * k + 3) as i32) / (1.0 - tmag * tmag);
            if tb < 2f64.powi(-(self.prec as i32) - 8) || (2 * k + 3) > 4 * self.prec as i64 {
                acc.rad = acc.rad.add(&Dyadic::pow2(-(self.prec as i64) - 8));
                break;
            }
            p = self.mul(&p, &t2);
            k += 1;
        }
        self.add(&w, &acc)
    }

    /// Principal square root via exp(log/2) (ball excludes 0).
    pub fn sqrt(&self, z: &CBall) -> CBall {
        let l = self.log(z);
        let half = self.from_rat(&BigRational::new(BigInt::one(), BigInt::from(2)));
        self.exp(&self.mul(&l, &half))
    }

    /// Principal power z^{p/q}.
    pub fn pow_rat(&self, z: &CBall, p: i64, q: i64) -> CBall {
        assert!(q > 0);
        if p == 0 {
            return self.from_int(1);
        }
        if q == 1 {
            return self.pow_i64(z, p);
        }
        let l = self.log(z);
        let a = self.from_rat(&BigRational::new(BigInt::from(p), BigInt::from(q)));
        self.exp(&self.mul(&l, &a))
    }

    /// e^{i pi t} for rational t, exactly reduced mod 2.
    pub fn exp_i_pi_rat(&self, t: &BigRational) -> CBall {
        let two = BigRational::from(BigInt::from(2));
        let mut t = t.clone();
        // reduce to [0,2)
        let f = (&t / &two).floor();
        t -= f * &two;
        let pi = self.pi();
        let tb = self.from_rat(&t);
        let angle = self.mul(&pi, &tb);
        self.exp(&self.mul_i(&angle))
    }

    /// |a - b| <= tol checked rigorously: |mid_a - mid_b| + rad_a + rad_b <= tol.
    pub fn diff_upper(&self, a: &CBall, b: &CBall) -> Dyadic {
        let d = self.sub(a, b);
        d.mag_upper()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Ctx {
        Ctx::new(192)
    }

    #[test]
    fn pi_value() {
        let c = ctx();
        let pi = c.pi();
        let v = pi.re.to_f64();
        assert!((v - std::f64::consts::PI).abs() < 1e-14);
        assert!(pi.rad.to_f64() < 1e-50);
    }

    #[test]
    fn exp_log_roundtrip() {
        let c = ctx();
        let z = CBall::from_f64(0.7, -1.3);
        let w = c.log(&c.exp(&z));
        let d = c.diff_upper(&z, &w);
        assert!(d.to_f64() < 1e-50, "diff {}", d.to_f64());
    }

    #[test]
    fn exp_i_pi_is_minus_one() {
        let c = ctx();
        let one = BigRational::from(BigInt::from(1));
        let v = c.exp_i_pi_rat(&one);
        let m1 = c.from_int(-1);
        assert!(c.diff_upper(&v, &m1).to_f64() < 1e-50);
    }

    #[test]
    fn sqrt_of_four() {
        let c = ctx();
        let v = c.sqrt(&c.from_int(4));
        assert!(c.diff_upper(&v, &c.from_int(2)).to_f64() < 1e-50);
    }

    #[test]
    fn division_enclosure() {
        let c = ctx();
        let a = CBall::from_f64(3.0, 1.0);
        let b = CBall::from_f64(0.5, -2.0);
        let q = c.div(&a, &b);
        let back = c.mul(&q, &b);
        assert!(c.diff_upper(&back, &a).to_f64() < 1e-50);
    }
}
