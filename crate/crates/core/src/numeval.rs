//! High-precision numeric evaluation and verification of the modular
//! transformation laws.
//!
//! All building blocks (eta, the A2-family thetas, theta_2/theta_3, the
//! Jacobi combination phi_{-2,1}^{1/2} Delta^{1/2}) are evaluated directly as
//! lattice sums or infinite products with rigorous tail bounds, in ball
//! arithmetic. A block written `f(tau', z')` below always means the series in
//! the nome q' = e^{2 pi i tau'}; scaled arguments like eps^k q^{1/3} are
//! reached by shifting tau' to (tau + k)/3.
//!
//! The S-duality sum over H^2(S,Z)/r H^2(S,Z) is never enumerated: classes
//! are grouped by the finitely many invariants the generating function
//! depends on, and the (weighted) class counts per group come from the
//! closed-form character sums, exactly as in the transformation proofs.

use crate::ball::{CBall, Ctx, Dyadic};
use crate::exactnum::{rat, rat_int, Cyc, Rat};
use crate::qseries::{BiSeries, FSeries};
use crate::surfdata::SurfaceData;
use num::{BigInt, Signed, Zero};

#[derive(Clone, Debug)]
pub struct EvalPoint {
    pub tau_re: Rat,
    pub tau_im: Rat,
    pub z_re: Rat,
    pub z_im: Rat,
    pub prec: u32,
}

impl EvalPoint {
    pub fn new(tau_re: (i64, i64), tau_im: (i64, i64), z_re: (i64, i64), z_im: (i64, i64), prec: u32) -> Self {
        EvalPoint {
            tau_re: rat(tau_re.0, tau_re.1),
            tau_im: rat(tau_im.0, tau_im.1),
            z_re: rat(z_re.0, z_re.1),
            z_im: rat(z_im.0, z_im.1),
            prec,
        }
    }

    pub fn tau(&self, ctx: &Ctx) -> CBall {
        let re = ctx.from_rat(&self.tau_re);
        let im = ctx.from_rat(&self.tau_im);
        ctx.add(&re, &ctx.mul_i(&im))
    }

    pub fn z(&self, ctx: &Ctx) -> CBall {
        let re = ctx.from_rat(&self.z_re);
        let im = ctx.from_rat(&self.z_im);
        ctx.add(&re, &ctx.mul_i(&im))
    }
}

/// Result of a numeric evaluation with the two error components.
#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: CBall,
    pub truncation_bound: f64,
    pub rounding_bound: f64,
}

impl EvalResult {
    pub fn total_error(&self) -> f64 {
        self.truncation_bound + self.rounding_bound
    }
}

/// Upper bound 2^k for a ball magnitude, as f64 (diagnostics / tail control).
fn mag_f64(b: &CBall) -> f64 {
    b.mag_upper().to_f64()
}

/// Inflate a ball's radius by |value| * bound (for |true/f - 1| <= bound <= 1/2,
/// where f is the computed finite part).
fn inflate_rel(ctx: &Ctx, v: &CBall, bound: f64) -> CBall {
    assert!(bound < 0.5, "tail bound too large: {}", bound);
    let b = ctx.from_rat(&Rat::from_float(2.0 * bound).unwrap_or_else(|| rat(1, 1 << 20)));
    let extra = ctx.mul(&v, &b);
    CBall { re: v.re.clone(), im: v.im.clone(), rad: v.rad.add(&extra.mag_upper()) }
}

/// e^{2 pi i w}
fn e2pi(ctx: &Ctx, w: &CBall) -> CBall {
    let pi = ctx.pi();
    let two = ctx.from_int(2);
    ctx.exp(&ctx.mul_i(&ctx.mul(&ctx.mul(&pi, &two), w)))
}

/// e^{pi i t} for exact rational t
pub fn phase(ctx: &Ctx, t: &Rat) -> CBall {
    ctx.exp_i_pi_rat(t)
}

/// |e^{2 pi i w}| upper bound = e^{-2 pi Im(w)} (as f64, padded).
fn qabs_upper(ctx: &Ctx, w: &CBall) -> f64 {
    let _ = ctx;
    let (_, im, rad) = w.to_f64();
    let v = (-2.0 * std::f64::consts::PI * (im - rad.abs() - 1e-12)).exp();
    v * (1.0 + 1e-9)
}

/// eta(tau) = q^{1/24} prod (1 - q^n).
pub fn eta_num(ctx: &Ctx, tau: &CBall) -> CBall {
    let q = e2pi(ctx, tau);
    let t = qabs_upper(ctx, tau);
    assert!(t < 0.95, "eta: |q| too close to 1");
    let n_terms = terms_needed(t, 1.0, ctx.prec);
    let mut prod = ctx.from_int(1);
    let mut qn = ctx.from_int(1);
    for _ in 1..=n_terms {
        qn = ctx.mul(&qn, &q);
        prod = ctx.mul(&prod, &ctx.sub(&ctx.from_int(1), &qn));
    }
    // log-tail <= 2 t^{N+1}/(1-t)
    let tail = 2.0 * t.powi(n_terms as i32 + 1) / (1.0 - t);
    let prefix = e2pi(ctx, &ctx.mul(&tau, &ctx.from_rat(&rat(1, 24))));
    inflate_rel(ctx, &ctx.mul(&prefix, &prod), tail)
}

fn terms_needed(t: f64, w: f64, prec: u32) -> u32 {
    // smallest N with 14 * (t*w)^{N+1} < 2^{-prec-16}
    let tw = (t * w).min(0.999);
    let target = 2f64.powi(-(prec as i32) - 16);
    let mut n = 4u32;
    while 14.0 * tw.powi(n as i32 + 1) >= target {
        n += 1;
        assert!(n < 100_000, "series does not converge fast enough");
    }
    n
}

/// phi_{-2,1}(q', y')^{1/2} Delta(q')^{1/2} at q' = e^{2 pi i tau'}, y' = e^{2 pi i z'}:
/// (y'^{1/2} - y'^{-1/2}) e^{pi i tau'} prod (1-q'^n)^{10} (1-q'^n y')(1-q'^n y'^{-1}).
pub fn phi_delta_half_num(ctx: &Ctx, tau: &CBall, z: &CBall) -> CBall {
    let q = e2pi(ctx, tau);
    let y = e2pi(ctx, z);
    let yinv = ctx.inv(&y);
    let t = qabs_upper(ctx, tau);
    let wy = mag_f64(&y).max(mag_f64(&yinv));
    assert!(t * wy < 0.9, "phi-delta: |q y^{{±1}}| too close to 1");
    let n_terms = terms_needed(t, wy, ctx.prec);
    let one = ctx.from_int(1);
    let mut prod = ctx.from_int(1);
    let mut qn = ctx.from_int(1);
    for _ in 1..=n_terms {
        qn = ctx.mul(&qn, &q);
        let f0 = ctx.sub(&one, &qn);
        prod = ctx.mul(&prod, &ctx.pow_u64(&f0, 10));
        prod = ctx.mul(&prod, &ctx.sub(&one, &ctx.mul(&qn, &y)));
        prod = ctx.mul(&prod, &ctx.sub(&one, &ctx.mul(&qn, &yinv)));
    }
    let tail = 14.0 * (t * wy).powi(n_terms as i32 + 1) / (1.0 - t * wy);
    let half = ctx.from_rat(&rat(1, 2));
    let yh = e2pi(ctx, &ctx.mul(&z, &half));
    let bracket = ctx.sub(&yh, &ctx.inv(&yh));
    let prefix = ctx.exp(&ctx.mul_i(&ctx.mul(&ctx.pi(), tau)));
    inflate_rel(ctx, &ctx.mul(&ctx.mul(&bracket, &prefix), &prod), tail)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NumTheta {
    /// Theta_{A2,(0,0)}(q^{1/2}, y) as a function of (tau, z)
    A2_00,
    /// Theta_{A2,(1,0)}(q^{1/2}, y)
    A2_10,
    /// Theta_{A2v,(0,0)}(eps^j q^{1/6}, y)
    A2Dual00,
    /// Theta_{A2v,(0,1)}(eps^j q^{1/6}, y)
    A2Dual01,
    /// theta_3(q, y)
    Theta3,
    /// theta_2(q, y)
    Theta2,
}

/// Lattice theta block evaluation; `j` is the eps-power for the scaled-argument
/// dual thetas (ignored elsewhere).
pub fn theta_num(ctx: &Ctx, which: NumTheta, j: i64, tau: &CBall, z: &CBall) -> CBall {
    let y = e2pi(ctx, z);
    let eps = Cyc::eps().embed(ctx);
    // choose R from the decay rate
    let c: f64 = match which {
        NumTheta::A2_00 | NumTheta::A2_10 => 1.0,
        NumTheta::A2Dual00 | NumTheta::A2Dual01 => 1.0 / 3.0,
        NumTheta::Theta3 | NumTheta::Theta2 => 1.0,
    };
    let t = qabs_upper(ctx, tau).powf(c);
    let wy = {
        let yi = ctx.inv(&y);
        mag_f64(&y).max(mag_f64(&yi))
    };
    assert!(t < 0.9, "theta: nome too large");
    let mut r_box = 6i64;
    // ratio control: s_{a+1}/s_a <= 2 t^{(2R+1)/4} wy^2 <= 1/2 and tail small
    let tail_at = |rr: i64| -> f64 {
        let s = 12.0 * (rr as f64 + 1.0)
            * t.powf(((rr as f64) * (rr as f64)) / 2.2)
            * wy.powi(2 * (rr as i32 + 1) + 1);
        2.0 * s
    };
    let target = 2f64.powi(-(ctx.prec as i32) - 16);
    while tail_at(r_box) >= target || 2.0 * t.powf((2.0 * r_box as f64 + 1.0) / 4.0) * wy * wy >= 0.5
    {
        r_box += 2;
        assert!(r_box < 4000, "theta sum does not converge");
    }
    let mut acc = CBall::zero();
    match which {
        NumTheta::Theta3 => {
            let q = e2pi(ctx, tau);
            for n in -r_box..=r_box {
                let term = ctx.mul(&ctx.pow_i64(&q, n * n), &ctx.pow_i64(&y, n));
                acc = ctx.add(&acc, &term);
            }
        }
        NumTheta::Theta2 => {
            // n = k + 1/2: q^{n^2} = e^{2 pi i tau (k^2 + k + 1/4)}
            let q = e2pi(ctx, tau);
            let q4 = e2pi(ctx, &ctx.mul(&tau, &ctx.from_rat(&rat(1, 4))));
            let yh = e2pi(ctx, &ctx.mul(&z, &ctx.from_rat(&rat(1, 2))));
            for k in -r_box..=r_box {
                let term = ctx.mul(
                    &ctx.mul(&ctx.pow_i64(&q, k * k + k), &q4),
                    &ctx.pow_i64(&yh, 2 * k + 1),
                );
                acc = ctx.add(&acc, &term);
            }
        }
        NumTheta::A2_00 | NumTheta::A2Dual00 | NumTheta::A2Dual01 => {
            let dual = which != NumTheta::A2_00;
            let qc = if dual {
                e2pi(ctx, &ctx.mul(&tau, &ctx.from_rat(&rat(1, 3))))
            } else {
                e2pi(ctx, tau)
            };
            for m in -r_box..=r_box {
                for n in -r_box..=r_box {
                    let qq = if dual { m * m + m * n + n * n } else { m * m - m * n + n * n };
                    let mut term = ctx.mul(&ctx.pow_i64(&qc, qq), &ctx.pow_i64(&y, m + n));
                    if which == NumTheta::A2Dual01 {
                        term = ctx.mul(&term, &ctx.pow_i64(&eps, m - n));
                    }
                    if dual && j != 0 {
                        // (eps^j q^{1/6})^{2 Q} = eps^{2 j Q} q^{Q/3}
                        term = ctx.mul(&term, &ctx.pow_i64(&eps, 2 * j * qq));
                    }
                    acc = ctx.add(&acc, &term);
                }
            }
        }
        NumTheta::A2_10 => {
            // exponents q^{Q'} with Q' = m^2-mn+n^2+m-n+1/3
            let q = e2pi(ctx, tau);
            let q3 = e2pi(ctx, &ctx.mul(&tau, &ctx.from_rat(&rat(1, 3))));
            for m in -r_box..=r_box {
                for n in -r_box..=r_box {
                    let qq = m * m - m * n + n * n + m - n;
                    let term =
                        ctx.mul(&ctx.mul(&ctx.pow_i64(&q, qq), &q3), &ctx.pow_i64(&y, m + n));
                    acc = ctx.add(&acc, &term);
                }
            }
        }
    }
    let tail = tail_at(r_box);
    let tb = ctx.from_rat(&Rat::from_float(tail).unwrap_or_else(|| rat(1, 1 << 30)));
    CBall { re: acc.re, im: acc.im, rad: acc.rad.add(&tb.mag_upper()).add(&tb.rad) }
}

/// Evaluate a BiSeries at a point: `u` is the value of x^{1/den},
/// `yh` the value of y^{1/2}. The truncation bound is the engine's
/// coefficient-growth certificate: the largest stored coefficient magnitude,
/// extrapolated geometrically with safety factor 2.
pub fn eval_series(ctx: &Ctx, s: &BiSeries, u: &CBall, yh: &CBall) -> EvalResult {
    let yh_inv = ctx.inv(yh);
    let mut acc = CBall::zero();
    let mut coeff_max: f64 = 0.0;
    for (k, c) in &s.terms {
        let mut cv = CBall::zero();
        for (h, a) in &c.terms {
            let av = a.embed(ctx);
            let yp = if *h >= 0 { ctx.pow_i64(yh, *h) } else { ctx.pow_i64(&yh_inv, -*h) };
            cv = ctx.add(&cv, &ctx.mul(&av, &yp));
        }
        coeff_max = coeff_max.max(mag_f64(&cv));
        acc = ctx.add(&acc, &ctx.mul(&cv, &ctx.pow_i64(u, *k)));
    }
    let uu = mag_f64(u);
    let truncation = if uu < 1.0 {
        2.0 * coeff_max.max(1.0) * uu.powi(s.trunc.max(0) as i32) / (1.0 - uu)
    } else {
        f64::INFINITY
    };
    let rounding = acc.rad.to_f64();
    EvalResult { value: acc, truncation_bound: truncation, rounding_bound: rounding }
}

/// Evaluate an FSeries (fraction coefficients) with the same certificate.
pub fn eval_fseries(ctx: &Ctx, s: &FSeries, u: &CBall, yh: &CBall) -> EvalResult {
    let yh_inv = ctx.inv(yh);
    let evalp = |p: &crate::qseries::YPoly| -> CBall {
        let mut cv = CBall::zero();
        for (h, a) in &p.terms {
            let av = a.embed(ctx);
            let yp = if *h >= 0 { ctx.pow_i64(yh, *h) } else { ctx.pow_i64(&yh_inv, -*h) };
            cv = ctx.add(&cv, &ctx.mul(&av, &yp));
        }
        cv
    };
    let mut acc = CBall::zero();
    let mut coeff_max: f64 = 0.0;
    for (k, c) in &s.terms {
        let cv = ctx.div(&evalp(&c.num), &evalp(&c.den));
        coeff_max = coeff_max.max(mag_f64(&cv));
        acc = ctx.add(&acc, &ctx.mul(&cv, &ctx.pow_i64(u, *k)));
    }
    let uu = mag_f64(u);
    let truncation = if uu < 1.0 {
        2.0 * coeff_max.max(1.0) * uu.powi(s.trunc.max(0) as i32) / (1.0 - uu)
    } else {
        f64::INFINITY
    };
    let rounding = acc.rad.to_f64();
    EvalResult { value: acc, truncation_bound: truncation, rounding_bound: rounding }
}

/// The numeric Z±(eps^j q^{1/6}, y) values: both quadratic roots, labeled by
/// the series convention. The labels are pinned at an anchor point with
/// Im(tau) = 6 (where the series certificate is overwhelming) and then tracked
/// down to the target point by continuity, with a separation guard at every
/// step.
pub fn z_roots_num(ctx: &Ctx, j: i64, tau: &CBall, z: &CBall, pin_order: i64) -> (CBall, CBall) {
    let roots_at = |t: &CBall| -> (CBall, CBall, f64) {
        let th00 = theta_num(ctx, NumTheta::A2Dual00, j, t, z);
        let th01 = theta_num(ctx, NumTheta::A2Dual01, j, t, z);
        let th00_1 = theta_num(ctx, NumTheta::A2Dual00, j, t, &CBall::zero());
        let th01_1 = theta_num(ctx, NumTheta::A2Dual01, j, t, &CBall::zero());
        let zv = ctx.div(&th00, &th01);
        let z1 = ctx.div(&th00_1, &th01_1);
        let s = ctx.add(&ctx.mul(&zv, &zv), &ctx.mul_i64(&ctx.mul(&zv, &z1), 3));
        let p = ctx.add(&zv, &ctx.mul_i64(&z1, 3));
        let disc = ctx.sub(&ctx.mul(&s, &s), &ctx.mul_i64(&p, 4));
        let sq = ctx.sqrt(&disc);
        let half = ctx.from_rat(&rat(1, 2));
        let r1 = ctx.mul(&ctx.add(&s, &sq), &half);
        let r2 = ctx.mul(&ctx.sub(&s, &sq), &half);
        (r1, r2, mag_f64(&sq))
    };
    let pin_at_anchor = |t: &CBall, r1: &CBall, r2: &CBall, sep: f64| -> bool {
        // true if r1 is Z+
        let (zp_series, _) = crate::modforms::z_roots_plain(pin_order).expect("roots");
        let eps = Cyc::eps().embed(ctx);
        let u6 = e2pi(ctx, &ctx.mul(t, &ctx.from_rat(&rat(1, 6))));
        let u = ctx.mul(&u6, &ctx.pow_i64(&eps, j));
        let yh = e2pi(ctx, &ctx.mul(z, &ctx.from_rat(&rat(1, 2))));
        let approx = eval_series(ctx, &zp_series, &u, &yh);
        let d1 = mag_f64(&ctx.sub(r1, &approx.value));
        let d2 = mag_f64(&ctx.sub(r2, &approx.value));
        let err = approx.total_error() + r1.rad.to_f64() + r2.rad.to_f64();
        assert!(sep > 8.0 * err, "anchor root separation {} vs err {}", sep, err);
        d1 < d2
    };
    walk_root_pair(ctx, tau, roots_at, pin_at_anchor)
}

/// Continuity tracking shared by the Z and W root evaluators.
fn walk_root_pair(
    ctx: &Ctx,
    tau: &CBall,
    roots_at: impl Fn(&CBall) -> (CBall, CBall, f64),
    pin_at_anchor: impl Fn(&CBall, &CBall, &CBall, f64) -> bool,
) -> (CBall, CBall) {
    let (t_re, t_im, _) = tau.to_f64();
    let anchor_im = 6.0f64;
    // geometric descent of Im, fixed Re
    let mut path: Vec<CBall> = Vec::new();
    let mut im = anchor_im;
    while im > t_im * 1.06 {
        path.push(CBall::from_f64(t_re, im));
        im /= 1.08;
    }
    path.push(tau.clone());
    let (r1, r2, sep) = roots_at(&path[0]);
    let mut pair = if pin_at_anchor(&path[0], &r1, &r2, sep) {
        (r1, r2)
    } else {
        (r2, r1)
    };
    for t in path.iter().skip(1) {
        let (r1, r2, _sep) = roots_at(t);
        // assignment minimizing the total relative motion of the pair
        let rel = |a: &CBall, b: &CBall| -> f64 {
            mag_f64(&ctx.sub(a, b)) / (mag_f64(a) + mag_f64(b) + 1e-300)
        };
        let cost_keep = rel(&r1, &pair.0) + rel(&r2, &pair.1);
        let cost_swap = rel(&r2, &pair.0) + rel(&r1, &pair.1);
        let (lo, hi) = if cost_keep < cost_swap {
            (cost_keep, cost_swap)
        } else {
            (cost_swap, cost_keep)
        };
        assert!(
            hi > 1.5 * lo + 1e-30,
            "ambiguous root continuation: keep={} swap={}",
            cost_keep,
            cost_swap
        );
        pair = if cost_keep < cost_swap { (r1, r2) } else { (r2, r1) };
    }
    pair
}

/// Numeric W±(q^{1/2}, y), labeled by the series convention (W- is the branch
/// with leading exponent +2/3). Anchored high in the upper half plane and
/// tracked down by continuity.
pub fn w_roots_num(ctx: &Ctx, tau: &CBall, z: &CBall, pin_order: i64) -> (CBall, CBall) {
    let roots_at = |t: &CBall| -> (CBall, CBall, f64) {
        let th00 = theta_num(ctx, NumTheta::A2_00, 0, t, z);
        let th10 = theta_num(ctx, NumTheta::A2_10, 0, t, z);
        let th00_1 = theta_num(ctx, NumTheta::A2_00, 0, t, &CBall::zero());
        let th10_1 = theta_num(ctx, NumTheta::A2_10, 0, t, &CBall::zero());
        let wv = ctx.div(&th00, &th10);
        let w1 = ctx.div(&th00_1, &th10_1);
        let s = ctx.add(&ctx.mul(&wv, &wv), &ctx.mul_i64(&ctx.mul(&wv, &w1), 3));
        let p = ctx.add(&wv, &ctx.mul_i64(&w1, 3));
        let disc = ctx.sub(&ctx.mul(&s, &s), &ctx.mul_i64(&p, 4));
        let sq = ctx.sqrt(&disc);
        let half = ctx.from_rat(&rat(1, 2));
        let r1 = ctx.mul(&ctx.add(&s, &sq), &half);
        let r2 = ctx.mul(&ctx.sub(&s, &sq), &half);
        (r1, r2, mag_f64(&sq))
    };
    let pin_at_anchor = |t: &CBall, r1: &CBall, r2: &CBall, sep: f64| -> bool {
        // true if r1 is W+; pin against the W- series at the anchor
        let pair = crate::modforms::w_roots_cached(pin_order).expect("W roots");
        let u = e2pi(ctx, &ctx.mul(t, &ctx.from_rat(&rat(1, 2 * pair.minus.den))));
        let yh = e2pi(ctx, &ctx.mul(z, &ctx.from_rat(&rat(1, 2))));
        let approx = eval_fseries(ctx, &pair.minus, &u, &yh);
        let d1 = mag_f64(&ctx.sub(r1, &approx.value));
        let d2 = mag_f64(&ctx.sub(r2, &approx.value));
        let err = approx.total_error() + r1.rad.to_f64() + r2.rad.to_f64();
        assert!(sep > 8.0 * err, "anchor W separation {} vs err {}", sep, err);
        // r_i closest to W- is the minus root
        d2 < d1
    };
    walk_root_pair(ctx, tau, roots_at, pin_at_anchor)
}

/// Verdict of a numeric identity check.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
}

pub fn verdict(ctx: &Ctx, name: &str, lhs: &CBall, rhs: &CBall, tol: f64) -> Verdict {
    let d = ctx.diff_upper(lhs, rhs).to_f64();
    Verdict { name: name.into(), pass: d <= tol, residual: d, tolerance: tol }
}

fn tau_shift(ctx: &Ctx, tau: &CBall, num: i64, den: i64) -> CBall {
    // (tau + num)/den
    ctx.mul(&ctx.add(tau, &ctx.from_int(num)), &ctx.from_rat(&rat(1, den)))
}

fn s_transform(ctx: &Ctx, tau: &CBall, z: &CBall) -> (CBall, CBall) {
    let mt = ctx.neg(&ctx.inv(tau));
    let zz = ctx.div(z, tau);
    (mt, zz)
}

/// (tau/i)^{p/q}, principal branch.
fn tau_over_i_pow(ctx: &Ctx, tau: &CBall, p: i64, q: i64) -> CBall {
    let toi = ctx.mul_i(&ctx.neg(tau)); // tau/i = -i tau
    ctx.pow_rat(&toi, p, q)
}

/// e^{c pi i z^2 / tau} with rational c.
fn gauss_factor(ctx: &Ctx, tau: &CBall, z: &CBall, c: &Rat) -> CBall {
    let z2t = ctx.div(&ctx.mul(z, z), tau);
    let w = ctx.mul(&z2t, &ctx.from_rat(c));
    ctx.exp(&ctx.mul_i(&ctx.mul(&ctx.pi(), &w)))
}

/// All registered transformation rules (the displayed map tables of the
/// rank 1/2/3 transformation proofs plus the theta lemma and the Dedekind
/// sign rule). Each entry produces (lhs, rhs) at the given point.
pub fn transform_rule_names() -> Vec<&'static str> {
    RULES.iter().map(|r| r.0).collect()
}

type RuleFn = fn(&Ctx, &CBall, &CBall) -> (CBall, CBall);

static RULES: &[(&str, RuleFn)] = &[
    ("T: eta -> e^{i pi/12} eta", |ctx, tau, _z| {
        let lhs = eta_num(ctx, &ctx.add(tau, &ctx.from_int(1)));
        let rhs = ctx.mul(&phase(ctx, &rat(1, 12)), &eta_num(ctx, tau));
        (lhs, rhs)
    }),
    ("T: phiDelta^{1/2}(q,y) -> -phiDelta^{1/2}(q,y)", |ctx, tau, z| {
        let lhs = phi_delta_half_num(ctx, &ctx.add(tau, &ctx.from_int(1)), z);
        let rhs = ctx.neg(&phi_delta_half_num(ctx, tau, z));
        (lhs, rhs)
    }),
    ("S: eta -> (tau/i)^{1/2} eta", |ctx, tau, _z| {
        let (mt, _) = s_transform(ctx, tau, &CBall::zero());
        let lhs = eta_num(ctx, &mt);
        let rhs = ctx.mul(&tau_over_i_pow(ctx, tau, 1, 2), &eta_num(ctx, tau));
        (lhs, rhs)
    }),
    ("S: phiDelta^{1/2} -> -tau^5 e^{pi i z^2/tau} phiDelta^{1/2}", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let lhs = phi_delta_half_num(ctx, &mt, &zz);
        let t5 = ctx.pow_i64(tau, 5);
        let rhs = ctx.neg(&ctx.mul(
            &ctx.mul(&t5, &gauss_factor(ctx, tau, z, &rat(1, 1))),
            &phi_delta_half_num(ctx, tau, z),
        ));
        (lhs, rhs)
    }),
    ("T (rank 2): phiDelta^{1/2}(-q^{1/2}) -> -phiDelta^{1/2}(q^{1/2})", |ctx, tau, z| {
        // tau'-form: ((tau+1)+1)/2 vs tau/2
        let lhs = phi_delta_half_num(ctx, &tau_shift(ctx, tau, 2, 2), z);
        let rhs = ctx.neg(&phi_delta_half_num(ctx, &tau_shift(ctx, tau, 0, 2), z));
        (lhs, rhs)
    }),
    ("T: theta3 -> theta3", |ctx, tau, z| {
        let lhs = theta_num(ctx, NumTheta::Theta3, 0, &ctx.add(tau, &ctx.from_int(1)), z);
        (lhs, theta_num(ctx, NumTheta::Theta3, 0, tau, z))
    }),
    ("T: theta2 -> i theta2", |ctx, tau, z| {
        let lhs = theta_num(ctx, NumTheta::Theta2, 0, &ctx.add(tau, &ctx.from_int(1)), z);
        let rhs = ctx.mul_i(&theta_num(ctx, NumTheta::Theta2, 0, tau, z));
        (lhs, rhs)
    }),
    ("S: theta3 -> (1/sqrt2)(tau/i)^{1/2} e^{pi i z^2/(2 tau)} (theta3+theta2)", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let lhs = theta_num(ctx, NumTheta::Theta3, 0, &mt, &zz);
        let pre = ctx.mul(
            &ctx.div(&tau_over_i_pow(ctx, tau, 1, 2), &ctx.sqrt(&ctx.from_int(2))),
            &gauss_factor(ctx, tau, z, &rat(1, 2)),
        );
        let sum = ctx.add(
            &theta_num(ctx, NumTheta::Theta3, 0, tau, z),
            &theta_num(ctx, NumTheta::Theta2, 0, tau, z),
        );
        (lhs, ctx.mul(&pre, &sum))
    }),
    ("S: theta2 -> (1/sqrt2)(tau/i)^{1/2} e^{pi i z^2/(2 tau)} (theta3-theta2)", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let lhs = theta_num(ctx, NumTheta::Theta2, 0, &mt, &zz);
        let pre = ctx.mul(
            &ctx.div(&tau_over_i_pow(ctx, tau, 1, 2), &ctx.sqrt(&ctx.from_int(2))),
            &gauss_factor(ctx, tau, z, &rat(1, 2)),
        );
        let dif = ctx.sub(
            &theta_num(ctx, NumTheta::Theta3, 0, tau, z),
            &theta_num(ctx, NumTheta::Theta2, 0, tau, z),
        );
        (lhs, ctx.mul(&pre, &dif))
    }),
    ("S (rank 2): phiDelta^{1/2}(q^2,y^2) -> -(tau/2)^5 e^{2 pi i z^2/tau} phiDelta^{1/2}(q^{1/2},y)", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let two = ctx.from_int(2);
        let lhs = phi_delta_half_num(ctx, &ctx.mul(&mt, &two), &ctx.mul(&zz, &two));
        let t25 = ctx.pow_i64(&ctx.mul(tau, &ctx.from_rat(&rat(1, 2))), 5);
        let rhs = ctx.neg(&ctx.mul(
            &ctx.mul(&t25, &gauss_factor(ctx, tau, z, &rat(2, 1))),
            &phi_delta_half_num(ctx, &tau_shift(ctx, tau, 0, 2), z),
        ));
        (lhs, rhs)
    }),
    ("S (rank 2): phiDelta^{1/2}(-q^{1/2}) -> -tau^5 e^{2 pi i z^2/tau} phiDelta^{1/2}(-q^{1/2})", |ctx, tau, z| {
        // combined object at tau' = (tau+1)/2; the S-image lands at ( -1/tau + 1)/2
        let (mt, zz) = s_transform(ctx, tau, z);
        let lhs = phi_delta_half_num(ctx, &tau_shift(ctx, &mt, 1, 2), &zz);
        let t5 = ctx.pow_i64(tau, 5);
        let rhs = ctx.neg(&ctx.mul(
            &ctx.mul(&t5, &gauss_factor(ctx, tau, z, &rat(2, 1))),
            &phi_delta_half_num(ctx, &tau_shift(ctx, tau, 1, 2), z),
        ));
        (lhs, rhs)
    }),
    ("T (rank 3): phiDelta^{1/2}(q^3,y^3) -> -phiDelta^{1/2}(q^3,y^3)", |ctx, tau, z| {
        let three = ctx.from_int(3);
        let t3 = ctx.mul(tau, &three);
        let z3 = ctx.mul(z, &three);
        let lhs = phi_delta_half_num(ctx, &ctx.add(&t3, &three), &z3);
        let rhs = ctx.neg(&phi_delta_half_num(ctx, &t3, &z3));
        (lhs, rhs)
    }),
    ("T (rank 3): phiDelta^{1/2}(eps^2 q^{1/3}) -> -phiDelta^{1/2}(q^{1/3})", |ctx, tau, z| {
        let lhs = phi_delta_half_num(ctx, &tau_shift(ctx, tau, 3, 3), z);
        let rhs = ctx.neg(&phi_delta_half_num(ctx, &tau_shift(ctx, tau, 0, 3), z));
        (lhs, rhs)
    }),
    ("T (rank 3): Theta_{A2,(0,0)}(q^{1/2}) invariant", |ctx, tau, z| {
        let lhs = theta_num(ctx, NumTheta::A2_00, 0, &ctx.add(tau, &ctx.from_int(1)), z);
        (lhs, theta_num(ctx, NumTheta::A2_00, 0, tau, z))
    }),
    ("T (rank 3): Theta_{A2,(1,0)}(q^{1/2}) -> eps Theta_{A2,(1,0)}(q^{1/2})", |ctx, tau, z| {
        let lhs = theta_num(ctx, NumTheta::A2_10, 0, &ctx.add(tau, &ctx.from_int(1)), z);
        let rhs = ctx.mul(&Cyc::eps().embed(ctx), &theta_num(ctx, NumTheta::A2_10, 0, tau, z));
        (lhs, rhs)
    }),
    ("T (rank 3): Theta_{A2v,v}(q^{1/6}) -> Theta_{A2v,v}(eps^2 q^{1/6})", |ctx, tau, z| {
        let lhs = theta_num(ctx, NumTheta::A2Dual01, 0, &ctx.add(tau, &ctx.from_int(1)), z);
        let rhs = theta_num(ctx, NumTheta::A2Dual01, 2, tau, z);
        (lhs, rhs)
    }),
    ("T (rank 3): Theta_{A2v,v}(eps q^{1/6}) -> Theta_{A2v,v}(q^{1/6})", |ctx, tau, z| {
        let lhs = theta_num(ctx, NumTheta::A2Dual00, 1, &ctx.add(tau, &ctx.from_int(1)), z);
        let rhs = theta_num(ctx, NumTheta::A2Dual00, 0, tau, z);
        (lhs, rhs)
    }),
    ("S (rank 3, theta lemma): Theta_{A2,(0,0)}(q^{1/2}) -> (1/sqrt3)(tau/i) e^{2 pi i z^2/tau} Theta_{A2v,(0,0)}(q^{1/6})", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let lhs = theta_num(ctx, NumTheta::A2_00, 0, &mt, &zz);
        let pre = ctx.mul(
            &ctx.div(&tau_over_i_pow(ctx, tau, 1, 1), &ctx.sqrt(&ctx.from_int(3))),
            &gauss_factor(ctx, tau, z, &rat(2, 1)),
        );
        (lhs, ctx.mul(&pre, &theta_num(ctx, NumTheta::A2Dual00, 0, tau, z)))
    }),
    ("S (rank 3): Theta_{A2,(1,0)}(q^{1/2}) -> (1/sqrt3)(tau/i) e^{2 pi i z^2/tau} Theta_{A2v,(0,1)}(q^{1/6})", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let lhs = theta_num(ctx, NumTheta::A2_10, 0, &mt, &zz);
        let pre = ctx.mul(
            &ctx.div(&tau_over_i_pow(ctx, tau, 1, 1), &ctx.sqrt(&ctx.from_int(3))),
            &gauss_factor(ctx, tau, z, &rat(2, 1)),
        );
        (lhs, ctx.mul(&pre, &theta_num(ctx, NumTheta::A2Dual01, 0, tau, z)))
    }),
    ("S (rank 3): phiDelta^{1/2}(q^3,y^3) -> -(tau/3)^5 e^{3 pi i z^2/tau} phiDelta^{1/2}(q^{1/3},y)", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let three = ctx.from_int(3);
        let lhs = phi_delta_half_num(ctx, &ctx.mul(&mt, &three), &ctx.mul(&zz, &three));
        let t35 = ctx.pow_i64(&ctx.mul(tau, &ctx.from_rat(&rat(1, 3))), 5);
        let rhs = ctx.neg(&ctx.mul(
            &ctx.mul(&t35, &gauss_factor(ctx, tau, z, &rat(3, 1))),
            &phi_delta_half_num(ctx, &tau_shift(ctx, tau, 0, 3), z),
        ));
        (lhs, rhs)
    }),
    ("S (rank 3): phiDelta^{1/2}(eps q^{1/3}) -> tau^5 e^{3 pi i z^2/tau} phiDelta^{1/2}(eps^2 q^{1/3})", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let lhs = phi_delta_half_num(ctx, &tau_shift(ctx, &mt, 1, 3), &zz);
        let rhs = ctx.mul(
            &ctx.mul(&ctx.pow_i64(tau, 5), &gauss_factor(ctx, tau, z, &rat(3, 1))),
            &phi_delta_half_num(ctx, &tau_shift(ctx, tau, 2, 3), z),
        );
        (lhs, rhs)
    }),
    ("S (rank 3): phiDelta^{1/2}(eps^2 q^{1/3}) -> tau^5 e^{3 pi i z^2/tau} phiDelta^{1/2}(eps q^{1/3})", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let lhs = phi_delta_half_num(ctx, &tau_shift(ctx, &mt, 2, 3), &zz);
        let rhs = ctx.mul(
            &ctx.mul(&ctx.pow_i64(tau, 5), &gauss_factor(ctx, tau, z, &rat(3, 1))),
            &phi_delta_half_num(ctx, &tau_shift(ctx, tau, 1, 3), z),
        );
        (lhs, rhs)
    }),
    ("S (theta lemma): Z(q^{1/6}) -> W(q^{1/2})", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let lhs = ctx.div(
            &theta_num(ctx, NumTheta::A2Dual00, 0, &mt, &zz),
            &theta_num(ctx, NumTheta::A2Dual01, 0, &mt, &zz),
        );
        let rhs = ctx.div(
            &theta_num(ctx, NumTheta::A2_00, 0, tau, z),
            &theta_num(ctx, NumTheta::A2_10, 0, tau, z),
        );
        (lhs, rhs)
    }),
    ("S (theta lemma): Z+(q^{1/6}) -> W+(q^{1/2})", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let (zp, _) = z_roots_num(ctx, 0, &mt, &zz, 24);
        let (wp, _) = w_roots_num(ctx, tau, z, 24);
        (zp, wp)
    }),
    ("S (theta lemma): Z-(q^{1/6}) -> W-(q^{1/2})", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let (_, zm) = z_roots_num(ctx, 0, &mt, &zz, 24);
        let (_, wm) = w_roots_num(ctx, tau, z, 24);
        (zm, wm)
    }),
    ("S (theta lemma): Z±(eps q^{1/6}) -> eps Z±(eps^2 q^{1/6})", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let (zp_l, _) = z_roots_num(ctx, 1, &mt, &zz, 24);
        let (zp_r, _) = z_roots_num(ctx, 2, tau, z, 24);
        (zp_l, ctx.mul(&Cyc::eps().embed(ctx), &zp_r))
    }),
    // The composition with the previous rule must be the identity (S^2 acts as
    // y -> 1/y and every Z± is y-symmetric), which forces the same labeling on
    // both sides here; verified numerically against both candidate pairings.
    ("S (theta lemma): Z±(eps^2 q^{1/6}) -> eps^2 Z±(eps q^{1/6})", |ctx, tau, z| {
        let (mt, zz) = s_transform(ctx, tau, z);
        let (zp_l, _) = z_roots_num(ctx, 2, &mt, &zz, 24);
        let (zp_r, _) = z_roots_num(ctx, 1, tau, z, 24);
        (zp_l, ctx.mul(&Cyc::eps().pow(2).unwrap().embed(ctx), &zp_r))
    }),
    ("Dedekind sign: eta((a tau+b)/(c tau+d))^12 = eps(a,b,c,d)(c tau+d)^6 eta(tau)^12, (0,-1;1,0)", |ctx, tau, _z| {
        dedekind_rule(ctx, tau, 0, -1, 1, 0)
    }),
    ("Dedekind sign: (1,0;1,1)", |ctx, tau, _z| dedekind_rule(ctx, tau, 1, 0, 1, 1)),
    ("Dedekind sign: (2,1;1,1)", |ctx, tau, _z| dedekind_rule(ctx, tau, 2, 1, 1, 1)),
    ("Dedekind sign: (1,-1;2,-1)", |ctx, tau, _z| dedekind_rule(ctx, tau, 1, -1, 2, -1)),
];

fn dedekind_rule(ctx: &Ctx, tau: &CBall, a: i64, b: i64, c: i64, d: i64) -> (CBall, CBall) {
    let num = ctx.add(&ctx.mul_i64(tau, a), &ctx.from_int(b));
    let den = ctx.add(&ctx.mul_i64(tau, c), &ctx.from_int(d));
    let lhs = ctx.pow_u64(&eta_num(ctx, &ctx.div(&num, &den)), 12);
    let t = crate::latcheck::eta_multiplier_exponent(a, b, c, d);
    let rhs = ctx.mul(
        &ctx.mul(&phase(ctx, &t), &ctx.pow_i64(&den, 6)),
        &ctx.pow_u64(&eta_num(ctx, tau), 12),
    );
    (lhs, rhs)
}

/// Run one registry rule at a point.
pub fn transform_table_check(rule: usize, pt: &EvalPoint, tol: f64) -> Verdict {
    let ctx = Ctx::new(pt.prec);
    let tau = pt.tau(&ctx);
    let z = pt.z(&ctx);
    let (name, f) = RULES[rule];
    let (lhs, rhs) = f(&ctx, &tau, &z);
    verdict(&ctx, name, &lhs, &rhs, tol)
}

pub fn rule_count() -> usize {
    RULES.len()
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat_is_zero(r: &Rat) -> bool {
    r.is_zero()
}

pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

pub fn rat_i(n: i64) -> Rat {
    rat_int(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt() -> EvalPoint {
        EvalPoint::new((13, 100), (11, 10), (7, 100), (3, 100), 160)
    }

    #[test]
    fn eta_at_i_matches_classical_value() {
        // eta(i) = Gamma(1/4) / (2 pi^{3/4}) = 0.76822512755946...
        let ctx = Ctx::new(128);
        let tau = CBall::from_f64(0.0, 1.0);
        let v = eta_num(&ctx, &tau);
        let (re, im, rad) = v.to_f64();
        assert!((re - 0.7682254223260566).abs() < 1e-12, "re = {}", re);
        assert!(im.abs() < 1e-12);
        assert!(rad < 1e-25);
    }

    #[test]
    fn eval_series_geometric() {
        // 1/(1-x) at x = e^{-2 pi} (tau = i): compare with closed form
        let ctx = Ctx::new(96);
        let s = crate::qseries::geometric(1, 60);
        let tau = CBall::from_f64(0.0, 1.0);
        let u = e2pi(&ctx, &tau);
        let yh = ctx.from_int(1);
        let r = eval_series(&ctx, &s, &u, &yh);
        let want = ctx.inv(&ctx.sub(&ctx.from_int(1), &u));
        let d = ctx.diff_upper(&r.value, &want).to_f64();
        assert!(d < r.total_error() + 1e-25, "diff {} err {}", d, r.total_error());
    }

    #[test]
    fn theta_num_matches_series() {
        // numeric theta vs exact series evaluation
        let ctx = Ctx::new(128);
        let p = pt();
        let tau = p.tau(&ctx);
        let z = p.z(&ctx);
        let nv = theta_num(&ctx, NumTheta::A2Dual01, 0, &tau, &z);
        let series = crate::modforms::theta(crate::modforms::ThetaVariant::A2Dual01, 80);
        let u = e2pi(&ctx, &ctx.mul(&tau, &ctx.from_rat(&rat(1, 6))));
        let yh = e2pi(&ctx, &ctx.mul(&z, &ctx.from_rat(&rat(1, 2))));
        let sv = eval_series(&ctx, &series, &u, &yh);
        let d = ctx.diff_upper(&nv, &sv.value).to_f64();
        assert!(d < sv.total_error() + 1e-20, "diff {} vs {}", d, sv.total_error());
    }

    #[test]
    fn all_transform_rules_pass_at_sample_points() {
        let points = [
            EvalPoint::new((13, 100), (11, 10), (7, 100), (3, 100), 160),
            EvalPoint::new((-2, 5), (9, 10), (11, 100), (-1, 25), 160),
        ];
        for p in &points {
            for r in 0..rule_count() {
                let v = transform_table_check(r, p, 1e-20);
                assert!(v.pass, "rule '{}' residual {}", v.name, v.residual);
            }
        }
    }

    #[test]
    fn z_roots_num_consistent_with_vieta() {
        let ctx = Ctx::new(128);
        let p = pt();
        let tau = p.tau(&ctx);
        let z = p.z(&ctx);
        let (zp, zm) = z_roots_num(&ctx, 0, &tau, &z, 24);
        // Z+ Z- = Z + 3 Z(x,1)
        let th00 = theta_num(&ctx, NumTheta::A2Dual00, 0, &tau, &z);
        let th01 = theta_num(&ctx, NumTheta::A2Dual01, 0, &tau, &z);
        let th00_1 = theta_num(&ctx, NumTheta::A2Dual00, 0, &tau, &CBall::zero());
        let th01_1 = theta_num(&ctx, NumTheta::A2Dual01, 0, &tau, &CBall::zero());
        let zv = ctx.div(&th00, &th01);
        let z1 = ctx.div(&th00_1, &th01_1);
        let want = ctx.add(&zv, &ctx.mul_i64(&z1, 3));
        let got = ctx.mul(&zp, &zm);
        assert!(ctx.diff_upper(&got, &want).to_f64() < 1e-25);
    }
}

// ---------------------------------------------------------------------------
// Numeric generating functions and the T / S transformation checks
// ---------------------------------------------------------------------------

/// The c1-dependence of the generating functions: self-intersection, pairing
/// with K, and whether [c1] = [j K] in H^2/rH^2 (None for a generic class).
#[derive(Clone, Copy, Debug)]
pub struct C1Data {
    pub sq: i64,
    pub k: i64,
    pub atom: Option<i64>,
}

impl C1Data {
    pub fn from_class(s: &SurfaceData, c1: &[i64], r: i64) -> C1Data {
        let k = s.k_vec();
        let sq = s.pair(c1, c1);
        let ck = s.pair(c1, &k);
        let mut atom = None;
        for j in 0..r {
            let jk: Vec<i64> = k.iter().map(|x| j * x).collect();
            if s.delta(c1, &jk, r) {
                atom = Some(j);
                break;
            }
        }
        C1Data { sq, k: ck, atom }
    }
}

/// SW pair data driving the double (rank 3) or single (rank 2) sums.
struct SwPair {
    weight: i64,
    ab: i64,
    kakb: i64,
    amb_c1: i64,
    /// delta_{c1+a, b} for the monopole branch
    delta: bool,
}

fn sw_pairs_rank3(s: &SurfaceData, c1: &C1Data, r: i64) -> Vec<SwPair> {
    // SW classes are multiples of K for every supported surface here
    // (K3: only 0). Identify each class a = mA * K by pairing with K.
    let k = s.k_vec();
    let mut out = Vec::new();
    for (a, va) in &s.sw {
        for (b, vb) in &s.sw {
            let ma = multiple_of_k(s, a, &k);
            let mb = multiple_of_k(s, b, &k);
            let ab = ma * mb * s.k_sq;
            let kakb = (1 - ma) * (1 - mb) * s.k_sq;
            let amb_c1 = (ma - mb) * c1.k;
            // delta_{c1 + a, b} <=> c1 ≡ (mb - ma) K mod r H^2
            let delta = match c1.atom {
                None => false,
                Some(j) => {
                    if s.k_sq == 0 && s.k_vec().iter().all(|x| *x == 0) {
                        // K = 0 (K3): c1 must be ≡ 0
                        true
                    } else {
                        (j - (mb - ma)).rem_euclid(r) == 0
                    }
                }
            };
            out.push(SwPair { weight: va * vb, ab, kakb, amb_c1, delta });
        }
    }
    out
}

fn multiple_of_k(s: &SurfaceData, a: &[i64], k: &[i64]) -> i64 {
    if a.iter().all(|x| *x == 0) {
        return 0;
    }
    if a == k {
        return 1;
    }
    // E(n)-style classes jF with K = (n-2)F are not needed by the numeric
    // S-duality checks; restrict to the supported {0, K} configurations.
    panic!("numeric modularity checks support SW classes {{0, K}} (or K3) only");
}

/// Divided rank-3 total (instanton + monopole) at a point.
pub fn z3_num(
    ctx: &Ctx,
    s: &SurfaceData,
    c1: &C1Data,
    tau: &CBall,
    z: &CBall,
    include_inst: bool,
    include_mono: bool,
) -> CBall {
    let pairs = sw_pairs_rank3(s, c1, 3);
    let eps_c = Cyc::eps();
    let mut acc = CBall::zero();
    if include_inst {
        // three-term closed form; term k uses phiDelta at (tau + tk)/3 and
        // theta/root blocks at eps^{jk} q^{1/6}
        // weights in e^{pi i t}-units: eps^m = e^{pi i (2m/3)}
        let table: [(i64, i64, Rat); 3] = [
            (0, 0, rat_int(0)),
            (2, 1, rat(4 * c1.sq, 3)), // eps^{2 c1^2}
            (1, 2, rat(2 * c1.sq, 3) + rat_int(s.chi)), // (-1)^chi eps^{c1^2}
        ];
        for (shift, j, extra_t) in table {
            let tau3 = tau_shift(ctx, tau, shift, 3);
            let pd = phi_delta_half_num(ctx, &tau3, z);
            let b1 = ctx.pow_i64(&ctx.inv(&ctx.mul_i64(&pd, 3)), s.chi);
            let th01 = theta_num(ctx, NumTheta::A2Dual01, j, tau, z);
            let eta3 = ctx.pow_u64(&eta_num(ctx, tau), 3);
            let block = ctx.div(&th01, &ctx.mul_i64(&eta3, 3));
            let b2 = ctx.pow_i64(&block, -s.k_sq);
            let (zp, zm) = z_roots_num(ctx, j, tau, z, 24);
            let mut sum = CBall::zero();
            for p in &pairs {
                let ph = eps_c.pow(p.amb_c1).unwrap().embed(ctx);
                let term = ctx.mul(
                    &ctx.mul(&ctx.pow_i64(&zp, p.ab), &ctx.pow_i64(&zm, p.kakb)),
                    &ctx.mul_i64(&ph, p.weight),
                );
                sum = ctx.add(&sum, &term);
            }
            let w = phase(ctx, &extra_t);
            let term = ctx.mul_i64(&ctx.mul(&ctx.mul(&b1, &b2), &ctx.mul(&sum, &w)), 3);
            acc = ctx.add(&acc, &term);
        }
    }
    if include_mono {
        let three = ctx.from_int(3);
        let pd3 = phi_delta_half_num(ctx, &ctx.mul(tau, &three), &ctx.mul(z, &three));
        let b1 = ctx.pow_i64(&ctx.inv(&pd3), s.chi);
        let th10 = theta_num(ctx, NumTheta::A2_10, 0, tau, z);
        let eta3 = ctx.pow_u64(&eta_num(ctx, tau), 3);
        let b2 = ctx.pow_i64(&ctx.div(&th10, &eta3), -s.k_sq);
        let (wp, wm) = w_roots_num(ctx, tau, z, 24);
        let mut sum = CBall::zero();
        let mut any = false;
        for p in &pairs {
            if !p.delta {
                continue;
            }
            any = true;
            let term = ctx.mul_i64(
                &ctx.mul(&ctx.pow_i64(&wp, p.ab), &ctx.pow_i64(&wm, p.kakb)),
                p.weight,
            );
            sum = ctx.add(&sum, &term);
        }
        if any {
            acc = ctx.add(&acc, &ctx.mul(&ctx.mul(&b1, &b2), &sum));
        }
    }
    acc
}

/// Divided rank-2 total (instanton + monopole) at a point.
pub fn z2_num(
    ctx: &Ctx,
    s: &SurfaceData,
    c1: &C1Data,
    tau: &CBall,
    z: &CBall,
    include_inst: bool,
    include_mono: bool,
) -> CBall {
    let k = s.k_vec();
    let mut acc = CBall::zero();
    let th3 = theta_num(ctx, NumTheta::Theta3, 0, tau, z);
    let th2 = theta_num(ctx, NumTheta::Theta2, 0, tau, z);
    let eta2 = ctx.pow_u64(&eta_num(ctx, tau), 2);
    if include_inst {
        let i_ball = Cyc::i().embed(ctx);
        for which in 0..2 {
            let tau2 = tau_shift(ctx, tau, which, 2);
            let pd = phi_delta_half_num(ctx, &tau2, z);
            let b1 = ctx.pow_i64(&ctx.inv(&ctx.mul_i64(&pd, 2)), s.chi);
            let (upper, lower) = if which == 0 {
                (ctx.add(&th3, &th2), ctx.sub(&th3, &th2))
            } else {
                (
                    ctx.add(&th3, &ctx.mul(&i_ball, &th2)),
                    ctx.sub(&th3, &ctx.mul(&i_ball, &th2)),
                )
            };
            let b2 = ctx.pow_i64(&ctx.div(&upper, &ctx.mul_i64(&eta2, 2)), -s.k_sq);
            let ratio = ctx.div(&upper, &lower);
            let mut sum = CBall::zero();
            for (a, va) in &s.sw {
                let ma = multiple_of_k(s, a, &k);
                let sgn = if (ma * c1.k).rem_euclid(2) == 0 { 1 } else { -1 };
                let term = ctx.mul_i64(&ctx.pow_i64(&ratio, ma * s.k_sq), va * sgn);
                sum = ctx.add(&sum, &term);
            }
            let w = if which == 0 {
                ctx.from_int(1)
            } else {
                Cyc::i().pow(c1.sq).unwrap().embed(ctx)
            };
            let term = ctx.mul_i64(&ctx.mul(&ctx.mul(&b1, &b2), &ctx.mul(&sum, &w)), 2);
            acc = ctx.add(&acc, &term);
        }
    }
    if include_mono {
        let two = ctx.from_int(2);
        let pd2 = phi_delta_half_num(ctx, &ctx.mul(tau, &two), &ctx.mul(z, &two));
        let b1 = ctx.pow_i64(&ctx.inv(&pd2), s.chi);
        let b2 = ctx.pow_i64(&ctx.div(&th3, &eta2), -s.k_sq);
        let ratio = ctx.div(&th3, &th2);
        let mut sum = CBall::zero();
        let mut any = false;
        for (a, va) in &s.sw {
            let ma = multiple_of_k(s, a, &k);
            // delta_{c1, a}: [c1] = [ma K] mod 2
            let ok = match c1.atom {
                None => false,
                Some(j) => {
                    if k.iter().all(|x| *x == 0) {
                        true
                    } else {
                        (j - ma).rem_euclid(2) == 0
                    }
                }
            };
            if !ok {
                continue;
            }
            any = true;
            sum = ctx.add(&sum, &ctx.mul_i64(&ctx.pow_i64(&ratio, ma * s.k_sq), *va));
        }
        if any {
            let sgn = if s.chi.rem_euclid(2) == 0 { 1 } else { -1 };
            acc = ctx.add(&acc, &ctx.mul_i64(&ctx.mul(&ctx.mul(&b1, &b2), &sum), sgn));
        }
    }
    acc
}

/// Divided rank-1 generating function at a point.
pub fn z1_num(ctx: &Ctx, s: &SurfaceData, tau: &CBall, z: &CBall) -> CBall {
    let pd = phi_delta_half_num(ctx, tau, z);
    let b1 = ctx.pow_i64(&ctx.inv(&pd), s.chi);
    let eta = eta_num(ctx, tau);
    ctx.mul(&b1, &ctx.pow_i64(&eta, s.k_sq))
}

pub fn z_num_total(
    ctx: &Ctx,
    s: &SurfaceData,
    rank: u8,
    c1: &C1Data,
    tau: &CBall,
    z: &CBall,
) -> CBall {
    match rank {
        1 => z1_num(ctx, s, tau, z),
        2 => z2_num(ctx, s, c1, tau, z, true, true),
        3 => z3_num(ctx, s, c1, tau, z, true, true),
        _ => panic!("rank must be 1, 2 or 3"),
    }
}

/// tau -> tau + 1 check: Z(tau+1, z) = (-1)^{r chi} e^{i pi r K^2/12}
/// e^{-i pi (r-1) c1^2 / r} Z(tau, z).
pub fn check_t(s: &SurfaceData, rank: u8, c1_expr: &str, pt: &EvalPoint, tol: f64) -> Verdict {
    let ctx = Ctx::new(pt.prec);
    let tau = pt.tau(&ctx);
    let z = pt.z(&ctx);
    let c1v = s.parse_class(c1_expr).expect("c1 class");
    let c1 = C1Data::from_class(s, &c1v, rank.max(2) as i64);
    let lhs = z_num_total(&ctx, s, rank, &c1, &ctx.add(&tau, &ctx.from_int(1)), &z);
    let r = rank as i64;
    let t = rat_int(r * s.chi) + rat(r * s.k_sq, 12) - rat(2 * (r - 1) * c1.sq, 2 * r);
    let rhs = ctx.mul(&phase(&ctx, &t), &z_num_total(&ctx, s, rank, &c1, &tau, &z));
    verdict(&ctx, &format!("T transform: rank {} {} c1={}", rank, s.name, c1_expr), &lhs, &rhs, tol)
}

/// Closed-form weighted class sum over H^2/rH^2 with invariants (b2, sigma):
/// S(kappa, c') = sum_x w^{c'.x} q(kappa)^{x^2} expressed by the lattice
/// propositions; returned in Q(zeta_24).
fn grouped_char_sum(
    b2: i64,
    sigma: i64,
    r: i64,
    kappa: i64,
    cp_sq: i64,
    cp_divisible: bool,
) -> Cyc {
    let pow_int = |base: i64, e: i64| -> Rat { num::pow::pow(rat_int(base), e as usize) };
    if kappa.rem_euclid(if r == 2 { 4 } else { r }) == 0 {
        return if cp_divisible {
            Cyc::from_rat(pow_int(r, b2))
        } else {
            Cyc::zero(12)
        };
    }
    if r == 2 {
        let kappa = kappa.rem_euclid(4);
        if kappa == 2 {
            // (-1)^{x^2} = (-1)^{x K}: handled by the caller through cp_divisible
            // of c' + K; not reachable here.
            unreachable!("kappa = 2 handled by the caller");
        }
        // kappa = 1: 2^{b2/2} zeta_8^{sigma - 2 c'^2}; kappa = 3: conjugate
        let sqrt2 = Cyc::root_of_unity(8, 1).add(&Cyc::root_of_unity(8, -1));
        let mut v = Cyc::from_rat(pow_int(2, b2.div_euclid(2)));
        if b2.rem_euclid(2) == 1 {
            v = v.mul(&sqrt2);
        }
        let e = sigma - 2 * cp_sq;
        let ph = if kappa == 1 {
            Cyc::root_of_unity(8, e)
        } else {
            Cyc::root_of_unity(8, -e)
        };
        return v.mul(&ph);
    }
    // r odd prime, kappa in 1..r: e^{2 pi i kappa x^2/r} = e^{pi i (r-1) m x^2/r}
    // with m = kappa * inverse_of((r-1)/2) mod r... here (r-1)/2 * m ≡ kappa.
    let half_r1 = (r - 1) / 2;
    let mut m = 0;
    for cand in 1..r {
        if (half_r1 * cand).rem_euclid(r) == kappa.rem_euclid(r) {
            m = cand;
            break;
        }
    }
    let eps_m = if m.rem_euclid(2) == 0 {
        crate::latcheck::legendre(m.div_euclid(2).rem_euclid(r), r)
    } else {
        crate::latcheck::legendre((m + r) / 2, r)
    };
    let mut n = 0;
    for cand in 1..r {
        if (m * cand).rem_euclid(r) == r - 1 {
            n = cand;
            break;
        }
    }
    let g1 = crate::latcheck::gauss_sum(1, r).expect("gauss");
    let sqrt_r = if r % 4 == 1 { g1 } else { Cyc::i().inv().unwrap().mul(&g1) };
    let mut v = Cyc::from_rat(pow_int(r, b2.div_euclid(2)));
    if b2.rem_euclid(2) == 1 {
        v = v.mul(&sqrt_r);
    }
    let ph1 = Cyc::root_of_unity(8, -((r - 1) * (r - 1) / 2) * sigma);
    let ph2 = Cyc::root_of_unity(r as u32, half_r1 * n * cp_sq);
    v.mul(&ph1).mul(&ph2).mul_rat(&num::pow::pow(rat_int(eps_m), b2 as usize))
}

/// Weighted count W(q0, lambda) = sum over classes [a] with a^2 ≡ q0 (mod rho)
/// and aK ≡ lambda (mod r) of e^{2 pi i (c1.a)/r}, as an exact cyclotomic
/// number. `c` is c1 = c*K (c in {0, 1}); K3 surfaces use the K = 0 path.
fn bucket_weight(s: &SurfaceData, r: i64, c: i64, q0: i64, lambda: i64) -> Cyc {
    let rho = if r == 2 { 4 } else { r };
    let b2 = s.b2();
    let sigma = s.sigma();
    let k = s.k_vec();
    let k_zero = k.iter().all(|x| *x == 0);
    let mut acc = Cyc::zero(24);
    let mu_range = if k_zero { 1 } else { r };
    let lam_terms = if k_zero { 1 } else { r };
    for kappa in 0..rho {
        for mu in 0..mu_range {
            // c' = (c + mu) K
            let cm = c + mu;
            let cp_sq = cm * cm * s.k_sq;
            let cp_div = if k_zero {
                true
            } else {
                let cpk: Vec<i64> = k.iter().map(|x| cm * x).collect();
                s.divisible(&cpk, r)
            };
            let term = if r == 2 && kappa == 2 {
                // (-1)^{x^2} = (-1)^{xK} (Wu): shifts c' by K
                let cm2 = cm + 1;
                let div = if k_zero {
                    true
                } else {
                    let v: Vec<i64> = k.iter().map(|x| cm2 * x).collect();
                    s.divisible(&v, 2)
                };
                if div {
                    Cyc::from_rat(num::pow::pow(rat_int(2), b2 as usize))
                } else {
                    Cyc::zero(12)
                }
            } else {
                grouped_char_sum(b2, sigma, r, kappa, cp_sq, cp_div)
            };
            // inverse Fourier characters
            let w1 = Cyc::root_of_unity((2 * rho) as u32, -2 * kappa * q0);
            let w2 = Cyc::root_of_unity((2 * r) as u32, -2 * mu * lambda);
            acc = acc.add(&term.mul(&w1).mul(&w2));
        }
    }
    acc.mul_rat(&(rat(1, rho) * rat(1, lam_terms)))
}

/// The S-duality check at a point:
/// Zdiv(-1/tau, z/tau) = (-1)^{r chi} r^{1-e/2} i^{-K^2/2} tau^{-5 chi + K^2/2}
///   e^{(2 pi i z^2/tau)(-r chi/2 - (r-1)^2 K^2/4)}
///   sum_{[a]} e^{2 pi i c1 a / r} Zdiv_a(tau, z).
pub fn check_s(s: &SurfaceData, rank: u8, c1_expr: &str, pt: &EvalPoint, tol: f64) -> Verdict {
    assert!(rank == 1 || rank == 2 || rank == 3);
    let ctx = Ctx::new(pt.prec);
    let tau = pt.tau(&ctx);
    let z = pt.z(&ctx);
    let r = rank as i64;
    let (mt, zz) = s_transform(&ctx, &tau, &z);
    let c1v = s.parse_class(c1_expr).expect("c1 class");
    let c1 = C1Data::from_class(s, &c1v, r.max(2));
    let name = format!("S transform: rank {} {} c1={}", rank, s.name, c1_expr);

    let lhs = z_num_total(&ctx, s, rank, &c1, &mt, &zz);

    // prefactors
    let sgn = rat_int(r * s.chi); // (-1)^{r chi} = e^{i pi r chi}
    let i_pow = rat(-s.k_sq, 4); // i^{-K^2/2} = e^{i pi (-K^2/4)}
    let pre_phase = phase(&ctx, &(sgn + i_pow));
    let r_pow = ctx.pow_rat(&ctx.from_int(r), 2 - s.e(), 2);
    let tau_pow = ctx.pow_rat(&tau, -10 * s.chi + s.k_sq, 2);
    let gauss = gauss_factor(&ctx, &tau, &z, &(rat_int(-r * s.chi) - rat((r - 1) * (r - 1) * s.k_sq, 2)));
    let pre = ctx.mul(&ctx.mul(&pre_phase, &r_pow), &ctx.mul(&tau_pow, &gauss));

    // the class sum
    let mut sum = CBall::zero();
    if rank == 1 {
        sum = z1_num(&ctx, s, &tau, &z);
    } else {
        let k = s.k_vec();
        let k_zero = k.iter().all(|x| *x == 0);
        let c = c1.atom.expect("check_s: c1 must be 0 or K for the grouped sum");
        let rho = if r == 2 { 4 } else { r };
        // atoms [jK]
        let mut atom_bucket: Vec<(i64, i64)> = Vec::new();
        let n_atoms = if k_zero { 1 } else { r };
        for j in 0..n_atoms {
            let a = C1Data { sq: j * j * s.k_sq, k: j * s.k_sq, atom: Some(j) };
            let w = Cyc::root_of_unity((2 * r) as u32, 2 * c * j * s.k_sq); // e^{2 pi i (cK . jK)/r}
            let v = z_num_total(&ctx, s, rank, &a, &tau, &z);
            sum = ctx.add(&sum, &ctx.mul(&w.embed(&ctx), &v));
            atom_bucket.push(((j * j * s.k_sq).rem_euclid(rho), (j * s.k_sq).rem_euclid(r)));
        }
        // generic buckets (the aK-grading is trivial when K = 0)
        let lam_range = if k_zero { 1 } else { r };
        let mut count_check = Cyc::zero(24);
        for q0 in 0..rho {
            for lambda in 0..lam_range {
                let w_all = bucket_weight(s, r, c, q0, lambda);
                // counting consistency accumulates the c = 0 weights
                count_check = count_check.add(&bucket_weight(s, r, 0, q0, lambda));
                let mut w = w_all;
                for (j, (aq, al)) in atom_bucket.iter().enumerate() {
                    if *aq == q0 && *al == lambda {
                        let ph = Cyc::root_of_unity((2 * r) as u32, 2 * c * (j as i64) * s.k_sq);
                        w = w.sub(&ph);
                    }
                }
                if w.is_zero() {
                    continue;
                }
                // representative class with the right parity (Wu)
                let mut rep_sq = q0;
                let mut found = false;
                for _ in 0..8 {
                    if (rep_sq - lambda).rem_euclid(2) == 0 {
                        found = true;
                        break;
                    }
                    rep_sq += rho;
                }
                assert!(found, "nonzero weight {:?} in a Wu-violating bucket", w);
                let a = C1Data { sq: rep_sq, k: lambda, atom: None };
                // generic classes have no monopole contribution
                let v = match rank {
                    2 => z2_num(&ctx, s, &a, &tau, &z, true, false),
                    _ => z3_num(&ctx, s, &a, &tau, &z, true, false),
                };
                sum = ctx.add(&sum, &ctx.mul(&w.embed(&ctx), &v));
            }
        }
        // grouped-count consistency: total number of classes is r^{b2}
        let total: Cyc = count_check;
        let expect = Cyc::from_rat(num::pow::pow(rat_int(r), s.b2() as usize));
        assert!(
            total.equals(&expect),
            "grouped counts sum to {:?}, expected r^b2",
            total
        );
    }
    let rhs = ctx.mul(&pre, &sum);
    verdict(&ctx, &name, &lhs, &rhs, tol)
}

#[cfg(test)]
mod sduality_tests {
    use super::*;
    use crate::surfdata::preset;

    fn pt() -> EvalPoint {
        EvalPoint::new((1, 5), (2, 1), (1, 10), (1, 20), 192)
    }

    #[test]
    fn check_t_rank1_e3() {
        let s = preset("E3").unwrap();
        let v = check_t(&s, 1, "0", &pt(), 1e-20);
        assert!(v.pass, "{}: residual {}", v.name, v.residual);
    }

    #[test]
    fn check_t_rank3_kanev() {
        let s = preset("kanev").unwrap();
        for c1 in ["0", "K"] {
            let v = check_t(&s, 3, c1, &pt(), 1e-20);
            assert!(v.pass, "{}: residual {}", v.name, v.residual);
        }
    }

    #[test]
    fn check_t_rank2_k3() {
        let s = preset("K3").unwrap();
        let v = check_t(&s, 2, "0", &pt(), 1e-20);
        assert!(v.pass, "{}: residual {}", v.name, v.residual);
    }

    #[test]
    fn check_t_negative_control() {
        // a deliberately wrong phase must fail
        let s = preset("kanev").unwrap();
        let ctx = Ctx::new(160);
        let p = pt();
        let tau = p.tau(&ctx);
        let z = p.z(&ctx);
        let c1 = C1Data::from_class(&s, &s.class("K").unwrap(), 3);
        let lhs = z3_num(&ctx, &s, &c1, &ctx.add(&tau, &ctx.from_int(1)), &z, true, true);
        let wrong = ctx.mul(
            &phase(&ctx, &rat(1, 7)),
            &z3_num(&ctx, &s, &c1, &tau, &z, true, true),
        );
        let v = verdict(&ctx, "wrong phase", &lhs, &wrong, 1e-20);
        assert!(!v.pass);
    }

    #[test]
    fn check_s_rank1_e3() {
        let s = preset("E3").unwrap();
        let v = check_s(&s, 1, "0", &pt(), 1e-20);
        assert!(v.pass, "{}: residual {}", v.name, v.residual);
    }

    #[test]
    fn check_s_rank2_kanev() {
        let s = preset("kanev").unwrap();
        for c1 in ["0", "K"] {
            let v = check_s(&s, 2, c1, &pt(), 1e-20);
            assert!(v.pass, "{}: residual {}", v.name, v.residual);
        }
    }

    #[test]
    fn check_s_rank3_k3() {
        let s = preset("K3").unwrap();
        let v = check_s(&s, 3, "0", &pt(), 1e-20);
        assert!(v.pass, "{}: residual {}", v.name, v.residual);
    }

    #[test]
    fn check_s_rank3_kanev() {
        let s = preset("kanev").unwrap();
        for c1 in ["0", "K"] {
            let v = check_s(&s, 3, c1, &pt(), 1e-20);
            assert!(v.pass, "{}: residual {}", v.name, v.residual);
        }
    }

    #[test]
    fn t_sixfold_composition() {
        // applying T six times = multiplying by the sixth power of the phase,
        // with the phases multiplying exactly in Q(zeta_12)
        let s = preset("kanev").unwrap();
        let ctx = Ctx::new(160);
        let p = pt();
        let tau = p.tau(&ctx);
        let z = p.z(&ctx);
        let c1 = C1Data::from_class(&s, &s.class("K").unwrap(), 3);
        let lhs = z3_num(&ctx, &s, &c1, &ctx.add(&tau, &ctx.from_int(6)), &z, true, true);
        let t = rat_int(3 * s.chi) + rat(3 * s.k_sq, 12) - rat(2 * 2 * c1.sq, 6);
        let t6 = t * rat_int(6);
        let rhs = ctx.mul(&phase(&ctx, &t6), &z3_num(&ctx, &s, &c1, &tau, &z, true, true));
        let v = verdict(&ctx, "T^6", &lhs, &rhs, 1e-20);
        assert!(v.pass, "residual {}", v.residual);
    }
}
