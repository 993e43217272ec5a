//! Modular and Jacobi building blocks: the normalized Dedekind eta product,
//! the four A2-family lattice theta functions, theta_2/theta_3, the
//! half-integral Jacobi combination phi_{-2,1}^{1/2} Delta^{1/2}, the theta
//! quotients Z and W, and the quadratic-root pairs Z± / W±.
//!
//! Conventions: a `BiSeries` returned here is a formal series in its stated
//! nome. The A2-family thetas are series in x with
//!   Theta_{A2,(0,0)}(x,y)  = sum x^{2(m^2-mn+n^2)} y^{m+n},
//!   Theta_{A2,(1,0)}(x,y)  = sum x^{2(m^2-mn+n^2+m-n+1/3)} y^{m+n},
//!   Theta_{A2v,(0,0)}(x,y) = sum x^{2(m^2+mn+n^2)} y^{m+n},
//!   Theta_{A2v,(0,1)}(x,y) = sum eps^{m-n} x^{2(m^2+mn+n^2)} y^{m+n},
//! and theta_3(q,y) = sum q^{n^2} y^n, theta_2(q,y) = sum_{n in Z+1/2} q^{n^2} y^n.

use crate::exactnum::{rat, Cyc};
use crate::qseries::{BiSeries, FSeries, RatSeries, SeriesError, YPoly};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::Mutex;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ThetaVariant {
    A2_00,
    A2_10,
    A2Dual00,
    A2Dual01,
    Theta2,
    Theta3,
}

/// Normalized eta: prod_{n>0} (1 - x^n), truncated at x^order.
pub fn eta_bar(order: i64) -> BiSeries {
    let mut s = BiSeries::one(1, order);
    for n in 1..order {
        let mut f = BiSeries::one(1, order);
        f.set(n, YPoly::from_int(-1));
        s = s.mul(&f);
    }
    s
}

/// prod_{n>0} (1 - x^{step*n})^{e0} (1 - x^{step*n} y)^{e1} (1 - x^{step*n} y^{-1})^{e1},
/// the generic eta-with-y product (e0, e1 >= 0).
pub fn jacobi_prod(order: i64, step: i64, e0: i64, e1: i64) -> BiSeries {
    let mut s = BiSeries::one(1, order);
    let mut n = step;
    while n < order {
        let mut plain = BiSeries::one(1, order);
        plain.set(n, YPoly::from_int(-1));
        s = s.mul(&plain.pow_int(e0).unwrap());
        if e1 != 0 {
            let mut fy = BiSeries::one(1, order);
            fy.set(n, YPoly::monomial(Cyc::from_i64(-1), 2));
            let mut fyi = BiSeries::one(1, order);
            fyi.set(n, YPoly::monomial(Cyc::from_i64(-1), -2));
            s = s.mul(&fy.pow_int(e1).unwrap()).mul(&fyi.pow_int(e1).unwrap());
        }
        n += step;
    }
    s
}

/// phi_{-2,1}(q,y)^{1/2} Delta(q)^{1/2}
///   = (y^{1/2} - y^{-1/2}) q^{1/2} prod (1-q^n)^{10} (1-q^n y)(1-q^n y^{-1}),
/// as a series in q with exponent denominator 2, truncated at q^order.
pub fn phi_delta_half(order: i64) -> BiSeries {
    let prod = jacobi_prod(order, 1, 10, 1);
    let lead = YPoly::monomial(Cyc::from_i64(1), 1).add(&YPoly::monomial(Cyc::from_i64(-1), -1));
    let front = BiSeries::monomial(2, 2 * order, 1, lead);
    front.mul(&prod.with_den(2))
}

/// phi_{-2,1}(q,y) Delta(q) (the square of `phi_delta_half`), integer exponents.
pub fn phi_delta_full(order: i64) -> BiSeries {
    let h = phi_delta_half(order);
    h.mul(&h).normalize_den()
}

/// Lattice theta series truncated at x^order.
pub fn theta(variant: ThetaVariant, order: i64) -> BiSeries {
    match variant {
        ThetaVariant::A2_00 => theta_a2_family(order, false, false),
        ThetaVariant::A2_10 => theta_a2_shifted(order),
        ThetaVariant::A2Dual00 => theta_a2_family(order, true, false),
        ThetaVariant::A2Dual01 => theta_a2_family(order, true, true),
        ThetaVariant::Theta2 => theta2(order),
        ThetaVariant::Theta3 => theta3(order),
    }
}

fn theta_a2_family(order: i64, dual: bool, eps_weight: bool) -> BiSeries {
    // exponent 2(m^2 ∓ mn + n^2) >= m^2 + n^2, so |m|,|n| <= sqrt(order) suffices
    let r = int_sqrt(order) + 1;
    let mut s = BiSeries::zero(1, order);
    let eps = Cyc::eps();
    for m in -r..=r {
        for n in -r..=r {
            let q = if dual { m * m + m * n + n * n } else { m * m - m * n + n * n };
            let key = 2 * q;
            if key >= order {
                continue;
            }
            let w = if eps_weight { eps.pow(m - n).unwrap() } else { Cyc::from_i64(1) };
            let c = s.coeff(key).add(&YPoly::monomial(w, 2 * (m + n)));
            s.set(key, c);
        }
    }
    s
}

fn theta_a2_shifted(order: i64) -> BiSeries {
    // exponents 2(m^2-mn+n^2+m-n) + 2/3 = 2 Q(m+1/3, n-1/3); scaled by 3: 6(...) + 2
    let r = int_sqrt(order) + 2;
    let mut s = BiSeries::zero(3, 3 * order);
    for m in -r..=r {
        for n in -r..=r {
            let q = m * m - m * n + n * n + m - n;
            let key = 6 * q + 2;
            if key >= 3 * order || key < 0 {
                continue;
            }
            let c = s.coeff(key).add(&YPoly::monomial(Cyc::from_i64(1), 2 * (m + n)));
            s.set(key, c);
        }
    }
    s
}

fn theta3(order: i64) -> BiSeries {
    let r = int_sqrt(order) + 1;
    let mut s = BiSeries::zero(1, order);
    for n in -r..=r {
        let key = n * n;
        if key < order {
            let c = s.coeff(key).add(&YPoly::monomial(Cyc::from_i64(1), 2 * n));
            s.set(key, c);
        }
    }
    s
}

fn theta2(order: i64) -> BiSeries {
    // n = k + 1/2: exponents (2k+1)^2/4, scaled by 4
    let r = int_sqrt(4 * order) + 2;
    let mut s = BiSeries::zero(4, 4 * order);
    for k in -r..=r {
        let t = 2 * k + 1;
        let key = t * t;
        if key < 4 * order {
            let c = s.coeff(key).add(&YPoly::monomial(Cyc::from_i64(1), t));
            s.set(key, c);
        }
    }
    s
}

fn int_sqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

/// Z(x,y) = Theta_{A2v,(0,0)}(x,y) / Theta_{A2v,(0,1)}(x,y); constant term 1.
pub fn z_ratio(order: i64) -> BiSeries {
    let num = theta(ThetaVariant::A2Dual00, order);
    let den = theta(ThetaVariant::A2Dual01, order);
    num.mul(&den.invert().expect("Theta_{A2v,(0,1)} has unit constant term"))
}

/// W(x,y) = Theta_{A2,(0,0)}(x,y) / Theta_{A2,(1,0)}(x,y), as a formal
/// quotient: its leading coefficient (y+1+y^{-1})^{-1} is not a Laurent
/// polynomial, so W is not a plain BiSeries.
pub fn w_ratio(order: i64) -> RatSeries {
    RatSeries {
        num: theta(ThetaVariant::A2_00, order).with_den(3),
        den: theta(ThetaVariant::A2_10, order),
    }
}

/// W as a fraction-field series (coefficients rational in y).
pub fn w_ratio_f(order: i64) -> FSeries {
    let w = w_ratio(order);
    FSeries::from_biseries(&w.num)
        .mul(&FSeries::from_biseries(&w.den).invert().expect("Theta_{A2,(1,0)} nonzero"))
}

/// Both solutions of zeta^2 - (R^2 + 3 R R1) zeta + (R + 3 R1) = 0 with
/// R1 = R(x,1), for R = Z or W.
#[derive(Clone, Debug)]
pub struct RootPair {
    pub plus: FSeries,
    pub minus: FSeries,
    pub convention: String,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QuadKind {
    Z,
    W,
}

pub fn quadratic_roots(kind: QuadKind, order: i64) -> Result<RootPair, SeriesError> {
    let r = match kind {
        QuadKind::Z => FSeries::from_biseries(&z_ratio(order)),
        QuadKind::W => w_ratio_f(order),
    };
    let r1 = r.specialize_y1();
    let s = r.mul(&r).add(&r.mul(&r1).scale(&Cyc::from_i64(3)));
    let p = r.add(&r1.scale(&Cyc::from_i64(3)));
    let disc = s.mul(&s).sub(&p.scale(&Cyc::from_i64(4)));
    let sqrt_disc = disc.sqrt()?;
    let half = Cyc::from_rat(rat(1, 2));
    let plus = s.add(&sqrt_disc).scale(&half);
    let minus = s.sub(&sqrt_disc).scale(&half);
    match kind {
        QuadKind::Z => Ok(RootPair {
            plus,
            minus,
            convention: "Z+: plus sign with sqrt leading coefficient of positive real part \
                         (sqrt(108) = 6 sqrt(3), sqrt(3) = -i(2 eps + 1))"
                .into(),
        }),
        QuadKind::W => {
            // W- is the root with leading exponent +2/3, so that
            // (y+1+y^{-1}) q^{1/3} / W-(q^{1/2},y) starts with constant 1.
            let val = |r: &FSeries| r.val() as f64 / r.den as f64;
            let (plus, minus) =
                if val(&minus) > val(&plus) { (plus, minus) } else { (minus, plus) };
            Ok(RootPair {
                plus,
                minus,
                convention: "W-: root with leading exponent x^{2/3} (Laurent-series \
                             normalization starting at constant 1)"
                    .into(),
            })
        }
    }
}

static Z_ROOT_CACHE: Lazy<Mutex<HashMap<i64, (BiSeries, BiSeries)>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));
static W_ROOT_CACHE: Lazy<Mutex<HashMap<i64, RootPair>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Z± as plain series (their coefficients are Laurent polynomials). Cached.
pub fn z_roots_plain(order: i64) -> Result<(BiSeries, BiSeries), SeriesError> {
    if let Some(p) = Z_ROOT_CACHE.lock().unwrap().get(&order) {
        return Ok(p.clone());
    }
    let pair = quadratic_roots(QuadKind::Z, order)?;
    let out = (pair.plus.to_biseries()?, pair.minus.to_biseries()?);
    Z_ROOT_CACHE.lock().unwrap().insert(order, out.clone());
    Ok(out)
}

/// Cached W-root pair.
pub fn w_roots_cached(order: i64) -> Result<RootPair, SeriesError> {
    if let Some(p) = W_ROOT_CACHE.lock().unwrap().get(&order) {
        return Ok(p.clone());
    }
    let pair = quadratic_roots(QuadKind::W, order)?;
    W_ROOT_CACHE.lock().unwrap().insert(order, pair.clone());
    Ok(pair)
}

/// One identity check report.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub name: String,
    pub pass: bool,
    /// first failing exponent (num, den) in the common variable, if any
    pub first_failure: Option<(i64, i64)>,
}

/// The six theta identities relating the A2-family functions at arguments
/// q^{1/2}, q^{1/6}, eps^k q^{1/6}, checked as exact series in u = q^{1/6}
/// through u^order.
pub fn theta_identity_suite(order: i64) -> Vec<IdentityReport> {
    let eps = Cyc::eps();
    let one = Cyc::from_i64(1);
    let half = Cyc::from_rat(rat(1, 2));
    // Theta(q^{1/2}) as u-series: x = q^{1/2} = u^3.
    let a2_00 = theta(ThetaVariant::A2_00, order / 3 + 2).subst_x_power(3, 1);
    let a2_10 = theta(ThetaVariant::A2_10, order / 3 + 2).subst_x_power(3, 1);
    let av_00 = theta(ThetaVariant::A2Dual00, order + 1);
    let av_01 = theta(ThetaVariant::A2Dual01, order + 1);
    let scaled = |s: &BiSeries, k: i64| s.scale_x(&eps.pow(k).unwrap());
    let mut out = Vec::new();
    let mut check = |name: &str, lhs: BiSeries, rhs: BiSeries| {
        let lhs = truncate_to(&lhs, order);
        let rhs = truncate_to(&rhs, order);
        let diff = lhs.first_difference(&rhs);
        out.push(IdentityReport { name: name.into(), pass: diff.is_none(), first_failure: diff });
    };
    check(
        "A2_10(q^1/2) = -1/2 A2_00(q^1/2) + 1/2 A2v_00(q^1/6)",
        a2_10.clone(),
        a2_00.scale(&half.neg()).add(&av_00.scale(&half)),
    );
    check(
        "A2v_01(q^1/6) = 3/2 A2_00(q^1/2) - 1/2 A2v_00(q^1/6)",
        av_01.clone(),
        a2_00.scale(&Cyc::from_rat(rat(3, 2))).sub(&av_00.scale(&half)),
    );
    check(
        "A2v_00(eps q^1/6) = (2+eps) A2_00(q^1/2) - (1+eps) A2v_00(q^1/6)",
        scaled(&av_00, 1),
        a2_00.scale(&eps.add(&Cyc::from_i64(2))).sub(&av_00.scale(&eps.add(&one))),
    );
    check(
        "A2v_00(eps^2 q^1/6) = (1-eps) A2_00(q^1/2) + eps A2v_00(q^1/6)",
        scaled(&av_00, 2),
        a2_00.scale(&one.sub(&eps)).add(&av_00.scale(&eps)),
    );
    check(
        "A2v_01(eps q^1/6) = (1-eps)/2 A2_00(q^1/2) + (1+eps)/2 A2v_00(q^1/6)",
        scaled(&av_01, 1),
        a2_00.scale(&one.sub(&eps).mul(&half)).add(&av_00.scale(&one.add(&eps).mul(&half))),
    );
    check(
        "A2v_01(eps^2 q^1/6) = (1+eps/2) A2_00(q^1/2) - eps/2 A2v_00(q^1/6)",
        scaled(&av_01, 2),
        a2_00.scale(&one.add(&eps.mul(&half))).sub(&av_00.scale(&eps.mul(&half))),
    );
    out
}

fn truncate_to(s: &BiSeries, order_units: i64) -> BiSeries {
    let t = order_units * s.den;
    let mut out = s.clone();
    if out.trunc > t {
        out.trunc = t;
        out.terms.retain(|k, _| *k < t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_int;

    #[test]
    fn eta_bar_pentagonal() {
        let e = eta_bar(20);
        let expect: &[(i64, i64)] = &[(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)];
        for (k, v) in expect {
            assert!(e.coeff(*k).get(0).equals(&Cyc::from_i64(*v)), "x^{}", k);
        }
        assert!(e.coeff(3).is_zero());
    }

    #[test]
    fn theta_a2_first_shell() {
        // Theta_{A2,(0,0)} = 1 + x^2(y^2 + 2y + 2y^{-1} + y^{-2}) + O(x^4)
        let t = theta(ThetaVariant::A2_00, 6);
        assert_eq!(t.coeff(0), YPoly::one());
        let c2 = t.coeff(2);
        assert!(c2.get(4).equals(&Cyc::from_i64(1)));
        assert!(c2.get(2).equals(&Cyc::from_i64(2)));
        assert!(c2.get(0).is_zero());
        assert!(c2.get(-2).equals(&Cyc::from_i64(2)));
        assert!(c2.get(-4).equals(&Cyc::from_i64(1)));
    }

    #[test]
    fn theta_a2dual01_first_shell() {
        // 1 - x^2 (y + 1 + y^{-1}) + O(x^4)
        let t = theta(ThetaVariant::A2Dual01, 6);
        assert_eq!(t.coeff(0), YPoly::one());
        let c2 = t.coeff(2);
        for h in [-2i64, 0, 2] {
            assert!(c2.get(h).equals(&Cyc::from_i64(-1)), "y^{}", h / 2);
        }
    }

    #[test]
    fn theta3_squares() {
        let t = theta(ThetaVariant::Theta3, 6);
        assert_eq!(t.coeff(0), YPoly::one());
        let c1 = t.coeff(1);
        assert!(c1.get(2).equals(&Cyc::from_i64(1)) && c1.get(-2).equals(&Cyc::from_i64(1)));
        let c4 = t.coeff(4);
        assert!(c4.get(4).equals(&Cyc::from_i64(1)) && c4.get(-4).equals(&Cyc::from_i64(1)));
        assert!(t.coeff(2).is_zero() && t.coeff(3).is_zero());
    }

    #[test]
    fn theta2_leading() {
        let t = theta(ThetaVariant::Theta2, 4);
        assert_eq!(t.den, 4);
        let lead = t.coeff(1);
        assert!(lead.get(1).equals(&Cyc::from_i64(1)) && lead.get(-1).equals(&Cyc::from_i64(1)));
        let c94 = t.coeff(9);
        assert!(c94.get(3).equals(&Cyc::from_i64(1)));
    }

    #[test]
    fn phi_delta_half_leading_and_square() {
        let h = phi_delta_half(8);
        assert_eq!(h.den, 2);
        assert_eq!(h.val(), 1);
        let lead = h.coeff(1);
        assert!(lead.get(1).equals(&Cyc::from_i64(1)) && lead.get(-1).equals(&Cyc::from_i64(-1)));
        let full = phi_delta_full(8);
        let c1 = full.coefficient(1, 1).unwrap();
        assert!(c1.get(2).equals(&Cyc::from_i64(1)));
        assert!(c1.get(0).equals(&Cyc::from_i64(-2)));
        assert!(c1.get(-2).equals(&Cyc::from_i64(1)));
    }

    #[test]
    fn phi_delta_half_y1_is_eta12() {
        // dividing by (y^{1/2}-y^{-1/2}) and setting y = 1 leaves q^{1/2} prod (1-q^n)^{12}
        let order = 12;
        let prod = jacobi_prod(order, 1, 10, 1).specialize_y1();
        let eta12 = eta_bar(order).pow_int(12).unwrap();
        assert!(prod.eq_mod_trunc(&eta12));
    }

    #[test]
    fn eta24_is_delta_shape() {
        // x * eta_bar(x)^24 equals Delta(q) with q = x, i.e. phi_delta_full at y=1
        // divided by (y^{1/2}-y^{-1/2})^2|_{y=1}... definitional: check leading terms
        let d = eta_bar(10).pow_int(24).unwrap().shift_x(1);
        assert_eq!(d.val(), 1);
        assert!(d.coeff(2).get(0).equals(&Cyc::from_i64(-24)));
    }

    #[test]
    fn z_ratio_expansion() {
        let z = z_ratio(8);
        assert_eq!(z.coeff(0), YPoly::one());
        let c2 = z.coeff(2);
        for h in [-2i64, 0, 2] {
            assert!(c2.get(h).equals(&Cyc::from_i64(3)));
        }
    }

    #[test]
    fn z_quadratic_discriminant_leading() {
        // disc = 108 x^2 (y^{1/2}+y^{-1/2})^2 + O(x^4): this is what forces sqrt(3)
        let order = 8;
        let z = z_ratio(order);
        let z1 = z.specialize_y1();
        let s = z.mul(&z).add(&z.mul(&z1).scale(&Cyc::from_i64(3)));
        let p = z.add(&z1.scale(&Cyc::from_i64(3)));
        let disc = s.mul(&s).sub(&p.scale(&Cyc::from_i64(4)));
        assert_eq!(disc.val(), 2);
        let lead = disc.coeff(2);
        assert!(lead.get(2).equals(&Cyc::from_i64(108)));
        assert!(lead.get(0).equals(&Cyc::from_i64(216)));
        assert!(lead.get(-2).equals(&Cyc::from_i64(108)));
    }

    #[test]
    fn z_roots_leading() {
        // Z±(0,y) = 2; Z± = 2 ± 3 sqrt(3) x (y^{1/2}+y^{-1/2}) + O(x^2)
        let (zp, zm) = z_roots_plain(8).unwrap();
        assert_eq!(zp.coeff(0), YPoly::from_int(2));
        assert_eq!(zm.coeff(0), YPoly::from_int(2));
        let c = Cyc::sqrt3().mul_rat(&rat_int(3));
        let want = YPoly::monomial(c.clone(), 1).add(&YPoly::monomial(c, -1));
        assert_eq!(zp.coeff(1), want);
        assert_eq!(zm.coeff(1), want.neg());
    }

    #[test]
    fn z_vieta() {
        let order = 14;
        let (zp, zm) = z_roots_plain(order).unwrap();
        let z = z_ratio(order);
        let z1 = z.specialize_y1();
        let want_p = z.add(&z1.scale(&Cyc::from_i64(3)));
        assert!(zp.mul(&zm).eq_mod_trunc(&want_p));
        let sum_inv = zp.invert().unwrap().add(&zm.invert().unwrap());
        assert!(sum_inv.eq_mod_trunc(&z));
    }

    #[test]
    fn w_roots_labeling_and_vieta() {
        let order = 12;
        let pair = quadratic_roots(QuadKind::W, order).unwrap();
        let w = w_ratio_f(order);
        let w1 = w.specialize_y1();
        let want = w.add(&w1.scale(&Cyc::from_i64(3)));
        assert!(pair.plus.mul(&pair.minus).eq_mod_trunc(&want));
        // sum of inverses = W
        let sum_inv = pair.plus.invert().unwrap().add(&pair.minus.invert().unwrap());
        assert!(sum_inv.eq_mod_trunc(&w));
        // W- = x^{2/3}(y+1+y^{-1})(1 + ...)
        let wm = &pair.minus;
        assert_eq!(wm.val() * 3 / wm.den, 2, "W- leading exponent should be +2/3");
        let mut sigma = YPoly::zero();
        sigma.set(2, Cyc::from_i64(1));
        sigma.set(0, Cyc::from_i64(1));
        sigma.set(-2, Cyc::from_i64(1));
        let lead = wm.coeff(wm.val());
        assert!(lead.equals(&crate::qseries::YFrac::from_poly(sigma)));
    }

    #[test]
    fn w_z_bridge() {
        // W(x^3,y) (Z(x,y) - 1) = Z(x,y) + 2
        let order = 20;
        let w = w_ratio(order / 3 + 2);
        let w_x3 = RatSeries { num: w.num.subst_x_power(3, 1), den: w.den.subst_x_power(3, 1) };
        let z = RatSeries::from_series(z_ratio(order));
        let one = RatSeries::one(1, order);
        let two = RatSeries::from_series(BiSeries::one(1, order).scale(&Cyc::from_i64(2)));
        let lhs = w_x3.mul(&z.sub(&one));
        let rhs = z.add(&two);
        assert!(lhs.eq_mod_trunc(&rhs));
    }

    #[test]
    fn identity_suite_passes() {
        let reports = theta_identity_suite(30);
        for r in &reports {
            assert!(r.pass, "identity failed: {} at {:?}", r.name, r.first_failure);
        }
        assert_eq!(reports.len(), 6);
    }

    #[test]
    fn negative_control_detects_perturbation() {
        let order = 12;
        let a = theta(ThetaVariant::A2Dual00, order);
        let mut b = a.clone();
        let mut c = b.coeff(6);
        c.set(0, c.get(0).add(&Cyc::from_i64(1)));
        b.set(6, c);
        assert_eq!(a.first_difference(&b), Some((6, 1)));
    }

    #[test]
    fn thetas_even_in_x_and_y_symmetric() {
        for v in [ThetaVariant::A2_00, ThetaVariant::A2Dual00, ThetaVariant::A2Dual01] {
            let t = theta(v, 12);
            for k in t.terms.keys() {
                assert!(k % 2 == 0, "{:?} has odd exponent {}", v, k);
            }
            assert!(t.invert_y().eq_mod_trunc(&t), "{:?} not y-symmetric", v);
        }
        let t10 = theta(ThetaVariant::A2_10, 12);
        for k in t10.terms.keys() {
            assert!((k - 2) % 6 == 0, "A2_10 exponent {} not in 2/3 + 2Z", k);
        }
        assert!(t10.invert_y().eq_mod_trunc(&t10));
    }
}
