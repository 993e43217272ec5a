//! Truncated two-variable series: Laurent series in a nome x with rational
//! exponents of fixed denominator, whose coefficients are Laurent polynomials
//! in y^{1/2} over a cyclotomic field.
//!
//! Exponents are stored as scaled integers (`key = den * exponent`), and every
//! series carries an explicit truncation order: the series is exact for all
//! exponents strictly below `trunc/den`. Operations compute the weakest
//! guaranteed order of the result, so precision loss is always visible.

use crate::exactnum::{rat_int, Cyc, NumError, Rat};
use num::{BigInt, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum SeriesError {
    #[error("cannot invert: series is zero modulo truncation")]
    InvertZero,
    #[error("cannot invert: leading coefficient is not a y-monomial unit: {0}")]
    InvertLeading(String),
    #[error("odd leading x-exponent {0}/{1} for sqrt; refine the exponent denominator")]
    SqrtOddExponent(i64, i64),
    #[error("leading coefficient has no square root in the field: {0}")]
    SqrtLeading(String),
    #[error("requested coefficient of x^{0}/{1} but series is only exact below x^{2}/{3}")]
    InsufficientOrder(i64, i64, i64, i64),
    #[error("exact division failed at x^{0}/{1}")]
    InexactDivision(i64, i64),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Laurent polynomial in y^{1/2}: keys are 2*(y-exponent).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct YPoly {
    pub terms: BTreeMap<i64, Cyc>,
}

impl fmt::Debug for YPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl YPoly {
    pub fn zero() -> Self {
        YPoly::default()
    }

    pub fn constant(c: Cyc) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(0, c);
        }
        YPoly { terms: t }
    }

    pub fn one() -> Self {
        Self::constant(Cyc::from_i64(1))
    }

    pub fn from_int(k: i64) -> Self {
        Self::constant(Cyc::from_i64(k))
    }

    /// c * y^{half_exp/2}
    pub fn monomial(c: Cyc, half_exp: i64) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(half_exp, c);
        }
        YPoly { terms: t }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn set(&mut self, half_exp: i64, c: Cyc) {
        if c.is_zero() {
            self.terms.remove(&half_exp);
        } else {
            self.terms.insert(half_exp, c);
        }
    }

    pub fn get(&self, half_exp: i64) -> Cyc {
        self.terms.get(&half_exp).cloned().unwrap_or_else(|| Cyc::zero(12))
    }

    pub fn add(&self, o: &YPoly) -> YPoly {
        let mut out = self.clone();
        for (k, v) in &o.terms {
            let s = out.get(*k).add(v);
            out.set(*k, s);
        }
        out
    }

    pub fn sub(&self, o: &YPoly) -> YPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> YPoly {
        YPoly { terms: self.terms.iter().map(|(k, v)| (*k, v.neg())).collect() }
    }

    pub fn mul(&self, o: &YPoly) -> YPoly {
        let mut out = YPoly::zero();
        for (i, x) in &self.terms {
            for (j, y) in &o.terms {
                let k = i + j;
                let s = out.get(k).add(&x.mul(y));
                out.set(k, s);
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyc) -> YPoly {
        if c.is_zero() {
            return YPoly::zero();
        }
        YPoly { terms: self.terms.iter().map(|(k, v)| (*k, v.mul(c))).collect() }
    }

    pub fn scale_rat(&self, q: &Rat) -> YPoly {
        if q.is_zero() {
            return YPoly::zero();
        }
        YPoly { terms: self.terms.iter().map(|(k, v)| (*k, v.mul_rat(q))).collect() }
    }

    /// Substitute y = 1.
    pub fn eval_y1(&self) -> Cyc {
        let mut acc = Cyc::zero(12);
        for v in self.terms.values() {
            acc = acc.add(v);
        }
        acc
    }

    /// y -> 1/y.
    pub fn invert_y(&self) -> YPoly {
        YPoly { terms: self.terms.iter().map(|(k, v)| (-*k, v.clone())).collect() }
    }

    /// Multiply by y^{half_exp/2}.
    pub fn shift(&self, half_exp: i64) -> YPoly {
        YPoly { terms: self.terms.iter().map(|(k, v)| (k + half_exp, v.clone())).collect() }
    }

    /// y -> y^m (m > 0) on the y^{1/2}-grid.
    pub fn subst_pow(&self, m: i64) -> YPoly {
        YPoly { terms: self.terms.iter().map(|(k, v)| (k * m, v.clone())).collect() }
    }

    /// y -> omega_half^2 * y: the coefficient of y^{k/2} picks up omega_half^k.
    pub fn scale_y(&self, omega_half: &Cyc) -> YPoly {
        YPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v.mul(&omega_half.pow(*k).expect("root of unity power"))))
                .collect(),
        }
    }

    /// Lowest term (half_exp, coeff).
    pub fn lowest(&self) -> Option<(i64, &Cyc)> {
        self.terms.iter().next().map(|(k, v)| (*k, v))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Exact division self / d; None if not exact.
    pub fn div_exact(&self, d: &YPoly) -> Option<YPoly> {
        if self.is_zero() {
            return Some(YPoly::zero());
        }
        let (dk, dc) = d.lowest()?;
        let dc = dc.clone();
        let dinv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut q = YPoly::zero();
        let max_terms = self.terms.len() + d.terms.len() + 8;
        while let Some((rk, rc)) = rem.lowest().map(|(k, c)| (k, c.clone())) {
            let qk = rk - dk;
            let qc = rc.mul(&dinv);
            for (j, v) in &d.terms {
                let t = rem.get(qk + j).sub(&qc.mul(v));
                rem.set(qk + j, t);
            }
            q.set(qk, qc);
            if q.terms.len() > max_terms {
                return None; // runaway: not exact
            }
        }
        Some(q)
    }

    /// Euclidean gcd in the Laurent-polynomial ring over the coefficient
    /// field (monic, lowest exponent 0). Returns 1 for coprime inputs.
    pub fn gcd(&self, o: &YPoly) -> YPoly {
        fn lower_to_zero(p: &YPoly) -> YPoly {
            match p.lowest() {
                None => YPoly::zero(),
                Some((k, _)) => p.shift(-k),
            }
        }
        fn deg(p: &YPoly) -> i64 {
            p.terms.keys().next_back().copied().unwrap_or(0)
        }
        fn make_monic(p: &YPoly) -> YPoly {
            match p.terms.iter().next_back() {
                None => YPoly::zero(),
                Some((_, c)) => p.scale(&c.inv().expect("nonzero leading")),
            }
        }
        // ordinary polynomial remainder (both lowered to exponent 0)
        fn rem(a: &YPoly, b: &YPoly) -> YPoly {
            let mut r = a.clone();
            let (bd, bc) = match b.terms.iter().next_back() {
                None => return r,
                Some((k, c)) => (*k, c.clone()),
            };
            let binv = bc.inv().expect("nonzero leading");
            loop {
                let (rd, rc) = match r.terms.iter().next_back() {
                    None => break,
                    Some((k, c)) => (*k, c.clone()),
                };
                if rd < bd {
                    break;
                }
                let q = rc.mul(&binv);
                for (j, v) in &b.terms {
                    let t = r.get(rd - bd + j).sub(&q.mul(v));
                    r.set(rd - bd + j, t);
                }
            }
            r
        }
        let mut r0 = lower_to_zero(self);
        let mut r1 = lower_to_zero(o);
        if deg(&r0) < deg(&r1) {
            std::mem::swap(&mut r0, &mut r1);
        }
        while !r1.is_zero() {
            let r = make_monic(&rem(&r0, &r1));
            r0 = r1;
            r1 = lower_to_zero(&r);
        }
        make_monic(&r0)
    }

    /// Square root of a perfect square (with the engine's sign convention on
    /// the lowest coefficient); None if not a perfect square in the field.
    pub fn sqrt(&self) -> Option<YPoly> {
        if self.is_zero() {
            return Some(YPoly::zero());
        }
        let (lk, lc) = self.lowest()?;
        let lc = lc.clone();
        let (hk, _) = self.terms.iter().next_back()?;
        let (lk, hk) = (lk, *hk);
        if lk.rem_euclid(2) != 0 || hk.rem_euclid(2) != 0 {
            return None;
        }
        let s0 = lc.sqrt().ok()?;
        let mut s = YPoly::monomial(s0.clone(), lk / 2);
        let two_s0 = s0.mul_rat(&rat_int(2));
        let span = hk - lk;
        for j in 1..=(span / 2) {
            let cur = s.mul(&s);
            let want = self.get(lk + j);
            let have = cur.get(lk + j);
            let diff = want.sub(&have);
            if diff.is_zero() {
                continue;
            }
            let c = diff.div(&two_s0).ok()?;
            s.set(lk / 2 + j, c);
        }
        if s.mul(&s) == *self {
            Some(s)
        } else {
            None
        }
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, v) in &self.terms {
            let cs = crate::exactnum::cyc_to_string(v);
            let cs = if cs.contains(' ') { format!("({})", cs) } else { cs };
            if *k == 0 {
                parts.push(cs);
            } else if k % 2 == 0 {
                parts.push(format!("{}*y^{}", cs, k / 2));
            } else {
                parts.push(format!("{}*y^{}/2", cs, k));
            }
        }
        parts.join(" + ")
    }
}

/// Truncated Laurent series in x^{1/den} with YPoly coefficients.
///
/// Keys of `terms` are scaled exponents (`key/den` is the x-exponent); the
/// series is exact for exponents strictly below `trunc/den`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiSeries {
    pub den: i64,
    pub trunc: i64,
    pub terms: BTreeMap<i64, YPoly>,
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl BiSeries {
    pub fn zero(den: i64, trunc: i64) -> Self {
        BiSeries { den, trunc, terms: BTreeMap::new() }
    }

    pub fn one(den: i64, trunc: i64) -> Self {
        let mut s = Self::zero(den, trunc);
        s.set(0, YPoly::one());
        s
    }

    pub fn monomial(den: i64, trunc: i64, key: i64, c: YPoly) -> Self {
        let mut s = Self::zero(den, trunc);
        s.set(key, c);
        s
    }

    pub fn set(&mut self, key: i64, c: YPoly) {
        if c.is_zero() || key >= self.trunc {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, c);
        }
    }

    pub fn coeff(&self, key: i64) -> YPoly {
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Exact coefficient accessor with order checking.
    pub fn coefficient(&self, exp_num: i64, exp_den: i64) -> Result<YPoly, SeriesError> {
        let a = exp_num * self.den;
        if a % exp_den != 0 {
            // exponent not on this series' grid
            let key_ceil = a.div_euclid(exp_den);
            if key_ceil >= self.trunc {
                return Err(SeriesError::InsufficientOrder(exp_num, exp_den, self.trunc, self.den));
            }
            return Ok(YPoly::zero());
        }
        let key = a / exp_den;
        if key >= self.trunc {
            return Err(SeriesError::InsufficientOrder(exp_num, exp_den, self.trunc, self.den));
        }
        Ok(self.coeff(key))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Valuation in scaled units; `trunc` for a zero series.
    pub fn val(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.trunc)
    }

    /// Rescale the exponent denominator to `new_den` (a multiple of den).
    pub fn with_den(&self, new_den: i64) -> BiSeries {
        assert!(new_den % self.den == 0, "with_den: {} -> {}", self.den, new_den);
        if new_den == self.den {
            return self.clone();
        }
        let f = new_den / self.den;
        BiSeries {
            den: new_den,
            trunc: self.trunc.saturating_mul(f),
            terms: self.terms.iter().map(|(k, v)| (k * f, v.clone())).collect(),
        }
    }

    /// Reduce den by the gcd of den and all keys; the truncation is rounded
    /// down to the coarser grid (a weaker but still correct guarantee).
    pub fn normalize_den(&self) -> BiSeries {
        let mut g = self.den;
        for k in self.terms.keys() {
            g = num::integer::gcd(g, *k);
        }
        if g <= 1 {
            return self.clone();
        }
        BiSeries {
            den: self.den / g,
            trunc: self.trunc.div_euclid(g),
            terms: self.terms.iter().map(|(k, v)| (k / g, v.clone())).collect(),
        }
    }

    fn lift_pair(a: &BiSeries, b: &BiSeries) -> (BiSeries, BiSeries) {
        let l = num::integer::lcm(a.den, b.den);
        (a.with_den(l), b.with_den(l))
    }

    pub fn add(&self, o: &BiSeries) -> BiSeries {
        let (a, b) = Self::lift_pair(self, o);
        let trunc = a.trunc.min(b.trunc);
        let mut out = BiSeries::zero(a.den, trunc);
        for (k, v) in a.terms.iter().chain(b.terms.iter()) {
            if *k < trunc {
                let s = out.coeff(*k).add(v);
                out.set(*k, s);
            }
        }
        out
    }

    pub fn sub(&self, o: &BiSeries) -> BiSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BiSeries {
        BiSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }

    pub fn mul(&self, o: &BiSeries) -> BiSeries {
        let (a, b) = Self::lift_pair(self, o);
        // a exact below a.trunc ⇒ product exact below
        // min(a.trunc + val_b, b.trunc + val_a)
        let trunc = (a.trunc.saturating_add(b.val())).min(b.trunc.saturating_add(a.val()));
        let mut out = BiSeries::zero(a.den, trunc);
        for (i, x) in &a.terms {
            for (j, y) in &b.terms {
                let k = i + j;
                if k < trunc {
                    let s = out.coeff(k).add(&x.mul(y));
                    out.set(k, s);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyc) -> BiSeries {
        BiSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v.scale(c)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn scale_rat(&self, q: &Rat) -> BiSeries {
        self.scale(&Cyc::from_rat(q.clone()))
    }

    /// Multiply by x^{key/den} (scaled shift).
    pub fn shift_x(&self, key: i64) -> BiSeries {
        BiSeries {
            den: self.den,
            trunc: self.trunc.saturating_add(key),
            terms: self.terms.iter().map(|(k, v)| (k + key, v.clone())).collect(),
        }
    }

    /// Multiply every coefficient by y^{half_exp/2}.
    pub fn shift_y(&self, half_exp: i64) -> BiSeries {
        BiSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(k, v)| (*k, v.shift(half_exp))).collect(),
        }
    }

    /// Multiplicative inverse; requires a y-monomial leading coefficient.
    pub fn invert(&self) -> Result<BiSeries, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::InvertZero);
        }
        let v = self.val();
        let lead = self.coeff(v);
        if !lead.is_monomial() {
            return Err(SeriesError::InvertLeading(lead.to_text()));
        }
        let (lk, lc) = lead.lowest().unwrap();
        let lc_inv = lc.inv()?;
        let lead_inv = YPoly::monomial(lc_inv, -lk);
        let rel = self.trunc - v;
        let mut out = BiSeries::zero(self.den, -v + rel);
        out.set(-v, lead_inv.clone());
        for k in 1..rel {
            let mut acc = YPoly::zero();
            for j in 1..=k {
                let a = self.coeff(v + j);
                if a.is_zero() {
                    continue;
                }
                let b = out.coeff(-v + k - j);
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&b));
            }
            if !acc.is_zero() {
                out.set(-v + k, acc.neg().mul(&lead_inv));
            }
        }
        Ok(out)
    }

    /// Exact division self/d: succeeds iff every step divides exactly
    /// (coefficient-wise YPoly division by the leading coefficient of d).
    pub fn div_exact(&self, d: &BiSeries) -> Result<BiSeries, SeriesError> {
        let (a, b) = Self::lift_pair(self, d);
        if b.is_zero() {
            return Err(SeriesError::InvertZero);
        }
        let bv = b.val();
        let blead = b.coeff(bv);
        let trunc = (a.trunc - bv).min(b.trunc - bv + (a.val() - bv));
        let mut rem = a.clone();
        let mut out = BiSeries::zero(a.den, trunc);
        loop {
            if rem.is_zero() {
                break;
            }
            let rv = rem.val();
            let qk = rv - bv;
            if qk >= trunc {
                break;
            }
            let qc = rem
                .coeff(rv)
                .div_exact(&blead)
                .ok_or(SeriesError::InexactDivision(rv, a.den))?;
            for (j, v) in &b.terms {
                let t = rem.coeff(qk + j).sub(&qc.mul(v));
                rem.set(qk + j, t);
            }
            if !rem.coeff(rv).is_zero() {
                return Err(SeriesError::InexactDivision(rv, a.den));
            }
            out.set(qk, qc);
        }
        Ok(out)
    }

    /// Integer power (binary), negative exponents via invert.
    pub fn pow_int(&self, k: i64) -> Result<BiSeries, SeriesError> {
        if k == 0 {
            return Ok(BiSeries::one(self.den, self.trunc - self.val().min(0)));
        }
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc: Option<BiSeries> = None;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.mul(&b),
                });
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc.unwrap())
    }

    /// Square root with the sign convention on the leading coefficient.
    pub fn sqrt(&self) -> Result<BiSeries, SeriesError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let v = self.val();
        if v.rem_euclid(2) != 0 {
            return Err(SeriesError::SqrtOddExponent(v, self.den));
        }
        let lead = self.coeff(v);
        let s0 = lead.sqrt().ok_or_else(|| SeriesError::SqrtLeading(lead.to_text()))?;
        let two_s0 = s0.add(&s0);
        let rel = self.trunc - v;
        let mut out = BiSeries::zero(self.den, v / 2 + rel);
        out.set(v / 2, s0);
        for k in 1..rel {
            let mut conv = YPoly::zero();
            for i in 1..k {
                let si = out.coeff(v / 2 + i);
                if si.is_zero() {
                    continue;
                }
                let sj = out.coeff(v / 2 + k - i);
                if sj.is_zero() {
                    continue;
                }
                conv = conv.add(&si.mul(&sj));
            }
            let want = self.coeff(v + k).sub(&conv);
            if want.is_zero() {
                continue;
            }
            let c = want
                .div_exact(&two_s0)
                .ok_or(SeriesError::InexactDivision(v + k, self.den))?;
            out.set(v / 2 + k, c);
        }
        Ok(out)
    }

    /// x -> omega * x with omega supplied per 1/den-unit: the coefficient of
    /// x^{k/den} is multiplied by omega^k.
    pub fn scale_x(&self, omega_per_unit: &Cyc) -> BiSeries {
        BiSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v.scale(&omega_per_unit.pow(*k).expect("root of unity power"))))
                .collect(),
        }
    }

    /// x -> x^{p/q} with p, q > 0 (exponents multiplied by p/q).
    pub fn subst_x_power(&self, p: i64, q: i64) -> BiSeries {
        assert!(p > 0 && q > 0);
        let s = BiSeries {
            den: self.den * q,
            trunc: self.trunc.saturating_mul(p),
            terms: self.terms.iter().map(|(k, v)| (k * p, v.clone())).collect(),
        };
        s.normalize_den()
    }

    pub fn specialize_y1(&self) -> BiSeries {
        BiSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, YPoly::constant(v.eval_y1())))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn invert_y(&self) -> BiSeries {
        BiSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(k, v)| (*k, v.invert_y())).collect(),
        }
    }

    pub fn subst_y_power(&self, m: i64) -> BiSeries {
        BiSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(k, v)| (*k, v.subst_pow(m))).collect(),
        }
    }

    pub fn scale_y(&self, omega_half: &Cyc) -> BiSeries {
        BiSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(k, v)| (*k, v.scale_y(omega_half))).collect(),
        }
    }

    /// Keep terms with scaled exponent ≡ r_key (mod m_key).
    pub fn sieve(&self, m_key: i64, r_key: i64) -> BiSeries {
        assert!(m_key > 0);
        BiSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| (*k - r_key).rem_euclid(m_key) == 0)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Text dump: one line per x-exponent.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.terms {
            let g = num::integer::gcd(*k, self.den).max(1);
            let (p, q) = (k / g, self.den / g);
            if q == 1 {
                out.push_str(&format!("x^{}: {}\n", p, v.to_text()));
            } else {
                out.push_str(&format!("x^{}/{}: {}\n", p, q, v.to_text()));
            }
        }
        let g = num::integer::gcd(self.trunc, self.den).max(1);
        out.push_str(&format!("O(x^{}/{})\n", self.trunc / g, self.den / g));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut rows = Vec::new();
        for (k, v) in &self.terms {
            let coeffs: Vec<serde_json::Value> = v
                .terms
                .iter()
                .map(|(h, c)| {
                    serde_json::json!({"y_half_exp": h, "coeff": crate::exactnum::cyc_to_json(c)})
                })
                .collect();
            rows.push(serde_json::json!({"x_num": k, "x_den": self.den, "coeff": coeffs}));
        }
        serde_json::json!({"den": self.den, "trunc": self.trunc, "terms": rows})
    }

    /// Equality modulo the weaker of the two truncations.
    pub fn eq_mod_trunc(&self, o: &BiSeries) -> bool {
        self.first_difference(o).is_none()
    }

    /// First scaled exponent (in lcm-den units) where the two differ below the
    /// common truncation, if any.
    pub fn first_difference(&self, o: &BiSeries) -> Option<(i64, i64)> {
        let (a, b) = Self::lift_pair(self, o);
        let t = a.trunc.min(b.trunc);
        let mut keys: Vec<i64> = a
            .terms
            .keys()
            .chain(b.terms.keys())
            .copied()
            .filter(|k| *k < t)
            .collect();
        keys.sort_unstable();
        keys.dedup();
        for k in keys {
            if a.coeff(k) != b.coeff(k) {
                return Some((k, a.den));
            }
        }
        None
    }
}

/// Formal quotient of two BiSeries. Used wherever the true object has
/// coefficients outside the Laurent-polynomial ring (theta quotients with
/// non-monomial leading coefficients, monopole prefactors).
#[derive(Clone, Debug)]
pub struct RatSeries {
    pub num: BiSeries,
    pub den: BiSeries,
}

impl RatSeries {
    pub fn from_series(s: BiSeries) -> Self {
        let one = BiSeries::one(1, s.trunc.max(1));
        RatSeries { num: s, den: one }
    }

    pub fn one(den: i64, trunc: i64) -> Self {
        Self::from_series(BiSeries::one(den, trunc))
    }

    pub fn mul(&self, o: &RatSeries) -> RatSeries {
        RatSeries { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn mul_series(&self, s: &BiSeries) -> RatSeries {
        RatSeries { num: self.num.mul(s), den: self.den.clone() }
    }

    pub fn add(&self, o: &RatSeries) -> RatSeries {
        RatSeries {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    pub fn sub(&self, o: &RatSeries) -> RatSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatSeries {
        RatSeries { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn inv(&self) -> RatSeries {
        RatSeries { num: self.den.clone(), den: self.num.clone() }
    }

    pub fn scale(&self, c: &Cyc) -> RatSeries {
        RatSeries { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow_int(&self, k: i64) -> RatSeries {
        let kk = k.abs();
        let (n, d) = (
            self.num.pow_int(kk).expect("positive power"),
            self.den.pow_int(kk).expect("positive power"),
        );
        if k >= 0 {
            RatSeries { num: n, den: d }
        } else {
            RatSeries { num: d, den: n }
        }
    }

    /// Resolve to a plain series when the division is exact.
    pub fn resolve(&self) -> Result<BiSeries, SeriesError> {
        self.num.div_exact(&self.den)
    }

    /// Equality as formal quotients: num_a * den_b == num_b * den_a.
    pub fn eq_mod_trunc(&self, o: &RatSeries) -> bool {
        self.num.mul(&o.den).eq_mod_trunc(&o.num.mul(&self.den))
    }
}

/// Geometric series 1/(1-x), used by tests and oracles.
pub fn geometric(den: i64, trunc: i64) -> BiSeries {
    let mut s = BiSeries::zero(den, trunc);
    let mut k = 0;
    while k < trunc {
        s.set(k, YPoly::one());
        k += den;
    }
    s
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn x(trunc: i64) -> BiSeries {
        BiSeries::monomial(1, trunc, 1, YPoly::one())
    }

    #[test]
    fn one_minus_x_times_geometric() {
        let n = 20;
        let a = BiSeries::one(1, n).sub(&x(n));
        let g = geometric(1, n);
        let p = a.mul(&g);
        assert!(p.eq_mod_trunc(&BiSeries::one(1, n)));
    }

    #[test]
    fn y_half_square() {
        // (y^{1/2} - y^{-1/2})^2 = y - 2 + y^{-1}
        let a = YPoly::monomial(Cyc::from_i64(1), 1).add(&YPoly::monomial(Cyc::from_i64(-1), -1));
        let sq = a.mul(&a);
        let mut want = YPoly::zero();
        want.set(2, Cyc::from_i64(1));
        want.set(0, Cyc::from_i64(-2));
        want.set(-2, Cyc::from_i64(1));
        assert_eq!(sq, want);
    }

    #[test]
    fn invert_roundtrip() {
        let n = 16;
        let a = BiSeries::one(1, n).sub(&x(n));
        let inv = a.invert().unwrap();
        assert!(inv.eq_mod_trunc(&geometric(1, n)));
        assert!(a.mul(&inv).eq_mod_trunc(&BiSeries::one(1, n)));
    }

    #[test]
    fn invert_geometric_in_y() {
        // 1/(1 + x^2 (y+1+y^{-1})) = 1 - x^2 s + x^4 s^2 - ...
        let n = 10;
        let mut sig = YPoly::zero();
        sig.set(2, Cyc::from_i64(1));
        sig.set(0, Cyc::from_i64(1));
        sig.set(-2, Cyc::from_i64(1));
        let mut a = BiSeries::one(1, n);
        a.set(2, sig.clone());
        let inv = a.invert().unwrap();
        let mut want = BiSeries::one(1, n);
        let mut p = sig.clone();
        let mut sign = 1i64;
        let mut k = 2;
        while k < n {
            sign = -sign;
            want.set(k, p.scale(&Cyc::from_i64(sign)));
            p = p.mul(&sig);
            k += 2;
        }
        assert!(inv.eq_mod_trunc(&want));
    }

    #[test]
    fn invert_monomial() {
        let n = 8;
        let m = BiSeries::monomial(1, n, 2, YPoly::monomial(Cyc::from_i64(1), 2));
        let inv = m.invert().unwrap();
        assert_eq!(inv.val(), -2);
        assert_eq!(inv.coeff(-2), YPoly::monomial(Cyc::from_i64(1), -2));
    }

    #[test]
    fn invert_nonmonomial_leading_errors() {
        let n = 8;
        let mut sig = YPoly::zero();
        sig.set(2, Cyc::from_i64(1));
        sig.set(0, Cyc::from_i64(1));
        let a = BiSeries::monomial(1, n, 0, sig);
        assert!(matches!(a.invert(), Err(SeriesError::InvertLeading(_))));
    }

    #[test]
    fn sqrt_binomial() {
        let n = 8;
        let a = BiSeries::one(1, n).add(&x(n));
        let s = a.sqrt().unwrap();
        assert_eq!(s.coeff(1), YPoly::constant(Cyc::from_rat(rat(1, 2))));
        assert_eq!(s.coeff(2), YPoly::constant(Cyc::from_rat(rat(-1, 8))));
        assert!(s.mul(&s).eq_mod_trunc(&a));
    }

    #[test]
    fn sqrt_pure_power() {
        let n = 12;
        let a = BiSeries::monomial(1, n, 4, YPoly::one());
        let s = a.sqrt().unwrap();
        assert_eq!(s.val(), 2);
        assert!(s.mul(&s).eq_mod_trunc(&a));
    }

    #[test]
    fn sqrt_odd_exponent_errors() {
        let n = 12;
        let a = BiSeries::monomial(1, n, 3, YPoly::one());
        assert!(matches!(a.sqrt(), Err(SeriesError::SqrtOddExponent(_, _))));
    }

    #[test]
    fn sqrt_perfect_square_ypoly_leading() {
        // sqrt of 108 x^2 (y^{1/2}+y^{-1/2})^2 = 6 sqrt(3) x (y^{1/2}+y^{-1/2})
        let n = 10;
        let mut p = YPoly::zero();
        p.set(2, Cyc::from_i64(108));
        p.set(0, Cyc::from_i64(216));
        p.set(-2, Cyc::from_i64(108));
        let a = BiSeries::monomial(1, n, 2, p);
        let s = a.sqrt().unwrap();
        let want_lead = YPoly::monomial(Cyc::sqrt3().mul_rat(&rat_int(6)), 1)
            .add(&YPoly::monomial(Cyc::sqrt3().mul_rat(&rat_int(6)), -1));
        assert_eq!(s.coeff(1), want_lead);
        assert!(s.mul(&s).eq_mod_trunc(&a));
    }

    #[test]
    fn pow_negative_binomial() {
        let n = 10;
        let a = BiSeries::one(1, n).add(&x(n));
        let p = a.pow_int(-2).unwrap();
        for k in 0..6i64 {
            let want = Cyc::from_i64(if k % 2 == 0 { k + 1 } else { -(k + 1) });
            assert!(p.coeff(k).get(0).equals(&want), "k={}", k);
        }
    }

    #[test]
    fn sieve_scale_subst() {
        let n = 8;
        let mut a = BiSeries::zero(1, n);
        for k in 0..n {
            a.set(k, YPoly::one());
        }
        let s = a.sieve(2, 0);
        assert_eq!(s.terms.len(), 4);
        assert!(a.sieve(1, 0).eq_mod_trunc(&a));
        let sc = a.scale_x(&Cyc::eps());
        assert!(sc.coeff(2).get(0).equals(&Cyc::eps().pow(2).unwrap()));
        let sub = x(n).subst_x_power(3, 1);
        assert_eq!((sub.val(), sub.den), (3, 1));
        let y = BiSeries::monomial(1, 4, 0, YPoly::monomial(Cyc::from_i64(1), 2))
            .sub(&BiSeries::monomial(1, 4, 0, YPoly::from_int(2)))
            .add(&BiSeries::monomial(1, 4, 0, YPoly::monomial(Cyc::from_i64(1), -2)));
        assert!(y.specialize_y1().is_zero());
    }

    #[test]
    fn truncation_stability_of_mul() {
        let n = 20;
        let m = 9;
        let a = geometric(1, n);
        let b = BiSeries::one(1, n).add(&x(n)).pow_int(5).unwrap();
        let hi = a.mul(&b);
        let mut a2 = a.clone();
        a2.trunc = m;
        a2.terms.retain(|k, _| *k < m);
        let mut b2 = b.clone();
        b2.trunc = m;
        b2.terms.retain(|k, _| *k < m);
        let lo = a2.mul(&b2);
        let mut hi_cut = hi.clone();
        hi_cut.trunc = lo.trunc;
        hi_cut.terms.retain(|k, _| *k < lo.trunc);
        assert!(hi_cut.eq_mod_trunc(&lo));
    }

    #[test]
    fn div_exact_by_ypoly_leading() {
        let n = 10;
        let mut sig = YPoly::zero();
        sig.set(2, Cyc::from_i64(1));
        sig.set(0, Cyc::from_i64(2));
        sig.set(-2, Cyc::from_i64(1));
        let base = BiSeries::one(1, n).add(&x(n));
        let prod = base.mul(&BiSeries::monomial(1, n, 0, sig.clone()));
        let d = BiSeries::monomial(1, n, 0, sig);
        let q = prod.div_exact(&d).unwrap();
        assert!(q.eq_mod_trunc(&base));
    }

    #[test]
    fn coefficient_out_of_order_errors() {
        let a = geometric(1, 5);
        assert!(a.coefficient(7, 1).is_err());
        assert_eq!(a.coefficient(3, 1).unwrap(), YPoly::one());
        assert!(a.coefficient(1, 2).unwrap().is_zero()); // off-grid exponent below trunc
    }

    #[test]
    fn ratseries_basics() {
        let n = 12;
        let a = BiSeries::one(1, n).add(&x(n));
        let b = BiSeries::one(1, n).sub(&x(n));
        let r = RatSeries { num: a.clone(), den: b.clone() };
        let back = r.mul(&r.inv());
        assert!(back.eq_mod_trunc(&RatSeries::one(1, n)));
        let resolved = RatSeries { num: a.mul(&b), den: b.clone() }.resolve().unwrap();
        assert!(resolved.eq_mod_trunc(&a));
    }
}

/// Fraction of two YPolys (denominator nonzero), lightly reduced.
#[derive(Clone, PartialEq, Eq)]
pub struct YFrac {
    pub num: YPoly,
    pub den: YPoly,
}

impl fmt::Debug for YFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == YPoly::one() {
            write!(f, "{}", self.num.to_text())
        } else {
            write!(f, "({}) / ({})", self.num.to_text(), self.den.to_text())
        }
    }
}

impl YFrac {
    pub fn zero() -> Self {
        YFrac { num: YPoly::zero(), den: YPoly::one() }
    }

    pub fn from_poly(p: YPoly) -> Self {
        YFrac { num: p, den: YPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(YPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            return YFrac::zero();
        }
        if self.den.is_monomial() {
            let q = self.num.div_exact(&self.den).expect("monomial division is exact");
            return YFrac { num: q, den: YPoly::one() };
        }
        let g = self.num.gcd(&self.den);
        if !g.is_monomial() || g.lowest().map(|(k, _)| k) != Some(0) {
            self.num = self.num.div_exact(&g).expect("gcd divides");
            self.den = self.den.div_exact(&g).expect("gcd divides");
            if self.den.is_monomial() {
                let q = self.num.div_exact(&self.den).expect("monomial division");
                return YFrac { num: q, den: YPoly::one() };
            }
        }
        // strip a pure y-monomial common factor and normalize the denominator's
        // lowest coefficient to 1
        let (nk, _) = self.num.lowest().unwrap();
        let (dk, c) = { let (k, c) = self.den.lowest().unwrap(); (k, c.clone()) };
        let shift = nk.min(dk);
        if shift != 0 {
            self.num = self.num.shift(-shift);
            self.den = self.den.shift(-shift);
        }
        if !c.equals(&Cyc::from_i64(1)) {
            let cinv = c.inv().expect("nonzero");
            self.num = self.num.scale(&cinv);
            self.den = self.den.scale(&cinv);
        }
        self
    }

    pub fn add(&self, o: &YFrac) -> YFrac {
        if self.den == o.den {
            return YFrac { num: self.num.add(&o.num), den: self.den.clone() }.reduce();
        }
        YFrac {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
        .reduce()
    }

    pub fn sub(&self, o: &YFrac) -> YFrac {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> YFrac {
        YFrac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &YFrac) -> YFrac {
        if self.is_zero() || o.is_zero() {
            return YFrac::zero();
        }
        // cross-cancel by gcd to keep intermediate products small
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = o.den.div_exact(&g1).expect("gcd divides");
        let c = o.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        YFrac { num: a.mul(&c), den: b.mul(&d) }.reduce()
    }

    pub fn inv(&self) -> YFrac {
        assert!(!self.num.is_zero(), "division by zero YFrac");
        YFrac { num: self.den.clone(), den: self.num.clone() }.reduce()
    }

    pub fn div(&self, o: &YFrac) -> YFrac {
        self.mul(&o.inv())
    }

    pub fn scale(&self, c: &Cyc) -> YFrac {
        YFrac { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn equals(&self, o: &YFrac) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    /// sqrt(num/den) = sqrt(num*den)/den when num*den is a perfect square.
    pub fn sqrt(&self) -> Option<YFrac> {
        if self.is_zero() {
            return Some(YFrac::zero());
        }
        let s = self.num.mul(&self.den).sqrt()?;
        Some(YFrac { num: s, den: self.den.clone() }.reduce())
    }

    /// Resolve to a YPoly if the fraction is polynomial.
    pub fn to_poly(&self) -> Option<YPoly> {
        self.num.div_exact(&self.den)
    }
}

/// Truncated Laurent series in x^{1/den} with coefficients in the fraction
/// field of the y-Laurent-polynomial ring. Inversion and square roots are
/// unrestricted here (any nonzero leading coefficient is a unit), which is
/// what the W-branch quadratic roots require.
#[derive(Clone)]
pub struct FSeries {
    pub den: i64,
    pub trunc: i64,
    pub terms: BTreeMap<i64, YFrac>,
}

impl fmt::Debug for FSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.terms {
            writeln!(f, "x^{}/{}: {:?}", k, self.den, v)?;
        }
        writeln!(f, "O(x^{}/{})", self.trunc, self.den)
    }
}

impl FSeries {
    pub fn zero(den: i64, trunc: i64) -> Self {
        FSeries { den, trunc, terms: BTreeMap::new() }
    }

    pub fn one(den: i64, trunc: i64) -> Self {
        let mut s = Self::zero(den, trunc);
        s.set(0, YFrac::one());
        s
    }

    pub fn from_biseries(b: &BiSeries) -> Self {
        FSeries {
            den: b.den,
            trunc: b.trunc,
            terms: b.terms.iter().map(|(k, v)| (*k, YFrac::from_poly(v.clone()))).collect(),
        }
    }

    pub fn set(&mut self, key: i64, c: YFrac) {
        if c.is_zero() || key >= self.trunc {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, c);
        }
    }

    pub fn coeff(&self, key: i64) -> YFrac {
        self.terms.get(&key).cloned().unwrap_or_else(YFrac::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn val(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.trunc)
    }

    pub fn with_den(&self, new_den: i64) -> FSeries {
        assert!(new_den % self.den == 0);
        if new_den == self.den {
            return self.clone();
        }
        let f = new_den / self.den;
        FSeries {
            den: new_den,
            trunc: self.trunc.saturating_mul(f),
            terms: self.terms.iter().map(|(k, v)| (k * f, v.clone())).collect(),
        }
    }

    fn lift_pair(a: &FSeries, b: &FSeries) -> (FSeries, FSeries) {
        let l = num::integer::lcm(a.den, b.den);
        (a.with_den(l), b.with_den(l))
    }

    pub fn add(&self, o: &FSeries) -> FSeries {
        let (a, b) = Self::lift_pair(self, o);
        let trunc = a.trunc.min(b.trunc);
        let mut out = FSeries::zero(a.den, trunc);
        for (k, v) in a.terms.iter().chain(b.terms.iter()) {
            if *k < trunc {
                let s = out.coeff(*k).add(v);
                out.set(*k, s);
            }
        }
        out
    }

    pub fn sub(&self, o: &FSeries) -> FSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> FSeries {
        FSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(k, v)| (*k, v.neg())).collect(),
        }
    }

    pub fn mul(&self, o: &FSeries) -> FSeries {
        let (a, b) = Self::lift_pair(self, o);
        let trunc = (a.trunc.saturating_add(b.val())).min(b.trunc.saturating_add(a.val()));
        let mut out = FSeries::zero(a.den, trunc);
        for (i, x) in &a.terms {
            for (j, y) in &b.terms {
                let k = i + j;
                if k < trunc {
                    let s = out.coeff(k).add(&x.mul(y));
                    out.set(k, s);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyc) -> FSeries {
        FSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v.scale(c)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn shift_x(&self, key: i64) -> FSeries {
        FSeries {
            den: self.den,
            trunc: self.trunc.saturating_add(key),
            terms: self.terms.iter().map(|(k, v)| (k + key, v.clone())).collect(),
        }
    }

    pub fn invert(&self) -> Result<FSeries, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::InvertZero);
        }
        let v = self.val();
        let lead_inv = self.coeff(v).inv();
        let rel = self.trunc - v;
        let mut out = FSeries::zero(self.den, -v + rel);
        out.set(-v, lead_inv.clone());
        for k in 1..rel {
            let mut acc = YFrac::zero();
            for j in 1..=k {
                let a = self.coeff(v + j);
                if a.is_zero() {
                    continue;
                }
                let b = out.coeff(-v + k - j);
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&b));
            }
            if !acc.is_zero() {
                out.set(-v + k, acc.neg().mul(&lead_inv));
            }
        }
        Ok(out)
    }

    pub fn pow_int(&self, k: i64) -> Result<FSeries, SeriesError> {
        if k == 0 {
            return Ok(FSeries::one(self.den, self.trunc - self.val().min(0)));
        }
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut k = k.unsigned_abs();
        let mut acc: Option<FSeries> = None;
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.mul(&b),
                });
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc.unwrap())
    }

    pub fn sqrt(&self) -> Result<FSeries, SeriesError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut me = self.clone();
        if me.val().rem_euclid(2) != 0 {
            me = me.with_den(2 * me.den);
        }
        let v = me.val();
        let lead = me.coeff(v);
        let s0 = lead
            .sqrt()
            .ok_or_else(|| SeriesError::SqrtLeading(format!("{:?}", lead)))?;
        let half = Cyc::from_rat(rat_int(1) / rat_int(2));
        let inv_2s0 = s0.add(&s0).inv();
        let _ = half;
        let rel = me.trunc - v;
        let mut out = FSeries::zero(me.den, v / 2 + rel);
        out.set(v / 2, s0);
        for k in 1..rel {
            let mut conv = YFrac::zero();
            for i in 1..k {
                let si = out.coeff(v / 2 + i);
                if si.is_zero() {
                    continue;
                }
                let sj = out.coeff(v / 2 + k - i);
                if sj.is_zero() {
                    continue;
                }
                conv = conv.add(&si.mul(&sj));
            }
            let want = me.coeff(v + k).sub(&conv);
            if want.is_zero() {
                continue;
            }
            out.set(v / 2 + k, want.mul(&inv_2s0));
        }
        Ok(out)
    }

    pub fn specialize_y1(&self) -> FSeries {
        FSeries {
            den: self.den,
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    let n = v.num.eval_y1();
                    let d = v.den.eval_y1();
                    (*k, YFrac::from_poly(YPoly::constant(n.div(&d).expect("denominator nonzero at y=1"))))
                })
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn subst_x_power(&self, p: i64, q: i64) -> FSeries {
        assert!(p > 0 && q > 0);
        let mut g = self.den * q;
        for k in self.terms.keys() {
            g = num::integer::gcd(g, k * p);
        }
        g = num::integer::gcd(g, self.trunc.saturating_mul(p)).max(1);
        FSeries {
            den: self.den * q / g,
            trunc: self.trunc.saturating_mul(p) / g,
            terms: self.terms.iter().map(|(k, v)| (k * p / g, v.clone())).collect(),
        }
    }

    /// Resolve every coefficient to a Laurent polynomial.
    pub fn to_biseries(&self) -> Result<BiSeries, SeriesError> {
        let mut out = BiSeries::zero(self.den, self.trunc);
        for (k, v) in &self.terms {
            let p = v
                .to_poly()
                .ok_or(SeriesError::InexactDivision(*k, self.den))?;
            out.set(*k, p);
        }
        Ok(out)
    }

    pub fn eq_mod_trunc(&self, o: &FSeries) -> bool {
        let (a, b) = Self::lift_pair(self, o);
        let t = a.trunc.min(b.trunc);
        let mut keys: Vec<i64> =
            a.terms.keys().chain(b.terms.keys()).copied().filter(|k| *k < t).collect();
        keys.sort_unstable();
        keys.dedup();
        keys.iter().all(|k| a.coeff(*k).equals(&b.coeff(*k)))
    }
}
