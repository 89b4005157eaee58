//! Working-precision context and log-domain scalars.

use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::error::{Error, Result};

pub const PRECISION_ENV: &str = "UNCLONEABLE_LAB_PRECISION_BITS";
pub const DEFAULT_PRECISION: usize = 128;
pub const MIN_PRECISION: usize = 64;

/// Working precision from the environment, `DEFAULT_PRECISION` when unset.
pub fn precision_bits() -> Result<usize> {
    match std::env::var(PRECISION_ENV) {
        Err(_) => Ok(DEFAULT_PRECISION),
        Ok(s) => {
            let p: usize = s
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("{PRECISION_ENV}={s:?} is not a bit count")))?;
            if p < MIN_PRECISION {
                return Err(Error::Domain(format!("{PRECISION_ENV}={p} is below {MIN_PRECISION}")));
            }
            Ok(p)
        }
    }
}

/// Arithmetic at a fixed mantissa length with round-to-nearest-even.
pub struct Hp {
    p: usize,
    rm: RoundingMode,
    cc: Consts,
}

impl Hp {
    pub fn new(p: usize) -> Result<Self> {
        if p < MIN_PRECISION {
            return Err(Error::Domain(format!("precision {p} below {MIN_PRECISION} bits")));
        }
        let cc = Consts::new().map_err(|e| Error::Domain(format!("constant cache: {e:?}")))?;
        Ok(Self {
            p,
            rm: RoundingMode::ToEven,
            cc,
        })
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    pub fn int(&self, x: u64) -> BigFloat {
        BigFloat::from_u64(x, self.p)
    }

    /// `num / den` rounded once.
    pub fn ratio(&self, num: i64, den: u64) -> BigFloat {
        self.div(&BigFloat::from_i64(num, self.p), &self.int(den))
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, self.rm)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, self.rm)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, self.rm)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, self.rm)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, self.rm)
    }

    pub fn log2(&mut self, a: &BigFloat) -> BigFloat {
        a.log2(self.p, self.rm, &mut self.cc)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, self.rm, &mut self.cc)
    }

    /// `2^a`.
    pub fn exp2(&mut self, a: &BigFloat) -> BigFloat {
        let two = self.int(2);
        two.pow(a, self.p, self.rm, &mut self.cc)
    }

    /// `log2 e = 1 / ln 2`.
    pub fn log2_e(&mut self) -> BigFloat {
        let ln2 = self.ln(&self.int(2));
        self.div(&self.int(1), &ln2)
    }
}

/// Nearest `f64`, by way of the shortest decimal rendering.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    x.to_string().parse().unwrap_or(f64::NAN)
}

/// A nonnegative quantity stored as its base-2 logarithm.
#[derive(Clone, Debug)]
pub struct LogScalar {
    log2: BigFloat,
    zero: bool,
}

impl LogScalar {
    pub fn zero(hp: &Hp) -> Self {
        Self {
            log2: hp.num(0.0),
            zero: true,
        }
    }

    pub fn from_log2(log2: BigFloat) -> Self {
        Self { log2, zero: false }
    }

    /// From a value `x >= 0`.
    pub fn from_value(x: &BigFloat, hp: &mut Hp) -> Result<Self> {
        if x.is_negative() && !x.is_zero() {
            return Err(Error::Domain("log-domain scalars are nonnegative".into()));
        }
        if x.is_zero() {
            return Ok(Self::zero(hp));
        }
        Ok(Self::from_log2(hp.log2(x)))
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn log2_value(&self) -> &BigFloat {
        &self.log2
    }

    /// `log2` as `f64`, `-inf` for zero.
    pub fn log2_f64(&self) -> f64 {
        if self.zero {
            f64::NEG_INFINITY
        } else {
            to_f64(&self.log2)
        }
    }

    /// The represented value (may underflow to zero in `f64`).
    pub fn value(&self, hp: &mut Hp) -> BigFloat {
        if self.zero {
            hp.num(0.0)
        } else {
            hp.exp2(&self.log2)
        }
    }

    pub fn mul(&self, other: &Self, hp: &Hp) -> Self {
        if self.zero || other.zero {
            return Self::zero(hp);
        }
        Self::from_log2(hp.add(&self.log2, &other.log2))
    }

    pub fn div(&self, other: &Self, hp: &Hp) -> Result<Self> {
        if other.zero {
            return Err(Error::Domain("division by a zero log-scalar".into()));
        }
        if self.zero {
            return Ok(Self::zero(hp));
        }
        Ok(Self::from_log2(hp.sub(&self.log2, &other.log2)))
    }

    pub fn sqrt(&self, hp: &Hp) -> Self {
        if self.zero {
            return self.clone();
        }
        Self::from_log2(hp.div(&self.log2, &hp.int(2)))
    }

    /// `log2(2^a + 2^b) = max + log2(1 + 2^(min - max))`; the correction
    /// is skipped once it falls below the working precision.
    pub fn add(&self, other: &Self, hp: &mut Hp) -> Self {
        if self.zero {
            return other.clone();
        }
        if other.zero {
            return self.clone();
        }
        let (hi, lo) = if self.log2.cmp(&other.log2).unwrap_or(0) >= 0 {
            (&self.log2, &other.log2)
        } else {
            (&other.log2, &self.log2)
        };
        let diff = hp.sub(lo, hi);
        let cutoff = hp.num(-((hp.precision() + 16) as f64));
        if diff.cmp(&cutoff).unwrap_or(0) < 0 {
            return Self::from_log2(hi.clone());
        }
        let one = hp.int(1);
        let corr = hp.exp2(&diff);
        let sum = hp.add(&one, &corr);
        let l = hp.log2(&sum);
        Self::from_log2(hp.add(hi, &l))
    }

    pub fn compare(&self, other: &Self) -> Ordering {
        match (self.zero, other.zero) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => self.log2.cmp(&other.log2).unwrap_or(0).cmp(&0),
        }
    }

    pub fn le(&self, other: &Self) -> bool {
        self.compare(other) != Ordering::Greater
    }
}

/// Number of leading bits on which `a` and `b` agree, capped at `cap`.
pub fn agreeing_bits(a: &BigFloat, b: &BigFloat, cap: usize) -> f64 {
    let (x, y) = (to_f64(a), to_f64(b));
    agreeing_bits_f64(x, y, a, b, cap)
}

fn agreeing_bits_f64(x: f64, y: f64, a: &BigFloat, b: &BigFloat, cap: usize) -> f64 {
    if x.is_nan() || y.is_nan() {
        return 0.0;
    }
    let p = (cap + 64).max(256);
    let diff = a.sub(b, p, RoundingMode::ToEven).abs();
    if diff.is_zero() {
        return cap as f64;
    }
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        return 0.0;
    }
    let d = to_f64(&diff);
    if d == 0.0 {
        // difference below f64 range: compare binary exponents instead
        let e = diff.exponent().unwrap_or(i32::MIN) as f64;
        return (scale.log2() - e).clamp(0.0, cap as f64);
    }
    (-(d / scale).log2()).clamp(0.0, cap as f64)
}

/// Agreement between two log-scalars at the level of their logarithms.
pub fn log_agreeing_bits(a: &LogScalar, b: &LogScalar, cap: usize) -> f64 {
    match (a.zero, b.zero) {
        (true, true) => cap as f64,
        (false, false) => agreeing_bits(&a.log2, &b.log2, cap),
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp() {
        let mut hp = Hp::new(128).unwrap();
        let a = LogScalar::from_log2(hp.num(3.0));
        let b = LogScalar::from_log2(hp.num(3.0));
        let s = a.add(&b, &mut hp);
        assert!((s.log2_f64() - 4.0).abs() < 1e-30);
        let tiny = LogScalar::from_log2(hp.num(-1e9));
        let big = LogScalar::from_log2(hp.num(1e9));
        assert_eq!(tiny.add(&big, &mut hp).log2_f64(), 1e9);
        let z = LogScalar::zero(&hp);
        assert_eq!(z.add(&a, &mut hp).log2_f64(), 3.0);
    }

    #[test]
    fn arithmetic_and_order() {
        let mut hp = Hp::new(128).unwrap();
        let x = LogScalar::from_value(&hp.num(8.0), &mut hp).unwrap();
        assert!((x.log2_f64() - 3.0).abs() < 1e-30);
        assert!((x.sqrt(&hp).log2_f64() - 1.5).abs() < 1e-30);
        let y = LogScalar::from_log2(hp.num(-2.0));
        assert!((x.mul(&y, &hp).log2_f64() - 1.0).abs() < 1e-30);
        assert!(y.le(&x) && !x.le(&y));
        assert!(LogScalar::from_value(&hp.num(-1.0), &mut hp).is_err());
    }

    #[test]
    fn agreement_count() {
        let hp = Hp::new(128).unwrap();
        let a = hp.num(1.0);
        let b = hp.add(&a, &hp.num(2f64.powi(-40)));
        let bits = agreeing_bits(&a, &b, 128);
        assert!((bits - 40.0).abs() < 1e-9, "{bits}");
        assert_eq!(agreeing_bits(&a, &a, 128), 128.0);
    }
}
