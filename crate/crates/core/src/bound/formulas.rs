//! Scalar ingredients of the security bound, each evaluated in base-2 log
//! domain at the precision of the supplied context.

use astro_float::BigFloat;

use super::hp::{to_f64, Hp, LogScalar};
use crate::error::{Error, Result};

fn lt(a: &BigFloat, b: &BigFloat) -> bool {
    a.cmp(b).unwrap_or(0) < 0
}

fn in_unit_open(x: &LogScalar) -> bool {
    !x.is_zero() && x.log2_value().is_negative() && !x.log2_value().is_zero()
}

/// `h(x) = -x log2 x - (1-x) log2(1-x)` at working precision.
pub fn binary_entropy_hp(x: &BigFloat, hp: &mut Hp) -> Result<BigFloat> {
    let zero = hp.num(0.0);
    let one = hp.int(1);
    if lt(x, &zero) || lt(&one, x) {
        return Err(Error::Domain(format!(
            "binary entropy argument {} outside [0, 1]",
            to_f64(x)
        )));
    }
    let term = |p: &BigFloat, hp: &mut Hp| -> BigFloat {
        if p.is_zero() {
            hp.num(0.0)
        } else {
            let l = hp.log2(p);
            hp.mul(p, &l)
        }
    };
    let y = hp.sub(&one, x);
    let a = term(x, hp);
    let b = term(&y, hp);
    Ok(hp.sub(&zero, &hp.add(&a, &b)))
}

/// Checked `f64` front end of [`binary_entropy_hp`].
pub fn binary_entropy(x: f64, hp: &mut Hp) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    let b = hp.num(x);
    Ok(to_f64(&binary_entropy_hp(&b, hp)?))
}

/// `1 + (5/2) log2(dim_a + 3)`.
pub fn aep_prefactor(dim_a: u64, hp: &mut Hp) -> BigFloat {
    let l = hp.log2(&hp.int(dim_a + 3));
    let scaled = hp.mul(&hp.ratio(5, 2), &l);
    hp.add(&hp.int(1), &scaled)
}

/// `prefactor * sqrt((log2(2/eps) + 4)/n + h(r/n))` with `log2(2/eps)`
/// supplied directly.
pub(crate) fn delta_from_log_ratio(
    log2_two_over_eps: &BigFloat,
    r: u64,
    n: u64,
    dim_a: u64,
    hp: &mut Hp,
) -> Result<BigFloat> {
    if n == 0 || r > n {
        return Err(Error::Domain(format!("need 0 <= r <= n with n > 0, got r={r}, n={n}")));
    }
    let pre = aep_prefactor(dim_a, hp);
    let frac = hp.div(&hp.int(r), &hp.int(n));
    let h = binary_entropy_hp(&frac, hp)?;
    let num = hp.add(log2_two_over_eps, &hp.int(4));
    let first = hp.div(&num, &hp.int(n));
    let rad = hp.add(&first, &h);
    if rad.is_negative() && !rad.is_zero() {
        return Err(Error::Domain("negative radicand in the AEP correction".into()));
    }
    Ok(hp.mul(&pre, &hp.sqrt(&rad)))
}

/// The AEP correction `delta(eps, r, n)` for local dimension `dim_a`.
pub fn delta_aep(eps: &LogScalar, r: u64, n: u64, dim_a: u64, hp: &mut Hp) -> Result<BigFloat> {
    if !in_unit_open(eps) {
        return Err(Error::Domain("AEP smoothing parameter must lie in (0, 1)".into()));
    }
    let ratio = hp.sub(&hp.int(1), eps.log2_value());
    delta_from_log_ratio(&ratio, r, n, dim_a, hp)
}

/// `sin(alpha - beta)` with `sin alpha = eps0^2`, `sin beta = eps1`, as
/// `(log2 |s|, sign)`; the inner expression of `gamma` equals
/// `cos(alpha - beta)`, so `1 - inner^2 = s^2` without cancellation.
fn angle_gap(eps0: &LogScalar, eps1: &LogScalar, hp: &mut Hp) -> Result<(BigFloat, bool)> {
    let one = hp.int(1);
    let log_a = hp.mul(&hp.int(2), eps0.log2_value());
    let log_b = eps1.log2_value().clone();
    let a = hp.exp2(&log_a);
    let b = hp.exp2(&log_b);
    let ca = hp.sqrt(&hp.sub(&one, &hp.mul(&a, &a)));
    let cb = hp.sqrt(&hp.sub(&one, &hp.mul(&b, &b)));
    // s / b = (a/b) cb - ca
    let ratio = hp.exp2(&hp.sub(&log_a, &log_b));
    let t = hp.sub(&hp.mul(&ratio, &cb), &ca);
    if t.is_zero() {
        return Err(Error::Validity(
            "eps1 = eps0^2: the smoothing correction is infinite".into(),
        ));
    }
    let positive = !t.is_negative();
    let log_t = hp.log2(&t.abs());
    Ok((hp.add(&log_b, &log_t), positive))
}

/// `gamma(eps0, eps1) = log2 1/(1 - (eps1 eps0^2 + sqrt(1-eps0^4) sqrt(1-eps1^2))^2)`
/// for any `eps0, eps1` in `(0, 1]` at which it is finite.
pub fn gamma_closed_form(eps0: &LogScalar, eps1: &LogScalar, hp: &mut Hp) -> Result<LogScalar> {
    for (name, e) in [("eps0", eps0), ("eps1", eps1)] {
        if e.is_zero() || (!e.log2_value().is_negative() && !e.log2_value().is_zero()) {
            return Err(Error::Domain(format!("{name} must lie in (0, 1]")));
        }
    }
    let (log_s, _) = angle_gap(eps0, eps1, hp)?;
    let gamma = hp.mul(&hp.num(-2.0), &log_s);
    LogScalar::from_value(&gamma, hp)
}

/// [`gamma_closed_form`] under the validity condition
/// `arcsin(eps1) + arcsin(sqrt(1 - eps0^4)) < pi/2`, i.e. `eps1 < eps0^2`.
pub fn gamma_term(eps0: &LogScalar, eps1: &LogScalar, hp: &mut Hp) -> Result<LogScalar> {
    if !in_unit_open(eps0) || !in_unit_open(eps1) {
        return Err(Error::Domain("smoothing parameters must lie in (0, 1)".into()));
    }
    let (_, positive) = angle_gap(eps0, eps1, hp)?;
    if !positive {
        return Err(Error::Validity(format!(
            "arcsin(eps1) + arcsin(sqrt(1 - eps0^4)) >= pi/2 (log2 eps0 = {}, log2 eps1 = {})",
            eps0.log2_f64(),
            eps1.log2_f64()
        )));
    }
    gamma_closed_form(eps0, eps1, hp)
}

/// `eta = (n-m)^32 e^{-(n-m)(r+1)/(2n)}`.
pub fn eta_definetti(n: u64, m: u64, r: u64, hp: &mut Hp) -> Result<LogScalar> {
    if m >= n {
        return Err(Error::Domain(format!("need m < n, got m={m}, n={n}")));
    }
    let k = n - m;
    let log_k = hp.log2(&hp.int(k));
    let poly = hp.mul(&hp.int(32), &log_k);
    let num = hp.mul(&hp.int(k), &hp.int(r + 1));
    let expo = hp.div(&num, &hp.int(2 * n));
    let log2e = hp.log2_e();
    let decay = hp.mul(&expo, &log2e);
    Ok(LogScalar::from_log2(hp.sub(&poly, &decay)))
}

/// Parameters of one evaluation of the bound.
#[derive(Clone, Debug)]
pub struct BoundParams {
    pub n: u64,
    pub m: u64,
    pub r: u64,
    pub eps0: LogScalar,
    pub eps1: LogScalar,
    pub dim_a: u64,
}

impl BoundParams {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m >= self.n {
            return Err(Error::Domain(format!("need 0 < m < n, got m={}, n={}", self.m, self.n)));
        }
        if self.r > self.m {
            return Err(Error::Domain(format!("need r <= m, got r={}, m={}", self.r, self.m)));
        }
        if !in_unit_open(&self.eps0) || !in_unit_open(&self.eps1) {
            return Err(Error::Domain("smoothing parameters must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Smallest `n` accepted by the schedule (`r = floor(n/20000) >= 1`).
pub const SCHEDULE_MIN_N: u64 = 20_000;

/// `m = n/2`, `r = floor(n/20000)`, `eps0 = 2^{-n/1600+3}`, `eps1 = 2^{-n/800+5}`.
pub fn theorem1_schedule(n: u64, hp: &mut Hp) -> Result<BoundParams> {
    if n < SCHEDULE_MIN_N {
        return Err(Error::Domain(format!("schedule needs n >= {SCHEDULE_MIN_N}, got {n}")));
    }
    if !n.is_multiple_of(2) {
        return Err(Error::Domain(format!("schedule needs even n, got {n}")));
    }
    let log_eps0 = hp.add(&hp.ratio(-(n as i64), 1600), &hp.int(3));
    let log_eps1 = hp.add(&hp.ratio(-(n as i64), 800), &hp.int(5));
    Ok(BoundParams {
        n,
        m: n / 2,
        r: n / 20_000,
        eps0: LogScalar::from_log2(log_eps0),
        eps1: LogScalar::from_log2(log_eps1),
        dim_a: 2,
    })
}

/// The three radicand terms as written after substituting the schedule:
/// `n^32/2^32 e^{-n/80000}`, `2^{-n/1600+3}`, `2^{-n/4} / 2^{-n/400+9}`.
pub fn schedule_display_terms(n: u64, hp: &mut Hp) -> [LogScalar; 3] {
    let log_n = hp.log2(&hp.int(n));
    let poly = hp.sub(&hp.mul(&hp.int(32), &log_n), &hp.int(32));
    let log2e = hp.log2_e();
    let decay = hp.mul(&hp.ratio(n as i64, 80_000), &log2e);
    let t1 = hp.sub(&poly, &decay);
    let t2 = hp.add(&hp.ratio(-(n as i64), 1600), &hp.int(3));
    let quarter = hp.ratio(-(n as i64), 4);
    let den = hp.add(&hp.ratio(-(n as i64), 400), &hp.int(9));
    let t3 = hp.sub(&quarter, &den);
    [
        LogScalar::from_log2(t1),
        LogScalar::from_log2(t2),
        LogScalar::from_log2(t3),
    ]
}

/// `n^16 2^{-n/120000 - 8}`.
pub fn theorem1_rhs(n: u64, hp: &mut Hp) -> LogScalar {
    let log_n = hp.log2(&hp.int(n));
    let poly = hp.mul(&hp.int(16), &log_n);
    let lin = hp.add(&hp.ratio(n as i64, 120_000), &hp.int(8));
    LogScalar::from_log2(hp.sub(&poly, &lin))
}

/// Every quantity entering `eps <= sqrt(eta + eps0 + 2^{-m(1-delta)+gamma})`.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub params: BoundParams,
    pub delta: BigFloat,
    pub gamma: LogScalar,
    pub eta: LogScalar,
    pub two_eta: LogScalar,
    /// `2^{-m(1-delta)+gamma}`.
    pub aep_term: LogScalar,
    pub radicand: LogScalar,
    pub eps_bound: LogScalar,
    pub theorem1_rhs: LogScalar,
    /// Term-wise comparison against [`schedule_display_terms`]:
    /// `eta`, `eps0`, and the AEP term, each `<=` its displayed counterpart.
    pub display_terms: [LogScalar; 3],
    pub dominated: [bool; 3],
    pub chain_ok: bool,
}

/// Evaluates the radicand with `delta = delta(eps1, r, m)` and compares the
/// square root with the closing expression.
pub fn epsilon_bound(p: &BoundParams, hp: &mut Hp) -> Result<BoundReport> {
    p.validate()?;
    let delta = delta_aep(&p.eps1, p.r, p.m, p.dim_a, hp)?;
    let gamma = gamma_term(&p.eps0, &p.eps1, hp)?;
    let eta = eta_definetti(p.n, p.m, p.r, hp)?;
    let two_eta = LogScalar::from_log2(hp.add(eta.log2_value(), &hp.int(1)));
    let one_minus = hp.sub(&hp.int(1), &delta);
    let gamma_value = gamma.value(hp);
    let expo = hp.sub(&gamma_value, &hp.mul(&hp.int(p.m), &one_minus));
    let aep_term = LogScalar::from_log2(expo);
    let radicand = eta.add(&p.eps0, hp).add(&aep_term, hp);
    let eps_bound = radicand.sqrt(hp);
    let rhs = theorem1_rhs(p.n, hp);
    let display_terms = schedule_display_terms(p.n, hp);
    let dominated = [
        eta.le(&display_terms[0]),
        p.eps0.le(&display_terms[1]),
        aep_term.le(&display_terms[2]),
    ];
    let chain_ok = eps_bound.le(&rhs);
    Ok(BoundReport {
        params: p.clone(),
        delta,
        gamma,
        eta,
        two_eta,
        aep_term,
        radicand,
        eps_bound,
        theorem1_rhs: rhs,
        display_terms,
        dominated,
        chain_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp() -> Hp {
        Hp::new(128).unwrap()
    }

    #[test]
    fn binary_entropy_values() {
        let mut hp = hp();
        assert_eq!(binary_entropy(0.0, &mut hp).unwrap(), 0.0);
        assert!((binary_entropy(0.5, &mut hp).unwrap() - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.25, &mut hp).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-15);
        assert!(binary_entropy(1.5, &mut hp).is_err());
    }

    #[test]
    fn aep_prefactor_for_qubits() {
        let mut hp = hp();
        let pre = to_f64(&aep_prefactor(2, &mut hp));
        assert!((pre - 6.804_820_237_218_405).abs() < 1e-14, "{pre}");
    }

    #[test]
    fn delta_reductions() {
        let mut hp = hp();
        let zero = hp.num(0.0);
        let d = to_f64(&delta_from_log_ratio(&zero, 0, 400, 2, &mut hp).unwrap());
        let pre = to_f64(&aep_prefactor(2, &mut hp));
        assert!((d - pre * (4.0f64 / 400.0).sqrt()).abs() < 1e-14);
        let eps = LogScalar::from_log2(hp.num(-10.0));
        let mut last = f64::INFINITY;
        for n in [10u64, 100, 1000, 10_000, 100_000] {
            let d = to_f64(&delta_aep(&eps, 0, n, 2, &mut hp).unwrap());
            assert!(d < last);
            last = d;
        }
        let bad = LogScalar::from_log2(hp.num(1.0));
        assert!(delta_aep(&bad, 0, 10, 2, &mut hp).is_err());
    }

    #[test]
    fn gamma_limits_and_validity() {
        let mut hp = hp();
        // eps0 -> 0: gamma -> 2 log2(1/eps1)
        let e0 = LogScalar::from_log2(hp.num(-200.0));
        let e1 = LogScalar::from_log2(hp.num(-3.0));
        let g = gamma_closed_form(&e0, &e1, &mut hp).unwrap();
        let v = to_f64(&g.value(&mut hp));
        assert!((v - 6.0).abs() < 1e-15, "{v}");
        assert!(matches!(gamma_term(&e0, &e1, &mut hp), Err(Error::Validity(_))));
        let one = LogScalar::from_log2(hp.num(0.0));
        assert!(gamma_closed_form(&one, &one, &mut hp).is_err());
        let a = LogScalar::from_log2(hp.num(-10.0));
        let b = LogScalar::from_log2(hp.num(-20.0));
        assert!(matches!(gamma_term(&a, &b, &mut hp), Err(Error::Validity(_))));
    }

    #[test]
    fn eta_cases() {
        let mut hp = hp();
        let e = eta_definetti(10, 9, 0, &mut hp).unwrap();
        let expect = -1.0 / 20.0 * std::f64::consts::LOG2_E;
        assert!((e.log2_f64() - expect).abs() < 1e-15);
        let e0 = eta_definetti(1000, 500, 0, &mut hp).unwrap();
        let e1 = eta_definetti(1000, 500, 500, &mut hp).unwrap();
        assert!(e1.le(&e0));
        assert!(eta_definetti(5, 5, 0, &mut hp).is_err());
    }

    #[test]
    fn schedule_examples() {
        let mut hp = hp();
        let p = theorem1_schedule(40_000, &mut hp).unwrap();
        assert_eq!((p.m, p.r), (20_000, 2));
        assert_eq!(p.eps0.log2_f64(), -22.0);
        assert_eq!(p.eps1.log2_f64(), -45.0);
        assert_eq!(theorem1_schedule(20_000, &mut hp).unwrap().r, 1);
        assert!(theorem1_schedule(40_001, &mut hp).is_err());
        assert!(theorem1_schedule(19_998, &mut hp).is_err());
    }

    #[test]
    fn zero_radius_is_eta_dominated() {
        let mut hp = hp();
        let sched = theorem1_schedule(1_200_000, &mut hp).unwrap();
        let flat = BoundParams { r: 0, ..sched.clone() };
        let a = epsilon_bound(&sched, &mut hp).unwrap();
        let b = epsilon_bound(&flat, &mut hp).unwrap();
        assert!(to_f64(&b.delta) < to_f64(&a.delta));
        assert!(b.eta.log2_f64() > a.eta.log2_f64());
        assert!(b.aep_term.le(&b.eta) && b.params.eps0.le(&b.eta));
        assert!((b.radicand.log2_f64() - b.eta.log2_f64()).abs() < 1e-9);
    }
}
