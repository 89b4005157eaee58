//! Bound chain against values computed independently with mpmath at 400 bits.

#![allow(clippy::excessive_precision, clippy::inconsistent_digit_grouping)]

use uncloneable_lab::bound::hp::to_f64;
use uncloneable_lab::bound::{bound_row, eta_definetti, verify_theorem1, Hp};

struct Oracle {
    n: u64,
    delta: f64,
    gamma: f64,
    log2_eta: f64,
    log2_aep: f64,
    log2_eps: f64,
    log2_rhs: f64,
}

const ORACLES: [Oracle; 4] = [
    Oracle {
        n: 20_000,
        delta: 0.428_921_456_415_526_62,
        gamma: 39.999_999_999_997_376,
        log2_eta: 424.485_448_625_137_9,
        log2_aep: -5670.785_435_844_736_4,
        log2_eps: 212.242_724_312_568_95,
        log2_rhs: 220.436_731_406_124_52,
    },
    Oracle {
        n: 40_000,
        delta: 0.428_921_456_415_526_62,
        gamma: 90.0,
        log2_eta: 456.124_774_864_915_66,
        log2_aep: -11331.570_871_689_468,
        log2_eps: 228.062_387_432_457_83,
        log2_rhs: 236.270_064_739_457_86,
    },
    Oracle {
        n: 1_200_000,
        delta: 0.428_921_456_415_526_62,
        gamma: 2990.0,
        log2_eta: 592.226_195_831_498_3,
        log2_aep: -339_657.126_150_684,
        log2_eps: 296.113_097_915_749_14,
        log2_rhs: 305.113_647_602_527_5,
    },
    Oracle {
        n: 100_000_000,
        delta: 0.428_921_456_415_526_62,
        gamma: 249_990.0,
        log2_eta: -985.315_882_580_261_7,
        log2_aep: -28_303_937.179_223_67,
        log2_eps: -492.657_941_290_130_9,
        log2_rhs: -416.126_537_187_750_95,
    },
];

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

#[test]
fn chain_matches_oracle() {
    for o in &ORACLES {
        let row = bound_row(o.n, 128).unwrap();
        assert!(close(row.delta, o.delta), "n={} delta {}", o.n, row.delta);
        assert!(
            close(row.log2_gamma.exp2(), o.gamma),
            "n={} gamma {}",
            o.n,
            row.log2_gamma.exp2()
        );
        assert!(close(row.log2_eta, o.log2_eta), "n={} eta {}", o.n, row.log2_eta);
        assert!(
            close(row.log2_aep_term, o.log2_aep),
            "n={} aep {}",
            o.n,
            row.log2_aep_term
        );
        assert!(
            close(row.log2_eps_bound, o.log2_eps),
            "n={} eps {}",
            o.n,
            row.log2_eps_bound
        );
        assert!(
            close(row.log2_thm1_rhs, o.log2_rhs),
            "n={} rhs {}",
            o.n,
            row.log2_thm1_rhs
        );
        assert!(row.holds);
    }
}

#[test]
fn eta_at_one_million() {
    let mut hp = Hp::new(128).unwrap();
    let e = eta_definetti(1_000_000, 500_000, 50, &mut hp).unwrap();
    assert!(close(e.log2_f64(), 587.415_832_447_039_3));
    let _ = to_f64(e.log2_value());
}

#[test]
fn full_grid() {
    let s = verify_theorem1(20_000, 100_000_000, 64, 128).unwrap();
    assert_eq!(s.rows.len(), 64);
    assert!(s.rows.iter().all(|r| r.pass));
    assert!(s.min_agreeing_bits >= 30.0);
    assert!(s.rows.iter().all(|r| r.terms_dominated));
    assert!(s.monotone_above_crossover);
    assert_eq!(s.first_holding_n, Some(20_000));
    assert!(s.nontrivial_from.is_some());
}
