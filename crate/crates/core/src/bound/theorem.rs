//! Grid verification of the closing inequality `eps_bound <= n^16 2^{-n/120000-8}`.

use rayon::prelude::*;
use serde::Serialize;

use super::formulas::{epsilon_bound, theorem1_schedule, BoundReport, SCHEDULE_MIN_N};
use super::hp::{agreeing_bits, log_agreeing_bits, to_f64, Hp};
use crate::error::{Error, Result};

/// Required agreement between the working and doubled precision.
pub const MIN_AGREEING_BITS: f64 = 30.0;

/// One grid point, every log quantity in bits.
#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub n: u64,
    pub m: u64,
    pub r: u64,
    pub log2_eps0: f64,
    pub log2_eps1: f64,
    pub delta: f64,
    pub log2_gamma: f64,
    pub log2_eta: f64,
    pub log2_eps_bound: f64,
    pub log2_thm1_rhs: f64,
    pub log2_margin: f64,
    pub pass: bool,
    pub log2_two_eta: f64,
    pub log2_aep_term: f64,
    pub log2_display_t1: f64,
    pub log2_display_t2: f64,
    pub log2_display_t3: f64,
    pub terms_dominated: bool,
    pub agreeing_bits: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremSummary {
    pub rows: Vec<BoundRow>,
    /// Smallest sampled `n` at which the inequality holds.
    pub first_holding_n: Option<u64>,
    /// Smallest sampled `n` from which it holds at every larger sample.
    pub holds_from: Option<u64>,
    /// Smallest sampled `n` with a nontrivial right-hand side (`< 1/2`).
    pub nontrivial_from: Option<u64>,
    /// `eps_bound` non-increasing along the grid from `nontrivial_from` on.
    pub monotone_above_crossover: bool,
    pub min_agreeing_bits: f64,
    pub precision: usize,
}

/// `points` even, log-spaced integers from `n_min` to `n_max` inclusive.
pub fn log_grid(n_min: u64, n_max: u64, points: usize) -> Result<Vec<u64>> {
    if points == 0 {
        return Ok(Vec::new());
    }
    if n_min > n_max {
        return Err(Error::Domain(format!("empty range [{n_min}, {n_max}]")));
    }
    let even = |x: f64| 2 * (x / 2.0).round() as u64;
    let lo = n_min + n_min % 2;
    let hi = n_max - n_max % 2;
    if lo > hi {
        return Err(Error::Domain(format!("no even n in [{n_min}, {n_max}]")));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut grid: Vec<u64> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            even((a + (b - a) * t).exp()).clamp(lo, hi)
        })
        .collect();
    grid[0] = lo;
    grid[points - 1] = hi;
    grid.dedup();
    Ok(grid)
}

fn row_from(rep: &BoundReport, hi: &BoundReport, hp: &mut Hp, cap: usize) -> BoundRow {
    let p = &rep.params;
    let agree = [
        agreeing_bits(&rep.delta, &hi.delta, cap),
        log_agreeing_bits(&rep.gamma, &hi.gamma, cap),
        log_agreeing_bits(&rep.eta, &hi.eta, cap),
        log_agreeing_bits(&rep.eps_bound, &hi.eps_bound, cap),
        log_agreeing_bits(&rep.theorem1_rhs, &hi.theorem1_rhs, cap),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    let margin = hp.sub(rep.theorem1_rhs.log2_value(), rep.eps_bound.log2_value());
    let holds = rep.chain_ok;
    BoundRow {
        n: p.n,
        m: p.m,
        r: p.r,
        log2_eps0: p.eps0.log2_f64(),
        log2_eps1: p.eps1.log2_f64(),
        delta: to_f64(&rep.delta),
        log2_gamma: rep.gamma.log2_f64(),
        log2_eta: rep.eta.log2_f64(),
        log2_eps_bound: rep.eps_bound.log2_f64(),
        log2_thm1_rhs: rep.theorem1_rhs.log2_f64(),
        log2_margin: to_f64(&margin),
        pass: holds && agree >= MIN_AGREEING_BITS,
        log2_two_eta: rep.two_eta.log2_f64(),
        log2_aep_term: rep.aep_term.log2_f64(),
        log2_display_t1: rep.display_terms[0].log2_f64(),
        log2_display_t2: rep.display_terms[1].log2_f64(),
        log2_display_t3: rep.display_terms[2].log2_f64(),
        terms_dominated: rep.dominated.iter().all(|&d| d),
        agreeing_bits: agree,
        holds,
    }
}

/// Evaluates one grid point at precision `p` and cross-checks at `2p`.
pub fn bound_row(n: u64, precision: usize) -> Result<BoundRow> {
    let mut hp = Hp::new(precision)?;
    let params = theorem1_schedule(n, &mut hp)?;
    let rep = epsilon_bound(&params, &mut hp)?;
    let mut hp2 = Hp::new(2 * precision)?;
    let params2 = theorem1_schedule(n, &mut hp2)?;
    let rep2 = epsilon_bound(&params2, &mut hp2)?;
    Ok(row_from(&rep, &rep2, &mut hp, precision))
}

/// Verifies the closing inequality along the schedule on a log grid.
pub fn verify_theorem1(n_min: u64, n_max: u64, points: usize, precision: usize) -> Result<TheoremSummary> {
    if n_min < SCHEDULE_MIN_N {
        return Err(Error::Domain(format!("n_min must be at least {SCHEDULE_MIN_N}")));
    }
    let grid = log_grid(n_min, n_max, points)?;
    let rows: Vec<BoundRow> = grid
        .par_iter()
        .map(|&n| bound_row(n, precision))
        .collect::<Result<_>>()?;
    let first_holding_n = rows.iter().find(|r| r.holds).map(|r| r.n);
    let holds_from = {
        let tail = rows.iter().rev().take_while(|r| r.holds).count();
        (tail > 0).then(|| rows[rows.len() - tail].n)
    };
    let nontrivial_from = rows.iter().find(|r| r.log2_thm1_rhs < -1.0).map(|r| r.n);
    let monotone_above_crossover = match nontrivial_from {
        None => true,
        Some(n0) => rows
            .iter()
            .filter(|r| r.n >= n0)
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[1].log2_eps_bound <= w[0].log2_eps_bound),
    };
    let min_agreeing_bits = rows.iter().map(|r| r.agreeing_bits).fold(f64::INFINITY, f64::min);
    Ok(TheoremSummary {
        rows,
        first_holding_n,
        holds_from,
        nontrivial_from,
        monotone_above_crossover,
        min_agreeing_bits,
        precision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = log_grid(20_000, 100_000_000, 64).unwrap();
        assert_eq!(g.len(), 64);
        assert_eq!(g[0], 20_000);
        assert_eq!(g[63], 100_000_000);
        assert!(g.iter().all(|n| n % 2 == 0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(log_grid(20_000, 40_000, 2).unwrap(), vec![20_000, 40_000]);
    }

    #[test]
    fn large_n_holds() {
        let row = bound_row(100_000_000, 128).unwrap();
        assert!(row.holds && row.log2_margin > 0.0);
        assert!(row.agreeing_bits >= MIN_AGREEING_BITS);
        assert!(row.terms_dominated);
    }
}
