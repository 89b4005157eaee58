//! The closing bound chain evaluated in the log domain.

use uncloneable_lab::bound::{bound_row, verify_theorem1};

fn main() -> uncloneable_lab::Result<()> {
    for n in [20_000u64, 1_200_000, 100_000_000] {
        let row = bound_row(n, 128)?;
        println!(
            "n={n:>11}: log2 eps_bound {:>14.6}, log2 rhs {:>14.6}, holds = {}",
            row.log2_eps_bound, row.log2_thm1_rhs, row.holds
        );
    }
    let s = verify_theorem1(20_000, 100_000_000, 64, 128)?;
    println!(
        "64-point grid: all hold = {}, bound below 1/2 from n = {:?}, min agreeing bits {:.1}",
        s.rows.iter().all(|r| r.holds),
        s.nontrivial_from,
        s.min_agreeing_bits
    );
    Ok(())
}
