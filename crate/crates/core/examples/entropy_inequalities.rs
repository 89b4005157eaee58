//! Random-state checks of four entropic inequalities.

use uncloneable_lab::entropy::lemmas::{run_lemma, Lemma};

fn main() -> uncloneable_lab::Result<()> {
    for lemma in Lemma::ALL {
        let rows = run_lemma(lemma, 50, (2, 2, 2), 7, lemma.tolerance())?;
        let worst = rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
        let passed = rows.iter().filter(|r| r.pass).count();
        println!(
            "{:<16} {passed}/{} pass, smallest gap {worst:.3e}",
            lemma.name(),
            rows.len()
        );
    }
    Ok(())
}
