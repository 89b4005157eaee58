//! See-saw lower bounds on game values and on the cloning value.

use uncloneable_lab::qecm::{
    optimize_attack, seesaw_optimize, GameKind, MoEGame, QecmScheme, SeesawConfig, StateUpdate,
};

fn main() -> uncloneable_lab::Result<()> {
    let cfg = SeesawConfig::new(2, 2, 0);
    let bb84 = seesaw_optimize(&MoEGame::bb84(), &cfg)?;
    println!(
        "BB84 game: {:.6} (cos^2(pi/8) = {:.6})",
        bb84.value,
        0.5 + 0.5f64.sqrt() / 2.0
    );

    let six = seesaw_optimize(&MoEGame::build(GameKind::CliffordScheme, 1)?, &cfg)?;
    println!("Clifford n=1 game: {:.6}, monotone = {}", six.value, six.monotone);

    let scheme = QecmScheme::exhaustive(1)?;
    let attack_cfg = SeesawConfig {
        restarts: 8,
        state_update: StateUpdate::Choi,
        ..cfg
    };
    let (_, res) = optimize_attack(&scheme, &attack_cfg)?;
    println!("best cloning attack found at n=1: {:.6}", res.value);
    Ok(())
}
