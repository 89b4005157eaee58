//! Clifford encryption of one bit, decryption, and the trivial attacks.

use uncloneable_lab::qecm::{cloning_success, CloningAttack, QecmScheme};

fn main() -> uncloneable_lab::Result<()> {
    let scheme = QecmScheme::exhaustive(1)?;
    let key = &scheme.keys()[5];
    let ct = scheme.encrypt(key, 1)?;
    println!("ciphertext of 1 under key 5: {:?}", ct.eigenvalues());
    println!("decryption distribution: {:?}", scheme.decrypt(key, &ct)?);
    let wrong = &scheme.keys()[0];
    println!("with a wrong key: {:?}", scheme.decrypt(wrong, &ct)?);

    let forward = cloning_success(&scheme, &CloningAttack::forward_to_bob(&scheme)?)?;
    let coins = cloning_success(&scheme, &CloningAttack::coin_flips(&scheme))?;
    println!("forward to Bob: {:.6}", forward.value);
    println!("coin flips:     {:.6}", coins.value);
    Ok(())
}
