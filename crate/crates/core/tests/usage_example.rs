use std::sync::Arc;

use ore_dilation::multiplier::{extend_multiplier, Bicharacter, Section};
use ore_dilation::ore::{Fraction, NatAdd2};
use ore_dilation::scalar::Phase;

#[test]
fn extended_bicharacter_commutator() -> ore_dilation::Result<()> {
    let m = NatAdd2::default();
    let grid: Vec<[u64; 2]> = (0..3).flat_map(|a| (0..3).map(move |b| [a, b])).collect();
    let mu = extend_multiplier(m.clone(), Arc::new(Bicharacter::new(Phase::new(1, 4))), Arc::new(Section::reduce()), &grid)?;
    let g = Fraction::new([0, 0], [0, 1]);
    let h = Fraction::new([0, 0], [1, 0]);
    assert_eq!(mu.eval(&g, &h) - mu.eval(&h, &g), Phase::new(1, 4));
    Ok(())
}
