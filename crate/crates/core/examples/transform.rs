//! Dunkl transform of a Gaussian, Plancherel, and the heat multiplier
//! compared with the heat semigroup.

use std::sync::Arc;

use dunkl::grid::{AxisGrid, GridFunction, TensorGrid};
use dunkl::heat::HeatSemigroup;
use dunkl::transform::{multiplier_apply_with, plancherel_defect, MultiplierSpec, TransformPlan};
use dunkl::MultiplicityVector;

fn main() -> dunkl::Result<()> {
    let k = 0.7;
    let mult = MultiplicityVector::scalar(k)?;
    let xg = Arc::new(TensorGrid::single(AxisGrid::uniform(k, 12.0, 24, 24)?));
    let xig = Arc::new(TensorGrid::single(AxisGrid::uniform(k, 14.0, 28, 24)?));
    let f = GridFunction::sample_real(xg.clone(), |x| (-(x[0] - 0.5).powi(2)).exp());
    let plan = TransformPlan::new(xg.clone(), xig.clone())?;

    println!("Plancherel defect: {:.2e}", plancherel_defect(&f, xig)?);
    let back = plan.inverse(&plan.forward(&f)?)?;
    let gap = f
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("round trip: {gap:.2e}");

    let t = 0.5;
    let via = multiplier_apply_with(&plan, &MultiplierSpec::heat(t), &f)?;
    let sg = HeatSemigroup::new(&mult)?;
    for i in (xg.len() / 4..3 * xg.len() / 4).step_by(41) {
        let x = xg.node(i);
        let direct = sg.apply(&f, t, &x)?;
        println!(
            "e^(tL)f({:>8.4}) = {:>16.9e} by multiplier, {:>16.9e} by quadrature",
            x[0],
            via.values()[i].re,
            direct.re
        );
    }
    Ok(())
}
