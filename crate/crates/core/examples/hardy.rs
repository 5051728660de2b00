//! An atom, its moments, and the Uchiyama constants of the truncated heat
//! kernel.

use dunkl::hardy::{
    make_atom, uchiyama_conditions_scan, validate_atom, AtomProfile, UchiyamaGrid, UchiyamaKernel,
};
use dunkl::heat::CutoffSpec;
use dunkl::measure::BallMeasureContext;
use dunkl::MultiplicityVector;

fn main() -> dunkl::Result<()> {
    let mult = MultiplicityVector::scalar(0.7)?;
    let ctx = BallMeasureContext::with_default_quadrature(mult.clone())?;
    for profile in [AtomProfile::TwoBump, AtomProfile::DerivativeOfBump] {
        let atom = make_atom(&mult, &[1.0], 0.5, profile)?;
        let c = validate_atom(&atom, &ctx)?;
        println!(
            "{profile:?}: size {:.4}, mean {:.1e}, outside {:.1e}",
            c.size, c.mean, c.outside
        );
    }
    let uk = UchiyamaKernel::new(&mult, CutoffSpec::default())?;
    for r in uchiyama_conditions_scan(&uk, &UchiyamaGrid::standard(1), "standard")? {
        println!("{:<26} {:.4}", r.estimate_id, r.empirical_constant);
    }
    Ok(())
}
