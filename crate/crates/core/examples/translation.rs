//! Generalized translation of a Gaussian by quadrature over the
//! translation measure and through the transform.

use std::sync::Arc;

use dunkl::grid::{AxisGrid, GridFunction, TensorGrid};
use dunkl::transform::TransformPlan;
use dunkl::translation::{translate, translate_via_transform};
use dunkl::MultiplicityVector;

fn main() -> dunkl::Result<()> {
    let k = 0.7;
    let mult = MultiplicityVector::scalar(k)?;
    let xg = Arc::new(TensorGrid::single(AxisGrid::uniform(k, 10.0, 20, 24)?));
    let f = GridFunction::sample_real(xg.clone(), |x| (-x[0] * x[0]).exp());
    let plan = TransformPlan::new(
        xg,
        Arc::new(TensorGrid::single(AxisGrid::uniform(k, 12.0, 24, 24)?)),
    )?;
    let y = 1.5;
    println!("{:>5} {:>16} {:>16}", "x", "measure", "transform");
    for x in [-2.0, -1.5, -0.5, 0.0, 0.5, 1.5, 3.0] {
        let a = translate(&mult, &f, &[y], &[x])?;
        let b = translate_via_transform(&plan, &f, &[y], &[x])?;
        println!("{x:>5} {:>16.10} {:>16.10}", a.re, b.re);
    }
    Ok(())
}
