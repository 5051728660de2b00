//! Ball measures μ(B(x, r)), the quasi-distance d̃ and its comparison with
//! μ(B(x, |x − y|)) in the plane.

use dunkl::measure::{mu_ball_model, mu_ball_nd, quasi_distance, BallMeasureContext};
use dunkl::MultiplicityVector;

fn main() -> dunkl::Result<()> {
    let mult = MultiplicityVector::new(vec![0.7, 1.2])?;
    let ctx = BallMeasureContext::with_default_quadrature(mult.clone())?;
    println!("N = {}", mult.homogeneous_dimension());
    for (x, r) in [([0.0, 0.0], 1.0), ([2.0, -1.0], 0.5), ([5.0, 5.0], 3.0)] {
        let mu = mu_ball_nd(&ctx, &x, r)?;
        println!(
            "mu(B({x:?}, {r})) = {mu:.6e}, model ratio {:.4}",
            mu / mu_ball_model(&mult, &x, r)
        );
    }
    let (x, y) = ([1.0, 0.5], [-2.0, 1.5]);
    let d = quasi_distance(&ctx, &x, &y)?;
    let dist = x
        .iter()
        .zip(&y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    println!(
        "d~(x, y) = {d:.6e}, mu(B(x, |x-y|)) = {:.6e}",
        mu_ball_nd(&ctx, &x, dist)?
    );
    Ok(())
}
