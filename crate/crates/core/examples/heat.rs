//! Heat kernel values, mass conservation and the semigroup law.

use dunkl::heat::{heat_mass_defect, semigroup_defect, HeatKernel1D};

fn main() -> dunkl::Result<()> {
    let k = 1.5;
    let h = HeatKernel1D::new(k)?;
    for t in [0.1, 1.0, 10.0] {
        println!(
            "t = {t:>4}: h(1, 1) = {:.6e}, h(1, -1) = {:.6e}, |mass - 1| = {:.1e}",
            h.value(t, 1.0, 1.0),
            h.value(t, 1.0, -1.0),
            heat_mass_defect(k, t, 1.0)?
        );
    }
    println!(
        "semigroup defect h_0.3 * h_0.7 vs h_1: {:.1e}",
        semigroup_defect(k, 0.3, 0.7, 0.4, -1.1)?
    );
    Ok(())
}
