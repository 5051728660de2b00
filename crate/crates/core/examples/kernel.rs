//! The one-dimensional Dunkl kernel against e^{xy}, and its large-|xy| envelope.

use dunkl::specfn::{asymptotic_envelope, dunkl_kernel_1d};

fn main() {
    let k = 0.7;
    println!("{:>6} {:>14} {:>14} {:>10}", "x", "E(x, 1)", "e^x", "E/env");
    for x in [-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0] {
        let e = dunkl_kernel_1d(k, x, 1.0);
        let env = if x != 0.0 {
            e / asymptotic_envelope(k, x)
        } else {
            f64::NAN
        };
        println!("{x:>6} {e:>14.6e} {:>14.6e} {env:>10.6}", f64::exp(x));
    }
}
