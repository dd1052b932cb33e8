// The origin is a local minimum of |R| for the circulant shift with weights (2,1,1,1).
//
//     cargo run --example local_minimum

use num_complex::Complex64;
use resolvent_growth::growth::local_min_probe;
use resolvent_growth::zoo::{self, WeightSequence};
use resolvent_growth::Resolvent;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = zoo::circulant_weighted_shift(&WeightSequence::from_real(&[2.0, 1.0, 1.0, 1.0])?)?;
    let res = Resolvent::new(&a)?;
    let z = Complex64::new(0.0, 0.0);
    println!("case at 0: {}", res.analyze(z)?.case.as_str());

    let probe = local_min_probe(&res, z, 0.05, 6, 16)?;
    for (r, e) in probe.radii.iter().zip(&probe.profile) {
        println!("  r = {r:.4}  min over angles of |R| - |R(0)| = {e:.6e}");
    }
    println!("radial exponent {:.4?}, local minimum: {}", probe.fitted_exponent, probe.is_local_min);

    // Away from the minimum the same probe fails.
    let off = local_min_probe(&res, Complex64::new(0.1, 0.0), 0.05, 6, 16)?;
    println!("at 0.1: local minimum: {}", off.is_local_min);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
