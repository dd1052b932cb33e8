// Resolvent norm, norm-determining vector and growth case at a few points.
//
//     cargo run --example analyze_point

use num_complex::Complex64;
use resolvent_growth::zoo::{self, WeightSequence};
use resolvent_growth::{ComplexMatrix, Resolvent};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = Complex64::new;
    let diag = ComplexMatrix::from_diagonal(&[c(0.0, 0.0), c(3.0, 0.0)])?;
    let shift2 = zoo::circulant_weighted_shift(&WeightSequence::from_real(&[2.0, 1.0])?)?;
    let shift4 = zoo::circulant_weighted_shift(&WeightSequence::from_real(&[2.0, 1.0, 1.0, 1.0])?)?;

    for (name, a, z) in [("diag(0,3)", &diag, c(1.0, 0.0)), ("shift(2,1)", &shift2, c(0.0, 0.0)), ("shift(2,1,1,1)", &shift4, c(0.0, 0.0))] {
        let res = Resolvent::new(a)?;
        let p = res.analyze(z)?;
        println!(
            "{name:>15} at {z}: |R| = {:.6}, case = {}, theta0 = {:?}, |alpha| = {:.3e}, beta = {:.6}, gamma = {:.6}",
            p.norm,
            p.case.as_str(),
            p.theta0,
            p.alpha.norm(),
            p.beta,
            p.gamma
        );
    }

    // Points of the spectrum are rejected rather than given a huge norm.
    let err = Resolvent::new(&diag)?.analyze(c(3.0, 0.0)).unwrap_err();
    println!("at an eigenvalue: {err}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
