// Walk away from z along the growth direction and fit |R(zeta)| - |R(z)| ~ C |zeta - z|^delta.
//
//     cargo run --example growth_segment

use num_complex::Complex64;
use resolvent_growth::growth::{sample_segment, verify_growth_bound};
use resolvent_growth::zoo::{self, WeightSequence};
use resolvent_growth::{ComplexMatrix, GrowthCase, Resolvent};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = Complex64::new;

    // Normal matrix: linear growth with C = 1/dist^2 = 1.
    let diag = ComplexMatrix::from_diagonal(&[c(0.0, 0.0), c(3.0, 0.0)])?;
    let res = Resolvent::new(&diag)?;
    let p = res.analyze(c(1.0, 0.0))?;
    let report = sample_segment(&res, &p, 0.25, 8, None)?;
    for s in &report.samples {
        println!("  t = {:.3}  zeta = {:.4}  |R| = {:.9}", s.t, s.zeta, s.norm);
    }
    let v = verify_growth_bound(&report, GrowthCase::LinearGrowth);
    println!("diag(0,3): delta = {:.4?}, C = {:.4?}, linear bound holds: {}", report.fitted_delta, report.fitted_c, v.holds);

    // alpha vanishes for the two-point circulant shift: quadratic growth.
    let a = zoo::circulant_weighted_shift(&WeightSequence::from_real(&[2.0, 1.0])?)?;
    let res = Resolvent::new(&a)?;
    let p = res.analyze(c(0.0, 0.0))?;
    let report = sample_segment(&res, &p, 0.05, 32, None)?;
    let quad = verify_growth_bound(&report, GrowthCase::QuadraticGrowth);
    let lin = verify_growth_bound(&report, GrowthCase::LinearGrowth);
    println!(
        "shift(2,1): case = {}, delta = {:.4?}, quadratic holds: {}, linear holds: {}",
        p.case.as_str(),
        report.fitted_delta,
        quad.holds,
        lin.holds
    );

    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    println!("first CSV lines:\n{}", String::from_utf8(csv)?.lines().take(3).collect::<Vec<_>>().join("\n"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
