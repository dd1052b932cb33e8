// A certified polygonal path inside the eps-pseudospectrum from z to an eigenvalue.
//
//     cargo run --example polygonal_path

use num_complex::Complex64;
use resolvent_growth::pseudospectrum::{find_path, PathOptions};
use resolvent_growth::{zoo, Error, Resolvent};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = zoo::random_dense(6, 42)?;
    let res = Resolvent::new(&a)?;
    let z = Complex64::new(0.3, -0.2);
    let f = res.norm(z)?;
    let eps = 1.25 / f;
    println!("|R(z)| = {f:.6}, eps = {eps:.6}");

    match find_path(&res, eps, z, &PathOptions::default()) {
        Ok(report) => {
            for (k, v) in report.path.search_vertices().iter().enumerate() {
                println!("  x_{} = {v:.6}", k + 1);
            }
            println!("  lambda = {:.6}", report.path.target_eigenvalue);
            let cert = &report.certificate;
            println!(
                "reached {:.6} in {} steps; min |R| on path {:.6} > 1/eps = {:.6}; valid: {}",
                report.path.target_eigenvalue,
                report.path.steps(),
                cert.min_f_on_path,
                1.0 / eps,
                cert.valid
            );
        }
        Err(Error::SearchFailure { reason, partial }) => {
            println!("search failed after {} vertices: {reason}", partial.vertices.len());
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
