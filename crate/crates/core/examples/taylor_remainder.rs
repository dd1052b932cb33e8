// How well |R psi|^2 + 2 Re(h alpha) + |h|^2 beta + 2 Re(h^2 gamma) tracks |R(z + h) psi|^2.
//
//     cargo run --example taylor_remainder

use num_complex::Complex64;
use resolvent_growth::growth::{halving_steps, taylor_remainder_check};
use resolvent_growth::zoo::{self, WeightSequence};
use resolvent_growth::{ComplexMatrix, Resolvent};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = Complex64::new;
    let steps = halving_steps(1e-2, 8);
    let specimens = [
        ("diag(0,3)", ComplexMatrix::from_diagonal(&[c(0.0, 0.0), c(3.0, 0.0)])?, c(1.0, 0.0)),
        ("shift(2,1)", zoo::circulant_weighted_shift(&WeightSequence::from_real(&[2.0, 1.0])?)?, c(0.0, 0.0)),
    ];
    for (name, a, z) in &specimens {
        let res = Resolvent::new(a)?;
        let p = res.analyze(*z)?;
        let check = taylor_remainder_check(&res, *z, &p.psi, p.theta0.unwrap_or(0.0), &steps)?;
        println!("{name}: fitted remainder order {:.3?}", check.fitted_order);
        for (h, r) in check.steps.iter().zip(&check.residuals) {
            println!("  h = {h:.3e}  residual = {r:.3e}");
        }
    }
    // The shift's expansion has no odd terms, so its remainder drops like h^4 here.
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
