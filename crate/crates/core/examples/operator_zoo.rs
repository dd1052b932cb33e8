// The matrix families and the JSON file format shared with the CLI.
//
//     cargo run --example operator_zoo

use num_complex::Complex64;
use resolvent_growth::zoo::{self, WeightSequence};
use resolvent_growth::ComplexMatrix;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let w = WeightSequence::from_real(&[2.0, 1.0, 1.0, 1.0])?;
    let m = zoo::circulant_weighted_shift_inverse(&w)?;
    let a = zoo::operator_from_inverse(&m)?;
    println!("M = R_A(0):{}", m.as_dmatrix());
    println!("spectrum of A: {:.6?}", a.eigenvalues()?.as_slice());

    let r = zoo::remark42_diagonal(4)?;
    println!("remark42(4) diagonal: {:.4?}", (0..4).map(|j| r.get(j, j)).collect::<Vec<_>>());

    let j = zoo::jordan_block(3, Complex64::new(1.0, 0.0))?;
    println!("Jordan block singular values: {:.6?}", j.singular_values()?);

    let rnd = zoo::random_dense(3, 7)?;
    let text = rnd.to_json()?;
    let back = ComplexMatrix::from_json(&text)?;
    println!("random(3, seed 7) survives a JSON round trip: {}", back == rnd);
    println!("generator: {}", zoo::RANDOM_ALGORITHM);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
