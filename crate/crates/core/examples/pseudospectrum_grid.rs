// sigma_min on a grid and the connected pieces of {sigma_min < eps}.
//
//     cargo run --example pseudospectrum_grid

use resolvent_growth::pseudospectrum::{complement_components, components, grid_sigma_min, GridBounds};
use resolvent_growth::zoo;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // Four eigenvalues 2 apart on a zigzag: for 1 < eps < 2/sqrt(3) the disks
    // chain together and enclose two holes.
    let a = zoo::remark42_diagonal(4)?;
    let grid = grid_sigma_min(&a, GridBounds::new(-0.5, 5.5, -2.5, 2.5)?, 200, 200)?;
    for eps in [0.9, 1.08, 1.2] {
        let inside = components(&grid, eps)?;
        let outside = complement_components(&grid, eps)?;
        println!("eps = {eps}: {} component(s), complement in {} piece(s)", inside.count, outside.count);
    }
    println!("{}", grid.metadata(1.08)?.to_json()?.trim_end());

    let mut csv = Vec::new();
    grid.write_csv(&mut csv)?;
    println!("{} CSV rows", String::from_utf8(csv)?.lines().count() - 1);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
