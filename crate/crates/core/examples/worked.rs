//! The two-level instance used throughout the README.

use relmaj::submaj::{lambda_star, submajorizes, z_star, Method};
use relmaj::thermo::{work_value, Resource};
use relmaj::Pair;

fn main() -> relmaj::Result<()> {
    let a = Pair::new(vec![0.9, 0.1], vec![0.5, 0.5])?;
    let b = Pair::new(vec![0.7, 0.3], vec![0.5, 0.5])?;
    println!("a ≻ b: {}", submajorizes(&a, &b, Method::Geometric)?.holds);
    println!("b ≻ a: {}", submajorizes(&b, &a, Method::Lp)?.holds);
    println!("λ*_1(b→a) = {}", lambda_star(&b, &a, 1.0)?);
    println!("z*_1(b→a) = {:?}", z_star(&b, &a, 1.0)?);

    let bit = Resource::new(vec![1.0, 0.0], vec![0.5, 0.5], "pure-bit")?;
    let w = work_value(&bit, 1.0, 1.0)?;
    println!("pure bit: {w:?}");
    Ok(())
}
