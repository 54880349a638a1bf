//! Drive a certified seed toward chosen characteristic polynomials with
//! the damped Newton solver, staying inside the sign pattern throughout.

use signpat::{gen_bn, realize_polynomial, RealizeOptions, VariablePlacement};

fn main() -> signpat::Result<()> {
    let (pattern, seed) = gen_bn(5)?;
    let placement = VariablePlacement::all_nonzeros(&pattern);
    let opts = RealizeOptions::default();

    let targets: [&[f64]; 3] = [
        &[0.0, 0.0, 0.0, 0.0, 0.0],
        &[1.0, 1.0, 1.0, 1.0, 1.0],
        &[-2.0, 0.5, 0.25, -0.75, 0.1],
    ];

    for target in targets {
        let result = realize_polynomial(&pattern, &seed, &placement, target, &opts)?;
        println!(
            "target {target:?}: {} iterations, residual {:.2e}, signs kept {}",
            result.iterations, result.residual, result.sign_ok
        );
    }

    let result = realize_polynomial(&pattern, &seed, &placement, &[1.0, 1.0, 1.0, 1.0, 1.0], &opts)?;
    println!("\nrealization hitting z^5 + z^4 + z^3 + z^2 + z + 1:");
    for row in &result.matrix {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:9.5}")).collect();
        println!("  {}", cells.join(" "));
    }
    Ok(())
}
