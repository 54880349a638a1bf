//! Search for an equivalence witness between sign patterns and apply the
//! found transform to verify it reproduces the target.

use signpat::{apply_transform, equivalent, seed_by_name, SignPattern};

fn main() -> signpat::Result<()> {
    let v3 = seed_by_name("V3").expect("catalog entry").pattern;

    // Scramble V3 by hand: negate, then relabel rows and columns, then
    // flip the sign of one index.
    let scrambled = SignPattern::parse_text("++0\n0--\n++0")?;

    match equivalent(&v3, &scrambled)? {
        Some(witness) => {
            println!("witness found:");
            println!("  signature: {:?}", witness.signature);
            println!("  permutation: {:?}", witness.permutation);
            println!("  transpose: {}, negate: {}", witness.transpose, witness.negate);
            let image = apply_transform(&v3, &witness)?;
            println!("transform applied to the first pattern:\n{}", image.to_text());
            println!("matches the second: {}", image == scrambled);
        }
        None => println!("no witness within the supported order bound"),
    }

    let w3 = seed_by_name("W3").expect("catalog entry").pattern;
    println!(
        "\nV3 equivalent to W3: {}",
        equivalent(&v3, &w3)?.is_some()
    );
    Ok(())
}
