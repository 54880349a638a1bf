//! Sweep the border entry b in an unequal-index bordering of the order-2
//! seed. Different values of b land on different order-3 patterns, found
//! by equivalence search against the catalog.

use signpat::{
    equivalent, is_superpattern, ratio, seed_by_name, sign_of, unequal_index_border,
};

fn main() -> signpat::Result<()> {
    let t2 = seed_by_name("T2").expect("catalog entry").realization;

    for (label, b) in [("1/2", ratio(1, 2)), ("-1/2", ratio(-1, 2)), ("-1", ratio(-1, 1))] {
        let bordered = unequal_index_border(&t2, 0, 1, &b)?;
        let pattern = sign_of(&bordered)?;
        println!("b = {label}:");
        println!("{}", pattern.to_text());
        for name in ["V3", "W3"] {
            let target = seed_by_name(name).expect("catalog entry").pattern;
            if let Some(witness) = equivalent(&pattern, &target)? {
                println!(
                    "  equivalent to {name} (permutation {:?}, transpose {}, negate {})",
                    witness.permutation, witness.transpose, witness.negate
                );
            }
        }
        println!();
    }

    // b = -1/2 hits neither pattern directly; it is a superpattern of the
    // b = -1 result, which is equivalent to V3.
    let dense = sign_of(&unequal_index_border(&t2, 0, 1, &ratio(-1, 2))?)?;
    let sparse = sign_of(&unequal_index_border(&t2, 0, 1, &ratio(-1, 1))?)?;
    println!(
        "b = -1/2 pattern is a superpattern of the b = -1 pattern: {}",
        is_superpattern(&dense, &sparse)?
    );
    Ok(())
}
