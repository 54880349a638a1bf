//! Generate members of the two built-in recursive border families and
//! certify each one.

use signpat::{certify_nilpotent_jacobian, gen_bn, gen_kn, VariablePlacement};

fn main() -> signpat::Result<()> {
    for n in 4..=8 {
        let (pattern, realization) = gen_bn(n)?;
        let placement = VariablePlacement::all_nonzeros(&pattern);
        let cert = certify_nilpotent_jacobian(&realization, &placement)?;
        println!(
            "banded family, order {n}: {} nonzeros, certified {}",
            pattern.nonzero_count(),
            cert.superpatterns_spectrally_arbitrary
        );
    }
    println!();
    for n in 4..=8 {
        let (pattern, realization) = gen_kn(n)?;
        let placement = VariablePlacement::all_nonzeros(&pattern);
        let cert = certify_nilpotent_jacobian(&realization, &placement)?;
        println!(
            "hollow family, order {n}: {} nonzeros, certified {}",
            pattern.nonzero_count(),
            cert.superpatterns_spectrally_arbitrary
        );
    }

    let (pattern, _) = gen_bn(8)?;
    println!("\nbanded member at order 8:\n{}", pattern.to_text());
    let (pattern, _) = gen_kn(8)?;
    println!("\nhollow member at order 8:\n{}", pattern.to_text());
    Ok(())
}
