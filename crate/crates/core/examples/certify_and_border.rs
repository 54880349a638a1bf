//! Certify a nilpotent seed, then grow it one order by bordering at a
//! diagonal entry and certify the result.

use signpat::{
    certify_nilpotent_jacobian, check_equal_index, equal_index_border, sign_of, seed_by_name,
    VariablePlacement,
};

fn main() -> signpat::Result<()> {
    let seed = seed_by_name("B4").expect("catalog entry");
    let a = seed.realization;
    println!("seed matrix:\n{}", a.to_aligned_text());

    let placement = VariablePlacement::all_nonzeros(&seed.pattern);
    let cert = certify_nilpotent_jacobian(&a, &placement)?;
    println!("nilpotent: {}", cert.nilpotent);
    println!("jacobian rank: {} of {}", cert.jacobian_rank, 4);
    println!(
        "every superpattern spectrally arbitrary: {}",
        cert.superpatterns_spectrally_arbitrary
    );

    // Border at row 4 (index 3): the diagonal entry there is nonzero and
    // the minor deleting row 3 and column 0 is nonsingular.
    let report = check_equal_index(&a, 3, 0)?;
    println!(
        "\nborder preconditions hold: {} (minor determinant {})",
        report.all_hold(),
        signpat::format_rational(&report.minor_determinant)
    );

    let b = equal_index_border(&a, 3)?;
    println!("\nbordered matrix:\n{}", b.to_aligned_text());
    println!("bordered pattern:\n{}", sign_of(&b)?.to_text());

    let placement = VariablePlacement::all_nonzeros(&sign_of(&b)?);
    let cert = certify_nilpotent_jacobian(&b, &placement)?;
    println!("bordered matrix certifies: {}", cert.superpatterns_spectrally_arbitrary);
    Ok(())
}
