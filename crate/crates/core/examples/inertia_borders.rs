//! Certify refined inertias exactly and grow them by one zero eigenvalue
//! per bordering round.

use signpat::{
    certify_inertia_jacobian, inertial_equal_index_border, inertial_unequal_index_border, rat,
    refined_inertia, seed_by_name, sign_of, DEFAULT_INERTIA_TOL,
};

fn main() -> signpat::Result<()> {
    let pair = seed_by_name("T2_PLUS_T2").expect("catalog entry");
    let inertia = refined_inertia(&pair.realization, DEFAULT_INERTIA_TOL)?;
    println!(
        "block-diagonal seed refined inertia: {:?} (imaginary count exact: {})",
        inertia.refined_inertia.as_tuple(),
        inertia.imaginary_exact
    );

    let report = certify_inertia_jacobian(&pair.realization, &pair.placement)?;
    println!(
        "hypothesis satisfied: {}, superpatterns inertially arbitrary: {}",
        report.hypothesis_satisfied, report.superpatterns_inertially_arbitrary
    );

    // Border at the nonzero diagonal entry of row 2, guarded by column 1.
    let (bordered, report) =
        inertial_equal_index_border(&pair.realization, 1, 0, &pair.placement)?;
    println!(
        "\nequal-index border, order 5: refined inertia {:?}, zero count went up: {}",
        report.bordered.inertia.refined_inertia.as_tuple(),
        report.zero_mult_incremented
    );
    println!("{}", sign_of(&bordered)?.to_text());

    let g5 = seed_by_name("G5").expect("catalog entry");
    let (bordered, report) =
        inertial_unequal_index_border(&g5.realization, 0, 2, &rat(-1), 3, &g5.placement)?;
    println!(
        "unequal-index border of the order-5 seed, order 6: refined inertia {:?}",
        report.bordered.inertia.refined_inertia.as_tuple()
    );
    println!("{}", sign_of(&bordered)?.to_text());
    Ok(())
}
