//! Border the order-2 seed with explicit x and z vectors. Suitable
//! choices land exactly on the two order-3 catalog realizations that
//! standard unit borders cannot reach.

use signpat::{
    certify_nilpotent_jacobian, general_border, ratio, seed_by_name, sign_of, rat,
    VariablePlacement,
};

fn main() -> signpat::Result<()> {
    let t2 = seed_by_name("T2").expect("catalog entry").realization;

    let cases = [
        ("T3", vec![ratio(-1, 2), rat(1)], vec![rat(0), rat(-1)]),
        ("U3", vec![rat(-1), rat(2)], vec![ratio(1, 2), rat(0)]),
    ];

    for (name, x, z) in cases {
        let b = general_border(&t2, &x, &z)?;
        println!("target {name}:\n{}", b.to_aligned_text());

        let expected = seed_by_name(name).expect("catalog entry").realization;
        println!("matches the catalog realization: {}", b == expected);

        let pattern = sign_of(&b)?;
        let cert = certify_nilpotent_jacobian(&b, &VariablePlacement::all_nonzeros(&pattern))?;
        println!(
            "nilpotent: {}, full rank: {}\n",
            cert.nilpotent, cert.full_rank
        );
    }
    Ok(())
}
