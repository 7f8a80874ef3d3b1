//! The identity lies in the closure of U_E but not in U_E, and U_E, U_O are
//! disjoint: a finite look at why C_k(ω*, ω*) is not an F-space.

use ckspace::witnesses::fspace_demo;

fn main() {
    let report = fspace_demo(16, 16, 32, 8).expect("demo runs");
    println!(
        "apparatus: residues mod {}, disjoint up to {}: {}",
        report.apparatus.parts().len(),
        report.disjoint_bound,
        report.disjoint
    );
    println!(
        "identity in U_E / U_O up to {}: {} / {}",
        report.member_bound, report.identity_even, report.identity_odd
    );
    for level in &report.levels {
        println!(
            "level {}: moves A_{} into A_{}, in neighbourhood {}, in U_E {}, in U_O {}",
            level.level,
            level.witness.source,
            level.witness.target,
            level.certificates.in_neighbourhood,
            level.even_member,
            level.odd_member
        );
    }
    println!("all checks passed: {}", report.ok());
}
