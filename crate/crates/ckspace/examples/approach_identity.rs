//! Any basic neighbourhood of the identity contains a map sending one part
//! of the apparatus into another while fixing the parts before it.

use ckspace::parse_set;
use ckspace::witnesses::{approach_identity_witness, ParityApparatus};

fn main() {
    let app = ParityApparatus::residues(64);
    let v_parts = vec![
        parse_set("0%3").unwrap(),
        parse_set("1%3").unwrap(),
        parse_set("2%3").unwrap(),
    ];
    let indices: Vec<usize> = (0..8).map(|i| 7 * i + 1).collect();
    let w = approach_identity_witness(&v_parts, &app, &indices).unwrap();
    println!("indices {indices:?}");
    println!(
        "A_{} -> A_{}, period {}",
        w.source,
        w.target,
        w.map.period()
    );
    // off the moved part the map is the identity
    for n in (0..w.map.period()).filter(|&n| w.map.apply(n) != n) {
        println!(
            "  {n} + {p}k -> {} + {p}k",
            w.map.apply(n),
            p = w.map.period()
        );
    }
    let certs = w.certify(&v_parts, &app).unwrap();
    println!("in the neighbourhood: {}", certs.in_neighbourhood);
    println!("in [A_n -> A_m] ∩ Fix(n, m): {}", certs.in_disjunct);
}
