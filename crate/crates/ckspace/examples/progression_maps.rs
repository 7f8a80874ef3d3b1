//! Maps that are affine on residue classes: composition, images and
//! preimages stay exact.

use ckspace::{parse_map, parse_set, ProgressionMap};

fn main() {
    let f = parse_map("piece(0%2; 0,2 -> 0,3) | piece(1%2; 1,2 -> 1,1)").unwrap();
    let g = ProgressionMap::double();
    println!("f = {f}");
    println!(
        "f(0..8) = {:?}",
        (0..8).map(|n| f.apply(n)).collect::<Vec<_>>()
    );
    println!("f ∘ double = {}", f.compose(&g));
    println!(
        "image of 0%4 under f: {}",
        f.image(&parse_set("0%4").unwrap())
    );
    println!(
        "preimage of 0%3 under f: {}",
        f.preimage(&parse_set("0%3").unwrap())
    );
    let flags = f.classify();
    println!(
        "injective {}, finite-to-one {}",
        flags.injective, flags.finite_to_one
    );

    // a table below the threshold, then constant
    let h = parse_map("table{0:5,1:5} | const(2)").unwrap();
    println!("{h}: injective {}", h.classify().injective);

    let odds = parse_set("1%2").unwrap();
    let fives = parse_set("0%5").unwrap();
    let e = ProgressionMap::order_embedding(&odds, &fives).unwrap();
    println!("order embedding of odds onto 0%5: {e}");
}
