//! Basic compact-open boxes: normal forms, emptiness with a witness, and
//! certified refinement.

use ckspace::compact_open::{self, is_empty, normalize, parse_constraints, Emptiness};

fn main() {
    let raw = parse_constraints("[0%2 -> 0%3] & [0%3 -> 1%2] & [1%2 -> omega]").unwrap();
    let bx = normalize(&raw);
    println!("normal form: {bx}");
    match is_empty(&bx).unwrap() {
        Emptiness::Empty { index } => println!("empty because of {}", bx.constraints()[index]),
        Emptiness::Inhabited { witness } => {
            println!("inhabited by {witness}");
            println!(
                "witness satisfies the raw list: {}",
                raw.iter().all(|c| c.contains(&witness))
            );
        }
    }

    let hopeless = normalize(&parse_constraints("[0%2 -> {1,2,3}]").unwrap());
    println!(
        "{hopeless}: empty {}",
        is_empty(&hopeless).unwrap().is_empty()
    );

    let extra = parse_constraints("[1%2 -> 1%4]").unwrap();
    let (finer, cert) = compact_open::refine(&bx, &extra).unwrap();
    println!("refined: {finer}");
    println!("certificate: {}", serde_json::to_string(&cert).unwrap());
    println!("certificate checks: {}", cert.validate(&finer, &bx));
}
