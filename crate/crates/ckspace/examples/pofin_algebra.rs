//! Eventually periodic sets as representatives of clopen subsets of ω*.

use ckspace::parse_set;

fn main() {
    let evens = parse_set("0%2").unwrap();
    let fours = parse_set("0%4 + {1,3}").unwrap();
    let sixes = parse_set("0%6 - {0,6}").unwrap();

    println!("evens ∩ (0%4 + {{1,3}}) = {}", evens.intersection(&fours));
    println!("evens ∖ 0%6 = {}", evens.difference(&sixes));
    println!("complement of 0%6 - {{0,6}} = {}", sixes.complement());
    println!("~0%3 & 0%2 = {}", parse_set("~0%3 & 0%2").unwrap());

    // relations hold modulo finite sets
    println!("0%4 + {{1,3}} ⊆* evens: {}", fours.almost_subset(&evens));
    println!(
        "0%4 + {{1,3}} ⊆ evens: {}",
        fours.difference(&evens).is_empty()
    );
    println!(
        "0%6 - {{0,6}} =* 0%6: {}",
        sixes.almost_equal(&parse_set("0%6").unwrap())
    );
    println!(
        "0%4 and 2%4 almost disjoint: {}",
        parse_set("0%4")
            .unwrap()
            .almost_disjoint(&parse_set("2%4").unwrap())
    );

    let s = parse_set("1%3 + 2%5").unwrap();
    println!(
        "{s}: first ten {:?}",
        s.iter_below(30).take(10).collect::<Vec<_>>()
    );
    println!("{s}: the 100th element is {}", s.nth(100).unwrap());
    println!("canonical JSON: {}", serde_json::to_string(&s).unwrap());
}
