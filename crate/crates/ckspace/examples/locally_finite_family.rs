//! A discrete family of boxes indexed by dyadic pieces of the evens, with a
//! neighbourhood of any map meeting at most one member.

use ckspace::compact_open::{empty_constraint, normalize};
use ckspace::witnesses::{dyadic_pieces, gdelta_family, locally_finite_family, separating_nbhd};
use ckspace::{parse_map, parse_set};

fn main() {
    let a = parse_set("0%2").unwrap();
    let pieces = dyadic_pieces(5);
    let family = locally_finite_family(&a, &pieces).unwrap();
    for (n, u) in family.iter().enumerate() {
        println!("U_{n} = {u}");
    }
    let disjoint = family.iter().enumerate().all(|(i, u)| {
        family[i + 1..].iter().all(|v| {
            let both = normalize(&[u.constraints(), v.constraints()].concat());
            empty_constraint(&both).unwrap().is_some()
        })
    });
    println!("pairwise disjoint: {disjoint}");

    for text in ["id", "double", "shift(1)", "piece(2%4; 2,4 -> 1,2) | id"] {
        let f = parse_map(text).unwrap();
        let nbhd = separating_nbhd(&f, &a, &pieces).unwrap();
        let met: Vec<usize> = (0..family.len())
            .filter(|&n| {
                let both = normalize(&[nbhd.constraints(), family[n].constraints()].concat());
                empty_constraint(&both).unwrap().is_none()
            })
            .collect();
        println!("{text}: {nbhd} meets {met:?}");
    }

    let b = parse_set("1%2").unwrap();
    let f = parse_map("shift(1)").unwrap();
    for c in gdelta_family(&a, &b, &f, &pieces[..3]).unwrap() {
        println!("G_delta constraint {c}");
    }
}
