//! A certified chain of boxes becomes a scheme tree whose injection φ is
//! computed lazily and checked against the tree.

use ckspace::compact_open::{parse_constraints, refine};
use ckspace::schemes::{self, chain_to_tree, ChainLink};
use ckspace::BasicBox;

fn main() {
    let mut chain = Vec::new();
    let mut current = BasicBox::full();
    for extra in ["[0%2 -> 0%2]", "[0%4 -> 0%8]", "", "[1%2 -> 1%4]"] {
        let (bx, cert) = refine(&current, &parse_constraints(extra).unwrap()).unwrap();
        println!("{bx}");
        current = bx.clone();
        chain.push(ChainLink {
            bx,
            cert: Some(cert),
        });
    }
    let tree = chain_to_tree(&chain).unwrap();
    println!(
        "tree of height {} with {} nodes",
        tree.height(),
        tree.nodes().len()
    );
    for (i, n) in tree.nodes().iter().enumerate() {
        println!("  {i}: level {} C = {}  D = {}", n.level, n.c, n.d);
    }

    let mut phi = schemes::build_injection(&tree).unwrap();
    println!("final values {:?}", phi.finalized());
    println!("φ(0..16) = {:?}", phi.prefix(16));
    phi.prefix(512);
    println!(
        "(*) at horizon 512: {}",
        schemes::verify_star(&tree, &phi, 512).unwrap()
    );

    // nudging a payload by a finite set breaks exactness; repair restores it
    let mut nodes = tree.nodes().to_vec();
    nodes[1].c = nodes[1].c.union(&ckspace::PeriodicSet::finite([1, 3]));
    let noisy = schemes::SchemeTree::from_nodes(nodes).unwrap();
    println!("noisy tree: {}", schemes::validate(&noisy));
    let fixed = schemes::repair(&noisy).unwrap();
    println!("repaired valid: {}", schemes::validate(&fixed).is_valid());
}
