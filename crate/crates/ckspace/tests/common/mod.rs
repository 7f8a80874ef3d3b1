#![allow(dead_code)]

pub mod finite;
pub mod http;

use ckspace::choquet::{self, GameState};
use ckspace::compact_open::{self, BasicBox, SubbasicBox};
use ckspace::schemes::ChainLink;
use ckspace::{PeriodicSet, ProgressionMap};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn class(r: u64, m: u64) -> PeriodicSet {
    PeriodicSet::residue_class(r % m, m).unwrap()
}

/// A set with modulus ≤ 6 and a few exceptions below 20.
pub fn set(rng: &mut StdRng) -> PeriodicSet {
    let m = rng.gen_range(1..=6);
    let residues: Vec<u64> = (0..m).filter(|_| rng.gen_bool(0.5)).collect();
    let mut s = residues
        .iter()
        .fold(PeriodicSet::empty(), |acc, &r| acc.union(&class(r, m)));
    for _ in 0..rng.gen_range(0..3) {
        let n = rng.gen_range(0..20);
        let point = PeriodicSet::finite([n]);
        s = if rng.gen_bool(0.5) {
            s.union(&point)
        } else {
            s.difference(&point)
        };
    }
    s
}

pub fn infinite_set(rng: &mut StdRng) -> PeriodicSet {
    loop {
        let s = set(rng);
        if !s.is_finite() {
            return s;
        }
    }
}

/// Affine with slope 0..=3 on each class mod ≤ 4 past a small table.
pub fn map(rng: &mut StdRng) -> ProgressionMap {
    let m = rng.gen_range(1..=4u64);
    let t = rng.gen_range(0..=5u64);
    let bases: Vec<u64> = (0..m).map(|_| rng.gen_range(0..12)).collect();
    let slopes: Vec<u64> = (0..m)
        .map(|_| {
            if rng.gen_bool(0.15) {
                0
            } else {
                rng.gen_range(1..=3)
            }
        })
        .collect();
    let table: Vec<u64> = (0..t).map(|_| rng.gen_range(0..30)).collect();
    ProgressionMap::from_fn(m, t, |n| {
        if n < t {
            table[n as usize]
        } else {
            let r = (n % m) as usize;
            bases[r] + slopes[r] * (n / m)
        }
    })
    .unwrap()
}

pub fn constraints(rng: &mut StdRng, len: usize) -> Vec<SubbasicBox> {
    (0..len)
        .map(|_| SubbasicBox::new(set(rng), set(rng)))
        .collect()
}

/// An extra constraint shrinking one constraint of `current`: its source
/// cut by a residue class and its target optionally cut by another.
pub fn extra(rng: &mut StdRng, current: &BasicBox) -> Vec<SubbasicBox> {
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let c = current.constraints().choose(rng).unwrap();
        let m = rng.gen_range(2..=4);
        let a = c.a.intersection(&class(rng.gen_range(0..m), m));
        let b = if rng.gen_bool(0.6) {
            let m = rng.gen_range(2..=4);
            c.b.intersection(&class(rng.gen_range(0..m), m))
        } else {
            c.b.clone()
        };
        out.push(SubbasicBox::new(a, b));
    }
    out
}

/// A random certified chain, each box a legal refinement of the last and
/// no tree node getting more than `branching` children.
pub fn chain(rng: &mut StdRng, depth: usize, branching: usize) -> Vec<ChainLink> {
    let mut links: Vec<ChainLink> = Vec::new();
    let mut current = BasicBox::full();
    while links.len() < depth {
        let mut next = None;
        for _ in 0..20 {
            let extra = if rng.gen_bool(0.2) {
                Vec::new()
            } else {
                extra(rng, &current)
            };
            if let Ok((bx, cert)) = compact_open::refine(&current, &extra) {
                let mut counts = vec![0usize; current.len()];
                for slot in &cert.assignment {
                    if let ckspace::Slot::Inside(m) = slot {
                        counts[*m] += 1;
                    }
                }
                if counts.iter().all(|&c| c <= branching) {
                    next = Some((bx, cert));
                    break;
                }
            }
        }
        let (bx, cert) =
            next.unwrap_or_else(|| compact_open::refine(&current, &[]).expect("stalling is legal"));
        current = bx.clone();
        links.push(ChainLink {
            bx,
            cert: Some(cert),
        });
    }
    links
}

/// A legal E move: a stall, a menu suggestion with small moduli, or a
/// random shrink.
pub fn e_move(rng: &mut StdRng, game: &GameState) -> (Vec<SubbasicBox>, Option<ProgressionMap>) {
    let strong = game.mode() == choquet::Mode::Strong;
    let current = game.current_box().clone();
    let roll: f64 = rng.gen();
    if roll < 0.3 {
        let menu: Vec<_> = game
            .suggestions()
            .into_iter()
            .filter(|s| {
                s.extra
                    .iter()
                    .all(|c| c.a.modulus() <= 48 && c.b.modulus() <= 48)
            })
            .collect();
        if let Some(s) = menu.choose(rng) {
            return (s.extra.clone(), s.point.clone());
        }
    }
    if roll < 0.9 {
        for _ in 0..10 {
            let extra = extra(rng, &current);
            if let Ok((bx, _)) = compact_open::refine(&current, &extra) {
                let point = if strong {
                    choquet::inhabitant(&bx)
                } else {
                    None
                };
                return (extra, point);
            }
        }
    }
    let point = if strong {
        choquet::inhabitant(&current)
    } else {
        None
    };
    (Vec::new(), point)
}
