//! A strong Choquet game where NE copies E's box; the witness φ grows one
//! final value per round.

use ckspace::choquet::{self, GameState, Mode};
use ckspace::compact_open::parse_constraints;

fn main() {
    let mut game = GameState::new(Mode::Strong);
    let moves = [
        "[0%2 -> 0%2]",
        "[1%2 -> 1%4]",
        "",
        "[0%4 -> 0%8] & [2%4 -> 2%8]",
        "[1%4 -> 1%8]",
    ];
    for extra in moves {
        let extra = parse_constraints(extra).unwrap();
        // E points at a map in the box it asks for
        let (bx, _) = ckspace::compact_open::refine(game.current_box(), &extra).unwrap();
        let point = choquet::inhabitant(&bx);
        game.move_e(extra, point).unwrap();
        game.move_ne().unwrap();
        println!("round {}: {}", game.rounds(), game.current_box());
        println!("  φ = {:?}", game.witness_prefix(game.rounds()).unwrap());
    }

    println!("menu of legal E moves:");
    for s in game.suggestions().iter().take(4) {
        println!("  {}", s.label);
    }

    let log: Vec<String> = game_log(&game);
    let replayed = GameState::replay(&choquet::parse_log(&log.join("\n")).unwrap()).unwrap();
    println!(
        "replay reproduces the state: {}",
        replayed.state_string() == game.state_string()
    );
}

fn game_log(game: &GameState) -> Vec<String> {
    let mut lines = vec![choquet::log_line(&choquet::LogEntry::New {
        mode: game.mode(),
    })];
    for played in game.history() {
        let entry = match played {
            choquet::Played::E { extra, point, .. } => choquet::LogEntry::E {
                extra: extra.clone(),
                point: point.clone(),
            },
            choquet::Played::NE { .. } => choquet::LogEntry::NE,
        };
        lines.push(choquet::log_line(&entry));
    }
    lines
}
