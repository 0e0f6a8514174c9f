//! Turn survey rankings into pairwise games and rate them in one period.

use medcs::rating::{initial_ratings, leaderboard, rankings_to_pairwise, Decomposition};

fn main() {
    let rankings = [
        ["human", "gpt-mask", "gpt", "nmt", "small"],
        ["gpt-mask", "human", "nmt", "gpt", "small"],
        ["human", "gpt-mask", "gpt", "small", "nmt"],
        ["gpt-mask", "gpt", "human", "nmt", "small"],
    ];
    let games: Vec<_> = rankings
        .iter()
        .flat_map(|r| {
            let ids: Vec<String> = r.iter().map(|s| s.to_string()).collect();
            rankings_to_pairwise(&ids, Decomposition::AllPairs)
        })
        .collect();
    let board = leaderboard(&initial_ratings(rankings[0]), &games).expect("known systems");
    for row in board {
        println!(
            "{:<10} {:>8.2} ± {:>6.2}  [{:.0}, {:.0}]  {} games",
            row.system_id,
            row.rating,
            2.0 * row.rd,
            row.ci_lo,
            row.ci_hi,
            row.games
        );
    }
}
