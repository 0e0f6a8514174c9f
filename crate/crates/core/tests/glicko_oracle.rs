mod oracles;

use std::collections::BTreeMap;

use medcs::rating::{glicko_rate, PairwiseOutcome, PlayerRating};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn players(list: &[(&str, f64, f64)]) -> BTreeMap<String, PlayerRating> {
    list.iter().map(|&(id, r, rd)| (id.to_string(), PlayerRating::new(id, r, rd))).collect()
}

#[test]
fn three_opponent_example() {
    let init = players(&[("p", 1500.0, 200.0), ("a", 1400.0, 30.0), ("b", 1550.0, 100.0), ("c", 1700.0, 300.0)]);
    let games = [
        PairwiseOutcome::new("p", "a"),
        PairwiseOutcome::new("b", "p"),
        PairwiseOutcome::new("c", "p"),
    ];
    let out = glicko_rate(&init, &games).unwrap();
    let (r, rd) = oracles::glicko(1500.0, 200.0, &[(1400.0, 30.0, 1.0), (1550.0, 100.0, 0.0), (1700.0, 300.0, 0.0)]);
    assert!((out["p"].r - r).abs() < 1e-9 && (out["p"].rd - rd).abs() < 1e-9);
    assert!((out["p"].r - 1464.1).abs() <= 0.1, "{}", out["p"].r);
    assert!((out["p"].rd - 151.4).abs() <= 0.1, "{}", out["p"].rd);
}

#[test]
fn empty_period_is_identity() {
    let init = players(&[("a", 1620.5, 80.0), ("b", 1380.0, 350.0)]);
    assert_eq!(glicko_rate(&init, &[]).unwrap(), init);
}

pub struct Period {
    pub init: BTreeMap<String, PlayerRating>,
    pub games: Vec<PairwiseOutcome>,
}

pub fn random_period(rng: &mut ChaCha8Rng) -> Period {
    let n = rng.gen_range(2..7);
    let ids: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let init = ids
        .iter()
        .map(|id| (id.clone(), PlayerRating::new(id, rng.gen_range(1000.0..2000.0), rng.gen_range(30.0..=350.0))))
        .collect();
    let games = (0..rng.gen_range(0..40))
        .map(|_| {
            let pair: Vec<&String> = ids.choose_multiple(rng, 2).collect();
            PairwiseOutcome::new(pair[0], pair[1])
        })
        .collect();
    Period { init, games }
}

#[test]
fn random_periods_match_oracle_and_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let Period { init, mut games } = random_period(&mut rng);
        let out = glicko_rate(&init, &games).unwrap();

        for (id, p) in &init {
            let mine: Vec<(f64, f64, f64)> = games
                .iter()
                .filter_map(|g| {
                    let (opp, s) = if &g.winner == id {
                        (&g.loser, 1.0)
                    } else if &g.loser == id {
                        (&g.winner, 0.0)
                    } else {
                        return None;
                    };
                    Some((init[opp].r, init[opp].rd, s))
                })
                .collect();
            let (r, rd) = oracles::glicko(p.r, p.rd, &mine);
            assert!((out[id].r - r).abs() < 1e-9 && (out[id].rd - rd).abs() < 1e-9);
        }

        let mirrored_init = init
            .values()
            .map(|p| (p.system_id.clone(), PlayerRating::new(&p.system_id, 3000.0 - p.r, p.rd)))
            .collect();
        let flipped: Vec<PairwiseOutcome> = games.iter().map(|g| PairwiseOutcome::new(&g.loser, &g.winner)).collect();
        let mirrored = glicko_rate(&mirrored_init, &flipped).unwrap();
        for (id, p) in &out {
            assert!((mirrored[id].r - (3000.0 - p.r)).abs() < 1e-9);
            assert!((mirrored[id].rd - p.rd).abs() < 1e-9);
        }

        games.shuffle(&mut rng);
        assert_eq!(glicko_rate(&init, &games).unwrap(), out);
    }
}
