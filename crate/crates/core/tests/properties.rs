mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use satprep::dimacs::{parse_dimacs, write_dimacs, DimacsDocument};
use satprep::oracle::enumerate_models;
use satprep::pipeline::{preprocess, preprocess_and_emit, Outcome, PipelineConfig, Technique};
use satprep::simplify::er_pass;
use satprep::{Formula, Lit, Var};

use common::{check_round_trip, describe, random_formula, vars_of};

fn arb_formula(max_vars: i32, max_clauses: usize) -> impl Strategy<Value = Formula> {
    let lit = (1..=max_vars, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
    prop::collection::vec(prop::collection::vec(lit, 1..=4), 0..=max_clauses)
        .prop_map(move |cs| Formula::from_clauses(max_vars as u32, cs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn full_pipeline_round_trip(f in arb_formula(10, 40)) {
        prop_assert_eq!(check_round_trip(&f, &PipelineConfig::default()), Ok(()));
    }

    #[test]
    fn clause_count_never_grows_without_er(f in arb_formula(10, 40)) {
        let before = f.num_active();
        if let Outcome::Reduced { formula, .. } = preprocess(f, &PipelineConfig::default()).unwrap() {
            prop_assert!(formula.num_active() <= before);
        }
    }

    #[test]
    fn emission_is_deterministic(f in arb_formula(8, 30)) {
        let doc = parse_dimacs(&write_dimacs(&f)).unwrap();
        let run = |doc: &DimacsDocument| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            preprocess_and_emit(doc, &PipelineConfig::default(), &mut a, &mut b).unwrap();
            (a, b)
        };
        prop_assert_eq!(run(&doc), run(&doc));
    }

    #[test]
    fn er_projection_and_definition(f in arb_formula(6, 16)) {
        let mut g = f.clone();
        let defs = er_pass(&mut g, 3, 2);
        let vars = vars_of(&f);
        let before = enumerate_models(&f, &vars).unwrap();
        let after = enumerate_models(&g, &vars).unwrap();
        prop_assert_eq!(before, after);
        // every model of g gives the new variable the value of the disjunction
        let all = vars_of(&g);
        for m in enumerate_models(&g, &all).unwrap() {
            let value = |l: Lit| m.contains(&l);
            for d in &defs {
                prop_assert_eq!(value(d.new_variable.positive()), value(d.left) || value(d.right));
                prop_assert!(d.new_variable.index() > f.num_vars());
            }
        }
    }
}

#[test]
fn whitelisted_variables_keep_their_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for i in 0..300 {
        let f = random_formula(&mut rng, 10, 30);
        let whitelist: BTreeSet<Var> = (1..=f.num_vars())
            .filter(|_| rng.gen_bool(0.3))
            .map(Var::new)
            .collect();
        let cfg = PipelineConfig {
            whitelist: whitelist.clone(),
            ..PipelineConfig::default()
        };
        let before = enumerate_models(&f, &whitelist).unwrap();
        match preprocess(f.clone(), &cfg).unwrap() {
            Outcome::Unsatisfiable { .. } => assert!(before.is_empty(), "formula {i}"),
            Outcome::Reduced { formula, .. } => {
                let after = enumerate_models(&formula, &whitelist).unwrap();
                assert_eq!(before, after, "formula {i}: {}", describe(&f));
            }
        }
        check_round_trip(&f, &cfg).unwrap();
    }
}

#[test]
fn blacklisted_variables_are_eliminated() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for i in 0..300 {
        let f = random_formula(&mut rng, 10, 30);
        let blacklist: BTreeSet<Var> = (1..=f.num_vars())
            .filter(|_| rng.gen_bool(0.3))
            .map(Var::new)
            .collect();
        let cfg = PipelineConfig {
            blacklist: blacklist.clone(),
            ..PipelineConfig::with_techniques(&[Technique::Ve])
        };
        if let Outcome::Reduced { formula, .. } = preprocess(f.clone(), &cfg).unwrap() {
            // fixed units are appended as unit clauses and may mention them
            for v in &blacklist {
                let in_long = formula
                    .active_clauses()
                    .any(|c| c.len() > 1 && c.iter().any(|l| l.var() == *v));
                assert!(!in_long, "formula {i}: {v} survived; {}", describe(&f));
            }
        }
        check_round_trip(&f, &cfg).unwrap();
    }
}

#[test]
fn wider_random_sweep() {
    // larger and sparser shapes than the acceptance suite
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut cfg_er = PipelineConfig::with_techniques(&Technique::ORDER);
    cfg_er.er_max_definitions = 8;
    cfg_er.er_min_pair = 2;
    cfg_er.loop_limit = 10;
    for i in 0..400 {
        let f = random_formula(&mut rng, 20, 90);
        for cfg in [&PipelineConfig::default(), &cfg_er] {
            check_round_trip(&f, cfg)
                .unwrap_or_else(|e| panic!("formula {i}: {e}; {}", describe(&f)));
        }
    }
}
