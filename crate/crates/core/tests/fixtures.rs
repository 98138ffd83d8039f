mod common;

use common::fixture;
use lambek_core::grammar::{membership, validate_report};
use lambek_core::layered::{layered_membership, query_env, LayeredConfig, QueryResult};
use lambek_core::prover::{validate, SearchConfig};

fn accepts(name: &str, sentence: &str) -> bool {
    let g = fixture(name);
    let words: Vec<&str> = sentence.split_whitespace().collect();
    let r = membership(&g, &words).unwrap();
    if r.accepted {
        validate_report(&g, &r).unwrap();
    }
    r.accepted
}

#[test]
fn english_polymorphic_complements() {
    assert!(accepts("english", "Kim became wealthy and a_Republican"));
    assert!(!accepts("english", "Kim grew wealthy and a_Republican"));
    assert!(accepts("english", "Kim grew wealthy"));
    assert!(!accepts("english", "Kim grew a_Republican"));
    assert!(!accepts("english", "Kim grew and remained wealthy and a_Republican"));
    assert!(accepts("english", "Kim grew and remained wealthy"));
    assert!(accepts("english", "Kim became and remained a_Republican"));
}

#[test]
fn german_case_coordination() {
    assert!(accepts("german", "er findet und hilft Frauen"));
    assert!(!accepts("german", "er findet und hilft Männer"));
    assert!(!accepts("german", "er findet und hilft Kindern"));
    assert!(!accepts("german", "er findet und hilft Männer und Kindern"));
    assert!(accepts("german", "er findet Männer und Frauen"));
    assert!(accepts("german", "er hilft Kindern"));
}

#[test]
fn coordination_step_proofs_validate() {
    let g = fixture("german");
    let r = membership(&g, &["er", "findet", "und", "hilft", "Frauen"]).unwrap();
    assert_eq!(r.coordinations.len(), 1);
    for c in &r.coordinations {
        validate(&c.proof, g.regime, &*g.base).unwrap();
    }
}

#[test]
fn persuade_builds_the_content() {
    let g = fixture("persuade");
    let cfg = LayeredConfig::new(SearchConfig::cut_free(g.regime));
    let r = layered_membership(&g, &["kim", "persuades", "sandy", "to_leave"], &cfg).unwrap();
    assert!(r.accepted_plain);
    assert_eq!(r.readings.len(), 1);
    let env = &r.readings[0].env;
    let s = "G_0";
    assert_eq!(query_env(env, s, &["content", "relation"]).unwrap(), QueryResult::Atom("persuade".into()));
    let subject = query_env(env, "K_1", &[]).unwrap();
    let object = query_env(env, "K_3", &[]).unwrap();
    assert_eq!(query_env(env, s, &["content", "influence"]).unwrap(), subject);
    assert_eq!(query_env(env, s, &["content", "influenced"]).unwrap(), object);
    assert_eq!(query_env(env, s, &["content", "soa_arg", "content", "agent"]).unwrap(), object);
    assert_eq!(
        query_env(env, s, &["content", "influence", "name"]).unwrap(),
        QueryResult::Atom("kim".into())
    );
}

#[test]
fn clash_is_pruned() {
    let g = fixture("clash");
    assert!(membership(&g, &["she", "walk"]).unwrap().accepted);
    let cfg = LayeredConfig::new(SearchConfig::cut_free(g.regime));
    let r = layered_membership(&g, &["she", "walk"], &cfg).unwrap();
    assert!(r.accepted_plain);
    assert!(r.readings.is_empty());
    assert!(r.pruned > 0);
}
