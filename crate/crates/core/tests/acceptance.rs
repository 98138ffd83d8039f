//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use lambek_core::base::{PosetBase, Verdict};
use lambek_core::feature::{entail_check, ft_meet, normalize, simulation_oracle, FeatureTerm};
use lambek_core::grammar::{check_equivalence, lemma12_oracle, membership, super_plus, validate_report};
use lambek_core::layered::{layered_membership, query_env, LayeredConfig, QueryResult};
use lambek_core::prover::{
    check_strengthen_l, check_weaken_r, prove, prove_with_cut, validate, SearchConfig,
};
use lambek_core::syntax::parse::parse_sequent;
use lambek_core::syntax::{subtype, BasicType, Formula, GTerm, Polarity, Regime, Sequent};

type Check = Result<String, String>;

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let r = f();
    let took = start.elapsed();
    let note = format!("{:.2} s", took.as_secs_f64());
    match (r, limit) {
        (Ok(d), Some(l)) if took > l => Err(format!("{d}; took {note}, limit {:.0} s", l.as_secs_f64())),
        (Ok(d), _) => Ok(format!("{d}; {note}")),
        (Err(e), _) => Err(format!("{e}; {note}")),
    }
}

fn sentence_suite() -> Check {
    let cases = [
        ("english", "Kim became wealthy and a_Republican", true),
        ("english", "Kim grew wealthy and a_Republican", false),
        ("english", "Kim grew wealthy", true),
        ("english", "Kim grew a_Republican", false),
        ("english", "Kim grew and remained wealthy and a_Republican", false),
        ("german", "er findet und hilft Männer", false),
        ("german", "er findet und hilft Kindern", false),
        ("german", "er findet und hilft Frauen", true),
        ("german", "er findet und hilft Männer und Kindern", false),
    ];
    let mut wrong = Vec::new();
    for (g, s, expected) in cases {
        let grammar = fixture(g);
        let words: Vec<&str> = s.split_whitespace().collect();
        let r = membership(&grammar, &words).map_err(|e| e.to_string())?;
        if r.accepted {
            validate_report(&grammar, &r).map_err(|e| format!("{s}: {e}"))?;
        }
        if r.accepted != expected {
            wrong.push(s);
        }
    }
    if wrong.is_empty() {
        Ok(format!("{} sentences decided as expected", cases.len()))
    } else {
        Err(format!("wrong verdicts: {wrong:?}"))
    }
}

fn cut_elimination() -> Check {
    let base = poset4();
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0;
    let mut provable = 0;
    for regime in Regime::ALL {
        for _ in 0..260 {
            let s = random_sequent(&mut rng, regime, &POSET4_ATOMS, 8);
            let plain = prove(&s, &SearchConfig::cut_free(regime), &base).map_err(|e| e.to_string())?;
            let cut = prove_with_cut(&s, &SearchConfig::with_cut(regime, 3), &base).map_err(|e| e.to_string())?;
            if plain.is_some() != cut.is_some() {
                return Err(format!("discrepancy on {} in {regime}", s.display_in(regime)));
            }
            if let Some(p) = &cut {
                validate(p, regime, &base).map_err(|e| e.to_string())?;
            }
            checked += 1;
            provable += usize::from(plain.is_some());
        }
    }
    Ok(format!(
        "{checked} sequents, {provable} provable, 0 discrepancies"
    ))
}

fn subtype_derivable() -> Check {
    let base = poset4();
    let mut rng = StdRng::seed_from_u64(11);
    let mut pairs = 0;
    let mut strict = 0;
    while pairs < 500 {
        let a = random_formula_depth(&mut rng, &POSET4_ATOMS, 3);
        let b = random_related(&mut rng, &a, &base, Polarity::Positive);
        if !subtype(&a, &b, &base).map_err(|e| e.to_string())? {
            return Err(format!("generator produced {a} ⋠ {b}"));
        }
        strict += usize::from(a != b);
        for regime in Regime::ALL {
            let s = Sequent::new(GTerm::Leaf(a.clone()), b.clone());
            if prove(&s, &SearchConfig::cut_free(regime), &base).map_err(|e| e.to_string())?.is_none() {
                return Err(format!("{a} ⇒ {b} not provable in {regime}"));
            }
        }
        pairs += 1;
    }
    Ok(format!("{pairs} pairs ({strict} strict) provable in all regimes"))
}

fn all_formulas(atoms: &[&str], max: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![atoms.iter().map(Formula::basic).collect()];
    for k in 1..=max {
        let mut fs = Vec::new();
        for i in 0..k {
            for l in &by_size[i] {
                for r in &by_size[k - 1 - i] {
                    fs.push(Formula::over(l.clone(), r.clone()));
                    fs.push(Formula::under(l.clone(), r.clone()));
                }
            }
        }
        by_size.push(fs);
    }
    by_size.into_iter().flatten().collect()
}

fn substitution_oracle() -> Check {
    let base = chain3();
    let universe: Vec<BasicType> = CHAIN3_ATOMS.iter().map(BasicType::new).collect();
    let fs = all_formulas(&CHAIN3_ATOMS, 3);
    let mut pairs = 0u64;
    let mut related = 0u64;
    for a in &fs {
        for b in &fs {
            let s = subtype(a, b, &base).map_err(|e| e.to_string())?;
            let o = lemma12_oracle(a, b, &base, &universe).map_err(|e| e.to_string())?;
            if s != o {
                return Err(format!("mismatch on ({a}, {b}): subtype {s}, oracle {o}"));
            }
            pairs += 1;
            related += u64::from(s);
        }
    }
    Ok(format!("{} formulas, {pairs} pairs, {related} related, 0 mismatches", fs.len()))
}

fn compile_out() -> Check {
    let g = fixture("toy_chain");
    let r = check_equivalence(&g, 4).map_err(|e| e.to_string())?;
    if r.strings_checked != 120 {
        return Err(format!("checked {} strings, expected 120", r.strings_checked));
    }
    if !r.equivalent() {
        return Err(format!("mismatches: {:?}", r.mismatches));
    }
    let base = PosetBase::from_edges(["b1", "b2"], [("b1", "b2")]).map_err(|e| e.to_string())?;
    let universe = [BasicType::new("b1"), BasicType::new("b2")];
    let a = Formula::parse("b1/(b1/b1)").map_err(|e| e.to_string())?;
    let got: Vec<String> = super_plus(&a, &universe, &base)
        .map_err(|e| e.to_string())?
        .iter()
        .map(ToString::to_string)
        .collect();
    let mut want = ["b1/(b1/b1)", "b1/(b1/b2)", "b2/(b1/b1)", "b2/(b1/b2)"].map(String::from).to_vec();
    want.sort();
    let mut sorted = got.clone();
    sorted.sort();
    if sorted != want {
        return Err(format!("super⁺(b1/(b1/b1)) = {got:?}"));
    }
    Ok(format!(
        "120 strings agree ({} accepted), family of {}; super⁺ example reproduced",
        r.accepted, r.family_size
    ))
}

fn feature_entailment() -> Check {
    let mut rng = StdRng::seed_from_u64(23);
    let mut pairs = 0;
    let mut counts = [0usize; 3];
    while pairs < 2500 {
        let phi = random_feature_term(&mut rng, 4);
        let psi = random_guard(&mut rng, &phi);
        if normalize("x", &phi).is_err() || normalize("x", &psi).is_err() {
            continue;
        }
        let v = entail_check(&phi, &psi).map_err(|e| e.to_string())?;
        let sim = simulation_oracle(&phi, &psi);
        if (v == Verdict::Entailed) != sim {
            return Err(format!("{phi} ⊨? {psi}: verdict {v}, simulation {sim}"));
        }
        if v == Verdict::Disentailed && ft_meet(&phi, &psi).is_ok() {
            return Err(format!("{phi} / {psi}: disentailed but jointly consistent"));
        }
        counts[match v {
            Verdict::Entailed => 0,
            Verdict::Disentailed => 1,
            Verdict::Blocked => 2,
        }] += 1;
        pairs += 1;
    }
    Ok(format!(
        "{pairs} pairs: {} entailed, {} disentailed, {} blocked; 0 violations",
        counts[0], counts[1], counts[2]
    ))
}

fn entailment_scaling() -> Check {
    std::thread::Builder::new()
        .stack_size(512 << 20)
        .spawn(|| {
            let names = vec!["f"; 10_000];
            let phi = FeatureTerm::path(&names, FeatureTerm::atom("a"));
            let psi = FeatureTerm::path(&names, FeatureTerm::atom("a"));
            let psi_bad = FeatureTerm::path(&names, FeatureTerm::atom("b"));
            let start = Instant::now();
            let v1 = entail_check(&phi, &psi).map_err(|e| e.to_string())?;
            let v2 = entail_check(&phi, &psi_bad).map_err(|e| e.to_string())?;
            let took = start.elapsed();
            let ok = v1 == Verdict::Entailed && v2 == Verdict::Disentailed;
            let msg = format!("depth 10000: {v1} / {v2} in {:.3} s", took.as_secs_f64());
            // terms are deep; release them here, on the big stack
            drop((phi, psi, psi_bad));
            if !ok {
                Err(msg)
            } else if took > Duration::from_secs(1) {
                Err(format!("{msg}, over 1 s"))
            } else {
                Ok(msg)
            }
        })
        .map_err(|e| e.to_string())?
        .join()
        .map_err(|_| "entailment on the deep chain panicked".to_string())?
}

fn separations() -> Check {
    let base = PosetBase::from_edges(["a", "b", "c"], []).map_err(|e| e.to_string())?;
    let cases = [
        ("a/b, b/c => a/c", [Regime::L, Regime::LP]),
        ("b, a/b => a", [Regime::LP, Regime::NLP]),
    ];
    let mut out = Vec::new();
    for (text, expected) in cases {
        for regime in Regime::ALL {
            let s = parse_sequent(text, regime, false).map_err(|e| e.to_string())?;
            let found = prove(&s, &SearchConfig::cut_free(regime), &base).map_err(|e| e.to_string())?;
            if found.is_some() != expected.contains(&regime) {
                return Err(format!("`{text}` in {regime}: provable = {}", found.is_some()));
            }
        }
        out.push(format!("`{text}` only in {}", expected.map(|r| r.to_string()).join("/")));
    }
    Ok(out.join(", "))
}

fn double_layering() -> Check {
    let g = fixture("persuade");
    let cfg = LayeredConfig::new(SearchConfig::cut_free(g.regime));
    let r = layered_membership(&g, &["kim", "persuades", "sandy", "to_leave"], &cfg).map_err(|e| e.to_string())?;
    if r.readings.len() != 1 {
        return Err(format!("{} environments for the persuade sentence", r.readings.len()));
    }
    let env = &r.readings[0].env;
    let q = |x: &str, path: &[&str]| query_env(env, x, path).map_err(|e| e.to_string());
    let checks = [
        (q("G_0", &["content", "relation"])?, QueryResult::Atom("persuade".into())),
        (q("G_0", &["content", "influence"])?, q("X_2", &[])?),
        (q("G_0", &["content", "influence"])?, q("K_1", &[])?),
        (q("G_0", &["content", "influenced"])?, q("Y_2", &[])?),
        (q("G_0", &["content", "influenced"])?, q("K_3", &[])?),
        (q("G_0", &["content", "soa_arg"])?, q("Z_2", &[])?),
        (q("G_0", &["content", "soa_arg", "content", "agent"])?, q("K_3", &[])?),
    ];
    for (got, want) in &checks {
        if got != want {
            return Err(format!("content query gave {got}, expected {want}"));
        }
    }
    let clash = fixture("clash");
    let plain = membership(&clash, &["she", "walk"]).map_err(|e| e.to_string())?;
    let layered = layered_membership(&clash, &["she", "walk"], &cfg).map_err(|e| e.to_string())?;
    if !plain.accepted || !layered.readings.is_empty() {
        return Err(format!(
            "clash fixture: plain {}, layered readings {}",
            plain.accepted,
            layered.readings.len()
        ));
    }
    Ok("persuade: 1 environment with the expected content; clash: provable, no consistent reading".into())
}

fn admissibility() -> Check {
    let base = poset4();
    let mut rng = StdRng::seed_from_u64(31);
    let mut instances = 0;
    let mut attempts = 0;
    while instances < 300 {
        attempts += 1;
        if attempts > 200_000 {
            return Err(format!("only {instances} provable seeds found"));
        }
        let regime = Regime::ALL[rng.gen_range(0..4)];
        let s = random_sequent(&mut rng, regime, &POSET4_ATOMS, 8);
        let Some(p) = prove(&s, &SearchConfig::cut_free(regime), &base).map_err(|e| e.to_string())? else {
            continue;
        };
        // occurrences are paths into the antecedent as the proof presents it
        let u = &p.conclusion.antecedent;
        let leaves: Vec<_> = u
            .positions()
            .into_iter()
            .filter(|q| u.at(q).unwrap().as_leaf().is_some())
            .collect();
        let occ = &leaves[rng.gen_range(0..leaves.len())];
        let b = u.at(occ).unwrap().as_leaf().unwrap().clone();
        let a = random_related(&mut rng, &b, &base, Polarity::Negative);
        check_strengthen_l(&p, occ, &a, regime, &base)
            .map_err(|e| format!("strengthen-L {a} for {b} in {}: {e}", s.display_in(regime)))?;
        let c = random_related(&mut rng, &s.succedent, &base, Polarity::Positive);
        check_weaken_r(&p, &c, regime, &base)
            .map_err(|e| format!("weaken-R to {c} in {}: {e}", s.display_in(regime)))?;
        instances += 1;
    }
    Ok(format!("{instances} instances, each re-proved after strengthen-L and weaken-R"))
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Check); 10] = [
        ("coordination sentences", Some(5), sentence_suite),
        ("cut elimination", Some(60), cut_elimination),
        ("subtypes are derivable", None, subtype_derivable),
        ("substitution oracle", None, substitution_oracle),
        ("compile-out equivalence", Some(120), compile_out),
        ("feature entailment", None, feature_entailment),
        ("entailment on a deep chain", None, entailment_scaling),
        ("structural separations", None, separations),
        ("double layering", None, double_layering),
        ("admissible rules", None, admissibility),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let r = timed(limit.map(Duration::from_secs), f);
        let (tag, detail) = match &r {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(r.is_err());
        println!("criterion {:>2}  {tag}  {name}: {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
