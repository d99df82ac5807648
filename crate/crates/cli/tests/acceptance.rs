//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use groupgeom::finite_groups::{
    build_cyclic, build_dihedral, build_heisenberg_mod, build_symmetric, direct_product, heisenberg_coordinates,
    heisenberg_element, FiniteGroup, GEmbedding,
};
use groupgeom::geometry::{
    coordinate_group, radical_member_finite, solve_finite, word_ball_prefix, AlgebraicSet, EquationSystem,
};
use groupgeom::nullstellensatz::{
    consistency_check, containment_sample_check, nsatz_finite_discrepancy, witness_construct, VClosure,
};
use groupgeom::varieties::{
    laws_of, magnus_image, malcev_normal_form, pairs, random_law_instance, sample_identities, VarietySpec,
};
use groupgeom::words::{random_word, Word, WordContext};
use groupgeom::{Error, Limits};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
/// Name, check, runtime limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn g(r: Result<FiniteGroup, Error>) -> Arc<FiniteGroup> {
    Arc::new(r.expect("builder"))
}

fn random_system<R: Rng>(rng: &mut R, ctx: &WordContext, max_words: usize, min_words: usize) -> EquationSystem {
    let k = rng.gen_range(min_words..=max_words);
    let words = (0..k).map(|_| random_word(rng, ctx, 4)).collect();
    EquationSystem::new("S", ctx, words).expect("words built in ctx")
}

fn max_vars(order: usize, budget: usize) -> usize {
    (1..=3).take_while(|&n| order.pow(n as u32) <= budget).last().unwrap_or(1)
}

fn criterion_1() -> Outcome {
    let s3 = g(build_symmetric(3));
    let big = g(direct_product(&direct_product(&s3, &s3).unwrap(), &build_cyclic(6).unwrap()));
    let zoo: Vec<(VarietySpec, Vec<Arc<FiniteGroup>>)> = vec![
        (VarietySpec::All, vec![s3.clone(), g(build_dihedral(4)), g(build_symmetric(4)), g(build_heisenberg_mod(3)), big.clone()]),
        (
            VarietySpec::Abelian,
            vec![g(build_cyclic(2)), g(build_cyclic(6)), g(direct_product(&build_cyclic(2).unwrap(), &build_cyclic(4).unwrap())), g(build_cyclic(12))],
        ),
        (
            VarietySpec::Nilpotent(2),
            vec![
                g(build_heisenberg_mod(2)),
                g(build_heisenberg_mod(3)),
                g(build_heisenberg_mod(5)),
                g(build_dihedral(4)),
                g(direct_product(&build_heisenberg_mod(3).unwrap(), &build_cyclic(8).unwrap())),
            ],
        ),
        (VarietySpec::Metabelian, vec![s3.clone(), g(build_dihedral(5)), g(build_dihedral(6)), g(direct_product(&s3, &s3)), big]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let limits = Limits::default();
    let mut cases = 0;
    for i in 0..240 {
        let (v, groups) = &zoo[i % zoo.len()];
        let h = &groups[(i / zoo.len()) % groups.len()];
        let n = rng.gen_range(1..=max_vars(h.order(), 4000));
        let with_constants = rng.gen_bool(0.3);
        let (ctx, lambda) = if with_constants {
            (WordContext::new(n, Some(h.clone())), GEmbedding::identity(h))
        } else {
            (WordContext::constant_free(n), GEmbedding::trivial(h))
        };
        let s = random_system(&mut rng, &ctx, 3, 0);
        let r = containment_sample_check(&s, v, h, &lambda, 50, i as u64, &limits)
            .map_err(|e| format!("case {i} ({v}, {}): {e}", h.name()))?;
        if let Some(f) = r.failures.first() {
            return Err(format!("case {i}: {} fails at {:?} for {s} in {}", f.word, f.point, h.name()));
        }
        cases += 1;
    }
    Ok(format!("{cases} cases, 0 failures"))
}

fn criterion_2() -> Outcome {
    let groups = [None, Some(g(build_cyclic(2))), Some(g(build_cyclic(6)))];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut instances, mut skipped, mut members, mut witnesses) = (0, 0, 0, 0);
    while instances < 100 {
        let n = rng.gen_range(1..=4);
        let ctx = WordContext::new(n, groups[(instances + skipped) % 3].clone());
        let s = random_system(&mut rng, &ctx, 3, 0);
        if !consistency_check(&s, &VarietySpec::Abelian).map_err(|e| e.to_string())? {
            skipped += 1;
            continue;
        }
        let closure = VClosure::new(&s, &VarietySpec::Abelian).map_err(|e| e.to_string())?;
        for w in word_ball_prefix(&ctx, 5, 2000) {
            match closure.decide(&w).map_err(|e| format!("{s} / {w}: {e}"))? {
                Some(cert) => {
                    if !cert.verify(&w, &s, &VarietySpec::Abelian).map_err(|e| e.to_string())? {
                        return Err(format!("certificate for {w} in {s} does not verify"));
                    }
                    members += 1;
                }
                None => {
                    let r = witness_construct(&s, &w, &VarietySpec::Abelian).map_err(|e| format!("{s} / {w}: {e}"))?;
                    if !r.validate().map_err(|e| e.to_string())? || !r.g_embeds() {
                        return Err(format!("witness for {w} in {s} does not validate"));
                    }
                    witnesses += 1;
                }
            }
        }
        instances += 1;
    }
    Ok(format!(
        "{instances} instances ({skipped} inconsistent skipped), {members} certificates, {witnesses} witnesses"
    ))
}

fn criterion_3() -> Outcome {
    let v = VarietySpec::Nilpotent(2);
    let models: Vec<(usize, Arc<FiniteGroup>)> = [2, 3, 5].iter().map(|&p| (p, g(build_heisenberg_mod(p)))).collect();
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut accepted, mut rejected, mut resolved) = (0usize, 0usize, 0usize);
    for instance in 0..60 {
        let n = rng.gen_range(1..=3);
        let ctx = WordContext::constant_free(n);
        let s = random_system(&mut rng, &ctx, 3, 1);
        let closure = VClosure::new(&s, &v).map_err(|e| e.to_string())?;
        let sets: Vec<AlgebraicSet> = models
            .iter()
            .filter(|(_, h)| h.order().pow(n as u32) <= 20_000)
            .map(|(_, h)| solve_finite(&s, h, &GEmbedding::trivial(h), &limits, 1))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let mut candidates = Vec::new();
        for _ in 0..20 {
            let mut u = Word::identity(&ctx);
            for _ in 0..rng.gen_range(0..=4) {
                let t = &s.words()[rng.gen_range(0..s.len())];
                let t = if rng.gen_bool(0.5) { t.clone() } else { t.inverse() };
                u = u.concat(&t.conjugate(&random_word(&mut rng, &ctx, 3)).unwrap()).unwrap();
            }
            let count = rng.gen_range(0..=2);
            for id in sample_identities(&mut rng, &v, &ctx, count, 3) {
                u = u.concat(&id).unwrap();
            }
            match closure.decide(&u).map_err(|e| e.to_string())? {
                Some(cert) if cert.verify(&u, &s, &v).map_err(|e| e.to_string())? => accepted += 1,
                Some(_) => return Err(format!("instance {instance}: certificate for {u} fails")),
                None => return Err(format!("instance {instance}: explicit member {u} of {s} rejected")),
            }
        }
        for _ in 0..20 {
            candidates.push(random_word(&mut rng, &ctx, 6));
        }
        for w in candidates {
            match closure.decide(&w).map_err(|e| e.to_string())? {
                Some(cert) => {
                    if !cert.verify(&w, &s, &v).map_err(|e| e.to_string())? {
                        return Err(format!("certificate for {w} fails"));
                    }
                    for set in &sets {
                        if !radical_member_finite(&w, set).map_err(|e| e.to_string())?.member {
                            return Err(format!("accepted {w} does not vanish on V_H(S) over {}", set.model().name()));
                        }
                    }
                    accepted += 1;
                }
                None => {
                    rejected += 1;
                    let mut hit = false;
                    for set in &sets {
                        if !radical_member_finite(&w, set).map_err(|e| e.to_string())?.member {
                            hit = true;
                            break;
                        }
                    }
                    resolved += hit as usize;
                }
            }
        }
    }
    let ratio = if rejected == 0 { 1.0 } else { resolved as f64 / rejected as f64 };
    let summary = format!(
        "60 instances, {accepted} accepted with verified certificates, {resolved}/{rejected} rejections resolved ({:.1}%)",
        100.0 * ratio
    );
    if ratio >= 0.9 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn normal_form_word(mv: &groupgeom::varieties::MalcevVector, ctx: &WordContext) -> Word {
    let n = ctx.var_count();
    let mut w = Word::identity(ctx);
    for i in 1..=n {
        w = w.concat(&Word::var_pow(ctx, i, mv.a[i - 1].clone()).unwrap()).unwrap();
    }
    for (k, (i, j)) in pairs(n).into_iter().enumerate() {
        let c = Word::var(ctx, i).unwrap().commutator(&Word::var(ctx, j).unwrap()).unwrap();
        let e: i64 = mv.b[k].to_string().parse().unwrap();
        w = w.concat(&c.pow(e)).unwrap();
    }
    w
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let models: Vec<(usize, Arc<FiniteGroup>)> = [3, 5].iter().map(|&p| (p, g(build_heisenberg_mod(p)))).collect();
    let mut checks = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let ctx = WordContext::constant_free(n);
        let w = random_word(&mut rng, &ctx, 12);
        let mv = malcev_normal_form(&w).map_err(|e| e.to_string())?;
        let nf = normal_form_word(&mv, &ctx);
        for (p, h) in &models {
            let lambda = GEmbedding::trivial(h);
            let pp = BigInt::from(*p as u64);
            let m = |x: &BigInt| -> u64 { ((x % &pp + &pp) % &pp).to_string().parse().unwrap() };
            let x = heisenberg_element(*p, 1, 0, 0);
            let y = heisenberg_element(*p, 0, 1, 0);
            for i in 1..=n {
                let mut point = vec![h.identity(); n];
                point[i - 1] = x;
                let got = heisenberg_coordinates(*p, w.evaluate(&point, h, &lambda).unwrap());
                if got != (m(&mv.a[i - 1]), 0, 0) {
                    return Err(format!("{w}: x{i} -> X gives {got:?} in H({p})"));
                }
                checks += 1;
            }
            for (i, j) in pairs(n) {
                let mut point = vec![h.identity(); n];
                point[i - 1] = x;
                point[j - 1] = y;
                let (a, b, c) = heisenberg_coordinates(*p, w.evaluate(&point, h, &lambda).unwrap());
                let want = (m(&mv.a[i - 1]), m(&mv.a[j - 1]), m(mv.b_at(i, j)));
                let central = (c + (*p as u64) * (*p as u64) - (a * b) % *p as u64) % *p as u64;
                if (a, b, central) != want {
                    return Err(format!("{w}: pair ({i},{j}) in H({p}) gives ({a},{b},{c}), Mal'cev {want:?}"));
                }
                checks += 1;
            }
            for _ in 0..3 {
                let point: Vec<u32> = (0..n).map(|_| rng.gen_range(0..h.order() as u32)).collect();
                if w.evaluate(&point, h, &lambda).unwrap() != nf.evaluate(&point, h, &lambda).unwrap() {
                    return Err(format!("{w} and its normal form {nf} differ in H({p})"));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("1000 words, {checks} coordinate checks, 100%"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let law = laws_of(&VarietySpec::Metabelian).remove(0);
    for _ in 0..1000 {
        let ctx = WordContext::constant_free(rng.gen_range(1..=4));
        let w = random_law_instance(&mut rng, &law, &ctx, 5);
        if !magnus_image(&w).map_err(|e| e.to_string())?.is_identity() {
            return Err(format!("law instance {w} maps to a non-identity matrix"));
        }
    }
    let ctx2 = WordContext::constant_free(2);
    let mut nontrivial: Vec<Word> =
        vec![Word::var(&ctx2, 1).unwrap().commutator(&Word::var(&ctx2, 2).unwrap()).unwrap(), Word::var(&ctx2, 1).unwrap()];
    while nontrivial.len() < 52 {
        let ctx = WordContext::constant_free(rng.gen_range(1..=3));
        let w = random_word(&mut rng, &ctx, 4);
        let mut sums = vec![BigInt::from(0); ctx.var_count()];
        for s in w.syllables() {
            if let groupgeom::words::Syllable::Var { index, exp } = s {
                sums[index - 1] += exp;
            }
        }
        if sums.iter().any(|x| *x != BigInt::from(0)) {
            nontrivial.push(w);
        }
    }
    for w in &nontrivial {
        if magnus_image(w).map_err(|e| e.to_string())?.is_identity() {
            return Err(format!("{w} maps to the identity"));
        }
    }
    Ok("1000 law instances trivial; [x1,x2], x1 and 50 non-instances nontrivial".into())
}

fn criterion_6() -> Outcome {
    let zoo = [
        g(build_cyclic(4)),
        g(build_symmetric(3)),
        g(build_dihedral(4)),
        g(build_cyclic(6)),
        g(build_dihedral(5)),
        g(build_heisenberg_mod(3)),
    ];
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut cases, mut attempts, mut words) = (0, 0, 0);
    while cases < 20 {
        attempts += 1;
        if attempts > 500 {
            return Err(format!("only {cases} usable cases in 500 attempts"));
        }
        let h = &zoo[attempts % zoo.len()];
        let n = rng.gen_range(1..=2);
        let (ctx, lambda) = if rng.gen_bool(0.4) {
            (WordContext::new(n, Some(h.clone())), GEmbedding::identity(h))
        } else {
            (WordContext::constant_free(n), GEmbedding::trivial(h))
        };
        let s = random_system(&mut rng, &ctx, 2, 1);
        let set = solve_finite(&s, h, &lambda, &limits, 1).map_err(|e| e.to_string())?;
        if set.is_empty() {
            continue;
        }
        let gamma = match coordinate_group(&set, &limits) {
            Ok(gm) => gm,
            Err(Error::TooLarge { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        };
        for _ in 0..200 {
            let w = random_word(&mut rng, &ctx, 8);
            let rad = radical_member_finite(&w, &set).map_err(|e| e.to_string())?.member;
            if rad != gamma.kills(&w).map_err(|e| e.to_string())? {
                return Err(format!("{w} over {} with {s}: radical {rad}, tuple image disagrees", h.name()));
            }
            words += 1;
        }
        cases += 1;
    }
    Ok(format!("{cases} cases, {words} words, 100%"))
}

fn criterion_7() -> Outcome {
    let limits = Limits::default();
    let ctx = WordContext::constant_free(1);
    let s = EquationSystem::empty(&ctx);
    let has_square = |h: &Arc<FiniteGroup>| -> Result<bool, String> {
        let list = nsatz_finite_discrepancy(&s, &VarietySpec::Abelian, h, &GEmbedding::trivial(h), 2, &limits)
            .map_err(|e| e.to_string())?;
        Ok(list.iter().any(|d| d.word.to_string() == "x1^2"))
    };
    let c2 = has_square(&g(build_cyclic(2)))?;
    let c4 = has_square(&g(build_cyclic(4)))?;
    if c2 && !c4 {
        Ok("x1^2 listed for C2, absent for C4".into())
    } else {
        Err(format!("x1^2 listed: C2 {c2}, C4 {c4}"))
    }
}

fn criterion_8() -> Outcome {
    let cases = common::cases();
    let mut golden_mismatch = Vec::new();
    for case in &cases {
        let first = common::transcript(case);
        let second = common::transcript(case);
        if first != second {
            return Err(format!("{} differs between runs", case.name));
        }
        let path = common::root().join("golden").join(format!("{}.txt", case.name));
        if std::fs::read_to_string(&path).ok().as_deref() != Some(first.as_str()) {
            golden_mismatch.push(case.name.clone());
        }
    }
    if !golden_mismatch.is_empty() {
        return Err(format!("golden mismatch: {}", golden_mismatch.join(", ")));
    }
    Ok(format!("{} transcripts byte-identical across two runs and equal to golden files", cases.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("containment suite", criterion_1, 60),
        ("abelian nullstellensatz equality", criterion_2, 120),
        ("class-2 oracle soundness/completeness", criterion_3, 120),
        ("Mal'cev/evaluation consistency", criterion_4, 30),
        ("Magnus embedding", criterion_5, 30),
        ("coordinate-group kernel fact", criterion_6, 60),
        ("discrepancy witness", criterion_7, 5),
        ("CLI determinism", criterion_8, 120),
    ];
    let mut failed = 0;
    let mut timings = HashMap::new();
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        timings.insert(i, elapsed);
        let over = elapsed > Duration::from_secs(*limit);
        match (&outcome, over) {
            (Ok(detail), false) => println!("PASS {}. {name}: {detail} [{:.2}s < {limit}s]", i + 1, elapsed.as_secs_f64()),
            (Ok(detail), true) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail} [{:.2}s exceeds {limit}s]", i + 1, elapsed.as_secs_f64());
            }
            (Err(why), _) => {
                failed += 1;
                println!("FAIL {}. {name}: {why} [{:.2}s]", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
