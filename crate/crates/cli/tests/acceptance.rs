//! One line per acceptance criterion, each checked at its stated tolerance
//! and time limit. Exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use gforge_core::boundary::{partial_action_report, topological_freeness_report, CompactOpen};
use gforge_core::corpus::{self, random_graphs, RandomGraphConfig};
use gforge_core::groupoid::roundtrip_report_with;
use gforge_core::oe::{coe_check, coe_to_oe, examples, oe_check, oe_to_coe, validate_homeo};
use gforge_core::paradox::{basic_opens, find_witness, verify_witness};
use gforge_core::semigroup::{
    axb_paradox_witness, boundary_paradox_witness, g0_member, independence_check, stage_ideals, AxbOpen, BasicOpen,
    Family, G0Verdict,
};
use gforge_core::words::{check_boundary_invariance, verify_partial_hom, TruncatedSemilattice};
use gforge_core::{Error, Graph};

struct Outcome {
    pass: bool,
    note: String,
}

fn outcome(pass: bool, note: impl Into<String>) -> Outcome {
    Outcome { pass, note: note.into() }
}

fn g1_to_g4() -> Vec<(&'static str, Graph)> {
    vec![("G1", corpus::g1()), ("G2", corpus::g2()), ("G3", corpus::g3()), ("G4", corpus::g4())]
}

/// Raises the word bound until 500 elements are sampled, or until the
/// count stops growing, in which case the groupoid is finite and was
/// enumerated in full.
fn groupoid_isomorphism() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, g) in g1_to_g4() {
        let mut last = 0;
        let mut bound = 2;
        loop {
            let r = roundtrip_report_with(&g, 4, bound, 3);
            if !r.pass {
                return outcome(false, format!("{name}: {}", r.failures[0]));
            }
            if r.elements >= 500 {
                notes.push(format!("{name} {} elements, {} products", r.elements, r.composable_pairs));
                break;
            }
            if r.elements == last {
                notes.push(format!("{name} all {} elements (finite)", r.elements));
                break;
            }
            if bound > 400 {
                pass = false;
                notes.push(format!("{name} stuck at {} elements", r.elements));
                break;
            }
            last = r.elements;
            bound *= 2;
        }
    }
    outcome(pass, notes.join(", "))
}

fn partial_action_axioms() -> Outcome {
    let mut checks = 0;
    for (name, g) in g1_to_g4() {
        let r = partial_action_report(&g, 3, 6);
        if !r.pass {
            return outcome(false, format!("{name}: {}", r.violations[0]));
        }
        checks += r.checks;
    }
    outcome(true, format!("{checks} checks, 0 violations"))
}

fn condition_l_matches_isotropy() -> Outcome {
    let cfg = RandomGraphConfig { max_vertices: 6, infinite_rate: 0.1, ..Default::default() };
    let mut graphs = vec![corpus::g1(), corpus::g4(), corpus::g2()];
    graphs.extend(random_graphs(2024, 20, &cfg));
    let mut l_true = 0;
    for (i, g) in graphs.iter().enumerate() {
        let r = topological_freeness_report(g, 3, 6);
        let entryless = g.condition_l().entryless.len();
        if !r.agrees() || r.fixed_points.len() != entryless {
            return outcome(false, format!("graph {i}: L = {}, fixed points {}", r.condition_l, r.fixed_points.len()));
        }
        l_true += usize::from(r.condition_l);
    }
    outcome(true, format!("{} graphs ({l_true} with L), verdicts agree", graphs.len()))
}

fn coe_oe_roundtrip() -> Outcome {
    let depth = 6;
    let mut names = Vec::new();
    for ex in examples::all() {
        let (e, f) = (&ex.e, &ex.f);
        let fail = |what: &str| outcome(false, format!("{}: {what}", ex.name));
        if !validate_homeo(e, f, &ex.phi, depth).pass {
            return fail("homeomorphism");
        }
        if !coe_check(e, f, &ex.phi, &ex.a, &ex.b, depth).pass {
            return fail("cocycles");
        }
        let Ok(shifts) = coe_to_oe(e, f, &ex.a, &ex.b) else { return fail("coe to oe") };
        if !oe_check(e, f, &ex.phi, &shifts, depth).pass {
            return fail("shift functions");
        }
        let Ok(back) = oe_to_coe(e, f, &ex.phi, &shifts, depth) else { return fail("oe to coe") };
        if !coe_check(e, f, &ex.phi, &back.a, &back.b, depth).pass {
            return fail("recovered cocycles");
        }
        names.push(ex.name);
    }
    outcome(true, format!("{} at depth {depth}", names.join(", ")))
}

fn pure_infiniteness_witnesses() -> Outcome {
    let (mut positive, mut negative, mut opens) = (Vec::new(), Vec::new(), 0);
    for (name, g) in corpus::named() {
        let pi = g.condition_pi().expect("corpus graphs are small");
        if pi.holds {
            for c in basic_opens(&g, 3, 1, 2) {
                let u = CompactOpen::cylinder(&g, c);
                let ws = match find_witness(&g, &u) {
                    Ok(ws) => ws,
                    Err(e) => return outcome(false, format!("{name} {}: {e}", u.render(&g))),
                };
                let mut union = CompactOpen::empty();
                for w in &ws {
                    if !verify_witness(&g, w, 2).pass {
                        return outcome(false, format!("{name} {}: witness fails", u.render(&g)));
                    }
                    union = union.union(&g, &w.u);
                }
                if !union.same_set(&g, &u) {
                    return outcome(false, format!("{name} {}: pieces miss part of U", u.render(&g)));
                }
                opens += 1;
            }
            positive.push(name);
        } else {
            let u = CompactOpen::whole(&g);
            if !matches!(find_witness(&g, &u), Err(Error::Precondition(_))) {
                return outcome(false, format!("{name}: not refused"));
            }
            negative.push(name);
        }
    }
    outcome(
        true,
        format!("{opens} basic opens on {} verified, {} refused", positive.join("/"), negative.join("/")),
    )
}

fn sigma_partial_hom() -> Outcome {
    let mut products = 0;
    for g in [corpus::g2(), corpus::g3()] {
        let r = verify_partial_hom(&g, 2);
        if !r.pass {
            return outcome(false, format!("{:?}", r.counterexample));
        }
        products += r.products;
    }
    outcome(true, format!("{products} products, 0 violations"))
}

fn boundary_invariance() -> Outcome {
    let mut checked = 0;
    for (name, g) in g1_to_g4() {
        for depth in 1..=2 {
            let r = check_boundary_invariance(&g, &TruncatedSemilattice::new(&g, depth));
            if !r.pass {
                return outcome(false, format!("{name} depth {depth}: {} violations", r.violations.len()));
            }
            checked += r.same_depth + r.transferred;
        }
    }
    outcome(true, format!("{checked} images, 0 violations"))
}

/// `t ↦ b + 7t` on the integers in a window: images of U stay in U, keep
/// the excluded part aligned, and the two images never meet.
fn axb_integer_check(b1: i64, b2: i64, a: i64) -> bool {
    let in_u = |t: i64| t.rem_euclid(2) == 0 && t.rem_euclid(6) != 0;
    let in_x = |t: i64| t.rem_euclid(2) == 0;
    let in_excl = |t: i64| t.rem_euclid(6) == 0;
    let mut images = [BTreeSet::new(), BTreeSet::new()];
    for t in -600..600 {
        for (k, b) in [b1, b2].into_iter().enumerate() {
            let s = b + a * t;
            if in_x(t) && (!in_x(s) || in_excl(s) != in_excl(t)) {
                return false;
            }
            if in_u(t) {
                images[k].insert(s);
            }
        }
    }
    images[0].is_disjoint(&images[1]) && images.iter().flatten().all(|&s| in_u(s))
}

fn semigroup_paradoxes() -> Outcome {
    let f2 = Family::Free(2);
    let u = BasicOpen::parse(f2, "xP - xxP").expect("valid");
    let w = match boundary_paradox_witness(f2, &u, None, 8) {
        Ok(w) => w,
        Err(e) => return outcome(false, format!("F+2: {e}")),
    };
    if !w.pass() || w.verified_depth < 8 {
        return outcome(false, format!("F+2 witness: {:?}", w.failures));
    }
    let axb = match axb_paradox_witness(&AxbOpen::parse("0+2Z ! 0+6Z").expect("valid")) {
        Ok(x) => x,
        Err(e) => return outcome(false, format!("axb: {e}")),
    };
    if !(axb.pass() && axb.a == 7 && axb.delta == 6 && axb.modulus == 84) {
        return outcome(false, format!("axb: a = {}, delta = {}, modulus {}", axb.a, axb.delta, axb.modulus));
    }
    if !axb_integer_check(axb.b1, axb.b2, axb.a) {
        return outcome(false, "axb: integer window check");
    }
    for fam in [Family::Natural(1), Family::Natural(2)] {
        let whole = BasicOpen { x: fam.whole(), exclusions: Vec::new() };
        if !matches!(boundary_paradox_witness(fam, &whole, None, 8), Err(Error::Precondition(_))) {
            return outcome(false, format!("{fam} not rejected"));
        }
    }
    outcome(
        true,
        format!(
            "F+2 (g, h) = ({}, {}) over {} characters; axb a = 7, delta = 6, mod 84; N, N^2 rejected",
            f2.render(&w.g),
            f2.render(&w.h),
            w.checked
        ),
    )
}

fn independence_and_g0() -> Outcome {
    for fam in [Family::Natural(1), Family::Natural(2), Family::Free(2)] {
        let ideals = stage_ideals(fam, 3);
        let r = independence_check(fam, &ideals, 3, 6);
        if !r.independent {
            return outcome(false, format!("{fam}: cover {:?}", r.witness));
        }
        for g in fam.group_elements(2) {
            let is_e = g == fam.identity();
            let v = g0_member(fam, &g, 4).expect("valid element");
            let expected = match fam {
                Family::Natural(_) => matches!(v, G0Verdict::Member { .. }),
                _ => matches!(v, G0Verdict::Member { .. }) == is_e && !matches!(v, G0Verdict::Inconclusive { .. }),
            };
            if !expected {
                return outcome(false, format!("{fam}: {} gives {v:?}", fam.render(&g)));
            }
        }
    }
    outcome(true, "N, N^2: independent, G0 = Z^k; F+2: independent, G0 = {e}; every verdict exact")
}

fn corpus_determinism() -> Outcome {
    let run = || Command::new(env!("CARGO_BIN_EXE_gforge")).args(["corpus", "run"]).env_remove("GFORGE_BOUND_OVERRIDE").output();
    let (Ok(a), Ok(b)) = (run(), run()) else { return outcome(false, "binary did not run") };
    if a.status.code() != Some(0) {
        return outcome(false, format!("corpus run exit {:?}", a.status.code()));
    }
    outcome(a.stdout == b.stdout, format!("{} bytes, identical: {}", a.stdout.len(), a.stdout == b.stdout))
}

fn main() {
    type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        (1, "groupoid isomorphism roundtrip", Some(Duration::from_secs(2)), groupoid_isomorphism),
        (2, "partial action axioms", Some(Duration::from_secs(2)), partial_action_axioms),
        (3, "condition (L) vs isotropy", Some(Duration::from_secs(5)), condition_l_matches_isotropy),
        (4, "COE/OE translation roundtrip", Some(Duration::from_secs(2)), coe_oe_roundtrip),
        (5, "pure infiniteness witnesses", Some(Duration::from_secs(5)), pure_infiniteness_witnesses),
        (6, "sigma partial homomorphism", Some(Duration::from_secs(1)), sigma_partial_hom),
        (7, "boundary invariance", Some(Duration::from_secs(1)), boundary_invariance),
        (8, "semigroup paradoxes", Some(Duration::from_secs(2)), semigroup_paradoxes),
        (9, "independence and G0", Some(Duration::from_secs(1)), independence_and_g0),
        (10, "corpus determinism", None, corpus_determinism),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = limit.map_or(true, |l| elapsed < l);
        let pass = o.pass && in_time;
        failed += usize::from(!pass);
        let limit_text = limit.map_or("no limit".to_string(), |l| format!("limit {} s", l.as_secs()));
        println!(
            "criterion {n:>2} {}: {name}: {} ({:.3} s, {limit_text})",
            if pass { "PASS" } else { "FAIL" },
            o.note,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
