use gforge_core::boundary::{topological_freeness_report_with, CompactOpen};
use gforge_core::oe::{
    coe_check, coe_to_oe, oe_check, oe_to_coe, validate_homeo, CocycleFailure, OeFailure, OeFile,
};
use gforge_core::paradox::{find_witness, verify_witness};
use gforge_core::semigroup::{
    axb_paradox_witness, boundary_paradox_witness, g0_member, ideal_closure, independence_check, minimality_probe,
    omega_condition_check, rcomplete_hypothesis_check, stage_ideals, top_freeness_certificate, AxbOpen, BasicOpen,
    Element, Family, G0Verdict, Ideal, Presentation, Side,
};
use gforge_core::{Error, Graph};
use serde_json::{json, Value};

use crate::report::Verdict;
#[cfg(test)]
use crate::report::Status;

/// Bad invocation or unreadable input; exit code 64.
#[derive(Debug)]
pub struct UsageError(pub String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

pub type Outcome = Result<Vec<Verdict>, UsageError>;

#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub depth: usize,
    pub word_bound: usize,
    pub modulus_bound: usize,
    /// Vertex cap for the maximal-tail search.
    pub tail_cap: usize,
}

impl Bounds {
    pub fn to_json(self) -> Value {
        json!({
            "depth": self.depth,
            "word_bound": self.word_bound,
            "modulus_bound": self.modulus_bound,
            "tail_cap": self.tail_cap,
        })
    }
}

/// Precondition failures become failed checks and exhausted caps become
/// inconclusive ones; anything else is a usage error.
fn settle(check: &str, err: Error) -> Result<Verdict, UsageError> {
    match err {
        Error::Precondition(msg) => Ok(Verdict::fail(check, json!({ "precondition": msg }))),
        Error::Size { what, actual, cap } => {
            Ok(Verdict::inconclusive(check, json!({ what: cap })).with_detail(json!({ "actual": actual })))
        }
        other => Err(other.into()),
    }
}

pub fn check(g: &Graph, b: Bounds) -> Outcome {
    let mut out = Vec::new();

    let l = g.condition_l();
    out.push(Verdict::from_bool("condition_L", l.holds, || {
        json!({ "entryless_loops": l.entryless.iter().map(|p| g.render_path(p)).collect::<Vec<_>>() })
    }));

    let k = g.condition_k();
    out.push(Verdict::from_bool("condition_K", k.holds, || match &k.witness {
        Some((v, lp)) => json!({ "vertex": g.vertex_name(*v), "lone_loop": g.render_path(lp) }),
        None => json!({ "reason": "condition (K) fails" }),
    }));

    out.push(match g.condition_pi_capped(b.tail_cap) {
        Ok(v) => match &v.failed {
            None => Verdict::pass("condition_PI"),
            Some(clause) => Verdict::fail("condition_PI", json!({ "clause": clause.render(g) })),
        },
        Err(e) => settle("condition_PI", e)?,
    });

    let rep = topological_freeness_report_with(g, b.depth, b.word_bound, b.word_bound);
    let search = json!({ "depth": b.depth, "word_bound": b.word_bound });
    let table: Vec<Value> = rep
        .witnesses
        .iter()
        .map(|(c, x)| json!({ "cylinder": c.render(g), "point": x.render(g) }))
        .collect();
    let free = if !rep.fixed_points.is_empty() {
        let fixed: Vec<Value> =
            rep.fixed_points.iter().map(|(w, x)| json!({ "g": w.render(g), "x": x.render(g) })).collect();
        Verdict::fail("topologically_free", json!({ "fixed_points": fixed }))
    } else if !rep.missing.is_empty() {
        Verdict::inconclusive("topologically_free", search.clone())
            .with_detail(json!({ "missing": rep.missing.iter().map(|c| c.render(g)).collect::<Vec<_>>() }))
    } else {
        Verdict::pass("topologically_free").with_bounds(search.clone()).with_detail(json!({ "witnesses": table }))
    };
    out.push(free);

    let agree = if rep.agrees() {
        Verdict::pass("freeness_matches_L")
    } else if rep.condition_l && !rep.missing.is_empty() {
        Verdict::inconclusive("freeness_matches_L", search)
    } else {
        Verdict::fail(
            "freeness_matches_L",
            json!({
                "condition_L": rep.condition_l,
                "fixed_points": rep.fixed_points.len(),
                "missing": rep.missing.iter().map(|c| c.render(g)).collect::<Vec<_>>(),
            }),
        )
    };
    out.push(agree.with_detail(json!({ "pairs_checked": rep.pairs_checked })));
    Ok(out)
}

pub fn witness(g: &Graph, set: &str, b: Bounds) -> Outcome {
    let u = CompactOpen::parse(g, set)?;
    let pieces = match find_witness(g, &u) {
        Ok(ws) => ws,
        Err(e) => return Ok(vec![settle("pure_infiniteness", e)?]),
    };
    let mut out = Vec::new();
    let mut union = CompactOpen::empty();
    for (i, w) in pieces.iter().enumerate() {
        union = union.union(g, &w.u);
        let r = verify_witness(g, w, b.depth);
        let name = format!("witness[{i}]");
        let v = Verdict::from_bool(&name, r.pass, || json!({ "failures": r.failures }))
            .with_bounds(json!({ "depth": b.depth }))
            .with_detail(json!({
                "witness": w.to_json(g, b.depth),
                "in_domain": r.in_domain,
                "disjoint": r.disjoint,
                "points_checked": r.points_checked,
            }));
        out.push(v);
    }
    out.push(Verdict::from_bool("pieces_cover_U", union.same_set(g, &u), || {
        json!({ "U": u.render(g), "union": union.render(g) })
    })
    .with_detail(json!({ "U": u.render(g), "pieces": pieces.len() })));
    Ok(out)
}

/// The first few failures; the count says how many were cut.
fn coe_failures(fs: &[CocycleFailure]) -> Value {
    let shown: Vec<Value> = fs
        .iter()
        .take(5)
        .map(|x| json!({ "side": x.side, "generator": x.generator, "point": x.point, "reason": x.reason }))
        .collect();
    json!({ "failures": shown, "count": fs.len() })
}

fn oe_failures(fs: &[OeFailure]) -> Value {
    let shown: Vec<Value> =
        fs.iter().take(5).map(|x| json!({ "side": x.side, "point": x.point, "reason": x.reason })).collect();
    json!({ "failures": shown, "count": fs.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Coe2Oe,
    Oe2Coe,
    Check,
}

pub fn oe(e: &Graph, f: &Graph, file: &OeFile, dir: Direction, b: Bounds) -> Outcome {
    let depth = json!({ "depth": b.depth });
    let mut out = Vec::new();
    let h = validate_homeo(e, f, &file.phi, b.depth);
    out.push(
        Verdict::from_bool("homeomorphism", h.pass, || json!({ "failures": h.failures }))
            .with_bounds(depth.clone())
            .with_detail(json!({ "points_checked": h.points_checked })),
    );
    let coe_verdict = |name: &str, a, bb| {
        let r = coe_check(e, f, &file.phi, a, bb, b.depth);
        Verdict::from_bool(name, r.pass, || coe_failures(&r.failures))
            .with_bounds(depth.clone())
            .with_detail(json!({ "checked": r.checked }))
    };
    let oe_verdict = |name: &str, data| {
        let r = oe_check(e, f, &file.phi, data, b.depth);
        Verdict::from_bool(name, r.pass, || oe_failures(&r.failures))
            .with_bounds(depth.clone())
            .with_detail(json!({ "checked": r.checked }))
    };
    match dir {
        Direction::Check => {
            if file.cocycles.is_none() && file.shifts.is_none() {
                return Err(UsageError("the data file has neither cocycles (a, b) nor shifts (k, l, k_prime, l_prime)".into()));
            }
            if let Some((a, bb)) = &file.cocycles {
                out.push(coe_verdict("coe", a, bb));
            }
            if let Some(s) = &file.shifts {
                out.push(oe_verdict("oe", s));
            }
        }
        Direction::Coe2Oe => {
            let (a, bb) = file.cocycles.as_ref().ok_or_else(|| UsageError("coe2oe needs cocycles `a` and `b`".into()))?;
            out.push(coe_verdict("coe", a, bb));
            let shifts = match coe_to_oe(e, f, a, bb) {
                Ok(s) => s,
                Err(Error::Form(msg)) => {
                    out.push(Verdict::fail("coe_to_oe", json!({ "form": msg })));
                    return Ok(out);
                }
                Err(err) => {
                    out.push(settle("coe_to_oe", err)?);
                    return Ok(out);
                }
            };
            let translated = OeFile { phi: file.phi.clone(), cocycles: None, shifts: Some(shifts.clone()) };
            out.push(oe_verdict("oe", &shifts).with_detail(json!({ "translated": translated.to_json(e, f) })));
            match oe_to_coe(e, f, &file.phi, &shifts, b.depth) {
                Ok(back) => {
                    let r = coe_check(e, f, &file.phi, &back.a, &back.b, b.depth);
                    out.push(
                        Verdict::from_bool("roundtrip", r.pass, || coe_failures(&r.failures))
                        .with_bounds(depth.clone()),
                    );
                }
                Err(err) => out.push(settle("roundtrip", err)?),
            }
        }
        Direction::Oe2Coe => {
            let shifts =
                file.shifts.as_ref().ok_or_else(|| UsageError("oe2coe needs `k`, `l`, `k_prime`, `l_prime`".into()))?;
            out.push(oe_verdict("oe", shifts));
            match oe_to_coe(e, f, &file.phi, shifts, b.depth) {
                Ok(back) => {
                    let translated =
                        OeFile { phi: file.phi.clone(), cocycles: Some((back.a.clone(), back.b.clone())), shifts: None };
                    out.push(coe_verdict("coe", &back.a, &back.b).with_detail(json!({
                        "translated": translated.to_json(e, f)
                    })));
                }
                Err(err) => out.push(settle("oe_to_coe", err)?),
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct SgpArgs {
    pub u: Option<String>,
    pub gens: Option<String>,
    pub ideals: Option<String>,
    pub g: Option<String>,
    pub p: Option<String>,
    pub q: Option<String>,
    pub presentation: Option<String>,
    pub stage: Option<usize>,
    pub cap: usize,
    pub quasi_lattice: bool,
    pub r_complete: bool,
}

fn elements(fam: Family, s: &str) -> Result<Vec<Element>, UsageError> {
    split_top(s, ',').iter().map(|t| fam.parse_element(t).map_err(UsageError::from)).collect()
}

/// Splits at `sep` outside parentheses, so `(1,2), (0,3)` has two parts.
fn split_top(s: &str, sep: char) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(String::new());
        } else {
            out.last_mut().expect("nonempty").push(c);
        }
    }
    out.into_iter().map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

fn search_bound(fam: Family, b: Bounds) -> usize {
    match fam {
        Family::Axb => b.modulus_bound,
        _ => b.word_bound,
    }
}

fn default_stage(fam: Family) -> usize {
    match fam {
        Family::Natural(_) => 6,
        Family::Free(_) => 3,
        Family::Axb => 12,
    }
}

fn ideal_list(fam: Family, ideals: &[Ideal]) -> Vec<Value> {
    ideals.iter().map(|x| x.to_json(fam)).collect()
}

pub fn sgp(fam: Family, action: &str, args: &SgpArgs, b: Bounds) -> Outcome {
    let bound = search_bound(fam, b);
    let bounds = json!({ "bound": bound });
    let v = match action {
        "ideals" => {
            let gens = match &args.gens {
                Some(s) => elements(fam, s)?,
                None => fam.generators(),
            };
            let c = ideal_closure(fam, &gens, bound)?;
            let mut missing = Vec::new();
            for x in &c.ideals {
                for p in &gens {
                    for y in [fam.left_mul(p, x), fam.preimage(p, x)] {
                        let fits = match &y {
                            Ideal::Coset { modulus, .. } => *modulus as usize <= bound,
                            other => other.size() <= bound,
                        };
                        if fits && !c.ideals.contains(&y) {
                            missing.push(y.render());
                        }
                    }
                }
            }
            vec![Verdict::from_bool("closure_stable", missing.is_empty(), || json!({ "missing": missing }))
                .with_bounds(bounds)
                .with_detail(json!({
                    "generators": gens.iter().map(|g| fam.render(g)).collect::<Vec<_>>(),
                    "ideals": ideal_list(fam, &c.ideals),
                    "truncated": c.truncated,
                }))]
        }
        "independence" => {
            let ideals = match &args.ideals {
                Some(s) => s.split(';').map(|t| fam.parse_ideal(t)).collect::<Result<Vec<_>, _>>()?,
                None => stage_ideals(fam, args.stage.unwrap_or(default_stage(fam).min(4))),
            };
            let r = independence_check(fam, &ideals, args.cap, bound);
            let verdict = Verdict::from_bool("independence", r.independent, || match &r.witness {
                Some((x, parts)) => json!({ "X": x.render(), "cover": parts.iter().map(Ideal::render).collect::<Vec<_>>() }),
                None => json!({}),
            });
            vec![verdict.with_bounds(json!({ "cover_cap": args.cap, "element_bound": bound })).with_detail(json!({
                "ideals": ideals.len(),
                "covers_checked": r.covers_checked,
            }))]
        }
        "g0" => match &args.g {
            Some(s) => {
                let g = fam.parse_element(s)?;
                vec![g0_verdict(fam, &g, bound)?]
            }
            None => vec![g0_summary(fam, bound)?],
        },
        "freeness" => {
            let c = top_freeness_certificate(fam, bound.min(4));
            vec![Verdict::from_bool("topologically_free", c.certificate, || {
                json!({
                    "units": c.units.iter().map(|u| fam.render(u)).collect::<Vec<_>>(),
                    "fixing_pairs": c.violations.iter().take(5)
                        .map(|(g, p)| json!({ "g": fam.render(g), "p": fam.render(p) })).collect::<Vec<_>>(),
                })
            })
            .with_bounds(json!({ "bound": bound.min(4) }))
            .with_detail(json!({ "units_trivial": c.units_trivial, "pairs_checked": c.pairs_checked }))]
        }
        "paradox" => {
            let u = match &args.u {
                Some(s) => BasicOpen::parse(fam, s)?,
                None => BasicOpen { x: fam.whole(), exclusions: Vec::new() },
            };
            let pair = match (&args.p, &args.q) {
                (Some(p), Some(q)) => Some((fam.parse_element(p)?, fam.parse_element(q)?)),
                (None, None) => None,
                _ => return Err(UsageError("give both --p and --q, or neither".into())),
            };
            match boundary_paradox_witness(fam, &u, pair, b.depth) {
                Ok(w) => vec![Verdict::from_bool("boundary_paradox", w.pass(), || json!({ "failures": w.failures }))
                    .with_bounds(json!({ "depth": w.verified_depth }))
                    .with_detail(json!({
                        "U": u.render(),
                        "p": fam.render(&w.p),
                        "q": fam.render(&w.q),
                        "chi": w.chi.as_ref().map(|c| c.render(fam)),
                        "Y": w.y.render(),
                        "x": fam.render(&w.x),
                        "g": fam.render(&w.g),
                        "h": fam.render(&w.h),
                        "characters_checked": w.checked,
                    }))],
                Err(e) => vec![settle("boundary_paradox", e)?],
            }
        }
        "axb" => {
            if fam != Family::Axb {
                return Err(UsageError(format!("`axb` runs on Z_axb, not {fam}")));
            }
            let s = args.u.as_deref().ok_or_else(|| UsageError("`axb` needs --U".into()))?;
            let w = axb_paradox_witness(&AxbOpen::parse(s)?)?;
            let (g, h) = w.elements();
            vec![Verdict::from_bool("axb_paradox", w.pass(), || {
                json!({ "contained": w.contained, "exclusions_kept": w.exclusions_kept, "disjoint": w.disjoint })
            })
            .with_bounds(json!({ "residue_modulus": w.modulus }))
            .with_detail(json!({
                "U": w.u.render(),
                "J": w.j,
                "a": w.a,
                "delta": w.delta,
                "g": fam.render(&g),
                "h": fam.render(&h),
                "images": [w.image(0).render(), w.image(1).render()],
                "U_empty": w.u_empty,
            }))]
        }
        "hypothesis" => {
            let p = match &args.presentation {
                Some(s) => Presentation::parse(s)?,
                None => match fam {
                    Family::Free(n) => Presentation::free(n),
                    Family::Natural(k) => {
                        let names = ["u", "v", "w", "s", "t", "r", "o", "q"];
                        if k > names.len() {
                            return Err(UsageError("pass --presentation for more than 8 generators".into()));
                        }
                        Presentation::commutative(&names[..k])
                    }
                    Family::Axb => {
                        return Err(UsageError("Z_axb has no finite presentation built in; pass --presentation".into()))
                    }
                },
            };
            let r = rcomplete_hypothesis_check(&p);
            let table: Vec<Value> = r.table.iter().map(|(u, v)| json!([u, v])).collect();
            let mut out = vec![Verdict::from_bool("leading_letter_scan", r.pass, || json!({ "uncovered": r.failing }))
                .with_detail(json!({ "table": table, "relations": p.relations.len() }))];
            if args.quasi_lattice && args.r_complete {
                out.push(
                    Verdict::from_bool("certificate", r.certificate(true, true), || json!({ "uncovered": r.failing }))
                        .with_detail(json!({
                            "conclusion": "G0 = {e} and the boundary quotient is simple",
                            "assumed": ["quasi-lattice order", "r-completeness"],
                        })),
                );
            }
            out
        }
        "omega" => {
            let stage = args.stage.unwrap_or(default_stage(fam));
            let r = omega_condition_check(fam, stage, args.cap);
            vec![Verdict::from_bool("cover_condition", r.violations.is_empty(), || {
                json!({ "violations": r.violations.iter().take(5).map(|(c, x)| json!([c, x])).collect::<Vec<_>>() })
            })
            .with_bounds(json!({ "stage": stage, "cover_cap": args.cap }))
            .with_detail(json!({ "characters": r.characters, "covers": r.covers, "proper_covers": r.proper_covers }))]
        }
        "minimality" => {
            let stage = args.stage.unwrap_or(default_stage(fam).min(4));
            let r = minimality_probe(fam, stage);
            vec![Verdict::from_bool("minimality", r.pass(), || {
                json!({ "unreached": r.failures.iter().take(5).map(|(c, x)| json!([c, x])).collect::<Vec<_>>() })
            })
            .with_bounds(json!({ "stage": stage }))
            .with_detail(json!({ "pairs": r.pairs, "reached": r.reached }))]
        }
        other => {
            return Err(UsageError(format!(
                "unknown sgp action `{other}`; expected ideals, independence, g0, freeness, paradox, axb, hypothesis, omega or minimality"
            )))
        }
    };
    Ok(v)
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Forward => "pP ∩ gP = ∅",
        Side::Inverse => "pP ∩ g⁻¹P = ∅",
    }
}

fn g0_verdict(fam: Family, g: &Element, bound: usize) -> Result<Verdict, UsageError> {
    let name = format!("g0_member({})", fam.render(g));
    Ok(match g0_member(fam, g, bound)? {
        G0Verdict::Member { reason } => Verdict::pass(name).with_detail(json!({ "reason": reason })),
        G0Verdict::NotMember { p, side } => {
            Verdict::fail(name, json!({ "p": fam.render(&p), "empty": side_name(side) }))
        }
        G0Verdict::Inconclusive { bound } => Verdict::inconclusive(name, json!({ "bound": bound })),
    })
}

/// `G₀` over the group elements of size at most 2.
fn g0_summary(fam: Family, bound: usize) -> Result<Verdict, UsageError> {
    let mut members = Vec::new();
    let mut non_members = 0;
    let mut undecided = Vec::new();
    for g in fam.group_elements(2) {
        match g0_member(fam, &g, bound)? {
            G0Verdict::Member { .. } => members.push(fam.render(&g)),
            G0Verdict::NotMember { .. } => non_members += 1,
            G0Verdict::Inconclusive { .. } => undecided.push(fam.render(&g)),
        }
    }
    let all = members.len() + non_members + undecided.len();
    let summary = match fam {
        Family::Natural(k) if members.len() == all => format!("Z^{k}"),
        Family::Free(_) if members == [fam.render(&fam.identity())] && undecided.is_empty() => "{e}".into(),
        _ => format!("{} of {} sampled elements", members.len(), all),
    };
    let detail = json!({
        "G0": summary,
        "sampled": all,
        "members": members.iter().take(12).collect::<Vec<_>>(),
        "non_members": non_members,
        "undecided": undecided.iter().take(12).collect::<Vec<_>>(),
    });
    let v = if undecided.is_empty() {
        Verdict::pass("g0")
    } else {
        Verdict::inconclusive("g0", json!({ "bound": bound }))
    };
    Ok(v.with_detail(detail))
}
