use num_integer::Integer;

use super::ideals::{chi_p, uncovered, Ideal};
use super::{modulo, render_positive, Element, Family};

/// A character of the constructible ideals at finite stage.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OmegaCharacter {
    /// `χ_p(X) = [p ∈ X]`.
    Point(Element),
    /// The maximal character of `ℕᵏ`: every nonempty ideal.
    Infinity,
    /// The infinite word `prefix·period·period·…` of a free monoid.
    Word { prefix: Vec<i32>, period: Vec<i32> },
    /// A profinite integer known modulo `modulus`; defined on cosets whose
    /// modulus divides it.
    Tower { residue: i64, modulus: i64 },
}

impl OmegaCharacter {
    pub fn eval(&self, fam: Family, x: &Ideal) -> Option<bool> {
        match (self, x) {
            (OmegaCharacter::Point(p), _) => Some(chi_p(fam, p, x)),
            (_, Ideal::Empty) => Some(false),
            (OmegaCharacter::Infinity, _) => Some(true),
            (OmegaCharacter::Word { prefix, period }, Ideal::Principal(w)) => {
                Some(w.iter().enumerate().all(|(i, l)| word_letter(prefix, period, i) == *l))
            }
            (&OmegaCharacter::Tower { residue, modulus }, &Ideal::Coset { residue: r, modulus: m }) => {
                (modulus % m == 0).then(|| modulo(residue - r, m) == 0)
            }
            _ => None,
        }
    }

    /// `p.χ` for `p ∈ P`; it takes the value 1 on `pP`.
    pub fn act(&self, fam: Family, p: &Element) -> OmegaCharacter {
        match (self, p) {
            (OmegaCharacter::Point(q), _) => OmegaCharacter::Point(fam.mul(p, q)),
            (OmegaCharacter::Infinity, _) => OmegaCharacter::Infinity,
            (OmegaCharacter::Word { prefix, period }, Element::Word(w)) => {
                OmegaCharacter::Word { prefix: [w.as_slice(), prefix].concat(), period: period.clone() }
            }
            (&OmegaCharacter::Tower { residue, modulus }, _) => {
                let (b, a) = Family::affine_ints(p).expect("an element of P");
                let m = a.abs() * modulus;
                OmegaCharacter::Tower { residue: modulo(b + a * residue, m), modulus: m }
            }
            _ => panic!("character and element of different families"),
        }
    }

    pub fn render(&self, fam: Family) -> String {
        match self {
            OmegaCharacter::Point(p) => format!("chi_{}", fam.render(p)),
            OmegaCharacter::Infinity => "inf".into(),
            OmegaCharacter::Word { prefix, period } => {
                format!("{}({})^inf", render_positive(prefix), render_positive(period))
            }
            OmegaCharacter::Tower { residue, modulus } => format!("{residue} mod {modulus}"),
        }
    }
}

fn word_letter(prefix: &[i32], period: &[i32], i: usize) -> i32 {
    if i < prefix.len() {
        prefix[i]
    } else {
        period[(i - prefix.len()) % period.len()]
    }
}

/// `lcm(1, …, n)`.
pub(crate) fn lcm_upto(n: usize) -> i64 {
    (1..=n as i64).fold(1, |acc, m| acc.lcm(&m))
}

/// The ideals represented at stage `stage`: offsets up to `stage`, words of
/// length up to `stage`, or cosets of modulus up to `stage`; with `∅`.
pub fn stage_ideals(fam: Family, stage: usize) -> Vec<Ideal> {
    let mut out: Vec<Ideal> = match fam {
        Family::Natural(_) | Family::Free(_) => fam
            .p_elements(stage)
            .into_iter()
            .filter(|p| match p {
                Element::Vector(v) => v.iter().all(|&c| c <= stage as i64),
                _ => true,
            })
            .map(|p| fam.left_mul(&p, &fam.whole()))
            .collect(),
        Family::Axb => (1..=stage as i64).flat_map(|m| (0..m).map(move |x| Ideal::coset(x, m))).collect(),
    };
    out.push(Ideal::Empty);
    out
}

/// Maximal characters at stage `stage`, distinct on the stage ideals: the
/// single `∞` of `ℕᵏ`, the words `w(x)^∞` with `l(w) = stage`, or the
/// residues modulo `lcm(1, …, stage)`.
pub fn stage_max_characters(fam: Family, stage: usize) -> Vec<OmegaCharacter> {
    match fam {
        Family::Natural(_) => vec![OmegaCharacter::Infinity],
        Family::Free(_) => fam
            .p_elements(stage)
            .into_iter()
            .filter_map(|p| match p {
                Element::Word(w) if w.len() == stage => Some(OmegaCharacter::Word { prefix: w, period: vec![1] }),
                _ => None,
            })
            .collect(),
        Family::Axb => {
            let l = lcm_upto(stage);
            (0..l).map(|r| OmegaCharacter::Tower { residue: r, modulus: l }).collect()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaReport {
    pub characters: usize,
    /// Covers `X = X₁ ∪ ⋯ ∪ Xₙ` among stage ideals, trivial ones included.
    pub covers: usize,
    /// Covers that are not trivial (no `Xᵢ = X`).
    pub proper_covers: usize,
    /// `(character, X)` where `χ(X) = 1` but every `χ(Xᵢ) = 0`.
    pub violations: Vec<(String, String)>,
}

/// The cover condition of `Ω_P` for every stage maximal character, over all
/// covers by at most `cap` stage ideals. Unions are compared on members of
/// size up to `stage`.
pub fn omega_condition_check(fam: Family, stage: usize, cap: usize) -> OmegaReport {
    let ideals = stage_ideals(fam, stage);
    let chars = stage_max_characters(fam, stage);
    let mut covers = Vec::new();
    for x in ideals.iter().filter(|x| !x.is_empty()) {
        let subs: Vec<&Ideal> = ideals.iter().filter(|y| !y.is_empty() && fam.is_subset(y, x)).collect();
        let mut stack: Vec<(usize, Vec<&Ideal>)> = vec![(0, Vec::new())];
        while let Some((from, chosen)) = stack.pop() {
            if !chosen.is_empty() && uncovered(fam, x, &chosen, stage).is_none() {
                covers.push((x, chosen.clone()));
            }
            if chosen.len() < cap {
                for i in from..subs.len() {
                    let mut next = chosen.clone();
                    next.push(subs[i]);
                    stack.push((i + 1, next));
                }
            }
        }
    }
    let proper_covers = covers.iter().filter(|(x, parts)| !parts.contains(x)).count();
    let mut violations = Vec::new();
    for (x, parts) in &covers {
        for chi in &chars {
            if chi.eval(fam, x) == Some(true) && parts.iter().all(|y| chi.eval(fam, y) != Some(true)) {
                violations.push((chi.render(fam), x.render()));
            }
        }
    }
    OmegaReport { characters: chars.len(), covers: covers.len(), proper_covers, violations }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub pairs: usize,
    pub reached: usize,
    /// `(target, start)` pairs where the translate misses the target.
    pub failures: Vec<(String, String)>,
}

impl MinimalityReport {
    pub fn pass(&self) -> bool {
        self.pairs == self.reached
    }
}

/// The smallest ideal a stage character lies in, past the stage itself.
fn smallest_ideal(fam: Family, chi: &OmegaCharacter, stage: usize) -> Ideal {
    match chi {
        OmegaCharacter::Infinity => match fam {
            Family::Natural(k) => Ideal::Offset(vec![stage as i64; k]),
            _ => unreachable!(),
        },
        OmegaCharacter::Word { prefix, period } => {
            Ideal::Principal((0..stage).map(|i| word_letter(prefix, period, i)).collect())
        }
        &OmegaCharacter::Tower { residue, modulus } => Ideal::coset(residue, modulus),
        OmegaCharacter::Point(p) => fam.left_mul(p, &fam.whole()),
    }
}

/// For every stage maximal `χ` and sampled start `χ′` (point characters of
/// small elements and a few maximal ones), translates `χ′` by the least
/// element `p` of the smallest ideal containing `χ`, and checks that `p.χ′`
/// agrees with `χ` on every stage ideal.
pub fn minimality_probe(fam: Family, stage: usize) -> MinimalityReport {
    let ideals = stage_ideals(fam, stage);
    let targets = stage_max_characters(fam, stage);
    let mut starts: Vec<OmegaCharacter> = fam.p_elements(2).into_iter().map(OmegaCharacter::Point).collect();
    starts.extend(targets.iter().take(8).cloned());
    let mut report = MinimalityReport { pairs: 0, reached: 0, failures: Vec::new() };
    for chi in &targets {
        let p = fam.least_element(&smallest_ideal(fam, chi, stage)).expect("a nonempty ideal");
        for start in &starts {
            report.pairs += 1;
            let moved = start.act(fam, &p);
            if ideals.iter().all(|x| moved.eval(fam, x) == chi.eval(fam, x)) {
                report.reached += 1;
            } else {
                report.failures.push((chi.render(fam), start.render(fam)));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_sizes() {
        assert_eq!(stage_ideals(Family::Natural(1), 6).len(), 8);
        assert_eq!(stage_ideals(Family::Free(2), 3).len(), 16);
        assert_eq!(stage_ideals(Family::Axb, 4).len(), 11);
        assert_eq!(stage_max_characters(Family::Free(2), 3).len(), 8);
        assert_eq!(stage_max_characters(Family::Axb, 4).len(), 12);
    }

    #[test]
    fn max_characters_are_filters() {
        // Oracle: upward closed and closed under meets on the stage ideals.
        for (fam, stage) in [(Family::Natural(2), 3), (Family::Free(2), 3), (Family::Axb, 6)] {
            let ideals = stage_ideals(fam, stage);
            for chi in stage_max_characters(fam, stage) {
                for x in &ideals {
                    for y in &ideals {
                        let (cx, cy) = (chi.eval(fam, x).unwrap(), chi.eval(fam, y).unwrap());
                        if cx && fam.is_subset(x, y) {
                            assert!(cy);
                        }
                        let meet = fam.intersect(x, y);
                        if let Some(cm) = chi.eval(fam, &meet) {
                            assert_eq!(cm, cx && cy);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn max_characters_satisfy_the_cover_condition() {
        for (fam, stage) in [(Family::Natural(1), 6), (Family::Free(2), 3), (Family::Axb, 12)] {
            let r = omega_condition_check(fam, stage, 2);
            assert!(r.violations.is_empty(), "{fam}: {:?}", r.violations.first());
            assert!(r.covers > 0);
            assert_eq!(r.proper_covers, 0);
        }
    }

    #[test]
    fn translates_reach_every_max_character() {
        for (fam, stage) in [(Family::Natural(1), 6), (Family::Free(2), 3), (Family::Axb, 4)] {
            let r = minimality_probe(fam, stage);
            assert!(r.pass(), "{fam}: {:?}", r.failures.first());
            assert!(r.pairs > 0);
        }
    }

    #[test]
    fn translation_lands_in_the_principal_ideal() {
        let fam = Family::Axb;
        let p = Family::affine(3, 4);
        let pp = fam.left_mul(&p, &fam.whole());
        for chi in stage_max_characters(fam, 4) {
            assert_eq!(chi.act(fam, &p).eval(fam, &pp), Some(true));
        }
        let w = OmegaCharacter::Word { prefix: vec![1, 2], period: vec![2] };
        assert_eq!(w.render(Family::Free(2)), "xy(y)^inf");
        assert_eq!(w.eval(Family::Free(2), &Ideal::Principal(vec![1, 2, 2, 2])), Some(true));
    }
}
