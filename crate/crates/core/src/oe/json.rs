use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::boundary::Cylinder;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::words::ReducedWord;

use super::cocycle::{Cocycle, CocycleEntry};
use super::homeo::{GraphIso, PrefixHomeo};
use super::translate::{LocallyConstant, OeData};

/// The contents of an orbit equivalence data file: the homeomorphism, and
/// whichever of the cocycle pair and the shift functions are present.
///
/// ```json
/// {"phi": [["v", "v"]], "tail": {"a": "b", "b": "a"},
///  "a": [{"g": "a^-1", "on": "Z(v)", "value": "b^-1"}], "b": [...],
///  "k": [{"on": "Z(v)", "value": 1}], "l": [...], "k_prime": [...], "l_prime": [...]}
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OeFile {
    pub phi: PrefixHomeo,
    pub cocycles: Option<(Cocycle, Cocycle)>,
    pub shifts: Option<OeData>,
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::schema(key, "missing"))
}

fn text<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| Error::schema(key, "expected a string"))
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::schema(key, "expected an array"))
}

fn cocycle_from(g: &Graph, v: &Value, key: &str) -> Result<Cocycle> {
    let mut entries = Vec::new();
    for item in array(v, key)? {
        let obj = item.as_object().ok_or_else(|| Error::schema(key, "entries are objects"))?;
        let gen = ReducedWord::parse(g, text(field(obj, "g")?, "g")?)?;
        let &[generator] = gen.letters() else {
            return Err(Error::schema("g", format!("`{}` is not a single letter", gen.render(g))));
        };
        let on = Cylinder::parse(g, text(field(obj, "on")?, "on")?)?;
        let value = ReducedWord::parse(g, text(field(obj, "value")?, "value")?)?;
        entries.push(CocycleEntry { generator, on, value });
    }
    Ok(Cocycle { entries })
}

fn cocycle_to(g: &Graph, c: &Cocycle) -> Value {
    c.entries
        .iter()
        .map(|en| {
            json!({
                "g": ReducedWord::letter(en.generator).render(g),
                "on": en.on.render(g),
                "value": en.value.render(g),
            })
        })
        .collect()
}

fn constant_from(g: &Graph, v: &Value, key: &str) -> Result<LocallyConstant> {
    let mut parts = Vec::new();
    for item in array(v, key)? {
        let obj = item.as_object().ok_or_else(|| Error::schema(key, "entries are objects"))?;
        let on = Cylinder::parse(g, text(field(obj, "on")?, "on")?)?;
        let value = field(obj, "value")?
            .as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| Error::schema("value", "expected a nonnegative integer"))?;
        parts.push((on, value));
    }
    Ok(LocallyConstant { parts })
}

fn constant_to(g: &Graph, c: &LocallyConstant) -> Value {
    c.parts.iter().map(|(on, v)| json!({"on": on.render(g), "value": v})).collect()
}

impl OeFile {
    pub fn parse(e: &Graph, f: &Graph, raw: &str) -> Result<OeFile> {
        let doc: Value = serde_json::from_str(raw).map_err(|err| Error::schema("document", err.to_string()))?;
        OeFile::from_json(e, f, &doc)
    }

    pub fn from_json(e: &Graph, f: &Graph, doc: &Value) -> Result<OeFile> {
        let obj = doc.as_object().ok_or_else(|| Error::schema("document", "expected an object"))?;
        let mut rules = Vec::new();
        for rule in array(field(obj, "phi")?, "phi")? {
            let pair = array(rule, "phi")?;
            let [mu, nu] = pair.as_slice() else {
                return Err(Error::schema("phi", "each rule is a pair [stem_E, stem_F]"));
            };
            rules.push((e.parse_path(text(mu, "phi")?)?, f.parse_path(text(nu, "phi")?)?));
        }
        let renames: BTreeMap<String, String> = match obj.get("tail") {
            None => BTreeMap::new(),
            Some(t) => t
                .as_object()
                .ok_or_else(|| Error::schema("tail", "expected an object of renamings"))?
                .iter()
                .map(|(k, v)| Ok((k.clone(), text(v, "tail")?.to_string())))
                .collect::<Result<_>>()?,
        };
        let phi = PrefixHomeo::new(e, f, rules, GraphIso::by_names(e, f, &renames)?)?;
        let cocycles = match (obj.get("a"), obj.get("b")) {
            (Some(a), Some(b)) => Some((cocycle_from(e, a, "a")?, cocycle_from(f, b, "b")?)),
            (None, None) => None,
            _ => return Err(Error::schema("a", "the cocycles `a` and `b` come together")),
        };
        let keys = ["k", "l", "k_prime", "l_prime"];
        let present = keys.iter().filter(|k| obj.contains_key(**k)).count();
        let shifts = match present {
            0 => None,
            4 => Some(OeData {
                k: constant_from(e, &obj["k"], "k")?,
                l: constant_from(e, &obj["l"], "l")?,
                k_prime: constant_from(f, &obj["k_prime"], "k_prime")?,
                l_prime: constant_from(f, &obj["l_prime"], "l_prime")?,
            }),
            _ => return Err(Error::schema("k", "k, l, k_prime and l_prime come together")),
        };
        Ok(OeFile { phi, cocycles, shifts })
    }

    pub fn to_json(&self, e: &Graph, f: &Graph) -> Value {
        let mut out = Map::new();
        let phi: Vec<Value> =
            self.phi.rules.iter().map(|(mu, nu)| json!([e.render_path(mu), f.render_path(nu)])).collect();
        out.insert("phi".into(), phi.into());
        let renames: Map<String, Value> =
            self.phi.tail.renames(e, f).into_iter().map(|(k, v)| (k, Value::String(v))).collect();
        if !renames.is_empty() {
            out.insert("tail".into(), renames.into());
        }
        if let Some((a, b)) = &self.cocycles {
            out.insert("a".into(), cocycle_to(e, a));
            out.insert("b".into(), cocycle_to(f, b));
        }
        if let Some(s) = &self.shifts {
            out.insert("k".into(), constant_to(e, &s.k));
            out.insert("l".into(), constant_to(e, &s.l));
            out.insert("k_prime".into(), constant_to(f, &s.k_prime));
            out.insert("l_prime".into(), constant_to(f, &s.l_prime));
        }
        Value::Object(out)
    }
}
