use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }
}

/// One check. A failure always carries a witness and an inconclusive
/// verdict always carries the bounds it ran out of; the constructors
/// enforce both.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub witness: Option<Value>,
    pub bounds: Map<String, Value>,
    pub detail: Option<Value>,
}

impl Verdict {
    pub fn pass(check: impl Into<String>) -> Verdict {
        Verdict { check: check.into(), status: Status::Pass, witness: None, bounds: Map::new(), detail: None }
    }

    pub fn fail(check: impl Into<String>, witness: Value) -> Verdict {
        Verdict { witness: Some(witness), status: Status::Fail, ..Verdict::pass(check) }
    }

    pub fn inconclusive(check: impl Into<String>, bounds: Value) -> Verdict {
        let mut v = Verdict { status: Status::Inconclusive, ..Verdict::pass(check) };
        v.bounds = bounds.as_object().cloned().expect("bounds are an object");
        assert!(!v.bounds.is_empty(), "an inconclusive verdict names its bound");
        v
    }

    pub fn from_bool(check: impl Into<String>, ok: bool, witness: impl FnOnce() -> Value) -> Verdict {
        if ok {
            Verdict::pass(check)
        } else {
            Verdict::fail(check, witness())
        }
    }

    pub fn with_bounds(mut self, bounds: Value) -> Verdict {
        if let Value::Object(m) = bounds {
            self.bounds.extend(m);
        }
        self
    }

    pub fn with_detail(mut self, detail: Value) -> Verdict {
        self.detail = Some(detail);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("check".into(), self.check.clone().into());
        out.insert("status".into(), self.status.name().into());
        out.insert("bounds".into(), Value::Object(self.bounds.clone()));
        if let Some(w) = &self.witness {
            out.insert("witness".into(), w.clone());
        }
        if let Some(d) = &self.detail {
            out.insert("detail".into(), d.clone());
        }
        Value::Object(out)
    }
}

pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub flags: Value,
    pub verdicts: Vec<Verdict>,
    pub elapsed_ms: Option<f64>,
}

impl Report {
    /// The worst verdict; an empty report passes.
    pub fn status(&self) -> Status {
        self.verdicts.iter().map(|v| v.status).max().unwrap_or(Status::Pass)
    }

    /// Keys come out sorted, so equal reports serialize to equal bytes.
    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "tool": "gforge",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "input_digest": self.input_digest,
            "flags": self.flags,
            "status": self.status().name(),
            "verdicts": self.verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
        });
        if let Some(ms) = self.elapsed_ms {
            out["timing"] = json!({ "elapsed_ms": ms });
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("gforge {} ({})\n", self.command, &self.input_digest[..19.min(self.input_digest.len())]);
        for v in &self.verdicts {
            let tag = match v.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Inconclusive => "INCONCLUSIVE",
            };
            out.push_str(&format!("{tag:<12} {}", v.check));
            if let Some(w) = &v.witness {
                out.push_str(&format!("  witness: {w}"));
            }
            if v.status == Status::Inconclusive {
                out.push_str(&format!("  bounds: {}", Value::Object(v.bounds.clone())));
            }
            out.push('\n');
        }
        out.push_str(&format!("status: {}\n", self.status().name()));
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed: {ms:.1} ms\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_status_wins() {
        let mut r = Report {
            command: "check".into(),
            input_digest: digest(&[b"x"]),
            flags: json!({}),
            verdicts: vec![Verdict::pass("a")],
            elapsed_ms: None,
        };
        assert_eq!(r.status(), Status::Pass);
        r.verdicts.push(Verdict::inconclusive("b", json!({"depth": 6})));
        assert_eq!(r.status().exit_code(), 2);
        r.verdicts.push(Verdict::fail("c", json!("loop a")));
        assert_eq!(r.status().exit_code(), 1);
    }

    #[test]
    fn serialization_is_sorted_and_stable() {
        let v = Verdict::fail("z", json!({"b": 1, "a": 2})).with_bounds(json!({"depth": 3}));
        let s = v.to_json().to_string();
        assert_eq!(s, r#"{"bounds":{"depth":3},"check":"z","status":"fail","witness":{"a":2,"b":1}}"#);
    }

    #[test]
    #[should_panic]
    fn inconclusive_needs_a_bound() {
        Verdict::inconclusive("x", json!({}));
    }

    #[test]
    fn digest_separates_parts() {
        assert_ne!(digest(&[b"ab", b"c"]), digest(&[b"a", b"bc"]));
        assert!(digest(&[]).starts_with("sha256:"));
    }
}
