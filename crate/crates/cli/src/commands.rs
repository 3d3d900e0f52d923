use std::fmt::Write as _;

use parkforest::bijection::{MapStep, PhiInvRun, PhiRun, UnmapStep};
use parkforest::enumerate::{self, VerificationReport, MAX_ENUMERATION_N, MAX_VERIFY_N};
use parkforest::format::{join, parse_forest, parse_parking_function, parse_preferences, parse_sequence};
use parkforest::genfunc::{self, GenPoly, Var, MAX_POLY_N};
use parkforest::parking::{jump_stats, park};
use parkforest::ForestStatReport;
use serde::Serialize;
use serde_json::{json, Value};

pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Report to print on stdout before the diagnostic.
    pub output: Option<String>,
}

impl Failure {
    pub fn input(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
            output: None,
        }
    }

    fn check(message: impl ToString, output: String) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
            output: Some(output),
        }
    }
}

type Outcome = Result<String, Failure>;

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn numbered(name: &str, values: &[usize]) -> String {
    format!("{name:<8}{}\n", join(values))
}

pub fn map(text: &str, trace: bool, json: bool) -> Outcome {
    let forest = parse_forest(text).map_err(Failure::input)?;
    let run = PhiRun::new(&forest);
    let p = run.parking_function.as_slice();
    if json {
        let mut out = json!({
            "parkingFunction": p,
            "theta": run.theta.images(),
        });
        if trace {
            out["trace"] = serde_json::to_value(run.trace()).expect("trace serializes");
        }
        return Ok(to_json(&out));
    }
    let mut out = String::new();
    if trace {
        let m = run.tree.size();
        out += &numbered("vertex", &(1..=m).collect::<Vec<_>>());
        for step in run.trace() {
            match step {
                MapStep::Tree { parent } => out += &numbered("T", &parent),
                MapStep::Decreasing { parent, theta } => {
                    out += &numbered("theta", &theta);
                    out += &numbered("D", &parent);
                }
                MapStep::Inversions { values } => out += &numbered("I", &values),
                MapStep::Postorder { values } => out += &numbered("C", &values),
                MapStep::Circled { values } => out += &numbered("C-I", &values),
                MapStep::Emit { .. } => {}
            }
        }
        out += "T, I, C, C-I are listed by T vertex; D is a parent list by D label.\n";
    }
    writeln!(out, "{}", join(p)).unwrap();
    Ok(out)
}

pub fn unmap(text: &str, trace: bool, json: bool) -> Outcome {
    let p = parse_parking_function(text).map_err(Failure::input)?;
    let run = PhiInvRun::new(&p).map_err(Failure::input)?;
    let parent = run.forest.parents();
    if json {
        let mut out = json!({ "forest": run.forest });
        if trace {
            out["trace"] = serde_json::to_value(run.trace()).expect("trace serializes");
        }
        return Ok(to_json(&out));
    }
    let mut out = String::new();
    if trace {
        for step in run.trace() {
            match step {
                UnmapStep::SpaceWord {
                    spaces,
                    word,
                    jumps,
                } => {
                    let width = spaces.len().to_string().len().max(word.len().to_string().len()) + 1;
                    for (name, row) in [("space", &spaces), ("car", &word), ("jump", &jumps)] {
                        write!(out, "{name:<8}").unwrap();
                        for x in row {
                            write!(out, "{x:>width$}").unwrap();
                        }
                        out.push('\n');
                    }
                }
                UnmapStep::Decreasing { parent } => out += &numbered("D", &parent),
                UnmapStep::InverseRelabel { labels } => out += &numbered("T-label", &labels),
                UnmapStep::Tree { parent } => out += &numbered("T", &parent),
                UnmapStep::Forest { .. } => {}
            }
        }
    }
    writeln!(out, "{}", join(parent)).unwrap();
    Ok(out)
}

pub fn pa(text: &str, json: bool) -> Outcome {
    let prefs = parse_preferences(text).map_err(Failure::input)?;
    let outcome = park(&prefs);
    let is_pf = outcome.max_space <= prefs.len();
    if json {
        return Ok(to_json(&json!({
            "q": outcome.q,
            "maxSpace": outcome.max_space,
            "isParkingFunction": is_pf,
        })));
    }
    Ok(format!(
        "q {}\nparking function: {}\n",
        join(&outcome.q),
        if is_pf { "yes" } else { "no" }
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Forest,
    Parking,
}

fn detect(text: &str) -> Result<Kind, Failure> {
    use parkforest::format::SequenceInput;
    Ok(match parse_sequence(text).map_err(Failure::input)? {
        SequenceInput::Forest { .. } => Kind::Forest,
        SequenceInput::Preferences(_) => Kind::Parking,
        SequenceInput::Plain(v) if v.is_empty() || v.contains(&0) => Kind::Forest,
        SequenceInput::Plain(_) => Kind::Parking,
    })
}

pub fn stats(text: &str, kind: Option<Kind>, json: bool) -> Outcome {
    let kind = match kind {
        Some(k) => k,
        None => detect(text)?,
    };
    match kind {
        Kind::Forest => {
            let f = parse_forest(text).map_err(Failure::input)?;
            let r = ForestStatReport::of(&f);
            if json {
                return Ok(to_json(&r));
            }
            Ok(format!(
                "inv {}\nlead {}\ntree {}\ntinv {}\nleaders {}\n",
                r.inv_total,
                r.lead,
                r.tree,
                join(&r.tinv),
                join(&r.leaders)
            ))
        }
        Kind::Parking => {
            let p = parse_parking_function(text).map_err(Failure::input)?;
            let r = jump_stats(&p);
            if json {
                return Ok(to_json(&r));
            }
            Ok(format!(
                "jump {}\nlucky {}\ncritic {}\ntjump {}\nq {}\nlucky cars {}\ncritical cars {}\n",
                r.jump_total,
                r.lucky,
                r.critic,
                join(&r.tjump),
                join(&r.q),
                join(&r.lucky_cars),
                join(&r.critical_cars)
            ))
        }
    }
}

/// Report as JSON without the wall-clock field, so output is reproducible.
fn report_json(r: &VerificationReport) -> String {
    let mut v = serde_json::to_value(r).expect("report serializes");
    if let Value::Object(map) = &mut v {
        map.remove("elapsedMillis");
        map.insert("success".into(), Value::Bool(r.success()));
    }
    to_json(&v)
}

fn failures_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    for (name, list) in [
        ("roundtrip", &r.roundtrip_failures),
        ("statistics", &r.stat_mismatches),
        ("bijectivity", &r.bijectivity_failures),
    ] {
        for line in list.iter().take(20) {
            writeln!(out, "{name}: {line}").unwrap();
        }
        if list.len() > 20 {
            writeln!(out, "{name}: ... {} more", list.len() - 20).unwrap();
        }
    }
    out
}

fn failure_count(r: &VerificationReport) -> usize {
    r.roundtrip_failures.len() + r.stat_mismatches.len() + r.bijectivity_failures.len()
}

fn finish_verify(r: VerificationReport, summary: String, json: bool) -> Outcome {
    let out = if json {
        report_json(&r)
    } else {
        format!("{summary}{}", failures_text(&r))
    };
    if r.success() {
        Ok(out)
    } else {
        Err(Failure::check(
            format!("verification failed with {} violations", failure_count(&r)),
            out,
        ))
    }
}

pub fn verify_exhaustive(n: usize, json: bool) -> Outcome {
    if n > MAX_VERIFY_N {
        return Err(Failure::input(format!(
            "exhaustive verification supports n <= {MAX_VERIFY_N}"
        )));
    }
    let r = enumerate::verify_bijection(n).map_err(Failure::input)?;
    let expected = parkforest::cayley_count(n);
    let summary = format!(
        "n={n} exhaustive: {}/{expected} forests, {}/{expected} parking functions, {} violations, {} ms: {}\n",
        r.forest_count,
        r.parking_function_count,
        failure_count(&r),
        r.elapsed_millis,
        if r.success() { "PASS" } else { "FAIL" }
    );
    finish_verify(r, summary, json)
}

pub fn verify_random(n: usize, count: usize, seed: u64, json: bool) -> Outcome {
    let r = enumerate::verify_random(n, count, seed);
    let summary = format!(
        "n={n} random (seed {seed}): {count} forest roundtrips, {count} parking function roundtrips, {} violations: {}\n",
        failure_count(&r),
        if r.success() { "PASS" } else { "FAIL" }
    );
    finish_verify(r, summary, json)
}

struct Check {
    name: &'static str,
    holds: bool,
}

pub fn poly(n: usize, compare: bool, json: bool) -> Outcome {
    if n > MAX_ENUMERATION_N {
        return Err(Failure::input(format!("poly supports n <= {MAX_ENUMERATION_N}")));
    }
    let fail = |e: parkforest::GenFuncError| Failure::input(e);
    let mut sections: Vec<(&'static str, &'static str, GenPoly)> = Vec::new();
    let mut checks = Vec::new();

    let full = if n <= MAX_POLY_N {
        let i = genfunc::poly_i(n).map_err(fail)?;
        let j = genfunc::poly_j(n).map_err(fail)?;
        Some((i, j))
    } else {
        None
    };
    if let Some((i, j)) = &full {
        sections.push(("I", "I_n(q; c) over forests", i.clone()));
        sections.push(("J", "J_n(q; c) over parking functions", j.clone()));
        sections.push((
            "specialized",
            "sum over forests of q^inv u^lead c^tree",
            genfunc::specialize(i),
        ));
        checks.push(Check {
            name: "I_n = J_n",
            holds: i == j,
        });
    }

    if n >= 1 {
        let lucky = genfunc::lucky_enumerator(n).map_err(fail)?;
        let lucky_prod = genfunc::lucky_product(n).map_err(fail)?;
        let both = genfunc::lucky_critic_enumerator(n).map_err(fail)?;
        let both_prod = genfunc::critic_lucky_product(n).map_err(fail)?;
        checks.push(Check {
            name: "sum u^lucky = u prod (i + (n-i+1)u)",
            holds: lucky == lucky_prod,
        });
        checks.push(Check {
            name: "sum u^lucky c^critic = cu prod (i + (n-i)u + cu)",
            holds: both == both_prod,
        });
        if let Some((_, j)) = &full {
            checks.push(Check {
                name: "J_n at q_0=u, q_i=q^i, q=1 equals the critic-lucky product",
                holds: genfunc::specialize(j).set_to_one(&[Var::Q]) == both_prod,
            });
        }
        sections.push(("lucky", "sum over parking functions of u^lucky", lucky));
        sections.push(("luckyProduct", "u prod (i + (n-i+1)u)", lucky_prod));
        sections.push(("criticLucky", "sum over parking functions of u^lucky c^critic", both));
        sections.push(("criticLuckyProduct", "cu prod (i + (n-i)u + cu)", both_prod));
    }

    let out = if json {
        let mut obj = serde_json::Map::new();
        obj.insert("n".into(), json!(n));
        for (key, _, p) in &sections {
            obj.insert((*key).into(), serde_json::to_value(p).expect("polynomials serialize"));
        }
        if compare {
            let list: Vec<Value> = checks
                .iter()
                .map(|c| json!({ "identity": c.name, "holds": c.holds }))
                .collect();
            obj.insert("checks".into(), Value::Array(list));
        }
        to_json(&Value::Object(obj))
    } else {
        let mut out = String::new();
        for (_, title, p) in &sections {
            writeln!(out, "{title} ({} terms):\n  {p}", p.len()).unwrap();
        }
        if compare {
            for c in &checks {
                writeln!(out, "{}: {}", if c.holds { "ok  " } else { "FAIL" }, c.name).unwrap();
            }
        }
        out
    };
    match checks.iter().find(|c| compare && !c.holds) {
        Some(c) => Err(Failure::check(format!("identity does not hold: {}", c.name), out)),
        None => Ok(out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_input_kind() {
        assert_eq!(detect("2,0").ok(), Some(Kind::Forest));
        assert_eq!(detect("").ok(), Some(Kind::Forest));
        assert_eq!(detect("1,1").ok(), Some(Kind::Parking));
        assert_eq!(detect(r#"{"n":1,"parent":[0]}"#).ok(), Some(Kind::Forest));
    }

    #[test]
    fn failures_carry_exit_codes() {
        assert_eq!(map("1,1", false, false).err().map(|f| f.code), Some(2));
        assert_eq!(stats("4,3,3,1,5", None, false).err().map(|f| f.code), Some(2));
        assert!(verify_exhaustive(3, false).is_ok());
    }

    #[test]
    fn verify_json_has_no_clock() {
        let out = verify_exhaustive(3, true).ok().unwrap();
        assert!(!out.contains("elapsed"));
        assert!(out.contains("\"success\": true"));
    }
}
