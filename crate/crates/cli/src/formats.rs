//! File formats: proof JSON, metrics JSON, weights JSON and exact-decimal
//! rendering of rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use elproofs_core::metrics::{MetricsReport, StepWeights};
use elproofs_core::ontology::parse_axiom;
use elproofs_core::proofs::{ProofDag, ProofVertex};
use elproofs_core::Calculus;

/// Proof exchange format: dense 0-based ids, children ordered as premises,
/// axiom text in the ontology grammar.
#[derive(Serialize, Deserialize)]
pub struct ProofJson {
    pub calculus: String,
    pub goal: String,
    pub root: usize,
    pub vertices: Vec<VertexJson>,
}

#[derive(Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub axiom: String,
    pub rule: String,
    pub children: Vec<usize>,
}

pub fn proof_to_json(dag: &ProofDag) -> String {
    let doc = ProofJson {
        calculus: dag.calculus.name().to_string(),
        goal: dag.goal.to_string(),
        root: dag.root,
        vertices: dag
            .vertices
            .iter()
            .enumerate()
            .map(|(id, v)| VertexJson {
                id,
                axiom: v.axiom.to_string(),
                rule: v.rule.clone(),
                children: v.children.clone(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

pub fn proof_from_json(text: &str) -> Result<ProofDag, String> {
    let doc: ProofJson = serde_json::from_str(text).map_err(|e| format!("bad proof JSON: {e}"))?;
    let calculus = Calculus::from_name(&doc.calculus)
        .ok_or_else(|| format!("unknown calculus {:?}", doc.calculus))?;
    let goal = parse_axiom(&doc.goal).map_err(|e| format!("bad goal axiom: {e}"))?;
    let n = doc.vertices.len();
    if doc.root >= n {
        return Err(format!("root id {} out of range", doc.root));
    }
    let mut vertices = Vec::with_capacity(n);
    for (pos, v) in doc.vertices.iter().enumerate() {
        if v.id != pos {
            return Err(format!("vertex ids must be dense 0-based; got {} at {pos}", v.id));
        }
        if let Some(&c) = v.children.iter().find(|&&c| c >= n) {
            return Err(format!("child id {c} out of range"));
        }
        vertices.push(ProofVertex {
            axiom: parse_axiom(&v.axiom).map_err(|e| format!("bad axiom at vertex {pos}: {e}"))?,
            rule: v.rule.clone(),
            children: v.children.clone(),
        });
    }
    Ok(ProofDag { calculus, goal, root: doc.root, vertices })
}

/// Renders a rational as a decimal with exactly four fractional digits
/// (round half away from zero).
pub fn decimal4(r: &BigRational) -> String {
    let scaled = r * BigRational::from_integer(BigInt::from(10_000));
    let (num, den) = (scaled.numer().clone(), scaled.denom().clone());
    // round half away from zero: (2|num| + den) / (2 den), with sign
    let q = (BigInt::from(2) * num.abs() + &den) / (BigInt::from(2) * &den);
    let sign = if r.is_negative() { "-" } else { "" };
    let digits = q.to_string();
    let digits = if digits.len() < 5 {
        format!("{:0>5}", digits)
    } else {
        digits
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - 4);
    format!("{sign}{int_part}.{frac_part}")
}

/// JSON form of a rational: rounded decimal plus exact numerator and
/// denominator.
#[derive(Serialize, Deserialize)]
pub struct RationalJson {
    pub decimal: String,
    pub num: String,
    pub den: String,
}

impl RationalJson {
    pub fn of(r: &BigRational) -> Self {
        RationalJson {
            decimal: decimal4(r),
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct MetricsJson {
    pub size: u128,
    pub depth: u64,
    pub justification: usize,
    pub bushiness: RationalJson,
    pub cutwidth: u64,
    pub avg_step_complexity: RationalJson,
    pub step_count: u128,
}

pub fn metrics_to_json(report: &MetricsReport) -> String {
    let doc = MetricsJson {
        size: report.size,
        depth: report.depth,
        justification: report.justification_size,
        bushiness: RationalJson::of(&report.bushiness),
        cutwidth: report.cutwidth,
        avg_step_complexity: RationalJson::of(&report.avg_step_complexity),
        step_count: report.step_count,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

/// Weight file: an object whose values are JSON numbers (exact decimals) or
/// `{ "num": ..., "den": ... }` pairs. Missing fields keep their defaults.
pub fn weights_from_json(text: &str) -> Result<StepWeights, String> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("bad weights JSON: {e}"))?;
    let obj = doc.as_object().ok_or("weights JSON must be an object")?;
    let mut weights = StepWeights::default();
    for (key, value) in obj {
        let r = value_to_rational(value).map_err(|e| format!("weight {key}: {e}"))?;
        if r.is_negative() {
            return Err(format!("weight {key} must be non-negative"));
        }
        match key.as_str() {
            "premises" => weights.premises = r,
            "axiom_shapes" => weights.axiom_shapes = r,
            "constructors" => weights.constructors = r,
            "depth" => weights.depth = r,
            "triviality" => weights.triviality = r,
            other => return Err(format!("unknown weight field {other:?}")),
        }
    }
    Ok(weights)
}

fn value_to_rational(value: &serde_json::Value) -> Result<BigRational, String> {
    match value {
        serde_json::Value::Number(n) => decimal_to_rational(&n.to_string()),
        serde_json::Value::String(s) => decimal_to_rational(s),
        serde_json::Value::Object(obj) => {
            let field = |name: &str| -> Result<BigInt, String> {
                let v = obj.get(name).ok_or_else(|| format!("missing {name:?}"))?;
                let text = match v {
                    serde_json::Value::Number(n) => n.to_string(),
                    serde_json::Value::String(s) => s.clone(),
                    _ => return Err(format!("{name:?} must be an integer")),
                };
                text.parse::<BigInt>().map_err(|e| format!("bad {name:?}: {e}"))
            };
            let num = field("num")?;
            let den = field("den")?;
            if den.is_zero() {
                return Err("zero denominator".to_string());
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err("expected a number, decimal string or num/den object".to_string()),
    }
}

/// Parses an exact decimal literal (`"2"`, `"2.5"`, `"-0.25"`) into a
/// rational.
fn decimal_to_rational(text: &str) -> Result<BigRational, String> {
    let trimmed = text.trim();
    let (mantissa, exp) = match trimmed.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|e| format!("bad exponent: {e}"))?),
        None => (trimmed, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let num = digits.parse::<BigInt>().map_err(|e| format!("bad number {text:?}: {e}"))?;
    let scale = frac_part.len() as i32 - exp;
    let pow = BigInt::from(10).pow(scale.unsigned_abs());
    Ok(if scale >= 0 {
        BigRational::new(num, pow)
    } else {
        BigRational::from_integer(num * pow)
    })
}
