use serde::Serialize;
use serde_json::Value;

/// One checked quantity. `paper_reference_value` is the published value when
/// there is one; `tolerance` is absent for one-sided checks.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub quantity: String,
    pub value: Value,
    pub paper_reference_value: Option<Value>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// `|value − reference| ≤ tolerance`.
    pub fn near(quantity: &str, value: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            quantity: quantity.into(),
            value: value.into(),
            paper_reference_value: Some(reference.into()),
            tolerance: Some(tolerance),
            pass: (value - reference).abs() <= tolerance,
        }
    }

    /// A check whose pass condition is computed by the caller.
    pub fn custom(quantity: &str, value: impl Into<Value>, reference: Option<Value>, pass: bool) -> Self {
        Self {
            quantity: quantity.into(),
            value: value.into(),
            paper_reference_value: reference,
            tolerance: None,
            pass,
        }
    }

    /// Reported for information; always passes.
    pub fn info(quantity: &str, value: impl Into<Value>) -> Self {
        Self::custom(quantity, value, None, true)
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, checks: Vec<Check>) -> Self {
        Self {
            command: command.into(),
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,value,paper_reference_value,tolerance,pass\n");
        for c in &self.checks {
            let reference = c.paper_reference_value.as_ref().map(cell).unwrap_or_default();
            let tolerance = c.tolerance.map(|t| format!("{t:e}")).unwrap_or_default();
            out.push_str(&format!("{},{},{reference},{tolerance},{}\n", c.quantity, cell(&c.value), c.pass));
        }
        out
    }
}

/// Fixed six-decimal rendering with negative zero folded to zero.
pub fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => fixed6(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
