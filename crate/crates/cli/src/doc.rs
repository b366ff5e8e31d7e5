use serde::{Deserialize, Serialize};

use hypercov::multivariate::{ConditionSet, MultivarDoc, MultivarParams, PsiSpec};

/// A multivariate model document: the five matrices plus optional ψ blocks and condition set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDocument {
    #[serde(flatten)]
    pub params: MultivarDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi1: Option<PsiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi2: Option<PsiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition_set: Option<ConditionSet>,
}

#[derive(Debug, Clone)]
pub struct ParsedModel {
    pub params: MultivarParams,
    pub psi1: Option<PsiSpec>,
    pub psi2: Option<PsiSpec>,
    pub condition_set: Option<ConditionSet>,
}

/// Parses and checks a model document. Errors are returned as readable messages.
pub fn parse_multivar_doc(text: &str) -> Result<ParsedModel, String> {
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| format!("invalid model document: {e}"))?;
    let params = MultivarParams::from_doc(&doc.params).map_err(|e| e.to_string())?;
    for spec in [&doc.psi1, &doc.psi2].into_iter().flatten() {
        spec.check_params().map_err(|e| e.to_string())?;
    }
    Ok(ParsedModel {
        params,
        psi1: doc.psi1,
        psi2: doc.psi2,
        condition_set: doc.condition_set,
    })
}

/// Reads a points file: one point per line, whitespace-separated coordinates, `#` comments.
pub fn parse_points(text: &str) -> Result<Vec<Vec<f64>>, String> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let p = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| format!("line {}: cannot parse {t:?}", k + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        if p.iter().any(|v| !v.is_finite()) {
            return Err(format!("line {}: coordinates must be finite", k + 1));
        }
        if let Some(first) = points.first() {
            if first.len() != p.len() {
                return Err(format!("line {}: expected {} coordinates, found {}", k + 1, first.len(), p.len()));
            }
        }
        points.push(p);
    }
    if points.is_empty() {
        return Err("points file contains no points".into());
    }
    Ok(points)
}
