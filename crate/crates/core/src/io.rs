//! Model files: `{ "n_x": 2, "n_y": 2, "pF": { "01": "1/2", "10": "1/2" } }`
//! for response-function models, or `"joint": { "<r_x>|<outputs>": "p/q" }`
//! for confounded ones. Probabilities are rational strings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::causal::{ConfoundedModel, FunctionDistribution, FunctionTable};
use crate::error::{Error, Result};
use crate::rational;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelJson {
    n_x: usize,
    n_y: usize,
    #[serde(rename = "pF", default, skip_serializing_if = "Option::is_none")]
    p_f: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    joint: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    Response(FunctionDistribution),
    Confounded(ConfoundedModel),
}

impl Model {
    /// p(F) itself, or the marginal p(R_Y) of a confounded model.
    pub fn response_distribution(&self) -> FunctionDistribution {
        match self {
            Model::Response(p) => p.clone(),
            Model::Confounded(m) => m.response_marginal(),
        }
    }
}

fn table(n_x: usize, n_y: usize, key: &str) -> Result<FunctionTable> {
    let f = FunctionTable::from_key(n_y, key)?;
    if f.n_x() != n_x {
        return Err(Error::InvalidDistribution(format!("key '{key}' has {} digits, expected n_x = {n_x}", f.n_x())));
    }
    Ok(f)
}

pub fn parse_model(text: &str) -> Result<Model> {
    let json: ModelJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let (n_x, n_y) = (json.n_x, json.n_y);
    match (json.p_f, json.joint) {
        (Some(p_f), None) => {
            let weights =
                p_f.iter().map(|(k, v)| Ok((table(n_x, n_y, k)?, rational::parse(v)?))).collect::<Result<Vec<_>>>()?;
            Ok(Model::Response(FunctionDistribution::new(n_x, n_y, weights)?))
        }
        (None, Some(joint)) => {
            let weights = joint
                .iter()
                .map(|(k, v)| {
                    let (r_x, key) = k
                        .split_once('|')
                        .ok_or_else(|| Error::Parse(format!("joint key '{k}' must be '<r_x>|<outputs>'")))?;
                    let r_x = r_x.trim().parse().map_err(|_| Error::Parse(format!("bad r_x in '{k}'")))?;
                    Ok(((r_x, table(n_x, n_y, key.trim())?), rational::parse(v)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Model::Confounded(ConfoundedModel::new(n_x, n_y, weights)?))
        }
        _ => Err(Error::Parse("model must contain exactly one of \"pF\" or \"joint\"".into())),
    }
}

pub fn load_model(path: &Path) -> Result<Model> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_model(&text)
}

/// Support of p(F) as `{ outputs-key: "p/q" }`.
pub fn weights_map(p: &FunctionDistribution) -> BTreeMap<String, String> {
    p.support().map(|(f, w)| (f.key(), rational::format(w))).collect()
}

pub fn model_to_json(p: &FunctionDistribution) -> String {
    let json = ModelJson { n_x: p.n_x(), n_y: p.n_y(), p_f: Some(weights_map(p)), joint: None };
    serde_json::to_string_pretty(&json).expect("serializable")
}

pub fn confounded_to_json(m: &ConfoundedModel) -> String {
    let joint = m.support().map(|((r_x, f), w)| (format!("{r_x}|{}", f.key()), rational::format(w))).collect();
    let json = ModelJson { n_x: m.n_x(), n_y: m.n_y(), p_f: None, joint: Some(joint) };
    serde_json::to_string_pretty(&json).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::binary;
    use crate::models;
    use crate::rational::ratio;

    #[test]
    fn parses_response_model() {
        let m = parse_model(r#"{ "n_x": 2, "n_y": 2, "pF": { "01": "1/2", "10": "1/2" } }"#).unwrap();
        assert_eq!(m, Model::Response(models::identity_flip_mix()));
    }

    #[test]
    fn parses_confounded_model() {
        let m = parse_model(r#"{ "n_x": 2, "n_y": 2, "joint": { "0|00": "1/2", "1|11": "1/2" } }"#).unwrap();
        let Model::Confounded(c) = &m else { panic!() };
        assert_eq!(c.do_conditional(0).unwrap(), vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(m.response_distribution(), models::reset_mix());
        let back = parse_model(&confounded_to_json(c)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_model("{ \"n_x\": 2,\n \"n_y\": }").unwrap_err();
        let Error::Parse(msg) = err else { panic!() };
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn validation_errors() {
        let err = parse_model(r#"{ "n_x": 2, "n_y": 2, "pF": { "01": "1/2" } }"#).unwrap_err();
        assert!(matches!(err, Error::InvalidDistribution(ref m) if m.contains("sum")), "{err}");
        assert!(parse_model(r#"{ "n_x": 2, "n_y": 2, "pF": { "012": "1" } }"#).is_err());
        assert!(parse_model(r#"{ "n_x": 2, "n_y": 2 }"#).is_err());
    }

    #[test]
    fn round_trip() {
        let p = FunctionDistribution::point_mass(binary::identity());
        assert_eq!(parse_model(&model_to_json(&p)).unwrap(), Model::Response(p));
    }
}
