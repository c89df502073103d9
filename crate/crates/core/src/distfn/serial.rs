//! JSON form of a distribution function: the DAG itself, node by node,
//! tagged by `kind`. Deserialization re-runs every construction check.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{DistFn, Node};

impl Serialize for DistFn {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.node().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DistFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let node = Node::deserialize(d)?;
        DistFn::from_node(node).map_err(serde::de::Error::custom)
    }
}

impl DistFn {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("distribution functions always serialize")
    }

    pub fn from_json(text: &str) -> crate::error::Result<DistFn> {
        serde_json::from_str(text).map_err(|e| crate::error::Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use crate::distfn::{combine, power, DistFn, EmpiricalStep, MaxConvolution};
    use crate::families;

    #[test]
    fn round_trip_preserves_values() {
        let d = families::dagum(2.0, 1.5).unwrap();
        let e = DistFn::empirical(EmpiricalStep::new(vec![0.5, 1.0, 4.0], Some(vec![1.0, 2.0, 1.0])).unwrap()).unwrap();
        let f = combine(
            MaxConvolution::Boolean,
            &power(MaxConvolution::Free, &d, 2.0).unwrap(),
            &families::cp_classical(0.5, &e).unwrap(),
        )
        .unwrap();
        let g = DistFn::from_json(&f.to_json()).unwrap();
        for x in [0.1, 0.5, 1.0, 2.0, 9.0] {
            assert_eq!(f.value(x), g.value(x));
        }
        assert_eq!(f.class(), g.class());
        assert_eq!(f.discontinuities(), g.discontinuities());
    }

    #[test]
    fn field_names_are_stable() {
        let f = families::dagum(1.0, 2.0).unwrap().affine(3.0, 0.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&f.to_json()).unwrap();
        assert_eq!(v["kind"], "affine_rescale");
        assert_eq!(v["scale"], 3.0);
        assert_eq!(v["child"]["kind"], "parametric");
        assert_eq!(v["child"]["name"], "dagum");
        assert_eq!(v["child"]["lambda"], 1.0);
    }

    #[test]
    fn invalid_documents_are_rejected() {
        let bad = r#"{"kind":"pointwise2","op":"boolean","left":{"kind":"parametric","name":"gumbel"},"right":{"kind":"dirac","at":1.0}}"#;
        assert!(DistFn::from_json(bad).is_err());
        let neg = r#"{"kind":"parametric","name":"pareto","alpha":-1.0}"#;
        assert!(DistFn::from_json(neg).is_err());
    }
}
