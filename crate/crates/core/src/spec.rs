//! JSON spec files: algebras, deformation data and relative families.

use serde::Deserialize;

use crate::aphi::DeformationDatum;
use crate::error::{Error, Result};
use crate::findim::{build_findim, FinDimAlgebra};
use crate::gm::{BasisSpec, RelativeFamily};
use crate::poly::{parse_ncpoly, Generator, GeneratorSet};
use crate::rewrite::AlgebraPresentation;
use crate::scalar::parse_q;

#[derive(Deserialize)]
#[serde(untagged)]
enum GenSpec {
    Name(String),
    Full(Generator),
}

fn generator_set(gs: Vec<GenSpec>) -> Result<GeneratorSet> {
    GeneratorSet::new(
        gs.into_iter()
            .map(|g| match g {
                GenSpec::Name(name) => Generator { name, weight: 1 },
                GenSpec::Full(g) => g,
            })
            .collect(),
    )
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    name: Option<String>,
    generators: Option<Vec<GenSpec>>,
    relations: Option<Vec<String>>,
    degree_cap: Option<usize>,
    basis: Option<Vec<String>>,
    structure_constants: Option<Vec<(usize, usize, usize, serde_json::Value)>>,
    phi: Option<Vec<(String, String)>>,
    t_order: Option<usize>,
}

/// A parsed algebra spec, optionally carrying deformation data.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    pub name: Option<String>,
    pub presentation: Option<AlgebraPresentation>,
    pub algebra: FinDimAlgebra,
    pub phi: Vec<(String, String)>,
    pub t_order: Option<usize>,
}

impl AlgebraSpec {
    /// The deformation datum, when the spec has a presentation.
    pub fn deformation(&self, order: Option<usize>) -> Result<DeformationDatum> {
        let pres = self.presentation.clone().ok_or_else(|| Error::input("deformations need a presentation, not structure constants"))?;
        let n = order.or(self.t_order).ok_or_else(|| Error::input("no t_order in spec and no --order given"))?;
        if n == 0 {
            return Err(Error::input("t order must be positive"));
        }
        let pairs: Vec<(&str, &str)> = self.phi.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        DeformationDatum::new(pres, &pairs, n)
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::input(e.to_string())
}

fn parse_q_value(v: &serde_json::Value) -> Result<crate::scalar::Q> {
    match v {
        serde_json::Value::String(s) => parse_q(s),
        serde_json::Value::Number(n) if n.is_i64() => Ok(crate::scalar::Q::from(n.as_i64().unwrap())),
        other => Err(Error::input(format!("structure constant must be an integer or a \"p/q\" string, got {other}"))),
    }
}

pub fn parse_algebra(text: &str) -> Result<AlgebraSpec> {
    let raw: RawAlgebra = serde_json::from_str(text).map_err(json_error)?;
    let has_pres = raw.generators.is_some() || raw.relations.is_some();
    let has_sc = raw.basis.is_some() || raw.structure_constants.is_some();
    if has_pres == has_sc {
        return Err(Error::input("give either generators/relations/degree_cap or basis/structure_constants"));
    }
    if has_pres {
        let gens = generator_set(raw.generators.unwrap_or_default())?;
        let cap = raw.degree_cap.ok_or_else(|| Error::input("missing degree_cap"))?;
        let rels = raw
            .relations
            .unwrap_or_default()
            .iter()
            .enumerate()
            .map(|(i, r)| parse_ncpoly(r, &gens).map_err(|e| Error::input(format!("relation {i} `{r}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let pres = AlgebraPresentation::new(gens, rels, cap)?;
        let algebra = build_findim(&pres, cap)?;
        Ok(AlgebraSpec { name: raw.name, presentation: Some(pres), algebra, phi: raw.phi.unwrap_or_default(), t_order: raw.t_order })
    } else {
        if raw.phi.is_some() || raw.degree_cap.is_some() {
            return Err(Error::input("phi and degree_cap need a presentation"));
        }
        let basis = raw.basis.ok_or_else(|| Error::input("missing basis"))?;
        let consts = raw
            .structure_constants
            .unwrap_or_default()
            .iter()
            .enumerate()
            .map(|(n, (i, j, k, c))| parse_q_value(c).map(|c| (*i, *j, *k, c)).map_err(|e| Error::input(format!("structure constant {n}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let limit = crate::size_limit();
        if basis.len() > limit {
            return Err(Error::SizeLimit { size: basis.len(), limit });
        }
        let algebra = FinDimAlgebra::from_constants(basis, &consts)?;
        Ok(AlgebraSpec { name: raw.name, presentation: None, algebra, phi: Vec::new(), t_order: raw.t_order })
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawBasis {
    Keyword(String),
    Patterns(Vec<String>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCaps {
    weight: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    name: Option<String>,
    base: String,
    base_weight: Option<usize>,
    generators: Vec<GenSpec>,
    #[serde(default)]
    relations: Vec<String>,
    b_basis: RawBasis,
    caps: RawCaps,
}

#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub name: Option<String>,
    pub family: RelativeFamily,
}

pub fn parse_family(text: &str) -> Result<FamilySpec> {
    let raw: RawFamily = serde_json::from_str(text).map_err(json_error)?;
    let gens = generator_set(raw.generators)?.gens;
    let base = Generator { name: raw.base, weight: raw.base_weight.unwrap_or(1) };
    let basis = match raw.b_basis {
        RawBasis::Keyword(k) if k == "normal" => BasisSpec::Normal,
        RawBasis::Keyword(k) => BasisSpec::Patterns(vec![k]),
        RawBasis::Patterns(ps) => BasisSpec::Patterns(ps),
    };
    let family = RelativeFamily::new(base, gens, &raw.relations, basis, raw.caps.weight)?;
    Ok(FamilySpec { name: raw.name, family })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentation_and_constants() {
        let a = parse_algebra(r#"{"generators": ["x"], "relations": ["x*x"], "degree_cap": 3}"#).unwrap();
        assert_eq!(a.algebra.dim(), 2);
        let b = parse_algebra(r#"{"basis": ["1", "e"], "structure_constants": [[0,0,0,1],[0,1,1,1],[1,0,1,"1"]]}"#).unwrap();
        assert_eq!(b.algebra.dim(), 2);
        let w = parse_algebra(r#"{"generators": [{"name": "x", "weight": 2}], "relations": [], "degree_cap": 4}"#).unwrap();
        assert_eq!(w.algebra.dim(), 3);
    }

    #[test]
    fn malformed_specs() {
        let e = parse_algebra("{\"generators\": [\"x\"],\n \"relations\": [\"x^\"], \"degree_cap\": 3}").unwrap_err();
        assert!(e.to_string().contains("relation 0"), "{e}");
        let e = parse_algebra("{\"generators\": [\"x\"]\n \"relations\": []}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_algebra(r#"{"generators": ["x"], "degree_cap": 2, "colour": 1}"#).is_err());
        assert!(parse_algebra(r#"{"basis": ["1", "e"], "structure_constants": [[0,0,0,"1/0"]]}"#).is_err());
        // e^2 = 1 + e
        assert!(parse_algebra(r#"{"basis": ["1", "e"], "structure_constants": [[0,0,0,1],[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,1]]}"#).is_ok());
        assert!(parse_algebra(r#"{"basis": ["1"], "structure_constants": []}"#).is_err());
    }

    #[test]
    fn deformation_and_family() {
        let d = parse_algebra(r#"{"generators": ["x","y"], "relations": ["x*y - y*x"], "degree_cap": 3, "phi": [["x*y - y*x", "t"]], "t_order": 2}"#).unwrap();
        assert_eq!(d.deformation(None).unwrap().t_order, 2);
        assert_eq!(d.deformation(Some(3)).unwrap().t_order, 3);
        let f = parse_family(r#"{"base": "c", "base_weight": 2, "generators": ["x","y"], "relations": ["x*y - y*x - c"], "b_basis": ["x^i y^j"], "caps": {"weight": 4}}"#).unwrap();
        assert_eq!(f.family.base_weight(), 2);
        assert!(parse_family(r#"{"base": "c", "generators": ["e"], "relations": ["e*e"], "b_basis": "normal", "caps": {}}"#).is_err());
    }
}
