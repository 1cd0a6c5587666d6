//! Versioned JSON documents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ExactScalar, Point, StringGeom, StringKind, Vector};
use crate::meshops::{scaling_union, tensor, MeshTruncation};
use crate::netlib::{Assembly, Motif, NetTruncation};
use crate::supernatural::Supernatural;

/// Version tag written into every document.
pub const FORMAT: u32 = 1;

fn check_format(found: u32) -> Result<()> {
    if found != FORMAT {
        return Err(Error::Parse(format!("unsupported format {found}, expected {FORMAT}")));
    }
    Ok(())
}

fn default_format() -> u32 {
    FORMAT
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringDescriptor {
    pub kind: StringKind,
    pub anchor: Vec<ExactScalar>,
    pub direction: Vec<ExactScalar>,
    /// Parameter bounds along `direction`; `null` is unbounded.
    pub extent: (Option<ExactScalar>, Option<ExactScalar>),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<usize>,
}

impl StringDescriptor {
    pub fn from_geom(s: &StringGeom, class: Option<usize>) -> Self {
        StringDescriptor {
            kind: s.kind(),
            anchor: s.anchor().coords().to_vec(),
            direction: s.direction().coords().to_vec(),
            extent: (s.lo().cloned(), s.hi().cloned()),
            class,
        }
    }

    pub fn to_geom(&self, dim: usize) -> Result<StringGeom> {
        for v in [&self.anchor, &self.direction] {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
        }
        let direction = Vector::new(self.direction.clone());
        if direction.is_zero() {
            return Err(Error::Degenerate("zero string direction".into()));
        }
        if let (Some(a), Some(b)) = &self.extent {
            if a >= b {
                return Err(Error::Degenerate("empty string extent".into()));
            }
        }
        StringGeom::from_parametrization(self.kind, &Point::new(self.anchor.clone()), &direction, self.extent.clone())
    }
}

/// A motif: period vectors with node and string representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetDescriptor {
    #[serde(default = "default_format")]
    pub format: u32,
    pub name: String,
    pub dimension: usize,
    pub periods: Vec<Vec<ExactScalar>>,
    pub nodes: Vec<Vec<ExactScalar>>,
    pub strings: Vec<StringDescriptor>,
}

fn vectors(rows: &[Vec<ExactScalar>], dim: usize) -> Result<Vec<Vector>> {
    rows.iter()
        .map(|r| {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
            }
            Ok(Vector::new(r.clone()))
        })
        .collect()
}

fn check_dimension(d: usize) -> Result<()> {
    if d != 2 && d != 3 {
        return Err(Error::Precondition(format!("unsupported dimension {d}")));
    }
    Ok(())
}

impl NetDescriptor {
    pub fn from_motif(m: &Motif) -> Self {
        NetDescriptor {
            format: FORMAT,
            name: m.name.clone(),
            dimension: m.dimension,
            periods: m.periods.iter().map(|p| p.coords().to_vec()).collect(),
            nodes: m.node_reps.iter().map(|p| p.coords().to_vec()).collect(),
            strings: m.string_reps.iter().map(|s| StringDescriptor::from_geom(s, None)).collect(),
        }
    }

    pub fn to_motif(&self) -> Result<Motif> {
        check_format(self.format)?;
        check_dimension(self.dimension)?;
        let d = self.dimension;
        let motif = Motif {
            name: self.name.clone(),
            dimension: d,
            periods: vectors(&self.periods, d)?,
            node_reps: vectors(&self.nodes, d)?,
            string_reps: self.strings.iter().map(|s| s.to_geom(d)).collect::<Result<_>>()?,
        };
        motif.validate()?;
        Ok(motif)
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn motif_from_json(text: &str) -> Result<Motif> {
    parse_json::<NetDescriptor>(text)?.to_motif()
}

pub fn motif_to_json(m: &Motif) -> String {
    pretty(&NetDescriptor::from_motif(m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDescriptor {
    pub point: Vec<ExactScalar>,
    pub class: usize,
}

/// A truncation as listed nodes and the full strings meeting the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationDoc {
    #[serde(default = "default_format")]
    pub format: u32,
    pub name: String,
    pub dimension: usize,
    pub radius: ExactScalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periods: Option<Vec<Vec<ExactScalar>>>,
    /// Some node lies on fewer than two strings.
    #[serde(default)]
    pub lonely_nodes: bool,
    pub nodes: Vec<NodeDescriptor>,
    pub strings: Vec<StringDescriptor>,
}

impl TruncationDoc {
    pub fn from_truncation(net: &NetTruncation) -> Self {
        TruncationDoc {
            format: FORMAT,
            name: net.name.clone(),
            dimension: net.dimension,
            radius: net.radius.clone(),
            periods: net
                .periods
                .as_ref()
                .map(|ps| ps.iter().map(|p| p.coords().to_vec()).collect()),
            lonely_nodes: (0..net.nodes().len()).any(|i| net.strings_at(i).len() < 2),
            nodes: net
                .nodes()
                .iter()
                .map(|n| NodeDescriptor { point: n.point.coords().to_vec(), class: n.class })
                .collect(),
            strings: net
                .strings()
                .iter()
                .map(|s| StringDescriptor::from_geom(&s.geom, Some(s.class)))
                .collect(),
        }
    }

    /// Reassembles and revalidates the truncation. Membership queries
    /// beyond the window are not available on the result.
    pub fn to_truncation(&self) -> Result<NetTruncation> {
        check_format(self.format)?;
        check_dimension(self.dimension)?;
        let d = self.dimension;
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                if n.point.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: n.point.len() });
                }
                Ok((Point::new(n.point.clone()), n.class))
            })
            .collect::<Result<Vec<_>>>()?;
        let strings = self
            .strings
            .iter()
            .map(|s| Ok((s.to_geom(d)?, s.class.unwrap_or(0))))
            .collect::<Result<Vec<_>>>()?;
        let periods = self.periods.as_ref().map(|p| vectors(p, d)).transpose()?;
        NetTruncation::assemble(
            &self.name,
            d,
            self.radius.clone(),
            nodes,
            strings,
            Assembly {
                periods,
                oracle: None,
                allow_lonely_nodes: self.lonely_nodes,
            },
        )
    }
}

pub fn truncation_to_json(net: &NetTruncation) -> String {
    pretty(&TruncationDoc::from_truncation(net))
}

pub fn truncation_from_json(text: &str) -> Result<NetTruncation> {
    parse_json::<TruncationDoc>(text)?.to_truncation()
}

/// A tensor mesh `base ⊗ group`, or with `scale` the union of the
/// scalings of `base` by `scale^-k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSpec {
    #[serde(default = "default_format")]
    pub format: u32,
    pub base: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Supernatural>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<u64>,
    pub depth: u32,
    pub radius: ExactScalar,
}

/// Reads `base@group` (tensor mesh) or `base/m` (union of scalings).
pub fn parse_mesh_arg(arg: &str, depth: u32, radius: ExactScalar) -> Result<MeshSpec> {
    let (base, group, scale) = if let Some((b, g)) = arg.split_once('@') {
        (b, Some(g.parse::<Supernatural>()?), None)
    } else if let Some((b, m)) = arg.split_once('/') {
        let m = m
            .trim()
            .parse::<u64>()
            .map_err(|e| Error::Parse(format!("scale factor `{m}`: {e}")))?;
        (b, None, Some(m))
    } else {
        return Err(Error::Parse(format!("mesh `{arg}` is neither base@group nor base/m")));
    };
    Ok(MeshSpec {
        format: FORMAT,
        base: base.trim().to_string(),
        group,
        scale,
        depth,
        radius,
    })
}

pub fn mesh_from_spec(spec: &MeshSpec) -> Result<MeshTruncation> {
    check_format(spec.format)?;
    if !spec.radius.is_positive() {
        return Err(Error::Precondition("mesh radius must be positive".into()));
    }
    match (&spec.group, spec.scale) {
        (Some(g), None) => tensor(&spec.base, g, spec.depth, &spec.radius),
        (None, Some(m)) => scaling_union(&spec.base, m, spec.depth, &spec.radius),
        _ => Err(Error::Parse("a mesh spec needs exactly one of `group` and `scale`".into())),
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    format: u32,
    kind: &'a str,
    report: &'a T,
}

/// A report wrapped as `{format, kind, report}`.
pub fn report_json<T: Serialize>(kind: &str, report: &T) -> String {
    pretty(&Envelope { format: FORMAT, kind, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlib::{catalog, generate, sierpinski, CATALOG};

    #[test]
    fn catalog_motifs_round_trip() {
        for name in CATALOG {
            let m = catalog(name).unwrap();
            let back = motif_from_json(&motif_to_json(&m)).unwrap();
            assert_eq!(back, m, "{name}");
        }
    }

    #[test]
    fn truncations_round_trip() {
        for (name, r) in [("kag", 4), ("hex", 4), ("K4", 8)] {
            let t = generate(&catalog(name).unwrap(), &ExactScalar::int(r)).unwrap();
            let back = truncation_from_json(&truncation_to_json(&t)).unwrap();
            assert_eq!(back, t, "{name}");
        }
        let s = sierpinski(2).unwrap();
        assert_eq!(truncation_from_json(&truncation_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn scalars_use_the_text_syntax() {
        let m = catalog("tri").unwrap();
        let text = motif_to_json(&m);
        assert!(text.contains("\"format\": 1"));
        assert!(text.contains("r3"), "{text}");
    }

    #[test]
    fn mesh_arguments() {
        let s = parse_mesh_arg("Z2@2^inf", 3, ExactScalar::int(1)).unwrap();
        assert_eq!(s.group, Some(Supernatural::infinite_at(&[2]).unwrap()));
        let mesh = mesh_from_spec(&s).unwrap();
        assert_eq!(mesh.net.nodes().iter().filter(|n| n.point.in_box(&ExactScalar::one())).count(), 289);
        let u = parse_mesh_arg("kag/3", 1, ExactScalar::int(2)).unwrap();
        assert_eq!(u.scale, Some(3));
        assert!(mesh_from_spec(&u).is_ok());
        assert!(parse_mesh_arg("Z2", 1, ExactScalar::one()).is_err());
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"2^inf\""), "{json}");
    }

    #[test]
    fn malformed_documents_are_errors() {
        for text in [
            "{}",
            r#"{"name":"x","dimension":2,"periods":[["1","0"]],"nodes":[],"strings":[]}"#,
            r#"{"name":"x","dimension":2,"periods":[["1","0"],["0","1"]],"nodes":[["0","0"]],"strings":[{"kind":"line","anchor":["0","0"],"direction":["0","0"],"extent":[null,null]}]}"#,
            r#"{"format":2,"name":"x","dimension":2,"periods":[],"nodes":[],"strings":[]}"#,
        ] {
            assert!(motif_from_json(text).is_err(), "{text}");
        }
    }
}
