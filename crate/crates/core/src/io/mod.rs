//! File formats: family documents, hitting instances and SVG figures.

mod svg;

pub use svg::{render_svg, RenderSpec, Viewport};

use crate::geom::{format_rational, parse_rational, Ambient, ConvexBody, Family, Halfplane, Rational, Rational2};
use crate::solver::HittingInstance;
use crate::Error;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error as ThisError;

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid document: {0}")]
    Schema(String),
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl DocumentError {
    fn from_json(e: serde_json::Error) -> Self {
        match e.classify() {
            serde_json::error::Category::Data => DocumentError::Schema(e.to_string()),
            _ => DocumentError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
        }
    }
}

/// Serialized form of one body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyRecord {
    pub id: usize,
    pub kind: String,
    pub vertices: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<i64>,
}

/// Serialized form of a family with an optional certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub version: u32,
    pub ambient: String,
    pub bodies: Vec<BodyRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
}

fn point_record(p: &Rational2) -> [String; 2] {
    [format_rational(&p.x), format_rational(&p.y)]
}

fn parse_coordinate(text: &str) -> Result<Rational, DocumentError> {
    parse_rational(text).map_err(|e| DocumentError::Schema(format!("bad rational {text:?}: {e}")))
}

impl FamilyDocument {
    pub fn from_family(family: &Family, certificate: Option<Value>) -> Self {
        let levels = family.levels();
        FamilyDocument {
            version: DOCUMENT_VERSION,
            ambient: family.ambient().name().to_string(),
            bodies: family
                .bodies()
                .iter()
                .map(|b| BodyRecord {
                    id: b.id(),
                    kind: b.kind().name().to_string(),
                    vertices: b.vertices().iter().map(point_record).collect(),
                    level: levels.map(|l| l[b.id()]),
                })
                .collect(),
            certificate,
        }
    }

    /// Validates the document and builds its family.
    pub fn to_family(&self) -> Result<Family, DocumentError> {
        if self.version != DOCUMENT_VERSION {
            return Err(DocumentError::Schema(format!("unsupported version {}", self.version)));
        }
        let ambient = match self.ambient.as_str() {
            "planar" => Ambient::Planar,
            "lifted-3d" => Ambient::Lifted3d,
            other => return Err(DocumentError::Schema(format!("unknown ambient {other:?}"))),
        };
        let mut bodies = Vec::with_capacity(self.bodies.len());
        let mut levels = Vec::new();
        for (i, record) in self.bodies.iter().enumerate() {
            if record.id != i {
                return Err(DocumentError::Schema(format!("body {i} has id {}", record.id)));
            }
            let vertices = record
                .vertices
                .iter()
                .map(|[x, y]| Ok(Rational2::new(parse_coordinate(x)?, parse_coordinate(y)?)))
                .collect::<Result<Vec<_>, DocumentError>>()?;
            let body = ConvexBody::new(i, vertices)?;
            if body.kind().name() != record.kind {
                return Err(DocumentError::Schema(format!(
                    "body {i} is declared {:?} but has {} vertices",
                    record.kind,
                    record.vertices.len()
                )));
            }
            match (ambient, record.level) {
                (Ambient::Planar, None) => {}
                (Ambient::Lifted3d, Some(l)) => levels.push(l),
                (Ambient::Planar, Some(_)) => {
                    return Err(DocumentError::Schema(format!("planar body {i} has a level")))
                }
                (Ambient::Lifted3d, None) => {
                    return Err(DocumentError::Schema(format!("lifted body {i} has no level")))
                }
            }
            bodies.push(body);
        }
        let family = Family::from_bodies(bodies);
        Ok(match ambient {
            Ambient::Planar => family,
            Ambient::Lifted3d => family.lifted(levels)?,
        })
    }
}

/// Parses and validates a family document.
pub fn parse_document(text: &str) -> Result<(Family, Option<Value>), DocumentError> {
    let doc: FamilyDocument = serde_json::from_str(text).map_err(DocumentError::from_json)?;
    let family = doc.to_family()?;
    Ok((family, doc.certificate))
}

pub fn parse_family(text: &str) -> Result<Family, DocumentError> {
    parse_document(text).map(|(f, _)| f)
}

/// Pretty-printed canonical JSON, newline terminated.
pub fn serialize_family(family: &Family, certificate: Option<Value>) -> String {
    let doc = FamilyDocument::from_family(family, certificate);
    let mut text = serde_json::to_string_pretty(&doc).expect("documents serialize");
    text.push('\n');
    text
}

/// A coordinate given either as a rational string or as a JSON integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Coordinate {
    Text(String),
    Integer(i64),
}

impl Coordinate {
    fn value(&self) -> Result<Rational, DocumentError> {
        match self {
            Coordinate::Text(t) => parse_coordinate(t),
            Coordinate::Integer(i) => Ok(Rational::from_integer((*i).into())),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HalfplaneRecord {
    a: Coordinate,
    b: Coordinate,
    c: Coordinate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRecord {
    segments: Vec<[[Coordinate; 2]; 2]>,
    halfplanes: Vec<HalfplaneRecord>,
}

/// Parses `{"segments": [[[x, y], [x, y]], ...], "halfplanes": [{"a", "b", "c"}, ...]}`.
pub fn parse_hitting_instance(text: &str) -> Result<HittingInstance, DocumentError> {
    let record: InstanceRecord = serde_json::from_str(text).map_err(DocumentError::from_json)?;
    let point = |c: &[Coordinate; 2]| -> Result<Rational2, DocumentError> { Ok(Rational2::new(c[0].value()?, c[1].value()?)) };
    let segments = record
        .segments
        .iter()
        .map(|[p, q]| Ok(vec![point(p)?, point(q)?]))
        .collect::<Result<Vec<_>, DocumentError>>()?;
    let family = Family::planar(segments)?;
    let halfplanes = record
        .halfplanes
        .iter()
        .map(|h| Ok(Halfplane::new(h.a.value()?, h.b.value()?, h.c.value()?)?))
        .collect::<Result<Vec<_>, DocumentError>>()?;
    Ok(HittingInstance::new(family, halfplanes)?)
}

pub fn serialize_hitting_instance(inst: &HittingInstance) -> String {
    let text = |r: &Rational| Coordinate::Text(format_rational(r));
    let record = InstanceRecord {
        segments: inst
            .segments()
            .bodies()
            .iter()
            .map(|b| {
                let v = b.vertices();
                [[text(&v[0].x), text(&v[0].y)], [text(&v[1].x), text(&v[1].y)]]
            })
            .collect(),
        halfplanes: inst
            .halfplanes()
            .iter()
            .map(|h| HalfplaneRecord {
                a: text(h.a()),
                b: text(h.b()),
                c: text(h.c()),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&record).expect("instances serialize");
    out.push('\n');
    out
}

/// Canonical JSON for a halfplane.
pub fn halfplane_json(h: &Halfplane) -> Value {
    serde_json::json!({
        "a": format_rational(h.a()),
        "b": format_rational(h.b()),
        "c": format_rational(h.c()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_five_segments, lift_to_3d, random::random_convex_polygons};
    use crate::solver::planted_instance;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn minimal_point_document() {
        let text = r#"{"version":1,"ambient":"planar","bodies":[{"id":0,"kind":"point","vertices":[["1/2","-3"]]}]}"#;
        let f = parse_family(text).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.bodies()[0].vertices()[0], Rational2::new(crate::geom::rat(1, 2), crate::geom::rat(-3, 1)));
    }

    #[test]
    fn five_segments_round_trip() {
        let r = gen_five_segments();
        let text = serialize_family(&r.family, None);
        assert_eq!(parse_family(&text).unwrap(), r.family);
        assert_eq!(serialize_family(&parse_family(&text).unwrap(), None), text);
    }

    #[test]
    fn lifted_round_trip() {
        let r = crate::constructions::gen_unbounded(3).unwrap();
        let (lifted, _) = lift_to_3d(&r).unwrap();
        let text = serialize_family(&lifted, None);
        assert!(text.contains("\"level\": 2"));
        assert_eq!(parse_family(&text).unwrap(), lifted);
    }

    #[test]
    fn rejections() {
        let reflex = r#"{"version":1,"ambient":"planar","bodies":[{"id":0,"kind":"polygon","vertices":[["0","0"],["4","0"],["1","1"],["0","4"]]}]}"#;
        assert!(matches!(parse_family(reflex), Err(DocumentError::Invalid(Error::InvalidBody { id: 0, .. }))));
        let kind = r#"{"version":1,"ambient":"planar","bodies":[{"id":0,"kind":"polygon","vertices":[["0","0"],["4","0"]]}]}"#;
        assert!(matches!(parse_family(kind), Err(DocumentError::Schema(_))));
        let id = r#"{"version":1,"ambient":"planar","bodies":[{"id":3,"kind":"point","vertices":[["0","0"]]}]}"#;
        assert!(matches!(parse_family(id), Err(DocumentError::Schema(_))));
        let float = r#"{"version":1,"ambient":"planar","bodies":[{"id":0,"kind":"point","vertices":[["0.5","0"]]}]}"#;
        assert!(matches!(parse_family(float), Err(DocumentError::Schema(_))));
        let broken = "{\"version\":1,\n\"ambient\": }";
        assert!(matches!(parse_family(broken), Err(DocumentError::Syntax { line: 2, .. })));
    }

    #[test]
    fn hitting_instance_round_trip() {
        let p = planted_instance(3, 9).unwrap();
        let text = serialize_hitting_instance(&p.instance);
        let back = parse_hitting_instance(&text).unwrap();
        assert_eq!(back, p.instance);
        let plain = r#"{"segments":[[[0,0],[1,0]]],"halfplanes":[{"a":"1","b":0,"c":"2"}]}"#;
        assert_eq!(parse_hitting_instance(plain).unwrap().halfplanes().len(), 1);
        let infeasible = r#"{"segments":[[[0,0],[1,0]]],"halfplanes":[{"a":"1","b":0,"c":"-2"}]}"#;
        assert_eq!(
            parse_hitting_instance(infeasible),
            Err(DocumentError::Invalid(Error::InfeasibleInstance(0)))
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn documents_round_trip(seed in any::<u64>(), n in 0usize..6, lift in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut f = random_convex_polygons(n, &mut rng);
            if lift {
                f = f.lifted((0..n as i64).map(|i| i * 3 - 4).collect()).unwrap();
            }
            let text = serialize_family(&f, None);
            let back = parse_family(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(serialize_family(&back, None), text);
        }
    }
}
