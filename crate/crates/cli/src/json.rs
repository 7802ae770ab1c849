//! JSON certificate documents.
//!
//! Big integers are written as decimal strings; on input both strings and
//! JSON integers are accepted. Small indices (`n`, `k`, `m`, `p`, `s`, `t`)
//! are plain JSON numbers. Unknown fields are rejected everywhere.

use std::fmt;

use equideg_core::certificates::{Justification, LocalEntry, MapCertificate, ZeroCertificate};
use equideg_core::numtheory::PrimePowerRep;
use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;

        impl Visitor<'_> for IntVisitor {
            type Value = Int;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                let digits = v.strip_prefix('-').unwrap_or(v);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(E::invalid_value(de::Unexpected::Str(v), &self));
                }
                v.parse().map(Int).map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }

        d.deserialize_any(IntVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ZeroTag {
    ZeroCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum MapTag {
    MapCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepDoc {
    p: u64,
    s: u32,
    t: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ZeroDoc {
    #[serde(rename = "type")]
    tag: ZeroTag,
    n: u64,
    reps: Vec<RepDoc>,
    d: Vec<Int>,
    b: Vec<Int>,
    c: Vec<Int>,
    #[serde(rename = "N")]
    big_n: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    #[serde(rename = "type")]
    tag: MapTag,
    n: u64,
    degree: Int,
    entries: Vec<EntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    k: u64,
    d: Int,
    just: JustDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum JustDoc {
    Antipodal {},
    Factor { m: u64, sub: Box<MapDoc> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Zero(ZeroCertificate),
    Map(MapCertificate),
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct SchemaError(String);

fn ints(v: &[BigInt]) -> Vec<Int> {
    v.iter().cloned().map(Int).collect()
}

fn unints(v: Vec<Int>) -> Vec<BigInt> {
    v.into_iter().map(|i| i.0).collect()
}

impl From<&ZeroCertificate> for ZeroDoc {
    fn from(c: &ZeroCertificate) -> Self {
        ZeroDoc {
            tag: ZeroTag::ZeroCertificate,
            n: c.n,
            reps: c.reps.iter().map(|r| RepDoc { p: r.p, s: r.s, t: r.t }).collect(),
            d: ints(&c.d),
            b: ints(&c.b),
            c: ints(&c.c),
            big_n: Int(c.big_n.clone()),
        }
    }
}

impl From<ZeroDoc> for ZeroCertificate {
    fn from(doc: ZeroDoc) -> Self {
        ZeroCertificate {
            n: doc.n,
            reps: doc.reps.into_iter().map(|r| PrimePowerRep { p: r.p, s: r.s, t: r.t }).collect(),
            d: unints(doc.d),
            b: unints(doc.b),
            c: unints(doc.c),
            big_n: doc.big_n.0,
        }
    }
}

impl From<&MapCertificate> for MapDoc {
    fn from(c: &MapCertificate) -> Self {
        MapDoc {
            tag: MapTag::MapCertificate,
            n: c.n,
            degree: Int(c.degree.clone()),
            entries: c
                .entries
                .iter()
                .map(|e| EntryDoc {
                    k: e.k,
                    d: Int(e.d.clone()),
                    just: match &e.just {
                        Justification::AntipodalJoin => JustDoc::Antipodal {},
                        Justification::FactorRecursion { m, sub } => JustDoc::Factor {
                            m: *m,
                            sub: Box::new(MapDoc::from(sub.as_ref())),
                        },
                    },
                })
                .collect(),
        }
    }
}

impl From<MapDoc> for MapCertificate {
    fn from(doc: MapDoc) -> Self {
        MapCertificate {
            n: doc.n,
            degree: doc.degree.0,
            entries: doc
                .entries
                .into_iter()
                .map(|e| LocalEntry {
                    k: e.k,
                    d: e.d.0,
                    just: match e.just {
                        JustDoc::Antipodal {} => Justification::AntipodalJoin,
                        JustDoc::Factor { m, sub } => Justification::FactorRecursion {
                            m,
                            sub: Box::new(MapCertificate::from(*sub)),
                        },
                    },
                })
                .collect(),
        }
    }
}

pub fn zero_to_json(cert: &ZeroCertificate) -> String {
    serde_json::to_string_pretty(&ZeroDoc::from(cert)).expect("serializable")
}

pub fn map_to_json(cert: &MapCertificate) -> String {
    serde_json::to_string_pretty(&MapDoc::from(cert)).expect("serializable")
}

pub fn document_to_json(doc: &Document) -> String {
    match doc {
        Document::Zero(c) => zero_to_json(c),
        Document::Map(c) => map_to_json(c),
    }
}

/// Parses an untrusted certificate document, dispatching on `"type"`.
pub fn parse_document(text: &str) -> Result<Document, SchemaError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| SchemaError(format!("invalid JSON: {e}")))?;
    let tag = value
        .get("type")
        .ok_or_else(|| SchemaError("missing \"type\" field".into()))?
        .as_str()
        .ok_or_else(|| SchemaError("\"type\" must be a string".into()))?
        .to_owned();
    match tag.as_str() {
        "zero_certificate" => serde_json::from_value::<ZeroDoc>(value)
            .map(|d| Document::Zero(d.into()))
            .map_err(|e| SchemaError(format!("zero_certificate: {e}"))),
        "map_certificate" => serde_json::from_value::<MapDoc>(value)
            .map(|d| Document::Map(d.into()))
            .map_err(|e| SchemaError(format!("map_certificate: {e}"))),
        other => Err(SchemaError(format!("unknown document type {other:?}"))),
    }
}
