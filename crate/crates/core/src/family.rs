//! Families of convex bodies and their JSON file format.
//!
//! ```json
//! {"dim": 2, "members": [
//!   {"id": "A", "type": "H", "halfspaces": [{"a": ["1", "0"], "b": "1/2"}]},
//!   {"id": "B", "type": "V", "points": [["0", "0"], ["1", "2"]]}
//! ]}
//! ```

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{ConvexBody, HPolytope, HalfSpace, RationalVector, VBody};
use crate::lift::{LiftKind, LiftedBody};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub id: String,
    pub body: ConvexBody,
}

/// Metadata attached to files holding lifted bodies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftTag {
    pub kind: String,
    pub base_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<RationalVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facet: Option<usize>,
}

/// Ordered members with unique ids and a common dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyFile", into = "FamilyFile")]
pub struct Family {
    dim: usize,
    members: Vec<Member>,
    lift: Option<LiftTag>,
}

impl Family {
    pub fn new(dim: usize, members: Vec<Member>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for m in &members {
            check_dim(dim, m.body.dim())?;
            if !ids.insert(m.id.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate member id {:?}", m.id)));
            }
        }
        Ok(Family { dim, members, lift: None })
    }

    /// Members named `prefix0`, `prefix1`, ... in order. Indices are
    /// zero-padded so ids sort like the members.
    pub fn from_bodies(dim: usize, prefix: &str, bodies: Vec<ConvexBody>) -> Result<Self> {
        let width = bodies.len().saturating_sub(1).to_string().len();
        let members = bodies
            .into_iter()
            .enumerate()
            .map(|(i, body)| Member { id: format!("{prefix}{i:0width$}"), body })
            .collect();
        Family::new(dim, members)
    }

    pub fn from_lifts(ids: &[String], lifts: Vec<LiftedBody>) -> Result<Self> {
        let first = lifts.first().ok_or(Error::EmptyInput("lifted bodies"))?;
        let tag = LiftTag {
            kind: match first.kind {
                LiftKind::Width => "width",
                LiftKind::Discrete => "discrete",
                LiftKind::BoundaryFace => "boundary",
                LiftKind::Product => "product",
            }
            .to_string(),
            base_dim: first.base_dim,
            v: first.direction.clone(),
            k: first.k,
            facet: first.facet,
        };
        let dim = first.body.dim();
        let members = ids.iter().cloned().zip(lifts).map(|(id, l)| Member { id, body: l.body }).collect();
        Ok(Family::new(dim, members)?.with_lift(tag))
    }

    pub fn with_lift(mut self, tag: LiftTag) -> Self {
        self.lift = Some(tag);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn lift(&self) -> Option<&LiftTag> {
        self.lift.as_ref()
    }

    pub fn bodies(&self) -> impl Iterator<Item = &ConvexBody> {
        self.members.iter().map(|m| &m.body)
    }

    pub fn ids(&self, indices: &[usize]) -> Vec<String> {
        indices.iter().map(|&i| self.members[i].id.clone()).collect()
    }

    pub fn subfamily(&self, indices: &[usize]) -> Family {
        Family {
            dim: self.dim,
            members: indices.iter().map(|&i| self.members[i].clone()).collect(),
            lift: self.lift.clone(),
        }
    }

    pub fn push(&mut self, member: Member) -> Result<()> {
        check_dim(self.dim, member.body.dim())?;
        if self.members.iter().any(|m| m.id == member.id) {
            return Err(Error::InvalidArgument(format!("duplicate member id {:?}", member.id)));
        }
        self.members.push(member);
        Ok(())
    }

    pub fn scaled(&self, factor: &crate::Rational) -> Family {
        Family {
            dim: self.dim,
            members: self.members.iter().map(|m| Member { id: m.id.clone(), body: m.body.scaled(factor) }).collect(),
            lift: self.lift.clone(),
        }
    }

    /// Intersection of all members as one H-polytope, when all are H-bodies.
    pub fn intersection_h(&self) -> Option<HPolytope> {
        let mut cons = Vec::new();
        for m in &self.members {
            cons.extend(m.body.as_h()?.constraints().iter().cloned());
        }
        Some(HPolytope::new(self.dim, cons).expect("dimensions checked"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("families serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Color classes for colorful statements; tuples take one member per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorfulFamilies {
    families: Vec<Family>,
}

impl ColorfulFamilies {
    pub fn new(families: Vec<Family>) -> Result<Self> {
        let first = families.first().ok_or(Error::EmptyInput("color classes"))?;
        for f in &families {
            check_dim(first.dim(), f.dim())?;
            if f.is_empty() {
                return Err(Error::EmptyInput("color class"));
            }
        }
        Ok(ColorfulFamilies { families })
    }

    pub fn dim(&self) -> usize {
        self.families[0].dim()
    }

    pub fn families(&self) -> &[Family] {
        &self.families
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    /// Number of colorful tuples, saturating.
    pub fn tuple_count(&self) -> u128 {
        self.families.iter().fold(1u128, |acc, f| acc.saturating_mul(f.len() as u128))
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyFile {
    dim: usize,
    members: Vec<MemberFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lift: Option<LiftTag>,
}

#[derive(Serialize, Deserialize)]
struct MemberFile {
    id: String,
    #[serde(rename = "type")]
    kind: BodyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    halfspaces: Option<Vec<HalfSpace>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<RationalVector>>,
}

#[derive(Serialize, Deserialize)]
enum BodyKind {
    H,
    V,
}

impl TryFrom<FamilyFile> for Family {
    type Error = Error;

    fn try_from(file: FamilyFile) -> Result<Self> {
        let mut members = Vec::with_capacity(file.members.len());
        for m in file.members {
            let body = match m.kind {
                BodyKind::H => {
                    let hs = m.halfspaces.ok_or_else(|| Error::Parse(format!("member {:?} lacks halfspaces", m.id)))?;
                    ConvexBody::H(HPolytope::new(file.dim, hs)?)
                }
                BodyKind::V => {
                    let pts = m.points.ok_or_else(|| Error::Parse(format!("member {:?} lacks points", m.id)))?;
                    ConvexBody::V(VBody::new(pts)?)
                }
            };
            members.push(Member { id: m.id, body });
        }
        let family = Family::new(file.dim, members)?;
        Ok(match file.lift {
            Some(tag) => family.with_lift(tag),
            None => family,
        })
    }
}

impl From<Family> for FamilyFile {
    fn from(f: Family) -> Self {
        let members = f
            .members
            .into_iter()
            .map(|m| match m.body {
                ConvexBody::H(p) => MemberFile {
                    id: m.id,
                    kind: BodyKind::H,
                    halfspaces: Some(p.constraints().to_vec()),
                    points: None,
                },
                ConvexBody::V(v) => {
                    MemberFile { id: m.id, kind: BodyKind::V, halfspaces: None, points: Some(v.points().to_vec()) }
                }
            })
            .collect();
        FamilyFile { dim: f.dim, members, lift: f.lift }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let fam = Family::from_bodies(
            2,
            "K",
            vec![
                ConvexBody::H(HPolytope::cube(2, 0, 1)),
                ConvexBody::V(VBody::new(vec![RationalVector::from_ints(&[0, 0]), RationalVector::from_ints(&[1, 2])]).unwrap()),
            ],
        )
        .unwrap();
        let text = fam.to_json();
        assert!(text.contains("\"type\": \"V\""));
        assert_eq!(Family::from_json(&text).unwrap(), fam);
    }

    #[test]
    fn rejects_duplicates_and_bad_members() {
        let body = ConvexBody::H(HPolytope::cube(1, 0, 1));
        let m = Member { id: "a".into(), body };
        assert!(Family::new(1, vec![m.clone(), m]).is_err());
        let text = r#"{"dim": 1, "members": [{"id": "a", "type": "V"}]}"#;
        assert!(matches!(Family::from_json(text), Err(Error::Parse(_))));
        let text = r#"{"dim": 2, "members": [{"id": "a", "type": "V", "points": [["1"]]}]}"#;
        assert!(Family::from_json(text).is_err());
    }

    #[test]
    fn zero_padded_ids() {
        let bodies = vec![ConvexBody::H(HPolytope::cube(1, 0, 1)); 11];
        let fam = Family::from_bodies(1, "F", bodies).unwrap();
        assert_eq!(fam.members()[3].id, "F03");
    }
}
