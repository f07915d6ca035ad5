//! Family-level checks for brambles and Helly families, and their
//! interception radius.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{DistanceMatrix, Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("the family is empty")]
    EmptyFamily,
    #[error("member {0} is empty")]
    EmptyMember(usize),
    #[error("member {member} holds vertex {vertex}, which is not in the graph")]
    VertexOutOfRange { member: usize, vertex: Vertex },
    #[error("member {0} induces a disconnected subgraph")]
    DisconnectedMember(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCheck {
    /// Every two members intersect or are joined by an edge.
    pub is_bramble: bool,
    /// Every two members intersect.
    pub is_helly: bool,
    /// Every member, read in the given order, is a simple path of `G`.
    pub all_paths: bool,
    /// First pair of members that neither intersect nor touch.
    pub bramble_witness: Option<(usize, usize)>,
    /// First pair of disjoint members.
    pub helly_witness: Option<(usize, usize)>,
    /// First member that is not a path.
    pub path_witness: Option<usize>,
}

fn validate(g: &Graph, family: &[Vec<Vertex>]) -> Result<(), FamilyError> {
    if family.is_empty() {
        return Err(FamilyError::EmptyFamily);
    }
    for (i, member) in family.iter().enumerate() {
        if member.is_empty() {
            return Err(FamilyError::EmptyMember(i));
        }
        if let Some(&vertex) = member.iter().find(|&&v| v >= g.n()) {
            return Err(FamilyError::VertexOutOfRange { member: i, vertex });
        }
        if !g.is_connected_subset(member) {
            return Err(FamilyError::DisconnectedMember(i));
        }
    }
    Ok(())
}

fn is_path(g: &Graph, member: &[Vertex]) -> bool {
    let mut seen = member.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len() == member.len() && member.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

pub fn family_check(g: &Graph, family: &[Vec<Vertex>]) -> Result<FamilyCheck, FamilyError> {
    validate(g, family)?;
    let n = g.n();
    let flags: Vec<Vec<bool>> = family
        .iter()
        .map(|m| {
            let mut f = vec![false; n];
            m.iter().for_each(|&v| f[v] = true);
            f
        })
        .collect();
    let mut bramble_witness = None;
    let mut helly_witness = None;
    for (i, fi) in flags.iter().enumerate() {
        for (j, mj) in family.iter().enumerate().skip(i + 1) {
            let meet = mj.iter().any(|&v| fi[v]);
            if !meet && helly_witness.is_none() {
                helly_witness = Some((i, j));
            }
            let touch = meet || mj.iter().any(|&v| g.neighbors(v).iter().any(|&w| fi[w]));
            if !touch && bramble_witness.is_none() {
                bramble_witness = Some((i, j));
            }
        }
    }
    let path_witness = family.iter().position(|m| !is_path(g, m));
    Ok(FamilyCheck {
        is_bramble: bramble_witness.is_none(),
        is_helly: helly_witness.is_none(),
        all_paths: path_witness.is_none(),
        bramble_witness,
        helly_witness,
        path_witness,
    })
}

/// `min_v max_i d(v, member_i)` and the smallest center attaining it.
pub fn interception_radius(
    g: &Graph,
    dist: &DistanceMatrix,
    family: &[Vec<Vertex>],
) -> Result<(Vertex, u32), FamilyError> {
    validate(g, family)?;
    Ok((0..g.n())
        .map(|v| (family.iter().map(|m| dist.to_set(v, m)).max().unwrap(), v))
        .min()
        .map(|(r, v)| (v, r))
        .unwrap())
}
