use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The twelve benchmark tasks, in table order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "VC")]
    VertexCount,
    #[serde(rename = "HEC")]
    HyperedgeCount,
    #[serde(rename = "Ne")]
    Neighbors,
    #[serde(rename = "DVC")]
    DegreeVertexCount,
    #[serde(rename = "OEC")]
    OrderEdgeCount,
    #[serde(rename = "ONe")]
    OrderNeighbors,
    #[serde(rename = "OSP")]
    ShortestPath,
    #[serde(rename = "OMF")]
    MaxFlow,
    #[serde(rename = "ISM")]
    Isomorphism,
    #[serde(rename = "3-CL")]
    ThreeColoring,
    #[serde(rename = "SHC")]
    StrictHypercycle,
    #[serde(rename = "HHM")]
    HamiltonianPath,
}

impl Task {
    pub const ALL: [Task; 12] = [
        Task::VertexCount,
        Task::HyperedgeCount,
        Task::Neighbors,
        Task::DegreeVertexCount,
        Task::OrderEdgeCount,
        Task::OrderNeighbors,
        Task::ShortestPath,
        Task::MaxFlow,
        Task::Isomorphism,
        Task::ThreeColoring,
        Task::StrictHypercycle,
        Task::HamiltonianPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::VertexCount => "VC",
            Task::HyperedgeCount => "HEC",
            Task::Neighbors => "Ne",
            Task::DegreeVertexCount => "DVC",
            Task::OrderEdgeCount => "OEC",
            Task::OrderNeighbors => "ONe",
            Task::ShortestPath => "OSP",
            Task::MaxFlow => "OMF",
            Task::Isomorphism => "ISM",
            Task::ThreeColoring => "3-CL",
            Task::StrictHypercycle => "SHC",
            Task::HamiltonianPath => "HHM",
        }
    }

    /// Lowercase identifier used in file names and on the command line.
    pub fn slug(self) -> &'static str {
        match self {
            Task::VertexCount => "vc",
            Task::HyperedgeCount => "hec",
            Task::Neighbors => "ne",
            Task::DegreeVertexCount => "dvc",
            Task::OrderEdgeCount => "oec",
            Task::OrderNeighbors => "one",
            Task::ShortestPath => "osp",
            Task::MaxFlow => "omf",
            Task::Isomorphism => "ism",
            Task::ThreeColoring => "3cl",
            Task::StrictHypercycle => "shc",
            Task::HamiltonianPath => "hhm",
        }
    }

    pub fn index(self) -> usize {
        Task::ALL.iter().position(|&t| t == self).expect("task listed in ALL")
    }

    /// Difficulty level 1 to 4.
    pub fn level(self) -> u8 {
        match self {
            Task::VertexCount | Task::HyperedgeCount | Task::Neighbors => 1,
            Task::DegreeVertexCount | Task::OrderEdgeCount | Task::OrderNeighbors => 2,
            Task::ShortestPath | Task::MaxFlow | Task::Isomorphism => 3,
            Task::ThreeColoring | Task::StrictHypercycle | Task::HamiltonianPath => 4,
        }
    }

    pub fn is_understanding(self) -> bool {
        self.level() <= 2
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        Task::ALL
            .into_iter()
            .find(|t| t.slug() == key || t.name().to_ascii_lowercase().replace('-', "") == key)
            .ok_or_else(|| Error::contract(format!("unknown task `{s}`")))
    }
}
