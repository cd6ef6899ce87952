//! JSON documents for instances and mappings.
//!
//! Instance schema:
//! `{"virtual": {"nodes": n, "edges": [[a, b], ...]},
//!   "substrate": {"nodes": [{"capacity": c, "cost": w}, ...],
//!                 "edges": [{"u": a, "v": b, "capacity": c, "cost": w}, ...]},
//!   "variant": "existence" | "cost", "budget": g?, "provenance": {...}?}`
//!
//! Mapping schema:
//! `{"placement": [...], "routing": [{"edge": [a, b], "path": [...]}, ...], "cost": w}`
//! where a one-node path denotes co-located endpoints.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Result, UnivneError};
use crate::netgraph::{Mapping, NodeId, SubstrateNetwork, SubstratePath, UndirectedGraph, Variant, VirtualNetwork};
use crate::reductions::GeneratedInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub virtual_network: VirtualNetwork,
    pub substrate: SubstrateNetwork,
    pub variant: Variant,
    pub budget: Option<u64>,
    pub provenance: Option<Value>,
}

impl From<GeneratedInstance> for Instance {
    fn from(g: GeneratedInstance) -> Self {
        Instance {
            virtual_network: g.virtual_network,
            substrate: g.substrate,
            variant: g.variant,
            budget: g.budget,
            provenance: Some(serde_json::json!({ "construction": g.construction })),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VirtualDoc {
    nodes: usize,
    edges: Vec<[NodeId; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    capacity: u64,
    cost: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    u: NodeId,
    v: NodeId,
    capacity: u64,
    cost: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubstrateDoc {
    nodes: Vec<NodeDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum VariantDoc {
    Existence,
    Cost,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    #[serde(rename = "virtual")]
    virtual_network: VirtualDoc,
    substrate: SubstrateDoc,
    variant: VariantDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RouteDoc {
    edge: [NodeId; 2],
    path: Vec<NodeId>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingDoc {
    placement: Vec<NodeId>,
    routing: Vec<RouteDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cost: Option<u64>,
}

fn parse_error(e: serde_json::Error) -> UnivneError {
    UnivneError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

fn pretty<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

fn check_ends(what: &str, index: usize, a: NodeId, b: NodeId, nodes: usize) -> Result<()> {
    for x in [a, b] {
        if x >= nodes {
            return Err(UnivneError::InvalidGraph(format!("{what} edge {index} ({a}, {b}) references node {x}, but there are only {nodes} nodes")));
        }
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(parse_error)?;
    let vn = doc.virtual_network.nodes;
    for (i, &[a, b]) in doc.virtual_network.edges.iter().enumerate() {
        check_ends("virtual", i, a, b, vn)?;
    }
    let virtual_network = VirtualNetwork::new(UndirectedGraph::new(vn, doc.virtual_network.edges.iter().map(|&[a, b]| (a, b)))?);
    let sn = doc.substrate.nodes.len();
    for (i, e) in doc.substrate.edges.iter().enumerate() {
        check_ends("substrate", i, e.u, e.v, sn)?;
        if e.capacity == 0 {
            return Err(UnivneError::InvalidNetwork(format!("substrate edge {i} ({}, {}) must have positive capacity", e.u, e.v)));
        }
    }
    let graph = UndirectedGraph::new(sn, doc.substrate.edges.iter().map(|e| (e.u, e.v)))?;
    let substrate = SubstrateNetwork::new(
        graph,
        doc.substrate.nodes.iter().map(|x| x.capacity).collect(),
        doc.substrate.nodes.iter().map(|x| x.cost).collect(),
        doc.substrate.edges.iter().map(|e| e.capacity).collect(),
        doc.substrate.edges.iter().map(|e| e.cost).collect(),
    )?;
    let variant = match doc.variant {
        VariantDoc::Existence => Variant::Existence,
        VariantDoc::Cost => Variant::Cost,
    };
    Ok(Instance { virtual_network, substrate, variant, budget: doc.budget, provenance: doc.provenance })
}

pub fn serialize_instance(inst: &Instance) -> String {
    let vg = inst.virtual_network.graph();
    let s = &inst.substrate;
    let doc = InstanceDoc {
        virtual_network: VirtualDoc { nodes: vg.node_count(), edges: vg.edges().iter().map(|&(a, b)| [a, b]).collect() },
        substrate: SubstrateDoc {
            nodes: (0..s.node_count()).map(|u| NodeDoc { capacity: s.node_capacity(u), cost: s.node_cost(u) }).collect(),
            edges: s
                .graph()
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(u, v))| EdgeDoc { u, v, capacity: s.edge_capacity(e), cost: s.edge_cost(e) })
                .collect(),
        },
        variant: match inst.variant {
            Variant::Existence => VariantDoc::Existence,
            Variant::Cost => VariantDoc::Cost,
        },
        budget: inst.budget,
        provenance: inst.provenance.clone(),
    };
    pretty(&doc)
}

/// Parses a mapping document against `v`; routes are matched to virtual
/// edges by their endpoints in either order. Returns the stated cost, if any.
pub fn parse_mapping(text: &str, v: &VirtualNetwork) -> Result<(Mapping, Option<u64>)> {
    let doc: MappingDoc = serde_json::from_str(text).map_err(parse_error)?;
    let g = v.graph();
    if doc.placement.len() != v.node_count() {
        return Err(UnivneError::MalformedMapping(format!("placement has {} entries for {} virtual nodes", doc.placement.len(), v.node_count())));
    }
    let mut routing: Vec<Option<SubstratePath>> = vec![None; g.edge_count()];
    for r in doc.routing {
        let [a, b] = r.edge;
        let e = (a < v.node_count() && b < v.node_count())
            .then(|| g.edge_between(a, b))
            .flatten()
            .ok_or_else(|| UnivneError::MalformedMapping(format!("({a}, {b}) is not a virtual edge")))?;
        let path = SubstratePath::from_nodes(r.path).map_err(|err| UnivneError::MalformedMapping(format!("route of ({a}, {b}): {err}")))?;
        if routing[e].replace(path).is_some() {
            return Err(UnivneError::MalformedMapping(format!("virtual edge ({a}, {b}) is routed twice")));
        }
    }
    let routing = routing
        .into_iter()
        .enumerate()
        .map(|(e, p)| {
            p.ok_or_else(|| {
                let (a, b) = g.edge(e);
                UnivneError::MalformedMapping(format!("virtual edge ({a}, {b}) has no route"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((Mapping { placement: doc.placement, routing }, doc.cost))
}

pub fn serialize_mapping(v: &VirtualNetwork, m: &Mapping, cost: u64) -> String {
    let doc = MappingDoc {
        placement: m.placement.clone(),
        routing: v
            .graph()
            .edges()
            .iter()
            .zip(&m.routing)
            .map(|(&(a, b), p)| RouteDoc { edge: [a, b], path: p.nodes().to_vec() })
            .collect(),
        cost: Some(cost),
    };
    pretty(&doc)
}

/// Mapping document as a JSON value, for embedding in larger reports.
pub fn mapping_value(v: &VirtualNetwork, m: &Mapping, cost: u64) -> Value {
    serde_json::from_str(&serialize_mapping(v, m, cost)).expect("mapping documents are valid JSON")
}
