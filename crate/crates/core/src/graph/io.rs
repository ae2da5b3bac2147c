//! CSV exchange: edge lists `(node_a, node_b, weight)` and node-role tables
//! `(node, role)`.

use std::io::{Read, Write};

use super::{Graph, GraphBuilder, Node, Role};
use crate::{Error, Result};

/// Integral weights print without decimals, others with six.
pub fn fmt_weight(w: f64) -> String {
    if w.fract() == 0.0 && w.abs() < 1e15 {
        format!("{}", w as i64)
    } else {
        format!("{w:.6}")
    }
}

pub fn write_edge_list<W: Write>(g: &Graph, out: W, header: [&str; 3]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(header)?;
    for (u, v, w) in g.edges() {
        wtr.write_record([g.node(u).id.as_str(), g.node(v).id.as_str(), &fmt_weight(w)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads an edge list with a header row; every endpoint gets `role`.
/// Duplicate rows are merged by weight sum; a missing weight column means
/// unit weights.
pub fn read_edge_list<R: Read>(input: R, role: Role) -> Result<Graph> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut b = GraphBuilder::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let ctx = || format!("edge list row {}", i + 2);
        let a = row
            .get(0)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::parse(ctx(), "missing node_a"))?;
        let c = row
            .get(1)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::parse(ctx(), "missing node_b"))?;
        let w = match row.get(2).filter(|s| !s.is_empty()) {
            Some(s) => s.parse::<f64>().map_err(|e| Error::parse(ctx(), e))?,
            None => 1.0,
        };
        b.add_edge(Node::new(a, role), Node::new(c, role), w)
            .map_err(|e| Error::parse(ctx(), e))?;
    }
    Ok(b.build())
}

pub fn write_roles<W: Write>(g: &Graph, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["node", "role"])?;
    for n in g.nodes() {
        wtr.write_record([n.id.as_str(), n.role.as_str()])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_roles<R: Read>(input: R) -> Result<Vec<Node>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut nodes = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let id = row
            .get(0)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::parse(format!("role table row {}", i + 2), "missing node"))?;
        let role: Role = row.get(1).unwrap_or_default().parse()?;
        nodes.push(Node::new(id, role));
    }
    Ok(nodes)
}
