//! Edge-list ingestion and a versioned binary cache.

use super::Graph;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"DGRKGRPH";
const CACHE_VERSION: u32 = 1;
const FLAG_HAS_IDS: u32 = 1;

/// Reads a whitespace-separated edge list. Lines starting with `#` or `%` are
/// comments; tokens after the first two on a line are ignored. Edges are
/// undirected, self-loops and duplicates are dropped, and ids are remapped to
/// `0..n` in ascending order of the original id.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let mut next_id = || -> Result<u64> {
            let tok =
                tokens.next().ok_or_else(|| Error::Parse { line: idx + 1, message: "expected two node ids".into() })?;
            tok.parse::<u64>().map_err(|_| Error::Parse { line: idx + 1, message: format!("invalid node id {tok:?}") })
        };
        let u = next_id()?;
        let v = next_id()?;
        if u != v {
            raw.push((u, v));
        }
    }
    if raw.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut ids: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let edges = raw.iter().map(|(u, v)| (index[u], index[v]));
    Ok(Graph::from_edges(ids.len(), edges)?.with_original_ids(ids))
}

/// Writes one `u v` line per undirected edge using original ids.
pub fn write_edge_list<W: Write>(g: &Graph, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "# nodes {} edges {}", g.node_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{} {}", g.original_id(u), g.original_id(v))?;
    }
    w.flush()?;
    Ok(())
}

/// Binary cache layout (little endian): magic, version u32, flags u32,
/// node count u64, arc count u64, offsets (n + 1) x u64, targets x u32,
/// then original ids n x u64 when flag bit 0 is set.
pub fn write_binary<W: Write>(g: &Graph, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    let (offsets, targets) = g.csr();
    let flags = if g.original_ids().is_some() { FLAG_HAS_IDS } else { 0 };
    w.write_all(MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&flags.to_le_bytes())?;
    w.write_all(&(g.node_count() as u64).to_le_bytes())?;
    w.write_all(&(targets.len() as u64).to_le_bytes())?;
    for &o in offsets {
        w.write_all(&(o as u64).to_le_bytes())?;
    }
    for &t in targets {
        w.write_all(&(t as u32).to_le_bytes())?;
    }
    if let Some(ids) = g.original_ids() {
        for &id in ids {
            w.write_all(&id.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_binary<R: Read>(reader: R) -> Result<Graph> {
    let mut r = BufReader::new(reader);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = read_u32(&mut r)?;
    if version != CACHE_VERSION {
        return Err(Error::Format(format!("version {version}, expected {CACHE_VERSION}")));
    }
    let flags = read_u32(&mut r)?;
    let n = read_u64(&mut r)? as usize;
    let arcs = read_u64(&mut r)? as usize;
    if n == 0 {
        return Err(Error::Format("zero nodes".into()));
    }
    let offsets = (0..=n).map(|_| read_u64(&mut r).map(|x| x as usize)).collect::<Result<Vec<_>>>()?;
    if offsets[0] != 0 || offsets[n] != arcs || offsets.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Format("inconsistent offsets".into()));
    }
    let targets = (0..arcs).map(|_| read_u32(&mut r).map(|x| x as usize)).collect::<Result<Vec<_>>>()?;
    if targets.iter().any(|&t| t >= n) {
        return Err(Error::Format("neighbor id out of range".into()));
    }
    let ids = if flags & FLAG_HAS_IDS != 0 {
        Some((0..n).map(|_| read_u64(&mut r)).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    Ok(Graph::from_csr(offsets, targets, ids))
}

/// Opens `path` as a binary cache when it starts with the cache magic,
/// otherwise as an edge list.
pub fn read_graph_file(path: &Path) -> Result<Graph> {
    let mut file = File::open(path)?;
    let mut head = [0u8; 8];
    let is_cache = file.read(&mut head)? == 8 && &head == MAGIC;
    let file = File::open(path)?;
    if is_cache {
        load_binary(file)
    } else {
        load_edge_list(BufReader::new(file))
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> Result<Graph> {
        load_edge_list(s.as_bytes())
    }

    #[test]
    fn path_of_three() {
        let g = load("0 1\n1 2\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        assert_eq!(g.degrees().collect::<Vec<_>>(), vec![1, 2, 1]);
    }

    #[test]
    fn duplicates_and_loops_dropped() {
        let g = load("0 1\n1 0\n0 0\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
    }

    #[test]
    fn comments_and_sparse_ids() {
        let g = load("# header\n% other\n\n100 7\t3\n7 3 1.5\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.original_ids().unwrap(), &[3, 7, 100]);
        assert_eq!(g.original_id(2), 100);
        assert!(g.has_edge(1, 2) && g.has_edge(0, 1) && !g.has_edge(0, 2));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match load("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load("0 1\n5\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn empty_input_is_error() {
        assert!(matches!(load("# nothing\n"), Err(Error::EmptyGraph)));
        assert!(matches!(load("4 4\n"), Err(Error::EmptyGraph)));
    }

    #[test]
    fn binary_rejects_wrong_magic_and_version() {
        assert!(matches!(load_binary(&b"NOTAGRPH\x01\0\0\0"[..]), Err(Error::Format(_))));
        let g = load("0 1\n").unwrap();
        let mut buf = Vec::new();
        write_binary(&g, &mut buf).unwrap();
        buf[8] = 9;
        assert!(matches!(load_binary(&buf[..]), Err(Error::Format(_))));
    }
}
