//! Plain-text model files.
//!
//! A file is a header line followed by labeled blocks:
//!
//! ```text
//! dims: 13 32 8
//! [encoder.0.weight] 32 13 tanh
//! <32 lines of 13 values>
//! [encoder.0.bias] 1 32
//! <1 line of 32 values>
//! ```
//!
//! Values are written with 17 significant digits so they parse back
//! bit-exactly.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::numfmt::fmt_g;
use crate::trainkit::{Activation, Layer, TinyNet};

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub tag: Option<String>,
    pub data: Vec<f64>,
}

pub fn write_blocks(header: &str, blocks: &[Block]) -> String {
    let mut out = String::new();
    writeln!(out, "{header}").unwrap();
    for b in blocks {
        write!(out, "[{}] {} {}", b.name, b.rows, b.cols).unwrap();
        if let Some(tag) = &b.tag {
            write!(out, " {tag}").unwrap();
        }
        out.push('\n');
        for row in b.data.chunks(b.cols.max(1)) {
            let line: Vec<String> = row.iter().map(|v| fmt_g(*v, 17)).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
    }
    out
}

pub fn parse_blocks(text: &str) -> Result<(String, Vec<Block>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("model file is empty".into()))?
        .to_string();
    let mut blocks = Vec::new();
    while let Some(line) = lines.next() {
        let line = line.trim();
        let rest = line
            .strip_prefix('[')
            .ok_or_else(|| Error::Format(format!("expected block header, got `{line}`")))?;
        let (name, shape) = rest
            .split_once(']')
            .ok_or_else(|| Error::Format(format!("unterminated block name in `{line}`")))?;
        let fields: Vec<&str> = shape.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Format(format!("bad block shape in `{line}`")));
        }
        let parse_dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Format(format!("bad dimension `{s}` in `{line}`")))
        };
        let (rows, cols) = (parse_dim(fields[0])?, parse_dim(fields[1])?);
        let tag = fields.get(2).map(|s| s.to_string());
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let row = lines
                .next()
                .ok_or_else(|| Error::Format(format!("block {name} truncated at row {r}")))?;
            let before = data.len();
            for v in row.split_whitespace() {
                data.push(
                    v.parse::<f64>()
                        .map_err(|_| Error::Format(format!("block {name}: bad number `{v}`")))?,
                );
            }
            if data.len() - before != cols {
                return Err(Error::Format(format!("block {name} row {r} has wrong width")));
            }
        }
        blocks.push(Block {
            name: name.to_string(),
            rows,
            cols,
            tag,
            data,
        });
    }
    Ok((header, blocks))
}

pub fn net_to_blocks(prefix: &str, net: &TinyNet) -> Vec<Block> {
    net.layers()
        .iter()
        .enumerate()
        .flat_map(|(i, l)| {
            [
                Block {
                    name: format!("{prefix}.{i}.weight"),
                    rows: l.out_dim,
                    cols: l.in_dim,
                    tag: Some(l.activation.tag().to_string()),
                    data: l.weight.clone(),
                },
                Block {
                    name: format!("{prefix}.{i}.bias"),
                    rows: 1,
                    cols: l.out_dim,
                    tag: None,
                    data: l.bias.clone(),
                },
            ]
        })
        .collect()
}

pub fn net_from_blocks(prefix: &str, blocks: &[Block]) -> Result<TinyNet> {
    let find = |name: String| blocks.iter().find(|b| b.name == name);
    let mut layers = Vec::new();
    for i in 0.. {
        let Some(w) = find(format!("{prefix}.{i}.weight")) else {
            break;
        };
        let b = find(format!("{prefix}.{i}.bias"))
            .ok_or_else(|| Error::Format(format!("missing {prefix}.{i}.bias")))?;
        let activation = w
            .tag
            .as_deref()
            .and_then(Activation::from_tag)
            .ok_or_else(|| Error::Format(format!("{prefix}.{i}.weight has no activation tag")))?;
        if b.cols != w.rows || b.rows != 1 {
            return Err(Error::Format(format!("{prefix}.{i}.bias shape does not match weight")));
        }
        layers.push(Layer {
            weight: w.data.clone(),
            bias: b.data.clone(),
            activation,
            in_dim: w.cols,
            out_dim: w.rows,
        });
    }
    if layers.is_empty() {
        return Err(Error::Format(format!("no layers for `{prefix}`")));
    }
    TinyNet::new(layers)
}

pub fn find_block<'a>(blocks: &'a [Block], name: &str) -> Result<&'a Block> {
    blocks
        .iter()
        .find(|b| b.name == name)
        .ok_or_else(|| Error::Format(format!("missing block `{name}`")))
}

/// Parse `dims: a b c` into integers.
pub fn parse_dims_header(header: &str) -> Result<Vec<usize>> {
    let rest = header
        .strip_prefix("dims:")
        .ok_or_else(|| Error::Format(format!("expected `dims:` header, got `{header}`")))?;
    rest.split_whitespace()
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Format(format!("bad dimension `{s}` in header")))
        })
        .collect()
}
