//! Newick reader.
//!
//! Supports nested parentheses, unquoted and single-quoted labels, branch
//! lengths (parsed and discarded) and bracketed comments. Unlabeled internal
//! vertices with a single child are spliced out, so `(A);` is a one-leaf tree.

use std::io::Read;

use super::tree::{Node, PhyloTree};
use crate::error::{Error, Result};

/// Reads a Newick tree from a stream.
pub fn parse_newick<R: Read>(mut source: R) -> Result<PhyloTree> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    parse_newick_str(&text)
}

pub fn parse_newick_str(text: &str) -> Result<PhyloTree> {
    let (nodes, root) = Parser::new(text.as_bytes()).parse()?;
    let (nodes, root) = splice_unary(nodes, root);
    PhyloTree::from_arena(nodes, root)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nodes: Vec<Node>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a [u8]) -> Self {
        Self {
            src,
            pos: 0,
            nodes: Vec::new(),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Newick {
            offset: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_blank(&mut self) -> Result<()> {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b'[' {
                match self.src[self.pos..].iter().position(|&b| b == b']') {
                    Some(end) => self.pos += end + 1,
                    None => return self.err("unterminated comment"),
                }
            } else {
                break;
            }
        }
        Ok(())
    }

    fn add_node(&mut self, parent: Option<usize>, label: Option<String>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            parent,
            children: Vec::new(),
            label,
        });
        if let Some(p) = parent {
            self.nodes[p].children.push(id);
        }
        id
    }

    fn label(&mut self) -> Result<Option<String>> {
        self.skip_blank()?;
        match self.peek() {
            Some(b'\'') => {
                self.pos += 1;
                let mut out = Vec::new();
                loop {
                    match self.peek() {
                        None => return self.err("unterminated quoted label"),
                        Some(b'\'') if self.src.get(self.pos + 1) == Some(&b'\'') => {
                            out.push(b'\'');
                            self.pos += 2;
                        }
                        Some(b'\'') => {
                            self.pos += 1;
                            break;
                        }
                        Some(c) => {
                            out.push(c);
                            self.pos += 1;
                        }
                    }
                }
                match String::from_utf8(out) {
                    Ok(s) if !s.is_empty() => Ok(Some(s)),
                    Ok(_) => Ok(None),
                    Err(_) => self.err("label is not valid UTF-8"),
                }
            }
            _ => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_ascii_whitespace() || b"(),:;[]'".contains(&c) {
                        break;
                    }
                    self.pos += 1;
                }
                if start == self.pos {
                    return Ok(None);
                }
                match std::str::from_utf8(&self.src[start..self.pos]) {
                    Ok(s) => Ok(Some(s.to_owned())),
                    Err(_) => self.err("label is not valid UTF-8"),
                }
            }
        }
    }

    fn branch_length(&mut self) -> Result<()> {
        self.skip_blank()?;
        if self.peek() != Some(b':') {
            return Ok(());
        }
        self.pos += 1;
        self.skip_blank()?;
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || b".eE+-".contains(&c) {
                self.pos += 1;
            } else {
                break;
            }
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        if digits.parse::<f64>().is_err() {
            return self.err("malformed branch length");
        }
        Ok(())
    }

    fn parse(mut self) -> Result<(Vec<Node>, usize)> {
        let mut open: Vec<usize> = Vec::new();
        let mut root = None;
        // A subtree must start at the current position (after `(`, `,` or at
        // the very beginning).
        let mut expect_subtree = true;

        loop {
            self.skip_blank()?;
            let Some(c) = self.peek() else {
                return if self.nodes.is_empty() {
                    Err(Error::EmptyTree)
                } else {
                    self.err("missing terminating ';'")
                };
            };
            match c {
                b'(' if expect_subtree => {
                    if open.is_empty() && root.is_some() {
                        return self.err("more than one top-level subtree");
                    }
                    let id = self.add_node(open.last().copied(), None);
                    root.get_or_insert(id);
                    open.push(id);
                    self.pos += 1;
                }
                b',' if !expect_subtree => {
                    if open.is_empty() {
                        return self.err("',' outside parentheses");
                    }
                    self.pos += 1;
                    expect_subtree = true;
                }
                b')' if !expect_subtree => {
                    let Some(id) = open.pop() else {
                        return self.err("unbalanced ')'");
                    };
                    self.pos += 1;
                    self.nodes[id].label = self.label()?;
                    self.branch_length()?;
                }
                b';' if self.nodes.is_empty() => return Err(Error::EmptyTree),
                b';' if !expect_subtree => {
                    if !open.is_empty() {
                        return self.err("unbalanced '('");
                    }
                    self.pos += 1;
                    break;
                }
                b'(' | b')' | b',' | b';' | b':' => {
                    return self.err(format!("unexpected '{}'", c as char));
                }
                _ if expect_subtree => {
                    if open.is_empty() && root.is_some() {
                        return self.err("more than one top-level subtree");
                    }
                    let Some(label) = self.label()? else {
                        return self.err("leaf without a label");
                    };
                    let id = self.add_node(open.last().copied(), Some(label));
                    root.get_or_insert(id);
                    self.branch_length()?;
                    expect_subtree = false;
                }
                _ => return self.err(format!("unexpected '{}'", c as char)),
            }
            if c == b'(' {
                expect_subtree = true;
            } else if c == b')' {
                expect_subtree = false;
            }
        }

        self.skip_blank()?;
        if self.pos != self.src.len() {
            return self.err("trailing data after ';'");
        }
        match root {
            Some(r) => Ok((self.nodes, r)),
            None => Err(Error::EmptyTree),
        }
    }
}

/// Rebuilds the arena without unlabeled single-child internal vertices.
fn splice_unary(nodes: Vec<Node>, root: usize) -> (Vec<Node>, usize) {
    let resolve = |mut v: usize| {
        while nodes[v].children.len() == 1 && nodes[v].label.is_none() {
            v = nodes[v].children[0];
        }
        v
    };
    let mut out: Vec<Node> = Vec::with_capacity(nodes.len());
    let new_root = resolve(root);
    out.push(Node {
        parent: None,
        children: Vec::new(),
        label: nodes[new_root].label.clone(),
    });
    // (old id, new id)
    let mut stack = vec![(new_root, 0usize)];
    while let Some((old, new)) = stack.pop() {
        for &c in &nodes[old].children {
            let c = resolve(c);
            let id = out.len();
            out.push(Node {
                parent: Some(new),
                children: Vec::new(),
                label: nodes[c].label.clone(),
            });
            out[new].children.push(id);
            stack.push((c, id));
        }
    }
    (out, 0)
}
