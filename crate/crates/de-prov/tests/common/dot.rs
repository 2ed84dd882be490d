//! A minimal DOT parser, used only to check the renderer's output: graph
//! structure, cluster nesting and node/edge statements. Covers the subset of
//! the DOT grammar the renderer emits plus ordinary hand-written layouts.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotGraph {
    pub name: Option<String>,
    pub root: DotScope,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DotScope {
    pub name: Option<String>,
    pub nodes: Vec<String>,
    pub edges: Vec<DotEdge>,
    pub subgraphs: Vec<DotScope>,
    pub attrs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotEdge {
    pub from: String,
    pub to: String,
    pub attrs: BTreeMap<String, String>,
}

impl DotGraph {
    /// Clusters directly under the graph root.
    pub fn top_level_clusters(&self) -> Vec<&DotScope> {
        self.root
            .subgraphs
            .iter()
            .filter(|s| s.name.as_deref().is_some_and(|n| n.starts_with("cluster")))
            .collect()
    }

    pub fn find_cluster(&self, name: &str) -> Option<&DotScope> {
        fn walk<'a>(scope: &'a DotScope, name: &str) -> Option<&'a DotScope> {
            for sub in &scope.subgraphs {
                if sub.name.as_deref() == Some(name) {
                    return Some(sub);
                }
                if let Some(found) = walk(sub, name) {
                    return Some(found);
                }
            }
            None
        }
        walk(&self.root, name)
    }

    pub fn max_cluster_depth(&self) -> usize {
        fn depth(scope: &DotScope) -> usize {
            scope
                .subgraphs
                .iter()
                .map(|s| 1 + depth(s))
                .max()
                .unwrap_or(0)
        }
        depth(&self.root)
    }

    pub fn all_edges(&self) -> Vec<&DotEdge> {
        fn walk<'a>(scope: &'a DotScope, out: &mut Vec<&'a DotEdge>) {
            out.extend(scope.edges.iter());
            for sub in &scope.subgraphs {
                walk(sub, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    pub fn all_nodes(&self) -> Vec<&String> {
        fn walk<'a>(scope: &'a DotScope, out: &mut Vec<&'a String>) {
            out.extend(scope.nodes.iter());
            for sub in &scope.subgraphs {
                walk(sub, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Equals,
    Semicolon,
    Comma,
    Arrow,
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut tokens = Vec::new();
    while pos < bytes.len() {
        let b = bytes[pos];
        match b {
            b if b.is_ascii_whitespace() => pos += 1,
            b'{' => {
                tokens.push(Token::LBrace);
                pos += 1;
            }
            b'}' => {
                tokens.push(Token::RBrace);
                pos += 1;
            }
            b'[' => {
                tokens.push(Token::LBracket);
                pos += 1;
            }
            b']' => {
                tokens.push(Token::RBracket);
                pos += 1;
            }
            b'=' => {
                tokens.push(Token::Equals);
                pos += 1;
            }
            b';' => {
                tokens.push(Token::Semicolon);
                pos += 1;
            }
            b',' => {
                tokens.push(Token::Comma);
                pos += 1;
            }
            b'-' if bytes.get(pos + 1) == Some(&b'>') => {
                tokens.push(Token::Arrow);
                pos += 2;
            }
            b'"' => {
                pos += 1;
                let mut out = String::new();
                loop {
                    match bytes.get(pos) {
                        None => return Err("unterminated string".to_owned()),
                        Some(b'"') => {
                            pos += 1;
                            break;
                        }
                        Some(b'\\') => {
                            let escaped = bytes
                                .get(pos + 1)
                                .ok_or_else(|| "dangling escape".to_owned())?;
                            match escaped {
                                b'n' => out.push('\n'),
                                other => out.push(*other as char),
                            }
                            pos += 2;
                        }
                        Some(_) => {
                            let start = pos;
                            while pos < bytes.len() && bytes[pos] != b'"' && bytes[pos] != b'\\' {
                                pos += 1;
                            }
                            out.push_str(
                                std::str::from_utf8(&bytes[start..pos])
                                    .map_err(|e| e.to_string())?,
                            );
                        }
                    }
                }
                tokens.push(Token::Ident(out));
            }
            b if b.is_ascii_alphanumeric() || b == b'_' || b == b'.' => {
                let start = pos;
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric()
                        || bytes[pos] == b'_'
                        || bytes[pos] == b'.')
                {
                    pos += 1;
                }
                tokens.push(Token::Ident(
                    std::str::from_utf8(&bytes[start..pos])
                        .map_err(|e| e.to_string())?
                        .to_owned(),
                ));
            }
            other => return Err(format!("unexpected byte `{}`", other as char)),
        }
    }
    Ok(tokens)
}

struct DotParser {
    tokens: Vec<Token>,
    pos: usize,
}

impl DotParser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, token: Token) -> Result<(), String> {
        match self.bump() {
            Some(t) if t == token => Ok(()),
            other => Err(format!("expected {token:?}, found {other:?}")),
        }
    }

    fn ident(&mut self) -> Result<String, String> {
        match self.bump() {
            Some(Token::Ident(s)) => Ok(s),
            other => Err(format!("expected identifier, found {other:?}")),
        }
    }

    fn attr_list(&mut self) -> Result<BTreeMap<String, String>, String> {
        self.expect(Token::LBracket)?;
        let mut attrs = BTreeMap::new();
        loop {
            match self.peek() {
                Some(Token::RBracket) => {
                    self.bump();
                    return Ok(attrs);
                }
                Some(Token::Comma) | Some(Token::Semicolon) => {
                    self.bump();
                }
                Some(Token::Ident(_)) => {
                    let key = self.ident()?;
                    self.expect(Token::Equals)?;
                    let value = self.ident()?;
                    attrs.insert(key, value);
                }
                other => return Err(format!("unexpected token in attr list: {other:?}")),
            }
        }
    }

    fn scope_body(&mut self, scope: &mut DotScope) -> Result<(), String> {
        loop {
            match self.peek() {
                Some(Token::RBrace) => {
                    self.bump();
                    return Ok(());
                }
                Some(Token::Semicolon) => {
                    self.bump();
                }
                Some(Token::Ident(word)) if word == "subgraph" => {
                    self.bump();
                    let mut sub = DotScope::default();
                    if let Some(Token::Ident(_)) = self.peek() {
                        sub.name = Some(self.ident()?);
                    }
                    self.expect(Token::LBrace)?;
                    self.scope_body(&mut sub)?;
                    scope.subgraphs.push(sub);
                }
                Some(Token::Ident(word)) if word == "node" || word == "edge" || word == "graph" => {
                    self.bump();
                    let _ = self.attr_list()?;
                }
                Some(Token::Ident(_)) => {
                    let first = self.ident()?;
                    match self.peek() {
                        Some(Token::Equals) => {
                            self.bump();
                            let value = self.ident()?;
                            scope.attrs.insert(first, value);
                        }
                        Some(Token::Arrow) => {
                            self.bump();
                            let to = self.ident()?;
                            let attrs = if let Some(Token::LBracket) = self.peek() {
                                self.attr_list()?
                            } else {
                                BTreeMap::new()
                            };
                            scope.edges.push(DotEdge {
                                from: first,
                                to,
                                attrs,
                            });
                        }
                        Some(Token::LBracket) => {
                            let _ = self.attr_list()?;
                            scope.nodes.push(first);
                        }
                        _ => scope.nodes.push(first),
                    }
                }
                None => return Err("unexpected end of input inside a scope".to_owned()),
                other => return Err(format!("unexpected token {other:?}")),
            }
        }
    }
}

/// Parses DOT text into its structural skeleton.
pub fn parse_dot(text: &str) -> Result<DotGraph, String> {
    let tokens = tokenize(text)?;
    let mut parser = DotParser { tokens, pos: 0 };
    let keyword = parser.ident()?;
    if keyword != "digraph" && keyword != "graph" {
        return Err(format!("expected digraph/graph, found {keyword}"));
    }
    let mut name = None;
    if let Some(Token::Ident(_)) = parser.peek() {
        name = Some(parser.ident()?);
    }
    parser.expect(Token::LBrace)?;
    let mut root = DotScope::default();
    parser.scope_body(&mut root)?;
    if parser.peek().is_some() {
        return Err("trailing tokens after the graph".to_owned());
    }
    Ok(DotGraph { name, root })
}
