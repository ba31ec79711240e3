//! Minimal element tree over quick-xml events, plus the canonical writer.

use quick_xml::events::Event;
use quick_xml::Reader;

use super::XmlError;

#[derive(Debug)]
pub(crate) struct Node {
    pub name: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<Node>,
    pub text: String,
}

impl Node {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == name).map(|(_, v)| v.as_str())
    }

    pub fn require_attr(&self, name: &str, path: &str) -> Result<&str, XmlError> {
        self.attr(name).ok_or_else(|| XmlError::schema(path, format!("missing attribute `{name}`")))
    }

    /// Fails if the node has non-whitespace character data.
    pub fn no_text(&self, path: &str) -> Result<(), XmlError> {
        if self.text.trim().is_empty() {
            Ok(())
        } else {
            Err(XmlError::schema(path, "unexpected text content"))
        }
    }

    /// Fails on child elements; used for text-only nodes.
    pub fn no_children(&self, path: &str) -> Result<(), XmlError> {
        match self.children.first() {
            None => Ok(()),
            Some(c) => Err(XmlError::schema(path, format!("unexpected child <{}>", c.name))),
        }
    }
}

fn line_of(input: &[u8], pos: usize) -> usize {
    1 + input[..pos.min(input.len())].iter().filter(|b| **b == b'\n').count()
}

/// Parses a whole document and returns its root element.
pub(crate) fn parse_document(input: &[u8]) -> Result<Node, XmlError> {
    let mut reader = Reader::from_reader(input);
    let mut stack: Vec<Node> = Vec::new();
    let mut root: Option<Node> = None;
    let mut buf = Vec::new();
    loop {
        let pos = reader.buffer_position() as usize;
        let event = reader.read_event_into(&mut buf).map_err(|e| XmlError::Parse {
            line: line_of(input, reader.error_position() as usize),
            reason: e.to_string(),
        })?;
        let parse_err = |reason: String| XmlError::Parse { line: line_of(input, pos), reason };
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let name = String::from_utf8(e.name().as_ref().to_vec())
                    .map_err(|_| parse_err("element name is not UTF-8".into()))?;
                let mut attrs = Vec::new();
                for a in e.attributes() {
                    let a = a.map_err(|err| parse_err(err.to_string()))?;
                    let key = String::from_utf8(a.key.as_ref().to_vec())
                        .map_err(|_| parse_err("attribute name is not UTF-8".into()))?;
                    let value = a.unescape_value().map_err(|err| parse_err(err.to_string()))?;
                    attrs.push((key, normalize_newlines(&value)));
                }
                let node = Node { name, attrs, children: Vec::new(), text: String::new() };
                if matches!(event, Event::Start(_)) {
                    stack.push(node);
                } else {
                    attach(&mut stack, &mut root, node).map_err(parse_err)?;
                }
            }
            Event::End(_) => {
                let node = stack.pop().ok_or_else(|| parse_err("unbalanced end tag".into()))?;
                attach(&mut stack, &mut root, node).map_err(parse_err)?;
            }
            Event::Text(ref t) => {
                let text = t.unescape().map_err(|err| parse_err(err.to_string()))?;
                match stack.last_mut() {
                    Some(node) => node.text.push_str(&normalize_newlines(&text)),
                    None if text.trim().is_empty() => {}
                    None => return Err(parse_err("text outside the root element".into())),
                }
            }
            Event::CData(ref t) => {
                let text = String::from_utf8(t.to_vec()).map_err(|_| parse_err("CDATA is not UTF-8".into()))?;
                match stack.last_mut() {
                    Some(node) => node.text.push_str(&normalize_newlines(&text)),
                    None => return Err(parse_err("CDATA outside the root element".into())),
                }
            }
            Event::Eof => break,
            Event::Comment(_) | Event::Decl(_) | Event::PI(_) | Event::DocType(_) => {}
        }
        buf.clear();
    }
    if !stack.is_empty() {
        return Err(XmlError::Parse { line: line_of(input, input.len()), reason: "unexpected end of document".into() });
    }
    root.ok_or_else(|| XmlError::Parse { line: 1, reason: "document has no root element".into() })
}

fn attach(stack: &mut [Node], root: &mut Option<Node>, node: Node) -> Result<(), String> {
    match stack.last_mut() {
        Some(parent) => {
            parent.children.push(node);
            Ok(())
        }
        None if root.is_none() => {
            *root = Some(node);
            Ok(())
        }
        None => Err("more than one root element".into()),
    }
}

fn normalize_newlines(s: &str) -> String {
    if s.contains('\r') {
        s.replace("\r\n", "\n").replace('\r', "\n")
    } else {
        s.to_string()
    }
}

pub(crate) fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

/// Writes canonical XML: two-space indentation, LF line ends, attributes in
/// the order given by the caller.
pub(crate) struct XmlWriter {
    out: String,
    depth: usize,
}

impl XmlWriter {
    pub fn new() -> Self {
        Self { out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"), depth: 0 }
    }

    fn start_tag(&mut self, name: &str, attrs: &[(&str, &str)]) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
        self.out.push('<');
        self.out.push_str(name);
        for (k, v) in attrs {
            self.out.push(' ');
            self.out.push_str(k);
            self.out.push_str("=\"");
            self.out.push_str(&escape_attr(v));
            self.out.push('"');
        }
    }

    pub fn open(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.start_tag(name, attrs);
        self.out.push_str(">\n");
        self.depth += 1;
    }

    pub fn close(&mut self, name: &str) {
        self.depth -= 1;
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
        self.out.push_str("</");
        self.out.push_str(name);
        self.out.push_str(">\n");
    }

    pub fn empty(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.start_tag(name, attrs);
        self.out.push_str("/>\n");
    }

    /// `<name attrs>text</name>`, or an empty element when `text` is empty.
    pub fn text(&mut self, name: &str, attrs: &[(&str, &str)], text: &str) {
        if text.is_empty() {
            return self.empty(name, attrs);
        }
        self.start_tag(name, attrs);
        self.out.push('>');
        self.out.push_str(&escape_text(text));
        self.out.push_str("</");
        self.out.push_str(name);
        self.out.push_str(">\n");
    }

    pub fn finish(self) -> Vec<u8> {
        self.out.into_bytes()
    }
}
