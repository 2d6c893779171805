//! Lexer, parser and pretty-printer for the line-oriented document format.
//!
//! ```text
//! colors C
//!   color x
//! end
//!
//! multicategory Mon over C cap 3
//!   generator m : x x -> x
//!   generator e : -> x
//!   relation m(m(1,2),3) = m(1,m(2,3)) : x
//!   saturate 3 4
//! end
//! ```
//!
//! A token is a double-quoted string or a run of characters up to the next
//! whitespace outside brackets, so `m(1, 2)` and `[1 0]` are single tokens.
//! `#` starts a comment.

use crate::ast::*;
use crate::diag::{code, Diagnostic};
use std::fmt::Write;

#[derive(Debug, Clone)]
struct Token {
    text: String,
    span: Span,
    quoted: bool,
}

impl Token {
    fn is(&self, punct: &str) -> bool {
        !self.quoted && self.text == punct
    }
}

fn lex_line(line: &str, lineno: usize, diags: &mut Vec<Diagnostic>) -> Vec<Token> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| Span { line: lineno, col: i + 1 };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_control() {
            diags.push(Diagnostic::at(code::CONTROL_CHAR, format!("control character U+{:04X}", c as u32), at(i)));
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let start = i;
        if c == '"' {
            let mut text = String::new();
            i += 1;
            let mut closed = false;
            while i < chars.len() {
                match chars[i] {
                    '"' => {
                        closed = true;
                        i += 1;
                        break;
                    }
                    '\\' if i + 1 < chars.len() => {
                        text.push(chars[i + 1]);
                        i += 2;
                    }
                    ch => {
                        text.push(ch);
                        i += 1;
                    }
                }
            }
            if !closed {
                diags.push(Diagnostic::at(code::UNTERMINATED_STRING, "unterminated string", at(start)));
            }
            out.push(Token { text, span: at(start), quoted: true });
            continue;
        }
        let mut stack = Vec::new();
        while i < chars.len() {
            let ch = chars[i];
            if ch.is_whitespace() && stack.is_empty() {
                break;
            }
            if ch.is_control() && !ch.is_whitespace() {
                diags.push(Diagnostic::at(code::CONTROL_CHAR, format!("control character U+{:04X}", ch as u32), at(i)));
            }
            match ch {
                '(' | '[' | '{' => stack.push((ch, i)),
                ')' | ']' | '}' => {
                    let open = match ch {
                        ')' => '(',
                        ']' => '[',
                        _ => '{',
                    };
                    match stack.pop() {
                        Some((o, _)) if o == open => {}
                        _ => {
                            diags.push(Diagnostic::at(code::UNBALANCED, format!("unbalanced `{ch}`"), at(i)));
                            stack.clear();
                        }
                    }
                }
                _ => {}
            }
            i += 1;
        }
        if let Some(&(o, pos)) = stack.first() {
            diags.push(Diagnostic::at(code::UNBALANCED, format!("`{o}` is never closed"), at(pos)));
        }
        out.push(Token { text: chars[start..i].iter().collect(), span: at(start), quoted: false });
    }
    out
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: Span,
}

type Parse<T> = Result<T, Diagnostic>;

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> Span {
        self.peek().map_or(self.end_span(), |t| t.span)
    }

    fn end_span(&self) -> Span {
        match self.toks.last() {
            Some(t) => Span { line: t.span.line, col: t.span.col + t.text.chars().count() },
            None => self.line,
        }
    }

    fn next(&mut self, what: &str) -> Parse<&'a Token> {
        let t = self.peek().ok_or_else(|| Diagnostic::at(code::MALFORMED, format!("expected {what}"), self.end_span()))?;
        self.pos += 1;
        Ok(t)
    }

    fn name(&mut self, what: &str) -> Parse<Name> {
        let t = self.next(what)?;
        if !t.quoted && matches!(t.text.as_str(), ":" | "->" | "=") {
            return Err(Diagnostic::at(code::MALFORMED, format!("expected {what}, found `{}`", t.text), t.span));
        }
        Ok(Name { text: t.text.clone(), span: t.span })
    }

    fn punct(&mut self, p: &str) -> Parse<()> {
        let t = self.next(&format!("`{p}`"))?;
        if t.is(p) {
            Ok(())
        } else {
            Err(Diagnostic::at(code::MALFORMED, format!("expected `{p}`, found `{}`", t.text), t.span))
        }
    }

    fn number(&mut self, what: &str) -> Parse<usize> {
        let t = self.next(what)?;
        number(&t.text, t.span, what)
    }

    fn names_until(&mut self, stop: &str) -> Vec<Name> {
        let mut out = Vec::new();
        while let Some(t) = self.peek() {
            if t.is(stop) {
                break;
            }
            out.push(Name { text: t.text.clone(), span: t.span });
            self.pos += 1;
        }
        out
    }

    fn done(&self) -> Parse<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(Diagnostic::at(code::MALFORMED, format!("unexpected `{}`", t.text), t.span)),
        }
    }
}

fn number(text: &str, span: Span, what: &str) -> Parse<usize> {
    text.parse().map_err(|_| Diagnostic::at(code::BAD_NUMBER, format!("expected {what}, found `{text}`"), span))
}

fn perm(t: &Token) -> Parse<Vec<usize>> {
    let inner = t
        .text
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .filter(|_| !t.quoted)
        .ok_or_else(|| Diagnostic::at(code::MALFORMED, format!("expected a permutation like [1 0], found `{}`", t.text), t.span))?;
    inner.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(|s| number(s, t.span, "a permutation entry")).collect()
}

fn options(c: &mut Cursor, partial_ok: bool) -> Parse<Options> {
    let mut o = Options::default();
    while let Some(t) = c.peek() {
        c.pos += 1;
        match t.text.as_str() {
            "symmetric" if !t.quoted => o.symmetric = true,
            "partial" if !t.quoted && partial_ok => o.partial = true,
            "cap" if !t.quoted => o.cap = Some(c.number("an arity cap")?),
            _ => return Err(Diagnostic::at(code::MALFORMED, format!("unknown option `{}`", t.text), t.span)),
        }
    }
    Ok(o)
}

fn header(kind: BlockKind, c: &mut Cursor) -> Parse<Header> {
    let h = match kind {
        BlockKind::Colors => Header::Colors,
        BlockKind::Collection | BlockKind::Multicategory => {
            c.punct("over")?;
            let over = c.name("a colors block")?;
            let options = options(c, kind == BlockKind::Multicategory)?;
            if kind == BlockKind::Collection {
                Header::Collection { over, options }
            } else {
                Header::Multicategory { over, options }
            }
        }
        BlockKind::Multifunctor => {
            c.punct(":")?;
            let source = c.name("a source multicategory")?;
            c.punct("->")?;
            let target = c.name("a target multicategory")?;
            Header::Multifunctor { source, target }
        }
        BlockKind::Algebra => {
            c.punct("over")?;
            Header::Algebra { over: c.name("a multicategory")? }
        }
        BlockKind::Bimodule => {
            c.punct("over")?;
            let left = c.name("the left multicategory")?;
            let right = c.name("the right multicategory")?;
            Header::Bimodule { left, right, options: options(c, false)? }
        }
    };
    c.done()?;
    Ok(h)
}

fn entry(kind: BlockKind, c: &mut Cursor) -> Parse<Entry> {
    let kw = c.next("an entry")?;
    let span = kw.span;
    if kw.quoted || !allowed(kind).contains(&kw.text.as_str()) {
        return Err(Diagnostic::at(code::UNKNOWN_ENTRY, format!("`{}` is not an entry of a {} block", kw.text, kind.keyword()), span));
    }
    let e = match kw.text.as_str() {
        "color" => EntryKind::Color(c.name("a color")?),
        "op" | "generator" | "element" => {
            let keyword = match kw.text.as_str() {
                "op" => OpKeyword::Op,
                "generator" => OpKeyword::Generator,
                _ => OpKeyword::Element,
            };
            let name = c.name("an operation name")?;
            c.punct(":")?;
            let inputs = c.names_until("->");
            c.punct("->")?;
            EntryKind::Op { keyword, name, inputs, output: c.name("an output color")? }
        }
        "unit" => {
            let color = c.name("a color")?;
            c.punct("=")?;
            EntryKind::Unit { color, op: c.name("an operation")? }
        }
        "comp" => {
            let outer = c.name("an operation")?;
            let slot = slot(c)?;
            let inner = c.name("an operation")?;
            c.punct("=")?;
            EntryKind::Comp { outer, slot, inner, result: c.name("an operation")? }
        }
        "act" => {
            let op = c.name("an operation")?;
            let p = perm(c.next("a permutation")?)?;
            c.punct("=")?;
            EntryKind::Act { op, perm: p, result: c.name("an operation")? }
        }
        "relation" => {
            let lhs = c.name("a term")?;
            c.punct("=")?;
            let rhs = c.name("a term")?;
            c.punct(":")?;
            EntryKind::Relation { lhs, rhs, color: c.name("a color")? }
        }
        "saturate" => EntryKind::Saturate { arity: c.number("an arity cap")?, vertices: c.number("a vertex cap")? },
        "object" | "map" => {
            let from = c.name("a name")?;
            c.punct("->")?;
            let to = c.name("a name")?;
            if kw.text == "object" {
                EntryKind::Object { from, to }
            } else {
                EntryKind::Map { from, to }
            }
        }
        "carrier" => EntryKind::Carrier { color: c.name("a color")?, size: c.number("a carrier size")? },
        "action" => {
            let op = c.name("an operation")?;
            c.punct("=")?;
            let mut table = Vec::new();
            while let Some(t) = c.peek() {
                table.push(number(&t.text, t.span, "a table value")?);
                c.pos += 1;
            }
            EntryKind::Action { op, table }
        }
        "right" => {
            let elem = c.name("an element")?;
            let slot = slot(c)?;
            let op = c.name("an operation")?;
            c.punct("=")?;
            EntryKind::Right { elem, slot, op, result: c.name("an element")? }
        }
        _ => {
            let op = c.name("an operation")?;
            let elems = c.names_until("=");
            c.punct("=")?;
            EntryKind::Left { op, elems, result: c.name("an element")? }
        }
    };
    c.done()?;
    Ok(Entry { kind: e, span })
}

fn slot(c: &mut Cursor) -> Parse<usize> {
    let span = c.here();
    match c.number("a slot")? {
        0 => Err(Diagnostic::at(code::BAD_NUMBER, "slots are numbered from 1", span)),
        s => Ok(s - 1),
    }
}

/// Parses a whole document, or returns every diagnostic found.
pub fn parse(text: &str) -> Result<Document, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let lines: Vec<(usize, Vec<Token>)> =
        text.lines().enumerate().map(|(i, l)| (i + 1, lex_line(l, i + 1, &mut diags))).filter(|(_, t)| !t.is_empty()).collect();
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut doc = Document::default();
    let mut it = lines.iter().peekable();
    while let Some((lineno, toks)) = it.next() {
        let line = Span { line: *lineno, col: 1 };
        let first = &toks[0];
        let Some(kind) = BlockKind::ALL.into_iter().find(|k| first.is(k.keyword())) else {
            diags.push(Diagnostic::at(code::UNKNOWN_BLOCK, format!("expected a block keyword, found `{}`", first.text), first.span));
            continue;
        };
        let mut c = Cursor { toks: &toks[1..], pos: 0, line };
        let parsed = c.name("a block name").and_then(|name| Ok((name, header(kind, &mut c)?)));
        let mut entries = Vec::new();
        let mut closed = false;
        for (l, etoks) in it.by_ref() {
            if etoks.len() == 1 && etoks[0].is("end") {
                closed = true;
                break;
            }
            let mut ec = Cursor { toks: etoks, pos: 0, line: Span { line: *l, col: 1 } };
            match entry(kind, &mut ec) {
                Ok(e) => entries.push(e),
                Err(d) => diags.push(d),
            }
        }
        if !closed {
            diags.push(Diagnostic::at(code::MISSING_END, format!("{} block is missing `end`", kind.keyword()), first.span));
        }
        match parsed {
            Ok((name, header)) => {
                let block = Block { kind, name, header, entries, span: first.span };
                if kind == BlockKind::Multicategory && block.is_presentation() {
                    if let Some(e) = block.entries.iter().find(|e| matches!(e.kind, EntryKind::Unit { .. } | EntryKind::Comp { .. } | EntryKind::Op { keyword: OpKeyword::Op, .. })) {
                        diags.push(Diagnostic::at(code::MIXED_BLOCK, "table entries in a block with generators", e.span));
                    }
                }
                doc.blocks.push(block);
            }
            Err(d) => diags.push(d),
        }
    }
    if diags.is_empty() {
        Ok(doc)
    } else {
        Err(diags)
    }
}

fn needs_quotes(s: &str) -> bool {
    if s.is_empty() || matches!(s, ":" | "->" | "=" | "end") {
        return true;
    }
    let mut diags = Vec::new();
    let toks = lex_line(s, 1, &mut diags);
    !diags.is_empty() || toks.len() != 1 || toks[0].quoted || toks[0].text != s
}

fn quote(s: &str) -> String {
    if !needs_quotes(s) {
        return s.to_string();
    }
    let mut out = String::from("\"");
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn words(out: &mut String, items: &[Name]) {
    for n in items {
        out.push(' ');
        out.push_str(&quote(&n.text));
    }
}

fn print_options(out: &mut String, o: &Options) {
    if o.symmetric {
        out.push_str(" symmetric");
    }
    if let Some(c) = o.cap {
        let _ = write!(out, " cap {c}");
    }
    if o.partial {
        out.push_str(" partial");
    }
}

fn print_entry(out: &mut String, e: &EntryKind) {
    let q = |n: &Name| quote(&n.text);
    out.push_str("  ");
    out.push_str(e.keyword());
    let _ = match e {
        EntryKind::Color(c) => write!(out, " {}", q(c)),
        EntryKind::Op { name, inputs, output, .. } => {
            let _ = write!(out, " {} :", q(name));
            words(out, inputs);
            write!(out, " -> {}", q(output))
        }
        EntryKind::Unit { color, op } => write!(out, " {} = {}", q(color), q(op)),
        EntryKind::Comp { outer, slot, inner, result } => write!(out, " {} {} {} = {}", q(outer), slot + 1, q(inner), q(result)),
        EntryKind::Act { op, perm, result } => {
            let p: Vec<String> = perm.iter().map(|k| k.to_string()).collect();
            write!(out, " {} [{}] = {}", q(op), p.join(" "), q(result))
        }
        EntryKind::Relation { lhs, rhs, color } => write!(out, " {} = {} : {}", q(lhs), q(rhs), q(color)),
        EntryKind::Saturate { arity, vertices } => write!(out, " {arity} {vertices}"),
        EntryKind::Object { from, to } | EntryKind::Map { from, to } => write!(out, " {} -> {}", q(from), q(to)),
        EntryKind::Carrier { color, size } => write!(out, " {} {size}", q(color)),
        EntryKind::Action { op, table } => {
            let _ = write!(out, " {} =", q(op));
            for v in table {
                let _ = write!(out, " {v}");
            }
            Ok(())
        }
        EntryKind::Right { elem, slot, op, result } => write!(out, " {} {} {} = {}", q(elem), slot + 1, q(op), q(result)),
        EntryKind::Left { op, elems, result } => {
            let _ = write!(out, " {}", q(op));
            words(out, elems);
            write!(out, " = {}", q(result))
        }
    };
    out.push('\n');
}

/// Normal form: two-space indentation, single spaces, one blank line
/// between blocks, no comments.
pub fn print(doc: &Document) -> String {
    let mut out = String::new();
    for (i, b) in doc.blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = write!(out, "{} {}", b.kind.keyword(), quote(&b.name.text));
        match &b.header {
            Header::Colors => {}
            Header::Collection { over, options } | Header::Multicategory { over, options } => {
                let _ = write!(out, " over {}", quote(&over.text));
                print_options(&mut out, options);
            }
            Header::Multifunctor { source, target } => {
                let _ = write!(out, " : {} -> {}", quote(&source.text), quote(&target.text));
            }
            Header::Algebra { over } => {
                let _ = write!(out, " over {}", quote(&over.text));
            }
            Header::Bimodule { left, right, options } => {
                let _ = write!(out, " over {} {}", quote(&left.text), quote(&right.text));
                print_options(&mut out, options);
            }
        }
        out.push('\n');
        for e in &b.entries {
            print_entry(&mut out, &e.kind);
        }
        out.push_str("end\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_and_quotes_make_single_tokens() {
        let mut d = Vec::new();
        let t = lex_line(r#"act "a b" [1 0] = m(1, 2) # note"#, 1, &mut d);
        assert!(d.is_empty());
        let texts: Vec<&str> = t.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["act", "a b", "[1 0]", "=", "m(1, 2)"]);
        assert_eq!(t[4].span, Span { line: 1, col: 19 });
    }

    #[test]
    fn lexical_errors_have_codes() {
        let mut d = Vec::new();
        lex_line("op m(1 : x", 3, &mut d);
        assert_eq!(d[0].code, code::UNBALANCED);
        assert_eq!(d[0].span, Some(Span { line: 3, col: 5 }));
        d.clear();
        lex_line("op \"m", 1, &mut d);
        assert_eq!(d[0].code, code::UNTERMINATED_STRING);
    }

    #[test]
    fn awkward_names_are_quoted() {
        for s in ["a b", "", "=", "end", "x\"y", "(", "#c"] {
            let q = quote(s);
            let mut d = Vec::new();
            let t = lex_line(&q, 1, &mut d);
            assert!(d.is_empty(), "{s}");
            assert_eq!(t.len(), 1);
            assert_eq!(t[0].text, s);
        }
        assert_eq!(quote("m(1,2)"), "m(1,2)");
    }
}
