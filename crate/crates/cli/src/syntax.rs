//! Lexer, AST and recursive-descent parser for the workspace DSL.
//!
//! ```text
//! file      := decl*
//! decl      := category | functor | nat | presheaf | topology | diagram
//! category  := "category" NAME "{" centry* "}"
//! centry    := "objects" ":" NAME ("," NAME)*
//!            | "arrows" ":" NAME ":" NAME "->" NAME ("," ...)*
//!            | "compose" ":" NAME "." NAME "=" NAME ("," ...)*
//!            | "identity" NAME "=" NAME
//! functor   := "functor" NAME ":" NAME "->" NAME "{" maps "}"
//! nat       := "nat" NAME ":" NAME "=>" NAME "{" maps "}"
//! presheaf  := "presheaf" NAME "on" NAME "{" (NAME "=" set | NAME ":" "{" maps "}")* "}"
//! topology  := "topology" NAME "on" NAME "{" ("cover" NAME "=" list)* "}"
//! diagram   := "diagram" NAME ":" NAME "->" NAME "{" (NAME "|->" NAME | "slice" NAME "=" list)* "}"
//! maps      := (NAME "|->" NAME ","?)*
//! ```
//!
//! `//` starts a line comment. A NAME is a run of letters, digits and
//! `_ ' ! # ^ @ +`, or a double-quoted string.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Name(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Eq,
    Arrow,
    MapsTo,
    DoubleArrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("name `{n}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Name(_) => "name",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Eq => "=",
            Tok::Arrow => "->",
            Tok::MapsTo => "|->",
            Tok::DoubleArrow => "=>",
            Tok::Eof => "end of input",
        }
    }
}

/// A syntax error: where, what was found, and which tokens would have been
/// accepted there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyntaxError {
    pub pos: Pos,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: found {}, expected one of: {}", self.pos, self.found, self.expected.join(", "))
    }
}

pub fn is_bare_name_char(c: char) -> bool {
    c.is_alphanumeric() || "_'!#^@+".contains(c)
}

/// Whether `s` can be written without quotes.
pub fn is_bare_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_bare_name_char)
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let rest = &chars[i..];
        let starts = |s: &str| rest.iter().take(s.len()).copied().eq(s.chars());
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
        } else if starts("//") {
            let n = rest.iter().take_while(|&&c| c != '\n').count();
            advance(&mut i, &mut line, &mut col, n);
        } else if starts("|->") {
            out.push((Tok::MapsTo, pos));
            advance(&mut i, &mut line, &mut col, 3);
        } else if starts("->") {
            out.push((Tok::Arrow, pos));
            advance(&mut i, &mut line, &mut col, 2);
        } else if starts("=>") {
            out.push((Tok::DoubleArrow, pos));
            advance(&mut i, &mut line, &mut col, 2);
        } else if c == '"' {
            let body: String = rest[1..].iter().take_while(|&&c| c != '"' && c != '\n').collect();
            let n = body.chars().count();
            if rest.get(n + 1) != Some(&'"') {
                return Err(SyntaxError {
                    pos,
                    found: "unterminated string".into(),
                    expected: vec!["`\"`".into()],
                });
            }
            out.push((Tok::Name(body), pos));
            advance(&mut i, &mut line, &mut col, n + 2);
        } else if is_bare_name_char(c) {
            let name: String = rest.iter().take_while(|&&c| is_bare_name_char(c)).collect();
            let n = name.chars().count();
            out.push((Tok::Name(name), pos));
            advance(&mut i, &mut line, &mut col, n);
        } else {
            let tok = match c {
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                '.' => Tok::Dot,
                '=' => Tok::Eq,
                _ => {
                    return Err(SyntaxError {
                        pos,
                        found: format!("character `{c}`"),
                        expected: vec!["name".into(), "punctuation".into()],
                    })
                }
            };
            out.push((tok, pos));
            advance(&mut i, &mut line, &mut col, 1);
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mapping {
    pub from: Ident,
    pub to: Ident,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Category {
        name: Ident,
        objects: Vec<Ident>,
        arrows: Vec<(Ident, Ident, Ident)>,
        /// `g . f = h`
        composites: Vec<(Ident, Ident, Ident)>,
        identities: Vec<(Ident, Ident)>,
    },
    Functor {
        name: Ident,
        domain: Ident,
        codomain: Ident,
        maps: Vec<Mapping>,
    },
    Nat {
        name: Ident,
        source: Ident,
        target: Ident,
        components: Vec<Mapping>,
    },
    Presheaf {
        name: Ident,
        base: Ident,
        values: Vec<(Ident, Vec<Ident>)>,
        /// `f : { y |-> x }` sends `y in X(target f)` to `x in X(source f)`.
        actions: Vec<(Ident, Vec<Mapping>)>,
    },
    Topology {
        name: Ident,
        base: Ident,
        covers: Vec<(Ident, Vec<Ident>)>,
    },
    Diagram {
        name: Ident,
        index: Ident,
        target: Ident,
        maps: Vec<Mapping>,
        slices: Vec<(Ident, Vec<Ident>)>,
    },
}

impl Decl {
    pub fn name(&self) -> &Ident {
        match self {
            Decl::Category { name, .. }
            | Decl::Functor { name, .. }
            | Decl::Nat { name, .. }
            | Decl::Presheaf { name, .. }
            | Decl::Topology { name, .. }
            | Decl::Diagram { name, .. } => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Decl::Category { .. } => "category",
            Decl::Functor { .. } => "functor",
            Decl::Nat { .. } => "nat",
            Decl::Presheaf { .. } => "presheaf",
            Decl::Topology { .. } => "topology",
            Decl::Diagram { .. } => "diagram",
        }
    }
}

const KEYWORDS: [&str; 6] = ["category", "functor", "nat", "presheaf", "topology", "diagram"];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(SyntaxError {
            pos: self.pos(),
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(&[&format!("`{}`", t.symbol())])
        }
    }

    fn name(&mut self) -> PResult<Ident> {
        match self.peek() {
            Tok::Name(_) => {
                let (t, pos) = self.bump();
                let Tok::Name(name) = t else { unreachable!() };
                Ok(Ident { name, pos })
            }
            _ => self.fail(&["name"]),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Tok::Name(n) if n == kw => {
                self.bump();
                Ok(())
            }
            _ => self.fail(&[&format!("`{kw}`")]),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Name(n) if n == kw)
    }

    fn file(&mut self) -> PResult<Vec<Decl>> {
        let mut decls = Vec::new();
        loop {
            match self.peek() {
                Tok::Eof => return Ok(decls),
                Tok::Name(n) if KEYWORDS.contains(&n.as_str()) => decls.push(self.decl()?),
                _ => {
                    let expected: Vec<String> = KEYWORDS.iter().map(|k| format!("`{k}`")).collect();
                    let expected: Vec<&str> = expected.iter().map(String::as_str).collect();
                    return self.fail(&expected);
                }
            }
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let Tok::Name(kw) = self.peek().clone() else { unreachable!() };
        self.bump();
        match kw.as_str() {
            "category" => self.category(),
            "functor" => {
                let (name, domain, codomain) = self.signature(Tok::Arrow)?;
                let maps = self.mapping_block()?;
                Ok(Decl::Functor { name, domain, codomain, maps })
            }
            "nat" => {
                let (name, source, target) = self.signature(Tok::DoubleArrow)?;
                let components = self.mapping_block()?;
                Ok(Decl::Nat { name, source, target, components })
            }
            "presheaf" => self.presheaf(),
            "topology" => self.topology(),
            _ => self.diagram(),
        }
    }

    /// `NAME ":" NAME sep NAME`
    fn signature(&mut self, sep: Tok) -> PResult<(Ident, Ident, Ident)> {
        let name = self.name()?;
        self.expect(Tok::Colon)?;
        let a = self.name()?;
        self.expect(sep)?;
        let b = self.name()?;
        Ok((name, a, b))
    }

    fn mapping(&mut self) -> PResult<Mapping> {
        let from = self.name()?;
        self.expect(Tok::MapsTo)?;
        let to = self.name()?;
        Ok(Mapping { from, to })
    }

    fn mapping_block(&mut self) -> PResult<Vec<Mapping>> {
        self.expect(Tok::LBrace)?;
        let mut maps = Vec::new();
        loop {
            match self.peek() {
                Tok::RBrace => {
                    self.bump();
                    return Ok(maps);
                }
                Tok::Name(_) => {
                    maps.push(self.mapping()?);
                    self.eat(&Tok::Comma);
                }
                _ => return self.fail(&["name", "`}`"]),
            }
        }
    }

    /// `item ("," item)*`
    fn separated<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = vec![item(self)?];
        while self.eat(&Tok::Comma) {
            out.push(item(self)?);
        }
        Ok(out)
    }

    /// `open [NAME ("," NAME)*] close`
    fn name_list(&mut self, open: Tok, close: Tok) -> PResult<Vec<Ident>> {
        self.expect(open)?;
        if self.eat(&close) {
            return Ok(Vec::new());
        }
        let names = self.separated(Self::name)?;
        if !self.eat(&close) {
            return self.fail(&["`,`", &format!("`{}`", close.symbol())]);
        }
        Ok(names)
    }

    fn category(&mut self) -> PResult<Decl> {
        let name = self.name()?;
        self.expect(Tok::LBrace)?;
        let (mut objects, mut arrows, mut composites, mut identities) = (vec![], vec![], vec![], vec![]);
        loop {
            if self.eat(&Tok::RBrace) {
                break;
            }
            let entry = match self.peek() {
                Tok::Name(n) => n.clone(),
                _ => String::new(),
            };
            match entry.as_str() {
                "objects" => {
                    self.bump();
                    self.expect(Tok::Colon)?;
                    objects.extend(self.separated(Self::name)?);
                }
                "arrows" => {
                    self.bump();
                    self.expect(Tok::Colon)?;
                    arrows.extend(self.separated(|p| {
                        let (f, a, b) = p.signature(Tok::Arrow)?;
                        Ok((f, a, b))
                    })?);
                }
                "compose" => {
                    self.bump();
                    self.expect(Tok::Colon)?;
                    composites.extend(self.separated(|p| {
                        let g = p.name()?;
                        p.expect(Tok::Dot)?;
                        let f = p.name()?;
                        p.expect(Tok::Eq)?;
                        let h = p.name()?;
                        Ok((g, f, h))
                    })?);
                }
                "identity" => {
                    self.bump();
                    let o = self.name()?;
                    self.expect(Tok::Eq)?;
                    identities.push((o, self.name()?));
                }
                _ => return self.fail(&["`objects`", "`arrows`", "`compose`", "`identity`", "`}`"]),
            }
        }
        Ok(Decl::Category {
            name,
            objects,
            arrows,
            composites,
            identities,
        })
    }

    fn presheaf(&mut self) -> PResult<Decl> {
        let name = self.name()?;
        self.keyword("on")?;
        let base = self.name()?;
        self.expect(Tok::LBrace)?;
        let (mut values, mut actions) = (vec![], vec![]);
        loop {
            match (self.peek(), self.peek_at(1)) {
                (Tok::RBrace, _) => {
                    self.bump();
                    break;
                }
                (Tok::Name(_), Tok::Eq) => {
                    let o = self.name()?;
                    self.bump();
                    values.push((o, self.name_list(Tok::LBrace, Tok::RBrace)?));
                }
                (Tok::Name(_), Tok::Colon) => {
                    let f = self.name()?;
                    self.bump();
                    actions.push((f, self.mapping_block()?));
                }
                (Tok::Name(_), _) => {
                    self.bump();
                    return self.fail(&["`=`", "`:`"]);
                }
                _ => return self.fail(&["name", "`}`"]),
            }
        }
        Ok(Decl::Presheaf {
            name,
            base,
            values,
            actions,
        })
    }

    fn topology(&mut self) -> PResult<Decl> {
        let name = self.name()?;
        self.keyword("on")?;
        let base = self.name()?;
        self.expect(Tok::LBrace)?;
        let mut covers = Vec::new();
        while !self.eat(&Tok::RBrace) {
            if !self.is_keyword("cover") {
                return self.fail(&["`cover`", "`}`"]);
            }
            self.bump();
            let apex = self.name()?;
            self.expect(Tok::Eq)?;
            covers.push((apex, self.name_list(Tok::LBracket, Tok::RBracket)?));
        }
        Ok(Decl::Topology { name, base, covers })
    }

    fn diagram(&mut self) -> PResult<Decl> {
        let (name, index, target) = self.signature(Tok::Arrow)?;
        self.expect(Tok::LBrace)?;
        let (mut maps, mut slices) = (vec![], vec![]);
        loop {
            match (self.peek(), self.peek_at(2)) {
                (Tok::RBrace, _) => {
                    self.bump();
                    break;
                }
                (Tok::Name(n), Tok::Eq) if n == "slice" => {
                    self.bump();
                    let i = self.name()?;
                    self.bump();
                    slices.push((i, self.name_list(Tok::LBracket, Tok::RBracket)?));
                }
                (Tok::Name(_), _) => {
                    maps.push(self.mapping()?);
                    self.eat(&Tok::Comma);
                }
                _ => return self.fail(&["name", "`slice`", "`}`"]),
            }
        }
        Ok(Decl::Diagram {
            name,
            index,
            target,
            maps,
            slices,
        })
    }
}

pub fn parse(src: &str) -> Result<Vec<Decl>, SyntaxError> {
    let toks = lex(src)?;
    Parser { toks, at: 0 }.file()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn category_and_functor() {
        let src = "// two blocks\ncategory One { objects: x }\nfunctor v : One -> Arrow { x |-> 1 }\n";
        let decls = parse(src).unwrap();
        assert_eq!(decls.len(), 2);
        let Decl::Functor { maps, codomain, .. } = &decls[1] else { panic!() };
        assert_eq!(codomain.name, "Arrow");
        assert_eq!(maps[0].to.name, "1");
        assert_eq!(maps[0].from.pos, Pos { line: 3, col: 28 });
    }

    #[test]
    fn malformed_composite_is_located() {
        let src = "category C {\n  objects: a\n  compose: g . = h\n}";
        let err = parse(src).unwrap_err();
        assert_eq!(err.pos, Pos { line: 3, col: 16 });
        assert_eq!(err.expected, vec!["name"]);
        assert_eq!(err.found, "`=`");
    }

    #[test]
    fn expected_sets_list_alternatives() {
        let err = parse("category C { morphisms: f }").unwrap_err();
        assert!(err.expected.contains(&"`arrows`".to_string()));
        let err = parse("widget W {}").unwrap_err();
        assert_eq!(err.expected.len(), 6);
        let err = parse("category C { objects: a b }").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 25 });
    }

    #[test]
    fn quoted_names_and_all_blocks() {
        let src = r#"
            category "C x" { objects: a, b  arrows: f : a -> b, g : a -> b }
            nat alpha : F => G { a |-> f }
            presheaf P on C { a = {p, q} b = {} f : { } }
            topology J on C { cover b = [f, g] cover a = [] }
            diagram D : I -> C { 0 |-> a slice 0 = [id_a] }
        "#;
        let decls = parse(src).unwrap();
        assert_eq!(decls[0].name().name, "C x");
        assert_eq!(decls.iter().map(Decl::kind).collect::<Vec<_>>(), ["category", "nat", "presheaf", "topology", "diagram"]);
    }

    #[test]
    fn stray_characters_are_rejected() {
        let err = parse("category C { objects: a; }").unwrap_err();
        assert!(err.found.contains(';'));
        assert!(parse("category \"open").is_err());
    }
}
