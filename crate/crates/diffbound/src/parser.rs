//! Lexer and recursive-descent parser for the toy language.
//!
//! Grammar (UTF-8 text, `//` comments to end of line):
//!
//! ```text
//! program := decl* init? process+
//! decl    := "var" ident ("," ident)* ";"
//! init    := "init" block
//! process := "process" ident block
//! block   := "{" stmt* "}"
//! stmt    := ident "=" expr ";" | "if" cond block ("else" block)?
//!          | "while" cond block | "skip" ";" | "assert" "(" cond ")" ";"
//! cond    := "true" | "false" | atom | cond "and" cond | cond "or" cond
//!          | "not" cond | "(" cond ")"
//! atom    := expr ("<"|"<="|"=="|"!="|">="|">") expr
//! expr    := integer | ident | "-" expr | expr ("+"|"-"|"*") expr | "(" expr ")"
//! ```

use std::collections::HashMap;

use crate::ast::{CmpOp, Cond, Expr, Process, Program, Stmt};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    KwVar,
    KwInit,
    KwProcess,
    KwIf,
    KwElse,
    KwWhile,
    KwSkip,
    KwAssert,
    KwTrue,
    KwFalse,
    KwAnd,
    KwOr,
    KwNot,
    Assign, // =
    Lt,
    Le,
    EqEq,
    Ne,
    Ge,
    Gt,
    Plus,
    Minus,
    Star,
    Semi,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut toks = Vec::new();
    let mut line: u32 = 1;
    let mut col: u32 = 1;
    let mut chars = src.chars().peekable();
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }
    loop {
        let (tl, tc) = (line, col);
        let Some(&c) = chars.peek() else {
            toks.push(Token { tok: Tok::Eof, line, col });
            return Ok(toks);
        };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' {
            bump!();
            if chars.peek() == Some(&'/') {
                while let Some(&n) = chars.peek() {
                    if n == '\n' {
                        break;
                    }
                    bump!();
                }
                continue;
            }
            return Err(ParseError {
                line: tl,
                col: tc,
                msg: "unexpected character `/`".into(),
            });
        }
        if c.is_ascii_digit() {
            let mut text = String::new();
            while let Some(&n) = chars.peek() {
                if n.is_ascii_digit() {
                    text.push(n);
                    bump!();
                } else {
                    break;
                }
            }
            let v: i64 = text.parse().map_err(|_| ParseError {
                line: tl,
                col: tc,
                msg: format!("integer literal `{text}` out of range"),
            })?;
            toks.push(Token { tok: Tok::Int(v), line: tl, col: tc });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut text = String::new();
            while let Some(&n) = chars.peek() {
                if n.is_alphanumeric() || n == '_' {
                    text.push(n);
                    bump!();
                } else {
                    break;
                }
            }
            let tok = match text.as_str() {
                "var" => Tok::KwVar,
                "init" => Tok::KwInit,
                "process" => Tok::KwProcess,
                "if" => Tok::KwIf,
                "else" => Tok::KwElse,
                "while" => Tok::KwWhile,
                "skip" => Tok::KwSkip,
                "assert" => Tok::KwAssert,
                "true" => Tok::KwTrue,
                "false" => Tok::KwFalse,
                "and" => Tok::KwAnd,
                "or" => Tok::KwOr,
                "not" => Tok::KwNot,
                _ => Tok::Ident(text),
            };
            toks.push(Token { tok, line: tl, col: tc });
            continue;
        }
        bump!();
        let tok = match c {
            '=' => {
                if chars.peek() == Some(&'=') {
                    bump!();
                    Tok::EqEq
                } else {
                    Tok::Assign
                }
            }
            '<' => {
                if chars.peek() == Some(&'=') {
                    bump!();
                    Tok::Le
                } else {
                    Tok::Lt
                }
            }
            '>' => {
                if chars.peek() == Some(&'=') {
                    bump!();
                    Tok::Ge
                } else {
                    Tok::Gt
                }
            }
            '!' => {
                if chars.peek() == Some(&'=') {
                    bump!();
                    Tok::Ne
                } else {
                    return Err(ParseError {
                        line: tl,
                        col: tc,
                        msg: "expected `!=`".into(),
                    });
                }
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            ';' => Tok::Semi,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            other => {
                return Err(ParseError {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        };
        toks.push(Token { tok, line: tl, col: tc });
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    vars: HashMap<String, usize>,
    var_order: Vec<String>,
}

/// Parses a program, resolving every identifier against the declarations.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars: HashMap::new(),
        var_order: Vec::new(),
    };
    p.program()
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (u32, u32) {
        (self.toks[self.pos].line, self.toks[self.pos].col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError { line, col, msg: msg.into() })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        while *self.peek() == Tok::KwVar {
            self.bump();
            loop {
                let Tok::Ident(name) = self.peek().clone() else {
                    return self.err("expected variable name");
                };
                if self.vars.contains_key(&name) {
                    return self.err(format!("duplicate declaration of `{name}`"));
                }
                self.bump();
                let idx = self.var_order.len() + 1;
                self.vars.insert(name.clone(), idx);
                self.var_order.push(name);
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    Tok::Semi => {
                        self.bump();
                        break;
                    }
                    _ => return self.err("expected `,` or `;` in declaration"),
                }
            }
        }
        let init = if *self.peek() == Tok::KwInit {
            self.bump();
            self.block()?
        } else {
            Vec::new()
        };
        let mut processes = Vec::new();
        while *self.peek() == Tok::KwProcess {
            self.bump();
            let Tok::Ident(name) = self.peek().clone() else {
                return self.err("expected process name");
            };
            self.bump();
            let body = self.block()?;
            processes.push(Process { name, body });
        }
        if processes.is_empty() {
            return self.err("a program needs at least one process");
        }
        if *self.peek() != Tok::Eof {
            return self.err("expected `process` or end of input");
        }
        Ok(Program {
            vars: self.var_order.clone(),
            init,
            processes,
        })
    }

    fn block(&mut self) -> Result<Vec<Stmt>, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut stmts = Vec::new();
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return self.err("unterminated block, expected `}`");
            }
            stmts.push(self.stmt()?);
        }
        self.bump();
        Ok(stmts)
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let (line, _) = self.here();
        match self.peek().clone() {
            Tok::KwSkip => {
                self.bump();
                self.expect(Tok::Semi, "`;` after skip")?;
                Ok(Stmt::Skip)
            }
            Tok::KwAssert => {
                self.bump();
                self.expect(Tok::LParen, "`(` after assert")?;
                let cond = self.cond()?;
                self.expect(Tok::RParen, "`)` after assert condition")?;
                self.expect(Tok::Semi, "`;` after assert")?;
                Ok(Stmt::Assert { cond, line })
            }
            Tok::KwIf => {
                self.bump();
                let cond = self.cond()?;
                let then_body = self.block()?;
                let else_body = if *self.peek() == Tok::KwElse {
                    self.bump();
                    self.block()?
                } else {
                    Vec::new()
                };
                Ok(Stmt::If { cond, then_body, else_body })
            }
            Tok::KwWhile => {
                self.bump();
                let cond = self.cond()?;
                let body = self.block()?;
                Ok(Stmt::While { cond, body })
            }
            Tok::Ident(name) => {
                self.bump();
                let var = self.resolve(&name)?;
                self.expect(Tok::Assign, "`=` in assignment")?;
                let expr = self.expr()?;
                self.expect(Tok::Semi, "`;` after assignment")?;
                Ok(Stmt::Assign { var, expr, line })
            }
            _ => self.err("expected a statement"),
        }
    }

    fn resolve(&self, name: &str) -> Result<usize, ParseError> {
        self.vars.get(name).copied().ok_or_else(|| {
            let (line, col) = self.here();
            ParseError {
                line,
                col,
                msg: format!("undeclared variable `{name}`"),
            }
        })
    }

    // cond := or-chain of and-chains of unary conds
    fn cond(&mut self) -> Result<Cond, ParseError> {
        let mut left = self.cond_and()?;
        while *self.peek() == Tok::KwOr {
            self.bump();
            let right = self.cond_and()?;
            left = Cond::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn cond_and(&mut self) -> Result<Cond, ParseError> {
        let mut left = self.cond_unary()?;
        while *self.peek() == Tok::KwAnd {
            self.bump();
            let right = self.cond_unary()?;
            left = Cond::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn cond_unary(&mut self) -> Result<Cond, ParseError> {
        match self.peek().clone() {
            Tok::KwNot => {
                self.bump();
                Ok(Cond::Not(Box::new(self.cond_unary()?)))
            }
            Tok::KwTrue => {
                self.bump();
                Ok(Cond::True)
            }
            Tok::KwFalse => {
                self.bump();
                Ok(Cond::False)
            }
            Tok::LParen if self.paren_is_cond() => {
                self.bump();
                let c = self.cond()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(c)
            }
            _ => self.atom(),
        }
    }

    /// Disambiguates `(` between a parenthesized condition and a
    /// parenthesized expression starting a comparison atom: scan to the
    /// matching `)` and decide from what follows.
    fn paren_is_cond(&self) -> bool {
        debug_assert_eq!(*self.peek(), Tok::LParen);
        let mut depth = 0usize;
        let mut i = self.pos;
        loop {
            match &self.toks[i].tok {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        let next = self.toks.get(i + 1).map(|t| &t.tok);
                        return !matches!(
                            next,
                            Some(
                                Tok::Lt | Tok::Le | Tok::EqEq | Tok::Ne | Tok::Ge | Tok::Gt
                                    | Tok::Plus | Tok::Minus | Tok::Star
                            )
                        );
                    }
                }
                Tok::Eof => return true,
                _ => {}
            }
            i += 1;
        }
    }

    fn atom(&mut self) -> Result<Cond, ParseError> {
        let left = self.expr()?;
        let op = match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::EqEq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Ge => CmpOp::Ge,
            Tok::Gt => CmpOp::Gt,
            _ => return self.err("expected a comparison operator"),
        };
        self.bump();
        let right = self.expr()?;
        Ok(Cond::Cmp(op, left, right))
    }

    // expr := term (("+"|"-") term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    left = Expr::Add(Box::new(left), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    left = Expr::Sub(Box::new(left), Box::new(self.term()?));
                }
                _ => return Ok(left),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            left = Expr::Mul(Box::new(left), Box::new(self.factor()?));
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Var(self.resolve(&name)?))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => self.err("expected an expression"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const BAKERY: &str = r#"
// Two-process ticket-based mutual exclusion.
var y1, y2;

init {
    y1 = 0;
    y2 = 0;
}

process p1 {
    while true {
        y1 = y2 + 1;
        while y2 != 0 and y1 > y2 { skip; }
        // critical section
        y1 = 0;
    }
}

process p2 {
    while true {
        y2 = y1 + 1;
        while y1 != 0 and y2 >= y1 { skip; }
        // critical section
        y2 = 0;
    }
}
"#;

    #[test]
    fn bakery_parses() {
        let p = parse_program(BAKERY).unwrap();
        assert_eq!(p.vars, vec!["y1", "y2"]);
        assert_eq!(p.init.len(), 2);
        assert_eq!(p.processes.len(), 2);
        assert_eq!(p.processes[0].name, "p1");
        assert_eq!(p.processes[1].name, "p2");
        // p1 body: one while-true loop with three inner statements.
        let Stmt::While { cond, body } = &p.processes[0].body[0] else {
            panic!("expected while");
        };
        assert_eq!(*cond, Cond::True);
        assert_eq!(body.len(), 3);
    }

    #[test]
    fn single_process_single_var() {
        let p = parse_program("var x; process p { x = 1; }").unwrap();
        assert_eq!(p.dim(), 2);
        assert!(p.init.is_empty());
    }

    #[test]
    fn undeclared_variable_is_reported_with_position() {
        let err = parse_program("process p { x = 1; }").unwrap_err();
        assert!(err.msg.contains("undeclared variable `x`"), "{err}");
        assert_eq!(err.line, 1);
    }

    #[test]
    fn duplicate_declaration_rejected() {
        let err = parse_program("var x, x; process p { skip; }").unwrap_err();
        assert!(err.msg.contains("duplicate declaration"), "{err}");
    }

    #[test]
    fn syntax_error_has_line_and_column() {
        let err = parse_program("var x;\nprocess p { x = ; }").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.col > 0);
    }

    #[test]
    fn precedence_and_parentheses() {
        let p = parse_program("var a, b; process p { a = 1 + 2 * b; }").unwrap();
        let Stmt::Assign { expr, .. } = &p.processes[0].body[0] else {
            panic!()
        };
        assert_eq!(
            *expr,
            Expr::Add(
                Box::new(Expr::Const(1)),
                Box::new(Expr::Mul(Box::new(Expr::Const(2)), Box::new(Expr::Var(2))))
            )
        );
        // Parenthesized expression on the left of a comparison atom.
        let p =
            parse_program("var a, b; process p { if (a + 1) <= b { skip; } }").unwrap();
        let Stmt::If { cond, .. } = &p.processes[0].body[0] else {
            panic!()
        };
        assert!(matches!(cond, Cond::Cmp(CmpOp::Le, _, _)));
    }

    /// Zeroes source-position metadata so trees can be compared
    /// structurally.
    fn strip_lines(stmts: &mut Vec<Stmt>) {
        for s in stmts {
            match s {
                Stmt::Assign { line, .. } | Stmt::Assert { line, .. } => *line = 0,
                Stmt::While { body, .. } => strip_lines(body),
                Stmt::If {
                    then_body,
                    else_body,
                    ..
                } => {
                    strip_lines(then_body);
                    strip_lines(else_body);
                }
                Stmt::Skip => {}
            }
        }
    }

    #[test]
    fn parse_print_round_trip() {
        for src in [
            BAKERY,
            "var x; process p { if not (x < 3 and x > -2) { x = -x; } else { skip; } }",
            "var i, j; init { i = 0; } process q { while i < 5 or j == i { i = i + 1; assert(i <= 5); } }",
        ] {
            let mut p1 = parse_program(src).unwrap();
            let printed = p1.to_source();
            let mut p2 = parse_program(&printed).unwrap_or_else(|e| {
                panic!("re-parse failed: {e}\n{printed}");
            });
            strip_lines(&mut p1.init);
            strip_lines(&mut p2.init);
            for (a, b) in p1.processes.iter_mut().zip(p2.processes.iter_mut()) {
                strip_lines(&mut a.body);
                strip_lines(&mut b.body);
            }
            assert_eq!(p1, p2, "round trip changed the tree:\n{printed}");
        }
    }
}
