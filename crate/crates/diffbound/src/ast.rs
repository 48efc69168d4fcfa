//! Abstract syntax of the toy parallel language.
//!
//! Variables are global and shared across processes. The parser resolves
//! names to indices `1..n-1`; index 0 is reserved for the constant-zero
//! variable of the DBM encoding and never appears in source.

use std::fmt;

/// Arithmetic expression over constants and variables. Division is absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Const(i64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    /// Comparison appearing under a negation.
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Gt => CmpOp::Le,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

/// Boolean condition over comparisons of expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cond {
    True,
    False,
    Cmp(CmpOp, Expr, Expr),
    And(Box<Cond>, Box<Cond>),
    Or(Box<Cond>, Box<Cond>),
    Not(Box<Cond>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Assign {
        var: usize,
        expr: Expr,
        line: u32,
    },
    If {
        cond: Cond,
        then_body: Vec<Stmt>,
        else_body: Vec<Stmt>,
    },
    While {
        cond: Cond,
        body: Vec<Stmt>,
    },
    Skip,
    Assert {
        cond: Cond,
        line: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Process {
    pub name: String,
    pub body: Vec<Stmt>,
}

/// A parsed program: shared variable declarations, an optional init block
/// and one or more processes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    /// User variable names; name at position `k` has DBM index `k + 1`.
    pub vars: Vec<String>,
    pub init: Vec<Stmt>,
    pub processes: Vec<Process>,
}

impl Program {
    /// DBM dimension: the declared variables plus the constant-zero variable.
    pub fn dim(&self) -> usize {
        self.vars.len() + 1
    }

    pub fn var_name(&self, index: usize) -> &str {
        &self.vars[index - 1]
    }

    /// Pretty-prints the program in its own grammar; re-parsing the output
    /// yields an identical tree.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        if !self.vars.is_empty() {
            out.push_str(&format!("var {};\n", self.vars.join(", ")));
        }
        if !self.init.is_empty() {
            out.push_str("init {\n");
            for s in &self.init {
                write_stmt(&mut out, s, &self.vars, 1);
            }
            out.push_str("}\n");
        }
        for p in &self.processes {
            out.push_str(&format!("process {} {{\n", p.name));
            for s in &p.body {
                write_stmt(&mut out, s, &self.vars, 1);
            }
            out.push_str("}\n");
        }
        out
    }
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

fn write_stmt(out: &mut String, s: &Stmt, vars: &[String], level: usize) {
    indent(out, level);
    match s {
        Stmt::Assign { var, expr, .. } => {
            out.push_str(&format!(
                "{} = {};\n",
                vars[var - 1],
                ExprDisplay { e: expr, vars }
            ));
        }
        Stmt::Skip => out.push_str("skip;\n"),
        Stmt::Assert { cond, .. } => {
            out.push_str(&format!("assert({});\n", CondDisplay { c: cond, vars }));
        }
        Stmt::While { cond, body } => {
            out.push_str(&format!("while {} {{\n", CondDisplay { c: cond, vars }));
            for b in body {
                write_stmt(out, b, vars, level + 1);
            }
            indent(out, level);
            out.push_str("}\n");
        }
        Stmt::If {
            cond,
            then_body,
            else_body,
        } => {
            out.push_str(&format!("if {} {{\n", CondDisplay { c: cond, vars }));
            for b in then_body {
                write_stmt(out, b, vars, level + 1);
            }
            indent(out, level);
            out.push('}');
            if else_body.is_empty() {
                out.push('\n');
            } else {
                out.push_str(" else {\n");
                for b in else_body {
                    write_stmt(out, b, vars, level + 1);
                }
                indent(out, level);
                out.push_str("}\n");
            }
        }
    }
}

/// Expression printer; parenthesizes conservatively so output re-parses to
/// the same tree.
pub struct ExprDisplay<'a> {
    pub e: &'a Expr,
    pub vars: &'a [String],
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &Expr, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match e {
                Expr::Const(c) => write!(f, "{c}"),
                Expr::Var(v) => write!(f, "{}", vars[v - 1]),
                Expr::Neg(x) => {
                    write!(f, "-(")?;
                    go(x, vars, f)?;
                    write!(f, ")")
                }
                Expr::Add(a, b) => bin(a, "+", b, vars, f),
                Expr::Sub(a, b) => bin(a, "-", b, vars, f),
                Expr::Mul(a, b) => bin(a, "*", b, vars, f),
            }
        }
        fn bin(
            a: &Expr,
            op: &str,
            b: &Expr,
            vars: &[String],
            f: &mut fmt::Formatter<'_>,
        ) -> fmt::Result {
            write!(f, "(")?;
            go(a, vars, f)?;
            write!(f, " {op} ")?;
            go(b, vars, f)?;
            write!(f, ")")
        }
        go(self.e, self.vars, f)
    }
}

pub struct CondDisplay<'a> {
    pub c: &'a Cond,
    pub vars: &'a [String],
}

impl fmt::Display for CondDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.c {
            Cond::True => write!(f, "true"),
            Cond::False => write!(f, "false"),
            Cond::Cmp(op, a, b) => write!(
                f,
                "{} {} {}",
                ExprDisplay { e: a, vars: self.vars },
                op.symbol(),
                ExprDisplay { e: b, vars: self.vars }
            ),
            Cond::And(a, b) => write!(
                f,
                "({} and {})",
                CondDisplay { c: a, vars: self.vars },
                CondDisplay { c: b, vars: self.vars }
            ),
            Cond::Or(a, b) => write!(
                f,
                "({} or {})",
                CondDisplay { c: a, vars: self.vars },
                CondDisplay { c: b, vars: self.vars }
            ),
            Cond::Not(a) => write!(f, "not ({})", CondDisplay { c: a, vars: self.vars }),
        }
    }
}
