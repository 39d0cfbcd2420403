use super::ast::*;
use super::token::{Token, TokenKind};
use super::SyntaxError;

/// Parses a whole program (declarations and top-level statements).
pub fn parse_program(tokens: &[Token]) -> Result<SyntaxTree, SyntaxError> {
    let mut p = Parser::new(tokens);
    let mut items = Vec::new();
    while !p.at_end() {
        items.push(p.item()?);
    }
    Ok(SyntaxTree { items })
}

/// Parses one line of interactive input. A line may hold several
/// declarations or statements; an empty line yields an empty tree.
pub fn parse_interactive(line: &str) -> Result<SyntaxTree, SyntaxError> {
    let tokens = super::tokenize(line)?;
    parse_program(&tokens)
}

struct Parser<'a> {
    toks: &'a [Token],
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token]) -> Self {
        Parser { toks, at: 0 }
    }

    fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.at)
    }

    fn peek_at(&self, n: usize) -> Option<&'a Token> {
        self.toks.get(self.at + n)
    }

    fn pos(&self) -> Pos {
        match self.peek() {
            Some(t) => t.pos(),
            None => self.toks.last().map(|t| Pos::new(t.line, t.column + t.text.len())).unwrap_or(Pos::new(1, 1)),
        }
    }

    fn error(&self, expected: &str) -> SyntaxError {
        match self.peek() {
            Some(t) => SyntaxError::new(t.pos(), format!("expected {expected}, found {t}")),
            None => SyntaxError::incomplete(self.pos(), format!("expected {expected}, found end of input")),
        }
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.toks[self.at];
        self.at += 1;
        t
    }

    fn check_sym(&self, sym: &str) -> bool {
        self.peek().is_some_and(|t| t.is_symbol(sym))
    }

    fn check_kw(&self, kw: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(kw))
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        if self.check_sym(sym) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.check_kw(kw) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, sym: &str) -> Result<(), SyntaxError> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            Err(self.error(&format!("`{sym}`")))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.error(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                self.at += 1;
                Ok(t.text.clone())
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn classical_type(&self) -> Option<ClassicalType> {
        let t = self.peek()?;
        if t.kind != TokenKind::Keyword {
            return None;
        }
        match t.text.as_str() {
            "int" => Some(ClassicalType::Int),
            "real" => Some(ClassicalType::Real),
            "complex" => Some(ClassicalType::Complex),
            "boolean" => Some(ClassicalType::Boolean),
            _ => None,
        }
    }

    fn quantum_type(&self) -> Option<QuantumType> {
        let t = self.peek()?;
        if t.kind != TokenKind::Keyword {
            return None;
        }
        match t.text.as_str() {
            "qureg" => Some(QuantumType::Qureg),
            "quconst" => Some(QuantumType::Quconst),
            "quvoid" => Some(QuantumType::Quvoid),
            "quscratch" => Some(QuantumType::Quscratch),
            _ => None,
        }
    }

    fn sub_kind(&self) -> Option<SubKind> {
        let t = self.peek()?;
        if t.kind != TokenKind::Keyword {
            return None;
        }
        match t.text.as_str() {
            "procedure" => Some(SubKind::Procedure),
            "operator" => Some(SubKind::Operator),
            "qufunct" => Some(SubKind::Qufunct),
            _ => None,
        }
    }

    // ----- declarations -----

    fn item(&mut self) -> Result<Item, SyntaxError> {
        if self.check_kw("cond") || self.sub_kind().is_some() {
            return Ok(Item::Sub(self.sub_decl()?));
        }
        if self.classical_type().is_some()
            && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Ident)
            && self.peek_at(2).is_some_and(|t| t.is_symbol("("))
        {
            return Ok(Item::Sub(self.function_decl()?));
        }
        Ok(Item::Stmt(self.stmt()?))
    }

    fn sub_decl(&mut self) -> Result<SubDecl, SyntaxError> {
        let pos = self.pos();
        let cond = self.eat_kw("cond");
        let kind = match self.sub_kind() {
            Some(k) => k,
            None => return Err(self.error("`procedure`, `operator` or `qufunct`")),
        };
        if cond && kind == SubKind::Procedure {
            return Err(SyntaxError::new(pos, "`cond` applies only to operators and qufuncts"));
        }
        self.bump();
        let name = self.ident()?;
        let params = self.params()?;
        let body = self.block()?;
        Ok(SubDecl { name, kind, cond, return_type: None, params, body, pos })
    }

    fn function_decl(&mut self) -> Result<SubDecl, SyntaxError> {
        let pos = self.pos();
        let ret = self.classical_type().expect("checked by caller");
        self.bump();
        let name = self.ident()?;
        let params = self.params()?;
        let body = self.block()?;
        Ok(SubDecl { name, kind: SubKind::Function, cond: false, return_type: Some(ret), params, body, pos })
    }

    fn params(&mut self) -> Result<Vec<Param>, SyntaxError> {
        self.expect_sym("(")?;
        let mut params = Vec::new();
        if self.eat_sym(")") {
            return Ok(params);
        }
        loop {
            let ty = if let Some(t) = self.classical_type() {
                ParamType::Classical(t)
            } else if let Some(t) = self.quantum_type() {
                ParamType::Quantum(t)
            } else {
                return Err(self.error("parameter type"));
            };
            self.bump();
            let name = self.ident()?;
            params.push(Param { name, ty });
            if self.eat_sym(")") {
                return Ok(params);
            }
            self.expect_sym(",")?;
        }
    }

    fn block(&mut self) -> Result<Block, SyntaxError> {
        self.expect_sym("{")?;
        let mut stmts = Vec::new();
        while !self.eat_sym("}") {
            if self.at_end() {
                return Err(self.error("`}`"));
            }
            stmts.push(self.stmt()?);
        }
        Ok(stmts)
    }

    // ----- statements -----

    fn stmt(&mut self) -> Result<Stmt, SyntaxError> {
        let pos = self.pos();
        let kind = self.stmt_kind()?;
        Ok(Stmt { kind, pos })
    }

    fn stmt_kind(&mut self) -> Result<StmtKind, SyntaxError> {
        let Some(tok) = self.peek() else {
            return Err(self.error("statement"));
        };

        if tok.is_symbol("{") {
            return Ok(StmtKind::Block(self.block()?));
        }
        if tok.is_symbol("!") {
            self.bump();
            let name = self.ident()?;
            let args = self.call_args()?;
            self.expect_sym(";")?;
            return Ok(StmtKind::Call { name, args, invert: true });
        }
        if tok.kind == TokenKind::Ident {
            let name = self.ident()?;
            if self.check_sym("(") {
                let args = self.call_args()?;
                self.expect_sym(";")?;
                return Ok(StmtKind::Call { name, args, invert: false });
            }
            if self.eat_sym("=") {
                let value = self.expr()?;
                self.expect_sym(";")?;
                return Ok(StmtKind::Assign { name, value });
            }
            return Err(self.error("`(` or `=`"));
        }
        if let Some(ty) = self.classical_type() {
            self.bump();
            let name = self.ident()?;
            let init = if self.eat_sym("=") { Some(self.expr()?) } else { None };
            self.expect_sym(";")?;
            return Ok(StmtKind::VarDecl { ty, name, init });
        }
        if let Some(ty) = self.quantum_type() {
            let kw_pos = tok.pos();
            self.bump();
            let name = self.ident()?;
            if self.eat_sym("[") {
                if ty != QuantumType::Qureg {
                    return Err(SyntaxError::new(
                        kw_pos,
                        format!("only `qureg` registers can be allocated, not `{}`", ty.keyword()),
                    ));
                }
                let size = self.expr()?;
                self.expect_sym("]")?;
                self.expect_sym(";")?;
                return Ok(StmtKind::RegAlloc { name, size });
            }
            if self.eat_sym("=") {
                let value = self.expr()?;
                self.expect_sym(";")?;
                return Ok(StmtKind::RegAlias { ty, name, value });
            }
            return Err(self.error("`[` or `=`"));
        }
        if tok.kind != TokenKind::Keyword {
            return Err(self.error("statement"));
        }
        match tok.text.as_str() {
            "const" => {
                self.bump();
                let name = self.ident()?;
                self.expect_sym("=")?;
                let value = self.expr()?;
                self.expect_sym(";")?;
                Ok(StmtKind::ConstDecl { name, value })
            }
            "if" => self.if_stmt(),
            "for" => {
                self.bump();
                let var = self.ident()?;
                self.expect_sym("=")?;
                let from = self.expr()?;
                self.expect_kw("to")?;
                let to = self.expr()?;
                let step = if self.eat_kw("step") { Some(self.expr()?) } else { None };
                let body = self.block()?;
                Ok(StmtKind::For { var, from, to, step, body })
            }
            "while" => {
                self.bump();
                let cond = self.expr()?;
                let body = self.block()?;
                Ok(StmtKind::While { cond, body })
            }
            "measure" => {
                self.bump();
                let reg = self.expr()?;
                let target = if self.eat_sym(",") { Some(self.ident()?) } else { None };
                self.expect_sym(";")?;
                Ok(StmtKind::Measure { reg, target })
            }
            "reset" => self.bare(StmtKind::Reset),
            "dump" => self.bare(StmtKind::Dump),
            "exit" => self.bare(StmtKind::Exit),
            "print" => {
                self.bump();
                let mut args = vec![self.expr()?];
                while self.eat_sym(",") {
                    args.push(self.expr()?);
                }
                self.expect_sym(";")?;
                Ok(StmtKind::Print(args))
            }
            "return" => {
                self.bump();
                let value = if self.check_sym(";") { None } else { Some(self.expr()?) };
                self.expect_sym(";")?;
                Ok(StmtKind::Return(value))
            }
            _ => Err(self.error("statement")),
        }
    }

    fn bare(&mut self, kind: StmtKind) -> Result<StmtKind, SyntaxError> {
        self.bump();
        self.expect_sym(";")?;
        Ok(kind)
    }

    fn if_stmt(&mut self) -> Result<StmtKind, SyntaxError> {
        self.expect_kw("if")?;
        let cond = self.expr()?;
        let then_block = self.block()?;
        let else_block = if self.eat_kw("else") {
            if self.check_kw("if") {
                let pos = self.pos();
                let kind = self.if_stmt()?;
                Some(vec![Stmt { kind, pos }])
            } else {
                Some(self.block()?)
            }
        } else {
            None
        };
        Ok(StmtKind::If { cond, then_block, else_block, forking: false })
    }

    fn call_args(&mut self) -> Result<Vec<Expr>, SyntaxError> {
        self.expect_sym("(")?;
        let mut args = Vec::new();
        if self.eat_sym(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat_sym(")") {
                return Ok(args);
            }
            self.expect_sym(",")?;
        }
    }

    // ----- expressions -----

    pub fn expr(&mut self) -> Result<Expr, SyntaxError> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinaryOp> {
        let t = self.peek()?;
        let op = match (t.kind, t.text.as_str()) {
            (TokenKind::Keyword, "or") => BinaryOp::Or,
            (TokenKind::Keyword, "xor") => BinaryOp::Xor,
            (TokenKind::Keyword, "and") => BinaryOp::And,
            (TokenKind::Keyword, "mod") => BinaryOp::Mod,
            (TokenKind::Symbol, "==") => BinaryOp::Eq,
            (TokenKind::Symbol, "!=") => BinaryOp::Ne,
            (TokenKind::Symbol, "<") => BinaryOp::Lt,
            (TokenKind::Symbol, "<=") => BinaryOp::Le,
            (TokenKind::Symbol, ">") => BinaryOp::Gt,
            (TokenKind::Symbol, ">=") => BinaryOp::Ge,
            (TokenKind::Symbol, "&") => BinaryOp::Concat,
            (TokenKind::Symbol, "+") => BinaryOp::Add,
            (TokenKind::Symbol, "-") => BinaryOp::Sub,
            (TokenKind::Symbol, "*") => BinaryOp::Mul,
            (TokenKind::Symbol, "/") => BinaryOp::Div,
            _ => return None,
        };
        Some(op)
    }

    /// Left-associative precedence climbing for every level below `^`.
    fn binary(&mut self, min_prec: u8) -> Result<Expr, SyntaxError> {
        let mut lhs = self.power()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            let pos = self.bump().pos();
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.unary()?;
        if self.check_sym("^") {
            let pos = self.bump().pos();
            let exp = self.power()?;
            return Ok(Expr::new(ExprKind::Binary(BinaryOp::Pow, Box::new(base), Box::new(exp)), pos));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        let op = if self.eat_sym("-") {
            UnaryOp::Neg
        } else if self.eat_kw("not") {
            UnaryOp::Not
        } else if self.eat_sym("#") {
            UnaryOp::Length
        } else {
            return self.postfix();
        };
        let operand = self.unary()?;
        Ok(Expr::new(ExprKind::Unary(op, Box::new(operand)), pos))
    }

    fn postfix(&mut self) -> Result<Expr, SyntaxError> {
        let mut e = self.primary()?;
        while self.check_sym("[") {
            let pos = self.bump().pos();
            let first = self.expr()?;
            if self.eat_sym(":") {
                let last = self.expr()?;
                self.expect_sym("]")?;
                e = Expr::new(ExprKind::Slice(Box::new(e), Box::new(first), Box::new(last)), pos);
            } else {
                self.expect_sym("]")?;
                e = Expr::new(ExprKind::Index(Box::new(e), Box::new(first)), pos);
            }
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        let Some(tok) = self.peek() else {
            return Err(self.error("expression"));
        };
        match tok.kind {
            TokenKind::Int => {
                self.bump();
                let v = tok
                    .text
                    .parse::<i64>()
                    .map_err(|_| SyntaxError::new(pos, format!("integer literal `{}` out of range", tok.text)))?;
                Ok(Expr::new(ExprKind::Int(v), pos))
            }
            TokenKind::Real => {
                self.bump();
                let v = tok
                    .text
                    .parse::<f64>()
                    .map_err(|_| SyntaxError::new(pos, format!("malformed real literal `{}`", tok.text)))?;
                Ok(Expr::new(ExprKind::Real(v), pos))
            }
            TokenKind::Ident => {
                let name = self.ident()?;
                if self.check_sym("(") {
                    let args = self.call_args()?;
                    Ok(Expr::new(ExprKind::Call(name, args), pos))
                } else {
                    Ok(Expr::new(ExprKind::Var(name), pos))
                }
            }
            TokenKind::Symbol if tok.text == "(" => {
                self.bump();
                let inner = self.expr()?;
                if self.eat_sym(",") {
                    let im = self.expr()?;
                    self.expect_sym(")")?;
                    return Ok(Expr::new(ExprKind::Complex(Box::new(inner), Box::new(im)), pos));
                }
                self.expect_sym(")")?;
                Ok(inner)
            }
            _ => Err(self.error("expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_source;

    fn expr(src: &str) -> Expr {
        let tree = parse_source(&format!("x = {src};")).unwrap();
        match &tree.items[0] {
            Item::Stmt(Stmt { kind: StmtKind::Assign { value, .. }, .. }) => value.clone(),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn shape(e: &Expr) -> String {
        match &e.kind {
            ExprKind::Int(v) => v.to_string(),
            ExprKind::Real(v) => format!("{v:?}"),
            ExprKind::Var(n) => n.clone(),
            ExprKind::Unary(op, a) => format!("({op:?} {})", shape(a)),
            ExprKind::Binary(op, a, b) => format!("({} {} {})", shape(a), op.symbol(), shape(b)),
            ExprKind::Index(r, i) => format!("{}[{}]", shape(r), shape(i)),
            ExprKind::Slice(r, a, b) => format!("{}[{}:{}]", shape(r), shape(a), shape(b)),
            ExprKind::Call(n, args) => format!("{n}({})", args.iter().map(shape).collect::<Vec<_>>().join(",")),
            ExprKind::Complex(a, b) => format!("<{},{}>", shape(a), shape(b)),
        }
    }

    #[test]
    fn precedence_ladder() {
        assert_eq!(shape(&expr("a or b xor c and d")), "(a or (b xor (c and d)))");
        assert_eq!(shape(&expr("1 + 2 * 3 ^ 2")), "(1 + (2 * (3 ^ 2)))");
        assert_eq!(shape(&expr("a + 1 < b and c")), "(((a + 1) < b) and c)");
        assert_eq!(shape(&expr("n mod 2 == 1")), "((n mod 2) == 1)");
        assert_eq!(shape(&expr("-pi/3")), "((Neg pi) / 3)");
        assert_eq!(shape(&expr("-2^2")), "((Neg 2) ^ 2)");
        assert_eq!(shape(&expr("not a and b")), "((Not a) and b)");
    }

    #[test]
    fn power_is_right_associative() {
        assert_eq!(shape(&expr("2^3^2")), "(2 ^ (3 ^ 2))");
        assert_eq!(shape(&expr("pi/2^(i-j)")), "(pi / (2 ^ (i - j)))");
    }

    #[test]
    fn register_expressions() {
        assert_eq!(shape(&expr("x[0:i-1] & e")), "(x[0:(i - 1)] & e)");
        assert_eq!(shape(&expr("#x-1")), "((Length x) - 1)");
        assert_eq!(shape(&expr("q[n-i]")), "q[(n - i)]");
        assert_eq!(shape(&expr("(1, 2.5)")), "<1,2.5>");
    }

    #[test]
    fn cond_flag_and_params() {
        let tree = parse_source("cond qufunct inc(qureg x,quconst e) { }").unwrap();
        let sub = tree.subroutines().next().unwrap();
        assert!(sub.cond);
        assert_eq!(sub.kind, SubKind::Qufunct);
        assert_eq!(sub.params[1].ty, ParamType::Quantum(QuantumType::Quconst));
    }

    #[test]
    fn for_loop_with_negative_step() {
        let tree = parse_source("for i = #x-1 to 1 step -1 { Not(x[i]); }").unwrap();
        let Item::Stmt(Stmt { kind: StmtKind::For { step, body, .. }, .. }) = &tree.items[0] else { panic!() };
        assert_eq!(shape(step.as_ref().unwrap()), "(Neg 1)");
        assert_eq!(body.len(), 1);
    }

    #[test]
    fn function_declaration() {
        let tree = parse_source("int twice(int n) { return 2*n; }").unwrap();
        let sub = tree.subroutines().next().unwrap();
        assert_eq!(sub.kind, SubKind::Function);
        assert_eq!(sub.return_type, Some(ClassicalType::Int));
    }

    #[test]
    fn measure_inside_operator_parses() {
        assert!(parse_source("operator f(qureg q){ measure q; }").is_ok());
    }

    #[test]
    fn interactive_lines() {
        assert!(parse_interactive("").unwrap().items.is_empty());
        let t = parse_interactive("dump;").unwrap();
        assert!(matches!(t.items[0], Item::Stmt(Stmt { kind: StmtKind::Dump, .. })));
        let t = parse_interactive("qureg a[1]; qureg b[1]; // allocate 2 qubits").unwrap();
        assert_eq!(t.items.len(), 2);
        let t = parse_interactive("if a and b { inc(q); }").unwrap();
        assert!(matches!(t.items[0], Item::Stmt(Stmt { kind: StmtKind::If { .. }, .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_source("qureg q[2]\ndump;").unwrap_err();
        assert_eq!((err.pos.line, err.pos.column), (2, 1));
        assert!(err.message.contains("`;`"), "{}", err.message);
        assert!(!err.incomplete);

        let err = parse_source("operator f(qureg q) {").unwrap_err();
        assert!(err.incomplete);
        assert!(parse_source("quconst c[2];").is_err());
        assert!(parse_source("procedure p() { } else").is_err());
    }
}
