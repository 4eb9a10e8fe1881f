//! Statement parser.
//!
//! Grammar baseline (see `docs/grammar.md`):
//!
//! ```text
//! rule      ::= head? (":-" body)? "."
//! head      ::= hlit (disj hlit)*          disj: "|" ";" (Gringo), "v" "|" (DLV)
//! hlit      ::= literal (":" literal)*     conditions: Gringo only
//! body      ::= belem ("," belem)*
//! belem     ::= "not"? (aggregate | literal (":" literal)* | term cmp term)
//! aggregate ::= (term cmp?)? "#count"|"#sum"|"#min"|"#max" "{" elems "}" (cmp? term)?
//! elems     ::= (terms (":" cond ("," cond)*)?) (";" ...)*
//! term      ::= sum (".." sum)?
//! ```

use crate::model::*;
use crate::span::{LineIndex, SourceSpan};

use super::codes;
use super::lexer::{Token, TokenKind};
use super::Diagnostic;

#[derive(Debug)]
struct SyntaxError {
    message: String,
    start: usize,
    end: usize,
}

type PResult<T> = Result<T, SyntaxError>;

const SKIPPED_DIRECTIVES: &[&str] = &[
    "#show", "#hide", "#minimize", "#maximize", "#minimise", "#maximise", "#compute",
    "#domain", "#external", "#maxint", "#include", "#base", "#cumulative", "#volatile",
    "#program", "#heuristic", "#project", "#edge", "#script", "#begin_lua", "#end_lua",
];

pub(super) fn parse_statements(
    source: &str,
    index: &LineIndex,
    dialect: Dialect,
    tokens: &[Token],
    diagnostics: &mut Vec<Diagnostic>,
) -> Vec<Rule> {
    let mut rules = Vec::new();
    let mut start = 0;
    while start < tokens.len() {
        let mut end = start;
        while end < tokens.len() && tokens[end].kind != TokenKind::Dot {
            end += 1;
        }
        let terminated = end < tokens.len();
        if terminated {
            end += 1;
            // weak constraints carry their weight after the dot: `:~ b. [w:l]`
            if tokens[start].kind == TokenKind::WeakIf
                && tokens.get(end).map(|t| &t.kind) == Some(&TokenKind::LBracket)
            {
                while end < tokens.len() && tokens[end].kind != TokenKind::RBracket {
                    end += 1;
                }
                end = (end + 1).min(tokens.len());
            }
        }
        let segment = &tokens[start..end];
        let mut p = StmtParser {
            toks: segment,
            pos: 0,
            source,
            index,
            dialect,
            diags: Vec::new(),
        };
        if !terminated {
            let first = &segment[0];
            let last = &segment[segment.len() - 1];
            diagnostics.push(Diagnostic::error(
                codes::UNTERMINATED_RULE,
                "statement is not terminated by `.`",
                index.span(source, first.start, last.end),
            ));
        } else {
            match p.statement() {
                Ok(Some(rule)) => rules.push(rule),
                Ok(None) => {}
                Err(e) => {
                    // drop partial warnings: the statement is discarded as a whole
                    p.diags.clear();
                    diagnostics.push(Diagnostic::error(
                        codes::SYNTAX_ERROR,
                        e.message,
                        index.span(source, e.start, e.end),
                    ));
                }
            }
            diagnostics.append(&mut p.diags);
        }
        start = end;
    }
    rules
}

/// Parses a single term, e.g. for cursor lookups or command-line input.
pub fn parse_term(text: &str, dialect: Dialect) -> Result<Term, String> {
    let index = LineIndex::new("", text);
    let lexed = super::lexer::lex(text, dialect);
    let mut p = StmtParser {
        toks: &lexed.tokens,
        pos: 0,
        source: text,
        index: &index,
        dialect,
        diags: Vec::new(),
    };
    let t = p.term().map_err(|e| e.message)?;
    if p.pos != lexed.tokens.len() {
        return Err("unexpected input after term".into());
    }
    Ok(t)
}

/// Parses one standard literal starting at token `pos`. Returns the literal
/// and the index of the first token after it, or a message and byte offset.
pub(super) fn literal_at(
    source: &str,
    index: &LineIndex,
    dialect: Dialect,
    tokens: &[Token],
    pos: usize,
) -> Result<(StandardLiteral, usize), (String, usize)> {
    let mut p = StmtParser {
        toks: tokens,
        pos,
        source,
        index,
        dialect,
        diags: Vec::new(),
    };
    match p.standard_literal(false) {
        Ok(l) => Ok((l, p.pos)),
        Err(e) => Err((e.message, e.start)),
    }
}

struct StmtParser<'a> {
    toks: &'a [Token],
    pos: usize,
    source: &'a str,
    index: &'a LineIndex,
    dialect: Dialect,
    diags: Vec<Diagnostic>,
}

impl<'a> StmtParser<'a> {
    fn peek(&self) -> Option<&'a TokenKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, ahead: usize) -> Option<&'a TokenKind> {
        self.toks.get(self.pos + ahead).map(|t| &t.kind)
    }

    fn at(&self, kind: &TokenKind) -> bool {
        self.peek() == Some(kind)
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Some(TokenKind::Ident(w)) if w == word)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.at(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// `not` only counts as a keyword when something literal-like follows.
    fn eat_not(&mut self) -> bool {
        if self.at_ident("not")
            && matches!(
                self.peek_at(1),
                Some(
                    TokenKind::Ident(_)
                        | TokenKind::Minus
                        | TokenKind::Directive(_)
                        | TokenKind::Variable(_)
                        | TokenKind::Integer(_)
                        | TokenKind::Str(_)
                        | TokenKind::LParen
                )
            )
        {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn cur_start(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|t| t.start)
            .unwrap_or_else(|| self.toks.last().map(|t| t.end).unwrap_or(0))
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            self.cur_start()
        } else {
            self.toks[self.pos - 1].end
        }
    }

    fn span(&self, start: usize, end: usize) -> SourceSpan {
        self.index.span(self.source, start, end)
    }

    fn span_from(&self, start: usize) -> SourceSpan {
        self.span(start, self.prev_end())
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let (start, end) = self
            .toks
            .get(self.pos)
            .map(|t| (t.start, t.end))
            .unwrap_or_else(|| {
                let e = self.toks.last().map(|t| t.end).unwrap_or(0);
                (e, e)
            });
        let mut message = message.into();
        if let Some(TokenKind::Invalid(why)) = self.peek() {
            message = why.clone();
        }
        Err(SyntaxError {
            message,
            start,
            end,
        })
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> PResult<()> {
        if self.eat(&kind) {
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn warn(&mut self, code: &str, message: impl Into<String>, start: usize) {
        let span = self.span_from(start);
        self.diags.push(Diagnostic::warning(code, message, span));
    }

    fn whole_span(&self) -> SourceSpan {
        self.span(self.toks[0].start, self.toks[self.toks.len() - 1].end)
    }

    // ---- statements ----

    fn statement(&mut self) -> PResult<Option<Rule>> {
        match self.peek() {
            Some(TokenKind::Directive(d)) if d == "#const" => {
                self.diags.push(Diagnostic::info(
                    codes::CONST_SKIPPED,
                    "#const definitions are not modelled; the statement is skipped",
                    self.whole_span(),
                ));
                return Ok(None);
            }
            Some(TokenKind::Directive(d)) if SKIPPED_DIRECTIVES.contains(&d.as_str()) => {
                self.diags.push(Diagnostic::warning(
                    codes::UNSUPPORTED_STATEMENT,
                    format!("{d} statements are not modelled; the statement is skipped"),
                    self.whole_span(),
                ));
                return Ok(None);
            }
            Some(TokenKind::Directive(d)) if !is_aggregate(d) => {
                return self.error(format!("unknown directive {d}"));
            }
            Some(TokenKind::WeakIf) => {
                self.diags.push(Diagnostic::warning(
                    codes::UNSUPPORTED_STATEMENT,
                    "weak constraints are not modelled; the statement is skipped",
                    self.whole_span(),
                ));
                return Ok(None);
            }
            _ => {}
        }
        if self.has_complex_head() {
            self.diags.push(Diagnostic::warning(
                codes::UNSUPPORTED_STATEMENT,
                "choice rules and head aggregates are not modelled; the statement is skipped",
                self.whole_span(),
            ));
            return Ok(None);
        }

        let start = self.cur_start();
        let head = if self.at(&TokenKind::If) {
            Vec::new()
        } else {
            self.head()?
        };
        let mut body = Vec::new();
        if self.eat(&TokenKind::If) {
            if self.at(&TokenKind::Dot) {
                if head.is_empty() {
                    return self.error("a constraint needs a nonempty body");
                }
            } else {
                body = self.body()?;
            }
        }
        if !self.eat(&TokenKind::Dot) {
            return self.error("expected `,` or `.`");
        }
        if self.pos != self.toks.len() {
            return self.error("unexpected input after `.`");
        }
        let mut rule = Rule::new(head, body);
        rule.span = self.span_from(start);
        mark_assignments(&mut rule);
        Ok(Some(rule))
    }

    /// A `{` or aggregate before `:-` means a choice rule or head aggregate.
    fn has_complex_head(&self) -> bool {
        self.toks
            .iter()
            .take_while(|t| t.kind != TokenKind::If)
            .any(|t| match &t.kind {
                TokenKind::LBrace => true,
                TokenKind::Directive(d) => is_aggregate(d),
                _ => false,
            })
    }

    fn head(&mut self) -> PResult<Vec<StandardLiteral>> {
        let mut head = vec![self.head_literal()?];
        loop {
            let start = self.cur_start();
            match (self.dialect, self.peek()) {
                (_, Some(TokenKind::Bar)) => self.pos += 1,
                (Dialect::Gringo, Some(TokenKind::Semicolon)) => self.pos += 1,
                (Dialect::Dlv, Some(TokenKind::Ident(v))) if v == "v" => self.pos += 1,
                (Dialect::Gringo, Some(TokenKind::Ident(v))) if v == "v" => {
                    self.pos += 1;
                    self.warn(
                        codes::DIALECT_MISMATCH,
                        "`v` is DLV disjunction syntax; Gringo expects `|`",
                        start,
                    );
                }
                _ => break,
            }
            head.push(self.head_literal()?);
        }
        Ok(head)
    }

    fn head_literal(&mut self) -> PResult<StandardLiteral> {
        if self.at_ident("not") {
            return self.error("default negation is not allowed in rule heads");
        }
        let lit = self.standard_literal(false)?;
        self.conditions(lit)
    }

    fn body(&mut self) -> PResult<Vec<BodyLiteral>> {
        let mut body = vec![self.body_element()?];
        loop {
            if self.eat(&TokenKind::Comma)
                || (self.dialect == Dialect::Gringo && self.eat(&TokenKind::Semicolon))
            {
                body.push(self.body_element()?);
            } else {
                break;
            }
        }
        Ok(body)
    }

    fn body_element(&mut self) -> PResult<BodyLiteral> {
        let start = self.cur_start();
        let negated = self.eat_not();
        if self.at_aggregate() {
            return Ok(BodyLiteral::Aggregate(self.aggregate(negated, None, start)?));
        }
        // literal first; fall back to a comparison when an operator follows
        let save = (self.pos, self.diags.len());
        if matches!(self.peek(), Some(TokenKind::Ident(_)))
            || (matches!(self.peek(), Some(TokenKind::Minus))
                && matches!(self.peek_at(1), Some(TokenKind::Ident(_))))
        {
            if let Ok(mut lit) = self.standard_literal(false) {
                let follows = matches!(
                    self.peek(),
                    None | Some(
                        TokenKind::Comma | TokenKind::Semicolon | TokenKind::Dot | TokenKind::Colon
                    )
                );
                if follows {
                    lit.default_negation = negated;
                    lit.span = self.span_from(start);
                    let lit = self.conditions(lit)?;
                    return Ok(BodyLiteral::Standard(lit));
                }
            }
            self.pos = save.0;
            self.diags.truncate(save.1);
        }
        let left = self.term()?;
        if let Some(op) = self.compare_op() {
            self.pos += 1;
            if self.at_aggregate() {
                let guard = Guard { term: left, op };
                return Ok(BodyLiteral::Aggregate(self.aggregate(negated, Some(guard), start)?));
            }
            if negated {
                return self.error("comparisons cannot be negated with `not`");
            }
            let right = self.term()?;
            let mut b = BuiltinLiteral::new(op, left, right);
            b.span = self.span_from(start);
            return Ok(BodyLiteral::Builtin(b));
        }
        if self.at_aggregate() {
            self.bare_guard_warning(start);
            let guard = Guard {
                term: left,
                op: CompareOp::Le,
            };
            return Ok(BodyLiteral::Aggregate(self.aggregate(negated, Some(guard), start)?));
        }
        self.error("expected a literal, comparison, or aggregate")
    }

    fn bare_guard_warning(&mut self, start: usize) {
        if self.dialect == Dialect::Dlv {
            self.warn(
                codes::DIALECT_MISMATCH,
                "aggregate bounds without a comparison operator are Gringo syntax",
                start,
            );
        }
    }

    fn conditions(&mut self, mut lit: StandardLiteral) -> PResult<StandardLiteral> {
        let start = lit.span.start_byte;
        while self.at(&TokenKind::Colon) {
            if self.dialect == Dialect::Dlv {
                return self.error("conditional literals are not supported by DLV");
            }
            self.pos += 1;
            let negated = self.eat_not();
            let mut cond = self.standard_literal(false)?;
            cond.default_negation = negated;
            if negated {
                cond.span = self.span(self.toks[self.pos - 1].start.min(cond.span.start_byte), cond.span.end_byte);
            }
            lit.conditions.push(cond);
        }
        if !lit.conditions.is_empty() {
            lit.span = self.span_from(start);
        }
        Ok(lit)
    }

    /// `-`? name ( "(" terms ")" )?
    fn standard_literal(&mut self, allow_not: bool) -> PResult<StandardLiteral> {
        let start = self.cur_start();
        let negated = allow_not && self.eat_not();
        let strong = self.eat(&TokenKind::Minus);
        let (name, name_tok) = match self.peek() {
            Some(TokenKind::Ident(n)) => (n.clone(), &self.toks[self.pos]),
            _ => return self.error("expected a predicate name"),
        };
        self.pos += 1;
        let mut args = Vec::new();
        if self.eat(&TokenKind::LParen) {
            args = self.term_list()?;
            self.expect(TokenKind::RParen, "`)`")?;
        }
        let mut lit = StandardLiteral::atom(name, args);
        lit.strong_negation = strong;
        lit.default_negation = negated;
        lit.predicate_span = self.span(name_tok.start, name_tok.end);
        lit.span = self.span_from(start);
        Ok(lit)
    }

    fn at_aggregate(&self) -> bool {
        matches!(self.peek(), Some(TokenKind::Directive(d)) if is_aggregate(d))
    }

    fn compare_op(&self) -> Option<CompareOp> {
        Some(match self.peek()? {
            TokenKind::Eq | TokenKind::EqEq => CompareOp::Eq,
            TokenKind::Ne => CompareOp::Ne,
            TokenKind::Lt => CompareOp::Lt,
            TokenKind::Le => CompareOp::Le,
            TokenKind::Gt => CompareOp::Gt,
            TokenKind::Ge => CompareOp::Ge,
            _ => return None,
        })
    }

    fn aggregate(
        &mut self,
        negated: bool,
        lower_guard: Option<Guard>,
        start: usize,
    ) -> PResult<AggregateLiteral> {
        let function = match self.peek() {
            Some(TokenKind::Directive(d)) => match d.as_str() {
                "#count" => AggregateFunction::Count,
                "#sum" => AggregateFunction::Sum,
                "#min" => AggregateFunction::Min,
                _ => AggregateFunction::Max,
            },
            _ => return self.error("expected an aggregate"),
        };
        self.pos += 1;
        self.expect(TokenKind::LBrace, "`{`")?;
        let mut elements = Vec::new();
        if !self.at(&TokenKind::RBrace) {
            loop {
                elements.push(self.aggregate_element()?);
                if !self.eat(&TokenKind::Semicolon) {
                    break;
                }
            }
        }
        self.expect(TokenKind::RBrace, "`}`")?;
        let upper_guard = if let Some(op) = self.compare_op() {
            self.pos += 1;
            Some(Guard {
                term: self.term()?,
                op,
            })
        } else if matches!(
            (self.peek(), self.peek_at(1)),
            (Some(TokenKind::Integer(_) | TokenKind::Variable(_)), _)
                | (Some(TokenKind::Minus), Some(TokenKind::Integer(_)))
        ) {
            let gstart = self.cur_start();
            let term = self.term()?;
            self.bare_guard_warning(gstart);
            Some(Guard {
                term,
                op: CompareOp::Le,
            })
        } else {
            None
        };
        if lower_guard.is_none() && upper_guard.is_none() {
            return self.error("an aggregate needs at least one bound");
        }
        Ok(AggregateLiteral {
            function,
            elements,
            lower_guard,
            upper_guard,
            dialect: self.dialect,
            default_negation: negated,
            span: self.span_from(start),
        })
    }

    fn aggregate_element(&mut self) -> PResult<AggregateElement> {
        let start = self.cur_start();
        let terms = self.term_list()?;
        let mut conditions = Vec::new();
        if self.eat(&TokenKind::Colon) {
            loop {
                conditions.push(self.condition_literal()?);
                if !(self.eat(&TokenKind::Comma) || self.eat(&TokenKind::Colon)) {
                    break;
                }
            }
        }
        Ok(AggregateElement {
            terms,
            conditions,
            span: self.span_from(start),
        })
    }

    fn condition_literal(&mut self) -> PResult<ConditionLiteral> {
        let start = self.cur_start();
        let save = self.pos;
        let negated = self.eat_not();
        if let Ok(mut lit) = self.standard_literal(false) {
            let follows = matches!(
                self.peek(),
                None | Some(
                    TokenKind::Comma | TokenKind::Semicolon | TokenKind::Colon | TokenKind::RBrace
                )
            );
            if follows {
                lit.default_negation = negated;
                lit.span = self.span_from(start);
                return Ok(ConditionLiteral::Standard(lit));
            }
        }
        self.pos = save;
        let left = self.term()?;
        let Some(op) = self.compare_op() else {
            return self.error("expected a literal or comparison");
        };
        self.pos += 1;
        let right = self.term()?;
        let mut b = BuiltinLiteral::new(op, left, right);
        b.span = self.span_from(start);
        Ok(ConditionLiteral::Builtin(b))
    }

    // ---- terms ----

    fn term_list(&mut self) -> PResult<Vec<Term>> {
        let mut terms = vec![self.term()?];
        while self.eat(&TokenKind::Comma) {
            terms.push(self.term()?);
        }
        Ok(terms)
    }

    fn term(&mut self) -> PResult<Term> {
        let start = self.cur_start();
        let low = self.additive()?;
        if self.eat(&TokenKind::DotDot) {
            let high = self.additive()?;
            let mut t = Term::interval(low, high);
            t.span = self.span_from(start);
            return Ok(t);
        }
        Ok(low)
    }

    fn additive(&mut self) -> PResult<Term> {
        let start = self.cur_start();
        let mut left = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Plus) => ArithOp::Add,
                Some(TokenKind::Minus) => ArithOp::Sub,
                _ => return Ok(left),
            };
            self.pos += 1;
            let right = self.multiplicative()?;
            left = Term::arith(op, left, right);
            left.span = self.span_from(start);
        }
    }

    fn multiplicative(&mut self) -> PResult<Term> {
        let start = self.cur_start();
        let mut left = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Star) => ArithOp::Mul,
                Some(TokenKind::Slash) => ArithOp::Div,
                _ => return Ok(left),
            };
            self.pos += 1;
            let right = self.unary()?;
            left = Term::arith(op, left, right);
            left.span = self.span_from(start);
        }
    }

    fn unary(&mut self) -> PResult<Term> {
        let start = self.cur_start();
        if self.eat(&TokenKind::Minus) {
            if let Some(TokenKind::Integer(n)) = self.peek() {
                let n = *n;
                self.pos += 1;
                let mut t = Term::int(-n);
                t.span = self.span_from(start);
                return Ok(t);
            }
            let operand = self.unary()?;
            let mut zero = Term::int(0);
            zero.span = self.span(start, start);
            let mut t = Term::arith(ArithOp::Sub, zero, operand);
            t.span = self.span_from(start);
            return Ok(t);
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Term> {
        let start = self.cur_start();
        let kind = match self.peek() {
            Some(TokenKind::Integer(n)) => TermKind::Constant(Constant::Integer(*n)),
            Some(TokenKind::Str(s)) => TermKind::Constant(Constant::String(s.clone())),
            Some(TokenKind::Variable(v)) => TermKind::Variable { name: v.clone() },
            Some(TokenKind::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                if self.eat(&TokenKind::LParen) {
                    let args = self.term_list()?;
                    self.expect(TokenKind::RParen, "`)`")?;
                    let mut t = Term::func(name, args);
                    t.span = self.span_from(start);
                    return Ok(t);
                }
                let mut t = Term::sym(name);
                t.span = self.span_from(start);
                return Ok(t);
            }
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let mut t = self.term()?;
                self.expect(TokenKind::RParen, "`)`")?;
                // keep the inner span for constants and variables so cursor
                // lookups land on the token itself
                if matches!(t.kind, TermKind::Arithmetic { .. } | TermKind::Interval { .. }) {
                    t.span = self.span_from(start);
                }
                return Ok(t);
            }
            _ => return self.error("expected a term"),
        };
        self.pos += 1;
        Ok(Term {
            kind,
            span: self.span_from(start),
        })
    }
}

fn is_aggregate(d: &str) -> bool {
    matches!(d, "#count" | "#sum" | "#min" | "#max")
}

/// Variables occurring in positive, unconditioned standard body literals.
pub(crate) fn positive_body_variables(rule: &Rule) -> std::collections::BTreeSet<String> {
    let mut vars = std::collections::BTreeSet::new();
    for b in &rule.body {
        if let BodyLiteral::Standard(l) = b {
            if !l.default_negation && l.conditions.is_empty() {
                for a in &l.args {
                    let mut out = Vec::new();
                    a.variables(&mut out);
                    vars.extend(out.into_iter().filter_map(|t| t.as_variable().map(String::from)));
                }
            }
        }
    }
    vars
}

/// Flags `=` comparisons where exactly one side is a variable that no
/// positive body literal binds.
pub(crate) fn mark_assignments(rule: &mut Rule) {
    let bound = positive_body_variables(rule);
    let free_var = |t: &Term| t.as_variable().is_some_and(|v| v != "_" && !bound.contains(v));
    let mut flags = Vec::new();
    for b in &rule.body {
        if let BodyLiteral::Builtin(bl) = b {
            flags.push(bl.op == CompareOp::Eq && (free_var(&bl.left) != free_var(&bl.right)));
        }
    }
    let mut flags = flags.into_iter();
    for b in &mut rule.body {
        if let BodyLiteral::Builtin(bl) = b {
            bl.is_assignment = flags.next().unwrap_or(false);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn one_rule(src: &str, d: Dialect) -> Rule {
        let r = parse(src, d);
        assert!(!r.has_errors(), "{:?}", r.diagnostics);
        assert_eq!(r.program.rules.len(), 1);
        r.program.rules.into_iter().next().unwrap()
    }

    #[test]
    fn example_rule() {
        let r = one_rule("a(X) :- c(X).", Dialect::Gringo);
        assert_eq!(r.head.len(), 1);
        assert_eq!(r.head[0].predicate, "a");
        assert_eq!(r.head[0].args, vec![Term { span: r.head[0].args[0].span.clone(), ..Term::var("X") }]);
        assert!(matches!(&r.body[0], BodyLiteral::Standard(l) if l.predicate == "c"));
        assert_eq!(r.span.start_col, 1);
        assert_eq!(r.span.end_col, 14);
    }

    #[test]
    fn conditional_body_literal() {
        let r = one_rule("colored :- redEdge(X,Y):edge(X,Y):red(X):red(Y).", Dialect::Gringo);
        let BodyLiteral::Standard(l) = &r.body[0] else { panic!() };
        assert_eq!(l.predicate, "redEdge");
        assert_eq!(l.conditions.len(), 3);
        assert_eq!(l.conditions[2].predicate, "red");
    }

    #[test]
    fn conditions_rejected_in_dlv() {
        let r = parse("colored :- redEdge(X,Y):edge(X,Y).", Dialect::Dlv);
        assert_eq!(r.errors().count(), 1);
        assert!(r.program.rules.is_empty());
    }

    #[test]
    fn recovery_after_broken_rule() {
        let r = parse("a(X :- c(X). b.", Dialect::Gringo);
        assert_eq!(r.errors().count(), 1);
        assert_eq!(r.program.rules.len(), 1);
        assert_eq!(r.program.rules[0].head[0].predicate, "b");
        assert_eq!(r.diagnostics[0].span.start_col, 5);
    }

    #[test]
    fn builtins_and_assignments() {
        let r = one_rule("a(X) :- X = 3.", Dialect::Gringo);
        let BodyLiteral::Builtin(b) = &r.body[0] else { panic!() };
        assert!(b.is_assignment);
        let r = one_rule("a :- 3 = X.", Dialect::Gringo);
        let BodyLiteral::Builtin(b) = &r.body[0] else { panic!() };
        assert!(b.is_assignment);
        let r = one_rule("a :- 3 = 3.", Dialect::Gringo);
        let BodyLiteral::Builtin(b) = &r.body[0] else { panic!() };
        assert!(!b.is_assignment);
        let r = one_rule("a(X) :- c(X), X = 3.", Dialect::Gringo);
        let BodyLiteral::Builtin(b) = &r.body[1] else { panic!() };
        assert!(!b.is_assignment);
        let r = one_rule("p(X) :- q(Y), X = Y+1, Y != a.", Dialect::Dlv);
        assert_eq!(r.body.len(), 3);
        let r = one_rule("p :- a+1 < 3, f(b) = c.", Dialect::Gringo);
        assert!(matches!(&r.body[0], BodyLiteral::Builtin(_)));
        assert!(matches!(&r.body[1], BodyLiteral::Builtin(_)));
    }

    #[test]
    fn disjunction_per_dialect() {
        assert_eq!(one_rule("a v b.", Dialect::Dlv).head.len(), 2);
        assert_eq!(one_rule("a | b.", Dialect::Dlv).head.len(), 2);
        assert_eq!(one_rule("a | b; c.", Dialect::Gringo).head.len(), 3);
        let r = parse("a v b.", Dialect::Gringo);
        assert!(!r.has_errors());
        assert_eq!(r.diagnostics[0].code, codes::DIALECT_MISMATCH);
    }

    #[test]
    fn aggregates() {
        let r = one_rule("ok :- 1 #count{X : p(X)} 2.", Dialect::Gringo);
        let BodyLiteral::Aggregate(a) = &r.body[0] else { panic!() };
        assert_eq!(a.function, AggregateFunction::Count);
        assert_eq!(a.lower_guard.as_ref().unwrap().op, CompareOp::Le);
        assert_eq!(a.upper_guard.as_ref().unwrap().op, CompareOp::Le);
        let r = one_rule("ok :- #sum{W,X : p(X,W), not q(X)} > 3.", Dialect::Dlv);
        let BodyLiteral::Aggregate(a) = &r.body[0] else { panic!() };
        assert_eq!(a.elements[0].terms.len(), 2);
        assert_eq!(a.elements[0].conditions.len(), 2);
        let r = one_rule("n(N) :- N = #count{X : p(X); Y : q(Y)}.", Dialect::Gringo);
        let BodyLiteral::Aggregate(a) = &r.body[0] else { panic!() };
        assert_eq!(a.elements.len(), 2);
        assert_eq!(a.lower_guard.as_ref().unwrap().op, CompareOp::Eq);
        assert!(parse("ok :- #count{X : p(X)}.", Dialect::Gringo).has_errors());
    }

    #[test]
    fn skipped_statements() {
        let r = parse("#const n=3. #show p/1. :~ p(X). [1:1]\n{ a; b }. #minimize[p]. p.", Dialect::Gringo);
        assert_eq!(r.program.rules.len(), 1);
        assert!(!r.has_errors(), "{:?}", r.diagnostics);
        assert_eq!(r.diagnostics[0].severity, super::super::Severity::Info);
        assert_eq!(r.diagnostics.len(), 5);
    }

    #[test]
    fn strong_negation_and_negative_numbers() {
        let r = one_rule("-p(-1) :- not -q(X), r(X), X > -2.", Dialect::Dlv);
        assert!(r.head[0].strong_negation);
        assert_eq!(r.head[0].args[0].as_constant(), Some(&Constant::Integer(-1)));
        let BodyLiteral::Standard(l) = &r.body[0] else { panic!() };
        assert!(l.default_negation && l.strong_negation);
    }

    #[test]
    fn intervals_and_arithmetic() {
        let r = one_rule("p(1..N+1) :- n(N).", Dialect::Gringo);
        assert!(matches!(r.head[0].args[0].kind, TermKind::Interval { .. }));
        let t = parse_term("(X+1)*2", Dialect::Gringo).unwrap();
        assert_eq!(t.to_string(), "(X+1)*2");
    }

    #[test]
    fn missing_terminator() {
        let r = parse("a. b", Dialect::Gringo);
        assert_eq!(r.program.rules.len(), 1);
        assert_eq!(r.diagnostics[0].code, codes::UNTERMINATED_RULE);
    }

    #[test]
    fn constraint_and_facts() {
        let r = parse(":- a, not b. c. d :- .", Dialect::Gringo);
        assert_eq!(r.program.rules.len(), 3, "{:?}", r.diagnostics);
        assert_eq!(r.program.rules[0].kind(), RuleKind::Constraint);
        assert!(parse(":- .", Dialect::Gringo).has_errors());
    }
}
