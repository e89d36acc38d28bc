//! Linear forms in the index variables whose coefficients are affine in the
//! framing symbol, and the small expression language used to write them.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | primary)*     juxtaposition multiplies
//! unary  := ('+' | '-') unary | primary
//! primary:= integer | identifier | '(' expr ')'
//! ```
//!
//! Products must stay linear in the index variables and affine in the
//! framing symbol; division is only by nonzero rational constants.

use std::collections::BTreeMap;
use std::fmt;

use super::IndexVector;
use crate::exactnum::{FramedRational, Rational};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FramedLinearForm {
    pub constant: FramedRational,
    pub coeffs: BTreeMap<String, FramedRational>,
}

impl FramedLinearForm {
    pub fn constant(c: FramedRational) -> Self {
        FramedLinearForm {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(name: &str) -> Self {
        let mut f = FramedLinearForm::default();
        f.coeffs
            .insert(name.to_string(), FramedRational::constant(Rational::one()));
        f
    }

    pub fn coeff(&self, var: &str) -> FramedRational {
        self.coeffs.get(var).cloned().unwrap_or_default()
    }

    pub fn is_framing_free(&self) -> bool {
        self.constant.is_constant() && self.coeffs.values().all(FramedRational::is_constant)
    }

    pub fn eval(&self, index: &IndexVector, framing: &Rational) -> Rational {
        self.coeffs
            .iter()
            .map(|(v, c)| &c.eval(framing) * &Rational::from(index.get(v)))
            .fold(self.constant.eval(framing), |acc, x| acc + x)
    }

    fn normalized(mut self) -> Self {
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    fn add(&self, other: &FramedLinearForm) -> Self {
        let mut out = self.clone();
        out.constant = &out.constant + &other.constant;
        for (v, c) in &other.coeffs {
            let slot = out.coeffs.entry(v.clone()).or_default();
            *slot = &*slot + c;
        }
        out.normalized()
    }

    fn neg(&self) -> Self {
        FramedLinearForm {
            constant: -&self.constant,
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), -c)).collect(),
        }
    }

    fn times_scalar(&self, s: &FramedRational) -> Result<Self, String> {
        let deg = || "framing symbol would appear squared".to_string();
        Ok(FramedLinearForm {
            constant: self.constant.checked_mul(s).map_err(|_| deg())?,
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| Ok((v.clone(), c.checked_mul(s).map_err(|_| deg())?)))
                .collect::<Result<_, String>>()?,
        }
        .normalized())
    }

    fn mul(&self, other: &FramedLinearForm) -> Result<Self, String> {
        match (self.coeffs.is_empty(), other.coeffs.is_empty()) {
            (true, _) => other.times_scalar(&self.constant),
            (_, true) => self.times_scalar(&other.constant),
            _ => Err("product of two index variables is not linear".into()),
        }
    }

    fn div(&self, other: &FramedLinearForm) -> Result<Self, String> {
        if !other.coeffs.is_empty() || !other.constant.is_constant() {
            return Err("division is only by rational constants".into());
        }
        let inv = other
            .constant
            .c0
            .recip()
            .map_err(|_| "division by zero".to_string())?;
        self.times_scalar(&FramedRational::constant(inv))
    }

    /// Renders with `symbol` standing for the framing.
    pub fn render(&self, symbol: &str) -> String {
        let fr = |c: &FramedRational| match (c.c0.is_zero(), c.c1.is_zero()) {
            (_, true) => c.c0.to_string(),
            (true, false) => format!("{}{symbol}", scalar_prefix(&c.c1)),
            (false, false) => format!("({} + {}{symbol})", c.c0, scalar_prefix(&c.c1)),
        };
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(v, c)| {
                if *c == FramedRational::constant(Rational::one()) {
                    v.clone()
                } else {
                    format!("{}*{v}", fr(c))
                }
            })
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(fr(&self.constant));
        }
        parts.join(" + ")
    }
}

fn scalar_prefix(c: &Rational) -> String {
    if c.is_one() {
        String::new()
    } else {
        format!("{c}*")
    }
}

impl fmt::Display for FramedLinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("phi"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormParseError {
    pub column: usize,
    pub message: String,
    /// Problems with names or values rather than with the shape of the text.
    pub semantic: bool,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, FormParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits.parse().map_err(|_| FormParseError {
                column: start + 1,
                message: format!("integer literal {digits} is too large"),
                semantic: false,
            })?;
            out.push((start, Token::Int(n)));
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else if "+-*/()".contains(c) {
            out.push((start, Token::Op(c)));
            i += 1;
        } else {
            return Err(FormParseError {
                column: start + 1,
                message: format!("unexpected character {c:?}"),
                semantic: false,
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    index_vars: &'a [String],
    framing_symbol: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(c, _)| *c) + 1
    }

    fn syntax(&self, message: impl Into<String>) -> FormParseError {
        FormParseError {
            column: self.column(),
            message: message.into(),
            semantic: false,
        }
    }

    fn semantic(&self, column: usize, message: impl Into<String>) -> FormParseError {
        FormParseError {
            column,
            message: message.into(),
            semantic: true,
        }
    }

    fn expr(&mut self) -> Result<FramedLinearForm, FormParseError> {
        let mut acc = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' {
                acc.add(&rhs)
            } else {
                acc.add(&rhs.neg())
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FramedLinearForm, FormParseError> {
        let mut acc = self.unary()?;
        loop {
            let col = self.column();
            let (rhs, divide) = match self.peek() {
                Some(Token::Op('*')) => {
                    self.pos += 1;
                    (self.unary()?, false)
                }
                Some(Token::Op('/')) => {
                    self.pos += 1;
                    (self.unary()?, true)
                }
                Some(Token::Op('(')) | Some(Token::Ident(_)) | Some(Token::Int(_)) => {
                    (self.primary()?, false)
                }
                _ => return Ok(acc),
            };
            let result = if divide { acc.div(&rhs) } else { acc.mul(&rhs) };
            acc = result.map_err(|m| self.semantic(col, m))?;
        }
    }

    fn unary(&mut self) -> Result<FramedLinearForm, FormParseError> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<FramedLinearForm, FormParseError> {
        let col = self.column();
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(FramedLinearForm::constant(FramedRational::constant(
                    Rational::from(n),
                )))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if name == self.framing_symbol {
                    Ok(FramedLinearForm::constant(FramedRational::symbol()))
                } else if self.index_vars.contains(&name) {
                    Ok(FramedLinearForm::var(&name))
                } else {
                    Err(self.semantic(col, format!("unknown variable {name}")))
                }
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Token::Op(')')) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.syntax("expected ')'")),
                }
            }
            Some(t) => Err(self.syntax(format!("unexpected {t:?}"))),
            None => Err(self.syntax("unexpected end of expression")),
        }
    }
}

/// Parses a form over `index_vars` with framing symbol `framing_symbol`.
pub fn parse_form(
    text: &str,
    index_vars: &[String],
    framing_symbol: &str,
) -> Result<FramedLinearForm, FormParseError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.chars().count(),
        index_vars,
        framing_symbol,
    };
    let form = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.syntax("trailing input"));
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vec<String> {
        ["m0", "m4", "m5"].map(String::from).to_vec()
    }

    fn parse(text: &str) -> Result<FramedLinearForm, FormParseError> {
        parse_form(text, &vars(), "f")
    }

    fn fr(c0: (i64, i64), c1: (i64, i64)) -> FramedRational {
        FramedRational::new(Rational::frac(c0.0, c0.1), Rational::frac(c1.0, c1.1))
    }

    #[test]
    fn orbifold_gamma_numerator() {
        let form = parse("(f+1)*m0/5 + 2/5*m4 + m5/5").unwrap();
        assert_eq!(form.constant, FramedRational::zero());
        assert_eq!(form.coeff("m0"), fr((1, 5), (1, 5)));
        assert_eq!(form.coeff("m4"), fr((2, 5), (0, 1)));
        assert_eq!(form.coeff("m5"), fr((1, 5), (0, 1)));
        // juxtaposition gives the same form
        assert_eq!(parse("(f+1)m0/5 + (2/5)m4 + m5/5").unwrap(), form);
    }

    #[test]
    fn evaluation() {
        let form = parse("1 + m0/5 - m4/5 - 3/5*m5").unwrap();
        let idx = IndexVector::from_pairs([("m0", 11), ("m4", 1), ("m5", 0)]);
        assert_eq!(form.eval(&idx, &Rational::zero()), Rational::from(3));
        let sign = parse("m0*(1 - (f+1)/5)").unwrap();
        let idx = IndexVector::from_pairs([("m0", 5), ("m4", 0), ("m5", 0)]);
        assert_eq!(sign.eval(&idx, &Rational::from(2)), Rational::from(2));
    }

    #[test]
    fn cancellation_drops_terms() {
        let form = parse("m4 - m4 + f - f").unwrap();
        assert_eq!(form, FramedLinearForm::default());
        assert!(form.is_framing_free());
    }

    #[test]
    fn rejects_bad_input() {
        let e = parse("m0 + q7").unwrap_err();
        assert!(e.semantic);
        assert_eq!(e.column, 6);
        assert!(parse("m0/0").unwrap_err().semantic);
        assert!(parse("m0*m4").unwrap_err().semantic);
        assert!(parse("f*f*m0").unwrap_err().semantic);
        assert!(parse("m0/m4").unwrap_err().semantic);
        let e = parse("(m0 + 1").unwrap_err();
        assert!(!e.semantic);
        assert!(!parse("m0 +").unwrap_err().semantic);
        assert!(!parse("m0 $ 1").unwrap_err().semantic);
        assert!(!parse("m0 )").unwrap_err().semantic);
    }

    #[test]
    fn render_round_trips() {
        for text in [
            "(f+1)*m0/5 + 2/5*m4 + m5/5",
            "-2/5*m0",
            "f*m0 + 2*m1 + m5 + 1",
            "0",
        ] {
            let vars: Vec<String> = ["m0", "m1", "m4", "m5"].map(String::from).to_vec();
            let form = parse_form(text, &vars, "f").unwrap();
            assert_eq!(
                parse_form(&form.render("f"), &vars, "f").unwrap(),
                form,
                "{text}"
            );
        }
    }
}
