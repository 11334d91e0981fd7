//! Parser for exterior-algebra expressions such as `V^T1 + (1/2)V^T3` or
//! `rho_bar^w1_bar - (1/4+1/2i)T2^w1_bar`.
//!
//! ```text
//! expr  := sign? term (("+" | "-") term)*
//! term  := coeff? label ("^" label)*  |  coeff
//! coeff := rational | "(" rational ")" | "(" rational? ("+"|"-") rational "i" ")" | "(" rational "i" ")"
//! ```
//!
//! Labels are the algebra's vector labels, their form labels (`rho_bar`,
//! `w1_bar`, …) or `L*` for the form dual to `L`. `−` and `∧` are accepted
//! for `-` and `^`.

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::field::{parse_rational, GaussianRational};
use crate::schouten::{GradedElement, Monomial, SchoutenAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at column {column} of {input:?}")]
pub struct ExprError {
    pub input: String,
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            input,
            chars: input.chars().collect(),
            pos: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError {
            input: self.input.to_string(),
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Some(false)
            }
            Some('-' | '−') => {
                self.pos += 1;
                Some(true)
            }
            _ => None,
        }
    }

    fn rational(&mut self) -> Result<BigRational, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '/') {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        parse_rational(&text).map_err(|_| {
            self.pos = start;
            self.error(format!("malformed rational {text:?}"))
        })
    }

    fn starts_rational(&mut self) -> bool {
        self.peek().is_some_and(|c| c.is_ascii_digit())
    }

    /// Parenthesized coefficient, after the opening parenthesis.
    fn complex(&mut self) -> Result<GaussianRational, ExprError> {
        let lead_neg = self.sign().unwrap_or(false);
        let first = if self.starts_rational() {
            self.rational()?
        } else if self.peek() == Some('i') {
            BigRational::from_integer(1.into())
        } else {
            return Err(self.error("expected a rational"));
        };
        let first = if lead_neg { -first } else { first };
        if self.eat('i') {
            self.expect(')')?;
            return Ok(GaussianRational::new(BigRational::zero(), first));
        }
        if self.eat(')') {
            return Ok(GaussianRational::new(first, BigRational::zero()));
        }
        let neg = self.sign().ok_or_else(|| self.error("expected '+', '-' or ')'"))?;
        let second = if self.starts_rational() {
            self.rational()?
        } else {
            BigRational::from_integer(1.into())
        };
        if !self.eat('i') {
            return Err(self.error("expected 'i' after the imaginary part"));
        }
        self.expect(')')?;
        Ok(GaussianRational::new(first, if neg { -second } else { second }))
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn label(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        let first = *self.chars.get(self.pos)?;
        if !first.is_ascii_alphabetic() {
            return None;
        }
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        if self.chars.get(self.pos) == Some(&'*') {
            self.pos += 1;
        }
        Some((start, self.chars[start..self.pos].iter().collect()))
    }

    fn term(&mut self, alg: &SchoutenAlgebra) -> Result<GradedElement, ExprError> {
        let coeff = if self.eat('(') {
            Some(self.complex()?)
        } else if self.starts_rational() {
            Some(GaussianRational::from(self.rational()?))
        } else {
            None
        };
        self.eat('*');
        let mut element = GradedElement::monomial(
            Monomial::one(alg.n()),
            coeff.clone().unwrap_or_else(GaussianRational::one),
        );
        let mut labels = 0;
        loop {
            let Some((start, name)) = self.label() else {
                if labels > 0 {
                    return Err(self.error("expected a label after '^'"));
                }
                break;
            };
            let generator = alg.generator_by_label(&name).ok_or_else(|| {
                self.pos = start;
                self.error(format!("unknown label {name:?}"))
            })?;
            element = element.wedge(&GradedElement::monomial(generator, GaussianRational::one()));
            labels += 1;
            if !(self.eat('^') || self.eat('∧')) {
                break;
            }
        }
        if labels == 0 && coeff.is_none() {
            return Err(self.error("expected a term"));
        }
        Ok(element)
    }
}

/// Parses an expression in the generators of `alg`.
pub fn parse_element(alg: &SchoutenAlgebra, input: &str) -> Result<GradedElement, ExprError> {
    let mut p = Parser::new(input);
    let mut total = GradedElement::zero();
    let mut neg = p.sign().unwrap_or(false);
    loop {
        let term = p.term(alg)?;
        total.add_scaled(&GaussianRational::from_int(if neg { -1 } else { 1 }), &term);
        match p.sign() {
            Some(s) => neg = s,
            None if p.peek().is_none() => return Ok(total),
            None => return Err(p.error("expected '+', '-' or end of input")),
        }
    }
}
