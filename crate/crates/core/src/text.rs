//! Plain-text circuit format.
//!
//! ```text
//! # comment
//! qubits 3
//! h 0
//! cp 0 1 1.5707963267948966
//! ccx 0 1 2
//! ```
//!
//! The first non-comment line is `qubits <n>`. Every following line is a
//! mnemonic (`h x y z s t p cp cx ccx id`, any case), its qubit operands with
//! controls first, and for `p`/`cp` an angle in radians. Blank lines and lines
//! starting with `#` are ignored. The serializer emits the canonical form:
//! lowercase, single spaces, angles with 17 significant digits, LF endings.

use std::fmt::{self, Write as _};
use std::io::Read;

use thiserror::Error;

use crate::circuit::{BasisState, Circuit, CircuitError, Gate, GateKind, MAX_QUBITS};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind}, line {line}, column {column}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// 1-based.
    pub line: usize,
    /// 1-based character column of the offending token.
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("missing `qubits <n>` header")]
    MissingHeader,
    #[error("malformed header, expected `qubits <n>`")]
    MalformedHeader,
    #[error("qubit count `{0}` is not an integer in 1..={MAX_QUBITS}")]
    InvalidQubitCount(String),
    #[error("duplicate `qubits` header")]
    DuplicateHeader,
    #[error("unknown mnemonic `{0}`")]
    UnknownMnemonic(String),
    #[error("`{mnemonic}` takes {expected} qubit operand(s), got {got}")]
    ArityMismatch {
        mnemonic: String,
        expected: usize,
        got: usize,
    },
    #[error("invalid qubit index `{0}`")]
    InvalidQubitIndex(String),
    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("duplicate operand {0}")]
    DuplicateOperand(usize),
    #[error("missing angle for `{0}`")]
    MissingAngle(String),
    #[error("unexpected angle for `{0}`")]
    UnexpectedAngle(String),
    #[error("invalid angle `{0}`")]
    InvalidAngle(String),
    #[error("angle `{0}` is not finite")]
    NonFiniteAngle(String),
    #[error("unexpected token `{0}`")]
    ExtraToken(String),
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
    #[error("read failed: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisStateError {
    #[error("bitstring has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid character {ch:?} at position {position}; only 0 and 1 are allowed")]
    InvalidCharacter { ch: char, position: usize },
    #[error(transparent)]
    Width(#[from] CircuitError),
}

/// A whitespace-separated token and its 1-based column.
#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (column, (offset, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((offset, column + 1)),
            (true, Some((begin, col))) => {
                tokens.push(Token {
                    text: &line[begin..offset],
                    column: col,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((begin, col)) = start {
        tokens.push(Token {
            text: &line[begin..],
            column: col,
        });
    }
    tokens
}

fn error(kind: ParseErrorKind, line: usize, column: usize) -> ParseError {
    ParseError { kind, line, column }
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut num_qubits: Option<usize> = None;
    let mut gates = Vec::new();
    let mut last_line = 0;

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        last_line = line_no;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let tokens = tokenize(line);
        let Some(first) = tokens.first() else {
            continue;
        };
        if first.text.starts_with('#') {
            continue;
        }
        match num_qubits {
            None => num_qubits = Some(parse_header(&tokens, line_no)?),
            Some(n) => gates.push(parse_gate(&tokens, n, line_no)?),
        }
    }

    let n = num_qubits.ok_or_else(|| error(ParseErrorKind::MissingHeader, last_line.max(1), 1))?;
    // Every gate was validated against `n` above.
    Ok(Circuit::new(n, gates).expect("parsed gates are valid"))
}

/// Reads a whole circuit file from `reader`.
pub fn read_circuit(mut reader: impl Read) -> Result<Circuit, ParseError> {
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|e| error(ParseErrorKind::Io(e.to_string()), 1, 1))?;
    let text = String::from_utf8(bytes).map_err(|e| {
        let valid = &e.as_bytes()[..e.utf8_error().valid_up_to()];
        let valid = std::str::from_utf8(valid).unwrap_or_default();
        let line = valid.matches('\n').count() + 1;
        let column = valid.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
        error(ParseErrorKind::InvalidUtf8, line, column)
    })?;
    parse_circuit(&text)
}

fn parse_header(tokens: &[Token<'_>], line: usize) -> Result<usize, ParseError> {
    let keyword = tokens[0];
    if !keyword.text.eq_ignore_ascii_case("qubits") {
        return Err(error(ParseErrorKind::MalformedHeader, line, keyword.column));
    }
    let Some(count) = tokens.get(1) else {
        return Err(error(ParseErrorKind::MalformedHeader, line, keyword.column));
    };
    if let Some(extra) = tokens.get(2) {
        return Err(error(
            ParseErrorKind::ExtraToken(extra.text.to_string()),
            line,
            extra.column,
        ));
    }
    match count.text.parse::<usize>() {
        Ok(n) if (1..=MAX_QUBITS).contains(&n) => Ok(n),
        _ => Err(error(
            ParseErrorKind::InvalidQubitCount(count.text.to_string()),
            line,
            count.column,
        )),
    }
}

fn kind_for(mnemonic: &str) -> Option<GateKind> {
    Some(match mnemonic.to_ascii_lowercase().as_str() {
        "h" => GateKind::H,
        "x" => GateKind::X,
        "y" => GateKind::Y,
        "z" => GateKind::Z,
        "s" => GateKind::S,
        "t" => GateKind::T,
        "p" => GateKind::P(0.0),
        "cp" => GateKind::CP(0.0),
        "cx" => GateKind::CNOT,
        "ccx" => GateKind::CCX,
        "id" => GateKind::I,
        _ => return None,
    })
}

fn parse_gate(tokens: &[Token<'_>], num_qubits: usize, line: usize) -> Result<Gate, ParseError> {
    let head = tokens[0];
    if head.text.eq_ignore_ascii_case("qubits") {
        return Err(error(ParseErrorKind::DuplicateHeader, line, head.column));
    }
    let kind = kind_for(head.text).ok_or_else(|| {
        error(
            ParseErrorKind::UnknownMnemonic(head.text.to_string()),
            line,
            head.column,
        )
    })?;
    let mnemonic = kind.mnemonic().to_string();
    let arity = kind.arity();
    let takes_angle = kind.angle().is_some();
    let args = &tokens[1..];

    if args.len() < arity {
        let column = args.last().unwrap_or(&head).column;
        let kind = ParseErrorKind::ArityMismatch {
            mnemonic,
            expected: arity,
            got: args.len(),
        };
        return Err(error(kind, line, column));
    }

    let mut qubits = Vec::with_capacity(arity);
    for token in &args[..arity] {
        let qubit = token.text.parse::<usize>().map_err(|_| {
            error(
                ParseErrorKind::InvalidQubitIndex(token.text.to_string()),
                line,
                token.column,
            )
        })?;
        if qubit >= num_qubits {
            return Err(error(
                ParseErrorKind::QubitOutOfRange { qubit, num_qubits },
                line,
                token.column,
            ));
        }
        if qubits.contains(&qubit) {
            return Err(error(
                ParseErrorKind::DuplicateOperand(qubit),
                line,
                token.column,
            ));
        }
        qubits.push(qubit);
    }

    let rest = &args[arity..];
    let kind = if takes_angle {
        let Some(angle) = rest.first() else {
            let column = args.last().unwrap_or(&head).column;
            return Err(error(ParseErrorKind::MissingAngle(mnemonic), line, column));
        };
        let theta = angle.text.parse::<f64>().map_err(|_| {
            error(
                ParseErrorKind::InvalidAngle(angle.text.to_string()),
                line,
                angle.column,
            )
        })?;
        if !theta.is_finite() {
            return Err(error(
                ParseErrorKind::NonFiniteAngle(angle.text.to_string()),
                line,
                angle.column,
            ));
        }
        if let Some(extra) = rest.get(1) {
            return Err(error(
                ParseErrorKind::ExtraToken(extra.text.to_string()),
                line,
                extra.column,
            ));
        }
        match kind {
            GateKind::P(_) => GateKind::P(theta),
            _ => GateKind::CP(theta),
        }
    } else {
        if let Some(extra) = rest.first() {
            let kind = if is_angle_literal(extra.text) {
                ParseErrorKind::UnexpectedAngle(mnemonic)
            } else {
                ParseErrorKind::ArityMismatch {
                    mnemonic,
                    expected: arity,
                    got: args.len(),
                }
            };
            return Err(error(kind, line, extra.column));
        }
        kind
    };

    Ok(Gate::new(kind, &qubits).expect("operand count matches arity"))
}

/// A token that reads as a number but not as a qubit index.
fn is_angle_literal(text: &str) -> bool {
    text.parse::<usize>().is_err() && text.parse::<f64>().is_ok()
}

/// Canonical text form of `circuit`.
pub fn serialize_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "qubits {}", circuit.num_qubits()).unwrap();
    for gate in circuit.gates() {
        out.push_str(gate.kind().mnemonic());
        for q in gate.qubits() {
            write!(out, " {q}").unwrap();
        }
        if let Some(theta) = gate.kind().angle() {
            write!(out, " {}", Sig17(theta)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// `printf("%.17g")` rendering: 17 significant digits, trailing zeros
/// trimmed, exponent form outside `1e-5 <= |x| < 1e17`.
struct Sig17(f64);

impl fmt::Display for Sig17 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.0;
        if x == 0.0 {
            return f.write_str(if x.is_sign_negative() { "-0" } else { "0" });
        }
        let sci = format!("{x:.16e}");
        let (mantissa, exponent) = sci.split_once('e').expect("exponent present");
        let exponent: i32 = exponent.parse().expect("integer exponent");
        if (-5..17).contains(&exponent) {
            let decimals = (16 - exponent) as usize;
            let fixed = format!("{x:.decimals$}");
            f.write_str(trim_fraction(&fixed))
        } else {
            let sign = if exponent < 0 { '-' } else { '+' };
            write!(f, "{}e{sign}{:02}", trim_fraction(mantissa), exponent.abs())
        }
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Parses a bitstring whose leftmost character is qubit 0.
pub fn parse_basis_state(text: &str, n: usize) -> Result<BasisState, BasisStateError> {
    let got = text.chars().count();
    if got != n {
        return Err(BasisStateError::LengthMismatch { expected: n, got });
    }
    let mut bits = 0u64;
    for (position, ch) in text.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => bits |= 1 << position,
            _ => return Err(BasisStateError::InvalidCharacter { ch, position }),
        }
    }
    Ok(BasisState::new(bits, n)?)
}
