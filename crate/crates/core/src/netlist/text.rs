//! Line-oriented text form of a netlist. See `docs/netlist-format.md`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gates::{Gate2x2, RotationAngle, StandardGate};
use crate::scalar::Real;
use crate::statevector::{q, QubitIndex};

use super::{GateOp, Netlist, SingleGate};

fn name<T: Real>(nl: &Netlist<T>, qb: QubitIndex) -> String {
    format!("q{}", nl.labels()[qb.get() - 1])
}

fn names<T: Real>(nl: &Netlist<T>, qs: &[QubitIndex]) -> String {
    qs.iter().map(|x| name(nl, *x)).collect::<Vec<_>>().join(" ")
}

fn entries<T: Real>(g: &Gate2x2<T>) -> String {
    let e = g.entries();
    let parts: Vec<String> = [e[0][0], e[0][1], e[1][0], e[1][1]]
        .iter()
        .map(|c| format!("({:?},{:?})", c.re, c.im))
        .collect();
    format!("[{}]", parts.join(" "))
}

/// Renders a netlist, one op per line, preceded by a `QUBITS` header.
pub fn print_netlist<T: Real>(nl: &Netlist<T>) -> String {
    let mut out = String::new();
    let header: Vec<String> = nl.labels().iter().map(|l| format!("q{l}")).collect();
    let _ = writeln!(out, "QUBITS {}", header.join(" "));
    for op in nl.ops() {
        let line = match op {
            GateOp::Single { gate, target } => match gate {
                SingleGate::Standard(StandardGate::X) => format!("NOT {}", name(nl, *target)),
                SingleGate::Standard(s) => format!("{s} {}", name(nl, *target)),
                SingleGate::Ry(a) => format!("RY {:?} {}", a.0, name(nl, *target)),
                SingleGate::Matrix(g) => format!("U {} {}", name(nl, *target), entries(g)),
            },
            GateOp::Cnot { control, target } => {
                format!("CNOT {} {}", name(nl, *control), name(nl, *target))
            }
            GateOp::XLayer { targets } => format!("X {}", names(nl, targets)),
            GateOp::MultiControlled {
                controls,
                gate,
                target,
            } => {
                let mut s = String::from("CU");
                if !controls.is_empty() {
                    s.push(' ');
                    s.push_str(&names(nl, controls));
                }
                format!("{s} -> {} {}", name(nl, *target), entries(gate))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

struct Parser<'a> {
    labels: Vec<&'a str>,
    line: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    fn qubit(&self, tok: &str) -> Result<QubitIndex> {
        let label = tok
            .strip_prefix('q')
            .ok_or_else(|| self.err(format!("qubit name {tok:?} must start with 'q'")))?;
        self.labels
            .iter()
            .position(|l| *l == label)
            .map(|i| q(i + 1))
            .ok_or_else(|| self.err(format!("unknown qubit {tok:?}")))
    }

    fn qubits(&self, toks: &[&str]) -> Result<Vec<QubitIndex>> {
        toks.iter().map(|t| self.qubit(t)).collect()
    }

    fn real<T: FromStr>(&self, tok: &str) -> Result<T> {
        tok.parse::<T>()
            .map_err(|_| self.err(format!("bad number {tok:?}")))
    }

    fn matrix<T: Real + FromStr>(&self, text: &str) -> Result<Gate2x2<T>> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| self.err("matrix must be enclosed in [ ]"))?;
        let mut vals = Vec::with_capacity(4);
        for item in inner.split_whitespace() {
            let pair = item
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| self.err(format!("bad complex entry {item:?}")))?;
            let (re, im) = pair
                .split_once(',')
                .ok_or_else(|| self.err(format!("bad complex entry {item:?}")))?;
            vals.push(Complex::new(self.real::<T>(re)?, self.real::<T>(im)?));
        }
        if vals.len() != 4 {
            return Err(self.err(format!("expected 4 matrix entries, got {}", vals.len())));
        }
        Ok(Gate2x2::new_unchecked([[vals[0], vals[1]], [vals[2], vals[3]]]))
    }
}

/// Parses the text form produced by [`print_netlist`].
pub fn parse_netlist<T: Real + FromStr>(text: &str) -> Result<Netlist<T>> {
    let mut parser = Parser {
        labels: Vec::new(),
        line: 0,
    };
    let mut nl: Option<Netlist<T>> = None;
    for (idx, raw) in text.lines().enumerate() {
        parser.line = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (body, matrix) = match line.split_once('[') {
            Some((head, tail)) => (head.trim(), Some(format!("[{tail}"))),
            None => (line, None),
        };
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some(netlist) = nl.as_mut() else {
            if toks.first() != Some(&"QUBITS") || toks.len() < 2 {
                return Err(parser.err("first line must be `QUBITS q<label> ...`"));
            }
            let labels: Vec<String> = toks[1..]
                .iter()
                .map(|t| {
                    t.strip_prefix('q')
                        .map(str::to_string)
                        .ok_or_else(|| parser.err(format!("qubit name {t:?} must start with 'q'")))
                })
                .collect::<Result<_>>()?;
            for (k, l) in labels.iter().enumerate() {
                if labels[..k].contains(l) {
                    return Err(parser.err(format!("duplicate qubit label q{l}")));
                }
            }
            nl = Some(Netlist::with_labels(labels));
            parser.labels = toks[1..].iter().map(|t| &t[1..]).collect();
            continue;
        };
        let need_matrix = |p: &Parser| {
            matrix
                .as_deref()
                .ok_or_else(|| p.err("missing [ ] matrix"))
        };
        let op = match toks.as_slice() {
            ["NOT", t] => GateOp::single(SingleGate::Standard(StandardGate::X), parser.qubit(t)?),
            [g @ ("I" | "Z" | "H"), t] => {
                GateOp::single(SingleGate::Standard(g.parse()?), parser.qubit(t)?)
            }
            ["RY", angle, t] => GateOp::single(
                SingleGate::Ry(RotationAngle(parser.real(angle)?)),
                parser.qubit(t)?,
            ),
            ["U", t] => GateOp::single(
                SingleGate::Matrix(parser.matrix(need_matrix(&parser)?)?),
                parser.qubit(t)?,
            ),
            ["CNOT", c, t] => GateOp::Cnot {
                control: parser.qubit(c)?,
                target: parser.qubit(t)?,
            },
            ["X", rest @ ..] if !rest.is_empty() => GateOp::XLayer {
                targets: parser.qubits(rest)?,
            },
            ["CU", rest @ ..] => {
                let arrow = rest
                    .iter()
                    .position(|t| *t == "->")
                    .ok_or_else(|| parser.err("CU needs `-> target`"))?;
                if arrow + 2 != rest.len() {
                    return Err(parser.err("CU needs exactly one target after `->`"));
                }
                GateOp::MultiControlled {
                    controls: parser.qubits(&rest[..arrow])?,
                    gate: parser.matrix(need_matrix(&parser)?)?,
                    target: parser.qubit(rest[arrow + 1])?,
                }
            }
            _ => return Err(parser.err(format!("unrecognized op {line:?}"))),
        };
        netlist.push(op).map_err(|e| parser.err(e.to_string()))?;
    }
    nl.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "empty netlist text".into(),
    })
}
