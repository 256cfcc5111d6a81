//! Text formats for plain and two-block DNF files.
//!
//! Plain format: the first line is `window <lo>..<hi>`, every following
//! non-blank line that does not start with `#` lists one implicant as
//! space-separated integer positions inside the window. UTF-8, LF or CRLF.
//!
//! Two-block format (for filters over mirrored argument pairs): the same
//! header gives the x-window (the y block mirrors it), implicant tokens are
//! `x<i>` or `y<i>` with `i` a position in the window.

use std::collections::HashSet;

use crate::balanced::BalancedPbf;
use crate::error::Error;
use crate::pbf::{Implicant, Pbf};
use crate::window::Window;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(text: &str) -> Result<(Window, usize, std::str::Lines<'_>), Error> {
    let mut lines = text.lines();
    let mut lineno = 0;
    for line in lines.by_ref() {
        lineno += 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rest = line
            .strip_prefix("window")
            .ok_or_else(|| parse_err(lineno, "expected `window <lo>..<hi>` header"))?
            .trim();
        let (lo, hi) = rest
            .split_once("..")
            .ok_or_else(|| parse_err(lineno, "expected `window <lo>..<hi>` header"))?;
        let lo: i32 = lo
            .trim()
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad window bound `{}`", lo.trim())))?;
        let hi: i32 = hi
            .trim()
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad window bound `{}`", hi.trim())))?;
        let window = Window::new(lo, hi).map_err(|e| parse_err(lineno, e.to_string()))?;
        return Ok((window, lineno, lines));
    }
    Err(parse_err(
        lineno.max(1),
        "missing `window <lo>..<hi>` header",
    ))
}

/// Parses the plain DNF file format.
///
/// Implicants come back in file order and are not normalized; run
/// [`Pbf::absorb`] separately when a normalized function is needed.
pub fn parse_dnf(text: &str) -> Result<Pbf, Error> {
    let (window, mut lineno, lines) = parse_header(text)?;
    let mut implicants = Vec::new();
    for line in lines {
        lineno += 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut positions = Vec::new();
        let mut seen = HashSet::new();
        for tok in line.split_whitespace() {
            let p: i32 = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad index `{tok}`")))?;
            if window.index(p).is_none() {
                return Err(parse_err(
                    lineno,
                    format!("index {p} outside window {window}"),
                ));
            }
            if !seen.insert(p) {
                return Err(parse_err(
                    lineno,
                    format!("duplicate index {p} in implicant"),
                ));
            }
            positions.push(p);
        }
        if positions.is_empty() {
            return Err(parse_err(lineno, "empty implicant line"));
        }
        implicants.push(Implicant::new(positions));
    }
    Pbf::new(window, implicants)
}

/// Parses the two-block DNF format with `x<i>` / `y<i>` variable tokens.
pub fn parse_balanced_dnf(text: &str) -> Result<BalancedPbf, Error> {
    let (x_window, mut lineno, lines) = parse_header(text)?;
    let w = x_window.width();
    let combined = Window::new(0, (2 * w - 1) as i32).map_err(|e| parse_err(1, e.to_string()))?;
    let mut implicants = Vec::new();
    for line in lines {
        lineno += 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut positions = Vec::new();
        let mut seen = HashSet::new();
        for tok in line.split_whitespace() {
            let (block, idx_str) = match tok.chars().next() {
                Some('x') => (0usize, &tok[1..]),
                Some('y') => (w, &tok[1..]),
                _ => {
                    return Err(parse_err(
                        lineno,
                        format!("bad token `{tok}`: expected x<i> or y<i>"),
                    ))
                }
            };
            let p: i32 = idx_str
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad token `{tok}`")))?;
            let within = x_window
                .index(p)
                .ok_or_else(|| parse_err(lineno, format!("index {p} outside window {x_window}")))?;
            let combined_idx = (block + within) as i32;
            if !seen.insert(combined_idx) {
                return Err(parse_err(lineno, format!("duplicate variable `{tok}`")));
            }
            positions.push(combined_idx);
        }
        if positions.is_empty() {
            return Err(parse_err(lineno, "empty implicant line"));
        }
        implicants.push(Implicant::new(positions));
    }
    let pbf = Pbf::new(combined, implicants)?;
    BalancedPbf::new(x_window, pbf)
}

/// Renders a two-block function in its file format.
pub fn balanced_to_dnf_string(bpbf: &BalancedPbf) -> String {
    let w = bpbf.width() as i32;
    let x_window = bpbf.x_window();
    let mut out = format!("window {x_window}\n");
    for imp in bpbf.pbf().implicants() {
        let toks: Vec<String> = imp
            .positions()
            .iter()
            .map(|&p| {
                if p < w {
                    format!("x{}", x_window.lo() + p)
                } else {
                    format!("y{}", x_window.lo() + (p - w))
                }
            })
            .collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}
