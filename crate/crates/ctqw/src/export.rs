//! Text artifacts: DOT graphs, a structured graph text format that
//! round-trips exactly, and the CSV trace formats.
//!
//! All floats are printed with 17 significant digits in the C `%.17g` style,
//! which round-trips `f64` values exactly and keeps output byte-identical
//! across runs.

use std::fmt::Write as _;

use crate::dynamics::TraceSeries;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::scalar::Scalar;

/// Format a float like C's `%.17g`.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x < 0.0 { "-inf".into() } else { "inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let formatted = format!("{:.16e}", x);
    let (mantissa, exp_str) = formatted.split_once('e').expect("exponent in {:.16e}");
    let exponent: i32 = exp_str.parse().expect("numeric exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 17);

    let body = if !(-4..17).contains(&exponent) {
        let frac = digits[1..].trim_end_matches('0');
        let mut s = String::new();
        s.push_str(&digits[..1]);
        if !frac.is_empty() {
            s.push('.');
            s.push_str(frac);
        }
        let _ = write!(s, "e{}{:02}", if exponent < 0 { '-' } else { '+' }, exponent.abs());
        s
    } else if exponent >= 0 {
        let split = exponent as usize + 1;
        let int_part = &digits[..split];
        let frac = digits[split..].trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exponent - 1) as usize);
        let frac_digits = format!("{zeros}{digits}");
        let frac = frac_digits.trim_end_matches('0');
        format!("0.{frac}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn g17<T: Scalar>(x: T) -> String {
    format_g17(x.to_f64().unwrap_or(f64::NAN))
}

/// Render a graph in DOT (undirected, `weight` edge attribute, `role` vertex
/// attribute when the graph came from a family builder).
pub fn graph_to_dot<T: Scalar>(g: &WeightedGraph<T>) -> String {
    let name = g
        .family()
        .map(|f| f.label())
        .unwrap_or_else(|| "weighted_graph".into());
    let mut out = String::new();
    let _ = writeln!(out, "graph {name} {{");
    for v in 1..=g.num_vertices() {
        match g.role(v).expect("valid vertex") {
            Some(role) => {
                let _ = writeln!(out, "  {v} [role=\"{}\"];", role.name());
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for (i, j, w) in g.edges() {
        let _ = writeln!(out, "  {i} -- {j} [weight=\"{}\"];", g17(w));
    }
    out.push_str("}\n");
    out
}

/// Structured text export: vertex count plus `[i, j, weight]` triples.
/// [`graph_from_text`] parses it back exactly.
pub fn graph_to_text<T: Scalar>(g: &WeightedGraph<T>) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"num_vertices\": {},", g.num_vertices());
    let edges: Vec<_> = g.edges().collect();
    if edges.is_empty() {
        out.push_str("  \"edges\": []\n");
    } else {
        out.push_str("  \"edges\": [\n");
        for (k, (i, j, w)) in edges.iter().enumerate() {
            let comma = if k + 1 < edges.len() { "," } else { "" };
            let _ = writeln!(out, "    [{i}, {j}, {}]{comma}", g17(*w));
        }
        out.push_str("  ]\n");
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, PartialEq)]
enum Token {
    Punct(char),
    Str(String),
    Num(f64),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ch if ch.is_whitespace() => {
                chars.next();
            }
            '{' | '}' | '[' | ']' | ':' | ',' => {
                tokens.push(Token::Punct(c));
                chars.next();
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => return Err(Error::Parse("unterminated string".into())),
                    }
                }
                tokens.push(Token::Str(s));
            }
            _ => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_ascii_digit()
                        || matches!(ch, '-' | '+' | '.' | 'e' | 'E' | 'i' | 'n' | 'f' | 'a')
                    {
                        s.push(ch);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if s.is_empty() {
                    return Err(Error::Parse(format!("unexpected character '{c}'")));
                }
                let value = match s.as_str() {
                    "inf" => f64::INFINITY,
                    "-inf" => f64::NEG_INFINITY,
                    "nan" => f64::NAN,
                    _ => s
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number '{s}'")))?,
                };
                tokens.push(Token::Num(value));
            }
        }
    }
    Ok(tokens)
}

/// Parse the structured text format produced by [`graph_to_text`].
pub fn graph_from_text<T: Scalar>(text: &str) -> Result<WeightedGraph<T>> {
    let tokens = tokenize(text)?;
    let mut pos = 0usize;
    let expect = |want: Token, pos: &mut usize| -> Result<()> {
        match tokens.get(*pos) {
            Some(tok) if *tok == want => {
                *pos += 1;
                Ok(())
            }
            other => Err(Error::Parse(format!("expected {want:?}, found {other:?}"))),
        }
    };
    let num = |pos: &mut usize| -> Result<f64> {
        match tokens.get(*pos) {
            Some(Token::Num(x)) => {
                *pos += 1;
                Ok(*x)
            }
            other => Err(Error::Parse(format!("expected number, found {other:?}"))),
        }
    };

    expect(Token::Punct('{'), &mut pos)?;
    expect(Token::Str("num_vertices".into()), &mut pos)?;
    expect(Token::Punct(':'), &mut pos)?;
    let n = num(&mut pos)? as usize;
    expect(Token::Punct(','), &mut pos)?;
    expect(Token::Str("edges".into()), &mut pos)?;
    expect(Token::Punct(':'), &mut pos)?;
    expect(Token::Punct('['), &mut pos)?;
    let mut edges: Vec<(usize, usize, T)> = Vec::new();
    loop {
        match tokens.get(pos) {
            Some(Token::Punct(']')) => {
                pos += 1;
                break;
            }
            Some(Token::Punct('[')) => {
                pos += 1;
                let i = num(&mut pos)? as usize;
                expect(Token::Punct(','), &mut pos)?;
                let j = num(&mut pos)? as usize;
                expect(Token::Punct(','), &mut pos)?;
                let w = num(&mut pos)?;
                expect(Token::Punct(']'), &mut pos)?;
                if matches!(tokens.get(pos), Some(Token::Punct(','))) {
                    pos += 1;
                }
                let weight = T::from_f64(w)
                    .ok_or_else(|| Error::Parse(format!("weight {w} not representable")))?;
                edges.push((i, j, weight));
            }
            other => return Err(Error::Parse(format!("expected edge triple, found {other:?}"))),
        }
    }
    expect(Token::Punct('}'), &mut pos)?;
    WeightedGraph::from_edges(n, &edges)
}

/// CSV for a unitary trace: comment header, then `t,P_v<i>,...` rows with
/// optional `cum_v<i>` columns when the series carries cumulative integrals.
pub fn trace_to_csv<T: Scalar>(series: &TraceSeries<T>, comments: &[String]) -> String {
    let mut out = String::new();
    for line in comments {
        let _ = writeln!(out, "# {line}");
    }
    let mut header = String::from("t");
    for &v in series.vertices() {
        let _ = write!(header, ",P_v{v}");
    }
    if series.has_cumulative() {
        for &v in series.vertices() {
            let _ = write!(header, ",cum_v{v}");
        }
    }
    let _ = writeln!(out, "{header}");
    for (idx, &t) in series.times().iter().enumerate() {
        let mut row = g17(t);
        for &v in series.vertices() {
            let p = series.probability_row(v).expect("vertex present")[idx];
            let _ = write!(row, ",{}", g17(p));
        }
        if series.has_cumulative() {
            for &v in series.vertices() {
                let c = series.cumulative_row(v).expect("cumulative present")[idx];
                let _ = write!(row, ",{}", g17(c));
            }
        }
        let _ = writeln!(out, "{row}");
    }
    out
}

/// CSV for a density-matrix diagonal trace: `t,P_1,...,P_nv,trace_err` with
/// optional row subsampling (`stride >= 1`; the final row is always written).
pub fn density_trace_to_csv<T: Scalar>(
    series: &TraceSeries<T>,
    trace_errors: &[T],
    comments: &[String],
    stride: usize,
) -> String {
    let stride = stride.max(1);
    let mut out = String::new();
    for line in comments {
        let _ = writeln!(out, "# {line}");
    }
    let mut header = String::from("t");
    for &v in series.vertices() {
        let _ = write!(header, ",P_{v}");
    }
    header.push_str(",trace_err");
    let _ = writeln!(out, "{header}");
    let last = series.times().len().saturating_sub(1);
    for (idx, &t) in series.times().iter().enumerate() {
        if idx % stride != 0 && idx != last {
            continue;
        }
        let mut row = g17(t);
        for &v in series.vertices() {
            let p = series.probability_row(v).expect("vertex present")[idx];
            let _ = write!(row, ",{}", g17(p));
        }
        let _ = write!(row, ",{}", g17(trace_errors[idx]));
        let _ = writeln!(out, "{row}");
    }
    out
}

/// CSV of a spectrum: `k,lambda` with 1-based index.
pub fn spectrum_to_csv<T: Scalar>(eigenvalues: &[T], comments: &[String]) -> String {
    let mut out = String::new();
    for line in comments {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str("k,lambda\n");
    for (k, &l) in eigenvalues.iter().enumerate() {
        let _ = writeln!(out, "{},{}", k + 1, g17(l));
    }
    out
}
