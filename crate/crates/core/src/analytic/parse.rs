use super::AnalyticMap;
use crate::error::{Error, Result};
use crate::grammar::{parse_complex, tokenize, Cursor, Token};
use crate::weights::{parse_weight, WeightSpec};

/// Parses a symbol description such as `mobius 0.5+0i`,
/// `compose (mobius 0.3) (poly 0 1 1)`, `blaschke m=1 [0.9, -0.5i]` or
/// `halfmap`. An `hprim c` without an explicit weight is rejected.
pub fn parse_symbol(text: &str) -> Result<AnalyticMap> {
    parse_symbol_with(text, None)
}

/// As [`parse_symbol`], with `hprim c` defaulting to `weight`.
pub fn parse_symbol_with(text: &str, weight: Option<&WeightSpec>) -> Result<AnalyticMap> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor::new(&tokens, text.len());
    let f = expr(&mut cur, weight)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input"));
    }
    Ok(f)
}

fn expr(cur: &mut Cursor, weight: Option<&WeightSpec>) -> Result<AnalyticMap> {
    if cur.peek() == Some(&Token::Open) {
        cur.next();
        let f = expr(cur, weight)?;
        cur.expect(Token::Close)?;
        return Ok(f);
    }
    let pos = cur.pos();
    let name = cur.word()?;
    let located = |e: Error| match e {
        Error::InvalidSymbol(msg) | Error::InvalidWeight(msg) => Error::Parse { pos, msg },
        other => other,
    };
    match name.as_str() {
        "z" | "id" | "identity" => Ok(AnalyticMap::identity()),
        "halfmap" => Ok(AnalyticMap::halfmap()),
        "const" => Ok(AnalyticMap::constant(cur.complex()?)),
        "poly" => {
            let mut coeffs = Vec::new();
            while let Some(Token::Word(w)) = cur.peek() {
                match parse_complex(w) {
                    Some(z) => {
                        coeffs.push(z);
                        cur.next();
                    }
                    None => break,
                }
            }
            AnalyticMap::polynomial(coeffs).map_err(located)
        }
        "mobius" => AnalyticMap::mobius(cur.complex()?).map_err(located),
        "blaschke" => {
            let mut m = 0;
            if let Some(Token::Word(w)) = cur.peek() {
                let order = w
                    .strip_prefix("m=")
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| cur.error(format!("expected m=<order>, found {w}")))?;
                m = order;
                cur.next();
            }
            let zeros = if cur.peek() == Some(&Token::OpenList) { cur.complex_list()? } else { Vec::new() };
            AnalyticMap::blaschke(zeros, m).map_err(located)
        }
        "dilate" => {
            let k = cur.complex()?;
            let f = expr(cur, weight)?;
            AnalyticMap::dilate(f, k).map_err(located)
        }
        "hprim" => {
            let k = cur.complex()?;
            let w = if cur.peek() == Some(&Token::Open) {
                cur.next();
                let start = cur.pos();
                let w = weight_tokens(cur)?;
                parse_weight(&w).map_err(|e| match e {
                    Error::Parse { msg, .. } => Error::Parse { pos: start, msg },
                    other => other,
                })?
            } else {
                weight.cloned().ok_or(Error::Parse { pos, msg: "hprim needs a weight".into() })?
            };
            AnalyticMap::hprimitive(w, k).map_err(located)
        }
        "compose" => {
            let outer = expr(cur, weight)?;
            let inner = expr(cur, weight)?;
            Ok(AnalyticMap::compose(outer, inner))
        }
        "sum" | "mul" | "product" => {
            let mut terms = vec![expr(cur, weight)?];
            while cur.peek() == Some(&Token::Open) {
                terms.push(expr(cur, weight)?);
            }
            if name == "sum" {
                AnalyticMap::sum(terms)
            } else {
                AnalyticMap::product(terms)
            }
            .map_err(located)
        }
        "pow" => {
            let base = expr(cur, weight)?;
            let npos = cur.pos();
            let w = cur.word()?;
            let n = w.parse::<u32>().map_err(|_| Error::Parse { pos: npos, msg: format!("not an exponent: {w}") })?;
            AnalyticMap::pow(base, n).map_err(located)
        }
        other => Err(Error::Parse { pos, msg: format!("unknown symbol {other}") }),
    }
}

/// Re-assembles the tokens of a parenthesized weight (the opening
/// parenthesis already consumed) into text for the weight parser.
fn weight_tokens(cur: &mut Cursor) -> Result<String> {
    let mut depth = 1;
    let mut out = String::new();
    loop {
        let pos = cur.pos();
        let tok = cur.next().cloned().ok_or(Error::Parse { pos, msg: "unclosed weight".into() })?;
        let piece = match tok {
            Token::Word(w) => w,
            Token::Open => {
                depth += 1;
                "(".into()
            }
            Token::Close => {
                depth -= 1;
                if depth == 0 {
                    return Ok(out);
                }
                ")".into()
            }
            Token::OpenList => "[".into(),
            Token::CloseList => "]".into(),
            Token::Comma => ",".into(),
        };
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&piece);
    }
}
