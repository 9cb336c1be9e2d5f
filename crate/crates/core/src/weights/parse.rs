use std::sync::Arc;

use super::{BoundedFactor, CosLog, Derived, Staircase, WeightSpec};
use crate::error::{Error, Result};
use crate::grammar::{tokenize, Cursor, Token};

/// Parses a weight description such as `power 0.25`, `log 1`, `const`,
/// `product (log 1) bounded-factor=[1, 2]`, `coslog 0.1`, `staircase` or
/// `derived (power 0.25)`. The `custom` keyword before a fixture name is
/// optional.
pub fn parse_weight(text: &str) -> Result<WeightSpec> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor::new(&tokens, text.len());
    let w = weight(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input"));
    }
    Ok(w)
}

fn weight(cur: &mut Cursor) -> Result<WeightSpec> {
    if cur.peek() == Some(&Token::Open) {
        cur.next();
        let w = weight(cur)?;
        cur.expect(Token::Close)?;
        return Ok(w);
    }
    let pos = cur.pos();
    let mut name = cur.word()?;
    if name == "custom" {
        name = cur.word()?;
    }
    let located = |e: Error| match e {
        Error::InvalidWeight(msg) => Error::Parse { pos, msg },
        other => other,
    };
    match name.as_str() {
        "power" => WeightSpec::power(cur.real()?).map_err(located),
        "log" => WeightSpec::log(cur.real()?).map_err(located),
        "const" | "constant" => Ok(WeightSpec::constant()),
        "product" => {
            let base = weight(cur)?;
            let key = cur.word()?;
            if key != "bounded-factor=" {
                return Err(cur.error(format!("expected bounded-factor=, found {key}")));
            }
            let samples = cur.complex_list()?;
            if samples.iter().any(|z| z.im != 0.0) {
                return Err(cur.error("bounded factor samples must be real"));
            }
            let factor = BoundedFactor::new(samples.iter().map(|z| z.re).collect()).map_err(located)?;
            Ok(WeightSpec::product(base, factor))
        }
        "coslog" => {
            let c = cur.real()?;
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Parse { pos, msg: "coslog needs a positive parameter".into() });
            }
            WeightSpec::custom(Arc::new(CosLog { c }), None)
        }
        "staircase" => WeightSpec::custom(Arc::new(Staircase::new()), None),
        "derived" => {
            let base = weight(cur)?;
            WeightSpec::custom(Arc::new(Derived { base }), None)
        }
        other => Err(Error::Parse { pos, msg: format!("unknown weight {other}") }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtins_and_roundtrips() {
        for text in [
            "power 0.25",
            "log 1",
            "const",
            "coslog 0.1",
            "staircase",
            "product (log 1) bounded-factor=[1, 2, 1.5]",
            "derived (power 0.25)",
        ] {
            let w = parse_weight(text).unwrap();
            let again = parse_weight(&w.to_string()).unwrap();
            assert_eq!(w.to_string(), again.to_string(), "{text}");
        }
        assert_eq!(parse_weight("custom coslog 0.1").unwrap().to_string(), "coslog 0.1");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_weight("power").is_err());
        assert!(parse_weight("power -1").is_err());
        assert!(parse_weight("log 0").is_err());
        assert!(parse_weight("bogus 1").is_err());
        assert!(parse_weight("power 0.2 extra").is_err());
        assert!(parse_weight("product (log 1) bounded-factor=[0]").is_err());
    }
}
