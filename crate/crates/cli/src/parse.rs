//! Parser for complex literals of the form "X+Yi".

use zgb_core::C64;

/// Accepts "X+Yi", "X-Yi", plain reals "X", and pure imaginaries "Yi"
/// (including bare "i" and "-i"). Exponent notation is fine in either
/// part; signs following an exponent marker do not split the literal.
pub fn parse_complex(text: &str) -> Result<C64, String> {
    let t: String = text.trim().chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    let err = |_| format!("cannot parse '{text}' as a complex literal \"X+Yi\"");
    let finite = |v: f64| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite component in complex literal '{text}'"))
        }
    };
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // Split at the last sign that starts the imaginary part; sign
        // characters are ASCII, so byte indices are char boundaries.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (re_part, im_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let re = if re_part.is_empty() {
            0.0
        } else {
            finite(re_part.parse::<f64>().map_err(err)?)?
        };
        let im = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => finite(other.parse::<f64>().map_err(err)?)?,
        };
        Ok(C64::new(re, im))
    } else {
        Ok(C64::new(finite(t.parse::<f64>().map_err(err)?)?, 0.0))
    }
}
