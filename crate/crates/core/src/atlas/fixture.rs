//! Line-oriented fixture format for symmetric-space rows.

use num_rational::Ratio;

use super::{SpecialPath, SymmetricSpaceRecord};
use crate::criteria::StabilityClass;
use crate::error::{Error, Result};

const FIELDS: usize = 7;

fn fixture_err(line: usize, message: impl Into<String>) -> Error {
    Error::Fixture {
        line,
        message: message.into(),
    }
}

fn parse_ratio(s: &str) -> Option<Ratio<i64>> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse().ok()?, b.trim().parse().ok()?),
        None => (s.parse().ok()?, 1),
    };
    (den != 0).then(|| Ratio::new(num, den))
}

fn parse_special(s: &str) -> Option<Option<SpecialPath>> {
    match s.trim() {
        "-" | "" => Some(None),
        "round-sphere" => Some(Some(SpecialPath::RoundSphere)),
        "numeric-sweep" => Some(Some(SpecialPath::NumericSweep)),
        _ => None,
    }
}

/// Parses one data line (1-based `line` for messages).
pub fn parse_line(text: &str, line: usize) -> Result<SymmetricSpaceRecord> {
    let fields: Vec<&str> = text.split('|').map(str::trim).collect();
    if fields.len() != FIELDS {
        return Err(fixture_err(
            line,
            format!("expected {FIELDS} '|'-separated fields, found {}", fields.len()),
        ));
    }
    let [family, name, dim, lambda, fiber, expected, special] = fields[..] else {
        unreachable!()
    };
    if family.is_empty() || name.is_empty() {
        return Err(fixture_err(line, "family and name must be nonempty"));
    }
    let dim: u32 = dim
        .parse()
        .ok()
        .filter(|&d| d > 0)
        .ok_or_else(|| fixture_err(line, format!("dimension must be a positive integer, got '{dim}'")))?;
    let lambda_norm = parse_ratio(lambda)
        .filter(|r| *r.numer() > 0)
        .ok_or_else(|| fixture_err(line, format!("Lambda must be a positive fraction, got '{lambda}'")))?;
    let class = |s: &str| {
        StabilityClass::parse(s)
            .ok_or_else(|| fixture_err(line, format!("unknown stability '{s}'")))
    };
    let record = SymmetricSpaceRecord {
        family: family.to_string(),
        name: name.to_string(),
        dim,
        lambda_norm,
        fiber_stability: class(fiber)?,
        expected_cone: class(expected)?,
        special_path: parse_special(special)
            .ok_or_else(|| fixture_err(line, format!("unknown special path '{special}'")))?,
    };
    record.check().map_err(|m| fixture_err(line, m))?;
    Ok(record)
}

/// Parses a whole fixture, skipping blank lines and `#` comments.
pub fn parse_fixture(text: &str) -> Result<Vec<SymmetricSpaceRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_line(l, i + 1))
        .collect()
}

/// Inverse of [`parse_line`].
pub fn render_line(r: &SymmetricSpaceRecord) -> String {
    let special = match r.special_path {
        None => "-",
        Some(SpecialPath::RoundSphere) => "round-sphere",
        Some(SpecialPath::NumericSweep) => "numeric-sweep",
    };
    let fiber = |c: StabilityClass| match c {
        StabilityClass::StrictlyStable => "s. stable",
        StabilityClass::Stable => "stable",
        StabilityClass::Unstable => "unstable",
    };
    format!(
        "{}|{}|{}|{}|{}|{}|{}",
        r.family,
        r.name,
        r.dim,
        r.lambda_norm,
        fiber(r.fiber_stability),
        fiber(r.expected_cone),
        special
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_forms() {
        assert_eq!(parse_ratio("21/10"), Some(Ratio::new(21, 10)));
        assert_eq!(parse_ratio(" 4 "), Some(Ratio::from_integer(4)));
        assert_eq!(parse_ratio("6/4"), Some(Ratio::new(3, 2)));
        assert_eq!(parse_ratio("1/0"), None);
        assert_eq!(parse_ratio("x"), None);
    }

    #[test]
    fn reports_line_numbers() {
        let text = "# c\n\nG_2|G2|14|2|stable|unstable|-\nbad|line\n";
        match parse_fixture(text) {
            Err(Error::Fixture { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_fields() {
        for bad in [
            "X|x|0|2|stable|stable|-",
            "X|x|8|-2|stable|stable|-",
            "X|x|8|2|fine|stable|-",
            "X|x|8|2|stable|stable|other",
            "|x|8|2|stable|stable|-",
        ] {
            assert!(parse_line(bad, 1).is_err(), "{bad}");
        }
    }

    #[test]
    fn render_round_trips() {
        let line = "A I|SU(3)/SO(3)|5|20/9|stable|stable|numeric-sweep";
        let r = parse_line(line, 1).unwrap();
        assert_eq!(render_line(&r), line);
        let r = parse_line("E_8|E8|248|4|s. stable|s. stable|-", 1).unwrap();
        assert_eq!(parse_line(&render_line(&r), 1).unwrap(), r);
    }
}
