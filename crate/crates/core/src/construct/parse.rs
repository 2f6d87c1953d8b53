//! Line-oriented parser for construction scripts.
//!
//! One statement per line, `#` starts a comment, blank lines are ignored.
//! Point ids may be grouped with the range shorthand `P1..P24`, which expands
//! over the trailing number. Statements:
//!
//! ```text
//! param NAME = VALUE [range LO HI]
//! points A B
//! edge A B
//! angle_edge NEW from BASE ref REF angle VALUE|PARAM ccw|cw
//! apex NEW on A B ccw|cw
//! copy about A B map SRC -> DST ...
//! closing_edge A B
//! solve PARAM target LENGTH bracket LO HI
//! symmetry about A B map SRC -> DST ...
//! rigid_half NAME ID ...
//! ```

use super::{AngleValue, Construction, Metadata, ParamSpec, Step, SymmetrySpec};
use crate::geom::Turn;
use indexmap::IndexMap;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown point {name}")]
    UnknownPoint { line: usize, name: String },
    #[error("line {line}: duplicate point {name}")]
    DuplicatePoint { line: usize, name: String },
    #[error("line {line}: undeclared parameter {name}")]
    UndeclaredParameter { line: usize, name: String },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a script into a [`Construction`], validating that every reference
/// points at something already defined and that structural one-of-a-kind
/// statements (`points`, `closing_edge`, `solve`, `symmetry`) are unique.
pub fn parse_script(text: &str) -> Result<Construction, ParseError> {
    let mut p = Parser::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let code = raw.split('#').next().unwrap_or("");
        let spaced = code.replace("->", " -> ");
        let tokens: Vec<&str> = spaced.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        p.statement(line, &tokens)?;
    }
    p.finish()
}

#[derive(Default)]
struct Parser {
    parameters: IndexMap<String, ParamSpec>,
    steps: Vec<Step>,
    defined: HashSet<String>,
    metadata: Metadata,
    saw_points: bool,
    saw_closing: bool,
    saw_solve: bool,
}

impl Parser {
    fn statement(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        match tokens[0] {
            "param" => self.parse_param(line, tokens),
            "points" => self.parse_points(line, tokens),
            "edge" => self.parse_edge(line, tokens),
            "angle_edge" => self.parse_angle_edge(line, tokens),
            "apex" => self.parse_apex(line, tokens),
            "copy" => self.parse_copy(line, tokens),
            "closing_edge" => self.parse_closing_edge(line, tokens),
            "solve" => self.parse_solve(line, tokens),
            "symmetry" => self.parse_symmetry(line, tokens),
            "rigid_half" => self.parse_rigid_half(line, tokens),
            other => Err(syntax(line, format!("unknown keyword '{other}'"))),
        }
    }

    fn number(line: usize, token: &str, what: &str) -> Result<f64, ParseError> {
        token
            .parse::<f64>()
            .map_err(|_| syntax(line, format!("{what} '{token}' is not a number")))
    }

    fn turn(line: usize, token: &str) -> Result<Turn, ParseError> {
        match token {
            "ccw" => Ok(Turn::Ccw),
            "cw" => Ok(Turn::Cw),
            other => Err(syntax(
                line,
                format!("expected 'ccw' or 'cw', found '{other}'"),
            )),
        }
    }

    fn keyword(line: usize, token: &str, expected: &str, usage: &str) -> Result<(), ParseError> {
        if token == expected {
            Ok(())
        } else {
            Err(syntax(
                line,
                format!("expected '{expected}': usage: {usage}"),
            ))
        }
    }

    fn check_id(line: usize, token: &str) -> Result<String, ParseError> {
        if token.is_empty() || token.contains("..") || token == "->" {
            return Err(syntax(line, format!("invalid point id '{token}'")));
        }
        Ok(token.to_string())
    }

    fn require_defined(&self, line: usize, id: &str) -> Result<(), ParseError> {
        if self.defined.contains(id) {
            Ok(())
        } else {
            Err(ParseError::UnknownPoint {
                line,
                name: id.to_string(),
            })
        }
    }

    fn define(&mut self, line: usize, id: &str) -> Result<(), ParseError> {
        let id = Self::check_id(line, id)?;
        if !self.defined.insert(id.clone()) {
            return Err(ParseError::DuplicatePoint { line, name: id });
        }
        Ok(())
    }

    /// Expands a single id or a `P1..P24` range over the trailing number.
    fn expand_ids(line: usize, token: &str) -> Result<Vec<String>, ParseError> {
        let Some((lo, hi)) = token.split_once("..") else {
            return Ok(vec![Self::check_id(line, token)?]);
        };
        let (pl, nl) = split_numeric_suffix(lo).ok_or_else(|| {
            syntax(
                line,
                format!("range endpoint '{lo}' has no trailing number"),
            )
        })?;
        let (ph, nh) = split_numeric_suffix(hi).ok_or_else(|| {
            syntax(
                line,
                format!("range endpoint '{hi}' has no trailing number"),
            )
        })?;
        if pl != ph {
            return Err(syntax(
                line,
                format!("range '{token}' mixes prefixes '{pl}' and '{ph}'"),
            ));
        }
        if nl > nh {
            return Err(syntax(line, format!("range '{token}' runs backwards")));
        }
        Ok((nl..=nh).map(|n| format!("{pl}{n}")).collect())
    }

    /// Parses `SRC -> DST` entries, expanding ranges pairwise.
    fn mapping(line: usize, tokens: &[&str]) -> Result<Vec<(String, String)>, ParseError> {
        if tokens.is_empty() || !tokens.len().is_multiple_of(3) {
            return Err(syntax(line, "mapping must be 'SRC -> DST' entries"));
        }
        let mut pairs = Vec::new();
        for entry in tokens.chunks(3) {
            if entry[1] != "->" {
                return Err(syntax(line, "mapping must be 'SRC -> DST' entries"));
            }
            let sources = Self::expand_ids(line, entry[0])?;
            let targets = Self::expand_ids(line, entry[2])?;
            if sources.len() != targets.len() {
                return Err(syntax(
                    line,
                    format!(
                        "mapping ranges '{}' and '{}' have different lengths",
                        entry[0], entry[2]
                    ),
                ));
            }
            pairs.extend(sources.into_iter().zip(targets));
        }
        Ok(pairs)
    }

    fn parse_param(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        let usage = "param NAME = VALUE [range LO HI]";
        if tokens.len() != 4 && tokens.len() != 7 {
            return Err(syntax(line, format!("usage: {usage}")));
        }
        Self::keyword(line, tokens[2], "=", usage)?;
        let name = tokens[1].to_string();
        if name.parse::<f64>().is_ok() {
            return Err(syntax(line, format!("parameter name '{name}' is a number")));
        }
        if self.parameters.contains_key(&name) {
            return Err(syntax(line, format!("parameter '{name}' declared twice")));
        }
        let default = Self::number(line, tokens[3], "default value")?;
        let range = if tokens.len() == 7 {
            Self::keyword(line, tokens[4], "range", usage)?;
            let lo = Self::number(line, tokens[5], "range low")?;
            let hi = Self::number(line, tokens[6], "range high")?;
            if lo > hi {
                return Err(syntax(line, format!("range [{lo}, {hi}] runs backwards")));
            }
            if default < lo || default > hi {
                return Err(syntax(
                    line,
                    format!("default {default} outside range [{lo}, {hi}]"),
                ));
            }
            (lo, hi)
        } else {
            (default, default)
        };
        self.parameters.insert(name, ParamSpec { default, range });
        Ok(())
    }

    fn parse_points(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        if tokens.len() != 3 {
            return Err(syntax(line, "usage: points A B"));
        }
        if self.saw_points {
            return Err(syntax(line, "second 'points' statement"));
        }
        self.saw_points = true;
        self.define(line, tokens[1])?;
        self.define(line, tokens[2])?;
        self.steps.push(Step::InitialPoints {
            p: tokens[1].to_string(),
            q: tokens[2].to_string(),
        });
        Ok(())
    }

    fn parse_edge(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        if tokens.len() != 3 {
            return Err(syntax(line, "usage: edge A B"));
        }
        self.require_defined(line, tokens[1])?;
        self.require_defined(line, tokens[2])?;
        if tokens[1] == tokens[2] {
            return Err(syntax(line, "edge endpoints must differ"));
        }
        self.steps.push(Step::UnitEdge {
            a: tokens[1].to_string(),
            b: tokens[2].to_string(),
        });
        Ok(())
    }

    fn parse_angle_edge(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        let usage = "angle_edge NEW from BASE ref REF angle VALUE ccw|cw";
        if tokens.len() != 9 {
            return Err(syntax(line, format!("usage: {usage}")));
        }
        Self::keyword(line, tokens[2], "from", usage)?;
        Self::keyword(line, tokens[4], "ref", usage)?;
        Self::keyword(line, tokens[6], "angle", usage)?;
        self.require_defined(line, tokens[3])?;
        self.require_defined(line, tokens[5])?;
        let angle = match tokens[7].parse::<f64>() {
            Ok(v) => AngleValue::Degrees(v),
            Err(_) => {
                let name = tokens[7].to_string();
                if !self.parameters.contains_key(&name) {
                    return Err(ParseError::UndeclaredParameter { line, name });
                }
                AngleValue::Param(name)
            }
        };
        let turn = Self::turn(line, tokens[8])?;
        self.define(line, tokens[1])?;
        self.steps.push(Step::AngleEdge {
            new: tokens[1].to_string(),
            base: tokens[3].to_string(),
            reference: tokens[5].to_string(),
            angle,
            turn,
        });
        Ok(())
    }

    fn parse_apex(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        let usage = "apex NEW on A B ccw|cw";
        if tokens.len() != 6 {
            return Err(syntax(line, format!("usage: {usage}")));
        }
        Self::keyword(line, tokens[2], "on", usage)?;
        self.require_defined(line, tokens[3])?;
        self.require_defined(line, tokens[4])?;
        let side = Self::turn(line, tokens[5])?;
        self.define(line, tokens[1])?;
        self.steps.push(Step::Apex {
            new: tokens[1].to_string(),
            a: tokens[3].to_string(),
            b: tokens[4].to_string(),
            side,
        });
        Ok(())
    }

    fn parse_copy(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        let usage = "copy about A B map SRC -> DST ...";
        if tokens.len() < 8 {
            return Err(syntax(line, format!("usage: {usage}")));
        }
        Self::keyword(line, tokens[1], "about", usage)?;
        Self::keyword(line, tokens[4], "map", usage)?;
        let anchor_a = tokens[2].to_string();
        let anchor_b = tokens[3].to_string();
        self.require_defined(line, &anchor_a)?;
        self.require_defined(line, &anchor_b)?;
        let mapping = Self::mapping(line, &tokens[5..])?;
        let mut seen_src = HashSet::new();
        let mut seen_dst = HashSet::new();
        for (src, dst) in &mapping {
            self.require_defined(line, src)?;
            if !seen_src.insert(src.clone()) {
                return Err(syntax(line, format!("'{src}' copied twice")));
            }
            if !seen_dst.insert(dst.clone()) {
                return Err(syntax(line, format!("two points copied onto '{dst}'")));
            }
            // Targets are fresh names, except the anchors, which the copied
            // image may land back on.
            if *dst == anchor_a || *dst == anchor_b {
                continue;
            }
            self.define(line, dst)?;
        }
        self.steps.push(Step::Copy {
            anchor_a,
            anchor_b,
            mapping,
        });
        Ok(())
    }

    fn parse_closing_edge(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        if tokens.len() != 3 {
            return Err(syntax(line, "usage: closing_edge A B"));
        }
        if self.saw_closing {
            return Err(syntax(line, "second 'closing_edge' statement"));
        }
        self.saw_closing = true;
        self.require_defined(line, tokens[1])?;
        self.require_defined(line, tokens[2])?;
        if tokens[1] == tokens[2] {
            return Err(syntax(line, "closing edge endpoints must differ"));
        }
        self.steps.push(Step::ClosingEdge {
            a: tokens[1].to_string(),
            b: tokens[2].to_string(),
        });
        Ok(())
    }

    fn parse_solve(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        let usage = "solve PARAM target LENGTH bracket LO HI";
        if tokens.len() != 7 {
            return Err(syntax(line, format!("usage: {usage}")));
        }
        Self::keyword(line, tokens[2], "target", usage)?;
        Self::keyword(line, tokens[4], "bracket", usage)?;
        if self.saw_solve {
            return Err(syntax(line, "second 'solve' statement"));
        }
        self.saw_solve = true;
        let param = tokens[1].to_string();
        let Some(spec) = self.parameters.get(&param) else {
            return Err(ParseError::UndeclaredParameter { line, name: param });
        };
        let target = Self::number(line, tokens[3], "target length")?;
        let lo = Self::number(line, tokens[5], "bracket low")?;
        let hi = Self::number(line, tokens[6], "bracket high")?;
        if lo >= hi {
            return Err(syntax(line, format!("bracket [{lo}, {hi}] is not ordered")));
        }
        if lo < spec.range.0 || hi > spec.range.1 {
            return Err(syntax(
                line,
                format!(
                    "bracket [{lo}, {hi}] exceeds the declared range [{}, {}] of '{param}'",
                    spec.range.0, spec.range.1
                ),
            ));
        }
        self.steps.push(Step::SolveDirective {
            param,
            target,
            bracket: (lo, hi),
        });
        Ok(())
    }

    fn parse_symmetry(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        let usage = "symmetry about A B map SRC -> DST ...";
        if tokens.len() < 8 {
            return Err(syntax(line, format!("usage: {usage}")));
        }
        Self::keyword(line, tokens[1], "about", usage)?;
        Self::keyword(line, tokens[4], "map", usage)?;
        if self.metadata.symmetry.is_some() {
            return Err(syntax(line, "second 'symmetry' statement"));
        }
        self.require_defined(line, tokens[2])?;
        self.require_defined(line, tokens[3])?;
        // Store the involutive closure so both directions are present.
        let mut mapping: IndexMap<String, String> = IndexMap::new();
        let mut add = |from: String, to: String| -> Result<(), ParseError> {
            match mapping.get(&from) {
                Some(existing) if *existing != to => Err(syntax(
                    line,
                    format!("'{from}' mapped to both '{existing}' and '{to}'"),
                )),
                _ => {
                    mapping.insert(from, to);
                    Ok(())
                }
            }
        };
        for (src, dst) in Self::mapping(line, &tokens[5..])? {
            self.require_defined(line, &src)?;
            self.require_defined(line, &dst)?;
            add(src.clone(), dst.clone())?;
            add(dst, src)?;
        }
        self.metadata.symmetry = Some(SymmetrySpec {
            anchor_a: tokens[2].to_string(),
            anchor_b: tokens[3].to_string(),
            mapping,
        });
        Ok(())
    }

    fn parse_rigid_half(&mut self, line: usize, tokens: &[&str]) -> Result<(), ParseError> {
        if tokens.len() < 3 {
            return Err(syntax(line, "usage: rigid_half NAME ID ..."));
        }
        let name = tokens[1].to_string();
        if self.metadata.rigid_halves.contains_key(&name) {
            return Err(syntax(line, format!("rigid half '{name}' declared twice")));
        }
        let mut ids = Vec::new();
        for token in &tokens[2..] {
            for id in Self::expand_ids(line, token)? {
                self.require_defined(line, &id)?;
                ids.push(id);
            }
        }
        self.metadata.rigid_halves.insert(name, ids);
        Ok(())
    }

    fn finish(self) -> Result<Construction, ParseError> {
        if !self.saw_points {
            return Err(syntax(0, "script has no 'points' statement"));
        }
        Ok(Construction {
            steps: self.steps,
            parameters: self.parameters,
            metadata: self.metadata,
        })
    }
}

fn split_numeric_suffix(id: &str) -> Option<(&str, u64)> {
    let start = id
        .rfind(|c: char| !c.is_ascii_digit())
        .map(|i| i + c_len(id, i))
        .unwrap_or(0);
    if start == id.len() {
        return None;
    }
    let (prefix, digits) = id.split_at(start);
    digits.parse().ok().map(|n| (prefix, n))
}

/// Byte length of the char starting at `i`, so the split lands on a char
/// boundary even for non-ASCII prefixes.
fn c_len(s: &str, i: usize) -> usize {
    s[i..].chars().next().map_or(1, char::len_utf8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_script() {
        let c = parse_script("points P1 P2\nangle_edge P3 from P1 ref P2 angle 60 ccw\n").unwrap();
        assert_eq!(c.steps.len(), 2);
        assert!(matches!(c.steps[0], Step::InitialPoints { .. }));
        assert!(matches!(c.steps[1], Step::AngleEdge { .. }));
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_script(
            "# leading comment\n\
             \n\
             points P1 P2   # trailing comment\n\
             apex P3 on P1 P2 ccw\n",
        )
        .unwrap();
        assert_eq!(c.steps.len(), 2);
    }

    #[test]
    fn unknown_point_reference() {
        let err = parse_script("points P1 P2\napex P3 on P1 P99 ccw\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownPoint {
                line: 2,
                name: "P99".into()
            }
        );
    }

    #[test]
    fn duplicate_point_definition() {
        let err = parse_script("points P1 P2\napex P1 on P1 P2 ccw\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::DuplicatePoint {
                line: 2,
                name: "P1".into()
            }
        );
    }

    #[test]
    fn undeclared_parameter() {
        let err = parse_script("points P1 P2\nangle_edge P3 from P1 ref P2 angle alpha ccw\n")
            .unwrap_err();
        assert_eq!(
            err,
            ParseError::UndeclaredParameter {
                line: 2,
                name: "alpha".into()
            }
        );
    }

    #[test]
    fn unknown_keyword_is_syntax_error() {
        let err = parse_script("points P1 P2\nfrobnicate P3\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn second_points_statement_rejected() {
        let err = parse_script("points P1 P2\npoints P3 P4\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn bad_turn_token() {
        let err = parse_script("points P1 P2\napex P3 on P1 P2 up\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn range_shorthand_expands() {
        let c = parse_script(
            "points P1 P2\n\
             apex P3 on P1 P2 ccw\n\
             copy about P1 P2 map P1..P3 -> P4..P6\n",
        )
        .unwrap();
        let Step::Copy { mapping, .. } = &c.steps[2] else {
            panic!("expected a copy step");
        };
        assert_eq!(
            mapping,
            &[
                ("P1".to_string(), "P4".to_string()),
                ("P2".to_string(), "P5".to_string()),
                ("P3".to_string(), "P6".to_string()),
            ]
        );
    }

    #[test]
    fn range_length_mismatch() {
        let err =
            parse_script("points P1 P2\ncopy about P1 P2 map P1..P2 -> P4..P6\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn copy_target_must_be_fresh_or_anchor() {
        let err = parse_script(
            "points P1 P2\n\
             apex P3 on P1 P2 ccw\n\
             copy about P1 P2 map P1 -> P3\n",
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::DuplicatePoint { line: 3, .. }));

        // Mapping onto an anchor parses (coincidence is checked at execution).
        parse_script(
            "points P1 P2\n\
             apex P3 on P1 P2 ccw\n\
             copy about P1 P2 map P3 -> P2\n",
        )
        .unwrap();
    }

    #[test]
    fn solve_requires_declared_parameter_and_sane_bracket() {
        let err =
            parse_script("points P1 P2\nclosing_edge P1 P2\nsolve mu target 1 bracket 37 39\n")
                .unwrap_err();
        assert_eq!(
            err,
            ParseError::UndeclaredParameter {
                line: 3,
                name: "mu".into()
            }
        );

        let err = parse_script(
            "param mu = 38 range 37 39\npoints P1 P2\nsolve mu target 1 bracket 36 39\n",
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 3, .. }));
    }

    #[test]
    fn symmetry_conflict_rejected() {
        let err = parse_script(
            "points P1 P2\n\
             apex P3 on P1 P2 ccw\n\
             apex P4 on P1 P3 ccw\n\
             symmetry about P1 P2 map P1 -> P2 P1 -> P3\n",
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 4, .. }));
    }

    #[test]
    fn symmetry_closure_contains_both_directions() {
        let c = parse_script(
            "points P1 P2\n\
             apex P3 on P1 P2 ccw\n\
             apex P4 on P1 P2 cw\n\
             symmetry about P1 P2 map P3 -> P4 P1 -> P2\n",
        )
        .unwrap();
        let sym = c.metadata.symmetry.unwrap();
        assert_eq!(sym.mapping.get("P3").unwrap(), "P4");
        assert_eq!(sym.mapping.get("P4").unwrap(), "P3");
        assert_eq!(sym.mapping.get("P2").unwrap(), "P1");
    }

    #[test]
    fn rigid_half_collects_expanded_ids() {
        let c = parse_script(
            "points P1 P2\n\
             apex P3 on P1 P2 ccw\n\
             rigid_half G1 P1..P2 P3\n",
        )
        .unwrap();
        assert_eq!(
            c.metadata.rigid_halves.get("G1").unwrap(),
            &vec!["P1".to_string(), "P2".to_string(), "P3".to_string()]
        );
    }

    #[test]
    fn missing_points_statement() {
        let err = parse_script("param a = 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 0, .. }));
    }

    #[test]
    fn param_validation() {
        assert!(parse_script("param a = 1\nparam a = 2\npoints P1 P2\n").is_err());
        assert!(parse_script("param a = 5 range 1 2\npoints P1 P2\n").is_err());
        assert!(parse_script("param a = 1 range 2 1\npoints P1 P2\n").is_err());
        assert!(parse_script("param 7 = 1\npoints P1 P2\n").is_err());
    }
}
