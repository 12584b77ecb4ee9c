//! Input files: a `sig` header followed by expression lines and named
//! blocks.
//!
//! ```text
//! # comment
//! sig 2|0 1|0
//! x1 * x2[1]            # bare lines are Lagrangians
//!
//! map                   # blocks: lagrangian, covector, map, path,
//! x1 = x2               # homotopy (over the lifted signature), form
//! x2 = x1 + x2^2
//!
//! form
//! 1 2 : x1
//! ```
//!
//! Every named block must assign every coordinate exactly once. Form block
//! lines are `A1 A2 ... : coefficient`; the tuple length fixes the degree.

use std::collections::BTreeMap;
use std::fmt;

use lagcomplex::{
    CoordinateChange, Covector, Expression, Homotopy, Lagrangian, ParseError, Path, PolyForm,
    Signature,
};

/// A parse or validation error with its position in the file.
#[derive(Debug, Clone)]
pub struct FileError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl FileError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> FileError {
        FileError { line, col, message: message.into() }
    }

    fn from_parse(line: usize, offset: usize, err: ParseError) -> FileError {
        FileError { line, col: offset + err.col, message: err.message }
    }
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for FileError {}

/// Everything a command may pull out of one input file.
#[derive(Debug, Default)]
pub struct Document {
    pub sig: Option<Signature>,
    pub lagrangians: Vec<Lagrangian>,
    pub covectors: Vec<Covector>,
    pub maps: Vec<CoordinateChange>,
    pub paths: Vec<Path>,
    pub homotopies: Vec<Homotopy>,
    pub forms: Vec<PolyForm>,
}

impl Document {
    pub fn signature(&self) -> Signature {
        self.sig.expect("set by parse_document")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BlockKind {
    Lagrangian,
    Covector,
    Map,
    Path,
    Homotopy,
    Form,
}

struct Block {
    kind: BlockKind,
    header_line: usize,
    assignments: Vec<(u16, Expression)>,
    form_entries: Vec<(Vec<u16>, Expression)>,
}

fn coord_by_name(name: &str, sig: &Signature) -> Option<u16> {
    let name = name.trim();
    if let Some(rest) = name.strip_prefix("th") {
        let idx: u16 = rest.parse().ok()?;
        (idx >= 1 && idx <= sig.m).then(|| sig.n + idx)
    } else if let Some(rest) = name.strip_prefix('x') {
        let idx: u16 = rest.parse().ok()?;
        (idx >= 1 && idx <= sig.n).then_some(idx)
    } else {
        None
    }
}

fn finalize(block: Block, sig: Signature, doc: &mut Document) -> Result<(), FileError> {
    let line = block.header_line;
    let complete = |assignments: Vec<(u16, Expression)>,
                    expr_sig: Signature|
     -> Result<Vec<Expression>, FileError> {
        let mut by_coord: BTreeMap<u16, Expression> = BTreeMap::new();
        for (coord, e) in assignments {
            if by_coord.insert(coord, e).is_some() {
                return Err(FileError::new(
                    line,
                    1,
                    format!("coordinate {coord} assigned twice in this block"),
                ));
            }
        }
        let mut out = Vec::new();
        for a in 1..=expr_sig.coords() {
            match by_coord.remove(&a) {
                Some(e) => out.push(e),
                None => {
                    return Err(FileError::new(
                        line,
                        1,
                        format!("block is missing an assignment for coordinate {a}"),
                    ))
                }
            }
        }
        Ok(out)
    };
    let kernel = |e: lagcomplex::Error| FileError::new(line, 1, e.to_string());

    match block.kind {
        BlockKind::Lagrangian => {}
        BlockKind::Covector => {
            let comps = complete(block.assignments, sig)?;
            doc.covectors.push(Covector::new(sig, comps).map_err(kernel)?);
        }
        BlockKind::Map => {
            let comps = complete(block.assignments, sig)?;
            doc.maps.push(CoordinateChange::new(sig, comps).map_err(kernel)?);
        }
        BlockKind::Path => {
            let comps = complete(block.assignments, sig)?;
            doc.paths.push(Path::new(sig, comps).map_err(kernel)?);
        }
        BlockKind::Homotopy => {
            let comps = complete(block.assignments, sig.lift())?;
            doc.homotopies.push(Homotopy::new(sig, comps).map_err(kernel)?);
        }
        BlockKind::Form => {
            let mut coeffs = BTreeMap::new();
            let mut degree: Option<u16> = None;
            for (tuple, coeff) in block.form_entries {
                let this = tuple.len() as u16;
                match degree {
                    None => degree = Some(this),
                    Some(d) if d != this => {
                        return Err(FileError::new(
                            line,
                            1,
                            "form block mixes tuples of different lengths",
                        ))
                    }
                    _ => {}
                }
                if coeffs.insert(tuple, coeff).is_some() {
                    return Err(FileError::new(line, 1, "duplicate index tuple in form block"));
                }
            }
            let degree = degree.unwrap_or(0);
            doc.forms.push(PolyForm::new(sig.n, degree, coeffs).map_err(kernel)?);
        }
    }
    Ok(())
}

/// Parses a whole input file.
pub fn parse_document(text: &str) -> Result<Document, FileError> {
    let mut doc = Document::default();
    let mut block: Option<Block> = None;

    for (i, raw_line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }

        if doc.sig.is_none() {
            let Some(rest) = trimmed.strip_prefix("sig") else {
                return Err(FileError::new(lineno, 1, "expected a `sig n|m r|s` header line"));
            };
            let sig: Signature = rest
                .trim()
                .parse()
                .map_err(|m: &str| FileError::new(lineno, 1, m))?;
            doc.sig = Some(sig);
            continue;
        }
        let sig = doc.signature();

        let kind = match trimmed {
            "lagrangian" => Some(BlockKind::Lagrangian),
            "covector" => Some(BlockKind::Covector),
            "map" => Some(BlockKind::Map),
            "path" => Some(BlockKind::Path),
            "homotopy" => Some(BlockKind::Homotopy),
            "form" => Some(BlockKind::Form),
            _ => None,
        };
        if let Some(kind) = kind {
            if let Some(done) = block.take() {
                finalize(done, sig, &mut doc)?;
            }
            block = Some(Block {
                kind,
                header_line: lineno,
                assignments: Vec::new(),
                form_entries: Vec::new(),
            });
            continue;
        }

        let current = block.as_mut().map(|b| b.kind).unwrap_or(BlockKind::Lagrangian);
        match current {
            BlockKind::Lagrangian => {
                let e = lagcomplex::parse(line.trim_end(), &sig)
                    .map_err(|pe| FileError::from_parse(lineno, 0, pe))?;
                let l = Lagrangian::new(e)
                    .map_err(|err| FileError::new(lineno, 1, err.to_string()))?;
                doc.lagrangians.push(l);
            }
            BlockKind::Form => {
                let Some(colon) = line.find(':') else {
                    return Err(FileError::new(
                        lineno,
                        1,
                        "form lines look like `A1 A2 ... : coefficient`",
                    ));
                };
                let (left, right) = line.split_at(colon);
                let mut tuple = Vec::new();
                for token in left.split_whitespace() {
                    let a: u16 = token.parse().map_err(|_| {
                        FileError::new(lineno, 1, format!("bad coordinate index `{token}`"))
                    })?;
                    tuple.push(a);
                }
                let degree = tuple.len() as u16;
                let coeff_sig = PolyForm::coeff_sig(sig.n, degree);
                let expr_text = &right[1..];
                let offset = line.chars().count() - expr_text.chars().count();
                let coeff = lagcomplex::parse(expr_text.trim_end(), &coeff_sig)
                    .map_err(|pe| FileError::from_parse(lineno, offset, pe))?;
                let b = block.as_mut().expect("inside form block");
                b.form_entries.push((tuple, coeff));
            }
            _ => {
                let Some(eq) = line.find('=') else {
                    return Err(FileError::new(
                        lineno,
                        1,
                        "block lines look like `x1 = expression`",
                    ));
                };
                let (name, rest) = line.split_at(eq);
                let expr_sig =
                    if current == BlockKind::Homotopy { sig.lift() } else { sig };
                let Some(coord) = coord_by_name(name, &sig) else {
                    return Err(FileError::new(
                        lineno,
                        1,
                        format!("`{}` is not a coordinate of signature {sig}", name.trim()),
                    ));
                };
                let expr_text = &rest[1..];
                let offset = line.chars().count() - expr_text.chars().count();
                let e = lagcomplex::parse(expr_text.trim_end(), &expr_sig)
                    .map_err(|pe| FileError::from_parse(lineno, offset, pe))?;
                let b = block.as_mut().expect("inside a named block");
                b.assignments.push((coord, e));
            }
        }
    }

    let Some(sig) = doc.sig else {
        return Err(FileError::new(1, 1, "empty file: expected a `sig n|m r|s` header"));
    };
    if let Some(done) = block.take() {
        finalize(done, sig, &mut doc)?;
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bare_lagrangians() {
        let doc = parse_document("# intro\nsig 1|0 1|0\n1/2 * x1[1]^2\nx1\n").unwrap();
        assert_eq!(doc.signature(), Signature::new(1, 0, 1, 0));
        assert_eq!(doc.lagrangians.len(), 2);
    }

    #[test]
    fn parses_blocks() {
        let text = "sig 2|0 1|0\nlagrangian\nx1 * x2[1]\nmap\nx1 = x2\nx2 = x1 + x2^2\n\
                    path\nx1 = t1\nx2 = t1^2\nform\n1 2 : x1\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.lagrangians.len(), 1);
        assert_eq!(doc.maps.len(), 1);
        assert_eq!(doc.paths.len(), 1);
        assert_eq!(doc.forms.len(), 1);
        assert_eq!(doc.forms[0].degree(), 2);
    }

    #[test]
    fn homotopy_lines_use_the_lifted_signature() {
        let text = "sig 1|0 1|0\nhomotopy\nx1 = t1 + t2 * (t1 * (1 - t1))^2\n";
        let doc = parse_document(text).unwrap();
        assert_eq!(doc.homotopies.len(), 1);
    }

    #[test]
    fn reports_position_of_syntax_errors() {
        let err = parse_document("sig 1|0 1|0\nx1[1\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.col, 5);

        let err = parse_document("sig 1|0 1|0\npath\nx1 = t1 +\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.col > 5, "column {} should point into the expression", err.col);
    }

    #[test]
    fn rejects_incomplete_blocks() {
        let err = parse_document("sig 2|0 1|0\npath\nx1 = t1\n").unwrap_err();
        assert!(err.message.contains("missing an assignment"));
        let err = parse_document("sig 2|0 1|0\npath\nx1 = t1\nx1 = t1\nx2 = 0\n").unwrap_err();
        assert!(err.message.contains("assigned twice"));
    }

    #[test]
    fn rejects_inhomogeneous_lagrangians() {
        let err = parse_document("sig 1|1 1|0\nx1 + th1\n").unwrap_err();
        assert!(err.message.contains("homogeneous"));
    }

    #[test]
    fn requires_header() {
        assert!(parse_document("x1\n").is_err());
        assert!(parse_document("").is_err());
    }
}
