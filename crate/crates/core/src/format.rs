//! Context file formats.
//!
//! Burmeister `.cxt`:
//!
//! ```text
//! B
//!
//! <number of objects>
//! <number of attributes>
//!
//! <object names, one per line>
//! <attribute names, one per line>
//! <one row of '.'/'X' per object>
//! ```
//!
//! CSV: the header row holds the attribute names (its first cell is ignored),
//! every further row starts with the object name followed by `0`/`1` cells.
//! `x`/`X` and empty cells are also read; `0`/`1` is always written.

use std::io::{BufRead, Read, Write};
use std::str::FromStr;

use crate::{Error, FormalContext, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Cxt,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cxt" | "burmeister" | "burmeister-cxt" => Ok(Format::Cxt),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

impl Format {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &std::path::Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "cxt" => Some(Format::Cxt),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

pub fn read_context(reader: impl Read, format: Format) -> Result<FormalContext> {
    match format {
        Format::Cxt => read_cxt(std::io::BufReader::new(reader)),
        Format::Csv => read_csv(reader),
    }
}

pub fn write_context(ctx: &FormalContext, writer: impl Write, format: Format) -> Result<()> {
    match format {
        Format::Cxt => write_cxt(ctx, writer),
        Format::Csv => write_csv(ctx, writer),
    }
}

pub fn parse_cxt(text: &str) -> Result<FormalContext> {
    read_cxt(text.as_bytes())
}

pub fn to_cxt_string(ctx: &FormalContext) -> String {
    let mut out = Vec::new();
    write_cxt(ctx, &mut out).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("labels are valid UTF-8")
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_cxt(reader: impl BufRead) -> Result<FormalContext> {
    let mut lines = Vec::new();
    for line in reader.lines() {
        let line = line?;
        lines.push(line.trim_end_matches('\r').to_string());
    }
    let mut cursor = 0usize;
    // returns (1-based line number, content)
    let mut next = |what: &str| -> Result<(usize, String)> {
        let i = cursor;
        cursor += 1;
        lines
            .get(i)
            .map(|l| (i + 1, l.clone()))
            .ok_or_else(|| parse_err(i + 1, format!("unexpected end of file, expected {what}")))
    };

    let (no, header) = next("header")?;
    if header.trim() != "B" {
        return Err(parse_err(no, format!("expected header \"B\", found {header:?}")));
    }
    let (no, blank) = next("blank line")?;
    if !blank.trim().is_empty() {
        return Err(parse_err(no, "expected blank line after header"));
    }
    let mut count = |what: &str| -> Result<usize> {
        let (no, s) = next(what)?;
        s.trim()
            .parse()
            .map_err(|_| parse_err(no, format!("expected {what}, found {s:?}")))
    };
    let n = count("number of objects")?;
    let k = count("number of attributes")?;
    let (no, blank) = next("blank line")?;
    if !blank.trim().is_empty() {
        return Err(parse_err(no, "expected blank line after sizes"));
    }
    let mut labels = |count: usize, what: &str| -> Result<Vec<String>> {
        (0..count).map(|_| next(what).map(|(_, s)| s)).collect()
    };
    let objects = labels(n, "object name")?;
    let attributes = labels(k, "attribute name")?;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (no, row) = next("incidence row")?;
        let row = row.trim_end();
        let cells: Vec<bool> = row
            .chars()
            .map(|c| match c {
                'X' | 'x' => Ok(true),
                '.' => Ok(false),
                other => Err(parse_err(no, format!("invalid incidence character {other:?}"))),
            })
            .collect::<Result<_>>()?;
        if cells.len() != k {
            return Err(parse_err(
                no,
                format!("row has {} cells, expected {k}", cells.len()),
            ));
        }
        rows.push(cells);
    }
    if let Some((i, extra)) = lines[cursor..]
        .iter()
        .enumerate()
        .find(|(_, l)| !l.trim().is_empty())
    {
        return Err(parse_err(
            cursor + i + 1,
            format!("unexpected trailing content {extra:?}"),
        ));
    }
    FormalContext::from_rows(objects, attributes, &rows).map_err(|e| match e {
        Error::DuplicateLabel { kind, label } => {
            parse_err(1, format!("duplicate {kind} label {label:?}"))
        }
        other => other,
    })
}

pub fn write_cxt(ctx: &FormalContext, mut w: impl Write) -> Result<()> {
    writeln!(w, "B")?;
    writeln!(w)?;
    writeln!(w, "{}", ctx.n_objects())?;
    writeln!(w, "{}", ctx.n_attributes())?;
    writeln!(w)?;
    for o in ctx.objects() {
        writeln!(w, "{o}")?;
    }
    for a in ctx.attributes() {
        writeln!(w, "{a}")?;
    }
    for g in 0..ctx.n_objects() {
        let row: String = (0..ctx.n_attributes())
            .map(|m| if ctx.incident(g, m) { 'X' } else { '.' })
            .collect();
        writeln!(w, "{row}")?;
    }
    Ok(())
}

pub fn read_csv(reader: impl Read) -> Result<FormalContext> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(r) => r?,
        None => return Err(parse_err(1, "missing header row")),
    };
    let attributes: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(i + 2, |p| p.line() as usize);
        if rec.len() != attributes.len() + 1 {
            return Err(parse_err(
                line,
                format!(
                    "row has {} cells, expected {}",
                    rec.len(),
                    attributes.len() + 1
                ),
            ));
        }
        objects.push(rec[0].to_string());
        let cells = rec
            .iter()
            .skip(1)
            .map(|c| match c.trim() {
                "1" | "x" | "X" => Ok(true),
                "0" | "" => Ok(false),
                other => Err(parse_err(line, format!("invalid cell {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        rows.push(cells);
    }
    FormalContext::from_rows(objects, attributes, &rows)
}

pub fn write_csv(ctx: &FormalContext, w: impl Write) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec![String::new()];
    header.extend(ctx.attributes().iter().cloned());
    wtr.write_record(&header)?;
    for g in 0..ctx.n_objects() {
        let mut rec = vec![ctx.object_label(g).to_string()];
        rec.extend((0..ctx.n_attributes()).map(|m| {
            if ctx.incident(g, m) { "1" } else { "0" }.to_string()
        }));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}
