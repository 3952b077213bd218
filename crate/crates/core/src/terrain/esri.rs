//! ESRI ASCII grid (`.asc`) reading and writing.

use std::fmt::Write as _;
use std::io::{self, Read, Write};

use super::TerrainGrid;
use crate::error::{Error, Result};

const KEYS: [&str; 6] = ["ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value"];

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Whitespace-separated tokens of a line with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |tok| (tok.as_ptr() as usize - line.as_ptr() as usize + 1, tok))
}

/// Parses an ESRI ASCII grid.
pub fn parse_esri_ascii(text: &str) -> Result<TerrainGrid> {
    let mut header = [None; 6];
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let mut first_data = None;
    for (lineno, line) in lines.by_ref() {
        let mut toks = tokens(line);
        let (col, key) = toks.next().expect("line is not blank");
        let Some(slot) = KEYS.iter().position(|k| k.eq_ignore_ascii_case(key)) else {
            if key.parse::<f64>().is_ok() {
                first_data = Some((lineno, line));
                break;
            }
            return Err(parse_error(lineno, col, format!("unknown header key `{key}`")));
        };
        if header[slot].is_some() {
            return Err(parse_error(lineno, col, format!("duplicate header key `{key}`")));
        }
        let (vcol, value) = toks.next().ok_or_else(|| parse_error(lineno, col + key.len(), "missing header value"))?;
        let value: f64 =
            value.parse().map_err(|_| parse_error(lineno, vcol, format!("invalid value `{value}` for `{key}`")))?;
        if let Some((c, extra)) = toks.next() {
            return Err(parse_error(lineno, c, format!("unexpected token `{extra}` after header value")));
        }
        header[slot] = Some((lineno, value));
        if header.iter().all(Option::is_some) {
            break;
        }
    }
    for (k, slot) in KEYS.iter().zip(&header) {
        if slot.is_none() {
            return Err(parse_error(1, 1, format!("missing header key `{k}`")));
        }
    }
    let value = |i: usize| header[i].expect("checked above").1;
    let count = |i: usize| -> Result<usize> {
        let (line, v) = header[i].expect("checked above");
        if v >= 1.0 && v.fract() == 0.0 {
            Ok(v as usize)
        } else {
            Err(parse_error(line, 1, format!("`{}` must be a positive integer, got {v}", KEYS[i])))
        }
    };
    let cols = count(0)?;
    let rows = count(1)?;
    let cell_size = value(4);
    if !(cell_size > 0.0) {
        return Err(parse_error(header[4].unwrap().0, 1, "cellsize must be positive"));
    }
    let nodata_value = value(5);

    let mut heights = Vec::with_capacity(rows * cols);
    let mut nodata = Vec::with_capacity(rows * cols);
    let mut row_count = 0;
    for (lineno, line) in first_data.into_iter().chain(lines) {
        if row_count == rows {
            return Err(Error::DimensionMismatch { expected: rows, found: row_count + 1 });
        }
        let before = heights.len();
        for (col, tok) in tokens(line) {
            let v: f64 = tok.parse().map_err(|_| parse_error(lineno, col, format!("invalid number `{tok}`")))?;
            nodata.push(v == nodata_value);
            heights.push(v);
        }
        let found = heights.len() - before;
        if found != cols {
            return Err(Error::DimensionMismatch { expected: cols, found });
        }
        row_count += 1;
    }
    if row_count != rows {
        return Err(Error::DimensionMismatch { expected: rows, found: row_count });
    }
    Ok(TerrainGrid { rows, cols, cell_size, xllcorner: value(2), yllcorner: value(3), nodata_value, heights, nodata })
}

/// Reads an ESRI ASCII grid from a stream.
pub fn load_esri_ascii(mut reader: impl Read) -> Result<TerrainGrid> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_esri_ascii(&text)
}

/// Formats a grid as ESRI ASCII. Values use the shortest representation
/// that parses back to the same number.
pub fn format_esri_ascii(grid: &TerrainGrid) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ncols {}", grid.cols);
    let _ = writeln!(out, "nrows {}", grid.rows);
    let _ = writeln!(out, "xllcorner {}", grid.xllcorner);
    let _ = writeln!(out, "yllcorner {}", grid.yllcorner);
    let _ = writeln!(out, "cellsize {}", grid.cell_size);
    let _ = writeln!(out, "NODATA_value {}", grid.nodata_value);
    for r in 0..grid.rows {
        for c in 0..grid.cols {
            if c > 0 {
                out.push(' ');
            }
            let i = grid.index(r, c);
            let v = if grid.nodata[i] { grid.nodata_value } else { grid.heights[i] };
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_esri_ascii(grid: &TerrainGrid, mut writer: impl Write) -> io::Result<()> {
    writer.write_all(format_esri_ascii(grid).as_bytes())
}
