//! Plain-text point clouds and distance matrices.
//!
//! One record per line, fields separated by whitespace or commas. Blank
//! lines and lines starting with `#` are skipped.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, PointCloud};
use crate::scalar::Scalar;

fn parse_rows<T: Scalar + FromStr>(text: &str) -> Result<Vec<Vec<T>>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .map(|f| {
                f.parse::<T>().map_err(|_| Error::Parse { line: lineno + 1, msg: format!("not a number: {f:?}") })
            })
            .collect::<Result<Vec<T>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn parse_point_cloud<T: Scalar + FromStr>(text: &str) -> Result<PointCloud<T>> {
    PointCloud::new(parse_rows(text)?)
}

pub fn parse_distance_matrix<T: Scalar + FromStr>(text: &str) -> Result<DistanceMatrix<T>> {
    DistanceMatrix::from_rows(parse_rows(text)?)
}

/// Space-separated coordinates, shortest round-trip formatting.
pub fn point_cloud_text<T: Scalar>(cloud: &PointCloud<T>) -> String {
    let mut out = String::new();
    for p in cloud.points() {
        let cells: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Columns of a headed CSV table such as `coords_0.csv` or `truth.csv`.
pub fn parse_columns<T: Scalar + FromStr>(text: &str) -> Result<Vec<(String, Vec<T>)>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let Some((_, header)) = lines.next() else {
        return Err(Error::Parse { line: 1, msg: "missing header".into() });
    };
    let mut columns: Vec<(String, Vec<T>)> = header.split(',').map(|h| (h.trim().to_string(), Vec::new())).collect();
    for (lineno, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != columns.len() {
            return Err(Error::Parse { line: lineno + 1, msg: format!("expected {} fields, found {}", columns.len(), cells.len()) });
        }
        for ((_, col), cell) in columns.iter_mut().zip(cells) {
            let x = cell.parse::<T>().map_err(|_| Error::Parse { line: lineno + 1, msg: format!("not a number: {cell:?}") })?;
            col.push(x);
        }
    }
    Ok(columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_separators() {
        let cloud: PointCloud<f64> = parse_point_cloud("# header\n0, 1.5\n2 3\n\n-1,\t4e-1\n").unwrap();
        assert_eq!(cloud.len(), 3);
        assert_eq!(cloud.point(2), &[-1.0, 0.4]);
        let again: PointCloud<f64> = parse_point_cloud(&point_cloud_text(&cloud)).unwrap();
        assert_eq!(again, cloud);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_point_cloud::<f64>("1 2\n3 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_point_cloud::<f64>("1 2\n3\n").is_err());
    }

    #[test]
    fn matrix_symmetrized() {
        let d: DistanceMatrix<f64> = parse_distance_matrix("0 1 2\n1 0 3\n2 3.0000000001 0\n").unwrap();
        assert_eq!(d.get(1, 2), d.get(2, 1));
        assert!(parse_distance_matrix::<f64>("0 1\n2 0\n").is_err());
    }

    #[test]
    fn headed_columns() {
        let cols: Vec<(String, Vec<f64>)> = parse_columns("point_index,theta\n0,2.5e-1\n1,0.5\n").unwrap();
        assert_eq!(cols[0], ("point_index".to_string(), vec![0.0, 1.0]));
        assert_eq!(cols[1].1, vec![0.25, 0.5]);
        assert!(parse_columns::<f64>("a,b\n1\n").is_err());
    }
}
