//! File formats: Cayley-table JSON, filter JSON, JSONL report streams and
//! CSV bound tables.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::algebra::{build_family, FamilySpec, FinSemigroup};
use crate::error::{Error, Result};
use crate::filter::PrincipalFilter;
use crate::mask::SubsetMask;
use crate::partition::BoundRecord;

/// The on-disk Cayley table, fields in canonical order.
#[derive(Serialize)]
struct TableDoc<'a> {
    name: &'a str,
    order: usize,
    table: Vec<Vec<usize>>,
}

/// Canonical compact JSON for a semigroup, newline terminated.
pub fn table_to_json(s: &FinSemigroup) -> String {
    let doc = TableDoc {
        name: s.name(),
        order: s.order(),
        table: s.rows(),
    };
    let mut out = serde_json::to_string(&doc).expect("tables always serialize");
    out.push('\n');
    out
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        Error::schema(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn as_index(v: &Value, location: impl Fn() -> String) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::schema(location(), format!("expected a non-negative integer, found {v}")))
}

/// Parses and validates a Cayley-table document. Structural problems are
/// reported as schema errors naming the offending field or cell; a
/// non-associative table gives the first failing triple.
pub fn table_from_json(text: &str) -> Result<FinSemigroup> {
    let v = parse_json(text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::schema("$", "expected an object with name, order and table"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "name" | "order" | "table") {
            return Err(Error::schema(format!("$.{key}"), "unknown field"));
        }
    }
    let name = match obj.get("name") {
        None => "table".to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => return Err(Error::schema("$.name", format!("expected a string, found {other}"))),
    };
    let rows = obj
        .get("table")
        .ok_or_else(|| Error::schema("$.table", "missing field"))?
        .as_array()
        .ok_or_else(|| Error::schema("$.table", "expected an array of rows"))?;
    let n = rows.len();
    if n == 0 {
        return Err(Error::schema("$.table", "a table needs at least one row"));
    }
    if let Some(order) = obj.get("order") {
        let order = as_index(order, || "$.order".into())?;
        if order != n {
            return Err(Error::schema("$.order", format!("order is {order} but the table has {n} rows")));
        }
    }
    let mut parsed = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::schema(format!("$.table[{i}]"), "expected an array"))?;
        if row.len() != n {
            return Err(Error::schema(
                format!("$.table[{i}]"),
                format!("row has {} entries, expected {n}", row.len()),
            ));
        }
        let mut out = Vec::with_capacity(n);
        for (j, cell) in row.iter().enumerate() {
            let x = as_index(cell, || format!("$.table[{i}][{j}]"))?;
            if x >= n {
                return Err(Error::schema(
                    format!("$.table[{i}][{j}]"),
                    format!("entry {x} is outside 0..{n}"),
                ));
            }
            out.push(x);
        }
        parsed.push(out);
    }
    FinSemigroup::from_table(name, &parsed)
}

/// A family spec, or a path to a Cayley-table JSON file.
pub fn parse_instance(source: &str) -> Result<FinSemigroup> {
    let path = Path::new(source);
    if source.ends_with(".json") || path.is_file() {
        let text = fs::read_to_string(path)?;
        return table_from_json(&text);
    }
    build_family(&source.parse::<FamilySpec>()?)
}

/// `{"base": [..]}` for the given semigroup.
pub fn filter_from_json(s: &FinSemigroup, text: &str) -> Result<PrincipalFilter> {
    let v = parse_json(text)?;
    let base = v
        .get("base")
        .ok_or_else(|| Error::schema("$.base", "missing field"))?
        .as_array()
        .ok_or_else(|| Error::schema("$.base", "expected an array of elements"))?;
    let elems = base
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let e = as_index(x, || format!("$.base[{i}]"))?;
            if e >= s.order() {
                return Err(Error::schema(format!("$.base[{i}]"), format!("element {e} is outside 0..{}", s.order())));
            }
            Ok(e)
        })
        .collect::<Result<Vec<_>>>()?;
    PrincipalFilter::new(s, s.mask(&elems)?)
}

pub fn filter_to_json(tau: &PrincipalFilter) -> String {
    let mut out = serde_json::to_string(&serde_json::json!({ "base": tau.base().to_vec() })).expect("serializable");
    out.push('\n');
    out
}

/// Parses `0,2,4` (or an empty string) into a mask over `s`.
pub fn parse_element_list(s: &FinSemigroup, text: &str) -> Result<SubsetMask> {
    let elems = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("`{t}` is not an element index")))
        })
        .collect::<Result<Vec<_>>>()?;
    s.mask(&elems)
}

/// Destination for report lines: a file or standard output.
pub struct Sink {
    inner: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(std::io::BufWriter::new(fs::File::create(p)?)),
            None => Box::new(std::io::BufWriter::new(std::io::stdout())),
        };
        Ok(Sink { inner })
    }

    /// One compact JSON document per line.
    pub fn json_line<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let line = serde_json::to_string(value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        writeln!(self.inner, "{line}")?;
        Ok(())
    }

    pub fn raw(&mut self, text: &str) -> Result<()> {
        self.inner.write_all(text.as_bytes())?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

/// Flat CSV row of a [`BoundRecord`].
#[derive(Serialize)]
struct BoundRow<'a> {
    group: &'a str,
    order: usize,
    base: String,
    cells: usize,
    mode: &'a str,
    widened: bool,
    partitions_checked: u64,
    worst_min_f: String,
    proven_bound: String,
    bound_applies: bool,
    proven_bound_violated: bool,
    conjecture_bound: String,
    exceeds_conjecture: bool,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

/// CSV table with a header row, one row per record.
pub fn bound_records_csv(records: &[BoundRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(BoundRow {
            group: &r.group,
            order: r.order,
            base: r.base.to_vec().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
            cells: r.cells,
            mode: r.mode.name(),
            widened: r.widened,
            partitions_checked: r.partitions_checked,
            worst_min_f: opt(r.worst_min_f),
            proven_bound: opt(r.proven_bound),
            bound_applies: r.bound_applies,
            proven_bound_violated: r.proven_bound_violated,
            conjecture_bound: opt(r.conjecture_bound),
            exceeds_conjecture: r.exceeds_conjecture,
        })
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        for spec in ["rightzero:3", "cyclic:5", "transformation:2", "product:cyclic:2,null:2"] {
            let s = parse_instance(spec).unwrap();
            let text = table_to_json(&s);
            let back = table_from_json(&text).unwrap();
            assert_eq!(back.rows(), s.rows());
            assert_eq!(table_to_json(&back), text);
        }
    }

    #[test]
    fn schema_errors_name_the_location() {
        let err = table_from_json(r#"{"name":"x","order":2,"table":[[0,1],[1,5]]}"#).unwrap_err();
        assert!(matches!(&err, Error::Schema { location, .. } if location == "$.table[1][1]"), "{err}");
        let err = table_from_json(r#"{"table":[[0,1],[1]]}"#).unwrap_err();
        assert!(matches!(&err, Error::Schema { location, .. } if location == "$.table[1]"));
        let err = table_from_json("{\"table\": [[0,\n").unwrap_err();
        assert!(matches!(&err, Error::Schema { location, .. } if location.starts_with("line 2")));
        let err = table_from_json(r#"{"order":3,"table":[[0]]}"#).unwrap_err();
        assert!(matches!(&err, Error::Schema { location, .. } if location == "$.order"));
        let err = table_from_json(r#"{"table":[[0]],"extra":1}"#).unwrap_err();
        assert!(matches!(&err, Error::Schema { .. }));
        let err = table_from_json(r#"{"table":[[0,-1],[1,0]]}"#).unwrap_err();
        assert!(matches!(&err, Error::Schema { location, .. } if location == "$.table[0][1]"));
    }

    #[test]
    fn non_associative_table_names_a_triple() {
        // 0·0 = 1 and 1·0 = 0: (0·0)·0 = 0 but 0·(0·0) = 0·1 = 1
        let err = table_from_json(r#"{"table":[[1,1],[0,0]]}"#).unwrap_err();
        assert!(matches!(err, Error::Associativity { .. }));
        assert!(err.to_string().contains('*'));
    }

    #[test]
    fn filters() {
        let s = parse_instance("cyclic:6").unwrap();
        let t = filter_from_json(&s, r#"{"base":[0,2,4]}"#).unwrap();
        assert_eq!(t.base(), s.mask(&[0, 2, 4]).unwrap());
        assert_eq!(filter_from_json(&s, &filter_to_json(&t)).unwrap(), t);
        assert!(matches!(filter_from_json(&s, r#"{"base":[]}"#), Err(Error::EmptyBase)));
        assert!(matches!(filter_from_json(&s, r#"{"base":[9]}"#), Err(Error::Schema { .. })));
        assert_eq!(parse_element_list(&s, " 1, 3 ").unwrap(), s.mask(&[1, 3]).unwrap());
        assert!(parse_element_list(&s, "1,x").is_err());
    }

    #[test]
    fn shipped_schemas_parse() {
        for file in ["cayley_table.schema.json", "filter.schema.json"] {
            let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(file);
            let v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
            assert_eq!(v["type"], "object");
        }
    }
}
