//! CSV persistence of the class-number memo tables.
//!
//! One table holds both maps: rows with a negative key are `h(D)`, rows
//! with a non-negative key are `H(N)`. Every row is checked for shape and
//! for the cheap structural facts of its kind; one row in a hundred is
//! recomputed from scratch.

use std::collections::BTreeSet;
use std::fs::File;
use std::path::Path;

use threesq::qforms::{check_discriminant, class_number_h, hurwitz_direct, ClassNumberCache, Rat};

use crate::{CliError, CliResult};

pub const HEADER: [&str; 3] = ["key", "numerator", "denominator"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entry {
    ClassNumber { d: i64, h: i64 },
    Hurwitz { n: u64, value: Rat },
}

impl Entry {
    fn key(&self) -> i64 {
        match *self {
            Entry::ClassNumber { d, .. } => d,
            Entry::Hurwitz { n, .. } => n as i64,
        }
    }

    fn fields(&self) -> [String; 3] {
        match *self {
            Entry::ClassNumber { d, h } => [d.to_string(), h.to_string(), "1".into()],
            Entry::Hurwitz { n, value } => [n.to_string(), value.numer().to_string(), value.denom().to_string()],
        }
    }

    fn recomputed(&self) -> CliResult<Entry> {
        Ok(match *self {
            Entry::ClassNumber { d, .. } => Entry::ClassNumber { d, h: class_number_h(d)? },
            Entry::Hurwitz { n, .. } => Entry::Hurwitz { n, value: hurwitz_direct(n) },
        })
    }
}

/// Rows of a cache in key order.
pub fn entries(cache: &ClassNumberCache) -> Vec<Entry> {
    let mut rows: Vec<Entry> = cache
        .h_entries()
        .into_iter()
        .map(|(d, h)| Entry::ClassNumber { d, h })
        .chain(cache.hurwitz_entries().into_iter().map(|(n, value)| Entry::Hurwitz { n, value }))
        .collect();
    rows.sort_by_key(Entry::key);
    rows
}

pub fn to_csv(rows: &[Entry]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(r.fields()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn mismatch(row: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Mismatch(format!("row {row}: {msg}"))
}

fn parse_row(row: usize, rec: &csv::StringRecord) -> CliResult<Entry> {
    if rec.len() != 3 {
        return Err(mismatch(row, format!("expected 3 fields, found {}", rec.len())));
    }
    let int = |i: usize| rec[i].trim().parse::<i64>().map_err(|_| mismatch(row, format!("'{}' is not an integer", &rec[i])));
    let (key, num, den) = (int(0)?, int(1)?, int(2)?);
    if den <= 0 {
        return Err(mismatch(row, "denominator must be positive"));
    }
    let value = Rat::new(num, den);
    if *value.numer() != num {
        return Err(mismatch(row, format!("{num}/{den} is not reduced")));
    }
    if key < 0 {
        check_discriminant(key).map_err(|e| mismatch(row, e))?;
        if den != 1 || num < 1 {
            return Err(mismatch(row, format!("h({key}) = {value} is not a positive integer")));
        }
        Ok(Entry::ClassNumber { d: key, h: num })
    } else {
        let n = key as u64;
        if matches!(n % 4, 1 | 2) && num != 0 {
            return Err(mismatch(row, format!("H({n}) must vanish, found {value}")));
        }
        if !(value * 12).is_integer() {
            return Err(mismatch(row, format!("12·H({n}) = {} is not an integer", value * 12)));
        }
        Ok(Entry::Hurwitz { n, value })
    }
}

/// Parses and validates a cache table; `Err` names the first bad row
/// (data rows count from 1).
pub fn parse_and_validate(text: &str) -> CliResult<(Vec<Entry>, usize)> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| CliError::Mismatch(format!("header: {e}")))?;
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(CliError::Mismatch(format!("header must be {}", HEADER.join(","))));
    }
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| mismatch(row, e))?;
        let entry = parse_row(row, &rec)?;
        if !seen.insert(entry.key()) {
            return Err(mismatch(row, format!("duplicate key {}", entry.key())));
        }
        rows.push(entry);
    }
    let step = (rows.len() / 100).max(1);
    let mut checked = 0;
    for (i, entry) in rows.iter().enumerate().step_by(step) {
        let fresh = entry.recomputed()?;
        if fresh != *entry {
            let [k, p, q] = entry.fields();
            let [_, fp, fq] = fresh.fields();
            return Err(mismatch(i + 1, format!("key {k} stores {p}/{q}, recomputed {fp}/{fq}")));
        }
        checked += 1;
    }
    Ok((rows, checked))
}

/// Fills `h(D)` for `-bound ≤ D < 0` and `H(N)` for `0 ≤ N ≤ bound`.
pub fn populate(cache: &ClassNumberCache, bound: u64) -> CliResult<()> {
    if bound == 0 {
        return Ok(());
    }
    for n in 0..=bound {
        cache.hurwitz(n);
        let d = -(n as i64);
        if check_discriminant(d).is_ok() {
            cache.h(d)?;
        }
    }
    Ok(())
}

pub fn save(path: &Path, bound: u64) -> CliResult<()> {
    let cache = ClassNumberCache::new();
    populate(&cache, bound)?;
    let rows = entries(&cache);
    std::fs::write(path, to_csv(&rows)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    println!("saved {} rows to {}", rows.len(), path.display());
    Ok(())
}

pub fn load(path: &Path) -> CliResult<()> {
    let text = std::io::read_to_string(File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let (rows, checked) = parse_and_validate(&text)?;
    let cache = ClassNumberCache::new();
    for r in &rows {
        match *r {
            Entry::ClassNumber { d, h } => cache.insert_h(d, h),
            Entry::Hurwitz { n, value } => cache.insert_hurwitz(n, value),
        }
    }
    let h_rows = rows.iter().filter(|r| matches!(r, Entry::ClassNumber { .. })).count();
    println!(
        "loaded {} rows from {} (h: {}, H: {}), recomputed {}",
        rows.len(),
        path.display(),
        h_rows,
        rows.len() - h_rows,
        checked
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_identical() {
        let cache = ClassNumberCache::new();
        populate(&cache, 60).unwrap();
        let text = to_csv(&entries(&cache));
        let (rows, checked) = parse_and_validate(&text).unwrap();
        assert!(checked >= 1);
        assert_eq!(to_csv(&rows), text);
    }

    #[test]
    fn empty_cache_is_header_only() {
        assert_eq!(to_csv(&entries(&ClassNumberCache::new())), "key,numerator,denominator\n");
        assert_eq!(parse_and_validate("key,numerator,denominator\n").unwrap().0, vec![]);
    }

    #[test]
    fn rejects_bad_rows() {
        let bad = [
            "key,numerator,denominator\n-44,2,1\n",
            "key,numerator,denominator\n5,1,1\n",
            "key,numerator,denominator\n3,2,6\n",
            "key,numerator,denominator\n-5,1,1\n",
            "key,numerator,denominator\n3,1,3\n3,1,3\n",
            "key,numerator,denominator\n3,1\n",
            "k,n,d\n",
        ];
        for text in bad {
            assert!(matches!(parse_and_validate(text), Err(CliError::Mismatch(_))), "{text}");
        }
    }
}
