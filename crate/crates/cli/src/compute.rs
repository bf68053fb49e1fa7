use clap::ValueEnum;
use serde::Serialize;
use threesq::counts::{n3_primitive, r_squares, r_triangular3};
use threesq::qforms::{class_number_h, hurwitz_direct};

use crate::{CliError, CliResult, TableFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    #[value(name = "r3")]
    R3,
    #[value(name = "r2")]
    R2,
    #[value(name = "r4")]
    R4,
    #[value(name = "N3")]
    N3,
    #[value(name = "r3delta")]
    R3Delta,
    #[value(name = "h")]
    H,
    #[value(name = "H")]
    Hurwitz,
}

/// A table value: integers stay numbers in JSON, rationals become "p/q".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
enum Value {
    Int(i64),
    Ratio(String),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Ratio(s) => s.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
struct Row {
    input: i64,
    value: Value,
}

/// Parses integers and inclusive ranges `a..b`, in the order given.
pub fn parse_inputs(args: &[String]) -> CliResult<Vec<i64>> {
    let mut out = Vec::new();
    for a in args {
        let bad = || CliError::Usage(format!("not an integer or range a..b: '{a}'"));
        match a.split_once("..") {
            Some((lo, hi)) => {
                let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(CliError::Usage(format!("empty range '{a}'")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(a.trim().parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn non_negative(n: i64) -> CliResult<u64> {
    u64::try_from(n).map_err(|_| CliError::Usage(format!("argument must be non-negative: {n}")))
}

fn evaluate(f: Function, n: i64) -> CliResult<Value> {
    Ok(match f {
        Function::R2 => Value::Int(r_squares(2, non_negative(n)?) as i64),
        Function::R3 => Value::Int(r_squares(3, non_negative(n)?) as i64),
        Function::R4 => Value::Int(r_squares(4, non_negative(n)?) as i64),
        Function::N3 => Value::Int(n3_primitive(non_negative(n)?) as i64),
        Function::R3Delta => Value::Int(r_triangular3(non_negative(n)?) as i64),
        Function::H => Value::Int(class_number_h(n)?),
        Function::Hurwitz => {
            let v = hurwitz_direct(non_negative(n)?);
            if v.is_integer() {
                Value::Int(v.to_integer())
            } else {
                Value::Ratio(v.to_string())
            }
        }
    })
}

pub fn run(f: Function, args: &[String], format: TableFormat) -> CliResult<()> {
    let rows = parse_inputs(args)?
        .into_iter()
        .map(|n| evaluate(f, n).map(|value| Row { input: n, value }))
        .collect::<CliResult<Vec<_>>>()?;
    print!("{}", render(&rows, format));
    Ok(())
}

fn render(rows: &[Row], format: TableFormat) -> String {
    match format {
        TableFormat::Json => serde_json::to_string_pretty(rows).expect("rows serialize") + "\n",
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["input", "value"]).expect("in-memory write");
            for r in rows {
                w.write_record([r.input.to_string(), r.value.csv()]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_values_and_ranges() {
        assert_eq!(parse_inputs(&strings(&["3", "0..2", "-4..-3"])).unwrap(), vec![3, 0, 1, 2, -4, -3]);
        assert!(parse_inputs(&strings(&["5..1"])).is_err());
        assert!(parse_inputs(&strings(&["x"])).is_err());
    }

    #[test]
    fn hurwitz_values_print_as_ratios() {
        let vals: Vec<String> = [3, 4, 12].iter().map(|&n| evaluate(Function::Hurwitz, n).unwrap().csv()).collect();
        assert_eq!(vals, vec!["1/3", "1/2", "4/3"]);
        assert!(evaluate(Function::H, -5).is_err());
        assert!(evaluate(Function::R3, -1).is_err());
    }

    #[test]
    fn csv_has_header() {
        let rows = vec![Row { input: 3, value: Value::Ratio("1/3".into()) }];
        assert_eq!(render(&rows, TableFormat::Csv), "input,value\n3,1/3\n");
        assert_eq!(render(&[], TableFormat::Csv), "input,value\n");
    }
}
