use std::fmt::Write as _;

use serde::Serialize;
use threesq::qforms::{bijection_report, check_discriminant, classify_forms, enumerate_reduced, hurwitz_direct, class_number_h};

use crate::{CliError, CliResult, ReportFormat};

#[derive(Serialize)]
struct FormRow {
    form: String,
    content: i64,
    primitive: bool,
    #[serde(rename = "type")]
    ty: String,
    weight: String,
}

#[derive(Serialize)]
struct FormListing {
    discriminant: i64,
    forms: Vec<FormRow>,
    h: i64,
    #[serde(rename = "H")]
    hurwitz: String,
    #[serde(rename = "A")]
    odd_imprimitive: usize,
}

pub fn forms(d: i64, format: ReportFormat) -> CliResult<()> {
    check_discriminant(d)?;
    let forms = enumerate_reduced(d)?;
    let census = classify_forms(d)?;
    let listing = FormListing {
        discriminant: d,
        forms: forms
            .iter()
            .map(|f| FormRow {
                form: f.to_string(),
                content: f.content(),
                primitive: f.is_primitive(),
                ty: f.form_type().expect("reduced").to_string(),
                weight: f.hurwitz_weight().to_string(),
            })
            .collect(),
        h: class_number_h(d)?,
        hurwitz: hurwitz_direct(d.unsigned_abs()).to_string(),
        odd_imprimitive: census.odd_content,
    };
    let out = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&listing).expect("listing serializes") + "\n",
        ReportFormat::Text => {
            let mut out = String::new();
            for r in &listing.forms {
                writeln!(
                    out,
                    "{} content={} primitive={} type={} weight={}",
                    r.form,
                    r.content,
                    if r.primitive { "yes" } else { "no" },
                    r.ty,
                    r.weight
                )
                .unwrap();
            }
            writeln!(
                out,
                "D={} forms={} h={} H={} A={}",
                d,
                listing.forms.len(),
                listing.h,
                listing.hurwitz,
                listing.odd_imprimitive
            )
            .unwrap();
            out
        }
    };
    print!("{out}");
    Ok(())
}

#[derive(Serialize)]
struct BijectionRow {
    triple: [u64; 3],
    form: String,
    #[serde(rename = "type")]
    ty: String,
}

#[derive(Serialize)]
struct BijectionListing {
    n: u64,
    pairs: Vec<BijectionRow>,
    total: u64,
    strict: u64,
    two_equal: u64,
    all_equal: u64,
    decomposition_holds: bool,
    census_matches: bool,
}

pub fn bijection(n: u64, format: ReportFormat) -> CliResult<()> {
    if n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let report = bijection_report(n)?;
    let d = report.decomposition;
    let listing = BijectionListing {
        n,
        pairs: report
            .pairs
            .iter()
            .map(|(t, f, ty)| BijectionRow { triple: [t.r, t.s, t.t], form: f.to_string(), ty: ty.to_string() })
            .collect(),
        total: d.total,
        strict: d.strict,
        two_equal: d.two_equal,
        all_equal: d.all_equal,
        decomposition_holds: d.is_consistent(),
        census_matches: report.holds(),
    };
    let out = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&listing).expect("listing serializes") + "\n",
        ReportFormat::Text => {
            let mut out = String::new();
            for p in &listing.pairs {
                writeln!(out, "({},{},{}) -> {} [{}]", p.triple[0], p.triple[1], p.triple[2], p.form, p.ty).unwrap();
            }
            writeln!(
                out,
                "n={} total={} = 6*{} + 3*{} + {} ({}), census {}",
                n,
                d.total,
                d.strict,
                d.two_equal,
                d.all_equal,
                if listing.decomposition_holds { "holds" } else { "FAILS" },
                if listing.census_matches { "matches" } else { "MISMATCH" }
            )
            .unwrap();
            out
        }
    };
    print!("{out}");
    if listing.decomposition_holds && listing.census_matches {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!("bijection fails at n = {n}")))
    }
}
