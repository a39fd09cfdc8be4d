use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use lvhecke::bimod::{equivariant_poincare, verify_rings, RingSpec, Rings};
use lvhecke::fiber::{fiber_table, ResolutionSpec};
use lvhecke::klv::{compute_klv, uncovered, KlvOptions, KlvReport};
use lvhecke::lv::{builtin, gen_complex as complex_datum, Datum, LVVector, ValidatedDatum};
use lvhecke::Laurent;

use crate::failure::{invalid_report, Failure};
use crate::{Format, KlvArgs, Op, PoincareArgs, TsactArgs};

const BUILTIN: &str = "builtin:";

fn load(arg: &str) -> Result<ValidatedDatum, Failure> {
    match arg.strip_prefix(BUILTIN) {
        Some(name) => Ok(builtin(name)?),
        None => Ok(Datum::load(arg)?.into_validated()?),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serialises");
    s.push('\n');
    s
}

/// A TSV table with one header line.
fn tsv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join("\t");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    out
}

pub fn check(arg: &str, fmt: Format) -> Result<String, Failure> {
    let report = match arg.strip_prefix(BUILTIN) {
        Some(name) => builtin(name)?.report().clone(),
        None => Datum::load(arg)?.validate(),
    };
    let out = match fmt {
        Format::Tsv => format!("{}\n", report.summary()),
        Format::Json => to_json(&json!({ "summary": report.summary(), "report": report })),
    };
    if report.is_valid() {
        Ok(out)
    } else {
        match invalid_report(&report) {
            Failure::Invalid { lines, .. } => Err(Failure::Invalid {
                lines: lines.into_iter().skip(1).collect(),
                output: Some(out),
            }),
            usage => Err(usage),
        }
    }
}

pub fn blocks(arg: &str, fmt: Format) -> Result<String, Failure> {
    let d = load(arg)?;
    let trivial = d.trivial_block();
    let blocks = d.blocks();
    Ok(match fmt {
        Format::Tsv => tsv(
            &["block", "param", "orbit", "local_system"],
            blocks.iter().enumerate().flat_map(|(b, members)| {
                let d = &d;
                members.iter().map(move |&i| {
                    let p = d.param(i);
                    vec![b.to_string(), p.id.clone(), p.orbit.clone(), p.local_system.clone()]
                })
            }),
        ),
        Format::Json => {
            let list: Vec<Value> = blocks
                .iter()
                .enumerate()
                .map(|(b, members)| {
                    json!({
                        "block": b,
                        "trivial": members.first().is_some_and(|i| trivial.contains(i)),
                        "params": members.iter().map(|&i| d.param(i).id.clone()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            to_json(&list)
        }
    })
}

pub fn klv(args: &KlvArgs, fmt: Format) -> Result<String, Failure> {
    let d = load(&args.datum)?;
    let extra_seeds = args
        .seeds
        .iter()
        .map(|id| d.index_of(id))
        .collect::<Result<Vec<_>, _>>()?;
    let opts = KlvOptions {
        extra_seeds,
        known: None,
        cap: args.cap,
    };
    let table = compute_klv(&d, &opts)?;
    let report = KlvReport::new(&d, &table, args.raw_ch)?;
    for g in &report.unresolved {
        let sum: Vec<String> = g.sum.iter().map(|t| format!("({})*{}", t.coeff, t.param)).collect();
        eprintln!(
            "warning: unresolved group [{}] with sum {}",
            g.params.join(", "),
            sum.join(" + ")
        );
    }
    let missing = uncovered(&d, &table);
    if !missing.is_empty() {
        let ids: Vec<&str> = missing.iter().map(|&i| d.param(i).id.as_str()).collect();
        eprintln!("warning: not reached from the seeds: {}", ids.join(", "));
    }
    Ok(match fmt {
        Format::Json => to_json(&report),
        Format::Tsv => {
            let rows = report.classes.iter().flat_map(|c| {
                let cells: Vec<(String, String)> = if args.polys {
                    c.klv.iter().map(|k| (k.param.clone(), k.klv.clone())).collect()
                } else {
                    c.terms.iter().map(|t| (t.param.clone(), t.coeff.to_string())).collect()
                };
                cells.into_iter().map(move |(t, x)| vec![c.param.clone(), t, x])
            });
            tsv(&["param", "target_param", "coefficient"], rows)
        }
    })
}

fn parse_elem(d: &ValidatedDatum, items: &[String]) -> Result<Vec<(String, Laurent)>, Failure> {
    items
        .iter()
        .map(|item| {
            let (id, coeff) = match item.split_once('=') {
                Some((id, c)) => {
                    let c = c
                        .parse::<Laurent>()
                        .map_err(|e| Failure::Usage(format!("bad coefficient in `{item}`: {e}")))?;
                    (id.trim(), c)
                }
                None => (item.trim(), Laurent::one()),
            };
            d.index_of(id)?;
            Ok((id.to_string(), coeff))
        })
        .collect()
}

fn records(d: &ValidatedDatum, v: &LVVector) -> Vec<(String, Laurent)> {
    v.iter().map(|(i, c)| (d.param(i).id.clone(), c.clone())).collect()
}

pub fn tsact(args: &TsactArgs, fmt: Format) -> Result<String, Failure> {
    let d = load(&args.datum)?;
    let terms = parse_elem(&d, &args.elem)?;
    let act = |v: &LVVector| -> Result<LVVector, Failure> {
        let mut out = v.clone();
        for &s in &args.word {
            out = match args.op {
                Op::Ts => d.apply_ts(&out, s)?,
                Op::Bs => d.apply_bs(&out, s)?,
            };
        }
        Ok(out)
    };
    let mut by_source = Vec::new();
    let mut total = LVVector::zero();
    for (id, c) in &terms {
        let image = act(&d.vector([(id.as_str(), c.clone())])?)?;
        total = &total + &image;
        by_source.push((id.clone(), c.clone(), image));
    }
    Ok(match fmt {
        Format::Tsv => {
            let rows = by_source.iter().flat_map(|(id, _, image)| {
                records(&d, image)
                    .into_iter()
                    .map(move |(t, c)| vec![id.clone(), t, c.to_string()])
            });
            tsv(&["param", "target_param", "coefficient"], rows)
        }
        Format::Json => {
            let terms = |v: &LVVector| -> Vec<Value> {
                records(&d, v)
                    .into_iter()
                    .map(|(p, c)| json!({ "param": p, "coeff": c }))
                    .collect()
            };
            to_json(&json!({
                "op": match args.op { Op::Ts => "ts", Op::Bs => "bs" },
                "word": args.word,
                "image": terms(&total),
                "by_source": by_source
                    .iter()
                    .map(|(id, c, image)| json!({ "param": id, "coeff": c, "image": terms(image) }))
                    .collect::<Vec<_>>(),
            }))
        }
    })
}

pub fn fibers(arg: &str, spec: &Path, fmt: Format) -> Result<String, Failure> {
    let d = load(arg)?;
    let spec = ResolutionSpec::from_json(&read(spec)?)?;
    let table = fiber_table(&d, &spec)?;
    Ok(match fmt {
        Format::Tsv => tsv(
            &["orbit", "poincare"],
            table.iter().map(|(o, f)| vec![o.clone(), f.to_string()]),
        ),
        Format::Json => to_json(
            &table
                .iter()
                .map(|(o, f)| json!({ "orbit": o, "poincare": f }))
                .collect::<Vec<_>>(),
        ),
    })
}

pub fn gen_complex(cartan: &str, output: Option<&Path>) -> Result<String, Failure> {
    let d = complex_datum(cartan)?;
    let text = to_json(d.file());
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {} parameters to {}", d.len(), path.display());
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn bimod_verify(arg: &str, degree: u32, fmt: Format) -> Result<String, Failure> {
    let rings = match arg.strip_prefix(BUILTIN) {
        Some(name) => Rings::builtin(name)?,
        None => Rings::new(RingSpec::from_json(&read(Path::new(arg))?)?)?,
    };
    let report = verify_rings(&rings, degree);
    let out = match fmt {
        Format::Json => to_json(&report),
        Format::Tsv => {
            let mut head = String::new();
            let c = &report.config;
            let _ = writeln!(head, "# ring: {}", c.ring);
            let _ = writeln!(head, "# degree_bound: {}", c.degree_bound);
            let _ = writeln!(head, "# grading: {}", c.grading);
            head + &tsv(
                &["check", "status", "detail"],
                report.checks.iter().map(|r| {
                    vec![
                        r.name.clone(),
                        if r.passed { "PASS" } else { "FAIL" }.to_string(),
                        r.detail.clone(),
                    ]
                }),
            )
        }
    };
    if report.passed() {
        Ok(out)
    } else {
        Err(Failure::Invalid {
            lines: report
                .checks
                .iter()
                .filter(|r| !r.passed)
                .map(|r| format!("{}: {}", r.name, r.detail))
                .collect(),
            output: Some(out),
        })
    }
}

pub fn poincare(args: &PoincareArgs, fmt: Format) -> Result<String, Failure> {
    let n_t = args.rank.unwrap_or(args.degrees_g.len() as u32);
    let series = equivariant_poincare(&args.degrees_k, &args.degrees_g, n_t, args.degree)?;
    Ok(match fmt {
        Format::Tsv => tsv(
            &["degree", "coefficient"],
            series
                .iter()
                .enumerate()
                .map(|(k, c)| vec![k.to_string(), c.to_string()]),
        ),
        Format::Json => {
            let coeffs: Vec<Value> = series
                .iter()
                .map(|c| {
                    let s = c.to_string();
                    s.parse::<i64>().map_or(Value::String(s), Value::from)
                })
                .collect();
            to_json(&json!({
                "degrees_k": args.degrees_k,
                "degrees_g": args.degrees_g,
                "rank": n_t,
                "coefficients": coeffs,
            }))
        }
    })
}
