//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde_json::{json, Value};
use twisted_h1::alcove::AlcoveContext;
use twisted_h1::bundles::{all_assignments, bundle_label, local_type_sets};
use twisted_h1::lattice::{fmt_q_vec, parse_q_vec, Q};
use twisted_h1::oracle::brute_force;
use twisted_h1::reference_tables;
use twisted_h1::{
    classify_automorphisms, covering_exists, diagram_automorphism, parahoric_descriptor,
    CoveringData, DiagramAutomorphism, Error, H1Context, RootDatum,
};

mod args;

pub use args::{Cli, Command, Format, GroupArgs, OrderArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(Error),
    Mismatch(String, Option<Output>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(msg) => Failure::Usage(msg),
            other => Failure::Domain(other),
        }
    }
}

/// A command result in all three output formats.
#[derive(Debug, Clone)]
pub struct Output {
    pub text: String,
    pub json: Value,
    /// Header first.
    pub csv: Vec<Vec<String>>,
}

impl Output {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.csv {
                    w.write_record(row).expect("in-memory csv");
                }
                String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8")
            }
        }
    }
}

fn vec_str<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn qvec_str(v: &[Q]) -> String {
    format!("({})", fmt_q_vec(v).join(", "))
}

fn automorphism(g: &GroupArgs) -> Result<DiagramAutomorphism, Failure> {
    let d = RootDatum::build(g.family, g.rank, g.isogeny)?;
    Ok(diagram_automorphism(&d, g.tau_order)?)
}

fn datum_dump(g: &GroupArgs) -> Result<Output, Failure> {
    let d = RootDatum::build(g.family, g.rank, g.isogeny)?.dump();
    let json = serde_json::to_value(&d).expect("dump serializes");
    let mut text = format!("{}{} {}\n", d.family, d.rank, d.isogeny);
    for row in &d.cartan {
        text.push_str(&format!("  {}\n", vec_str(row)));
    }
    let mut csv = vec![vec!["row".to_string(), "entries".to_string()]];
    for (i, row) in d.cartan.iter().enumerate() {
        csv.push(vec![i.to_string(), vec_str(row)]);
    }
    Ok(Output { text, json, csv })
}

fn h1(args: &OrderArgs, method: twisted_h1::Method, verify: bool) -> Result<Output, Failure> {
    let da = automorphism(&args.group)?;
    let set = H1Context::new(&da, args.m)?.compute(method)?;
    let mut json = serde_json::to_value(&set).expect("cohomology set serializes");
    let mut text = format!(
        "{} {} m={} method={}: {} classes\n",
        set.label, set.isogeny, set.m, set.method, set.cardinality
    );
    let mut csv = vec![[
        "index",
        "lambda",
        "lambda_ambient",
        "coweight",
        "orbit_size",
        "kac",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect::<Vec<_>>()];
    for (i, c) in set.classes.iter().enumerate() {
        let mut line = format!(
            "  [{i}] lambda={} coweight={}",
            vec_str(&c.lambda),
            qvec_str(&c.coweight)
        );
        if let Some(k) = &c.kac {
            line.push_str(&format!(" kac={}", vec_str(&k.s)));
        }
        if let Some(s) = c.orbit_size {
            line.push_str(&format!(" orbit={s}"));
        }
        text.push_str(&line);
        text.push('\n');
        csv.push(vec![
            i.to_string(),
            vec_str(&c.lambda),
            vec_str(&c.lambda_ambient),
            vec_str(&fmt_q_vec(&c.coweight)),
            c.orbit_size.map(|s| s.to_string()).unwrap_or_default(),
            c.kac.as_ref().map(|k| vec_str(&k.s)).unwrap_or_default(),
        ]);
    }
    if verify {
        let report = brute_force(&da, args.m)?;
        let torus = H1Context::new(&da, args.m)?.torus().cardinality();
        json["verification"] = json!({
            "torus_classes": report.torus.classes,
            "group_classes": report.group_classes,
        });
        text.push_str(&format!(
            "verified: brute force gives {} torus classes and {} group classes\n",
            report.torus.classes, report.group_classes
        ));
        let out = Output { text, json, csv };
        if report.group_classes != set.cardinality || report.torus.classes as u128 != torus {
            return Err(Failure::Mismatch(
                format!(
                    "brute force disagrees: group {} vs {}, torus {} vs {}",
                    report.group_classes, set.cardinality, report.torus.classes, torus
                ),
                Some(out),
            ));
        }
        return Ok(out);
    }
    Ok(Output { text, json, csv })
}

fn h1_torus(args: &OrderArgs) -> Result<Output, Failure> {
    let da = automorphism(&args.group)?;
    let ctx = H1Context::new(&da, args.m)?;
    let t = ctx.torus();
    let factors = t.group().invariant_factors().to_vec();
    let label = da.label();
    let iso = da.base().isogeny();
    let json = json!({
        "type": label,
        "isogeny": iso,
        "tau_order": da.order(),
        "m": args.m,
        "invariant_factors": factors,
        "cardinality": t.cardinality().to_string(),
    });
    let group = if factors.is_empty() {
        "0".to_string()
    } else {
        factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect::<Vec<_>>()
            .join(" x ")
    };
    let text = format!(
        "{label} {iso} m={}: {group} (order {})\n",
        args.m,
        t.cardinality()
    );
    let mut csv = vec![vec!["factor".to_string()]];
    csv.extend(factors.iter().map(|d| vec![d.to_string()]));
    Ok(Output { text, json, csv })
}

fn alcove(args: &OrderArgs) -> Result<Output, Failure> {
    let da = automorphism(&args.group)?;
    let points = AlcoveContext::new(&da)?.alcove_points(args.m)?;
    let json = json!({
        "type": da.label(),
        "isogeny": da.base().isogeny(),
        "m": args.m,
        "count": points.len(),
        "points": points,
    });
    let mut text = format!(
        "{} m={}: {} alcove points\n",
        da.label(),
        args.m,
        points.len()
    );
    let mut csv = vec![vec!["point".to_string(), "lattice_vector".to_string()]];
    for p in &points {
        text.push_str(&format!("  {}\n", qvec_str(&p.point)));
        csv.push(vec![
            vec_str(&fmt_q_vec(&p.point)),
            vec_str(&p.lattice_vector),
        ]);
    }
    Ok(Output { text, json, csv })
}

fn kac(args: &OrderArgs, classes: bool) -> Result<Output, Failure> {
    let da = automorphism(&args.group)?;
    let ctx = AlcoveContext::new(&da)?;
    let labels = ctx.folded().kac_labels().to_vec();
    if classes {
        let cls = ctx.kac_classes(args.m)?;
        let json = json!({
            "type": da.label(),
            "m": args.m,
            "kac_labels": labels,
            "count": cls.len(),
            "classes": cls,
        });
        let mut text = format!(
            "{} m={}: {} classes of Kac coordinates (labels {})\n",
            da.label(),
            args.m,
            cls.len(),
            vec_str(&labels)
        );
        let mut csv = vec![vec!["representative".to_string(), "orbit_size".to_string()]];
        for c in &cls {
            text.push_str(&format!(
                "  {} orbit {}\n",
                vec_str(&c.representative.s),
                c.orbit_size
            ));
            csv.push(vec![vec_str(&c.representative.s), c.orbit_size.to_string()]);
        }
        return Ok(Output { text, json, csv });
    }
    let tuples = ctx.kac_coordinates(args.m)?;
    let json = json!({
        "type": da.label(),
        "m": args.m,
        "kac_labels": labels,
        "count": tuples.len(),
        "coordinates": tuples.iter().map(|k| k.s.clone()).collect::<Vec<_>>(),
    });
    let mut text = format!(
        "{} m={}: {} Kac coordinates (labels {})\n",
        da.label(),
        args.m,
        tuples.len(),
        vec_str(&labels)
    );
    let mut csv = vec![vec!["s".to_string()]];
    for k in &tuples {
        text.push_str(&format!("  {}\n", vec_str(&k.s)));
        csv.push(vec![vec_str(&k.s)]);
    }
    Ok(Output { text, json, csv })
}

fn classify(args: &OrderArgs) -> Result<Output, Failure> {
    let da = automorphism(&args.group)?;
    let ds = classify_automorphisms(&da, args.m)?;
    let entries: Vec<Value> = ds
        .iter()
        .map(|d| {
            let mut v = serde_json::to_value(d).expect("descriptor serializes");
            v["sigma"] = json!(d.sigma());
            v
        })
        .collect();
    let json =
        json!({ "type": da.label(), "m": args.m, "count": ds.len(), "automorphisms": entries });
    let mut text = format!("{} m={}: {} automorphisms\n", da.label(), args.m, ds.len());
    let mut csv = vec![["sigma", "lambda", "alcove_point", "kac"]
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()];
    for d in &ds {
        let kac = d.kac.as_ref().map(|k| vec_str(&k.s)).unwrap_or_default();
        text.push_str(&format!(
            "  {}  x={}  kac={}\n",
            d.sigma(),
            qvec_str(&d.alcove_point),
            kac
        ));
        csv.push(vec![
            d.sigma(),
            vec_str(&d.lambda),
            vec_str(&fmt_q_vec(&d.alcove_point)),
            kac,
        ]);
    }
    Ok(Output { text, json, csv })
}

fn reduce(g: &GroupArgs, point: &str) -> Result<Output, Failure> {
    let da = automorphism(g)?;
    let x = parse_q_vec(point)?;
    let red = AlcoveContext::new(&da)?.reduce(&x)?;
    let json = json!({
        "type": da.label(),
        "input": fmt_q_vec(&x),
        "reduction": red,
    });
    let text = format!(
        "{} -> {} in {} steps\n  weyl {}\n  translation {}\n",
        qvec_str(&x),
        qvec_str(&red.point),
        red.steps,
        vec_str(
            &red.weyl
                .rows()
                .iter()
                .map(|r| vec_str(r))
                .collect::<Vec<_>>()
        ),
        vec_str(&red.translation)
    );
    let csv = vec![
        ["input", "point", "translation", "steps"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        vec![
            vec_str(&fmt_q_vec(&x)),
            vec_str(&fmt_q_vec(&red.point)),
            vec_str(&red.translation),
            red.steps.to_string(),
        ],
    ];
    Ok(Output { text, json, csv })
}

fn parahoric(g: &GroupArgs, theta: &str) -> Result<Output, Failure> {
    let da = automorphism(g)?;
    let theta = parse_q_vec(theta)?;
    let p = parahoric_descriptor(&da, &theta)?;
    let mut json = serde_json::to_value(&p).expect("descriptor serializes");
    json["sigma"] = json!(p.descriptor.sigma());
    let text = format!(
        "m_min={} lambda={} sigma={}\n  alcove point {}\n",
        p.m_min,
        vec_str(&p.descriptor.lambda),
        p.descriptor.sigma(),
        qvec_str(&p.reduction.point)
    );
    let csv = vec![
        ["m_min", "lambda_raw", "lambda", "sigma"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        vec![
            p.m_min.to_string(),
            vec_str(&p.lambda_raw),
            vec_str(&p.descriptor.lambda),
            p.descriptor.sigma(),
        ],
    ];
    Ok(Output { text, json, csv })
}

fn components(path: &std::path::Path, iso: twisted_h1::Isogeny) -> Result<Output, Failure> {
    let data = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let cd = CoveringData::from_json(&data)?;
    let count = twisted_h1::component_count(&cd, iso)?;
    let sets = local_type_sets(&cd, iso)?;
    let labels: Vec<String> = all_assignments(&sets)
        .iter()
        .map(|a| bundle_label(&sets, a))
        .collect::<twisted_h1::Result<_>>()?;
    let json = json!({
        "genus": cd.genus,
        "isogeny": iso,
        "local_types": sets.iter().map(|s| s.cardinality).collect::<Vec<_>>(),
        "components": count.to_string(),
        "labels": labels,
    });
    let mut text = format!("{count} components\n");
    for l in &labels {
        text.push_str(&format!("  {l}\n"));
    }
    let mut csv = vec![vec!["label".to_string()]];
    csv.extend(labels.iter().map(|l| vec![l.clone()]));
    Ok(Output { text, json, csv })
}

fn covering(genus: u64, indices: &[u64]) -> Result<Output, Failure> {
    let v = covering_exists(genus, indices)?;
    let json = serde_json::to_value(&v).expect("verdict serializes");
    let text = format!("{} ({})\n", v.exists, v.reason);
    let csv = vec![
        vec!["exists".to_string(), "reason".to_string()],
        vec![v.exists.to_string(), v.reason.clone()],
    ];
    Ok(Output { text, json, csv })
}

fn tables(verbose: bool) -> Result<Output, Failure> {
    let reports = reference_tables::run_all();
    let mut text = String::new();
    let mut csv = vec![["criterion", "case", "expected", "actual", "pass"]
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()];
    for r in &reports {
        text.push_str(&r.summary_line());
        text.push('\n');
        for c in &r.checks {
            if verbose || !c.pass {
                let mark = if c.pass { "ok  " } else { "FAIL" };
                text.push_str(&format!(
                    "    {mark} {}: expected {}, got {}\n",
                    c.case, c.expected, c.actual
                ));
            }
            csv.push(vec![
                r.number.to_string(),
                c.case.clone(),
                c.expected.clone(),
                c.actual.clone(),
                c.pass.to_string(),
            ]);
        }
    }
    let json = json!({
        "passed": reports.iter().all(|r| r.passed()),
        "criteria": reports,
    });
    let out = Output { text, json, csv };
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.number.to_string())
        .collect();
    if failed.is_empty() {
        Ok(out)
    } else {
        Err(Failure::Mismatch(
            format!("mismatch in criteria {}", failed.join(", ")),
            Some(out),
        ))
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    let group = match &cli.command {
        Command::H1 { args, .. }
        | Command::H1Torus { args }
        | Command::Alcove { args }
        | Command::Kac { args, .. }
        | Command::ClassifyAutos { args } => Some(&args.group),
        Command::Reduce { group, .. } | Command::Parahoric { group, .. } => Some(group),
        _ => None,
    };
    if let Some(g) = group.filter(|g| g.dump_datum) {
        return datum_dump(g);
    }
    match &cli.command {
        Command::H1 {
            args,
            method,
            verify,
        } => h1(args, *method, *verify),
        Command::H1Torus { args } => h1_torus(args),
        Command::Alcove { args } => alcove(args),
        Command::Kac { args, classes } => kac(args, *classes),
        Command::ClassifyAutos { args } => classify(args),
        Command::Reduce { group, point } => reduce(group, point),
        Command::Parahoric { group, theta } => parahoric(group, theta),
        Command::Components { covering, isogeny } => components(covering, *isogeny),
        Command::CoveringExists { genus, indices } => covering(*genus, indices),
        Command::PaperTables { verbose } => tables(*verbose),
    }
}

/// Parses `argv`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.render(cli.format).as_bytes());
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
        Err(Failure::Mismatch(msg, o)) => {
            if let Some(o) = o {
                let _ = out.write_all(o.render(cli.format).as_bytes());
            }
            let _ = writeln!(err, "verification failed: {msg}");
            EXIT_MISMATCH
        }
    }
}
