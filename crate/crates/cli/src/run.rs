//! One experiment per kind, producing the report in every format the kind
//! supports.

use std::f64::consts::TAU;

use dtrans_core::natset::{gap_profile, thick_witness, FamilyTest, SetSpec, WindowSet};
use dtrans_core::qk::{ball_shrink_check, separation_experiment, DualVector, Status};
use dtrans_core::rhc::{a_u_report, orbit_hit_set};
use dtrans_core::shiftlab::{compare_routes, d_f_verdict, DfReport};
use dtrans_core::sobolev::{build_f_knr, gram_matrix};
use dtrans_core::verdict::FamilyVerdict;
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{
    parse_params, ExperimentConfig, FamiliesParams, Format, Kind, QkParams, RhcParams,
    ShiftParams, SobolevParams, ValidationError,
};
use crate::svg::{render, Chart, Series};

pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    pub svg: Option<String>,
    /// Some numerical step did not converge.
    pub undecided: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> Option<String> {
        match format {
            Format::Json => {
                Some(serde_json::to_string_pretty(&self.json).expect("JSON values serialize") + "\n")
            }
            Format::Csv => self.csv.clone(),
            Format::Svg => self.svg.clone(),
        }
    }
}

pub fn supported_formats(kind: Kind) -> &'static [Format] {
    match kind {
        Kind::Families | Kind::Shift | Kind::Rhc => &[Format::Json, Format::Csv],
        Kind::Sobolev | Kind::Qk => &[Format::Json, Format::Csv, Format::Svg],
    }
}

fn core_error(e: dtrans_core::Error) -> ValidationError {
    ValidationError::new("parameters", e.to_string())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

fn verdict_word(v: &FamilyVerdict) -> &'static str {
    if v.is_holds() {
        "holds"
    } else {
        "fails"
    }
}

fn witness_text(v: &FamilyVerdict) -> String {
    v.witness
        .as_ref()
        .map(|w| serde_json::to_string(w).expect("witness serializes"))
        .unwrap_or_default()
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, ValidationError> {
    let result = match cfg.kind {
        Kind::Families => families(&parse_params(&cfg.parameters)?),
        Kind::Shift => shift(&parse_params(&cfg.parameters)?),
        Kind::Sobolev => sobolev(&parse_params(&cfg.parameters)?),
        Kind::Qk => qk(&parse_params(&cfg.parameters)?, cfg.seed),
        Kind::Rhc => rhc(&parse_params(&cfg.parameters)?),
    }?;
    let json = json!({
        "kind": cfg.kind.to_string(),
        "seed": cfg.seed,
        "metadata": { "tool": "dtrans", "version": env!("CARGO_PKG_VERSION") },
        "undecided": result.undecided,
        "result": result.json,
    });
    Ok(Report { json, ..result })
}

fn families(p: &FamiliesParams) -> Result<Report, ValidationError> {
    let mut rows = Vec::new();
    let summary;
    if p.set.needs_big_integers() {
        let runs = p.set.to_runs().map_err(core_error)?;
        summary = json!({
            "representation": "runs",
            "horizon": runs.horizon().to_str_radix(10),
            "cardinality": runs.cardinality().to_str_radix(10),
            "runs": runs.runs().len(),
        });
        for (i, t) in p.tests.iter().enumerate() {
            let v = match *t {
                FamilyTest::Thick { length } => runs.thick_witness(length).map_err(core_error)?,
                FamilyTest::Syndetic { max_gap } => runs.gap_profile(&BigUint::from(max_gap)).1,
                FamilyTest::Nonempty => {
                    if runs.is_empty() {
                        FamilyVerdict::fails(dtrans_core::verdict::Witness::Element { value: 0 })
                    } else {
                        FamilyVerdict::holds(None)
                    }
                }
                _ => {
                    return Err(ValidationError::new(
                        format!("parameters.tests[{i}]"),
                        format!(
                            "`{}` needs a machine-integer window; this set is only available as exact runs \
                             (thick, syndetic and nonempty are supported)",
                            t.name()
                        ),
                    ))
                }
            };
            rows.push((t.clone(), v));
        }
    } else {
        let w = p.set.to_window().map_err(core_error)?;
        summary = json!({
            "representation": "window",
            "start": w.start(),
            "horizon": w.horizon(),
            "cardinality": w.len(),
        });
        for t in &p.tests {
            rows.push((t.clone(), t.apply(&w).map_err(core_error)?));
        }
    }
    let results: Vec<Value> = rows
        .iter()
        .map(|(t, v)| json!({ "test": t, "verdict": v }))
        .collect();
    let csv = csv_table(
        &["test", "verdict", "witness"],
        rows.iter()
            .map(|(t, v)| vec![t.name().to_string(), verdict_word(v).to_string(), witness_text(v)]),
    );
    Ok(Report {
        json: json!({ "set": summary, "tests": results }),
        csv: Some(csv),
        svg: None,
        undecided: false,
    })
}

fn case_rows(route: &str, r: &DfReport) -> Vec<Vec<String>> {
    r.cases
        .iter()
        .map(|c| {
            vec![
                route.to_string(),
                c.j.to_string(),
                format!("{:e}", c.threshold),
                c.d.to_string(),
                to_value(&c.direction).as_str().unwrap_or_default().to_string(),
                c.set_size.to_string(),
                verdict_word(&c.verdict).to_string(),
            ]
        })
        .collect()
}

fn shift(p: &ShiftParams) -> Result<Report, ValidationError> {
    let header = ["route", "j", "threshold", "d", "direction", "set_size", "verdict"];
    if p.compare {
        let (crit, direct, agree) = compare_routes(&p.weights, &p.df).map_err(core_error)?;
        let rows = case_rows("criterion", &crit).into_iter().chain(case_rows("direct", &direct));
        Ok(Report {
            json: json!({ "criterion": crit, "direct": direct, "agree": agree }),
            csv: Some(csv_table(&header, rows)),
            svg: None,
            undecided: false,
        })
    } else {
        let crit = d_f_verdict(&p.weights, &p.df).map_err(core_error)?;
        Ok(Report {
            csv: Some(csv_table(&header, case_rows("criterion", &crit))),
            json: json!({ "criterion": crit }),
            svg: None,
            undecided: false,
        })
    }
}

fn sobolev(p: &SobolevParams) -> Result<Report, ValidationError> {
    let rep = build_f_knr(p.n, p.r).map_err(core_error)?;
    let csv = csv_table(
        &["check", "value", "bound", "pass"],
        rep.checks.iter().map(|c| {
            vec![
                c.name.clone(),
                format!("{:e}", c.value),
                format!("{:e}", c.bound),
                c.pass.to_string(),
            ]
        }),
    );
    let (lo, _) = rep.function.domain();
    let period = TAU / rep.periods as f64;
    let samples = 2000;
    let mut re = Vec::with_capacity(samples + 1);
    let mut abs = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let x = lo + period * i as f64 / samples as f64;
        let v = rep.function.eval(x).map_err(core_error)?[0];
        re.push((x, v.re));
        abs.push((x, v.norm()));
    }
    let svg = render(&Chart {
        title: format!("f for k = {} over one period", rep.k),
        x_label: "x".into(),
        y_label: "value".into(),
        series: vec![
            Series {
                label: "|f|".into(),
                points: abs,
                markers: false,
            },
            Series {
                label: "Re f".into(),
                points: re,
                markers: false,
            },
        ],
        level: None,
    });
    Ok(Report {
        json: json!({ "all_pass": rep.all_pass(), "report": rep }),
        csv: Some(csv),
        svg: Some(svg),
        undecided: false,
    })
}

fn qk(p: &QkParams, seed: u64) -> Result<Report, ValidationError> {
    let rep = separation_experiment(&p.separation).map_err(core_error)?;
    let gap = gap_profile(&rep.hits, p.syndetic_bound);
    let misses: WindowSet = rep.hits.complement();
    let thick = thick_witness(&misses, p.thick_length).map_err(core_error)?;
    let ball = if p.ball_samples > 0 {
        let support = dtrans_core::qk::enumerate_k_level(p.separation.level).map_err(core_error)?;
        let x = DualVector::new(support, p.separation.u.center.clone()).map_err(core_error)?;
        let g = gram_matrix(&x.points(), p.separation.basis_size).map_err(core_error)?;
        Some(ball_shrink_check(&x, p.ball_radius, p.ball_samples, &g, seed).map_err(core_error)?)
    } else {
        None
    };
    let csv = csv_table(
        &["k", "distance", "distance_lower", "status"],
        rep.cases.iter().map(|c| {
            vec![
                c.k.to_string(),
                format!("{:e}", c.distance),
                format!("{:e}", c.distance_lower),
                to_value(&c.status).as_str().unwrap_or_default().to_string(),
            ]
        }),
    );
    let svg = render(&Chart {
        title: format!("distance from (2Q^k - Q^2k)(U) to the centre of V, level {}", rep.level),
        x_label: "k".into(),
        y_label: "distance".into(),
        series: vec![Series {
            label: "distance".into(),
            points: rep.cases.iter().map(|c| (c.k as f64, c.distance)).collect(),
            markers: true,
        }],
        level: Some(("radius of V".into(), p.separation.v.radius)),
    });
    let undecided = rep.cases.iter().any(|c| c.status == Status::Undecided);
    Ok(Report {
        json: json!({
            "separation": rep,
            "hits_syndetic": gap,
            "misses_thick": thick,
            "ball_shrink": ball,
        }),
        csv: Some(csv),
        svg: Some(svg),
        undecided,
    })
}

fn rhc(p: &RhcParams) -> Result<Report, ValidationError> {
    let n: WindowSet = match (&p.set, &p.orbit) {
        (Some(s), None) => SetSpec::to_window(s).map_err(core_error)?,
        (None, Some(o)) => {
            let data = orbit_hit_set(&o.weights, &o.x, std::slice::from_ref(&o.ball), o.n_max)
                .map_err(|e| ValidationError::new("parameters.orbit", e.to_string()))?;
            data.hit_sets.into_values().next().expect("one ball")
        }
        _ => {
            return Err(ValidationError {
                fields: vec!["parameters.set".into(), "parameters.orbit".into()],
                message: "exactly one of `set` and `orbit` is required".into(),
            })
        }
    };
    let rep = a_u_report(&n, p.r, p.k_max, p.s, p.delta, p.syndetic_bound).map_err(core_error)?;
    let csv = csv_table(
        &["k", "member"],
        (0..=p.k_max).map(|k| vec![k.to_string(), rep.a_u.contains(k).to_string()]),
    );
    Ok(Report {
        json: json!({ "n_size": n.len(), "n_horizon": n.horizon(), "a_u": rep.a_u, "syndetic": rep.gap }),
        csv: Some(csv),
        svg: None,
        undecided: false,
    })
}
