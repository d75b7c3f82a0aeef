//! Command-line front end. [`run`] parses arguments, runs one subcommand and
//! returns the exit code with everything that should go to stdout, so the
//! binary stays a thin shell and tests can drive it in-process.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::apolar::{concise_ladder, graded_dim, hilbert, is_unimodal, HilbertFunction};
use crate::bounds::{hessian_rank, wild_certificate, BorderBound, Strategy, WildCertificate, WildVerdict};
use crate::error::{Error, Result};
use crate::families::{build, FamilyBuild, FamilyName, FamilySpec, FormulaBounds};
use crate::hessian::{
    hess_det, lefschetz_check, lefschetz_generic, LefschetzProperty, LefschetzReport, RankPolicy, RankReport,
};
use crate::parse::parse_form;
use crate::poly::{Form, LinearForm, Partition, Vars};
use crate::powersum::{binary_waring_analysis, BinaryRank};

pub const ANALYSIS_SCHEMA: &str = "apolarity.analysis/v1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "apolarity", version, about = "Apolar algebras, mixed Hessians and wild-form certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report: Hilbert function, Hessians, Lefschetz, bounds, certificate.
    Analyze(Input),
    /// Hilbert function of the apolar algebra.
    Hilbert(Input),
    /// Mixed Hessian Hess^(k,l) and its generic rank.
    Hessian {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: u32,
        /// Defaults to k.
        #[arg(long)]
        l: Option<u32>,
    },
    /// Weak or strong Lefschetz property.
    Lefschetz {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "slp")]
        wlp: bool,
        #[arg(long)]
        slp: bool,
        /// Coefficients of a specific linear form, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
    },
    /// Waring rank of a binary form.
    BinaryRank(Input),
    /// Border rank upper bound, cactus rank lower bound and wild verdict.
    Bounds(Input),
    /// Build a named family, or list them.
    Family {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Ordered variable names, comma separated.
    #[arg(long)]
    vars: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// File holding the polynomial; a `vars:` line may declare variables.
    #[arg(long)]
    file: Option<String>,
    #[arg(long)]
    family: Option<String>,
    /// Family parameter `key=value`; repeatable.
    #[arg(long = "param")]
    params: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Bi-grading blocks, e.g. `X=x,y;U=u,v`.
    #[arg(long)]
    partition: Option<String>,
    #[arg(long)]
    json: bool,
    /// Omit the timestamp so output is byte-stable.
    #[arg(long)]
    deterministic: bool,
    #[arg(long, default_value_t = 12)]
    max_symbolic_dim: usize,
    #[arg(long, default_value_t = 8)]
    rank_trials: u32,
    /// Skip graded pieces larger than this in searches.
    #[arg(long, default_value_t = 400)]
    max_slice_dim: usize,
    /// Exit with status 3 when a budget prevented a certified answer.
    #[arg(long)]
    strict: bool,
}

/// A form together with whatever a family construction knows about it.
struct Loaded {
    form: Form,
    family: Option<FamilyBuild>,
    partition: Option<Partition>,
}

impl Input {
    fn policy(&self) -> RankPolicy {
        RankPolicy {
            max_symbolic_dim: self.max_symbolic_dim,
            trials: self.rank_trials,
            seed: self.seed,
            ..RankPolicy::default()
        }
    }

    fn family_spec(&self) -> Result<Option<FamilySpec>> {
        self.family.as_deref().map(|name| FamilySpec::parse(name, &self.params, self.seed)).transpose()
    }

    fn load(&self) -> Result<Loaded> {
        let sources = [self.poly.is_some(), self.file.is_some(), self.family.is_some()];
        match sources.iter().filter(|&&s| s).count() {
            0 => return Err(Error::Precondition("give a form with --poly, --file or --family".into())),
            1 => {}
            _ => return Err(Error::Precondition("--poly, --file and --family are mutually exclusive".into())),
        }
        if let Some(spec) = self.family_spec()? {
            let fam = build(&spec)?;
            let form = fam.form()?.clone();
            let partition = match &self.partition {
                Some(p) => Some(Partition::parse(form.vars(), p)?),
                None => fam.partition.clone(),
            };
            return Ok(Loaded { form, family: Some(fam), partition });
        }
        let (vars_text, poly_text) = match (&self.poly, &self.file) {
            (Some(p), _) => (self.vars.clone(), p.clone()),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Precondition(format!("cannot read {path}: {e}")))?;
                read_form_file(&text, self.vars.clone())
            }
            (None, None) => unreachable!(),
        };
        let vars_text = vars_text.ok_or_else(|| Error::Precondition("--vars is required with --poly".into()))?;
        let vars = Vars::parse(&vars_text)?;
        let form = parse_form(&poly_text, &vars)?;
        let partition = self.partition.as_deref().map(|p| Partition::parse(&vars, p)).transpose()?;
        Ok(Loaded { form, family: None, partition })
    }

    fn strategy(&self, loaded: &Loaded) -> Strategy {
        let mut s = match &loaded.family {
            Some(fam) => fam.strategy(self.policy()),
            None => Strategy { policy: self.policy(), ..Strategy::default() },
        };
        s.partition = loaded.partition.clone();
        s.max_slice_dim = self.max_slice_dim;
        s
    }
}

/// `vars:` line (optional) followed by the polynomial; `#` starts a comment.
fn read_form_file(text: &str, vars: Option<String>) -> (Option<String>, String) {
    let mut declared = vars;
    let mut body = String::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if let Some(v) = line.strip_prefix("vars:") {
            declared.get_or_insert_with(|| v.trim().to_string());
        } else if !line.is_empty() {
            body.push_str(line);
            body.push(' ');
        }
    }
    (declared, body)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FamilyEcho {
    name: &'static str,
    params: std::collections::BTreeMap<String, i64>,
    seed: u64,
    seed_used: u64,
    attempts: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<FormulaBounds>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

impl FamilyEcho {
    fn new(fam: &FamilyBuild) -> Self {
        FamilyEcho {
            name: fam.spec.name.as_str(),
            params: fam.spec.params.clone(),
            seed: fam.spec.seed,
            seed_used: fam.seed_used,
            attempts: fam.attempts,
            formula: fam.formula.clone(),
            notes: fam.notes.clone(),
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct HessianEntry {
    k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<RankReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AnalysisReport {
    schema: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<u64>,
    form: String,
    variables: Vec<String>,
    degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<FamilyEcho>,
    hilbert: HilbertFunction,
    concise_ladder: u32,
    unimodal: bool,
    symmetric: bool,
    hessians: Vec<HessianEntry>,
    lefschetz: Vec<LefschetzReport>,
    certificate: WildCertificate,
}

fn timestamp(deterministic: bool) -> Option<u64> {
    (!deterministic).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn analyze(input: &Input) -> Result<(String, bool)> {
    let loaded = input.load()?;
    let f = &loaded.form;
    f.ensure_analyzable()?;
    let strategy = input.strategy(&loaded);
    let h = hilbert(f)?;
    let n = f.nvars();
    let d = f.degree();
    let mut hessians = Vec::new();
    let mut budget_hit = false;
    for k in 1..=d / 2 {
        if graded_dim(n, k) > input.max_slice_dim {
            hessians.push(HessianEntry {
                k,
                report: None,
                skipped: Some(format!("dim Q_{k} = {} exceeds --max-slice-dim", graded_dim(n, k))),
            });
            budget_hit = true;
            continue;
        }
        let (_, report) = hessian_rank(f, k, k, &strategy)?;
        budget_hit |= report.cap_exceeded;
        hessians.push(HessianEntry { k, report: Some(report), skipped: None });
    }
    let policy = input.policy();
    let lefschetz = vec![
        lefschetz_generic(f, LefschetzProperty::Weak, &policy)?,
        lefschetz_generic(f, LefschetzProperty::Strong, &policy)?,
    ];
    let certificate = wild_certificate(f, &strategy)?;
    budget_hit |= certificate.search.iter().any(|s| s.outcome.starts_with("skipped"));
    let report = AnalysisReport {
        schema: ANALYSIS_SCHEMA,
        generated_at: timestamp(input.deterministic),
        form: f.render(),
        variables: f.vars().names().to_vec(),
        degree: d,
        family: loaded.family.as_ref().map(FamilyEcho::new),
        concise_ladder: concise_ladder(&h, n),
        unimodal: is_unimodal(&h),
        symmetric: h.is_symmetric(),
        hilbert: h,
        hessians,
        lefschetz,
        certificate,
    };
    let out = if input.json { to_json(&report) } else { analysis_text(&report) };
    Ok((out, budget_hit))
}

fn analysis_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "form: {}", r.form);
    let _ = writeln!(s, "variables: {}  degree: {}", r.variables.join(","), r.degree);
    if let Some(fam) = &r.family {
        let _ = writeln!(s, "family: {} (seed {}, attempts {})", fam.name, fam.seed_used, fam.attempts);
    }
    let _ = writeln!(s, "hilbert: {:?}", r.hilbert.values());
    let _ = writeln!(s, "concise up to k = {}  unimodal: {}  symmetric: {}", r.concise_ladder, r.unimodal, r.symmetric);
    for e in &r.hessians {
        match (&e.report, &e.skipped) {
            (Some(rep), _) => {
                let _ = writeln!(s, "hess^{}: {}", e.k, rank_line(rep));
            }
            (None, Some(why)) => {
                let _ = writeln!(s, "hess^{}: skipped, {why}", e.k);
            }
            _ => {}
        }
    }
    for l in &r.lefschetz {
        let _ = writeln!(s, "{}: {}", property_name(l.property), verdict_name(l));
    }
    s.push_str(&certificate_text(&r.certificate));
    if let Some(fam) = &r.family {
        for note in &fam.notes {
            if !r.certificate.notes.contains(note) {
                let _ = writeln!(s, "note: {note}");
            }
        }
    }
    s
}

fn property_name(p: LefschetzProperty) -> &'static str {
    match p {
        LefschetzProperty::Weak => "WLP",
        LefschetzProperty::Strong => "SLP",
    }
}

fn verdict_name(l: &LefschetzReport) -> String {
    let v = match l.verdict {
        crate::hessian::Verdict::Holds => "holds",
        crate::hessian::Verdict::Fails => "fails",
        crate::hessian::Verdict::Undetermined => "undetermined",
    };
    let ranks: Vec<String> = l
        .per_degree_ranks
        .iter()
        .map(|c| format!("A_{}->A_{} rank {}/{} ({})", c.from, c.to, c.achieved, c.required, c.certainty.label()))
        .collect();
    format!("{v}; {}", ranks.join(", "))
}

fn rank_line(r: &RankReport) -> String {
    let mut s = format!("{}x{} generic rank {} ({})", r.rows, r.cols, r.generic_rank, r.certainty.label());
    if let Some(b) = r.failure_bound {
        let _ = write!(s, ", failure bound {b:.3e}");
    }
    if r.cap_exceeded {
        s.push_str(", symbolic cap exceeded");
    }
    s
}

fn border_text(b: &BorderBound, depth: usize, out: &mut String) {
    let provenance = serde_json::to_value(b.provenance).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let _ = write!(out, "{}{} ({provenance})", "  ".repeat(depth), b.value);
    if let Some(p) = &b.part {
        let _ = write!(out, " for {p}");
    }
    out.push('\n');
    for d in &b.details {
        border_text(d, depth + 1, out);
    }
}

fn certificate_text(c: &WildCertificate) -> String {
    let mut s = String::from("border rank <= ");
    let mut tree = String::new();
    border_text(&c.border_upper, 1, &mut tree);
    let _ = writeln!(s, "{}", c.border_upper.value);
    s.push_str(&tree);
    match &c.cactus_lower {
        Some(lb) => {
            let state = if lb.valid { "certified" } else { "not established" };
            let orders = lb.orders.map(|(l, s)| format!(" Hess^({l},{s})")).unwrap_or_default();
            let _ = writeln!(s, "cactus rank > {} ({state}; k = {}{orders})", lb.value, lb.k);
            for check in &lb.checks {
                let verdict = serde_json::to_value(check.verdict).ok().and_then(|v| v.as_str().map(String::from));
                let certainty = serde_json::to_value(check.certainty).ok().and_then(|v| v.as_str().map(String::from));
                let _ = writeln!(
                    s,
                    "  {}: {} ({})",
                    check.name,
                    verdict.unwrap_or_default(),
                    certainty.unwrap_or_default()
                );
            }
        }
        None => s.push_str("cactus rank: no lower bound found\n"),
    }
    let verdict = match c.verdict {
        WildVerdict::Wild => "wild",
        WildVerdict::NotEstablished => "not-established",
    };
    let _ = writeln!(s, "verdict: {verdict}");
    for note in &c.notes {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

fn cmd_hilbert(input: &Input) -> Result<String> {
    let loaded = input.load()?;
    let h = hilbert(&loaded.form)?;
    if input.json {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Out {
            form: String,
            hilbert: HilbertFunction,
            concise_ladder: u32,
            unimodal: bool,
        }
        let n = loaded.form.nvars();
        return Ok(to_json(&Out {
            form: loaded.form.render(),
            concise_ladder: concise_ladder(&h, n),
            unimodal: is_unimodal(&h),
            hilbert: h,
        }));
    }
    Ok(format!("{:?}\n", h.values()))
}

fn cmd_hessian(input: &Input, k: u32, l: Option<u32>) -> Result<(String, bool)> {
    let loaded = input.load()?;
    let f = &loaded.form;
    let l = l.unwrap_or(k);
    let strategy = input.strategy(&loaded);
    let (h, report) = hessian_rank(f, k, l, &strategy)?;
    let det = if k == l && 2 * k <= f.degree() && h.rows() <= input.max_symbolic_dim {
        Some(hess_det(f, k, input.max_symbolic_dim)?.map_or_else(|| "0".to_string(), |d| d.render()))
    } else {
        None
    };
    let entries: Vec<Vec<String>> =
        (0..h.rows()).map(|i| (0..h.cols()).map(|j| h.render_entry(i, j)).collect()).collect();
    let budget = report.cap_exceeded;
    if input.json {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Out {
            form: String,
            k: u32,
            l: u32,
            entries: Vec<Vec<String>>,
            rank: RankReport,
            #[serde(skip_serializing_if = "Option::is_none")]
            determinant: Option<String>,
        }
        return Ok((to_json(&Out { form: f.render(), k, l, entries, rank: report, determinant: det }), budget));
    }
    let mut s = format!("Hess^({k},{l}) of {}\n", f.render());
    for row in &entries {
        let _ = writeln!(s, "  [{}]", row.join(", "));
    }
    let _ = writeln!(s, "{}", rank_line(&report));
    if let Some(d) = det {
        let _ = writeln!(s, "hess^{k} = {d}");
    }
    Ok((s, budget))
}

fn cmd_lefschetz(input: &Input, slp: bool, element: Option<&str>) -> Result<String> {
    let loaded = input.load()?;
    let f = &loaded.form;
    let property = if slp { LefschetzProperty::Strong } else { LefschetzProperty::Weak };
    let report = match element {
        Some(text) => {
            let coeffs: Vec<i64> = text
                .split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse { pos: 0, msg: format!("bad linear form `{text}`") })?;
            lefschetz_check(f, &LinearForm::from_ints(&coeffs), property)?
        }
        None => lefschetz_generic(f, property, &input.policy())?,
    };
    if input.json {
        return Ok(to_json(&report));
    }
    Ok(format!("{}: {}\n", property_name(property), verdict_name(&report)))
}

fn cmd_binary_rank(input: &Input) -> Result<String> {
    let loaded = input.load()?;
    let r: BinaryRank = binary_waring_analysis(&loaded.form)?;
    if input.json {
        return Ok(to_json(&r));
    }
    let mut s = format!("rank {}\n", r.rank);
    if let Some(w) = &r.witness {
        let _ = writeln!(s, "squarefree annihilator: {}", w.render());
    }
    Ok(s)
}

fn cmd_bounds(input: &Input) -> Result<(String, bool)> {
    let loaded = input.load()?;
    let cert = wild_certificate(&loaded.form, &input.strategy(&loaded))?;
    let budget = cert.search.iter().any(|s| s.outcome.starts_with("skipped"));
    if input.json {
        return Ok((to_json(&cert), budget));
    }
    Ok((format!("form: {}\n{}", cert.form, certificate_text(&cert)), budget))
}

fn cmd_family(input: &Input, list: bool) -> Result<String> {
    if list || input.family.is_none() {
        let mut s = String::new();
        for name in FamilyName::ALL {
            let params: Vec<String> = name
                .parameters()
                .iter()
                .map(|(k, d)| match d {
                    Some(d) => format!("{k}={d}"),
                    None => k.to_string(),
                })
                .collect();
            let _ = writeln!(s, "{:<20} {:<16} {}", name.as_str(), params.join(" "), name.summary());
        }
        return Ok(s);
    }
    let spec = input.family_spec()?.expect("checked above");
    let fam = build(&spec)?;
    if input.json {
        #[derive(Serialize)]
        struct Out {
            family: FamilyEcho,
            #[serde(skip_serializing_if = "Option::is_none")]
            form: Option<String>,
            #[serde(skip_serializing_if = "Option::is_none")]
            variables: Option<Vec<String>>,
        }
        return Ok(to_json(&Out {
            family: FamilyEcho::new(&fam),
            form: fam.form.as_ref().map(Form::render),
            variables: fam.form.as_ref().map(|f| f.vars().names().to_vec()),
        }));
    }
    let mut s = String::new();
    if let Some(f) = &fam.form {
        let _ = writeln!(s, "vars: {}", f.vars().names().join(","));
        let _ = writeln!(s, "{}", f.render());
    }
    if let Some(fb) = &fam.formula {
        let _ = writeln!(s, "cactus rank > {}, border rank <= {}, wild: {}", fb.cactus_lower, fb.border_upper, fb.wild);
        if let Some(a) = &fb.assumes {
            let _ = writeln!(s, "assuming {a}");
        }
    }
    for note in &fam.notes {
        let _ = writeln!(s, "note: {note}");
    }
    Ok(s)
}

/// Run the tool on `args` (including the program name).
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let strict = match &cli.command {
        Command::Analyze(i) | Command::Hilbert(i) | Command::BinaryRank(i) | Command::Bounds(i) => i.strict,
        Command::Hessian { input, .. } | Command::Lefschetz { input, .. } | Command::Family { input, .. } => {
            input.strict
        }
    };
    let result = match &cli.command {
        Command::Analyze(i) => analyze(i),
        Command::Hilbert(i) => cmd_hilbert(i).map(|s| (s, false)),
        Command::Hessian { input, k, l } => cmd_hessian(input, *k, *l),
        Command::Lefschetz { input, slp, element, .. } => cmd_lefschetz(input, *slp, element.as_deref()).map(|s| (s, false)),
        Command::BinaryRank(i) => cmd_binary_rank(i).map(|s| (s, false)),
        Command::Bounds(i) => cmd_bounds(i),
        Command::Family { input, list } => cmd_family(input, *list).map(|s| (s, false)),
    };
    match result {
        Ok((out, budget_hit)) => (if strict && budget_hit { EXIT_BUDGET } else { EXIT_OK }, out),
        Err(e @ Error::OverSymbolicCap { .. }) => (if strict { EXIT_BUDGET } else { EXIT_INPUT }, format!("error: {e}\n")),
        Err(e) => (EXIT_INPUT, format!("error: {e}\n")),
    }
}
