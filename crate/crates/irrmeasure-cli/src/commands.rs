//! Command implementations. Each returns a [`Report`]; verification
//! failures are recorded in it rather than returned as errors.

use clap::ValueEnum;
use irrmeasure::asymptotics::{gauss_family_bound, BoundReport};
use irrmeasure::exact::lcm_upto;
use irrmeasure::gauss_forms::{inclusion_check, integral_value, linear_form, symmetry_check, HGParams};
use irrmeasure::hata::{contour_integral, denominator_witness, hata_bound, simultaneous_forms, ContourPath, HataConfig};
use irrmeasure::hyper::{ramanujan_pi, Gauss2F1, RamanujanSeries};
use irrmeasure::rhin::{
    gn_inclusion, hn_integral_value, hn_simultaneous_forms, hn_validate, rhin_bound, search_gstar, IntPolynomial,
    RhinFamily, SegmentUnion,
};
use irrmeasure::{arith, expectations, BigFloat, ComplexFloat, Digits, GaussianRational, Integer, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{parse_rational, NRange, RunConfig, UsageError};
use crate::report::{Report, Table};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error("{0}")]
    Computation(String),
}

fn fail<E: std::fmt::Display>(e: E) -> CommandError {
    CommandError::Computation(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundTarget {
    #[value(name = "log2-rukhadze")]
    Log2Rukhadze,
    #[value(name = "log2-simple")]
    Log2Simple,
    #[value(name = "pi-hata")]
    PiHata,
    #[value(name = "log2log3-hu")]
    Log2Log3Hu,
    #[value(name = "log3-rhin")]
    Log3Rhin,
    /// Numerator family read from the config file.
    Custom,
}

impl BoundTarget {
    pub fn id(self) -> &'static str {
        match self {
            BoundTarget::Log2Rukhadze => "log2-rukhadze",
            BoundTarget::Log2Simple => "log2-simple",
            BoundTarget::PiHata => "pi-hata",
            BoundTarget::Log2Log3Hu => "log2log3-hu",
            BoundTarget::Log3Rhin => "log3-rhin",
            BoundTarget::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// (7n, 6n, 8n) at a = 2
    Rukhadze,
    /// (n, n, n) at a = 2
    Simple,
    /// (2n, 2n, 2n; 3n) at 2 and 1+i
    Hata,
    /// (2n, 2n, 2n; 3n) at 4/3 and 3/2
    Hu,
    /// six-factor numerator at 2/3 and 4/3
    Rhin,
    /// (z-1)^n (z-2)^n at 2
    RhinSimple,
    /// numerator family read from the config file
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Inclusions,
    Symmetry,
    Oracle,
    Denominators,
    Profiles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    /// Partial sums of the two Ramanujan-type series
    Ramanujan,
    /// Gauss 2F1(a, b; c; z) with rational parameters and real or complex z
    #[value(name = "2f1")]
    Gauss2F1,
}

fn digits(rc: &RunConfig) -> Digits {
    Digits(rc.precision)
}

fn fixed(x: &BigFloat, rc: &RunConfig) -> String {
    x.to_fixed(rc.precision as usize)
}

fn sci(x: &BigFloat) -> String {
    x.to_sci(12)
}

fn base_report(command: &str, rc: &RunConfig) -> Report {
    let mut r = Report::new(command);
    r.param("precision", rc.precision);
    r
}

fn ledger(report: &BoundReport, rc: &RunConfig, out: &mut Report) {
    out.value("C0", fixed(&report.c0, rc));
    if let Some(c) = &report.c0_prime {
        out.value("C0'", fixed(c, rc));
    }
    out.value("C1", fixed(&report.c1, rc));
    out.value("mu", fixed(&report.mu, rc));
    let mut t = Table::new("ledger", &["label", "kind", "C0", "C0'", "C1", "source"]);
    for c in &report.terms {
        let kind = serde_json::to_value(c.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        t.push(vec![
            c.label.clone(),
            kind,
            fixed(&c.c0, rc),
            fixed(&c.c0_prime, rc),
            fixed(&c.c1, rc),
            c.source.clone(),
        ]);
    }
    out.tables.push(t);
}

pub fn cmd_bound(target: BoundTarget, rc: &RunConfig) -> Result<Report, CommandError> {
    let mut out = base_report("bound", rc);
    out.param("target", target.id());
    let d = digits(rc);
    let two = Rational::from(2);
    let report = match target {
        BoundTarget::Log2Rukhadze => gauss_family_bound(7, 6, 8, &two, d).map_err(fail)?,
        BoundTarget::Log2Simple => gauss_family_bound(1, 1, 1, &two, d).map_err(fail)?,
        BoundTarget::PiHata | BoundTarget::Log2Log3Hu => {
            let unit = if target == BoundTarget::PiHata { HataConfig::log2_pi(1) } else { HataConfig::log2_log3(1) };
            let b = hata_bound(&unit, d).map_err(fail)?;
            let mut t = Table::new("saddles", &["re", "im", "value", "role", "measured"]);
            for s in &b.saddles {
                t.push(vec![
                    format!("{:.15}", s.re),
                    format!("{:.15}", s.im),
                    fixed(&s.value, rc),
                    s.role.clone(),
                    s.measured.map_or("-".into(), |m| format!("{m:.6}")),
                ]);
            }
            out.tables.push(t);
            b.report
        }
        BoundTarget::Log3Rhin | BoundTarget::Custom => {
            let fam = if target == BoundTarget::Log3Rhin { RhinFamily::log3() } else { rc.file.rhin_family()? };
            let b = rhin_bound(&fam, d).map_err(fail)?;
            let mut t = Table::new("envelopes", &["target", "argmax", "value"]);
            for e in &b.envelopes {
                t.push(vec![e.target.clone(), format!("{:.15}", e.argmax), fixed(&e.value, rc)]);
            }
            out.tables.push(t);
            out.value("coefficient saddle", format!("{:.12}{:+.12}i", b.coefficient_saddle.0, b.coefficient_saddle.1));
            out.value("circle min-max check", format!("{:.12}", b.cauchy_check));
            b.report
        }
    };
    ledger(&report, rc, &mut out);
    if target != BoundTarget::Custom {
        let e = expectations::get(&format!("{}.mu", target.id()));
        out.value("reference mu", &e.value);
        out.value("reference tolerance", &e.tolerance);
        out.value("reference", &e.citation);
        out.value("difference", format!("{:.3e}", report.mu.to_f64() - e.value_f64()));
    }
    Ok(out)
}

fn gaussian_scale(vals: &[&GaussianRational]) -> Integer {
    vals.iter().fold(Integer::from(1), |acc, g| acc.lcm(g.re.denom()).lcm(g.im.denom()))
}

fn scaled_gaussian(g: &GaussianRational, s: &Integer) -> String {
    g.scale(&Rational::from(s)).to_string()
}

fn complex_abs(z: &ComplexFloat, d: Digits) -> BigFloat {
    BigFloat::new(z.abs(), d)
}

fn rhin_family_for(family: Family, rc: &RunConfig) -> Result<RhinFamily, CommandError> {
    Ok(match family {
        Family::Rhin => RhinFamily::log3(),
        Family::RhinSimple => RhinFamily::log2_simple(),
        _ => rc.file.rhin_family()?,
    })
}

pub fn cmd_forms(family: Family, rc: &RunConfig) -> Result<Report, CommandError> {
    let mut out = base_report("forms", rc);
    let family_name = family.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let range = rc.n_or(NRange { lo: 1, hi: 5 });
    out.param("family", family_name);
    out.param("n", range);
    let d = digits(rc);
    let mut t = Table::new("forms", &["n", "target", "log coeff", "const coeff", "scale", "scaled log", "scaled const", "|form|"]);
    for n in range.iter() {
        match family {
            Family::Rukhadze | Family::Simple => {
                let (m, n0, n1) = if family == Family::Rukhadze { (7 * n, 6 * n, 8 * n) } else { (n, n, n) };
                let p = HGParams::at_two(m, n0, n1).map_err(fail)?;
                let f = linear_form(&p);
                let inc = inclusion_check(&p, true).map_err(fail)?;
                t.push(vec![
                    n.to_string(),
                    "2".into(),
                    f.log_coeff.to_string(),
                    f.const_coeff.to_string(),
                    inc.scale.to_string(),
                    inc.log_coeff.to_string(),
                    inc.const_coeff.to_string(),
                    sci(&f.value(d).abs()),
                ]);
            }
            Family::Hata | Family::Hu => {
                let cfg = if family == Family::Hata { HataConfig::log2_pi(n) } else { HataConfig::log2_log3(n) };
                let sf = simultaneous_forms(&cfg).map_err(fail)?;
                for f in &sf.forms {
                    let s = gaussian_scale(&[&f.log_coeff, &f.const_coeff]);
                    t.push(vec![
                        n.to_string(),
                        f.target.to_string(),
                        f.log_coeff.to_string(),
                        f.const_coeff.to_string(),
                        s.to_string(),
                        scaled_gaussian(&f.log_coeff, &s),
                        scaled_gaussian(&f.const_coeff, &s),
                        sci(&complex_abs(&f.value(d), d)),
                    ]);
                }
            }
            Family::Rhin | Family::RhinSimple | Family::Custom => {
                let fam = rhin_family_for(family, rc)?;
                let h = fam.polynomial(n).map_err(fail)?;
                let form = hn_validate(&h, n, &fam.delta).map_err(fail)?;
                let sf = hn_simultaneous_forms(&form, &fam.points).map_err(fail)?;
                for (f, (sb, sa)) in sf.forms.iter().zip(&sf.scaled) {
                    t.push(vec![
                        n.to_string(),
                        f.target.to_string(),
                        f.log_coeff.to_string(),
                        f.const_coeff.to_string(),
                        lcm_upto(n as u64).to_string(),
                        sb.to_string(),
                        sa.to_string(),
                        sci(&f.value(d).abs()),
                    ]);
                }
            }
        }
    }
    out.tables.push(t);
    Ok(out)
}

const INCLUSION_POINTS: [(i64, i64); 4] = [(2, 1), (3, 2), (4, 3), (2, 3)];

/// Random valid `(m, n0, n1; a)` with `n1 <= 40`.
pub fn random_params(rng: &mut ChaCha8Rng) -> HGParams {
    loop {
        let n1 = rng.gen_range(0..=40u32);
        let m = rng.gen_range(0..=n1);
        let n0 = rng.gen_range(0..=40u32);
        let (p, q) = INCLUSION_POINTS[rng.gen_range(0..INCLUSION_POINTS.len())];
        if let Ok(params) = HGParams::new(m, n0, n1, Rational::from((p, q))) {
            return params;
        }
    }
}

fn describe(p: &HGParams) -> String {
    format!("(m, n0, n1; a) = ({}, {}, {}; {})", p.m(), p.n0(), p.n1(), p.a())
}

struct Tally {
    table: Table,
}

impl Tally {
    fn new() -> Self {
        Tally { table: Table::new("checks", &["group", "cases", "failures"]) }
    }

    fn add(&mut self, group: &str, cases: usize, failures: Vec<String>, out: &mut Report) {
        self.table.push(vec![group.into(), cases.to_string(), failures.len().to_string()]);
        out.failures.extend(failures.into_iter().map(|f| format!("{group}: {f}")));
    }
}

pub fn cmd_verify(suite: Suite, rc: &RunConfig) -> Result<Report, CommandError> {
    let mut out = base_report("verify", rc);
    out.param("suite", suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default());
    out.param("seed", rc.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed);
    let mut tally = Tally::new();
    match suite {
        Suite::Inclusions => {
            let params: Vec<HGParams> = (0..200).map(|_| random_params(&mut rng)).collect();
            for improved in [false, true] {
                let failures: Vec<String> = params
                    .iter()
                    .filter_map(|p| inclusion_check(p, improved).err().map(|e| format!("{}: {e}", describe(p))))
                    .collect();
                let group = if improved { "scaled by D and divided by the factorial denominator" } else { "scaled by D" };
                tally.add(group, params.len(), failures, &mut out);
            }
            let mut failures = Vec::new();
            let mut cases = 0;
            for _ in 0..50 {
                let deg = rng.gen_range(0..=6usize);
                let g = IntPolynomial::new((0..=deg).map(|_| Integer::from(rng.gen_range(-9..=9i64))).collect());
                let n = rng.gen_range(deg as u32..=8);
                cases += 1;
                if let Err(e) = gn_inclusion(&g, n) {
                    failures.push(format!("G = {:?}, n = {n}: {e}", g.coeffs()));
                }
            }
            tally.add("numerators in x(1-x)/(1+x)", cases, failures, &mut out);
            let range = rc.n_or(NRange { lo: 1, hi: 12 });
            let fam = RhinFamily::log3();
            let mut failures = Vec::new();
            for n in range.iter() {
                let res = fam
                    .polynomial(n)
                    .and_then(|h| hn_validate(&h, n, &fam.delta))
                    .and_then(|f| hn_simultaneous_forms(&f, &fam.points));
                if let Err(e) = res {
                    failures.push(format!("log 3 numerator, n = {n}: {e}"));
                }
            }
            tally.add("log 3 numerator at 2/3 and 4/3", (range.hi - range.lo + 1) as usize, failures, &mut out);
        }
        Suite::Symmetry => {
            let params: Vec<HGParams> = (0..100).map(|_| random_params(&mut rng)).collect();
            let failures = params.iter().filter(|p| !symmetry_check(p)).map(describe).collect();
            tally.add("factorial-normalised swap", params.len(), failures, &mut out);
        }
        Suite::Oracle => {
            let d = digits(rc);
            let need = rc.precision as f64;
            let mut rows = Table::new("agreement", &["case", "exact", "quadrature", "digits"]);
            let mut failures = Vec::new();
            let mut record = |case: String, exact: String, quad: String, agree: f64| {
                if agree.is_nan() || agree < need {
                    failures.push(format!("{case}: {agree:.1} digits"));
                }
                rows.push(vec![case, exact, quad, format!("{:.1}", agree.min(999.0))]);
            };
            let qd = d.plus(10);
            let mut gauss = Vec::new();
            for k in 1..=8 {
                for (p, q) in INCLUSION_POINTS {
                    gauss.push(HGParams::new(k, k, k, Rational::from((p, q))).expect("valid"));
                }
            }
            gauss.push(HGParams::at_two(7, 6, 8).expect("valid"));
            for p in &gauss {
                let exact = linear_form(p).value(qd);
                let quad = integral_value(p, qd).map_err(fail)?;
                record(describe(p), sci(&exact), sci(&quad), quad.agreeing_digits(&exact));
            }
            for (name, cfgs) in [
                ("log 2, pi", (1..=4).map(HataConfig::log2_pi).collect::<Vec<_>>()),
                ("log 2, log 3", (1..=2).map(HataConfig::log2_log3).collect()),
            ] {
                for (n, cfg) in cfgs.iter().enumerate() {
                    let sf = simultaneous_forms(cfg).map_err(fail)?;
                    for f in &sf.forms {
                        let exact = f.value(qd);
                        let quad = contour_integral(cfg, &f.target, &ContourPath::Default, qd).map_err(fail)?;
                        let agree = complex_agreement(&exact, &quad);
                        record(
                            format!("{name} n = {} at {}", n + 1, f.target),
                            sci(&complex_abs(&exact, qd)),
                            sci(&complex_abs(&quad, qd)),
                            agree,
                        );
                    }
                }
            }
            let fam = RhinFamily::log3();
            for n in 1..=8 {
                let h = fam.polynomial(n).map_err(fail)?;
                let form = hn_validate(&h, n, &fam.delta).map_err(fail)?;
                let sf = hn_simultaneous_forms(&form, &fam.points).map_err(fail)?;
                for f in &sf.forms {
                    let quad = hn_integral_value(&h, n, &f.target, qd).map_err(fail)?;
                    let exact = f.value(qd);
                    let agree = quad.agreeing_digits(&exact);
                    record(format!("log 3 numerator n = {n} at {}", f.target), sci(&exact), sci(&quad), agree);
                }
            }
            drop(record);
            let cases = rows.rows.len();
            tally.add("exact forms against quadrature", cases, failures, &mut out);
            out.tables.push(rows);
        }
        Suite::Denominators => {
            let range = rc.n_or(NRange { lo: 1, hi: 10 });
            let mut rows = Table::new("witnesses", &["n", "target", "tuples", "min valuation", "holds"]);
            let mut failures = Vec::new();
            let targets = [GaussianRational::from_ints(1, 0), GaussianRational::from_ints(2, 0), GaussianRational::from_ints(1, 1)];
            for n in range.iter() {
                let cfg = HataConfig::log2_pi(n);
                for t in &targets {
                    let w = denominator_witness(&cfg, t).map_err(fail)?;
                    if !w.holds() {
                        failures.push(format!("n = {n}, target {t}: {} mismatches, scaling exponent {}", w.mismatches.len(), w.scaling_exponent));
                    }
                    rows.push(vec![n.to_string(), t.to_string(), w.tuples.to_string(), w.min_valuation.to_string(), w.holds().to_string()]);
                }
            }
            let cases = rows.rows.len();
            tally.add("Gaussian-integer identities", cases, failures, &mut out);
            out.tables.push(rows);
        }
        Suite::Profiles => {
            let r = |p: i64, q: i64| Rational::from((p, q));
            let rukhadze = [(1, 8, 1, 7), (1, 4, 2, 7), (3, 8, 3, 7), (1, 2, 4, 7), (2, 3, 5, 7), (5, 6, 6, 7)];
            let want: Vec<(Rational, Rational, u32)> = rukhadze.iter().map(|&(a, b, c, e)| (r(a, b), r(c, e), 1)).collect();
            let got: Vec<(Rational, Rational, u32)> =
                arith::phi_step_profile(7, 6, 8).steps().iter().map(|s| (s.lo.clone(), s.hi.clone(), s.value)).collect();
            let mut rows = Table::new("profiles", &["profile", "steps"]);
            let show = |v: &[(Rational, Rational, u32)]| {
                v.iter().map(|(a, b, k)| format!("[{a},{b})={k}")).collect::<Vec<_>>().join(" ")
            };
            rows.push(vec!["(7,6,8)".into(), show(&got)]);
            let mut failures = Vec::new();
            if got != want {
                failures.push(format!("(7,6,8): expected {}", show(&want)));
            }
            let hata = arith::minimize_varpi(&[2, 2, 2], 3).map_err(fail)?;
            let got: Vec<(Rational, Rational, u32)> =
                hata.profile.steps().iter().map(|s| (s.lo.clone(), s.hi.clone(), s.value)).collect();
            rows.push(vec!["(2,2,2; 3)".into(), show(&got)]);
            let want = vec![(r(1, 2), r(2, 3), 1)];
            if got != want {
                failures.push(format!("(2,2,2; 3): expected {}", show(&want)));
            }
            tally.add("step profiles", 2, failures, &mut out);
            out.tables.push(rows);
        }
    }
    out.tables.insert(0, tally.table);
    out.value("status", if out.passed() { "pass" } else { "fail" });
    Ok(out)
}

/// `-log10(|quad - exact| / |exact|)`.
fn complex_agreement(exact: &ComplexFloat, quad: &ComplexFloat) -> f64 {
    let diff = (quad - exact).abs();
    if diff.is_zero() {
        return f64::INFINITY;
    }
    let scale = exact.abs();
    let rel = if scale.is_zero() { diff } else { diff / scale };
    -rel.log10().to_f64()
}

pub fn cmd_search(rc: &RunConfig, degree: Option<u32>, coeff_bound: Option<u32>) -> Result<Report, CommandError> {
    let degree = match degree {
        Some(d) => d,
        None => rc.file.parsed("degree")?.unwrap_or(7),
    };
    let bound = match coeff_bound {
        Some(b) => b,
        None => rc.file.parsed("coeff-bound")?.unwrap_or(10),
    };
    let mut out = base_report("search", rc);
    out.param("degree", degree);
    out.param("coeff-bound", bound);
    let seg = SegmentUnion::log2_saddle_segment();
    let (lo, hi) = &seg.intervals()[0];
    out.param("segment", format!("[{lo}, {}]", BigFloat::from_rational(hi, digits(rc)).to_sci(20)));
    let res = search_gstar(degree, bound, &seg, digits(rc)).map_err(fail)?;
    let coeffs: Vec<String> = res.poly.coeffs().iter().map(|c| c.to_string()).collect();
    out.value("coefficients", coeffs.join(" "));
    out.value("optimal degree", res.poly.degree().unwrap_or(0));
    out.value("sup-norm root", fixed(&res.sup_norm_root, rc));
    out.value("nodes", res.nodes);
    out.value("exact checks", res.exact_checks);
    Ok(out)
}

fn parse_complex(key: &str, v: &str, d: Digits) -> Result<ComplexFloat, UsageError> {
    let bits = d.plus(10).bits();
    let parts: Vec<&str> = v.split(',').collect();
    let re = parse_rational(key, parts[0])?;
    let im = if parts.len() > 1 { parse_rational(key, parts[1])? } else { Rational::new() };
    if parts.len() > 2 {
        return Err(UsageError::Value { key: key.into(), value: v.into(), msg: "expected `re` or `re,im`".into() });
    }
    Ok(ComplexFloat::from_gaussian(&GaussianRational::new(re, im), bits))
}

pub struct OracleArgs {
    pub series: Option<u32>,
    pub terms: Option<u32>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub c: Option<String>,
    pub z: Option<String>,
}

pub fn cmd_oracle(kind: OracleKind, args: OracleArgs, rc: &RunConfig) -> Result<Report, CommandError> {
    let mut out = base_report("oracle", rc);
    let d = digits(rc);
    match kind {
        OracleKind::Ramanujan => {
            let series = match args.series {
                Some(s) => s,
                None => rc.file.parsed("series")?.unwrap_or(39),
            };
            let terms = match args.terms {
                Some(t) => t,
                None => rc.file.parsed("terms")?.unwrap_or(5),
            };
            out.param("kind", "ramanujan");
            out.param("series", series);
            out.param("terms", terms);
            let s = RamanujanSeries::from_id(series).map_err(fail)?;
            let partial = ramanujan_pi(series, terms, d).map_err(fail)?;
            let limit = s.limit(d.plus(10));
            out.value("partial sum", fixed(&partial, rc));
            out.value("limit", fixed(&limit, rc));
            out.value("agreeing digits", format!("{:.2}", partial.agreeing_digits(&limit).min(999.0)));
        }
        OracleKind::Gauss2F1 => {
            let get = |flag: &Option<String>, key: &str| -> Result<String, UsageError> {
                flag.clone().or_else(|| rc.file.get(key).map(String::from)).ok_or_else(|| UsageError::Missing(key.into()))
            };
            let (a, b, c, z) = (get(&args.a, "a")?, get(&args.b, "b")?, get(&args.c, "c")?, get(&args.z, "z")?);
            out.param("kind", "2f1");
            for (k, v) in [("a", &a), ("b", &b), ("c", &c), ("z", &z)] {
                out.param(k, v);
            }
            let f = Gauss2F1::new(parse_rational("a", &a)?, parse_rational("b", &b)?, parse_rational("c", &c)?);
            let zf = parse_complex("z", &z, d)?;
            let v = f.eval(&zf, d).map_err(fail)?;
            out.value("re", fixed(&BigFloat::new(v.re.clone(), d), rc));
            out.value("im", fixed(&BigFloat::new(v.im.clone(), d), rc));
        }
    }
    Ok(out)
}
