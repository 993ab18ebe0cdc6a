//! Verification suites and scaling measurements behind the command-line tool.
//!
//! Every trial draws from its own stream `Sampler::for_stream(seed, trial)`,
//! so a failing case can be replayed from the seed and trial number alone.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use crate::cantor::{cantor_add, cantor_negate, cantor_scalar_mul, mumford_to_point, random_mumford, MumfordDivisor};
use crate::curve::{gen_hyperelliptic, CurveBundle, GenOptions, HyperellipticCurve};
use crate::divisor::{deflate, igs_for_v, igs_size_h, is_igs, membership_test, random_igs_candidate};
use crate::error::{Error, Result};
use crate::field::{PrimeField, RetryStats, Sampler};
use crate::jacobian::{make_large_model, JacobianPoint, LargeModel, SizeTag};
use crate::linalg::Subspace;
use crate::rep::{CheckStatus, CurveRep, RepTag};

/// Bound on the verified fraction of random IGS candidates.
pub const MIN_SUCCESS_FRACTION: f64 = 0.45;
/// Bound on the mean number of loop iterations per deflation.
pub const MAX_MEAN_DEFLATION_ATTEMPTS: f64 = 2.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Axioms,
    Oracle,
    IgsStats,
    Membership,
    Fixture,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Axioms, Suite::Oracle, Suite::IgsStats, Suite::Membership, Suite::Fixture];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Oracle => "oracle",
            Suite::IgsStats => "igs-stats",
            Suite::Membership => "membership",
            Suite::Fixture => "fixture",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleOp {
    AddflipLarge,
    AddflipSmall,
    Equal,
    Flip,
}

impl ScaleOp {
    pub const ALL: [ScaleOp; 4] = [ScaleOp::AddflipLarge, ScaleOp::AddflipSmall, ScaleOp::Equal, ScaleOp::Flip];

    pub fn name(self) -> &'static str {
        match self {
            ScaleOp::AddflipLarge => "addflip-large",
            ScaleOp::AddflipSmall => "addflip-small",
            ScaleOp::Equal => "equal",
            ScaleOp::Flip => "flip",
        }
    }
}

impl fmt::Display for ScaleOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScaleOp {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ScaleOp::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown operation {s:?}"))
    }
}

/// One JSON-lines record.
#[derive(Clone, Debug, Serialize)]
pub struct CaseLine {
    pub suite: Suite,
    pub case: String,
    pub pass: bool,
    pub details: Value,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OpTiming {
    pub op: String,
    pub median_ns: u128,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub genus: usize,
    pub p: u64,
    pub d: Option<usize>,
    pub big_delta: usize,
    pub rep: RepTag,
    pub seed: u64,
    pub timings: Vec<OpTiming>,
    pub retries: RetryStats,
    pub cases: Vec<CaseLine>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseLine> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn jsonl(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&serde_json::to_string(c).expect("serializable"));
            out.push('\n');
        }
        out
    }

    pub fn summary(&self) -> String {
        let pass = self.cases.iter().filter(|c| c.pass).count();
        let mut s = format!(
            "g={} p={} d={} Delta={} rep={} seed={}\ncases: {pass}/{} passed\n",
            self.genus,
            self.p,
            self.d.map_or("-".into(), |d| d.to_string()),
            self.big_delta,
            self.rep,
            self.seed,
            self.cases.len()
        );
        let r = &self.retries;
        s.push_str(&format!(
            "retries: candidates={} verified={} deflations={} deflation_attempts={} igs_v_attempts={} membership_attempts={}\n",
            r.candidates, r.verified, r.deflations, r.deflation_attempts, r.igs_v_attempts, r.membership_attempts
        ));
        if !self.timings.is_empty() {
            s.push_str(&format!("{:<16} {:>14} {:>8}\n", "op", "median_ns", "samples"));
            for t in &self.timings {
                s.push_str(&format!("{:<16} {:>14} {:>8}\n", t.op, t.median_ns, t.samples));
            }
        }
        for c in self.failures() {
            s.push_str(&format!("FAIL {} {} seed={} {}\n", c.suite, c.case, c.seed, c.details));
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    pub rep: RepTag,
}

/// The large model of a bundle on the requested representation. Builds an
/// IGS for `V` when cubic data is present.
pub fn build_model(bundle: &CurveBundle, tag: RepTag, rng: &mut Sampler) -> Result<LargeModel> {
    let precomp = bundle.precomp.as_ref().ok_or_else(|| Error::MissingData("large-model data".into()))?;
    let rep_a = CurveRep::A(bundle.rep_a.clone());
    let defl_v = match &bundle.cubic {
        Some(c) => Some(igs_for_v(&rep_a, c, rng)?),
        None => None,
    };
    match tag {
        RepTag::A => make_large_model(rep_a, precomp, defl_v, rng),
        RepTag::B0 => {
            let data = bundle.rep_b0.as_ref().ok_or_else(|| Error::MissingData("point-value data".into()))?;
            let rep = CurveRep::B0(data.rep.clone());
            let defl_v = defl_v.map(|v| v.for_rep(&rep)).transpose()?;
            make_large_model(rep, precomp, defl_v, rng)
        }
    }
}

#[derive(Default)]
struct Timer {
    samples: Vec<(&'static str, Duration)>,
}

impl Timer {
    fn time<T>(&mut self, op: &'static str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.samples.push((op, t.elapsed()));
        out
    }

    fn medians(&self) -> Vec<OpTiming> {
        let mut ops: Vec<&'static str> = self.samples.iter().map(|s| s.0).collect();
        ops.sort_unstable();
        ops.dedup();
        ops.into_iter()
            .map(|op| {
                let mut d: Vec<Duration> = self.samples.iter().filter(|s| s.0 == op).map(|s| s.1).collect();
                OpTiming { op: op.into(), median_ns: median(&mut d).as_nanos(), samples: d.len() }
            })
            .collect()
    }
}

fn median(d: &mut [Duration]) -> Duration {
    d.sort_unstable();
    d.get(d.len() / 2).copied().unwrap_or_default()
}

struct Ctx<'a> {
    bundle: &'a CurveBundle,
    model: &'a LargeModel,
    seed: u64,
    suite: Suite,
    timer: Timer,
    retries: RetryStats,
    cases: Vec<CaseLine>,
}

impl Ctx<'_> {
    fn line(&mut self, case: String, pass: bool, details: Value) {
        self.cases.push(CaseLine { suite: self.suite, case, pass, details, seed: self.seed });
    }

    /// Runs `f` on a fresh stream for `trial`; errors become failed cases.
    fn trial(&mut self, trial: usize, f: impl FnOnce(&mut Self, &mut Sampler) -> Result<(bool, Value)>) {
        let mut rng = Sampler::for_stream(*self.model.rep.field(), self.seed, trial as u64);
        let res = f(self, &mut rng);
        self.retries += rng.stats;
        match res {
            Ok((pass, details)) => self.line(format!("trial-{trial}"), pass, details),
            Err(e) => self.line(format!("trial-{trial}"), false, json!({ "error": e.to_string() })),
        }
    }
}

fn random_class(ctx: &Ctx<'_>, tag: SizeTag, rng: &mut Sampler) -> Result<(MumfordDivisor, JacobianPoint)> {
    let curve = &ctx.bundle.curve;
    let m = random_mumford(curve, rng)?;
    let x = mumford_to_point(ctx.model, curve, &m, tag, rng)?;
    Ok((m, x))
}

/// Runs one suite on a bundle.
pub fn run_suite(bundle: &CurveBundle, opts: &VerifyOptions) -> Result<RunReport> {
    let report = |timings, retries, cases| RunReport {
        genus: bundle.curve.genus(),
        p: bundle.curve.field().p(),
        d: bundle.precomp.as_ref().map(|m| m.d),
        big_delta: bundle.big_delta,
        rep: opts.rep,
        seed: opts.seed,
        timings,
        retries,
        cases,
    };
    if opts.suite == Suite::Fixture {
        // table checks only; the fixture has no large model
        let cases = fixture_suite(bundle, opts.seed);
        return Ok(report(Vec::new(), RetryStats::default(), cases));
    }
    let mut setup = Sampler::for_stream(*bundle.curve.field(), opts.seed, u64::MAX);
    let model = build_model(bundle, opts.rep, &mut setup)?;
    let mut ctx = Ctx {
        bundle,
        model: &model,
        seed: opts.seed,
        suite: opts.suite,
        timer: Timer::default(),
        retries: setup.stats,
        cases: Vec::new(),
    };
    match opts.suite {
        Suite::Fixture => unreachable!(),
        Suite::Axioms => (0..opts.trials).for_each(|t| ctx.trial(t, axioms_trial)),
        Suite::Oracle => (0..opts.trials).for_each(|t| ctx.trial(t, oracle_trial)),
        Suite::Membership => (0..opts.trials).for_each(|t| ctx.trial(t, membership_trial)),
        Suite::IgsStats => igs_stats(&mut ctx, opts.trials),
    }
    Ok(report(ctx.timer.medians(), ctx.retries, ctx.cases))
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn fixture_suite(b: &CurveBundle, seed: u64) -> Vec<CaseLine> {
    let line = |case: &str, pass: bool, details: Value| CaseLine {
        suite: Suite::Fixture,
        case: case.into(),
        pass,
        details,
        seed,
    };
    let shaped =
        b.curve.genus() == 1 && b.big_delta == 4 && b.curve.f().coeffs() == [1, 0, 0, 1] && b.curve.h().is_zero();
    if !shaped {
        return vec![line("fixture-curve", false, json!({ "error": "bundle is not y^2 = x^3 + 1 with Delta = 4" }))];
    }
    let rep = CurveRep::A(b.rep_a.clone());
    let t = |i: usize| unit(4, i - 1);
    let u = |i: usize| unit(8, i - 1);
    let mut u1_u6 = u(1);
    u1_u6[5] = 1;
    let mut cases = vec![
        line("T_2*T_3=U_5", rep.product(&t(2), &t(3)).ok() == Some(u(5)), json!({})),
        line("T_3*T_3=U_1+U_6", rep.product(&t(3), &t(3)).ok() == Some(u1_u6), json!({})),
        line("T_1*T_j=U_j", (1..=4).all(|j| rep.product(&t(1), &t(j)).ok() == Some(u(j))), json!({})),
    ];
    for c in &rep.validate().checks {
        let pass = c.status != CheckStatus::Fail;
        let details = json!({ "status": format!("{:?}", c.status), "detail": c.detail });
        cases.push(line(&format!("validate-{}", c.name), pass, details));
    }
    cases
}

fn axioms_trial(ctx: &mut Ctx<'_>, rng: &mut Sampler) -> Result<(bool, Value)> {
    let m = ctx.model;
    let (_, x) = random_class(ctx, SizeTag::Small, rng)?;
    let (_, y) = random_class(ctx, SizeTag::Small, rng)?;
    let (_, z) = random_class(ctx, SizeTag::Small, rng)?;
    let zero = m.zero_point(SizeTag::Small);
    let identity = m.equal_class(&m.add(&x, &zero, rng)?, &x, rng)?;
    let neg = m.negate(&x, rng)?;
    let inverse = m.equal_class(&m.add(&x, &neg, rng)?, &zero, rng)?;
    let xy = ctx.timer.time("add", || m.add(&x, &y, rng))?;
    let commutative = m.equal_class(&xy, &m.add(&y, &x, rng)?, rng)?;
    let left = m.add(&xy, &z, rng)?;
    let right = m.add(&x, &m.add(&y, &z, rng)?, rng)?;
    let associative = ctx.timer.time("equal", || m.equal_class(&left, &right, rng))?;
    let reflexive = m.equal_class(&x, &x, rng)?;
    let pass = identity && inverse && commutative && associative && reflexive;
    Ok((
        pass,
        json!({
            "identity": identity, "inverse": inverse, "commutative": commutative,
            "associative": associative, "reflexive": reflexive
        }),
    ))
}

fn oracle_trial(ctx: &mut Ctx<'_>, rng: &mut Sampler) -> Result<(bool, Value)> {
    let m = ctx.model;
    let curve: &HyperellipticCurve = &ctx.bundle.curve;
    let (a, xs) = random_class(ctx, SizeTag::Small, rng)?;
    let (b, ys) = random_class(ctx, SizeTag::Small, rng)?;
    let xl = mumford_to_point(m, curve, &a, SizeTag::Large, rng)?;
    let yl = mumford_to_point(m, curve, &b, SizeTag::Large, rng)?;
    let n = 1 + rng.below(50) as i64;
    let sum = cantor_add(curve, &a, &b);
    let neg_sum = cantor_negate(curve, &sum);

    let af_small = ctx.timer.time("addflip_small", || m.addflip_small(&xs, &ys, rng))?;
    let af_large = ctx.timer.time("addflip_large", || m.addflip_large(&xl, &yl, rng))?;
    let added = m.add(&xs, &ys, rng)?;
    let negated = m.negate(&xs, rng)?;
    let multiple = ctx.timer.time("scalar_mul", || m.scalar_mul(n, &xs, rng))?;

    let mut cmp = |p: &JacobianPoint, want: &MumfordDivisor| -> Result<bool> {
        let w = mumford_to_point(m, curve, want, p.tag, rng)?;
        m.equal_class(p, &w, rng)
    };
    let r_small = cmp(&af_small, &neg_sum)?;
    let r_large = cmp(&af_large, &neg_sum)?;
    let r_add = cmp(&added, &sum)?;
    let r_neg = cmp(&negated, &cantor_negate(curve, &a))?;
    let r_mul = cmp(&multiple, &cantor_scalar_mul(curve, n, &a))?;
    let pass = r_small && r_large && r_add && r_neg && r_mul;
    Ok((
        pass,
        json!({
            "addflip_small": r_small, "addflip_large": r_large, "add": r_add,
            "negate": r_neg, "scalar_mul": r_mul, "n": n
        }),
    ))
}

/// Replaces one canonical basis vector of `w` by a random element of `V`,
/// keeping the dimension and changing the space.
pub fn perturb(rep: &CurveRep, w: &Subspace, rng: &mut Sampler) -> Result<Subspace> {
    let field = *rep.field();
    let drop = rng.below(w.dim() as u64) as usize;
    loop {
        let coeffs: Vec<u64> = (0..rep.delta()).map(|_| rng.uniform()).collect();
        let v = rep.v_space().combine(&field, &coeffs);
        let mut rows: Vec<Vec<u64>> =
            w.vectors().enumerate().filter(|(i, _)| *i != drop).map(|(_, r)| r.to_vec()).collect();
        rows.push(v);
        let out = Subspace::span_of(&field, w.ambient_dim(), &rows)?;
        if out.dim() == w.dim() && &out != w {
            return Ok(out);
        }
    }
}

fn membership_trial(ctx: &mut Ctx<'_>, rng: &mut Sampler) -> Result<(bool, Value)> {
    let m = ctx.model;
    let defl_v = m.defl_v.as_ref().ok_or_else(|| Error::MissingData("cubic data (needed for an IGS of V)".into()))?;
    let tag = if rng.below(2) == 0 { SizeTag::Small } else { SizeTag::Large };
    let w = m.random_effective(tag, rng)?;
    let genuine = ctx.timer.time("membership", || membership_test(&m.rep, &w.space, defl_v, rng))?;
    let bad = perturb(&m.rep, &w.space, rng)?;
    let perturbed = membership_test(&m.rep, &bad, defl_v, rng)?;
    Ok((genuine && !perturbed, json!({ "degree": w.degree, "genuine": genuine, "perturbed": perturbed })))
}

/// Verified fraction of random candidates and mean deflation attempts on
/// random divisors of degree `d`.
fn igs_stats(ctx: &mut Ctx<'_>, trials: usize) {
    let m = ctx.model;
    let field = *m.rep.field();
    let mut verified = 0usize;
    let mut deflation = RetryStats::default();
    let mut errors = Vec::new();
    let mut degree = 0;
    for t in 0..trials {
        let mut rng = Sampler::for_stream(field, ctx.seed, t as u64);
        let res = (|| -> Result<bool> {
            let d = m.random_effective(SizeTag::Small, &mut rng)?;
            degree = d.degree;
            let h = igs_size_h(m.rep.big_delta(), d.degree, field.sigma_size());
            let cand = random_igs_candidate(&d.space, h, &mut rng)?;
            let ok = is_igs(&m.rep, &cand, d.degree)?;
            let before = rng.stats;
            ctx.timer.time("deflate", || deflate(&m.rep, &d, &mut rng))?;
            deflation.deflations += rng.stats.deflations - before.deflations;
            deflation.deflation_attempts += rng.stats.deflation_attempts - before.deflation_attempts;
            Ok(ok)
        })();
        ctx.retries += rng.stats;
        match res {
            Ok(ok) => verified += ok as usize,
            Err(e) => errors.push(format!("trial {t}: {e}")),
        }
    }
    let fraction = if trials == 0 { f64::NAN } else { verified as f64 / trials as f64 };
    let mean = deflation.mean_deflation_attempts();
    let h = igs_size_h(m.rep.big_delta(), degree, field.sigma_size());
    let pass = errors.is_empty() && fraction >= MIN_SUCCESS_FRACTION && mean <= MAX_MEAN_DEFLATION_ATTEMPTS;
    ctx.line(
        "success-fraction".into(),
        pass,
        json!({
            "candidates": trials, "verified": verified, "fraction": fraction,
            "mean_deflation_attempts": mean, "degree": degree, "h": h,
            "sigma_size": field.sigma_size(), "errors": errors
        }),
    );
}

#[derive(Clone, Debug)]
pub struct ScaleOptions {
    pub genera: Vec<usize>,
    pub p: u64,
    pub op: ScaleOp,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaleRow {
    pub genus: usize,
    pub op: ScaleOp,
    pub median_ns: u128,
    pub trials: usize,
    pub retries: RetryStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaleReport {
    pub rows: Vec<ScaleRow>,
    /// Least-squares slope of `ln(median_ns)` against `ln(genus)`.
    pub slope: Option<f64>,
}

impl ScaleReport {
    pub fn csv(&self) -> String {
        let mut s = String::from("genus,op,median_ns,trials\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{}\n", r.genus, r.op, r.median_ns, r.trials));
        }
        s
    }

    pub fn slope_text(&self) -> String {
        self.slope.map_or_else(|| "n/a".into(), |s| format!("{s:.3}"))
    }
}

/// Least-squares slope of `y` on `x`; `None` with fewer than two distinct `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if points.len() < 2 || sxx <= f64::EPSILON {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Times one operation across genera on RepA. Curve generation and model
/// precomputation are excluded from the timings.
pub fn run_scale(opts: &ScaleOptions) -> Result<ScaleReport> {
    let field = PrimeField::new(opts.p)?;
    let mut rows = Vec::new();
    for &g in &opts.genera {
        let mut rng = Sampler::for_stream(field, opts.seed, g as u64);
        let gen = GenOptions { with_cubic: false, h: None };
        let bundle = gen_hyperelliptic(field, g, None, &gen, &mut rng)?;
        let model = build_model(&bundle, RepTag::A, &mut rng)?;
        let tag = if opts.op == ScaleOp::AddflipLarge { SizeTag::Large } else { SizeTag::Small };
        let mut inputs = Vec::new();
        for _ in 0..=opts.trials {
            let a = random_mumford(&bundle.curve, &mut rng)?;
            let b = random_mumford(&bundle.curve, &mut rng)?;
            inputs.push((
                mumford_to_point(&model, &bundle.curve, &a, tag, &mut rng)?,
                mumford_to_point(&model, &bundle.curve, &b, tag, &mut rng)?,
            ));
        }
        let mut times = Vec::with_capacity(opts.trials);
        let mut retries = RetryStats::default();
        // the first input pair is a warm-up run
        for (i, (x, y)) in inputs.iter().enumerate() {
            let mut r = Sampler::for_stream(field, opts.seed ^ (g as u64) << 32, i as u64);
            let t = Instant::now();
            match opts.op {
                ScaleOp::AddflipLarge => drop(model.addflip_large(x, y, &mut r)?),
                ScaleOp::AddflipSmall => drop(model.addflip_small(x, y, &mut r)?),
                ScaleOp::Equal => drop(model.equal_class(x, y, &mut r)?),
                ScaleOp::Flip => drop(model.flip_point(x, &mut r)?),
            }
            if i > 0 {
                times.push(t.elapsed());
                retries += r.stats;
            }
        }
        rows.push(ScaleRow {
            genus: g,
            op: opts.op,
            median_ns: median(&mut times).as_nanos(),
            trials: opts.trials,
            retries,
        });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.genus as f64).ln(), (r.median_ns.max(1) as f64).ln())).collect();
    Ok(ScaleReport { slope: fit_slope(&pts), rows })
}
