//! Seeded verification suites. Trials run in parallel; reports come back in
//! job order, so output depends only on the suite, its parameters and the seed.

use rayon::prelude::*;
use reglab_core::brauer::{dihedral_relation_in, relation_lattice, BrauerCheck, BrauerRelation};
use reglab_core::cohomology::routes::{h1_cocycles, h2_dimension_shift};
use reglab_core::cohomology::{herbrand, rosen_valuation, tate, valuation};
use reglab_core::exactla::{random_hom, GroupHom, IntMatrix, Lattice, QIndex};
use reglab_core::gmodules::{
    direct_sum, finite_dual, permutation_module, random_module, random_module_hom, random_module_with,
    tensor_product, torsion_decomposition, GModule, Profile, RandomParams,
};
use reglab_core::groups::{FiniteGroup, Subgroup};
use reglab_core::regulator::{
    build_phi, prime_divisors, rc_pairing, rc_qindex, verify_identity, Identity, IdentityInputs,
};
use reglab_core::{BigRational, Int};

use crate::error::CliError;
use crate::format::{module_digest, module_value};
use crate::report::{Report, Status};

pub const SUITES: [&str; 7] = ["dihedral", "duality", "finite", "bounds", "cohomology-oracles", "brauer", "qindex"];

#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub q: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub limit_cols: usize,
}

impl SuiteParams {
    pub fn new(seed: u64) -> Self {
        SuiteParams { q: None, trials: None, seed, limit_cols: crate::DEFAULT_LIMIT_COLS }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteRun {
    pub suite: String,
    pub q: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub reports: Vec<Report>,
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn label_tag(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Per-trial seed from the suite seed, the group label and the trial index.
pub fn trial_seed(seed: u64, label: &str, trial: usize) -> u64 {
    splitmix64(splitmix64(seed ^ label_tag(label)) ^ trial as u64)
}

struct Job {
    label: String,
    group: Option<FiniteGroup>,
    trial: usize,
    seed: u64,
}

struct Ctx<'a> {
    job: &'a Job,
    module: Option<&'a GModule>,
    digest: Option<String>,
}

impl<'a> Ctx<'a> {
    fn new(job: &'a Job, module: Option<&'a GModule>) -> Self {
        Ctx { job, module, digest: module.map(module_digest) }
    }

    fn finish(&self, mut r: Report) -> Report {
        r.seed = self.job.seed;
        r = r.with_trial(self.job.trial).param("group", self.job.label.as_str());
        if let Some(d) = &self.digest {
            r.module_digest = Some(d.clone());
        }
        if r.fatal.is_some() {
            r.fatal = Some(serde_json::json!({
                "check": r.check,
                "message": r.message,
                "group": self.job.label,
                "trial": self.job.trial,
                "seed": self.job.seed,
                "module": self.module.map(module_value),
            }));
        }
        r
    }

    fn identity(&self, id: Identity, inputs: &IdentityInputs) -> Report {
        let r = match verify_identity(id, inputs) {
            Ok(r) => Report::from_identity(&r, self.job.seed),
            Err(e) => Report::from_error(id.name(), &e, self.job.seed),
        };
        self.finish(r)
    }

    fn error(&self, check: &str, e: &reglab_core::Error) -> Report {
        self.finish(Report::from_error(check, e, self.job.seed))
    }
}

fn profile_for(trial: usize) -> Profile {
    [Profile::TorsionFree, Profile::Finite, Profile::Mixed][trial % 3]
}

fn dihedral(q: usize) -> Result<FiniteGroup, CliError> {
    Ok(FiniteGroup::dihedral(q)?)
}

fn v4() -> FiniteGroup {
    let c2 = FiniteGroup::cyclic(2).expect("C2");
    FiniteGroup::product(&[c2.clone(), c2]).expect("V4")
}

fn check_width(m: &GModule, limit: usize) -> Result<(), CliError> {
    let width = m.ambient_rank() * m.group().order();
    if width > limit {
        return Err(CliError::Limit(format!("matrix width {width} exceeds {limit}")));
    }
    Ok(())
}

fn dihedral_jobs(qs: &[usize], trials: usize, seed: u64) -> Result<Vec<Job>, CliError> {
    let mut jobs = Vec::new();
    for &q in qs {
        let g = dihedral(q)?;
        let label = format!("D{q}");
        for t in 0..trials {
            jobs.push(Job { label: label.clone(), group: Some(g.clone()), trial: t, seed: trial_seed(seed, &label, t) });
        }
    }
    Ok(jobs)
}

fn run_jobs<F>(jobs: &[Job], f: F) -> Result<Vec<Report>, CliError>
where
    F: Fn(&Job) -> Result<Vec<Report>, CliError> + Sync + Send,
{
    let results: Vec<Result<Vec<Report>, CliError>> = jobs.par_iter().map(f).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn module_or_report(job: &Job, profile: Profile, check: &str, limit: usize) -> Result<Result<GModule, Report>, CliError> {
    let g = job.group.as_ref().expect("group job");
    match random_module(g, profile, job.seed) {
        Ok(m) => {
            check_width(&m, limit)?;
            Ok(Ok(m))
        }
        Err(e) => Ok(Err(Ctx::new(job, None).error(check, &e))),
    }
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteRun, CliError> {
    let default_q: Vec<usize> = match name {
        "bounds" => vec![3, 5, 9, 15],
        _ => vec![3, 5],
    };
    let qs = params.q.clone().unwrap_or(default_q);
    let trials = params.trials.unwrap_or(if name == "qindex" { 200 } else { 5 });
    let seed = params.seed;
    let limit = params.limit_cols;
    let reports = match name {
        "dihedral" => run_jobs(&dihedral_jobs(&qs, trials, seed)?, |job| dihedral_trial(job, limit))?,
        "duality" => {
            let mut jobs = Vec::new();
            let mut groups = vec![("V4".to_string(), v4())];
            for &q in &qs {
                groups.push((format!("D{q}"), dihedral(q)?));
            }
            for (label, g) in groups {
                for t in 0..trials {
                    jobs.push(Job { label: label.clone(), group: Some(g.clone()), trial: t, seed: trial_seed(seed, &label, t) });
                }
            }
            run_jobs(&jobs, |job| duality_trial(job, limit))?
        }
        "finite" => run_jobs(&dihedral_jobs(&qs, trials, seed)?, |job| finite_trial(job, limit))?,
        "bounds" => run_jobs(&dihedral_jobs(&qs, trials, seed)?, |job| bounds_trial(job, limit))?,
        "cohomology-oracles" => {
            let mut groups = vec![
                ("C4".to_string(), FiniteGroup::cyclic(4)?),
                ("C6".to_string(), FiniteGroup::cyclic(6)?),
                ("V4".to_string(), v4()),
            ];
            for &q in &qs {
                groups.push((format!("D{q}"), dihedral(q)?));
            }
            let mut jobs = Vec::new();
            for (label, g) in groups {
                for t in 0..trials {
                    jobs.push(Job { label: label.clone(), group: Some(g.clone()), trial: t, seed: trial_seed(seed, &label, t) });
                }
            }
            run_jobs(&jobs, |job| cohomology_trial(job, limit))?
        }
        "brauer" => {
            let c = |n| FiniteGroup::cyclic(n);
            let mut groups = vec![
                ("C2".to_string(), c(2)?),
                ("C3".to_string(), c(3)?),
                ("C4".to_string(), c(4)?),
                ("C5".to_string(), c(5)?),
                ("C6".to_string(), c(6)?),
                ("V4".to_string(), v4()),
                ("C2xC2xC2".to_string(), FiniteGroup::product(&[c(2)?, c(2)?, c(2)?])?),
                ("C3xC3".to_string(), FiniteGroup::product(&[c(3)?, c(3)?])?),
            ];
            for &q in &qs {
                groups.push((format!("D{q}"), dihedral(q)?));
            }
            let jobs: Vec<Job> = groups
                .into_iter()
                .map(|(label, g)| Job { seed: trial_seed(seed, &label, 0), label, group: Some(g), trial: 0 })
                .collect();
            run_jobs(&jobs, brauer_job)?
        }
        "qindex" => {
            let jobs: Vec<Job> = (0..trials)
                .map(|t| Job { label: "Z".to_string(), group: None, trial: t, seed: trial_seed(seed, "qindex", t) })
                .collect();
            run_jobs(&jobs, qindex_trial)?
        }
        other => {
            return Err(CliError::Input(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", "))))
        }
    };
    Ok(SuiteRun { suite: name.to_string(), q: qs, trials, seed, reports })
}

fn dihedral_trial(job: &Job, limit: usize) -> Result<Vec<Report>, CliError> {
    let g = job.group.as_ref().expect("dihedral job");
    let m = match module_or_report(job, profile_for(job.trial), "DIHEDRAL_MAIN", limit)? {
        Ok(m) => m,
        Err(r) => return Ok(vec![r]),
    };
    let ctx = Ctx::new(job, Some(&m));
    let mut out = Vec::new();
    let inputs = IdentityInputs { seed: job.seed, ..IdentityInputs::new(m.clone()) };
    out.push(ctx.identity(Identity::DihedralMain, &inputs).param("profile", profile_for(job.trial).name()));
    let mut dcf = inputs.clone();
    match random_module_hom(&m, job.seed ^ 1) {
        Ok(f) => dcf.hom = Some(f),
        Err(e) => out.push(ctx.error("DCF", &e)),
    }
    out.push(ctx.identity(Identity::Dcf, &dcf));
    out.push(ctx.identity(Identity::Bounds, &inputs));
    let tors = torsion_decomposition(&m).tors;
    let tctx = Ctx::new(job, Some(&tors));
    out.push(tctx.identity(Identity::FiniteDihedral, &IdentityInputs { seed: job.seed, ..IdentityInputs::new(tors.clone()) }));
    out.push(phi_seed_check(&ctx, &m, g));
    out.push(rczs_check(&ctx, g));
    Ok(out)
}

/// The q-index route under two seeds for `φ` against the pairing route.
fn phi_seed_check(ctx: &Ctx, m: &GModule, g: &FiniteGroup) -> Report {
    let theta = match dihedral_relation_in(g) {
        Ok(t) => t,
        Err(e) => return ctx.error("PHI_SEED", &e),
    };
    let run = || -> reglab_core::Result<Report> {
        let a = rc_pairing(m, &theta)?;
        let s1 = ctx.job.seed;
        let s2 = splitmix64(s1);
        let b = rc_qindex(m, &build_phi(&theta, s1)?)?;
        let c = rc_qindex(m, &build_phi(&theta, s2)?)?;
        let mut r = Report::compare("PHI_SEED", &b.value, &c.value, s1)
            .detail("pairing", crate::report::render_rational(&a.value))
            .detail("phi_seeds", format!("{s1},{s2}"));
        if a != b {
            r.status = Status::Error;
            r.message = Some(format!("pairing route {} differs from q-index route {}", a.value, b.value));
            r.fatal = Some(serde_json::Value::Null);
        }
        Ok(r)
    };
    match run() {
        Ok(r) => ctx.finish(r),
        Err(e) => ctx.error("PHI_SEED", &e),
    }
}

fn rczs_check(ctx: &Ctx, g: &FiniteGroup) -> Report {
    let subs = match g.all_subgroups() {
        Ok(s) => s,
        Err(e) => return ctx.error("RCZS", &e),
    };
    let mut x = ctx.job.seed;
    let mut next = || {
        x = splitmix64(x);
        x
    };
    let k = 1 + (next() % 4) as usize;
    let family: Vec<Subgroup> = (0..k).map(|_| subs[(next() % subs.len() as u64) as usize].clone()).collect();
    let desc: Vec<Vec<usize>> = family.iter().map(|h| h.elements().to_vec()).collect();
    let z = GModule::trivial(g, 1);
    let inputs = IdentityInputs { family: Some(family), seed: ctx.job.seed, ..IdentityInputs::new(z) };
    let r = match verify_identity(Identity::Rczs, &inputs) {
        Ok(r) => Report::from_identity(&r, ctx.job.seed),
        Err(e) => Report::from_error("RCZS", &e, ctx.job.seed),
    };
    let mut r = ctx.finish(r).param("family", serde_json::to_value(desc).expect("serializable"));
    r.module_digest = None;
    r
}

fn relation_for(g: &FiniteGroup) -> reglab_core::Result<BrauerRelation> {
    if g.dihedral_generators().is_some() {
        dihedral_relation_in(g)
    } else {
        relation_lattice(g)?
            .into_iter()
            .next()
            .ok_or_else(|| reglab_core::Error::InvalidArgument("group has no Brauer relations".into()))
    }
}

fn duality_trial(job: &Job, limit: usize) -> Result<Vec<Report>, CliError> {
    let g = job.group.as_ref().expect("group job");
    let theta = match relation_for(g) {
        Ok(t) => t,
        Err(e) => return Ok(vec![Ctx::new(job, None).error("DUAL1", &e)]),
    };
    let mut out = Vec::new();
    for (profile, id) in [(Profile::TorsionFree, Identity::Dual1), (Profile::Finite, Identity::FiniteDual)] {
        let m = match module_or_report(job, profile, id.name(), limit)? {
            Ok(m) => m,
            Err(r) => {
                out.push(r);
                continue;
            }
        };
        let ctx = Ctx::new(job, Some(&m));
        let inputs = IdentityInputs { relation: Some(theta.clone()), seed: job.seed, ..IdentityInputs::new(m.clone()) };
        out.push(ctx.identity(id, &inputs).param("profile", profile.name()));
    }
    Ok(out)
}

fn finite_trial(job: &Job, limit: usize) -> Result<Vec<Report>, CliError> {
    let m = match module_or_report(job, Profile::Finite, "FINITE_DUAL", limit)? {
        Ok(m) => m,
        Err(r) => return Ok(vec![r]),
    };
    let ctx = Ctx::new(job, Some(&m));
    let inputs = IdentityInputs { seed: job.seed, ..IdentityInputs::new(m.clone()) };
    let mut out = vec![ctx.identity(Identity::FiniteDual, &inputs), ctx.identity(Identity::FiniteDihedral, &inputs)];
    let sd = finite_dual(&m).and_then(|d| direct_sum(&[&m, &d]));
    match sd {
        Ok(sd) => {
            let sctx = Ctx::new(job, Some(&sd));
            let inputs = IdentityInputs { seed: job.seed, ..IdentityInputs::new(sd.clone()) };
            let r = match verify_identity(Identity::FiniteDihedral, &inputs) {
                Ok(rep) => {
                    let one = BigRational::from_integer(1.into());
                    let c = rep.regulator.as_ref().map(|c| c.value.clone()).unwrap_or_else(|| one.clone());
                    let ok = rep.pass && rep.lhs == one && c == one;
                    let mut r = Report::from_identity(&rep, job.seed);
                    r.check = "FINITE_SELF_DUAL".into();
                    r.status = if ok { Status::Pass } else { Status::Fail };
                    r.rhs = Some(crate::report::render_rational(&one));
                    r
                }
                Err(e) => Report::from_error("FINITE_SELF_DUAL", &e, job.seed),
            };
            out.push(sctx.finish(r));
        }
        Err(e) => out.push(ctx.error("FINITE_SELF_DUAL", &e)),
    }
    Ok(out)
}

fn bounds_trial(job: &Job, limit: usize) -> Result<Vec<Report>, CliError> {
    let g = job.group.as_ref().expect("dihedral job");
    let q = g.dihedral_generators().expect("dihedral").q;
    let m = match module_or_report(job, profile_for(job.trial), "BOUNDS", limit)? {
        Ok(m) => m,
        Err(r) => return Ok(vec![r]),
    };
    let ctx = Ctx::new(job, Some(&m));
    let mut out = Vec::new();
    for l in prime_divisors(q as u64) {
        let inputs = IdentityInputs { prime: Some(l), seed: job.seed, ..IdentityInputs::new(m.clone()) };
        out.push(ctx.identity(Identity::Bounds, &inputs).param("prime", l));
    }
    let (rho, _) = g.dihedral_subgroups().expect("dihedral");
    for l in prime_divisors(q as u64) {
        let r = rosen_valuation(&m, &rho, l).and_then(|a| Ok((a, valuation(&herbrand(&m, &rho)?, l))));
        out.push(match r {
            Ok((a, b)) => ctx.finish(Report::compare("ROSEN", &int(a), &int(b), job.seed).param("prime", l)),
            Err(e) => ctx.error("ROSEN", &e),
        });
    }
    Ok(out)
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

fn order_product(v: &[Vec<Int>]) -> BigRational {
    let mut acc = BigRational::from_integer(1.into());
    for ds in v {
        for d in ds {
            acc *= BigRational::from_integer(d.to_bigint());
        }
    }
    acc
}

fn cohomology_trial(job: &Job, limit: usize) -> Result<Vec<Report>, CliError> {
    let g = job.group.as_ref().expect("group job");
    let subs = g.all_subgroups()?;
    let mut x = job.seed;
    let mut next = || {
        x = splitmix64(x);
        x
    };
    let h = subs[(next() % subs.len() as u64) as usize].clone();
    let cyclic: Vec<&Subgroup> = subs.iter().filter(|s| g.cyclic_generator(s).is_some()).collect();
    let c = cyclic[(next() % cyclic.len() as u64) as usize].clone();
    let p = [2i64, 3, 5][(next() % 3) as usize];
    let mut params = RandomParams::for_group(g);
    params.max_ambient_rank = params.max_ambient_rank.min(8);
    let mut small = params.clone();
    small.max_ambient_rank = 4;
    let m = match random_module_with(g, profile_for(job.trial), &small, job.seed) {
        Ok(m) => m,
        Err(e) => return Ok(vec![Ctx::new(job, None).error("SHAPIRO", &e)]),
    };
    check_width(&m, limit)?;
    let ctx = Ctx::new(job, Some(&m));
    let hdesc = serde_json::to_value(h.elements()).expect("serializable");
    let cdesc = serde_json::to_value(c.elements()).expect("serializable");
    let mut out = Vec::new();

    let divs = |m: &GModule, h: &Subgroup, i: i64| tate(m, h, i).map(|t| t.divisors);
    let shapiro = || -> reglab_core::Result<Report> {
        let induced = tensor_product(&permutation_module(g, &h)?, &m)?;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in -1..=2 {
            a.push(divs(&induced, &g.whole(), i)?);
            b.push(divs(&m, &h, i)?);
        }
        let ok = a == b;
        Ok(Report::from_bool("SHAPIRO", ok, job.seed)
            .with_sides(&order_product(&a), &order_product(&b))
            .detail("induced", format!("{a:?}"))
            .detail("restricted", format!("{b:?}")))
    };
    out.push(finish_or(&ctx, "SHAPIRO", shapiro()).param("subgroup", hdesc.clone()));

    let periodicity = || -> reglab_core::Result<Report> {
        let mut ok = true;
        let mut shown = Vec::new();
        for i in [-1i64, 0] {
            let lo = divs(&m, &c, i)?;
            let hi = divs(&m, &c, i + 2)?;
            ok &= lo == hi;
            shown.push(format!("{i}:{lo:?}|{}:{hi:?}", i + 2));
        }
        Ok(Report::from_bool("PERIODICITY", ok, job.seed).detail("degrees", shown.join(" ")))
    };
    out.push(finish_or(&ctx, "PERIODICITY", periodicity()).param("subgroup", cdesc));

    let modp = || -> reglab_core::Result<Report> {
        let tf = random_module_with(g, Profile::TorsionFree, &params, job.seed ^ 2)?;
        let lat = Lattice::scaled_full(tf.ambient_rank(), &Int::from(p)).sum(tf.relations());
        let e = tf.quotient(&lat)?;
        let (d0, dm1) = mod_p_dims(&tf, &h, p);
        let got0 = p_rank(&tate(&e, &h, 0)?.order, p);
        let gotm1 = p_rank(&tate(&e, &h, -1)?.order, p);
        let ok = got0 == Some(d0) && gotm1 == Some(dm1);
        Ok(Report::from_bool("MODP", ok, job.seed)
            .detail("prime", p)
            .detail("oracle", format!("{d0},{dm1}"))
            .detail("computed", format!("{got0:?},{gotm1:?}")))
    };
    out.push(finish_or(&ctx, "MODP", modp()).param("subgroup", hdesc.clone()));

    let free = || -> reglab_core::Result<Report> {
        let reg = GModule::regular(g);
        let mut ok = true;
        for i in -1..=2 {
            ok &= tate(&reg, &h, i)?.order.is_one();
        }
        Ok(Report::from_bool("FREE", ok, job.seed))
    };
    out.push(finish_or(&ctx, "FREE", free()).param("subgroup", hdesc.clone()));

    let routes = || -> reglab_core::Result<Report> {
        let a1 = h1_cocycles(&m, &h)?;
        let b1 = divs(&m, &h, 1)?;
        let a2 = h2_dimension_shift(&m, &h)?;
        let b2 = divs(&m, &h, 2)?;
        Ok(Report::from_bool("ROUTES", a1 == b1 && a2 == b2, job.seed)
            .detail("h1", format!("{a1:?} vs {b1:?}"))
            .detail("h2", format!("{a2:?} vs {b2:?}")))
    };
    out.push(finish_or(&ctx, "ROUTES", routes()).param("subgroup", hdesc));
    Ok(out)
}

fn finish_or(ctx: &Ctx, check: &str, r: reglab_core::Result<Report>) -> Report {
    match r {
        Ok(r) => ctx.finish(r),
        Err(e) => ctx.error(check, &e),
    }
}

fn rank_mod_p(rows: Vec<Vec<i64>>, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = rows.into_iter().map(|r| r.into_iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = (1..p).find(|x| x * a[rank][c] % p == 1).expect("p is prime");
        for x in a[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..cols {
                    a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn residues(m: &IntMatrix, p: i64) -> Vec<Vec<i64>> {
    let pp = Int::from(p);
    m.to_rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.mod_floor_pos(&pp).to_i64().expect("residue")).collect())
        .collect()
}

/// `(dim Ĥ⁰, dim Ĥ⁻¹)` of `M/pM` for a lattice `M`, by linear algebra over `F_p`.
fn mod_p_dims(m: &GModule, h: &Subgroup, p: i64) -> (usize, usize) {
    let n = m.ambient_rank();
    let mut stacked = Vec::new();
    let mut stacked_t = Vec::new();
    for &x in h.elements() {
        let d = m.action(x).minus_identity();
        stacked.extend(residues(&d, p));
        stacked_t.extend(residues(&d.transpose(), p));
    }
    // fixed points: kernel of all (h - 1); augmentation: span of their images
    let fixed = n - rank_mod_p(stacked, p);
    let aug = rank_mod_p(stacked_t, p);
    let norm = rank_mod_p(residues(&m.norm_matrix(h), p), p);
    (fixed - norm, n - norm - aug)
}

fn p_rank(order: &Int, p: i64) -> Option<usize> {
    let pp = Int::from(p);
    let mut x = order.clone();
    let mut k = 0;
    while !x.is_one() {
        if !pp.divides(&x) {
            return None;
        }
        x = x.div_exact(&pp);
        k += 1;
    }
    Some(k)
}

fn brauer_job(job: &Job) -> Result<Vec<Report>, CliError> {
    let g = job.group.as_ref().expect("group job");
    let ctx = Ctx::new(job, None);
    let classes = g.subgroup_classes()?;
    let cyclic = classes.iter().filter(|c| g.cyclic_generator(&c.representative).is_some()).count();
    let basis = match relation_lattice(g) {
        Ok(b) => b,
        Err(e) => return Ok(vec![ctx.error("BRAUER_RANK", &e)]),
    };
    let mut out = vec![ctx.finish(
        Report::compare("BRAUER_RANK", &int(basis.len() as i64), &int((classes.len() - cyclic) as i64), job.seed)
            .detail("subgroup_classes", classes.len())
            .detail("cyclic_classes", cyclic),
    )];
    let bad = basis.iter().position(|r| r.check() != BrauerCheck::Relation);
    let mut r = Report::from_bool("BRAUER_BASIS", bad.is_none(), job.seed).detail("rank", basis.len());
    if let Some(i) = bad {
        r = r.detail("failing_vector", i);
    }
    out.push(ctx.finish(r));
    let coeffs = |r: &BrauerRelation| -> Vec<i64> {
        classes.iter().map(|c| r.coefficient(&c.representative)).collect()
    };
    if job.label == "V4" {
        let v: Vec<Vec<i64>> = basis.iter().map(coeffs).collect();
        let ok = v == [vec![1, -1, -1, -1, 2]] || v == [vec![-1, 1, 1, 1, -2]];
        out.push(ctx.finish(Report::from_bool("V4_GENERATOR", ok, job.seed).detail("basis", format!("{v:?}"))));
    }
    if g.dihedral_generators().is_some() {
        let theta = dihedral_relation_in(g)?;
        let ok = basis.len() == 1 && (basis[0] == theta || basis[0] == theta.negate());
        out.push(ctx.finish(
            Report::from_bool("THETA_D", ok, job.seed).detail("basis", format!("{:?}", basis.iter().map(coeffs).collect::<Vec<_>>())),
        ));
    }
    Ok(out)
}

fn q_of(f: &GroupHom) -> Option<BigRational> {
    match f.qindex() {
        QIndex::Finite(x) => Some(x),
        QIndex::Infinite => None,
    }
}

fn qindex_trial(job: &Job) -> Result<Vec<Report>, CliError> {
    let ctx = Ctx::new(job, None);
    let g = random_hom(job.seed, None);
    let f = random_hom(splitmix64(job.seed), Some(&g.source));
    let run = || -> reglab_core::Result<Vec<Report>> {
        let missing = || reglab_core::Error::InfiniteQIndex("random map".into());
        let qf = q_of(&f).ok_or_else(missing)?;
        let qg = q_of(&g).ok_or_else(missing)?;
        let qgf = q_of(&f.compose(&g)?).ok_or_else(missing)?;
        let t = q_of(&f.torsion_part()?).ok_or_else(missing)?;
        let free = q_of(&f.free_part()).ok_or_else(missing)?;
        let dual = q_of(&f.dual()).ok_or_else(missing)?;
        Ok(vec![
            Report::compare("QINDEX_MULT", &qgf, &(&qg * &qf), job.seed),
            Report::compare("QINDEX_TORS_SPLIT", &qf, &(&t * &free), job.seed),
            Report::compare("QINDEX_DUAL_SPLIT", &qf, &(&dual * &t), job.seed),
        ])
    };
    Ok(match run() {
        Ok(v) => v.into_iter().map(|r| ctx.finish(r)).collect(),
        Err(e) => vec![ctx.error("QINDEX_MULT", &e)],
    })
}
