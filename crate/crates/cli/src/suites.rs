//! Self-contained check suites shared by the subcommands and `reproduce`.

use flopkit::detgeo::{
    classify_line, lines_through_instance_point, make_instance_with, project_from_node, random_line_param,
    random_smooth_point, special_line, DeterminantalInstance, LineKind,
};
use flopkit::fourfold::{
    check_involution, extend_to_fourfold, sample_line, sample_line_through, scroll_incidence_report, tolerance,
    CubicFourfold,
};
use flopkit::lattice::{
    apply_isometry, divisibility, eval_form, orbit_classes, represents, transfer_k_to_j, Isometry, LatticeClass,
    OrbitKind, Representation, DEFAULT_SEARCH_BOUND,
};
use flopkit::par::Exec;
use flopkit::poly::int;
use flopkit::schubert::{fano_degree, line_family_degrees};
use flopkit::segre3::{identity_report, jmap_report, random_s_circ_point, SegreVariant};
use flopkit::surf27::{disjoint_sextuples, double_six_involution, double_sixes, line_classes, PicAutomorphism};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::report::RunReport;

/// Settings shared by every suite.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub seed: u64,
    pub precision: usize,
    pub exec: Exec,
}

/// Per-instance sample counts.
#[derive(Clone, Copy, Debug)]
pub struct Samples {
    pub special_lines: usize,
    pub points: usize,
    pub s_points: usize,
    pub fourfold_lines: usize,
    pub scroll_pairs: usize,
}

impl Default for Samples {
    fn default() -> Self {
        Samples { special_lines: 3, points: 5, s_points: 5, fourfold_lines: 10, scroll_pairs: 10 }
    }
}

/// Derived stream for one consumer of the seed.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sub-seed for numerical routines that take a `u64`.
pub fn sub_seed(seed: u64, stream: u64, j: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(stream << 32).wrapping_add(j as u64)
}

const STREAM_TRANSFER: u64 = 1;
const STREAM_SPECIAL: u64 = 2;
const STREAM_POINTS: u64 = 3;
const STREAM_S_POINTS: u64 = 4;
const STREAM_LINES: u64 = 5;
const STREAM_SCROLL: u64 = 6;

/// Residual bound for numerically computed lines: `10⁻⁴⁰` at 256 bits.
pub fn residual_bound(precision: usize) -> f64 {
    10f64.powf(-40.0 * precision as f64 / 256.0)
}

fn pairs(classes: &[LatticeClass]) -> Vec<[String; 2]> {
    classes.iter().map(|c| [c.x.to_string(), c.y.to_string()]).collect()
}

fn g_pairings(classes: &[LatticeClass]) -> Vec<i64> {
    classes.iter().map(|c| eval_form(&LatticeClass::g(), c).ok().and_then(|v| v.to_i64()).unwrap_or(i64::MIN)).collect()
}

pub fn lattice_tables(ctx: Ctx, count: usize) -> CliResult<RunReport> {
    let mut r = RunReport::new("lattice tables", None, ctx.precision);
    let rho = orbit_classes(OrbitKind::Rho, count.max(3));
    let rho_dual = orbit_classes(OrbitKind::RhoDual, count.max(3));
    let alpha = orbit_classes(OrbitKind::Alpha, count.max(2));
    let rho_g = g_pairings(&rho[..3]);
    let alpha_g = g_pairings(&alpha[..2]);
    r.check_detail("rho_g_pairings", rho_g == [6, 18, 78], format!("{rho_g:?}"));
    r.check_detail("alpha_g_pairings", alpha_g == [24, 48], format!("{alpha_g:?}"));
    r.check_detail("rho3", rho[2] == LatticeClass::j12(29, -16), rho[2].to_string());
    r.check_detail("alpha2", alpha[1] == LatticeClass::j12(17, -9), alpha[1].to_string());
    r.check("r3_alpha1_is_alpha2", apply_isometry(&Isometry::r3(), &alpha[0])? == alpha[1]);
    let r1 = Isometry::r1();
    let mut swapped = true;
    for (a, b) in rho.iter().zip(&rho_dual) {
        swapped &= apply_isometry(&r1, a)? == *b;
    }
    r.check_detail("r1_swaps_rho_and_dual", swapped, format!("i <= {}", rho.len()));
    let squares_ok = rho.iter().chain(&rho_dual).all(|c| c.square() == (-10).into() && divisibility(c) == 2.into());
    r.check("rho_are_minus_ten_classes", squares_ok);
    r.data("rho", pairs(&rho))?;
    r.data("rho_dual", pairs(&rho_dual))?;
    r.data("alpha", pairs(&alpha))?;
    r.line(format!("rho: {}", rho.iter().take(3).map(ToString::to_string).collect::<Vec<_>>().join(", ")));
    r.line(format!("alpha: {}", alpha.iter().take(2).map(ToString::to_string).collect::<Vec<_>>().join(", ")));
    Ok(r.finish())
}

pub fn represent_suite(ctx: Ctx) -> CliResult<RunReport> {
    let mut r = RunReport::new("lattice represent", None, ctx.precision);
    for n in [-2, 0] {
        let rep = represents(n, DEFAULT_SEARCH_BOUND);
        r.check(format!("certificate_{n}"), matches!(rep, Representation::NoneCertificate { .. }));
        r.data(&format!("n{n}"), &rep)?;
    }
    let rep = represents(-10, DEFAULT_SEARCH_BOUND);
    let ok = match &rep {
        Representation::Witness { class, divisibility } => class.square() == (-10).into() && divisibility == "2",
        _ => false,
    };
    r.check("witness_minus_ten", ok);
    r.data("n-10", &rep)?;
    Ok(r.finish())
}

pub fn transfer_suite(ctx: Ctx, trials: usize) -> CliResult<RunReport> {
    let mut r = RunReport::new("lattice transfer", Some(ctx.seed), ctx.precision);
    let t = transfer_k_to_j([[3, 3], [3, 7]])?;
    r.check("k12_to_j12", t.gram == [[6, 6], [6, 2]]);
    r.check("det_minus_24", t.det == -24);
    let mut rng = rng_for(ctx.seed, STREAM_TRANSFER);
    let mut identity = true;
    for _ in 0..trials {
        let (a, tt) = (rng.gen_range(-60..=60i64), rng.gen_range(-60..=60i64));
        let out = transfer_k_to_j([[3, a], [a, tt]])?;
        identity &= out.det == -2 * (3 * tt - a * a);
    }
    r.check_detail("det_identity", identity, format!("{trials} random K"));
    r.data("k12", &t)?;
    Ok(r.finish())
}

pub fn schubert_suite(ctx: Ctx) -> CliResult<RunReport> {
    let mut r = RunReport::new("schubert deg-fano", None, ctx.precision);
    let d4 = fano_degree(4)?;
    let d5 = fano_degree(5)?;
    r.check_detail("lines_on_cubic_surface", d4.degree == 27, d4.degree.to_string());
    r.check_detail("fano_surface_degree", d5.degree == 45, d5.degree.to_string());
    let parts = line_family_degrees();
    let split: Vec<i64> = parts.iter().map(|p| p.1).collect();
    r.check_detail("family_split", split == [9, 27, 9] && split.iter().sum::<i64>() == d5.degree, format!("{split:?}"));
    r.data("ambient4", &d4)?;
    r.data("ambient5", &d5)?;
    r.data("families", parts)?;
    Ok(r.finish())
}

pub fn surf27_suite(ctx: Ctx) -> CliResult<RunReport> {
    let mut r = RunReport::new("surf27 enumerate", None, ctx.precision);
    let lines = line_classes();
    let sextuples = disjoint_sextuples();
    let sixes = double_sixes();
    r.check("line_classes_27", lines.len() == 27);
    r.check("ordered_sextuples_72", sextuples.len() == 72);
    r.check("double_sixes_36", sixes.len() == 36);
    let mut involution = true;
    for s in &sextuples {
        let inv = double_six_involution(s)?;
        involution &= inv.is_isometry() && inv.fixes_canonical() && inv.compose(&inv) == PicAutomorphism::identity();
        involution &= inv != PicAutomorphism::identity();
    }
    r.check("involution_order_two_isometry_fixing_k", involution);
    Ok(r.finish())
}

pub fn segre_identity_suite(ctx: Ctx, variants: &[SegreVariant]) -> CliResult<RunReport> {
    let mut r = RunReport::new("segre identity", None, ctx.precision);
    let reports: Vec<_> = variants.iter().map(|&v| identity_report(v)).collect();
    for rep in &reports {
        let name = serde_json::to_value(rep.variant)?.as_str().unwrap_or("variant").to_string();
        r.check_detail(
            format!("{name}_relation"),
            rep.relation_holds,
            format!("{} residual terms", rep.residual_terms),
        );
        r.check(format!("{name}_double_at_standard_points"), rep.double_at_standard_points);
    }
    r.data("variants", &reports)?;
    Ok(r.finish())
}

/// Both variants: the cyclic one satisfies the relation and the printed one does not.
pub fn segre_suite(ctx: Ctx) -> CliResult<RunReport> {
    let mut r = RunReport::new("segre identity", None, ctx.precision);
    let printed = identity_report(SegreVariant::Printed);
    let cyclic = identity_report(SegreVariant::Cyclic);
    r.check("exactly_one_variant", printed.relation_holds != cyclic.relation_holds);
    r.check("cyclic_variant_holds", cyclic.relation_holds);
    r.check("forms_double_at_standard_points", cyclic.double_at_standard_points);
    r.data("variants", [&printed, &cyclic])?;
    Ok(r.finish())
}

pub fn build_instance(ctx: Ctx) -> CliResult<DeterminantalInstance> {
    Ok(make_instance_with(ctx.seed, ctx.exec)?)
}

pub fn instance_suite(ctx: Ctx, inst: &DeterminantalInstance, samples: Samples) -> CliResult<RunReport> {
    let mut r = RunReport::new("instance check", Some(inst.seed), ctx.precision);
    let c = inst.check(ctx.exec)?;
    r.check("dimensions", c.dims == (4, 5));
    r.check("orthogonal", c.orthogonal);
    r.check("determinantal_cubics", c.cubic_y_is_determinant && c.cubic_s_is_determinant);
    r.check_detail(
        "six_rank_one_nodes",
        c.node_count == 6 && c.nodes_rank_one && c.nodes_singular,
        c.node_count.to_string(),
    );
    r.check("linear_general_position", c.linear_general_position);
    r.check("odp_at_every_node", c.nodes_odp.iter().all(|&b| b) && c.nodes_odp.len() == 6);
    r.check("node_images_match", c.q_points_match);
    r.check("s_smoothness_certificate", c.s_smooth);
    let mut rng = rng_for(inst.seed, STREAM_SPECIAL);
    let mut lines = Vec::new();
    for kind in LineKind::ALL {
        let mut ok = true;
        for _ in 0..samples.special_lines {
            let param = random_line_param(inst, kind, &mut rng)?;
            let line = special_line(inst, kind, &param)?;
            ok &= line.lies_on(&inst.cubic_y)? && classify_line(inst, &line)? == kind.family();
            lines.push(line);
        }
        let name = serde_json::to_value(kind)?.as_str().unwrap_or("kind").to_string();
        r.check(format!("special_lines_{name}"), ok);
    }
    r.data("check", &c)?;
    r.data("special_lines", &lines)?;
    r.line(format!("nodes: {}", inst.nodes.iter().map(|p| fmt_vec(p)).collect::<Vec<_>>().join(" ")));
    Ok(r.finish())
}

pub fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(":"))
}

/// `nodes` are 0-based indices.
pub fn project_suite(ctx: Ctx, inst: &DeterminantalInstance, nodes: &[usize]) -> CliResult<RunReport> {
    let mut r = RunReport::new("instance project", Some(inst.seed), ctx.precision);
    let projections = nodes.iter().map(|&i| project_from_node(inst, i)).collect::<Result<Vec<_>, _>>()?;
    for p in &projections {
        let n = p.node + 1;
        r.check(format!("node{n}_a2_rank_four"), p.a2_rank == 4);
        r.check(format!("node{n}_images_on_c6"), p.images_on_c6 && p.distinct);
        r.check_detail(
            format!("node{n}_images_singular"),
            p.jacobian_ranks.iter().all(|&k| k <= 1),
            format!("{:?}", p.jacobian_ranks),
        );
        r.check(format!("node{n}_no_common_ruling"), p.no_common_ruling);
        r.check(format!("node{n}_no_four_coplanar"), p.no_four_coplanar);
    }
    r.data("projections", &projections)?;
    Ok(r.finish())
}

/// Point `j` (0-based) of the smooth-point stream of an instance.
pub fn smooth_point(inst: &DeterminantalInstance, j: usize) -> CliResult<Vec<flopkit::poly::Rational>> {
    let mut rng = rng_for(inst.seed, STREAM_POINTS);
    let mut y = random_smooth_point(inst, &mut rng)?;
    for _ in 0..j {
        y = random_smooth_point(inst, &mut rng)?;
    }
    Ok(y)
}

/// Lines through the given points of the smooth-point stream.
pub fn lines_suite(ctx: Ctx, inst: &DeterminantalInstance, points: &[usize]) -> CliResult<RunReport> {
    let mut r = RunReport::new("instance lines", Some(inst.seed), ctx.precision);
    let bound = residual_bound(ctx.precision);
    let ys = points.iter().map(|&j| smooth_point(inst, j)).collect::<CliResult<Vec<_>>>()?;
    let found = flopkit::par::map(ctx.exec, &ys, |y| lines_through_instance_point(inst, y, ctx.precision));
    let mut out = Vec::new();
    for (&j, pl) in points.iter().zip(found) {
        let pl = pl?;
        let k = j + 1;
        r.check_detail(
            format!("point{k}_six_lines"),
            pl.total_multiplicity() == 6,
            pl.total_multiplicity().to_string(),
        );
        r.check_detail(format!("point{k}_split_1_1_4"), pl.split() == (1, 1, 4), format!("{:?}", pl.split()));
        r.check_detail(format!("point{k}_residual"), pl.max_residual() < bound, format!("{:.3e}", pl.max_residual()));
        r.line(format!("point {k} {}: split {:?}, residual {:.3e}", fmt_vec(&pl.point), pl.split(), pl.max_residual()));
        out.push(pl);
    }
    r.data("points", &out)?;
    Ok(r.finish())
}

pub fn jmap_suite(ctx: Ctx, inst: &DeterminantalInstance, samples: usize) -> CliResult<RunReport> {
    let mut r = RunReport::new("segre jmap", Some(inst.seed), ctx.precision);
    let mut rng = rng_for(inst.seed, STREAM_S_POINTS);
    let mut reports = Vec::new();
    for j in 0..samples {
        let s = random_s_circ_point(inst, &mut rng)?;
        let rep = jmap_report(inst, &s)?;
        r.check(format!("sample{}_agree", j + 1), rep.agree);
        reports.push(rep);
    }
    r.data("samples", &reports)?;
    Ok(r.finish())
}

#[derive(Serialize)]
struct InvolutionSummary {
    line_seed: u64,
    distance: f64,
    residual: f64,
    image_residual: f64,
}

pub fn involution_suite(ctx: Ctx, x: &CubicFourfold, lines: usize) -> CliResult<RunReport> {
    let mut r = RunReport::new("fourfold iota", Some(x.seed), ctx.precision);
    let tol = tolerance(ctx.precision).to_f64().value();
    let seeds: Vec<u64> = (0..lines).map(|j| sub_seed(x.seed, STREAM_LINES, j)).collect();
    let results = flopkit::par::map(ctx.exec, &seeds, |&s| {
        let m = sample_line(x, s, ctx.precision)?;
        let c = check_involution(x, &m)?;
        Ok::<_, flopkit::Error>(InvolutionSummary {
            line_seed: s,
            distance: c.distance,
            residual: m.residual,
            image_residual: c.first.line.residual,
        })
    });
    let mut out = Vec::new();
    for (j, res) in results.into_iter().enumerate() {
        let s = res?;
        r.check_detail(format!("line{}_involution", j + 1), s.distance < tol, format!("{:.3e}", s.distance));
        out.push(s);
    }
    r.data("tolerance", tol)?;
    r.data("lines", &out)?;
    Ok(r.finish())
}

/// Pairs alternate between a line through a point of a ruling of `T_v` and a line through a random point.
pub fn scroll_suite(ctx: Ctx, x: &CubicFourfold, pairs: usize) -> CliResult<RunReport> {
    let mut r = RunReport::new("fourfold scroll", Some(x.seed), ctx.precision);
    let mut rng = rng_for(x.seed, STREAM_SCROLL);
    let mut jobs = Vec::new();
    for j in 0..pairs {
        let v = flopkit::detgeo::random_vector3(&mut rng);
        let planted = j % 2 == 0;
        let y = if planted {
            let ruling = flopkit::detgeo::t_v_ruling(&x.instance, &v, &mut rng)?;
            let (s, t) = (rng.gen_range(1..=9), rng.gen_range(1..=9));
            Some(flopkit::detgeo::primitive(&ruling.point_at(&int(s), &int(t))))
        } else {
            None
        };
        jobs.push((v, y, sub_seed(x.seed, STREAM_SCROLL, j)));
    }
    let results = flopkit::par::map(ctx.exec, &jobs, |(v, y, s)| {
        let m = match y {
            Some(y) => sample_line_through(x, y, *s, ctx.precision)?,
            None => sample_line(x, *s, ctx.precision)?,
        };
        scroll_incidence_report(x, &m, v)
    });
    let mut out = Vec::new();
    for (j, res) in results.into_iter().enumerate() {
        let rep = res?;
        let planted = jobs[j].1.is_some();
        let ok = rep.invariant && (!planted || rep.m_meets);
        let detail = format!("meets {} / {}", rep.m_meets, rep.image_meets);
        r.check_detail(format!("pair{}_invariant", j + 1), ok, detail);
        out.push(rep);
    }
    r.data("pairs", &out)?;
    Ok(r.finish())
}

pub fn fourfold_suite(ctx: Ctx, inst: &DeterminantalInstance, samples: Samples) -> CliResult<RunReport> {
    let mut r = RunReport::new("fourfold", Some(inst.seed), ctx.precision);
    let x = extend_to_fourfold(inst, ctx.seed)?;
    r.check("restricts_to_y", x.restriction_to_hyperplane() == inst.cubic_y);
    r.data("quadric", x.quadric.to_string())?;
    r.merge("iota", involution_suite(ctx, &x, samples.fourfold_lines)?);
    r.merge("scroll", scroll_suite(ctx, &x, samples.scroll_pairs)?);
    Ok(r.finish())
}

/// Every module suite for one seed, merged in a fixed order.
pub fn reproduce_all(ctx: Ctx, samples: Samples) -> CliResult<RunReport> {
    let mut r = RunReport::new("reproduce", Some(ctx.seed), ctx.precision);
    type Job = fn(Ctx) -> CliResult<RunReport>;
    let independent: [(&str, Job); 6] = [
        ("lattice", |c| lattice_tables(c, 50)),
        ("represent", represent_suite),
        ("transfer", |c| transfer_suite(c, 100)),
        ("schubert", schubert_suite),
        ("surf27", surf27_suite),
        ("segre", segre_suite),
    ];
    let done = flopkit::par::map(ctx.exec, &independent, |(_, job)| job(ctx));
    let inst = build_instance(ctx)?;
    for ((name, _), rep) in independent.iter().zip(done) {
        r.merge(name, rep?);
    }
    let points: Vec<usize> = (0..samples.points).collect();
    r.merge("instance", instance_suite(ctx, &inst, samples)?);
    r.merge("project", project_suite(ctx, &inst, &(0..6).collect::<Vec<_>>())?);
    r.merge("lines", lines_suite(ctx, &inst, &points)?);
    r.merge("jmap", jmap_suite(ctx, &inst, samples.s_points)?);
    r.merge("fourfold", fourfold_suite(ctx, &inst, samples)?);
    Ok(r.finish())
}

pub fn parse_err(what: &str, s: &str) -> CliError {
    CliError::Usage(format!("cannot parse {what} from {s:?}"))
}
