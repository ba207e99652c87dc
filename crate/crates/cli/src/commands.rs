use anyhow::{anyhow, Context, Result};
use spacetime_convex::convexity::{certify_region, ConvexityQuery, Verdict, DEFAULT_C_CEILING, DEFAULT_PSD_TOLERANCE};
use spacetime_convex::foliation::{barrier_scan, mean_curvature, slice_restricted_hessian, SliceSpec};
use spacetime_convex::geodesics::{convexity_along_curve, integrate_geodesic, GeodesicError, GeodesicState, DEFAULT_STEP};
use spacetime_convex::geometry::{gradient_invariant, Point, SpacetimeModel};

use crate::config::{Document, Section};
use crate::report::{list, number, Report};
use crate::resolve::{self, FieldChoice};

/// Flags that override config values.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub grid: Option<usize>,
    pub tolerance: Option<f64>,
}

pub struct Outcome {
    pub report: Report,
    /// `false` maps to exit code 2.
    pub passed: bool,
}

fn describe(report: &mut Report, model: &SpacetimeModel, field: Option<&FieldChoice>) {
    report.put("model", model);
    if let Some(f) = field {
        report.put("field", &f.label);
    }
}

fn empty_section(name: &str) -> Section {
    Section {
        name: name.to_owned(),
        line: 1,
        entries: Vec::new(),
    }
}

pub fn certify(doc: &Document, overrides: &Overrides) -> Result<Outcome> {
    let model = resolve::model(doc)?;
    let field = resolve::field(doc, &model)?;
    let empty = empty_section("certify");
    let section = doc.section("certify").unwrap_or(&empty);
    section.check_keys(&["box.", "samples", "ceiling"])?;
    for e in &section.entries {
        if let Some(coord) = e.key.strip_prefix("box.") {
            if model.coordinate_index(coord).is_none() {
                return Err(e.error(format!("unknown coordinate `{coord}`")).into());
            }
        }
    }

    let defaults = model.default_region();
    let mut region = Vec::with_capacity(model.dimension());
    for (k, name) in model.coordinates().iter().enumerate() {
        let key = format!("box.{name}");
        let bounds = match section.get(&key)? {
            Some(e) => {
                let v = resolve::vector(&e.items, 2, Some(&model), &key)?;
                (v[0], v[1])
            }
            None => defaults
                .map(|d| d[k])
                .ok_or_else(|| section.error(format!("no `{key}` and model `{}` has no default region", model.name())))?,
        };
        region.push(bounds);
    }
    let mut query = ConvexityQuery::new(region, overrides.grid.or(section.count("samples")?).unwrap_or(5));
    query.psd_tolerance = overrides.tolerance.unwrap_or(DEFAULT_PSD_TOLERANCE);
    query.c_search_ceiling = section.number("ceiling")?.unwrap_or(DEFAULT_C_CEILING);

    let cert = certify_region(&model, &field.field, &query)?;
    let mut report = Report::new("certify");
    describe(&mut report, &model, Some(&field));
    report
        .put("method", cert.method())
        .put("grid.samples_per_axis", cert.samples_per_axis)
        .put("grid.points", cert.stats.samples);
    for (name, (lo, hi)) in model.coordinates().iter().zip(&query.region) {
        report.put(&format!("grid.box.{name}"), list(&[*lo, *hi]));
    }
    report
        .put("psd_tolerance", number(cert.psd_tolerance))
        .put("c_search_ceiling", number(cert.c_search_ceiling))
        .put("verdict", cert.verdict.as_str());
    match cert.c_interval {
        Some(iv) => {
            report
                .put("c_interval", list(&[iv.lo, iv.hi]))
                .put("c_interval.ceiling_hit", iv.ceiling_hit);
        }
        None => {
            report.put("c_interval", "empty");
        }
    }
    if let Some(w) = &cert.witness {
        report.put("witness", list(w.coordinates()));
    }
    report.put("signature.lorentzian_everywhere", cert.lorentzian_hessian_everywhere);
    if let Some((p, sig)) = &cert.first_non_lorentzian {
        report.put(
            "signature.first_failure",
            format!("{} at {} ({}/{}/{})", sig.kind.as_str(), list(p.coordinates()), sig.negative, sig.zero, sig.positive),
        );
    }
    report
        .put("clauses.inequality_without_signature", cert.inequality_without_signature)
        .put("clauses.signature_without_inequality", cert.signature_without_inequality)
        .put("points.empty_interval", cert.stats.empty_points);
    if cert.stats.empty_points < cert.stats.samples {
        report
            .put("points.lo_range", list(&[cert.stats.min_lo, cert.stats.max_lo]))
            .put("points.hi_range", list(&[cert.stats.min_hi, cert.stats.max_hi]));
    }
    Ok(Outcome {
        report,
        passed: cert.verdict == Verdict::Certified,
    })
}

pub fn barrier(doc: &Document, overrides: &Overrides) -> Result<Outcome> {
    let section = doc.require("barrier-scan")?;
    section.check_keys(&["M", "r_lo", "r_hi", "n"])?;
    let mass = section.number("M")?.unwrap_or(1.0);
    let r_lo = section.require("r_lo")?.single()?.parse("a number")?;
    let r_hi = section.require("r_hi")?.single()?.parse("a number")?;
    let n = overrides.grid.or(section.count("n")?).unwrap_or(100);
    let scan = barrier_scan(mass, r_lo, r_hi, n)?;

    let mut report = Report::new("barrier-scan");
    report
        .put("mass", number(mass))
        .put("range", list(&[r_lo, r_hi]))
        .put("samples", scan.samples.len())
        .put("maximal_radius", scan.maximal_radius())
        .put("zero_crossings", scan.zero_crossings.len());
    for (i, (a, b)) in scan.zero_crossings.iter().enumerate() {
        report.put(&format!("zero_crossing.{i}"), list(&[*a, *b]));
    }
    report.put("sign_pattern_ok", scan.sign_pattern_ok);
    let table = report.table(vec!["r".into(), "TrK".into()]);
    table.rows = scan.samples.iter().map(|(r, k)| vec![*r, *k]).collect();
    Ok(Outcome {
        report,
        passed: scan.sign_pattern_ok,
    })
}

pub fn geodesic(doc: &Document, overrides: &Overrides) -> Result<Outcome> {
    let model = resolve::model(doc)?;
    let field = resolve::field(doc, &model)?;
    let section = doc.require("geodesic-probe")?;
    section.check_keys(&["position", "velocity", "span", "step", "c", "stride"])?;
    let position = resolve::point(section, "position", &model)?;
    let velocity = resolve::vector(&section.require("velocity")?.items, model.dimension(), Some(&model), "velocity")?;
    let span = match section.get("span")? {
        Some(e) => {
            let v = resolve::vector(&e.items, 2, Some(&model), "span")?;
            (v[0], v[1])
        }
        None => (0.0, 10.0),
    };
    let step = section.number("step")?.unwrap_or(DEFAULT_STEP);
    let c = section.number("c")?.unwrap_or(1.0);
    let stride = section.count("stride")?.unwrap_or(1).max(1);
    let tolerance = overrides.tolerance.unwrap_or(DEFAULT_PSD_TOLERANCE);

    let trajectory = match integrate_geodesic(&model, &GeodesicState::new(position, velocity), span, step) {
        Ok(t) => t,
        Err(GeodesicError::SingularRegionEntered { lambda, reason, .. }) => {
            return Err(anyhow!("geodesic left the regular region at lambda = {lambda}: {reason}"))
        }
        Err(GeodesicError::Other(e)) => return Err(e.into()),
    };
    let margins = convexity_along_curve(&field.field, &model, &trajectory, c, tolerance)?;

    let mut report = Report::new("geodesic-probe");
    describe(&mut report, &model, Some(&field));
    report
        .put("c", number(c))
        .put("tolerance", number(tolerance))
        .put("initial_velocity", margins.initial_class.as_str())
        .put("step_size", number(trajectory.step_size))
        .put("samples", trajectory.samples.len())
        .put("norm_drift", number(trajectory.norm_drift()))
        .put("drift_constant", number(trajectory.drift_constant()))
        .put("min_margin", number(margins.min_margin))
        .put("argmin_lambda", number(margins.argmin_lambda))
        .put("violated", margins.violated);
    let mut columns = vec!["lambda".to_owned()];
    columns.extend(model.coordinates().iter().cloned());
    columns.extend(["norm".to_owned(), "margin".to_owned()]);
    let table = report.table(columns);
    let last = trajectory.samples.len() - 1;
    for (i, ((lambda, state), (norm, (_, margin)))) in trajectory
        .samples
        .iter()
        .zip(trajectory.norm_history.iter().zip(&margins.margins))
        .enumerate()
    {
        if i % stride == 0 || i == last {
            let mut row = vec![*lambda];
            row.extend_from_slice(state.position.coordinates());
            row.extend([*norm, *margin]);
            table.rows.push(row);
        }
    }
    Ok(Outcome {
        report,
        passed: !margins.violated,
    })
}

pub fn foliate(doc: &Document, overrides: &Overrides) -> Result<Outcome> {
    let model = resolve::model(doc)?;
    let field = resolve::field(doc, &model)?;
    let section = doc.require("foliate")?;
    section.check_keys(&["from", "to", "n"])?;
    let from = resolve::point(section, "from", &model)?;
    let to = resolve::point(section, "to", &model)?;
    let n = overrides.grid.or(section.count("n")?).unwrap_or(11);
    if n < 2 {
        return Err(anyhow!("[foliate] needs n >= 2, got {n}"));
    }

    let mut report = Report::new("foliate");
    describe(&mut report, &model, Some(&field));
    report.put("from", list(&from)).put("to", list(&to)).put("samples", n);
    let mut columns = vec!["s".to_owned()];
    columns.extend(model.coordinates().iter().cloned());
    columns.extend(["f".to_owned(), "epsilon".to_owned(), "TrK".to_owned()]);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let s = i as f64 / (n - 1) as f64;
        let p = Point::new(from.iter().zip(to.iter()).map(|(a, b)| a + s * (b - a)).collect());
        let context = || format!("at {}", list(&p));
        let grad = gradient_invariant(&field.field, &model, &p).with_context(context)?;
        let trk = mean_curvature(&field.field, &model, &p).with_context(context)?;
        let mut row = vec![s];
        row.extend_from_slice(&p);
        row.extend([field.field.value(&p)?, grad.epsilon, trk]);
        rows.push(row);
    }
    report.table(columns).rows = rows;
    Ok(Outcome { report, passed: true })
}

pub fn slice(doc: &Document, _overrides: &Overrides) -> Result<Outcome> {
    let model = resolve::model(doc)?;
    let field = resolve::field(doc, &model)?;
    let section = doc.require("slice-probe")?;
    section.check_keys(&["coordinate", "value", "point", "maximal"])?;
    let coordinate = resolve::coordinate(section.require("coordinate")?.single()?, &model)?;
    let value = resolve::constant(section.require("value")?.single()?, Some(&model))?;
    let maximal = section.flag("maximal")?.unwrap_or(false);
    let spec = SliceSpec::new(coordinate, value);
    let n = model.dimension();

    let mut points = Vec::new();
    for e in section.all("point") {
        let p = if e.items.len() == n - 1 {
            let mut v = resolve::vector(&e.items, n - 1, Some(&model), "point")?;
            v.insert(coordinate, value);
            v
        } else {
            resolve::vector(&e.items, n, Some(&model), "point")?
        };
        points.push(Point::new(p));
    }
    if points.is_empty() {
        return Err(section.error("[slice-probe] needs at least one `point`").into());
    }

    let mut report = Report::new("slice-probe");
    describe(&mut report, &model, Some(&field));
    report
        .put("slice", format!("{} = {value}", model.coordinates()[coordinate]))
        .put("declared_maximal", maximal)
        .put("points", points.len());
    let mut columns: Vec<String> = model.coordinates().to_vec();
    columns.extend((1..n).map(|k| format!("eig{k}")));
    columns.push("laplacian".into());
    let mut rows = Vec::new();
    let mut min_laplacian = f64::INFINITY;
    for p in &points {
        let s = slice_restricted_hessian(&field.field, &model, spec, p)?;
        let lap = s.laplacian();
        min_laplacian = min_laplacian.min(lap);
        let mut row = p.to_vec();
        row.extend(s.eigenvalues());
        row.push(lap);
        rows.push(row);
    }
    let subharmonic = min_laplacian > 0.0;
    report.put("min_laplacian", number(min_laplacian)).put("laplacian_positive", subharmonic);
    report.table(columns).rows = rows;
    Ok(Outcome {
        report,
        passed: !maximal || subharmonic,
    })
}
