use std::collections::BTreeMap;
use std::path::Path;

use massey_core::algebra::json::{
    assoc_from_doc, coalgebra_from_doc, format_vector, lie_algebra_from_doc, lie_coalgebra_from_doc, StructureDoc,
};
use massey_core::algebra::{BasisElement, ValidationReport};
use massey_core::ce::CeComplex;
use massey_core::deform::{
    deformation_differential, integrate as integrate_deformation, mc_residual, DeformedBracket,
    InfinitesimalDeformation, LocalBaseAlgebra,
};
use massey_core::dg::{dgla_from_doc, DgAlgebra, TableDgla};
use massey_core::dgca::{matric_problem, DgcAlgebra, DgcaClass, MatrixClass};
use massey_core::exact::{unit_vec, Scalar};
use massey_core::massey::{
    massey_search, verify_defining_system, ClassAssignment, DefiningSystem, MasseyProblem, MasseyResult,
    SearchOptions, Status,
};
use massey_core::Error;
use serde_json::{json, Map, Value};

use crate::error::{exit, CliError, Result};
use crate::query::{
    read_cochain, read_doc, scalar_map, scalars, ClassSpec, DgcaQuery, DglaQuery, IntegrateQuery, MatricQuery, Query,
};
use crate::report::{massey_fields, status_exit, status_name, vector_map, Report};

fn violations(report: &ValidationReport) -> Value {
    serde_json::to_value(&report.violations).expect("violations serialize")
}

fn require_valid(report: ValidationReport) -> Result<()> {
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidStructure(report).into())
    }
}

pub fn validate(path: &Path) -> Result<Report> {
    let doc = read_doc(path)?;
    let (report, extra) = match doc.kind.as_str() {
        "lie-algebra" => (lie_algebra_from_doc(&doc)?.validate(), None),
        "assoc-comm-algebra" => (assoc_from_doc(&doc)?.validate(), None),
        "coalgebra" => (coalgebra_from_doc(&doc)?.validate(), None),
        "lie-coalgebra" => (lie_coalgebra_from_doc(&doc)?.validate(), None),
        "dgla" => (dgla_from_doc(&doc)?.validate(), None),
        "dgca" => (DgcAlgebra::from_doc(&doc)?.validate(), None),
        "local-base" => match LocalBaseAlgebra::from_doc(&doc) {
            Ok(s) => (ValidationReport::default(), Some(("nilpotency", json!(s.nilpotency())))),
            Err(Error::InvalidStructure(r)) => (r, None),
            Err(Error::NotAnIdeal(msg)) => {
                let mut fields = Map::new();
                fields.insert("kind".into(), json!(doc.kind));
                fields.insert("dimension".into(), json!(doc.basis.len()));
                fields.insert("valid".into(), json!(false));
                fields.insert("violations".into(), json!([{"identity": "nilpotent", "witness": [msg]}]));
                return Ok(Report::new("validate", exit::NEGATIVE, fields));
            }
            Err(e) => return Err(e.into()),
        },
        other => {
            return Err(CliError::Schema {
                path: path.to_path_buf(),
                message: format!("unsupported kind `{other}`"),
            })
        }
    };
    let mut fields = Map::new();
    fields.insert("kind".into(), json!(doc.kind));
    fields.insert("dimension".into(), json!(doc.basis.len()));
    fields.insert("valid".into(), json!(report.is_valid()));
    fields.insert("violations".into(), violations(&report));
    if let Some((k, v)) = extra {
        fields.insert(k.into(), v);
    }
    let code = if report.is_valid() { exit::OK } else { exit::NEGATIVE };
    Ok(Report::new("validate", code, fields))
}

fn named(basis: &[BasisElement], component: &[usize], v: &[Scalar]) -> Value {
    let names: Vec<BasisElement> = component.iter().map(|&i| basis[i].clone()).collect();
    json!(format_vector(&names, v))
}

fn ce_from(doc: &StructureDoc) -> Result<CeComplex> {
    Ok(CeComplex::new(lie_algebra_from_doc(doc)?)?)
}

pub fn cohomology(path: &Path, degree: i64) -> Result<Report> {
    let doc = read_doc(path)?;
    let mut fields = Map::new();
    fields.insert("kind".into(), json!(doc.kind));
    fields.insert("degree".into(), json!(degree));
    let (dim, boundaries, reps) = match doc.kind.as_str() {
        "lie-algebra" => {
            let ce = ce_from(&doc)?;
            let h = ce.cohomology_space(degree)?;
            let reps = (0..h.dimension())
                .map(|i| {
                    let rep = h.lift(&unit_vec(h.dimension(), i))?;
                    Ok(serde_json::to_value(ce.cochain_to_doc(&rep)).expect("cochains serialize"))
                })
                .collect::<Result<Vec<_>>>()?;
            (h.dimension(), h.raw().coboundary_basis().len(), reps)
        }
        "dgla" | "dgca" => {
            let (h, basis, comp) = if doc.kind == "dgla" {
                let a = dgla_from_doc(&doc)?;
                require_valid(a.validate())?;
                (a.cohomology(degree)?, a.basis().to_vec(), a.component(degree).to_vec())
            } else {
                let a = DgcAlgebra::from_doc(&doc)?;
                require_valid(a.validate())?;
                (a.cohomology(degree)?, a.basis().to_vec(), a.component(degree).to_vec())
            };
            let reps = h.representatives().iter().map(|v| named(&basis, &comp, v)).collect();
            (h.dimension(), h.coboundary_basis().len(), reps)
        }
        other => {
            return Err(CliError::Schema {
                path: path.to_path_buf(),
                message: format!("cohomology needs a lie-algebra, dgla or dgca, found `{other}`"),
            })
        }
    };
    fields.insert("dimension".into(), json!(dim));
    fields.insert("cocycle_dimension".into(), json!(dim + boundaries));
    fields.insert("coboundary_dimension".into(), json!(boundaries));
    fields.insert("representatives".into(), Value::Array(reps));
    Ok(Report::new("cohomology", exit::OK, fields))
}

pub fn bracket(path: &Path, left: &Path, right: &Path) -> Result<Report> {
    let ce = ce_from(&read_doc(path)?)?;
    let a = ce.cochain_from_doc(&read_cochain(left)?)?;
    let b = ce.cochain_from_doc(&read_cochain(right)?)?;
    let c = ce.bracket(&a, &b)?;
    let mut fields = Map::new();
    fields.insert("arity".into(), json!(c.arity()));
    fields.insert("result".into(), serde_json::to_value(ce.cochain_to_doc(&c)).expect("cochains serialize"));
    Ok(Report::new("bracket", exit::OK, fields))
}

/// Either DGLA the Massey search accepts.
enum Dgla {
    Ce(CeComplex),
    Table(TableDgla),
}

impl Dgla {
    fn load(path: &Path) -> Result<Self> {
        let doc = read_doc(path)?;
        match doc.kind.as_str() {
            "dgla" => {
                let t = dgla_from_doc(&doc)?;
                require_valid(t.validate())?;
                Ok(Dgla::Table(t))
            }
            _ => Ok(Dgla::Ce(ce_from(&doc)?)),
        }
    }

    fn as_dyn(&self) -> &dyn DgAlgebra {
        match self {
            Dgla::Ce(c) => c,
            Dgla::Table(t) => t,
        }
    }
}

fn system(problem: &MasseyProblem, named: &BTreeMap<String, Vec<String>>) -> Result<DefiningSystem> {
    let mut sys = DefiningSystem::empty(problem.len());
    for (name, v) in named {
        sys.values[problem.index_of(name)?] = Some(scalars(v)?);
    }
    Ok(sys)
}

/// Searches, or checks a supplied witness; a found witness is checked again
/// before it is reported.
fn solve(
    alg: &dyn DgAlgebra,
    problem: &MasseyProblem,
    classes: &ClassAssignment,
    witness: Option<&BTreeMap<String, Vec<String>>>,
    opts: &SearchOptions,
) -> Result<(MasseyResult, &'static str)> {
    if let Some(w) = witness {
        let r = verify_defining_system(alg, problem, &system(problem, w)?, classes)?;
        return Ok((r, "verify"));
    }
    let r = massey_search(alg, problem, classes, opts)?;
    if let Some(w) = &r.witness {
        let check = verify_defining_system(alg, problem, w, classes)?;
        if check.status != Status::Verified || check.products != r.products {
            return Err(Error::Invariant("reported witness does not verify".into()).into());
        }
    }
    Ok((r, "search"))
}

pub fn massey_dgla(path: &Path, opts: &SearchOptions) -> Result<Report> {
    let q: Query<DglaQuery> = Query::load(path)?;
    let alg = Dgla::load(&q.resolve(&q.body.algebra))?;
    let f = q.body.coalgebra.build(&q)?;
    let problem = MasseyProblem::from_coalgebra(&f)?;
    let classes = ClassAssignment {
        a: scalar_map(&q.body.classes)?,
        b: q.body.b.as_ref().map(scalar_map).transpose()?,
    };
    let (r, mode) = solve(alg.as_dyn(), &problem, &classes, q.body.witness.as_ref(), opts)?;
    let mut fields = massey_fields(&problem, &r);
    fields.insert("mode".into(), json!(mode));
    Ok(Report::new("massey-dgla", status_exit(r.status), fields))
}

fn cochain_map(ce: &CeComplex, base: &LocalBaseAlgebra, tau: &DeformedBracket) -> Value {
    let m: Map<String, Value> = base
        .basis()
        .iter()
        .zip(tau.cochains())
        .map(|(b, c)| (b.name.clone(), serde_json::to_value(ce.cochain_to_doc(c)).expect("cochains serialize")))
        .collect();
    Value::Object(m)
}

pub fn integrate(path: &Path, order: Option<usize>, opts: &SearchOptions) -> Result<Report> {
    let q: Query<IntegrateQuery> = Query::load(path)?;
    let ce = ce_from(&read_doc(&q.resolve(&q.body.algebra))?)?;
    let base = q.body.base.build(&q, order)?;
    let a = InfinitesimalDeformation {
        classes: scalar_map(&q.body.classes)?,
    };
    let mut fields = Map::new();
    fields.insert(
        "base".into(),
        json!({
            "basis": base.basis().iter().map(|b| b.name.clone()).collect::<Vec<_>>(),
            "nilpotency": base.nilpotency(),
        }),
    );
    if let Some(given) = &q.body.deformation {
        let mut cochains = Vec::with_capacity(base.dim());
        for b in base.basis() {
            cochains.push(match given.get(&b.name) {
                Some(doc) => ce.cochain_from_doc(doc)?,
                None => ce.zero(2),
            });
        }
        if let Some(extra) = given.keys().find(|k| base.basis().iter().all(|b| &b.name != *k)) {
            return Err(Error::UnknownName(extra.clone()).into());
        }
        let tau = DeformedBracket::new(base.clone(), cochains)?;
        let residual_zero = mc_residual(&ce, &tau)?.iter().all(|r| r.is_zero());
        let status = if residual_zero && deformation_differential(&ce, &tau)? == a {
            Status::Verified
        } else {
            Status::Violated
        };
        if residual_zero {
            fields.insert("differential".into(), vector_map(&deformation_differential(&ce, &tau)?.classes));
        }
        fields.insert("residual_zero".into(), json!(residual_zero));
        fields.insert("status".into(), status_name(status));
        fields.insert("mode".into(), json!("verify"));
        return Ok(Report::new("integrate", status_exit(status), fields));
    }
    let r = integrate_deformation(&ce, &base, &a, opts)?;
    let problem = MasseyProblem::from_coalgebra(&base.coalgebra()?)?;
    fields.insert("status".into(), status_name(r.status));
    fields.insert("mode".into(), json!("search"));
    fields.insert("search".into(), Value::Object(massey_fields(&problem, &r.search)));
    match &r.deformation {
        Some(tau) => {
            let diff = deformation_differential(&ce, tau)?;
            if diff != a {
                return Err(Error::Invariant("integrated bracket has a different differential".into()).into());
            }
            fields.insert("deformation".into(), cochain_map(&ce, &base, tau));
            fields.insert("differential".into(), vector_map(&diff.classes));
            fields.insert("residual_zero".into(), json!(true));
        }
        None => {
            fields.insert("deformation".into(), Value::Null);
        }
    }
    Ok(Report::new("integrate", status_exit(r.status), fields))
}

fn dgca_class(c: &ClassSpec) -> Result<DgcaClass> {
    Ok(DgcaClass {
        degree: c.degree,
        coords: scalars(&c.coords)?,
    })
}

fn load_dgca(path: &Path) -> Result<DgcAlgebra> {
    let a = DgcAlgebra::from_doc(&read_doc(path)?)?;
    require_valid(a.validate())?;
    Ok(a)
}

fn run_matric(
    command: &str,
    a: &DgcAlgebra,
    blocks: &[usize],
    classes: &[MatrixClass],
    b: Option<&[Vec<Vec<Scalar>>]>,
    witness: Option<&BTreeMap<String, Vec<String>>>,
    opts: &SearchOptions,
) -> Result<Report> {
    let (problem, assignment) = matric_problem(a, blocks, classes, b)?;
    let (r, mode) = solve(a, &problem, &assignment, witness, opts)?;
    let mut fields = massey_fields(&problem, &r);
    fields.insert("mode".into(), json!(mode));
    Ok(Report::new(command, status_exit(r.status), fields))
}

pub fn massey_dgca(path: &Path, opts: &SearchOptions) -> Result<Report> {
    let q: Query<DgcaQuery> = Query::load(path)?;
    let a = load_dgca(&q.resolve(&q.body.algebra))?;
    let classes = q
        .body
        .classes
        .iter()
        .map(|c| Ok(MatrixClass { entries: vec![vec![dgca_class(c)?]] }))
        .collect::<Result<Vec<_>>>()?;
    let b = q.body.b.as_ref().map(|v| scalars(v)).transpose()?.map(|v| vec![vec![v]]);
    let blocks = vec![1; classes.len() + 1];
    run_matric("massey-dgca", &a, &blocks, &classes, b.as_deref(), q.body.witness.as_ref(), opts)
}

pub fn matric(path: &Path, blocks: &[usize], opts: &SearchOptions) -> Result<Report> {
    let q: Query<MatricQuery> = Query::load(path)?;
    let a = load_dgca(&q.resolve(&q.body.algebra))?;
    let classes = q
        .body
        .classes
        .iter()
        .map(|m| {
            let entries = m
                .iter()
                .map(|row| row.iter().map(dgca_class).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(MatrixClass { entries })
        })
        .collect::<Result<Vec<_>>>()?;
    let b = q
        .body
        .b
        .as_ref()
        .map(|m| {
            m.iter()
                .map(|row| row.iter().map(|v| scalars(v)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    run_matric("matric", &a, blocks, &classes, b.as_deref(), q.body.witness.as_ref(), opts)
}
