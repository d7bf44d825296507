use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    serialize_dot, ArrowEntry, CliError, Command, Format, JobSpec, Metadata, NamedCut,
    QuiverDocument, Verdict, VertexEntry, EXIT_DISCREPANCY, EXIT_INTERNAL, EXIT_OK,
};
use crate::cuts::{
    build_cut, cut_exists, cut_type, enumerate_cuts, invariant_cut, validate_cut, Cut, TypeVector,
    DEFAULT_ARROW_LIMIT,
};
use crate::lattice::{admissibility, admissible_bases, hermite_normal_form, Kind, LatticeBasis};
use crate::mckay_quiver::{commutativity_squares, elementary_cycles, QuiverAction, TypedQuiver};
use crate::monomial_group::{conjugacy_classes, default_root_order, Scalars, TypedGroup};
use crate::skew::{
    detect_loops, loop_witness, skew_quiver, transport_cut, unskew_round_trip, LoopVertex,
    LoopWitness, SkewQuiver,
};

/// Outcome of [`run`]: a document on success, the error otherwise.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub document: Option<QuiverDocument>,
    pub error: Option<CliError>,
    pub exit_code: i32,
}

pub fn render(doc: &QuiverDocument, format: Format) -> String {
    match format {
        Format::Json => doc.to_json(),
        Format::Dot => serialize_dot(doc),
        Format::Text => doc.to_text(),
    }
}

/// Group data resolved from a job.
struct Input {
    kind: Kind,
    basis: LatticeBasis,
    root_order: Option<u32>,
    scalars: Option<Scalars>,
}

impl Input {
    fn resolve(spec: &JobSpec) -> Result<Self, CliError> {
        spec.validate()?;
        let scalars = spec
            .scalars
            .map(|[alpha, beta, gamma]| Scalars { alpha, beta, gamma });
        let basis = match (&spec.lattice, &spec.diagonal) {
            (Some(m), _) => hermite_normal_form(*m)?,
            (None, Some(diag)) => {
                let m = spec.root_order.expect("validated");
                TypedGroup::from_diagonal(spec.kind, m, diag, scalars)?.basis
            }
            (None, None) => return Err(CliError::Spec("no group given".into())),
        };
        admissibility(&basis, spec.kind)?;
        if let (Some(s), None) = (scalars, spec.root_order) {
            let m = default_root_order(&basis, spec.kind);
            if (s.alpha as u64 + s.beta as u64 + s.gamma as u64) % m as u64 != (m / 2) as u64 {
                return Err(CliError::Spec(format!(
                    "scalars {s} must sum to {} mod the default root order {m}",
                    m / 2
                )));
            }
        }
        Ok(Input {
            kind: spec.kind,
            basis,
            root_order: spec.root_order,
            scalars,
        })
    }

    fn group(&self) -> Result<TypedGroup, CliError> {
        Ok(TypedGroup::from_lattice(
            self.basis,
            self.kind,
            self.root_order,
            self.scalars,
        )?)
    }

    fn metadata(&self, group: Option<&TypedGroup>) -> Metadata {
        Metadata {
            kind: self.kind,
            lattice: Some(self.basis.matrix()),
            normal_order: Some(self.basis.det() as usize),
            group_order: group.map(|g| g.order()),
            root_order: group.map(|g| g.root_order),
            scalar_convention: group.and_then(scalar_convention),
        }
    }
}

fn scalar_convention(g: &TypedGroup) -> Option<String> {
    let s = g.scalars?;
    Some(format!(
        "r = [[0, z^{}, 0], [z^{}, 0, 0], [0, 0, z^{}]] with z = exp(2 pi i/{}); K = <i1 i2, i1>, arrow scalars from K",
        s.alpha, s.beta, s.gamma, g.root_order
    ))
}

fn quiver_into(doc: &mut QuiverDocument, q: &TypedQuiver, cut: Option<&Cut>) {
    doc.vertices = (0..q.vertex_count())
        .map(|v| VertexEntry {
            id: v,
            label: q.label(v),
            dimension: 1,
        })
        .collect();
    doc.arrows = q
        .arrows()
        .map(|a| ArrowEntry {
            id: a.id,
            source: a.source,
            target: a.target,
            ty: Some(a.ty),
            mult: None,
            degree: cut.map(|c| c.degree(a.id)),
        })
        .collect();
}

/// Fills vertices and arrow blocks; graded blocks become one entry per
/// degree. Returns the ids of the degree-1 entries.
fn skew_into(doc: &mut QuiverDocument, s: &SkewQuiver) -> Vec<usize> {
    doc.vertices = s
        .vertices
        .iter()
        .enumerate()
        .map(|(id, v)| VertexEntry {
            id,
            label: v.label.clone(),
            dimension: v.dimension,
        })
        .collect();
    let mut arrows = Vec::new();
    let mut cut = Vec::new();
    for (&(source, target), block) in &s.arrows {
        let parts: Vec<(Option<u8>, u64)> = match block.by_degree {
            Some([d0, d1]) => vec![(Some(0), d0), (Some(1), d1)],
            None => vec![(None, block.total)],
        };
        for (degree, mult) in parts.into_iter().filter(|&(_, m)| m > 0) {
            let id = arrows.len();
            if degree == Some(1) {
                cut.push(id);
            }
            arrows.push(ArrowEntry {
                id,
                source,
                target,
                ty: None,
                mult: Some(mult),
                degree,
            });
        }
    }
    doc.arrows = arrows;
    cut
}

fn named(name: String, cut: &Cut, q: &TypedQuiver) -> NamedCut {
    NamedCut {
        name,
        arrows: cut.ids(),
        type_vector: Some(cut_type(q, cut).0),
    }
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("reports serialize")
}

/// The classification verdict for one group with its constructive witness.
#[derive(Debug, Clone)]
pub struct Classification {
    pub basis: LatticeBasis,
    pub kind: Kind,
    pub cut_exists: bool,
    pub divisible: bool,
    /// A cut on `Q_N`: `K`-invariant for types (C), (D).
    pub cut: Option<Cut>,
    /// `Q_N * K`, graded by the transported cut when there is one.
    pub skew: Option<SkewQuiver>,
    pub loops: Vec<LoopVertex>,
    pub loop_witness: Option<LoopWitness>,
}

/// Decides whether the skew-group algebra of `(B, kind)` carries a cut.
///
/// For types (C) and (D) this is `3 | det B`: positively by transporting the
/// invariant cut of type `(n/3, n/3, n/3)`, negatively by exhibiting a loop in
/// `Q_N * K`. For type (A) a cut exists iff some type passes the criterion.
pub fn classify(
    basis: &LatticeBasis,
    kind: Kind,
    root_order: Option<u32>,
    scalars: Option<Scalars>,
) -> Result<Classification, CliError> {
    admissibility(basis, kind)?;
    let n = basis.det();
    let divisible = n % 3 == 0;
    let mut out = Classification {
        basis: *basis,
        kind,
        cut_exists: false,
        divisible,
        cut: None,
        skew: None,
        loops: Vec::new(),
        loop_witness: None,
    };
    if kind == Kind::A {
        if let Some(gamma) = TypeVector::candidates(n)
            .into_iter()
            .find(|&g| cut_exists(basis, g))
        {
            out.cut = Some(build_cut(basis, gamma)?);
            out.cut_exists = true;
        }
        return Ok(out);
    }
    let group = TypedGroup::from_lattice(*basis, kind, root_order, scalars)?;
    let q = TypedQuiver::from_basis(*basis);
    let action = QuiverAction::for_group(&q, &group)?;
    let s = skew_quiver(&q, &action)?;
    if divisible {
        let cut = invariant_cut(basis, kind)?;
        let graded = transport_cut(&s, &q, &action, &cut)?;
        out.cut_exists = true;
        out.cut = Some(cut);
        out.skew = Some(graded);
    } else {
        out.loops = detect_loops(&s);
        if out.loops.is_empty() {
            return Err(CliError::Internal(format!(
                "no loop in the skew quiver of {basis} ({kind})"
            )));
        }
        out.loop_witness = Some(loop_witness(basis, kind, &action)?);
        out.skew = Some(s);
    }
    Ok(out)
}

/// Enumerated versus predicted cut types for one lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub lattice: [[i64; 2]; 2],
    pub n: i64,
    pub cuts: usize,
    pub enumerated: Vec<TypeVector>,
    pub predicted: Vec<TypeVector>,
}

impl OracleRow {
    pub fn agrees(&self) -> bool {
        self.enumerated == self.predicted
    }
}

fn oracle_row(basis: LatticeBasis, limit: usize) -> Result<OracleRow, CliError> {
    let q = TypedQuiver::from_basis(basis);
    let cuts = enumerate_cuts(&q, limit)?;
    let mut enumerated: Vec<TypeVector> = cuts.iter().map(|c| cut_type(&q, c)).collect();
    enumerated.sort();
    enumerated.dedup();
    let predicted = TypeVector::candidates(basis.det())
        .into_iter()
        .filter(|&g| cut_exists(&basis, g))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(OracleRow {
        lattice: basis.matrix(),
        n: basis.det(),
        cuts: cuts.len(),
        enumerated,
        predicted,
    })
}

/// Runs the exhaustive search against the closed-form criterion for every
/// admissible lattice with `det ≤ max_n`, one thread per lattice.
pub fn oracle_rows(kind: Kind, max_n: i64, limit: usize) -> Result<Vec<OracleRow>, CliError> {
    let bases = admissible_bases(kind, max_n);
    std::thread::scope(|scope| {
        let handles: Vec<_> = bases
            .iter()
            .map(|&b| scope.spawn(move || oracle_row(b, limit)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("oracle worker panicked"))
            .collect()
    })
}

fn execute(spec: &JobSpec) -> Result<(QuiverDocument, i32), CliError> {
    if spec.command == Command::OracleCompare {
        spec.validate()?;
        let max_n = spec.max_n.unwrap_or(9);
        let limit = spec
            .limit
            .unwrap_or(DEFAULT_ARROW_LIMIT.max(3 * max_n.max(0) as usize));
        let rows = oracle_rows(spec.kind, max_n, limit)?;
        let discrepancies: Vec<&OracleRow> = rows.iter().filter(|r| !r.agrees()).collect();
        let code = if discrepancies.is_empty() {
            EXIT_OK
        } else {
            EXIT_DISCREPANCY
        };
        let mut doc = QuiverDocument::new(
            spec.command,
            Metadata {
                kind: spec.kind,
                lattice: None,
                normal_order: None,
                group_order: None,
                root_order: None,
                scalar_convention: None,
            },
        );
        doc.report = Some(json!({
            "max_n": max_n,
            "rows": to_json(&rows),
            "discrepancies": to_json(&discrepancies),
        }));
        return Ok((doc, code));
    }

    let input = Input::resolve(spec)?;
    let basis = input.basis;
    let q = TypedQuiver::from_basis(basis);
    let mut code = EXIT_OK;
    let doc = match spec.command {
        Command::GroupInfo => {
            let g = input.group()?;
            let mut doc = QuiverDocument::new(spec.command, input.metadata(Some(&g)));
            let generators: Vec<String> =
                g.group.generators().iter().map(|m| m.to_string()).collect();
            doc.report = Some(json!({
                "invariant_factors": to_json(&q.quotient().invariant_factors()),
                "conjugacy_classes": conjugacy_classes(&g.group).len(),
                "generators": generators,
                "complement": to_json(&g.complement),
                "admissibility": to_json(&admissibility(&basis, input.kind)?),
            }));
            doc
        }
        Command::Quiver => {
            let mut doc = QuiverDocument::new(spec.command, input.metadata(None));
            quiver_into(&mut doc, &q, None);
            doc.report = Some(json!({
                "elementary_cycles": elementary_cycles(&q).len(),
                "commutativity_squares": commutativity_squares(&q).len(),
            }));
            doc
        }
        Command::CutExists => {
            let mut doc = QuiverDocument::new(spec.command, input.metadata(None));
            let realizable: Vec<TypeVector> = TypeVector::candidates(basis.det())
                .into_iter()
                .filter(|&g| cut_exists(&basis, g))
                .collect();
            doc.verdict = Some(match spec.gamma {
                Some(g) => Verdict {
                    cut_exists: cut_exists(&basis, TypeVector(g)),
                    reason: format!("criterion for type {}", TypeVector(g)),
                },
                None => Verdict {
                    cut_exists: !realizable.is_empty(),
                    reason: format!("{} realizable types", realizable.len()),
                },
            });
            doc.report = Some(json!({ "realizable_types": to_json(&realizable) }));
            doc
        }
        Command::CutBuild => {
            let gamma = spec
                .gamma
                .ok_or_else(|| CliError::Spec("cut-build needs --gamma".into()))?;
            let cut = build_cut(&basis, TypeVector(gamma))?;
            let mut doc = QuiverDocument::new(spec.command, input.metadata(None));
            quiver_into(&mut doc, &q, Some(&cut));
            doc.cuts
                .push(named(format!("gamma={}", TypeVector(gamma)), &cut, &q));
            doc.report = Some(to_json(&validate_cut(&q, &cut)));
            doc
        }
        Command::CutValidate => {
            let ids = spec
                .cut
                .as_ref()
                .ok_or_else(|| CliError::Spec("cut-validate needs --cut".into()))?;
            let cut = Cut::from_ids(&q, ids)?;
            let report = validate_cut(&q, &cut);
            let mut doc = QuiverDocument::new(spec.command, input.metadata(None));
            quiver_into(&mut doc, &q, Some(&cut));
            doc.cuts.push(named("input".into(), &cut, &q));
            doc.verdict = Some(Verdict {
                cut_exists: report.passed(),
                reason: if report.passed() {
                    "all weak-cut axioms hold".into()
                } else {
                    "see witnesses".into()
                },
            });
            doc.report = Some(to_json(&report));
            doc
        }
        Command::CutEnumerate => {
            let cuts = enumerate_cuts(&q, spec.limit.unwrap_or(DEFAULT_ARROW_LIMIT))?;
            let mut doc = QuiverDocument::new(spec.command, input.metadata(None));
            quiver_into(&mut doc, &q, None);
            doc.cuts = cuts
                .iter()
                .enumerate()
                .map(|(i, c)| named(format!("cut-{i}"), c, &q))
                .collect();
            let mut types: Vec<TypeVector> = cuts.iter().map(|c| cut_type(&q, c)).collect();
            types.sort();
            types.dedup();
            doc.report = Some(json!({ "count": cuts.len(), "types": to_json(&types) }));
            doc
        }
        Command::Skew => {
            if input.kind == Kind::A {
                return Err(CliError::Spec("skew needs kind C or D".into()));
            }
            let g = input.group()?;
            let action = QuiverAction::for_group(&q, &g)?;
            let mut s = skew_quiver(&q, &action)?;
            let cut = match (&spec.cut, spec.gamma) {
                (Some(ids), _) => Some(Cut::from_ids(&q, ids)?),
                (None, Some(gamma)) => Some(build_cut(&basis, TypeVector(gamma))?),
                (None, None) => None,
            };
            if let Some(cut) = &cut {
                s = transport_cut(&s, &q, &action, cut)?;
            }
            let mut doc = QuiverDocument::new(spec.command, input.metadata(Some(&g)));
            let degree_one = skew_into(&mut doc, &s);
            if cut.is_some() {
                doc.cuts.push(NamedCut {
                    name: "transported".into(),
                    arrows: degree_one,
                    type_vector: None,
                });
            }
            doc.report = Some(json!({
                "loops": to_json(&detect_loops(&s)),
                "dimension_square_sum": s.dimension_square_sum(),
            }));
            doc
        }
        Command::Classify => {
            let c = classify(&basis, input.kind, input.root_order, input.scalars)?;
            let g = (input.kind != Kind::A).then(|| input.group()).transpose()?;
            let mut doc = QuiverDocument::new(spec.command, input.metadata(g.as_ref()));
            match &c.skew {
                Some(s) => {
                    let degree_one = skew_into(&mut doc, s);
                    if c.cut_exists {
                        doc.cuts.push(NamedCut {
                            name: "transported".into(),
                            arrows: degree_one,
                            type_vector: None,
                        });
                    }
                }
                None => quiver_into(&mut doc, &q, c.cut.as_ref()),
            }
            doc.verdict = Some(Verdict {
                cut_exists: c.cut_exists,
                reason: match (input.kind, c.cut_exists) {
                    (Kind::A, true) => "a type passes the cut criterion".into(),
                    (Kind::A, false) => "no type passes the cut criterion".into(),
                    (_, true) => {
                        format!("3 divides |N| = {}; invariant cut transported", basis.det())
                    }
                    (_, false) => format!(
                        "3 does not divide |N| = {}; skew quiver has a loop",
                        basis.det()
                    ),
                },
            });
            doc.report = Some(json!({
                "divisible": c.divisible,
                "invariant_cut": c.cut.as_ref().map(|cut| cut.ids()),
                "cut_type": c.cut.as_ref().map(|cut| cut_type(&q, cut)),
                "loops": to_json(&c.loops),
                "loop_witness": to_json(&c.loop_witness),
            }));
            doc
        }
        Command::UnskewRoundtrip => {
            if input.kind != Kind::C {
                return Err(CliError::Spec(format!(
                    "unskew-roundtrip is implemented for kind C only, not {}",
                    input.kind
                )));
            }
            let report = unskew_round_trip(&basis)?;
            if !report.cut_recovered {
                code = EXIT_INTERNAL;
            }
            let mut doc = QuiverDocument::new(spec.command, input.metadata(None));
            doc.report = Some(to_json(&report));
            doc
        }
        Command::OracleCompare => unreachable!("handled above"),
    };
    Ok((doc, code))
}

/// Executes a job. Never panics on bad input; the exit code follows the
/// `EXIT_*` constants.
pub fn run(spec: &JobSpec) -> RunOutput {
    match execute(spec) {
        Ok((doc, exit_code)) => RunOutput {
            document: Some(doc),
            error: None,
            exit_code,
        },
        Err(e) => RunOutput {
            exit_code: e.exit_code(),
            document: None,
            error: Some(e),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::{EXIT_INVALID_SPEC, EXIT_NOT_ADMISSIBLE};

    fn job(command: Command, kind: Kind, m: [[i64; 2]; 2]) -> JobSpec {
        JobSpec::new(command, kind).with_lattice(m)
    }

    #[test]
    fn classify_examples() {
        let out = run(&job(Command::Classify, Kind::C, [[3, 0], [0, 3]]));
        assert_eq!(out.exit_code, EXIT_OK);
        let doc = out.document.unwrap();
        assert!(doc.verdict.as_ref().unwrap().cut_exists);
        assert_eq!(doc.cuts.len(), 1);
        assert_eq!(doc.vertices.len(), 11);

        let out = run(&job(Command::Classify, Kind::C, [[2, 0], [0, 2]]));
        let doc = out.document.unwrap();
        assert!(!doc.verdict.as_ref().unwrap().cut_exists);
        let report = doc.report.unwrap();
        assert!(!report["loops"].as_array().unwrap().is_empty());
        assert_eq!(report["loop_witness"]["x1"], json!({"x1": 0, "x2": 1}));
    }

    #[test]
    fn quiver_and_dot_counts() {
        let out = run(&job(Command::Quiver, Kind::A, [[3, 2], [0, 1]]));
        let doc = out.document.unwrap();
        assert_eq!((doc.vertices.len(), doc.arrows.len()), (3, 9));
        let dot = serialize_dot(&doc);
        assert_eq!(dot.matches(" -> ").count(), 9);
        assert_eq!(dot.matches("[label=").count(), 3);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            run(&job(Command::Quiver, Kind::A, [[0, 0], [0, 3]])).exit_code,
            EXIT_INVALID_SPEC
        );
        assert_eq!(
            run(&job(Command::Quiver, Kind::C, [[2, 0], [0, 1]])).exit_code,
            EXIT_NOT_ADMISSIBLE
        );
        let bad_gamma = job(Command::CutBuild, Kind::A, [[3, 0], [0, 3]]).with_gamma([4, 4, 1]);
        assert_eq!(run(&bad_gamma).exit_code, EXIT_NOT_ADMISSIBLE);
        assert_eq!(
            run(&job(Command::UnskewRoundtrip, Kind::D, [[3, 0], [0, 3]])).exit_code,
            EXIT_INVALID_SPEC
        );
        let mut oracle = JobSpec::new(Command::OracleCompare, Kind::C);
        oracle.max_n = Some(9);
        let out = run(&oracle);
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(out.document.unwrap().report.unwrap()["discrepancies"]
            .as_array()
            .unwrap()
            .is_empty());
    }

    #[test]
    fn documents_round_trip_and_repeat() {
        let jobs = [
            job(Command::GroupInfo, Kind::D, [[2, 0], [0, 2]]),
            job(Command::CutEnumerate, Kind::A, [[3, 2], [0, 1]]),
            job(Command::Skew, Kind::C, [[3, 0], [0, 3]]).with_gamma([3, 3, 3]),
            job(Command::UnskewRoundtrip, Kind::C, [[3, 0], [0, 3]]),
        ];
        for j in &jobs {
            let a = run(j).document.unwrap();
            let text = a.to_json();
            assert_eq!(QuiverDocument::from_json(&text).unwrap(), a);
            assert_eq!(run(j).document.unwrap().to_json(), text);
        }
    }
}
