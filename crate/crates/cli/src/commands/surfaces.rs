use serde_json::json;
use workbench_core::surfaces::{classify_k5, genus, trace_faces, RotationSystem};

use super::parse_input;
use crate::args::SurfacesCmd;
use crate::error::CliResult;
use crate::report::{Experiment, Table, Verdict};

pub fn run(cmd: &SurfacesCmd) -> CliResult<Experiment> {
    Ok(match cmd {
        SurfacesCmd::Genus { input } => {
            let rs: RotationSystem = parse_input(input)?;
            let faces = trace_faces(&rs)?;
            let g = genus(&rs)?;
            Experiment::new(
                "surfaces.genus",
                json!({
                    "vertices": rs.vertex_count(),
                    "edges": rs.edge_count(),
                    "faces": faces.len(),
                    "face_lengths": faces.iter().map(Vec::len).collect::<Vec<_>>(),
                    "genus": g,
                }),
                Verdict::ReportOnly,
            )
            .param("input", input)
        }
        SurfacesCmd::ClassifyK5 { genus: target } => {
            let c = classify_k5(*target);
            let rows = c
                .genus_distribution
                .iter()
                .map(|(g, k)| vec![g.to_string(), k.to_string()])
                .collect();
            Experiment::new(
                "surfaces.classify-k5",
                json!({
                    "genus": c.target_genus,
                    "classes": c.classes_with_reversal.len(),
                    "classes_relabelling_only": c.classes_relabelling.len(),
                    "total_systems": c.total_systems,
                    "genus_distribution": c.genus_distribution,
                    "min_genus": c.min_genus,
                    "max_genus": c.max_genus,
                    "representatives": c.classes_with_reversal,
                }),
                Verdict::ReportOnly,
            )
            .param("genus", target)
            .table(Table {
                header: vec!["genus".into(), "systems".into()],
                rows,
            })
        }
    })
}
