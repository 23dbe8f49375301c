//! Shared formatting for human and JSON output.

use serde_json::{json, Value};

use actkit::algebra::{Act, ActHom, Subact};
use actkit::catalog::{serialize_catalog, Block, CatalogDocument, NamedSystem};
use actkit::classes::InjectivityFailure;
use actkit::equations::EquationSystem;
use actkit::preenvelope::FactoringReport;

pub fn labels_of(act: &Act, elems: &[usize]) -> Vec<String> {
    elems.iter().map(|&a| act.label(a).to_string()).collect()
}

pub fn set(act: &Act, elems: &[usize]) -> String {
    format!("{{{}}}", labels_of(act, elems).join(", "))
}

pub fn subact(sub: &Subact) -> String {
    set(sub.ambient(), sub.members())
}

pub fn act_json(act: &Act) -> Value {
    let rows: Vec<Vec<&str>> = (0..act.size()).map(|a| act.row(a).iter().map(|&b| act.label(b)).collect()).collect();
    json!({
        "name": act.name(),
        "monoid": act.monoid().name(),
        "elements": act.labels(),
        "action": rows,
    })
}

pub fn map_pairs(hom: &ActHom) -> Vec<[String; 2]> {
    hom.map()
        .iter()
        .enumerate()
        .map(|(a, &b)| [hom.source().label(a).to_string(), hom.target().label(b).to_string()])
        .collect()
}

pub fn hom_json(hom: &ActHom) -> Value {
    json!({
        "source": hom.source().name(),
        "target": hom.target().name(),
        "map": map_pairs(hom),
    })
}

pub fn map_line(hom: &ActHom) -> String {
    map_pairs(hom).iter().map(|[a, b]| format!("{a}->{b}")).collect::<Vec<_>>().join(" ")
}

/// A system as a `system` block, constants taken as written.
pub fn system_text(name: &str, system: &EquationSystem) -> String {
    let doc =
        CatalogDocument { blocks: vec![Block::System(NamedSystem { name: name.to_string(), system: system.clone() })] };
    serialize_catalog(&doc)
}

pub fn failure_json(failure: &InjectivityFailure) -> Value {
    let inner = &failure.instance.inner;
    json!({
        "ambient": act_json(inner.ambient()),
        "subact": labels_of(inner.ambient(), inner.members()),
        "hom": map_pairs(&failure.hom),
    })
}

pub fn failure_text(failure: &InjectivityFailure) -> String {
    let inner = &failure.instance.inner;
    format!(
        "{} inside {} (size {}); hom {} does not extend",
        subact(inner),
        inner.ambient().name(),
        inner.ambient().size(),
        map_line(&failure.hom)
    )
}

pub fn factoring_json(report: &FactoringReport) -> Value {
    json!({
        "candidate": hom_json(&report.candidate),
        "class": report.class.label(),
        "verify_bound": report.verify_bound,
        "verified": report.verified,
        "counterexample": report.counterexample.as_ref().map(|c| json!({
            "target": act_json(&c.target),
            "f": map_pairs(&c.f),
        })),
        "certificates": report.certificates.iter().map(|c| json!({
            "target": c.target.name(),
            "f": map_pairs(&c.f),
            "g": map_pairs(&c.g),
        })).collect::<Vec<_>>(),
    })
}

pub fn factoring_text(report: &FactoringReport) -> String {
    let mut out = format!(
        "class {}, bound {}: {} factorizations found\n",
        report.class.label(),
        report.verify_bound,
        report.certificates.len()
    );
    match &report.counterexample {
        None => out.push_str("preenvelope: verified\n"),
        Some(c) => {
            out.push_str("preenvelope: NOT verified\n");
            out.push_str(&format!("map {} into {} has no factorization\n", map_line(&c.f), c.target.name()));
            let doc = CatalogDocument { blocks: vec![Block::Act(c.target.clone())] };
            out.push_str(&serialize_catalog(&doc));
        }
    }
    out
}
