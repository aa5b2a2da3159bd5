//! Classification report rendering.
//!
//! The JSON form keeps a stable field set across versions:
//! `{is_edm, embedding_dim, rank_D, spherical, regular, radius_sq,
//! min_shift, center, diagnostics: {rank_test, psd_shift_test,
//! center_residual, indeterminate}, tolerance}`. Fields that do not apply
//! (radius of a non-spherical matrix, residual of a non-EDM) are `null`,
//! never absent. Numbers carry 17 significant digits so reports reproduce
//! the computed doubles exactly.

use edmkit::EdmClassification;

pub fn json_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{:.16e}", v)
    } else {
        "null".into()
    }
}

fn json_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "null".into(), json_f64)
}

fn json_center(c: &EdmClassification) -> String {
    match c.sphere.as_ref().and_then(|s| s.center.as_ref()) {
        None => "null".into(),
        Some(a) => {
            let vals: Vec<String> = a.iter().map(|v| json_f64(*v)).collect();
            format!("[{}]", vals.join(", "))
        }
    }
}

pub fn classification_json(c: &EdmClassification, tol_rel: f64) -> String {
    let sphere = c.sphere.as_ref();
    format!(
        concat!(
            "{{\n",
            "  \"is_edm\": {},\n",
            "  \"embedding_dim\": {},\n",
            "  \"rank_D\": {},\n",
            "  \"spherical\": {},\n",
            "  \"regular\": {},\n",
            "  \"radius_sq\": {},\n",
            "  \"min_shift\": {},\n",
            "  \"center\": {},\n",
            "  \"diagnostics\": {{\n",
            "    \"rank_test\": {},\n",
            "    \"psd_shift_test\": {},\n",
            "    \"center_residual\": {},\n",
            "    \"indeterminate\": {}\n",
            "  }},\n",
            "  \"tolerance\": {}\n",
            "}}"
        ),
        c.verdict.is_edm,
        c.verdict.embedding_dim,
        c.verdict.rank_d,
        c.spherical,
        c.regular,
        json_opt(sphere.map(|s| s.radius_sq)),
        json_opt(sphere.map(|s| s.min_shift)),
        json_center(c),
        c.diagnostics.rank_test,
        c.diagnostics.psd_shift_test,
        json_opt(c.diagnostics.center_residual),
        c.diagnostics.indeterminate,
        json_f64(tol_rel),
    )
}

pub fn classification_text(c: &EdmClassification, tol_rel: f64) -> String {
    let mut out = String::new();
    out.push_str(&format!("is_edm: {}\n", c.verdict.is_edm));
    out.push_str(&format!("embedding_dim: {}\n", c.verdict.embedding_dim));
    out.push_str(&format!("rank_D: {}\n", c.verdict.rank_d));
    out.push_str(&format!("spherical: {}\n", c.spherical));
    out.push_str(&format!("regular: {}\n", c.regular));
    match &c.sphere {
        Some(s) => {
            out.push_str(&format!("radius_sq: {}\n", s.radius_sq));
            out.push_str(&format!("min_shift: {}\n", s.min_shift));
            match &s.center {
                Some(a) => {
                    let vals: Vec<String> = a.iter().map(|v| v.to_string()).collect();
                    out.push_str(&format!("center: [{}]\n", vals.join(", ")));
                }
                None => out.push_str("center: none\n"),
            }
        }
        None => {
            out.push_str("radius_sq: none\n");
            out.push_str("min_shift: none\n");
            out.push_str("center: none\n");
        }
    }
    out.push_str("diagnostics:\n");
    out.push_str(&format!("  rank_test: {}\n", c.diagnostics.rank_test));
    out.push_str(&format!(
        "  psd_shift_test: {}\n",
        c.diagnostics.psd_shift_test
    ));
    match c.diagnostics.center_residual {
        Some(r) => out.push_str(&format!("  center_residual: {r:e}\n")),
        None => out.push_str("  center_residual: none\n"),
    }
    out.push_str(&format!(
        "  indeterminate: {}\n",
        c.diagnostics.indeterminate
    ));
    out.push_str(&format!("tolerance: {tol_rel:e}\n"));
    out
}
