//! The bundled examples, with their expected exit codes.

pub const FILES: &[(&str, &str)] = &[
    ("one_dimensional.json", include_str!("../corpus/one_dimensional.json")),
    ("circle_01.json", include_str!("../corpus/circle_01.json")),
    ("stokes_data_11.json", include_str!("../corpus/stokes_data_11.json")),
    ("two_level.json", include_str!("../corpus/two_level.json")),
    ("point_ab.json", include_str!("../corpus/point_ab.json")),
    ("polyhedral_square.json", include_str!("../corpus/polyhedral_square.json")),
    ("interval_intro.json", include_str!("../corpus/interval_intro.json")),
    ("local_system.json", include_str!("../corpus/local_system.json")),
    ("trivial_rank1.json", include_str!("../corpus/trivial_rank1.json")),
];

#[cfg(test)]
pub fn file(name: &str) -> &'static str {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).expect("bundled file")
}

pub enum Job {
    Build(&'static str),
    Check(crate::commands::Which, &'static str, Option<&'static str>),
    Directions(&'static str),
    Tangent(&'static str, &'static str),
}

pub struct Entry {
    pub name: &'static str,
    pub job: Job,
    /// Overrides `--trials` for randomized checks.
    pub trials: Option<usize>,
    pub expected_exit: i32,
}

pub fn entries() -> Vec<Entry> {
    use crate::commands::Which::*;
    let e = |name, job, trials, expected_exit| Entry { name, job, trials, expected_exit };
    vec![
        e("one-dimensional circle", Job::Build("one_dimensional.json"), None, 0),
        e("Stokes matrices on {0, z^-1}", Job::Check(Stokes, "circle_01.json", Some("stokes_data_11.json")), None, 0),
        e("descent on {0, z^-1}", Job::Check(Descent, "circle_01.json", Some("stokes_data_11.json")), None, 0),
        e("directions of {0, z^-1}", Job::Directions("circle_01.json"), None, 0),
        e("point with a < b", Job::Check(Elementary, "point_ab.json", None), None, 1),
        e("polyhedral square", Job::Build("polyhedral_square.json"), None, 0),
        e("interval with one wall", Job::Check(Elementary, "interval_intro.json", None), None, 0),
        e("levels of {0, z^-1, z^-2}", Job::Check(Devissage, "two_level.json", None), Some(8), 0),
        e("trivial rank-1 local system", Job::Tangent("local_system.json", "trivial_rank1.json"), None, 0),
    ]
}
