use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ordercraft"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn ordercraft")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Golden file name, expected size, and `generate` flags.
pub const GOLDEN: &[(&str, usize, &[&str])] = &[
    ("finite_powerset_3", 8, &["--family", "finite_powerset", "--n", "3"]),
    ("omega_star_grid_3", 6, &["--family", "omega_star_grid", "--n", "3"]),
    ("delta4", 15, &["--family", "delta", "--n", "4"]),
    ("delta_2_bottom", 7, &["--family", "delta", "--n", "2", "--with-bottom"]),
    ("gamma_3", 7, &["--family", "gamma", "--n", "3"]),
    ("v_3", 4, &["--family", "v", "--n", "3"]),
    ("l_alpha_2", 5, &["--family", "l_alpha", "--a", "2"]),
    ("m5", 5, &["--family", "m5"]),
    (
        "sierpinskisation_w2_alternating_6",
        6,
        &["--family", "sierpinskisation", "--coeffs", "2,0", "--n", "6"],
    ),
    (
        "sierpinskisation_w2_block2_6",
        6,
        &["--family", "sierpinskisation", "--coeffs", "2,0", "--n", "6", "--scheme", "block", "--block", "2"],
    ),
    (
        "sierpinskisation_w2_shuffle7_6",
        6,
        &["--family", "sierpinskisation", "--coeffs", "2,0", "--n", "6", "--scheme", "shuffle", "--seed", "7"],
    ),
    ("lattice_sierp_2_4", 8, &["--family", "lattice_sierp", "--coeffs", "2", "--n", "4"]),
    ("omega_eta_2", 7, &["--family", "omega_eta", "--n", "2"]),
    ("s_alpha_w1_4", 5, &["--family", "s_alpha", "--coeffs", "1,1", "--n", "4"]),
];
