//! Formulas shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nucad_core::formula::parse_formula;
use nucad_core::Formula;

pub const EXAMPLE: &str = "vars x, y; 16y - 16x^2 - 8x - 1 > 0 /\\ x^2 + y^2 - 1 > 0";

pub const FIXED: [(&str, &str); 4] = [
    ("example", EXAMPLE),
    ("half-line", "vars x; x > 0"),
    ("disc", "vars x, y; x^2 + y^2 - 1 < 0"),
    (
        "sphere-paraboloid",
        "vars x, y, z; x^2 + y^2 + z^2 - 1 > 0 /\\ z - x^2 - y^2 > 0",
    ),
];

const NAMES: [&str; 3] = ["x", "y", "z"];
const RELATIONS: [&str; 6] = ["<", "<=", ">", ">=", "=", "/="];

fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> String {
    let terms = rng.gen_range(2..=4);
    let mut out = String::new();
    for t in 0..terms {
        let c: i32 = loop {
            let c = rng.gen_range(-5..=5);
            if c != 0 {
                break c;
            }
        };
        let mut mono = Vec::new();
        let mut budget: u32 = rng.gen_range(0..=3);
        // Keep the top variable present in the first term so the atom has
        // full level.
        if t == 0 {
            budget = budget.max(1);
            let e = rng.gen_range(1..=budget);
            mono.push(format!("{}^{e}", NAMES[n - 1]));
            budget -= e;
        }
        while budget > 0 {
            let v = rng.gen_range(0..n);
            let e = rng.gen_range(1..=budget);
            mono.push(format!("{}^{e}", NAMES[v]));
            budget -= e;
        }
        let sign = if c < 0 { " - " } else { " + " };
        if t > 0 || c < 0 {
            out.push_str(if t == 0 { "-" } else { sign });
        }
        out.push_str(&c.abs().to_string());
        for m in mono {
            out.push_str(" * ");
            out.push_str(&m);
        }
    }
    out
}

/// Seeded random conjunctions of at most 3 atoms of degree at most 3 in
/// at most 3 variables.
pub fn random_formulas(count: usize, seed: u64) -> Vec<(String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = i % 3 + 1;
            let atoms = rng.gen_range(1..=3);
            let body: Vec<String> = (0..atoms)
                .map(|_| {
                    let rel = RELATIONS.choose(&mut rng).expect("nonempty");
                    format!("{} {rel} 0", random_poly(&mut rng, n))
                })
                .collect();
            let text = format!("vars {}; {}", NAMES[..n].join(", "), body.join(" /\\ "));
            (format!("random-{i}"), text)
        })
        .collect()
}

/// The fixed formulas followed by ten random ones.
pub fn corpus() -> Vec<(String, Formula)> {
    FIXED
        .iter()
        .map(|(name, text)| (name.to_string(), text.to_string()))
        .chain(random_formulas(10, 2024))
        .map(|(name, text)| {
            let f = parse_formula(&text).unwrap_or_else(|e| panic!("{name}: {text}: {e}"));
            (name, f)
        })
        .collect()
}
