//! Built-in experiment configurations.

use serde_json::{json, Value};

const ROTATION: &str = "sqrt(2)-1";

fn rotation() -> Value {
    json!({"type": "circle_rotation", "theta": ROTATION})
}

fn chars() -> (Value, Value) {
    (
        json!({"type": "character", "m": [1]}),
        json!({"type": "character", "m": [-1]}),
    )
}

fn cycle12_tables() -> (Value, Value) {
    (
        json!({"type": "table", "values": [1, -0.5, 0.25, 0.75, -1, 0.5, 0, -0.75, 1, 0.25, -0.25, 0.5]}),
        json!({"type": "table", "values": [0.5, 1, -1, 0.25, 0.75, -0.5, -0.25, 1, 0, -0.75, 0.5, 0.25]}),
    )
}

fn tb(name: &str, system: Value, f: Value, g: Value, alpha: Value, beta: Value, n_max: u64) -> Value {
    json!({
        "kind": "tb_direct",
        "name": name,
        "system": system,
        "f": f,
        "g": g,
        "params": {"alpha": alpha, "beta": beta, "c": 1.02},
        "schedule": {"n_max": n_max, "lambda_root": 8},
        "sample": {"points": 8, "seed": 1}
    })
}

/// Names and one-line descriptions of all presets, in listing order.
pub const PRESETS: &[(&str, &str)] = &[
    (
        "trivial_ones",
        "double average with f = g = 1 on the rotation; every value is 1",
    ),
    (
        "tb_rotation_char",
        "double average, rotation by sqrt(2)-1, characters e(x), e(-x), alpha=2, beta=1, c=1.02, N=10^6",
    ),
    ("tb_rotation_char_4_2", "as tb_rotation_char with alpha=4, beta=2"),
    (
        "tb_cycle12_table",
        "double average on the 12-cycle with table observables, alpha=3, beta=2, N=10^6",
    ),
    (
        "tb_bernoulli_zero",
        "double average of mean-zero symbols on the Bernoulli shift, alpha=2, beta=1, N=10^6",
    ),
    (
        "reflected_rotation",
        "reflected average alpha=1, beta=-1 on the rotation with characters, N=10^6",
    ),
    (
        "linear_rotation_antidiagonal",
        "linear average f(T^n x) g(T^-n x) on the rotation with characters, N=10^6",
    ),
    (
        "limit_rotation_irrational",
        "direct double average vs the gamma-formula limit on the rotation, gamma=2",
    ),
    (
        "limit_cycle12_rational",
        "direct double average vs the p/q-formula limit on the 12-cycle, p=3, q=2",
    ),
    ("equidist_power", "distribution of {n^1.02} at N = 10^4, 10^5, 10^6"),
    ("equidist_sqrt2", "distribution of {sqrt(2) n} at N = 10^6"),
    (
        "w_decay_rotation",
        "empirical L1 norm of the kernel-weighted average W over N = 2^10..2^20",
    ),
    (
        "vdc_suite",
        "van der Corput inequality on the worked example and 200 random instances",
    ),
    (
        "tc_torus",
        "commuting-family average on the 2-torus, b=(1,1), d=(2,2), c=1.02",
    ),
    (
        "sup_probe_rotation",
        "running sup of single averages of e(x) along n^1.02 on the rotation",
    ),
    (
        "bae_rotation",
        "B, A and E averages along floor(L n^1.02) on the suspended rotation",
    ),
];

pub fn preset(name: &str) -> Option<Value> {
    let (f, g) = chars();
    let v = match name {
        "trivial_ones" => tb(
            name,
            rotation(),
            json!({"type": "constant", "re": 1}),
            json!({"type": "constant", "re": 1}),
            json!(2),
            json!(1),
            10_000,
        ),
        "tb_rotation_char" => tb(name, rotation(), f, g, json!(2), json!(1), 1_000_000),
        "tb_rotation_char_4_2" => tb(name, rotation(), f, g, json!(4), json!(2), 1_000_000),
        "tb_cycle12_table" => {
            let (f, g) = cycle12_tables();
            tb(
                name,
                json!({"type": "finite_cycle", "modulus": 12}),
                f,
                g,
                json!(3),
                json!(2),
                1_000_000,
            )
        }
        "tb_bernoulli_zero" => tb(
            name,
            json!({"type": "bernoulli_shift", "alphabet": 2, "prf_seed": 17}),
            json!({"type": "bernoulli_mean_zero"}),
            json!({"type": "bernoulli_mean_zero"}),
            json!(2),
            json!(1),
            1_000_000,
        ),
        "reflected_rotation" => tb(name, rotation(), f, g, json!(1), json!(-1), 1_000_000),
        "linear_rotation_antidiagonal" => json!({
            "kind": "linear_baseline",
            "name": name,
            "system": rotation(),
            "f": f,
            "g": g,
            "params": {"a": 1, "b": -1, "d": 0},
            "schedule": {"n_max": 1_000_000, "lambda_root": 8},
            "sample": {"points": 8, "seed": 1}
        }),
        "limit_rotation_irrational" => {
            let mut v = tb(name, rotation(), f, g, json!(2), json!(1), 1_000_000);
            v["kind"] = json!("limit_compare");
            v["params"]["gamma"] = json!(2);
            v["params"]["inner_n"] = json!(100_000);
            v["params"]["grid"] = json!(64);
            v
        }
        "limit_cycle12_rational" => {
            let (f, g) = cycle12_tables();
            let mut v = tb(
                name,
                json!({"type": "finite_cycle", "modulus": 12}),
                f,
                g,
                json!(3),
                json!(2),
                1_000_000,
            );
            v["kind"] = json!("limit_compare");
            v["params"]["p"] = json!(3);
            v["params"]["q"] = json!(2);
            // multiples of 4·12 make every partial inner average a full period
            v["params"]["inner_n"] = json!(1200);
            v["params"]["grid"] = json!(0);
            v
        }
        "equidist_power" => json!({
            "kind": "equidistribution",
            "name": name,
            "params": {"alpha": 1, "c": 1.02, "bins": 100, "ik_k": 10, "ik_s": 0.5},
            "schedule": {"checkpoints": [10_000, 100_000, 1_000_000]}
        }),
        "equidist_sqrt2" => json!({
            "kind": "equidistribution",
            "name": name,
            "params": {"alpha": "sqrt(2)", "c": 1, "bins": 100},
            "schedule": {"checkpoints": [10_000, 100_000, 1_000_000]}
        }),
        "w_decay_rotation" => json!({
            "kind": "w_decay",
            "name": name,
            "system": rotation(),
            "f": f,
            "g": g,
            "params": {"alpha": "sqrt(2)", "beta": 1, "c": 1.02, "k": 1},
            "schedule": {"n_max": 1 << 20, "n_min": 1 << 10, "lambda_root": 1},
            "sample": {"points": 8, "seed": 1}
        }),
        "vdc_suite" => json!({
            "kind": "vdc_suite",
            "name": name,
            "params": {"instances": 200},
            "sample": {"points": 1, "seed": 2024}
        }),
        "tc_torus" => json!({
            "kind": "tc_multi",
            "name": name,
            "system": {"type": "torus_translation", "theta": [ROTATION, "sqrt(3)-1"]},
            "f": {"type": "character", "m": [1, 1]},
            "g": {"type": "character", "m": [-1, 0]},
            "params": {"b_vec": [1, 1], "d_vec": [2, 2], "c": 1.02},
            "schedule": {"n_max": 100_000, "lambda_root": 8},
            "sample": {"points": 8, "seed": 1}
        }),
        "sup_probe_rotation" => json!({
            "kind": "sup_probe",
            "name": name,
            "system": rotation(),
            "f": f,
            "params": {"alphas": [1], "c": 1.02},
            "schedule": {"n_max": 100_000, "lambda_root": 8},
            "sample": {"points": 8, "seed": 1}
        }),
        "bae_rotation" => json!({
            "kind": "bae_family",
            "name": name,
            "system": rotation(),
            "f": f,
            "g": g,
            "params": {"gamma": "sqrt(2)", "beta": 1, "c": 1.02, "k": 1, "variant": "B"},
            "schedule": {"n_max": 100_000, "lambda_root": 8},
            "sample": {"points": 8, "seed": 1}
        }),
        _ => return None,
    };
    Some(v)
}
