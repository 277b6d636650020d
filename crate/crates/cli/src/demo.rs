//! Worked examples printed step by step.

use std::fmt::Write as _;

use factorlab::arith::{is_perfect_square, isqrt};
use factorlab::fermat::{fermat_standard, fermat_triangular, predict_steps, triangular_start, SearchBudget, TriangularSquares};
use factorlab::Nat;

/// Triangular walkthrough for `n`, with the standard scan for comparison.
pub fn walkthrough(n: &Nat) -> Result<String, String> {
    let mut out = String::new();
    let four_n = n * 4u32;
    let start = triangular_start(n);
    writeln!(out, "N = {n}, 4N = {four_n}").unwrap();
    writeln!(out, "triangular scan from index floor(2 N^(1/4)) = {start}").unwrap();
    let end = (n + 4u32) >> 1;
    let mut tested = 0u64;
    for (i, (x, square)) in TriangularSquares::starting_at(&start).enumerate() {
        if x > end {
            writeln!(out, "  passed (N + 4) / 2 without a nontrivial hit").unwrap();
            break;
        }
        if square < four_n {
            writeln!(out, "  x{i} = {x}: x^2 = {square} < 4N, skipped").unwrap();
            continue;
        }
        tested += 1;
        let diff = &square - &four_n;
        match is_perfect_square(&diff) {
            Some(y) => {
                let p: Nat = (&x - &y) >> 1;
                let q: Nat = (&x + &y) >> 1;
                writeln!(out, "  x{i} = {x}: x^2 - 4N = {diff} = {y}^2").unwrap();
                writeln!(out, "  p = (x - y)/2 = {p}, q = (x + y)/2 = {q}, {tested} triangular steps").unwrap();
                break;
            }
            None => writeln!(out, "  x{i} = {x}: x^2 - 4N = {diff}, not a square").unwrap(),
        }
    }
    let tri = fermat_triangular(n, SearchBudget::default()).map_err(|e| e.to_string())?;
    let std = fermat_standard(n, SearchBudget::default()).map_err(|e| e.to_string())?;
    let predicted = predict_steps(&std.p, n).map_err(|e| e.to_string())?;
    writeln!(
        out,
        "standard scan from isqrt(4N) = {}: {} steps (predicted p + N/p - isqrt(4N) = {predicted}); triangular: {} steps",
        isqrt(&four_n),
        std.steps,
        tri.steps
    )
    .unwrap();
    Ok(out)
}
