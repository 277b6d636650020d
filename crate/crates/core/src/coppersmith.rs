//! Small integer roots of `(a x + c)(b y + d) - N` by lattice reduction.
//!
//! A box of candidate roots is recentred, a small lattice of polynomials
//! sharing the root modulo a working modulus is reduced, and a short vector
//! `g` that provably vanishes over the integers and is not a multiple of `f`
//! yields the roots through `Res_y(f, g)`. Boxes too wide for one lattice are
//! halved; each half gets an exact range for the partner variable.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{gcd, isqrt, mod_inverse, Factorization, Int, Nat};
use crate::lattice::{lll_reduce, Basis};
use crate::polynomial::{howgrave_predicate, integer_roots, multiple_bound_predicate, resultant, MultiPoly};
use crate::residue::{theorem4_pairs, ResidueError, ResiduePair};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoppersmithError {
    #[error("no root in the search box")]
    NoRoot,
    #[error("no reduced polynomial passed the independence gate")]
    NoIndependentPolynomial,
    #[error("moduli {m} and {n} are not coprime")]
    NotCoprime { m: Nat, n: Nat },
    #[error("{0} is not invertible modulo the bit window")]
    NonInvertibleResidue(Nat),
    #[error("search exhausted without a nontrivial factor")]
    Exhausted,
    #[error("more than {0} boxes visited")]
    BoxBudget(usize),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

/// `f(x, y) = (x_scale x + x_offset)(y_scale y + y_offset) - n`.
///
/// Only roots where both factors are positive are reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorFamily {
    pub n: Nat,
    pub x_scale: Nat,
    pub x_offset: Int,
    pub y_scale: Nat,
    pub y_offset: Int,
}

fn int(n: &Nat) -> Int {
    Int::from(n.clone())
}

fn nat(n: &Int) -> Nat {
    n.magnitude().clone()
}

impl FactorFamily {
    pub fn new(n: Nat, x_scale: Nat, x_offset: Int, y_scale: Nat, y_offset: Int) -> Result<Self, CoppersmithError> {
        if n < Nat::from(2u32) {
            return Err(CoppersmithError::InvalidProblem(format!("N = {n} is too small")));
        }
        if x_scale.is_zero() || y_scale.is_zero() {
            return Err(CoppersmithError::InvalidProblem("zero scale".into()));
        }
        Ok(FactorFamily {
            n,
            x_scale,
            x_offset,
            y_scale,
            y_offset,
        })
    }

    /// `(P0 + x)(Q0 + y) - N`.
    pub fn near(n: Nat, p0: Nat, q0: Nat) -> Result<Self, CoppersmithError> {
        Self::new(n, Nat::one(), int(&p0), Nat::one(), int(&q0))
    }

    fn swapped(&self) -> FactorFamily {
        FactorFamily {
            n: self.n.clone(),
            x_scale: self.y_scale.clone(),
            x_offset: self.y_offset.clone(),
            y_scale: self.x_scale.clone(),
            y_offset: self.x_offset.clone(),
        }
    }

    pub fn x_factor(&self, x: &Int) -> Int {
        int(&self.x_scale) * x + &self.x_offset
    }

    pub fn y_factor(&self, y: &Int) -> Int {
        int(&self.y_scale) * y + &self.y_offset
    }

    pub fn value(&self, x: &Int, y: &Int) -> Int {
        self.x_factor(x) * self.y_factor(y) - int(&self.n)
    }

    /// `f(x + cx, y + cy)`.
    pub fn centered(&self, cx: &Int, cy: &Int) -> MultiPoly {
        let a = MultiPoly::from_terms(2, [(vec![1, 0], int(&self.x_scale)), (vec![0, 0], self.x_factor(cx))]);
        let b = MultiPoly::from_terms(2, [(vec![0, 1], int(&self.y_scale)), (vec![0, 0], self.y_factor(cy))]);
        &(&a * &b) - &MultiPoly::constant(int(&self.n), 2)
    }

    pub fn polynomial(&self) -> MultiPoly {
        self.centered(&Int::zero(), &Int::zero())
    }

    /// The `y` with `f(x, y) = 0` and both factors positive, if integral.
    pub fn y_for_x(&self, x: &Int) -> Option<Int> {
        let a = self.x_factor(x);
        if !a.is_positive() {
            return None;
        }
        let (b, rem) = int(&self.n).div_rem(&a);
        if !rem.is_zero() {
            return None;
        }
        let (y, rem) = (b - &self.y_offset).div_mod_floor(&int(&self.y_scale));
        rem.is_zero().then_some(y)
    }

    pub fn x_for_y(&self, y: &Int) -> Option<Int> {
        self.swapped().y_for_x(y)
    }

    /// Smallest `x` with a positive first factor.
    fn x_floor(&self) -> Int {
        (Int::one() - &self.x_offset).div_ceil(&int(&self.x_scale))
    }

    /// Exact hull of the `y` values of roots with `x` in `[lo, hi]`.
    pub fn y_range(&self, lo: &Int, hi: &Int) -> Option<(Int, Int)> {
        let lo = lo.max(&self.x_floor()).clone();
        if &lo > hi {
            return None;
        }
        let n = int(&self.n);
        // N / A is decreasing in A > 0
        let b_lo = n.div_ceil(&self.x_factor(hi));
        let b_hi = n.div_floor(&self.x_factor(&lo));
        let scale = int(&self.y_scale);
        let y_lo = (b_lo - &self.y_offset).div_ceil(&scale);
        let y_hi = (b_hi - &self.y_offset).div_floor(&scale);
        (y_lo <= y_hi).then_some((y_lo, y_hi))
    }

    pub fn x_range(&self, lo: &Int, hi: &Int) -> Option<(Int, Int)> {
        self.swapped().y_range(lo, hi)
    }
}

/// Inclusive ranges for `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBox {
    pub x: (Int, Int),
    pub y: (Int, Int),
}

fn center_and_half(range: &(Int, Int)) -> (Int, Nat) {
    let c = (&range.0 + &range.1).div_floor(&Int::from(2));
    let half = (&c - &range.0).max(&range.1 - &c);
    (c, nat(&half).max(Nat::one()))
}

impl SearchBox {
    /// `|x| <= x_bound`, `|y| <= y_bound`.
    pub fn symmetric(x_bound: &Nat, y_bound: &Nat) -> Self {
        SearchBox {
            x: (-int(x_bound), int(x_bound)),
            y: (-int(y_bound), int(y_bound)),
        }
    }

    pub fn center(&self) -> (Int, Int) {
        (center_and_half(&self.x).0, center_and_half(&self.y).0)
    }

    /// Bounds `(X, Y)` on `|x - cx|`, `|y - cy|` (at least 1).
    pub fn half_widths(&self) -> (Nat, Nat) {
        (center_and_half(&self.x).1, center_and_half(&self.y).1)
    }

    fn width(range: &(Int, Int)) -> Int {
        &range.1 - &range.0 + 1
    }

    /// Shrinks the box to the exact hull of roots it can contain.
    fn tighten(&self, family: &FactorFamily) -> Option<SearchBox> {
        let (ylo, yhi) = family.y_range(&self.x.0, &self.x.1)?;
        let y = (ylo.max(self.y.0.clone()), yhi.min(self.y.1.clone()));
        if y.0 > y.1 {
            return None;
        }
        let (xlo, xhi) = family.x_range(&y.0, &y.1)?;
        let x = (xlo.max(self.x.0.clone()), xhi.min(self.x.1.clone()));
        (x.0 <= x.1).then_some(SearchBox { x, y })
    }
}

/// A root-finding problem: a factor family and a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateProblem {
    pub family: FactorFamily,
    pub search: SearchBox,
}

fn primitive(f: MultiPoly) -> MultiPoly {
    let content = f.content();
    if content.is_one() || content.is_zero() {
        return f;
    }
    f.div_exact(&MultiPoly::constant(int(&content), f.nvars())).expect("content divides")
}

impl BivariateProblem {
    /// `(P0 + x)(Q0 + y) - N` with `|x| <= X`, `|y| <= Y`.
    pub fn near(n: Nat, p0: Nat, q0: Nat, x_bound: Nat, y_bound: Nat) -> Result<Self, CoppersmithError> {
        if x_bound.is_zero() || y_bound.is_zero() {
            return Err(CoppersmithError::InvalidProblem("bounds must be positive".into()));
        }
        Ok(BivariateProblem {
            search: SearchBox::symmetric(&x_bound, &y_bound),
            family: FactorFamily::near(n, p0, q0)?,
        })
    }

    /// `(m x + c)(n y + d) - N` over an explicit box.
    pub fn residue_form(n: Nat, m: Nat, c: Nat, mn: Nat, d: Nat, search: SearchBox) -> Result<Self, CoppersmithError> {
        Ok(BivariateProblem {
            family: FactorFamily::new(n, m, int(&c), mn, int(&d))?,
            search,
        })
    }

    /// The box shrunk to the exact hull of roots it can hold (`None` if empty).
    pub fn effective_box(&self) -> Option<SearchBox> {
        self.search.tighten(&self.family)
    }

    fn working_box(&self) -> SearchBox {
        self.effective_box().unwrap_or_else(|| self.search.clone())
    }

    /// The primitive polynomial recentred on the effective box.
    pub fn polynomial(&self) -> MultiPoly {
        let (cx, cy) = self.working_box().center();
        primitive(self.family.centered(&cx, &cy))
    }

    /// Half-widths `(X, Y)` of the effective box.
    pub fn bounds(&self) -> (Nat, Nat) {
        self.working_box().half_widths()
    }

    /// Height `W` of the recentred polynomial scaled by the half-widths.
    pub fn scaled_height(&self) -> Nat {
        let (x, y) = self.bounds();
        self.polynomial().scale_vars(&[x, y]).expect("two variables").height()
    }

    /// `(XY)^3 <= W^2`: the regime where one lattice provably finds every root.
    pub fn within_certified_bound(&self) -> bool {
        let (x, y) = self.bounds();
        let w = self.scaled_height();
        (x * y).pow(3) <= &w * &w
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverOptions {
    /// Halve boxes the lattice cannot handle; otherwise fail with
    /// `NoIndependentPolynomial`.
    pub allow_split: bool,
    /// 1: four-dimensional lattice; 2: adds the nine-dimensional one as a
    /// fallback on the initial box.
    pub max_level: u32,
    /// Boxes this narrow (in either variable) are scanned directly.
    pub scan_width: u64,
    pub max_boxes: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            allow_split: true,
            max_level: 2,
            scan_width: 32,
            max_boxes: 1 << 18,
        }
    }
}

impl SolverOptions {
    pub fn lattice_only() -> Self {
        SolverOptions {
            allow_split: false,
            scan_width: 0,
            ..Self::default()
        }
    }
}

/// Evidence that a box was searched exactly: `g` vanishes at every root of
/// `f` in the box and is not a multiple of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// The recentred primitive polynomial.
    pub f: MultiPoly,
    pub g: MultiPoly,
    pub modulus: Nat,
    pub bounds: [Nat; 2],
    pub center: (Int, Int),
    pub level: u32,
}

/// `Res_y(f, g)`, or `g` itself when it does not involve `y`.
pub fn eliminate_y(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if g.degree_in(1) == 0 {
        return g.clone();
    }
    resultant(f, g, 1).expect("both polynomials involve y")
}

impl Certificate {
    fn degree(&self) -> u32 {
        self.f.max_degree().max(self.g.max_degree())
    }

    /// Rechecks the three gate conditions from scratch.
    pub fn verify(&self) -> bool {
        let Ok(fs) = self.f.scale_vars(&self.bounds) else {
            return false;
        };
        let Ok(gs) = self.g.scale_vars(&self.bounds) else {
            return false;
        };
        howgrave_predicate(&self.g, &self.modulus, &self.bounds)
            && multiple_bound_predicate(&fs, &gs, self.degree())
            && !eliminate_y(&self.f, &self.g).is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSolution {
    pub x0: Int,
    pub y0: Int,
    pub z0: Option<u64>,
    pub p: Nat,
    pub q: Nat,
}

impl RootSolution {
    fn new(family: &FactorFamily, x0: Int, y0: Int) -> Self {
        let p = family.x_factor(&x0);
        let q = family.y_factor(&y0);
        assert!(p.is_positive() && q.is_positive() && &p * &q == int(&family.n), "root does not factor N");
        RootSolution {
            x0,
            y0,
            z0: None,
            p: nat(&p),
            q: nat(&q),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.p.is_one() || self.q.is_one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateOutcome {
    /// Every root in the box, ordered by `(x0, y0)`.
    pub solutions: Vec<RootSolution>,
    /// The initial box met `(XY)^3 <= W^2`.
    pub certified: bool,
    /// Largest lattice dimension used (0 when only scans ran).
    pub lattice_dim: usize,
    pub lattice_runs: usize,
    pub boxes: usize,
    pub certificates: Vec<Certificate>,
}

struct Attempt {
    roots: Vec<(Int, Int)>,
    certificate: Certificate,
    dim: usize,
}

fn symmetric_mod(v: &Int, m: &Int) -> Int {
    let r = v.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn solver_delta() -> BigRational {
    BigRational::new(BigInt::from(99), BigInt::from(100))
}

// Lattice spanned by x^i y^j X^(k-i) Y^(k-j) q for i, j <= k and
// x^i y^j n otherwise (i, j <= k + 1), with q = f / f(0,0) mod n and
// n = u (XY)^k. Every row vanishes mod n at the root.
fn lattice_attempt(family: &FactorFamily, bx: &SearchBox, level: u32) -> Option<Attempt> {
    let k = level - 1;
    let (mut cx, cy) = bx.center();
    let mut roots = Vec::new();
    if family.value(&cx, &cy).is_zero() {
        roots.push((cx.clone(), cy.clone()));
        cx = if cx < bx.x.1 { cx + 1 } else { cx - 1 };
    }
    let f = primitive(family.centered(&cx, &cy));
    let a00 = f.coefficient(&[0, 0]);
    debug_assert!(!a00.is_zero());
    let a00_abs = nat(&a00);
    let mut x_bound = nat(&(&cx - &bx.x.0).max(&bx.x.1 - &cx)) + 1u32;
    let mut y_bound = nat(&(&cy - &bx.y.0).max(&bx.y.1 - &cy)) + 1u32;
    if k > 0 {
        while !gcd(&a00_abs, &x_bound).is_one() {
            x_bound += 1u32;
        }
        while !gcd(&a00_abs, &y_bound).is_one() {
            y_bound += 1u32;
        }
    }
    let bounds = [x_bound.clone(), y_bound.clone()];
    let fs = f.scale_vars(&bounds).ok()?;
    let mut u: Nat = (fs.height() >> 2u32).max(Nat::one());
    while !gcd(&u, &a00_abs).is_one() {
        u -= 1u32;
    }
    let modulus = &u * (&x_bound * &y_bound).pow(k);
    let m = int(&modulus);
    let inverse = if modulus.is_one() { Int::zero() } else { mod_inverse(&a00, &m).ok()? };
    let q = MultiPoly::from_terms(2, f.terms().map(|(e, c)| (e.clone(), symmetric_mod(&(c * &inverse), &m))));

    let top = k + 1;
    let monomials: Vec<(u32, u32)> = (0..=top).flat_map(|i| (0..=top).map(move |j| (i, j))).collect();
    let col_scale: Vec<Int> = monomials.iter().map(|&(i, j)| int(&(x_bound.pow(i) * y_bound.pow(j)))).collect();
    let rows: Vec<Vec<Int>> = monomials
        .iter()
        .map(|&(i, j)| {
            let poly = if i <= k && j <= k {
                let shift = int(&(x_bound.pow(k - i) * y_bound.pow(k - j)));
                &q.scale(&shift) * &MultiPoly::monomial(1, vec![i, j])
            } else {
                MultiPoly::monomial(m.clone(), vec![i, j])
            };
            monomials
                .iter()
                .zip(&col_scale)
                .map(|(&(a, b), s)| poly.coefficient(&[a, b]) * s)
                .collect()
        })
        .collect();
    let dim = rows.len();
    let reduced = lll_reduce(&Basis::new(rows).ok()?, &solver_delta()).ok()?;

    for row in reduced.rows() {
        let g = MultiPoly::from_terms(
            2,
            monomials
                .iter()
                .zip(row.iter().zip(&col_scale))
                .map(|(&(i, j), (v, s))| (vec![i, j], v / s)),
        );
        let certificate = Certificate {
            f: f.clone(),
            g,
            modulus: modulus.clone(),
            bounds: bounds.clone(),
            center: (cx.clone(), cy.clone()),
            level,
        };
        if !certificate.verify() {
            continue;
        }
        let eliminant = eliminate_y(&certificate.f, &certificate.g);
        let coeffs = eliminant.to_univariate(0).expect("y eliminated");
        let lo = &bx.x.0 - &cx;
        let hi = &bx.x.1 - &cx;
        for t in integer_roots(&coeffs, &lo, &hi).expect("nonzero eliminant") {
            let x = t + &cx;
            if let Some(y) = family.y_for_x(&x) {
                if y >= bx.y.0 && y <= bx.y.1 {
                    roots.push((x, y));
                }
            }
        }
        return Some(Attempt { roots, certificate, dim });
    }
    None
}

fn scan(family: &FactorFamily, bx: &SearchBox, out: &mut Vec<(Int, Int)>) {
    let along_x = SearchBox::width(&bx.x) <= SearchBox::width(&bx.y);
    let (range, other) = if along_x { (&bx.x, &bx.y) } else { (&bx.y, &bx.x) };
    let mut t = range.0.clone();
    while t <= range.1 {
        let partner = if along_x { family.y_for_x(&t) } else { family.x_for_y(&t) };
        if let Some(s) = partner {
            if s >= other.0 && s <= other.1 {
                out.push(if along_x { (t.clone(), s) } else { (s, t.clone()) });
            }
        }
        t += 1;
    }
}

fn split(bx: SearchBox) -> [SearchBox; 2] {
    let two = Int::from(2);
    if SearchBox::width(&bx.x) >= SearchBox::width(&bx.y) {
        let mid = (&bx.x.0 + &bx.x.1).div_floor(&two);
        [
            SearchBox {
                x: (bx.x.0.clone(), mid.clone()),
                y: bx.y.clone(),
            },
            SearchBox {
                x: (mid + 1, bx.x.1),
                y: bx.y,
            },
        ]
    } else {
        let mid = (&bx.y.0 + &bx.y.1).div_floor(&two);
        [
            SearchBox {
                x: bx.x.clone(),
                y: (bx.y.0.clone(), mid.clone()),
            },
            SearchBox {
                x: bx.x,
                y: (mid + 1, bx.y.1),
            },
        ]
    }
}

/// Every root of the problem's family inside its box.
pub fn solve_bivariate_with(prob: &BivariateProblem, opts: &SolverOptions) -> Result<BivariateOutcome, CoppersmithError> {
    let family = &prob.family;
    let mut outcome = BivariateOutcome {
        solutions: Vec::new(),
        certified: prob.within_certified_bound(),
        lattice_dim: 0,
        lattice_runs: 0,
        boxes: 0,
        certificates: Vec::new(),
    };
    let mut roots = Vec::new();
    let mut stack = vec![(prob.search.clone(), true)];
    let scan_width = Int::from(opts.scan_width);
    while let Some((bx, initial)) = stack.pop() {
        outcome.boxes += 1;
        if outcome.boxes > opts.max_boxes {
            return Err(CoppersmithError::BoxBudget(opts.max_boxes));
        }
        let Some(bx) = bx.tighten(family) else {
            continue;
        };
        let narrow = SearchBox::width(&bx.x).min(SearchBox::width(&bx.y));
        if narrow.is_one() || (opts.allow_split && narrow <= scan_width) {
            scan(family, &bx, &mut roots);
            continue;
        }
        let top_level = if initial || !opts.allow_split { opts.max_level.max(1) } else { 1 };
        let mut solved = false;
        for level in 1..=top_level {
            outcome.lattice_runs += 1;
            if let Some(attempt) = lattice_attempt(family, &bx, level) {
                roots.extend(attempt.roots);
                outcome.lattice_dim = outcome.lattice_dim.max(attempt.dim);
                outcome.certificates.push(attempt.certificate);
                solved = true;
                break;
            }
        }
        if !solved {
            if !opts.allow_split {
                return Err(CoppersmithError::NoIndependentPolynomial);
            }
            let [left, right] = split(bx);
            stack.push((right, false));
            stack.push((left, false));
        }
    }
    roots.sort();
    roots.dedup();
    outcome.solutions = roots.into_iter().map(|(x, y)| RootSolution::new(family, x, y)).collect();
    Ok(outcome)
}

/// Every root in the box, `NoRoot` when there is none.
pub fn solve_bivariate(prob: &BivariateProblem) -> Result<Vec<RootSolution>, CoppersmithError> {
    let outcome = solve_bivariate_with(prob, &SolverOptions::default())?;
    if outcome.solutions.is_empty() {
        return Err(CoppersmithError::NoRoot);
    }
    Ok(outcome.solutions)
}

fn nonempty(outcome: BivariateOutcome) -> Result<BivariateOutcome, CoppersmithError> {
    if outcome.solutions.is_empty() {
        Err(CoppersmithError::NoRoot)
    } else {
        Ok(outcome)
    }
}

/// Problem for `p` within `x_bound` of `p0`: `Q0 = N / P0` and the `y` bound is
/// the exact image of the `x` range.
pub fn msb_problem(n: &Nat, p0: &Nat, x_bound: &Nat) -> Result<BivariateProblem, CoppersmithError> {
    if p0 <= x_bound {
        return Err(CoppersmithError::InvalidProblem(format!("hint {p0} must exceed the bound {x_bound}")));
    }
    let q0 = n / p0;
    if q0.is_zero() {
        return Err(CoppersmithError::InvalidProblem(format!("hint {p0} exceeds N")));
    }
    let family = FactorFamily::near(n.clone(), p0.clone(), q0.clone())?;
    let (lo, hi) = family
        .y_range(&-int(x_bound), &int(x_bound))
        .unwrap_or((Int::zero(), Int::zero()));
    let y_bound = nat(&lo).max(nat(&hi)).max(Nat::one());
    BivariateProblem::near(n.clone(), p0.clone(), q0, x_bound.clone(), y_bound)
}

/// Factors with `|p - P0| <= x_bound`.
pub fn solve_msb_known(n: &Nat, p0: &Nat, x_bound: &Nat) -> Result<BivariateOutcome, CoppersmithError> {
    nonempty(solve_bivariate_with(&msb_problem(n, p0, x_bound)?, &SolverOptions::default())?)
}

/// Problem for `p = 2^k x + x0_bits`, `q = 2^k y + y0_bits`. With `balanced`
/// set, `p` is confined to `[sqrt(N/2), sqrt(2N)]`; otherwise to
/// `(0, sqrt(2N)]`. Once `4^k > N` only `x = 0` is searched.
pub fn lsb_problem(n: &Nat, x0_bits: &Nat, k: u32, balanced: bool) -> Result<BivariateProblem, CoppersmithError> {
    if !n.bit(0) {
        return Err(CoppersmithError::InvalidProblem("N must be odd".into()));
    }
    if !x0_bits.bit(0) {
        return Err(CoppersmithError::NonInvertibleResidue(x0_bits.clone()));
    }
    let m = Nat::one() << k;
    if x0_bits >= &m {
        return Err(CoppersmithError::InvalidProblem(format!("{x0_bits} has more than {k} bits")));
    }
    let inverse = mod_inverse(&int(x0_bits), &int(&m)).map_err(|_| CoppersmithError::NonInvertibleResidue(x0_bits.clone()))?;
    let y0_bits = nat(&(int(n) * inverse).mod_floor(&int(&m)));
    let x = if &m * &m > *n {
        (Int::zero(), Int::zero())
    } else {
        let c = int(x0_bits);
        let mi = int(&m);
        let lo = if balanced { int(&isqrt(&(n >> 1u32))) } else { Int::zero() };
        let hi: Int = int(&isqrt(&(n << 1u32))) + 1;
        ((lo - &c).div_ceil(&mi).max(Int::zero()), (&hi - &c).div_floor(&mi))
    };
    let y = (Int::zero(), int(n) >> k);
    BivariateProblem::residue_form(n.clone(), m.clone(), x0_bits.clone(), m, y0_bits, SearchBox { x, y })
}

/// Factors from the `k` low bits of one of them: the balanced box first,
/// then the full range.
pub fn solve_lsb_known(n: &Nat, x0_bits: &Nat, k: u32) -> Result<BivariateOutcome, CoppersmithError> {
    let opts = SolverOptions::default();
    let outcome = solve_bivariate_with(&lsb_problem(n, x0_bits, k, true)?, &opts)?;
    if outcome.solutions.iter().any(|s| !s.is_trivial()) {
        return Ok(outcome);
    }
    nonempty(solve_bivariate_with(&lsb_problem(n, x0_bits, k, false)?, &opts)?)
}

/// `(m x + c)(n y + d) = N` with coprime moduli; both factors are taken below
/// `sqrt(2N)`.
pub fn solve_coprime_moduli(n: &Nat, m: &Nat, mn: &Nat, c: &Nat, d: &Nat) -> Result<BivariateOutcome, CoppersmithError> {
    if m.is_zero() || mn.is_zero() {
        return Err(CoppersmithError::InvalidProblem("zero modulus".into()));
    }
    if !gcd(m, mn).is_one() {
        return Err(CoppersmithError::NotCoprime {
            m: m.clone(),
            n: mn.clone(),
        });
    }
    let root = int(&isqrt(&(n << 1u32)));
    let x_hi = (&root - int(c)).div_floor(&int(m));
    let y_hi = (&root - int(d)).div_floor(&int(mn));
    if x_hi.is_negative() || y_hi.is_negative() {
        return Err(CoppersmithError::NoRoot);
    }
    let search = SearchBox {
        x: (Int::zero(), x_hi),
        y: (Int::zero(), y_hi),
    };
    let prob = BivariateProblem::residue_form(n.clone(), m.clone(), c.clone(), mn.clone(), d.clone(), search)?;
    nonempty(solve_bivariate_with(&prob, &SolverOptions::default())?)
}

/// `(P0 + x)(M z + y - a) - N` for `z` and `a` in ranges: each `(z, a)`
/// fixes `Q0 = M z - a` and becomes a bivariate problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivariateProblem {
    pub n: Nat,
    pub p0: Nat,
    pub multiplier: Nat,
    pub a_range: (i64, i64),
    pub z_range: (u64, u64),
    pub x_bound: Nat,
    pub y_bound: Nat,
}

impl TrivariateProblem {
    /// Longest `z` range accepted: `bits(N)^3`.
    pub fn z_budget(&self) -> u64 {
        self.n.bits().pow(3)
    }
}

/// Ascending `z`, then ascending `a`; the first candidate yielding a
/// nontrivial factorization wins and all its roots are returned.
pub fn solve_trivariate(prob: &TrivariateProblem) -> Result<Vec<RootSolution>, CoppersmithError> {
    let (z_lo, z_hi) = prob.z_range;
    if z_lo == 0 || z_lo > z_hi || prob.a_range.0 > prob.a_range.1 {
        return Err(CoppersmithError::InvalidProblem("empty or non-positive range".into()));
    }
    if z_hi - z_lo >= prob.z_budget() {
        return Err(CoppersmithError::InvalidProblem(format!("z range longer than {}", prob.z_budget())));
    }
    let m = int(&prob.multiplier);
    for z in z_lo..=z_hi {
        for a in prob.a_range.0..=prob.a_range.1 {
            let q0 = &m * Int::from(z) - Int::from(a);
            if !q0.is_positive() {
                continue;
            }
            let bp = BivariateProblem::near(prob.n.clone(), prob.p0.clone(), nat(&q0), prob.x_bound.clone(), prob.y_bound.clone())?;
            let solutions = match solve_bivariate(&bp) {
                Ok(s) => s,
                Err(CoppersmithError::NoRoot) => continue,
                Err(e) => return Err(e),
            };
            if solutions.iter().any(|s| !s.is_trivial()) {
                return Ok(solutions.into_iter().map(|s| RootSolution { z0: Some(z), ..s }).collect());
            }
        }
    }
    Err(CoppersmithError::Exhausted)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueHit {
    pub factors: Factorization,
    /// `None` when `gcd(N, m)` already split `N`.
    pub pair: Option<ResiduePair>,
    pub solution: Option<RootSolution>,
}

/// Tries every candidate residue pair `(c, d)` for `p = m x + c`,
/// `q = m y + d` with `sqrt(N/2) <= p <= sqrt(N)`.
pub fn theorem4_driver(n: &Nat, m: u64) -> Result<ResidueHit, CoppersmithError> {
    let pairs = match theorem4_pairs(n, m) {
        Ok(pairs) => pairs,
        Err(ResidueError::GcdFactorFound(g)) => {
            return Ok(ResidueHit {
                factors: Factorization::from_pair(&g, &(n / &g)),
                pair: None,
                solution: None,
            })
        }
        Err(e) => return Err(CoppersmithError::InvalidProblem(e.to_string())),
    };
    let mi = Int::from(m);
    let lo = int(&isqrt(&(n >> 1u32)));
    let hi = int(&isqrt(n));
    for pair in pairs {
        let c = Int::from(pair.c);
        let x = (((&lo - &c).div_ceil(&mi)).max(Int::zero()), (&hi - &c).div_floor(&mi));
        if x.0 > x.1 {
            continue;
        }
        let y = (Int::zero(), int(&isqrt(&(n << 1u32))) / &mi);
        let prob = BivariateProblem::residue_form(
            n.clone(),
            Nat::from(m),
            Nat::from(pair.c),
            Nat::from(m),
            Nat::from(pair.d),
            SearchBox { x, y },
        )?;
        let outcome = solve_bivariate_with(&prob, &SolverOptions::default())?;
        if let Some(s) = outcome.solutions.into_iter().find(|s| !s.is_trivial()) {
            return Ok(ResidueHit {
                factors: Factorization::from_pair(&s.p, &s.q),
                pair: Some(pair),
                solution: Some(s),
            });
        }
    }
    Err(CoppersmithError::Exhausted)
}

/// One row of the root-range measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeRow {
    /// `log2 X` for `|p - P0| <= X`.
    pub log2_x: u32,
    pub instances: usize,
    /// Solved by one lattice on the whole box.
    pub lattice_only: usize,
    /// Solved by the splitting solver.
    pub full: usize,
    /// Instances inside the certified regime.
    pub certified: usize,
    pub mean_boxes: f64,
}

impl EnvelopeRow {
    pub fn lattice_rate(&self) -> f64 {
        self.lattice_only as f64 / self.instances.max(1) as f64
    }
}

/// Measures how far one lattice reaches on `(p, q)` instances: for each
/// `log2 X`, the hint is `P0 = p + e` with `|e| <= X` drawn from `offsets`.
pub fn measure_envelope(instances: &[(Nat, Nat)], log2_bounds: &[u32], offsets: &[Vec<i64>]) -> Vec<EnvelopeRow> {
    log2_bounds
        .iter()
        .zip(offsets)
        .map(|(&log2_x, row_offsets)| {
            let x_bound = Nat::one() << log2_x;
            let mut row = EnvelopeRow {
                log2_x,
                instances: 0,
                lattice_only: 0,
                full: 0,
                certified: 0,
                mean_boxes: 0.0,
            };
            let mut boxes = 0usize;
            for ((p, q), &e) in instances.iter().zip(row_offsets) {
                let n = p * q;
                let p0 = nat(&(int(p) + Int::from(e)));
                let Ok(prob) = msb_problem(&n, &p0, &x_bound) else {
                    continue;
                };
                row.instances += 1;
                row.certified += prob.within_certified_bound() as usize;
                let hit = |o: &BivariateOutcome| o.solutions.iter().any(|s| &s.p == p);
                if let Ok(o) = solve_bivariate_with(&prob, &SolverOptions::lattice_only()) {
                    row.lattice_only += hit(&o) as usize;
                }
                if let Ok(o) = solve_bivariate_with(&prob, &SolverOptions::default()) {
                    row.full += hit(&o) as usize;
                    boxes += o.boxes;
                }
            }
            row.mean_boxes = boxes as f64 / row.instances.max(1) as f64;
            row
        })
        .collect()
}

/// Bits of `x` as `f64`, for reporting.
pub fn log2_approx(x: &Nat) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap_or(0.0).log2();
    }
    let top = (x >> (bits - 53)).to_f64().unwrap_or(0.0);
    top.log2() + (bits - 53) as f64
}
