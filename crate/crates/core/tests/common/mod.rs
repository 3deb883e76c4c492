//! Independent reference formulas. Nothing here calls into the library's
//! quadrature, harmonics or kernel code.
#![allow(dead_code)]

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `τ_L = (2j+1) ((2j)!)² / ((2j−L)! (2j+L+1)!)` straight from factorials.
pub fn tau_closed_form(twice_j: u32, l: u32) -> f64 {
    f64::from(twice_j + 1) * factorial(twice_j).powi(2)
        / (factorial(twice_j - l) * factorial(twice_j + l + 1))
}

/// Legendre polynomial by Bonnet's recurrence.
pub fn legendre(l: u32, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return 1.0;
    }
    for n in 1..l {
        let nf = f64::from(n);
        let p2 = ((2.0 * nf + 1.0) * x * p1 - nf * p0) / (nf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `τ_L` by integrating `|⟨Ω|north⟩|² = ((1+x)/2)^{2j} = Σ_L τ_L (2L+1)/(2j+1) P_L(x)`
/// against `P_L(x)` with composite Simpson on a fine mesh.
pub fn tau_by_integration(twice_j: u32, l: u32) -> f64 {
    let n = 20_000;
    let h = 2.0 / n as f64;
    let f = |x: f64| ((1.0 + x) / 2.0).powi(twice_j as i32) * legendre(l, x);
    let mut acc = f(-1.0) + f(1.0);
    for i in 1..n {
        let x = -1.0 + i as f64 * h;
        acc += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    0.5 * f64::from(twice_j + 1) * acc * h / 3.0
}

/// Clebsch-Gordan `⟨j1 m1; j2 m2 | J M⟩` by the Racah formula; all arguments doubled.
pub fn clebsch_gordan(tj1: i32, tm1: i32, tj2: i32, tm2: i32, tj: i32, tm: i32) -> f64 {
    if tm1 + tm2 != tm || tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return 0.0;
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return 0.0;
    }
    let f = |twice: i32| factorial((twice / 2) as u32);
    let pre = (f64::from(tj + 1) * f(tj1 + tj2 - tj) * f(tj1 - tj2 + tj) * f(-tj1 + tj2 + tj)
        / f(tj1 + tj2 + tj + 2))
    .sqrt()
        * (f(tj1 + tm1) * f(tj1 - tm1) * f(tj2 + tm2) * f(tj2 - tm2) * f(tj + tm) * f(tj - tm)).sqrt();
    let mut sum = 0.0;
    for k in 0..=(tj1 + tj2 + tj) / 2 {
        let tk = 2 * k;
        let args = [
            tj1 + tj2 - tj - tk,
            tj1 - tm1 - tk,
            tj2 + tm2 - tk,
            tj - tj2 + tm1 + tk,
            tj - tj1 - tm2 + tk,
        ];
        if args.iter().any(|a| *a < 0) {
            continue;
        }
        let denom = f(tk) * args.iter().map(|a| f(*a)).product::<f64>();
        sum += if k % 2 == 0 { 1.0 } else { -1.0 } / denom;
    }
    pre * sum
}

/// Diagonal of the orthonormal rank-`L`, `M = 0` tensor operator at `|j, m⟩`.
pub fn t_l0(twice_j: u32, l: u32, twice_m: i32) -> f64 {
    let tj = twice_j as i32;
    let sign = if ((tj - twice_m) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign * clebsch_gordan(tj, twice_m, tj, -twice_m, 2 * l as i32, 0)
}

/// `F^(s)` of the Dicke state `|j, m⟩` at polar angle `θ`:
/// `Σ_L τ_L^{(s−1)/2} T_L0(j) T_L0(m) P_L(cos θ)`. Rank-`L` components of the
/// kernel are `τ_L^{(s−1)/2}` times those of the coherent projector `|j j⟩⟨j j|`.
pub fn dicke_qpd(twice_j: u32, twice_m: i32, s: f64, theta: f64) -> f64 {
    (0..=twice_j)
        .map(|l| {
            tau_closed_form(twice_j, l).powf((s - 1.0) / 2.0)
                * t_l0(twice_j, l, twice_j as i32)
                * t_l0(twice_j, l, twice_m)
                * legendre(l, theta.cos())
        })
        .sum()
}

/// Generalized Laguerre `L_n^{(a)}(x)` by the explicit sum (small n only).
pub fn laguerre_sum(n: u32, a: u32, x: f64) -> f64 {
    (0..=n)
        .map(|k| {
            let binom = factorial(n + a) / (factorial(n - k) * factorial(a + k));
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binom * x.powi(k as i32) / factorial(k)
        })
        .sum()
}

/// Wigner function of `|n⟩` with measure `d²α/π`: `2 (−1)^n e^{−2|α|²} L_n(4|α|²)`.
pub fn fock_wigner(n: u32, u: f64) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    2.0 * sign * (-2.0 * u).exp() * laguerre_sum(n, 0, 4.0 * u)
}

/// Husimi function of `|n⟩`: `e^{−|α|²} |α|^{2n} / n!`.
pub fn fock_husimi(n: u32, u: f64) -> f64 {
    (-u).exp() * u.powi(n as i32) / factorial(n)
}

/// s-ordered vacuum: `2/(1+s) · e^{−2|α|²/(1+s)}`.
pub fn vacuum_qpd(s: f64, u: f64) -> f64 {
    2.0 / (1.0 + s) * (-2.0 * u / (1.0 + s)).exp()
}
