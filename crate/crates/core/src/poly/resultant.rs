use num_bigint::BigInt;
use num_traits::One;

use super::MPoly;
use crate::error::{domain, Result};

/// Determinant of a square matrix of polynomials over `vars`, by
/// fraction-free (Bareiss) elimination. Every division is exact.
pub fn determinant(mut m: Vec<Vec<MPoly>>, vars: &[String]) -> MPoly {
    let n = m.len();
    let one = MPoly::from_map(
        vars.to_vec(),
        [(vec![0; vars.len()], BigInt::one())].into_iter().collect(),
    );
    if n == 0 {
        return one;
    }
    let mut prev = one;
    let mut negate = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return MPoly::zero_with(vars.to_vec());
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MPoly::zero_with(vars.to_vec());
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// Resultant of `f` and `g` with respect to `var`, as a polynomial in the
/// remaining variables of both.
///
/// Sign convention: `(-1)^(deg f * deg g)` times the Sylvester determinant
/// with the rows of `f` on top, i.e. the classical `Res(g, f)`. When one
/// argument is constant `c` in `var` and the other has degree `d`, the result
/// is `c^d`.
pub fn resultant(f: &MPoly, g: &MPoly, var: &str) -> Result<MPoly> {
    let vars = f.union_vars(g);
    if !vars.iter().any(|v| v == var) {
        return domain(format!("unknown variable {var}"));
    }
    let f = f.embed(&vars)?;
    let g = g.embed(&vars)?;
    if f.is_zero() || g.is_zero() {
        return domain("resultant of the zero polynomial");
    }
    let a = f.coefficients_in(var)?;
    let b = g.coefficients_in(var)?;
    let rest: Vec<String> = vars.iter().filter(|v| *v != var).cloned().collect();
    let (df, dg) = (a.len() - 1, b.len() - 1);
    match (df, dg) {
        (0, 0) => return domain(format!("both polynomials are constant in {var}")),
        (0, _) => return Ok(a[0].pow(dg as u32)),
        (_, 0) => return Ok(b[0].pow(df as u32)),
        _ => {}
    }
    let size = df + dg;
    let zero = MPoly::zero_with(rest.clone());
    let mut m = vec![vec![zero; size]; size];
    for r in 0..dg {
        for (i, c) in a.iter().rev().enumerate() {
            m[r][r + i] = c.clone();
        }
    }
    for r in 0..df {
        for (i, c) in b.iter().rev().enumerate() {
            m[dg + r][r + i] = c.clone();
        }
    }
    let det = determinant(m, &rest);
    Ok(if (df * dg) % 2 == 1 { -&det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn linear_pair() {
        let x = MPoly::var(&["x"], "x");
        let one = MPoly::constant(&["x"], 1);
        let r = resultant(&(&x - &one), &(&x + &one), "x").unwrap();
        assert!(r.is_constant());
        assert_eq!(r.constant_term(), big(-2));
    }

    #[test]
    fn constant_argument_convention() {
        let x = MPoly::var(&["x", "y"], "x");
        let y = MPoly::var(&["x", "y"], "y");
        let c = &y + &MPoly::constant(&["x", "y"], 2);
        let f = &(&x * &x) + &x;
        assert_eq!(
            resultant(&c, &f, "x").unwrap(),
            c.pow(2).substitute("x", &big(0)).unwrap()
        );
        assert!(resultant(&c, &y, "x").is_err());
    }

    #[test]
    fn eliminating_z_from_sum_relation() {
        let vars = ["X", "Y", "z"];
        let n = big(193933249);
        let xx = MPoly::var(&vars, "X");
        let yy = MPoly::var(&vars, "Y");
        let z = MPoly::var(&vars, "z");
        let nn = MPoly::constant(&vars, n.clone());
        let u0 = &(&xx + &yy) - &z;
        let u1 = &(&(&xx * &xx) - &(&z * &xx)) + &nn;
        let r = resultant(&u0, &u1, "z").unwrap();
        let expected = MPoly::from_terms(&["X", "Y"], [(vec![1, 1], big(-1)), (vec![0, 0], n)]);
        assert_eq!(r, expected);
    }

    #[test]
    fn shared_factor_gives_zero() {
        let vars = ["x", "y"];
        let x = MPoly::var(&vars, "x");
        let y = MPoly::var(&vars, "y");
        let h = &(&x * &y) - &MPoly::constant(&vars, 7);
        let f = &h * &(&x + &MPoly::constant(&vars, 3));
        let g = &h * &(&(&x * &x) - &y);
        assert!(resultant(&f, &g, "x").unwrap().is_zero());
        assert!(!resultant(&f, &(&x - &y), "x").unwrap().is_zero());
    }

    // Monic f with roots a_i: the classical Res(f, g) is prod g(a_i), and the
    // sign factor is +1 because deg f * deg g is even.
    #[test]
    fn root_product_formula() {
        let x = MPoly::var(&["x"], "x");
        let lin = |r: i64| &x - &MPoly::constant(&["x"], r);
        let f = &(&lin(2) * &lin(-3)) * &lin(5);
        let g = &lin(7) * &lin(-1);
        // Res_std(f, g) = prod_{f(a)=0} g(a)
        let std: BigInt = [2, -3, 5]
            .iter()
            .map(|&a| g.evaluate(&[big(a)]).unwrap())
            .product();
        let r = resultant(&f, &g, "x").unwrap();
        assert_eq!(r.constant_term(), std);
        assert!(r.is_constant());
    }
}
