//! Minimum-norm point of a finite point set (Wolfe's algorithm) and the
//! colorful Caratheodory pivoting search built on it.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Closest point to the origin in the hull of `pts`, with the support
/// indices and their weights.
pub fn min_norm_point(pts: &[DVector<f64>]) -> (DVector<f64>, Vec<(usize, f64)>) {
    let scale = pts.iter().map(|p| p.norm_squared()).fold(0.0, f64::max).max(1e-300);
    let first = (0..pts.len()).min_by(|&a, &b| pts[a].norm_squared().total_cmp(&pts[b].norm_squared())).unwrap();
    let mut s = vec![first];
    let mut w = vec![1.0];
    let mut x = pts[first].clone();
    for _ in 0..1000 {
        let (j, val) = (0..pts.len())
            .map(|i| (i, x.dot(&pts[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if x.norm_squared() - val <= 1e-12 * scale || s.contains(&j) {
            break;
        }
        s.push(j);
        w.push(0.0);
        while let Some(v) = affine_minimizer(pts, &s) {
            if v.iter().all(|&vi| vi > 1e-14) {
                w = v;
                break;
            }
            let mut theta = 1.0f64;
            for (wi, vi) in w.iter().zip(&v) {
                if *vi <= 1e-14 && wi - vi > 0.0 {
                    theta = theta.min(wi / (wi - vi));
                }
            }
            for (wi, vi) in w.iter_mut().zip(&v) {
                *wi = (1.0 - theta) * *wi + theta * vi;
            }
            let keep: Vec<bool> = w.iter().map(|&wi| wi > 1e-14).collect();
            if keep.iter().all(|&k| k) {
                break;
            }
            s = s.iter().zip(&keep).filter(|(_, &k)| k).map(|(&i, _)| i).collect();
            w = w.iter().zip(&keep).filter(|(_, &k)| k).map(|(&wi, _)| wi).collect();
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|wi| *wi /= total);
        }
        x = s.iter().zip(&w).fold(DVector::zeros(pts[0].len()), |acc, (&i, &wi)| acc + &pts[i] * wi);
    }
    (x, s.into_iter().zip(w).collect())
}

/// Weights of the point of smallest norm in the affine hull of `pts[s]`.
fn affine_minimizer(pts: &[DVector<f64>], s: &[usize]) -> Option<Vec<f64>> {
    let k = s.len();
    let mut m = DMatrix::zeros(k + 1, k + 1);
    for a in 0..k {
        for b in 0..k {
            m[(a, b)] = pts[s[a]].dot(&pts[s[b]]);
        }
        m[(a, k)] = 1.0;
        m[(k, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m.lu().solve(&rhs)?;
    let v: Vec<f64> = (0..k).map(|i| sol[i]).collect();
    v.iter().all(|x| x.is_finite()).then_some(v)
}

/// Colorful Caratheodory search: picks one vector per class so that the
/// origin is (numerically) in the hull of the picks. Each class must
/// contain the origin in its hull. Returns the chosen index per class.
pub fn colorful_caratheodory<R: Rng>(
    classes: &[Vec<DVector<f64>>],
    rng: &mut R,
    max_pivots: usize,
    mut accept: impl FnMut(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    let mut pivots = 0;
    while pivots < max_pivots {
        let mut choice: Vec<usize> = classes.iter().map(|c| rng.random_range(0..c.len())).collect();
        loop {
            let pts: Vec<DVector<f64>> = classes.iter().zip(&choice).map(|(c, &i)| c[i].clone()).collect();
            let (p, support) = min_norm_point(&pts);
            let scale = pts.iter().map(|q| q.norm()).fold(0.0, f64::max).max(1e-300);
            if p.norm() <= 1e-7 * scale && accept(&choice) {
                return Some(choice);
            }
            pivots += 1;
            if pivots >= max_pivots {
                return None;
            }
            let in_support: Vec<bool> = (0..classes.len()).map(|i| support.iter().any(|&(j, _)| j == i)).collect();
            let best = (0..classes.len())
                .filter(|&i| !in_support[i])
                .flat_map(|i| (0..classes[i].len()).map(move |k| (i, k)))
                .map(|(i, k)| (i, k, p.dot(&classes[i][k])))
                .min_by(|a, b| a.2.total_cmp(&b.2));
            match best {
                Some((i, k, val)) if val < p.norm_squared() - 1e-15 * scale * scale => choice[i] = k,
                _ => break,
            }
        }
    }
    None
}
