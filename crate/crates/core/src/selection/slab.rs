use num_traits::{One, Signed};

use crate::error::{invalid, Result};
use crate::geom::ConvexBody;
use crate::num::{int, Rational};

/// Lower-bound family for nets: `1/epsilon` groups of unit boxes, group `i`
/// strictly between the parallel hyperplanes `x_d = 2(i-1)` and `x_d = 2i`,
/// members of a group shifted by halves along the first axis.
pub fn slab_instance(d: usize, epsilon: &Rational, n: usize) -> Result<Vec<ConvexBody>> {
    if d == 0 || !epsilon.is_positive() || *epsilon > Rational::one() {
        return Err(invalid("epsilon must lie in (0, 1] and d >= 1"));
    }
    let groups = epsilon.recip();
    if !groups.is_integer() {
        return Err(invalid("1/epsilon must be an integer"));
    }
    let groups: usize = groups.to_integer().try_into().map_err(|_| invalid("too many groups"))?;
    if n == 0 || !n.is_multiple_of(groups) {
        return Err(invalid(format!("n = {n} is not divisible by {groups}")));
    }
    let per = n / groups;
    let half = Rational::new(1.into(), 2.into());
    let mut out = Vec::with_capacity(n);
    for g in 0..groups {
        for j in 0..per {
            let mut lo = vec![int(0); d];
            lo[d - 1] = int(2 * g as i64) + &half;
            if d > 1 {
                lo[0] = Rational::new((j as i64).into(), 2.into());
            } else {
                lo[0] += Rational::new((j as i64).into(), (4 * per as i64).into());
            }
            let hi: Vec<Rational> = lo.iter().map(|x| x + int(1)).collect();
            out.push(ConvexBody::cuboid(&lo, &hi));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn four_groups_in_slabs() {
        let fam = slab_instance(2, &rat(1, 4), 16).unwrap();
        assert_eq!(fam.len(), 16);
        for (i, b) in fam.iter().enumerate() {
            assert_eq!(b.volume(), int(1));
            let g = (i / 4) as i64;
            assert!(b.vertices().iter().all(|v| v.0[1] > int(2 * g) && v.0[1] < int(2 * g + 2)));
        }
        assert_eq!(slab_instance(2, &int(1), 4).unwrap().len(), 4);
        assert!(slab_instance(2, &rat(1, 4), 10).is_err());
        assert!(slab_instance(2, &rat(2, 7), 14).is_err());
    }
}
