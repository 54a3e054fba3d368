//! Newton polygon over a lexicographically ordered value group: root
//! values of a polynomial from the lower convex hull of its coefficient
//! values.

use num_traits::One;
use valdiff_core::ordered_groups::Coords;
use valdiff_core::rational::{rat_u64, Rat};

/// One slope of the polygon: `multiplicity` roots of value `value`.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonSlope {
    pub value: Coords,
    pub multiplicity: usize,
}

/// Computes the root values of a polynomial with the given coefficient
/// values (None encodes a zero coefficient). Requires nonzero constant and
/// leading coefficients, which holds for the minimal polynomials the
/// oracle builds. Roots of an edge from (i, v_i) to (j, v_j) have value
/// (v_i - v_j)/(j - i), each edge contributing j - i roots.
pub fn newton_root_values(values: &[Option<Coords>]) -> Result<Vec<NewtonSlope>, String> {
    let n = values.len();
    if n < 2 {
        return Err("polynomial must have positive degree".into());
    }
    if values[0].is_none() {
        return Err("zero constant coefficient (zero root)".into());
    }
    if values[n - 1].is_none() {
        return Err("zero leading coefficient".into());
    }
    let points: Vec<(usize, &Coords)> = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.as_ref().map(|c| (i, c)))
        .collect();
    let mut slopes = Vec::new();
    let mut cur = 0usize; // index into points
    while points[cur].0 < n - 1 {
        // next hull vertex: minimal slope, ties resolved to the farthest
        // point so each edge is maximal
        let (i0, v0) = points[cur];
        let mut best_idx = cur + 1;
        let mut best_slope: Option<(Coords, usize)> = None; // (v_j - v_0, j - i0)
        for (k, &(j, vj)) in points.iter().enumerate().skip(cur + 1) {
            let num = vj - v0;
            let den = j - i0;
            let better = match &best_slope {
                None => true,
                Some((bn, bd)) => {
                    // compare num/den <= bn/bd via cross multiplication by
                    // positive integers (lexicographic order is preserved);
                    // equality extends the edge to its farthest endpoint
                    let lhs = num.scale_rat(&rat_u64(*bd as u64));
                    let rhs = bn.scale_rat(&rat_u64(den as u64));
                    lhs.lex_cmp(&rhs) != std::cmp::Ordering::Greater
                }
            };
            if better {
                best_slope = Some((num, den));
                best_idx = k;
            }
        }
        let (j, vj) = points[best_idx];
        let count = j - i0;
        // root value = (v_0 - v_j) / (j - i0)
        let value = (v0 - vj).scale_rat(&(Rat::one() / rat_u64(count as u64)));
        slopes.push(NewtonSlope {
            value,
            multiplicity: count,
        });
        cur = best_idx;
    }
    Ok(slopes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use valdiff_core::rational::{rat, rat_int};

    fn c(v: i64, d: i64) -> Option<Coords> {
        Some(Coords(vec![rat(v, d)]))
    }

    #[test]
    fn artin_schreier_polygon() {
        // X^p - X - b with v(b) = -1 < 0: a single edge, all p roots of
        // value v(b)/p
        for p in [2usize, 3, 5] {
            let mut values = vec![None; p + 1];
            values[0] = c(-1, 1);
            values[1] = c(0, 1);
            values[p] = c(0, 1);
            let slopes = newton_root_values(&values).unwrap();
            assert_eq!(slopes.len(), 1);
            assert_eq!(slopes[0].multiplicity, p);
            assert_eq!(slopes[0].value, Coords(vec![rat(-1, p as i64)]));
        }
    }

    #[test]
    fn unit_case_splits() {
        // v(b) = 1 > 0: one root of value 1, p-1 roots of value 0
        let p = 3usize;
        let mut values = vec![None; p + 1];
        values[0] = c(1, 1);
        values[1] = c(0, 1);
        values[p] = c(0, 1);
        let slopes = newton_root_values(&values).unwrap();
        assert_eq!(slopes.len(), 2);
        assert_eq!(slopes[0].value, Coords(vec![rat_int(1)]));
        assert_eq!(slopes[0].multiplicity, 1);
        assert_eq!(slopes[1].value, Coords(vec![rat_int(0)]));
        assert_eq!(slopes[1].multiplicity, 2);
    }

    #[test]
    fn shifted_defect_probe() {
        // the shifted cubic with coefficient values (-1/3, 0, inf, 0):
        // single edge, three roots of value -1/9
        let values = vec![c(-1, 3), c(0, 1), None, c(0, 1)];
        let slopes = newton_root_values(&values).unwrap();
        assert_eq!(slopes.len(), 1);
        assert_eq!(slopes[0].multiplicity, 3);
        assert_eq!(slopes[0].value, Coords(vec![rat(-1, 9)]));
    }

    #[test]
    fn rejects_degenerate() {
        assert!(newton_root_values(&[c(0, 1)]).is_err());
        assert!(newton_root_values(&[None, c(0, 1)]).is_err());
    }
}
