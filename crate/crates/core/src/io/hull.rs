use crate::trajectory::Position;

fn cross(o: &Position, a: &Position, b: &Position) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Convex hull by Andrew's monotone chain. Vertices are returned
/// counter-clockwise starting from the lowest-x (then lowest-y) point, with
/// collinear boundary points dropped. Degenerate inputs give a single point
/// or the two ends of a segment.
pub fn convex_hull(points: &[Position]) -> Vec<Position> {
    let mut pts: Vec<Position> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Position> = Vec::with_capacity(2 * pts.len());
    for p in &pts {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Position {
        Position::new(x, y)
    }

    /// Hull vertices by gift wrapping: from the current vertex, take the
    /// point that leaves every other point on the left, farthest on ties.
    fn gift_wrap(points: &[Position]) -> Vec<Position> {
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        if pts.len() < 3 {
            return pts;
        }
        let start = pts[0];
        let mut hull = vec![start];
        let mut cur = start;
        loop {
            let mut next = if pts[0] == cur { pts[1] } else { pts[0] };
            for q in &pts {
                if *q == cur {
                    continue;
                }
                let c = cross(&cur, &next, q);
                if c < 0.0 || (c == 0.0 && cur.distance_sq(q) > cur.distance_sq(&next)) {
                    next = *q;
                }
            }
            if next == start {
                break;
            }
            hull.push(next);
            cur = next;
            if hull.len() > pts.len() {
                break;
            }
        }
        hull
    }

    #[test]
    fn square_with_center() {
        let h = convex_hull(&[p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0), p(0.5, 0.5)]);
        assert_eq!(h, vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]);
    }

    #[test]
    fn collinear_points_give_segment() {
        let h = convex_hull(&[p(2.0, 2.0), p(0.0, 0.0), p(1.0, 1.0), p(3.0, 3.0)]);
        assert_eq!(h, vec![p(0.0, 0.0), p(3.0, 3.0)]);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(convex_hull(&[]).is_empty());
        assert_eq!(convex_hull(&[p(1.0, 2.0)]), vec![p(1.0, 2.0)]);
        assert_eq!(convex_hull(&[p(1.0, 2.0), p(1.0, 2.0), p(1.0, 2.0)]), vec![p(1.0, 2.0)]);
    }

    #[test]
    fn counter_clockwise_orientation() {
        let h = convex_hull(&[p(0.0, 0.0), p(4.0, 0.0), p(2.0, 3.0), p(2.0, 1.0)]);
        let area2: f64 = (0..h.len())
            .map(|k| {
                let (a, b) = (h[k], h[(k + 1) % h.len()]);
                a.x * b.y - b.x * a.y
            })
            .sum();
        assert!(area2 > 0.0);
    }

    proptest! {
        #[test]
        fn matches_gift_wrapping(raw in prop::collection::vec((0i32..40, 0i32..40), 1..200)) {
            // integer grid coordinates keep the orientation tests exact
            let pts: Vec<Position> = raw.iter().map(|&(x, y)| p(x as f64, y as f64)).collect();
            let mut a = convex_hull(&pts);
            let mut b = gift_wrap(&pts);
            let key = |q: &Position| (q.x as i64, q.y as i64);
            a.sort_by_key(key);
            b.sort_by_key(key);
            prop_assert_eq!(a, b);
        }
    }
}
