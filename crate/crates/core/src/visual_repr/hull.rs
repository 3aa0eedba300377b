use super::layout::Point;
use crate::error::{Error, Result};

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise convex hull by monotone chain, starting from the
/// lowest-x (then lowest-y) point. Collinear boundary points are dropped, so
/// a collinear input yields its two extremes.
pub fn convex_hull(points: &[Point]) -> Result<Vec<Point>> {
    if points.len() < 3 {
        return Err(Error::contract(format!("convex hull needs at least 3 points, got {}", points.len())));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return Ok(pts);
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower)
}

/// True when every turn of the closed polygon is a strict left turn.
pub fn is_convex_ccw(poly: &[Point]) -> bool {
    let k = poly.len();
    k < 3 || (0..k).all(|i| cross(poly[i], poly[(i + 1) % k], poly[(i + 2) % k]) > 0.0)
}

/// Area centroid of a simple polygon; falls back to the vertex mean for
/// degenerate input.
pub fn centroid(poly: &[Point]) -> Point {
    let k = poly.len();
    let mean = (
        poly.iter().map(|p| p.0).sum::<f64>() / k as f64,
        poly.iter().map(|p| p.1).sum::<f64>() / k as f64,
    );
    if k < 3 {
        return mean;
    }
    let (mut area, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..k {
        let (a, b) = (poly[i], poly[(i + 1) % k]);
        let c = a.0 * b.1 - b.0 * a.1;
        area += c;
        cx += (a.0 + b.0) * c;
        cy += (a.1 + b.1) * c;
    }
    if area.abs() < 1e-12 {
        return mean;
    }
    (cx / (3.0 * area), cy / (3.0 * area))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hull_examples() {
        let h = convex_hull(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.2, 0.2)]).unwrap();
        assert_eq!(h, vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let h = convex_hull(&[(0.0, 1.0), (1.0, 0.0), (0.0, 0.0)]).unwrap();
        assert_eq!(h, vec![(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let h = convex_hull(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0), (1.0, 1.0)]).unwrap();
        assert_eq!(h.len(), 4);
        assert!(convex_hull(&[(0.0, 0.0), (1.0, 1.0)]).is_err());
        let line = convex_hull(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_eq!(line, vec![(0.0, 0.0), (2.0, 2.0)]);
    }

    #[test]
    fn centroid_of_square() {
        let c = centroid(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)]);
        assert!((c.0 - 1.0).abs() < 1e-12 && (c.1 - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn hull_is_convex_and_encloses(pts in proptest::collection::vec((-100i32..100, -100i32..100), 3..30)) {
            let pts: Vec<Point> = pts.into_iter().map(|(x, y)| (x as f64, y as f64)).collect();
            let hull = convex_hull(&pts).unwrap();
            prop_assert!(is_convex_ccw(&hull));
            if hull.len() >= 3 {
                for &p in &pts {
                    for i in 0..hull.len() {
                        prop_assert!(cross(hull[i], hull[(i + 1) % hull.len()], p) >= 0.0);
                    }
                }
            }
        }
    }
}
