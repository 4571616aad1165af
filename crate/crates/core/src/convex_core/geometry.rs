//! Planar polygon helpers shared by the body, level-set and cell code.

use super::Point;

pub fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn norm(a: &Point) -> f64 {
    a[0].hypot(a[1])
}

pub fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub fn add_scaled(a: &Point, t: f64, b: &Point) -> Point {
    [a[0] + t * b[0], a[1] + t * b[1]]
}

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise convex hull (Andrew's monotone chain) without collinear
/// points. Degenerate inputs return one or two points.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= 1e-14 && (a[1] - b[1]).abs() <= 1e-14);
    if pts.len() <= 2 {
        return pts;
    }
    let scale = pts.iter().map(|p| p[0].abs().max(p[1].abs())).fold(1.0, f64::max);
    let eps = 1e-13 * scale * scale;
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        // all points collinear: keep the two extremes
        let a = pts[0];
        let b = pts[pts.len() - 1];
        return vec![a, b];
    }
    lower
}

pub fn polygon_area(poly: &[Point]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

pub fn polygon_centroid(poly: &[Point]) -> Point {
    let a = polygon_area(poly);
    if a.abs() < 1e-300 {
        let n = poly.len().max(1) as f64;
        let sx: f64 = poly.iter().map(|p| p[0]).sum();
        let sy: f64 = poly.iter().map(|p| p[1]).sum();
        return [sx / n, sy / n];
    }
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let c = p[0] * q[1] - q[0] * p[1];
        cx += (p[0] + q[0]) * c;
        cy += (p[1] + q[1]) * c;
    }
    [cx / (6.0 * a), cy / (6.0 * a)]
}

/// Keep the part of `poly` where `<normal, x> <= offset`.
pub fn clip_halfplane(poly: &[Point], normal: &Point, offset: f64) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let dp = dot(normal, &p) - offset;
        let dq = dot(normal, &q) - offset;
        if dp <= 0.0 {
            out.push(p);
        }
        if (dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0) {
            let s = dp / (dp - dq);
            out.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
        }
    }
    out
}

/// Intersection of two convex polygons (the second given counter-clockwise).
pub fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let mut out = subject.to_vec();
    let n = clip.len();
    for i in 0..n {
        if out.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % n];
        // outward normal of a counter-clockwise edge
        let normal = [b[1] - a[1], a[0] - b[0]];
        out = clip_halfplane(&out, &normal, dot(&normal, &a));
    }
    out
}

pub fn square_cell(center: &Point, hx: f64, hy: f64) -> Vec<Point> {
    vec![
        [center[0] - hx, center[1] - hy],
        [center[0] + hx, center[1] - hy],
        [center[0] + hx, center[1] + hy],
        [center[0] - hx, center[1] + hy],
    ]
}

/// Signed distance-like test: true when `x` is inside the counter-clockwise
/// convex polygon up to `tol`.
pub fn contains_convex(poly: &[Point], x: &Point, tol: f64) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let e = sub(&b, &a);
        let len = norm(&e);
        if len == 0.0 {
            continue;
        }
        let c = (e[0] * (x[1] - a[1]) - e[1] * (x[0] - a[0])) / len;
        if c < -tol {
            return false;
        }
    }
    true
}

/// Euclidean distance from `x` to the segment `[a, b]`.
pub fn segment_distance(x: &Point, a: &Point, b: &Point) -> f64 {
    let e = sub(b, a);
    let l2 = dot(&e, &e);
    let s = if l2 == 0.0 {
        0.0
    } else {
        (dot(&sub(x, a), &e) / l2).clamp(0.0, 1.0)
    };
    norm(&sub(x, &add_scaled(a, s, &e)))
}

/// Distance from `x` to a convex polygon (zero inside).
pub fn distance_to_convex(poly: &[Point], x: &Point) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => norm(&sub(x, &poly[0])),
        2 => segment_distance(x, &poly[0], &poly[1]),
        n => {
            if contains_convex(poly, x, 0.0) {
                return 0.0;
            }
            (0..n)
                .map(|i| segment_distance(x, &poly[i], &poly[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0], [1.0, 1.0]];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!((polygon_area(&h) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn clipping_a_square_by_a_diagonal() {
        let sq = square_cell(&[0.0, 0.0], 1.0, 1.0);
        let half = clip_halfplane(&sq, &[1.0, 1.0], 0.0);
        assert!((polygon_area(&half) - 2.0).abs() < 1e-14);
        let c = polygon_centroid(&half);
        assert!(c[0] < 0.0 && c[1] < 0.0);
    }

    #[test]
    fn distance_outside_square() {
        let sq = square_cell(&[0.0, 0.0], 1.0, 1.0);
        assert!((distance_to_convex(&sq, &[3.0, 0.0]) - 2.0).abs() < 1e-14);
        assert_eq!(distance_to_convex(&sq, &[0.5, 0.5]), 0.0);
    }
}
