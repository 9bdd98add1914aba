use crate::error::{Error, Result};
use crate::scag::delaunay::Triangulation;
use crate::Real;

/// Polygon boundary (one or more loops) with its enclosed area and boundary length.
#[derive(Debug, Clone, PartialEq)]
pub struct Hull<T> {
    pub vertices: Vec<Vec<[T; 2]>>,
    /// Edges of the alpha shape that bound no kept triangle; always empty for convex hulls.
    pub segments: Vec<[[T; 2]; 2]>,
    pub area: T,
    /// Length of the loops plus the length of the segments.
    pub perimeter: T,
}

#[inline]
pub(crate) fn cross<T: Real>(o: [T; 2], a: [T; 2], b: [T; 2]) -> T {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[inline]
pub(crate) fn dist<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Andrew's monotone chain; counter-clockwise vertices without repeats.
pub fn convex_hull<T: Real>(points: &[[T; 2]]) -> Result<Hull<T>> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .expect("finite")
            .then(a[1].partial_cmp(&b[1]).expect("finite"))
    });
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::CollinearInput);
    }
    let mut lower: Vec<[T; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= T::zero() {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[T; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= T::zero() {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::CollinearInput);
    }
    let (area, perimeter) = polygon_measures(&lower);
    if !(area > T::zero()) {
        return Err(Error::CollinearInput);
    }
    Ok(Hull {
        vertices: vec![lower],
        segments: Vec::new(),
        area,
        perimeter,
    })
}

/// Shoelace area (absolute) and closed perimeter.
pub(crate) fn polygon_measures<T: Real>(poly: &[[T; 2]]) -> (T, T) {
    let mut twice_area = T::zero();
    let mut perimeter = T::zero();
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        twice_area += a[0] * b[1] - b[0] * a[1];
        perimeter += dist(a, b);
    }
    (twice_area.abs() * T::lit(0.5), perimeter)
}

/// Alpha shape from the Delaunay triangles whose edges are all at most
/// `2·alpha` long (every edge fits inside a disk of radius `alpha`). Any
/// triangle with circumradius at most `alpha` qualifies, so the shape equals
/// the convex hull once `alpha` reaches the largest circumradius.
///
/// Area is the total kept-triangle area. The perimeter sums edges that belong
/// to exactly one kept triangle, plus the dangling edges of the alpha complex:
/// Delaunay edges in no kept triangle whose diametral disk has radius at most
/// `alpha` and contains no other point.
pub fn alpha_hull<T: Real>(points: &[[T; 2]], alpha: T) -> Result<Hull<T>> {
    let tri = Triangulation::new(points)?;
    alpha_hull_from(points, &tri, alpha)
}

pub(crate) fn alpha_hull_from<T: Real>(points: &[[T; 2]], tri: &Triangulation, alpha: T) -> Result<Hull<T>> {
    if !(alpha > T::zero()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let mut area = T::zero();
    // directed edges of kept triangles, counter-clockwise
    let mut directed: Vec<(usize, usize)> = Vec::new();
    for t in &tri.triangles {
        let [a, b, c] = *t;
        let longest = dist(points[a], points[b])
            .max(dist(points[b], points[c]))
            .max(dist(points[c], points[a]));
        if longest <= T::lit(2.0) * alpha {
            area += cross(points[a], points[b], points[c]).abs() * T::lit(0.5);
            let ccw = cross(points[a], points[b], points[c]) > T::zero();
            let (a, b, c) = if ccw { (a, b, c) } else { (a, c, b) };
            directed.extend([(a, b), (b, c), (c, a)]);
        }
    }
    let all: std::collections::HashSet<(usize, usize)> = directed.iter().copied().collect();
    let mut boundary: Vec<(usize, usize)> = directed
        .iter()
        .copied()
        .filter(|&(a, b)| !all.contains(&(b, a)))
        .collect();
    boundary.sort_unstable();
    let mut perimeter = boundary
        .iter()
        .fold(T::zero(), |acc, &(a, b)| acc + dist(points[a], points[b]));
    let mut segments = Vec::new();
    for (a, b, opposite) in edges_with_opposites(tri) {
        if all.contains(&(a, b)) || all.contains(&(b, a)) {
            continue;
        }
        let (pa, pb) = (points[a], points[b]);
        let len = dist(pa, pb);
        // an opposite vertex lies inside the diametral disk when its angle is obtuse
        let gabriel = opposite.iter().flatten().all(|&c| {
            let pc = points[c];
            (pa[0] - pc[0]) * (pb[0] - pc[0]) + (pa[1] - pc[1]) * (pb[1] - pc[1]) > T::zero()
        });
        if gabriel && len <= T::lit(2.0) * alpha {
            perimeter += len;
            segments.push([pa, pb]);
        }
    }
    Ok(Hull {
        vertices: chain_loops(points, &boundary),
        segments,
        area,
        perimeter,
    })
}

/// Each undirected Delaunay edge `(a, b)` with `a < b` and the vertices opposite it.
fn edges_with_opposites(tri: &Triangulation) -> Vec<(usize, usize, [Option<usize>; 2])> {
    let mut half: Vec<(usize, usize, usize)> = Vec::with_capacity(tri.triangles.len() * 3);
    for &[a, b, c] in &tri.triangles {
        for (u, v, w) in [(a, b, c), (b, c, a), (c, a, b)] {
            half.push((u.min(v), u.max(v), w));
        }
    }
    half.sort_unstable();
    let mut out: Vec<(usize, usize, [Option<usize>; 2])> = Vec::new();
    for (a, b, w) in half {
        match out.last_mut() {
            Some(last) if last.0 == a && last.1 == b => last.2[1] = Some(w),
            _ => out.push((a, b, [Some(w), None])),
        }
    }
    out
}

fn chain_loops<T: Real>(points: &[[T; 2]], boundary: &[(usize, usize)]) -> Vec<Vec<[T; 2]>> {
    let mut used = vec![false; boundary.len()];
    let mut loops = Vec::new();
    for start in 0..boundary.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let origin = boundary[start].0;
        let mut ring = vec![points[origin]];
        let mut at = boundary[start].1;
        while at != origin {
            ring.push(points[at]);
            // boundary is sorted, so outgoing edges from `at` are contiguous
            let lo = boundary.partition_point(|e| e.0 < at);
            let next = (lo..boundary.len())
                .take_while(|&i| boundary[i].0 == at)
                .find(|&i| !used[i]);
            match next {
                Some(i) => {
                    used[i] = true;
                    at = boundary[i].1;
                }
                None => break,
            }
        }
        loops.push(ring);
    }
    loops
}
