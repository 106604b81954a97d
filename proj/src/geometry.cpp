#include "olm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "olm/quadrature.hpp"

namespace olm {

namespace {

struct BBox {
  double xmin, xmax, ymin, ymax;

  static BBox of(const Triangle& t) {
    BBox b{t[0].x(), t[0].x(), t[0].y(), t[0].y()};
    for (int i = 1; i < 3; ++i) {
      b.xmin = std::min(b.xmin, t[i].x());
      b.xmax = std::max(b.xmax, t[i].x());
      b.ymin = std::min(b.ymin, t[i].y());
      b.ymax = std::max(b.ymax, t[i].y());
    }
    return b;
  }

  bool overlaps(const BBox& o, double tol) const {
    return xmin <= o.xmax + tol && o.xmin <= xmax + tol && ymin <= o.ymax + tol &&
           o.ymin <= ymax + tol;
  }

  bool contains(const Eigen::Vector2d& p, double tol) const {
    return p.x() >= xmin - tol && p.x() <= xmax + tol && p.y() >= ymin - tol &&
           p.y() <= ymax + tol;
  }
};

std::vector<BBox> cell_bboxes(const SimplicialMesh& mesh) {
  std::vector<BBox> out;
  out.reserve(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) out.push_back(BBox::of(cell_points(mesh, c)));
  return out;
}

// removes consecutive duplicates and collinear vertices under eps_geom
ConvexPolygon normalize_polygon(std::vector<Eigen::Vector2d> pts) {
  std::vector<Eigen::Vector2d> dedup;
  for (const Eigen::Vector2d& p : pts) {
    if (dedup.empty() || (p - dedup.back()).norm() > eps_geom) dedup.push_back(p);
  }
  while (dedup.size() > 1 && (dedup.front() - dedup.back()).norm() <= eps_geom)
    dedup.pop_back();
  if (dedup.size() < 3) return {};

  std::vector<Eigen::Vector2d> out;
  const int n = static_cast<int>(dedup.size());
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d& prev = dedup[(i + n - 1) % n];
    const Eigen::Vector2d& cur = dedup[i];
    const Eigen::Vector2d& next = dedup[(i + 1) % n];
    const Eigen::Vector2d chord = next - prev;
    const double len = chord.norm();
    if (len <= eps_geom) continue;
    // distance of cur from the line prev-next
    if (std::abs(cross2(chord, cur - prev)) / len > eps_geom) out.push_back(cur);
  }
  if (out.size() < 3) return {};
  ConvexPolygon poly{std::move(out)};
  if (poly.area() <= eps_geom * eps_geom) return {};
  return poly;
}

double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

// first cell (in the given id order) containing p with barycentric tolerance
std::optional<int> locate_in_cells(const SimplicialMesh& mesh,
                                   const std::vector<int>& cells,
                                   const std::vector<BBox>& boxes,
                                   const Eigen::Vector2d& p, double tol) {
  for (int c : cells) {
    if (!boxes[c].contains(p, 1e-6)) continue;
    const Eigen::Vector3d bc = barycentric(cell_points(mesh, c), p);
    if (bc.minCoeff() >= -tol) return c;
  }
  return std::nullopt;
}

// cell with the largest minimal barycentric coordinate of p
std::pair<int, double> nearest_cell(const SimplicialMesh& mesh,
                                    const std::vector<int>& cells,
                                    const Eigen::Vector2d& p) {
  int best = -1;
  double best_bc = -std::numeric_limits<double>::infinity();
  for (int c : cells) {
    const double bc = barycentric(cell_points(mesh, c), p).minCoeff();
    if (bc > best_bc) {
      best_bc = bc;
      best = c;
    }
  }
  return {best, best_bc};
}

// overlap area and pieces of every background cell
struct OverlapScan {
  std::vector<double> area_in;
  std::vector<std::vector<OverlapPiece>> pieces;
};

OverlapScan scan_overlaps(const SimplicialMesh& bg, const SimplicialMesh& ov) {
  OverlapScan scan;
  scan.area_in.assign(bg.n_cells(), 0.0);
  scan.pieces.resize(bg.n_cells());
  const std::vector<BBox> bg_boxes = cell_bboxes(bg);
  const std::vector<BBox> ov_boxes = cell_bboxes(ov);
  for (int c = 0; c < bg.n_cells(); ++c) {
    const Triangle tb = cell_points(bg, c);
    const double cell = cell_area(bg, c);
    for (int o = 0; o < ov.n_cells(); ++o) {
      if (!bg_boxes[c].overlaps(ov_boxes[o], eps_geom)) continue;
      ConvexPolygon poly = clip_triangle_triangle(tb, cell_points(ov, o));
      const double a = poly.area();
      if (a <= 1e-14 * cell) continue;
      scan.area_in[c] += a;
      scan.pieces[c].push_back({c, o, std::move(poly)});
    }
  }
  return scan;
}

void check_overlap_mesh_inside(const SimplicialMesh& bg, const SimplicialMesh& ov) {
  const std::vector<BBox> bg_boxes = cell_bboxes(bg);
  std::vector<int> all_cells(bg.n_cells());
  for (int c = 0; c < bg.n_cells(); ++c) all_cells[c] = c;
  for (int f : ov.boundary_facet_ids) {
    const Eigen::Vector2d pa = ov.vertices[ov.facets[f].v0];
    const Eigen::Vector2d pb = ov.vertices[ov.facets[f].v1];
    for (const Eigen::Vector2d& p : {pa, pb, Eigen::Vector2d(0.5 * (pa + pb))}) {
      if (!locate_in_cells(bg, all_cells, bg_boxes, p, eps_geom))
        throw std::invalid_argument(
            "overlapping mesh is not inside the background domain");
      for (int bf : bg.boundary_facet_ids) {
        const Facet& e = bg.facets[bf];
        if (point_segment_distance(p, bg.vertices[e.v0], bg.vertices[e.v1]) <= eps_geom)
          throw std::invalid_argument(
              "overlapping-mesh boundary touches the outer boundary");
      }
    }
  }
}

CellClassification classify_from_areas(const SimplicialMesh& bg,
                                       const std::vector<double>& area_in) {
  CellClassification cls;
  for (int c = 0; c < bg.n_cells(); ++c) {
    const double cell = cell_area(bg, c);
    if (area_in[c] <= eps_class * cell)
      cls.not_overlapped.push_back(c);
    else if (area_in[c] >= (1.0 - eps_class) * cell)
      cls.fully_overlapped.push_back(c);
    else
      cls.partially_overlapped.push_back(c);
  }
  return cls;
}

// parameters in [0,1] where [a,b] crosses edges of the background mesh
std::vector<double> split_parameters(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                     const SimplicialMesh& bg) {
  const Eigen::Vector2d d1 = b - a;
  const double len1 = d1.norm();
  std::vector<double> ts{0.0, 1.0};
  BBox seg_box{std::min(a.x(), b.x()), std::max(a.x(), b.x()), std::min(a.y(), b.y()),
               std::max(a.y(), b.y())};
  for (const Facet& f : bg.facets) {
    const Eigen::Vector2d& p = bg.vertices[f.v0];
    const Eigen::Vector2d& q = bg.vertices[f.v1];
    BBox fb{std::min(p.x(), q.x()), std::max(p.x(), q.x()), std::min(p.y(), q.y()),
            std::max(p.y(), q.y())};
    if (!seg_box.overlaps(fb, eps_geom)) continue;
    const Eigen::Vector2d d2 = q - p;
    const double len2 = d2.norm();
    const double denom = cross2(d1, d2);
    if (std::abs(denom) <= eps_geom * len1 * len2) {
      // parallel; collect projections when collinear
      if (std::abs(cross2(d1, p - a)) / len1 <= eps_geom) {
        for (const Eigen::Vector2d& r : {p, q}) {
          const double t = (r - a).dot(d1) / (len1 * len1);
          if (t > -eps_geom / len1 && t < 1.0 + eps_geom / len1)
            ts.push_back(std::clamp(t, 0.0, 1.0));
        }
      }
      continue;
    }
    const double t = cross2(p - a, d2) / denom;
    const double s = cross2(p - a, d1) / denom;
    if (t < -eps_geom / len1 || t > 1.0 + eps_geom / len1) continue;
    if (s < -eps_geom / len2 || s > 1.0 + eps_geom / len2) continue;
    ts.push_back(std::clamp(t, 0.0, 1.0));
  }
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts)
    if (out.empty() || (t - out.back()) * len1 > eps_geom) out.push_back(t);
  if (out.back() < 1.0) out.back() = 1.0;  // merged into the endpoint above
  return out;
}

}  // namespace

Eigen::Vector3d barycentric(const Triangle& t, const Eigen::Vector2d& p) {
  const double a2 = cross2(t[1] - t[0], t[2] - t[0]);
  return {cross2(t[2] - t[1], p - t[1]) / a2, cross2(t[0] - t[2], p - t[2]) / a2,
          cross2(t[1] - t[0], p - t[0]) / a2};
}

std::optional<int> locate_point(const SimplicialMesh& mesh, const Eigen::Vector2d& p) {
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Triangle t = cell_points(mesh, c);
    if (p.x() < std::min({t[0].x(), t[1].x(), t[2].x()}) - eps_geom) continue;
    if (p.x() > std::max({t[0].x(), t[1].x(), t[2].x()}) + eps_geom) continue;
    if (p.y() < std::min({t[0].y(), t[1].y(), t[2].y()}) - eps_geom) continue;
    if (p.y() > std::max({t[0].y(), t[1].y(), t[2].y()}) + eps_geom) continue;
    if (barycentric(t, p).minCoeff() >= -eps_geom) return c;
  }
  return std::nullopt;
}

ConvexPolygon clip_triangle_triangle(const Triangle& t1, const Triangle& t2) {
  Triangle subject = t1, clipper = t2;
  for (Triangle* t : {&subject, &clipper}) {
    const double a = triangle_signed_area(*t);
    if (std::abs(a) < eps_geom * eps_geom)
      throw std::invalid_argument("clip_triangle_triangle: degenerate triangle");
    if (a < 0) std::swap((*t)[1], (*t)[2]);
  }

  std::vector<Eigen::Vector2d> poly(subject.begin(), subject.end());
  for (int e = 0; e < 3 && !poly.empty(); ++e) {
    const Eigen::Vector2d& ca = clipper[e];
    const Eigen::Vector2d& cb = clipper[(e + 1) % 3];
    const double len = (cb - ca).norm();
    std::vector<Eigen::Vector2d> next;
    next.reserve(poly.size() + 1);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d& p = poly[i];
      const Eigen::Vector2d& q = poly[(i + 1) % n];
      const double dp = cross2(cb - ca, p - ca) / len;  // signed distance, inside > 0
      const double dq = cross2(cb - ca, q - ca) / len;
      const bool in_p = dp >= -eps_geom;
      const bool in_q = dq >= -eps_geom;
      if (in_p) next.push_back(p);
      if (in_p != in_q) next.push_back(p + (dp / (dp - dq)) * (q - p));
    }
    poly = std::move(next);
  }
  return normalize_polygon(std::move(poly));
}

CellClassification classify_cells(const SimplicialMesh& bg, const SimplicialMesh& ov) {
  check_overlap_mesh_inside(bg, ov);
  return classify_from_areas(bg, scan_overlaps(bg, ov).area_in);
}

double CutGeometry::overlap_area(int bg_cell) const {
  double a = 0.0;
  for (int i : pieces_of_bg_cell[bg_cell]) a += overlap_pieces[i].polygon.area();
  return a;
}

CutGeometry build_cut_geometry(const SimplicialMesh& bg, const SimplicialMesh& ov) {
  check_overlap_mesh_inside(bg, ov);
  OverlapScan scan = scan_overlaps(bg, ov);

  CutGeometry geom;
  geom.classification = classify_from_areas(bg, scan.area_in);
  geom.in_t1_star.assign(bg.n_cells(), 1);
  for (int c : geom.classification.fully_overlapped) geom.in_t1_star[c] = 0;
  for (int c = 0; c < bg.n_cells(); ++c)
    if (geom.in_t1_star[c]) geom.t1_star_cells.push_back(c);

  geom.pieces_of_bg_cell.resize(bg.n_cells());
  for (int c : geom.classification.partially_overlapped) {
    for (OverlapPiece& piece : scan.pieces[c]) {
      geom.pieces_of_bg_cell[c].push_back(static_cast<int>(geom.overlap_pieces.size()));
      geom.overlap_pieces.push_back(std::move(piece));
    }
  }

  const std::vector<BBox> bg_boxes = cell_bboxes(bg);
  geom.mesh_compat_ratio = 1.0;
  for (int fid : ov.boundary_facet_ids) {
    const Facet& f = ov.facets[fid];
    const Eigen::Vector2d pa = ov.vertices[f.v0];
    const Eigen::Vector2d pb = ov.vertices[f.v1];
    Eigen::Vector2d normal = -perp((pb - pa).normalized());
    if (normal.dot(cell_centroid(ov, f.cell0) - 0.5 * (pa + pb)) > 0) normal = -normal;
    const double h_pen = cell_diameter(ov, f.cell0);

    const std::vector<double> ts = split_parameters(pa, pb, bg);
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      InterfaceSegment seg;
      seg.a = pa + ts[k] * (pb - pa);
      seg.b = pa + ts[k + 1] * (pb - pa);
      if (seg.length() <= eps_geom) continue;
      seg.ov_cell = f.cell0;
      seg.ov_facet = fid;
      seg.normal = normal;
      seg.h_penalty = h_pen;
      std::optional<int> host =
          locate_in_cells(bg, geom.t1_star_cells, bg_boxes, seg.midpoint(), eps_geom);
      if (!host) {
        // classification-tolerance limit: a piece of the interface can sit in
        // a cell whose leftover sliver fell below eps_class and was therefore
        // deactivated; host it in the nearest active cell, whose affine basis
        // extension is valid at these distances
        const auto [cell, bc] = nearest_cell(bg, geom.t1_star_cells, seg.midpoint());
        if (cell < 0 || bc < -1e-4)
          throw std::runtime_error(
              "build_cut_geometry: interface facet piece not located in any active "
              "background cell");
        host = cell;
      }
      seg.bg_cell = *host;
      geom.mesh_compat_ratio =
          std::max(geom.mesh_compat_ratio,
                   std::max(cell_diameter(bg, seg.bg_cell) / h_pen,
                            h_pen / cell_diameter(bg, seg.bg_cell)));
      geom.interface_segments.push_back(seg);
    }
  }
  if (geom.mesh_compat_ratio > 10.0)
    std::cerr << "warning: interface mesh sizes are poorly matched (ratio "
              << geom.mesh_compat_ratio << ")\n";
  return geom;
}

double integrate_over_cut_part(const SimplicialMesh& bg, const CutGeometry& geom,
                               int bg_cell, int degree,
                               const std::function<double(const Eigen::Vector2d&)>& f) {
  if (bg_cell < 0 || bg_cell >= bg.n_cells() || !geom.in_t1_star[bg_cell])
    throw std::invalid_argument("integrate_over_cut_part: cell not in the active mesh");
  double value = triangle_rule(cell_points(bg, bg_cell), degree).integrate(f);
  for (int i : geom.pieces_of_bg_cell[bg_cell])
    value -= polygon_rule(geom.overlap_pieces[i].polygon, degree).integrate(f);
  return value;
}

}  // namespace olm
