#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "rgroups/errors.hpp"
#include "rgroups/rational.hpp"
#include "rgroups/words.hpp"

namespace rgroups {

/// Tutte's count of rooted planar maps with n edges: 2 (2n)! 3^n / (n! (n+2)!).
inline BigInt tutte_count(int n) {
  if (n < 1) throw DomainError("tutte_count needs n >= 1");
  BigInt fact_2n = 1, fact_n = 1, fact_n2 = 1;
  for (int i = 2; i <= 2 * n; ++i) fact_2n *= i;
  for (int i = 2; i <= n; ++i) fact_n *= i;
  for (int i = 2; i <= n + 2; ++i) fact_n2 *= i;
  const BigInt numerator = 2 * fact_2n * pow_big(BigInt(3), static_cast<unsigned>(n));
  const BigInt denominator = fact_n * fact_n2;
  if (numerator % denominator != 0) throw std::logic_error("tutte_count is not integral");
  return numerator / denominator;
}

/// A rooted map on darts 0..2E-1. Edge e has darts 2e and 2e+1; sigma rotates
/// darts around their vertex; faces are the cycles of sigma(alpha(d)). Dart 0 is
/// the root.
struct RootedMap {
  std::vector<int> sigma;

  int edges() const { return static_cast<int>(sigma.size() / 2); }
  static int alpha(int d) { return d ^ 1; }
  int phi(int d) const { return sigma[static_cast<std::size_t>(alpha(d))]; }

  /// Cycle id per dart for sigma (vertices) or phi (faces).
  std::vector<int> vertex_of() const { return cycles([&](int d) { return sigma[static_cast<std::size_t>(d)]; }); }
  std::vector<int> face_of() const { return cycles([&](int d) { return phi(d); }); }
  int vertices() const { return count(vertex_of()); }
  int faces() const { return count(face_of()); }

 private:
  template <typename Next>
  std::vector<int> cycles(Next next) const {
    std::vector<int> id(sigma.size(), -1);
    int c = 0;
    for (std::size_t d = 0; d < sigma.size(); ++d) {
      if (id[d] != -1) continue;
      for (int e = static_cast<int>(d); id[static_cast<std::size_t>(e)] == -1; e = next(e)) id[static_cast<std::size_t>(e)] = c;
      ++c;
    }
    return id;
  }
  static int count(const std::vector<int>& ids) { return ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1; }
};

namespace detail {

/// Relabels darts in breadth-first order from `root` (children sigma(d), then
/// alpha(d)). Rooted maps have no nontrivial automorphisms, so the relabelled
/// sigma identifies the isomorphism class. Empty when the map is disconnected.
inline std::vector<int> canonical_sigma(const std::vector<int>& sigma, int root) {
  const std::size_t darts = sigma.size();
  std::vector<int> label(darts, -1);
  std::vector<int> order;
  order.reserve(darts);
  label[static_cast<std::size_t>(root)] = 0;
  order.push_back(root);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const int d = order[head];
    for (int next : {sigma[static_cast<std::size_t>(d)], d ^ 1}) {
      if (label[static_cast<std::size_t>(next)] != -1) continue;
      label[static_cast<std::size_t>(next)] = static_cast<int>(order.size());
      order.push_back(next);
    }
  }
  if (order.size() != darts) return {};
  std::vector<int> code(2 * darts);
  for (std::size_t i = 0; i < darts; ++i) {
    const int d = order[i];
    code[i] = label[static_cast<std::size_t>(sigma[static_cast<std::size_t>(d)])];
    code[darts + i] = label[static_cast<std::size_t>(d ^ 1)];
  }
  return code;
}

/// Rebuilds a RootedMap with alpha = (0 1)(2 3)... from a canonical code.
inline RootedMap map_from_code(const std::vector<int>& code) {
  const std::size_t darts = code.size() / 2;
  std::vector<int> relabel(darts, -1);
  int next_edge = 0;
  for (std::size_t i = 0; i < darts; ++i) {
    if (relabel[i] != -1) continue;
    relabel[i] = 2 * next_edge;
    relabel[static_cast<std::size_t>(code[darts + i])] = 2 * next_edge + 1;
    ++next_edge;
  }
  RootedMap map;
  map.sigma.assign(darts, 0);
  for (std::size_t i = 0; i < darts; ++i) {
    map.sigma[static_cast<std::size_t>(relabel[i])] = relabel[static_cast<std::size_t>(code[i])];
  }
  return map;
}

}  // namespace detail

inline constexpr int kDefaultMapBudget = 5;

/// Every rooted planar map with n edges, one representative per isomorphism
/// class, root at dart 0. Brute force over all (2n)! vertex rotations.
inline std::vector<RootedMap> rooted_planar_maps(int n, int max_edges = kDefaultMapBudget) {
  if (n < 1) throw DomainError("map enumeration needs n >= 1");
  if (n > max_edges) {
    throw ResourceError("map enumeration with " + std::to_string(n) + " edges exceeds the budget of " +
                        std::to_string(max_edges));
  }
  const int darts = 2 * n;
  std::vector<int> sigma(static_cast<std::size_t>(darts));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::set<std::vector<int>> codes;
  do {
    RootedMap m{sigma};
    if (m.vertices() + m.faces() != n + 2) continue;
    for (int root = 0; root < darts; ++root) {
      auto code = detail::canonical_sigma(sigma, root);
      if (code.empty()) break;
      codes.insert(std::move(code));
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  std::vector<RootedMap> out;
  out.reserve(codes.size());
  for (const auto& code : codes) out.push_back(detail::map_from_code(code));
  return out;
}

/// Independent count of rooted planar maps; must agree with tutte_count.
inline BigInt enumerate_rooted_maps(int n, int max_edges = kDefaultMapBudget) {
  return BigInt(rooted_planar_maps(n, max_edges).size());
}

/// A map read as the planar graph underneath a diagram: the face holding the
/// root dart is the outside, the others are the diagram's faces.
struct SkeletonCheck {
  bool is_skeleton = false;
  int edges = 0;
  int bounded_faces = 0;
  int spurs = 0;
};

/// Skeleton rules: at least one bounded face; every vertex has valence >= 3,
/// except a valence-1 spur tip inside a bounded face (at most one per face) and
/// a valence-2 vertex whose two darts form a single loop (a face bounded by one
/// closed contour). Spurs in the outer face would be filaments and are rejected.
inline SkeletonCheck check_skeleton(const RootedMap& map) {
  SkeletonCheck out;
  out.edges = map.edges();
  const auto vertex = map.vertex_of();
  const auto face = map.face_of();
  const int V = map.vertices();
  const int F = map.faces();
  const int outer = face[0];
  out.bounded_faces = F - 1;
  std::vector<int> degree(static_cast<std::size_t>(V), 0);
  std::vector<int> first_dart(static_cast<std::size_t>(V), -1);
  for (std::size_t d = 0; d < vertex.size(); ++d) {
    ++degree[static_cast<std::size_t>(vertex[d])];
    if (first_dart[static_cast<std::size_t>(vertex[d])] == -1) first_dart[static_cast<std::size_t>(vertex[d])] = static_cast<int>(d);
  }
  std::vector<int> spurs_in_face(static_cast<std::size_t>(F), 0);
  bool ok = out.bounded_faces >= 1;
  for (int v = 0; v < V && ok; ++v) {
    const int d = first_dart[static_cast<std::size_t>(v)];
    if (degree[static_cast<std::size_t>(v)] == 1) {
      const int f = face[static_cast<std::size_t>(d)];
      ok = f != outer && ++spurs_in_face[static_cast<std::size_t>(f)] <= 1;
      ++out.spurs;
    } else if (degree[static_cast<std::size_t>(v)] == 2) {
      ok = map.sigma[static_cast<std::size_t>(d)] == RootedMap::alpha(d);
    }
  }
  out.is_skeleton = ok;
  return out;
}

struct CensusRow {
  int n = 0;
  BigInt count;
  BigInt oracle;
  std::size_t skeletons = 0;
  /// Largest E - 5F over skeletons with n edges; the edge bound needs <= 0.
  int max_edge_excess = std::numeric_limits<int>::min();
};

inline std::vector<CensusRow> map_census(int max_n, int max_edges = kDefaultMapBudget) {
  std::vector<CensusRow> rows;
  for (int n = 1; n <= max_n; ++n) {
    const auto maps = rooted_planar_maps(n, max_edges);
    CensusRow row{n, BigInt(maps.size()), tutte_count(n), 0, std::numeric_limits<int>::min()};
    for (const auto& m : maps) {
      const auto s = check_skeleton(m);
      if (!s.is_skeleton) continue;
      ++row.skeletons;
      row.max_edge_excess = std::max(row.max_edge_excess, s.edges - 5 * s.bounded_faces);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Diagrams with at most `faces` faces, each of perimeter ell, built on the
/// skeletons with at most max_edges edges: for each skeleton, edge lengths in
/// [1, ell] with every bounded face summing to ell, times (2 ell)^F start points
/// and F^F labelings. Larger skeletons are not enumerated.
inline BigInt count_fillable_configurations(int faces, int ell, int max_edges = kDefaultMapBudget) {
  if (faces < 1 || ell < 1) throw DomainError("need faces >= 1 and ell >= 1");
  BigInt total = 0;
  for (int n = 1; n <= max_edges; ++n) {
    for (const auto& map : rooted_planar_maps(n, max_edges)) {
      const auto s = check_skeleton(map);
      if (!s.is_skeleton || s.bounded_faces > faces) continue;
      const auto face = map.face_of();
      const int outer = face[0];
      std::vector<int> length(static_cast<std::size_t>(n), 1);
      BigInt fillings = 0;
      while (true) {
        std::vector<int> perimeter(static_cast<std::size_t>(map.faces()), 0);
        for (std::size_t d = 0; d < face.size(); ++d) perimeter[static_cast<std::size_t>(face[d])] += length[d / 2];
        bool fits = true;
        for (std::size_t f = 0; f < perimeter.size(); ++f) {
          if (static_cast<int>(f) != outer && perimeter[f] != ell) fits = false;
        }
        if (fits) ++fillings;
        std::size_t pos = 0;
        while (pos < length.size() && ++length[pos] > ell) length[pos++] = 1;
        if (pos == length.size()) break;
      }
      const auto F = static_cast<unsigned>(s.bounded_faces);
      total += fillings * pow_big(BigInt(2 * ell), F) * pow_big(BigInt(s.bounded_faces), F);
    }
  }
  return total;
}

inline double log_base(double x, int m) { return std::log(x) / std::log(2.0 * m - 1.0); }

struct DiagramBound {
  /// log of (2 ell)^F F^F ell^(5F) 3^(25F).
  double log_bound = 0.0;
  /// 6 F log ell + 2 F log F.
  double headline = 0.0;
};

/// Logs base 2m-1, evaluated term by term.
inline DiagramBound log_diagram_bound(double faces, double ell, int m = 2) {
  if (faces < 1 || ell < 1) throw DomainError("need faces >= 1 and ell >= 1");
  if (m < 2 || m > kMaxGenerators) throw DomainError("m must lie in [2, 26]");
  DiagramBound b;
  b.log_bound = faces * log_base(2 * ell, m) + faces * log_base(faces, m) + 5 * faces * log_base(ell, m) +
                25 * faces * log_base(3, m);
  b.headline = 6 * faces * log_base(ell, m) + 2 * faces * log_base(faces, m);
  return b;
}

/// Diagrams in the window K^2/4 <= |D| <= 480 K^2, bounded with F = 480 K^2;
/// the headline is 3000 K^2 log(K ell).
inline DiagramBound log_window_diagram_bound(double K, double ell, int m = 2) {
  DiagramBound b = log_diagram_bound(480.0 * K * K, ell, m);
  b.headline = 3000.0 * K * K * log_base(K * ell, m);
  return b;
}

struct DiagramStats {
  BigInt faces = 1;
  BigInt boundary = 0;
  std::int64_t ell = 1;

  void validate() const {
    if (faces < 1) throw DomainError("a diagram has at least one face");
    if (boundary < 0) throw DomainError("boundary length must be >= 0");
    if (ell < 1) throw DomainError("relator length must be >= 1");
    if (boundary > faces * ell) throw DomainError("boundary length exceeds the total face perimeter ell*|D|");
  }
};

/// Exponent (base 2m-1) of the fulfillability bound: (|dD|/|D| - ell(1 - 2 density)) / 2.
inline Rational fulfillability_exponent(const DiagramStats& stats, const Rational& density) {
  stats.validate();
  return (Rational(stats.boundary, stats.faces) - Rational(stats.ell) * (1 - 2 * density)) / 2;
}

/// Same exponent with density read off sampled parameters.
inline double fulfillability_bound(const DiagramStats& stats, const ModelParams& params) {
  stats.validate();
  params.validate();
  if (params.ell != stats.ell) throw DomainError("diagram and model use different relator lengths");
  const double ratio = to_double(Rational(stats.boundary, stats.faces));
  return 0.5 * (ratio - static_cast<double>(stats.ell) * (1.0 - 2.0 * params.density()));
}

/// Exponent 10^4 ell / K - ell f bounding fulfillability for diagrams in the
/// window that fail the quadratic inequality.
inline Rational window_fulfillability_exponent(std::int64_t ell, const Rational& K, const Rational& f) {
  if (ell < 1 || K <= 0) throw DomainError("need ell >= 1 and K > 0");
  return Rational(10000) * ell / K - Rational(ell) * f;
}

inline const BigInt& conforming_window_scale() {
  static const BigInt k = pow_big(BigInt(10), 10);
  return k;
}

struct WindowParams {
  BigInt K = 1;
  std::int64_t ell = 1;
  /// Refuse K below 10^10 instead of flagging it.
  bool conforming = false;

  bool meets_hypothesis() const { return K >= conforming_window_scale(); }
  void validate() const {
    if (K < 1) throw DomainError("window scale K must be >= 1");
    if (ell < 1) throw DomainError("relator length must be >= 1");
    if (conforming && !meets_hypothesis()) throw DomainError("conforming mode needs K >= 10^10");
  }
};

struct LinearIsoConclusion {
  /// ell |D| / (10^4 K).
  Rational required_boundary;
  bool holds = false;
};

struct LocalGlobalResult {
  bool in_window = false;
  bool satisfies_j = false;
  /// False when K < 10^10 (exploration mode).
  bool conforming = false;
  /// Present when |D| >= K^2.
  std::optional<LinearIsoConclusion> conclusion;
};

/// Window K^2/4 <= |D| <= 480 K^2, quadratic test |dD|^2 >= 2*10^4 ell^2 |D|, and
/// the linear conclusion |dD| >= ell |D| / (10^4 K) for |D| >= K^2. Exact integers.
inline LocalGlobalResult local_global(const DiagramStats& stats, const WindowParams& win) {
  stats.validate();
  win.validate();
  if (stats.ell != win.ell) throw DomainError("diagram and window use different relator lengths");
  LocalGlobalResult r;
  const BigInt K2 = win.K * win.K;
  const BigInt ell(stats.ell);
  r.in_window = 4 * stats.faces >= K2 && stats.faces <= 480 * K2;
  r.satisfies_j = stats.boundary * stats.boundary >= 20000 * ell * ell * stats.faces;
  r.conforming = win.meets_hypothesis();
  if (stats.faces >= K2) {
    LinearIsoConclusion c;
    c.required_boundary = Rational(ell * stats.faces, 10000 * win.K);
    c.holds = 10000 * win.K * stats.boundary >= ell * stats.faces;
    r.conclusion = c;
  }
  return r;
}

}  // namespace rgroups
