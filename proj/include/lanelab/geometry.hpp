#ifndef LANELAB_GEOMETRY_HPP
#define LANELAB_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lanelab {

// Points in R^n, n small (3..8). Dimension is runtime.
using Point = std::vector<double>;

inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point sub(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Point add(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Point scale(const Point& a, double c) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline double dist(const Point& a, const Point& b) { return norm(sub(a, b)); }

// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
inline double unit_sphere_area(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

// c_n = 1 / ((n-2) |S^{n-1}|), the coefficient of the Newtonian kernel.
inline double newton_c(int n) { return 1.0 / ((n - 2) * unit_sphere_area(n)); }

struct BallDomain {
  int n = 3;
  Point center;
  double radius = 1.0;

  BallDomain() : center(3, 0.0) {}
  BallDomain(int n_, double radius_) : n(n_), center(n_, 0.0), radius(radius_) {
    if (n_ < 3) throw std::invalid_argument("BallDomain: n >= 3 required");
    if (radius_ <= 0.0) throw std::invalid_argument("BallDomain: radius > 0 required");
  }
  BallDomain(int n_, Point center_, double radius_)
      : n(n_), center(std::move(center_)), radius(radius_) {
    if (n_ < 3) throw std::invalid_argument("BallDomain: n >= 3 required");
    if (static_cast<int>(center.size()) != n_)
      throw std::invalid_argument("BallDomain: center dimension mismatch");
    if (radius_ <= 0.0) throw std::invalid_argument("BallDomain: radius > 0 required");
  }

  bool contains(const Point& x) const { return dist(x, center) < radius; }
  double boundary_dist(const Point& x) const { return radius - dist(x, center); }
};

inline std::string point_str(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    s += std::to_string(p[i]);
    if (i + 1 < p.size()) s += ",";
  }
  return s + ")";
}

}  // namespace lanelab

#endif
