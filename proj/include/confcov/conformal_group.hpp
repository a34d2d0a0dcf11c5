#pragma once

#include <random>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace confcov {

inline constexpr int kMaxNumDim = 5;

using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxNumDim, 1>;
using PointLD = Eigen::Matrix<long double, Eigen::Dynamic, 1, 0, kMaxNumDim, 1>;
using Orthogonal = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxNumDim, kMaxNumDim>;

struct Translate {
  Point v;
};
struct Rotate {
  Orthogonal q;
};
struct Dilate {
  double a = 1;
};
// x -> -x / |x|^2
struct Invert {};

using Primitive = std::variant<Translate, Rotate, Dilate, Invert>;

// Points closer than this to an inversion center are singular.
inline constexpr double kSingularRadius = 1e-3;

// g = p_n o ... o p_1: primitives are applied in list order.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(std::vector<Primitive> prims);
  static GroupElement identity() { return {}; }

  const std::vector<Primitive>& primitives() const { return prims_; }
  GroupElement inverse() const;
  // (a * b)(x) = a(b(x))
  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);

  // Throws SingularPoint when some prefix maps x into the singular ball.
  Point act(const Point& x) const;
  double kappa(const Point& x) const;
  // act and kappa in one pass
  Point act(const Point& x, double& kappa) const;
  // Extended precision, for finite differences.
  PointLD act(const PointLD& x, long double& kappa) const;
  // Smallest distance of a prefix image to an inversion center; infinity when
  // the element contains no inversion.
  double singular_distance(const Point& x) const;

  std::string to_string() const;

 private:
  std::vector<Primitive> prims_;
};

inline Point act(const GroupElement& g, const Point& x) { return g.act(x); }
inline double kappa(const GroupElement& g, const Point& x) { return g.kappa(x); }

// |kappa(g1 g2, x) - kappa(g1, g2 x) kappa(g2, x)| / kappa(g1 g2, x)
double cocycle_residual(const GroupElement& g1, const GroupElement& g2, const Point& x);
// Relative residual of |g(x) - g(y)|^2 = kappa(g,x) kappa(g,y) |x - y|^2.
double distance_identity_residual(const GroupElement& g, const Point& x, const Point& y);

// c(x) = ((1 - |x|^2), 2x) / (1 + |x|^2) in R^(d+1)
Eigen::VectorXd stereographic(const Point& x);
// Relative residual of |c(x) - c(y)| = 2|x - y| / sqrt((1+|x|^2)(1+|y|^2)).
double stereographic_distance_residual(const Point& x, const Point& y);

enum class GroupClass { Translate, Rotate, Dilate, InvertComposed, Mixed };
std::string to_string(GroupClass c);

Orthogonal random_rotation(std::mt19937_64& rng, int dim);
Point random_point(std::mt19937_64& rng, int dim, double scale = 1.0);
GroupElement random_element(std::mt19937_64& rng, int dim, GroupClass cls);

}  // namespace confcov
