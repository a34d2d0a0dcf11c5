#include "confcov/conformal_group.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "confcov/errors.hpp"

namespace confcov {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_rotation(const Orthogonal& q) {
  if (q.rows() != q.cols()) throw std::invalid_argument("rotation matrix must be square");
  Orthogonal id = Orthogonal::Identity(q.rows(), q.cols());
  if ((q.transpose() * q - id).norm() > 1e-12) throw std::invalid_argument("rotation matrix is not orthogonal");
}

}  // namespace

GroupElement::GroupElement(std::vector<Primitive> prims) : prims_(std::move(prims)) {
  for (const auto& p : prims_) {
    if (const auto* r = std::get_if<Rotate>(&p)) check_rotation(r->q);
    if (const auto* s = std::get_if<Dilate>(&p); s && !(s->a > 0)) throw std::invalid_argument("dilation must be > 0");
  }
}

GroupElement GroupElement::inverse() const {
  std::vector<Primitive> out;
  out.reserve(prims_.size());
  for (auto it = prims_.rbegin(); it != prims_.rend(); ++it)
    out.push_back(std::visit(overloaded{[](const Translate& t) -> Primitive { return Translate{-t.v}; },
                                        [](const Rotate& r) -> Primitive { return Rotate{r.q.transpose()}; },
                                        [](const Dilate& s) -> Primitive { return Dilate{1.0 / s.a}; },
                                        [](const Invert&) -> Primitive { return Invert{}; }},
                             *it));
  GroupElement g;
  g.prims_ = std::move(out);
  return g;
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  GroupElement g;
  g.prims_ = b.prims_;
  g.prims_.insert(g.prims_.end(), a.prims_.begin(), a.prims_.end());
  return g;
}

template <class P, class T>
P act_impl(const std::vector<Primitive>& prims, const P& x, T& k) {
  P p = x;
  k = 1;
  for (const auto& prim : prims) {
    std::visit(overloaded{[&](const Translate& t) { p += t.v.template cast<T>(); },
                          [&](const Rotate& r) { p = r.q.template cast<T>() * p; },
                          [&](const Dilate& s) {
                            p *= T(s.a);
                            k *= T(s.a);
                          },
                          [&](const Invert&) {
                            T n2 = p.squaredNorm();
                            if (n2 < T(kSingularRadius * kSingularRadius)) throw SingularPoint();
                            p = -p / n2;
                            k /= n2;
                          }},
               prim);
  }
  return p;
}

Point GroupElement::act(const Point& x, double& k) const { return act_impl(prims_, x, k); }

PointLD GroupElement::act(const PointLD& x, long double& k) const { return act_impl(prims_, x, k); }

Point GroupElement::act(const Point& x) const {
  double k;
  return act(x, k);
}

double GroupElement::kappa(const Point& x) const {
  double k;
  act(x, k);
  return k;
}

double GroupElement::singular_distance(const Point& x) const {
  Point p = x;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& prim : prims_) {
    if (std::holds_alternative<Invert>(prim)) {
      double n = p.norm();
      best = std::min(best, n);
      if (n == 0) return 0;
    }
    GroupElement step({prim});
    p = step.act(p);
  }
  return best;
}

std::string GroupElement::to_string() const {
  std::ostringstream os;
  os.precision(6);
  bool first = true;
  for (const auto& prim : prims_) {
    if (!first) os << " ; ";
    first = false;
    std::visit(overloaded{[&](const Translate& t) { os << "T(" << t.v.transpose() << ")"; },
                          [&](const Rotate&) { os << "R"; }, [&](const Dilate& s) { os << "D(" << s.a << ")"; },
                          [&](const Invert&) { os << "I"; }},
               prim);
  }
  return first ? "id" : os.str();
}

double cocycle_residual(const GroupElement& g1, const GroupElement& g2, const Point& x) {
  double k2;
  Point y = g2.act(x, k2);
  double k12 = (g1 * g2).kappa(x);
  return std::abs(k12 - g1.kappa(y) * k2) / k12;
}

double distance_identity_residual(const GroupElement& g, const Point& x, const Point& y) {
  double kx, ky;
  Point gx = g.act(x, kx), gy = g.act(y, ky);
  double lhs = (gx - gy).squaredNorm();
  double rhs = kx * ky * (x - y).squaredNorm();
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), std::numeric_limits<double>::min());
}

Eigen::VectorXd stereographic(const Point& x) {
  double n2 = x.squaredNorm();
  Eigen::VectorXd c(x.size() + 1);
  c(0) = (1 - n2) / (1 + n2);
  c.tail(x.size()) = 2 * x / (1 + n2);
  return c;
}

double stereographic_distance_residual(const Point& x, const Point& y) {
  double lhs = (stereographic(x) - stereographic(y)).norm();
  double rhs = 2 * (x - y).norm() / std::sqrt((1 + x.squaredNorm()) * (1 + y.squaredNorm()));
  return std::abs(lhs - rhs) / std::max(rhs, std::numeric_limits<double>::min());
}

std::string to_string(GroupClass c) {
  switch (c) {
    case GroupClass::Translate:
      return "translate";
    case GroupClass::Rotate:
      return "rotate";
    case GroupClass::Dilate:
      return "dilate";
    case GroupClass::InvertComposed:
      return "invert";
    case GroupClass::Mixed:
      return "mixed";
  }
  return "?";
}

Orthogonal random_rotation(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n;
  Orthogonal m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = n(rng);
  Eigen::HouseholderQR<Orthogonal> qr(m);
  Orthogonal q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

Point random_point(std::mt19937_64& rng, int dim, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Point p(dim);
  for (int i = 0; i < dim; ++i) p(i) = n(rng);
  return p;
}

GroupElement random_element(std::mt19937_64& rng, int dim, GroupClass cls) {
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  switch (cls) {
    case GroupClass::Translate:
      return GroupElement({Translate{random_point(rng, dim)}});
    case GroupClass::Rotate:
      return GroupElement({Rotate{random_rotation(rng, dim)}});
    case GroupClass::Dilate:
      return GroupElement({Dilate{scale(rng)}});
    case GroupClass::InvertComposed:
      return GroupElement({Translate{random_point(rng, dim)}, Invert{}, Translate{random_point(rng, dim)}});
    case GroupClass::Mixed: {
      std::uniform_int_distribution<int> kind(0, 3), len(1, 5);
      std::vector<Primitive> prims;
      int n = len(rng);
      for (int i = 0; i < n; ++i) {
        switch (kind(rng)) {
          case 0:
            prims.push_back(Translate{random_point(rng, dim)});
            break;
          case 1:
            prims.push_back(Rotate{random_rotation(rng, dim)});
            break;
          case 2:
            prims.push_back(Dilate{scale(rng)});
            break;
          default:
            prims.push_back(Invert{});
        }
      }
      return GroupElement(std::move(prims));
    }
  }
  throw std::logic_error("unknown group class");
}

}  // namespace confcov
