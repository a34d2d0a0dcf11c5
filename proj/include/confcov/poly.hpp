#pragma once

// Sparse multivariate polynomials over an arbitrary coefficient ring, with
// terms kept in graded lexicographic order (variable 0 most significant).

#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace confcov {

template <class C>
struct CoeffOps;

template <>
struct CoeffOps<mpq_class> {
  static mpq_class from_int(long n) { return mpq_class(n); }
  static bool is_zero(const mpq_class& c) { return sgn(c) == 0; }
  static bool is_one(const mpq_class& c) { return c == 1; }
  static bool is_minus_one(const mpq_class& c) { return c == -1; }
  static bool atomic(const mpq_class&) { return true; }
  static std::string to_string(const mpq_class& c) { return c.get_str(); }
};

template <>
struct CoeffOps<double> {
  static double from_int(long n) { return static_cast<double>(n); }
  static bool is_zero(double c) { return c == 0.0; }
  static bool is_one(double c) { return c == 1.0; }
  static bool is_minus_one(double c) { return c == -1.0; }
  static bool atomic(double) { return true; }
  static std::string to_string(double c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return buf;
  }
};

template <std::size_t N>
struct Monomial {
  std::array<std::uint16_t, N> e{};

  unsigned degree() const {
    unsigned s = 0;
    for (auto x : e) s += x;
    return s;
  }
  bool is_one() const {
    for (auto x : e)
      if (x) return false;
    return true;
  }
  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < N; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < N; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] + o.e[i]);
    return r;
  }
  // Caller guarantees o divides *this.
  Monomial operator/(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < N; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] - o.e[i]);
    return r;
  }
  static Monomial unit(std::size_t var, unsigned power = 1) {
    Monomial m;
    m.e[var] = static_cast<std::uint16_t>(power);
    return m;
  }
  bool operator==(const Monomial&) const = default;
};

template <std::size_t N>
struct GrlexGreater {
  bool operator()(const Monomial<N>& a, const Monomial<N>& b) const {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return b.e < a.e;
  }
};

template <class C, std::size_t N>
struct DefaultNames {
  static std::vector<std::string> get() {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < N; ++i) v.push_back("x" + std::to_string(i));
    return v;
  }
};

template <class C, std::size_t N>
class Poly {
 public:
  using Coeff = C;
  using Mono = Monomial<N>;
  using Terms = std::map<Mono, C, GrlexGreater<N>>;
  using Ops = CoeffOps<C>;
  static constexpr std::size_t kVars = N;

  Poly() = default;
  explicit Poly(const C& c) {
    if (!Ops::is_zero(c)) terms_.emplace(Mono{}, c);
  }
  static Poly constant(long n) { return Poly(Ops::from_int(n)); }
  static Poly variable(std::size_t var, unsigned power = 1) {
    return term(Mono::unit(var, power), Ops::from_int(1));
  }
  static Poly term(const Mono& m, const C& c) {
    Poly p;
    if (!Ops::is_zero(c)) p.terms_.emplace(m, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
  C constant_term() const {
    auto it = terms_.find(Mono{});
    return it == terms_.end() ? Ops::from_int(0) : it->second;
  }
  // Leading term in grlex order; undefined on zero.
  const Mono& leading_monomial() const { return terms_.begin()->first; }
  const C& leading_coeff() const { return terms_.begin()->second; }

  void add_term(const Mono& m, const C& c) {
    if (Ops::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (Ops::is_zero(it->second)) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, C(-c));
    return *this;
  }
  Poly& operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    Poly r;
    for (const auto& [m, c] : a.terms_) r.terms_.emplace_hint(r.terms_.end(), m, C(-c));
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    if (a.is_zero() || b.is_zero()) return r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        C c = ca;
        c *= cb;
        r.add_term(ma * mb, c);
      }
    return r;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  Poly scaled(const C& s) const {
    Poly r;
    if (Ops::is_zero(s)) return r;
    for (const auto& [m, c] : terms_) {
      C v = c;
      v *= s;
      if (!Ops::is_zero(v)) r.terms_.emplace_hint(r.terms_.end(), m, v);
    }
    return r;
  }
  // Multiplication by a monomial preserves the term order.
  Poly times_monomial(const Mono& mono, const C& s) const {
    Poly r;
    if (Ops::is_zero(s)) return r;
    for (const auto& [m, c] : terms_) {
      C v = c;
      v *= s;
      if (!Ops::is_zero(v)) r.terms_.emplace_hint(r.terms_.end(), m * mono, v);
    }
    return r;
  }

  Poly derivative(std::size_t var) const {
    Poly r;
    for (const auto& [m, c] : terms_) {
      if (!m.e[var]) continue;
      Mono m2 = m;
      --m2.e[var];
      C v = c;
      v *= Ops::from_int(m.e[var]);
      r.add_term(m2, v);
    }
    return r;
  }

  unsigned degree(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max<unsigned>(d, m.e[var]);
    return d;
  }
  unsigned total_degree() const { return terms_.empty() ? 0 : terms_.begin()->first.degree(); }
  bool depends_on(std::size_t var) const { return degree(var) > 0; }

  // Coefficient of var^k, as a polynomial free of var.
  Poly coefficient(std::size_t var, unsigned k) const {
    Poly r;
    for (const auto& [m, c] : terms_)
      if (m.e[var] == k) {
        Mono m2 = m;
        m2.e[var] = 0;
        r.terms_.emplace(m2, c);
      }
    return r;
  }
  // Decomposition p = sum_k coeff_k * var^k.
  std::map<unsigned, Poly> split(std::size_t var) const {
    std::map<unsigned, Poly> out;
    for (const auto& [m, c] : terms_) {
      Mono m2 = m;
      m2.e[var] = 0;
      out[m.e[var]].terms_.emplace(m2, c);
    }
    return out;
  }

  Poly substitute(std::size_t var, const Poly& repl) const {
    auto parts = split(var);
    Poly result;
    Poly power = constant(1);
    unsigned at = 0;
    for (auto& [k, part] : parts) {
      while (at < k) {
        power *= repl;
        ++at;
      }
      result += part * power;
    }
    return result;
  }
  Poly substitute(std::size_t var, const C& value) const { return substitute(var, Poly(value)); }

  template <class F>
  Poly map_coefficients(F&& f) const {
    Poly r;
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  template <class V, class F>
  V evaluate(const std::array<V, N>& x, F&& coeff_value) const {
    V sum{};
    for (const auto& [m, c] : terms_) {
      V t = coeff_value(c);
      for (std::size_t i = 0; i < N; ++i)
        for (unsigned k = 0; k < m.e[i]; ++k) t *= x[i];
      sum += t;
    }
    return sum;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      std::string mono;
      for (std::size_t i = 0; i < N; ++i) {
        if (!m.e[i]) continue;
        if (!mono.empty()) mono += "*";
        mono += names[i];
        if (m.e[i] > 1) mono += "^" + std::to_string(m.e[i]);
      }
      std::string part;
      if (mono.empty()) {
        part = Ops::atomic(c) ? Ops::to_string(c) : "(" + Ops::to_string(c) + ")";
      } else if (Ops::is_one(c)) {
        part = mono;
      } else if (Ops::is_minus_one(c)) {
        part = "-" + mono;
      } else {
        std::string cs = Ops::to_string(c);
        part = (Ops::atomic(c) ? cs : "(" + cs + ")") + "*" + mono;
      }
      if (first)
        out = part;
      else if (part[0] == '-')
        out += " - " + part.substr(1);
      else
        out += " + " + part;
      first = false;
    }
    return out;
  }
  std::string to_string() const { return to_string(DefaultNames<C, N>::get()); }

 private:
  Terms terms_;
};

template <class C, std::size_t N>
struct CoeffOps<Poly<C, N>> {
  using P = Poly<C, N>;
  static P from_int(long n) { return P(CoeffOps<C>::from_int(n)); }
  static bool is_zero(const P& p) { return p.is_zero(); }
  static bool is_one(const P& p) { return p.is_constant() && !p.is_zero() && CoeffOps<C>::is_one(p.constant_term()); }
  static bool is_minus_one(const P& p) {
    return p.is_constant() && !p.is_zero() && CoeffOps<C>::is_minus_one(p.constant_term());
  }
  static bool atomic(const P& p) { return p.size() <= 1; }
  static std::string to_string(const P& p) { return p.to_string(); }
};

}  // namespace confcov
