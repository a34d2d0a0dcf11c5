#include "confcov/exact_ring.hpp"

#include <cctype>
#include <stdexcept>

namespace confcov {

namespace {

constexpr std::size_t kNoVar = kParamCount;

std::size_t idx(Param p) { return static_cast<std::size_t>(p); }

// Smallest-index variable occurring in a or b.
std::size_t main_variable(const ParamPoly& a, const ParamPoly& b) {
  for (std::size_t v = 0; v < kParamCount; ++v)
    if (a.depends_on(v) || b.depends_on(v)) return v;
  return kNoVar;
}

ParamPoly monic(const ParamPoly& p) {
  if (p.is_zero()) return p;
  const Scalar& lc = p.leading_coeff();
  if (lc == 1) return p;
  Scalar inv = 1 / lc;
  return p.scaled(inv);
}

ParamPoly one() { return ParamPoly::constant(1); }

// gcd of the coefficients of p viewed as a polynomial in v.
ParamPoly content(const ParamPoly& p, std::size_t v) {
  ParamPoly g;
  for (auto& [k, c] : p.split(v)) {
    g = gcd(g, c);
    if (g.is_constant()) return one();
  }
  return g;
}

ParamPoly primitive_part(const ParamPoly& p, std::size_t v) {
  ParamPoly c = content(p, v);
  return c.is_constant() ? monic(p) : exact_div(p, c);
}

// Pseudo-remainder of a by b with respect to v.
ParamPoly prem(ParamPoly a, const ParamPoly& b, std::size_t v) {
  unsigned n = b.degree(v);
  ParamPoly lcb = b.coefficient(v, n);
  while (!a.is_zero()) {
    unsigned k = a.degree(v);
    if (k < n) break;
    ParamPoly lca = a.coefficient(v, k);
    a = lcb * a - lca * ParamPoly::variable(v, k - n) * b;
  }
  return a;
}

}  // namespace

ParamPoly param(Param p) { return ParamPoly::variable(idx(p)); }
ParamPoly constant(const Scalar& c) { return ParamPoly(c); }
ParamPoly rho() { return param(Param::Dim).scaled(Scalar(1, 2)); }

ParamPoly substitute(const ParamPoly& a, const Bindings& b) {
  ParamPoly r = a;
  for (const auto& [p, v] : b) r = r.substitute(idx(p), v);
  return r;
}

ParamPoly substitute(const ParamPoly& a, const PolyBindings& b) {
  // Simultaneous substitution: every image is expanded against the original variables.
  ParamPoly r;
  for (const auto& [m, c] : a.terms()) {
    ParamPoly t(c);
    for (std::size_t v = 0; v < kParamCount; ++v) {
      if (!m.e[v]) continue;
      auto it = b.find(static_cast<Param>(v));
      ParamPoly base = it == b.end() ? ParamPoly::variable(v) : it->second;
      for (unsigned k = 0; k < m.e[v]; ++k) t *= base;
    }
    r += t;
  }
  return r;
}

std::optional<ParamPoly> try_exact_div(const ParamPoly& a, const ParamPoly& b) {
  if (b.is_zero()) throw DivisionByZero();
  if (a.is_zero()) return ParamPoly();
  if (b.is_constant()) return a.scaled(Scalar(1 / b.constant_term()));
  const auto& lmb = b.leading_monomial();
  const Scalar& lcb = b.leading_coeff();
  ParamPoly q;
  ParamPoly r = a;
  while (!r.is_zero()) {
    const auto& lmr = r.leading_monomial();
    if (!lmb.divides(lmr)) return std::nullopt;
    Scalar coef = r.leading_coeff() / lcb;
    auto t = lmr / lmb;
    q.add_term(t, coef);
    r -= b.times_monomial(t, coef);
  }
  return q;
}

ParamPoly exact_div(const ParamPoly& a, const ParamPoly& b) {
  auto q = try_exact_div(a, b);
  if (!q) throw NotDivisible();
  return *q;
}

ParamPoly gcd(const ParamPoly& a, const ParamPoly& b) {
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  if (a.is_constant() || b.is_constant()) return one();
  if (a == b) return monic(a);
  std::size_t v = main_variable(a, b);
  if (!a.depends_on(v)) return gcd(a, content(b, v));
  if (!b.depends_on(v)) return gcd(content(a, v), b);

  ParamPoly ca = content(a, v), cb = content(b, v);
  ParamPoly g = gcd(ca, cb);
  ParamPoly pa = ca.is_constant() ? a : exact_div(a, ca);
  ParamPoly pb = cb.is_constant() ? b : exact_div(b, cb);
  if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
  while (!pb.is_zero()) {
    ParamPoly r = prem(pa, pb, v);
    pa = pb;
    if (r.is_zero()) break;
    if (!r.depends_on(v)) {
      pa = one();
      break;
    }
    pb = primitive_part(r, v);
  }
  return monic(g * primitive_part(pa, v));
}

ParamPoly pochhammer(const ParamPoly& a, unsigned m) {
  ParamPoly r = one();
  for (unsigned i = 0; i < m; ++i) r *= a + ParamPoly::constant(i);
  return r;
}

Scalar evaluate(const ParamPoly& a, const Bindings& b) {
  ParamPoly r = substitute(a, b);
  if (!r.is_constant()) throw std::invalid_argument("unbound parameters in " + to_string(r));
  return r.constant_term();
}

double evaluate_double(const ParamPoly& a, const std::array<double, kParamCount>& values) {
  return a.evaluate(values, [](const Scalar& c) { return c.get_d(); });
}

std::string to_string(const ParamPoly& p) { return p.to_string(); }

Scalar parse_scalar(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Scalar q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    q.canonicalize();
    return q;
  }
  // Decimal with optional exponent, converted exactly.
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_point = false, any = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      any = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any) throw std::invalid_argument("bad number: " + s);
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t used = 0;
    scale += std::stol(s.substr(i + 1), &used);
    i += 1 + used;
  }
  if (i != s.size()) throw std::invalid_argument("bad number: " + s);
  Scalar q(mpz_class(digits, 10));
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale < 0)
    q /= ten_pow;
  else
    q *= ten_pow;
  q.canonicalize();
  return neg ? Scalar(-q) : q;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ParamPoly parse() {
    ParamPoly p = sum();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("cannot parse polynomial '" + std::string(s_) + "': " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  ParamPoly sum() {
    ParamPoly acc;
    bool neg = eat('-');
    if (!neg) eat('+');
    ParamPoly t = product();
    acc = neg ? -t : t;
    for (;;) {
      if (eat('+'))
        acc += product();
      else if (eat('-'))
        acc -= product();
      else
        return acc;
    }
  }
  ParamPoly product() {
    ParamPoly acc = power();
    for (;;) {
      if (eat('*')) {
        acc *= power();
      } else if (eat('/')) {
        ParamPoly d = power();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant");
        acc = acc.scaled(Scalar(1 / d.constant_term()));
      } else {
        return acc;
      }
    }
  }
  ParamPoly power() {
    ParamPoly base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      unsigned e = static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start))));
      ParamPoly r = ParamPoly::constant(1);
      for (unsigned i = 0; i < e; ++i) r *= base;
      return r;
    }
    return base;
  }
  ParamPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      ParamPoly p = sum();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (eat('-')) return -atom();
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      return ParamPoly(parse_scalar(s_.substr(start, pos_ - start)));
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (name == "rho") return rho();
    auto names = DefaultNames<Scalar, kParamCount>::get();
    for (std::size_t v = 0; v < names.size(); ++v)
      if (names[v] == name) return ParamPoly::variable(v);
    fail("unknown name '" + name + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

ParamPoly parse_param_poly(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------- ParamRat

ParamRat::ParamRat(const ParamPoly& num) : num_(num), den_(one()) {}

ParamRat::ParamRat(const ParamPoly& num, const ParamPoly& den) : num_(num), den_(den) { normalize(); }

void ParamRat::normalize() {
  if (den_.is_zero()) throw DivisionByZero();
  if (num_.is_zero()) {
    den_ = one();
    return;
  }
  if (den_.is_constant()) {
    num_ = num_.scaled(Scalar(1 / den_.constant_term()));
    den_ = one();
    return;
  }
  ParamPoly g = gcd(num_, den_);
  if (!g.is_constant()) {
    num_ = exact_div(num_, g);
    den_ = exact_div(den_, g);
  }
  Scalar lc = den_.leading_coeff();
  if (lc != 1) {
    Scalar inv = 1 / lc;
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

ParamRat& ParamRat::operator+=(const ParamRat& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (is_polynomial() && o.is_polynomial()) {
    num_ += o.num_;
    return *this;
  }
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
  }
  normalize();
  return *this;
}

ParamRat& ParamRat::operator-=(const ParamRat& o) { return *this += -o; }

ParamRat operator-(const ParamRat& a) { return ParamRat(ParamRat::Raw{}, -a.num_, a.den_); }

ParamRat& ParamRat::operator*=(const ParamRat& o) {
  if (is_zero() || o.is_zero()) return *this = ParamRat();
  if (is_polynomial() && o.is_polynomial()) {
    num_ *= o.num_;
    return *this;
  }
  ParamPoly g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
  ParamPoly n = exact_div(num_, g1) * exact_div(o.num_, g2);
  ParamPoly d = exact_div(den_, g2) * exact_div(o.den_, g1);
  Scalar lc = d.leading_coeff();
  if (lc != 1) {
    Scalar inv = 1 / lc;
    n = n.scaled(inv);
    d = d.scaled(inv);
  }
  num_ = std::move(n);
  den_ = std::move(d);
  return *this;
}

ParamRat& ParamRat::operator/=(const ParamRat& o) {
  if (o.is_zero()) throw DivisionByZero();
  Scalar lc = o.num_.leading_coeff();
  Scalar inv = 1 / lc;
  ParamRat reciprocal(Raw{}, o.den_.scaled(inv), o.num_.scaled(inv));
  return *this *= reciprocal;
}

ParamRat ParamRat::substitute(const Bindings& b) const {
  return ParamRat(confcov::substitute(num_, b), confcov::substitute(den_, b));
}

ParamRat ParamRat::substitute(const PolyBindings& b) const {
  return ParamRat(confcov::substitute(num_, b), confcov::substitute(den_, b));
}

double ParamRat::evaluate_double(const std::array<double, kParamCount>& values) const {
  return confcov::evaluate_double(num_, values) / confcov::evaluate_double(den_, values);
}

std::string ParamRat::to_string() const {
  if (is_polynomial()) return num_.to_string();
  auto wrap = [](const ParamPoly& p) {
    return p.size() <= 1 ? p.to_string() : "(" + p.to_string() + ")";
  };
  return wrap(num_) + "/" + wrap(den_);
}

std::optional<ParamRat> is_proportional(const ParamRat& p, const ParamRat& q) {
  if (q.is_zero()) {
    if (p.is_zero()) return ParamRat(1L);
    return std::nullopt;
  }
  return p / q;
}

bool is_free_of(const ParamRat& r, Param p) {
  return !r.num().depends_on(idx(p)) && !r.den().depends_on(idx(p));
}

}  // namespace confcov
