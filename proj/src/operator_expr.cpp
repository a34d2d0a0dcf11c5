#include "confcov/operator_expr.hpp"

#include <stdexcept>

namespace confcov {

std::string Generator::name() const {
  std::string ax = std::to_string(axis + 1);
  switch (kind) {
    case GenKind::Identity: return "1";
    case GenKind::MulR: return "r";
    case GenKind::LapY: return "Dy";
    case GenKind::LapZ: return "Dz";
    case GenKind::MixedR: return "R";
    case GenKind::EulYZ: return "Eyz";
    case GenKind::EulZY: return "Ezy";
    case GenKind::PartialY: return "dy" + ax;
    case GenKind::PartialZ: return "dz" + ax;
    case GenKind::MulY: return "y" + ax;
    case GenKind::MulZ: return "z" + ax;
  }
  return "?";
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const auto& g : w) {
    if (!s.empty()) s += "*";
    s += g.name();
  }
  return s;
}

OperatorExpr OperatorExpr::identity() { return word({}); }

OperatorExpr OperatorExpr::word(Word w, const ParamRat& c) {
  OperatorExpr op;
  op.add_word(std::move(w), c);
  return op;
}

OperatorExpr OperatorExpr::gen(GenKind k, int axis) {
  return word({Generator{k, static_cast<std::uint8_t>(axis)}});
}

void OperatorExpr::add_word(Word w, const ParamRat& c) {
  if (c.is_zero()) return;
  std::erase_if(w, [](const Generator& g) { return g.kind == GenKind::Identity; });
  auto [it, inserted] = words_.try_emplace(std::move(w), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) words_.erase(it);
  }
}

bool OperatorExpr::invariant() const {
  for (const auto& [w, c] : words_)
    for (const auto& g : w)
      if (!g.invariant()) return false;
  return true;
}

OperatorExpr OperatorExpr::restricted_to_diagonal() const {
  OperatorExpr r = *this;
  r.diagonal_ = true;
  return r;
}

OperatorExpr& OperatorExpr::operator+=(const OperatorExpr& o) {
  if (!o.is_zero() && !is_zero() && diagonal_ != o.diagonal_)
    throw std::invalid_argument("cannot add a diagonal-restricted operator to an unrestricted one");
  if (is_zero()) diagonal_ = o.diagonal_;
  for (const auto& [w, c] : o.words_) add_word(w, c);
  return *this;
}

OperatorExpr& OperatorExpr::operator-=(const OperatorExpr& o) { return *this += o.scaled(ParamRat(-1L)); }

OperatorExpr OperatorExpr::scaled(const ParamRat& c) const {
  OperatorExpr r;
  r.diagonal_ = diagonal_;
  if (c.is_zero()) return r;
  for (const auto& [w, k] : words_) r.words_.emplace(w, k * c);
  return r;
}

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  if (b.diagonal_) throw std::invalid_argument("cannot compose after restriction to the diagonal");
  OperatorExpr r;
  r.diagonal_ = a.diagonal_;
  for (const auto& [wa, ca] : a.words_)
    for (const auto& [wb, cb] : b.words_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      r.add_word(std::move(w), ca * cb);
    }
  return r;
}

OperatorExpr OperatorExpr::substitute(const Bindings& b) const {
  OperatorExpr r;
  r.diagonal_ = diagonal_;
  for (const auto& [w, c] : words_) r.add_word(w, c.substitute(b));
  return r;
}

OperatorExpr OperatorExpr::substitute(const PolyBindings& b) const {
  OperatorExpr r;
  r.diagonal_ = diagonal_;
  for (const auto& [w, c] : words_) r.add_word(w, c.substitute(b));
  return r;
}

std::string OperatorExpr::to_string() const {
  if (words_.empty()) return "0";
  std::string s;
  for (const auto& [w, c] : words_) {
    if (!s.empty()) s += "\n";
    s += "(" + c.to_string() + ") " + word_to_string(w);
  }
  if (diagonal_) s += "\n[restricted to y = z]";
  return s;
}

}  // namespace confcov
