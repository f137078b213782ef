#include "dualconv/free_product.hpp"

#include <sstream>

namespace dualconv {

FreeProduct::FreeProduct(std::vector<Algebra> components) : comps_(std::move(components)) {}

FreeProduct FreeProduct::copies(const Algebra& a, int n) {
  return FreeProduct(std::vector<Algebra>(static_cast<std::size_t>(std::max(n, 0)), a));
}

const Algebra& FreeProduct::component(int k) const {
  if (k < 0 || k >= size())
    throw Error(ErrorKind::BadComponentIndex, "component " + std::to_string(k) + " of " +
                                                  std::to_string(size()));
  return comps_[k];
}

FpPoly unit_element() { return FpPoly{{AltWord{}, 1.0}}; }

FpPoly single_word(AltWord w, cplx c) {
  FpPoly r;
  if (c != cplx{}) r.emplace(std::move(w), c);
  return r;
}

FpPoly FreeProduct::embed(int k, const Poly& p) const {
  (void)component(k);
  FpPoly r;
  for (const auto& [w, c] : p) {
    if (w.empty())
      accumulate(r, AltWord{}, c);
    else
      accumulate(r, AltWord{Leg{k, w}}, c);
  }
  return r;
}

void FreeProduct::multiply_into(FpPoly& out, const AltWord& u, std::size_t un, const AltWord& v,
                                std::size_t vstart, cplx coef) const {
  // u[0, un) * v[vstart, end)
  if (un == 0 || vstart == v.size() || u[un - 1].comp != v[vstart].comp) {
    AltWord r;
    r.reserve(un + v.size() - vstart);
    r.insert(r.end(), u.begin(), u.begin() + static_cast<std::ptrdiff_t>(un));
    r.insert(r.end(), v.begin() + static_cast<std::ptrdiff_t>(vstart), v.end());
    accumulate(out, std::move(r), coef);
    return;
  }
  const int k = u[un - 1].comp;
  const Poly fused = component(k).multiply(u[un - 1].word, v[vstart].word);
  for (const auto& [w, c] : fused) {
    if (w.empty()) {
      multiply_into(out, u, un - 1, v, vstart + 1, coef * c);
      continue;
    }
    AltWord r;
    r.reserve(un + v.size() - vstart);
    r.insert(r.end(), u.begin(), u.begin() + static_cast<std::ptrdiff_t>(un - 1));
    r.push_back(Leg{k, w});
    r.insert(r.end(), v.begin() + static_cast<std::ptrdiff_t>(vstart + 1), v.end());
    accumulate(out, std::move(r), coef * c);
  }
}

FpPoly FreeProduct::multiply(const AltWord& u, const AltWord& v) const {
  FpPoly out;
  multiply_into(out, u, u.size(), v, 0, 1.0);
  return out;
}

FpPoly FreeProduct::multiply(const FpPoly& u, const FpPoly& v) const {
  FpPoly out;
  for (const auto& [a, ca] : u)
    for (const auto& [b, cb] : v) multiply_into(out, a, a.size(), b, 0, ca * cb);
  drop_small(out);
  return out;
}

FpPoly FreeProduct::adjoint(const FpPoly& u) const {
  FpPoly out;
  for (const auto& [w, c] : u) {
    FpPoly acc = unit_element();
    for (auto it = w.rbegin(); it != w.rend(); ++it)
      acc = multiply(acc, embed(it->comp, component(it->comp).adjoint(it->word)));
    add_into(out, acc, std::conj(c));
  }
  return out;
}

bool FreeProduct::well_formed(const FpPoly& u) const {
  for (const auto& [w, c] : u) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].comp < 0 || w[i].comp >= size() || w[i].word.empty()) return false;
      if (i + 1 < w.size() && w[i].comp == w[i + 1].comp) return false;
    }
  }
  return true;
}

std::string FreeProduct::format(const AltWord& w) const {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    os << '(' << w[i].comp + 1 << ',' << component(w[i].comp).presentation().format(w[i].word) << ')';
  }
  return os.str();
}

std::string FreeProduct::format(const FpPoly& u) const {
  if (u.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : u) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c.real();
    if (c.imag() != 0.0) os << (c.imag() > 0 ? "+" : "") << c.imag() << 'i';
    os << ")[" << format(w) << ']';
  }
  return os.str();
}

FpPoly apply_hom(const FreeProduct& target, const std::function<FpPoly(int, const Word&)>& image,
                 const FpPoly& u) {
  FpPoly out;
  for (const auto& [w, c] : u) {
    FpPoly acc = unit_element();
    for (const Leg& leg : w) {
      acc = target.multiply(acc, image(leg.comp, leg.word));
      if (acc.empty()) break;
    }
    add_into(out, acc, c);
  }
  return out;
}

Poly apply_hom(const Algebra& target, const std::function<Poly(int, const Word&)>& image,
               const FpPoly& u) {
  Poly out;
  for (const auto& [w, c] : u) {
    Poly acc{{Word{}, 1.0}};
    for (const Leg& leg : w) {
      acc = target.multiply(acc, image(leg.comp, leg.word));
      if (acc.empty()) break;
    }
    add_into(out, acc, c);
  }
  return out;
}

FpPoly relabel(const FpPoly& u, const std::function<int(int)>& map) {
  FpPoly out;
  for (const auto& [w, c] : u) {
    AltWord r = w;
    for (Leg& leg : r) leg.comp = map(leg.comp);
    accumulate(out, std::move(r), c);
  }
  return out;
}

FreeProductElement fp_embed(const FreeProduct& family, int k, const NcPolynomial& p) {
  if (!(family.component(k) == p.algebra))
    throw Error(ErrorKind::AlgebraMismatch, "polynomial does not belong to component " +
                                                std::to_string(k));
  return {family, family.embed(k, p.terms)};
}

FreeProductElement fp_multiply(const FreeProductElement& u, const FreeProductElement& v) {
  if (!(u.family == v.family))
    throw Error(ErrorKind::ComponentFamilyMismatch, "operands over different families");
  return {u.family, u.family.multiply(u.terms, v.terms)};
}

}  // namespace dualconv
