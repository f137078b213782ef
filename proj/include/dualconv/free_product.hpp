#pragma once

#include <compare>
#include <functional>
#include <string>
#include <vector>

#include "dualconv/algebra.hpp"

namespace dualconv {

/// One tensor factor of an alternating word: a basis word of component `comp`.
struct Leg {
  int comp = 0;
  Word word;
  auto operator<=>(const Leg&) const = default;
};

/// Adjacent legs carry distinct component indices; no leg is empty.
using AltWord = std::vector<Leg>;

/// Element of the (unitized) free product: the empty alternating word is the unit.
using FpPoly = std::map<AltWord, cplx>;

/// A family of algebras and the multiplication of their free product.
class FreeProduct {
 public:
  FreeProduct() = default;
  explicit FreeProduct(std::vector<Algebra> components);
  static FreeProduct copies(const Algebra& a, int n);

  int size() const noexcept { return static_cast<int>(comps_.size()); }
  const Algebra& component(int k) const;
  const std::vector<Algebra>& components() const noexcept { return comps_; }
  bool operator==(const FreeProduct& o) const noexcept { return comps_ == o.comps_; }

  FpPoly embed(int k, const Poly& p) const;
  FpPoly embed(int k, const Word& w) const { return embed(k, component(k).element(w)); }

  /// Concatenation, or fusion of boundary legs when they share a component.
  /// A fused leg reducing to a scalar is absorbed and the new neighbours re-fused.
  FpPoly multiply(const AltWord& u, const AltWord& v) const;
  FpPoly multiply(const FpPoly& u, const FpPoly& v) const;
  FpPoly adjoint(const FpPoly& u) const;

  /// Checks the alternating-word invariants of every term.
  bool well_formed(const FpPoly& u) const;
  std::string format(const AltWord& w) const;
  std::string format(const FpPoly& u) const;

 private:
  void multiply_into(FpPoly& out, const AltWord& u, std::size_t un, const AltWord& v,
                     std::size_t vstart, cplx coef) const;

  std::vector<Algebra> comps_;
};

FpPoly unit_element();
FpPoly single_word(AltWord w, cplx c = 1.0);

/// (j_1 ⨿ ... ⨿ j_n): each leg (k, w) is mapped to image(k, w) in the target
/// free product; alternating words go to the ordered product of the images.
FpPoly apply_hom(const FreeProduct& target, const std::function<FpPoly(int, const Word&)>& image,
                 const FpPoly& u);

/// (j_1 ⊔ ... ⊔ j_n) into a common algebra.
Poly apply_hom(const Algebra& target, const std::function<Poly(int, const Word&)>& image,
               const FpPoly& u);

/// Relabels component indices (comp -> map(comp)).
FpPoly relabel(const FpPoly& u, const std::function<int(int)>& map);

/// Spec-level wrapper carrying the family.
struct FreeProductElement {
  FreeProduct family;
  FpPoly terms;
};

FreeProductElement fp_embed(const FreeProduct& family, int k, const NcPolynomial& p);
FreeProductElement fp_multiply(const FreeProductElement& u, const FreeProductElement& v);

}  // namespace dualconv
