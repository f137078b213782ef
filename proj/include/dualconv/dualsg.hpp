#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dualconv/free_product.hpp"

namespace dualconv {

/// Outcome of a bounded-degree law check.
struct LawEntry {
  std::string name;
  double residual = 0.0;
  bool pass = true;
  std::string witness;
};

struct LawReport {
  std::vector<LawEntry> entries;
  bool pass() const;
  double max_residual() const;
};

/// A dual semigroup (B, Δ). The comultiplication is stored on generators in
/// the presentation's own picture: unital (B~ -> B~ ⊔_1 B~) for unital
/// presentations, non-unital otherwise. All downstream computations use the
/// counit-kernel view exposed by algebra() and comultiply().
class DualSemigroup {
 public:
  DualSemigroup(std::string name, std::shared_ptr<const Presentation> pres,
                std::vector<FpPoly> delta_on_generators,
                std::optional<std::vector<Poly>> antipode_on_generators = std::nullopt,
                bool builtin = false);

  const std::string& name() const noexcept { return name_; }
  bool builtin() const noexcept { return builtin_; }
  const Presentation& presentation() const { return *pres_; }
  const std::shared_ptr<const Presentation>& presentation_ptr() const { return pres_; }
  Algebra algebra() const { return Algebra(pres_, View::kernel); }
  Algebra plain_algebra() const { return Algebra(pres_, View::plain); }
  FreeProduct copies(int n) const { return FreeProduct::copies(algebra(), n); }
  bool has_antipode() const noexcept { return antipode_.has_value(); }

  /// Δ on the kernel basis element labelled by w, over two kernel copies.
  const FpPoly& comultiply(const Word& w) const;
  FpPoly comultiply(const Poly& p) const;
  /// Δ~ in the stored picture over two plain copies (w need not be normal).
  FpPoly comultiply_plain(const Word& w) const;
  /// Rewrites an element of the plain free product over the kernel basis.
  FpPoly to_kernel(const FpPoly& plain, int n) const;

  /// Δ_0 = 0, Δ_1 = id, Δ_{n+1} = (Δ ⨿ id) ∘ Δ_n.
  FpPoly iterate(int n, const Poly& p) const;
  /// Mirrored recursion Δ_{n+1} = (id ⨿ Δ) ∘ Δ_n.
  FpPoly iterate_mirrored(int n, const Poly& p) const;

  Poly antipode(const Word& w) const;  // plain picture, throws NoAntipode

 private:
  std::string name_;
  std::shared_ptr<const Presentation> pres_;
  std::vector<FpPoly> delta_gen_;
  std::optional<std::vector<Poly>> antipode_;
  bool builtin_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<Word, std::shared_ptr<const FpPoly>, WordHash> kernel_cache_;
};

using DualSemigroupPtr = std::shared_ptr<const DualSemigroup>;

FpPoly comultiply(const DualSemigroup& dsg, const NcPolynomial& p);
FpPoly iterate_delta(const DualSemigroup& dsg, int n, const NcPolynomial& p);

/// Counit, coassociativity and relation-compatibility of Δ on all normal words
/// up to degree_cap (symbolic, in the stored picture).
LawReport check_dualsg_laws(const DualSemigroup& dsg, int degree_cap);
/// (S ⊔ id)∘Δ = δ(·)1 = (id ⊔ S)∘Δ on words up to degree_cap.
LawReport antipode_check(const DualSemigroup& dsg, int degree_cap);

namespace builtin {

/// T(V) over n self-adjoint generators, Δv = i1(v) + i2(v), Sv = -v.
DualSemigroupPtr primitive(int n);
/// K<d>, Δx_kl = Σ_n ι1(x_kn) ι2(x_nl), S x_kl = x*_lk.
DualSemigroupPtr unitary(int d);
/// CF_n, Δg = ι1(g) ι2(g), S g = g^{-1}.
DualSemigroupPtr free_group(int n);
/// Registry lookup: "primitive:<n>", "unitary:<d>", "freegroup:<n>".
DualSemigroupPtr by_name(const std::string& name);

}  // namespace builtin

/// T(E) over the kernel words of E of degree <= max_degree with the lifted
/// comultiplication T(Δ); `multiplication` realizes M: T(E) -> E.
struct TensorLift {
  DualSemigroupPtr lifted;
  std::vector<Word> letters;  // letter i of T(E) is the kernel word letters[i] of E
  Poly multiplication(const Word& tensor_word, const Algebra& target) const;
};

TensorLift tensor_lift(const DualSemigroupPtr& base, int max_degree);

}  // namespace dualconv
