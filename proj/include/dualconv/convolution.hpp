#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "dualconv/dualsg.hpp"
#include "dualconv/linalg.hpp"
#include "dualconv/products.hpp"

namespace dualconv {

/// φ1 ⋆ φ2 = (φ1 ⊙ φ2) ∘ Δ, evaluated lazily and memoized.
LinearFunctional star(ProductKind kind, const DualSemigroupPtr& dsg, const LinearFunctional& phi1,
                      const LinearFunctional& phi2);

/// Left-nested n-fold star power, n >= 1.
LinearFunctional star_power(ProductKind kind, const DualSemigroupPtr& dsg,
                            const LinearFunctional& psi, int n);

/// The counit on the kernel: identically zero.
LinearFunctional counit_functional(const DualSemigroupPtr& dsg);

/// Basis monomial of S(B): a sorted multiset of kernel words; empty = unit.
using SymMono = std::vector<Word>;

SymMono sym_multiply(const SymMono& a, const SymMono& b);

/// D(ψ): ψ on single factors, zero on the unit and on products of >= 2 factors.
struct GeneratorFunctional {
  LinearFunctional base;
  cplx operator()(const SymMono& m) const;
};

GeneratorFunctional lift_generator(const LinearFunctional& psi);

/// A finite sub-coalgebra of (S(B), S(σ∘Δ)) with its structure constants.
struct CoalgebraSlice {
  struct Term {
    int left = 0;
    int right = 0;
    cplx coef;
  };
  std::vector<SymMono> basis;  // basis[0] is the unit
  std::map<SymMono, int> index;
  std::vector<std::vector<Term>> delta;

  int size() const { return static_cast<int>(basis.size()); }
  int find(const SymMono& m) const;  // -1 when absent
  /// max over basis of the counit-law residual (δ⊗id)Δ = id = (id⊗δ)Δ.
  double counit_residual() const;
};

/// Δ_S of a single-factor monomial, as (left, right, coef) over S(B) ⊗ S(B).
std::vector<std::tuple<SymMono, SymMono, cplx>> sym_coproduct(ProductKind kind,
                                                             const DualSemigroup& dsg,
                                                             const SymMono& m);

inline constexpr std::size_t kDefaultSliceCap = 5000;

CoalgebraSlice coalgebra_closure(ProductKind kind, const DualSemigroupPtr& dsg, const Poly& seed,
                                 int degree_cap, std::size_t size_cap = kDefaultSliceCap);

/// Matrix of T_{D(ψ)} = (id ⊗ D(ψ)) ∘ Δ_S on the slice (column i = image of basis i).
CMatrix generator_matrix(const CoalgebraSlice& slice, const GeneratorFunctional& d);

/// The convolution semigroup t ↦ exp⋆(tψ) of a generator, with per-word
/// slices and generator matrices cached and shared across times. Copies
/// share the caches.
class ConvolutionSemigroup {
 public:
  ConvolutionSemigroup(ProductKind kind, DualSemigroupPtr dsg, LinearFunctional psi,
                       std::size_t size_cap = kDefaultSliceCap);

  ProductKind kind() const noexcept { return state_->kind; }
  const DualSemigroupPtr& dual_semigroup() const noexcept { return state_->dsg; }
  const LinearFunctional& generator() const noexcept { return state_->psi; }

  /// exp⋆(tψ)(w) for a kernel word w.
  cplx value(double t, const Word& w) const;
  cplx value(double t, const Poly& b) const;
  /// φ_t as a functional (cached per t).
  LinearFunctional at(double t) const;
  /// Slice of a single word (cached).
  std::shared_ptr<const CoalgebraSlice> slice(const Word& w) const;

 private:
  struct Entry {
    std::shared_ptr<const CoalgebraSlice> slice;
    CMatrix generator;
    int column = 0;
  };
  struct State {
    ProductKind kind;
    DualSemigroupPtr dsg;
    LinearFunctional psi;
    std::size_t size_cap;
    std::mutex mutex;
    std::map<Word, std::shared_ptr<const Entry>> entries;
  };
  struct TimeCache {
    std::mutex mutex;
    std::map<double, LinearFunctional> at;
  };
  static std::shared_ptr<const Entry> entry(State& s, const Word& w);
  static cplx value(State& s, double t, const Word& w);

  std::shared_ptr<State> state_;
  std::shared_ptr<TimeCache> times_;
};

cplx conv_exp(ProductKind kind, const DualSemigroupPtr& dsg, const LinearFunctional& psi, double t,
              const Poly& b);

/// ((tψ)/n + R_n)^{⋆n}(b).
cplx trotter_exp(ProductKind kind, const DualSemigroupPtr& dsg, const LinearFunctional& psi,
                 double t, int n, const Poly& b,
                 const std::optional<LinearFunctional>& perturbation = std::nullopt);

}  // namespace dualconv
