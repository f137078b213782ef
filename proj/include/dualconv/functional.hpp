#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "dualconv/algebra.hpp"

namespace dualconv {

/// Linear functional on an algebra, given by its values on basis words and
/// extended linearly. Values are memoized; copies share the memo.
class LinearFunctional {
 public:
  using Rule = std::function<cplx(const Word&)>;

  LinearFunctional() = default;
  LinearFunctional(Algebra domain, Rule rule, std::string label = "");

  static LinearFunctional zero(const Algebra& domain);
  /// Words missing from the table evaluate to 0.
  static LinearFunctional from_table(const Algebra& domain, std::map<Word, cplx> table,
                                     std::string label = "table");
  /// Deterministic pseudo-random values in [-1,1] + i[-1,1], keyed by (seed, word).
  static LinearFunctional random(const Algebra& domain, std::uint64_t seed, bool hermitian = false);

  bool valid() const noexcept { return impl_ != nullptr; }
  const Algebra& domain() const;
  const std::string& label() const;
  /// Identity of the shared evaluation rule (for memo keys).
  const void* identity() const noexcept { return impl_.get(); }

  cplx operator()(const Word& w) const;
  cplx operator()(const Poly& p) const;

  LinearFunctional scaled(cplx c) const;
  LinearFunctional plus(const LinearFunctional& other, cplx c = 1.0) const;
  /// φ∘j for an algebra map j given on basis words.
  LinearFunctional compose(std::function<Poly(const Word&)> map, std::string label = "") const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// ψ(x^n) = δ_{n,2} on the one-generator primitive algebra, i.e. the
/// functional sending the word of length 2 to 1 and everything else to 0.
LinearFunctional gaussian_generator(const Algebra& domain);

/// max |φ(w*) - conj φ(w)| over normal words of degree <= cap.
double hermitian_residual(const LinearFunctional& phi, int degree_cap);

}  // namespace dualconv
