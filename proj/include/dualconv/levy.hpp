#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualconv/convolution.hpp"
#include "dualconv/positivity.hpp"

namespace dualconv {

/// t_1 < ... < t_{n+1}, all non-negative, n >= 1.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);
  const std::vector<double>& times() const noexcept { return times_; }
  int increments() const noexcept { return static_cast<int>(times_.size()) - 1; }
  double length(int l) const { return times_.at(static_cast<std::size_t>(l) + 1) - times_.at(static_cast<std::size_t>(l)); }
  /// Every point of this grid is a point of `finer`.
  bool is_subgrid_of(const TimeGrid& finer, double tol = 1e-12) const;

 private:
  std::vector<double> times_;
};

/// φ_σ(w): the product of the increment states over B_σ.
cplx joint_functional(const ConvolutionSemigroup& semigroup, const TimeGrid& sigma, const FpPoly& w,
                      Nesting nesting = Nesting::left);

/// f_{στ}: each leg in increment l of σ is spread over the increments of τ
/// inside it by the iterated comultiplication.
FpPoly refine(const DualSemigroup& dsg, const TimeGrid& sigma, const TimeGrid& tau, const FpPoly& w);

struct RefinementResult {
  double residual = 0.0;              // |φ_τ(f_στ w) − φ_σ(w)|
  double composition_residual = 0.0;  // max coefficient of f_τυ f_στ w − f_συ w (when υ given)
};

RefinementResult refinement_check(const ConvolutionSemigroup& semigroup, const TimeGrid& sigma,
                                  const TimeGrid& tau, const FpPoly& w);
RefinementResult refinement_check(const ConvolutionSemigroup& semigroup, const TimeGrid& sigma,
                                  const TimeGrid& tau, const TimeGrid& upsilon, const FpPoly& w);

struct SchoenbergReport {
  std::vector<CheckResult> checks;
  bool precondition = true;
  std::string precondition_witness;
  bool pass() const;
};

SchoenbergReport schoenberg_verify(const ConvolutionSemigroup& semigroup,
                                   const std::vector<double>& t_grid, int degree_cap,
                                   double tol = kDefaultPsdTolerance,
                                   Execution exec = Execution::serial);

/// exp⋆(tψ)(w) for every (t, word) pair; rows follow t.
std::vector<std::vector<cplx>> exp_table(const ConvolutionSemigroup& semigroup,
                                         const std::vector<double>& ts,
                                         const std::vector<Word>& words,
                                         Execution exec = Execution::serial);

enum class FockFlavor { bose, full };

struct FockSpec {
  FockFlavor flavor = FockFlavor::bose;
  int h_dim = 0;
  int truncation = 4;
  GnsTriple data;  // on the self-adjoint generators of T(V)
  std::vector<int> adjoint;  // generator adjoint ids
};

FockSpec fock_spec(FockFlavor flavor, const GnsData& gns, const Presentation& pres, int truncation);

/// <Ω, π_t(v_1)…π_t(v_n) Ω> with η → √t η, ψ → t ψ.
cplx fock_moment(const FockSpec& spec, const Word& word, double t);

}  // namespace dualconv
