#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dualconv/free_product.hpp"
#include "dualconv/functional.hpp"

namespace dualconv {

enum class ProductKind { tensor, free, boolean, monotone, antimonotone };

const char* to_string(ProductKind kind);
ProductKind parse_product_kind(const std::string& name);  // throws ConfigError
const std::vector<ProductKind>& all_product_kinds();
/// Whether the kind is commutative (A5).
bool is_symmetric(ProductKind kind);

/// Canonically sorted multiset of legs: a basis monomial of S(B1) ⊗ S(B2).
using SymKey = std::vector<Leg>;

/// Element of the symmetric algebra over the legs; multiplication is
/// multiset union. Serves as the value ring of the symbolic evaluator.
struct SigmaImage {
  std::map<SymKey, cplx> terms;

  SigmaImage() = default;
  SigmaImage(cplx c) {
    if (c != cplx{}) terms[SymKey{}] = c;
  }
  static SigmaImage leg(const Leg& l, cplx c = 1.0);

  SigmaImage& operator+=(const SigmaImage& o);
  friend SigmaImage operator+(SigmaImage a, const SigmaImage& b) { return a += b; }
  friend SigmaImage operator*(const SigmaImage& a, const SigmaImage& b);
  friend SigmaImage operator*(cplx c, const SigmaImage& a);

  /// Applies φ_k to the leg words of component k and multiplies.
  cplx evaluate(const std::vector<LinearFunctional>& phis) const;
};

SymKey sym_product(const SymKey& a, const SymKey& b);

namespace detail {

/// Side assignment for one binary product inside a family: legs whose
/// component satisfies `left` belong to the first factor. Run values are
/// obtained from `left_value` / `right_value` on alternating words that use
/// only that side's components.
template <class V>
struct BinarySplit {
  std::function<bool(int)> left;
  std::function<V(const AltWord&)> left_value;
  std::function<V(const AltWord&)> right_value;
};

template <class V>
class BinaryEvaluator {
 public:
  BinaryEvaluator(ProductKind kind, const FreeProduct& family, const BinarySplit<V>& split,
                  int depth_cap = 64)
      : kind_(kind), family_(family), split_(split), depth_cap_(depth_cap) {}

  V operator()(const FpPoly& u) {
    V acc{};
    for (const auto& [w, c] : u) acc += c * word(w);
    return acc;
  }

  V word(const AltWord& w) {
    if (w.empty()) return V{1.0};
    std::vector<AltWord> runs;
    std::vector<bool> sides;
    for (const Leg& leg : w) {
      const bool s = split_.left(leg.comp);
      if (runs.empty() || sides.back() != s) {
        runs.emplace_back();
        sides.push_back(s);
      }
      runs.back().push_back(leg);
    }
    switch (kind_) {
      case ProductKind::boolean: {
        V v{1.0};
        for (std::size_t i = 0; i < runs.size(); ++i) v = v * value(sides[i], runs[i]);
        return v;
      }
      case ProductKind::tensor:
        return side_product_value(runs, sides, true) * side_product_value(runs, sides, false);
      case ProductKind::monotone: {
        V v = side_product_value(runs, sides, true);
        for (std::size_t i = 0; i < runs.size(); ++i)
          if (!sides[i]) v = v * value(false, runs[i]);
        return v;
      }
      case ProductKind::antimonotone: {
        V v = side_product_value(runs, sides, false);
        for (std::size_t i = 0; i < runs.size(); ++i)
          if (sides[i]) v = v * value(true, runs[i]);
        return v;
      }
      case ProductKind::free:
        return free_value(runs, sides, 0);
    }
    return V{};
  }

 private:
  using RunList = std::vector<AltWord>;

  V value(bool side, const AltWord& run) {
    return side ? split_.left_value(run) : split_.right_value(run);
  }

  V value(bool side, const FpPoly& p) {
    V acc{};
    for (const auto& [w, c] : p) acc += c * (w.empty() ? V{1.0} : value(side, w));
    return acc;
  }

  /// φ_side applied to the ordered product of all runs on that side.
  V side_product_value(const RunList& runs, const std::vector<bool>& sides, bool side) {
    FpPoly prod = unit_element();
    bool any = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (sides[i] != side) continue;
      prod = family_.multiply(prod, single_word(runs[i]));
      any = true;
    }
    return any ? value(side, prod) : V{1.0};
  }

  /// Expands a multilinear product of run elements into alternating run lists.
  void expand_runs(const std::vector<FpPoly>& factors, std::size_t i, RunList& cur,
                   std::vector<bool>& cur_sides, cplx coef,
                   std::vector<std::pair<std::pair<RunList, std::vector<bool>>, cplx>>& out) {
    if (i == factors.size()) {
      out.push_back({{cur, cur_sides}, coef});
      return;
    }
    for (const auto& [w, c] : factors[i]) {
      if (w.empty()) {
        expand_runs(factors, i + 1, cur, cur_sides, coef * c, out);
        continue;
      }
      const bool s = split_.left(w.front().comp);
      if (!cur.empty() && cur_sides.back() == s) {
        const AltWord saved = cur.back();
        const FpPoly merged = family_.multiply(single_word(saved), single_word(w));
        cur.pop_back();
        cur_sides.pop_back();
        std::vector<FpPoly> rest{merged};
        rest.insert(rest.end(), factors.begin() + static_cast<long>(i) + 1, factors.end());
        expand_runs(rest, 0, cur, cur_sides, coef * c, out);
        cur.push_back(saved);
        cur_sides.push_back(s);
        continue;
      }
      cur.push_back(w);
      cur_sides.push_back(s);
      expand_runs(factors, i + 1, cur, cur_sides, coef * c, out);
      cur.pop_back();
      cur_sides.pop_back();
    }
  }

  /// Centering recursion: Π(r_i − φ(r_i)1) has value zero on an alternating
  /// product of centered runs, which determines the value of Π r_i from
  /// strictly shorter products.
  V free_value(const RunList& runs, const std::vector<bool>& sides, int depth) {
    if (runs.empty()) return V{1.0};
    if (runs.size() == 1) return value(sides[0], runs[0]);
    if (depth > depth_cap_)
      throw Error(ErrorKind::EvaluationDepthExceeded, "free product recursion too deep");
    if (auto it = memo_.find(runs); it != memo_.end()) return it->second;

    const std::size_t n = runs.size();
    std::vector<V> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = value(sides[i], runs[i]);

    V total{};
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t mask = 0; mask < full; ++mask) {
      V coefficient{1.0};
      int missing = 0;
      std::vector<FpPoly> factors;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) {
          factors.push_back(single_word(runs[i]));
        } else {
          coefficient = coefficient * phi[i];
          ++missing;
        }
      }
      const cplx sign = (missing % 2 == 0) ? -1.0 : 1.0;
      std::vector<std::pair<std::pair<RunList, std::vector<bool>>, cplx>> expanded;
      RunList cur;
      std::vector<bool> cur_sides;
      expand_runs(factors, 0, cur, cur_sides, 1.0, expanded);
      V sub{};
      for (const auto& [key, c] : expanded) sub += c * free_value(key.first, key.second, depth + 1);
      total += sign * (coefficient * sub);
    }
    memo_.emplace(runs, total);
    return total;
  }

  ProductKind kind_;
  const FreeProduct& family_;
  const BinarySplit<V>& split_;
  int depth_cap_;
  std::map<RunList, V> memo_;
};

}  // namespace detail

/// (φ1 ⊙ φ2)(u) for u in the two-component free product `family`.
cplx eval_product(ProductKind kind, const LinearFunctional& phi1, const LinearFunctional& phi2,
                  const FreeProduct& family, const FpPoly& u);

/// Symbolic decomposition of u such that evaluating the image with (φ1, φ2)
/// reproduces eval_product for all functionals.
SigmaImage sigma_decompose(ProductKind kind, const FreeProduct& family, const FpPoly& u);

/// Repeated sigma decompositions on one family, sharing the evaluator memo.
class SigmaDecomposer {
 public:
  SigmaDecomposer(ProductKind kind, FreeProduct family);
  SigmaDecomposer(const SigmaDecomposer&) = delete;
  SigmaDecomposer& operator=(const SigmaDecomposer&) = delete;

  SigmaImage operator()(const FpPoly& u) { return eval_(u); }

 private:
  FreeProduct family_;
  detail::BinarySplit<SigmaImage> split_;
  detail::BinaryEvaluator<SigmaImage> eval_;
};

enum class Nesting { left, right };

/// n-fold product ((φ1 ⊙ φ2) ⊙ ...) or (φ1 ⊙ (φ2 ⊙ ...)) on the n-component family.
cplx fold_product(ProductKind kind, const std::vector<LinearFunctional>& phis,
                  const FreeProduct& family, const FpPoly& u, Nesting nesting = Nesting::left);

/// Value ring version for symbolic (e.g. square-zero) scalars.
template <class V>
V fold_product_generic(ProductKind kind, const std::vector<std::function<V(const Word&)>>& phis,
                       const FreeProduct& family, const FpPoly& u) {
  const int n = family.size();
  if (static_cast<int>(phis.size()) != n)
    throw Error(ErrorKind::ArityMismatch, "one functional per component required");
  std::function<V(int, const AltWord&)> nested = [&](int hi, const AltWord& w) -> V {
    if (hi == 0) {
      if (w.size() != 1) throw Error(ErrorKind::ComputationError, "malformed single-component run");
      return phis[0](w.front().word);
    }
    detail::BinarySplit<V> split{
        [hi](int comp) { return comp < hi; },
        [&, hi](const AltWord& r) { return nested(hi - 1, r); },
        [&, hi](const AltWord& r) -> V {
          if (r.size() != 1) throw Error(ErrorKind::ComputationError, "malformed run");
          return phis[static_cast<std::size_t>(hi)](r.front().word);
        }};
    detail::BinaryEvaluator<V> eval(kind, family, split);
    return eval.word(w);
  };
  V acc{};
  for (const auto& [w, c] : u) acc += c * (w.empty() ? V{1.0} : nested(n - 1, w));
  return acc;
}

struct AxiomEntry {
  std::string axiom;  // "A1".."A5"
  double residual = 0.0;
  bool pass = true;
  bool expected = true;
  std::string witness;
};

struct AxiomReport {
  ProductKind kind{};
  std::vector<AxiomEntry> entries;
  /// Every axiom behaves as expected (A5 fails exactly for the asymmetric kinds).
  bool as_expected() const;
  const AxiomEntry& entry(const std::string& axiom) const;
};

/// Randomized verification of A1–A5 on T(C^2) components.
AxiomReport check_axioms(ProductKind kind, int trials, int degree_cap, std::uint64_t seed = 0,
                         double tol = 1e-10);

}  // namespace dualconv
