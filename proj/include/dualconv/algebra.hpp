#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dualconv/core.hpp"

namespace dualconv {

struct GeneratorSymbol {
  std::string name;
  int adjoint = -1;     // id of the *-partner
  cplx counit = 0.0;    // δ(generator); zero for non-unital presentations
  int degree = 1;
};

/// lhs -> rhs, with lhs strictly larger than every word of rhs in the
/// presentation's degree-then-lex order.
struct RewriteRule {
  Word lhs;
  Poly rhs;
};

/// A finitely presented *-algebra: generators with an involution, a
/// terminating rewriting system and a counit on generators.
class Presentation {
 public:
  Presentation(std::string name, std::vector<GeneratorSymbol> generators,
               std::vector<RewriteRule> rules, bool unital, std::size_t step_cap = 1u << 20);

  const std::string& name() const noexcept { return name_; }
  bool unital() const noexcept { return unital_; }
  std::size_t size() const noexcept { return gens_.size(); }
  const std::vector<GeneratorSymbol>& generators() const noexcept { return gens_; }
  const GeneratorSymbol& generator(int id) const;
  const std::vector<RewriteRule>& rules() const noexcept { return rules_; }

  std::optional<int> find(const std::string& name) const;
  int id(const std::string& name) const;  // throws ConfigError
  Word parse(const std::vector<std::string>& names) const;
  std::string format(const Word& w) const;

  /// Unique normal form of w modulo the relation ideal.
  Poly normalize(const Word& w) const;
  bool is_normal(const Word& w) const;
  /// Letterwise reversed adjoint of w (not normalized).
  Word raw_adjoint(const Word& w) const;
  cplx counit(const Word& w) const;
  int degree(const Word& w) const;

  /// All normal words with 1 <= degree <= max_degree, ordered by degree then lex.
  std::vector<Word> normal_words(int max_degree) const;

 private:
  std::optional<std::size_t> first_redex(const Word& w, const RewriteRule** rule) const;

  std::string name_;
  std::vector<GeneratorSymbol> gens_;
  std::vector<RewriteRule> rules_;
  std::vector<std::vector<std::size_t>> rules_by_first_;
  bool unital_;
  std::size_t step_cap_;
  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<Word, Poly, WordHash> cache_;
};

enum class View { plain, kernel };

/// An algebra as seen by the rest of the library: a presentation viewed
/// either directly or through its counit kernel. In the kernel view the
/// basis element labelled by a non-empty normal word w is w - δ(w)1.
/// In both views the empty word is the unit of the unitization.
class Algebra {
 public:
  Algebra() = default;
  Algebra(std::shared_ptr<const Presentation> pres, View view);

  const Presentation& presentation() const { return *pres_; }
  const std::shared_ptr<const Presentation>& presentation_ptr() const { return pres_; }
  View view() const noexcept { return view_; }
  /// True when the empty word is an element of the algebra itself.
  bool unital() const noexcept;

  Poly multiply(const Word& a, const Word& b) const;
  Poly multiply(const Poly& p, const Poly& q) const;
  Poly adjoint(const Word& w) const;
  Poly adjoint(const Poly& p) const;
  /// Basis element labelled by an arbitrary (possibly non-normal) word.
  Poly element(const Word& w) const;
  Poly generator(int id) const { return element(Word{id}); }

  bool operator==(const Algebra& o) const noexcept {
    return pres_ == o.pres_ && effective_view() == o.effective_view();
  }

 private:
  View effective_view() const noexcept;

  std::shared_ptr<const Presentation> pres_;
  View view_ = View::plain;
};

/// Polynomial tagged with its owning algebra.
struct NcPolynomial {
  Algebra algebra;
  Poly terms;
};

NcPolynomial nc_multiply(const NcPolynomial& p, const NcPolynomial& q);
NcPolynomial nc_adjoint(const NcPolynomial& p);
NcPolynomial normalize(const Algebra& algebra, const Word& w);

namespace presentations {

/// Non-unital tensor *-algebra over self-adjoint generators.
std::shared_ptr<const Presentation> free_selfadjoint(const std::vector<std::string>& names);
/// Non-unital tensor *-algebra with explicit adjoint pairing (adjoint[i] = partner of i).
std::shared_ptr<const Presentation> free_algebra(const std::vector<std::string>& names,
                                                 const std::vector<int>& adjoint);
/// K<d>: entries x_kl, x_kl* with x*x = 1 = xx*. Generator ids: x_kl = k*d+l,
/// x_kl* = d*d + k*d + l (0-based k, l).
std::shared_ptr<const Presentation> unitary(int d);
/// Group algebra of the free group: g_i = 2i, g_i^{-1} = 2i+1.
std::shared_ptr<const Presentation> free_group(int n);

}  // namespace presentations

}  // namespace dualconv
