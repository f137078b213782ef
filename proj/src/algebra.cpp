#include "dualconv/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace dualconv {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonTerminatingRewrite: return "NonTerminatingRewrite";
    case ErrorKind::AlgebraMismatch: return "AlgebraMismatch";
    case ErrorKind::BadComponentIndex: return "BadComponentIndex";
    case ErrorKind::ComponentFamilyMismatch: return "ComponentFamilyMismatch";
    case ErrorKind::TargetMismatch: return "TargetMismatch";
    case ErrorKind::EvaluationDepthExceeded: return "EvaluationDepthExceeded";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::ClosureCapExceeded: return "ClosureCapExceeded";
    case ErrorKind::NoAntipode: return "NoAntipode";
    case ErrorKind::NotConditionallyPositive: return "NotConditionallyPositive";
    case ErrorKind::RelationInconsistency: return "RelationInconsistency";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::ComputationError: return "ComputationError";
  }
  return "Error";
}

Presentation::Presentation(std::string name, std::vector<GeneratorSymbol> generators,
                           std::vector<RewriteRule> rules, bool unital, std::size_t step_cap)
    : name_(std::move(name)),
      gens_(std::move(generators)),
      rules_(std::move(rules)),
      rules_by_first_(gens_.size()),
      unital_(unital),
      step_cap_(step_cap) {
  for (std::size_t g = 0; g < gens_.size(); ++g) {
    const int a = gens_[g].adjoint;
    if (a < 0 || a >= static_cast<int>(gens_.size()) || gens_[a].adjoint != static_cast<int>(g))
      throw Error(ErrorKind::ConfigError, "adjoint pairing is not an involution at " + gens_[g].name);
  }
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    if (rules_[r].lhs.empty()) throw Error(ErrorKind::ConfigError, "rewrite rule with empty lhs");
    if (!unital_ && rules_[r].rhs.count(Word{}))
      throw Error(ErrorKind::ConfigError, "unit in a rule of a non-unital presentation");
    rules_by_first_.at(rules_[r].lhs.front()).push_back(r);
  }
}

const GeneratorSymbol& Presentation::generator(int id) const {
  if (id < 0 || id >= static_cast<int>(gens_.size()))
    throw Error(ErrorKind::AlgebraMismatch, "generator id out of range in " + name_);
  return gens_[id];
}

std::optional<int> Presentation::find(const std::string& name) const {
  for (std::size_t g = 0; g < gens_.size(); ++g)
    if (gens_[g].name == name) return static_cast<int>(g);
  return std::nullopt;
}

int Presentation::id(const std::string& name) const {
  if (auto g = find(name)) return *g;
  throw Error(ErrorKind::ConfigError, "unknown generator '" + name + "' in " + name_);
}

Word Presentation::parse(const std::vector<std::string>& names) const {
  Word w;
  w.reserve(names.size());
  for (const auto& n : names) w.push_back(id(n));
  return w;
}

std::string Presentation::format(const Word& w) const {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    os << generator(w[i]).name;
  }
  return os.str();
}

std::optional<std::size_t> Presentation::first_redex(const Word& w, const RewriteRule** rule) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t r : rules_by_first_[w[i]]) {
      const Word& lhs = rules_[r].lhs;
      if (i + lhs.size() > w.size()) continue;
      if (std::equal(lhs.begin(), lhs.end(), w.begin() + static_cast<std::ptrdiff_t>(i))) {
        *rule = &rules_[r];
        return i;
      }
    }
  }
  return std::nullopt;
}

bool Presentation::is_normal(const Word& w) const {
  const RewriteRule* rule = nullptr;
  return !first_redex(w, &rule).has_value();
}

Poly Presentation::normalize(const Word& w) const {
  if (rules_.empty()) return Poly{{w, 1.0}};
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(w); it != cache_.end()) return it->second;
  }
  Poly result;
  std::vector<std::pair<Word, cplx>> stack{{w, 1.0}};
  std::size_t steps = 0;
  while (!stack.empty()) {
    auto [cur, c] = std::move(stack.back());
    stack.pop_back();
    const RewriteRule* rule = nullptr;
    auto pos = first_redex(cur, &rule);
    if (!pos) {
      accumulate(result, std::move(cur), c);
      continue;
    }
    if (++steps > step_cap_)
      throw Error(ErrorKind::NonTerminatingRewrite, "step cap exceeded normalizing " + format(w));
    const auto at = static_cast<std::ptrdiff_t>(*pos);
    const auto tail = at + static_cast<std::ptrdiff_t>(rule->lhs.size());
    for (const auto& [rw, rc] : rule->rhs) {
      Word next(cur.begin(), cur.begin() + at);
      next.insert(next.end(), rw.begin(), rw.end());
      next.insert(next.end(), cur.begin() + tail, cur.end());
      stack.emplace_back(std::move(next), c * rc);
    }
  }
  drop_small(result);
  std::lock_guard lock(cache_mutex_);
  cache_.emplace(w, result);
  return result;
}

Word Presentation::raw_adjoint(const Word& w) const {
  Word r(w.rbegin(), w.rend());
  for (int& x : r) x = generator(x).adjoint;
  return r;
}

cplx Presentation::counit(const Word& w) const {
  cplx r = 1.0;
  for (int x : w) r *= generator(x).counit;
  return r;
}

int Presentation::degree(const Word& w) const {
  int d = 0;
  for (int x : w) d += generator(x).degree;
  return d;
}

std::vector<Word> Presentation::normal_words(int max_degree) const {
  std::vector<Word> out;
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= max_degree; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (int g = 0; g < static_cast<int>(gens_.size()); ++g) {
        Word e = w;
        e.push_back(g);
        if (degree(e) > max_degree || !is_normal(e)) continue;
        next.push_back(std::move(e));
      }
    }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::stable_sort(out.begin(), out.end(),
                   [this](const Word& a, const Word& b) { return degree(a) < degree(b); });
  return out;
}

// ---------------------------------------------------------------------------

Algebra::Algebra(std::shared_ptr<const Presentation> pres, View view)
    : pres_(std::move(pres)), view_(view) {}

View Algebra::effective_view() const noexcept {
  return (pres_ && pres_->unital()) ? view_ : View::plain;
}

bool Algebra::unital() const noexcept { return pres_ && pres_->unital() && view_ == View::plain; }

Poly Algebra::element(const Word& w) const {
  if (w.empty()) return Poly{{Word{}, 1.0}};
  Poly n = pres_->normalize(w);
  if (effective_view() == View::kernel) n.erase(Word{});
  return n;
}

Poly Algebra::multiply(const Word& a, const Word& b) const {
  if (a.empty()) return Poly{{b, 1.0}};
  if (b.empty()) return Poly{{a, 1.0}};
  Poly n = pres_->normalize(concat(a, b));
  if (effective_view() == View::kernel) {
    n.erase(Word{});
    accumulate(n, a, -pres_->counit(b));
    accumulate(n, b, -pres_->counit(a));
  }
  return n;
}

Poly Algebra::multiply(const Poly& p, const Poly& q) const {
  Poly r;
  for (const auto& [a, ca] : p)
    for (const auto& [b, cb] : q)
      for (const auto& [w, c] : multiply(a, b)) accumulate(r, w, ca * cb * c);
  return r;
}

Poly Algebra::adjoint(const Word& w) const {
  if (w.empty()) return Poly{{Word{}, 1.0}};
  return element(pres_->raw_adjoint(w));
}

Poly Algebra::adjoint(const Poly& p) const {
  Poly r;
  for (const auto& [w, c] : p)
    for (const auto& [v, cv] : adjoint(w)) accumulate(r, v, std::conj(c) * cv);
  return r;
}

NcPolynomial nc_multiply(const NcPolynomial& p, const NcPolynomial& q) {
  if (!(p.algebra == q.algebra))
    throw Error(ErrorKind::AlgebraMismatch, "operands belong to different algebras");
  return {p.algebra, p.algebra.multiply(p.terms, q.terms)};
}

NcPolynomial nc_adjoint(const NcPolynomial& p) { return {p.algebra, p.algebra.adjoint(p.terms)}; }

NcPolynomial normalize(const Algebra& algebra, const Word& w) {
  for (int x : w) (void)algebra.presentation().generator(x);
  return {algebra, algebra.element(w)};
}

// ---------------------------------------------------------------------------

namespace presentations {

std::shared_ptr<const Presentation> free_selfadjoint(const std::vector<std::string>& names) {
  std::vector<int> adj(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) adj[i] = static_cast<int>(i);
  return free_algebra(names, adj);
}

std::shared_ptr<const Presentation> free_algebra(const std::vector<std::string>& names,
                                                 const std::vector<int>& adjoint) {
  std::vector<GeneratorSymbol> gens;
  for (std::size_t i = 0; i < names.size(); ++i) gens.push_back({names[i], adjoint.at(i), 0.0, 1});
  std::string label = "T(";
  for (std::size_t i = 0; i < names.size(); ++i) label += (i ? "," : "") + names[i];
  return std::make_shared<const Presentation>(label + ")", std::move(gens),
                                              std::vector<RewriteRule>{}, false);
}

std::shared_ptr<const Presentation> unitary(int d) {
  if (d < 1) throw Error(ErrorKind::ConfigError, "unitary dimension must be >= 1");
  const int dd = d * d;
  auto x = [d](int k, int l) { return k * d + l; };
  auto xs = [d, dd](int k, int l) { return dd + k * d + l; };
  std::vector<GeneratorSymbol> gens(2 * dd);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      const std::string base = "x" + std::to_string(k + 1) + std::to_string(l + 1);
      const cplx delta = (k == l) ? 1.0 : 0.0;
      gens[x(k, l)] = {base, xs(k, l), delta, 1};
      gens[xs(k, l)] = {base + "*", x(k, l), delta, 1};
    }
  }
  // x*x = 1: sum_n x*_{nk} x_{nl} = δ_kl, solved for n = d.
  // xx* = 1: sum_n x_{kn} x*_{ln} = δ_kl, solved for n = d.
  std::vector<RewriteRule> rules;
  const int last = d - 1;
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      Poly rhs;
      if (k == l) rhs[Word{}] = 1.0;
      for (int n = 0; n < last; ++n) accumulate(rhs, Word{xs(n, k), x(n, l)}, -1.0);
      rules.push_back({Word{xs(last, k), x(last, l)}, rhs});
    }
  }
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      Poly rhs;
      if (k == l) rhs[Word{}] = 1.0;
      for (int n = 0; n < last; ++n) accumulate(rhs, Word{x(k, n), xs(l, n)}, -1.0);
      rules.push_back({Word{x(k, last), xs(l, last)}, rhs});
    }
  }
  return std::make_shared<const Presentation>("K<" + std::to_string(d) + ">", std::move(gens),
                                              std::move(rules), true);
}

std::shared_ptr<const Presentation> free_group(int n) {
  if (n < 1) throw Error(ErrorKind::ConfigError, "free group rank must be >= 1");
  std::vector<GeneratorSymbol> gens(2 * n);
  std::vector<RewriteRule> rules;
  for (int i = 0; i < n; ++i) {
    const std::string g = "g" + std::to_string(i + 1);
    gens[2 * i] = {g, 2 * i + 1, 1.0, 1};
    gens[2 * i + 1] = {g + "^-1", 2 * i, 1.0, 1};
    rules.push_back({Word{2 * i, 2 * i + 1}, Poly{{Word{}, 1.0}}});
    rules.push_back({Word{2 * i + 1, 2 * i}, Poly{{Word{}, 1.0}}});
  }
  return std::make_shared<const Presentation>("CF_" + std::to_string(n), std::move(gens),
                                              std::move(rules), true);
}

}  // namespace presentations

}  // namespace dualconv
