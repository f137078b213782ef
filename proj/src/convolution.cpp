#include "dualconv/convolution.hpp"

#include <algorithm>
#include <deque>

namespace dualconv {

LinearFunctional star(ProductKind kind, const DualSemigroupPtr& dsg, const LinearFunctional& phi1,
                      const LinearFunctional& phi2) {
  if (!(phi1.domain() == dsg->algebra()) || !(phi2.domain() == dsg->algebra()))
    throw Error(ErrorKind::AlgebraMismatch, "functionals are not defined on " + dsg->name());
  const FreeProduct pair = dsg->copies(2);
  return LinearFunctional(
      dsg->algebra(),
      [kind, dsg, phi1, phi2, pair](const Word& w) {
        if (w.empty()) return phi1(w) * phi2(w);
        return eval_product(kind, phi1, phi2, pair, dsg->comultiply(w));
      },
      "(" + phi1.label() + "*" + phi2.label() + ")");
}

LinearFunctional star_power(ProductKind kind, const DualSemigroupPtr& dsg,
                            const LinearFunctional& psi, int n) {
  if (n < 1) throw Error(ErrorKind::ConfigError, "star power needs n >= 1");
  LinearFunctional acc = psi;
  for (int k = 1; k < n; ++k) acc = star(kind, dsg, acc, psi);
  return acc;
}

LinearFunctional counit_functional(const DualSemigroupPtr& dsg) {
  return LinearFunctional(
      dsg->algebra(), [](const Word& w) { return w.empty() ? cplx{1.0} : cplx{}; }, "delta");
}

SymMono sym_multiply(const SymMono& a, const SymMono& b) {
  SymMono r;
  r.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

cplx GeneratorFunctional::operator()(const SymMono& m) const {
  return m.size() == 1 ? base(m.front()) : cplx{};
}

GeneratorFunctional lift_generator(const LinearFunctional& psi) { return GeneratorFunctional{psi}; }

int CoalgebraSlice::find(const SymMono& m) const {
  auto it = index.find(m);
  return it == index.end() ? -1 : it->second;
}

double CoalgebraSlice::counit_residual() const {
  double r = 0.0;
  for (int i = 0; i < size(); ++i) {
    std::map<int, cplx> left, right;
    for (const Term& t : delta[static_cast<std::size_t>(i)]) {
      if (t.left == 0) left[t.right] += t.coef;
      if (t.right == 0) right[t.left] += t.coef;
    }
    for (auto* side : {&left, &right}) {
      (*side)[i] -= 1.0;
      for (const auto& [k, c] : *side) r = std::max(r, std::abs(c));
    }
  }
  return r;
}

namespace {

using CoproductTerms = std::map<std::pair<SymMono, SymMono>, cplx>;

CoproductTerms single_coproduct(SigmaDecomposer& sigma, const DualSemigroup& dsg, const Word& w) {
  CoproductTerms out;
  const SigmaImage s = sigma(dsg.comultiply(w));
  for (const auto& [key, c] : s.terms) {
    SymMono left, right;
    for (const Leg& l : key) (l.comp == 0 ? left : right).push_back(l.word);
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    accumulate(out, std::make_pair(std::move(left), std::move(right)), c);
  }
  return out;
}

CoproductTerms multiply(const CoproductTerms& a, const CoproductTerms& b) {
  CoproductTerms out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b)
      accumulate(out,
                 std::make_pair(sym_multiply(ka.first, kb.first), sym_multiply(ka.second, kb.second)),
                 ca * cb);
  return out;
}

class CoproductCache {
 public:
  CoproductCache(ProductKind kind, const DualSemigroup& dsg) : dsg_(dsg), sigma_(kind, dsg.copies(2)) {}

  CoproductTerms operator()(const SymMono& m) {
    CoproductTerms acc{{{SymMono{}, SymMono{}}, 1.0}};
    for (const Word& w : m) {
      auto it = cache_.find(w);
      if (it == cache_.end()) it = cache_.emplace(w, single_coproduct(sigma_, dsg_, w)).first;
      acc = multiply(acc, it->second);
    }
    return acc;
  }

 private:
  const DualSemigroup& dsg_;
  SigmaDecomposer sigma_;
  std::map<Word, CoproductTerms> cache_;
};

int total_degree(const Presentation& pres, const SymMono& m) {
  int d = 0;
  for (const Word& w : m) d += pres.degree(w);
  return d;
}

}  // namespace

std::vector<std::tuple<SymMono, SymMono, cplx>> sym_coproduct(ProductKind kind,
                                                             const DualSemigroup& dsg,
                                                             const SymMono& m) {
  CoproductCache cache(kind, dsg);
  std::vector<std::tuple<SymMono, SymMono, cplx>> out;
  for (const auto& [k, c] : cache(m)) out.emplace_back(k.first, k.second, c);
  return out;
}

CoalgebraSlice coalgebra_closure(ProductKind kind, const DualSemigroupPtr& dsg, const Poly& seed,
                                 int degree_cap, std::size_t size_cap) {
  const Presentation& pres = dsg->presentation();
  int seed_degree = 0;
  for (const auto& [w, c] : seed) seed_degree = std::max(seed_degree, pres.degree(w));
  if (seed_degree > degree_cap)
    throw Error(ErrorKind::ClosureCapExceeded, "seed degree exceeds the degree cap");

  CoalgebraSlice slice;
  std::deque<int> queue;
  auto intern = [&](const SymMono& m) {
    if (auto it = slice.index.find(m); it != slice.index.end()) return it->second;
    if (total_degree(pres, m) > seed_degree)
      throw Error(ErrorKind::ClosureCapExceeded, "closure leaves the degree filtration");
    if (slice.basis.size() >= size_cap)
      throw Error(ErrorKind::ClosureCapExceeded,
                  "sub-coalgebra exceeds " + std::to_string(size_cap) + " basis elements");
    const int id = slice.size();
    slice.basis.push_back(m);
    slice.index.emplace(m, id);
    slice.delta.emplace_back();
    queue.push_back(id);
    return id;
  };
  intern(SymMono{});
  for (const auto& [w, c] : seed)
    if (!w.empty()) intern(SymMono{w});

  CoproductCache coproduct(kind, *dsg);
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    const SymMono m = slice.basis[static_cast<std::size_t>(id)];
    std::vector<CoalgebraSlice::Term> terms;
    for (const auto& [k, c] : coproduct(m)) terms.push_back({intern(k.first), intern(k.second), c});
    slice.delta[static_cast<std::size_t>(id)] = std::move(terms);
  }
  return slice;
}

CMatrix generator_matrix(const CoalgebraSlice& slice, const GeneratorFunctional& d) {
  const int n = slice.size();
  CMatrix t = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (const auto& term : slice.delta[static_cast<std::size_t>(i)]) {
      const cplx v = d(slice.basis[static_cast<std::size_t>(term.right)]);
      if (v != cplx{}) t(term.left, i) += term.coef * v;
    }
  return t;
}

ConvolutionSemigroup::ConvolutionSemigroup(ProductKind kind, DualSemigroupPtr dsg,
                                           LinearFunctional psi, std::size_t size_cap)
    : state_(std::make_shared<State>()), times_(std::make_shared<TimeCache>()) {
  if (!(psi.domain() == dsg->algebra()))
    throw Error(ErrorKind::AlgebraMismatch, "generator is not defined on " + dsg->name());
  state_->kind = kind;
  state_->dsg = std::move(dsg);
  state_->psi = std::move(psi);
  state_->size_cap = size_cap;
}

std::shared_ptr<const ConvolutionSemigroup::Entry> ConvolutionSemigroup::entry(State& s,
                                                                              const Word& w) {
  {
    std::lock_guard lock(s.mutex);
    if (auto it = s.entries.find(w); it != s.entries.end()) return it->second;
  }
  auto e = std::make_shared<Entry>();
  const int degree = s.dsg->presentation().degree(w);
  e->slice = std::make_shared<const CoalgebraSlice>(
      coalgebra_closure(s.kind, s.dsg, Poly{{w, 1.0}}, degree, s.size_cap));
  e->generator = generator_matrix(*e->slice, lift_generator(s.psi));
  e->column = e->slice->find(SymMono{w});
  std::lock_guard lock(s.mutex);
  return s.entries.emplace(w, std::move(e)).first->second;
}

std::shared_ptr<const CoalgebraSlice> ConvolutionSemigroup::slice(const Word& w) const {
  return entry(*state_, w)->slice;
}

cplx ConvolutionSemigroup::value(State& s, double t, const Word& w) {
  if (w.empty()) return 1.0;
  const auto e = entry(s, w);
  const CMatrix m = expm(t * e->generator);
  return m(0, e->column);
}

cplx ConvolutionSemigroup::value(double t, const Word& w) const { return value(*state_, t, w); }

cplx ConvolutionSemigroup::value(double t, const Poly& b) const {
  cplx s{};
  for (const auto& [w, c] : b) s += c * value(*state_, t, w);
  return s;
}

LinearFunctional ConvolutionSemigroup::at(double t) const {
  {
    std::lock_guard lock(times_->mutex);
    if (auto it = times_->at.find(t); it != times_->at.end()) return it->second;
  }
  std::shared_ptr<State> s = state_;
  LinearFunctional f(
      s->dsg->algebra(), [s, t](const Word& w) { return value(*s, t, w); },
      "exp(" + std::to_string(t) + ")");
  std::lock_guard lock(times_->mutex);
  return times_->at.emplace(t, f).first->second;
}

cplx conv_exp(ProductKind kind, const DualSemigroupPtr& dsg, const LinearFunctional& psi, double t,
              const Poly& b) {
  const ConvolutionSemigroup semigroup(kind, dsg, psi);
  return semigroup.value(t, b);
}

cplx trotter_exp(ProductKind kind, const DualSemigroupPtr& dsg, const LinearFunctional& psi,
                 double t, int n, const Poly& b, const std::optional<LinearFunctional>& perturbation) {
  if (n < 1) throw Error(ErrorKind::ConfigError, "Trotter step count must be positive");
  LinearFunctional step = psi.scaled(t / n);
  if (perturbation) step = step.plus(*perturbation);
  return star_power(kind, dsg, step, n)(b);
}

}  // namespace dualconv
