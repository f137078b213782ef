#include "dualconv/functional.hpp"

#include <mutex>
#include <random>
#include <unordered_map>

namespace dualconv {

struct LinearFunctional::Impl {
  Algebra domain;
  Rule rule;
  std::string label;
  std::mutex mutex;
  std::unordered_map<Word, cplx, WordHash> memo;
};

LinearFunctional::LinearFunctional(Algebra domain, Rule rule, std::string label)
    : impl_(std::make_shared<Impl>()) {
  impl_->domain = std::move(domain);
  impl_->rule = std::move(rule);
  impl_->label = std::move(label);
}

LinearFunctional LinearFunctional::zero(const Algebra& domain) {
  return LinearFunctional(domain, [](const Word&) { return cplx{}; }, "zero");
}

LinearFunctional LinearFunctional::from_table(const Algebra& domain, std::map<Word, cplx> table,
                                              std::string label) {
  return LinearFunctional(
      domain,
      [table = std::move(table)](const Word& w) {
        auto it = table.find(w);
        return it == table.end() ? cplx{} : it->second;
      },
      std::move(label));
}

namespace {

cplx hashed_value(std::uint64_t seed, const Word& w) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(WordHash{}(w)),
                    static_cast<std::uint32_t>(w.size())};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  return {re, u(rng)};
}

}  // namespace

LinearFunctional LinearFunctional::random(const Algebra& domain, std::uint64_t seed, bool hermitian) {
  if (!hermitian)
    return LinearFunctional(
        domain, [seed](const Word& w) { return hashed_value(seed, w); }, "random");
  return LinearFunctional(
      domain,
      [seed, domain](const Word& w) {
        cplx v = hashed_value(seed, w);
        cplx a{};
        for (const auto& [u, c] : domain.adjoint(w)) a += c * hashed_value(seed, u);
        return 0.5 * (v + std::conj(a));
      },
      "random-hermitian");
}

const Algebra& LinearFunctional::domain() const {
  if (!impl_) throw Error(ErrorKind::ComputationError, "empty functional");
  return impl_->domain;
}

const std::string& LinearFunctional::label() const {
  static const std::string empty;
  return impl_ ? impl_->label : empty;
}

cplx LinearFunctional::operator()(const Word& w) const {
  if (!impl_) throw Error(ErrorKind::ComputationError, "empty functional");
  {
    std::lock_guard lock(impl_->mutex);
    if (auto it = impl_->memo.find(w); it != impl_->memo.end()) return it->second;
  }
  const cplx v = impl_->rule(w);
  std::lock_guard lock(impl_->mutex);
  impl_->memo.emplace(w, v);
  return v;
}

cplx LinearFunctional::operator()(const Poly& p) const {
  cplx s{};
  for (const auto& [w, c] : p) s += c * (*this)(w);
  return s;
}

LinearFunctional LinearFunctional::scaled(cplx c) const {
  const LinearFunctional self = *this;
  return LinearFunctional(
      domain(), [self, c](const Word& w) { return c * self(w); }, label());
}

LinearFunctional LinearFunctional::plus(const LinearFunctional& other, cplx c) const {
  if (!(domain() == other.domain()))
    throw Error(ErrorKind::AlgebraMismatch, "functionals on different algebras");
  const LinearFunctional self = *this;
  return LinearFunctional(
      domain(), [self, other, c](const Word& w) { return self(w) + c * other(w); },
      label() + "+" + other.label());
}

LinearFunctional LinearFunctional::compose(std::function<Poly(const Word&)> map,
                                           std::string label) const {
  const LinearFunctional self = *this;
  return LinearFunctional(
      domain(), [self, map = std::move(map)](const Word& w) { return self(map(w)); },
      std::move(label));
}

LinearFunctional gaussian_generator(const Algebra& domain) {
  return LinearFunctional(
      domain, [](const Word& w) { return w.size() == 2 ? cplx{1.0} : cplx{}; }, "gaussian");
}

double hermitian_residual(const LinearFunctional& phi, int degree_cap) {
  const Algebra& a = phi.domain();
  double r = 0.0;
  for (const Word& w : a.presentation().normal_words(degree_cap))
    r = std::max(r, std::abs(phi(a.adjoint(w)) - std::conj(phi(w))));
  return r;
}

}  // namespace dualconv
