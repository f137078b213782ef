#include "dualconv/dualsg.hpp"

#include <algorithm>

namespace dualconv {

bool LawReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const LawEntry& e) { return e.pass; });
}

double LawReport::max_residual() const {
  double r = 0.0;
  for (const auto& e : entries) r = std::max(r, e.residual);
  return r;
}

DualSemigroup::DualSemigroup(std::string name, std::shared_ptr<const Presentation> pres,
                             std::vector<FpPoly> delta_on_generators,
                             std::optional<std::vector<Poly>> antipode_on_generators, bool builtin)
    : name_(std::move(name)),
      pres_(std::move(pres)),
      delta_gen_(std::move(delta_on_generators)),
      antipode_(std::move(antipode_on_generators)),
      builtin_(builtin) {
  if (delta_gen_.size() != pres_->size())
    throw Error(ErrorKind::ConfigError, "comultiplication must be given on every generator");
  if (antipode_ && antipode_->size() != pres_->size())
    throw Error(ErrorKind::ConfigError, "antipode must be given on every generator");
  const FreeProduct pair = FreeProduct::copies(plain_algebra(), 2);
  for (const auto& d : delta_gen_)
    if (!pair.well_formed(d))
      throw Error(ErrorKind::ConfigError, "comultiplication image is not an alternating element");
}

FpPoly DualSemigroup::comultiply_plain(const Word& w) const {
  const FreeProduct pair = FreeProduct::copies(plain_algebra(), 2);
  FpPoly acc = unit_element();
  for (int x : w) {
    acc = pair.multiply(acc, delta_gen_.at(static_cast<std::size_t>(x)));
    if (acc.empty()) break;
  }
  return acc;
}

FpPoly DualSemigroup::to_kernel(const FpPoly& plain, int n) const {
  if (!pres_->unital()) return plain;
  const FreeProduct fam = copies(n);
  FpPoly out;
  for (const auto& [w, c] : plain) {
    FpPoly acc = unit_element();
    for (const Leg& leg : w) {
      FpPoly factor = single_word(AltWord{leg});
      accumulate(factor, AltWord{}, pres_->counit(leg.word));
      acc = fam.multiply(acc, factor);
    }
    add_into(out, acc, c);
  }
  return out;
}

const FpPoly& DualSemigroup::comultiply(const Word& w) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = kernel_cache_.find(w); it != kernel_cache_.end()) return *it->second;
  }
  FpPoly d;
  if (!w.empty()) {
    d = to_kernel(comultiply_plain(w), 2);
    accumulate(d, AltWord{}, -pres_->counit(w));
    drop_small(d);
  }
  auto ptr = std::make_shared<const FpPoly>(std::move(d));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = kernel_cache_.emplace(w, ptr);
  return *it->second;
}

FpPoly DualSemigroup::comultiply(const Poly& p) const {
  FpPoly out;
  for (const auto& [w, c] : p) add_into(out, comultiply(w), c);
  return out;
}

FpPoly DualSemigroup::iterate(int n, const Poly& p) const {
  if (n <= 0) return {};
  FpPoly cur = copies(1).embed(0, p);
  for (int m = 1; m < n; ++m) {
    const FreeProduct target = copies(m + 1);
    cur = apply_hom(
        target,
        [&](int k, const Word& w) {
          return k == 0 ? comultiply(w) : target.embed(k + 1, w);
        },
        cur);
  }
  return cur;
}

FpPoly DualSemigroup::iterate_mirrored(int n, const Poly& p) const {
  if (n <= 0) return {};
  FpPoly cur = copies(1).embed(0, p);
  for (int m = 1; m < n; ++m) {
    const FreeProduct target = copies(m + 1);
    cur = apply_hom(
        target,
        [&](int k, const Word& w) {
          if (k < m - 1) return target.embed(k, w);
          return relabel(comultiply(w), [k](int c) { return c + k; });
        },
        cur);
  }
  return cur;
}

Poly DualSemigroup::antipode(const Word& w) const {
  if (!antipode_) throw Error(ErrorKind::NoAntipode, name_ + " has no antipode");
  const Algebra a = plain_algebra();
  Poly acc{{Word{}, 1.0}};
  for (int x : w) acc = a.multiply(acc, antipode_->at(static_cast<std::size_t>(x)));
  return acc;
}

FpPoly comultiply(const DualSemigroup& dsg, const NcPolynomial& p) {
  if (!(p.algebra == dsg.algebra()))
    throw Error(ErrorKind::AlgebraMismatch, "polynomial is not in the kernel algebra of " + dsg.name());
  return dsg.comultiply(p.terms);
}

FpPoly iterate_delta(const DualSemigroup& dsg, int n, const NcPolynomial& p) {
  if (!(p.algebra == dsg.algebra()))
    throw Error(ErrorKind::AlgebraMismatch, "polynomial is not in the kernel algebra of " + dsg.name());
  return dsg.iterate(n, p.terms);
}

namespace {

void record(LawReport& report, const std::string& name, double residual, double tol,
            const std::string& witness) {
  for (auto& e : report.entries) {
    if (e.name != name) continue;
    if (residual > e.residual) {
      e.residual = residual;
      if (residual > tol) e.witness = witness;
    }
    e.pass = e.residual <= tol;
    return;
  }
  report.entries.push_back({name, residual, residual <= tol, residual > tol ? witness : ""});
}

constexpr double kLawTolerance = 1e-12;

}  // namespace

LawReport check_dualsg_laws(const DualSemigroup& dsg, int degree_cap) {
  const Presentation& pres = dsg.presentation();
  const Algebra plain = dsg.plain_algebra();
  const FreeProduct triple = FreeProduct::copies(plain, 3);
  const bool unital = pres.unital();
  LawReport report;
  report.entries.push_back({"counit_left", 0.0, true, ""});
  report.entries.push_back({"counit_right", 0.0, true, ""});
  report.entries.push_back({"coassociativity", 0.0, true, ""});
  report.entries.push_back({"relations", 0.0, true, ""});
  report.entries.push_back({"star_map", 0.0, true, ""});

  auto counit_image = [&](const Word& v) {
    return unital ? Poly{{Word{}, pres.counit(v)}} : Poly{};
  };
  for (const Word& w : pres.normal_words(std::max(degree_cap, 1))) {
    const FpPoly d = dsg.comultiply_plain(w);
    const Poly expect = plain.element(w);
    const Poly left = apply_hom(
        plain, [&](int k, const Word& v) { return k == 0 ? counit_image(v) : plain.element(v); }, d);
    const Poly right = apply_hom(
        plain, [&](int k, const Word& v) { return k == 1 ? counit_image(v) : plain.element(v); }, d);
    record(report, "counit_left", max_difference(left, expect), kLawTolerance, pres.format(w));
    record(report, "counit_right", max_difference(right, expect), kLawTolerance, pres.format(w));

    const FpPoly lhs = apply_hom(
        triple,
        [&](int k, const Word& v) { return k == 0 ? dsg.comultiply_plain(v) : triple.embed(2, v); }, d);
    const FpPoly rhs = apply_hom(
        triple,
        [&](int k, const Word& v) {
          return k == 0 ? triple.embed(0, v)
                        : relabel(dsg.comultiply_plain(v), [](int c) { return c + 1; });
        },
        d);
    record(report, "coassociativity", max_difference(lhs, rhs), kLawTolerance, pres.format(w));
  }
  for (const auto& rule : pres.rules()) {
    FpPoly rhs;
    for (const auto& [w, c] : rule.rhs) add_into(rhs, dsg.comultiply_plain(w), c);
    record(report, "relations", max_difference(dsg.comultiply_plain(rule.lhs), rhs), kLawTolerance,
           pres.format(rule.lhs));
  }
  const FreeProduct pair = FreeProduct::copies(plain, 2);
  for (int g = 0; g < static_cast<int>(pres.size()); ++g) {
    const FpPoly lhs = dsg.comultiply_plain(Word{pres.generator(g).adjoint});
    const FpPoly rhs = pair.adjoint(dsg.comultiply_plain(Word{g}));
    record(report, "star_map", max_difference(lhs, rhs), kLawTolerance, pres.generator(g).name);
  }
  return report;
}

LawReport antipode_check(const DualSemigroup& dsg, int degree_cap) {
  if (!dsg.has_antipode()) throw Error(ErrorKind::NoAntipode, dsg.name() + " has no antipode");
  const Presentation& pres = dsg.presentation();
  const Algebra plain = dsg.plain_algebra();
  LawReport report;
  report.entries.push_back({"antipode_left", 0.0, true, ""});
  report.entries.push_back({"antipode_right", 0.0, true, ""});
  report.entries.push_back({"antipode_relations", 0.0, true, ""});
  for (const Word& w : pres.normal_words(std::max(degree_cap, 1))) {
    const FpPoly d = dsg.comultiply_plain(w);
    Poly expect;
    if (pres.unital()) accumulate(expect, Word{}, pres.counit(w));
    const Poly left = apply_hom(
        plain, [&](int k, const Word& v) { return k == 0 ? dsg.antipode(v) : plain.element(v); }, d);
    const Poly right = apply_hom(
        plain, [&](int k, const Word& v) { return k == 1 ? dsg.antipode(v) : plain.element(v); }, d);
    record(report, "antipode_left", max_difference(left, expect), kLawTolerance, pres.format(w));
    record(report, "antipode_right", max_difference(right, expect), kLawTolerance, pres.format(w));
  }
  for (const auto& rule : pres.rules()) {
    Poly rhs;
    for (const auto& [w, c] : rule.rhs) add_into(rhs, dsg.antipode(w), c);
    record(report, "antipode_relations", max_difference(dsg.antipode(rule.lhs), rhs), kLawTolerance,
           pres.format(rule.lhs));
  }
  return report;
}

namespace builtin {

namespace {

std::vector<std::string> primitive_names(int n) {
  if (n == 1) return {"x"};
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

DualSemigroupPtr make_primitive(int n) {
  if (n < 1) throw Error(ErrorKind::ConfigError, "primitive needs at least one generator");
  auto pres = presentations::free_selfadjoint(primitive_names(n));
  std::vector<FpPoly> delta;
  std::vector<Poly> antipode;
  for (int g = 0; g < n; ++g) {
    FpPoly d;
    d[AltWord{Leg{0, Word{g}}}] = 1.0;
    d[AltWord{Leg{1, Word{g}}}] = 1.0;
    delta.push_back(std::move(d));
    antipode.push_back(Poly{{Word{g}, -1.0}});
  }
  return std::make_shared<const DualSemigroup>("primitive:" + std::to_string(n), pres,
                                               std::move(delta), std::move(antipode), true);
}

DualSemigroupPtr make_unitary(int d) {
  if (d < 1) throw Error(ErrorKind::ConfigError, "unitary needs d >= 1");
  auto pres = presentations::unitary(d);
  const int dd = d * d;
  auto x = [d](int k, int l) { return k * d + l; };
  auto xs = [d, dd](int k, int l) { return dd + k * d + l; };
  std::vector<FpPoly> delta(2 * dd);
  std::vector<Poly> antipode(2 * dd);
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      for (int n = 0; n < d; ++n) {
        delta[x(k, l)][AltWord{Leg{0, Word{x(k, n)}}, Leg{1, Word{x(n, l)}}}] = 1.0;
        delta[xs(k, l)][AltWord{Leg{1, Word{xs(n, l)}}, Leg{0, Word{xs(k, n)}}}] = 1.0;
      }
      antipode[x(k, l)] = Poly{{Word{xs(l, k)}, 1.0}};
      antipode[xs(k, l)] = Poly{{Word{x(l, k)}, 1.0}};
    }
  }
  return std::make_shared<const DualSemigroup>("unitary:" + std::to_string(d), pres,
                                               std::move(delta), std::move(antipode), true);
}

DualSemigroupPtr make_free_group(int n) {
  if (n < 1) throw Error(ErrorKind::ConfigError, "freegroup needs at least one generator");
  auto pres = presentations::free_group(n);
  std::vector<FpPoly> delta(2 * n);
  std::vector<Poly> antipode(2 * n);
  for (int i = 0; i < n; ++i) {
    const int g = 2 * i, gi = 2 * i + 1;
    delta[g][AltWord{Leg{0, Word{g}}, Leg{1, Word{g}}}] = 1.0;
    delta[gi][AltWord{Leg{1, Word{gi}}, Leg{0, Word{gi}}}] = 1.0;
    antipode[g] = Poly{{Word{gi}, 1.0}};
    antipode[gi] = Poly{{Word{g}, 1.0}};
  }
  return std::make_shared<const DualSemigroup>("freegroup:" + std::to_string(n), pres,
                                               std::move(delta), std::move(antipode), true);
}

}  // namespace

DualSemigroupPtr primitive(int n) { return by_name("primitive:" + std::to_string(n)); }
DualSemigroupPtr unitary(int d) { return by_name("unitary:" + std::to_string(d)); }
DualSemigroupPtr free_group(int n) { return by_name("freegroup:" + std::to_string(n)); }

DualSemigroupPtr by_name(const std::string& name) {
  static std::mutex mutex;
  static std::map<std::string, DualSemigroupPtr> registry;
  std::lock_guard lock(mutex);
  if (auto it = registry.find(name); it != registry.end()) return it->second;

  const auto colon = name.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorKind::ConfigError, "dual semigroup name must be <kind>:<n>, got '" + name + "'");
  const std::string kind = name.substr(0, colon);
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(name.substr(colon + 1), &used);
    if (used != name.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, "bad size in dual semigroup name '" + name + "'");
  }
  DualSemigroupPtr dsg;
  if (kind == "primitive")
    dsg = make_primitive(n);
  else if (kind == "unitary")
    dsg = make_unitary(n);
  else if (kind == "freegroup")
    dsg = make_free_group(n);
  else
    throw Error(ErrorKind::ConfigError, "unknown dual semigroup '" + name + "'");
  registry.emplace(name, dsg);
  return dsg;
}

}  // namespace builtin

Poly TensorLift::multiplication(const Word& tensor_word, const Algebra& target) const {
  Poly acc{{Word{}, 1.0}};
  for (int letter : tensor_word)
    acc = target.multiply(acc, Poly{{letters.at(static_cast<std::size_t>(letter)), 1.0}});
  return acc;
}

TensorLift tensor_lift(const DualSemigroupPtr& base, int max_degree) {
  const Algebra e = base->algebra();
  TensorLift lift;
  lift.letters = base->presentation().normal_words(max_degree);
  std::map<Word, int> index;
  for (std::size_t i = 0; i < lift.letters.size(); ++i) index[lift.letters[i]] = static_cast<int>(i);

  std::vector<GeneratorSymbol> gens;
  for (const Word& w : lift.letters) {
    const Poly a = e.adjoint(w);
    if (a.size() != 1 || std::abs(a.begin()->second - 1.0) > kDropTolerance ||
        !index.count(a.begin()->first))
      throw Error(ErrorKind::ConfigError, "kernel word adjoint is not a single letter");
    gens.push_back(GeneratorSymbol{"[" + base->presentation().format(w) + "]", index.at(a.begin()->first), 0.0,
                                   base->presentation().degree(w)});
  }
  auto pres = std::make_shared<const Presentation>("T(" + base->name() + ")", std::move(gens),
                                                   std::vector<RewriteRule>{}, false);
  std::vector<FpPoly> delta;
  for (const Word& w : lift.letters) {
    FpPoly d;
    for (const auto& [alt, c] : base->comultiply(w)) {
      AltWord lifted;
      for (const Leg& leg : alt) {
        auto it = index.find(leg.word);
        if (it == index.end())
          throw Error(ErrorKind::ClosureCapExceeded, "comultiplication leaves the lifted letters");
        lifted.push_back(Leg{leg.comp, Word{it->second}});
      }
      accumulate(d, std::move(lifted), c);
    }
    delta.push_back(std::move(d));
  }
  lift.lifted = std::make_shared<const DualSemigroup>("T(" + base->name() + ")", pres,
                                                      std::move(delta), std::nullopt, false);
  return lift;
}

}  // namespace dualconv
