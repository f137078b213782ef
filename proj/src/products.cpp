#include "dualconv/products.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace dualconv {

const char* to_string(ProductKind kind) {
  switch (kind) {
    case ProductKind::tensor: return "tensor";
    case ProductKind::free: return "free";
    case ProductKind::boolean: return "boolean";
    case ProductKind::monotone: return "monotone";
    case ProductKind::antimonotone: return "antimonotone";
  }
  return "?";
}

ProductKind parse_product_kind(const std::string& name) {
  for (ProductKind k : all_product_kinds())
    if (name == to_string(k)) return k;
  throw Error(ErrorKind::ConfigError, "unknown product kind '" + name + "'");
}

const std::vector<ProductKind>& all_product_kinds() {
  static const std::vector<ProductKind> kinds{ProductKind::tensor, ProductKind::free,
                                              ProductKind::boolean, ProductKind::monotone,
                                              ProductKind::antimonotone};
  return kinds;
}

bool is_symmetric(ProductKind kind) {
  return kind != ProductKind::monotone && kind != ProductKind::antimonotone;
}

SymKey sym_product(const SymKey& a, const SymKey& b) {
  SymKey r;
  r.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

SigmaImage SigmaImage::leg(const Leg& l, cplx c) {
  SigmaImage s;
  if (c != cplx{}) s.terms[SymKey{l}] = c;
  return s;
}

SigmaImage& SigmaImage::operator+=(const SigmaImage& o) {
  add_into(terms, o.terms);
  return *this;
}

SigmaImage operator*(const SigmaImage& a, const SigmaImage& b) {
  SigmaImage r;
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) accumulate(r.terms, sym_product(ka, kb), ca * cb);
  return r;
}

SigmaImage operator*(cplx c, const SigmaImage& a) {
  SigmaImage r;
  r.terms = scaled(a.terms, c);
  return r;
}

cplx SigmaImage::evaluate(const std::vector<LinearFunctional>& phis) const {
  cplx total{};
  for (const auto& [key, c] : terms) {
    cplx v = c;
    for (const Leg& l : key) v *= phis.at(static_cast<std::size_t>(l.comp))(l.word);
    total += v;
  }
  return total;
}

namespace {

const Leg& single_leg(const AltWord& run) {
  if (run.size() != 1) throw Error(ErrorKind::ComputationError, "run spans several components");
  return run.front();
}

void require_pair(const FreeProduct& family) {
  if (family.size() != 2)
    throw Error(ErrorKind::ArityMismatch, "binary product needs a two-component family");
}

cplx fold_range(ProductKind kind, const std::vector<LinearFunctional>& phis,
                const FreeProduct& family, int lo, int hi, Nesting nesting, const AltWord& w) {
  if (hi - lo == 1) return phis[static_cast<std::size_t>(lo)](single_leg(w).word);
  const int cut = nesting == Nesting::left ? hi - 1 : lo + 1;
  detail::BinarySplit<cplx> split{
      [cut](int comp) { return comp < cut; },
      [&, lo, cut](const AltWord& r) { return fold_range(kind, phis, family, lo, cut, nesting, r); },
      [&, cut, hi](const AltWord& r) {
        return fold_range(kind, phis, family, cut, hi, nesting, r);
      }};
  detail::BinaryEvaluator<cplx> eval(kind, family, split);
  return eval.word(w);
}

}  // namespace

cplx eval_product(ProductKind kind, const LinearFunctional& phi1, const LinearFunctional& phi2,
                  const FreeProduct& family, const FpPoly& u) {
  require_pair(family);
  detail::BinarySplit<cplx> split{
      [](int comp) { return comp == 0; },
      [&](const AltWord& r) { return phi1(single_leg(r).word); },
      [&](const AltWord& r) { return phi2(single_leg(r).word); }};
  detail::BinaryEvaluator<cplx> eval(kind, family, split);
  return eval(u);
}

namespace {

detail::BinarySplit<SigmaImage> sigma_split() {
  auto leg_value = [](const AltWord& r) { return SigmaImage::leg(single_leg(r)); };
  return {[](int comp) { return comp == 0; }, leg_value, leg_value};
}

}  // namespace

SigmaImage sigma_decompose(ProductKind kind, const FreeProduct& family, const FpPoly& u) {
  return SigmaDecomposer(kind, family)(u);
}

SigmaDecomposer::SigmaDecomposer(ProductKind kind, FreeProduct family)
    : family_(std::move(family)), split_(sigma_split()), eval_(kind, family_, split_) {
  require_pair(family_);
}

cplx fold_product(ProductKind kind, const std::vector<LinearFunctional>& phis,
                  const FreeProduct& family, const FpPoly& u, Nesting nesting) {
  const int n = family.size();
  if (n < 1 || static_cast<int>(phis.size()) != n)
    throw Error(ErrorKind::ArityMismatch, "one functional per component required");
  cplx acc{};
  for (const auto& [w, c] : u)
    acc += c * (w.empty() ? cplx{1.0} : fold_range(kind, phis, family, 0, n, nesting, w));
  return acc;
}

bool AxiomReport::as_expected() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const AxiomEntry& e) { return e.pass == e.expected; });
}

const AxiomEntry& AxiomReport::entry(const std::string& axiom) const {
  for (const auto& e : entries)
    if (e.axiom == axiom) return e;
  throw Error(ErrorKind::ComputationError, "no axiom entry " + axiom);
}

namespace {

class AxiomSampler {
 public:
  AxiomSampler(std::uint64_t seed, int degree_cap)
      : rng_(seed),
        algebra_(presentations::free_selfadjoint({"x1", "x2"}), View::kernel),
        cap_(degree_cap) {}

  const Algebra& algebra() const { return algebra_; }
  std::uint64_t next_seed() { return rng_(); }

  Word word(int length) {
    Word w(static_cast<std::size_t>(length));
    for (int& x : w) x = uniform(0, 1);
    return w;
  }

  /// Random alternating word over n components with total degree <= cap.
  AltWord alternating(int n) {
    const int legs = uniform(1, cap_);
    std::vector<int> lengths(static_cast<std::size_t>(legs), 1);
    for (int extra = uniform(0, cap_ - legs); extra > 0; --extra)
      ++lengths[static_cast<std::size_t>(uniform(0, legs - 1))];
    AltWord w;
    int prev = -1;
    for (int len : lengths) {
      int comp = uniform(0, n - 1);
      if (comp == prev) comp = (comp + 1 + uniform(0, n - 2 < 0 ? 0 : n - 2)) % n;
      w.push_back(Leg{comp, word(len)});
      prev = comp;
    }
    return w;
  }

  cplx coefficient() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double re = u(rng_);
    return {re, u(rng_)};
  }

  /// Random substitution of each generator by a polynomial without constant term.
  std::vector<Poly> substitution() {
    std::vector<Poly> images(2);
    for (Poly& p : images) {
      const int terms = uniform(1, 2);
      for (int t = 0; t < terms; ++t) accumulate(p, word(uniform(1, 2)), coefficient());
    }
    return images;
  }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
  Algebra algebra_;
  int cap_;
};

Poly substitute(const Algebra& a, const std::vector<Poly>& images, const Word& w) {
  Poly acc{{Word{}, 1.0}};
  for (int x : w) acc = a.multiply(acc, images[static_cast<std::size_t>(x)]);
  return acc;
}

FpPoly flip(const FpPoly& u) {
  return relabel(u, [](int c) { return 1 - c; });
}

}  // namespace

AxiomReport check_axioms(ProductKind kind, int trials, int degree_cap, std::uint64_t seed,
                         double tol) {
  AxiomSampler s(seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(kind) + 1, degree_cap);
  const Algebra& a = s.algebra();
  const FreeProduct pair = FreeProduct::copies(a, 2);
  const FreeProduct triple = FreeProduct::copies(a, 3);

  AxiomReport report;
  report.kind = kind;
  for (const char* ax : {"A1", "A2", "A3", "A4", "A5"})
    report.entries.push_back({ax, 0.0, true, std::string(ax) != "A5" || is_symmetric(kind), ""});
  auto note = [&](int idx, double residual, const std::string& witness) {
    AxiomEntry& e = report.entries[static_cast<std::size_t>(idx)];
    if (residual > e.residual) {
      e.residual = residual;
      if (residual > tol) e.witness = witness;
    }
    e.pass = e.residual <= tol;
  };

  for (int trial = 0; trial < trials; ++trial) {
    const LinearFunctional phi1 = LinearFunctional::random(a, s.next_seed());
    const LinearFunctional phi2 = LinearFunctional::random(a, s.next_seed());
    const LinearFunctional phi3 = LinearFunctional::random(a, s.next_seed());

    // A1: restriction to each factor.
    const Word b1 = s.word(s.uniform(1, degree_cap));
    const Word b2 = s.word(s.uniform(1, degree_cap));
    note(0, std::abs(eval_product(kind, phi1, phi2, pair, pair.embed(0, b1)) - phi1(b1)),
         pair.format(pair.embed(0, b1)));
    note(0, std::abs(eval_product(kind, phi1, phi2, pair, pair.embed(1, b2)) - phi2(b2)),
         pair.format(pair.embed(1, b2)));

    // A2: associativity.
    const FpPoly u3 = single_word(s.alternating(3));
    const cplx l = fold_product(kind, {phi1, phi2, phi3}, triple, u3, Nesting::left);
    const cplx r = fold_product(kind, {phi1, phi2, phi3}, triple, u3, Nesting::right);
    note(1, std::abs(l - r), triple.format(u3));

    // A3: functoriality under substitution homomorphisms.
    const auto j1 = s.substitution();
    const auto j2 = s.substitution();
    const FpPoly u2 = single_word(s.alternating(2));
    const LinearFunctional pj1 = phi1.compose([&a, j1](const Word& w) { return substitute(a, j1, w); });
    const LinearFunctional pj2 = phi2.compose([&a, j2](const Word& w) { return substitute(a, j2, w); });
    const FpPoly image = apply_hom(
        pair,
        [&](int k, const Word& w) { return pair.embed(k, substitute(a, k == 0 ? j1 : j2, w)); },
        u2);
    note(2, std::abs(eval_product(kind, pj1, pj2, pair, u2) - eval_product(kind, phi1, phi2, pair, image)),
         pair.format(u2));

    // A4: factorization on two-leg words in both orders.
    const cplx expect = phi1(b1) * phi2(b2);
    const FpPoly w12 = single_word(AltWord{Leg{0, b1}, Leg{1, b2}});
    const FpPoly w21 = single_word(AltWord{Leg{1, b2}, Leg{0, b1}});
    note(3, std::abs(eval_product(kind, phi1, phi2, pair, w12) - expect), pair.format(w12));
    note(3, std::abs(eval_product(kind, phi1, phi2, pair, w21) - expect), pair.format(w21));

    // A5: commutativity under the flip of components.
    const FpPoly u5 = trial == 0 ? single_word(AltWord{Leg{0, Word{0}}, Leg{1, Word{1}}, Leg{0, Word{0}}})
                                 : single_word(s.alternating(2));
    note(4, std::abs(eval_product(kind, phi1, phi2, pair, u5) -
                     eval_product(kind, phi2, phi1, pair, flip(u5))),
         pair.format(u5));
  }
  return report;
}

}  // namespace dualconv
