#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dualconv/free_product.hpp"

using namespace dualconv;

namespace {

Poly word_poly(const Word& w, cplx c = 1.0) { return Poly{{w, c}}; }

/// Rewrites the rightmost redex first, by direct search over all rules.
Poly rightmost_normalize(const Presentation& pres, const Word& w, int depth = 0) {
  REQUIRE(depth < 200);
  for (std::size_t end = w.size(); end-- > 0;) {
    for (const auto& rule : pres.rules()) {
      const std::size_t n = rule.lhs.size();
      if (n > end + 1) continue;
      const std::size_t start = end + 1 - n;
      if (!std::equal(rule.lhs.begin(), rule.lhs.end(), w.begin() + static_cast<long>(start))) continue;
      Poly out;
      for (const auto& [r, c] : rule.rhs) {
        Word next(w.begin(), w.begin() + static_cast<long>(start));
        next.insert(next.end(), r.begin(), r.end());
        next.insert(next.end(), w.begin() + static_cast<long>(end) + 1, w.end());
        add_into(out, rightmost_normalize(pres, next, depth + 1), c);
      }
      return out;
    }
  }
  return word_poly(w);
}

Poly random_poly(std::mt19937_64& rng, int gens, int max_len, int terms) {
  std::uniform_int_distribution<int> g(0, gens - 1), len(1, max_len);
  std::uniform_real_distribution<double> u(-1, 1);
  Poly p;
  for (int t = 0; t < terms; ++t) {
    Word w(static_cast<std::size_t>(len(rng)));
    for (int& x : w) x = g(rng);
    const double re = u(rng);
    accumulate(p, w, cplx(re, u(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("normalize: unitary relation, free algebra, group reduction") {
  auto k1 = presentations::unitary(1);
  const int x = k1->id("x11"), xs = k1->id("x11*");
  CHECK(k1->normalize(Word{xs, x}) == word_poly(Word{}));
  CHECK(k1->normalize(Word{x, xs}) == word_poly(Word{}));

  auto t = presentations::free_selfadjoint({"x"});
  CHECK(t->normalize(Word{0, 0, 0}) == word_poly(Word{0, 0, 0}));

  auto f2 = presentations::free_group(2);
  CHECK(f2->normalize(f2->parse({"g1", "g1^-1", "g2"})) == word_poly(f2->parse({"g2"})));
}

TEST_CASE("normalize is idempotent on normal forms") {
  auto k2 = presentations::unitary(2);
  for (const Word& w : k2->normal_words(3)) CHECK(k2->normalize(w) == word_poly(w));
}

TEST_CASE("normal forms are confluent: rightmost-first rewriting agrees") {
  std::mt19937_64 rng(17);
  for (auto pres : {presentations::unitary(1), presentations::unitary(2), presentations::free_group(2)}) {
    std::uniform_int_distribution<int> g(0, static_cast<int>(pres->size()) - 1), len(1, 6);
    for (int trial = 0; trial < 300; ++trial) {
      Word w(static_cast<std::size_t>(len(rng)));
      for (int& x : w) x = g(rng);
      CHECK(max_difference(pres->normalize(w), rightmost_normalize(*pres, w)) < 1e-12);
    }
  }
}

TEST_CASE("unitary(2) rewriting on a hand-checked word") {
  auto k2 = presentations::unitary(2);
  // x*_21 x_21 -> 1 - x*_11 x_11
  const Poly n = k2->normalize(k2->parse({"x21*", "x21"}));
  CHECK(n == Poly{{Word{}, 1.0}, {k2->parse({"x11*", "x11"}), -1.0}});
}

TEST_CASE("rewriting step cap reports non-termination") {
  std::vector<GeneratorSymbol> gens{{"x", 0, 0.0, 1}};
  auto bad = std::make_shared<const Presentation>(
      "bad", gens, std::vector<RewriteRule>{{Word{0, 0}, word_poly(Word{0, 0, 0})}}, false, 1000);
  try {
    bad->normalize(Word{0, 0});
    FAIL("expected NonTerminatingRewrite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonTerminatingRewrite);
  }
}

TEST_CASE("nc_multiply examples and mismatch") {
  Algebra t(presentations::free_selfadjoint({"x"}), View::plain);
  const NcPolynomial x{t, word_poly(Word{0})};
  CHECK(nc_multiply(x, x).terms == word_poly(Word{0, 0}));

  Algebra k1(presentations::unitary(1), View::plain);
  const NcPolynomial a{k1, word_poly(Word{1})}, b{k1, word_poly(Word{0})};
  CHECK(nc_multiply(a, b).terms == word_poly(Word{}));

  auto unital_t = std::make_shared<const Presentation>(
      "T1", std::vector<GeneratorSymbol>{{"x", 0, 0.0, 1}}, std::vector<RewriteRule>{}, true);
  Algebra ut(unital_t, View::plain);
  const NcPolynomial p{ut, Poly{{Word{0}, 2.0}, {Word{}, 3.0}}};
  const NcPolynomial q{ut, word_poly(Word{0})};
  CHECK(nc_multiply(p, q).terms == Poly{{Word{0, 0}, 2.0}, {Word{0}, 3.0}});

  try {
    nc_multiply(x, a);
    FAIL("expected AlgebraMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AlgebraMismatch);
  }
}

TEST_CASE("adjoint is an anti-linear involutive anti-homomorphism") {
  auto pres = presentations::free_algebra({"x", "y", "x*", "y*"}, {2, 3, 0, 1});
  Algebra a(pres, View::plain);
  const NcPolynomial ixy{a, word_poly(Word{0, 1}, cplx(0, 1))};
  CHECK(nc_adjoint(ixy).terms == word_poly(Word{3, 2}, cplx(0, -1)));

  Algebra sa(presentations::free_selfadjoint({"x"}), View::plain);
  CHECK(sa.adjoint(Word{0, 0}) == word_poly(Word{0, 0}));

  std::mt19937_64 rng(5);
  for (Algebra alg : {a, Algebra(presentations::unitary(1), View::plain),
                      Algebra(presentations::unitary(1), View::kernel),
                      Algebra(presentations::free_group(2), View::kernel)}) {
    const int gens = static_cast<int>(alg.presentation().size());
    for (int trial = 0; trial < 50; ++trial) {
      Poly p, q;
      for (const auto& [w, c] : random_poly(rng, gens, 3, 3)) add_into(p, alg.element(w), c);
      for (const auto& [w, c] : random_poly(rng, gens, 3, 3)) add_into(q, alg.element(w), c);
      CHECK(max_difference(alg.adjoint(alg.adjoint(p)), p) < 1e-12);
      CHECK(max_difference(alg.adjoint(alg.multiply(p, q)),
                           alg.multiply(alg.adjoint(q), alg.adjoint(p))) < 1e-12);
    }
  }
}

TEST_CASE("kernel view: basis w - delta(w)1 multiplies consistently with the plain view") {
  auto pres = presentations::free_group(1);
  Algebra plain(pres, View::plain), kernel(pres, View::kernel);
  const auto to_plain = [&](const Poly& k) {
    Poly out;
    for (const auto& [w, c] : k) {
      accumulate(out, w, c);
      if (!w.empty()) accumulate(out, Word{}, -c * pres->counit(w));
    }
    return out;
  };
  for (const Word& a : pres->normal_words(3))
    for (const Word& b : pres->normal_words(3)) {
      const Poly lhs = to_plain(kernel.multiply(a, b));
      const Poly rhs = plain.multiply(to_plain(word_poly(a)), to_plain(word_poly(b)));
      CHECK(max_difference(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("fp_embed and fp_multiply follow the concatenate/fuse case split") {
  Algebra t(presentations::free_selfadjoint({"a", "b"}), View::plain);
  const FreeProduct fam = FreeProduct::copies(t, 2);
  const NcPolynomial x{t, word_poly(Word{0})};
  const auto e1 = fp_embed(fam, 0, x);
  CHECK(e1.terms == FpPoly{{AltWord{Leg{0, Word{0}}}, 1.0}});
  const NcPolynomial p{t, Poly{{Word{0, 0}, 1.0}, {Word{0}, 2.0}}};
  CHECK(fp_embed(fam, 1, p).terms ==
        FpPoly{{AltWord{Leg{1, Word{0, 0}}}, 1.0}, {AltWord{Leg{1, Word{0}}}, 2.0}});
  CHECK(fp_embed(fam, 0, NcPolynomial{t, {}}).terms.empty());

  CHECK(fam.multiply(AltWord{Leg{0, Word{0}}}, AltWord{Leg{1, Word{1}}}) ==
        FpPoly{{AltWord{Leg{0, Word{0}}, Leg{1, Word{1}}}, 1.0}});
  CHECK(fam.multiply(AltWord{Leg{0, Word{0}}}, AltWord{Leg{0, Word{1}}}) ==
        FpPoly{{AltWord{Leg{0, Word{0, 1}}}, 1.0}});

  try {
    fp_embed(fam, 2, x);
    FAIL("expected BadComponentIndex");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadComponentIndex);
  }
  const FreeProduct other = FreeProduct::copies(t, 3);
  try {
    fp_multiply(e1, fp_embed(other, 0, x));
    FAIL("expected ComponentFamilyMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ComponentFamilyMismatch);
  }
}

TEST_CASE("fusion to a scalar is absorbed and neighbours re-fuse") {
  auto k1 = presentations::unitary(1);
  Algebra a(k1, View::plain);
  const FreeProduct fam = FreeProduct::copies(a, 2);
  const int x = 0, xs = 1;
  // [(1,x),(2,y)]·[(2,y*)]: y y* = 1 is absorbed, leaving [(1,x)].
  CHECK(fam.multiply(AltWord{Leg{0, Word{x}}, Leg{1, Word{x}}}, AltWord{Leg{1, Word{xs}}}) ==
        FpPoly{{AltWord{Leg{0, Word{x}}}, 1.0}});
  // [(1,x),(2,y)]·[(2,y*),(1,x*)]: cascades down to the unit.
  CHECK(fam.multiply(AltWord{Leg{0, Word{x}}, Leg{1, Word{x}}},
                     AltWord{Leg{1, Word{xs}}, Leg{0, Word{xs}}}) == unit_element());
}

TEST_CASE("fp_multiply is associative (exhaustive to total degree 4)") {
  Algebra a(presentations::free_group(1), View::plain);
  const FreeProduct fam = FreeProduct::copies(a, 2);
  std::vector<AltWord> words{AltWord{}};
  const auto letters = a.presentation().normal_words(2);
  std::vector<AltWord> frontier{AltWord{}};
  for (int round = 0; round < 4; ++round) {
    std::vector<AltWord> next;
    for (const AltWord& w : frontier)
      for (int comp = 0; comp < 2; ++comp) {
        if (!w.empty() && w.back().comp == comp) continue;
        for (const Word& l : letters) {
          int degree = static_cast<int>(l.size());
          for (const Leg& leg : w) degree += static_cast<int>(leg.word.size());
          if (degree > 4) continue;
          AltWord e = w;
          e.push_back(Leg{comp, l});
          next.push_back(e);
        }
      }
    words.insert(words.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  auto degree = [](const AltWord& w) {
    int d = 0;
    for (const Leg& l : w) d += static_cast<int>(l.word.size());
    return d;
  };
  long checked = 0;
  for (const AltWord& u : words)
    for (const AltWord& v : words)
      for (const AltWord& w : words) {
        if (degree(u) + degree(v) + degree(w) > 4) continue;
        const FpPoly left = fam.multiply(fam.multiply(single_word(u), single_word(v)), single_word(w));
        const FpPoly right = fam.multiply(single_word(u), fam.multiply(single_word(v), single_word(w)));
        CHECK(max_difference(left, right) < 1e-12);
        ++checked;
      }
  CHECK(checked > 1000);
}

TEST_CASE("apply_hom realizes j1 ⊔ j2 and j1 ⨿ j2") {
  Algebra t(presentations::free_selfadjoint({"a", "b"}), View::plain);
  const FreeProduct fam = FreeProduct::copies(t, 2);
  const FpPoly ab = single_word(AltWord{Leg{0, Word{0}}, Leg{1, Word{1}}});
  const Poly zero_id = apply_hom(
      t, [&](int k, const Word& w) { return k == 0 ? Poly{} : t.element(w); }, ab);
  CHECK(zero_id.empty());
  const Poly m = apply_hom(t, [&](int, const Word& w) { return t.element(w); }, ab);
  CHECK(m == word_poly(Word{0, 1}));
  const FpPoly id = apply_hom(fam, [&](int k, const Word& w) { return fam.embed(k, w); }, ab);
  CHECK(id == ab);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Poly p = random_poly(rng, 2, 3, 3);
    for (int k = 0; k < 2; ++k) {
      const Poly back = apply_hom(t, [&](int, const Word& w) { return t.element(w); }, fam.embed(k, p));
      CHECK(max_difference(back, p) < 1e-12);
    }
  }
}
