#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dualconv/dualsg.hpp"

using namespace dualconv;

namespace {

FpPoly leg(int comp, const Word& w, cplx c = 1.0) { return single_word(AltWord{Leg{comp, w}}, c); }

FpPoly sum(std::initializer_list<FpPoly> parts) {
  FpPoly out;
  for (const auto& p : parts) add_into(out, p);
  return out;
}

}  // namespace

TEST_CASE("comultiply examples") {
  auto prim = builtin::primitive(1);
  const Word x{0};
  const FpPoly d = prim->comultiply(Word{0, 0});
  const FpPoly expect = sum({leg(0, {0, 0}), leg(1, {0, 0}),
                             single_word(AltWord{Leg{0, x}, Leg{1, x}}),
                             single_word(AltWord{Leg{1, x}, Leg{0, x}})});
  CHECK(d == expect);

  // K<1> kernel picture: u = x - 1 has Δu = i1(u) + i2(u) + [(1,u),(2,u)].
  auto k1 = builtin::unitary(1);
  CHECK(k1->comultiply(Word{0}) ==
        sum({leg(0, {0}), leg(1, {0}), single_word(AltWord{Leg{0, {0}}, Leg{1, {0}}})}));
  // oracle: unital expansion of (u1 + 1)(u2 + 1) - 1
  const FreeProduct kfam = k1->copies(2);
  FpPoly u1 = leg(0, {0}), u2 = leg(1, {0});
  add_into(u1, unit_element());
  add_into(u2, unit_element());
  FpPoly expanded = kfam.multiply(u1, u2);
  add_into(expanded, unit_element(), -1.0);
  CHECK(max_difference(k1->comultiply(Word{0}), expanded) < 1e-14);

  // CF_1 unital picture: Δ(g^2) = [(1,g),(2,g),(1,g),(2,g)].
  auto f1 = builtin::free_group(1);
  const Word g{0};
  CHECK(f1->comultiply_plain(Word{0, 0}) ==
        single_word(AltWord{Leg{0, g}, Leg{1, g}, Leg{0, g}, Leg{1, g}}));
}

TEST_CASE("comultiply on polynomials checks the algebra") {
  auto prim = builtin::primitive(1);
  auto other = builtin::primitive(2);
  const NcPolynomial p{other->algebra(), Poly{{Word{0}, 1.0}}};
  try {
    comultiply(*prim, p);
    FAIL("expected AlgebraMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AlgebraMismatch);
  }
  const NcPolynomial q{prim->algebra(), Poly{{Word{0}, 2.0}}};
  CHECK(comultiply(*prim, q) == sum({leg(0, {0}, 2.0), leg(1, {0}, 2.0)}));
}

TEST_CASE("iterate_delta: base cases and the primitive n = 3 case") {
  auto prim = builtin::primitive(1);
  const Poly x{{Word{0}, 1.0}};
  CHECK(prim->iterate(0, x).empty());
  CHECK(prim->iterate(1, x) == leg(0, {0}));
  CHECK(prim->iterate(2, x) == prim->comultiply(Word{0}));
  CHECK(prim->iterate(3, x) == sum({leg(0, {0}), leg(1, {0}), leg(2, {0})}));
}

TEST_CASE("iterated comultiplication agrees with the mirrored recursion") {
  for (const char* name : {"primitive:2", "unitary:1", "unitary:2", "freegroup:2"}) {
    auto dsg = builtin::by_name(name);
    const int cap = dsg->presentation().size() > 4 ? 2 : 4;
    for (const Word& w : dsg->presentation().normal_words(cap))
      for (int n = 3; n <= 4; ++n)
        CHECK(max_difference(dsg->iterate(n, Poly{{w, 1.0}}), dsg->iterate_mirrored(n, Poly{{w, 1.0}})) <
              1e-12);
  }
}

TEST_CASE("comultiply is a *-map") {
  std::mt19937_64 rng(9);
  for (const char* name : {"primitive:2", "unitary:2", "freegroup:2"}) {
    auto dsg = builtin::by_name(name);
    const Algebra a = dsg->algebra();
    const FreeProduct fam = dsg->copies(2);
    const auto words = dsg->presentation().normal_words(3);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 30; ++trial) {
      Poly p;
      for (int t = 0; t < 3; ++t) {
        const double re = u(rng);
        accumulate(p, words[pick(rng)], cplx(re, u(rng)));
      }
      CHECK(max_difference(dsg->comultiply(a.adjoint(p)), fam.adjoint(dsg->comultiply(p))) < 1e-12);
    }
  }
}

TEST_CASE("law checks on the built-ins") {
  auto prim = builtin::primitive(1);
  const LawReport r = check_dualsg_laws(*prim, 4);
  CHECK(r.pass());
  CHECK(r.max_residual() == 0.0);
  for (const char* name : {"unitary:1", "unitary:2", "freegroup:2"}) {
    const LawReport rep = check_dualsg_laws(*builtin::by_name(name), name == std::string("unitary:2") ? 2 : 3);
    CHECK(rep.pass());
    CHECK(rep.max_residual() < 1e-12);
  }
}

TEST_CASE("a corrupted comultiplication fails the laws") {
  auto pres = presentations::free_selfadjoint({"x"});
  std::vector<FpPoly> delta{leg(0, {0})};  // drop the i2(x) term
  const DualSemigroup bad("bad", pres, delta);
  const LawReport r = check_dualsg_laws(bad, 2);
  CHECK_FALSE(r.pass());
  CHECK(r.max_residual() > 0.5);
}

TEST_CASE("antipode identities") {
  for (const char* name : {"unitary:1", "unitary:2", "freegroup:1", "freegroup:2", "primitive:1"}) {
    auto dsg = builtin::by_name(name);
    const LawReport r = antipode_check(*dsg, 3);
    CHECK_MESSAGE(r.pass(), name);
  }
  auto k1 = builtin::unitary(1);
  // S x = x*, and (S ⊔ id)Δx = x* x = 1.
  CHECK(k1->antipode(Word{0}) == Poly{{Word{1}, 1.0}});
  auto pres = presentations::free_selfadjoint({"x"});
  const DualSemigroup no_s("no-antipode", pres,
                           std::vector<FpPoly>{sum({leg(0, {0}), leg(1, {0})})});
  try {
    antipode_check(no_s, 2);
    FAIL("expected NoAntipode");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoAntipode);
  }
}

TEST_CASE("registry names") {
  CHECK(builtin::by_name("unitary:2")->name() == "unitary:2");
  CHECK(builtin::by_name("primitive:1") == builtin::by_name("primitive:1"));
  for (const char* bad : {"unitary", "torus:2", "primitive:x"}) {
    try {
      builtin::by_name(bad);
      FAIL("expected ConfigError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
    }
  }
}

TEST_CASE("tensor lift: T(E) is a dual semigroup and M maps it onto E") {
  auto f1 = builtin::free_group(1);
  const TensorLift lift = tensor_lift(f1, 2);
  CHECK(lift.letters.size() == 4);
  CHECK(check_dualsg_laws(*lift.lifted, 2).pass());
  // M is multiplicative on letters
  const Algebra e = f1->algebra();
  CHECK(lift.multiplication(Word{0, 1}, e) == e.multiply(lift.letters[0], lift.letters[1]));
}
