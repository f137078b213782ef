#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dualconv/levy.hpp"

using namespace dualconv;

namespace {

LinearFunctional gaussian() { return gaussian_generator(builtin::primitive(1)->algebra()); }

FpPoly leg_word(std::initializer_list<Leg> legs) { return single_word(AltWord(legs)); }

FockSpec single_mode(FockFlavor flavor, double eta, double rho, cplx psi, int truncation) {
  FockSpec s;
  s.flavor = flavor;
  s.h_dim = 1;
  s.truncation = truncation;
  s.data.h_dim = 1;
  s.data.rho = {CMatrix::Constant(1, 1, rho)};
  s.data.eta = {CVector::Constant(1, eta)};
  s.data.psi = {psi};
  s.adjoint = {0};
  return s;
}

FpPoly random_alt_poly(std::mt19937_64& rng, const std::vector<Word>& words, int comps, int max_legs) {
  FpPoly u;
  for (int t = 0; t < 2; ++t) {
    AltWord w;
    const int legs = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_legs));
    int last = -1;
    for (int l = 0; l < legs; ++l) {
      int comp = static_cast<int>(rng() % static_cast<unsigned>(comps));
      if (comp == last) comp = (comp + 1) % comps;
      w.push_back(Leg{comp, words[rng() % words.size()]});
      last = comp;
    }
    accumulate(u, w, cplx(1.0 + static_cast<double>(t), -0.5));
  }
  return u;
}

}  // namespace

TEST_CASE("time grids") {
  const TimeGrid g({0.0, 0.5, 2.0});
  CHECK(g.increments() == 2);
  CHECK(g.length(1) == 1.5);
  CHECK(TimeGrid({0.0, 2.0}).is_subgrid_of(g));
  CHECK_FALSE(TimeGrid({0.0, 1.0}).is_subgrid_of(g));
  for (const auto& bad : std::vector<std::vector<double>>{{0.0}, {1.0, 0.5}, {-1.0, 1.0}, {0.0, 1.0, 1.0}}) {
    try {
      TimeGrid t(bad);
      FAIL("expected ConfigError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
    }
  }
}

TEST_CASE("joint functional examples") {
  auto prim = builtin::primitive(1);
  const Word x{0}, x2{0, 0}, x4{0, 0, 0, 0};
  const auto psi = LinearFunctional::random(prim->algebra(), 4, true);
  for (ProductKind k : all_product_kinds()) {
    const ConvolutionSemigroup sg(k, prim, psi);
    const TimeGrid sigma({0.0, 0.4, 1.1});
    CHECK(std::abs(joint_functional(sg, sigma, leg_word({Leg{0, x}})) - sg.value(0.4, x)) < 1e-12);
    CHECK(std::abs(joint_functional(sg, sigma, leg_word({Leg{1, x2}})) - sg.value(0.7, x2)) < 1e-12);
    CHECK(std::abs(joint_functional(sg, sigma, leg_word({Leg{0, x}, Leg{1, x2}})) -
                   sg.value(0.4, x) * sg.value(0.7, x2)) < 1e-12);
  }
  const ConvolutionSemigroup g(ProductKind::tensor, prim, gaussian());
  CHECK(std::abs(joint_functional(g, TimeGrid({0.0, 0.5, 1.0}), leg_word({Leg{0, x}, Leg{1, x}}))) < 1e-14);
  const ConvolutionSemigroup f(ProductKind::free, prim, gaussian());
  CHECK(std::abs(joint_functional(f, TimeGrid({0.0, 1.0}), leg_word({Leg{0, x4}})) - 2.0) < 1e-12);
}

TEST_CASE("stationarity: increments depend only on their length") {
  auto dsg = builtin::unitary(1);
  const auto psi = functional_from_triple(random_generator_triple("unitary", 1, 2, 3), 4).psi;
  std::mt19937_64 rng(6);
  const auto words = dsg->presentation().normal_words(2);
  for (ProductKind k : all_product_kinds()) {
    const ConvolutionSemigroup sg(k, dsg, psi);
    for (int trial = 0; trial < 5; ++trial) {
      const FpPoly u = random_alt_poly(rng, words, 2, 3);
      const cplx a = joint_functional(sg, TimeGrid({0.0, 0.3, 0.8}), u);
      const cplx b = joint_functional(sg, TimeGrid({1.0, 1.3, 1.8}), u);
      CHECK(std::abs(a - b) < 1e-12);
    }
  }
}

TEST_CASE("refinement examples") {
  auto prim = builtin::primitive(1);
  const ConvolutionSemigroup sg(ProductKind::tensor, prim, gaussian());
  const TimeGrid sigma({0.0, 1.5}), tau({0.0, 0.4, 1.5});
  const FpPoly w = leg_word({Leg{0, Word{0, 0}}});
  CHECK(std::abs(joint_functional(sg, sigma, w) - 1.5) < 1e-14);
  CHECK(std::abs(joint_functional(sg, tau, refine(*prim, sigma, tau, w)) - 1.5) < 1e-14);
  CHECK(refinement_check(sg, sigma, tau, w).residual < 1e-14);
  CHECK(refine(*prim, tau, tau, leg_word({Leg{0, Word{0}}, Leg{1, Word{0, 0}}})) ==
        leg_word({Leg{0, Word{0}}, Leg{1, Word{0, 0}}}));

  try {
    refine(*prim, tau, TimeGrid({0.0, 0.5, 1.5}), w);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridMismatch);
  }
}

TEST_CASE("refinement consistency and composition, all kinds") {
  std::mt19937_64 rng(12);
  for (const char* name : {"primitive:1", "unitary:1", "freegroup:1"}) {
    auto dsg = builtin::by_name(name);
    const auto psi = std::string(name).rfind("primitive", 0) == 0
                         ? functional_from_gns(dsg->algebra(), random_gns_triple(1, 2, 9))
                         : functional_from_triple(random_generator_triple(name[0] == 'u' ? "unitary" : "freegroup", 1, 2, 9), 4).psi;
    const auto words = dsg->presentation().normal_words(name[0] == 'p' ? 3 : 2);
    const TimeGrid sigma({0.0, 0.5, 1.0}), tau({0.0, 0.2, 0.5, 1.0}), upsilon({0.0, 0.2, 0.5, 0.7, 1.0});
    for (ProductKind k : all_product_kinds()) {
      const ConvolutionSemigroup sg(k, dsg, psi);
      for (int trial = 0; trial < 3; ++trial) {
        const FpPoly u = random_alt_poly(rng, words, 2, 2);
        const RefinementResult r = refinement_check(sg, sigma, tau, upsilon, u);
        CHECK_MESSAGE(r.residual < 1e-10, name, " ", to_string(k));
        CHECK(r.composition_residual < 1e-10);
      }
    }
  }
}

TEST_CASE("weak continuity at zero") {
  auto k1 = builtin::unitary(1);
  const auto psi = functional_from_triple(random_generator_triple("unitary", 1, 1, 2), 4).psi;
  for (ProductKind k : all_product_kinds()) {
    const ConvolutionSemigroup sg(k, k1, psi);
    for (const Word& w : k1->presentation().normal_words(3)) {
      double prev = 1e300;
      for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double v = std::abs(sg.value(h, w));
        CHECK(v <= prev + 1e-15);
        prev = v;
      }
      CHECK(prev < 1e-2);
    }
  }
}

TEST_CASE("Schoenberg correspondence checks") {
  auto prim = builtin::primitive(1);
  for (ProductKind k : all_product_kinds()) {
    const SchoenbergReport r = schoenberg_verify(ConvolutionSemigroup(k, prim, gaussian()), {0.5, 1.0, 2.0}, 4);
    CHECK_MESSAGE(r.pass(), to_string(k));
    CHECK(r.precondition);
  }
  const auto negative = LinearFunctional::from_table(prim->algebra(), {{Word{0, 0}, -1.0}});
  const SchoenbergReport bad = schoenberg_verify(ConvolutionSemigroup(ProductKind::tensor, prim, negative), {1.0}, 4);
  CHECK_FALSE(bad.pass());
  CHECK_FALSE(bad.precondition);
  CHECK_FALSE(bad.precondition_witness.empty());

  auto k2 = builtin::unitary(2);
  const auto psi = functional_from_triple(random_generator_triple("unitary", 2, 1, 4), 2).psi;
  const SchoenbergReport r = schoenberg_verify(ConvolutionSemigroup(ProductKind::free, k2, psi), {0.5, 1.0}, 2);
  CHECK(r.pass());
}

TEST_CASE("exp tables: serial and parallel agree") {
  auto prim = builtin::primitive(2);
  const auto psi = functional_from_gns(prim->algebra(), random_gns_triple(2, 2, 1));
  const ConvolutionSemigroup sg(ProductKind::monotone, prim, psi);
  const auto words = prim->presentation().normal_words(3);
  const std::vector<double> ts{0.1, 0.5, 1.0, 3.0};
  const auto serial = exp_table(sg, ts, words, Execution::serial);
  const auto parallel = exp_table(sg, ts, words, Execution::parallel);
  CHECK(serial == parallel);
  CHECK(serial[2][5] == sg.value(1.0, words[5]));
}

TEST_CASE("Fock space examples") {
  const FockSpec bose = single_mode(FockFlavor::bose, 1.0, 0.0, 0.0, 4);
  CHECK(std::abs(fock_moment(bose, Word{0, 0}, 1.0) - 1.0) < 1e-14);
  CHECK(std::abs(fock_moment(bose, Word{0, 0, 0, 0}, 1.0) - 3.0) < 1e-14);
  const FockSpec full = single_mode(FockFlavor::full, 1.0, 0.0, 0.0, 4);
  CHECK(std::abs(fock_moment(full, Word{0, 0, 0, 0}, 1.0) - 2.0) < 1e-14);
  CHECK(std::abs(fock_moment(single_mode(FockFlavor::full, 1.0, 0.0, 0.0, 6), Word(6, 0), 1.0) - 5.0) < 1e-12);
  const cplx c(0.7, 0.0);
  const FockSpec drift = single_mode(FockFlavor::bose, 0.0, 0.0, c, 3);
  for (int n = 1; n <= 3; ++n)
    CHECK(std::abs(fock_moment(drift, Word(static_cast<std::size_t>(n), 0), 2.0) - std::pow(c * 2.0, n)) < 1e-12);
  try {
    fock_moment(bose, Word(6, 0), 1.0);
    FAIL("expected TruncationTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TruncationTooSmall);
  }
}

TEST_CASE("Fock realizations reproduce the convolution semigroups (bose/tensor, full/free)") {
  for (int gens : {1, 2}) {
    auto prim = builtin::primitive(gens);
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto psi = functional_from_gns(prim->algebra(), random_gns_triple(gens, 2, seed));
      const GnsData gns = gns_construct(psi, 4);
      for (const auto& [flavor, kind] : {std::pair{FockFlavor::bose, ProductKind::tensor},
                                         std::pair{FockFlavor::full, ProductKind::free}}) {
        const FockSpec spec = fock_spec(flavor, gns, prim->presentation(), 4);
        const ConvolutionSemigroup sg(kind, prim, psi);
        for (double t : {0.5, 1.0, 1.7})
          for (const Word& w : prim->presentation().normal_words(4))
            CHECK(std::abs(fock_moment(spec, w, t) - sg.value(t, w)) < 1e-9);
      }
    }
  }
}
