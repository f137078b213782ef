#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualconv/dualsg.hpp"
#include "dualconv/functional.hpp"
#include "dualconv/linalg.hpp"

namespace dualconv {

inline constexpr double kDefaultPsdTolerance = 1e-9;

/// Kernel words of degree <= floor(cap/2): the moment matrix on them then
/// involves moments up to degree cap.
std::vector<Word> moment_basis(const Algebra& algebra, int degree_cap);

struct MomentMatrix {
  std::vector<Word> basis;  // kernel words; the unit row comes first when with_unit
  bool with_unit = false;
  CMatrix entries;
  std::string label(const Presentation& pres, int row) const;
};

enum class Execution { serial, parallel };

/// M_ij = φ~(w_i^* w_j) with φ~(1) = 1.
MomentMatrix moment_matrix(const LinearFunctional& phi, const std::vector<Word>& basis,
                           bool with_unit, Execution exec = Execution::serial);

struct PositivityReport {
  double hermitian_residual = 0.0;
  bool hermitian = true;
  PsdResult psd;
  MomentMatrix matrix;
  std::string witness;  // description of the most negative direction
  bool pass() const { return hermitian && psd.psd; }
};

PositivityReport check_state(const LinearFunctional& phi, int degree_cap,
                             double tol = kDefaultPsdTolerance,
                             Execution exec = Execution::serial);
PositivityReport check_conditionally_positive(const LinearFunctional& psi, int degree_cap,
                                              double tol = kDefaultPsdTolerance,
                                              Execution exec = Execution::serial);
/// PSD test of an explicitly given (Hermitian) moment matrix.
PositivityReport check_moment_matrix(const CMatrix& m, double tol = kDefaultPsdTolerance);

/// Degree-one GNS data (ρ, η, ψ) on the generators of a non-unital free
/// *-algebra: ψ(v1…vn) = <η(v1^*), ρ(v2)…ρ(v_{n-1}) η(vn)> for n >= 2.
struct GnsTriple {
  int h_dim = 0;
  std::vector<CMatrix> rho;
  std::vector<CVector> eta;
  std::vector<cplx> psi;
};

struct GnsData {
  std::vector<Word> basis;
  CMatrix gram;
  int rank = 0;
  CMatrix eta_basis;  // rank x |basis|, column j = η(basis_j)
  GnsTriple triple;   // ρ, η, ψ on generators in the quotient coordinates
  double reconstruction_residual = 0.0;
  double representation_residual = 0.0;
};

/// Rank-revealing GNS factorization on kernel words of degree <= degree_cap.
GnsData gns_construct(const LinearFunctional& psi, int degree_cap,
                      double tol = kDefaultPsdTolerance);

LinearFunctional functional_from_gns(const Algebra& algebra, const GnsTriple& data);

/// Random triple on n self-adjoint generators: ρ Hermitian, ψ real.
GnsTriple random_gns_triple(int generators, int h_dim, std::uint64_t seed);

/// (W, L, G) data of a generator on K<d> or CF_n.
struct GeneratorTriple {
  std::string model;  // "unitary" or "freegroup"
  int size = 1;       // d for unitary, n for freegroup
  int h_dim = 0;
  CMatrix w;                       // unitary: (d·H)x(d·H) with blocks W_kl
  std::vector<CMatrix> w_list;     // freegroup: n unitaries on H
  std::vector<CVector> l;          // unitary: d*d vectors L_kl row-major; freegroup: n vectors
  CMatrix g;                       // unitary: d x d; freegroup: n x 1

  std::string dual_semigroup_name() const;
  /// Residual of G + G^† + L^†L = 0 (the condition making the functional vanish on the relations).
  double constraint_residual() const;
};

/// Throws ConfigError when W is not unitary within 1e-10.
void validate(const GeneratorTriple& triple);

struct TripleFunctional {
  LinearFunctional psi;      // on the kernel algebra of the model
  double relation_residual;  // max |ψ| over sampled relation-ideal elements
  std::string witness;
};

/// ψ from (W, L, G) by the cocycle recursion; RelationInconsistency when
/// the relation-ideal residual exceeds tol.
TripleFunctional functional_from_triple(const GeneratorTriple& triple, int degree_cap = 4,
                                        double tol = 1e-9);

/// Random triple satisfying G + G^† = −L^†L.
GeneratorTriple random_generator_triple(const std::string& model, int size, int h_dim,
                                        std::uint64_t seed);

}  // namespace dualconv
