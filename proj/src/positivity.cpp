#include "dualconv/positivity.hpp"

#include <exception>
#include <mutex>
#include <random>
#include <sstream>

namespace dualconv {

std::vector<Word> moment_basis(const Algebra& algebra, int degree_cap) {
  return algebra.presentation().normal_words(degree_cap / 2);
}

std::string MomentMatrix::label(const Presentation& pres, int row) const {
  if (with_unit) {
    if (row == 0) return "1";
    --row;
  }
  return pres.format(basis.at(static_cast<std::size_t>(row)));
}

namespace {

cplx unital_value(const LinearFunctional& phi, const Poly& p) {
  cplx s{};
  for (const auto& [w, c] : p) s += c * (w.empty() ? cplx{1.0} : phi(w));
  return s;
}

std::string describe_witness(const MomentMatrix& m, const Presentation& pres, const CVector& v) {
  std::ostringstream os;
  bool first = true;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) < 1e-6) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << v(i).real() << (v(i).imag() < 0 ? "-" : "+") << std::abs(v(i).imag()) << "i)"
       << m.label(pres, static_cast<int>(i));
  }
  return first ? "0" : os.str();
}

}  // namespace

MomentMatrix moment_matrix(const LinearFunctional& phi, const std::vector<Word>& basis,
                           bool with_unit, Execution exec) {
  const Algebra& a = phi.domain();
  MomentMatrix m;
  m.basis = basis;
  m.with_unit = with_unit;
  const int offset = with_unit ? 1 : 0;
  const int n = static_cast<int>(basis.size()) + offset;
  m.entries = CMatrix::Zero(n, n);

  auto element = [&](int i) { return i < offset ? Poly{{Word{}, 1.0}} : a.element(basis[static_cast<std::size_t>(i - offset)]); };
  auto entry = [&](int i, int j) {
    return unital_value(phi, a.multiply(a.adjoint(element(i)), element(j)));
  };

  if (exec == Execution::serial) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.entries(i, j) = entry(i, j);
    return m;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for collapse(2) schedule(dynamic)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      try {
        m.entries(i, j) = entry(i, j);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  if (failure) std::rethrow_exception(failure);
  return m;
}

namespace {

PositivityReport positivity(const LinearFunctional& phi, int degree_cap, double tol,
                            Execution exec, bool with_unit) {
  PositivityReport r;
  r.hermitian_residual = hermitian_residual(phi, degree_cap);
  r.hermitian = r.hermitian_residual <= tol;
  r.matrix = moment_matrix(phi, moment_basis(phi.domain(), degree_cap), with_unit, exec);
  r.psd = psd_check(r.matrix.entries, tol);
  if (!r.psd.psd)
    r.witness = describe_witness(r.matrix, phi.domain().presentation(), r.psd.witness);
  return r;
}

}  // namespace

PositivityReport check_state(const LinearFunctional& phi, int degree_cap, double tol,
                             Execution exec) {
  return positivity(phi, degree_cap, tol, exec, true);
}

PositivityReport check_conditionally_positive(const LinearFunctional& psi, int degree_cap,
                                              double tol, Execution exec) {
  return positivity(psi, degree_cap, tol, exec, false);
}

PositivityReport check_moment_matrix(const CMatrix& m, double tol) {
  PositivityReport r;
  r.hermitian_residual = hermitian_defect(m);
  r.hermitian = r.hermitian_residual <= tol;
  r.matrix.entries = m;
  r.psd = psd_check(m, tol);
  if (!r.psd.psd) {
    std::ostringstream os;
    os << "eigenvector";
    for (Eigen::Index i = 0; i < r.psd.witness.size(); ++i) os << " " << r.psd.witness(i).real();
    r.witness = os.str();
  }
  return r;
}

GnsData gns_construct(const LinearFunctional& psi, int degree_cap, double tol) {
  const Algebra& a = psi.domain();
  const Presentation& pres = a.presentation();
  GnsData data;
  data.basis = pres.normal_words(degree_cap);
  const int n = static_cast<int>(data.basis.size());

  const double herm = hermitian_residual(psi, std::max(1, 2 * degree_cap));
  if (herm > tol)
    throw Error(ErrorKind::NotConditionallyPositive,
                "generator is not hermitian (residual " + std::to_string(herm) + ")");
  data.gram = moment_matrix(psi, data.basis, false).entries;
  const PsdResult psd = psd_check(data.gram, tol);
  if (!psd.psd)
    throw Error(ErrorKind::NotConditionallyPositive,
                "Gram matrix has eigenvalue " + std::to_string(psd.min_eigenvalue));

  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (data.gram + data.gram.adjoint()));
  const Eigen::VectorXd lambda = solver.eigenvalues();
  const double cut = tol * std::max(1.0, lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > cut) keep.push_back(i);
  data.rank = static_cast<int>(keep.size());

  CMatrix u(n, data.rank);
  Eigen::VectorXd sqrt_l(data.rank), inv_sqrt_l(data.rank);
  for (int k = 0; k < data.rank; ++k) {
    u.col(k) = solver.eigenvectors().col(keep[static_cast<std::size_t>(k)]);
    sqrt_l(k) = std::sqrt(lambda(keep[static_cast<std::size_t>(k)]));
    inv_sqrt_l(k) = 1.0 / sqrt_l(k);
  }
  data.eta_basis = sqrt_l.asDiagonal() * u.adjoint();
  if (n > 0) data.reconstruction_residual = (data.eta_basis.adjoint() * data.eta_basis - data.gram).cwiseAbs().maxCoeff();

  std::map<Word, int> index;
  for (int j = 0; j < n; ++j) index[data.basis[static_cast<std::size_t>(j)]] = j;

  GnsTriple& t = data.triple;
  t.h_dim = data.rank;
  for (int g = 0; g < static_cast<int>(pres.size()); ++g) {
    CMatrix k(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Poly left = a.multiply(a.adjoint(data.basis[static_cast<std::size_t>(i)]), a.generator(g));
        k(i, j) = psi(a.multiply(left, a.element(data.basis[static_cast<std::size_t>(j)])));
      }
    t.rho.push_back(inv_sqrt_l.asDiagonal() * u.adjoint() * k * u * inv_sqrt_l.asDiagonal());
    auto it = index.find(Word{g});
    t.eta.push_back(it == index.end() ? CVector(CVector::Zero(data.rank))
                                      : CVector(data.eta_basis.col(it->second)));
    t.psi.push_back(psi(Word{g}));

    for (int j = 0; j < n; ++j) {
      const Poly prod = a.multiply(a.generator(g), a.element(data.basis[static_cast<std::size_t>(j)]));
      CVector target = CVector::Zero(data.rank);
      bool inside = true;
      for (const auto& [w, c] : prod) {
        auto jt = index.find(w);
        if (jt == index.end()) {
          inside = false;
          break;
        }
        target += c * data.eta_basis.col(jt->second);
      }
      if (!inside || data.rank == 0) continue;
      const double r = (t.rho.back() * data.eta_basis.col(j) - target).cwiseAbs().maxCoeff();
      data.representation_residual = std::max(data.representation_residual, r);
    }
  }
  return data;
}

LinearFunctional functional_from_gns(const Algebra& algebra, const GnsTriple& data) {
  const Presentation& pres = algebra.presentation();
  if (data.rho.size() != pres.size() || data.eta.size() != pres.size() ||
      data.psi.size() != pres.size())
    throw Error(ErrorKind::ConfigError, "GNS data must be given on every generator");
  std::vector<int> adjoint;
  for (int g = 0; g < static_cast<int>(pres.size()); ++g) adjoint.push_back(pres.generator(g).adjoint);
  return LinearFunctional(
      algebra,
      [data, adjoint](const Word& w) -> cplx {
        if (w.empty()) return 0.0;
        if (w.size() == 1) return data.psi[static_cast<std::size_t>(w[0])];
        CVector v = data.eta[static_cast<std::size_t>(w.back())];
        for (std::size_t i = w.size() - 1; i-- > 1;) v = data.rho[static_cast<std::size_t>(w[i])] * v;
        return data.eta[static_cast<std::size_t>(adjoint[static_cast<std::size_t>(w[0])])].dot(v);
      },
      "gns");
}

namespace {

CMatrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = n(rng);
      m(i, j) = cplx(re, n(rng));
    }
  return m;
}

CMatrix random_unitary(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, n, n));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

}  // namespace

GnsTriple random_gns_triple(int generators, int h_dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  GnsTriple t;
  t.h_dim = h_dim;
  for (int g = 0; g < generators; ++g) {
    const CMatrix m = random_matrix(rng, h_dim, h_dim);
    t.rho.push_back(0.25 * (m + m.adjoint()));
    t.eta.push_back(random_matrix(rng, h_dim, 1).col(0) * 0.5);
    t.psi.push_back(n(rng) * 0.5);
  }
  return t;
}

std::string GeneratorTriple::dual_semigroup_name() const {
  return (model == "unitary" ? "unitary:" : "freegroup:") + std::to_string(size);
}

double GeneratorTriple::constraint_residual() const {
  if (model == "unitary") {
    CMatrix ltl(size, size);
    for (int k = 0; k < size; ++k)
      for (int l = 0; l < size; ++l) {
        cplx s{};
        for (int n = 0; n < size; ++n)
          s += this->l[static_cast<std::size_t>(n * size + k)].dot(this->l[static_cast<std::size_t>(n * size + l)]);
        ltl(k, l) = s;
      }
    return (g + g.adjoint() + ltl).cwiseAbs().maxCoeff();
  }
  double r = 0.0;
  for (int i = 0; i < size; ++i)
    r = std::max(r, std::abs(2.0 * g(i, 0).real() + l[static_cast<std::size_t>(i)].squaredNorm()));
  return r;
}

void validate(const GeneratorTriple& t) {
  if (t.model != "unitary" && t.model != "freegroup")
    throw Error(ErrorKind::ConfigError, "triple model must be unitary or freegroup");
  if (t.size < 1 || t.h_dim < 0) throw Error(ErrorKind::ConfigError, "bad triple dimensions");
  const int h = t.h_dim;
  auto check_unitary = [](const CMatrix& u, const std::string& what) {
    if (u.rows() != u.cols()) throw Error(ErrorKind::ConfigError, what + " is not square");
    if (u.rows() == 0) return;
    const double r = (u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    const double r2 = (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (std::max(r, r2) > 1e-10) throw Error(ErrorKind::ConfigError, what + " is not unitary");
  };
  if (t.model == "unitary") {
    const int d = t.size;
    if (t.w.rows() != d * h || t.w.cols() != d * h)
      throw Error(ErrorKind::ConfigError, "W must be (d*H_dim) x (d*H_dim)");
    check_unitary(t.w, "W");
    if (static_cast<int>(t.l.size()) != d * d) throw Error(ErrorKind::ConfigError, "L must be d x d");
    if (t.g.rows() != d || t.g.cols() != d) throw Error(ErrorKind::ConfigError, "G must be d x d");
  } else {
    const int n = t.size;
    if (static_cast<int>(t.w_list.size()) != n) throw Error(ErrorKind::ConfigError, "W needs n unitaries");
    for (const auto& u : t.w_list) {
      if (u.rows() != h) throw Error(ErrorKind::ConfigError, "W entries must be H_dim x H_dim");
      check_unitary(u, "W");
    }
    if (static_cast<int>(t.l.size()) != n) throw Error(ErrorKind::ConfigError, "L needs n vectors");
    if (t.g.rows() != n || t.g.cols() != 1) throw Error(ErrorKind::ConfigError, "G needs n entries");
  }
  for (const auto& v : t.l)
    if (v.size() != h) throw Error(ErrorKind::ConfigError, "L entries must have length H_dim");
}

namespace {

/// Degree-one data (ρ, η, ψ, δ) on every generator of the model's presentation.
struct LetterData {
  std::vector<CMatrix> rho;
  std::vector<CVector> eta;
  std::vector<cplx> psi;
};

LetterData letters_from_triple(const GeneratorTriple& t, const Presentation& pres) {
  LetterData data;
  const int h = t.h_dim;
  data.rho.resize(pres.size());
  data.eta.resize(pres.size());
  data.psi.resize(pres.size());
  if (t.model == "unitary") {
    const int d = t.size, dd = d * d;
    auto block = [&](int k, int l) { return CMatrix(t.w.block(k * h, l * h, h, h)); };
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        const int x = k * d + l, xs = dd + k * d + l;
        data.rho[x] = block(k, l);
        data.rho[xs] = block(k, l).adjoint();
        data.eta[x] = t.l[static_cast<std::size_t>(x)];
        CVector e = CVector::Zero(h);
        for (int n = 0; n < d; ++n) e -= block(n, l).adjoint() * t.l[static_cast<std::size_t>(n * d + k)];
        data.eta[xs] = e;
        data.psi[x] = t.g(k, l);
        data.psi[xs] = std::conj(t.g(k, l));
      }
  } else {
    for (int i = 0; i < t.size; ++i) {
      const CMatrix& u = t.w_list[static_cast<std::size_t>(i)];
      data.rho[2 * i] = u;
      data.rho[2 * i + 1] = u.adjoint();
      data.eta[2 * i] = t.l[static_cast<std::size_t>(i)];
      data.eta[2 * i + 1] = -(u.adjoint() * t.l[static_cast<std::size_t>(i)]);
      data.psi[2 * i] = t.g(i, 0);
      data.psi[2 * i + 1] = std::conj(t.g(i, 0));
    }
  }
  return data;
}

/// Cocycle recursion on arbitrary (not necessarily normal) letter sequences:
/// η(vw) = ρ(v)η(w) + η(v)δ(w), ψ(vw) = <η(v^*), η(w)> + ψ(v)δ(w) + δ(v)ψ(w).
class CocycleEvaluator {
 public:
  CocycleEvaluator(LetterData data, std::shared_ptr<const Presentation> pres)
      : data_(std::move(data)), pres_(std::move(pres)) {}

  cplx psi(const Word& w) {
    std::lock_guard lock(mutex_);
    return psi_locked(w);
  }

 private:
  cplx counit(const Word& w) const { return pres_->counit(w); }

  const CVector& eta(const Word& w) {
    if (auto it = eta_memo_.find(w); it != eta_memo_.end()) return it->second;
    CVector v;
    if (w.empty()) {
      v = CVector::Zero(data_.rho.empty() ? 0 : data_.rho[0].rows());
    } else if (w.size() == 1) {
      v = data_.eta[static_cast<std::size_t>(w[0])];
    } else {
      const Word rest(w.begin() + 1, w.end());
      v = data_.rho[static_cast<std::size_t>(w[0])] * eta(rest) +
          data_.eta[static_cast<std::size_t>(w[0])] * counit(rest);
    }
    return eta_memo_.emplace(w, std::move(v)).first->second;
  }

  cplx psi_locked(const Word& w) {
    if (auto it = psi_memo_.find(w); it != psi_memo_.end()) return it->second;
    cplx v{};
    if (w.size() == 1) {
      v = data_.psi[static_cast<std::size_t>(w[0])];
    } else if (w.size() > 1) {
      const int first = w[0];
      const Word rest(w.begin() + 1, w.end());
      const int adj = pres_->generator(first).adjoint;
      v = data_.eta[static_cast<std::size_t>(adj)].dot(eta(rest)) +
          data_.psi[static_cast<std::size_t>(first)] * counit(rest) +
          pres_->generator(first).counit * psi_locked(rest);
    }
    return psi_memo_.emplace(w, v).first->second;
  }

  LetterData data_;
  std::shared_ptr<const Presentation> pres_;
  std::mutex mutex_;
  std::map<Word, CVector> eta_memo_;
  std::map<Word, cplx> psi_memo_;
};

}  // namespace

TripleFunctional functional_from_triple(const GeneratorTriple& triple, int degree_cap, double tol) {
  validate(triple);
  const DualSemigroupPtr dsg = builtin::by_name(triple.dual_semigroup_name());
  const Presentation& pres = dsg->presentation();
  auto eval = std::make_shared<CocycleEvaluator>(letters_from_triple(triple, pres),
                                                 dsg->presentation_ptr());
  TripleFunctional out{LinearFunctional(
                           dsg->algebra(), [eval](const Word& w) { return eval->psi(w); },
                           "triple"),
                       0.0, ""};

  // ψ must vanish on u·(lhs − rhs)·v for every rewrite rule.
  const int outer = std::max(0, degree_cap - 2);
  std::vector<Word> context{Word{}};
  for (const Word& w : pres.normal_words(outer)) context.push_back(w);
  for (const auto& rule : pres.rules())
    for (const Word& u : context)
      for (const Word& v : context) {
        if (static_cast<int>(u.size() + v.size() + rule.lhs.size()) > degree_cap) continue;
        cplx r = eval->psi(concat(concat(u, rule.lhs), v));
        for (const auto& [w, c] : rule.rhs) r -= c * eval->psi(concat(concat(u, w), v));
        if (std::abs(r) > out.relation_residual) {
          out.relation_residual = std::abs(r);
          out.witness = pres.format(concat(concat(u, rule.lhs), v));
        }
      }
  if (out.relation_residual > tol)
    throw Error(ErrorKind::RelationInconsistency,
                "generator does not vanish on the relations (residual " +
                    std::to_string(out.relation_residual) + " at " + out.witness + ")");
  return out;
}

GeneratorTriple random_generator_triple(const std::string& model, int size, int h_dim,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  GeneratorTriple t;
  t.model = model;
  t.size = size;
  t.h_dim = h_dim;
  if (model == "unitary") {
    t.w = random_unitary(rng, size * h_dim);
    for (int i = 0; i < size * size; ++i) t.l.push_back(0.5 * random_matrix(rng, h_dim, 1).col(0));
    CMatrix ltl(size, size);
    for (int k = 0; k < size; ++k)
      for (int l = 0; l < size; ++l) {
        cplx s{};
        for (int m = 0; m < size; ++m)
          s += t.l[static_cast<std::size_t>(m * size + k)].dot(t.l[static_cast<std::size_t>(m * size + l)]);
        ltl(k, l) = s;
      }
    const CMatrix k = random_matrix(rng, size, size);
    t.g = -0.5 * ltl + cplx(0, 0.25) * (k + k.adjoint());
  } else if (model == "freegroup") {
    t.g = CMatrix(size, 1);
    for (int i = 0; i < size; ++i) {
      t.w_list.push_back(random_unitary(rng, h_dim));
      t.l.push_back(0.5 * random_matrix(rng, h_dim, 1).col(0));
      t.g(i, 0) = cplx(-0.5 * t.l.back().squaredNorm(), 0.5 * n(rng));
    }
  } else {
    throw Error(ErrorKind::ConfigError, "unknown triple model '" + model + "'");
  }
  return t;
}

}  // namespace dualconv
