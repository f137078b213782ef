#include "dualconv/levy.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>

namespace dualconv {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw Error(ErrorKind::ConfigError, "a time grid needs at least two points");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] >= 0.0)) throw Error(ErrorKind::ConfigError, "grid times must be non-negative");
    if (i && !(times_[i] > times_[i - 1]))
      throw Error(ErrorKind::ConfigError, "grid times must be strictly increasing");
  }
}

namespace {

int locate(const TimeGrid& grid, double t, double tol) {
  const auto& ts = grid.times();
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(ts[i] - t) <= tol) return static_cast<int>(i);
  return -1;
}

}  // namespace

bool TimeGrid::is_subgrid_of(const TimeGrid& finer, double tol) const {
  return std::all_of(times_.begin(), times_.end(),
                     [&](double t) { return locate(finer, t, tol) >= 0; });
}

cplx joint_functional(const ConvolutionSemigroup& semigroup, const TimeGrid& sigma, const FpPoly& w,
                      Nesting nesting) {
  std::vector<LinearFunctional> phis;
  for (int l = 0; l < sigma.increments(); ++l) phis.push_back(semigroup.at(sigma.length(l)));
  return fold_product(semigroup.kind(), phis, semigroup.dual_semigroup()->copies(sigma.increments()),
                      w, nesting);
}

FpPoly refine(const DualSemigroup& dsg, const TimeGrid& sigma, const TimeGrid& tau, const FpPoly& w) {
  std::vector<int> at;
  for (double t : sigma.times()) {
    const int i = locate(tau, t, 1e-12);
    if (i < 0) throw Error(ErrorKind::GridMismatch, "grid is not a refinement");
    at.push_back(i);
  }
  const FreeProduct target = dsg.copies(tau.increments());
  const Algebra a = dsg.algebra();
  return apply_hom(
      target,
      [&](int l, const Word& v) {
        if (l < 0 || l >= sigma.increments())
          throw Error(ErrorKind::GridMismatch, "leg outside the grid increments");
        const int offset = at[static_cast<std::size_t>(l)];
        const int m = at[static_cast<std::size_t>(l) + 1] - offset;
        return relabel(dsg.iterate(m, a.element(v)), [offset](int c) { return c + offset; });
      },
      w);
}

RefinementResult refinement_check(const ConvolutionSemigroup& semigroup, const TimeGrid& sigma,
                                  const TimeGrid& tau, const FpPoly& w) {
  const DualSemigroup& dsg = *semigroup.dual_semigroup();
  RefinementResult r;
  r.residual = std::abs(joint_functional(semigroup, tau, refine(dsg, sigma, tau, w)) -
                        joint_functional(semigroup, sigma, w));
  return r;
}

RefinementResult refinement_check(const ConvolutionSemigroup& semigroup, const TimeGrid& sigma,
                                  const TimeGrid& tau, const TimeGrid& upsilon, const FpPoly& w) {
  const DualSemigroup& dsg = *semigroup.dual_semigroup();
  RefinementResult r = refinement_check(semigroup, sigma, tau, w);
  const FpPoly fu = refine(dsg, sigma, upsilon, w);
  r.residual = std::max(r.residual, std::abs(joint_functional(semigroup, upsilon, fu) -
                                             joint_functional(semigroup, sigma, w)));
  r.composition_residual = max_difference(refine(dsg, tau, upsilon, refine(dsg, sigma, tau, w)), fu);
  return r;
}

bool SchoenbergReport::pass() const {
  return precondition &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

std::string fmt_time(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

}  // namespace

SchoenbergReport schoenberg_verify(const ConvolutionSemigroup& semigroup,
                                   const std::vector<double>& t_grid, int degree_cap, double tol,
                                   Execution exec) {
  SchoenbergReport report;
  const LinearFunctional& psi = semigroup.generator();
  const PositivityReport cp = check_conditionally_positive(psi, degree_cap, tol, exec);
  report.checks.push_back({"conditionally_positive", cp.psd.min_eigenvalue, cp.psd.tolerance,
                           cp.pass(), cp.witness});
  if (!cp.pass()) {
    report.precondition = false;
    report.precondition_witness =
        cp.hermitian ? cp.witness : "hermitian residual " + std::to_string(cp.hermitian_residual);
    return report;
  }

  std::vector<double> ts = t_grid;
  std::sort(ts.begin(), ts.end());
  for (double t : ts) {
    const PositivityReport st = check_state(semigroup.at(t), degree_cap, tol, exec);
    report.checks.push_back({"state t=" + fmt_time(t), st.psd.min_eigenvalue, st.psd.tolerance,
                             st.psd.psd, st.witness});
    report.checks.push_back({"hermitian t=" + fmt_time(t), st.hermitian_residual, tol, st.hermitian, ""});
  }

  const std::vector<Word> words = psi.domain().presentation().normal_words(degree_cap);
  const DualSemigroupPtr& dsg = semigroup.dual_semigroup();
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double s = ts[i], t = ts[i + 1];
    const LinearFunctional prod = star(semigroup.kind(), dsg, semigroup.at(s), semigroup.at(t));
    const LinearFunctional sum = semigroup.at(s + t);
    double r = 0.0;
    for (const Word& w : words) r = std::max(r, std::abs(prod(w) - sum(w)) / (1.0 + std::abs(sum(w))));
    report.checks.push_back({"semigroup s=" + fmt_time(s) + " t=" + fmt_time(t), r, tol, r <= tol, ""});
  }

  const double h = (ts.empty() || ts.front() <= 0.0 ? 1.0 : ts.front()) * 1e-8;
  const LinearFunctional near = semigroup.at(h);
  double m = 0.0;
  for (const Word& w : words) m = std::max(m, std::abs(near(w)));
  report.checks.push_back({"continuity t=" + fmt_time(h), m, 1e-6, m <= 1e-6, ""});
  return report;
}

std::vector<std::vector<cplx>> exp_table(const ConvolutionSemigroup& semigroup,
                                         const std::vector<double>& ts,
                                         const std::vector<Word>& words, Execution exec) {
  std::vector<std::vector<cplx>> table(ts.size(), std::vector<cplx>(words.size()));
  const int rows = static_cast<int>(ts.size()), cols = static_cast<int>(words.size());
  if (exec == Execution::serial) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            semigroup.value(ts[static_cast<std::size_t>(i)], words[static_cast<std::size_t>(j)]);
    return table;
  }
  // Build the per-word slices once so that threads only share read-only data.
  for (const Word& w : words) semigroup.slice(w);
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for collapse(2) schedule(dynamic)
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      try {
        table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            semigroup.value(ts[static_cast<std::size_t>(i)], words[static_cast<std::size_t>(j)]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  if (failure) std::rethrow_exception(failure);
  return table;
}

FockSpec fock_spec(FockFlavor flavor, const GnsData& gns, const Presentation& pres, int truncation) {
  FockSpec spec;
  spec.flavor = flavor;
  spec.h_dim = gns.rank;
  spec.truncation = truncation;
  spec.data = gns.triple;
  for (int g = 0; g < static_cast<int>(pres.size()); ++g) spec.adjoint.push_back(pres.generator(g).adjoint);
  return spec;
}

namespace {

/// Creation operators a_i^† on the particle-number truncated Fock space.
std::vector<CMatrix> creation_operators(FockFlavor flavor, int h, int m) {
  std::vector<std::vector<int>> states{{}};
  std::map<std::vector<int>, int> index{{{}, 0}};
  std::vector<std::vector<int>> frontier{{}};
  for (int level = 1; level <= m; ++level) {
    std::vector<std::vector<int>> next;
    for (const auto& s : frontier)
      for (int i = 0; i < h; ++i) {
        std::vector<int> e;
        if (flavor == FockFlavor::full) {
          e.push_back(i);
          e.insert(e.end(), s.begin(), s.end());
        } else {
          e = s;
          e.insert(std::upper_bound(e.begin(), e.end(), i), i);
        }
        if (index.count(e)) continue;
        index.emplace(e, static_cast<int>(states.size()));
        states.push_back(e);
        next.push_back(e);
      }
    frontier = std::move(next);
  }
  const int n = static_cast<int>(states.size());
  std::vector<CMatrix> ops(static_cast<std::size_t>(h), CMatrix::Zero(n, n));
  for (int col = 0; col < n; ++col) {
    const auto& s = states[static_cast<std::size_t>(col)];
    if (static_cast<int>(s.size()) >= m) continue;
    for (int i = 0; i < h; ++i) {
      std::vector<int> e;
      double amp = 1.0;
      if (flavor == FockFlavor::full) {
        e.push_back(i);
        e.insert(e.end(), s.begin(), s.end());
      } else {
        e = s;
        e.insert(std::upper_bound(e.begin(), e.end(), i), i);
        amp = std::sqrt(static_cast<double>(std::count(e.begin(), e.end(), i)));
      }
      ops[static_cast<std::size_t>(i)](index.at(e), col) = amp;
    }
  }
  return ops;
}

}  // namespace

cplx fock_moment(const FockSpec& spec, const Word& word, double t) {
  if (static_cast<int>(word.size()) > spec.truncation)
    throw Error(ErrorKind::TruncationTooSmall, "word longer than the particle truncation");
  const int h = spec.h_dim;
  const auto create = creation_operators(spec.flavor, h, spec.truncation);
  const Eigen::Index n = create.empty() ? 1 : create.front().rows();
  const double root = std::sqrt(std::max(t, 0.0));

  std::map<int, CMatrix> pi;
  auto op = [&](int g) -> const CMatrix& {
    if (auto it = pi.find(g); it != pi.end()) return it->second;
    CMatrix m = spec.data.psi.at(static_cast<std::size_t>(g)) * t * CMatrix::Identity(n, n);
    const CVector& eta = spec.data.eta.at(static_cast<std::size_t>(g));
    const CVector& eta_adj = spec.data.eta.at(static_cast<std::size_t>(spec.adjoint.at(static_cast<std::size_t>(g))));
    const CMatrix& rho = spec.data.rho.at(static_cast<std::size_t>(g));
    for (int i = 0; i < h; ++i) {
      const CMatrix& ci = create[static_cast<std::size_t>(i)];
      m += root * eta(i) * ci;
      m += root * std::conj(eta_adj(i)) * ci.adjoint();
      for (int j = 0; j < h; ++j)
        if (rho(i, j) != cplx{}) m += rho(i, j) * ci * create[static_cast<std::size_t>(j)].adjoint();
    }
    return pi.emplace(g, std::move(m)).first->second;
  };

  CVector v = CVector::Zero(n);
  v(0) = 1.0;
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = op(*it) * v;
  return v(0);
}

}  // namespace dualconv
