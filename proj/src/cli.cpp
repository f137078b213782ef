#include "dualconv/cli.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "dualconv/levy.hpp"

namespace dualconv::cli {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

cplx parse_complex(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  config_error("expected a number or [re, im], got " + j.dump());
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

CVector parse_vector(const json& j, int expected) {
  if (!j.is_array()) config_error("expected a vector, got " + j.dump());
  if (expected >= 0 && static_cast<int>(j.size()) != expected)
    config_error("vector of length " + std::to_string(expected) + " expected");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i]);
  return v;
}

CMatrix parse_matrix(const json& j, int rows, int cols) {
  if (!j.is_array()) config_error("expected a matrix (array of rows)");
  if (rows >= 0 && static_cast<int>(j.size()) != rows)
    config_error("matrix with " + std::to_string(rows) + " rows expected");
  const int r = static_cast<int>(j.size());
  const int c = r ? static_cast<int>(j[0].size()) : std::max(cols, 0);
  if (cols >= 0 && r && c != cols) config_error("matrix with " + std::to_string(cols) + " columns expected");
  CMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_array() || static_cast<int>(j[static_cast<std::size_t>(i)].size()) != c)
      config_error("ragged matrix");
    for (int k = 0; k < c; ++k)
      m(i, k) = parse_complex(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
  }
  return m;
}

Word parse_names(const Presentation& pres, const json& j) {
  if (j.is_string()) {
    std::istringstream is(j.get<std::string>());
    std::vector<std::string> names;
    for (std::string s; is >> s;) names.push_back(s);
    return pres.parse(names);
  }
  if (!j.is_array()) config_error("a word is an array of generator names");
  std::vector<std::string> names;
  for (const auto& n : j) {
    if (!n.is_string()) config_error("generator names must be strings");
    names.push_back(n.get<std::string>());
  }
  return pres.parse(names);
}

/// A configured word must be a nonempty normal word (a kernel basis label).
Word parse_normal_word(const Presentation& pres, const json& j) {
  const Word w = parse_names(pres, j);
  if (w.empty()) config_error("words must be nonempty");
  if (!pres.is_normal(w))
    config_error("word '" + pres.format(w) + "' is not in normal form; normal form is " +
                 [&] {
                   std::ostringstream os;
                   for (const auto& [u, c] : pres.normalize(w)) os << " " << c << "*[" << pres.format(u) << "]";
                   return os.str();
                 }());
  return w;
}

struct Job {
  std::string command;
  json config;
  DualSemigroupPtr dsg;
  ProductKind kind = ProductKind::tensor;
  std::optional<LinearFunctional> psi;
  int degree_cap = 4;
  double tol = kDefaultPsdTolerance;
  std::vector<double> t_grid{0.25, 0.5, 1.0, 2.0};
  std::vector<Word> words;
  std::uint64_t seed = 0;
  bool csv = false;
};

GeneratorTriple parse_triple(const json& j) {
  GeneratorTriple t;
  t.model = j.value("model", std::string{});
  if (t.model != "unitary" && t.model != "freegroup") config_error("triple model must be unitary or freegroup");
  t.size = j.contains("d") ? j["d"].get<int>() : j.value("n", 0);
  if (t.size < 1) config_error("triple needs d (unitary) or n (freegroup) >= 1");
  t.h_dim = j.at("H_dim").get<int>();
  const int h = t.h_dim;
  if (t.model == "unitary") {
    const int d = t.size;
    t.w = parse_matrix(j.at("W"), d * h, d * h);
    const json& l = j.at("L");
    if (!l.is_array() || static_cast<int>(l.size()) != d) config_error("L must be a d x d array of vectors");
    for (const auto& row : l) {
      if (!row.is_array() || static_cast<int>(row.size()) != d) config_error("L must be a d x d array of vectors");
      for (const auto& v : row) t.l.push_back(parse_vector(v, h));
    }
    t.g = parse_matrix(j.at("G"), d, d);
  } else {
    const int n = t.size;
    const json& w = j.at("W");
    if (!w.is_array() || static_cast<int>(w.size()) != n) config_error("W must list n unitaries");
    for (const auto& m : w) t.w_list.push_back(parse_matrix(m, h, h));
    const json& l = j.at("L");
    if (!l.is_array() || static_cast<int>(l.size()) != n) config_error("L must list n vectors");
    for (const auto& v : l) t.l.push_back(parse_vector(v, h));
    const CVector g = parse_vector(j.at("G"), n);
    t.g = g;
  }
  validate(t);
  return t;
}

LinearFunctional parse_generator(const Job& job, const json& g) {
  const Algebra a = job.dsg->algebra();
  const Presentation& pres = job.dsg->presentation();
  if (g.is_string()) {
    if (g.get<std::string>() != "gaussian") config_error("unknown generator preset '" + g.get<std::string>() + "'");
    if (pres.size() != 1 || pres.unital()) config_error("the gaussian preset needs primitive:1");
    return gaussian_generator(a);
  }
  if (!g.is_object()) config_error("generator must be an object");
  if (g.contains("table")) {
    std::map<Word, cplx> table;
    const json& t = g["table"];
    auto add = [&](const json& word, const json& value) {
      const Word w = parse_normal_word(pres, word);
      table[w] += parse_complex(value);
    };
    if (t.is_object()) {
      for (auto it = t.begin(); it != t.end(); ++it) add(json(it.key()), it.value());
    } else if (t.is_array()) {
      for (const auto& e : t) add(e.at("word"), e.at("value"));
    } else {
      config_error("table must be an object or an array of {word, value}");
    }
    return LinearFunctional::from_table(a, std::move(table), "table");
  }
  if (g.contains("triple")) {
    const GeneratorTriple t = parse_triple(g["triple"]);
    if (t.dual_semigroup_name() != job.dsg->name())
      config_error("triple model " + t.dual_semigroup_name() + " does not match dualsemigroup " + job.dsg->name());
    return functional_from_triple(t, job.degree_cap, std::max(job.tol, 1e-9)).psi;
  }
  if (g.contains("gns")) {
    const json& d = g["gns"];
    if (pres.unital() || !pres.rules().empty()) config_error("gns generators need a primitive dual semigroup");
    GnsTriple data;
    if (d.value("random", false)) {
      data = random_gns_triple(static_cast<int>(pres.size()), d.value("H_dim", 2), d.value("seed", job.seed));
    } else {
      data.h_dim = d.at("H_dim").get<int>();
      const int n = static_cast<int>(pres.size());
      const json& rho = d.at("rho");
      const json& eta = d.at("eta");
      const json& psi = d.at("psi");
      if (!rho.is_array() || !eta.is_array() || !psi.is_array() || static_cast<int>(rho.size()) != n ||
          static_cast<int>(eta.size()) != n || static_cast<int>(psi.size()) != n)
        config_error("gns data needs rho, eta, psi for every generator");
      for (int i = 0; i < n; ++i) {
        data.rho.push_back(parse_matrix(rho[static_cast<std::size_t>(i)], data.h_dim, data.h_dim));
        data.eta.push_back(parse_vector(eta[static_cast<std::size_t>(i)], data.h_dim));
        data.psi.push_back(parse_complex(psi[static_cast<std::size_t>(i)]));
      }
    }
    return functional_from_gns(a, data);
  }
  config_error("generator needs one of table, triple, gns");
}

Job make_job(const Options& options) {
  Job job;
  job.command = options.command;
  job.config = options.config;
  job.csv = options.csv;
  const json& c = job.config;
  if (!c.is_object()) config_error("configuration must be a JSON object");
  if (options.seed) job.config["seed"] = *options.seed;
  if (options.degree) job.config["degree_cap"] = *options.degree;
  if (options.tol) job.config["tolerance"] = *options.tol;

  job.seed = c.value("seed", std::uint64_t{0});
  job.degree_cap = c.value("degree_cap", 4);
  job.tol = c.value("tolerance", kDefaultPsdTolerance);
  if (job.degree_cap < 1) config_error("degree_cap must be >= 1");
  if (!(job.tol > 0.0)) config_error("tolerance must be positive");
  if (c.contains("t_grid")) job.t_grid = c["t_grid"].get<std::vector<double>>();
  job.dsg = builtin::by_name(c.value("dualsemigroup", std::string("primitive:1")));
  job.kind = parse_product_kind(c.value("product", std::string("tensor")));
  if (c.contains("generator")) job.psi = parse_generator(job, c["generator"]);
  if (c.contains("words")) {
    for (const auto& w : c["words"]) job.words.push_back(parse_normal_word(job.dsg->presentation(), w));
  } else {
    job.words = job.dsg->presentation().normal_words(std::min(job.degree_cap, 4));
  }
  return job;
}

const LinearFunctional& require_generator(const Job& job) {
  if (!job.psi) config_error("command '" + job.command + "' needs a generator");
  return *job.psi;
}

json check_json(const CheckResult& c) {
  json j{{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}};
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

struct Result {
  std::vector<CheckResult> checks;
  json data = json::object();
  std::string csv;
  bool always_exit_zero = false;
};

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string matrix_csv(const MomentMatrix& m, const Presentation& pres) {
  std::ostringstream os;
  const int n = static_cast<int>(m.entries.rows());
  os << "row";
  for (int j = 0; j < n; ++j) os << "," << (pres.size() ? m.label(pres, j) : std::to_string(j));
  os << "\n";
  for (int i = 0; i < n; ++i) {
    os << (pres.size() ? m.label(pres, i) : std::to_string(i));
    for (int j = 0; j < n; ++j) {
      const cplx v = m.entries(i, j);
      os << "," << csv_number(v.real());
      if (v.imag() != 0.0) os << (v.imag() < 0 ? "" : "+") << csv_number(v.imag()) << "i";
    }
    os << "\n";
  }
  return os.str();
}

json positivity_json(const PositivityReport& r, const Presentation* pres) {
  json basis = json::array();
  if (pres)
    for (int i = 0; i < r.matrix.entries.rows(); ++i) basis.push_back(r.matrix.label(*pres, i));
  return {{"min_eigenvalue", r.psd.min_eigenvalue},
          {"hermitian_residual", r.hermitian_residual},
          {"basis", basis},
          {"witness", r.witness}};
}

Result cmd_exp(const Job& job) {
  Result r;
  const ConvolutionSemigroup sg(job.kind, job.dsg, require_generator(job));
  const Presentation& pres = job.dsg->presentation();
  std::vector<double> ts = job.t_grid;
  const auto table = exp_table(sg, ts, job.words, Execution::parallel);
  json rows = json::array();
  std::ostringstream csv;
  csv << "t,word,re,im\n";
  bool negative = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    negative = negative || ts[i] < 0.0;
    for (std::size_t j = 0; j < job.words.size(); ++j) {
      const cplx v = table[i][j] + pres.counit(job.words[j]);
      rows.push_back({{"t", ts[i]}, {"word", pres.format(job.words[j])}, {"value", complex_json(v)}});
      csv << csv_number(ts[i]) << "," << pres.format(job.words[j]) << "," << csv_number(v.real()) << ","
          << csv_number(v.imag()) << "\n";
    }
  }
  double at_zero = 0.0;
  for (const Word& w : job.words) at_zero = std::max(at_zero, std::abs(sg.value(0.0, w)));
  r.checks.push_back({"exp(0) = counit", at_zero, 0.0, at_zero == 0.0, ""});
  for (double t : ts) {
    double h = 0.0;
    const LinearFunctional phi = sg.at(t);
    for (const Word& w : job.words) {
      const Poly adj = job.dsg->algebra().adjoint(w);
      h = std::max(h, std::abs(phi(adj) - std::conj(phi(w))));
    }
    const bool hermitian_generator = hermitian_residual(sg.generator(), job.degree_cap) <= job.tol;
    if (hermitian_generator)
      r.checks.push_back({"hermitian t=" + csv_number(t), h, job.tol, h <= job.tol, ""});
  }
  r.data["table"] = rows;
  if (negative) r.data["warning"] = "negative times: positivity is only claimed for t >= 0";
  r.csv = csv.str();
  return r;
}

Result cmd_check(const Job& job, bool state) {
  Result r;
  r.always_exit_zero = true;
  PositivityReport rep;
  const Presentation* pres = &job.dsg->presentation();
  if (state && job.config.contains("moment_matrix")) {
    rep = check_moment_matrix(parse_matrix(job.config["moment_matrix"], -1, -1), job.tol);
    pres = nullptr;
  } else if (state) {
    rep = check_state(require_generator(job), job.degree_cap, job.tol, Execution::parallel);
  } else {
    rep = check_conditionally_positive(require_generator(job), job.degree_cap, job.tol, Execution::parallel);
  }
  r.checks.push_back({"hermitian", rep.hermitian_residual, job.tol, rep.hermitian, ""});
  r.checks.push_back({state ? "state (moment matrix PSD)" : "conditionally positive (kernel moment matrix PSD)",
                      rep.psd.min_eigenvalue, rep.psd.tolerance, rep.psd.psd, rep.witness});
  r.data = positivity_json(rep, pres);
  if (pres) {
    r.csv = matrix_csv(rep.matrix, *pres);
  } else {
    std::ostringstream os;
    for (int i = 0; i < rep.matrix.entries.rows(); ++i) {
      for (int j = 0; j < rep.matrix.entries.cols(); ++j)
        os << (j ? "," : "") << csv_number(rep.matrix.entries(i, j).real());
      os << "\n";
    }
    r.csv = os.str();
  }
  return r;
}

Result cmd_schoenberg(const Job& job) {
  Result r;
  const ConvolutionSemigroup sg(job.kind, job.dsg, require_generator(job));
  const SchoenbergReport rep = schoenberg_verify(sg, job.t_grid, job.degree_cap, job.tol, Execution::parallel);
  r.checks = rep.checks;
  r.data["precondition"] = rep.precondition;
  if (!rep.precondition) r.data["precondition_witness"] = rep.precondition_witness;
  return r;
}

/// Order observed between the two finest step counts: log(e_a / e_b) / log(b / a).
double observed_order(const std::vector<int>& ns, const std::vector<double>& errors) {
  const std::size_t k = ns.size();
  return std::log(errors[k - 2] / errors[k - 1]) /
         std::log(static_cast<double>(ns[k - 1]) / static_cast<double>(ns[k - 2]));
}

Result cmd_trotter(const Job& job) {
  Result r;
  const LinearFunctional& psi = require_generator(job);
  const json opts = job.config.value("trotter", json::object());
  const double t = opts.value("t", 1.0);
  const std::vector<int> ns = opts.value("n", std::vector<int>{2, 4, 8, 16});
  if (ns.empty()) config_error("trotter needs at least one n");
  for (std::size_t i = 0; i < ns.size(); ++i)
    if (ns[i] < 1 || (i && ns[i] <= ns[i - 1]))
      config_error("trotter step counts must be positive and increasing");
  const Presentation& pres = job.dsg->presentation();
  const Word w = opts.contains("word") ? parse_normal_word(pres, opts["word"]) : job.words.back();
  const ConvolutionSemigroup sg(job.kind, job.dsg, psi);
  const cplx exact = sg.value(t, w);

  std::optional<LinearFunctional> base_perturbation;
  if (opts.contains("perturbation")) {
    Job sub = job;
    base_perturbation = parse_generator(sub, json{{"table", opts["perturbation"]}});
  }
  json rows = json::array();
  std::ostringstream csv;
  csv << "n,re,im,error\n";
  std::vector<int> used;
  std::vector<double> errors;
  for (int n : ns) {
    std::optional<LinearFunctional> rn;
    if (base_perturbation) rn = base_perturbation->scaled(1.0 / (static_cast<double>(n) * n));
    const cplx v = trotter_exp(job.kind, job.dsg, psi, t, n, Poly{{w, 1.0}}, rn);
    const double err = std::abs(v - exact);
    rows.push_back({{"n", n}, {"value", complex_json(v)}, {"error", err}, {"n_times_error", n * err}});
    csv << n << "," << csv_number(v.real()) << "," << csv_number(v.imag()) << "," << csv_number(err) << "\n";
    if (err > 1e-13) {
      used.push_back(n);
      errors.push_back(err);
    }
  }
  r.data["word"] = pres.format(w);
  r.data["t"] = t;
  r.data["limit"] = complex_json(exact);
  r.data["table"] = rows;
  const double min_order = opts.value("min_order", 1.0);
  if (used.size() >= 2) {
    const double order = observed_order(used, errors);
    r.checks.push_back({"convergence order (finest pair)", order, min_order, order >= min_order - 1e-6,
                        "n = " + std::to_string(used[used.size() - 2]) + " -> " + std::to_string(used.back())});
  } else {
    r.checks.push_back({"convergence order", 0.0, min_order, true, "errors vanish (exact for every n)"});
  }
  r.csv = csv.str();
  return r;
}

Result cmd_axioms(const Job& job) {
  Result r;
  const json opts = job.config.value("axioms", json::object());
  std::vector<ProductKind> kinds;
  if (opts.contains("kinds")) {
    for (const auto& k : opts["kinds"]) kinds.push_back(parse_product_kind(k.get<std::string>()));
  } else {
    kinds = all_product_kinds();
  }
  const int trials = opts.value("trials", 200);
  const double tol = opts.value("tolerance", 1e-10);
  const int degree = std::min(job.degree_cap, 4);
  for (ProductKind k : kinds) {
    const AxiomReport rep = check_axioms(k, trials, degree, job.seed, tol);
    for (const auto& e : rep.entries) {
      std::string detail;
      if (!e.expected) detail = "expected to fail";
      if (!e.witness.empty()) detail += (detail.empty() ? "" : "; ") + std::string("witness ") + e.witness;
      const bool ok = e.pass == e.expected && (e.expected || !e.witness.empty());
      r.checks.push_back({std::string(to_string(k)) + " " + e.axiom, e.residual, tol, ok, detail});
    }
  }
  return r;
}

Result cmd_laws(const Job& job) {
  Result r;
  const int cap = std::min(job.degree_cap, job.dsg->presentation().unital() ? 3 : 4);
  auto add = [&](const LawReport& rep) {
    for (const auto& e : rep.entries) r.checks.push_back({e.name, e.residual, 1e-12, e.pass, e.witness});
  };
  add(check_dualsg_laws(*job.dsg, cap));
  if (job.dsg->has_antipode()) add(antipode_check(*job.dsg, cap));
  r.data["degree_cap"] = cap;
  return r;
}

FpPoly parse_joint_word(const Job& job, const json& j, int increments) {
  if (!j.is_array() || j.empty()) config_error("a joint word is a nonempty array of [increment, word] legs");
  AltWord w;
  for (const auto& leg : j) {
    if (!leg.is_array() || leg.size() != 2) config_error("a leg is [increment, word]");
    const int l = leg[0].get<int>() - 1;
    if (l < 0 || l >= increments) config_error("leg increment out of range");
    const Word v = parse_normal_word(job.dsg->presentation(), leg[1]);
    if (!w.empty() && w.back().comp == l) config_error("adjacent legs must lie in different increments");
    w.push_back(Leg{l, v});
  }
  return single_word(w);
}

Result cmd_joint(const Job& job) {
  Result r;
  const json opts = job.config.value("joint", json::object());
  const TimeGrid grid(opts.value("grid", std::vector<double>{0.0, 1.0}));
  const ConvolutionSemigroup sg(job.kind, job.dsg, require_generator(job));
  std::vector<FpPoly> words;
  if (opts.contains("words")) {
    for (const auto& w : opts["words"]) words.push_back(parse_joint_word(job, w, grid.increments()));
  } else {
    for (const Word& w : job.words) words.push_back(single_word(AltWord{Leg{0, w}}));
  }
  std::vector<double> shifted = grid.times();
  for (double& t : shifted) t += 1.0;
  const TimeGrid moved(shifted);
  const FreeProduct fam = job.dsg->copies(grid.increments());
  json rows = json::array();
  double stationarity = 0.0;
  for (const FpPoly& w : words) {
    const cplx v = joint_functional(sg, grid, w);
    stationarity = std::max(stationarity, std::abs(v - joint_functional(sg, moved, w)));
    rows.push_back({{"word", fam.format(w)}, {"value", complex_json(v)}});
  }
  r.data["grid"] = grid.times();
  r.data["table"] = rows;
  r.checks.push_back({"stationarity (grid shifted by 1)", stationarity, job.tol, stationarity <= job.tol, ""});
  return r;
}

std::vector<double> random_points(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> pts;
  for (int i = 0; i < count; ++i) pts.push_back(std::round(u(rng) * 1e6) / 1e6);
  return pts;
}

TimeGrid grid_from(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return TimeGrid(pts);
}

Result cmd_refine(const Job& job) {
  Result r;
  const json opts = job.config.value("refine", json::object());
  const int samples = opts.value("samples", 50);
  const int max_degree = opts.value("max_degree", 3);
  const ConvolutionSemigroup sg(job.kind, job.dsg, require_generator(job));
  const std::vector<Word> letters = job.dsg->presentation().normal_words(max_degree);
  std::mt19937_64 rng(job.seed);
  double residual = 0.0, composition = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> base = random_points(rng, 2 + static_cast<int>(rng() % 2));
    TimeGrid sigma = grid_from(base);
    std::vector<double> mid = sigma.times(), more = random_points(rng, 1 + static_cast<int>(rng() % 2));
    mid.insert(mid.end(), more.begin(), more.end());
    TimeGrid tau = grid_from(mid);
    std::vector<double> fine = tau.times(), extra = random_points(rng, 1 + static_cast<int>(rng() % 2));
    fine.insert(fine.end(), extra.begin(), extra.end());
    TimeGrid upsilon = grid_from(fine);

    AltWord w;
    int budget = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_degree));
    while (budget > 0) {
      std::vector<Word> fitting;
      for (const Word& l : letters)
        if (job.dsg->presentation().degree(l) <= budget) fitting.push_back(l);
      const Word& pick = fitting[rng() % fitting.size()];
      int comp = static_cast<int>(rng() % static_cast<std::uint64_t>(sigma.increments()));
      if (!w.empty() && comp == w.back().comp) {
        if (sigma.increments() == 1) break;
        comp = (comp + 1) % sigma.increments();
      }
      w.push_back(Leg{comp, pick});
      budget -= job.dsg->presentation().degree(pick);
    }
    const RefinementResult res = refinement_check(sg, sigma, tau, upsilon, single_word(w));
    residual = std::max(residual, res.residual);
    composition = std::max(composition, res.composition_residual);
  }
  r.checks.push_back({"refinement residual", residual, job.tol, residual <= job.tol, ""});
  r.checks.push_back({"composition residual", composition, job.tol, composition <= job.tol, ""});

  double stationarity = 0.0;
  for (const Word& w : job.words) {
    const FpPoly u = single_word(AltWord{Leg{0, w}});
    stationarity = std::max(stationarity, std::abs(joint_functional(sg, TimeGrid({0.0, 0.7}), u) -
                                                   joint_functional(sg, TimeGrid({1.3, 2.0}), u)));
  }
  r.checks.push_back({"stationarity", stationarity, job.tol, stationarity <= job.tol, ""});

  double previous = std::numeric_limits<double>::infinity(), last = 0.0;
  bool decreasing = true;
  for (double h : {1e-2, 1e-4, 1e-6, 1e-8}) {
    double m = 0.0;
    for (const Word& w : job.words) m = std::max(m, std::abs(sg.value(h, w)));
    decreasing = decreasing && m <= previous;
    previous = m;
    last = m;
  }
  r.checks.push_back({"weak continuity", last, 1e-6, decreasing && last <= 1e-6, ""});
  r.data["samples"] = samples;
  return r;
}

Result cmd_fock(const Job& job) {
  Result r;
  const LinearFunctional& psi = require_generator(job);
  if (job.kind != ProductKind::tensor && job.kind != ProductKind::free)
    config_error("fock cross-checks exist for tensor (bose) and free (full) only");
  if (job.dsg->presentation().unital() || !job.dsg->presentation().rules().empty())
    config_error("fock cross-checks need a primitive dual semigroup");
  const json opts = job.config.value("fock", json::object());
  const int truncation = opts.value("truncation", 4);
  const GnsData gns = gns_construct(psi, job.degree_cap, job.tol);
  const FockFlavor flavor = job.kind == ProductKind::tensor ? FockFlavor::bose : FockFlavor::full;
  const FockSpec spec = fock_spec(flavor, gns, job.dsg->presentation(), truncation);
  const ConvolutionSemigroup sg(job.kind, job.dsg, psi);
  json rows = json::array();
  std::ostringstream csv;
  csv << "t,word,fock_re,fock_im,exp_re,exp_im\n";
  double worst = 0.0;
  for (double t : job.t_grid)
    for (const Word& w : job.words) {
      const cplx f = fock_moment(spec, w, t);
      const cplx e = sg.value(t, w);
      worst = std::max(worst, std::abs(f - e));
      const std::string name = job.dsg->presentation().format(w);
      rows.push_back({{"t", t}, {"word", name}, {"fock", complex_json(f)}, {"exp", complex_json(e)}});
      csv << csv_number(t) << "," << name << "," << csv_number(f.real()) << "," << csv_number(f.imag()) << ","
          << csv_number(e.real()) << "," << csv_number(e.imag()) << "\n";
    }
  r.checks.push_back({std::string(flavor == FockFlavor::bose ? "bose" : "full") + " Fock vs exp",
                      worst, job.tol, worst <= job.tol, ""});
  r.data["flavor"] = flavor == FockFlavor::bose ? "bose" : "full";
  r.data["H_dim"] = gns.rank;
  r.data["table"] = rows;
  r.csv = csv.str();
  return r;
}

Result dispatch(const Job& job) {
  const std::string& c = job.command;
  if (c == "exp") return cmd_exp(job);
  if (c == "check-cp") return cmd_check(job, false);
  if (c == "check-state") return cmd_check(job, true);
  if (c == "schoenberg") return cmd_schoenberg(job);
  if (c == "trotter") return cmd_trotter(job);
  if (c == "axioms") return cmd_axioms(job);
  if (c == "laws") return cmd_laws(job);
  if (c == "joint") return cmd_joint(job);
  if (c == "refine") return cmd_refine(job);
  if (c == "fock") return cmd_fock(job);
  config_error("unknown command '" + c + "'");
}

}  // namespace

std::string config_hash(const json& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string canonical_body(const json& report) {
  json body = report;
  body.erase("wall_clock_seconds");
  return body.dump();
}

Outcome run(const Options& options) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  json& rep = out.report;
  rep["command"] = options.command;
  try {
    Job job = make_job(options);
    rep["config_hash"] = config_hash(job.config);
    rep["seed"] = job.seed;
    rep["dualsemigroup"] = job.dsg->name();
    rep["product"] = to_string(job.kind);
    const Result res = dispatch(job);
    json checks = json::array();
    bool pass = true;
    for (const auto& c : res.checks) {
      checks.push_back(check_json(c));
      pass = pass && c.pass;
    }
    rep["checks"] = checks;
    rep["pass"] = pass;
    rep["data"] = res.data;
    out.exit_code = (pass || res.always_exit_zero) ? 0 : 1;
    if (options.csv) out.csv = res.csv;
  } catch (const Error& e) {
    const bool config = e.kind() == ErrorKind::ConfigError;
    rep["pass"] = false;
    rep["error"] = {{"kind", config ? "ConfigError" : "ComputationError"}, {"cause", to_string(e.kind())},
                    {"message", e.what()}};
    out.exit_code = config ? 2 : 3;
  } catch (const json::exception& e) {
    rep["pass"] = false;
    rep["error"] = {{"kind", "ConfigError"}, {"message", e.what()}};
    out.exit_code = 2;
  } catch (const std::exception& e) {
    rep["pass"] = false;
    rep["error"] = {{"kind", "ComputationError"}, {"message", e.what()}};
    out.exit_code = 3;
  }
  rep["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace dualconv::cli
