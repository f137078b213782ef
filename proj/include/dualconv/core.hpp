#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualconv {

using cplx = std::complex<double>;

/// A word is a sequence of generator ids of its owning presentation.
/// The empty word stands for the unit (or the unit of the unitization).
using Word = std::vector<int>;

/// Sparse linear combination of normal-form words.
using Poly = std::map<Word, cplx>;

inline constexpr double kDropTolerance = 1e-14;

enum class ErrorKind {
  NonTerminatingRewrite,
  AlgebraMismatch,
  BadComponentIndex,
  ComponentFamilyMismatch,
  TargetMismatch,
  EvaluationDepthExceeded,
  ArityMismatch,
  ClosureCapExceeded,
  NoAntipode,
  NotConditionallyPositive,
  RelationInconsistency,
  GridMismatch,
  TruncationTooSmall,
  ConfigError,
  ComputationError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// One named numeric check of a report.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::string detail;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : w) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

inline Word concat(const Word& a, const Word& b) {
  Word r;
  r.reserve(a.size() + b.size());
  r.insert(r.end(), a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

/// Adds c to the coefficient of key, erasing entries that cancel.
template <class Map, class Key>
void accumulate(Map& m, Key&& key, cplx c) {
  if (c == cplx{}) return;
  auto [it, inserted] = m.try_emplace(std::forward<Key>(key), c);
  if (!inserted) {
    it->second += c;
    if (std::abs(it->second) < kDropTolerance) m.erase(it);
  }
}

template <class Map>
void drop_small(Map& m, double tol = kDropTolerance) {
  for (auto it = m.begin(); it != m.end();) {
    if (std::abs(it->second) < tol)
      it = m.erase(it);
    else
      ++it;
  }
}

template <class Map>
Map scaled(const Map& m, cplx c) {
  Map r;
  if (c == cplx{}) return r;
  for (const auto& [k, v] : m) r.emplace(k, v * c);
  return r;
}

template <class Map>
void add_into(Map& dst, const Map& src, cplx c = 1.0) {
  for (const auto& [k, v] : src) accumulate(dst, k, v * c);
}

/// Largest coefficient magnitude of a - b.
template <class Map>
double max_difference(const Map& a, const Map& b) {
  Map d = a;
  add_into(d, b, -1.0);
  double r = 0.0;
  for (const auto& [k, v] : d) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace dualconv
