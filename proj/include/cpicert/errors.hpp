#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpicert {

// Failure classes, mapped 1:1 onto CLI exit codes (see README).
enum class ErrorClass {
  kConfig = 1,      // unusable input: config, expression syntax, schemas
  kHypothesis = 3,  // positivity / (H0) / (H1) violated by the supplied K
  kIncomplete = 4,  // analysis could not be completed (search, caps)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& msg)
      : std::runtime_error(msg), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg)
      : Error(ErrorClass::kConfig, msg) {}
};

// Expression parser diagnostics carry the offending position and what would
// have been accepted there.
struct SyntaxError : Error {
  SyntaxError(std::size_t pos, std::vector<std::string> expect,
              const std::string& msg)
      : Error(ErrorClass::kConfig, msg),
        position(pos),
        expected(std::move(expect)) {}
  std::size_t position;
  std::vector<std::string> expected;
};

struct UnknownIdentifier : Error {
  UnknownIdentifier(std::size_t pos, const std::string& name)
      : Error(ErrorClass::kConfig,
              "unknown identifier '" + name + "' at position " +
                  std::to_string(pos) + " (allowed: x1..x5, exp, sin, cos)"),
        position(pos),
        identifier(name) {}
  std::size_t position;
  std::string identifier;
};

struct EvaluationDomain : Error {
  explicit EvaluationDomain(const std::string& msg)
      : Error(ErrorClass::kConfig, msg) {}
};

struct PoleCoincidence : Error {
  explicit PoleCoincidence(double dist)
      : Error(ErrorClass::kConfig,
              "Green's function evaluated at coinciding points (distance " +
                  std::to_string(dist) + ")"),
        distance(dist) {}
  double distance;
};

struct NotTangent : Error {
  explicit NotTangent(double defect)
      : Error(ErrorClass::kConfig,
              "exp_map argument is not tangent (|<v,a>| = " +
                  std::to_string(defect) + ")"),
        defect(defect) {}
  double defect;
};

struct CutLocus : Error {
  explicit CutLocus(double dist)
      : Error(ErrorClass::kConfig,
              "log_map target lies at or beyond the cut locus (d = " +
                  std::to_string(dist) + ")"),
        distance(dist) {}
  double distance;
};

struct NotPositive : Error {
  NotPositive(const std::array<double, 5>& w, double value)
      : Error(ErrorClass::kHypothesis,
              "K is not positive (minimum " + std::to_string(value) +
                  " found on the sphere)"),
        witness(w),
        min_value(value) {}
  std::array<double, 5> witness;
  double min_value;
};

struct DegenerateCriticalPoint : Error {
  DegenerateCriticalPoint(const std::array<double, 5>& loc, double eig)
      : Error(ErrorClass::kHypothesis,
              "degenerate critical point: |Hessian eigenvalue| = " +
                  std::to_string(eig) + " below nondegeneracy tolerance"),
        location(loc),
        min_abs_eigenvalue(eig) {}
  std::array<double, 5> location;
  double min_abs_eigenvalue;
};

struct IncompleteSearch : Error {
  IncompleteSearch(long long sum, int starts)
      : Error(ErrorClass::kIncomplete,
              "critical-point search incomplete: Poincare-Hopf sum " +
                  std::to_string(sum) + " != 2 after " +
                  std::to_string(starts) + " starts"),
        poincare_hopf_sum(sum),
        starts_used(starts) {}
  long long poincare_hopf_sum;
  int starts_used;
};

struct TooManyPeaks : Error {
  TooManyPeaks(std::size_t n, int cap)
      : Error(ErrorClass::kIncomplete,
              "|K+| = " + std::to_string(n) + " exceeds subset cap " +
                  std::to_string(cap) + " (raise max_kplus to override)"),
        kplus_size(n),
        max_kplus(cap) {}
  std::size_t kplus_size;
  int max_kplus;
};

struct MissingMuAssertion : Error {
  explicit MissingMuAssertion(const std::string& subset)
      : Error(ErrorClass::kConfig,
              "no mu assertion supplied for candidate {" + subset + "}"),
        subset_name(subset) {}
  std::string subset_name;
};

struct UnknownSubset : Error {
  explicit UnknownSubset(const std::string& name)
      : Error(ErrorClass::kConfig,
              "unknown critical-point name '" + name + "'"),
        name(name) {}
  std::string name;
};

struct SchemaError : Error {
  SchemaError(const std::string& where, const std::string& msg)
      : Error(ErrorClass::kConfig, "schema error at " + where + ": " + msg),
        location(where) {}
  std::string location;
};

struct QuadratureNotConverged : Error {
  explicit QuadratureNotConverged(const std::string& what_integral)
      : Error(ErrorClass::kIncomplete,
              "adaptive quadrature did not converge for " + what_integral) {}
};

struct DivergedWeights : Error {
  DivergedWeights(int member, double ratio)
      : Error(ErrorClass::kIncomplete,
              "flow weight " + std::to_string(member + 1) +
                  " left the balanced band (ratio " + std::to_string(ratio) +
                  ")"),
        member_index(member),
        ratio(ratio) {}
  int member_index;
  double ratio;
};

struct StepUnderflow : Error {
  explicit StepUnderflow(double t)
      : Error(ErrorClass::kIncomplete,
              "flow step size underflowed at t = " + std::to_string(t)),
        time(t) {}
  double time;
};

}  // namespace cpicert
