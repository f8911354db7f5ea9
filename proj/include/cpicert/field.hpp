#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cpicert/errors.hpp"
#include "cpicert/geometry.hpp"

namespace cpicert {

// Expression node over ambient coordinates x1..x5. Nodes live in a flat pool
// with children strictly preceding parents, so one forward pass evaluates
// every tree in the pool.
struct ExprNode {
  enum class Op : std::uint8_t {
    kConst,
    kVar,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kNeg,
    kPow,  // integer exponent in aux
    kExp,
    kSin,
    kCos,
  };
  Op op;
  std::int32_t lhs = -1;
  std::int32_t rhs = -1;
  std::int32_t aux = 0;  // variable index (kVar) or exponent (kPow)
  double value = 0.0;    // payload for kConst
};

struct AmbientDerivatives {
  double value = 0.0;
  Vec5 grad{};
  std::array<std::array<double, 5>, 5> hess{};
};

// Derivatives of K restricted to the sphere, expressed in a TangentFrame.
// hess carries the second-fundamental-form correction
//   hess(i,j) = v_i^T H v_j - <grad, a> delta_ij,
// so laplace_beltrami = trace(hess) is the Laplace-Beltrami operator of S^4.
struct IntrinsicDerivatives {
  double value = 0.0;
  std::array<double, 4> grad{};
  std::array<std::array<double, 4>, 4> hess{};
  double laplace_beltrami = 0.0;
};

struct PositivityReport {
  double min_value = 0.0;
  SpherePoint location;
  int samples = 0;
};

// Immutable parsed scalar field with structurally-built first and second
// derivative trees (no numeric differentiation happens inside this type).
//
// Grammar: +, -, *, /, ^<integer>, unary -, exp, sin, cos, parentheses,
// decimal literals, variables x1..x5. Precedence ^ > unary - > *,/ > +,-.
class ScalarField {
 public:
  static ScalarField parse(const std::string& src);

  const std::string& source() const { return source_; }
  const std::vector<ExprNode>& nodes() const { return pool_; }

  double value(const Vec5& p) const;
  AmbientDerivatives ambient_derivatives(const Vec5& p) const;
  IntrinsicDerivatives intrinsic_derivatives(const SpherePoint& a,
                                             const TangentFrame& frame) const;

 private:
  ScalarField() = default;

  std::vector<ExprNode> pool_;
  std::int32_t root_ = -1;
  std::size_t value_pool_size_ = 0;  // prefix sufficient for value()
  std::array<std::int32_t, 5> grad_roots_{};
  std::array<std::array<std::int32_t, 5>, 5> hess_roots_{};
  std::string source_;

  void eval_pool(const Vec5& p, std::size_t count,
                 std::vector<double>& out) const;
};

// Deterministic low-discrepancy sweep of S^4 followed by projected-gradient
// polishing of the 32 worst samples. Throws NotPositive (with the witness
// point) when the estimated minimum is <= 0.
PositivityReport validate_positivity(const ScalarField& f, int samples,
                                     std::uint64_t seed);

}  // namespace cpicert
