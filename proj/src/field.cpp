#include "cpicert/field.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "cpicert/sampling.hpp"

namespace cpicert {

namespace {

using Op = ExprNode::Op;

double ipow(double base, std::int32_t n) {
  if (n < 0) {
    if (std::abs(base) < 1e-300)
      throw EvaluationDomain("negative power of a (near-)zero base");
    return 1.0 / ipow(base, -n);
  }
  double r = 1.0;
  double b = base;
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

// Node factory with constant folding and the cheap identity eliminations
// (x+0, x*1, x*0, x^0, x^1, -(-x)).
class TreeBuilder {
 public:
  explicit TreeBuilder(std::vector<ExprNode>& pool) : pool_(pool) {}

  bool is_const(std::int32_t i, double v) const {
    return pool_[i].op == Op::kConst && pool_[i].value == v;
  }
  bool is_const(std::int32_t i) const { return pool_[i].op == Op::kConst; }
  double cval(std::int32_t i) const { return pool_[i].value; }

  std::int32_t constant(double v) {
    ExprNode n;
    n.op = Op::kConst;
    n.value = v;
    return push(n);
  }
  std::int32_t variable(std::int32_t idx) {
    ExprNode n;
    n.op = Op::kVar;
    n.aux = idx;
    return push(n);
  }
  std::int32_t add(std::int32_t a, std::int32_t b) {
    if (is_const(a) && is_const(b)) return constant(cval(a) + cval(b));
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return binary(Op::kAdd, a, b);
  }
  std::int32_t sub(std::int32_t a, std::int32_t b) {
    if (is_const(a) && is_const(b)) return constant(cval(a) - cval(b));
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return neg(b);
    return binary(Op::kSub, a, b);
  }
  std::int32_t mul(std::int32_t a, std::int32_t b) {
    if (is_const(a) && is_const(b)) return constant(cval(a) * cval(b));
    if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return binary(Op::kMul, a, b);
  }
  std::int32_t div(std::int32_t a, std::int32_t b) {
    if (is_const(a) && is_const(b) && std::abs(cval(b)) >= 1e-300)
      return constant(cval(a) / cval(b));
    if (is_const(b, 1.0)) return a;
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return a;
    return binary(Op::kDiv, a, b);
  }
  std::int32_t neg(std::int32_t a) {
    if (is_const(a)) return constant(-cval(a));
    if (pool_[a].op == Op::kNeg) return pool_[a].lhs;
    return unary(Op::kNeg, a);
  }
  std::int32_t pow(std::int32_t a, std::int32_t n) {
    if (n == 0) return constant(1.0);
    if (n == 1) return a;
    if (is_const(a) && !(n < 0 && std::abs(cval(a)) < 1e-300))
      return constant(ipow(cval(a), n));
    ExprNode node;
    node.op = Op::kPow;
    node.lhs = a;
    node.aux = n;
    return push(node);
  }
  std::int32_t func(Op op, std::int32_t a) {
    if (is_const(a)) {
      switch (op) {
        case Op::kExp:
          return constant(std::exp(cval(a)));
        case Op::kSin:
          return constant(std::sin(cval(a)));
        case Op::kCos:
          return constant(std::cos(cval(a)));
        default:
          break;
      }
    }
    return unary(op, a);
  }

 private:
  std::int32_t binary(Op op, std::int32_t a, std::int32_t b) {
    ExprNode n;
    n.op = op;
    n.lhs = a;
    n.rhs = b;
    return push(n);
  }
  std::int32_t unary(Op op, std::int32_t a) {
    ExprNode n;
    n.op = op;
    n.lhs = a;
    return push(n);
  }
  std::int32_t push(const ExprNode& n) {
    pool_.push_back(n);
    return static_cast<std::int32_t>(pool_.size() - 1);
  }
  std::vector<ExprNode>& pool_;
};

// ---------------------------------------------------------------------------
// lexer / recursive-descent parser

struct Token {
  enum class Kind {
    kNumber,
    kIdent,
    kPlus,
    kMinus,
    kStar,
    kSlash,
    kCaret,
    kLParen,
    kRParen,
    kEnd,
  };
  Kind kind;
  std::size_t pos = 0;
  double number = 0.0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& tok() const { return tok_; }

  void advance() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    tok_ = Token{};
    tok_.pos = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::kEnd;
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = src_.c_str() + pos_;
      char* end = nullptr;
      tok_.number = std::strtod(begin, &end);
      if (end == begin)
        throw SyntaxError(pos_, {"number"}, err_at(pos_, "malformed number"));
      pos_ += static_cast<std::size_t>(end - begin);
      tok_.kind = Token::Kind::kNumber;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        ++pos_;
      tok_.kind = Token::Kind::kIdent;
      tok_.ident = src_.substr(start, pos_ - start);
      tok_.pos = start;
      return;
    }
    ++pos_;
    switch (c) {
      case '+':
        tok_.kind = Token::Kind::kPlus;
        return;
      case '-':
        tok_.kind = Token::Kind::kMinus;
        return;
      case '*':
        tok_.kind = Token::Kind::kStar;
        return;
      case '/':
        tok_.kind = Token::Kind::kSlash;
        return;
      case '^':
        tok_.kind = Token::Kind::kCaret;
        return;
      case '(':
        tok_.kind = Token::Kind::kLParen;
        return;
      case ')':
        tok_.kind = Token::Kind::kRParen;
        return;
      default:
        throw SyntaxError(pos_ - 1, {"operator", "operand"},
                          err_at(pos_ - 1, std::string("unexpected character '") +
                                               c + "'"));
    }
  }

  static std::string err_at(std::size_t pos, const std::string& what) {
    return "syntax error at position " + std::to_string(pos) + ": " + what;
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& src, TreeBuilder& b) : lex_(src), b_(b) {}

  std::int32_t run() {
    const std::int32_t root = parse_sum();
    expect(Token::Kind::kEnd, "end of input");
    return root;
  }

 private:
  std::int32_t parse_sum() {
    std::int32_t acc = parse_term();
    while (true) {
      if (lex_.tok().kind == Token::Kind::kPlus) {
        lex_.advance();
        acc = b_.add(acc, parse_term());
      } else if (lex_.tok().kind == Token::Kind::kMinus) {
        lex_.advance();
        acc = b_.sub(acc, parse_term());
      } else {
        return acc;
      }
    }
  }

  std::int32_t parse_term() {
    std::int32_t acc = parse_unary();
    while (true) {
      if (lex_.tok().kind == Token::Kind::kStar) {
        lex_.advance();
        acc = b_.mul(acc, parse_unary());
      } else if (lex_.tok().kind == Token::Kind::kSlash) {
        lex_.advance();
        acc = b_.div(acc, parse_unary());
      } else {
        return acc;
      }
    }
  }

  std::int32_t parse_unary() {
    if (lex_.tok().kind == Token::Kind::kMinus) {
      lex_.advance();
      return b_.neg(parse_unary());
    }
    return parse_power();
  }

  std::int32_t parse_power() {
    std::int32_t base = parse_primary();
    while (lex_.tok().kind == Token::Kind::kCaret) {
      lex_.advance();
      base = b_.pow(base, parse_exponent());
    }
    return base;
  }

  std::int32_t parse_exponent() {
    bool negative = false;
    if (lex_.tok().kind == Token::Kind::kMinus) {
      negative = true;
      lex_.advance();
    }
    if (lex_.tok().kind != Token::Kind::kNumber)
      throw SyntaxError(lex_.tok().pos, {"integer exponent"},
                        Lexer::err_at(lex_.tok().pos,
                                      "'^' requires an integer exponent"));
    const double v = lex_.tok().number;
    if (v != std::floor(v) || std::abs(v) > 64.0)
      throw SyntaxError(lex_.tok().pos, {"integer exponent in [-64, 64]"},
                        Lexer::err_at(lex_.tok().pos,
                                      "'^' requires an integer exponent"));
    lex_.advance();
    const auto n = static_cast<std::int32_t>(v);
    return negative ? -n : n;
  }

  std::int32_t parse_primary() {
    const Token t = lex_.tok();
    switch (t.kind) {
      case Token::Kind::kNumber:
        lex_.advance();
        return b_.constant(t.number);
      case Token::Kind::kLParen: {
        lex_.advance();
        const std::int32_t inner = parse_sum();
        expect(Token::Kind::kRParen, "')'");
        return inner;
      }
      case Token::Kind::kIdent: {
        lex_.advance();
        if (t.ident.size() == 2 && t.ident[0] == 'x' && t.ident[1] >= '1' &&
            t.ident[1] <= '5')
          return b_.variable(t.ident[1] - '1');
        if (t.ident == "exp" || t.ident == "sin" || t.ident == "cos") {
          expect(Token::Kind::kLParen, "'('");
          const std::int32_t arg = parse_sum();
          expect(Token::Kind::kRParen, "')'");
          const Op op = t.ident == "exp"   ? Op::kExp
                        : t.ident == "sin" ? Op::kSin
                                           : Op::kCos;
          return b_.func(op, arg);
        }
        throw UnknownIdentifier(t.pos, t.ident);
      }
      default:
        throw SyntaxError(
            t.pos, {"number", "variable", "function", "'('", "unary '-'"},
            Lexer::err_at(t.pos, "expected an operand"));
    }
  }

  void expect(Token::Kind kind, const std::string& what) {
    if (lex_.tok().kind != kind)
      throw SyntaxError(lex_.tok().pos, {what},
                        Lexer::err_at(lex_.tok().pos, "expected " + what));
    lex_.advance();
  }

  Lexer lex_;
  TreeBuilder& b_;
};

// Structural derivative of `node` w.r.t. x_{var+1}. memo covers only nodes
// that existed when the pass started; nodes created during the pass are never
// revisited (recursion only descends into the original tree).
std::int32_t derive(std::vector<ExprNode>& pool, TreeBuilder& b,
                    std::int32_t node, int var, std::vector<std::int32_t>& memo) {
  if (memo[node] >= 0) return memo[node];
  const ExprNode n = pool[node];
  std::int32_t out = -1;
  switch (n.op) {
    case Op::kConst:
      out = b.constant(0.0);
      break;
    case Op::kVar:
      out = b.constant(n.aux == var ? 1.0 : 0.0);
      break;
    case Op::kAdd:
      out = b.add(derive(pool, b, n.lhs, var, memo),
                  derive(pool, b, n.rhs, var, memo));
      break;
    case Op::kSub:
      out = b.sub(derive(pool, b, n.lhs, var, memo),
                  derive(pool, b, n.rhs, var, memo));
      break;
    case Op::kMul: {
      const std::int32_t da = derive(pool, b, n.lhs, var, memo);
      const std::int32_t db = derive(pool, b, n.rhs, var, memo);
      out = b.add(b.mul(da, n.rhs), b.mul(n.lhs, db));
      break;
    }
    case Op::kDiv: {
      const std::int32_t da = derive(pool, b, n.lhs, var, memo);
      const std::int32_t db = derive(pool, b, n.rhs, var, memo);
      const std::int32_t num = b.sub(b.mul(da, n.rhs), b.mul(n.lhs, db));
      out = b.div(num, b.pow(n.rhs, 2));
      break;
    }
    case Op::kNeg:
      out = b.neg(derive(pool, b, n.lhs, var, memo));
      break;
    case Op::kPow: {
      const std::int32_t da = derive(pool, b, n.lhs, var, memo);
      out = b.mul(b.constant(static_cast<double>(n.aux)),
                  b.mul(b.pow(n.lhs, n.aux - 1), da));
      break;
    }
    case Op::kExp:
      out = b.mul(b.func(Op::kExp, n.lhs), derive(pool, b, n.lhs, var, memo));
      break;
    case Op::kSin:
      out = b.mul(b.func(Op::kCos, n.lhs), derive(pool, b, n.lhs, var, memo));
      break;
    case Op::kCos:
      out = b.neg(
          b.mul(b.func(Op::kSin, n.lhs), derive(pool, b, n.lhs, var, memo)));
      break;
  }
  memo[node] = out;
  return out;
}

}  // namespace

ScalarField ScalarField::parse(const std::string& src) {
  if (src.empty()) throw ConfigError("empty field expression");

  ScalarField f;
  f.source_ = src;
  TreeBuilder builder(f.pool_);
  Parser parser(src, builder);
  f.root_ = parser.run();
  f.value_pool_size_ = f.pool_.size();

  std::vector<std::int32_t> memo;
  for (int v = 0; v < 5; ++v) {
    memo.assign(f.pool_.size(), -1);
    f.grad_roots_[v] = derive(f.pool_, builder, f.root_, v, memo);
  }
  for (int j = 0; j < 5; ++j) {
    for (int i = 0; i <= j; ++i) {
      memo.assign(f.pool_.size(), -1);
      const std::int32_t d = derive(f.pool_, builder, f.grad_roots_[j], i, memo);
      f.hess_roots_[i][j] = d;
      f.hess_roots_[j][i] = d;  // shared tree keeps the Hessian exactly symmetric
    }
  }
  return f;
}

void ScalarField::eval_pool(const Vec5& p, std::size_t count,
                            std::vector<double>& out) const {
  out.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const ExprNode& n = pool_[i];
    double v = 0.0;
    switch (n.op) {
      case Op::kConst:
        v = n.value;
        break;
      case Op::kVar:
        v = p[n.aux];
        break;
      case Op::kAdd:
        v = out[n.lhs] + out[n.rhs];
        break;
      case Op::kSub:
        v = out[n.lhs] - out[n.rhs];
        break;
      case Op::kMul:
        v = out[n.lhs] * out[n.rhs];
        break;
      case Op::kDiv: {
        const double den = out[n.rhs];
        if (std::abs(den) < 1e-300)
          throw EvaluationDomain("division by near-zero denominator");
        v = out[n.lhs] / den;
        break;
      }
      case Op::kNeg:
        v = -out[n.lhs];
        break;
      case Op::kPow:
        v = ipow(out[n.lhs], n.aux);
        break;
      case Op::kExp:
        v = std::exp(out[n.lhs]);
        break;
      case Op::kSin:
        v = std::sin(out[n.lhs]);
        break;
      case Op::kCos:
        v = std::cos(out[n.lhs]);
        break;
    }
    out[i] = v;
  }
}

double ScalarField::value(const Vec5& p) const {
  std::vector<double> scratch;
  eval_pool(p, value_pool_size_, scratch);
  return scratch[root_];
}

AmbientDerivatives ScalarField::ambient_derivatives(const Vec5& p) const {
  std::vector<double> scratch;
  eval_pool(p, pool_.size(), scratch);
  AmbientDerivatives d;
  d.value = scratch[root_];
  for (int i = 0; i < 5; ++i) d.grad[i] = scratch[grad_roots_[i]];
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) d.hess[i][j] = scratch[hess_roots_[i][j]];
  return d;
}

IntrinsicDerivatives ScalarField::intrinsic_derivatives(
    const SpherePoint& a, const TangentFrame& frame) const {
  const AmbientDerivatives amb = ambient_derivatives(a.coords());
  const double radial = dot(amb.grad, a.coords());

  IntrinsicDerivatives d;
  d.value = amb.value;
  for (int k = 0; k < 4; ++k) d.grad[k] = dot(amb.grad, frame.vectors[k]);
  for (int k = 0; k < 4; ++k) {
    for (int l = k; l < 4; ++l) {
      double hv = 0.0;
      for (int i = 0; i < 5; ++i) {
        double row = 0.0;
        for (int j = 0; j < 5; ++j) row += amb.hess[i][j] * frame.vectors[l][j];
        hv += frame.vectors[k][i] * row;
      }
      // shape-operator correction for the unit sphere
      const double val = hv - (k == l ? radial : 0.0);
      d.hess[k][l] = val;
      d.hess[l][k] = val;
    }
  }
  d.laplace_beltrami =
      d.hess[0][0] + d.hess[1][1] + d.hess[2][2] + d.hess[3][3];
  return d;
}

PositivityReport validate_positivity(const ScalarField& f, int samples,
                                     std::uint64_t seed) {
  if (samples < 1) throw ConfigError("positivity check needs samples >= 1");

  struct Sample {
    double value;
    std::uint64_t index;
  };
  std::vector<Sample> all;
  all.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const Vec5 p = sphere_sample(static_cast<std::uint64_t>(i), seed);
    all.push_back({f.value(p), static_cast<std::uint64_t>(i)});
  }
  std::sort(all.begin(), all.end(), [](const Sample& a, const Sample& b) {
    return a.value < b.value || (a.value == b.value && a.index < b.index);
  });

  double best = all.front().value;
  Vec5 best_p = sphere_sample(all.front().index, seed);

  const int polish_count = std::min<std::size_t>(32, all.size());
  for (int w = 0; w < polish_count; ++w) {
    SpherePoint p{sphere_sample(all[w].index, seed)};
    double fp = f.value(p.coords());
    for (int it = 0; it < 300; ++it) {
      const AmbientDerivatives amb = f.ambient_derivatives(p.coords());
      Vec5 g = sub(amb.grad, scale(p.coords(), dot(amb.grad, p.coords())));
      const double gn = norm(g);
      if (gn < 1e-10) break;
      double step = std::min(1.0, 1.0 / gn);
      bool moved = false;
      while (step > 1e-12) {
        const SpherePoint q{sub(p.coords(), scale(g, step))};
        const double fq = f.value(q.coords());
        if (fq < fp - 1e-4 * step * gn * gn) {
          p = q;
          fp = fq;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    if (fp < best) {
      best = fp;
      best_p = p.coords();
    }
  }

  if (best <= 0.0) throw NotPositive(best_p, best);
  return PositivityReport{best, SpherePoint(best_p), samples};
}

}  // namespace cpicert
