// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria marked with a runtime budget enforce it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bubble_oracle.hpp"
#include "cpicert/bubble.hpp"
#include "cpicert/pipeline.hpp"
#include "cpicert/report.hpp"
#include "cpicert/shadow_flow.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace cpicert;
using namespace cpicert::testutil;

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
  void expect_near(double a, double b, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s: %.12g vs %.12g (tol %.3g)",
                  what.c_str(), a, b, tol);
    expect(std::abs(a - b) <= tol, buf);
  }
};

AnalysisResult analyze_field(const std::string& src, std::uint64_t seed = 0) {
  RunConfig cfg;
  cfg.field_source = src;
  cfg.seed = seed;
  return run_analysis(cfg);
}

const AnalysisResult& affine_result() {
  static const AnalysisResult res = analyze_field(kAffineSource);
  return res;
}

const AnalysisResult& quadric_result() {
  static const AnalysisResult res = analyze_field(kQuadricSource);
  return res;
}

int axis_of(const SpherePoint& p) {
  for (int i = 0; i < 5; ++i)
    if (std::abs(std::abs(p[i]) - 1.0) < 1e-6) return i;
  return -1;
}

std::string scaled_source(const std::string& src) { return "5*(" + src + ")"; }

std::string rotated_source(const std::string& base_kind, const Mat5& q) {
  // substitute x -> Q^T x so the critical set moves by Q
  char buf[64];
  const auto lincomb = [&](int i) {
    std::string s = "(";
    for (int j = 0; j < 5; ++j) {
      if (j) s += " + ";
      std::snprintf(buf, sizeof(buf), "%.17g", q[j][i]);
      s += std::string(buf) + "*x" + std::to_string(j + 1);
    }
    return s + ")";
  };
  if (base_kind == "affine") return "2 + " + lincomb(4);
  const double c[5] = {0.0625, 0.125, 0.25, 0.5, 1.0};
  std::string s = "3";
  for (int i = 0; i < 5; ++i) {
    const std::string lc = lincomb(i);  // reuses buf; build it first
    std::snprintf(buf, sizeof(buf), "%.17g", c[i]);
    s += " + " + std::string(buf) + "*" + lc + "^2";
  }
  return s;
}

// index permutation mapping base K+ members onto transformed K+ members
std::optional<std::vector<int>> match_kplus(
    const AnalysisResult& base, const AnalysisResult& other,
    const std::function<SpherePoint(const SpherePoint&)>& move) {
  const std::size_t n = base.kplus_points.size();
  if (other.kplus_points.size() != n) return std::nullopt;
  std::vector<int> perm(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const SpherePoint target = move(base.kplus_points[i].location);
    for (std::size_t j = 0; j < n; ++j) {
      if (geodesic_distance(target, other.kplus_points[j].location) < 1e-5) {
        perm[i] = static_cast<int>(j);
        break;
      }
    }
    if (perm[i] < 0) return std::nullopt;
  }
  return perm;
}

bool verdict_equal(const Verdict& a, const Verdict& b) {
  return a.kind == b.kind && a.k_min == b.k_min &&
         a.multiplicity == b.multiplicity;
}

// Compares an invariance run against the base fixture analysis: matched
// points carry the same beta/morse data, every subset keeps iota and its F1
// flag, rho scales by 1/rho_scale, histogram and verdict agree.
void check_invariance(Check& c, const AnalysisResult& base,
                      const AnalysisResult& other, double rho_scale,
                      const std::function<SpherePoint(const SpherePoint&)>& move,
                      const std::string& tag) {
  const auto perm = match_kplus(base, other, move);
  c.expect(perm.has_value(), tag + ": K+ sets do not correspond");
  if (!perm) return;

  const std::size_t n = base.kplus_points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const CriticalPoint& pb = base.kplus_points[i];
    const CriticalPoint& po = other.kplus_points[(*perm)[i]];
    c.expect(pb.morse_index == po.morse_index, tag + ": morse index changed");
    c.expect(std::abs(pb.beta - po.beta) < 1e-7, tag + ": beta changed");
  }

  for (const CpiCandidate& cand : base.f1->candidates) {
    std::uint64_t mask = 0;
    for (int m : cand.members) mask |= (1ULL << (*perm)[m]);
    const CpiCandidate& mapped = other.f1->candidates[mask - 1];
    c.expect(mapped.iota == cand.iota, tag + ": iota changed");
    c.expect(mapped.in_f1 == cand.in_f1, tag + ": F1 membership changed");
    c.expect(std::abs(mapped.rho - cand.rho / rho_scale) <
                 1e-6 * std::max(1.0, std::abs(cand.rho)),
             tag + ": rho did not scale by 1/" + std::to_string(rho_scale));
  }
  c.expect(base.certificate->index_histogram ==
               other.certificate->index_histogram,
           tag + ": histogram changed");
  c.expect(verdict_equal(base.certificate->verdict,
                         other.certificate->verdict),
           tag + ": verdict changed");
}

struct InvarianceData {
  AnalysisResult affine_scaled, affine_rotated;
  AnalysisResult quadric_scaled, quadric_rotated;
  Mat5 q;
};

const InvarianceData& invariance_data() {
  static const InvarianceData data = [] {
    InvarianceData d;
    std::mt19937_64 rng(2026);
    d.q = random_orthogonal5(rng);
    d.affine_scaled = analyze_field(scaled_source(kAffineSource));
    d.affine_rotated = analyze_field(rotated_source("affine", d.q));
    d.quadric_scaled = analyze_field(scaled_source(kQuadricSource));
    d.quadric_rotated = analyze_field(rotated_source("quadric", d.q));
    return d;
  }();
  return data;
}

// ---------------------------------------------------------------------------

void criterion_1_constants(Check& c) {
  const AnalyticConstants ac = compute_constants();
  c.expect(std::abs(ac.s4 / (32.0 * kPi * kPi / 3.0) - 1.0) < 1e-8,
           "S4 misses 32 pi^2 / 3");
  c.expect(std::abs(ac.c2 / (32.0 * kPi * kPi) - 1.0) < 1e-8,
           "c2 misses 32 pi^2");
  c.expect_near(derive_c0(), 2.0 * std::sqrt(2.0), 1e-9, "derive_c0");

  using Q = __float128;
  for (double r : {0.0, 0.5, 1.0, 2.0, 10.0}) {
    const double res = static_cast<double>(
        profile_residual<Q>(bubble_c0<Q>(), Q(r), Q(1) / Q(10000)));
    char buf[80];
    std::snprintf(buf, sizeof(buf), "c0 residual %.3g at r = %g", res, r);
    c.expect(std::abs(res) < 1e-10, buf);
  }
}

void criterion_2_bubble_equation(Check& c) {
  using Q = __float128;
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> ulog(std::log(0.5), std::log(100.0));
  std::uniform_real_distribution<double> ucoord(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double lambda = std::exp(ulog(rng));
    const std::array<double, 4> a{ucoord(rng), ucoord(rng), ucoord(rng),
                                  ucoord(rng)};
    const Bubble b = make_bubble(a, lambda);

    // the double-precision value is the radial profile of the oracle
    std::array<double, 4> dir{ucoord(rng), ucoord(rng), ucoord(rng),
                              ucoord(rng)};
    double dn = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] +
                          dir[2] * dir[2] + dir[3] * dir[3]);
    for (double& x : dir) x /= dn;
    for (double r : {0.0, 1.0, 17.0, 50.0}) {
      std::array<double, 4> x = a;
      for (int i = 0; i < 4; ++i) x[i] += r * dir[i];
      const double direct = bubble_value(b, x);
      const double profile = static_cast<double>(
          bubble_profile<Q>(bubble_c0<Q>(), Q(lambda), Q(r)));
      c.expect(std::abs(direct - profile) <= 1e-12 * profile,
               "bubble_value drifts from its radial profile");
    }

    const Q h = Q(0.008) / Q(lambda);
    for (int i = 0; i <= 400; ++i) {
      const double r = 50.0 * i / 400.0;
      const double res = static_cast<double>(
          bubble_pde_relative_residual<Q>(Q(lambda), Q(r), h));
      worst = std::max(worst, std::abs(res));
    }
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "max relative residual %.3g", worst);
  c.expect(worst < 1e-6, buf);
  c.detail = buf;
}

void criterion_3_affine_fixture(Check& c) {
  const AnalysisResult& res = affine_result();
  c.expect(res.critical.points.size() == 2, "expected exactly 2 critical points");
  if (res.critical.points.size() != 2) return;
  c.expect(res.critical.points[0].morse_index == 4, "maximum index");
  c.expect(res.critical.points[1].morse_index == 0, "minimum index");
  c.expect_near(res.critical.points[0].beta, 4.0 / 9.0, 1e-8, "beta(north)");
  c.expect_near(res.critical.points[1].beta, -4.0 / 3.0, 1e-8, "beta(south)");
  c.expect(res.f1 && res.f1->candidates.size() == 1, "|F1| = 1");
  c.expect(res.f1->candidates[0].iota == 0, "iota = 0");
  c.expect(res.certificate.has_value(), "certificate present");
  if (!res.certificate) return;
  c.expect(res.certificate->total_sum == 1, "total sum 1");
  c.expect(res.certificate->degree == 0, "degree 0");
  c.expect(res.certificate->verdict.kind == Verdict::Kind::kNoConclusion,
           "NoConclusion");
  c.expect(res.exit_code == 2, "exit code 2");
}

void criterion_4_quadric_fixture(Check& c) {
  const AnalysisResult& res = quadric_result();
  c.expect(res.critical.points.size() == 10, "expected 10 critical points");
  c.expect(res.critical.poincare_hopf_sum == 2, "Poincare-Hopf sum 2");

  std::map<int, int> count_by_axis;
  const int expected_index[5] = {0, 1, 2, 3, 4};
  for (const CriticalPoint& p : res.critical.points) {
    const int axis = axis_of(p.location);
    c.expect(axis >= 0, "critical point off the coordinate axes");
    if (axis < 0) continue;
    ++count_by_axis[axis];
    c.expect(p.morse_index == expected_index[axis], "Morse index mismatch");
  }
  for (int axis = 0; axis < 5; ++axis)
    c.expect(count_by_axis[axis] == 2, "each axis pair found");

  c.expect(res.kplus_points.size() == 4, "K+ = {+-e5, +-e4}");
  for (const CriticalPoint& p : res.kplus_points)
    c.expect(axis_of(p.location) >= 3, "K+ member off e4/e5");

  c.expect(res.f1 && res.f1->candidates.size() == 15, "15 candidates");
  if (res.f1) {
    double min_rho = HUGE_VAL;
    for (const CpiCandidate& cand : res.f1->candidates) {
      c.expect(cand.rho > 0.0, "rho > 0 for every subset");
      min_rho = std::min(min_rho, cand.rho);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "min rho margin %.6g", min_rho);
    c.detail = buf;
  }
  c.expect(res.certificate.has_value(), "certificate present");
  if (!res.certificate) return;
  const std::map<int, long long> expected{{0, 2}, {1, 3}, {2, 4},
                                          {3, 3}, {4, 2}, {5, 1}};
  c.expect(res.certificate->index_histogram == expected, "index histogram");
  c.expect(res.certificate->total_sum == 1, "total sum 1");
  c.expect(res.certificate->degree == 0, "degree 0");
}

void criterion_5_eigen_oracle(Check& c) {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 1 + static_cast<int>(rng() % 8);
    SymMat m(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) m.set(i, j, u(rng));
    const double jac = least_eigenvalue(m);
    const double bis = bisect_least_eigenvalue(m);
    worst = std::max(worst, std::abs(jac - bis));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max |jacobi - bisection| = %.3g", worst);
  c.expect(worst < 1e-9, buf);
  c.detail = buf;

  for (const AnalysisResult* res : {&affine_result(), &quadric_result()}) {
    const ManifoldModel model = round_sphere_model();
    for (const CpiCandidate& cand : res->f1->candidates) {
      std::vector<CriticalPoint> members;
      for (int m : cand.members) members.push_back(res->kplus_points[m]);
      const SymMat mat = build_matrix(members, model);
      c.expect(sylvester_positive_definite(mat) == (cand.rho > 0.0),
               "Sylvester criterion disagrees with rho sign");
    }
  }
}

void criterion_6_interlacing(Check& c) {
  // quadric subsets first
  {
    const AnalysisResult& res = quadric_result();
    const auto& cands = res.f1->candidates;
    const int n = 4;
    for (int mask = 1; mask < (1 << n); ++mask) {
      for (int b = 0; b < n; ++b) {
        if (!(mask & (1 << b)) || mask == (1 << b)) continue;
        const int sub = mask & ~(1 << b);
        c.expect(cands[sub - 1].rho >= cands[mask - 1].rho - 1e-10,
                 "interlacing violated on quadric subsets");
        if (cands[mask - 1].in_f1)
          c.expect(cands[sub - 1].in_f1, "downward closure violated");
      }
    }
  }
  // 50 random synthetic configurations
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> diag(0.01, 1.0);
  std::uniform_real_distribution<double> off(0.001, 0.2);
  int violations = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng() % 5);
    SymMat m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, diag(rng));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) m.set(i, j, -off(rng));
    std::vector<double> rho(1 << n, 0.0);
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> idx;
      for (int b = 0; b < n; ++b)
        if (mask & (1 << b)) idx.push_back(b);
      SymMat sub(static_cast<int>(idx.size()));
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i; j < idx.size(); ++j)
          sub.set(static_cast<int>(i), static_cast<int>(j), m(idx[i], idx[j]));
      rho[mask] = least_eigenvalue(sub);
    }
    for (int mask = 1; mask < (1 << n); ++mask) {
      for (int b = 0; b < n; ++b) {
        if (!(mask & (1 << b)) || mask == (1 << b)) continue;
        const int sub = mask & ~(1 << b);
        if (rho[sub] < rho[mask] - 1e-10) ++violations;
        if (rho[mask] > 0.0 && !(rho[sub] > 0.0)) ++violations;
      }
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%d violations over 50 random configs",
                violations);
  c.expect(violations == 0, buf);
}

void criterion_7_certificate_arithmetic(Check& c) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 10000; ++t) {
    std::map<int, long long> hist;
    const int span = 1 + static_cast<int>(rng() % 13);
    for (int i = 0; i < span; ++i)
      if (rng() % 3) hist[i] = static_cast<long long>(rng() % 1000);
    Certificate cert = counting_from_histogram(hist);
    c.expect(cert.degree + cert.total_sum == 1, "degree identity");
    c.expect(cert.partial_sums.back() == cert.total_sum, "S_{l#+1} = total");
    const Verdict v = evaluate_criteria(cert);
    if (cert.total_sum != 1)
      c.expect(v.kind != Verdict::Kind::kNoConclusion,
               "total != 1 must admit k = l# + 1");
    if (c.ok == false) return;
  }
  // end-to-end verdict invariance on the fixtures
  const InvarianceData& d = invariance_data();
  c.expect(verdict_equal(affine_result().certificate->verdict,
                         d.affine_scaled.certificate->verdict) &&
               verdict_equal(affine_result().certificate->verdict,
                             d.affine_rotated.certificate->verdict),
           "affine verdict not invariant");
  c.expect(verdict_equal(quadric_result().certificate->verdict,
                         d.quadric_scaled.certificate->verdict) &&
               verdict_equal(quadric_result().certificate->verdict,
                             d.quadric_rotated.certificate->verdict),
           "quadric verdict not invariant");
}

void criterion_8_invariance_suite(Check& c) {
  const InvarianceData& d = invariance_data();
  const auto identity = [](const SpherePoint& p) { return p; };
  const auto rotate = [&](const SpherePoint& p) {
    return SpherePoint{apply(d.q, p.coords())};
  };
  check_invariance(c, affine_result(), d.affine_scaled, 5.0, identity,
                   "affine x5");
  check_invariance(c, affine_result(), d.affine_rotated, 1.0, rotate,
                   "affine rotated");
  check_invariance(c, quadric_result(), d.quadric_scaled, 5.0, identity,
                   "quadric x5");
  check_invariance(c, quadric_result(), d.quadric_rotated, 1.0, rotate,
                   "quadric rotated");
}

void criterion_9_shadow_flow(Check& c) {
  // closed-form linear decay
  {
    const ScalarField one = ScalarField::parse("1");
    FlowState st;
    st.points = {SpherePoint::axis(0), SpherePoint::axis(1)};
    st.inv_scales = {1.0, 1.0};
    st.weights = {1.0, 1.0};
    FlowOptions opts;
    opts.freeze_points = true;
    opts.fixed_matrix = SymMat::diagonal({1.0, 2.0});
    const FlowState end =
        run_flow_to(st, one, round_sphere_model(), 1.0, opts);
    c.expect_near(end.inv_scales[0], std::exp(-1.0), 1e-6, "s1(1)");
    c.expect_near(end.inv_scales[1], std::exp(-2.0), 1e-6, "s2(1)");
  }

  // Lyapunov bound and verdict agreement on all 15 quadric subsets
  const AnalysisResult& res = quadric_result();
  const ScalarField f = ScalarField::parse(kQuadricSource);
  const ManifoldModel model = round_sphere_model();
  for (const CpiCandidate& cand : res.f1->candidates) {
    FlowState st;
    for (int m : cand.members) {
      st.points.push_back(res.kplus_points[m].location);
      st.inv_scales.push_back(0.05);
      st.weights.push_back(1.0 / std::sqrt(res.kplus_points[m].k_value));
    }
    const double s0 = 0.05 * std::sqrt(static_cast<double>(cand.members.size()));

    double rho_min = HUGE_VAL;
    struct Sample {
      double t, sn;
    };
    std::vector<Sample> samples;
    const FlowVerdict v = run_to_verdict(
        st, f, model, 2000.0, {},
        [&](const FlowState& cur, const SymMat& m) {
          double sn = 0.0;
          for (double s : cur.inv_scales) sn += s * s;
          samples.push_back({cur.t, std::sqrt(sn)});
          rho_min = std::min(rho_min, least_eigenvalue(m));
        });
    c.expect((v == FlowVerdict::kConcentrates) == cand.in_f1,
             "verdict disagrees with F1 membership");
    c.expect(rho_min > 0.0, "rho along trajectory must stay positive");
    for (const Sample& s : samples)
      c.expect(s.sn <= s0 * std::exp(-rho_min * s.t) * (1.0 + 1e-6),
               "Lyapunov bound violated");
  }
}

void criterion_10_determinism(Check& c) {
  const fs::path root = fs::temp_directory_path() / "cpicert_acceptance";
  fs::remove_all(root);
  const fs::path d1 = root / "run1";
  const fs::path d2 = root / "run2";
  fs::create_directories(root);

  std::ofstream cfg(root / "config.json");
  cfg << "{\"field\": \"" << kQuadricSource << "\", \"seed\": 0}";
  cfg.close();

  const auto run = [&](const fs::path& out) {
    const std::string cmd = std::string(CPICERT_BIN) + " analyze --config " +
                            (root / "config.json").string() + " --out " +
                            out.string() + " > /dev/null";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  c.expect(run(d1) == 2, "first analyze run should exit 2");
  c.expect(run(d2) == 2, "second analyze run should exit 2");

  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string j1 = slurp(d1 / "report.json");
  c.expect(!j1.empty(), "report.json missing");
  c.expect(j1 == slurp(d2 / "report.json"), "report.json differs across runs");
  c.expect(slurp(d1 / "report.txt") == slurp(d2 / "report.txt"),
           "report.txt differs across runs");
}

struct Criterion {
  int id;
  const char* name;
  void (*run)(Check&);
  double time_budget;  // seconds; 0 = unbounded
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "expansion constants S4, c2, c0", criterion_1_constants, 1.0},
      {2, "bubble equation residual", criterion_2_bubble_equation, 5.0},
      {3, "fixture K = 2 + x5", criterion_3_affine_fixture, 10.0},
      {4, "fixture quadric_5", criterion_4_quadric_fixture, 60.0},
      {5, "eigenvalue oracle", criterion_5_eigen_oracle, 0.0},
      {6, "interlacing / downward closure", criterion_6_interlacing, 0.0},
      {7, "certificate arithmetic", criterion_7_certificate_arithmetic, 10.0},
      {8, "invariance suite", criterion_8_invariance_suite, 0.0},
      {9, "shadow flow", criterion_9_shadow_flow, 60.0},
      {10, "determinism", criterion_10_determinism, 0.0},
  };

  int failures = 0;
  for (const Criterion& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check check;
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (cr.time_budget > 0.0 && secs > cr.time_budget) {
      check.ok = false;
      check.detail = "runtime budget exceeded";
    }
    if (!check.ok) ++failures;
    std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n",
                check.ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                check.detail.empty() ? "" : " -- ", check.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
