#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "cpicert/certificate.hpp"
#include "test_util.hpp"

using namespace cpicert;
using namespace cpicert::testutil;

namespace {

CriticalPoint stub_point(int morse) {
  CriticalPoint p{SpherePoint::axis(4)};
  p.morse_index = morse;
  p.beta = 1.0;
  p.k_value = 1.0;
  return p;
}

// F1Set with the given (members, iota) records, all in F1.
F1Set synthetic_f1(const std::vector<std::pair<std::vector<int>, int>>& recs) {
  F1Set f1;
  f1.h1_ok = true;
  f1.rho_tol = 1e-9;
  f1.h1_min_margin = 1.0;
  f1.h1_min_margin_pairs = 1.0;
  for (const auto& [members, iota] : recs) {
    CpiCandidate c;
    c.members = members;
    c.iota = iota;
    c.rho = 1.0;
    c.in_f1 = true;
    f1.candidates.push_back(c);
  }
  return f1;
}

}  // namespace

TEST_CASE("iota arithmetic") {
  CHECK(iota_index({stub_point(4)}) == 0);
  CHECK(iota_index({stub_point(4), stub_point(4)}) == 1);
  CHECK(iota_index({stub_point(3)}) == 1);
  CHECK(iota_index({stub_point(4), stub_point(3)}) == 2);
}

TEST_CASE("counting sums: closed cases") {
  {
    Certificate c = counting_from_histogram({{0, 1}});
    CHECK(c.total_sum == 1);
    CHECK(c.degree == 0);
    CHECK(c.l_sharp == 0);
    CHECK(c.partial_sums == std::vector<long long>{0, 1});
  }
  {
    Certificate c = counting_from_histogram(
        {{0, 2}, {1, 3}, {2, 4}, {3, 3}, {4, 2}, {5, 1}});
    CHECK(c.total_sum == 2 - 3 + 4 - 3 + 2 - 1);
    CHECK(c.total_sum == 1);
    CHECK(c.degree == 0);
    CHECK(c.l_sharp == 5);
    CHECK(c.partial_sums == std::vector<long long>{0, 2, -1, 3, 0, 2, 1});
  }
  {
    Certificate c = counting_from_histogram({{0, 1}, {1, 1}});
    CHECK(c.total_sum == 0);
    CHECK(c.degree == 1);
  }
}

TEST_CASE("criteria scan: affine-style histogram gives no conclusion") {
  Certificate c = counting_from_histogram({{0, 1}});
  const Verdict v = evaluate_criteria(c);
  CHECK(v.kind == Verdict::Kind::kNoConclusion);
  CHECK(c.admissible_k.empty());
}

TEST_CASE("criteria scan: {0:2} admits k = 1") {
  Certificate c = counting_from_histogram({{0, 2}});
  const Verdict v = evaluate_criteria(c);
  CHECK(v.kind == Verdict::Kind::kExistenceWithBound);
  CHECK(v.k_min == 1);
  CHECK(v.morse_bound == 1);
  CHECK(v.multiplicity == 1);  // |1 - S_1| = |1 - 2|
}

TEST_CASE("criteria scan: {0:1, 2:1} blocks k = 1, 2 and admits k = 3") {
  Certificate c = counting_from_histogram({{0, 1}, {2, 1}});
  const Verdict v = evaluate_criteria(c);
  CHECK(v.kind == Verdict::Kind::kExistenceWithBound);
  CHECK(v.k_min == 3);
  CHECK(v.multiplicity == 1);  // S_3 = 2
  CHECK(c.admissible_k == std::vector<int>{3});
}

TEST_CASE("empty F1 yields the corollary verdict") {
  Certificate c = counting_from_histogram({});
  CHECK(c.total_sum == 0);
  CHECK(c.degree == 1);
  const Verdict v = evaluate_criteria(c);
  CHECK(v.kind == Verdict::Kind::kExistenceByCorollary);
  CHECK(v.multiplicity == 1);
  CHECK(!v.conditional);
}

TEST_CASE("degree identity and l#+1 admissibility on random histograms") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 2000; ++t) {
    std::map<int, long long> hist;
    const int span = 1 + static_cast<int>(rng() % 9);
    for (int i = 0; i < span; ++i)
      if (rng() % 3) hist[i] = static_cast<long long>(rng() % 50);
    Certificate c = counting_from_histogram(hist);
    CHECK(c.degree + c.total_sum == 1);
    CHECK(c.partial_sums.back() == c.total_sum);
    const Verdict v = evaluate_criteria(c);
    if (c.total_sum != 1)
      CHECK(v.kind != Verdict::Kind::kNoConclusion);  // l#+1 is admissible
  }
}

TEST_CASE("criteria with mu: k = 0 never uses the mu escape") {
  // histogram {0:1, 1:1}; mu asserted only for the index-1 candidate
  F1Set f1 = synthetic_f1({{{0}, 0}, {{0, 1}, 1}});
  Certificate c = counting_sums(f1);
  MuAssertions mu;
  mu[{0, 1}] = 0;
  const Verdict v = evaluate_criteria_with_mu(c, f1, mu);
  // k=0 blocked plainly, k=1 fails S_1 = 1, k=2 admissible unconditionally
  CHECK(v.kind == Verdict::Kind::kExistenceWithBound);
  CHECK(v.k_min == 2);
  CHECK(!v.conditional);
}

TEST_CASE("criteria with mu: asserted zeros unlock a blocked k") {
  // histogram {0:2, 1:1}
  F1Set f1 = synthetic_f1({{{0}, 0}, {{1}, 0}, {{0, 1}, 1}});
  Certificate c = counting_sums(f1);
  MuAssertions mu;
  mu[{0, 1}] = 0;
  const Verdict v = evaluate_criteria_with_mu(c, f1, mu);
  CHECK(v.kind == Verdict::Kind::kExistenceWithBound);
  CHECK(v.k_min == 1);
  CHECK(v.conditional);
  CHECK(v.multiplicity == 1);
}

TEST_CASE("criteria with mu: mu = 1 does not unlock") {
  F1Set f1 = synthetic_f1({{{0}, 0}, {{1}, 0}, {{0, 1}, 1}});
  Certificate c = counting_sums(f1);
  MuAssertions mu;
  mu[{0, 1}] = 1;
  const Verdict v = evaluate_criteria_with_mu(c, f1, mu);
  // k=1 fails via mu=1; k=2: S_2 = 2 - 1 = 1 fails condition 1 -> none
  CHECK(v.kind == Verdict::Kind::kNoConclusion);
}

TEST_CASE("missing mu assertion is an error naming the subset") {
  F1Set f1 = synthetic_f1({{{0}, 0}, {{1}, 0}, {{0, 1}, 1}});
  Certificate c = counting_sums(f1);
  CHECK_THROWS_AS(evaluate_criteria_with_mu(c, f1, {}), MissingMuAssertion);
}

TEST_CASE("counting_sums only counts F1 members") {
  F1Set f1 = synthetic_f1({{{0}, 0}, {{1}, 0}, {{0, 1}, 1}});
  f1.candidates[1].in_f1 = false;  // exclude one singleton
  const Certificate c = counting_sums(f1);
  CHECK(c.index_histogram.at(0) == 1);
  CHECK(c.index_histogram.at(1) == 1);
  CHECK(c.total_sum == 0);
}
