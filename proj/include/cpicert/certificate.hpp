#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpicert/critical.hpp"
#include "cpicert/interaction.hpp"

namespace cpicert {

struct Verdict {
  enum class Kind { kExistenceWithBound, kExistenceByCorollary, kNoConclusion };
  Kind kind = Kind::kNoConclusion;
  int k_min = -1;
  int morse_bound = -1;
  long long multiplicity = 0;
  bool conditional = false;  // relies on user-asserted mu values
  std::string annotation;
};

// Counting data over F1: the index histogram, the partial alternating sums
// S_k = sum over {iota <= k-1} of (-1)^iota for k = 0 .. l_sharp + 1, the
// total sum, the Leray-Schauder degree 1 - total, and the admissible k list
// (S_k != 1 and no candidate of index k).
struct Certificate {
  std::map<int, long long> index_histogram;
  long long total_sum = 0;
  long long degree = 1;
  int l_sharp = -1;
  std::vector<long long> partial_sums;  // S_0 .. S_{l_sharp + 1}
  std::vector<int> admissible_k;
  Verdict verdict;
};

// mu assertions keyed by ascending K+ member indices; values in {0, 1}.
using MuAssertions = std::map<std::vector<int>, int>;

int iota_index(const std::vector<CriticalPoint>& members);

Certificate counting_from_histogram(const std::map<int, long long>& histogram);
Certificate counting_sums(const F1Set& f1);

// Scan k = 0 .. l_sharp + 1 for the minimal admissible k. Empty F1 yields
// the corollary verdict (total = 0 != 1, multiplicity >= 1).
Verdict evaluate_criteria(Certificate& cert);

// Same scan, but a k >= 1 blocked by index-k candidates is admitted when
// every such candidate carries an asserted mu = 0. Throws MissingMuAssertion
// when a required assertion is absent for the k under test.
Verdict evaluate_criteria_with_mu(Certificate& cert, const F1Set& f1,
                                 const MuAssertions& mu);

}  // namespace cpicert
