#include "cpicert/certificate.hpp"

#include <cmath>
#include <cstdlib>

namespace cpicert {

namespace {

long long parity(int iota) { return (iota % 2 == 0) ? 1 : -1; }

std::string subset_name(const std::vector<int>& members) {
  std::string s;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(members[i] + 1);
  }
  return s;
}

Verdict corollary_verdict(const Certificate& cert) {
  Verdict v;
  v.kind = Verdict::Kind::kExistenceByCorollary;
  v.multiplicity = std::llabs(1 - cert.total_sum);
  v.annotation = "total alternating sum " + std::to_string(cert.total_sum) +
                 " != 1";
  return v;
}

Verdict bound_verdict(const Certificate& cert, int k, bool conditional) {
  Verdict v;
  v.kind = Verdict::Kind::kExistenceWithBound;
  v.k_min = k;
  v.morse_bound = k;
  v.multiplicity = std::llabs(1 - cert.partial_sums[k]);
  v.conditional = conditional;
  if (conditional) v.annotation = "conditional on asserted mu values";
  return v;
}

}  // namespace

int iota_index(const std::vector<CriticalPoint>& members) {
  int iota = static_cast<int>(members.size()) - 1;
  for (const CriticalPoint& y : members) iota += 4 - y.morse_index;
  return iota;
}

Certificate counting_from_histogram(const std::map<int, long long>& histogram) {
  Certificate cert;
  cert.index_histogram = histogram;
  cert.l_sharp = -1;
  for (const auto& [iota, count] : histogram)
    if (count > 0) cert.l_sharp = std::max(cert.l_sharp, iota);

  cert.partial_sums.assign(cert.l_sharp + 2, 0);
  long long running = 0;
  for (int k = 0; k <= cert.l_sharp + 1; ++k) {
    if (k > 0) {
      const auto it = histogram.find(k - 1);
      if (it != histogram.end()) running += parity(k - 1) * it->second;
    }
    cert.partial_sums[k] = running;
  }
  cert.total_sum = cert.partial_sums.back();
  cert.degree = 1 - cert.total_sum;
  return cert;
}

Certificate counting_sums(const F1Set& f1) {
  std::map<int, long long> histogram;
  for (const CpiCandidate& c : f1.candidates)
    if (c.in_f1) ++histogram[c.iota];
  return counting_from_histogram(histogram);
}

Verdict evaluate_criteria(Certificate& cert) {
  cert.admissible_k.clear();
  for (int k = 0; k <= cert.l_sharp + 1; ++k) {
    const auto it = cert.index_histogram.find(k);
    const bool index_absent = it == cert.index_histogram.end() || it->second == 0;
    if (cert.partial_sums[k] != 1 && index_absent) cert.admissible_k.push_back(k);
  }

  if (cert.l_sharp < 0) {
    cert.verdict = corollary_verdict(cert);
    return cert.verdict;
  }
  if (cert.admissible_k.empty()) {
    Verdict v;
    v.kind = Verdict::Kind::kNoConclusion;
    v.annotation = "no admissible k in [0, " + std::to_string(cert.l_sharp + 1) +
                   "]";
    cert.verdict = v;
    return cert.verdict;
  }
  cert.verdict = bound_verdict(cert, cert.admissible_k.front(), false);
  return cert.verdict;
}

Verdict evaluate_criteria_with_mu(Certificate& cert, const F1Set& f1,
                                 const MuAssertions& mu) {
  if (cert.l_sharp < 0) {
    cert.verdict = corollary_verdict(cert);
    return cert.verdict;
  }

  for (int k = 0; k <= cert.l_sharp + 1; ++k) {
    if (cert.partial_sums[k] == 1) continue;

    std::vector<const CpiCandidate*> blocking;
    for (const CpiCandidate& c : f1.candidates)
      if (c.in_f1 && c.iota == k) blocking.push_back(&c);

    if (blocking.empty()) {
      cert.verdict = bound_verdict(cert, k, false);
      return cert.verdict;
    }
    // The mu escape needs the index-(k-1) complex, so it only exists for
    // k >= 1; at k = 0 the plain condition stands.
    if (k == 0) continue;

    bool all_zero = true;
    for (const CpiCandidate* c : blocking) {
      const auto it = mu.find(c->members);
      if (it == mu.end()) throw MissingMuAssertion(subset_name(c->members));
      if (it->second != 0) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) {
      cert.verdict = bound_verdict(cert, k, true);
      return cert.verdict;
    }
  }

  Verdict v;
  v.kind = Verdict::Kind::kNoConclusion;
  v.annotation = "no admissible k, even under the asserted mu values";
  cert.verdict = v;
  return cert.verdict;
}

}  // namespace cpicert
