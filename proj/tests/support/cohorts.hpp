#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "hoplite/models.hpp"

namespace cohorts {

using hoplite::CohortResult;

struct Pair {
  CohortResult a, b;
  std::vector<double> weights;
};

// Two cohorts whose sub-type counts sum to their type counts.
inline Pair randomPair(std::mt19937_64& rng, bool signUniform, bool sharedMix) {
  std::uniform_int_distribution<int> types(1, 8), subs(1, 6);
  std::uniform_real_distribution<double> count(0.0, 50.0), weight(0.1, 5.0), unit(0.0, 1.0);
  Pair pr;
  const int G = types(rng);
  for (int g = 0; g < G; ++g) {
    const int P = subs(rng);
    std::vector<double> a(P), b(P), mu(P);
    double muSum = 0.0;
    for (auto& m : mu) muSum += (m = unit(rng) + 1e-3);
    for (auto& m : mu) m /= muSum;
    const double na = count(rng), nb = count(rng);
    const bool up = unit(rng) < 0.5;
    for (int p = 0; p < P; ++p) {
      if (sharedMix) {
        a[p] = mu[p] * na;
        b[p] = mu[p] * nb;
      } else {
        a[p] = count(rng);
        const double step = count(rng);
        b[p] = signUniform ? (up ? a[p] + step : std::max(0.0, a[p] - step)) : count(rng);
      }
    }
    double sa = 0.0, sb = 0.0;
    for (int p = 0; p < P; ++p) {
      sa += a[p];
      sb += b[p];
    }
    pr.a.subCounts.push_back(a);
    pr.b.subCounts.push_back(b);
    pr.a.typeCounts.push_back(sa);
    pr.b.typeCounts.push_back(sb);
    pr.weights.push_back(weight(rng));
  }
  return pr;
}

}  // namespace cohorts
