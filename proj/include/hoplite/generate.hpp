#pragma once

// Deterministic synthetic hospital instances for scale testing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hoplite/domain.hpp"
#include "hoplite/fileio.hpp"

namespace hoplite {

struct GeneratorScale {
  int types = 21;
  int subsMin = 2;
  int subsMax = 51;
  int wards = 30;
  int bedsMin = 4;
  int bedsMax = 24;
  int icuBeds = 20;
  int theatres = 21;
  int maxWardOptions = 3;
  bool roundValues = true;  // 2-decimal durations and whole-number targets

  void validate() const {
    if (types < 1) throw ValidationError("types", "must be >= 1");
    if (subsMin < 1 || subsMax < subsMin) throw ValidationError("subTypes", "need 1 <= min <= max");
    if (wards < 1) throw ValidationError("wards", "must be >= 1");
    if (bedsMin < 0 || bedsMax < bedsMin) throw ValidationError("beds", "need 0 <= min <= max");
    if (icuBeds < 0 || theatres < 0) throw ValidationError("scale", "counts must be >= 0");
    if (maxWardOptions < 1) throw ValidationError("maxWardOptions", "must be >= 1");
  }
};

namespace generate_detail {

// Portable draws on top of mt19937_64 (whose output sequence is fixed by the
// standard, unlike the distribution classes).
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double real(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 rng_;
};

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

inline std::vector<double> randomPercentages(Draw& d, std::size_t n, bool round) {
  std::vector<double> w(n);
  for (auto& x : w) x = d.real(0.5, 10.0);
  if (n == 1) return {100.0};
  double sum = 0.0;
  for (double x : w) sum += x;
  for (auto& x : w) x = 100.0 * x / sum;
  if (!round) return w;
  // Two-decimal percentages; the rounding residual goes to the largest entry.
  double total = 0.0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = round2(w[i]);
    total += w[i];
    if (w[i] > w[largest]) largest = i;
  }
  w[largest] = round2(w[largest] + 100.0 - total);
  return w;
}

}  // namespace generate_detail

inline ProjectBundle generateInstance(std::uint64_t seed, const GeneratorScale& scale = {}) {
  using namespace generate_detail;
  scale.validate();
  Draw d(seed);
  const bool rnd = scale.roundValues;
  auto value = [&](double lo, double hi) { return rnd ? round2(d.real(lo, hi)) : d.real(lo, hi); };

  ProjectBundle b;
  b.projectName = "generated_" + std::to_string(seed);
  b.config.icuBeds = scale.icuBeds;
  b.config.theatres = scale.theatres;
  for (int w = 1; w <= scale.wards; ++w)
    b.config.wards.push_back({w, "Ward " + std::to_string(w), d.integer(scale.bedsMin, scale.bedsMax)});

  for (int g = 1; g <= scale.types; ++g) {
    PatientType t{g, "Specialty " + std::to_string(g), {}};
    // Each specialty favours a contiguous block of wards.
    const int home = d.integer(0, scale.wards - 1);
    const int subs = d.integer(scale.subsMin, scale.subsMax);
    for (int p = 1; p <= subs; ++p) {
      SubType s;
      s.p = p;
      s.name = "Specialty " + std::to_string(g) + "-" + std::to_string(p);
      s.profile.tSurgery = value(1.0, 8.0);
      s.profile.tPostop = value(5.0, 23.0);
      s.profile.tIcu = d.chance(0.3) ? value(1.0, 12.0) : 0.0;
      const int options = d.integer(1, std::min(scale.maxWardOptions, scale.wards));
      for (int k = 0; k < options; ++k)
        s.wardOptions.push_back(b.config.wards[static_cast<std::size_t>((home + k) % scale.wards)].name);
      s.revenue = rnd ? std::round(d.real(500.0, 10000.0) / 100.0) * 100.0 : d.real(500.0, 10000.0);
      t.subTypes.push_back(std::move(s));
    }
    b.catalog.types.push_back(std::move(t));
  }

  Mix mix;
  mix.caseMix = randomPercentages(d, b.catalog.typeCount(), rnd);
  for (const auto& t : b.catalog.types) mix.subMix.push_back(randomPercentages(d, t.subTypes.size(), rnd));
  b.mix = mix;

  // Sessions of a one-week template split by case mix.
  const std::int64_t weekly = 10LL * scale.theatres;
  SessionAssignment sessions;
  for (double pct : mix.caseMix) sessions.sessions.push_back(rnd ? std::floor(pct / 100.0 * weekly) : pct / 100.0 * weekly);
  if (rnd) {
    // Largest remainders take the sessions left by flooring.
    std::vector<std::size_t> order(mix.caseMix.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rest = [&](std::size_t g) { return mix.caseMix[g] / 100.0 * weekly - sessions.sessions[g]; };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rest(a) > rest(b); });
    double left = static_cast<double>(weekly);
    for (double m : sessions.sessions) left -= m;
    for (std::size_t k = 0; left > 0.5; ++k, left -= 1.0) sessions.sessions[order[k % order.size()]] += 1.0;
  }
  b.sessions = sessions;

  TargetSet targets;
  for (const auto& t : b.catalog.types) {
    std::vector<double> subs;
    double sum = 0.0;
    for (std::size_t p = 0; p < t.subTypes.size(); ++p) {
      const double x = rnd ? static_cast<double>(d.integer(0, 6)) : d.real(0.0, 6.0);
      subs.push_back(x);
      sum += x;
    }
    targets.subTargets.push_back(subs);
    targets.typeTargets.push_back(sum);
  }
  b.targets = targets;

  Allocation alloc;
  for (const auto& t : b.catalog.types)
    for (const auto& s : t.subTypes)
      for (std::size_t k = 0; k < s.wardOptions.size(); ++k)
        alloc.entries.push_back({t.g, s.p, static_cast<int>(k + 1), s.wardOptions[k], value(0.0, 3.0)});
  b.allocation = alloc;
  checkBundle(b);
  return b;
}

}  // namespace hoplite
