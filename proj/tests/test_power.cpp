#include "oracle/reference.hpp"
#include "relaysim/power.hpp"

#include <doctest.h>

#include <random>

using namespace relaysim;

namespace {

double totalRate(const RVector& p) {
  double r = 0.0;
  for (double v : p) r += std::log2(1.0 + v);
  return r;
}

// Rate of relay power x on a 1e-4 grid with the MS streams water-filled on
// what remains: the rule-respecting oracle for the two-stage allocation.
double bestCappedRate(double msTau, double relayWeight, double cap, double budget) {
  // The objective is concave in the relay power, so ternary search finds it.
  const auto rate = [&](double x) {
    return std::log2(1.0 + msTau * (budget - relayWeight * x)) + std::log2(1.0 + x);
  };
  double lo = 0.0;
  double hi = std::min(cap, budget / relayWeight);
  for (int it = 0; it < 300; ++it) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (rate(a) < rate(b)) {
      lo = a;
    } else {
      hi = b;
    }
  }
  return rate(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("single stream takes the whole budget") {
  const double tau[] = {1.0};
  const PowerAllocation a = waterFill(tau, 100.0);
  CHECK(a.streamPowers(0) == doctest::Approx(100.0));
  CHECK(a.waterLevel == doctest::Approx(101.0));
}

TEST_CASE("symmetric streams split evenly") {
  const double tau[] = {1.0, 1.0};
  const PowerAllocation a = waterFill(tau, 10.0);
  CHECK(a.streamPowers(0) == doctest::Approx(5.0));
  CHECK(a.streamPowers(1) == doctest::Approx(5.0));
  CHECK(a.waterLevel == doctest::Approx(6.0));
}

TEST_CASE("a weak stream is shut off") {
  const double tau[] = {2.0, 0.5};
  const PowerAllocation a = waterFill(tau, 1.0);
  CHECK(a.streamPowers(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a.streamPowers(1) == 0.0);
  CHECK(a.waterLevel == doctest::Approx(1.5));

  // Grid search over P1 in [0, 2] on the budget line P1 / 2 + 2 P2 = 1.
  double bestRate = -1.0, bestP1 = -1.0;
  for (long i = 0; i <= 20000; ++i) {
    const double p1 = i * 1e-4;
    const double p2 = (1.0 - p1 / 2.0) / 2.0;
    const double r = std::log2(1.0 + p1) + std::log2(1.0 + p2);
    if (r > bestRate) {
      bestRate = r;
      bestP1 = p1;
    }
  }
  CHECK(bestP1 == doctest::Approx(2.0));
  CHECK(totalRate(a.streamPowers) == doctest::Approx(bestRate).epsilon(1e-12));
}

TEST_CASE("zero budget gives zero power") {
  const double tau[] = {1.0, 3.0};
  const PowerAllocation a = waterFill(tau, 0.0);
  CHECK(a.streamPowers.isZero(0.0));
}

TEST_CASE("invalid water-filling inputs") {
  const double bad[] = {1.0, 0.0};
  CHECK_THROWS_AS(waterFill(bad, 1.0), std::invalid_argument);
  const double tau[] = {1.0};
  CHECK_THROWS_AS(waterFill(tau, -1.0), std::invalid_argument);
}

TEST_CASE("water-filling properties on random instances") {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> logTau(-2.0, 2.0);
  std::uniform_real_distribution<double> budget(0.0, 20.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 5;
    std::vector<double> tau(n);
    for (double& t : tau) t = std::pow(10.0, logTau(rng));
    const double pt = budget(rng);
    const PowerAllocation a = waterFill(tau, pt);

    CHECK((a.streamPowers.array() >= 0.0).all());
    CHECK(std::abs(a.bsPowerUsed() - pt) <= 1e-9 * std::max(1.0, pt));

    // Active set is closed under larger tau.
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (a.streamPowers(j) > 0.0 && tau[k] > tau[j]) CHECK(a.streamPowers(k) > 0.0);

    // Matches the independent removal algorithm.
    const auto ref = reference::waterFillByRemoval(tau, pt);
    for (int k = 0; k < n; ++k) CHECK(std::abs(a.streamPowers(k) - ref[k]) <= 1e-9 * (1.0 + ref[k]));

    // More budget never hurts.
    const PowerAllocation more = waterFill(tau, pt + 1.0);
    CHECK(totalRate(more.streamPowers) >= totalRate(a.streamPowers) - 1e-12);
  }
}

TEST_CASE("greedy grid oracle agrees with exhaustive grid search") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<double> tau{u(rng), u(rng), u(rng)};
    const double budget = 1.0;
    const double step = 1e-3;
    double brute = -1.0;
    const int units = 1000;
    for (int a = 0; a <= units; ++a)
      for (int b = 0; a + b <= units; ++b) {
        const int c = units - a - b;
        brute = std::max(brute, std::log2(1 + tau[0] * a * step) + std::log2(1 + tau[1] * b * step) +
                                    std::log2(1 + tau[2] * c * step));
      }
    CHECK(reference::gridOptimalRate(tau, budget, step) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("two-stage allocation without a cap is a joint water-fill") {
  const double ms[] = {1.0};
  const PowerAllocation a = twoStageAllocate(ms, 1.0, std::nullopt, 10.0);
  CHECK(a.streamPowers(0) == doctest::Approx(5.0));
  CHECK(a.streamPowers(1) == doctest::Approx(5.0));
  CHECK_FALSE(a.relayCapActive);
}

TEST_CASE("an active relay cap pins the relay stream and refills the rest") {
  const double ms[] = {1.0};
  const PowerAllocation a = twoStageAllocate(ms, 1.0, 2.0, 10.0);
  CHECK(a.relayCapActive);
  CHECK(a.streamPowers(1) == 2.0);
  CHECK(a.streamPowers(0) == doctest::Approx(8.0));
  CHECK(a.bsPowerUsed() == doctest::Approx(10.0));
  CHECK(totalRate(a.streamPowers) ==
        doctest::Approx(bestCappedRate(1.0, 1.0, 2.0, 10.0)).epsilon(1e-9));
}

TEST_CASE("zero relay cap silences the relay stream") {
  const double ms[] = {1.0, 0.5};
  const PowerAllocation a = twoStageAllocate(ms, 2.0, 0.0, 10.0);
  CHECK(a.streamPowers(2) == 0.0);
  const PowerAllocation plain = waterFill(ms, 10.0);
  CHECK(a.streamPowers.head(2).isApprox(plain.streamPowers));
}

TEST_CASE("a relay stream that costs the BS nothing is limited by its cap") {
  const PowerAllocation a = twoStageAllocate({}, 0.0, 7.5, 100.0);
  CHECK(a.streamPowers.size() == 1);
  CHECK(a.streamPowers(0) == 7.5);
  CHECK(a.relayCapActive);
  CHECK_THROWS_AS(twoStageAllocate({}, 0.0, std::nullopt, 100.0), std::invalid_argument);
}

TEST_CASE("two-stage allocation properties") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> logv(-1.5, 1.5);
  std::uniform_real_distribution<double> capDist(0.0, 40.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = trial % 3;
    std::vector<double> ms(n);
    for (double& t : ms) t = std::pow(10.0, logv(rng));
    const double w = std::pow(10.0, logv(rng));
    const double cap = capDist(rng);
    const double budget = 100.0;
    const PowerAllocation a = twoStageAllocate(ms, w, cap, budget);

    CHECK((a.streamPowers.array() >= 0.0).all());
    CHECK(a.streamPowers(n) <= cap + 1e-12);
    CHECK(a.bsPowerUsed() <= budget + 1e-9);
    if (a.relayCapActive) CHECK(a.streamPowers(n) == cap);
    CHECK_FALSE(a.residualClamped);
    if (n > 0 || !a.relayCapActive) CHECK(std::abs(a.bsPowerUsed() - budget) <= 1e-9 * budget);

    const PowerAllocation looser = twoStageAllocate(ms, w, cap * 1.5 + 0.1, budget);
    CHECK(totalRate(looser.streamPowers) >= totalRate(a.streamPowers) - 1e-12);
    const PowerAllocation richer = twoStageAllocate(ms, w, cap, budget * 1.2);
    CHECK(totalRate(richer.streamPowers) >= totalRate(a.streamPowers) - 1e-12);

    if (n == 1) {
      CHECK(totalRate(a.streamPowers) <= bestCappedRate(ms[0], w, cap, budget) + 1e-9);
      CHECK(totalRate(a.streamPowers) >= bestCappedRate(ms[0], w, cap, budget) - 1e-9);
    }
  }
}

TEST_CASE("relay cap") {
  CHECK(relayCap(50.0, Complex(1.0, 0.0)) == doctest::Approx(50.0));
  CHECK(relayCap(50.0, Complex(0.0, 0.5)) == doctest::Approx(200.0));
  CHECK(relayCap(0.0, Complex(0.3, 0.4)) == 0.0);
  CHECK_THROWS_AS(relayCap(50.0, Complex(0.0, 0.0)), DegenerateRelayWeight);
  CHECK_THROWS_AS(relayCap(50.0, Complex(1e-13, 0.0)), DegenerateRelayWeight);
}
