#include <doctest.h>

#include <cmath>
#include <limits>

#include "qcorr/errors.hpp"
#include "qcorr/geometry.hpp"
#include "qcorr/rng.hpp"
#include "qcorr/state.hpp"

using namespace qcorr;

namespace {

const double kSqrt2Inv = 1.0 / std::sqrt(2.0);

DensityMatrix pure_qubit_pair(const std::vector<cplx>& amps) {
  PureState psi{SubsystemLayout::bipartite(2, 2), amps};
  return psi.to_density();
}

DensityMatrix qubit(const std::vector<cplx>& amps) {
  PureState psi{SubsystemLayout({{"a", 2}}), amps};
  return psi.to_density();
}

DensityMatrix maximally_mixed_qubit() {
  ComplexMatrix m = ComplexMatrix::identity(2);
  m *= 0.5;
  return DensityMatrix(SubsystemLayout({{"a", 2}}), m);
}

DensityMatrix random_cq_state(std::uint64_t seed, std::size_t da = 2,
                              std::size_t db = 2, bool full_rank = true) {
  Rng rng(seed);
  std::vector<double> w(da);
  double s = 0.0;
  for (double& v : w) {
    v = rng.next_double() + 0.1;
    s += v;
  }
  for (double& v : w) v /= s;
  ComplexMatrix basis = random_unitary(da, seed + 1000);
  std::vector<DensityMatrix> conds;
  for (std::size_t i = 0; i < da; ++i)
    conds.push_back(random_density(SubsystemLayout({{"b", db}}),
                                   full_rank ? db : 1, seed * 7 + i));
  return make_cq(w, basis, conds);
}

}  // namespace

TEST_CASE("fidelity closed-form cases") {
  DensityMatrix zero = qubit({1.0, 0.0});
  DensityMatrix one = qubit({0.0, 1.0});

  CHECK(fidelity(zero, zero) == doctest::Approx(1.0));
  CHECK(fidelity(zero, one) == doctest::Approx(0.0));
  CHECK(fidelity(zero, maximally_mixed_qubit()) ==
        doctest::Approx(kSqrt2Inv).epsilon(1e-9));

  SUBCASE("symmetry and pure-pure overlap") {
    Rng rng(5);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      DensityMatrix r1 = random_density(SubsystemLayout::bipartite(2, 2),
                                        1 + seed % 4, 800 + seed);
      DensityMatrix r2 = random_density(SubsystemLayout::bipartite(2, 2),
                                        1 + (seed + 2) % 4, 900 + seed);
      CHECK(std::abs(fidelity(r1, r2) - fidelity(r2, r1)) < 1e-9);

      PureState p1 = random_pure(SubsystemLayout::bipartite(2, 2), 700 + seed);
      PureState p2 = random_pure(SubsystemLayout::bipartite(2, 2), 750 + seed);
      cplx overlap(0.0, 0.0);
      for (std::size_t i = 0; i < 4; ++i)
        overlap += std::conj(p1.amps[i]) * p2.amps[i];
      CHECK(std::abs(fidelity(p1.to_density(), p2.to_density()) -
                     std::abs(overlap)) < 1e-10);
    }
  }

  DensityMatrix r23 = random_density(SubsystemLayout::bipartite(2, 3), 2, 4);
  CHECK_THROWS_AS(fidelity(zero, r23), Error);
}

TEST_CASE("bures distance squared") {
  DensityMatrix zero = qubit({1.0, 0.0});
  DensityMatrix one = qubit({0.0, 1.0});
  CHECK(bures_distance_sq(zero, zero) == doctest::Approx(0.0));
  CHECK(bures_distance_sq(zero, one) == doctest::Approx(2.0));
  CHECK(bures_distance_sq(zero, maximally_mixed_qubit()) ==
        doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("relative entropy with the infinity sentinel") {
  DensityMatrix zero = qubit({1.0, 0.0});
  DensityMatrix one = qubit({0.0, 1.0});
  CHECK(relative_entropy(zero, zero) == doctest::Approx(0.0));
  CHECK(relative_entropy(zero, maximally_mixed_qubit()) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(relative_entropy(zero, one) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("entropy") {
  CHECK(entropy(bell().to_density()) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(entropy(werner(0.0)) == doctest::Approx(2.0));
  CHECK(entropy(maximally_mixed_qubit()) == doctest::Approx(1.0));
}

TEST_CASE("pinch") {
  SUBCASE("CQ state in its own classical basis is unchanged") {
    DensityMatrix cq = random_cq_state(3);
    // classical basis recovered from the left marginal eigenvectors would
    // need the degenerate refinement; use the constructing basis instead.
    ComplexMatrix basis = random_unitary(2, 3 + 1000);
    PinchingMap map({"a"}, basis);
    DensityMatrix pinched = pinch(cq, map);
    CHECK((pinched.mat() - cq.mat()).frobenius_norm() < 1e-10);
  }
  SUBCASE("bell state pinched in the computational basis") {
    PinchingMap map({"a"}, ComplexMatrix::identity(2));
    DensityMatrix pinched = pinch(bell().to_density(), map);
    ComplexMatrix want(4, 4);
    want(0, 0) = 0.5;
    want(3, 3) = 0.5;
    CHECK((pinched.mat() - want).frobenius_norm() < 1e-13);
  }
  SUBCASE("idempotence and trace preservation") {
    DensityMatrix rho = random_density(SubsystemLayout::bipartite(2, 3), 5, 42);
    PinchingMap map({"a"}, random_unitary(2, 43));
    DensityMatrix once = pinch(rho, map);
    DensityMatrix twice = pinch(once, map);
    CHECK((once.mat() - twice.mat()).frobenius_norm() < 1e-12);
    CHECK(std::abs(once.mat().trace() - cplx(1.0, 0.0)) < 1e-12);
  }
}

TEST_CASE("relative-entropy CQ decomposition identity") {
  SUBCASE("bell state against I/4 in the computational basis") {
    ComplexMatrix mixed = ComplexMatrix::identity(4);
    mixed *= 0.25;
    DensityMatrix sigma(SubsystemLayout::bipartite(2, 2), mixed);
    PinchingMap map({"a"}, ComplexMatrix::identity(2));
    auto [lhs, rhs] = relent_cq_decomposition(bell().to_density(), sigma, map);
    CHECK(lhs == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rhs == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("identity holds on random pairs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      DensityMatrix rho = random_density(SubsystemLayout::bipartite(2, 2),
                                         1 + seed % 4, 8000 + seed);
      DensityMatrix sigma = random_cq_state(8100 + seed);
      ComplexMatrix basis = random_unitary(2, 8100 + seed + 1000);
      PinchingMap map({"a"}, basis);
      auto [lhs, rhs] = relent_cq_decomposition(rho, sigma, map);
      CHECK(std::abs(lhs - rhs) <= 1e-8);
    }
  }
  SUBCASE("basis mismatch is rejected") {
    DensityMatrix sigma = random_cq_state(11);
    PinchingMap wrong({"a"}, random_unitary(2, 999));
    CHECK_THROWS_AS(
        relent_cq_decomposition(werner(0.3), sigma, wrong), Error);
  }
}

TEST_CASE("contractivity and joint convexity spot checks") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    SubsystemLayout layout({{"a", 2}, {"b", 2}, {"c", 2}});
    DensityMatrix rho = random_density(layout, 3 + seed % 6, 8200 + seed);
    DensityMatrix sig = random_density(layout, 2 + seed % 7, 8300 + seed);
    DensityMatrix rho_r = partial_trace(rho, {"a", "b"});
    DensityMatrix sig_r = partial_trace(sig, {"a", "b"});
    CHECK(bures_distance_sq(rho_r, sig_r) <=
          bures_distance_sq(rho, sig) + 1e-9);
    const double r_full = relative_entropy(rho, sig);
    const double r_red = relative_entropy(rho_r, sig_r);
    if (std::isfinite(r_full)) CHECK(r_red <= r_full + 1e-9);
  }

  // joint convexity of d_B^2 on random tuples
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Rng rng(9000 + seed);
    const double p = rng.next_double();
    SubsystemLayout layout = SubsystemLayout::bipartite(2, 2);
    DensityMatrix r1 = random_density(layout, 2, 9100 + seed);
    DensityMatrix r2 = random_density(layout, 3, 9200 + seed);
    DensityMatrix s1 = random_density(layout, 4, 9300 + seed);
    DensityMatrix s2 = random_density(layout, 2, 9400 + seed);
    ComplexMatrix rm = r1.mat();
    rm *= p;
    ComplexMatrix rm2 = r2.mat();
    rm2 *= (1.0 - p);
    rm += rm2;
    ComplexMatrix sm = s1.mat();
    sm *= p;
    ComplexMatrix sm2 = s2.mat();
    sm2 *= (1.0 - p);
    sm += sm2;
    const double lhs =
        bures_distance_sq(DensityMatrix::unchecked(layout, rm),
                          DensityMatrix::unchecked(layout, sm));
    const double rhs = p * bures_distance_sq(r1, s1) +
                       (1.0 - p) * bures_distance_sq(r2, s2);
    CHECK(lhs <= rhs + 1e-9);
  }
}
