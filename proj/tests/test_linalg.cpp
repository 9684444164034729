#include <doctest.h>

#include <cmath>

#include "qcorr/eig.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/matrix.hpp"
#include "qcorr/rng.hpp"
#include "qcorr/state.hpp"

using namespace qcorr;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g = detail::random_ginibre(n, n, rng);
  ComplexMatrix h = g;
  h += g.adjoint();
  h *= 0.5;
  return h;
}

ComplexMatrix random_psd(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix g = detail::random_ginibre(n, n, rng);
  return g * g.adjoint();
}

}  // namespace

TEST_CASE("eigh handles the hand-checked 2x2 cases") {
  SUBCASE("identity") {
    HermitianEigen eg = eigh(ComplexMatrix::identity(2));
    CHECK(eg.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(eg.eigenvalues[1] == doctest::Approx(1.0));
  }
  SUBCASE("already diagonal") {
    ComplexMatrix d(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    HermitianEigen eg = eigh(d);
    CHECK(eg.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(eg.eigenvalues[1] == doctest::Approx(3.0));
  }
  SUBCASE("pauli x") {
    ComplexMatrix x(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    HermitianEigen eg = eigh(x);
    CHECK(eg.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(eg.eigenvalues[1] == doctest::Approx(1.0));
    // eigenvectors (|0> -+ |1>)/sqrt(2) up to phase
    for (std::size_t col = 0; col < 2; ++col) {
      const double sign = (col == 0) ? -1.0 : 1.0;
      const cplx ratio = eg.eigenvectors(1, col) / eg.eigenvectors(0, col);
      CHECK(std::abs(ratio - sign) < 1e-12);
      CHECK(std::abs(eg.eigenvectors(0, col)) ==
            doctest::Approx(1.0 / std::sqrt(2.0)));
    }
  }
}

TEST_CASE("eigh invariants: reconstruction and unitarity on random input") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const std::size_t n = 2 + seed % 7;
    ComplexMatrix h = random_hermitian(n, seed);
    HermitianEigen eg = eigh(h);
    for (std::size_t i = 0; i + 1 < n; ++i)
      CHECK(eg.eigenvalues[i] <= eg.eigenvalues[i + 1]);

    ComplexMatrix scaled = eg.eigenvectors;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) scaled(r, c) *= eg.eigenvalues[c];
    ComplexMatrix recon = scaled * eg.eigenvectors.adjoint();
    recon -= h;
    CHECK(recon.frobenius_norm() <=
          1e-10 * std::max(1.0, h.frobenius_norm()));

    ComplexMatrix gram = eg.eigenvectors.adjoint() * eg.eigenvectors;
    gram -= ComplexMatrix::identity(n);
    CHECK(gram.frobenius_norm() <= 1e-10);

    // eigenvalue-only path agrees
    const std::vector<double> vals = eigh_values(h);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(vals[i] == doctest::Approx(eg.eigenvalues[i]).epsilon(1e-12));
  }
}

TEST_CASE("eigh rejects bad input") {
  ComplexMatrix rect(2, 3);
  CHECK_THROWS_AS(eigh(rect), Error);
  ComplexMatrix nh(2, 2);
  nh(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(eigh(nh), Error);
  try {
    eigh(nh);
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_hermitian);
  }
}

TEST_CASE("matrix_sqrt basics and property sqrt(p)^2 = p") {
  CHECK((matrix_sqrt(ComplexMatrix::identity(3)) -
         ComplexMatrix::identity(3))
            .frobenius_norm() < 1e-12);

  ComplexMatrix d(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  ComplexMatrix r = matrix_sqrt(d);
  CHECK(std::abs(r(0, 0) - 2.0) < 1e-12);
  CHECK(std::abs(r(1, 1) - 3.0) < 1e-12);

  // rank-1 projector is idempotent
  Rng rng(5);
  ComplexMatrix v = detail::random_ginibre(4, 1, rng);
  const double nrm = std::sqrt(kernels::norm_sq(v.data(), 4));
  v *= cplx(1.0 / nrm, 0.0);
  ComplexMatrix proj = outer(v, v);
  CHECK((matrix_sqrt(proj) - proj).frobenius_norm() < 1e-10);

  for (std::uint64_t seed = 10; seed < 16; ++seed) {
    const std::size_t n = 2 + seed % 5;
    ComplexMatrix p = random_psd(n, seed);
    ComplexMatrix root = matrix_sqrt(p);
    ComplexMatrix sq = root * root;
    sq -= p;
    CHECK(sq.frobenius_norm() <= 1e-9 * std::max(1.0, p.frobenius_norm()));
  }

  ComplexMatrix neg(2, 2);
  neg(0, 0) = -1.0;
  neg(1, 1) = 1.0;
  CHECK_THROWS_AS(matrix_sqrt(neg), Error);
}

TEST_CASE("matrix_log2 uses base 2 and the support convention") {
  ComplexMatrix half = ComplexMatrix::identity(2);
  half *= 0.5;
  ComplexMatrix l = matrix_log2(half);
  CHECK(std::abs(l(0, 0) + 1.0) < 1e-12);
  CHECK(std::abs(l(1, 1) + 1.0) < 1e-12);

  ComplexMatrix sing(2, 2);
  sing(0, 0) = 1.0;  // diag(1, 0) -> diag(0, 0)
  CHECK(matrix_log2(sing).frobenius_norm() < 1e-12);

  ComplexMatrix d(2, 2);
  d(0, 0) = 0.25;
  d(1, 1) = 0.75;
  ComplexMatrix ld = matrix_log2(d);
  CHECK(std::abs(ld(0, 0) - (-2.0)) < 1e-12);
  CHECK(std::abs(ld(1, 1) - std::log2(0.75)) < 1e-12);
}

TEST_CASE("tensor product basics") {
  CHECK((tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) -
         ComplexMatrix::identity(4))
            .frobenius_norm() < 1e-15);

  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    ComplexMatrix a = detail::random_ginibre(2, 2, rng);
    ComplexMatrix b = detail::random_ginibre(2, 2, rng);
    const cplx t = tensor(a, b).trace();
    CHECK(std::abs(t - a.trace() * b.trace()) < 1e-12);
  }
}

TEST_CASE("matrix_exp_ih gives a unitary and unitary_log inverts it") {
  for (std::uint64_t seed = 21; seed < 25; ++seed) {
    const std::size_t n = 2 + seed % 4;
    ComplexMatrix h = random_hermitian(n, seed);
    ComplexMatrix u = matrix_exp_ih(h);
    ComplexMatrix gram = u.adjoint() * u;
    gram -= ComplexMatrix::identity(n);
    CHECK(gram.frobenius_norm() < 1e-12);

    ComplexMatrix h2 = unitary_log(u);
    ComplexMatrix u2 = matrix_exp_ih(h2);
    u2 -= u;
    CHECK(u2.frobenius_norm() < 1e-10);
  }
}

TEST_CASE("partial_trace on products and Bell state") {
  Rng rng(17);
  DensityMatrix ra = random_density(SubsystemLayout({{"a", 2}}), 2, 100);
  DensityMatrix rb = random_density(SubsystemLayout({{"b", 3}}), 3, 101);
  DensityMatrix prod = DensityMatrix::unchecked(
      SubsystemLayout({{"a", 2}, {"b", 3}}), tensor(ra.mat(), rb.mat()));

  DensityMatrix got = partial_trace(prod, {"a"});
  CHECK((got.mat() - ra.mat()).frobenius_norm() < 1e-12);
  CHECK(std::abs(got.mat().trace() - cplx(1.0, 0.0)) < 1e-12);

  DensityMatrix phi = bell().to_density();
  DensityMatrix red = partial_trace(phi, {"a"});
  ComplexMatrix want = ComplexMatrix::identity(2);
  want *= 0.5;
  CHECK((red.mat() - want).frobenius_norm() < 1e-12);

  DensityMatrix all = partial_trace(prod, {"a", "b"});
  CHECK((all.mat() - prod.mat()).frobenius_norm() < 1e-14);

  CHECK_THROWS_AS(partial_trace(prod, {"nope"}), Error);
}

TEST_CASE("partial_trace preserves trace and positivity on random states") {
  for (std::uint64_t seed = 30; seed < 36; ++seed) {
    SubsystemLayout layout({{"a", 2}, {"b", 3}});
    DensityMatrix rho = random_density(layout, 1 + seed % 6, seed);
    DensityMatrix red = partial_trace(rho, {"b"});
    CHECK(std::abs(red.mat().trace() - cplx(1.0, 0.0)) < 1e-12);
    const std::vector<double> ev = eigh_values(red.mat());
    CHECK(ev.front() > -1e-12);
  }
}

TEST_CASE("purify: canonical form and recovery") {
  SUBCASE("pure input has rank-1 ancilla") {
    PureState psi = random_pure(SubsystemLayout::bipartite(2, 2), 7);
    PureState pur = purify(psi.to_density());
    CHECK(pur.layout.dim_of("env") == 1);
  }
  SUBCASE("maximally mixed qubit") {
    ComplexMatrix half = ComplexMatrix::identity(2);
    half *= 0.5;
    DensityMatrix rho(SubsystemLayout({{"a", 2}}), half);
    PureState pur = purify(rho);
    CHECK(pur.dim() == 4);
    DensityMatrix back = partial_trace(pur.to_density(), {"a"});
    CHECK((back.mat() - rho.mat()).frobenius_norm() < 1e-10);
  }
  SUBCASE("diag(0.9, 0.1) gives sqrt(0.9)|00> + sqrt(0.1)|11>") {
    ComplexMatrix d(2, 2);
    d(0, 0) = 0.9;
    d(1, 1) = 0.1;
    DensityMatrix rho(SubsystemLayout({{"a", 2}}), d);
    PureState pur = purify(rho);
    REQUIRE(pur.dim() == 4);
    CHECK(std::abs(std::abs(pur.amps[0]) - std::sqrt(0.9)) < 1e-12);
    CHECK(std::abs(std::abs(pur.amps[3]) - std::sqrt(0.1)) < 1e-12);
    CHECK(std::abs(pur.amps[1]) < 1e-12);
    CHECK(std::abs(pur.amps[2]) < 1e-12);
  }
  SUBCASE("purify then trace ancilla is the identity map") {
    for (std::uint64_t seed = 50; seed < 55; ++seed) {
      SubsystemLayout layout = SubsystemLayout::bipartite(2, 2);
      DensityMatrix rho = random_density(layout, 1 + seed % 4, seed);
      PureState pur = purify(rho);
      DensityMatrix back = partial_trace(pur.to_density(), {"a", "b"});
      CHECK((back.mat() - rho.mat()).frobenius_norm() < 1e-10);
    }
  }
}

TEST_CASE("schmidt decomposition") {
  SUBCASE("product state |00>") {
    PureState psi{SubsystemLayout::bipartite(2, 2),
                  {1.0, 0.0, 0.0, 0.0}};
    SchmidtDecomposition sd = schmidt(psi, {"a"});
    REQUIRE(sd.coefficients.size() == 1);
    CHECK(sd.coefficients[0] == doctest::Approx(1.0));
    CHECK(std::abs(std::abs(sd.left(0, 0)) - 1.0) < 1e-12);
  }
  SUBCASE("bell state") {
    SchmidtDecomposition sd = schmidt(bell(), {"a"});
    REQUIRE(sd.coefficients.size() == 2);
    CHECK(sd.coefficients[0] == doctest::Approx(0.5));
    CHECK(sd.coefficients[1] == doctest::Approx(0.5));
  }
  SUBCASE("sqrt(0.9)|00> + sqrt(0.1)|11>") {
    PureState psi{SubsystemLayout::bipartite(2, 2),
                  {std::sqrt(0.9), 0.0, 0.0, std::sqrt(0.1)}};
    SchmidtDecomposition sd = schmidt(psi, {"a"});
    REQUIRE(sd.coefficients.size() == 2);
    CHECK(sd.coefficients[0] == doctest::Approx(0.9));
    CHECK(sd.coefficients[1] == doctest::Approx(0.1));
  }
  SUBCASE("coefficients equal reduced-state eigenvalues; reconstruction") {
    for (std::uint64_t seed = 60; seed < 65; ++seed) {
      SubsystemLayout layout = SubsystemLayout::bipartite(2, 3);
      PureState psi = random_pure(layout, seed);
      SchmidtDecomposition sd = schmidt(psi, {"a"});
      double total = 0.0;
      for (double c : sd.coefficients) total += c;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
      for (std::size_t i = 0; i + 1 < sd.coefficients.size(); ++i)
        CHECK(sd.coefficients[i] >= sd.coefficients[i + 1]);

      std::vector<double> red = eigh_values(
          partial_trace(psi.to_density(), {"a"}).mat());
      std::sort(red.rbegin(), red.rend());
      for (std::size_t i = 0; i < sd.coefficients.size(); ++i)
        CHECK(std::abs(sd.coefficients[i] - red[i]) < 1e-10);

      // reconstruction sum_k sqrt(l_k) |x_k>|y_k>
      std::vector<cplx> recon(psi.dim(), cplx(0.0, 0.0));
      const std::size_t dr = 3;
      for (std::size_t k = 0; k < sd.coefficients.size(); ++k) {
        const double root = std::sqrt(sd.coefficients[k]);
        for (std::size_t l = 0; l < 2; ++l)
          for (std::size_t r = 0; r < dr; ++r)
            recon[l * dr + r] += root * sd.left(l, k) * sd.right(r, k);
      }
      double err = 0.0;
      for (std::size_t i = 0; i < recon.size(); ++i)
        err += std::norm(recon[i] - psi.amps[i]);
      CHECK(std::sqrt(err) < 1e-9);
    }
  }
  SUBCASE("unnormalized input rejected") {
    PureState bad{SubsystemLayout::bipartite(2, 2), {1.0, 1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(schmidt(bad, {"a"}), Error);
  }
}
