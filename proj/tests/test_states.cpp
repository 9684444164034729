#include <doctest.h>

#include <cmath>

#include "qcorr/errors.hpp"
#include "qcorr/geometry.hpp"
#include "qcorr/rng.hpp"
#include "qcorr/state.hpp"

using namespace qcorr;

namespace {

std::vector<double> random_distribution(std::size_t k, Rng& rng) {
  std::vector<double> w(k);
  double s = 0.0;
  for (double& v : w) {
    v = rng.next_double() + 0.05;
    s += v;
  }
  for (double& v : w) v /= s;
  return w;
}

DensityMatrix random_cq(std::uint64_t seed, std::size_t da = 2,
                        std::size_t db = 2) {
  Rng rng(seed);
  std::vector<double> w = random_distribution(da, rng);
  ComplexMatrix basis = random_unitary(da, seed * 31 + 1);
  std::vector<DensityMatrix> conds;
  for (std::size_t i = 0; i < da; ++i)
    conds.push_back(random_density(SubsystemLayout({{"b", db}}), db,
                                   seed * 131 + i));
  return make_cq(w, basis, conds);
}

}  // namespace

TEST_CASE("make_cq basics") {
  SUBCASE("single term is a product state") {
    ComplexMatrix basis(2, 1);
    basis(0, 0) = 1.0;
    DensityMatrix rb = random_density(SubsystemLayout({{"b", 2}}), 2, 9);
    DensityMatrix cq = make_cq({1.0}, basis, {rb});
    ComplexMatrix want = tensor(outer(ComplexMatrix::column({1.0, 0.0}),
                                      ComplexMatrix::column({1.0, 0.0})),
                                rb.mat());
    CHECK((cq.mat() - want).frobenius_norm() < 1e-12);
    CHECK(is_cq(cq, {"a"}));
  }
  SUBCASE("diagonal conditionals in one basis give a CC state") {
    ComplexMatrix basis = ComplexMatrix::identity(2);
    ComplexMatrix d1(2, 2), d2(2, 2);
    d1(0, 0) = 0.7;
    d1(1, 1) = 0.3;
    d2(0, 0) = 0.2;
    d2(1, 1) = 0.8;
    DensityMatrix cq = make_cq(
        {0.5, 0.5}, basis,
        {DensityMatrix(SubsystemLayout({{"b", 2}}), d1),
         DensityMatrix(SubsystemLayout({{"b", 2}}), d2)});
    CHECK(is_cc(cq));
  }
  SUBCASE("rejects bad input") {
    ComplexMatrix skew(2, 2);
    skew(0, 0) = 1.0;
    skew(0, 1) = 1.0;  // not orthonormal
    skew(1, 1) = 1.0;
    DensityMatrix rb = random_density(SubsystemLayout({{"b", 2}}), 1, 3);
    CHECK_THROWS_AS(make_cq({0.5, 0.5}, skew, {rb, rb}), Error);
    CHECK_THROWS_AS(make_cq({0.7, 0.7}, ComplexMatrix::identity(2), {rb, rb}),
                    Error);
  }
}

TEST_CASE("make_cc basics") {
  SUBCASE("uniform weights give the maximally mixed state") {
    DensityMatrix cc =
        make_cc({0.25, 0.25, 0.25, 0.25}, ComplexMatrix::identity(2),
                ComplexMatrix::identity(2));
    ComplexMatrix want = ComplexMatrix::identity(4);
    want *= 0.25;
    CHECK((cc.mat() - want).frobenius_norm() < 1e-13);
  }
  SUBCASE("classically correlated state") {
    DensityMatrix cc = make_cc({0.5, 0.0, 0.0, 0.5},
                               ComplexMatrix::identity(2),
                               ComplexMatrix::identity(2));
    CHECK(cc.mat()(0, 0).real() == doctest::Approx(0.5));
    CHECK(cc.mat()(3, 3).real() == doctest::Approx(0.5));
    CHECK(std::abs(cc.mat()(0, 3)) < 1e-14);
    CHECK(is_cc(cc));
  }
}

TEST_CASE("assemble_separable and the explicit Werner boundary assembly") {
  SUBCASE("K=1 gives a product state") {
    DensityMatrix ra = random_density(SubsystemLayout({{"a", 2}}), 2, 1);
    DensityMatrix rb = random_density(SubsystemLayout({{"b", 2}}), 2, 2);
    SeparableAnsatz ansatz({1.0}, {ra.mat()}, {rb.mat()});
    DensityMatrix sep = assemble_separable(ansatz);
    CHECK((sep.mat() - tensor(ra.mat(), rb.mat())).frobenius_norm() < 1e-13);
  }
  SUBCASE("werner(1/3) from six product states") {
    // (|00>, |11>, |++>, |-->, |y+ y->, |y- y+>) at weight 1/6 each
    auto proj = [](const std::vector<cplx>& v) {
      ComplexMatrix c = ComplexMatrix::column(v);
      return outer(c, c);
    };
    const double s = 1.0 / std::sqrt(2.0);
    const cplx im(0.0, 1.0);
    std::vector<ComplexMatrix> left = {
        proj({1, 0}), proj({0, 1}), proj({s, s}),
        proj({s, -s}), proj({s, im * s}), proj({s, -im * s})};
    std::vector<ComplexMatrix> right = {
        proj({1, 0}), proj({0, 1}), proj({s, s}),
        proj({s, -s}), proj({s, -im * s}), proj({s, im * s})};
    SeparableAnsatz ansatz(std::vector<double>(6, 1.0 / 6.0), left, right);
    DensityMatrix sep = assemble_separable(ansatz);
    CHECK((sep.mat() - werner(1.0 / 3.0).mat()).frobenius_norm() < 1e-12);
    // PPT oracle confirms the boundary
    CHECK(std::abs(min_pt_eigenvalue(sep, {"b"})) < 1e-10);
  }
}

TEST_CASE("embed_separable_to_cq") {
  SUBCASE("product state embeds with the purification of rho_a") {
    DensityMatrix ra = random_density(SubsystemLayout({{"a", 2}}), 2, 11);
    DensityMatrix rb = random_density(SubsystemLayout({{"b", 2}}), 2, 12);
    SeparableAnsatz ansatz({1.0}, {ra.mat()}, {rb.mat()});
    DensityMatrix ext = embed_separable_to_cq(ansatz);
    CHECK(ext.layout().dim_of("a'") == 2);  // K * d_a
    DensityMatrix back = partial_trace(ext, {"a", "b"});
    CHECK((back.mat() - tensor(ra.mat(), rb.mat())).frobenius_norm() < 1e-9);
    CHECK(is_cq(ext, {"a", "a'"}));
  }
  SUBCASE("two-term ansatz on 2x2 with default ancilla") {
    Rng rng(21);
    std::vector<ComplexMatrix> left, right;
    for (int k = 0; k < 2; ++k) {
      left.push_back(random_density(SubsystemLayout({{"a", 2}}), 2, 300 + k).mat());
      right.push_back(
          random_density(SubsystemLayout({{"b", 2}}), 2, 400 + k).mat());
    }
    SeparableAnsatz ansatz({0.3, 0.7}, left, right);
    DensityMatrix ext = embed_separable_to_cq(ansatz);
    DensityMatrix back = partial_trace(ext, {"a", "b"});
    DensityMatrix direct = assemble_separable(ansatz);
    CHECK((back.mat() - direct.mat()).frobenius_norm() < 1e-9);
    CHECK(is_cq(ext, {"a", "a'"}));
  }
  SUBCASE("ancilla too small is rejected") {
    std::vector<ComplexMatrix> left, right;
    for (int k = 0; k < 3; ++k) {
      left.push_back(random_density(SubsystemLayout({{"a", 2}}), 2, 500 + k).mat());
      right.push_back(
          random_density(SubsystemLayout({{"b", 2}}), 1, 600 + k).mat());
    }
    SeparableAnsatz ansatz({0.3, 0.3, 0.4}, left, right);
    CHECK_THROWS_AS(embed_separable_to_cq(ansatz, 2), Error);
  }
}

TEST_CASE("random_density invariants over many seeded draws") {
  // Validity for a large corpus (the DensityMatrix constructor checks
  // hermiticity, trace and positivity).
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const std::size_t rank = 1 + seed % 4;
    DensityMatrix rho = random_density(SubsystemLayout::bipartite(2, 2), rank,
                                       seed);
    // spot-check the requested rank on a sparse subset
    if (seed % 500 == 0) {
      const std::vector<double> ev = eigh_values(rho.mat());
      CHECK(rank_of(ev, 1e-10) == rank);
    }
  }

  SUBCASE("same seed is bit-for-bit identical") {
    DensityMatrix a = random_density(SubsystemLayout::bipartite(2, 2), 3, 77);
    DensityMatrix b = random_density(SubsystemLayout::bipartite(2, 2), 3, 77);
    for (std::size_t i = 0; i < a.mat().size(); ++i)
      CHECK(a.mat().data()[i] == b.mat().data()[i]);
  }

  SUBCASE("full-rank sample mean approaches I/d") {
    ComplexMatrix mean(4, 4);
    const int samples = 3000;
    for (int s = 0; s < samples; ++s) {
      DensityMatrix rho =
          random_density(SubsystemLayout::bipartite(2, 2), 4, 9000 + s);
      mean += rho.mat();
    }
    mean *= cplx(1.0 / samples, 0.0);
    ComplexMatrix want = ComplexMatrix::identity(4);
    want *= 0.25;
    CHECK((mean - want).frobenius_norm() < 0.02);
  }

  CHECK_THROWS_AS(random_density(SubsystemLayout::bipartite(2, 2), 0, 1),
                  Error);
  CHECK_THROWS_AS(random_density(SubsystemLayout::bipartite(2, 2), 5, 1),
                  Error);
}

TEST_CASE("werner family and the PPT oracle") {
  CHECK((werner(0.0).mat() - 0.25 * ComplexMatrix::identity(4))
            .frobenius_norm() < 1e-14);
  DensityMatrix phi = bell().to_density();
  CHECK((werner(1.0).mat() - phi.mat()).frobenius_norm() < 1e-14);

  // closed-form minimum partial-transpose eigenvalue (1 - 3p) / 4
  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
    const double got = min_pt_eigenvalue(werner(p), {"b"});
    CHECK(std::abs(got - (1.0 - 3.0 * p) / 4.0) < 1e-10);
  }
  CHECK(min_pt_eigenvalue(werner(0.5), {"b"}) < -1e-3);  // entangled

  CHECK_THROWS_AS(werner(-0.1), Error);
  CHECK_THROWS_AS(werner(1.1), Error);
}

TEST_CASE("is_cq / is_cc classification") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    CHECK(is_cq(random_cq(seed), {"a"}));

  CHECK_FALSE(is_cq(bell().to_density(), {"a"}));

  ComplexMatrix mixed = ComplexMatrix::identity(4);
  mixed *= 0.25;
  CHECK(is_cq(DensityMatrix(SubsystemLayout::bipartite(2, 2), mixed), {"a"}));

  // CQ with non-commuting conditionals is not CC
  ComplexMatrix plus(2, 2);
  plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
  ComplexMatrix zero(2, 2);
  zero(0, 0) = 1.0;
  DensityMatrix cq = make_cq(
      {0.5, 0.5}, ComplexMatrix::identity(2),
      {DensityMatrix(SubsystemLayout({{"b", 2}}), plus),
       DensityMatrix(SubsystemLayout({{"b", 2}}), zero)});
  CHECK(is_cq(cq, {"a"}));
  CHECK_FALSE(is_cc(cq));
  CHECK_FALSE(is_cq(cq, {"b"}));

  // werner states are never CQ except at p = 0
  CHECK(is_cq(werner(0.0), {"a"}));
  CHECK_FALSE(is_cq(werner(0.6), {"a"}));
}

TEST_CASE("permute_subsystems and partial_transpose") {
  DensityMatrix rho = random_density(SubsystemLayout::bipartite(2, 3), 4, 55);
  DensityMatrix swapped = permute_subsystems(rho, {"b", "a"});
  CHECK(swapped.layout().part(0).label == "b");
  DensityMatrix back = permute_subsystems(swapped, {"a", "b"});
  CHECK((back.mat() - rho.mat()).frobenius_norm() < 1e-15);

  // reduced states match after the swap
  CHECK((partial_trace(rho, {"a"}).mat() -
         partial_trace(swapped, {"a"}).mat())
            .frobenius_norm() < 1e-13);

  ComplexMatrix pt = partial_transpose(rho, {"b"});
  ComplexMatrix ptpt =
      partial_transpose(DensityMatrix::unchecked(rho.layout(), pt), {"b"});
  CHECK((ptpt - rho.mat()).frobenius_norm() < 1e-15);

  // Bell partial transpose has eigenvalues (-1/2, 1/2, 1/2, 1/2)
  const std::vector<double> ev =
      eigh_values(partial_transpose(bell().to_density(), {"b"}));
  CHECK(ev.front() == doctest::Approx(-0.5));
  CHECK(ev.back() == doctest::Approx(0.5));
}

TEST_CASE("random channels and local unitaries preserve state validity") {
  DensityMatrix rho = random_density(SubsystemLayout::bipartite(2, 2), 3, 99);
  const ComplexMatrix u = random_unitary(2, 5);
  DensityMatrix rotated = apply_local_unitary(rho, "b", u);
  CHECK(std::abs(rotated.mat().trace() - cplx(1.0, 0.0)) < 1e-12);
  // validates (hermitian, trace, PSD)
  DensityMatrix revalidated(rotated.layout(), rotated.mat());

  const std::vector<ComplexMatrix> kraus = random_kraus_channel(2, 3, 6);
  DensityMatrix mapped = apply_channel(rho, "b", kraus);
  CHECK(std::abs(mapped.mat().trace() - cplx(1.0, 0.0)) < 1e-12);
  DensityMatrix revalidated2(mapped.layout(), mapped.mat());
}
