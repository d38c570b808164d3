#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lrmap/errors.hpp>
#include <lrmap/linalg.hpp>
#include <lrmap/rng.hpp>

#include "helpers.hpp"

#include <cmath>
#include <limits>

using namespace lrmap;
using testutil::bitwise_equal;
using testutil::close_rel;
using testutil::random_orthogonal;
using testutil::random_rank;

TEST_CASE("svd of a diagonal matrix returns the canonical factors") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const SvdFactors f = svd(a);
  CHECK(f.sigma(0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(f.sigma(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((f.u - Matrix::Identity(2, 2)).norm() <= 1e-12);
  CHECK((f.vt - Matrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("svd of the zero matrix has a zero spectrum") {
  const SvdFactors f = svd(Matrix::Zero(2, 3));
  REQUIRE(f.sigma.size() == 2);
  CHECK(f.sigma(0) == 0.0);
  CHECK(f.sigma(1) == 0.0);
}

TEST_CASE("svd of a permutation has unit singular values and reconstructs") {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  const SvdFactors f = svd(a);
  CHECK(f.sigma(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.sigma(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((f.reconstruct() - a).norm() <= 1e-12);
}

TEST_CASE("svd factors satisfy the structural contract on random inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 1 + static_cast<int>(rng.uniform() * 8);
    const int cols = 1 + static_cast<int>(rng.uniform() * 8);
    const Matrix a = rng.gaussian_matrix(rows, cols);
    const SvdFactors f = svd(a);
    const auto r = std::min(rows, cols);
    REQUIRE(f.sigma.size() == r);
    CHECK((f.u.transpose() * f.u - Matrix::Identity(r, r)).norm() <= 1e-12);
    CHECK((f.vt * f.vt.transpose() - Matrix::Identity(r, r)).norm() <= 1e-12);
    for (Eigen::Index i = 0; i + 1 < f.sigma.size(); ++i) {
      CHECK(f.sigma(i) >= f.sigma(i + 1));
    }
    CHECK(f.sigma(f.sigma.size() - 1) >= 0.0);
    CHECK((f.reconstruct() - a).norm() <= 1e-12 * (1.0 + a.norm()));
    for (Eigen::Index j = 0; j < f.u.cols(); ++j) {
      Eigen::Index pivot = 0;
      f.u.col(j).cwiseAbs().maxCoeff(&pivot);
      // maxCoeff picks the first occurrence on exact ties, matching the
      // canonicalization rule.
      CHECK(f.u(pivot, j) >= 0.0);
    }
  }
}

TEST_CASE("svd is bit-deterministic on identical input") {
  Rng rng(12);
  const Matrix a = rng.gaussian_matrix(7, 5);
  const SvdFactors f1 = svd(a);
  const SvdFactors f2 = svd(a);
  CHECK(bitwise_equal(f1.u, f2.u));
  CHECK(bitwise_equal(f1.sigma, f2.sigma));
  CHECK(bitwise_equal(f1.vt, f2.vt));
}

TEST_CASE("svd rejects empty input and non-finite values surface") {
  CHECK_THROWS_AS(svd(Matrix()), std::invalid_argument);
}

TEST_CASE("numerical rank counts values above the relative threshold") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 1e-16;
  CHECK(numerical_rank(a) == 1);
  CHECK(numerical_rank(Matrix::Identity(3, 3)) == 3);
  CHECK(numerical_rank(Matrix::Zero(3, 2)) == 0);
}

TEST_CASE("pinv reciprocates only significant singular values") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  const Matrix api = pinv(a);
  CHECK(api(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(api(1, 1) == 0.0);

  Matrix col(2, 1);
  col << 1, 1;
  const Matrix cpi = pinv(col);
  REQUIRE(cpi.rows() == 1);
  REQUIRE(cpi.cols() == 2);
  CHECK(cpi(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cpi(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("pinv satisfies the Moore-Penrose identities") {
  Rng rng(13);
  const Matrix a = rng.gaussian_matrix(5, 3);
  const Matrix api = pinv(a);
  CHECK((a * api * a - a).norm() <= 1e-10 * a.norm());
  CHECK((api * a * api - api).norm() <= 1e-10 * api.norm());

  const Matrix deficient = random_rank(rng, 6, 4, 2);
  const Matrix dpi = pinv(deficient);
  CHECK((deficient * dpi * deficient - deficient).norm() <=
        1e-10 * deficient.norm());
}

TEST_CASE("pinv is an involution on full-rank matrices") {
  Rng rng(14);
  const Matrix a = rng.gaussian_matrix(4, 6);
  CHECK((pinv(pinv(a)) - a).norm() <= 1e-9 * (1.0 + a.norm()));
}

TEST_CASE("schatten norm fixtures across orders") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 4.0;
  CHECK(schatten_norm(a, SchattenP::hilbert_schmidt()) ==
        doctest::Approx(5.0).epsilon(1e-14));
  CHECK(schatten_norm(a, SchattenP::trace()) ==
        doctest::Approx(7.0).epsilon(1e-14));
  CHECK(schatten_norm(a, SchattenP::spectral()) ==
        doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("schatten norm at p=2 equals the Frobenius norm") {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = rng.gaussian_matrix(6, 4);
    CHECK(close_rel(schatten_norm(a, SchattenP::hilbert_schmidt()), a.norm(),
                    1e-12));
  }
}

TEST_CASE("schatten norm is invariant under orthogonal factors") {
  Rng rng(16);
  const Matrix a = rng.gaussian_matrix(5, 5);
  const Matrix u = random_orthogonal(rng, 5);
  const Matrix v = random_orthogonal(rng, 5);
  for (double pv : {1.0, 2.0, 3.0}) {
    const SchattenP p(pv);
    const double base = schatten_norm(a, p);
    CHECK(std::abs(schatten_norm(u * a * v, p) - base) <=
          1e-10 * (1.0 + base));
  }
  const double spec = schatten_norm(a, SchattenP::spectral());
  CHECK(std::abs(schatten_norm(u * a * v, SchattenP::spectral()) - spec) <=
        1e-10 * (1.0 + spec));
}

TEST_CASE("schatten norm triangle inequality holds for p >= 1") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = rng.gaussian_matrix(5, 4);
    const Matrix b = rng.gaussian_matrix(5, 4);
    for (double pv : {1.0, 1.5, 2.0, 3.0}) {
      const SchattenP p(pv);
      CHECK(schatten_norm(a + b, p) <=
            schatten_norm(a, p) + schatten_norm(b, p) + 1e-10);
    }
    CHECK(schatten_norm(a + b, SchattenP::spectral()) <=
          schatten_norm(a, SchattenP::spectral()) +
              schatten_norm(b, SchattenP::spectral()) + 1e-10);
  }
}

TEST_CASE("schatten order validates and classifies") {
  CHECK_THROWS_AS(SchattenP(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SchattenP(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(SchattenP(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  CHECK(SchattenP(0.5).is_quasi_norm());
  CHECK_FALSE(SchattenP::trace().is_quasi_norm());
  CHECK(SchattenP::spectral().is_spectral());
}

TEST_CASE("basis-expansion norm equals the spectral form exactly at p=2") {
  Rng rng(18);
  const Matrix a = rng.gaussian_matrix(5, 4);
  const Matrix basis = random_orthogonal(rng, 4);
  const double via_basis =
      basis_image_norm(a, SchattenP::hilbert_schmidt(), basis);
  const double via_sigma = schatten_norm(a, SchattenP::hilbert_schmidt());
  CHECK(close_rel(via_sigma, via_basis, 1e-12));

  // For p != 2 the two forms agree on the canonical basis of a diagonal
  // matrix but not for arbitrary bases; only finiteness is guaranteed.
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  d(2, 2) = 0.5;
  const double canon =
      basis_image_norm(d, SchattenP::trace(), Matrix::Identity(3, 3));
  CHECK(close_rel(schatten_norm(d, SchattenP::trace()), canon, 1e-12));
  const double rotated = basis_image_norm(d, SchattenP::trace(),
                                          random_orthogonal(rng, 3));
  CHECK(std::isfinite(rotated));
}

TEST_CASE("psd square root fixtures") {
  Matrix k = Matrix::Zero(2, 2);
  k(0, 0) = 4.0;
  k(1, 1) = 9.0;
  const PsdSqrtPair s = psd_sqrt(k);
  CHECK(s.root(0, 0) == 2.0);
  CHECK(s.root(1, 1) == 3.0);
  CHECK(s.root(0, 1) == 0.0);
  CHECK(s.pinv_root(0, 0) == 0.5);

  const PsdSqrtPair id = psd_sqrt(Matrix::Identity(3, 3));
  CHECK(id.root.isIdentity(0.0));
  CHECK(id.pinv_root.isIdentity(0.0));

  Matrix deficient = Matrix::Zero(2, 2);
  deficient(0, 0) = 4.0;
  const PsdSqrtPair ds = psd_sqrt(deficient);
  CHECK(ds.root(0, 0) == 2.0);
  CHECK(ds.root(1, 1) == 0.0);
  CHECK(ds.pinv_root(0, 0) == 0.5);
  CHECK(ds.pinv_root(1, 1) == 0.0);
}

TEST_CASE("psd square root squares back to the input on dense SPD matrices") {
  Rng rng(19);
  const Matrix k = testutil::random_spd(rng, 5, 0.1, 4.0);
  const PsdSqrtPair s = psd_sqrt(k);
  CHECK((s.root * s.root - k).norm() <= 1e-10 * (1.0 + k.norm()));
  CHECK((s.root - s.root.transpose()).norm() <= 1e-12 * (1.0 + k.norm()));
  CHECK((s.root * s.pinv_root * s.root - s.root).norm() <=
        1e-10 * (1.0 + s.root.norm()));
}

TEST_CASE("psd square root rejects indefinite and asymmetric input") {
  Matrix indefinite = Matrix::Zero(2, 2);
  indefinite(0, 0) = 1.0;
  indefinite(1, 1) = -1.0;
  CHECK_THROWS_AS(psd_sqrt(indefinite), NotPsd);

  Matrix asym(2, 2);
  asym << 0, 1, 0, 0;
  CHECK_THROWS_AS(psd_sqrt(asym), NotSymmetric);

  CHECK_THROWS_AS(psd_sqrt(Matrix::Zero(2, 3)), NotSymmetric);
}

TEST_CASE("tiny negative eigenvalues are clipped to zero") {
  Matrix k = Matrix::Zero(2, 2);
  k(0, 0) = 1.0;
  k(1, 1) = -1e-12;  // within psd_atol
  const PsdSqrtPair s = psd_sqrt(k);
  CHECK(s.root(1, 1) == 0.0);
  CHECK(s.pinv_root(1, 1) == 0.0);
}

TEST_CASE("spectrum helpers handle empty and zero input") {
  CHECK(schatten_from_sigma(Vector(), SchattenP::trace()) == 0.0);
  CHECK(schatten_from_sigma(Vector::Zero(3), SchattenP::spectral()) == 0.0);
  CHECK(rank_from_sigma(Vector::Zero(3)) == 0);
}
