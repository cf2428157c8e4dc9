#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "test_helpers.hpp"
#include "tigranet/errors.hpp"
#include "tigranet/layers/spectral_conv.hpp"
#include "tigranet/spectral_oracle.hpp"

using namespace tigranet;

TEST(SpectralOracle, ChainEigenvalues) {
  const auto basis = eigendecompose(build_grid_graph(1, 2, Connectivity::FourNN));
  EXPECT_NEAR(basis.eigenvalues[0], 0.0, 1e-12);
  EXPECT_NEAR(basis.eigenvalues[1], 2.0, 1e-12);
}

TEST(SpectralOracle, PathNullSpaceIsSqrtDegree) {
  const auto g = build_grid_graph(1, 3, Connectivity::FourNN);
  const auto basis = eigendecompose(g);
  EXPECT_NEAR(basis.eigenvalues[0], 0.0, 1e-12);
  const Eigen::VectorXd expected = g.degrees().cwiseSqrt().normalized();
  const Eigen::VectorXd chi0 = basis.eigenvectors.col(0);
  EXPECT_NEAR(std::abs(chi0.dot(expected)), 1.0, 1e-12);
}

TEST(SpectralOracle, BasisInvariants) {
  for (const auto conn : {Connectivity::FourNN, Connectivity::EightNN}) {
    const auto g = build_grid_graph(4, 4, conn);
    const auto basis = eigendecompose(g);
    const Eigen::MatrixXd& chi = basis.eigenvectors;
    const Index n = g.num_nodes();
    EXPECT_LE((chi.transpose() * chi - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_GE(basis.eigenvalues.minCoeff(), -1e-9);
    EXPECT_LE(basis.eigenvalues.maxCoeff(), 2.0 + 1e-9);
    for (Index i = 1; i < n; ++i) EXPECT_LE(basis.eigenvalues[i - 1], basis.eigenvalues[i]);
    const Eigen::MatrixXd rebuilt = chi * basis.eigenvalues.asDiagonal() * chi.transpose();
    EXPECT_LE((rebuilt - Eigen::MatrixXd(g.laplacian())).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(SpectralOracle, SizeLimit) {
  const auto g = build_grid_graph(10, 10, Connectivity::FourNN);
  EXPECT_THROW(eigendecompose(g, 99), OracleSizeError);
  EXPECT_NO_THROW(eigendecompose(g, 100));
}

TEST(SpectralOracle, GftOfFirstEigenvector) {
  const auto basis = eigendecompose(build_grid_graph(3, 3, Connectivity::EightNN));
  const Eigen::VectorXd spec = gft(basis, basis.eigenvectors.col(0));
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(9);
  e0[0] = 1.0;
  EXPECT_LE((spec - e0).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((igft(basis, e0) - basis.eigenvectors.col(0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SpectralOracle, ZeroSignal) {
  const auto basis = eigendecompose(build_grid_graph(3, 3, Connectivity::FourNN));
  EXPECT_EQ(gft(basis, GraphSignal::Zero(9)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SpectralOracle, RoundTripAndParseval) {
  Rng rng(11);
  for (const int n : {3, 5, 8}) {
    const auto basis = eigendecompose(build_grid_graph(n, n, Connectivity::EightNN));
    for (int trial = 0; trial < 10; ++trial) {
      const GraphSignal y = tsupport::random_signal(n * n, rng);
      const Eigen::VectorXd spec = gft(basis, y);
      EXPECT_LE((igft(basis, spec) - y).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_NEAR(spec.norm(), y.norm(), 1e-9);
    }
  }
}

TEST(SpectralOracle, DimensionMismatch) {
  const auto basis = eigendecompose(build_grid_graph(3, 3, Connectivity::FourNN));
  EXPECT_THROW(gft(basis, GraphSignal::Zero(8)), DimensionError);
  EXPECT_THROW(igft(basis, Eigen::VectorXd::Zero(10)), DimensionError);
  EXPECT_THROW(spectral_filter(basis, GraphSignal::Zero(4), [](double) { return 1.0; }), DimensionError);
}

TEST(SpectralOracle, IdentityAndLaplacianKernels) {
  const auto g = build_grid_graph(4, 5, Connectivity::EightNN);
  const auto basis = eigendecompose(g);
  Rng rng(2);
  const GraphSignal y = tsupport::random_signal(g.num_nodes(), rng);
  EXPECT_LE((spectral_filter(basis, y, [](double) { return 1.0; }) - y).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((spectral_filter(basis, y, [](double l) { return l; }) - g.laplacian() * y).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SpectralOracle, PolynomialKernelMatchesVertexDomain) {
  const auto g = build_grid_graph(4, 4, Connectivity::FourNN);
  const auto basis = eigendecompose(g);
  const auto powers = laplacian_powers(g, 3);
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto alpha = tsupport::random_coeffs(3, rng);
    const GraphSignal y = tsupport::random_signal(16, rng);
    const GraphSignal spectral =
        spectral_filter(basis, y, [&](double l) { return polynomial_response(alpha, l); });
    EXPECT_LE((spectral - apply_polynomial_filter(powers, alpha, y)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(SpectralOracle, TranslationLinearAndZero) {
  const auto g = build_grid_graph(3, 3, Connectivity::EightNN);
  const auto basis = eigendecompose(g);
  GraphSignal delta = GraphSignal::Zero(9);
  delta[4] = 1.0;
  const GraphSignal t1 = generalized_translation(basis, delta, 2);
  const GraphSignal t3 = generalized_translation(basis, 3.0 * delta, 2);
  EXPECT_LE((t3 - 3.0 * t1).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(generalized_translation(basis, GraphSignal::Zero(9), 0).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(generalized_translation(basis, delta, 9), std::out_of_range);
  EXPECT_THROW(generalized_translation(basis, delta, -1), std::out_of_range);
}

TEST(SpectralOracle, TranslationMatchesDenseFormula) {
  const auto g = build_grid_graph(3, 3, Connectivity::FourNN);
  const auto basis = eigendecompose(g);
  Rng rng(4);
  const GraphSignal y = tsupport::random_signal(9, rng);
  for (Index v = 0; v < 9; ++v) {
    GraphSignal expected = GraphSignal::Zero(9);
    for (Index i = 0; i < 9; ++i) {
      const double yhat = basis.eigenvectors.col(i).dot(y);
      expected += 3.0 * yhat * basis.eigenvectors(v, i) * basis.eigenvectors.col(i);
    }
    EXPECT_LE((generalized_translation(basis, y, v) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FilterResponse, FlatCurveForDegreeZero) {
  const std::vector<double> alpha{0.75};
  const auto curve = sample_filter_response(alpha, 256);
  ASSERT_EQ(curve.size(), 256u);
  EXPECT_DOUBLE_EQ(curve.front().first, 0.0);
  EXPECT_DOUBLE_EQ(curve.back().first, 2.0);
  for (const auto& [l, h] : curve) EXPECT_DOUBLE_EQ(h, 0.75);
}

TEST(FilterResponse, SampleCountHonoredAndCsv) {
  const std::vector<double> alpha{1.0, -0.5, 0.25};
  EXPECT_EQ(sample_filter_response(alpha, 17).size(), 17u);
  std::ostringstream out;
  write_filter_response_csv(out, alpha, 5);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "lambda,response");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 5);
  EXPECT_DOUBLE_EQ(polynomial_response(alpha, 2.0), 1.0 - 1.0 + 1.0);
}
