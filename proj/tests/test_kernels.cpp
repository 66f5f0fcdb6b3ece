#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "rmk/kernels.hpp"

using namespace rmk;

TEST_CASE("base kernel point evaluations") {
  const std::vector<double> zero{0.0}, two{2.0}, x2{2.0}, y3{3.0};

  CHECK(base_kernel_eval(BaseKernel::rbf(1.0), two, two) == doctest::Approx(1.0));
  CHECK(base_kernel_eval(BaseKernel::linear(), x2, y3) == doctest::Approx(6.0));
  CHECK(base_kernel_eval(BaseKernel::rbf(1.0), zero, two) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("base kernel symmetry on random vectors") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const std::vector<BaseKernel> kernels{BaseKernel::rbf(0.7), BaseKernel::linear(),
                                        BaseKernel::polynomial(3, 0.5)};
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(4), y(4);
    for (auto& v : x) v = dist(rng);
    for (auto& v : y) v = dist(rng);
    for (const auto& k : kernels)
      CHECK(base_kernel_eval(k, x, y) == base_kernel_eval(k, y, x));
  }
}

TEST_CASE("base kernel input validation") {
  const std::vector<double> a{1.0, 2.0}, b{1.0};
  CHECK_THROWS_AS(base_kernel_eval(BaseKernel::linear(), a, b),
                  invalid_argument_error);
  CHECK_THROWS_AS(BaseKernel::rbf(0.0).validate(), invalid_argument_error);
  CHECK_THROWS_AS(BaseKernel::rbf(-1.0).validate(), invalid_argument_error);
  CHECK_THROWS_AS(BaseKernel::polynomial(0).validate(), invalid_argument_error);
  CHECK_THROWS_AS(BaseKernel::polynomial(2, -0.5).validate(),
                  invalid_argument_error);
  CHECK_NOTHROW(BaseKernel::polynomial(2, 0.0).validate());
}

TEST_CASE("embedding windows and zero padding") {
  const std::vector<double> s{1.0, 2.0, 3.0};
  CHECK(embed(s, 1, 1) == std::vector<double>{2.0});
  CHECK(embed(s, 3, 2) == std::vector<double>{3.0, 2.0, 1.0});
  CHECK(embed(s, 3, 1) == std::vector<double>{2.0, 1.0, 0.0});

  const Eigen::MatrixXd X = embed_series(s, 3);
  CHECK(X.rows() == 3);
  CHECK(X.cols() == 3);
  CHECK(X(0, 0) == 1.0);
  CHECK(X(0, 1) == 0.0);
  CHECK(X(2, 2) == 1.0);
}

TEST_CASE("gram matrix matches pointwise evaluation and stays symmetric") {
  const auto series = testing::random_series(11, 24);
  for (const auto& k : {BaseKernel::rbf(0.8), BaseKernel::linear(),
                        BaseKernel::polynomial(2, 1.0)}) {
    const Eigen::MatrixXd X = embed_series(series, 3);
    const Eigen::MatrixXd G = base_gram(k, X);
    CHECK(G == G.transpose());  // mirrored lower triangle, exact
    for (int m = 0; m < X.rows(); m += 5)
      for (int t = 0; t < X.rows(); t += 3) {
        const std::vector<double> xm(X.row(m).begin(), X.row(m).end());
        const std::vector<double> xt(X.row(t).begin(), X.row(t).end());
        CHECK(G(m, t) ==
              doctest::Approx(base_kernel_eval(k, xm, xt)).epsilon(1e-12));
      }
  }
}

TEST_CASE("kernel column against one query matches the gram layout") {
  const auto series = testing::random_series(3, 16);
  const Eigen::MatrixXd X = embed_series(series, 2);
  const BaseKernel k = BaseKernel::rbf(1.3);
  const Eigen::MatrixXd G = base_gram(k, X);
  const Eigen::VectorXd col = base_kernel_column(k, X, X.row(5).transpose());
  CHECK(testing::max_abs_diff(col, G.col(5)) < 1e-12);
}
