#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tijere/gru.hpp"
#include "tijere/random.hpp"

using namespace tijere;
using namespace tijere::model;

namespace {

GruWeights random_gru(Rng& rng, Eigen::Index d, Eigen::Index h) {
  GruWeights w = GruWeights::zeros(d, h);
  for (Matrix* m : {&w.input, &w.recurrent}) {
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = rng.uniform(-0.5, 0.5);
  }
  for (Eigen::Index i = 0; i < w.bias.size(); ++i) w.bias(i) = rng.uniform(-0.5, 0.5);
  return w;
}

Matrix random_inputs(Rng& rng, Eigen::Index T, Eigen::Index d) {
  Matrix x(T, d);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
  return x;
}

std::vector<double> to_vec(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

TEST_CASE("two steps match the scalar oracle") {
  Rng rng(4);
  const GruWeights w = random_gru(rng, 3, 2);
  const Matrix x = random_inputs(rng, 2, 3);
  const std::vector<std::uint8_t> mask = {1, 1};
  const Matrix out = gru_forward(w, x, mask, false);

  std::vector<double> h = {0.0, 0.0};
  for (Eigen::Index t = 0; t < 2; ++t) {
    h = testing::gru_step_oracle(w, to_vec(x.row(t).transpose()), h);
    for (Eigen::Index j = 0; j < 2; ++j) {
      CHECK(std::abs(out(t, j) - h[static_cast<std::size_t>(j)]) < 1e-10);
    }
  }

  const Matrix back = gru_forward(w, x, mask, true);
  h = testing::gru_step_oracle(w, to_vec(x.row(1).transpose()), {0.0, 0.0});
  CHECK(std::abs(back(1, 0) - h[0]) < 1e-10);
  h = testing::gru_step_oracle(w, to_vec(x.row(0).transpose()), h);
  CHECK(std::abs(back(0, 1) - h[1]) < 1e-10);
}

TEST_CASE("zero weights give zero output") {
  const GruWeights w = GruWeights::zeros(3, 4);
  Rng rng(1);
  const Matrix x = random_inputs(rng, 5, 3);
  const std::vector<std::uint8_t> mask(5, 1);
  CHECK(bigru(w, w, x, mask).isZero(0.0));
}

TEST_CASE("single step bigru concatenates both directions") {
  Rng rng(9);
  const GruWeights f = random_gru(rng, 2, 3);
  const GruWeights b = random_gru(rng, 2, 3);
  const Matrix x = random_inputs(rng, 1, 2);
  const std::vector<std::uint8_t> mask = {1};
  const Matrix out = bigru(f, b, x, mask);
  CHECK(out.cols() == 6);
  CHECK(out.leftCols(3).isApprox(gru_forward(f, x, mask, false)));
  CHECK(out.rightCols(3).isApprox(gru_forward(b, x, mask, false)));
}

TEST_CASE("masked steps keep the state") {
  Rng rng(12);
  const GruWeights w = random_gru(rng, 2, 3);
  const Matrix x = random_inputs(rng, 4, 2);
  const std::vector<std::uint8_t> mask = {1, 0, 1, 0};
  const Matrix out = gru_forward(w, x, mask, false);
  CHECK(out.row(1).isZero(0.0));
  CHECK(out.row(3).isZero(0.0));
  Matrix packed(2, 2);
  packed << x.row(0), x.row(2);
  const std::vector<std::uint8_t> ones = {1, 1};
  const Matrix ref = gru_forward(w, packed, ones, false);
  CHECK(out.row(2) == ref.row(1));
}

TEST_CASE("bptt matches finite differences") {
  Rng rng(31);
  const Eigen::Index T = 4, d = 3, h = 2;
  GruWeights w = random_gru(rng, d, h);
  const Matrix x = random_inputs(rng, T, d);
  const Matrix upstream = random_inputs(rng, T, h);
  const std::vector<std::uint8_t> mask = {1, 1, 0, 1};
  for (bool reverse : {false, true}) {
    auto loss = [&](const GruWeights& ww, const Matrix& xx) {
      return gru_forward(ww, xx, mask, reverse).cwiseProduct(upstream).sum();
    };
    GruTrace trace;
    gru_forward(w, x, mask, reverse, &trace);
    GruWeights grads = GruWeights::zeros(d, h);
    Matrix dx = Matrix::Zero(T, d);
    gru_backward(w, x, trace, upstream, grads, dx);

    const double step = 1e-6;
    auto probe = [&](double& p) {
      const double saved = p;
      p = saved + step;
      const double up = loss(w, x);
      p = saved - step;
      const double down = loss(w, x);
      p = saved;
      return (up - down) / (2 * step);
    };
    GruWeights& mw = w;
    for (Eigen::Index i = 0; i < w.input.size(); ++i) {
      CHECK(grads.input.data()[i] == doctest::Approx(probe(mw.input.data()[i])).epsilon(1e-6));
    }
    for (Eigen::Index i = 0; i < w.recurrent.size(); ++i) {
      CHECK(grads.recurrent.data()[i] ==
            doctest::Approx(probe(mw.recurrent.data()[i])).epsilon(1e-6));
    }
    for (Eigen::Index i = 0; i < w.bias.size(); ++i) {
      CHECK(grads.bias(i) == doctest::Approx(probe(mw.bias(i))).epsilon(1e-6));
    }
    Matrix xm = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double saved = xm.data()[i];
      xm.data()[i] = saved + step;
      const double up = loss(w, xm);
      xm.data()[i] = saved - step;
      const double down = loss(w, xm);
      xm.data()[i] = saved;
      CHECK(dx.data()[i] == doctest::Approx((up - down) / (2 * step)).epsilon(1e-6));
    }
  }
}
