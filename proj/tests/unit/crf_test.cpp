#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "tijere/crf.hpp"
#include "tijere/random.hpp"

using namespace tijere;
using namespace tijere::model;

namespace {

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c, double scale) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-scale, scale);
  return m;
}

}  // namespace

TEST_CASE("single step closed form") {
  const double a = 0.7, b = -1.2;
  Matrix em(1, 2);
  em << a, b;
  const Matrix trans = Matrix::Zero(4, 4);
  const std::vector<int> gold = {0};
  const std::vector<std::uint8_t> mask = {1};
  CHECK(crf_nll(em, gold, mask, trans) ==
        doctest::Approx(-a + std::log(std::exp(a) + std::exp(b))).epsilon(1e-14));
}

TEST_CASE("forward algorithm and viterbi against enumeration") {
  Rng rng(17);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index T = 1 + static_cast<Eigen::Index>(rng.below(4));
    const Eigen::Index L = 1 + static_cast<Eigen::Index>(rng.below(3));
    const Matrix em = random_matrix(rng, T, L, 2.0);
    const Matrix trans = random_matrix(rng, L + 2, L + 2, 1.0);
    const auto brute = testing::brute_force_crf(em, trans);
    CHECK(std::abs(crf_log_partition(em, trans) - brute.log_partition) < 1e-10);
    CHECK(crf_viterbi(em, trans) == brute.best_path);

    std::vector<int> labels(static_cast<std::size_t>(T));
    for (auto& y : labels) y = static_cast<int>(rng.below(static_cast<std::uint64_t>(L)));
    CHECK(std::abs(crf_path_score(em, trans, labels) -
                   testing::path_score_oracle(em, trans, labels)) < 1e-12);
    const double nll = crf_nll_gradient(em, trans, labels).nll;
    CHECK(nll >= 0.0);
    CHECK(std::abs(nll - (brute.log_partition -
                          testing::path_score_oracle(em, trans, labels))) < 1e-10);
    // The Viterbi path is likelihood-maximal.
    CHECK(crf_nll_gradient(em, trans, brute.best_path).nll <= nll + 1e-12);
  }
}

TEST_CASE("peaked emissions decode per step") {
  Matrix em = Matrix::Zero(4, 3);
  em(0, 2) = 50;
  em(1, 0) = 50;
  em(2, 1) = 50;
  em(3, 1) = 50;
  CHECK(crf_viterbi(em, Matrix::Zero(5, 5)) == std::vector<int>{2, 0, 1, 1});
}

TEST_CASE("masked steps are dropped") {
  Rng rng(2);
  const Matrix em = random_matrix(rng, 5, 3, 1.0);
  const Matrix trans = random_matrix(rng, 5, 5, 1.0);
  const std::vector<std::uint8_t> mask = {1, 1, 0, 1, 0};
  Matrix packed(3, 3);
  packed << em.row(0), em.row(1), em.row(3);
  const std::vector<int> labels = {2, 1, 0, 1, 0};
  const std::vector<int> packed_labels = {2, 1, 1};
  CHECK(crf_nll(em, labels, mask, trans) ==
        doctest::Approx(crf_nll_gradient(packed, trans, packed_labels).nll)
            .epsilon(1e-14));
  const auto decoded = crf_decode(em, mask, trans);
  const auto packed_decoded = crf_viterbi(packed, trans);
  CHECK(decoded[0] == packed_decoded[0]);
  CHECK(decoded[1] == packed_decoded[1]);
  CHECK(decoded[3] == packed_decoded[2]);
  CHECK(decoded[2] == 0);
  CHECK(decoded[4] == 0);
}

TEST_CASE("log space handles large emissions") {
  Rng rng(8);
  const Matrix em = random_matrix(rng, 6, 4, 1000.0);
  const Matrix trans = random_matrix(rng, 6, 6, 1.0);
  CHECK(std::isfinite(crf_log_partition(em, trans)));
  const std::vector<int> labels = {0, 1, 2, 3, 0, 1};
  CHECK(std::isfinite(crf_nll_gradient(em, trans, labels).nll));
  const Vector v = Vector::Constant(3, -std::numeric_limits<double>::infinity());
  CHECK(std::isinf(log_sum_exp(v)));
}

TEST_CASE("crf gradient matches finite differences") {
  Rng rng(5);
  const Matrix em = random_matrix(rng, 4, 3, 1.0);
  const Matrix trans = random_matrix(rng, 5, 5, 1.0);
  const std::vector<int> labels = {1, 0, 2, 2};
  const auto g = crf_nll_gradient(em, trans, labels);
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < em.size(); ++i) {
    Matrix up = em, down = em;
    up.data()[i] += h;
    down.data()[i] -= h;
    const double num = (crf_nll_gradient(up, trans, labels).nll -
                        crf_nll_gradient(down, trans, labels).nll) / (2 * h);
    CHECK(g.emissions.data()[i] == doctest::Approx(num).epsilon(1e-6));
  }
  for (Eigen::Index i = 0; i < trans.size(); ++i) {
    Matrix up = trans, down = trans;
    up.data()[i] += h;
    down.data()[i] -= h;
    const double num = (crf_nll_gradient(em, up, labels).nll -
                        crf_nll_gradient(em, down, labels).nll) / (2 * h);
    CHECK(g.transitions.data()[i] == doctest::Approx(num).epsilon(1e-6));
  }
}

TEST_CASE("bio transition mask") {
  const std::vector<std::string> tags = {"O", "B-Tool", "I-Tool", "B-Exp", "I-Exp"};
  const Matrix m = bio_transition_mask(tags);
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(m(0, 2) == ninf);        // O -> I-Tool
  CHECK(m(1, 2) == 0.0);         // B-Tool -> I-Tool
  CHECK(m(2, 2) == 0.0);         // I-Tool -> I-Tool
  CHECK(m(1, 4) == ninf);        // B-Tool -> I-Exp
  CHECK(m(crf_start(5), 2) == ninf);
  CHECK(m(crf_start(5), 1) == 0.0);
  CHECK(m(2, crf_stop(5)) == 0.0);
}
