#include "tijere/gru.hpp"

#include <cmath>

namespace tijere::model {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

GruWeights GruWeights::zeros(Eigen::Index input_dim, Eigen::Index hidden_dim) {
  return {Matrix::Zero(3 * hidden_dim, input_dim),
          Matrix::Zero(3 * hidden_dim, hidden_dim),
          Vector::Zero(3 * hidden_dim)};
}

Matrix gru_forward(const GruWeights& w, const Matrix& inputs,
                   std::span<const std::uint8_t> mask, bool reverse,
                   GruTrace* trace) {
  const Eigen::Index T = inputs.rows();
  const Eigen::Index h = w.hidden();
  Matrix out = Matrix::Zero(T, h);

  std::vector<Eigen::Index> steps;
  for (Eigen::Index i = 0; i < T; ++i) {
    const Eigen::Index t = reverse ? T - 1 - i : i;
    if (mask[static_cast<std::size_t>(t)]) steps.push_back(t);
  }
  const auto k = static_cast<Eigen::Index>(steps.size());
  if (trace) {
    trace->steps = steps;
    trace->prev.resize(k, h);
    trace->update.resize(k, h);
    trace->reset.resize(k, h);
    trace->candidate.resize(k, h);
  }

  Vector state = Vector::Zero(h);
  for (Eigen::Index s = 0; s < k; ++s) {
    const Eigen::Index t = steps[static_cast<std::size_t>(s)];
    const Vector x = inputs.row(t).transpose();
    const Vector gx = w.input * x + w.bias;
    const Vector gh = w.recurrent.topRows(2 * h) * state;
    Vector z(h), r(h);
    for (Eigen::Index j = 0; j < h; ++j) {
      z(j) = sigmoid(gx(j) + gh(j));
      r(j) = sigmoid(gx(h + j) + gh(h + j));
    }
    const Vector gated = r.cwiseProduct(state);
    const Vector an = gx.segment(2 * h, h) + w.recurrent.bottomRows(h) * gated;
    Vector n(h);
    for (Eigen::Index j = 0; j < h; ++j) n(j) = std::tanh(an(j));
    if (trace) {
      trace->prev.row(s) = state.transpose();
      trace->update.row(s) = z.transpose();
      trace->reset.row(s) = r.transpose();
      trace->candidate.row(s) = n.transpose();
    }
    state = (Vector::Ones(h) - z).cwiseProduct(n) + z.cwiseProduct(state);
    out.row(t) = state.transpose();
  }
  return out;
}

void gru_backward(const GruWeights& w, const Matrix& inputs,
                  const GruTrace& trace, const Matrix& d_outputs,
                  GruWeights& grads, Matrix& d_inputs) {
  const Eigen::Index h = w.hidden();
  const auto k = static_cast<Eigen::Index>(trace.steps.size());
  Vector d_state = Vector::Zero(h);
  Vector da(3 * h);
  for (Eigen::Index s = k - 1; s >= 0; --s) {
    const Eigen::Index t = trace.steps[static_cast<std::size_t>(s)];
    const Vector prev = trace.prev.row(s).transpose();
    const Vector z = trace.update.row(s).transpose();
    const Vector r = trace.reset.row(s).transpose();
    const Vector n = trace.candidate.row(s).transpose();

    const Vector dh = d_outputs.row(t).transpose() + d_state;
    const Vector dn = dh.cwiseProduct(Vector::Ones(h) - z);
    const Vector dz = dh.cwiseProduct(prev - n);
    Vector d_prev = dh.cwiseProduct(z);

    const Vector dan = dn.cwiseProduct(Vector::Ones(h) - n.cwiseProduct(n));
    const Vector d_gated = w.recurrent.bottomRows(h).transpose() * dan;
    const Vector dr = d_gated.cwiseProduct(prev);
    d_prev += d_gated.cwiseProduct(r);

    da.segment(0, h) = dz.cwiseProduct(z.cwiseProduct(Vector::Ones(h) - z));
    da.segment(h, h) = dr.cwiseProduct(r.cwiseProduct(Vector::Ones(h) - r));
    da.segment(2 * h, h) = dan;

    const Vector x = inputs.row(t).transpose();
    grads.input.noalias() += da * x.transpose();
    grads.bias += da;
    grads.recurrent.topRows(2 * h).noalias() +=
        da.head(2 * h) * prev.transpose();
    grads.recurrent.bottomRows(h).noalias() +=
        dan * r.cwiseProduct(prev).transpose();
    d_prev.noalias() += w.recurrent.topRows(2 * h).transpose() * da.head(2 * h);
    d_inputs.row(t).noalias() += (w.input.transpose() * da).transpose();
    d_state = d_prev;
  }
}

Matrix bigru(const GruWeights& forward, const GruWeights& backward,
             const Matrix& inputs, std::span<const std::uint8_t> mask) {
  const Matrix f = gru_forward(forward, inputs, mask, false);
  const Matrix b = gru_forward(backward, inputs, mask, true);
  Matrix out(inputs.rows(), f.cols() + b.cols());
  out << f, b;
  return out;
}

}  // namespace tijere::model
