#include "entrank/nn.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "entrank/errors.hpp"
#include "entrank/text.hpp"

namespace entrank::nn {

Conv1d::Conv1d(int numFilters, int width, int inputDim) : width_(width), inputDim_(inputDim) {
  if (numFilters < 1 || width < 1 || inputDim < 1)
    throw std::invalid_argument("Conv1d: dimensions must be positive");
  filters.assign(static_cast<std::size_t>(numFilters), Matrix::Zero(width, inputDim));
  biases = Vector::Zero(numFilters);
  zero_grads();
}

void Conv1d::randomize(Rng& rng) {
  const double limit =
      std::sqrt(6.0 / (width_ * inputDim_ + static_cast<int>(filters.size())));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (auto& f : filters)
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = dist(rng);
}

Matrix conv1d_apply(const std::vector<Matrix>& filters, const Vector& biases,
                    const Matrix& input) {
  if (filters.empty()) throw std::invalid_argument("conv1d_apply: no filters");
  const Eigen::Index width = filters.front().rows();
  const Eigen::Index d = filters.front().cols();
  if (input.rows() < 1 || input.cols() != d)
    throw std::invalid_argument("conv1d_apply: input must be n x inputDim with n >= 1");
  const Eigen::Index n = input.rows();
  const Eigen::Index outRows = n + width - 1;
  Matrix out(outRows, static_cast<Eigen::Index>(filters.size()));
  for (std::size_t f = 0; f < filters.size(); ++f) {
    const Matrix& filter = filters[f];
    for (Eigen::Index p = 0; p < outRows; ++p) {
      double acc = biases(static_cast<Eigen::Index>(f));
      for (Eigen::Index j = 0; j < width; ++j) {
        const Eigen::Index row = p + j - (width - 1);
        if (row < 0 || row >= n) continue;  // zero padding
        acc += input.row(row).dot(filter.row(j));
      }
      out(p, static_cast<Eigen::Index>(f)) = acc;
    }
  }
  return out;
}

Vector maxpool_apply(const Matrix& featureMap) {
  if (featureMap.rows() < 1) throw std::invalid_argument("maxpool_apply: empty feature map");
  return featureMap.colwise().maxCoeff().transpose();
}

Vector dense_apply(const Matrix& weights, const Vector& bias, Activation act, const Vector& x) {
  if (x.size() != weights.cols()) throw std::invalid_argument("dense_apply: input size mismatch");
  Vector z = weights * x + bias;
  switch (act) {
    case Activation::identity:
      return z;
    case Activation::sigmoid:
      return z.unaryExpr([](double v) { return sigmoid(v); });
    case Activation::relu:
      return z.cwiseMax(0.0);
  }
  return z;
}

Matrix Conv1d::forward(const Matrix& input) {
  if (input.rows() < 1 || input.cols() != inputDim_)
    throw std::invalid_argument("Conv1d: input must be n x inputDim with n >= 1");
  input_ = input;
  hasForward_ = true;
  return conv1d_apply(filters, biases, input);
}

Matrix Conv1d::backward(const Matrix& gradOut) {
  if (!hasForward_) throw std::logic_error("Conv1d: backward before forward");
  const Eigen::Index n = input_.rows();
  if (gradOut.rows() != n + width_ - 1 || gradOut.cols() != num_filters())
    throw std::invalid_argument("Conv1d: gradient shape mismatch");
  Matrix gradInput = Matrix::Zero(n, inputDim_);
  for (int f = 0; f < num_filters(); ++f) {
    Matrix& gf = grad_filters[static_cast<std::size_t>(f)];
    const Matrix& filter = filters[static_cast<std::size_t>(f)];
    for (Eigen::Index p = 0; p < gradOut.rows(); ++p) {
      const double g = gradOut(p, f);
      if (g == 0.0) continue;
      grad_biases(f) += g;
      for (int j = 0; j < width_; ++j) {
        const Eigen::Index row = p + j - (width_ - 1);
        if (row < 0 || row >= n) continue;
        gf.row(j) += g * input_.row(row);
        gradInput.row(row) += g * filter.row(j);
      }
    }
  }
  return gradInput;
}

void Conv1d::zero_grads() {
  grad_filters.assign(filters.size(), Matrix::Zero(width_, inputDim_));
  grad_biases = Vector::Zero(num_filters());
}

Vector MaxPoolOverTime::forward(const Matrix& featureMap) {
  if (featureMap.rows() < 1) throw std::invalid_argument("MaxPoolOverTime: empty feature map");
  rows_ = featureMap.rows();
  argmax_.assign(static_cast<std::size_t>(featureMap.cols()), 0);
  Vector out(featureMap.cols());
  for (Eigen::Index c = 0; c < featureMap.cols(); ++c) {
    Eigen::Index best = 0;
    for (Eigen::Index r = 1; r < featureMap.rows(); ++r) {
      if (featureMap(r, c) > featureMap(best, c)) best = r;
    }
    argmax_[static_cast<std::size_t>(c)] = best;
    out(c) = featureMap(best, c);
  }
  hasForward_ = true;
  return out;
}

Matrix MaxPoolOverTime::backward(const Vector& gradOut) {
  if (!hasForward_) throw std::logic_error("MaxPoolOverTime: backward before forward");
  if (gradOut.size() != static_cast<Eigen::Index>(argmax_.size()))
    throw std::invalid_argument("MaxPoolOverTime: gradient shape mismatch");
  Matrix gradIn = Matrix::Zero(rows_, gradOut.size());
  for (Eigen::Index c = 0; c < gradOut.size(); ++c)
    gradIn(argmax_[static_cast<std::size_t>(c)], c) = gradOut(c);
  return gradIn;
}

Dense::Dense(int inDim, int outDim, Activation act) : activation(act) {
  if (inDim < 1 || outDim < 1) throw std::invalid_argument("Dense: dimensions must be positive");
  weights = Matrix::Zero(outDim, inDim);
  bias = Vector::Zero(outDim);
  zero_grads();
}

void Dense::randomize(Rng& rng) {
  const double limit = std::sqrt(6.0 / (weights.rows() + weights.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index i = 0; i < weights.rows(); ++i)
    for (Eigen::Index j = 0; j < weights.cols(); ++j) weights(i, j) = dist(rng);
}

Vector Dense::forward(const Vector& x) {
  if (x.size() != weights.cols()) throw std::invalid_argument("Dense: input size mismatch");
  input_ = x;
  preact_ = weights * x + bias;
  switch (activation) {
    case Activation::identity:
      output_ = preact_;
      break;
    case Activation::sigmoid:
      output_ = preact_.unaryExpr([](double z) { return sigmoid(z); });
      break;
    case Activation::relu:
      output_ = preact_.cwiseMax(0.0);
      break;
  }
  hasForward_ = true;
  return output_;
}

Vector Dense::backward(const Vector& gradOut) {
  if (!hasForward_) throw std::logic_error("Dense: backward before forward");
  if (gradOut.size() != weights.rows())
    throw std::invalid_argument("Dense: gradient size mismatch");
  Vector gradZ(gradOut.size());
  switch (activation) {
    case Activation::identity:
      gradZ = gradOut;
      break;
    case Activation::sigmoid:
      gradZ = gradOut.cwiseProduct(
          output_.cwiseProduct(Vector::Ones(output_.size()) - output_));
      break;
    case Activation::relu:
      gradZ = gradOut;
      for (Eigen::Index i = 0; i < gradZ.size(); ++i)
        if (preact_(i) <= 0.0) gradZ(i) = 0.0;
      break;
  }
  return backward_preactivation(gradZ);
}

Vector Dense::backward_preactivation(const Vector& gradZ) {
  if (!hasForward_) throw std::logic_error("Dense: backward before forward");
  grad_weights += gradZ * input_.transpose();
  grad_bias += gradZ;
  return weights.transpose() * gradZ;
}

void Dense::zero_grads() {
  grad_weights = Matrix::Zero(weights.rows(), weights.cols());
  grad_bias = Vector::Zero(bias.size());
}

Dropout::Dropout(double rate) : rate_(rate) {
  if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("Dropout: rate must be in [0,1)");
}

Vector Dropout::forward(const Vector& x, Mode mode, Rng& rng) {
  mask_ = Vector::Ones(x.size());
  if (mode == Mode::train && rate_ > 0.0) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const double keepScale = 1.0 / (1.0 - rate_);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      mask_(i) = dist(rng) < rate_ ? 0.0 : keepScale;
  }
  hasForward_ = true;
  return x.cwiseProduct(mask_);
}

Vector Dropout::backward(const Vector& gradOut) const {
  if (!hasForward_) throw std::logic_error("Dropout: backward before forward");
  return gradOut.cwiseProduct(mask_);
}

Vector Dropout::replay(const Vector& x) const {
  if (!hasForward_) throw std::logic_error("Dropout: replay before forward");
  return x.cwiseProduct(mask_);
}

EmbeddingTable EmbeddingTable::random(const std::vector<std::string>& tokens, int dim,
                                      Rng& rng) {
  if (dim < 1) throw std::invalid_argument("EmbeddingTable: dim must be positive");
  EmbeddingTable table;
  int next = 0;
  for (const auto& t : tokens) {
    if (table.vocab.emplace(t, next).second) ++next;
  }
  table.vectors = Matrix::Zero(next + 1, dim);  // +1 for the OOV row
  std::uniform_real_distribution<double> dist(-0.25, 0.25);
  for (Eigen::Index i = 0; i < table.vectors.rows(); ++i)
    for (Eigen::Index j = 0; j < dim; ++j) table.vectors(i, j) = dist(rng);
  return table;
}

int EmbeddingTable::row_of(const std::string& token) const {
  const auto it = vocab.find(token);
  return it == vocab.end() ? oov_row() : it->second;
}

std::vector<int> EmbeddingTable::rows_of(const std::vector<std::string>& tokens) const {
  std::vector<int> rows;
  rows.reserve(tokens.size());
  for (const auto& t : tokens) rows.push_back(row_of(t));
  return rows;
}

Matrix EmbeddingTable::lookup(const std::vector<std::string>& tokens) const {
  if (tokens.empty()) throw std::invalid_argument("EmbeddingTable: empty token sequence");
  Matrix out(static_cast<Eigen::Index>(tokens.size()), dim());
  for (std::size_t i = 0; i < tokens.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = vectors.row(row_of(tokens[i]));
  return out;
}

std::size_t EmbeddingTable::load_pretrained(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file: " + path.string());
  std::string line;
  std::size_t loaded = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    row >> token;
    const auto it = vocab.find(to_lower(token));
    if (it == vocab.end()) continue;
    Vector v(dim());
    for (int j = 0; j < dim(); ++j) {
      if (!(row >> v(j)))
        throw DataError(path.string() + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(dim()) + " values");
    }
    vectors.row(it->second) = v.transpose();
    ++loaded;
  }
  return loaded;
}

AdadeltaState AdadeltaState::like(const Matrix& param) {
  return {Matrix::Zero(param.rows(), param.cols()), Matrix::Zero(param.rows(), param.cols())};
}

void adadelta_step(Matrix& param, const Matrix& grad, AdadeltaState& state, double rho,
                   double eps) {
  if (grad.rows() != param.rows() || grad.cols() != param.cols())
    throw std::invalid_argument("adadelta_step: gradient shape mismatch");
  state.acc_grad = rho * state.acc_grad + (1.0 - rho) * grad.cwiseProduct(grad);
  const Matrix update =
      -((state.acc_update.array() + eps).sqrt() / (state.acc_grad.array() + eps).sqrt())
           .matrix()
           .cwiseProduct(grad);
  state.acc_update = rho * state.acc_update + (1.0 - rho) * update.cwiseProduct(update);
  param += update;
}

}  // namespace entrank::nn
