#pragma once
// Minimal dense neural stack on Eigen: embeddings, wide 1-D convolution,
// max-over-time pooling, fully connected layers, dropout and Adadelta.
// Layers cache their forward inputs and expose exact reverse-mode gradients;
// everything is double precision and deterministic under a fixed RNG.

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace entrank::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

enum class Activation { identity, sigmoid, relu };
enum class Mode { train, infer };

// Wide 1-D convolution: an n x d token matrix maps to an (n + width - 1) x k
// feature map, zero-padding width-1 rows on each side so single-token inputs
// stay legal.
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(int numFilters, int width, int inputDim);

  void randomize(Rng& rng);
  Matrix forward(const Matrix& input);
  // Accumulates filter/bias gradients and returns the gradient w.r.t. input.
  Matrix backward(const Matrix& gradOut);
  void zero_grads();

  int num_filters() const { return static_cast<int>(filters.size()); }
  int width() const { return width_; }
  int input_dim() const { return inputDim_; }

  std::vector<Matrix> filters;  // k entries, each width x inputDim
  Vector biases;                // k
  std::vector<Matrix> grad_filters;
  Vector grad_biases;

 private:
  int width_ = 0;
  int inputDim_ = 0;
  Matrix input_;
  bool hasForward_ = false;
};

class MaxPoolOverTime {
 public:
  Vector forward(const Matrix& featureMap);  // columnwise max, first argmax wins
  Matrix backward(const Vector& gradOut);

 private:
  std::vector<Eigen::Index> argmax_;
  Eigen::Index rows_ = 0;
  bool hasForward_ = false;
};

class Dense {
 public:
  Dense() = default;
  Dense(int inDim, int outDim, Activation act);

  void randomize(Rng& rng);
  Vector forward(const Vector& x);
  Vector backward(const Vector& gradOut);
  // Backward for losses whose gradient is taken at the pre-activation (e.g.
  // logistic loss p - y); skips the activation derivative.
  Vector backward_preactivation(const Vector& gradZ);
  void zero_grads();

  Matrix weights;  // outDim x inDim
  Vector bias;     // outDim
  Matrix grad_weights;
  Vector grad_bias;
  Activation activation = Activation::identity;

 private:
  Vector input_;
  Vector preact_;
  Vector output_;
  bool hasForward_ = false;
};

// Inverted dropout: train mode zeroes entries with probability `rate` and
// scales survivors by 1/(1-rate); infer mode is the identity.
class Dropout {
 public:
  explicit Dropout(double rate = 0.5);

  Vector forward(const Vector& x, Mode mode, Rng& rng);
  Vector backward(const Vector& gradOut) const;
  // Re-applies the mask cached by the last forward (finite-difference checks).
  Vector replay(const Vector& x) const;

  double rate() const { return rate_; }

 private:
  double rate_;
  Vector mask_;
  bool hasForward_ = false;
};

// Token embedding rows plus one out-of-vocabulary row (the last).
struct EmbeddingTable {
  std::map<std::string, int> vocab;
  Matrix vectors;  // (|vocab| + 1) x dim
  bool trainable = true;

  static EmbeddingTable random(const std::vector<std::string>& tokens, int dim, Rng& rng);

  int dim() const { return static_cast<int>(vectors.cols()); }
  int oov_row() const { return static_cast<int>(vectors.rows()) - 1; }
  int row_of(const std::string& token) const;
  std::vector<int> rows_of(const std::vector<std::string>& tokens) const;
  Matrix lookup(const std::vector<std::string>& tokens) const;  // n x dim

  // Overrides rows for tokens present in a text file of `token v1 .. vd`
  // lines; returns how many rows were loaded.
  std::size_t load_pretrained(const std::filesystem::path& path);
};

// Pure forward passes used for inference on immutable models.
Matrix conv1d_apply(const std::vector<Matrix>& filters, const Vector& biases,
                    const Matrix& input);
Vector maxpool_apply(const Matrix& featureMap);
Vector dense_apply(const Matrix& weights, const Vector& bias, Activation act, const Vector& x);

struct AdadeltaState {
  Matrix acc_grad;    // running average of squared gradients
  Matrix acc_update;  // running average of squared updates
  static AdadeltaState like(const Matrix& param);
};

// One Adadelta update in place; decay rho, stabilizer eps.
void adadelta_step(Matrix& param, const Matrix& grad, AdadeltaState& state, double rho,
                   double eps);

}  // namespace entrank::nn
