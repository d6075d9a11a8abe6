#pragma once

#include <cstdint>
#include <vector>

#include "sgbn/model.hpp"

namespace sgbn {

struct SvmConfig {
  double c = 1.0;  // regularization; squared slacks fold into the kernel as I/C
  void validate() const {
    if (!(c > 0.0)) throw std::invalid_argument("svm regularization C must be positive");
  }
};

// Gradient features of one sample under a two-class model pair. `blocks`
// stacks, per class, the (m+1) x m grid of log-likelihood derivatives in the
// parameter matrix, each grid flattened column-major. The grid covers every
// position including structural zeros; those derivatives are generally
// nonzero and carry signal even where no edge exists.
//
// The optional augmentation entry realizes the squared-slack rewrite: a
// single nonzero y_i/sqrt(C) at the sample's own training position. Test-time
// vectors carry no augmentation.
struct FisherVector {
  Vector blocks;            // length 2 * m * (m+1)
  int aug_index = -1;       // training-sample position, -1 when absent
  double aug_value = 0.0;   // y_i / sqrt(C)
  std::uint64_t class_pair_id = 0;

  bool augmented() const { return aug_index >= 0; }
  double aug_dot(const FisherVector& other) const {
    return (augmented() && aug_index == other.aug_index) ? aug_value * other.aug_value : 0.0;
  }
};

// Flat layout of one grid entry: class block, then column q, then row a
// (a == m is the bias row).
inline int fisher_component_index(int m, int cls /*1 or 2*/, int a, int q) {
  return (cls - 1) * m * (m + 1) + q * (m + 1) + a;
}

std::uint64_t class_pair_id_of(const SgbnParams& theta1, const SgbnParams& theta2,
                               const NoiseModel& sigma1, const NoiseModel& sigma2);

// Per-node gradient block (x_q - pa' theta_q) * pa / sigma_q^2 for both
// class models, sharing one predefined noise model.
FisherVector fisher_vector(const Vector& x, const SgbnParams& theta1, const SgbnParams& theta2,
                           const NoiseModel& sigma);

// Same, with class-specific noise models.
FisherVector fisher_vector(const Vector& x, const SgbnParams& theta1, const NoiseModel& sigma1,
                           const SgbnParams& theta2, const NoiseModel& sigma2);

// Attaches the training-position augmentation block in place.
void attach_augmentation(FisherVector& v, int position, int label_pm1, const SvmConfig& cfg);

// Gram matrix of the vectors; with `augment` the stored augmentation blocks
// contribute (adding I/C for a full training set). Throws on mixed
// class_pair_id.
Matrix kernel_matrix(const std::vector<FisherVector>& vectors, const SvmConfig& cfg, bool augment);

// tr(K) - 1'K1/n: the total scatter of the feature vectors behind K, used as
// the small-sample surrogate for the enclosing-ball radius.
double scatter_trace(const Matrix& k);

struct EdgeComponent {
  int cls;   // 1 or 2
  int a;     // parent row, 0-based; a == m is the bias row
  int q;     // node column, 0-based
  int flat;  // index into FisherVector::blocks
};

struct EdgeSelection {
  std::vector<EdgeComponent> components;
  bool exhausted = false;  // true when fewer eligible components than requested
};

// Ranks gradient components by |Pearson correlation| with the class labels
// and keeps the top k among positions whose theta entry is nonzero (only
// existing edges may be optimized without risking the acyclicity of the
// graphs). Zero-variance components count as correlation 0.
EdgeSelection select_edges(const std::vector<FisherVector>& train_vectors,
                           const std::vector<int>& labels, int k, const SgbnParams& theta1,
                           const SgbnParams& theta2);

}  // namespace sgbn
