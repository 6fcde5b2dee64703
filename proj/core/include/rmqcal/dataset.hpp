#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace rmqcal {

enum class TableFormat { dense_csv, sparse };

/// Binary-labelled tabular data. Rows of `features` are samples.
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;       // each -1 or +1
  std::vector<std::size_t> ids;  // stable per-sample identifiers

  std::size_t size() const { return labels.size(); }
  std::size_t dims() const { return static_cast<std::size_t>(features.cols()); }

  /// Throws PreconditionError when shapes or label values are inconsistent.
  void validate() const;

  /// Rows `indices` (in the given order); ids are carried over.
  Dataset subset(std::span<const std::size_t> indices) const;

  /// Feature rows for `indices`.
  Eigen::MatrixXd rows(std::span<const std::size_t> indices) const;
  std::vector<int> labels_of(std::span<const std::size_t> indices) const;
};

Dataset load_table(const std::filesystem::path& path, TableFormat format);
Dataset load_dense_csv(std::istream& in);
Dataset load_sparse(std::istream& in);

void write_dense_csv(const Dataset& data, std::ostream& out);

/// Per-column min-max scaling statistics.
struct MinMaxScaler {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  static MinMaxScaler fit(const Eigen::MatrixXd& features);
  /// Constant columns map to 0. Values outside the fitted range are clamped to [0, 1].
  Eigen::MatrixXd transform(const Eigen::MatrixXd& features) const;
};

/// Min-max scales every column to [0, 1]; constant columns become 0. Idempotent.
Dataset normalize_features(const Dataset& data);

struct SplitSpec {
  double test_fraction = 0.5;
  std::uint64_t seed = 0;
};

/// Labelled/unlabelled bookkeeping for one active-learning run.
/// All index values refer to rows of the full Dataset.
struct PoolState {
  std::vector<std::size_t> labeled;          // in query order
  std::vector<int> labeled_labels;           // parallel to `labeled`
  std::vector<std::size_t> unlabeled;        // ascending
  std::vector<std::size_t> test;             // ascending, never pooled
  std::size_t iteration = 0;
  std::vector<std::vector<std::size_t>> history;

  std::size_t pool_size() const { return labeled.size() + unlabeled.size(); }
  bool is_unlabeled(std::size_t index) const;
  /// Throws std::logic_error if labeled/unlabeled/test do not partition [0, n).
  void check_partition(std::size_t n) const;
};

struct Split {
  Dataset test;
  PoolState pool;
};

Split split_pool(const Dataset& data, const SplitSpec& spec);

/// Reveals the ground-truth labels of `batch` and moves it from U to A.
PoolState oracle_label(const PoolState& pool, std::span<const std::size_t> batch, const Dataset& truth);

struct TwoBlobSpec {
  std::size_t samples = 600;
  std::size_t dims = 2;
  double center_distance = 3.0;
  double sigma = 0.5;
  double positive_fraction = 0.5;
  std::uint64_t seed = 0;
};

/// Two isotropic Gaussian blobs, centers separated along the first axis.
Dataset make_two_blobs(const TwoBlobSpec& spec);

}  // namespace rmqcal
