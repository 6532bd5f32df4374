#pragma once

#include "plgp/gp.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace plgp {

/// Zero-based column index or header name.
using ColumnSelector = std::variant<std::size_t, std::string>;

/// Reads two numeric columns from a comma-separated file. A first row that
/// does not parse as numbers is treated as the header. Throws IoError for a
/// missing file, unknown column or unparsable row (with its line number), and
/// for non-finite values.
Dataset load_csv(const std::filesystem::path& path, const ColumnSelector& x_column,
                 const ColumnSelector& y_column, std::optional<std::size_t> limit_n = {});

/// Same, but x is the row index 0..n-1 (uniformly sampled series).
Dataset load_series_csv(const std::filesystem::path& path, const ColumnSelector& y_column,
                        std::optional<std::size_t> limit_n = {});

enum class SplitMode { Random, Prefix };

/// Partitions data into (train, validation). Random shuffles by seed, Prefix
/// keeps temporal order. Throws when the training part would be empty.
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed,
                                  SplitMode mode);

/// n equispaced inputs over [lo, hi] and outputs from one prior draw.
Dataset synthetic(const KernelSpec& spec, Eigen::Index n, std::pair<double, double> x_range,
                  std::uint64_t seed);

/// Subtracts the mean of y in place and returns it.
double centre(Dataset& data);

/// Root mean squared error of the predictive mean; divided by the standard
/// deviation of truth when normalise is set.
double rmse(const Predictive& pred, const Eigen::VectorXd& truth, bool normalise);

}  // namespace plgp
