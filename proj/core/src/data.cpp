#include "plgp/data.hpp"
#include "plgp/random.hpp"

#include "plgp/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace plgp {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r\"");
    const auto e = field.find_last_not_of(" \t\r\"");
    fields.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    // from_chars does not accept "nan"/"inf" spellings in every libstdc++.
    if (s == "nan" || s == "NaN" || s == "NA") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf" || s == "Inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-Inf") return -std::numeric_limits<double>::infinity();
    return std::nullopt;
  }
  return v;
}

std::size_t resolve(const ColumnSelector& sel, const std::vector<std::string>& header,
                    const std::filesystem::path& path) {
  if (const auto* idx = std::get_if<std::size_t>(&sel)) return *idx;
  const auto& name = std::get<std::string>(sel);
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw IoError(path.string() + ": no column named '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

struct Columns {
  std::vector<double> x;
  std::vector<double> y;
};

Columns read_columns(const std::filesystem::path& path, const ColumnSelector& x_column,
                     const ColumnSelector* y_column, std::optional<std::size_t> limit_n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  std::vector<std::string> header;
  Columns out;
  std::size_t line_no = 0;
  bool first_row = true;
  std::size_t xi = 0, yi = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto fields = split_fields(line);
    if (first_row) {
      first_row = false;
      const bool numeric = std::all_of(fields.begin(), fields.end(),
                                       [](const std::string& f) { return parse_number(f).has_value(); });
      if (!numeric) {
        header = fields;
        xi = resolve(x_column, header, path);
        if (y_column) yi = resolve(*y_column, header, path);
        continue;
      }
      if (std::holds_alternative<std::string>(x_column) ||
          (y_column && std::holds_alternative<std::string>(*y_column))) {
        throw IoError(path.string() + ": column names given but the file has no header");
      }
      xi = std::get<std::size_t>(x_column);
      if (y_column) yi = std::get<std::size_t>(*y_column);
    }
    if (limit_n && out.x.size() >= *limit_n) break;
    const std::size_t need = std::max(xi, y_column ? yi : xi);
    if (fields.size() <= need) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected at least " +
                    std::to_string(need + 1) + " fields");
    }
    const auto xv = parse_number(fields[xi]);
    const auto yv = y_column ? parse_number(fields[yi]) : std::optional<double>(0.0);
    if (!xv || !yv) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": unparsable value");
    }
    if (!std::isfinite(*xv) || !std::isfinite(*yv)) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": non-finite value");
    }
    out.x.push_back(*xv);
    out.y.push_back(*yv);
  }
  if (out.x.empty()) throw IoError(path.string() + ": no data rows");
  return out;
}

Dataset to_dataset(const std::vector<double>& x, const std::vector<double>& y) {
  Dataset d{Eigen::VectorXd(static_cast<Eigen::Index>(x.size())),
            Eigen::VectorXd(static_cast<Eigen::Index>(y.size()))};
  std::copy(x.begin(), x.end(), d.x.data());
  std::copy(y.begin(), y.end(), d.y.data());
  return d;
}

Dataset subset(const Dataset& data, const std::vector<Eigen::Index>& idx) {
  Dataset out{Eigen::VectorXd(static_cast<Eigen::Index>(idx.size())),
              Eigen::VectorXd(static_cast<Eigen::Index>(idx.size()))};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.x[static_cast<Eigen::Index>(i)] = data.x[idx[i]];
    out.y[static_cast<Eigen::Index>(i)] = data.y[idx[i]];
  }
  return out;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const ColumnSelector& x_column,
                 const ColumnSelector& y_column, std::optional<std::size_t> limit_n) {
  const Columns c = read_columns(path, x_column, &y_column, limit_n);
  return to_dataset(c.x, c.y);
}

Dataset load_series_csv(const std::filesystem::path& path, const ColumnSelector& y_column,
                        std::optional<std::size_t> limit_n) {
  const Columns c = read_columns(path, y_column, nullptr, limit_n);
  std::vector<double> idx(c.x.size());
  std::iota(idx.begin(), idx.end(), 0.0);
  return to_dataset(idx, c.x);
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction, std::uint64_t seed,
                                  SplitMode mode) {
  data.validate();
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1]");
  }
  const Eigen::Index n = data.size();
  const auto n_train = static_cast<Eigen::Index>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train < 1) throw std::invalid_argument("split: empty training set");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (mode == SplitMode::Random) {
    std::mt19937_64 rng = make_rng(seed, RandomStream::Split);
    std::shuffle(idx.begin(), idx.end(), rng);
  }
  const auto cut = idx.begin() + n_train;
  std::vector<Eigen::Index> train_idx(idx.begin(), cut), val_idx(cut, idx.end());
  if (mode == SplitMode::Random) {
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());
  }
  return {subset(data, train_idx), subset(data, val_idx)};
}

Dataset synthetic(const KernelSpec& spec, Eigen::Index n, std::pair<double, double> x_range,
                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("synthetic: n must be >= 1");
  Dataset d;
  if (n == 1) {
    d.x = Eigen::VectorXd::Constant(1, x_range.first);
  } else {
    d.x = Eigen::VectorXd::LinSpaced(n, x_range.first, x_range.second);
  }
  d.y = sample_prior(spec, d.x, seed);
  return d;
}

double centre(Dataset& data) {
  const double mean = data.y.mean();
  data.y.array() -= mean;
  return mean;
}

double rmse(const Predictive& pred, const Eigen::VectorXd& truth, bool normalise) {
  if (pred.mean.size() != truth.size() || truth.size() == 0) {
    throw std::invalid_argument("rmse: length mismatch");
  }
  const double err = std::sqrt((pred.mean - truth).squaredNorm() / static_cast<double>(truth.size()));
  if (!normalise) return err;
  const double sd = std::sqrt((truth.array() - truth.mean()).square().mean());
  if (!(sd > 0.0)) throw std::invalid_argument("rmse: truth has zero variance");
  return err / sd;
}

}  // namespace plgp
