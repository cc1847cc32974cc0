#include "tradekit/factors/alpha158.hpp"


#include <exception>

#include "kernels.hpp"
#include "tradekit/core/errors.hpp"
#include "tradekit/core/validation.hpp"

namespace tradekit::factors {

using detail::Inputs;
using detail::make_column;

WindowSet::WindowSet(std::vector<int> windows) : windows_(std::move(windows)) {
  if (windows_.empty()) throw ConfigError("window set must not be empty");
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    if (windows_[i] < 2) throw ConfigError("window lengths must be >= 2");
    if (i > 0 && windows_[i] <= windows_[i - 1]) throw ConfigError("window lengths must be strictly increasing");
  }
}

WindowSet WindowSet::standard() { return WindowSet({5, 10, 20, 30, 60}); }

std::string_view family_name(Family f) {
  static constexpr std::array<std::string_view, 27> kNames = {
      "roc",  "ma",   "std",  "beta", "max",  "min",  "qtlu", "qtld", "rank", "imax", "imin", "imxd", "rsv",  "cntp",
      "cntn", "cntd", "corr", "cord", "sump", "sumn", "sumd", "vma",  "vstd", "wvma", "vsump", "vsumn", "vsumd"};
  return kNames[static_cast<std::size_t>(f)];
}

namespace {

std::string column_name(Family f, int w) { return std::string(family_name(f)) + "_" + std::to_string(w); }

std::vector<Column> group(const AssetSeries& series, int w, std::initializer_list<Family> families) {
  if (w < 2) throw ConfigError("window length must be >= 2");
  const Inputs in(series);
  std::vector<Column> out;
  out.reserve(families.size());
  for (Family f : families) {
    Column c = make_column(column_name(f, w), in.n);
    detail::fill_family(f, w, in, c);
    out.push_back(std::move(c));
  }
  return out;
}

struct Task {
  enum Kind { kKbar, kRolling, kLogvol } kind;
  std::size_t kbar_index = 0;
  Family family = Family::kRoc;
  int window = 0;
};

std::vector<Task> plan(const WindowSet& windows) {
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < kKbarColumns.size(); ++k) tasks.push_back({Task::kKbar, k});
  for (Family f : kRollingFamilies) {
    for (int w : windows.windows()) tasks.push_back({Task::kRolling, 0, f, w});
  }
  tasks.push_back({Task::kLogvol});
  return tasks;
}

void run_task(const Task& task, const Inputs& in, Column& col) {
  switch (task.kind) {
    case Task::kKbar: detail::fill_kbar(task.kbar_index, in, col); break;
    case Task::kRolling: detail::fill_family(task.family, task.window, in, col); break;
    case Task::kLogvol: detail::fill_logvol(in, col); break;
  }
}

void check_input(const AssetSeries& series, const WindowSet& windows) {
  const std::size_t need = alpha158_min_length(windows);
  if (series.size() < need) {
    throw DataError("alpha158 for " + series.symbol() + ": series has " + std::to_string(series.size()) +
                    " bars, minimum length is " + std::to_string(need));
  }
  for (const Bar& b : series.bars()) {
    if (auto v = check_bar(b)) {
      throw ValidationError("alpha158 for " + series.symbol() + ": invalid " + v->field + " at " +
                            format_timestamp(v->timestamp));
    }
  }
}

FactorMatrix assemble(const AssetSeries& series, const WindowSet& windows, bool parallel) {
  check_input(series, windows);
  const Inputs in(series);
  const auto tasks = plan(windows);
  FactorMatrix m(series.symbol(), series.timestamps(), alpha158_columns(windows));
  const std::size_t cols = m.cols();
  const auto ntasks = static_cast<std::ptrdiff_t>(tasks.size());

  auto work = [&](std::ptrdiff_t i) {
    const auto c = static_cast<std::size_t>(i);
    Column col = make_column(m.columns[c], in.n);
    run_task(tasks[c], in, col);
    for (std::size_t t = 0; t < in.n; ++t) {
      m.values[t * cols + c] = col.values[t];
      m.valid[t * cols + c] = col.valid[t];
    }
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < ntasks; ++i) work(i);
  } else {
    for (std::ptrdiff_t i = 0; i < ntasks; ++i) work(i);
  }
  return m;
}

}  // namespace

std::vector<std::string> alpha158_columns(const WindowSet& windows) {
  std::vector<std::string> names(kKbarColumns.begin(), kKbarColumns.end());
  for (Family f : kRollingFamilies) {
    for (int w : windows.windows()) names.push_back(column_name(f, w));
  }
  names.emplace_back("logvol");
  return names;
}

std::size_t alpha158_min_length(const WindowSet& windows) { return static_cast<std::size_t>(windows.max()) + 1; }

std::vector<Column> kbar_features(const AssetSeries& series) {
  const Inputs in(series);
  std::vector<Column> out;
  for (std::size_t k = 0; k < kKbarColumns.size(); ++k) {
    Column c = make_column(std::string(kKbarColumns[k]), in.n);
    detail::fill_kbar(k, in, c);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Column> rolling_price_features(const AssetSeries& series, int w) {
  return group(series, w,
               {Family::kRoc, Family::kMa, Family::kStd, Family::kBeta, Family::kMax, Family::kMin, Family::kQtlu,
                Family::kQtld, Family::kRank});
}

std::vector<Column> position_features(const AssetSeries& series, int w) {
  return group(series, w, {Family::kImax, Family::kImin, Family::kImxd});
}

std::vector<Column> rsv_count_features(const AssetSeries& series, int w) {
  return group(series, w, {Family::kRsv, Family::kCntp, Family::kCntn, Family::kCntd});
}

std::vector<Column> correlation_features(const AssetSeries& series, int w) {
  return group(series, w, {Family::kCorr, Family::kCord});
}

std::vector<Column> sum_features(const AssetSeries& series, int w) {
  return group(series, w, {Family::kSump, Family::kSumn, Family::kSumd});
}

std::vector<Column> volume_features(const AssetSeries& series, int w) {
  return group(series, w,
               {Family::kVma, Family::kVstd, Family::kWvma, Family::kVsump, Family::kVsumn, Family::kVsumd});
}

Column logvol_feature(const AssetSeries& series) {
  const Inputs in(series);
  Column c = make_column("logvol", in.n);
  detail::fill_logvol(in, c);
  return c;
}

FactorMatrix compute_alpha158(const AssetSeries& series, const WindowSet& windows, ExecPolicy policy) {
  return assemble(series, windows, policy == ExecPolicy::kParallel);
}

std::vector<FactorMatrix> compute_alpha158_panel(std::span<const AssetSeries> series, const WindowSet& windows,
                                                 ExecPolicy policy) {
  std::vector<FactorMatrix> out(series.size());
  const auto n = static_cast<std::ptrdiff_t>(series.size());
  if (policy == ExecPolicy::kSerial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = assemble(series[static_cast<std::size_t>(i)], windows, false);
    return out;
  }

  // Exceptions must not escape an OpenMP region; keep the first by asset order.
  std::vector<std::exception_ptr> errors(series.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(i);
    try {
      out[a] = assemble(series[a], windows, false);
    } catch (...) {
      errors[a] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace tradekit::factors
