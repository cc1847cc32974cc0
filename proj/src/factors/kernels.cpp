#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>

namespace tradekit::factors::detail {

namespace {

inline void put(Column& c, std::size_t t, double v) {
  c.values[t] = v;
  c.valid[t] = 1;
}

bool all_equal(const std::vector<double>& x, std::size_t lo, std::size_t w) {
  for (std::size_t i = 1; i < w; ++i) {
    if (x[lo + i] != x[lo]) return false;
  }
  return true;
}

struct MeanStd {
  double mean;
  double std;
};

// Two-pass moments on deviations from the first element, so a constant
// window yields exactly (c, 0).
MeanStd window_moments(const std::vector<double>& x, std::size_t lo, std::size_t w) {
  const double base = x[lo];
  double s = 0.0;
  for (std::size_t i = 0; i < w; ++i) s += x[lo + i] - base;
  const double md = s / static_cast<double>(w);
  double ss = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    const double d = x[lo + i] - base - md;
    ss += d * d;
  }
  return {base + md, std::sqrt(ss / static_cast<double>(w))};
}

std::optional<double> window_pearson(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo,
                                     std::size_t w) {
  if (all_equal(x, lo, w) || all_equal(y, lo, w)) return std::nullopt;
  const double bx = x[lo];
  const double by = y[lo];
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    sx += x[lo + i] - bx;
    sy += y[lo + i] - by;
  }
  const double mx = sx / static_cast<double>(w);
  const double my = sy / static_cast<double>(w);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    const double dx = x[lo + i] - bx - mx;
    const double dy = y[lo + i] - by - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

/// Index of the trailing-window extreme for every t >= w-1, earliest index on
/// ties. Monotonic deque, O(n).
std::vector<std::size_t> rolling_arg_extreme(const std::vector<double>& x, std::size_t w, bool want_max) {
  std::vector<std::size_t> out(x.size(), 0);
  std::deque<std::size_t> dq;
  for (std::size_t t = 0; t < x.size(); ++t) {
    while (!dq.empty() && (want_max ? x[dq.back()] < x[t] : x[dq.back()] > x[t])) dq.pop_back();
    dq.push_back(t);
    if (dq.front() + w <= t) dq.pop_front();
    out[t] = dq.front();
  }
  return out;
}

/// Sorted copy of the trailing window, updated by one insert and one erase
/// per step.
class SortedWindow {
 public:
  explicit SortedWindow(std::size_t w) { v_.reserve(w + 1); }
  void insert(double x) { v_.insert(std::upper_bound(v_.begin(), v_.end(), x), x); }
  void erase(double x) { v_.erase(std::lower_bound(v_.begin(), v_.end(), x)); }
  const std::vector<double>& values() const { return v_; }

  double quantile(double q) const {
    const double h = q * static_cast<double>(v_.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= v_.size()) return v_.back();
    return v_[lo] + (h - static_cast<double>(lo)) * (v_[lo + 1] - v_[lo]);
  }

  /// Average 1-based rank of x among the window values.
  double average_rank(double x) const {
    const auto lo = std::lower_bound(v_.begin(), v_.end(), x);
    const auto hi = std::upper_bound(v_.begin(), v_.end(), x);
    const double less = static_cast<double>(lo - v_.begin());
    const double equal = static_cast<double>(hi - lo);
    return less + (equal + 1.0) / 2.0;
  }

 private:
  std::vector<double> v_;
};

template <typename Emit>
void for_sorted_windows(const std::vector<double>& x, std::size_t w, Emit&& emit) {
  SortedWindow win(w);
  for (std::size_t t = 0; t < x.size(); ++t) {
    win.insert(x[t]);
    if (t >= w) win.erase(x[t - w]);
    if (t + 1 >= w) emit(t, win);
  }
}

void fill_extreme_ratio(const Inputs& in, std::size_t w, bool want_max, Column& out) {
  const auto idx = rolling_arg_extreme(in.close, w, want_max);
  for (std::size_t t = w - 1; t < in.n; ++t) put(out, t, in.close[idx[t]] / in.close[t]);
}

void fill_position(const Inputs& in, std::size_t w, Family f, Column& out) {
  const double wd = static_cast<double>(w);
  std::vector<std::size_t> amax, amin;
  if (f != Family::kImin) amax = rolling_arg_extreme(in.high, w, true);
  if (f != Family::kImax) amin = rolling_arg_extreme(in.low, w, false);
  for (std::size_t t = w - 1; t < in.n; ++t) {
    const std::size_t start = t + 1 - w;
    switch (f) {
      case Family::kImax: put(out, t, static_cast<double>(amax[t] - start) / wd); break;
      case Family::kImin: put(out, t, static_cast<double>(amin[t] - start) / wd); break;
      default:
        put(out, t, (static_cast<double>(amax[t] - start) - static_cast<double>(amin[t] - start)) / wd);
        break;
    }
  }
}

void fill_rsv(const Inputs& in, std::size_t w, Column& out) {
  const auto hh = rolling_arg_extreme(in.high, w, true);
  const auto ll = rolling_arg_extreme(in.low, w, false);
  for (std::size_t t = w - 1; t < in.n; ++t) {
    const double lo = in.low[ll[t]];
    const double den = in.high[hh[t]] - lo;
    if (den == 0.0) continue;
    put(out, t, (in.close[t] - lo) / den);
  }
}

void fill_counts(const Inputs& in, std::size_t w, Family f, Column& out) {
  const double wd = static_cast<double>(w);
  long pos = 0, neg = 0;
  for (std::size_t t = 1; t < in.n; ++t) {
    pos += in.ret1[t] > 0.0;
    neg += in.ret1[t] < 0.0;
    if (t > w) {
      pos -= in.ret1[t - w] > 0.0;
      neg -= in.ret1[t - w] < 0.0;
    }
    if (t < w) continue;
    const double p = static_cast<double>(pos) / wd;
    const double q = static_cast<double>(neg) / wd;
    put(out, t, f == Family::kCntp ? p : f == Family::kCntn ? q : p - q);
  }
}

void fill_signed_sum_ratio(const std::vector<double>& x, const std::vector<std::uint8_t>* ok, std::size_t w,
                           int variant, std::size_t n, Column& out) {
  for (std::size_t t = w; t < n; ++t) {
    const std::size_t lo = t + 1 - w;
    double pos = 0.0, abs = 0.0;
    bool usable = true;
    for (std::size_t j = lo; j <= t; ++j) {
      if (ok && !(*ok)[j]) {
        usable = false;
        break;
      }
      pos += std::max(x[j], 0.0);
      abs += std::abs(x[j]);
    }
    if (!usable || abs == 0.0) continue;
    const double ratio = pos / abs;
    put(out, t, variant == 0 ? ratio : variant == 1 ? 1.0 - ratio : 2.0 * ratio - 1.0);
  }
}

}  // namespace

Inputs::Inputs(const AssetSeries& series) : n(series.size()) {
  open.resize(n);
  high.resize(n);
  low.resize(n);
  close.resize(n);
  volume.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const Bar& b = series[t];
    open[t] = b.open;
    high[t] = b.high;
    low[t] = b.low;
    close[t] = b.close;
    volume[t] = b.volume;
  }
  ret1.assign(n, 0.0);
  absret.assign(n, 0.0);
  vchg1.assign(n, 0.0);
  vchg_ok.assign(n, 0);
  logvol.resize(n);
  cratio.assign(n, 0.0);
  lvr.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) logvol[t] = std::log(volume[t] + 1.0);
  for (std::size_t t = 1; t < n; ++t) {
    ret1[t] = close[t] / close[t - 1] - 1.0;
    absret[t] = std::abs(ret1[t]);
    cratio[t] = close[t] / close[t - 1];
    if (volume[t - 1] > 0.0) {
      vchg1[t] = volume[t] / volume[t - 1] - 1.0;
      lvr[t] = std::log(volume[t] / volume[t - 1] + 1.0);
      vchg_ok[t] = 1;
    }
  }
}

Column make_column(std::string name, std::size_t n) {
  return Column{std::move(name), std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 0)};
}

void fill_kbar(std::size_t which, const Inputs& in, Column& out) {
  for (std::size_t t = 0; t < in.n; ++t) {
    const double o = in.open[t], h = in.high[t], l = in.low[t], c = in.close[t];
    const double range = h - l;
    const bool by_range = which == 1 || which == 4 || which == 6 || which == 8;
    if (by_range && range == 0.0) continue;
    double v = 0.0;
    switch (which) {
      case 0: v = (c - o) / c; break;
      case 1: v = (c - o) / range; break;
      case 2: v = range / o; break;
      case 3: v = (h - std::max(o, c)) / o; break;
      case 4: v = (h - std::max(o, c)) / range; break;
      case 5: v = (std::min(o, c) - l) / o; break;
      case 6: v = (std::min(o, c) - l) / range; break;
      case 7: v = (2.0 * c - h - l) / o; break;
      case 8: v = (2.0 * c - h - l) / range; break;
      default: break;
    }
    put(out, t, v);
  }
}

void fill_logvol(const Inputs& in, Column& out) {
  for (std::size_t t = 0; t < in.n; ++t) put(out, t, in.logvol[t]);
}

void fill_family(Family f, int w_int, const Inputs& in, Column& out) {
  const auto w = static_cast<std::size_t>(w_int);
  const double wd = static_cast<double>(w);
  const std::size_t n = in.n;
  if (n < w) return;

  switch (f) {
    case Family::kRoc:
      for (std::size_t t = w; t < n; ++t) put(out, t, in.close[t - w] / in.close[t]);
      break;
    case Family::kBeta:
      for (std::size_t t = w; t < n; ++t) put(out, t, (in.close[t - w] - in.close[t]) / (wd * in.close[t]));
      break;
    case Family::kMa:
    case Family::kStd:
      for (std::size_t t = w - 1; t < n; ++t) {
        const auto m = window_moments(in.close, t + 1 - w, w);
        put(out, t, (f == Family::kMa ? m.mean : m.std) / in.close[t]);
      }
      break;
    case Family::kMax: fill_extreme_ratio(in, w, true, out); break;
    case Family::kMin: fill_extreme_ratio(in, w, false, out); break;
    case Family::kQtlu:
    case Family::kQtld: {
      const double q = f == Family::kQtlu ? 0.8 : 0.2;
      for_sorted_windows(in.close, w, [&](std::size_t t, const SortedWindow& win) {
        put(out, t, (in.close[t] - win.quantile(q)) / in.close[t]);
      });
      break;
    }
    case Family::kRank:
      for_sorted_windows(in.close, w, [&](std::size_t t, const SortedWindow& win) {
        put(out, t, win.average_rank(in.close[t]) / wd / wd);
      });
      break;
    case Family::kImax:
    case Family::kImin:
    case Family::kImxd: fill_position(in, w, f, out); break;
    case Family::kRsv: fill_rsv(in, w, out); break;
    case Family::kCntp:
    case Family::kCntn:
    case Family::kCntd: fill_counts(in, w, f, out); break;
    case Family::kCorr:
      for (std::size_t t = w - 1; t < n; ++t) {
        if (auto r = window_pearson(in.close, in.logvol, t + 1 - w, w)) put(out, t, *r);
      }
      break;
    case Family::kCord:
      for (std::size_t t = w; t < n; ++t) {
        const std::size_t lo = t + 1 - w;
        bool ok = true;
        for (std::size_t j = lo; j <= t && ok; ++j) ok = in.vchg_ok[j] != 0;
        if (!ok) continue;
        if (auto r = window_pearson(in.cratio, in.lvr, lo, w)) put(out, t, *r);
      }
      break;
    case Family::kSump: fill_signed_sum_ratio(in.ret1, nullptr, w, 0, n, out); break;
    case Family::kSumn: fill_signed_sum_ratio(in.ret1, nullptr, w, 1, n, out); break;
    case Family::kSumd: fill_signed_sum_ratio(in.ret1, nullptr, w, 2, n, out); break;
    case Family::kVma:
    case Family::kVstd:
      for (std::size_t t = w - 1; t < n; ++t) {
        if (in.volume[t] == 0.0) continue;
        const auto m = window_moments(in.volume, t + 1 - w, w);
        put(out, t, (f == Family::kVma ? m.mean : m.std) / in.volume[t]);
      }
      break;
    case Family::kWvma:
      for (std::size_t t = w; t < n; ++t) {
        const auto m = window_moments(in.absret, t + 1 - w, w);
        if (m.mean == 0.0) continue;
        put(out, t, m.std / m.mean);
      }
      break;
    case Family::kVsump: fill_signed_sum_ratio(in.vchg1, &in.vchg_ok, w, 0, n, out); break;
    case Family::kVsumn: fill_signed_sum_ratio(in.vchg1, &in.vchg_ok, w, 1, n, out); break;
    case Family::kVsumd: fill_signed_sum_ratio(in.vchg1, &in.vchg_ok, w, 2, n, out); break;
  }
}

}  // namespace tradekit::factors::detail
