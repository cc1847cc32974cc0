#include "tradekit/factors/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "tradekit/core/digest.hpp"
#include "tradekit/core/errors.hpp"
#include "tradekit/core/text.hpp"

namespace tradekit::factors {

std::string factor_csv(const FactorMatrix& m) {
  std::string out = "timestamp";
  for (const auto& c : m.columns) {
    out += ',';
    out += c;
  }
  out += '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += format_timestamp(m.calendar[r]);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      out += ',';
      if (m.is_valid(r, c)) out += format_shortest(m.at(r, c));
    }
    out += '\n';
  }
  return out;
}

FactorMatrix parse_factor_csv(std::string_view bytes, std::string symbol) {
  const auto lines = split_lines(bytes);
  if (lines.empty()) throw ParseError("factor csv: missing header");
  auto header = split_csv_line(lines[0]);
  if (header.empty() || to_lower(trim(header[0])) != "timestamp") {
    throw ParseError("factor csv: first column must be timestamp");
  }
  std::vector<std::string> columns(header.begin() + 1, header.end());
  std::vector<Timestamp> calendar;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split_csv_line(lines[i]);
    if (fields.size() != header.size()) {
      throw ParseError("factor csv: row " + std::to_string(i + 1) + " has " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(header.size()));
    }
    calendar.push_back(parse_timestamp(fields[0]));
    rows.push_back(std::move(fields));
  }
  FactorMatrix m(std::move(symbol), std::move(calendar), std::move(columns));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const std::string& cell = rows[r][c + 1];
      if (trim(cell).empty()) continue;
      const auto v = parse_double(cell);
      if (!v) throw ParseError("factor csv: row " + std::to_string(r + 2) + ", column " + m.columns[c] + ": bad number");
      m.set(r, c, *v);
    }
  }
  return m;
}

namespace {

constexpr char kMagic[8] = {'T', 'K', 'F', 'A', 'C', 'T', '0', '1'};

template <typename T>
void write_pod(std::string& out, const T& v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::string_view& in) {
  if (in.size() < sizeof(T)) throw ParseError("factor cache: truncated file");
  T v;
  std::memcpy(&v, in.data(), sizeof v);
  in.remove_prefix(sizeof v);
  return v;
}

void write_string(std::string& out, const std::string& s) {
  write_pod(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

std::string read_string(std::string_view& in) {
  const auto n = read_pod<std::uint32_t>(in);
  if (in.size() < n) throw ParseError("factor cache: truncated string");
  std::string s(in.substr(0, n));
  in.remove_prefix(n);
  return s;
}

}  // namespace

FactorCache::FactorCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string FactorCache::key(const std::string& symbol, const std::string& data_digest, const WindowSet& windows) {
  std::string material = symbol + "|" + data_digest + "|";
  for (int w : windows.windows()) material += std::to_string(w) + ",";
  return sha256_hex(material);
}

std::filesystem::path FactorCache::path_for(const std::string& key) const { return dir_ / (key + ".tkf"); }

void FactorCache::store(const std::string& key, const FactorMatrix& m) const {
  std::string out(kMagic, sizeof kMagic);
  write_string(out, m.symbol);
  write_pod(out, static_cast<std::uint64_t>(m.rows()));
  write_pod(out, static_cast<std::uint64_t>(m.cols()));
  for (const auto& c : m.columns) write_string(out, c);
  for (const auto ts : m.calendar) write_pod(out, static_cast<std::int64_t>(ts.time_since_epoch().count()));
  // column-major blocks: values then validity
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (std::size_t r = 0; r < m.rows(); ++r) write_pod(out, m.at(r, c));
  }
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (std::size_t r = 0; r < m.rows(); ++r) write_pod(out, m.valid[r * m.cols() + c]);
  }
  write_file_atomic(path_for(key), out);
}

std::optional<FactorMatrix> FactorCache::load(const std::string& key) const {
  const auto path = path_for(key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  const std::string bytes = read_file(path);
  std::string_view in(bytes);
  if (in.size() < sizeof kMagic || std::memcmp(in.data(), kMagic, sizeof kMagic) != 0) {
    throw ParseError("factor cache: bad magic in " + path.string());
  }
  in.remove_prefix(sizeof kMagic);
  std::string symbol = read_string(in);
  const auto rows = read_pod<std::uint64_t>(in);
  const auto cols = read_pod<std::uint64_t>(in);
  std::vector<std::string> columns;
  for (std::uint64_t c = 0; c < cols; ++c) columns.push_back(read_string(in));
  std::vector<Timestamp> calendar;
  for (std::uint64_t r = 0; r < rows; ++r) calendar.emplace_back(std::chrono::seconds(read_pod<std::int64_t>(in)));
  FactorMatrix m(std::move(symbol), std::move(calendar), std::move(columns));
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) m.values[r * cols + c] = read_pod<double>(in);
  }
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) m.valid[r * cols + c] = read_pod<std::uint8_t>(in);
  }
  if (!in.empty()) throw ParseError("factor cache: trailing bytes in " + path.string());
  return m;
}

CachedFactors compute_alpha158_cached(const AssetSeries& series, const WindowSet& windows, const FactorCache& cache,
                                      ExecPolicy policy) {
  const std::string key = FactorCache::key(series.symbol(), series_digest(series), windows);
  if (auto hit = cache.load(key)) return {std::move(*hit), true};
  FactorMatrix m = compute_alpha158(series, windows, policy);
  cache.store(key, m);
  return {std::move(m), false};
}

}  // namespace tradekit::factors
