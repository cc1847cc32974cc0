#include "tradekit/core/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <memory>

#include "tradekit/core/errors.hpp"

namespace tradekit {

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
  }
  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_.get(), data, n); }
  template <typename T>
  void update_pod(const T& v) {
    update(&v, sizeof v);
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md.data(), &len);
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kDigits[md[i] >> 4]);
      out.push_back(kDigits[md[i] & 0xf]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string series_digest(const AssetSeries& series) {
  Sha256 h;
  h.update(series.symbol().data(), series.symbol().size());
  for (const Bar& b : series.bars()) {
    h.update_pod(static_cast<std::int64_t>(b.timestamp.time_since_epoch().count()));
    for (double v : {b.open, b.high, b.low, b.close, b.volume}) h.update_pod(v);
    const std::uint8_t has_adj = b.adjusted_close ? 1 : 0;
    h.update_pod(has_adj);
    if (b.adjusted_close) h.update_pod(*b.adjusted_close);
  }
  return h.hex();
}

}  // namespace tradekit
