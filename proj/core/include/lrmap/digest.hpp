#pragma once

#include <lrmap/types.hpp>

#include <cstdint>
#include <cstring>
#include <string>

namespace lrmap {

/// 64-bit FNV-1a running hash. Stable across platforms for IEEE-754 inputs,
/// which makes digests reproducible in reports.
class Digest {
 public:
  Digest& bytes(const void* data, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= b[i];
      state_ *= 0x100000001b3ull;
    }
    return *this;
  }

  Digest& u64(std::uint64_t v) { return bytes(&v, sizeof v); }
  Digest& i64(std::int64_t v) { return bytes(&v, sizeof v); }

  Digest& f64(double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    return u64(bits);
  }

  Digest& matrix(const Matrix& m) {
    i64(m.rows());
    i64(m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        f64(m(i, j));
      }
    }
    return *this;
  }

  std::uint64_t value() const { return state_; }

  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t v = state_;
    for (int i = 15; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = digits[v & 0xf];
      v >>= 4;
    }
    return out;
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

inline std::uint64_t matrix_digest(const Matrix& m) {
  return Digest().matrix(m).value();
}

}  // namespace lrmap
