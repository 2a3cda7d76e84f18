#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace skrank {

/// Minimal unsigned big integer: just enough to count cross-product sizes
/// that overflow 64 bits (a log with 1000 three-way events has ~10^477
/// realizations). Little-endian base-2^32 limbs.
class BigUint {
 public:
  explicit BigUint(std::uint64_t value = 0) {
    limbs_.push_back(static_cast<std::uint32_t>(value & 0xffffffffu));
    if (value >> 32) limbs_.push_back(static_cast<std::uint32_t>(value >> 32));
  }

  BigUint& operator*=(std::uint64_t factor) {
    if (factor == 0 || is_zero()) {
      limbs_.assign(1, 0);
      return *this;
    }
    std::uint32_t lo = static_cast<std::uint32_t>(factor & 0xffffffffu);
    std::uint32_t hi = static_cast<std::uint32_t>(factor >> 32);
    if (hi == 0) {
      mul_u32(lo);
      return *this;
    }
    // value*factor = value*lo + ((value*hi) << 32)
    BigUint high = *this;
    high.mul_u32(hi);
    high.limbs_.insert(high.limbs_.begin(), 0);
    mul_u32(lo);
    add(high);
    trim();
    return *this;
  }

  bool fits_uint64() const {
    for (std::size_t i = 2; i < limbs_.size(); ++i)
      if (limbs_[i] != 0) return false;
    return true;
  }

  std::uint64_t to_uint64() const {
    std::uint64_t v = limbs_[0];
    if (limbs_.size() > 1) v |= static_cast<std::uint64_t>(limbs_[1]) << 32;
    return v;
  }

  /// -1, 0 or +1 against a plain 64-bit value.
  int compare(std::uint64_t value) const {
    if (!fits_uint64()) return 1;
    std::uint64_t v = to_uint64();
    if (v < value) return -1;
    if (v > value) return 1;
    return 0;
  }

  bool operator==(const BigUint& other) const { return limbs_ == other.limbs_; }
  bool operator==(std::uint64_t value) const { return compare(value) == 0; }
  bool operator<=(std::uint64_t value) const { return compare(value) <= 0; }
  bool operator>(std::uint64_t value) const { return compare(value) > 0; }

  std::string to_string() const {
    // Repeated divmod by 1e9, emitting decimal chunks.
    std::vector<std::uint32_t> work = limbs_;
    std::string out;
    while (!(work.size() == 1 && work[0] == 0)) {
      std::uint64_t rem = 0;
      for (std::size_t i = work.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | work[i];
        work[i] = static_cast<std::uint32_t>(cur / 1000000000u);
        rem = cur % 1000000000u;
      }
      while (work.size() > 1 && work.back() == 0) work.pop_back();
      std::string chunk = std::to_string(rem);
      bool last = (work.size() == 1 && work[0] == 0);
      if (!last) chunk.insert(0, 9 - chunk.size(), '0');
      out.insert(0, chunk);
    }
    return out.empty() ? "0" : out;
  }

 private:
  bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }

  void trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
  }

  void mul_u32(std::uint32_t factor) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs_) {
      std::uint64_t cur = static_cast<std::uint64_t>(limb) * factor + carry;
      limb = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    while (carry) {
      limbs_.push_back(static_cast<std::uint32_t>(carry & 0xffffffffu));
      carry >>= 32;
    }
  }

  void add(const BigUint& other) {
    if (other.limbs_.size() > limbs_.size()) limbs_.resize(other.limbs_.size(), 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t cur = carry + limbs_[i];
      if (i < other.limbs_.size()) cur += other.limbs_[i];
      limbs_[i] = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  std::vector<std::uint32_t> limbs_;
};

}  // namespace skrank
