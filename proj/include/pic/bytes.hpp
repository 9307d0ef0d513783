// Copyright 2026 The PIC Library Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace pic {

using Bytes = std::vector<std::uint8_t>;

// Malformed wire data; `position` is the byte offset of the fault.
struct CodecError : std::runtime_error {
  CodecError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at byte " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

// All integers and doubles on the wire are big-endian; doubles use the
// IEEE-754 binary64 bit pattern.

inline void put_u16be(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

inline void put_u32be(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

inline void put_f64be(Bytes& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>((bits >> shift) & 0xff));
  }
}

// Sequential reader with bounds checking.
class ByteReader {
 public:
  explicit ByteReader(const Bytes& buf) : buf_(buf) {}

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return buf_.size() - pos_; }

  std::uint8_t get_u8(const char* what) {
    need(1, what);
    return buf_[pos_++];
  }

  std::uint16_t get_u16be(const char* what) {
    need(2, what);
    const std::uint16_t v = static_cast<std::uint16_t>(
        (static_cast<std::uint16_t>(buf_[pos_]) << 8) | buf_[pos_ + 1]);
    pos_ += 2;
    return v;
  }

  std::uint32_t get_u32be(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v = (v << 8) | buf_[pos_ + k];
    pos_ += 4;
    return v;
  }

  double get_f64be(const char* what) {
    need(8, what);
    std::uint64_t bits = 0;
    for (int k = 0; k < 8; ++k) bits = (bits << 8) | buf_[pos_ + k];
    pos_ += 8;
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }

  Bytes get_bytes(std::size_t n, const char* what) {
    need(n, what);
    Bytes v(buf_.begin() + pos_, buf_.begin() + pos_ + n);
    pos_ += n;
    return v;
  }

  void expect_end(const char* what) const {
    if (pos_ != buf_.size()) {
      throw CodecError(std::string("trailing bytes after ") + what, pos_);
    }
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (buf_.size() - pos_ < n) {
      throw CodecError(std::string("truncated input reading ") + what, pos_);
    }
  }

  const Bytes& buf_;
  std::size_t pos_ = 0;
};

}  // namespace pic
