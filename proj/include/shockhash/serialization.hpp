/*
   Copyright 2026 The ShockHash Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <shockhash/errors.hpp>

namespace shockhash {

//! Little-endian integer sink for descriptor serialization
class ByteWriter {
  public:
    template <typename T>
    void put(T value) {
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            bytes_.push_back(static_cast<std::byte>(static_cast<std::uint64_t>(value) >> (8 * i)));
        }
    }

    void put_bytes(std::span<const std::byte> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }

    void put_words(std::span<const std::uint64_t> words) {
        for (const std::uint64_t w : words) put(w);
    }

    [[nodiscard]] std::size_t size() const { return bytes_.size(); }
    std::vector<std::byte> release() { return std::move(bytes_); }

  private:
    std::vector<std::byte> bytes_;
};

//! Little-endian integer source; every read past the end throws FormatError
class ByteReader {
  public:
    explicit ByteReader(std::span<const std::byte> data) : data_(data) {}

    template <typename T>
    T get() {
        require(sizeof(T));
        std::uint64_t value = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            value |= static_cast<std::uint64_t>(data_[offset_ + i]) << (8 * i);
        }
        offset_ += sizeof(T);
        return static_cast<T>(value);
    }

    std::span<const std::byte> get_bytes(std::size_t count) {
        require(count);
        auto out = data_.subspan(offset_, count);
        offset_ += count;
        return out;
    }

    std::vector<std::uint64_t> get_words(std::size_t count) {
        if (count > remaining() / 8) throw FormatError("descriptor truncated");
        std::vector<std::uint64_t> words(count);
        for (auto& w : words) w = get<std::uint64_t>();
        return words;
    }

    [[nodiscard]] std::size_t offset() const { return offset_; }
    [[nodiscard]] std::size_t remaining() const { return data_.size() - offset_; }

  private:
    void require(std::size_t count) const {
        if (count > remaining()) throw FormatError("descriptor truncated");
    }

    std::span<const std::byte> data_;
    std::size_t offset_{0};
};

}  // namespace shockhash
