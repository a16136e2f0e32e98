#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hoplite/common.hpp"

namespace hoplite {

static_assert(std::endian::native == std::endian::little,
              "binary formats are little-endian; big-endian hosts need byte swaps");

// Buffered little-endian writers/readers for the cache and checkpoint formats.
class BinWriter {
public:
  explicit BinWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot write " + path);
  }
  void raw(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), n); }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void u64(std::uint64_t v) { raw(&v, 8); }
  void f64(double v) { raw(&v, 8); }
  void u32_array(const std::uint32_t* p, std::size_t n) { raw(p, n * 4); }
  void f64_array(const double* p, std::size_t n) { raw(p, n * 8); }
  void finish() {
    out_.flush();
    if (!out_) throw IoError("write failed: " + path_);
  }

private:
  std::string path_;
  std::ofstream out_;
};

class BinReader {
public:
  explicit BinReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + path);
    in_.seekg(0, std::ios::end);
    size_ = static_cast<std::uint64_t>(in_.tellg());
    in_.seekg(0);
  }
  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), n);
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw FormatError(path_ + ": truncated file");
  }
  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, 4);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    raw(&v, 8);
    return v;
  }
  double f64() {
    double v;
    raw(&v, 8);
    return v;
  }
  void u32_array(std::uint32_t* p, std::size_t n) { raw(p, n * 4); }
  void f64_array(double* p, std::size_t n) { raw(p, n * 8); }
  void skip(std::uint64_t n) {
    in_.seekg(static_cast<std::streamoff>(n), std::ios::cur);
    if (!in_ || static_cast<std::uint64_t>(in_.tellg()) > size_)
      throw FormatError(path_ + ": truncated file");
  }
  void seek(std::uint64_t pos) {
    in_.clear();
    in_.seekg(static_cast<std::streamoff>(pos));
  }
  void expect_eof() {
    if (static_cast<std::uint64_t>(in_.tellg()) != size_)
      throw FormatError(path_ + ": trailing bytes");
  }

private:
  std::string path_;
  std::ifstream in_;
  std::uint64_t size_ = 0;
};

}  // namespace hoplite
