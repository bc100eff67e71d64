#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "hno/errors.hpp"

namespace hno::detail {

// Little-endian byte serialization, independent of host byte order.

class ByteWriter {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void bytes(const void* p, std::size_t n) {
        const char* c = static_cast<const char*>(p);
        buf_.insert(buf_.end(), c, c + n);
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }
    const std::string& data() const { return buf_; }

private:
    std::string buf_;
};

class ByteReader {
public:
    ByteReader(std::string data, std::string source)
        : buf_(std::move(data)), source_(std::move(source)) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return buf_.size() - pos_; }
    bool at_end() const { return pos_ == buf_.size(); }

    std::uint32_t u32() {
        need(4, "u32");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8, "u64");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const std::uint32_t n = u32();
        need(n, "string payload");
        std::string s = buf_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    void expect_magic(const char (&magic)[5]) {
        need(4, "magic");
        if (buf_.compare(pos_, 4, magic, 4) != 0)
            throw FormatError(source_ + ": bad magic at offset " + std::to_string(pos_));
        pos_ += 4;
    }

    void need(std::size_t n, const char* what) const {
        if (pos_ + n > buf_.size())
            throw FormatError(source_ + ": truncated while reading " + std::string(what) +
                              " at offset " + std::to_string(pos_) + " (file has " +
                              std::to_string(buf_.size()) + " bytes)");
    }

private:
    std::string buf_;
    std::string source_;
    std::size_t pos_ = 0;
};

std::string read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::string& bytes);

}  // namespace hno::detail
