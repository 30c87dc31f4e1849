#include "complexmech/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace complexmech::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (auto h : header) cell(h);
    end_row();
}

void CsvWriter::separator() {
    if (filled_ == columns_) throw std::logic_error("csv row has too many cells");
    if (filled_ > 0) out_ << ',';
    ++filled_;
}

CsvWriter& CsvWriter::cell(double v) {
    separator();
    out_ << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
    separator();
    out_ << v;
    return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
    separator();
    out_ << v;
    return *this;
}

void CsvWriter::end_row() {
    if (filled_ != columns_) throw std::logic_error("csv row has too few cells");
    out_ << '\n';
    filled_ = 0;
    if (!out_) throw std::runtime_error("csv write failed");
}

void CsvWriter::close() {
    if (filled_ != 0) throw std::logic_error("csv row left open");
    out_.close();
    if (!out_) throw std::runtime_error("csv close failed");
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

}  // namespace complexmech::io
