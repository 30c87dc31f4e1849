#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

// Output plumbing shared by the scenario runner: byte-stable number
// formatting, a minimal CSV writer and file checksums.
namespace complexmech::io {

/// %.17g, which round-trips every double. Non-finite values print as
/// nan / inf / -inf.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
    /// Text cells are written verbatim; they must not contain ',' or newlines.
    CsvWriter& cell(std::string_view v);
    void end_row();
    /// Flushes and closes; further writes are errors.
    void close();

private:
    void separator();

    std::ofstream out_;
    std::size_t columns_;
    std::size_t filled_ = 0;
};

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

}  // namespace complexmech::io
