#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "qlab/errors.hpp"

namespace qlab {

/// Shortest round-trip decimal form; byte-stable across reruns by construction.
inline std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

/// Minimal CSV emitter with deterministic formatting.  All writes go through
/// an in-memory buffer so a file is either complete or absent.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
        append_row(header);
    }

    void add_row(const std::vector<std::string>& fields) {
        if (fields.size() != columns_)
            throw DimensionMismatch("CSV row width does not match header");
        append_row(fields);
    }

    const std::string& content() const { return buffer_; }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw FileNotFound(path);
        out << buffer_;
    }

  private:
    void append_row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) buffer_ += ',';
            buffer_ += fields[i];
        }
        buffer_ += '\n';
    }
    std::size_t columns_;
    std::string buffer_;
};

}  // namespace qlab
