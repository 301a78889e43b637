#include "sandcast/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "sandcast/errors.hpp"

namespace sandcast::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

} // namespace

Reader::Reader(const std::string& path, const std::string& header) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    in.seekg(0, std::ios::end);
    content_.resize(static_cast<std::size_t>(in.tellg()));
    in.seekg(0);
    if (!content_.empty()) in.read(content_.data(), static_cast<std::streamsize>(content_.size()));

    Row hdr;
    hdr.line_no = 0;
    line_no_ = 0;
    if (!next(hdr)) throw DataError("empty file (missing header): " + path);
    std::string got;
    for (std::size_t i = 0; i < hdr.fields.size(); ++i) {
        if (i) got += ',';
        got += hdr.fields[i];
    }
    if (got != header)
        throw DataError("bad header in " + path + ": expected '" + header + "', got '" + got + "'");
    n_cols_ = hdr.fields.size();
}

bool Reader::next(Row& row) {
    while (pos_ < content_.size()) {
        std::size_t end = pos_;
        while (end < content_.size() && content_[end] != '\n') ++end;
        std::size_t len = end - pos_;
        if (len > 0 && content_[pos_ + len - 1] == '\r') --len;
        buf_.assign(content_.data() + pos_, len);
        pos_ = end + 1;
        ++line_no_;
        if (buf_.empty()) continue; // tolerate trailing blank lines
        row.fields = split(buf_);
        row.line_no = line_no_;
        if (n_cols_ != 0 && row.fields.size() != n_cols_)
            throw DataError("parse error in " + path_ + " line " + std::to_string(line_no_) +
                            ": expected " + std::to_string(n_cols_) + " columns, got " +
                            std::to_string(row.fields.size()));
        return true;
    }
    return false;
}

double parse_double(const Row& row, std::size_t col, const std::string& path) {
    const std::string& s = row.fields[col];
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw DataError("parse error in " + path + " line " + std::to_string(row.line_no) +
                        ": non-numeric field '" + s + "'");
    return v;
}

long parse_long(const Row& row, std::size_t col, const std::string& path) {
    const std::string& s = row.fields[col];
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw DataError("parse error in " + path + " line " + std::to_string(row.line_no) +
                        ": non-integer field '" + s + "'");
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace sandcast::csv
