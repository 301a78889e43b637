#ifndef SANDCAST_CSV_HPP
#define SANDCAST_CSV_HPP

#include <string>
#include <vector>

namespace sandcast::csv {

// Strict reader for the project CSV dialect: UTF-8, comma separator,
// mandatory header row, '.' decimal point, no quoting.

struct Row {
    std::vector<std::string> fields;
    std::size_t line_no = 0; // 1-based, header is line 1
};

class Reader {
public:
    // Opens and checks the header against `header` (exact match).
    Reader(const std::string& path, const std::string& header);

    // Returns false at EOF. Throws DataError on wrong column count.
    bool next(Row& row);

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::size_t n_cols_ = 0;
    std::size_t line_no_ = 1;
    std::string buf_;
    std::vector<char> content_;
    std::size_t pos_ = 0;
};

double parse_double(const Row& row, std::size_t col, const std::string& path);
long parse_long(const Row& row, std::size_t col, const std::string& path);

// %.17g — round-trips any finite double through text.
std::string format_double(double v);

} // namespace sandcast::csv

#endif
