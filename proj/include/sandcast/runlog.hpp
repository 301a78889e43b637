#ifndef SANDCAST_RUNLOG_HPP
#define SANDCAST_RUNLOG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sandcast::runlog {

std::uint64_t fnv1a64_file(const std::string& path);
std::uint64_t fnv1a64_bytes(const void* data, std::size_t n);
std::string hex64(std::uint64_t v);

struct Entry {
    std::string command;
    std::string argv_line;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string status = "ok";
    double elapsed_s = 0.0;
    std::map<std::string, std::string> input_hashes; // path -> fnv1a64 hex
    std::map<std::string, double> metrics;
};

/// Appends one JSON line. Path resolution: explicit arg, else $SANDCAST_LOG,
/// else ./sandcast_run.log. The ts and elapsed_s fields are the only
/// non-deterministic ones.
void append(const Entry& entry, const std::string& path = "");

std::string resolve_path(const std::string& explicit_path);

} // namespace sandcast::runlog

#endif
