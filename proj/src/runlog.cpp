#include "sandcast/runlog.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "sandcast/errors.hpp"

namespace sandcast::runlog {

std::uint64_t fnv1a64_bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto n = static_cast<std::size_t>(in.gcount());
        for (std::size_t i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (in.eof()) break;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string resolve_path(const std::string& explicit_path) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* env = std::getenv("SANDCAST_LOG"); env && *env) return env;
    return "sandcast_run.log";
}

void append(const Entry& entry, const std::string& path) {
    nlohmann::ordered_json j;
    {
        std::time_t now = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        j["ts"] = buf;
    }
    j["command"] = entry.command;
    j["argv"] = entry.argv_line;
    if (entry.has_seed) j["seed"] = entry.seed;
    j["status"] = entry.status;
    j["elapsed_s"] = entry.elapsed_s;
    j["inputs"] = entry.input_hashes;
    j["metrics"] = entry.metrics;

    const std::string target = resolve_path(path);
    std::ofstream out(target, std::ios::binary | std::ios::app);
    if (!out) throw DataError("cannot append run log: " + target);
    out << j.dump() << '\n';
}

} // namespace sandcast::runlog
