#ifndef SANDCAST_SELFTEST_HPP
#define SANDCAST_SELFTEST_HPP

#include <iosfwd>
#include <string>

namespace sandcast::selftest {

struct Summary {
    int passed = 0;
    int failed = 0;
    bool ok() const { return failed == 0; }
};

/// Runs the full acceptance property suite, one [PASS]/[FAIL] line per
/// criterion. `work_dir` holds the temporary artifacts (defaults to a
/// fresh directory under the system temp path, removed afterwards).
Summary run_all(std::ostream& out, int threads = 1, const std::string& work_dir = "");

} // namespace sandcast::selftest

#endif
