#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcw {

struct CheckLine {
    std::string name;
    bool ok = true;
    std::string detail;
};

// The invariant suite over every 1 <= n <= n_max, 1 <= m <= m_max.
// seed randomizes Smith-form pivoting as an extra consistency check.
std::vector<CheckLine> run_check_suite(int n_max, int m_max, std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace mcw
