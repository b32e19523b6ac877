#pragma once

// Exhaustive occupancy oracle: every one of k_out^k_in destination
// assignments is equally likely; a request is blocked unless it is the one
// an output keeps, so per assignment blocked = k_in - (occupied outputs).

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

inline long double occupancy_blocking(int k_in, int k_out)
{
    if (k_in == 0)
        return 0.0L;
    std::vector<int> dest(static_cast<std::size_t>(k_in), 0);
    std::uint64_t total = 0;
    std::uint64_t blocked = 0;
    for (;;) {
        std::set<int> used(dest.begin(), dest.end());
        blocked += static_cast<std::uint64_t>(k_in) - used.size();
        ++total;
        // Odometer increment over base k_out.
        int pos = 0;
        while (pos < k_in && ++dest[static_cast<std::size_t>(pos)] == k_out) {
            dest[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == k_in)
            break;
    }
    return static_cast<long double>(blocked) / (static_cast<long double>(total) * k_in);
}

} // namespace oracle
