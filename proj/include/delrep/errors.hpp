#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace delrep {

// Structurally invalid input data (broken invariants, malformed files).
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arguments exceed the supported desk scale (group order, window size, ...).
struct size_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mathematically meaningless request (element outside its group, mismatched
// groups, non-unimodular matrix where unimodularity is required, ...).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A section was pushed past its window boundary; carries the escaping slot.
struct window_overflow : std::runtime_error {
    std::vector<long long> slot;
    window_overflow(const std::string& what, std::vector<long long> slot_)
        : std::runtime_error(what), slot(std::move(slot_)) {}
};

} // namespace delrep
