#pragma once

// Command-line surface: classification, irreducibles, label equivalence,
// decomposition transport, and the property self-test batteries.
//
// Exit-code contract: 0 success, 1 input or validation error, 2 property
// failure (self-test), each with diagnostics on the error stream.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace delrep {

/// argv-style arguments without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SelftestOptions {
    std::string suite = "all"; // fock|spectral|induced|finheis|intertwine|all
    std::uint64_t seed = 20260801;
    int trials = 200;
    double tol = 1e-8;
    // Induced-suite geometry: window radius, harmonic mode count, Fock degree.
    int window = 3;
    int modes = 1;
    int degree = 18;
};

/// Runs the named property suites, one report line per property, all
/// batteries deterministic under the seed. Returns 0 when every property
/// holds and 2 otherwise; failures carry a reproduction record.
int run_selftest(const SelftestOptions& opt, std::ostream& out);

} // namespace delrep
