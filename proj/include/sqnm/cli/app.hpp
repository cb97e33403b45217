#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sqnm::cli {

/// Exact fraction num/den with den > 0, in lowest terms.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

/// Parses "3", "-2", "1.5", "4/3" or "0.5/2" into an exact fraction. Throws Parse.
Rational parse_rational(std::string_view text);
/// Comma-separated list of rationals, e.g. "4/3,4/3".
std::vector<Rational> parse_rational_list(std::string_view text);
/// True when sum_i 1/parts_i == 1/p holds exactly.
bool harmonic_identity_exact(const Rational& p, const std::vector<Rational>& parts);

/// Runs one subcommand. The report goes to --output when given, otherwise to
/// `out`; diagnostics go to `err`. Returns 0 on success, 1 on a runtime error and
/// 2 on a command-line error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

} // namespace sqnm::cli
