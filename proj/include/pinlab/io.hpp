#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pinlab/diagnostics.hpp"
#include "pinlab/environment.hpp"
#include "pinlab/orthant.hpp"

namespace pinlab {

/// Shortest locale-free rendering with 17 significant digits.
std::string format_double(double x);
double parse_double(std::string_view s);

/// One CSV record; fields containing ',' '"' or newlines are quoted.
std::string csv_line(std::span<const std::string> fields);
/// Parses a whole CSV document into records (header included).
std::vector<std::vector<std::string>> read_csv(std::istream& in);

/// One JSON header line followed by ω_0..ω_N packed LSB-first, bit set for +1.
void write_environment(std::ostream& out, const BinaryEnvironment& env);
BinaryEnvironment read_environment(std::istream& in);

/// Columns n,p_hat,ci_low,ci_high,eps.
void write_diagnostics_csv(std::ostream& out, const DisorderDiagnostics& diag);

struct SweepRow {
    std::string generator;
    std::string params;
    double beta = 0.0;
    double h = 0.0;
    std::size_t N = 0;
    std::uint64_t seed = 0;
    double logZfree = 0.0;
    double F_N = 0.0;
    double contact_fraction = 0.0;
};

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Columns a,n,log_p,stderr,ess,method.
void write_orthant_csv(std::ostream& out, double a, std::span<const OrthantEstimate> rows);

}  // namespace pinlab
