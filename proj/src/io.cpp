#include "pinlab/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace pinlab {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return x;
}

std::string csv_line(std::span<const std::string> fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n\r") == std::string::npos) {
            line += f;
            continue;
        }
        line += '"';
        for (char c : f) {
            if (c == '"') line += '"';
            line += c;
        }
        line += '"';
    }
    line += '\n';
    return line;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n') {
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
            any = false;
        } else if (c != '\r') {
            field += c;
            any = true;
        }
    }
    if (quoted) throw std::runtime_error("csv: unterminated quoted field");
    if (any) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

void write_environment(std::ostream& out, const BinaryEnvironment& env) {
    nlohmann::json header = {{"generator_id", env.generator_id},
                             {"params", env.params},
                             {"seed", env.seed},
                             {"N", env.sites()},
                             {"encoding", "omega0..omegaN lsb-first, 1 = +1"}};
    out << header.dump() << '\n';
    std::vector<unsigned char> bytes((env.omega.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < env.omega.size(); ++i)
        if (env.omega[i] == 1) bytes[i / 8] |= static_cast<unsigned char>(1U << (i % 8));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("environment: write failed");
}

BinaryEnvironment read_environment(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("environment: missing header");
    const nlohmann::json header = nlohmann::json::parse(line);
    BinaryEnvironment env;
    env.generator_id = header.at("generator_id").get<std::string>();
    env.params = header.at("params");
    env.seed = header.at("seed").get<std::uint64_t>();
    const auto N = header.at("N").get<std::size_t>();
    std::vector<unsigned char> bytes((N + 1 + 7) / 8);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size())) throw std::runtime_error("environment: truncated body");
    env.omega.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) env.omega[i] = (bytes[i / 8] >> (i % 8)) & 1U ? 1 : -1;
    return env;
}

void write_diagnostics_csv(std::ostream& out, const DisorderDiagnostics& diag) {
    const std::vector<std::string> header{"n", "p_hat", "ci_low", "ci_high", "eps"};
    out << csv_line(header);
    for (const TailRow& r : diag.tail_estimates) {
        const auto eps = r.resolved ? epsilon_at(diag, r.n) : std::nullopt;
        const std::vector<std::string> f{std::to_string(r.n), format_double(r.p_hat), format_double(r.ci_low),
                                         format_double(r.ci_high), eps ? format_double(*eps) : std::string()};
        out << csv_line(f);
    }
}

namespace {

const std::vector<std::string> kSweepHeader{"generator", "params", "beta", "h", "N",
                                            "seed", "logZfree", "F_N", "contacts_per_N"};

}  // namespace

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << csv_line(kSweepHeader);
    for (const SweepRow& r : rows) {
        const std::vector<std::string> f{r.generator,           r.params,
                                         format_double(r.beta), format_double(r.h),
                                         std::to_string(r.N),   std::to_string(r.seed),
                                         format_double(r.logZfree), format_double(r.F_N),
                                         format_double(r.contact_fraction)};
        out << csv_line(f);
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    const auto records = read_csv(in);
    if (records.empty() || records[0] != kSweepHeader) throw std::runtime_error("sweep csv: unexpected header");
    std::vector<SweepRow> rows;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i];
        if (f.size() != kSweepHeader.size()) throw std::runtime_error("sweep csv: bad record length");
        SweepRow r;
        r.generator = f[0];
        r.params = f[1];
        r.beta = parse_double(f[2]);
        r.h = parse_double(f[3]);
        r.N = std::stoull(f[4]);
        r.seed = std::stoull(f[5]);
        r.logZfree = parse_double(f[6]);
        r.F_N = parse_double(f[7]);
        r.contact_fraction = parse_double(f[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_orthant_csv(std::ostream& out, double a, std::span<const OrthantEstimate> rows) {
    const std::vector<std::string> header{"a", "n", "log_p", "stderr", "ess", "method"};
    out << csv_line(header);
    for (const OrthantEstimate& e : rows) {
        const std::vector<std::string> f{format_double(a),       std::to_string(e.n), format_double(e.log_p),
                                         format_double(e.std_err), format_double(e.ess), to_string(e.method)};
        out << csv_line(f);
    }
}

}  // namespace pinlab
