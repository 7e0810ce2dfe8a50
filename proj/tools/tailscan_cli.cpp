// Command-line front end: scan a series from a file, tabulate the tail
// bounds, run the Monte Carlo verification suite, or run a power experiment.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailscan/errors.hpp"
#include "tailscan/harness.hpp"
#include "tailscan/loglr.hpp"
#include "tailscan/numerics.hpp"
#include "tailscan/report.hpp"
#include "tailscan/scan.hpp"
#include "tailscan/selfnorm.hpp"
#include "tailscan/studentized.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;

constexpr std::uint64_t kDefaultSeed = 20220301;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("TAILSCAN_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return kDefaultSeed;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

bool parse_number(const std::string& token, double& value) {
    std::size_t pos = 0;
    try {
        value = std::stod(token, &pos);
    } catch (...) {
        return false;
    }
    while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
    return pos == token.size();
}

// One numeric value per line; a non-numeric first line is treated as a header.
std::vector<double> read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read input file: " + path);
    std::vector<double> data;
    std::vector<long> bad_lines;
    std::string line;
    long lineno = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++lineno;
        std::string token = line;
        if (auto c = token.find(','); c != std::string::npos) token = token.substr(0, c);
        const auto b = token.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        token = token.substr(b);
        double value;
        if (!parse_number(token, value)) {
            if (first_content) {
                first_content = false;  // header
                continue;
            }
            bad_lines.push_back(lineno);
            continue;
        }
        first_content = false;
        data.push_back(value);
    }
    if (!bad_lines.empty()) {
        std::ostringstream msg;
        msg << "non-numeric rows at line(s):";
        for (long l : bad_lines) msg << ' ' << l;
        throw std::runtime_error(msg.str());
    }
    return data;
}

tailscan::ScanConfig make_scan_config(double alpha, const std::string& lengths,
                                      const std::string& stride, bool two_sided) {
    tailscan::ScanConfig cfg;
    cfg.alpha = alpha;
    cfg.two_sided = two_sided;
    if (lengths == "dyadic") {
        cfg.grid = tailscan::LengthGrid::dyadic;
    } else if (lengths == "all") {
        cfg.grid = tailscan::LengthGrid::all;
    } else {
        cfg.grid = tailscan::LengthGrid::explicit_list;
        std::stringstream ss(lengths);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) cfg.lengths.push_back(std::stoi(item));
        }
        if (cfg.lengths.empty()) throw std::runtime_error("empty --lengths list");
    }
    if (stride != "auto") cfg.stride = std::stoi(stride);
    return cfg;
}

int cmd_scan(const std::string& input, double alpha, const std::string& lengths,
             const std::string& stride, bool two_sided, const std::string& out,
             const std::string& format) {
    std::vector<double> data;
    try {
        data = read_series(input);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInputError;
    }
    if (data.empty()) {
        std::cerr << "input error: empty input\n";
        return kExitInputError;
    }
    if (data.size() < 8) {
        std::cerr << "input error: need at least 8 observations, got " << data.size() << '\n';
        return kExitInputError;
    }
    try {
        const auto cfg = make_scan_config(alpha, lengths, stride, two_sided);
        const auto res = tailscan::run_scan(data, cfg);
        const std::string text =
            format == "csv" ? tailscan::to_csv(res) : tailscan::to_json(res).dump(2);
        write_output(text, out);
        std::cerr << (res.any_detection ? "detections found" : "no detections") << " ("
                  << res.n_intervals << " intervals)\n";
        return kExitOk;
    } catch (const tailscan::DegenerateDataError& e) {
        std::cerr << "input error: degenerate data: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

int cmd_bounds(const std::string& grid_spec, const std::vector<int>& n_list,
               const std::string& out, const std::string& format) {
    double lo, hi, step;
    {
        std::stringstream ss(grid_spec);
        std::string a, b, c;
        if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c)) {
            std::cerr << "input error: --t-grid must be LO:HI:STEP\n";
            return kExitInputError;
        }
        try {
            lo = std::stod(a);
            hi = std::stod(b);
            step = std::stod(c);
        } catch (...) {
            std::cerr << "input error: bad --t-grid numbers\n";
            return kExitInputError;
        }
    }
    if (!(lo > 0.0) || !(hi > lo) || !(step > 0.0)) {
        std::cerr << "input error: need 0 < LO < HI and STEP > 0\n";
        return kExitInputError;
    }
    for (int n : n_list) {
        if (n < 3) {
            std::cerr << "input error: --n entries must be >= 3\n";
            return kExitInputError;
        }
    }

    std::vector<std::string> columns{"t",          "normal_tail", "thm2a",
                                     "thm2b",      "rademacher",  "bound318"};
    for (int n : n_list) columns.push_back("pivot_exact_n" + std::to_string(n));

    std::vector<std::vector<double>> rows;
    for (double t = lo; t <= hi + 1e-12; t += step) {
        std::vector<double> row{t,
                                tailscan::normal_upper_tail(t),
                                tailscan::tail_bound_thm2(tailscan::Thm2Kind::A, t),
                                tailscan::tail_bound_thm2(tailscan::Thm2Kind::B, t),
                                tailscan::rademacher_selfnorm_bound(t),
                                tailscan::bound318(t)};
        for (int n : n_list) row.push_back(tailscan::pivot_tail_exact(t, n));
        rows.push_back(std::move(row));
    }

    std::string text;
    if (format == "csv") {
        std::ostringstream os;
        os.precision(17);
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << row[i] << (i + 1 < row.size() ? "," : "\n");
        }
        text = os.str();
    } else {
        nlohmann::ordered_json j;
        j["schema"] = tailscan::kSchema;
        j["kind"] = "bounds";
        j["columns"] = columns;
        j["rows"] = rows;
        text = j.dump(2);
    }
    write_output(text, out);
    return kExitOk;
}

int cmd_verify(std::uint64_t seed, long replications, long scan_reps, double bound_scale,
               int threads, const std::string& out) {
    tailscan::HarnessOptions opt;
    opt.bound_replications = replications;
    opt.scan_null_replications = scan_reps;
    opt.scan_power_replications = scan_reps < 200 ? 200 : std::min<long>(scan_reps, 1000);
    opt.threads = threads;
    opt.bound_scale = bound_scale;

    const auto summary = tailscan::run_full_suite(seed, opt);
    write_output(tailscan::to_json(summary).dump(2), out);
    for (const auto& rep : summary.reports) {
        std::cerr << (rep.pass ? "PASS" : "FAIL") << ' ' << rep.name << " ("
                  << rep.wall_seconds << "s)\n";
    }
    std::cerr << (summary.all_pass ? "verify: all checks passed\n"
                                   : "verify: some checks FAILED\n");
    return summary.all_pass ? kExitOk : kExitVerifyFail;
}

int cmd_power(std::uint64_t seed, int n, int len, double margin, double eps,
              const std::string& sigma_field, long reps, double alpha, double target,
              int threads, const std::string& out) {
    tailscan::McSpec spec;
    spec.scenario = tailscan::Scenario::scan_power;
    spec.name = "power_cli";
    spec.seed = seed;
    spec.replications = reps;
    spec.n = n;
    spec.m = len;
    spec.margin = margin;
    spec.eps = eps;
    spec.alpha = alpha;
    spec.target_rate = target;
    spec.law = "normal";
    if (sigma_field != "const") {
        std::stringstream ss(sigma_field);
        std::string kind, a, b;
        std::getline(ss, kind, ':');
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        if (kind != "iid" || a.empty() || b.empty()) {
            std::cerr << "input error: --sigma-field must be const or iid:LO:HI\n";
            return kExitInputError;
        }
        spec.hetero_sigma = true;
        spec.sigma_lo = std::stod(a);
        spec.sigma_hi = std::stod(b);
    }

    try {
        const auto rep = tailscan::run_power_experiment(spec, threads);
        write_output(tailscan::to_json(rep).dump(2), out);
        std::cerr << "detection rate " << rep.detection_rate << " vs target "
                  << rep.rate_reference << " -> " << (rep.pass ? "PASS" : "FAIL") << '\n';
        return rep.pass ? kExitOk : kExitVerifyFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval scan and finite-sample tail bounds for empirically standardized sums"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed_flag;
    std::string out;
    std::string format = "json";

    auto* scan = app.add_subcommand("scan", "Scan a series for elevated-mean intervals");
    std::string input;
    double alpha = 0.05;
    std::string lengths = "dyadic";
    std::string stride = "auto";
    bool two_sided = false;
    scan->add_option("--input", input, "Input file, one numeric value per line")->required();
    scan->add_option("--alpha", alpha, "Family-wise level")->check(CLI::Range(1e-12, 0.999999));
    scan->add_option("--lengths", lengths, "dyadic | all | comma list of window lengths");
    scan->add_option("--stride", stride, "auto | positive offset stride");
    scan->add_flag("--two-sided", two_sided, "Flag |T| exceedances instead of right tail");
    scan->add_option("--out", out, "Output path (default stdout)");
    scan->add_option("--format", format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* bounds = app.add_subcommand("bounds", "Tabulate the tail bounds over a grid");
    std::string t_grid = "0.5:6:0.25";
    std::vector<int> n_list;
    bounds->add_option("--t-grid", t_grid, "LO:HI:STEP with LO > 0");
    bounds->add_option("--n", n_list, "Sample sizes for the exact pivot tail column");
    bounds->add_option("--out", out, "Output path (default stdout)");
    bounds->add_option("--format", format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* verify = app.add_subcommand("verify", "Run the Monte Carlo verification suite");
    long replications = 1'000'000;
    long scan_reps = 500;
    double bound_scale = 1.0;
    int threads = 0;
    verify->add_option("--seed", seed_flag, "Root seed (default env TAILSCAN_SEED or built-in)");
    verify->add_option("--replications", replications, "Replications per bound check (>= 10000)");
    verify->add_option("--scan-reps", scan_reps, "Replications per scan scenario (>= 200)");
    verify->add_option("--bound-scale", bound_scale,
                       "Scale every bound (negative-control testing aid)");
    verify->add_option("--threads", threads, "Worker threads (0 = auto)");
    verify->add_option("--out", out, "Report path (default stdout)");

    auto* power = app.add_subcommand("power", "Planted-signal power experiment");
    int n = 8192, len = 128;
    double margin = 0.2, eps = 0.2, p_alpha = 0.05, target = 0.9;
    std::string sigma_field = "const";
    long reps = 200;
    power->add_option("--n", n, "Series length");
    power->add_option("--len", len, "Planted interval length");
    power->add_option("--margin", margin, "Relative margin over the detection threshold");
    power->add_option("--eps", eps, "Slack in the threshold formula");
    power->add_option("--sigma-field", sigma_field, "const | iid:LO:HI");
    power->add_option("--reps", reps, "Replications (>= 200)");
    power->add_option("--alpha", p_alpha, "Scan level");
    power->add_option("--target-rate", target, "Pass threshold for the detection rate");
    power->add_option("--seed", seed_flag, "Root seed");
    power->add_option("--threads", threads, "Worker threads (0 = auto)");
    power->add_option("--out", out, "Report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (scan->parsed()) {
            return cmd_scan(input, alpha, lengths, stride, two_sided, out, format);
        }
        if (bounds->parsed()) {
            return cmd_bounds(t_grid, n_list, out, format);
        }
        if (verify->parsed()) {
            if (replications < 10'000) {
                std::cerr << "usage error: --replications must be >= 10000\n";
                return kExitInputError;
            }
            if (scan_reps < 200) {
                std::cerr << "usage error: --scan-reps must be >= 200\n";
                return kExitInputError;
            }
            return cmd_verify(resolve_seed(seed_flag), replications, scan_reps, bound_scale,
                              threads, out);
        }
        if (power->parsed()) {
            if (reps < 200) {
                std::cerr << "usage error: --reps must be >= 200\n";
                return kExitInputError;
            }
            return cmd_power(resolve_seed(seed_flag), n, len, margin, eps, sigma_field, reps,
                             p_alpha, target, threads, out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}
