#include "tailscan/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "tailscan/expfam.hpp"
#include "tailscan/loglr.hpp"
#include "tailscan/logconcave.hpp"
#include "tailscan/numerics.hpp"
#include "tailscan/rng.hpp"
#include "tailscan/scan.hpp"
#include "tailscan/selfnorm.hpp"
#include "tailscan/studentized.hpp"

namespace tailscan {

namespace {

constexpr int kChunks = 64;  // fixed stream split, independent of thread count

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw == 0 ? 4u : hw, 16u));
}

// Runs work(0..n_tasks-1) on a small pool; tasks pull from a shared counter,
// so results must be combined order-independently by the caller.
void parallel_tasks(int n_tasks, int threads, const std::function<void(int)>& work) {
    const int n_workers = std::min(resolve_threads(threads), n_tasks);
    if (n_workers <= 1) {
        for (int i = 0; i < n_tasks; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n_tasks) return;
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

long chunk_reps(long total, int chunk) {
    const long base = total / kChunks;
    return base + (chunk < total % kChunks ? 1 : 0);
}

SymmetricLogConcave law_by_name(const std::string& name) {
    if (name == "normal") return standard_normal_law();
    if (name == "laplace") return laplace_law(1.0);
    if (name == "uniform") return uniform_law(1.0);
    throw std::invalid_argument("unknown law: " + name);
}

// Counts exceedances of `stat(rng)` over the grid, chunked and summed.
std::vector<long> mc_exceedances(const McSpec& spec, int threads,
                                 const std::function<double(Rng&)>& stat,
                                 const std::vector<double>& grid) {
    std::vector<std::vector<long>> per_chunk(kChunks, std::vector<long>(grid.size(), 0));
    parallel_tasks(kChunks, threads, [&](int c) {
        Rng rng(derive_seed(spec.seed, "chunk", static_cast<std::uint64_t>(c)));
        auto& counts = per_chunk[c];
        const long reps = chunk_reps(spec.replications, c);
        for (long r = 0; r < reps; ++r) {
            const double v = stat(rng);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                if (v > grid[k]) ++counts[k];
            }
        }
    });
    std::vector<long> total(grid.size(), 0);
    for (const auto& counts : per_chunk)
        for (std::size_t k = 0; k < grid.size(); ++k) total[k] += counts[k];
    return total;
}

McReport tabulate(const McSpec& spec, const std::vector<double>& grid,
                  const std::vector<long>& counts,
                  const std::function<double(double)>& bound) {
    McReport rep;
    rep.name = spec.name;
    rep.scenario = spec.scenario;
    rep.seed = spec.seed;
    rep.replications = spec.replications;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        McThresholdRow row;
        row.t = grid[k];
        row.exceed_count = counts[k];
        row.empirical = static_cast<double>(counts[k]) / spec.replications;
        row.stderr_ = std::sqrt(row.empirical * (1.0 - row.empirical) / spec.replications);
        row.bound = spec.bound_scale * bound(grid[k]);
        row.pass = row.empirical <= row.bound + 3.0 * row.stderr_;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

McReport check_pivot_tail(const McSpec& spec, int threads) {
    const int n = spec.sample_n;
    const int m = spec.sample_m;
    const Contrast contrast = Contrast::centered_window(m, n);
    auto stat = [&, n](Rng& rng) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = spec.data_mu + spec.data_sigma * rng.normal();
        return studentized_contrast(x, contrast);
    };
    const auto counts = mc_exceedances(spec, threads, stat, spec.t_grid);
    return tabulate(spec, spec.t_grid, counts,
                    [](double t) { return normal_upper_tail(t); });
}

ExpFamily family_by_name(const std::string& name) {
    if (name == "bernoulli") return make_bernoulli();
    if (name == "poisson") return make_poisson();
    throw std::invalid_argument("unknown family: " + name);
}

McReport check_thm2a(const McSpec& spec, int threads) {
    const ExpFamily fam = family_by_name(spec.family);
    const int m = spec.m;
    std::function<double(Rng&)> stat;
    if (spec.family == "bernoulli") {
        const double p0 = spec.family_param;
        const double theta0 = std::log(p0 / (1.0 - p0));
        std::vector<double> by_count(m + 1);
        for (int k = 0; k <= m; ++k)
            by_count[k] = std::sqrt(2.0 * loglr_window(fam, double(k) / m, m, theta0));
        stat = [&, m, p0, by_count](Rng& rng) {
            int k = 0;
            for (int i = 0; i < m; ++i) k += rng.bernoulli(p0) ? 1 : 0;
            return by_count[k];
        };
    } else {
        const double lam0 = spec.family_param;
        const double theta0 = std::log(lam0);
        stat = [&, m, lam0, theta0, fam](Rng& rng) {
            const int k = rng.poisson(m * lam0);
            return std::sqrt(2.0 * loglr_window(fam, double(k) / m, m, theta0));
        };
    }
    const auto counts = mc_exceedances(spec, threads, stat, spec.t_grid);
    return tabulate(spec, spec.t_grid, counts,
                    [](double t) { return tail_bound_thm2(Thm2Kind::A, t); });
}

McReport check_thm2b(const McSpec& spec, int threads) {
    const ExpFamily fam = family_by_name(spec.family);
    const int m = spec.m;
    const int nc = spec.n - spec.m;
    std::function<double(Rng&)> stat;
    if (spec.family == "bernoulli") {
        const double p0 = spec.family_param;
        std::vector<std::vector<double>> table(m + 1, std::vector<double>(nc + 1));
        for (int kw = 0; kw <= m; ++kw) {
            for (int kc = 0; kc <= nc; ++kc) {
                const SplitSample s{double(kw), m, double(kc), nc};
                table[kw][kc] = std::sqrt(2.0 * loglr_split(fam, s));
            }
        }
        stat = [&, m, nc, p0, table](Rng& rng) {
            int kw = 0, kc = 0;
            for (int i = 0; i < m; ++i) kw += rng.bernoulli(p0) ? 1 : 0;
            for (int i = 0; i < nc; ++i) kc += rng.bernoulli(p0) ? 1 : 0;
            return table[kw][kc];
        };
    } else {
        const double lam0 = spec.family_param;
        stat = [&, m, nc, lam0, fam](Rng& rng) {
            const SplitSample s{double(rng.poisson(m * lam0)), m,
                                double(rng.poisson(nc * lam0)), nc};
            return std::sqrt(2.0 * loglr_split(fam, s));
        };
    }
    const auto counts = mc_exceedances(spec, threads, stat, spec.t_grid);
    return tabulate(spec, spec.t_grid, counts,
                    [](double t) { return tail_bound_thm2(Thm2Kind::B, t); });
}

// Streams the empirical-centering transform for the contiguous plan without
// materializing the data vector.
double streamed_t(Rng& rng, int m, int p, const std::vector<double>& mu_window,
                  const std::vector<double>& mu_complement, const SymmetricLogConcave& law) {
    const double w = 1.0 / (p - 1);
    double s = 0.0, q = 0.0;
    for (int i = 0; i < m; ++i) {
        double xt = mu_window[i] + law.draw(rng);
        for (int k = 0; k < p - 1; ++k) {
            xt -= w * (mu_complement[i * (p - 1) + k] + law.draw(rng));
        }
        s += xt;
        q += xt * xt;
    }
    return s / std::sqrt(q);
}

McReport check_prop1b(const McSpec& spec, int threads) {
    const SymmetricLogConcave law = law_by_name(spec.law);
    const int m = spec.m, p = spec.p;
    const std::vector<double> mu_w(m, 0.0);
    const std::vector<double> mu_c(static_cast<std::size_t>(m) * (p - 1), spec.mu_gap);
    auto stat = [&, m, p](Rng& rng) { return streamed_t(rng, m, p, mu_w, mu_c, law); };
    const auto counts = mc_exceedances(spec, threads, stat, spec.t_grid);
    return tabulate(spec, spec.t_grid, counts, [](double t) { return bound318(t); });
}

McReport check_prop1c(const McSpec& spec, int threads) {
    const SymmetricLogConcave law = law_by_name(spec.law);
    const int m = spec.m, p = spec.p;
    const int n = m * p;

    // Fixed heteroscedastic-center field with positive mean variation.
    Rng field_rng(derive_seed(spec.seed, "mu-field"));
    std::vector<double> mu(n);
    for (int i = 0; i < m; ++i) mu[i] = field_rng.uniform(-spec.mu_jitter, spec.mu_jitter);
    for (int j = m; j < n; ++j)
        mu[j] = spec.mu_gap + field_rng.uniform(-spec.mu_jitter, spec.mu_jitter);

    const CenteringPlan plan = make_plan(m, n);
    const ConditionReport cond = check_conditions(analyze_means(plan, mu), plan);
    if (!cond.holds_a && !cond.holds_aprime)
        throw std::invalid_argument("prop1c: generated mean field satisfies neither condition");

    // The bound is only claimed for t <= sqrt(m)/M.
    const double t_cap = std::sqrt(double(m)) / cond.ratio_m;
    std::vector<double> grid;
    for (double t : spec.t_grid)
        if (t <= t_cap) grid.push_back(t);
    if (grid.empty())
        throw std::invalid_argument("prop1c: no grid points inside the validity range");

    std::vector<double> mu_w(mu.begin(), mu.begin() + m);
    std::vector<double> mu_c(mu.begin() + m, mu.end());
    auto stat = [&, m, p](Rng& rng) { return streamed_t(rng, m, p, mu_w, mu_c, law); };
    const auto counts = mc_exceedances(spec, threads, stat, grid);
    return tabulate(spec, grid, counts, [](double t) { return bound318(t); });
}

std::vector<double> sigma_field(const McSpec& spec, int n) {
    std::vector<double> sigma(n, 1.0);
    if (spec.hetero_sigma) {
        Rng rng(derive_seed(spec.seed, "sigma-field"));
        for (int i = 0; i < n; ++i) sigma[i] = rng.uniform(spec.sigma_lo, spec.sigma_hi);
    }
    return sigma;
}

McReport scan_rate(const McSpec& spec, int threads,
                   const std::function<bool(Rng&, int)>& one_rep, double reference,
                   bool rate_must_stay_below) {
    std::vector<long> hits(kChunks, 0);
    parallel_tasks(kChunks, threads, [&](int c) {
        Rng rng(derive_seed(spec.seed, "chunk", static_cast<std::uint64_t>(c)));
        const long reps = chunk_reps(spec.replications, c);
        for (long r = 0; r < reps; ++r)
            if (one_rep(rng, c)) ++hits[c];
    });
    long total = 0;
    for (long h : hits) total += h;

    McReport rep;
    rep.name = spec.name;
    rep.scenario = spec.scenario;
    rep.seed = spec.seed;
    rep.replications = spec.replications;
    rep.detection_rate = static_cast<double>(total) / spec.replications;
    rep.rate_stderr = std::sqrt(rep.detection_rate * (1.0 - rep.detection_rate) /
                                spec.replications);
    rep.rate_reference = reference;
    rep.pass = rate_must_stay_below
                   ? rep.detection_rate <= reference + 3.0 * rep.rate_stderr
                   : rep.detection_rate >= reference;
    return rep;
}

McReport check_scan_null(const McSpec& spec, int threads) {
    const SymmetricLogConcave law = law_by_name(spec.law);
    const int n = spec.n;
    const std::vector<double> sigma = sigma_field(spec, n);
    ScanConfig cfg;
    cfg.alpha = spec.alpha;
    auto one_rep = [&, n](Rng& rng, int) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = sigma[i] * law.draw(rng);
        return run_scan(x, cfg).any_detection;
    };
    return scan_rate(spec, threads, one_rep, spec.alpha * spec.bound_scale, true);
}

McReport run_power_impl(const McSpec& spec, int threads) {
    const SymmetricLogConcave law = law_by_name(spec.law);
    const int n = spec.n;
    const int m = spec.m;

    std::vector<double> sigma(n, 1.0);
    if (spec.hetero_sigma) {
        // Constant on the planted interval, iid elsewhere.
        Rng rng(derive_seed(spec.seed, "sigma-field"));
        for (int i = 0; i < n; ++i) sigma[i] = rng.uniform(spec.sigma_lo, spec.sigma_hi);
    }
    const int offset = n / 3;  // deliberately off the dyadic offset grid
    for (int i = offset; i < offset + m; ++i) sigma[i] = 1.0;

    const Interval iv{offset, m};
    const CenteringPlan plan = make_plan(m, n);
    const double r = r_ratio(sigma, iv, plan);
    double s2_window = 0.0;
    for (int i = offset; i < offset + m; ++i) s2_window += sigma[i] * sigma[i];
    s2_window /= m;
    const double threshold = std::sqrt((2.0 + spec.eps) * s2_window * r *
                                       std::log(static_cast<double>(n) / m) / m);
    const double delta = (1.0 + spec.margin) * threshold;

    ScanConfig cfg;
    cfg.alpha = spec.alpha;
    auto one_rep = [&, n, m, offset, delta](Rng& rng, int) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) {
            x[i] = sigma[i] * law.draw(rng) + (i >= offset && i < offset + m ? delta : 0.0);
        }
        return run_scan(x, cfg).any_detection;
    };
    return scan_rate(spec, threads, one_rep, spec.target_rate, false);
}

}  // namespace

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::pivot_tail: return "pivot_tail";
        case Scenario::thm2a: return "thm2a";
        case Scenario::thm2b: return "thm2b";
        case Scenario::prop1b: return "prop1b";
        case Scenario::prop1c: return "prop1c";
        case Scenario::scan_null: return "scan_null";
        case Scenario::scan_power: return "scan_power";
    }
    return "unknown";
}

void McSpec::validate() const {
    const bool is_scan = scenario == Scenario::scan_null || scenario == Scenario::scan_power;
    if (is_scan) {
        if (replications < 200)
            throw std::invalid_argument("McSpec: scan scenarios need >= 200 replications");
    } else {
        if (replications < 10'000)
            throw std::invalid_argument("McSpec: bound checks need >= 10000 replications");
        if (t_grid.empty()) throw std::invalid_argument("McSpec: empty threshold grid");
    }
    switch (scenario) {
        case Scenario::pivot_tail:
            if (sample_n < 3 || sample_m < 1 || sample_m >= sample_n)
                throw std::invalid_argument("McSpec: pivot_tail needs 1 <= m < n, n >= 3");
            break;
        case Scenario::thm2a:
            if (m < 1) throw std::invalid_argument("McSpec: thm2a needs m >= 1");
            break;
        case Scenario::thm2b:
            if (m < 1 || n <= m) throw std::invalid_argument("McSpec: thm2b needs 1 <= m < n");
            break;
        case Scenario::prop1b:
        case Scenario::prop1c:
            if (m < 1 || p < 2) throw std::invalid_argument("McSpec: need m >= 1 and p >= 2");
            break;
        case Scenario::scan_null:
            if (n < 8) throw std::invalid_argument("McSpec: scan_null needs n >= 8");
            break;
        case Scenario::scan_power:
            if (n < 8 || m < 2 || 2 * m > n)
                throw std::invalid_argument("McSpec: scan_power needs 2 <= m <= n/2");
            break;
    }
}

McReport run_bound_check(const McSpec& spec, int threads) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    McReport rep;
    switch (spec.scenario) {
        case Scenario::pivot_tail: rep = check_pivot_tail(spec, threads); break;
        case Scenario::thm2a: rep = check_thm2a(spec, threads); break;
        case Scenario::thm2b: rep = check_thm2b(spec, threads); break;
        case Scenario::prop1b: rep = check_prop1b(spec, threads); break;
        case Scenario::prop1c: rep = check_prop1c(spec, threads); break;
        case Scenario::scan_null: rep = check_scan_null(spec, threads); break;
        case Scenario::scan_power:
            throw std::invalid_argument("run_bound_check: scan_power is a power experiment");
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

McReport run_power_experiment(const McSpec& spec, int threads) {
    spec.validate();
    if (spec.scenario != Scenario::scan_power)
        throw std::invalid_argument("run_power_experiment: spec is not a scan_power scenario");
    const auto start = std::chrono::steady_clock::now();
    McReport rep = run_power_impl(spec, threads);
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::vector<McSpec> default_registry(std::uint64_t root_seed, const HarnessOptions& opt) {
    std::vector<McSpec> specs;
    const std::vector<double> loglr_grid{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
    const std::vector<double> selfnorm_grid{1.0, 1.5, 2.0, 2.5, 3.0, 3.5};

    auto add = [&](McSpec s) {
        s.seed = derive_seed(root_seed, s.name);
        s.bound_scale = opt.bound_scale;
        specs.push_back(std::move(s));
    };

    {
        McSpec s;
        s.scenario = Scenario::pivot_tail;
        s.name = "pivot_tail_n10";
        s.replications = opt.bound_replications;
        s.t_grid = {2.5, 2.75, 3.0, 3.25, 3.5, 3.75, 4.0};
        s.sample_n = 10;
        s.sample_m = 3;
        s.data_mu = 0.4;
        s.data_sigma = 1.7;
        add(s);
    }
    for (const std::string family : {"bernoulli", "poisson"}) {
        const double param = family == "bernoulli" ? 0.3 : 1.0;
        for (int m : {5, 20, 100}) {
            McSpec s;
            s.scenario = Scenario::thm2a;
            s.name = "thm2a_" + family + "_m" + std::to_string(m);
            s.replications = opt.bound_replications;
            s.t_grid = loglr_grid;
            s.family = family;
            s.family_param = param;
            s.m = m;
            add(s);
        }
        for (auto [m, n] : {std::pair{5, 25}, std::pair{20, 100}}) {
            McSpec s;
            s.scenario = Scenario::thm2b;
            s.name = "thm2b_" + family + "_m" + std::to_string(m) + "_n" + std::to_string(n);
            s.replications = opt.bound_replications;
            s.t_grid = loglr_grid;
            s.family = family;
            s.family_param = param;
            s.m = m;
            s.n = n;
            add(s);
        }
    }
    for (const std::string law : {"normal", "laplace", "uniform"}) {
        for (int m : {16, 64}) {
            for (int p : {2, 4}) {
                McSpec s;
                s.scenario = Scenario::prop1b;
                s.name = "prop1b_" + law + "_m" + std::to_string(m) + "_p" + std::to_string(p);
                s.replications = opt.bound_replications;
                s.t_grid = selfnorm_grid;
                s.law = law;
                s.m = m;
                s.p = p;
                add(s);
            }
        }
    }
    {
        McSpec s;
        s.scenario = Scenario::prop1c;
        s.name = "prop1c_normal_m64_p4";
        s.replications = opt.bound_replications;
        s.t_grid = selfnorm_grid;
        s.law = "normal";
        s.m = 64;
        s.p = 4;
        s.mu_gap = 0.5;
        s.mu_jitter = 0.1;
        add(s);
    }
    for (const std::string law : {"normal", "laplace", "uniform"}) {
        McSpec s;
        s.scenario = Scenario::scan_null;
        s.name = "scan_null_" + law + "_a05";
        s.replications = opt.scan_null_replications;
        s.law = law;
        s.n = 2048;
        s.alpha = 0.05;
        s.hetero_sigma = true;
        add(s);
    }
    {
        McSpec s;
        s.scenario = Scenario::scan_null;
        s.name = "scan_null_normal_a10";
        s.replications = opt.scan_null_replications;
        s.law = "normal";
        s.n = 2048;
        s.alpha = 0.10;
        s.hetero_sigma = true;
        add(s);
    }
    {
        McSpec s;
        s.scenario = Scenario::scan_power;
        s.name = "scan_power_normal_n8192";
        s.replications = opt.scan_power_replications;
        s.law = "normal";
        s.n = 8192;
        s.m = 128;
        s.margin = 0.2;
        s.eps = 0.2;
        s.target_rate = 0.9;
        add(s);
    }
    {
        McSpec s;
        s.scenario = Scenario::scan_power;
        s.name = "scan_power_laplace_hetero_n8192";
        s.replications = opt.scan_power_replications;
        s.law = "laplace";
        s.n = 8192;
        s.m = 128;
        s.margin = 0.3;
        s.eps = 0.2;
        s.target_rate = 0.85;
        s.hetero_sigma = true;
        add(s);
    }
    return specs;
}

SuiteSummary run_full_suite(std::uint64_t root_seed, const HarnessOptions& opt) {
    SuiteSummary summary;
    summary.root_seed = root_seed;
    for (const auto& spec : default_registry(root_seed, opt)) {
        McReport rep = spec.scenario == Scenario::scan_power
                           ? run_power_experiment(spec, opt.threads)
                           : run_bound_check(spec, opt.threads);
        summary.all_pass = summary.all_pass && rep.pass;
        summary.reports.push_back(std::move(rep));
    }
    return summary;
}

}  // namespace tailscan
