// Batch experiment runner: place enumeration, kernel evaluation, law
// verification, zeta estimation, functional-equation checks, conservativity,
// and ball-chain trajectory dumps. Reports are CSV or JSON (schema 1).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "adelic/number_field.hpp"
#include "adelic/padic.hpp"
#include "adelic/process.hpp"
#include "adelic/rng.hpp"
#include "adelic/semigroup.hpp"
#include "adelic/zeta_mc.hpp"

using json = nlohmann::ordered_json;
using cplx = std::complex<double>;
using namespace adelic;

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// Relative output paths resolve against ADELIC_OUT_DIR when it is set.
std::filesystem::path resolve_output(const std::string& path) {
    std::filesystem::path p(path);
    const char* dir = std::getenv("ADELIC_OUT_DIR");
    if (dir && *dir && p.is_relative()) return std::filesystem::path(dir) / p;
    return p;
}

// Report to file (summary on stdout) or to stdout (summary on stderr).
void emit(const std::string& output, const std::string& body, const std::string& summary) {
    if (output.empty()) {
        std::cout << body;
        if (body.empty() || body.back() != '\n') std::cout << '\n';
        std::cerr << summary << '\n';
        return;
    }
    std::filesystem::path path = resolve_output(output);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path.string());
    out << body;
    if (body.empty() || body.back() != '\n') out << '\n';
    std::cout << summary << " -> " << path.string() << '\n';
}

json place_json(const FinitePlace& v) {
    return json{{"q", v.q}, {"p", v.p}, {"f", v.f}, {"e", v.e}, {"index", v.index}};
}

// Regularized upper incomplete gamma for the chi-square p-value in `laws`.
double gamma_q_upper(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 1000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

struct AlphaChoice {
    AlphaStrategy strategy = AlphaStrategy::MatchRealPart;
    double fixed = 0.0;
};

AlphaChoice parse_alpha_strategy(const std::string& text) {
    if (text == "match") return {AlphaStrategy::MatchRealPart, 0.0};
    if (text.rfind("fixed:", 0) == 0) {
        std::size_t pos = 0;
        std::string num = text.substr(6);
        double a = std::stod(num, &pos);
        if (pos != num.size())
            throw std::invalid_argument("alpha strategy: cannot parse \"" + text + "\"");
        return {AlphaStrategy::Fixed, a};
    }
    throw std::invalid_argument("alpha strategy must be \"match\" or \"fixed:<alpha>\"");
}

int run_places(const std::string& field_str, long long norm_bound, const std::string& format,
               const std::string& output) {
    FieldSpec field = FieldSpec::parse(field_str);
    std::vector<FinitePlace> places = enumerate_places(field, norm_bound);

    std::string body;
    if (format == "csv") {
        std::ostringstream os;
        os << "# places field=" << field.name() << " norm_bound=" << norm_bound << '\n';
        os << "q,p,f,e,index\n";
        for (const auto& v : places)
            os << v.q << ',' << v.p << ',' << v.f << ',' << v.e << ',' << v.index << '\n';
        body = os.str();
    } else {
        json report;
        report["schema"] = 1;
        report["subcommand"] = "places";
        report["config"] = {{"field", field.name()}, {"norm_bound", norm_bound}};
        report["places"] = json::array();
        for (const auto& v : places) report["places"].push_back(place_json(v));
        report["timestamp"] = iso_timestamp();
        body = report.dump(2);
    }
    std::ostringstream summary;
    summary << "places: " << places.size() << " finite places of " << field.name() << " with q <= "
            << norm_bound;
    emit(output, body, summary.str());
    return 0;
}

int run_kernel(long long q, double c, double alpha, int resolution, std::vector<double> ts,
               int window, double tol, const std::string& output) {
    JumpProfile profile = JumpProfile::geometric(q, c, alpha);
    if (ts.empty()) ts = {0.1, 0.5, 1.0};
    std::ostringstream os;
    os.precision(17);
    os << "# kernel q=" << q << " c=" << c << " alpha=" << alpha << " resolution=" << resolution
       << " window=" << window << " tol=" << tol << '\n';
    os << "t,m,transition_prob,trunc_error,generator\n";
    for (double t : ts) {
        for (int m = 0; m <= window; ++m) {
            DistanceClass where = m == 0 ? DistanceClass::inside() : DistanceClass::outside(m);
            KernelValue k = transition_prob(where, resolution, t, profile, tol);
            double h = generator_indicator(where, resolution, profile);
            os << t << ',' << m << ',' << k.value << ',' << k.trunc_error << ',' << h << '\n';
        }
    }
    std::ostringstream summary;
    summary << "kernel: " << ts.size() * (static_cast<std::size_t>(window) + 1) << " rows (q=" << q
            << ", c=" << c << ", alpha=" << alpha << ", M=" << resolution << ")";
    emit(output, os.str(), summary.str());
    return 0;
}

int run_laws(long long q, double c, double alpha, long long n, std::uint64_t seed,
             std::vector<double> ts, const std::string& output) {
    JumpProfile profile = JumpProfile::geometric(q, c, alpha);
    if (ts.empty()) ts = {0.5, 1.0, 2.0};
    double a0 = profile.a(0);

    RngStream rng = RngStream::keyed(seed, 0x6c617773ULL, 0);  // "laws"
    std::vector<double> taus(static_cast<std::size_t>(n));
    const int max_m = 64;
    std::vector<long long> m_counts(max_m + 1, 0);
    for (auto& tau : taus) {
        tau = sample_exit_time(profile, rng);
        int m = sample_exit_norm_exp(profile, rng);
        m_counts[static_cast<std::size_t>(std::min(m, max_m))]++;
    }

    json report;
    report["schema"] = 1;
    report["subcommand"] = "laws";
    report["config"] = {{"q", q}, {"c", c}, {"alpha", alpha}, {"n", n},
                        {"seed", seed}, {"t_grid", ts}};
    bool all_pass = true;

    json time_checks = json::array();
    for (double t : ts) {
        long long survived = 0;
        for (double tau : taus) {
            if (tau > t) ++survived;
        }
        double expected = std::exp(-a0 * t);
        double empirical = static_cast<double>(survived) / static_cast<double>(n);
        double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
        bool pass = std::fabs(empirical - expected) <= 3.0 * sigma;
        all_pass = all_pass && pass;
        time_checks.push_back({{"t", t}, {"empirical_survival", empirical},
                               {"exact_survival", expected}, {"sigma", sigma}, {"pass_3sigma", pass}});
    }
    report["exit_time"] = time_checks;

    double rho = profile.rho();
    double stat = 0.0;
    int dof = -1;
    double pooled_e = 0.0, pooled_o = 0.0;
    json bins = json::array();
    for (int m = 1; m <= max_m; ++m) {
        double p = m < max_m ? (1.0 - rho) * std::pow(rho, m - 1) : std::pow(rho, max_m - 1);
        double e = p * static_cast<double>(n);
        double o = static_cast<double>(m_counts[static_cast<std::size_t>(m)]);
        if (e >= 10.0) {
            stat += (o - e) * (o - e) / e;
            ++dof;
            if (m <= 12)
                bins.push_back({{"m", m}, {"observed", o}, {"expected", e}});
        } else {
            pooled_e += e;
            pooled_o += o;
        }
    }
    if (pooled_e > 0.0) {
        stat += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
        ++dof;
    }
    double p_value = gamma_q_upper(0.5 * dof, 0.5 * stat);
    bool gof_pass = p_value > 1e-3;
    all_pass = all_pass && gof_pass;
    report["exit_norm"] = {{"chi_square", stat}, {"dof", dof}, {"p_value", p_value},
                           {"pass_1e-3", gof_pass}, {"head_bins", bins}};
    report["all_pass"] = all_pass;
    report["timestamp"] = iso_timestamp();

    std::ostringstream summary;
    summary << "laws: q=" << q << " alpha=" << alpha << " n=" << n << " chi2 p=" << p_value
            << (all_pass ? " [pass]" : " [FAIL]");
    emit(output, report.dump(2), summary.str());
    return all_pass ? 0 : 1;
}

int run_estimate(const std::string& field_str, double s_re, double s_im, long long norm_bound,
                 long long n, const std::string& alpha_str, double beta, std::uint64_t seed,
                 int workers, const std::string& output) {
    auto t0 = std::chrono::steady_clock::now();
    EstimatorConfig cfg;
    cfg.field = FieldSpec::parse(field_str);
    cfg.s = cplx(s_re, s_im);
    cfg.norm_bound = norm_bound;
    cfg.n_samples = n;
    AlphaChoice choice = parse_alpha_strategy(alpha_str);
    cfg.alpha_strategy = choice.strategy;
    cfg.fixed_alpha = choice.fixed;
    cfg.beta = beta;
    cfg.seed = seed;

    std::vector<PlaceDiagnostic> diags;
    ZetaEstimate est = estimate_zeta(cfg, workers, &diags);
    double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json report;
    report["schema"] = 1;
    report["subcommand"] = "estimate";
    report["config"] = {{"field", cfg.field.name()},
                        {"s", complex_json(cfg.s)},
                        {"norm_bound", norm_bound},
                        {"n_samples", n},
                        {"alpha_strategy", alpha_str},
                        {"beta", beta},
                        {"seed", seed},
                        {"workers", workers}};
    report["mean"] = complex_json(est.mean);
    report["std_error"] = est.std_error;
    report["n"] = est.n;
    report["oracle"] = complex_json(est.oracle);
    report["oracle_tail"] = est.oracle_tail;
    report["abs_error_vs_oracle"] = std::abs(est.mean - est.oracle);
    report["places"] = json::array();
    for (const auto& d : diags) {
        json entry = place_json(d.place);
        entry["alpha"] = d.alpha;
        entry["c"] = d.c;
        entry["exact_expectation"] = complex_json(d.exact_expectation);
        entry["empirical_mean"] = complex_json(d.empirical_mean);
        report["places"].push_back(entry);
    }
    report["timestamp"] = iso_timestamp();
    report["wall_seconds"] = wall;

    std::ostringstream summary;
    summary.precision(10);
    summary << "estimate: mean=" << est.mean.real() << (est.mean.imag() < 0 ? "-" : "+")
            << std::fabs(est.mean.imag()) << "i se=" << est.std_error << " oracle="
            << est.oracle.real() << (est.oracle.imag() < 0 ? "-" : "+")
            << std::fabs(est.oracle.imag()) << "i n=" << est.n;
    emit(output, report.dump(2), summary.str());
    return 0;
}

int run_funceq(const std::string& field_str, double s_re, double s_im, long long norm_bound,
               long long n, std::uint64_t seed, const std::string& output) {
    FieldSpec field = FieldSpec::parse(field_str);
    FuncEqReport rep = functional_equation_check(field, cplx(s_re, s_im), norm_bound, n, seed);

    json report;
    report["schema"] = 1;
    report["subcommand"] = "funceq";
    report["config"] = {{"field", field.name()}, {"s", complex_json(rep.s)},
                        {"norm_bound", norm_bound}, {"n_samples", n}, {"seed", seed}};
    report["identities"] = json::array();
    for (const auto& id : rep.identities) {
        json entry;
        entry["name"] = id.name;
        entry["alpha"] = id.alpha;
        entry["exact_lhs"] = complex_json(id.exact_lhs);
        entry["exact_rhs"] = complex_json(id.exact_rhs);
        entry["exact_abs_diff"] = id.exact_abs_diff;
        entry["exact_pass_1e-10"] = id.exact_pass;
        entry["monte_carlo"] = id.has_mc;
        if (id.has_mc) {
            entry["mc_lhs"] = complex_json(id.mc_lhs.value);
            entry["mc_lhs_se"] = id.mc_lhs.std_error;
            entry["mc_rhs"] = complex_json(id.mc_rhs.value);
            entry["mc_rhs_se"] = id.mc_rhs.std_error;
            entry["mc_abs_diff"] = id.mc_abs_diff;
            entry["mc_pass_3sigma"] = id.mc_pass;
        }
        if (!id.note.empty()) entry["note"] = id.note;
        report["identities"].push_back(entry);
    }
    report["all_pass"] = rep.all_pass;
    report["timestamp"] = iso_timestamp();

    std::ostringstream summary;
    summary << "funceq: " << rep.identities.size() << " identities, "
            << (rep.all_pass ? "all pass" : "FAILURES");
    emit(output, report.dump(2), summary.str());
    return rep.all_pass ? 0 : 1;
}

int run_conservativity(const std::string& field_str, long long norm_bound, double alpha,
                       double beta, std::vector<double> ts, const std::string& output) {
    FieldSpec field = FieldSpec::parse(field_str);
    AdelicConfig cfg = AdelicConfig::geometric_schedule(enumerate_places(field, norm_bound),
                                                        alpha, beta);
    if (ts.empty()) ts = {0.1, 1.0};

    json report;
    report["schema"] = 1;
    report["subcommand"] = "conservativity";
    report["config"] = {{"field", field.name()}, {"norm_bound", norm_bound},
                        {"alpha", alpha}, {"beta", beta}};
    report["places"] = cfg.places.size();
    report["sum_a0"] = cfg.sum_a0;
    bool all_ok = true;
    json checks = json::array();
    for (double t : ts) {
        ConservativityReport r = conservativity_check(cfg, t);
        all_ok = all_ok && r.ok;
        checks.push_back({{"t", t}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ok", r.ok}});
    }
    report["checks"] = checks;
    report["all_ok"] = all_ok;
    report["timestamp"] = iso_timestamp();

    std::ostringstream summary;
    summary << "conservativity: " << cfg.places.size() << " places, sum a(0)=" << cfg.sum_a0
            << (all_ok ? " [ok]" : " [VIOLATED]");
    emit(output, report.dump(2), summary.str());
    return all_ok ? 0 : 1;
}

int run_chain(long long q, double c, double alpha, int resolution, double t_end, long long n,
              std::uint64_t seed, const std::string& output) {
    JumpProfile profile = JumpProfile::geometric(q, c, alpha);
    std::ostringstream os;
    os.precision(17);
    os << "# chain q=" << q << " c=" << c << " alpha=" << alpha << " resolution=" << resolution
       << " t_end=" << t_end << " n=" << n << " seed=" << seed << '\n';
    os << (n > 1 ? "trajectory,clock,resolution,prefix\n" : "clock,resolution,prefix\n");
    long long states = 0;
    for (long long i = 0; i < n; ++i) {
        RngStream rng = RngStream::keyed(seed, 0x636861696eULL, static_cast<std::uint64_t>(i));
        auto traj = simulate_ball_chain(profile, resolution, t_end, rng);
        states += static_cast<long long>(traj.size());
        for (const auto& st : traj) {
            if (n > 1) os << i << ',';
            os << st.clock << ',' << st.resolution << ',' << st.prefix_string(q) << '\n';
        }
    }
    std::ostringstream summary;
    summary << "chain: " << n << " trajectories, " << states << " states, t_end=" << t_end;
    emit(output, os.str(), summary.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Additive Markov processes on p-adic fields and Monte Carlo "
                 "estimation of Dedekind zeta functions"};
    app.require_subcommand(1);

    std::string field = "Q";
    std::vector<double> s_pair = {2.0, 0.0};
    long long norm_bound = 100;
    long long n = 10000;
    std::string alpha_strategy = "match";
    double beta = 2.0;
    std::uint64_t seed = 0;
    int workers = 1;
    double tol = 1e-10;
    std::string output;
    std::string format = "csv";
    long long q = 2;
    double c = 1.0;
    double alpha = 2.0;
    int resolution = 0;
    std::vector<double> ts;
    int window = 12;
    double t_end = 1.0;
    long long chain_n = 1;

    auto* places_cmd = app.add_subcommand("places", "Enumerate finite places with q <= bound");
    places_cmd->add_option("--field", field, "Field: Q or Q(sqrt<d>)");
    places_cmd->add_option("--norm-bound", norm_bound, "Residue-size cutoff")->required();
    places_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    places_cmd->add_option("--output,-o", output, "Output path");

    auto* kernel_cmd = app.add_subcommand("kernel", "Evaluate the transition kernel and generator");
    kernel_cmd->add_option("--q", q, "Residue-field size")->required();
    kernel_cmd->add_option("--c", c, "Rate scale");
    kernel_cmd->add_option("--alpha", alpha, "Stability index");
    kernel_cmd->add_option("--resolution", resolution, "Ball radius exponent M");
    kernel_cmd->add_option("--t", ts, "Time grid (repeatable)");
    kernel_cmd->add_option("--window", window, "Largest distance class");
    kernel_cmd->add_option("--tol", tol, "Series truncation tolerance");
    kernel_cmd->add_option("--output,-o", output, "Output path");

    auto* laws_cmd = app.add_subcommand("laws", "Verify exit-time and exit-norm laws empirically");
    laws_cmd->add_option("--q", q)->required();
    laws_cmd->add_option("--c", c);
    laws_cmd->add_option("--alpha", alpha);
    laws_cmd->add_option("--n", n, "Sample count");
    laws_cmd->add_option("--seed", seed, "RNG seed")->required();
    laws_cmd->add_option("--t", ts, "Survival time grid (repeatable)");
    laws_cmd->add_option("--output,-o", output);

    auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo estimate of zeta_K(s)");
    est_cmd->add_option("--field", field);
    est_cmd->add_option("--s", s_pair, "Complex s as two reals: re im")->expected(2);
    est_cmd->add_option("--norm-bound", norm_bound);
    est_cmd->add_option("--n", n, "Replica count");
    est_cmd->add_option("--alpha-strategy", alpha_strategy, "match | fixed:<alpha>");
    est_cmd->add_option("--beta", beta, "c_v = q_v^-beta schedule exponent");
    est_cmd->add_option("--seed", seed)->required();
    est_cmd->add_option("--workers", workers, "Worker threads (results identical for any count)");
    est_cmd->add_option("--output,-o", output);

    auto* funceq_cmd = app.add_subcommand("funceq", "Functional-equation identities for zeta_K");
    funceq_cmd->add_option("--field", field);
    funceq_cmd->add_option("--s", s_pair)->expected(2);
    funceq_cmd->add_option("--norm-bound", norm_bound);
    funceq_cmd->add_option("--n", n);
    funceq_cmd->add_option("--seed", seed)->required();
    funceq_cmd->add_option("--output,-o", output);

    auto* cons_cmd = app.add_subcommand("conservativity", "Check the exit-mass bound");
    cons_cmd->add_option("--field", field);
    cons_cmd->add_option("--norm-bound", norm_bound);
    cons_cmd->add_option("--alpha", alpha);
    cons_cmd->add_option("--beta", beta);
    cons_cmd->add_option("--t", ts, "Time grid (repeatable)");
    cons_cmd->add_option("--output,-o", output);

    auto* chain_cmd = app.add_subcommand("chain", "Simulate the ball chain and dump trajectories");
    chain_cmd->add_option("--q", q)->required();
    chain_cmd->add_option("--c", c);
    chain_cmd->add_option("--alpha", alpha);
    chain_cmd->add_option("--resolution", resolution);
    chain_cmd->add_option("--t-end", t_end, "Simulation horizon");
    chain_cmd->add_option("--n", chain_n, "Trajectory count");
    chain_cmd->add_option("--seed", seed)->required();
    chain_cmd->add_option("--output,-o", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }

    try {
        if (places_cmd->parsed())
            return run_places(field, norm_bound, format, output);
        if (kernel_cmd->parsed())
            return run_kernel(q, c, alpha, resolution, ts, window, tol, output);
        if (laws_cmd->parsed()) {
            if (n < 1) throw std::invalid_argument("laws: n must be >= 1");
            return run_laws(q, c, alpha, n, seed, ts, output);
        }
        if (est_cmd->parsed())
            return run_estimate(field, s_pair[0], s_pair[1], norm_bound, n, alpha_strategy, beta,
                                seed, workers, output);
        if (funceq_cmd->parsed())
            return run_funceq(field, s_pair[0], s_pair[1], norm_bound, n, seed, output);
        if (cons_cmd->parsed())
            return run_conservativity(field, norm_bound, alpha, beta, ts, output);
        if (chain_cmd->parsed()) {
            if (chain_n < 1) throw std::invalid_argument("chain: n must be >= 1");
            return run_chain(q, c, alpha, resolution, t_end, chain_n, seed, output);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
