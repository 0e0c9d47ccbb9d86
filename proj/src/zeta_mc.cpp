#include "adelic/zeta_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <span>
#include <thread>

namespace adelic {

namespace {

using cplx = std::complex<double>;

constexpr std::size_t kBlock = 4096;  // replica block; fixed so reductions are worker-count-free

cplx pairwise_sum(std::span<const cplx> v) {
    if (v.size() == 1) return v[0];
    if (v.size() == 2) return v[0] + v[1];
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double pairwise_sum_sq_dev(std::span<const cplx> v, cplx mean) {
    if (v.size() == 1) return std::norm(v[0] - mean);
    if (v.size() == 2) return std::norm(v[0] - mean) + std::norm(v[1] - mean);
    std::size_t half = v.size() / 2;
    return pairwise_sum_sq_dev(v.first(half), mean) + pairwise_sum_sq_dev(v.subspan(half), mean);
}

// Exit-norm draw from one uniform; matches sample_exit_norm_exp.
int draw_m(double log_rho, RngStream& rng) {
    return 1 + static_cast<int>(std::floor(std::log(rng.next_unit()) / log_rho));
}

struct PlaceCtx {
    FinitePlace place;
    double alpha;
    double c;
    double log_q;
    double log_rho;    // -alpha log q
    double prefactor;  // (1 - q^{-alpha})^{-1}
};

std::vector<PlaceCtx> build_contexts(const std::vector<FinitePlace>& places,
                                     const EstimatorConfig& config) {
    double x = config.s.real();
    std::vector<PlaceCtx> ctx;
    ctx.reserve(places.size());
    for (std::size_t i = 0; i < places.size(); ++i) {
        double alpha;
        switch (config.alpha_strategy) {
            case AlphaStrategy::MatchRealPart: alpha = x; break;
            case AlphaStrategy::Fixed: alpha = config.fixed_alpha; break;
            case AlphaStrategy::PerPlace: alpha = config.per_place_alpha[i]; break;
            default: throw std::invalid_argument("estimate_zeta: unknown alpha strategy");
        }
        if (!(alpha > 0.0))
            throw std::invalid_argument("estimate_zeta: alpha must be positive");
        if (!(alpha < 2.0 * x))
            throw std::invalid_argument(
                "estimate_zeta: variance condition violated, requires alpha < 2 Re s");
        double log_q = std::log(static_cast<double>(places[i].q));
        ctx.push_back({places[i], alpha, std::pow(static_cast<double>(places[i].q), -config.beta),
                       log_q, -alpha * log_q, 1.0 / (1.0 - std::exp(-alpha * log_q))});
    }
    return ctx;
}

}  // namespace

std::complex<double> place_factor_sample(const FinitePlace& place, const JumpProfile& profile,
                                         std::complex<double> s, RngStream& rng) {
    if (s.real() <= 1.0) throw std::domain_error("place_factor_sample: requires Re s > 1");
    int m = sample_exit_norm_exp(profile, rng);
    double log_q = std::log(static_cast<double>(place.q));
    double alpha = profile.alpha();
    double prefactor = 1.0 / (1.0 - std::exp(-alpha * log_q));
    return prefactor * std::exp(static_cast<double>(m - 1) * (alpha - s) * log_q);
}

std::complex<double> place_factor_expectation_exact(const FinitePlace& place,
                                                    std::complex<double> s) {
    if (s.real() <= 1.0)
        throw std::domain_error("place_factor_expectation_exact: requires Re s > 1");
    return 1.0 / (1.0 - std::exp(-s * std::log(static_cast<double>(place.q))));
}

std::complex<double> exit_norm_moment_exact(long long q, double alpha, std::complex<double> w) {
    if (!(w.real() < alpha))
        throw std::domain_error("exit_norm_moment_exact: requires Re w < alpha");
    double log_q = std::log(static_cast<double>(q));
    return (1.0 - std::exp(-alpha * log_q)) / (1.0 - std::exp((w - alpha) * log_q));
}

ZetaEstimate estimate_zeta(const EstimatorConfig& config, int workers,
                           std::vector<PlaceDiagnostic>* diagnostics) {
    if (config.s.real() <= 1.0) throw std::domain_error("estimate_zeta: requires Re s > 1");
    if (config.n_samples < 1) throw std::invalid_argument("estimate_zeta: n_samples must be >= 1");

    std::vector<FinitePlace> places = enumerate_places(config.field, config.norm_bound);
    if (places.empty())
        throw std::invalid_argument("estimate_zeta: no finite places with q <= norm_bound");
    if (config.alpha_strategy == AlphaStrategy::PerPlace &&
        config.per_place_alpha.size() != places.size())
        throw std::invalid_argument("estimate_zeta: per-place alpha list does not match places");

    std::vector<PlaceCtx> ctx = build_contexts(places, config);
    cplx s = config.s;

    const std::size_t n = static_cast<std::size_t>(config.n_samples);
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    std::vector<cplx> products(n);
    // Per-block, per-place factor sums; combined in block order afterwards so
    // the result does not depend on which worker ran which block.
    std::vector<cplx> block_place_sums(n_blocks * ctx.size(), 0.0);

    int n_workers = std::max(1, workers);
    std::atomic<std::size_t> next_block{0};
    auto work = [&]() {
        for (;;) {
            std::size_t b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            std::size_t lo = b * kBlock;
            std::size_t hi = std::min(lo + kBlock, n);
            cplx* sums = &block_place_sums[b * ctx.size()];
            for (std::size_t r = lo; r < hi; ++r) {
                cplx prod = 1.0;
                for (std::size_t i = 0; i < ctx.size(); ++i) {
                    RngStream rng = RngStream::keyed(config.seed, ctx[i].place.rng_key(), r);
                    int m = draw_m(ctx[i].log_rho, rng);
                    cplx factor = ctx[i].prefactor *
                                  std::exp(static_cast<double>(m - 1) * (ctx[i].alpha - s) *
                                           ctx[i].log_q);
                    prod *= factor;
                    sums[i] += factor;
                }
                products[r] = prod;
            }
        }
    };
    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }

    cplx mean = pairwise_sum(products) / static_cast<double>(n);
    double std_error = 0.0;
    if (n > 1) {
        double ssd = pairwise_sum_sq_dev(products, mean);
        std_error = std::sqrt(ssd / static_cast<double>(n - 1) / static_cast<double>(n));
    }

    ZetaOracleResult oracle = euler_product_zeta(config.field, s, config.norm_bound);

    if (diagnostics) {
        diagnostics->clear();
        diagnostics->reserve(ctx.size());
        for (std::size_t i = 0; i < ctx.size(); ++i) {
            cplx sum = 0.0;
            for (std::size_t b = 0; b < n_blocks; ++b) sum += block_place_sums[b * ctx.size() + i];
            diagnostics->push_back({ctx[i].place, ctx[i].alpha, ctx[i].c,
                                    place_factor_expectation_exact(ctx[i].place, s),
                                    sum / static_cast<double>(n)});
        }
    }

    return {mean, std_error, config.n_samples, oracle.value, oracle.tail_bound};
}

namespace {

// MC mean and standard error of prod_v |pi_v X_tau|^w = prod_v q^{(m_v-1) w}
// under the alpha-indexed exit laws; streams salted so distinct uses of the
// same seed stay independent.
FuncEqSide mc_moment_product(const std::vector<PlaceCtx>& ctx, cplx w, std::size_t n,
                             std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t eff_seed = RngStream::mix(seed ^ (salt * 0x9e3779b97f4a7c15ULL));
    std::vector<cplx> products(n);
    for (std::size_t r = 0; r < n; ++r) {
        cplx prod = 1.0;
        for (const PlaceCtx& pc : ctx) {
            RngStream rng = RngStream::keyed(eff_seed, pc.place.rng_key(), r);
            int m = draw_m(pc.log_rho, rng);
            prod *= std::exp(static_cast<double>(m - 1) * w * pc.log_q);
        }
        products[r] = prod;
    }
    cplx mean = pairwise_sum(products) / static_cast<double>(n);
    double se = 0.0;
    if (n > 1) {
        se = std::sqrt(pairwise_sum_sq_dev(products, mean) / static_cast<double>(n - 1) /
                       static_cast<double>(n));
    }
    return {mean, se};
}

std::vector<PlaceCtx> alpha_contexts(const std::vector<FinitePlace>& places, double alpha) {
    std::vector<PlaceCtx> ctx;
    ctx.reserve(places.size());
    for (const FinitePlace& v : places) {
        double log_q = std::log(static_cast<double>(v.q));
        ctx.push_back({v, alpha, 0.0, log_q, -alpha * log_q,
                       1.0 / (1.0 - std::exp(-alpha * log_q))});
    }
    return ctx;
}

cplx exact_moment_product(const std::vector<FinitePlace>& places, double alpha, cplx w) {
    cplx prod = 1.0;
    for (const FinitePlace& v : places) prod *= exit_norm_moment_exact(v.q, alpha, w);
    return prod;
}

}  // namespace

FuncEqReport functional_equation_check(const FieldSpec& field, std::complex<double> s,
                                       long long norm_bound, long long n_samples,
                                       std::uint64_t seed) {
    double x = s.real();
    double y = s.imag();
    if (x <= 1.0) throw std::domain_error("functional_equation_check: requires Re s > 1");
    if (n_samples < 1)
        throw std::invalid_argument("functional_equation_check: n_samples must be >= 1");

    std::vector<FinitePlace> places = enumerate_places(field, norm_bound);
    if (places.empty())
        throw std::invalid_argument("functional_equation_check: no finite places in range");

    cplx sbar = std::conj(s);
    cplx zeta_s = euler_product_zeta(field, s, norm_bound).value;
    cplx zeta_sbar = euler_product_zeta(field, sbar, norm_bound).value;
    cplx zeta_x = euler_product_zeta(field, cplx(x, 0.0), norm_bound).value;

    const double exact_tol = 1e-10;
    std::size_t n = static_cast<std::size_t>(n_samples);

    FuncEqReport report;
    report.field = field;
    report.s = s;
    report.norm_bound = norm_bound;
    report.n_samples = n_samples;
    report.seed = seed;

    // (a) alpha = 2x: zeta(s) E(prod |pi X|^s) = zeta(sbar) E(prod |pi X|^sbar).
    {
        FuncEqIdentity id;
        id.name = "alpha=2x: zeta(s) E|piX|^s = zeta(conj s) E|piX|^conj s";
        id.alpha = 2.0 * x;
        id.exact_lhs = zeta_s * exact_moment_product(places, id.alpha, s);
        id.exact_rhs = zeta_sbar * exact_moment_product(places, id.alpha, sbar);
        id.exact_abs_diff = std::abs(id.exact_lhs - id.exact_rhs);
        id.exact_pass = id.exact_abs_diff <= exact_tol;
        id.has_mc = false;
        id.note = "sampled |piX|^s has infinite variance at alpha = 2 Re s; "
                  "exact expectations only";
        report.identities.push_back(id);
    }

    std::vector<PlaceCtx> ctx_x = alpha_contexts(places, x);

    // (b) alpha = x: zeta(s) = zeta(x) E(prod |pi X|^{-iy}).
    {
        FuncEqIdentity id;
        id.name = "alpha=x: zeta(s) = zeta(x) E|piX|^-iy";
        id.alpha = x;
        id.exact_lhs = zeta_s;
        id.exact_rhs = zeta_x * exact_moment_product(places, x, cplx(0.0, -y));
        id.exact_abs_diff = std::abs(id.exact_lhs - id.exact_rhs);
        id.exact_pass = id.exact_abs_diff <= exact_tol;
        id.has_mc = true;
        FuncEqSide m = mc_moment_product(ctx_x, cplx(0.0, -y), n, seed, 1);
        id.mc_lhs = {zeta_s, 0.0};
        id.mc_rhs = {zeta_x * m.value, std::abs(zeta_x) * m.std_error};
        id.mc_sigma = id.mc_rhs.std_error;
        id.mc_abs_diff = std::abs(id.mc_lhs.value - id.mc_rhs.value);
        id.mc_pass = id.mc_abs_diff <= 3.0 * id.mc_sigma || id.mc_abs_diff <= exact_tol;
        report.identities.push_back(id);
    }

    // (c) alpha = x: zeta(s) E(prod |pi X|^{iy}) = zeta(sbar) E(prod |pi X|^{-iy}).
    {
        FuncEqIdentity id;
        id.name = "alpha=x: zeta(s) E|piX|^iy = zeta(conj s) E|piX|^-iy";
        id.alpha = x;
        id.exact_lhs = zeta_s * exact_moment_product(places, x, cplx(0.0, y));
        id.exact_rhs = zeta_sbar * exact_moment_product(places, x, cplx(0.0, -y));
        id.exact_abs_diff = std::abs(id.exact_lhs - id.exact_rhs);
        id.exact_pass = id.exact_abs_diff <= exact_tol;
        id.has_mc = true;
        FuncEqSide ml = mc_moment_product(ctx_x, cplx(0.0, y), n, seed, 2);
        FuncEqSide mr = mc_moment_product(ctx_x, cplx(0.0, -y), n, seed, 3);
        id.mc_lhs = {zeta_s * ml.value, std::abs(zeta_s) * ml.std_error};
        id.mc_rhs = {zeta_sbar * mr.value, std::abs(zeta_sbar) * mr.std_error};
        id.mc_sigma = std::sqrt(id.mc_lhs.std_error * id.mc_lhs.std_error +
                                id.mc_rhs.std_error * id.mc_rhs.std_error);
        id.mc_abs_diff = std::abs(id.mc_lhs.value - id.mc_rhs.value);
        id.mc_pass = id.mc_abs_diff <= 3.0 * id.mc_sigma || id.mc_abs_diff <= exact_tol;
        report.identities.push_back(id);
    }

    report.all_pass = true;
    for (const FuncEqIdentity& id : report.identities) {
        if (!id.exact_pass || (id.has_mc && !id.mc_pass)) report.all_pass = false;
    }
    return report;
}

}  // namespace adelic
