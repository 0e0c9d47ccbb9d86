#include "adelic/process.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adelic {

bool BallChainState::in_start_ball() const {
    return std::all_of(center_digits.begin(), center_digits.end(),
                       [](std::uint32_t d) { return d == 0; });
}

std::string BallChainState::prefix_string(long long q) const {
    // Strip implicit zeros at the far (lowest-index) end.
    std::size_t len = center_digits.size();
    while (len > 0 && center_digits[len - 1] == 0) --len;
    if (len == 0) return "0";
    std::ostringstream os;
    for (std::size_t i = len; i-- > 0;) {
        os << center_digits[i];
        if (q > 10 && i > 0) os << ',';
    }
    os << '@' << (-resolution - static_cast<int>(len));
    return os.str();
}

double sample_exit_time(const JumpProfile& profile, RngStream& rng) {
    double rate = profile.a(0);
    if (!(rate > 0.0)) throw std::invalid_argument("sample_exit_time: a(0) must be positive");
    return rng.exponential(rate);
}

int sample_exit_norm_exp(const JumpProfile& profile, RngStream& rng) {
    if (!profile.is_geometric())
        throw std::invalid_argument("sample_exit_norm_exp: requires a geometric profile");
    double log_rho = -profile.alpha() * std::log(static_cast<double>(profile.q()));
    double u = rng.next_unit();
    return 1 + static_cast<int>(std::floor(std::log(u) / log_rho));
}

ExitSample sample_exit_position(const JumpProfile& profile, int precision, RngStream& rng) {
    if (precision < 0)
        throw std::invalid_argument("sample_exit_position: precision must be >= 0");
    ExitSample s;
    s.tau = sample_exit_time(profile, rng);
    s.m = sample_exit_norm_exp(profile, rng);
    s.position = sample_uniform_sphere(profile.q(), s.m, precision, rng);
    return s;
}

namespace {

// Smallest m >= 1 with a(M+m) <= v; v in [0, a(M)).
int table_jump_class(const JumpProfile& profile, int M, double v) {
    int m = 1;
    while (profile.a(M + m) > v) ++m;  // out_of_range past the table window
    return m;
}

}  // namespace

std::vector<BallChainState> simulate_ball_chain(const JumpProfile& profile, int resolution,
                                                double t_end, RngStream& rng) {
    if (!(t_end >= 0.0)) throw std::invalid_argument("simulate_ball_chain: t_end must be >= 0");
    DigitStructure ds = digit_structure(profile.q());
    long long q = profile.q();

    std::vector<BallChainState> traj;
    BallChainState state;
    state.resolution = resolution;
    state.clock = 0.0;
    traj.push_back(state);

    double a_M = profile.a(resolution);
    if (!(a_M > 0.0)) return traj;  // no jumps ever
    double log_rho = profile.is_geometric()
                         ? -profile.alpha() * std::log(static_cast<double>(q))
                         : 0.0;

    for (;;) {
        double hold = rng.exponential(a_M);
        if (state.clock + hold > t_end) break;
        state.clock += hold;

        int m;
        if (profile.is_geometric()) {
            m = 1 + static_cast<int>(std::floor(std::log(rng.next_unit()) / log_rho));
        } else {
            m = table_jump_class(profile, resolution, (1.0 - rng.next_unit()) * a_M);
        }

        // Displacement with |delta| = q^{resolution + m}: leading digit at
        // index -resolution-m (slot m-1), free digits below; added with
        // carries running toward higher indices and dropped past -M-1.
        if (state.center_digits.size() < static_cast<std::size_t>(m))
            state.center_digits.resize(static_cast<std::size_t>(m), 0);
        std::uint32_t carry = 0;
        for (int k = m - 1; k >= 0; --k) {
            std::uint32_t delta =
                k == m - 1 ? 1 + static_cast<std::uint32_t>(rng.next_below(static_cast<std::uint64_t>(q - 1)))
                           : static_cast<std::uint32_t>(rng.next_below(static_cast<std::uint64_t>(q)));
            state.center_digits[static_cast<std::size_t>(k)] =
                ds.add(state.center_digits[static_cast<std::size_t>(k)], delta, carry);
        }
        traj.push_back(state);
    }
    return traj;
}

AdelicConfig AdelicConfig::geometric_schedule(std::vector<FinitePlace> places, double alpha,
                                              double beta) {
    if (places.empty()) throw std::invalid_argument("AdelicConfig: empty place list");
    AdelicConfig cfg;
    cfg.places = std::move(places);
    cfg.profiles.reserve(cfg.places.size());
    double sum = 0.0;
    for (const FinitePlace& v : cfg.places) {
        double c = std::pow(static_cast<double>(v.q), -beta);
        cfg.profiles.push_back(JumpProfile::geometric(v.q, c, alpha));
        sum += c;
    }
    cfg.sum_a0 = sum;
    if (!(cfg.sum_a0 > 0.0)) throw std::invalid_argument("AdelicConfig: sum a_v(0) must be positive");
    return cfg;
}

ConservativityReport conservativity_check(const AdelicConfig& config, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("conservativity_check: t must be >= 0");
    const double tol = 1e-12;
    double lhs = 0.0;
    for (const JumpProfile& profile : config.profiles) {
        lhs += 1.0 - p_series(profile, 0, t, tol).value;
    }
    double rhs = t * config.sum_a0;
    double slack = 1e-9 + tol * static_cast<double>(config.profiles.size());
    return {lhs, rhs, lhs <= rhs + slack};
}

}  // namespace adelic
