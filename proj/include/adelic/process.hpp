#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adelic/number_field.hpp"
#include "adelic/padic.hpp"
#include "adelic/rng.hpp"
#include "adelic/semigroup.hpp"

namespace adelic {

// First exit from the unit ball R_v: time tau, norm exponent m (|X_tau| = q^m),
// optionally the exit point at finite precision. tau and the position are
// sampled from their exact marginals, independently of each other.
struct ExitSample {
    double tau = 0.0;
    int m = 1;
    std::optional<PAdicApprox> position;
};

// One state of the ball chain at resolution M: the current radius-q^M ball,
// identified by the center digits below index -M (slot k holds the digit at
// index -M-1-k), entered at time `clock`.
struct BallChainState {
    std::vector<std::uint32_t> center_digits;
    int resolution = 0;
    double clock = 0.0;

    bool in_start_ball() const;
    // Canonical digit rendering "digits@lowest_index"; "0" for the start ball.
    std::string prefix_string(long long q) const;
};

// Exponential with rate a(0): P(tau > t) = exp(-a(0) t).
double sample_exit_time(const JumpProfile& profile, RngStream& rng);

// Exit-norm exponent law P(m) = (q^alpha - 1) q^{-m alpha}, m >= 1,
// sampled as m = 1 + floor(log U / log rho) with rho = q^{-alpha}.
int sample_exit_norm_exp(const JumpProfile& profile, RngStream& rng);

// Draw order per stream: tau, then m, then sphere digits.
ExitSample sample_exit_position(const JumpProfile& profile, int precision, RngStream& rng);

// CTMC on radius-q^M balls: holding rate a(M); jump class m >= 1 with
// probability (a(M+m-1) - a(M+m))/a(M), target uniform among the
// (q-1)q^{m-1} balls of that class. Returns the visited states; the first
// entry is the start ball at clock 0.
std::vector<BallChainState> simulate_ball_chain(const JumpProfile& profile, int resolution,
                                                double t_end, RngStream& rng);

// Finitely many finite places with their jump profiles. Archimedean
// coordinates are untouched placeholders (the zeta functional never
// evaluates them); only their count is recorded.
struct AdelicConfig {
    std::vector<FinitePlace> places;
    std::vector<JumpProfile> profiles;  // aligned with places
    double sum_a0 = 0.0;
    int archimedean_places = 0;

    // Geometric profiles with c_v = q_v^{-beta}; beta > 1 keeps sum a_v(0)
    // finite over all places.
    static AdelicConfig geometric_schedule(std::vector<FinitePlace> places, double alpha,
                                           double beta);
};

struct ConservativityReport {
    double lhs = 0.0;  // sum_v (1 - P_0^{(v)}(t))
    double rhs = 0.0;  // t * sum_v a_v(0)
    bool ok = false;
};

ConservativityReport conservativity_check(const AdelicConfig& config, double t);

}  // namespace adelic
