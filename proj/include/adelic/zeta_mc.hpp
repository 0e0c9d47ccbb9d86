#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "adelic/number_field.hpp"
#include "adelic/process.hpp"

namespace adelic {

enum class AlphaStrategy { MatchRealPart, Fixed, PerPlace };

struct EstimatorConfig {
    FieldSpec field;
    std::complex<double> s;
    long long norm_bound = 2;
    long long n_samples = 0;
    AlphaStrategy alpha_strategy = AlphaStrategy::MatchRealPart;
    double fixed_alpha = 0.0;             // Fixed only
    std::vector<double> per_place_alpha;  // PerPlace only, in enumerate_places order
    double beta = 2.0;                    // c_v = q_v^{-beta}; process metadata only
    std::uint64_t seed = 0;
};

struct ZetaEstimate {
    std::complex<double> mean;
    double std_error = 0.0;  // sample standard deviation of the products / sqrt(n)
    long long n = 0;
    std::complex<double> oracle;  // truncated Euler product over the same places
    double oracle_tail = 0.0;
};

struct PlaceDiagnostic {
    FinitePlace place;
    double alpha = 0.0;
    double c = 0.0;
    std::complex<double> exact_expectation;
    std::complex<double> empirical_mean;
};

// One draw of (1 - q^{-alpha})^{-1} |pi X_tau|^{-s+alpha} with
// |pi X_tau| = q^{m-1} and m from the exit-norm law.
std::complex<double> place_factor_sample(const FinitePlace& place, const JumpProfile& profile,
                                         std::complex<double> s, RngStream& rng);

// E[factor] = (1 - q^{-s})^{-1}.
std::complex<double> place_factor_expectation_exact(const FinitePlace& place,
                                                    std::complex<double> s);

// E|pi X_tau|^w = (1 - q^{-alpha}) / (1 - q^{w-alpha}) under the alpha-indexed
// exit law; requires Re w < alpha.
std::complex<double> exit_norm_moment_exact(long long q, double alpha, std::complex<double> w);

// Monte Carlo mean of the place product over n_samples i.i.d. replicas.
// Per-replica, per-place RNG streams are keyed by (seed, place, replica) and
// the reduction is a fixed-shape pairwise sum, so the result is bit-identical
// for a given seed regardless of `workers`.
ZetaEstimate estimate_zeta(const EstimatorConfig& config, int workers = 1,
                           std::vector<PlaceDiagnostic>* diagnostics = nullptr);

struct FuncEqSide {
    std::complex<double> value;
    double std_error = 0.0;
};

struct FuncEqIdentity {
    std::string name;
    double alpha = 0.0;
    std::complex<double> exact_lhs, exact_rhs;
    double exact_abs_diff = 0.0;
    bool exact_pass = false;
    bool has_mc = false;
    FuncEqSide mc_lhs, mc_rhs;
    double mc_sigma = 0.0;  // combined standard error of lhs - rhs
    double mc_abs_diff = 0.0;
    bool mc_pass = false;
    std::string note;
};

struct FuncEqReport {
    FieldSpec field;
    std::complex<double> s;
    long long norm_bound = 0;
    long long n_samples = 0;
    std::uint64_t seed = 0;
    std::vector<FuncEqIdentity> identities;
    bool all_pass = false;
};

// Checks the three exit-norm functional identities on the truncated place
// set: (a) alpha = 2 Re s relating s and conj(s) (exact expectations only;
// the sampled factor has infinite variance there), (b) alpha = Re s relating
// s to the real point, (c) alpha = Re s relating s and conj(s). Exact sides
// use closed-form geometric sums; MC sides use 3-sigma agreement.
FuncEqReport functional_equation_check(const FieldSpec& field, std::complex<double> s,
                                       long long norm_bound, long long n_samples,
                                       std::uint64_t seed);

}  // namespace adelic
