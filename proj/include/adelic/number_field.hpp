#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace adelic {

enum class FieldKind { Rationals, Quadratic };

// K = Q or K = Q(sqrt(d)) with d squarefree, d not in {0, 1}.
struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    long long d = 0;             // quadratic only
    long long discriminant = 1;  // fundamental discriminant (1 for Q)

    static FieldSpec rationals();
    static FieldSpec quadratic(long long d);

    // "Q" or "Q(sqrt<d>)", e.g. "Q(sqrt-1)".
    static FieldSpec parse(const std::string& text);

    int degree() const { return kind == FieldKind::Rationals ? 1 : 2; }
    std::string name() const;
};

// Finite place v above the rational prime p, with residue field of size
// q = p^f. A split prime carries two places distinguished by `index`.
struct FinitePlace {
    long long p = 0;
    int f = 1;  // residue degree
    int e = 1;  // ramification index
    long long q = 0;
    int index = 0;

    // Stable key for RNG stream derivation; unique within a field.
    std::uint64_t rng_key() const {
        return (static_cast<std::uint64_t>(p) << 1) | static_cast<std::uint64_t>(index);
    }
};

struct ZetaOracleResult {
    std::complex<double> value;
    // Euler product: certified bound on |log of the omitted factors|.
    // Dirichlet series: certified bound on the omitted series mass.
    double tail_bound = 0.0;
    long long cutoff = 0;
};

// Kronecker symbol (D/n) for a fundamental discriminant (or 1) and n >= 1.
int kronecker_symbol(long long D, long long n);

std::vector<FinitePlace> places_above(const FieldSpec& field, long long p);

// All finite places with q <= norm_bound, sorted by (q, p, index).
std::vector<FinitePlace> enumerate_places(const FieldSpec& field, long long norm_bound);

// prod_{q_v <= norm_bound} (1 - q_v^{-s})^{-1}, Re s > 1.
ZetaOracleResult euler_product_zeta(const FieldSpec& field, std::complex<double> s,
                                    long long norm_bound);

// sum_{n <= n_terms} a_n n^{-s} with a_n = #{ideals of norm n}, Re s > 1.
ZetaOracleResult dirichlet_series_zeta(const FieldSpec& field, std::complex<double> s,
                                       long long n_terms);

// a_n for n = 1..n_max (index 0 unused). a_n = 1 for Q; for quadratic K,
// a_n = sum_{t | n} chi_D(t).
std::vector<long long> ideal_counts(const FieldSpec& field, long long n_max);

bool is_prime(long long n);

}  // namespace adelic
