#include "adelic/number_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adelic {

namespace {

long long positive_mod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool is_squarefree(long long d) {
    long long n = std::llabs(d);
    for (long long i = 2; i * i <= n; ++i) {
        if (n % (i * i) == 0) return false;
    }
    return true;
}

}  // namespace

bool is_prime(long long n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (long long i = 3; i * i <= n; i += 2) {
        if (n % i == 0) return false;
    }
    return true;
}

FieldSpec FieldSpec::rationals() {
    FieldSpec f;
    f.kind = FieldKind::Rationals;
    f.d = 0;
    f.discriminant = 1;
    return f;
}

FieldSpec FieldSpec::quadratic(long long d) {
    require(d != 0 && d != 1, "FieldSpec: d must not be 0 or 1");
    require(is_squarefree(d), "FieldSpec: d must be squarefree");
    FieldSpec f;
    f.kind = FieldKind::Quadratic;
    f.d = d;
    f.discriminant = positive_mod(d, 4) == 1 ? d : 4 * d;
    return f;
}

FieldSpec FieldSpec::parse(const std::string& text) {
    if (text == "Q") return rationals();
    const std::string prefix = "Q(sqrt";
    if (text.size() > prefix.size() + 1 && text.compare(0, prefix.size(), prefix) == 0 &&
        text.back() == ')') {
        std::string num = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        std::size_t pos = 0;
        long long d = 0;
        try {
            d = std::stoll(num, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("FieldSpec: cannot parse \"" + text + "\"");
        }
        if (pos != num.size()) throw std::invalid_argument("FieldSpec: cannot parse \"" + text + "\"");
        return quadratic(d);
    }
    throw std::invalid_argument("FieldSpec: expected \"Q\" or \"Q(sqrt<d>)\", got \"" + text + "\"");
}

std::string FieldSpec::name() const {
    if (kind == FieldKind::Rationals) return "Q";
    return "Q(sqrt" + std::to_string(d) + ")";
}

int kronecker_symbol(long long D, long long n) {
    require(n >= 1, "kronecker_symbol: n must be >= 1");
    require(D == 1 || positive_mod(D, 4) <= 1, "kronecker_symbol: D must be 0 or 1 mod 4");
    if (D == 0) return n == 1 ? 1 : 0;

    long long a = D;
    int k = 1;

    // Strip factors of 2 from n, folding in (2/a) = (-1)^((a^2-1)/8).
    int twos = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++twos;
    }
    if (twos > 0) {
        if (a % 2 == 0) return 0;
        long long r = positive_mod(a, 8);
        if (twos % 2 == 1 && (r == 3 || r == 5)) k = -k;
    }

    // n is now odd; Jacobi symbol by quadratic reciprocity.
    a = positive_mod(a, n);
    while (a != 0) {
        int v = 0;
        while (a % 2 == 0) {
            a /= 2;
            ++v;
        }
        if (v % 2 == 1) {
            long long r = n % 8;
            if (r == 3 || r == 5) k = -k;
        }
        if (a % 4 == 3 && n % 4 == 3) k = -k;
        long long t = n % a;
        n = a;
        a = t;
    }
    return n == 1 ? k : 0;
}

std::vector<FinitePlace> places_above(const FieldSpec& field, long long p) {
    require(is_prime(p), "places_above: p must be prime");
    if (field.kind == FieldKind::Rationals) {
        return {FinitePlace{p, 1, 1, p, 0}};
    }
    int chi = kronecker_symbol(field.discriminant, p);
    if (chi == 1) {
        return {FinitePlace{p, 1, 1, p, 0}, FinitePlace{p, 1, 1, p, 1}};
    }
    if (chi == -1) {
        return {FinitePlace{p, 2, 1, p * p, 0}};
    }
    return {FinitePlace{p, 1, 2, p, 0}};  // p | D, ramified
}

std::vector<FinitePlace> enumerate_places(const FieldSpec& field, long long norm_bound) {
    require(norm_bound >= 2, "enumerate_places: norm_bound must be >= 2");
    // Any place above p has q >= p, so sieving primes up to the bound suffices.
    std::vector<bool> composite(static_cast<std::size_t>(norm_bound) + 1, false);
    std::vector<FinitePlace> out;
    for (long long p = 2; p <= norm_bound; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        for (long long k = p * p; k <= norm_bound; k += p) composite[static_cast<std::size_t>(k)] = true;
        for (const FinitePlace& v : places_above(field, p)) {
            if (v.q <= norm_bound) out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end(), [](const FinitePlace& a, const FinitePlace& b) {
        return std::tie(a.q, a.p, a.index) < std::tie(b.q, b.p, b.index);
    });
    return out;
}

ZetaOracleResult euler_product_zeta(const FieldSpec& field, std::complex<double> s,
                                    long long norm_bound) {
    if (s.real() <= 1.0) throw std::domain_error("euler_product_zeta: requires Re s > 1");
    require(norm_bound >= 2, "euler_product_zeta: norm_bound must be >= 2");

    std::complex<double> value = 1.0;
    for (const FinitePlace& v : enumerate_places(field, norm_bound)) {
        value *= 1.0 / (1.0 - std::exp(-s * std::log(static_cast<double>(v.q))));
    }

    // |sum_{q_v > Q} -log(1 - q_v^{-s})| <= 2 g sum_{n > Q} n^{-sigma}
    //                                    <= 2 g Q^{1-sigma} / (sigma - 1),
    // using |log(1-z)| <= 2|z| for |z| <= 1/2 and at most g = [K:Q] places
    // sharing any given residue size.
    double sigma = s.real();
    double g = field.degree();
    double tail = 2.0 * g * std::pow(static_cast<double>(norm_bound), 1.0 - sigma) / (sigma - 1.0);
    return {value, tail, norm_bound};
}

std::vector<long long> ideal_counts(const FieldSpec& field, long long n_max) {
    require(n_max >= 1, "ideal_counts: n_max must be >= 1");
    std::vector<long long> a(static_cast<std::size_t>(n_max) + 1, 0);
    if (field.kind == FieldKind::Rationals) {
        std::fill(a.begin() + 1, a.end(), 1);
        return a;
    }
    for (long long t = 1; t <= n_max; ++t) {
        int chi = kronecker_symbol(field.discriminant, t);
        if (chi == 0) continue;
        for (long long n = t; n <= n_max; n += t) a[static_cast<std::size_t>(n)] += chi;
    }
    return a;
}

ZetaOracleResult dirichlet_series_zeta(const FieldSpec& field, std::complex<double> s,
                                       long long n_terms) {
    if (s.real() <= 1.0) throw std::domain_error("dirichlet_series_zeta: requires Re s > 1");
    require(n_terms >= 1, "dirichlet_series_zeta: n_terms must be >= 1");

    std::vector<long long> a = ideal_counts(field, n_terms);
    // Terms grow toward n = 1; summing in reverse keeps the accumulation stable.
    std::complex<double> value = 0.0;
    for (long long n = n_terms; n >= 1; --n) {
        if (a[static_cast<std::size_t>(n)] == 0) continue;
        value += static_cast<double>(a[static_cast<std::size_t>(n)]) *
                 std::exp(-s * std::log(static_cast<double>(n)));
    }

    double sigma = s.real();
    double N = static_cast<double>(n_terms);
    double tail;
    if (field.kind == FieldKind::Rationals) {
        // a_n = 1: integral test, sum_{n > N} n^{-sigma} <= N^{1-sigma}/(sigma-1).
        tail = std::pow(N, 1.0 - sigma) / (sigma - 1.0);
    } else {
        // a_n <= tau(n); partial summation against sum_{n <= x} tau(n) <= x (log x + 1):
        // sum_{n > N} tau(n) n^{-sigma}
        //   <= sigma N^{1-sigma} ((log N + 1)/(sigma-1) + 1/(sigma-1)^2).
        tail = sigma * std::pow(N, 1.0 - sigma) *
               ((std::log(N) + 1.0) / (sigma - 1.0) + 1.0 / ((sigma - 1.0) * (sigma - 1.0)));
    }
    return {value, tail, n_terms};
}

}  // namespace adelic
