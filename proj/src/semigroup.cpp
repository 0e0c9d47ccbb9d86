#include "adelic/semigroup.hpp"

#include <algorithm>

namespace adelic {

JumpProfile JumpProfile::geometric(long long q, double c, double alpha) {
    if (q < 2) throw std::invalid_argument("JumpProfile: q must be >= 2");
    if (!(c > 0.0)) throw std::invalid_argument("JumpProfile: c must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("JumpProfile: alpha must be positive");
    JumpProfile p;
    p.q_ = q;
    p.geometric_ = true;
    p.c_ = c;
    p.alpha_ = alpha;
    return p;
}

JumpProfile JumpProfile::table(long long q, int m_lo, std::vector<double> values) {
    if (q < 2) throw std::invalid_argument("JumpProfile: q must be >= 2");
    if (values.empty()) throw std::invalid_argument("JumpProfile: empty table");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0)) throw std::invalid_argument("JumpProfile: negative table value");
        if (i > 0 && values[i] > values[i - 1])
            throw std::invalid_argument("JumpProfile: table values must be nonincreasing");
    }
    JumpProfile p;
    p.q_ = q;
    p.geometric_ = false;
    p.table_ = std::move(values);
    p.m_lo_ = m_lo;
    return p;
}

double JumpProfile::c() const {
    if (!geometric_) throw std::logic_error("JumpProfile: c undefined in table mode");
    return c_;
}

double JumpProfile::alpha() const {
    if (!geometric_) throw std::logic_error("JumpProfile: alpha undefined in table mode");
    return alpha_;
}

double JumpProfile::rho() const {
    return std::pow(static_cast<double>(q_), -alpha());
}

double JumpProfile::a(int M) const {
    if (geometric_) return c_ * std::pow(static_cast<double>(q_), -alpha_ * M);
    long long i = static_cast<long long>(M) - m_lo_;
    if (i < 0 || i >= static_cast<long long>(table_.size()))
        throw std::out_of_range("JumpProfile: M outside table window");
    return table_[static_cast<std::size_t>(i)];
}

KernelValue p_series(const JumpProfile& profile, int M, double t, double tol) {
    if (!(t >= 0.0)) throw std::invalid_argument("p_series: t must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("p_series: tol must be positive");
    if (t == 0.0) return {1.0, 0.0};  // geometric series sums to 1 exactly

    double q = static_cast<double>(profile.q());
    // Summing i < I leaves tail q^{-1}(q-1) sum_{i>=I} q^{-i} = q^{-I} (exp <= 1).
    int terms = std::max(1, static_cast<int>(std::ceil(std::log(1.0 / tol) / std::log(q))));
    double sum = 0.0;
    double weight = (q - 1.0) / q;
    double a_cur = profile.a(M);
    for (int i = 0; i < terms; ++i) {
        double a_next = profile.a(M + i + 1);
        double rate = (q * a_cur - a_next) / (q - 1.0);
        sum += weight * std::exp(-rate * t);
        weight /= q;
        a_cur = a_next;
    }
    return {sum, std::pow(q, -terms)};
}

KernelValue transition_prob(DistanceClass where, int M, double t, const JumpProfile& profile,
                            double tol) {
    if (where.is_inside) return p_series(profile, M, t, tol);

    double q = static_cast<double>(profile.q());
    KernelValue outer = p_series(profile, M + where.m, t, tol);
    KernelValue inner = p_series(profile, M + where.m - 1, t, tol);
    double scale = std::pow(q, 1.0 - where.m) / (q - 1.0);
    double value = scale * (outer.value - inner.value);
    double err = scale * (outer.trunc_error + inner.trunc_error);
    // P_{M+m} >= P_{M+m-1} analytically; anything below -err is a real defect.
    if (value < -err)
        throw std::runtime_error("transition_prob: kernel negative beyond truncation error");
    return {std::clamp(value, 0.0, 1.0), err};
}

double generator_indicator(DistanceClass where, int M, const JumpProfile& profile) {
    if (where.is_inside) return -profile.a(M);
    double q = static_cast<double>(profile.q());
    return std::pow(q, 1.0 - where.m) / (q - 1.0) *
           (profile.a(M + where.m - 1) - profile.a(M + where.m));
}

namespace {

// Lumped transition matrix over distance classes {0 = inside, 1..W} from a
// reference point. The kernel depends only on the ultrametric class, so the
// lumping is exact; class masses carry the (q-1)q^{m-1} ball counts.
std::vector<std::vector<double>> class_matrix(const JumpProfile& profile, int M, double t, int W,
                                              double tol) {
    double q = static_cast<double>(profile.q());
    std::vector<double> P(static_cast<std::size_t>(W) + 1);
    for (int k = 0; k <= W; ++k) P[static_cast<std::size_t>(k)] = p_series(profile, M + k, t, tol).value;
    auto D = [&](int j) { return P[static_cast<std::size_t>(j)] - P[static_cast<std::size_t>(j) - 1]; };

    std::vector<std::vector<double>> T(static_cast<std::size_t>(W) + 1,
                                       std::vector<double>(static_cast<std::size_t>(W) + 1, 0.0));
    T[0][0] = P[0];
    for (int j = 1; j <= W; ++j) T[0][static_cast<std::size_t>(j)] = D(j);
    for (int i = 1; i <= W; ++i) {
        auto& row = T[static_cast<std::size_t>(i)];
        row[0] = std::pow(q, 1.0 - i) / (q - 1.0) * D(i);
        for (int j = 1; j < i; ++j) row[static_cast<std::size_t>(j)] = std::pow(q, j - i) * D(i);
        // Stay in the same ball, or move within the class: the class-i sphere
        // holds (q-1)q^{k-1} balls at distance q^{M+k} for k < i and
        // (q-2)q^{i-1} at distance q^{M+i}.
        row[static_cast<std::size_t>(i)] =
            P[static_cast<std::size_t>(i) - 1] + (q - 2.0) / (q - 1.0) * D(i);
        for (int j = i + 1; j <= W; ++j) row[static_cast<std::size_t>(j)] = D(j);
    }
    return T;
}

}  // namespace

double check_chapman_kolmogorov(const JumpProfile& profile, int resolution, double t1, double t2,
                                int window) {
    if (window < 2) throw std::invalid_argument("check_chapman_kolmogorov: window must be >= 2");
    if (!(t1 >= 0.0) || !(t2 >= 0.0))
        throw std::invalid_argument("check_chapman_kolmogorov: times must be >= 0");

    const double tol = 1e-13;
    auto A = class_matrix(profile, resolution, t1, window, tol);
    auto B = class_matrix(profile, resolution, t2, window, tol);
    auto C = class_matrix(profile, resolution, t1 + t2, window, tol);

    double max_err = 0.0;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(window); ++i) {
        for (std::size_t j = 0; j <= static_cast<std::size_t>(window); ++j) {
            double prod = 0.0;
            for (std::size_t k = 0; k <= static_cast<std::size_t>(window); ++k)
                prod += A[i][k] * B[k][j];
            max_err = std::max(max_err, std::abs(C[i][j] - prod));
        }
    }
    return max_err;
}

}  // namespace adelic
