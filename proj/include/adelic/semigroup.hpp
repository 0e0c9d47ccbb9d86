#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace adelic {

// Levy tail schedule a(M) = nu(B(0, q^M)^c): nonincreasing, vanishing at
// +infinity. Geometric mode a(M) = c q^{-alpha M} is the semi-stable case;
// Table mode holds explicit values on a finite window [m_lo, m_lo + size).
class JumpProfile {
  public:
    static JumpProfile geometric(long long q, double c, double alpha);
    static JumpProfile table(long long q, int m_lo, std::vector<double> values);

    long long q() const { return q_; }
    bool is_geometric() const { return geometric_; }
    double c() const;
    double alpha() const;
    // q^{-alpha}, the exit-norm law's geometric ratio.
    double rho() const;

    double a(int M) const;

  private:
    JumpProfile() = default;
    long long q_ = 0;
    bool geometric_ = true;
    double c_ = 0.0;
    double alpha_ = 0.0;
    std::vector<double> table_;
    int m_lo_ = 0;
};

struct KernelValue {
    double value = 0.0;
    double trunc_error = 0.0;
};

// Either "inside" (|x - y| <= q^M) or "outside at class m" (|x - y| = q^{M+m}).
struct DistanceClass {
    static DistanceClass inside() { return DistanceClass{true, 0}; }
    static DistanceClass outside(int m) {
        if (m < 1) throw std::invalid_argument("DistanceClass: outside requires m >= 1");
        return DistanceClass{false, m};
    }
    bool is_inside;
    int m;
};

// P_M(t) = q^{-1}(q-1) sum_{i>=0} q^{-i} exp(-(q-1)^{-1}(q a(M+i) - a(M+i+1)) t),
// truncated so the omitted mass is at most tol.
KernelValue p_series(const JumpProfile& profile, int M, double t, double tol);

// P_t(x, B(y, q^M)): P_M(t) inside, else (q-1)^{-1} q^{1-m} (P_{M+m}(t) - P_{M+m-1}(t)).
KernelValue transition_prob(DistanceClass where, int M, double t, const JumpProfile& profile,
                            double tol);

// Generator applied to the ball indicator: -a(M) inside, else
// q^{1-m}(q-1)^{-1}(a(M+m-1) - a(M+m)).
double generator_indicator(DistanceClass where, int M, const JumpProfile& profile);

// Max |P_{t1+t2} - P_{t1} P_{t2}| over the lumped transition matrix on
// distance classes {inside, 1..window} at ball resolution q^resolution.
double check_chapman_kolmogorov(const JumpProfile& profile, int resolution, double t1, double t2,
                                int window);

}  // namespace adelic
