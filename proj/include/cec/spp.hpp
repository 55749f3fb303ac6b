#pragma once

// Tunnel prescribed performance, auxiliary functions, the self-adjustable
// envelope built from both, and the logarithmic error transform.
//
// Two evaluation paths exist for every boundary function:
//   * closed-form derivative stacks (orders 0..2), used on the hot path;
//   * scalar templates over `S`, differentiated by nested dual numbers
//     for any higher order and inside the general backstepping recursion.

#include <cmath>
#include <span>
#include <vector>

#include "cec/dual.hpp"
#include "cec/errors.hpp"

namespace cec::spp {

/// Parameters of the exponential tunnel rho(t) and its asymmetric split.
struct PerfParams {
    double delta = 0.5;
    double rho0 = 1.0;
    double rho_inf = 0.4;
    double varsigma = 1.0;
    int sign0 = 1;  ///< sign of e1(0): -1, 0 or +1

    void validate() const;
};

/// Exponential auxiliary functions A * exp(-l T t / (T - t)) on [0, T).
struct AuxParams {
    double l = 0.6;
    double lambda = 2.0;
    double settling_time = 4.0;
    double e1_0 = 0.0;
    double eu_0 = 0.0;  ///< e_u(0)
    double el_0 = 0.0;  ///< e_l(0)

    double upper_amplitude() const;
    double lower_amplitude() const;
    /// Width of the guard band [T - eps, T) on which eta is forced to zero.
    double guard() const { return 1e-9 * settling_time; }

    void validate() const;
};

/// Auxiliary parameters whose initial values are taken from the tunnel at t = 0.
AuxParams make_aux(const PerfParams& perf, double l, double lambda,
                   double settling_time, double e1_0);

/// Sign convention used for sign0: exact zero maps to 0.
int sign_of(double x);

/// Derivative stack [f, f', f'', ...].
using Stack = std::vector<double>;

struct TunnelStacks {
    Stack upper;  ///< e_u
    Stack lower;  ///< e_l
};

struct AuxStacks {
    Stack upper;  ///< eta_u
    Stack lower;  ///< eta_l
};

struct BoundarySet {
    double t = 0.0;
    Stack e_u, e_l;
    Stack eta_u, eta_l;
    Stack E_u, E_l;

    int order() const { return static_cast<int>(E_u.size()) - 1; }
};

struct TransformOutput {
    double z1 = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double ell = 0.0;
};

/// Highest derivative order any stack can be asked for.
inline constexpr int kMaxOrder = 6;

Stack eval_rho(double t, const PerfParams& params, int order);
TunnelStacks eval_tpp(double t, const PerfParams& params, int order);
AuxStacks eval_aux(double t, const AuxParams& params, int order);
BoundarySet eval_spp(double t, const PerfParams& perf, const AuxParams& aux, int order);

/// Throws OutOfEnvelope unless -E_l < e1 < E_u. Needs first-order stacks.
TransformOutput transform(double e1, const BoundarySet& b);

/// Strict containment in the self-adjustable envelope.
bool contains(double e1, const BoundarySet& b);
/// Strict containment in the plain tunnel (-e_l, e_u).
bool contains_tunnel(double e1, const BoundarySet& b);

/// True iff -e_l < e1 < e_u at every sample with t >= settling_time.
bool entry_capture_check(std::span<const double> t, std::span<const double> e1,
                         std::span<const double> e_u, std::span<const double> e_l,
                         double settling_time);

// ---------------------------------------------------------------------------
// Scalar templates (dual-number friendly)
// ---------------------------------------------------------------------------

template <class S>
S rho_value(const S& t, const PerfParams& p) {
    using std::exp;
    return (p.rho0 - p.rho_inf) * exp(-p.varsigma * t) + p.rho_inf;
}

template <class S>
S rho_rate(const S& t, const PerfParams& p) {
    using std::exp;
    return -p.varsigma * (p.rho0 - p.rho_inf) * exp(-p.varsigma * t);
}

template <class S>
S tunnel_upper(const S& t, const PerfParams& p) {
    return (p.delta + p.sign0) * rho_value(t, p) - p.rho_inf * p.sign0;
}

template <class S>
S tunnel_lower(const S& t, const PerfParams& p) {
    return (p.delta - p.sign0) * rho_value(t, p) + p.rho_inf * p.sign0;
}

/// exp(-l T t / (T - t)) and its first derivative, zero inside the guard band.
template <class S>
void aux_shape(const S& t, const AuxParams& a, S& value, S& rate) {
    using std::exp;
    const double T = a.settling_time;
    if (value_of(t) >= T - a.guard()) {
        value = S(0.0);
        rate = S(0.0);
        return;
    }
    const S gap = T - t;
    value = exp(-a.l * T * t / gap);
    rate = value * (-a.l * T * T / (gap * gap));
}

/// Envelope (E_u, E_l) with closed-form first derivatives.
template <class S>
struct EnvelopeFirstOrder {
    S upper;
    S lower;
    S upper_rate;
    S lower_rate;
};

template <class S>
EnvelopeFirstOrder<S> envelope(const S& t, const PerfParams& p, const AuxParams& a) {
    S shape, shape_rate;
    aux_shape(t, a, shape, shape_rate);
    const double au = a.upper_amplitude();
    const double al = a.lower_amplitude();
    const S r = rho_value(t, p);
    const S rd = rho_rate(t, p);
    EnvelopeFirstOrder<S> env;
    env.upper = (p.delta + p.sign0) * r - p.rho_inf * p.sign0 + au * shape;
    env.lower = (p.delta - p.sign0) * r + p.rho_inf * p.sign0 - al * shape;
    env.upper_rate = (p.delta + p.sign0) * rd + au * shape_rate;
    env.lower_rate = (p.delta - p.sign0) * rd - al * shape_rate;
    return env;
}

template <class S>
struct TransformT {
    S z1, mu1, mu2, ell;
};

/// Error transform on scalar templates. The caller checks containment.
template <class S>
TransformT<S> transform_t(const S& e1, const EnvelopeFirstOrder<S>& env) {
    using std::log;
    const S a = env.lower + e1;  // distance to -E_l
    const S b = env.upper - e1;  // distance to E_u
    TransformT<S> out;
    out.z1 = log(a / b);
    out.ell = 1.0 / (a * b);
    out.mu1 = out.ell * (env.upper + env.lower);
    out.mu2 = out.ell * (env.lower_rate * b - env.upper_rate * a);
    return out;
}

}  // namespace cec::spp
