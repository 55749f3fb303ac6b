#include "cec/spp.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace cec {

OutOfEnvelope::OutOfEnvelope(double t, double e1, double lower, double upper)
    : std::runtime_error([&] {
          std::ostringstream os;
          os.precision(17);
          os << "tracking error " << e1 << " left envelope (" << lower << ", " << upper
             << ") at t=" << t;
          return os.str();
      }()),
      time_(t),
      e1_(e1) {}

NonFinite::NonFinite(double t, const std::string& what)
    : std::runtime_error(what + " became non-finite at t=" + std::to_string(t)), time_(t) {}

}  // namespace cec

namespace cec::spp {

namespace {

void check_order(int order) {
    if (order < 0 || order > kMaxOrder) {
        throw ConfigError("derivative order " + std::to_string(order) + " outside [0, " +
                          std::to_string(kMaxOrder) + "]");
    }
}

// Nested first-order duals: Nested<k> differentiates k times along t.
template <int Depth>
struct Nested {
    using type = Dual<typename Nested<Depth - 1>::type, 1>;
};
template <>
struct Nested<0> {
    using type = double;
};

template <int Depth>
typename Nested<Depth>::type seed_time(double t) {
    if constexpr (Depth == 0) {
        return t;
    } else {
        using Inner = typename Nested<Depth - 1>::type;
        typename Nested<Depth>::type r;
        r.v = seed_time<Depth - 1>(t);
        r.d[0] = Inner(1.0);
        return r;
    }
}

// k-th derivative from a nested evaluation (any path with k tangent steps).
template <int Depth>
double extract(const typename Nested<Depth>::type& x, int k) {
    if constexpr (Depth == 0) {
        return x;
    } else {
        return k > 0 ? extract<Depth - 1>(x.d[0], k - 1) : extract<Depth - 1>(x.v, 0);
    }
}

template <int Depth, class F>
Stack stack_via_duals(F&& f, double t) {
    const auto y = f(seed_time<Depth>(t));
    Stack out(Depth + 1);
    for (int k = 0; k <= Depth; ++k) out[k] = extract<Depth>(y, k);
    return out;
}

// Dispatches a runtime order onto a compile-time nesting depth.
template <class F>
Stack stack_via_duals(F&& f, double t, int order) {
    switch (order) {
        case 0: return stack_via_duals<0>(f, t);
        case 1: return stack_via_duals<1>(f, t);
        case 2: return stack_via_duals<2>(f, t);
        case 3: return stack_via_duals<3>(f, t);
        case 4: return stack_via_duals<4>(f, t);
        case 5: return stack_via_duals<5>(f, t);
        case 6: return stack_via_duals<6>(f, t);
        default: throw ConfigError("derivative order too high");
    }
}

// exp(-l T t / (T - t)) with derivatives up to order 2 in closed form.
Stack aux_shape_closed(double t, const AuxParams& a, int order) {
    Stack s(order + 1, 0.0);
    const double T = a.settling_time;
    if (t >= T - a.guard()) return s;
    const double gap = T - t;
    const double g = std::exp(-a.l * T * t / gap);
    const double e1 = -a.l * T * T / (gap * gap);          // exponent'
    const double e2 = -2.0 * a.l * T * T / (gap * gap * gap);  // exponent''
    s[0] = g;
    if (order >= 1) s[1] = g * e1;
    if (order >= 2) s[2] = g * (e1 * e1 + e2);
    return s;
}

}  // namespace

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

void PerfParams::validate() const {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("performance: need 0 < delta < 1");
    if (!(rho_inf > 0.0)) throw ConfigError("performance: need rho_inf > 0");
    if (!(rho0 > rho_inf)) throw ConfigError("performance: need rho0 > rho_inf");
    if (!(varsigma > 0.0)) throw ConfigError("performance: need varsigma > 0");
    if (sign0 < -1 || sign0 > 1) throw ConfigError("performance: sign0 must be -1, 0 or +1");
}

double AuxParams::upper_amplitude() const {
    return e1_0 + ((lambda - 2.0) * eu_0 + lambda * el_0) / 2.0;
}

double AuxParams::lower_amplitude() const {
    return e1_0 - (lambda * eu_0 + (lambda - 2.0) * el_0) / 2.0;
}

void AuxParams::validate() const {
    if (!(l > 0.0)) throw ConfigError("auxiliary: need l > 0");
    if (!(lambda >= 1.0)) throw ConfigError("auxiliary: need lambda >= 1");
    if (!(settling_time > 0.0)) throw ConfigError("auxiliary: need settling time T > 0");
    if (!(upper_amplitude() > e1_0 - eu_0)) {
        throw ConfigError("auxiliary: eta_u(0) > e1(0) - e_u(0) violated");
    }
    if (!(lower_amplitude() < e1_0 + el_0)) {
        throw ConfigError("auxiliary: eta_l(0) < e1(0) + e_l(0) violated");
    }
}

AuxParams make_aux(const PerfParams& perf, double l, double lambda, double settling_time,
                   double e1_0) {
    AuxParams a;
    a.l = l;
    a.lambda = lambda;
    a.settling_time = settling_time;
    a.e1_0 = e1_0;
    a.eu_0 = tunnel_upper(0.0, perf);
    a.el_0 = tunnel_lower(0.0, perf);
    return a;
}

Stack eval_rho(double t, const PerfParams& p, int order) {
    check_order(order);
    Stack s(order + 1);
    const double decay = (p.rho0 - p.rho_inf) * std::exp(-p.varsigma * t);
    s[0] = decay + p.rho_inf;
    double factor = 1.0;
    for (int k = 1; k <= order; ++k) {
        factor *= -p.varsigma;
        s[k] = decay * factor;
    }
    return s;
}

TunnelStacks eval_tpp(double t, const PerfParams& p, int order) {
    const Stack r = eval_rho(t, p, order);
    TunnelStacks out{Stack(order + 1), Stack(order + 1)};
    const double up = p.delta + p.sign0;
    const double lo = p.delta - p.sign0;
    for (int k = 0; k <= order; ++k) {
        out.upper[k] = up * r[k];
        out.lower[k] = lo * r[k];
    }
    out.upper[0] -= p.rho_inf * p.sign0;
    out.lower[0] += p.rho_inf * p.sign0;
    return out;
}

AuxStacks eval_aux(double t, const AuxParams& a, int order) {
    check_order(order);
    a.validate();
    Stack shape;
    if (order <= 2) {
        shape = aux_shape_closed(t, a, order);
    } else {
        shape = stack_via_duals(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                S v, rate;
                aux_shape(s, a, v, rate);
                return v;
            },
            t, order);
    }
    AuxStacks out{Stack(order + 1), Stack(order + 1)};
    const double au = a.upper_amplitude();
    const double al = a.lower_amplitude();
    for (int k = 0; k <= order; ++k) {
        out.upper[k] = au * shape[k];
        out.lower[k] = al * shape[k];
    }
    return out;
}

BoundarySet eval_spp(double t, const PerfParams& perf, const AuxParams& aux, int order) {
    BoundarySet b;
    b.t = t;
    auto tpp = eval_tpp(t, perf, order);
    auto eta = eval_aux(t, aux, order);
    b.E_u.resize(order + 1);
    b.E_l.resize(order + 1);
    for (int k = 0; k <= order; ++k) {
        b.E_u[k] = tpp.upper[k] + eta.upper[k];
        b.E_l[k] = tpp.lower[k] - eta.lower[k];
    }
    // Same arithmetic as the scalar template, so both control law paths see identical bits.
    const auto env = envelope(t, perf, aux);
    b.E_u[0] = env.upper;
    b.E_l[0] = env.lower;
    if (order >= 1) {
        b.E_u[1] = env.upper_rate;
        b.E_l[1] = env.lower_rate;
    }
    b.e_u = std::move(tpp.upper);
    b.e_l = std::move(tpp.lower);
    b.eta_u = std::move(eta.upper);
    b.eta_l = std::move(eta.lower);
    return b;
}

TransformOutput transform(double e1, const BoundarySet& b) {
    if (b.order() < 1) throw ConfigError("transform needs first-order boundary stacks");
    if (!contains(e1, b)) throw OutOfEnvelope(b.t, e1, -b.E_l[0], b.E_u[0]);
    EnvelopeFirstOrder<double> env{b.E_u[0], b.E_l[0], b.E_u[1], b.E_l[1]};
    const auto r = transform_t(e1, env);
    return {r.z1, r.mu1, r.mu2, r.ell};
}

bool contains(double e1, const BoundarySet& b) { return -b.E_l[0] < e1 && e1 < b.E_u[0]; }

bool contains_tunnel(double e1, const BoundarySet& b) {
    return -b.e_l[0] < e1 && e1 < b.e_u[0];
}

bool entry_capture_check(std::span<const double> t, std::span<const double> e1,
                         std::span<const double> e_u, std::span<const double> e_l,
                         double settling_time) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < settling_time) continue;
        if (!(-e_l[i] < e1[i] && e1[i] < e_u[i])) return false;
    }
    return true;
}

}  // namespace cec::spp
