#include "cec/controller.hpp"

#include <array>
#include <cmath>
#include <string>

namespace cec::control {

void ControllerParams::validate() const {
    if (n < 2) throw UnsupportedOrder("controller: system order n must be >= 2");
    const auto check = [&](const std::vector<double>& v, const char* name) {
        if (static_cast<int>(v.size()) != n) {
            throw ConfigError(std::string("controller: ") + name + " needs n = " +
                              std::to_string(n) + " entries");
        }
        for (double x : v) {
            if (!(x > 0.0)) throw ConfigError(std::string("controller: every ") + name + " must be positive");
        }
    };
    check(c, "c");
    check(r, "r");
    check(sigma, "sigma");
}

spp::Stack Reference::stack(double t, int order) const {
    spp::Stack s(order + 1);
    double scale = amplitude;
    for (int k = 0; k <= order; ++k) {
        // k-th derivative of sin(w t) is w^k sin(w t + k pi/2)
        switch (k % 4) {
            case 0: s[k] = scale * std::sin(frequency * t); break;
            case 1: s[k] = scale * std::cos(frequency * t); break;
            case 2: s[k] = -scale * std::sin(frequency * t); break;
            default: s[k] = -scale * std::cos(frequency * t); break;
        }
        scale *= frequency;
    }
    s[0] += offset;
    return s;
}

SignalBundle make_bundle(double t, std::span<const double> x, const Design& design, int order) {
    SignalBundle b;
    b.t = t;
    b.x.assign(x.begin(), x.end());
    b.yd = design.reference.stack(t, order);
    b.boundary = spp::eval_spp(t, design.perf, design.aux, order);
    const double e1 = x[0] - b.yd[0];
    b.transform = spp::transform(e1, b.boundary);
    b.e = {e1};
    b.phi.resize(design.envelope.order());
    for (int i = 0; i < design.envelope.order(); ++i) b.phi[i] = design.envelope.phi<double>(i, x);
    b.phi1_dx1 = design.envelope.phi_partial(0, 0, x);
    return b;
}

double phi1(const SignalBundle& b) {
    const double mu1 = b.transform.mu1;
    const double mu2 = b.transform.mu2;
    const double yd_dot = b.yd.at(1);
    return mu1 * mu1 * (yd_dot * yd_dot + b.phi[0] * b.phi[0]) + mu2 * mu2;
}

double alpha1(double z1, double mu1, double theta_hat1, double Phi1, double c1) {
    if (!(mu1 > 0.0)) throw DegenerateTransform("alpha1: mu1 must be positive inside the envelope");
    return -(c1 * z1 + z1 * theta_hat1 * Phi1) / mu1;
}

double adaptation_rate(double z, double Phi, double theta_hat, double r, double sigma) {
    return r * z * z * Phi - sigma * theta_hat;
}

Alpha1Sensitivities alpha1_sensitivities(const SignalBundle& b, double theta_hat1,
                                         double theta_dot1, double c1) {
    if (b.boundary.order() < 2 || b.yd.size() < 3) {
        throw ConfigError("alpha1_sensitivities needs second-order boundary and reference stacks");
    }
    const auto& Eu = b.boundary.E_u;
    const auto& El = b.boundary.E_l;
    const double e1 = b.e[0];
    const double a = El[0] + e1;
    const double bb = Eu[0] - e1;
    const double z1 = b.transform.z1;
    const double mu1 = b.transform.mu1;
    const double mu2 = b.transform.mu2;
    const double yd_dot = b.yd[1];
    const double phi = b.phi[0];
    const double Phi1 = mu1 * mu1 * (yd_dot * yd_dot + phi * phi) + mu2 * mu2;
    const double gain = c1 + theta_hat1 * Phi1;

    // Directional derivative of alpha1 given the variations of its inputs.
    const auto directional = [&](double de1, double dEu, double dEl, double dEu_rate,
                                 double dEl_rate, double dyd_dot, double dphi) {
        const double da = dEl + de1;
        const double db = dEu - de1;
        const double dz = da / a - db / bb;
        const double dmu1 = -da / (a * a) - db / (bb * bb);
        const double dmu2 = dEl_rate / a - El[1] * da / (a * a) - dEu_rate / bb + Eu[1] * db / (bb * bb);
        const double dPhi = 2.0 * mu1 * dmu1 * (yd_dot * yd_dot + phi * phi) +
                            mu1 * mu1 * (2.0 * yd_dot * dyd_dot + 2.0 * phi * dphi) +
                            2.0 * mu2 * dmu2;
        return -(dz * gain + z1 * theta_hat1 * dPhi) / mu1 + z1 * gain * dmu1 / (mu1 * mu1);
    };

    Alpha1Sensitivities s;
    s.d_x1 = directional(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, b.phi1_dx1);
    s.d_time = directional(-yd_dot, Eu[1], El[1], Eu[2], El[2], b.yd[2], 0.0);
    s.d_theta = -z1 * Phi1 / mu1;
    s.delta = s.d_time + s.d_theta * theta_dot1;
    return s;
}

double phi2(const SignalBundle& b, const Alpha1Sensitivities& s) {
    const double mu1z1 = b.transform.mu1 * b.transform.z1;
    const double a = s.d_x1 * b.phi[0];
    const double c = s.d_x1 * b.x[1];
    return a * a + c * c + s.delta * s.delta + mu1z1 * mu1z1 + b.phi[1] * b.phi[1] + 1.0;
}

double control_v(double e2, double theta_hat2, double Phi2, double c2) {
    return -(c2 * e2 + theta_hat2 * e2 * Phi2);
}

LawOutput second_order_law(double t, std::span<const double> x,
                           std::span<const double> theta_hat, const Design& design) {
    const auto& g = design.gains;
    SignalBundle b = make_bundle(t, x, design, 2);
    const auto& tr = b.transform;

    LawOutput out;
    out.z1 = tr.z1;
    out.mu1 = tr.mu1;
    out.mu2 = tr.mu2;
    const double Phi1 = phi1(b);
    const double a1 = alpha1(tr.z1, tr.mu1, theta_hat[0], Phi1, g.c[0]);
    const double th1_dot = adaptation_rate(tr.z1, Phi1, theta_hat[0], g.r[0], g.sigma[0]);

    const Alpha1Sensitivities sens = alpha1_sensitivities(b, theta_hat[0], th1_dot, g.c[0]);
    const double Phi2 = phi2(b, sens);
    const double e2 = x[1] - a1;
    b.e.push_back(e2);

    out.alpha = {a1};
    out.v = control_v(e2, theta_hat[1], Phi2, g.c[1]);
    out.theta_dot = {th1_dot, adaptation_rate(e2, Phi2, theta_hat[1], g.r[1], g.sigma[1])};
    out.Phi = {Phi1, Phi2};
    out.e = b.e;
    return out;
}

// ---------------------------------------------------------------------------
// General recursion
// ---------------------------------------------------------------------------

namespace {

template <class S, int N>
struct StageValues {
    std::array<S, N> alpha{};  // alpha[N-1] holds v
    std::array<S, N> e{};
    std::array<S, N> Phi{};
    std::array<S, N> theta_dot{};
    S z1{};
    S mu1{};
    S mu2{};
};

// Variables are laid out as [x_1..x_N, t, theta_1..theta_N].
template <int N>
struct GeneralLaw {
    static constexpr std::size_t K = 2 * N + 1;

    template <int I, class S>
    static StageValues<S, N> eval(const std::array<S, N>& x, const S& t,
                                  const std::array<S, N>& th, const Design& d) {
        const auto& g = d.gains;
        if constexpr (I == 1) {
            const auto env = spp::envelope(t, d.perf, d.aux);
            const S e1 = x[0] - d.reference.value(t);
            const S yd_dot = d.reference.rate(t);
            const double ev = value_of(e1);
            const double lower = value_of(env.lower);
            const double upper = value_of(env.upper);
            if (!(-lower < ev && ev < upper)) throw OutOfEnvelope(value_of(t), ev, -lower, upper);
            const auto tr = spp::transform_t(e1, env);
            if (!(value_of(tr.mu1) > 0.0)) throw DegenerateTransform("mu1 must be positive");
            const S phi = d.envelope.template phi<S>(0, x);
            const S Phi = tr.mu1 * tr.mu1 * (yd_dot * yd_dot + phi * phi) + tr.mu2 * tr.mu2;

            StageValues<S, N> out;
            out.z1 = tr.z1;
            out.mu1 = tr.mu1;
            out.mu2 = tr.mu2;
            out.e[0] = e1;
            out.Phi[0] = Phi;
            out.alpha[0] = -(g.c[0] * tr.z1 + tr.z1 * th[0] * Phi) / tr.mu1;
            out.theta_dot[0] = g.r[0] * tr.z1 * tr.z1 * Phi - g.sigma[0] * th[0];
            return out;
        } else {
            using D = Dual<S, K>;
            std::array<D, N> xd;
            std::array<D, N> thd;
            for (int k = 0; k < N; ++k) {
                xd[k] = D::variable(x[k], k);
                thd[k] = D::variable(th[k], N + 1 + k);
            }
            const D td = D::variable(t, N);
            const StageValues<D, N> low = eval<I - 1, D>(xd, td, thd, d);

            StageValues<S, N> out;
            for (int k = 0; k < I - 1; ++k) {
                out.alpha[k] = low.alpha[k].v;
                out.e[k] = low.e[k].v;
                out.Phi[k] = low.Phi[k].v;
                out.theta_dot[k] = low.theta_dot[k].v;
            }
            out.z1 = low.z1.v;
            out.mu1 = low.mu1.v;
            out.mu2 = low.mu2.v;

            const D& prev = low.alpha[I - 2];
            S delta = prev.d[N];
            for (int k = 0; k < I - 1; ++k) delta = delta + prev.d[N + 1 + k] * out.theta_dot[k];

            S Phi = delta * delta;
            for (int k = 0; k < I - 1; ++k) {
                const S gk = prev.d[k];
                const S a = gk * d.envelope.template phi<S>(k, x);
                const S b = gk * x[k + 1];
                Phi = Phi + a * a + b * b;
            }
            if constexpr (I == 2) {
                Phi = Phi + out.mu1 * out.mu1 * out.z1 * out.z1;
            } else {
                Phi = Phi + out.e[I - 2] * out.e[I - 2];
            }
            const S phi = d.envelope.template phi<S>(I - 1, x);
            Phi = Phi + phi * phi;
            if constexpr (I == N) Phi = Phi + 1.0;

            const S ei = x[I - 1] - out.alpha[I - 2];
            out.e[I - 1] = ei;
            out.Phi[I - 1] = Phi;
            out.alpha[I - 1] = -(g.c[I - 1] * ei + th[I - 1] * ei * Phi);
            out.theta_dot[I - 1] = g.r[I - 1] * ei * ei * Phi - g.sigma[I - 1] * th[I - 1];
            return out;
        }
    }

    static std::array<double, N> to_array(std::span<const double> v) {
        std::array<double, N> a{};
        for (int k = 0; k < N; ++k) a[k] = v[k];
        return a;
    }

    static LawOutput law(double t, std::span<const double> x, std::span<const double> th,
                         const Design& d) {
        const auto r = eval<N, double>(to_array(x), t, to_array(th), d);
        LawOutput out;
        out.alpha.assign(r.alpha.begin(), r.alpha.end() - 1);
        out.v = r.alpha[N - 1];
        out.theta_dot.assign(r.theta_dot.begin(), r.theta_dot.end());
        out.Phi.assign(r.Phi.begin(), r.Phi.end());
        out.e.assign(r.e.begin(), r.e.end());
        out.z1 = r.z1;
        out.mu1 = r.mu1;
        out.mu2 = r.mu2;
        return out;
    }

    template <int I>
    static StagePartials partials_at(double t, std::span<const double> x,
                                     std::span<const double> th, const Design& d) {
        using D = Dual<double, K>;
        std::array<D, N> xd;
        std::array<D, N> thd;
        for (int k = 0; k < N; ++k) {
            xd[k] = D::variable(x[k], k);
            thd[k] = D::variable(th[k], N + 1 + k);
        }
        const auto low = eval<I, D>(xd, D::variable(t, N), thd, d);
        const D& a = low.alpha[I - 1];
        StagePartials p;
        p.d_x.resize(N);
        p.d_theta.resize(N);
        for (int k = 0; k < N; ++k) {
            p.d_x[k] = a.d[k];
            p.d_theta[k] = a.d[N + 1 + k];
        }
        p.d_time = a.d[N];
        p.delta = p.d_time;
        for (int k = 0; k < I; ++k) p.delta += p.d_theta[k] * low.theta_dot[k].v;
        return p;
    }

    static StagePartials partials(int stage, double t, std::span<const double> x,
                                  std::span<const double> th, const Design& d) {
        if (stage < 1 || stage >= N) throw UnsupportedOrder("stage must lie in [1, n-1]");
        StagePartials out;
        [&]<int... Is>(std::integer_sequence<int, Is...>) {
            ((stage == Is + 1 ? (out = partials_at<Is + 1>(t, x, th, d), 0) : 0), ...);
        }(std::make_integer_sequence<int, N - 1>{});
        return out;
    }
};

void check_sizes(std::span<const double> x, std::span<const double> theta_hat, const Design& design) {
    const int n = design.gains.n;
    if (static_cast<int>(x.size()) != n || static_cast<int>(theta_hat.size()) != n ||
        design.envelope.order() != n) {
        throw ConfigError("controller: state, estimate and envelope sizes must equal n");
    }
}

}  // namespace

LawOutput backstep_general(double t, std::span<const double> x,
                           std::span<const double> theta_hat, const Design& design) {
    check_sizes(x, theta_hat, design);
    switch (design.gains.n) {
        case 2: return GeneralLaw<2>::law(t, x, theta_hat, design);
        case 3: return GeneralLaw<3>::law(t, x, theta_hat, design);
        case 4: return GeneralLaw<4>::law(t, x, theta_hat, design);
        default:
            throw UnsupportedOrder("backstep_general supports 2 <= n <= " +
                                   std::to_string(kMaxGeneralOrder) + ", got n = " +
                                   std::to_string(design.gains.n));
    }
}

StagePartials general_partials(int stage, double t, std::span<const double> x,
                               std::span<const double> theta_hat, const Design& design) {
    check_sizes(x, theta_hat, design);
    switch (design.gains.n) {
        case 2: return GeneralLaw<2>::partials(stage, t, x, theta_hat, design);
        case 3: return GeneralLaw<3>::partials(stage, t, x, theta_hat, design);
        case 4: return GeneralLaw<4>::partials(stage, t, x, theta_hat, design);
        default: throw UnsupportedOrder("general_partials: unsupported order");
    }
}

}  // namespace cec::control
