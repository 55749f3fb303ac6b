#pragma once

// Adaptive backstepping through the self-adjustable envelope.
//
// The second-order path (phi1 .. control_v) uses hand-derived closed
// forms. backstep_general() handles any n in [2, kMaxGeneralOrder] by
// differentiating each virtual control with nested dual numbers; for
// n = 2 both paths evaluate the same expressions.

#include <cmath>
#include <span>
#include <vector>

#include "cec/dual.hpp"
#include "cec/errors.hpp"
#include "cec/plant.hpp"
#include "cec/spp.hpp"

namespace cec::control {

struct ControllerParams {
    int n = 2;
    std::vector<double> c;
    std::vector<double> r;
    std::vector<double> sigma;

    void validate() const;
};

struct AdaptiveState {
    std::vector<double> theta_hat;
};

/// Desired output y_d(t) = offset + amplitude * sin(frequency * t).
struct Reference {
    double amplitude = 1.0;
    double frequency = 0.5;
    double offset = 0.0;

    template <class S>
    S value(const S& t) const {
        using std::sin;
        return offset + amplitude * sin(frequency * t);
    }
    template <class S>
    S rate(const S& t) const {
        using std::cos;
        return amplitude * frequency * cos(frequency * t);
    }
    /// [y_d, y_d', ..., y_d^(order)].
    spp::Stack stack(double t, int order) const;
};

/// Everything the designer knows: gains, performance shaping, bounds, reference.
struct Design {
    ControllerParams gains;
    spp::PerfParams perf;
    spp::AuxParams aux;
    plant::PlantEnvelope envelope;
    Reference reference;
};

struct SignalBundle {
    double t = 0.0;
    std::vector<double> x;
    spp::Stack yd;
    spp::BoundarySet boundary;
    spp::TransformOutput transform;
    std::vector<double> phi;  ///< phi_i(x) values
    double phi1_dx1 = 0.0;    ///< d phi_1 / d x_1
    std::vector<double> e;    ///< e_1, and e_2 once alpha_1 is known
};

/// Builds the step-1 bundle at (t, x); throws OutOfEnvelope outside -E_l < e1 < E_u.
SignalBundle make_bundle(double t, std::span<const double> x, const Design& design, int order = 2);

double phi1(const SignalBundle& b);
double alpha1(double z1, double mu1, double theta_hat1, double Phi1, double c1);
/// r z^2 Phi - sigma theta_hat; shared by every stage.
double adaptation_rate(double z, double Phi, double theta_hat, double r, double sigma);

struct Alpha1Sensitivities {
    double d_x1 = 0.0;     ///< d alpha1 / d x1
    double d_theta = 0.0;  ///< d alpha1 / d theta_hat1
    double d_time = 0.0;   ///< exogenous part: y_d, rho and eta channels
    double delta = 0.0;    ///< d_time + d_theta * theta_hat1'
};

/// Closed-form partials of alpha1. Needs second-order boundary and y_d stacks.
Alpha1Sensitivities alpha1_sensitivities(const SignalBundle& b, double theta_hat1,
                                         double theta_dot1, double c1);

double phi2(const SignalBundle& b, const Alpha1Sensitivities& s);
double control_v(double e2, double theta_hat2, double Phi2, double c2);

/// Output of one evaluation of the control law.
struct LawOutput {
    std::vector<double> alpha;      ///< alpha_1 .. alpha_{n-1}
    double v = 0.0;                 ///< raw (pre-codec) control
    std::vector<double> theta_dot;  ///< adaptation rates
    std::vector<double> Phi;        ///< Phi_1 .. Phi_n
    std::vector<double> e;          ///< e_1 .. e_n
    double z1 = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
};

/// Dedicated second-order law (closed-form sensitivities).
LawOutput second_order_law(double t, std::span<const double> x,
                           std::span<const double> theta_hat, const Design& design);

inline constexpr int kMaxGeneralOrder = 4;

/// Recursive law for any n in [2, kMaxGeneralOrder]; throws UnsupportedOrder otherwise.
LawOutput backstep_general(double t, std::span<const double> x,
                           std::span<const double> theta_hat, const Design& design);

/// Partials of alpha_i (1-based, i < n) produced by the general recursion.
struct StagePartials {
    std::vector<double> d_x;      ///< d alpha_i / d x_k
    double d_time = 0.0;          ///< exogenous part
    std::vector<double> d_theta;  ///< d alpha_i / d theta_hat_k
    double delta = 0.0;           ///< d_time + sum d_theta_k theta_hat_k'
};

StagePartials general_partials(int stage, double t, std::span<const double> x,
                               std::span<const double> theta_hat, const Design& design);

}  // namespace cec::control
