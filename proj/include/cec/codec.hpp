#pragma once

// Coded event-triggered scheme: level quantization of |u|, the trigger
// rule |dv| >= omega_q * p^q, sign-and-magnitude base-p codewords, and the
// actuator-side decoder. Also the relative / switching / fixed baseline
// trigger rules that transmit the raw control value.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cec/errors.hpp"

namespace cec::codec {

struct CesConfig {
    int p = 2;                   ///< number base, even
    int m = 3;                   ///< codeword length in digits
    std::vector<double> omega;   ///< omega_0 .. omega_{s_c-1}
    std::vector<double> levels;  ///< pi_0 .. pi_{s_c-1}; pi_{s_c} = +inf is implicit

    /// Number of magnitude levels, p^m / 2.
    std::int64_t sc() const;
    /// Total number of codewords, p^m.
    std::int64_t alphabet_size() const;
    void validate() const;
};

/// The configuration used in the benchmark scenarios (p = 2, m = 3).
CesConfig default_ces_config();

/// m base-p digits. digits[0] is s_1 (least significant), digits[m-1] is s_m.
struct Codeword {
    std::vector<int> digits;

    /// Rendered as s_m ... s_1 using 0-9 then a-z.
    std::string str() const;
    std::int64_t value(int p) const;

    friend bool operator==(const Codeword&, const Codeword&) = default;
};

/// Parses the rendered form; throws MalformedCodeword.
Codeword parse_codeword(std::string_view text, const CesConfig& cfg);

/// What a codeword means to the decoder.
struct Decoded {
    std::int64_t beta = 0;
    bool positive = true;
    double increment = 0.0;  ///< omega_beta * p^beta
};

/// Actuator side: the last applied control and the shared configuration.
struct DecoderState {
    double last_v = 0.0;
    CesConfig config;
};

/// Index q with u_abs in [pi_q, pi_{q+1}).
int level(double u_abs, const CesConfig& cfg);
/// omega_q * p^q.
double threshold(std::int64_t q, const CesConfig& cfg);
bool trigger(double delta_v, double u, const CesConfig& cfg);
Codeword encode(std::int64_t q, bool sign_positive, const CesConfig& cfg);
Decoded interpret(const Codeword& w, const CesConfig& cfg);
/// Applies one codeword: returns the new control and stores it in `state`.
double decode(const Codeword& w, DecoderState& state);
/// Largest single increment, max_q omega_q p^q.
double max_increment(const CesConfig& cfg);
int bits_per_message(const CesConfig& cfg);

/// Every baseline message carries the raw control as an 8-bit string.
inline constexpr int kBaselineBitsPerMessage = 8;

enum class BaselineKind { fixed, relative, switching };

struct BaselineConfig {
    BaselineKind kind = BaselineKind::relative;
    double delta_bar = 0.2;
    double d = 0.1;
    double switch_level = 10.0;  ///< D: above it the switching rule uses fixed_delta
    double fixed_delta = 0.5;

    void validate() const;
};

std::string to_string(BaselineKind kind);
BaselineKind baseline_kind_from_string(std::string_view name);

double baseline_threshold(double u, const BaselineConfig& cfg);
bool baseline_trigger(double delta_v, double u, const BaselineConfig& cfg);

}  // namespace cec::codec
