#include "cec/codec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cec::codec {

namespace {

constexpr std::int64_t kMaxAlphabet = std::int64_t{1} << 24;

std::int64_t int_pow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > kMaxAlphabet) return kMaxAlphabet + 1;
        r *= base;
    }
    return r;
}

char digit_char(int d) { return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + d - 10); }

int char_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'z') return c - 'a' + 10;
    if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::int64_t CesConfig::alphabet_size() const { return int_pow(p, m); }
std::int64_t CesConfig::sc() const { return alphabet_size() / 2; }

void CesConfig::validate() const {
    if (p < 2 || p % 2 != 0) throw ConfigError("ces: base p must be an even integer >= 2");
    if (p > 36) throw ConfigError("ces: base p > 36 cannot be rendered");
    if (m < 1) throw ConfigError("ces: codeword length m must be >= 1");
    if (alphabet_size() > kMaxAlphabet) throw ConfigError("ces: p^m too large");
    const auto n = static_cast<std::size_t>(sc());
    if (omega.size() != n) {
        throw ConfigError("ces: omega table needs s_c = p^m/2 = " + std::to_string(n) +
                          " entries, got " + std::to_string(omega.size()));
    }
    if (levels.size() != n) {
        throw ConfigError("ces: levels table needs s_c = p^m/2 = " + std::to_string(n) +
                          " entries, got " + std::to_string(levels.size()));
    }
    if (levels.front() != 0.0) throw ConfigError("ces: levels must start at pi_0 = 0");
    for (std::size_t q = 0; q < n; ++q) {
        if (!(omega[q] > 0.0)) throw ConfigError("ces: every omega_q must be positive");
        if (q > 0 && !(levels[q] > levels[q - 1])) {
            throw ConfigError("ces: levels must be strictly increasing");
        }
    }
    double prev = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
        const double thr = threshold(static_cast<std::int64_t>(q), *this);
        if (!std::isfinite(thr)) throw ConfigError("ces: threshold omega_q p^q overflows");
        if (thr < prev) throw ConfigError("ces: thresholds omega_q p^q must be nondecreasing in q");
        prev = thr;
    }
}

CesConfig default_ces_config() {
    CesConfig c;
    c.p = 2;
    c.m = 3;
    c.omega = {0.3, 0.4, 0.5, 0.6};
    c.levels = {0.0, 5.0, 15.0, 30.0};
    return c;
}

std::string Codeword::str() const {
    std::string s;
    s.reserve(digits.size());
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) s.push_back(digit_char(*it));
    return s;
}

std::int64_t Codeword::value(int p) const {
    std::int64_t v = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) v = v * p + *it;
    return v;
}

Codeword parse_codeword(std::string_view text, const CesConfig& cfg) {
    if (text.size() != static_cast<std::size_t>(cfg.m)) {
        throw MalformedCodeword("codeword '" + std::string(text) + "' must have exactly " +
                                std::to_string(cfg.m) + " digits");
    }
    Codeword w;
    w.digits.resize(cfg.m);
    for (int j = 0; j < cfg.m; ++j) {
        const int d = char_digit(text[cfg.m - 1 - j]);
        if (d < 0 || d >= cfg.p) {
            throw MalformedCodeword("codeword '" + std::string(text) + "' has a digit outside base " +
                                    std::to_string(cfg.p));
        }
        w.digits[j] = d;
    }
    return w;
}

int level(double u_abs, const CesConfig& cfg) {
    // levels[0] == 0, so upper_bound never returns begin() for u_abs >= 0.
    auto it = std::upper_bound(cfg.levels.begin(), cfg.levels.end(), u_abs);
    if (it == cfg.levels.begin()) return 0;
    return static_cast<int>(std::distance(cfg.levels.begin(), it) - 1);
}

double threshold(std::int64_t q, const CesConfig& cfg) {
    double scale = 1.0;
    for (std::int64_t i = 0; i < q; ++i) scale *= cfg.p;
    return cfg.omega[static_cast<std::size_t>(q)] * scale;
}

bool trigger(double delta_v, double u, const CesConfig& cfg) {
    return std::abs(delta_v) >= threshold(level(std::abs(u), cfg), cfg);
}

Codeword encode(std::int64_t q, bool sign_positive, const CesConfig& cfg) {
    std::int64_t v = sign_positive ? q : q + cfg.sc();
    Codeword w;
    w.digits.resize(cfg.m);
    for (int j = 0; j < cfg.m; ++j) {
        w.digits[j] = static_cast<int>(v % cfg.p);
        v /= cfg.p;
    }
    return w;
}

Decoded interpret(const Codeword& w, const CesConfig& cfg) {
    if (w.digits.size() != static_cast<std::size_t>(cfg.m)) {
        throw MalformedCodeword("codeword length " + std::to_string(w.digits.size()) +
                                " != m = " + std::to_string(cfg.m));
    }
    for (int d : w.digits) {
        if (d < 0 || d >= cfg.p) throw MalformedCodeword("codeword digit outside [0, p-1]");
    }
    Decoded out;
    const std::int64_t v = w.value(cfg.p);
    out.positive = w.digits.back() < cfg.p / 2;
    out.beta = out.positive ? v : v - cfg.sc();
    out.increment = threshold(out.beta, cfg);
    return out;
}

double decode(const Codeword& w, DecoderState& state) {
    const Decoded d = interpret(w, state.config);
    state.last_v = d.positive ? state.last_v + d.increment : state.last_v - d.increment;
    return state.last_v;
}

double max_increment(const CesConfig& cfg) {
    double best = 0.0;
    for (std::int64_t q = 0; q < cfg.sc(); ++q) best = std::max(best, threshold(q, cfg));
    return best;
}

int bits_per_message(const CesConfig& cfg) {
    int bits_per_digit = 0;
    while ((1 << bits_per_digit) < cfg.p) ++bits_per_digit;
    return cfg.m * bits_per_digit;
}

void BaselineConfig::validate() const {
    if (!(delta_bar > 0.0 && delta_bar < 1.0)) throw ConfigError("baseline: need 0 < delta_bar < 1");
    if (!(d > 0.0)) throw ConfigError("baseline: need d > 0");
    if (!(fixed_delta > 0.0)) throw ConfigError("baseline: need fixed_delta > 0");
    if (!(switch_level >= 0.0)) throw ConfigError("baseline: need switch_level >= 0");
}

std::string to_string(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::fixed: return "fixed";
        case BaselineKind::relative: return "relative";
        case BaselineKind::switching: return "switching";
    }
    return "?";
}

BaselineKind baseline_kind_from_string(std::string_view name) {
    if (name == "fixed") return BaselineKind::fixed;
    if (name == "relative") return BaselineKind::relative;
    if (name == "switching") return BaselineKind::switching;
    throw ConfigError("unknown baseline strategy '" + std::string(name) + "'");
}

double baseline_threshold(double u, const BaselineConfig& cfg) {
    switch (cfg.kind) {
        case BaselineKind::fixed: return cfg.fixed_delta;
        case BaselineKind::relative: return cfg.delta_bar * std::abs(u) + cfg.d;
        case BaselineKind::switching:
            return std::abs(u) >= cfg.switch_level ? cfg.fixed_delta
                                                   : cfg.delta_bar * std::abs(u) + cfg.d;
    }
    return cfg.fixed_delta;
}

bool baseline_trigger(double delta_v, double u, const BaselineConfig& cfg) {
    return std::abs(delta_v) >= baseline_threshold(u, cfg);
}

}  // namespace cec::codec
