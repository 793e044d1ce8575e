#include "newsmarket/params.hpp"

#include "newsmarket/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace newsmarket {

namespace {

struct Field {
    const char* name;
    double ModelParams::*member;
};

constexpr Field kFields[] = {
    {"w_s", &ModelParams::w_s},       {"w_h", &ModelParams::w_h},
    {"beta1", &ModelParams::beta1},   {"beta2", &ModelParams::beta2},
    {"beta3", &ModelParams::beta3},   {"beta4", &ModelParams::beta4},
    {"gamma", &ModelParams::gamma},   {"delta", &ModelParams::delta},
    {"kappa", &ModelParams::kappa},   {"a1", &ModelParams::a1},
    {"a2", &ModelParams::a2},         {"a4", &ModelParams::a4},
    {"s_star", &ModelParams::s_star}, {"h_bar", &ModelParams::h_bar},
};

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "; ";
        out += p;
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ModelParams empirical_defaults() { return ModelParams{}; }

ModelParams theory_main_case() {
    ModelParams p;
    p.beta2 = 0.55;
    p.gamma = 56.0;
    p.delta = 0.03;
    p.kappa = 1.0;
    p.a4 = 0.0;
    p.s_star = 0.35;
    p.h_bar = 0.0;
    return p;
}

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::invalid_argument("invalid parameters: " + join(problems)), problems_(std::move(problems)) {}

ModelParams validate(const ModelParams& p) {
    std::vector<std::string> bad;
    for (const auto& f : kFields) {
        if (!std::isfinite(p.*(f.member))) bad.push_back(std::string(f.name) + " must be finite");
    }
    if (!bad.empty()) throw ValidationError(bad);

    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0)) bad.push_back(std::string(name) + " must be positive");
    };
    auto non_negative = [&](double v, const char* name) {
        if (!(v >= 0.0)) bad.push_back(std::string(name) + " must be non-negative");
    };
    positive(p.w_s, "w_s");
    positive(p.w_h, "w_h");
    non_negative(p.beta1, "beta1");
    non_negative(p.beta2, "beta2");
    non_negative(p.beta3, "beta3");
    non_negative(p.beta4, "beta4");
    non_negative(p.gamma, "gamma");
    non_negative(p.delta, "delta");
    non_negative(p.kappa, "kappa");
    positive(p.a1, "a1");
    positive(p.a2, "a2");
    if (!(std::abs(p.s_star) <= 1.0)) bad.push_back("s_star must lie in [-1, 1]");
    if (bad.empty()) {
        // Ratios of finite positives can still overflow.
        if (!std::isfinite(p.eta())) bad.push_back("w_h/w_s must be finite");
        if (!std::isfinite(p.gamma_bar())) bad.push_back("w_s*gamma must be finite");
    }
    if (!bad.empty()) throw ValidationError(bad);
    return p;
}

std::vector<KeyValueEntry> parse_key_values(std::istream& in, const std::string& source) {
    std::vector<KeyValueEntry> out;
    std::set<std::string> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        if (eq == std::string::npos) throw std::invalid_argument(where + "expected 'name = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string text = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument(where + "missing name");
        double value = 0.0;
        if (!parse_double(text, value)) throw std::invalid_argument(where + "'" + text + "' is not a number");
        if (!std::isfinite(value)) throw std::invalid_argument(where + key + " is not finite");
        if (!seen.insert(key).second) throw std::invalid_argument(where + "duplicate key '" + key + "'");
        out.push_back({key, value, line_no});
    }
    return out;
}

ModelParams parse_params(std::istream& in, const std::string& source) {
    ModelParams p;
    for (const auto& e : parse_key_values(in, source)) {
        bool known = false;
        for (const auto& f : kFields) {
            if (e.key == f.name) {
                p.*(f.member) = e.value;
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument(source + ":" + std::to_string(e.line) + ": unknown parameter '" + e.key + "'");
        }
    }
    return validate(p);
}

ModelParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parameter file '" + path + "'");
    return parse_params(in, path);
}

std::vector<std::pair<std::string, double>> to_key_values(const ModelParams& p) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& f : kFields) out.emplace_back(f.name, p.*(f.member));
    return out;
}

std::string describe(const ModelParams& p) {
    std::string out;
    for (const auto& [k, v] : to_key_values(p)) {
        if (!out.empty()) out += ' ';
        out += k + "=" + format_double(v);
    }
    return out;
}

}  // namespace newsmarket
