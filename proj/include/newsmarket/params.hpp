#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace newsmarket {

// All rates are per business day.
struct ModelParams {
    double w_s = 0.04;
    double w_h = 0.4;
    double beta1 = 1.1;
    double beta2 = 1.0;
    double beta3 = 0.0;
    double beta4 = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double kappa = 0.0;
    double a1 = 0.374;
    double a2 = 0.002;
    double a4 = 6.5;
    double s_star = 0.131;
    double h_bar = 0.017;

    double eta() const { return w_h / w_s; }
    double gamma_bar() const { return w_s * gamma; }
};

// Calibrated empirical model.
ModelParams empirical_defaults();

// Closed two-component model in its reference configuration:
// beta2 = 0.55, gamma = 56, delta = 0.03, kappa = 1, s* = 0.35.
ModelParams theory_main_case();

class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

// Returns the input unchanged or throws ValidationError naming every bad field.
ModelParams validate(const ModelParams& params);

struct KeyValueEntry {
    std::string key;
    double value;
    int line;
};

// `name = value` lines, `#` starts a comment. Values must be finite numbers.
// Duplicate keys are rejected.
std::vector<KeyValueEntry> parse_key_values(std::istream& in, const std::string& source);

ModelParams parse_params(std::istream& in, const std::string& source = "<stream>");
ModelParams load_params(const std::string& path);

std::vector<std::pair<std::string, double>> to_key_values(const ModelParams& params);
std::string describe(const ModelParams& params);

}  // namespace newsmarket
