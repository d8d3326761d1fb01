#pragma once

#include <optional>
#include <string>

#include "heis/exponents.hpp"
#include "heis/norms.hpp"
#include "heis/operators.hpp"
#include "heis/witness.hpp"

namespace heis {

// Everything a config file can set. Sections: [exponents], [quadrature],
// [norms], [family], [functions]; keys mirror the struct fields.
struct ExperimentConfig {
    ExponentConfig exponents;
    QuadratureConfig quadrature;
    NormEstimatorConfig norms;
    FamilySetup family;
    std::optional<std::string> f_text;
    std::optional<std::string> g_text;
};

// Keys present in the text override `base`. Unknown sections or keys,
// malformed numbers and duplicates throw std::invalid_argument.
ExperimentConfig parse_config(const std::string& text, const ExperimentConfig& base = {});
ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base = {});

// INI text that parses back to the same config.
std::string config_to_text(const ExperimentConfig& cfg);

}  // namespace heis
